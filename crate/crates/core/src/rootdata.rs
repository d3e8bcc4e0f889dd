//! Root data with a finite twisting group, and their basic invariants.
//!
//! `X = Z^n` is the character lattice. Roots and coroots are stored as rows;
//! the pairing is the dot product. `P` is the dual of the coroot lattice with
//! the basis dual to the simple coroots, so `β: X -> P` has the coroots as rows.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::abgrp::{AbHom, FgAbelianGroup};
use crate::error::{Error, Result};
use crate::exactalg::{hnf_basis, kernel_basis, IntMatrix, LinearSolver};
use crate::gammamod::{equivariant_cokernel, equivariant_kernel, FiniteGroup, GammaHom, GammaModule};
use crate::report::{Check, Report};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    roots: IntMatrix,
    coroots: IntMatrix,
}

impl RootDatum {
    pub fn new(rank: usize, roots: IntMatrix, coroots: IntMatrix) -> Result<Self> {
        let l = roots.rows();
        let roots = roots.reshape_empty(l, rank)?;
        let m = coroots.rows();
        let coroots = coroots.reshape_empty(m, rank)?;
        if coroots.rows() != l {
            return Err(Error::InvalidDatum(format!("{l} simple roots but {} simple coroots", coroots.rows())));
        }
        Ok(RootDatum { rank, roots, coroots })
    }

    pub fn torus(rank: usize) -> Self {
        RootDatum { rank, roots: IntMatrix::zeros(0, rank), coroots: IntMatrix::zeros(0, rank) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.roots.rows()
    }

    pub fn roots(&self) -> &IntMatrix {
        &self.roots
    }

    pub fn coroots(&self) -> &IntMatrix {
        &self.coroots
    }

    /// `C_ij = <α_i, α_j∨>`.
    pub fn cartan(&self) -> IntMatrix {
        self.roots.mul(&self.coroots.transpose())
    }

    pub fn direct_sum(parts: &[&RootDatum]) -> RootDatum {
        let roots = IntMatrix::block_diag(&parts.iter().map(|p| &p.roots).collect::<Vec<_>>());
        let coroots = IntMatrix::block_diag(&parts.iter().map(|p| &p.coroots).collect::<Vec<_>>());
        RootDatum { rank: parts.iter().map(|p| p.rank).sum(), roots, coroots }
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let c = self.cartan();
        let l = c.rows();
        let bad_diag: Vec<usize> = (0..l).filter(|&i| c.get(i, i) != &BigInt::from(2)).collect();
        r.push(Check::from_bool("pairing-diagonal-two", bad_diag.is_empty(), || {
            format!("<α_i, α_i∨> != 2 at i = {bad_diag:?}")
        }));
        r.push(finite_type_check(&c));
        r.push(Check::from_bool("simple-roots-independent", self.roots.rank() == l, || {
            format!("rank {} < {l}", self.roots.rank())
        }));
        r.push(Check::from_bool("simple-coroots-independent", self.coroots.rank() == l, || {
            format!("rank {} < {l}", self.coroots.rank())
        }));
        r
    }
}

/// Diagonal 2, off-diagonal `<= 0`, symmetric zero pattern, all principal
/// minors positive on each connected component.
fn finite_type_check(c: &IntMatrix) -> Check {
    let l = c.rows();
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            if c.get(i, j).is_positive() {
                return Check::fail("cartan-finite-type", format!("positive off-diagonal entry at ({i}, {j})"));
            }
            if c.get(i, j).is_zero() != c.get(j, i).is_zero() {
                return Check::fail("cartan-finite-type", format!("asymmetric zero pattern at ({i}, {j})"));
            }
        }
    }
    for comp in components(c) {
        let sub = c.select_rows(&comp).select_cols(&comp);
        let k = comp.len();
        let minors_ok = if k <= 12 {
            (1u32..(1 << k)).all(|mask| {
                let idx: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).collect();
                sub.select_rows(&idx).select_cols(&idx).det().map(|d| d.is_positive()).unwrap_or(false)
            })
        } else {
            // Sylvester on the symmetrization: leading minors suffice
            (1..=k).all(|m| {
                let idx: Vec<usize> = (0..m).collect();
                sub.select_rows(&idx).select_cols(&idx).det().map(|d| d.is_positive()).unwrap_or(false)
            })
        };
        if !minors_ok {
            return Check::fail("cartan-finite-type", format!("non-positive principal minor on nodes {comp:?}"));
        }
    }
    Check::pass("cartan-finite-type")
}

/// Connected components of the Dynkin graph, each sorted.
fn components(c: &IntMatrix) -> Vec<Vec<usize>> {
    let l = c.rows();
    let mut seen = vec![false; l];
    let mut out = Vec::new();
    for s in 0..l {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..l {
                if !seen[j] && !c.get(i, j).is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A root datum with a finite group acting on `X` by based automorphisms.
#[derive(Clone)]
pub struct ReductiveDatum {
    name: String,
    datum: RootDatum,
    gamma: Arc<FiniteGroup>,
    action: Vec<IntMatrix>,
}

impl fmt::Debug for ReductiveDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReductiveDatum({}, rank {}, |Γ| = {})", self.name, self.datum.rank, self.gamma.order())
    }
}

impl PartialEq for ReductiveDatum {
    fn eq(&self, other: &Self) -> bool {
        self.datum == other.datum && self.gamma == other.gamma && self.action == other.action
    }
}

impl ReductiveDatum {
    /// Shape checks only; [`validate`](Self::validate) covers the axioms.
    pub fn new(name: impl Into<String>, datum: RootDatum, gamma: Arc<FiniteGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != gamma.order() {
            return Err(Error::InvalidDatum(format!("{} action matrices for |Γ| = {}", action.len(), gamma.order())));
        }
        if action.iter().any(|a| a.rows() != datum.rank || a.cols() != datum.rank) {
            return Err(Error::InvalidDatum("action matrices must be rank × rank".into()));
        }
        Ok(ReductiveDatum { name: name.into(), datum, gamma, action })
    }

    pub fn split(name: impl Into<String>, datum: RootDatum) -> Self {
        let n = datum.rank;
        ReductiveDatum { name: name.into(), datum, gamma: Arc::new(FiniteGroup::trivial()), action: vec![IntMatrix::identity(n)] }
    }

    pub fn from_spec(spec: &str) -> Result<Self> {
        CatalogSpec::parse(spec)?.build()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.datum.semisimple_rank()
    }

    pub fn is_split(&self) -> bool {
        self.gamma.is_trivial()
    }

    /// `σ_g` with `a_g α_i = α_σ(i)`, or `None` if `a_g` does not permute the simple roots.
    pub fn root_permutation(&self, g: usize) -> Option<Vec<usize>> {
        let l = self.semisimple_rank();
        let roots_t = self.datum.roots.transpose();
        let moved = self.action[g].mul(&roots_t);
        let mut sigma = Vec::with_capacity(l);
        for i in 0..l {
            let col = moved.column(i);
            sigma.push((0..l).find(|&j| self.datum.roots.row(j) == col.as_slice())?);
        }
        let mut seen = sigma.clone();
        seen.sort_unstable();
        seen.dedup();
        (seen.len() == l).then_some(sigma)
    }

    pub fn validate(&self) -> Report {
        let mut r = self.datum.validate();
        let x = GammaModule::new(self.gamma.clone(), FgAbelianGroup::free(self.rank()), self.action.clone());
        r.push(Check::from_bool("action-group-law", x.is_ok(), || x.as_ref().unwrap_err().to_string()));
        let perms: Vec<Option<Vec<usize>>> = self.gamma.elements().map(|g| self.root_permutation(g)).collect();
        let bad: Vec<usize> = perms.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(g, _)| g).collect();
        r.push(Check::from_bool("action-permutes-simple-roots", bad.is_empty(), || {
            format!("elements {bad:?} do not permute the simple roots")
        }));
        let mut coroot_bad = vec![];
        for (g, p) in perms.iter().enumerate() {
            if let Some(sigma) = p {
                let at = self.action[g].transpose();
                for (i, &s) in sigma.iter().enumerate() {
                    if at.mul_vec(self.datum.coroots.row(s)) != self.datum.coroots.row(i) {
                        coroot_bad.push((g, i));
                    }
                }
            }
        }
        r.push(Check::from_bool("action-compatible-with-coroots", coroot_bad.is_empty(), || {
            format!("(element, index) pairs {coroot_bad:?}")
        }));
        r
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        let first = r.failures().next().cloned();
        match first {
            None => Ok(()),
            Some(c) => Err(Error::InvalidDatum(format!(
                "{}: {} ({})",
                self.name,
                c.name,
                c.witness.clone().unwrap_or_default()
            ))),
        }
    }

    /// `X` as a Γ-module.
    pub fn x_module(&self) -> GammaModule {
        GammaModule::new(self.gamma.clone(), FgAbelianGroup::free(self.rank()), self.action.clone())
            .expect("validated action")
    }

    /// `P` with Γ permuting the fundamental-weight basis.
    pub fn p_module(&self) -> Result<GammaModule> {
        let l = self.semisimple_rank();
        let mut act = Vec::with_capacity(self.gamma.order());
        for g in self.gamma.elements() {
            let sigma = self
                .root_permutation(g)
                .ok_or_else(|| Error::InvalidDatum(format!("element {g} does not permute the simple roots")))?;
            let mut m = IntMatrix::zeros(l, l);
            for (i, &s) in sigma.iter().enumerate() {
                m.set(s, i, BigInt::one());
            }
            act.push(m);
        }
        GammaModule::new(self.gamma.clone(), FgAbelianGroup::free(l), act)
    }

    /// `X∨` with the contragredient action.
    pub fn cocharacter_module(&self) -> GammaModule {
        let act = self.gamma.elements().map(|g| self.action[self.gamma.inverse(g)].transpose()).collect();
        GammaModule::new(self.gamma.clone(), FgAbelianGroup::free(self.rank()), act).expect("validated action")
    }

    /// `β(χ) = (<χ, α_i∨>)_i`.
    pub fn pairing_map(&self) -> Result<GammaHom> {
        self.ensure_valid()?;
        GammaHom::new(self.x_module(), self.p_module()?, self.datum.coroots.clone())
    }

    /// `ker β`: the characters of the group.
    pub fn character_group(&self) -> Result<GammaModule> {
        Ok(equivariant_kernel(&self.pairing_map()?)?.0)
    }

    pub fn character_inclusion(&self) -> Result<GammaHom> {
        Ok(equivariant_kernel(&self.pairing_map()?)?.1)
    }

    /// `coker β`; this is the Picard group.
    pub fn mu_dual(&self) -> Result<GammaModule> {
        Ok(equivariant_cokernel(&self.pairing_map()?)?.0)
    }

    /// `X∨ / ZΦ∨`.
    pub fn pi1(&self) -> Result<GammaModule> {
        self.ensure_valid()?;
        let x = self.cocharacter_module();
        let incl = GammaHom::new(self.coroot_lattice()?, x, self.datum.coroots.transpose())?;
        Ok(equivariant_cokernel(&incl)?.0)
    }

    /// `ZΦ∨` on the simple coroots; the contragredient action permutes them like the roots.
    fn coroot_lattice(&self) -> Result<GammaModule> {
        self.p_module()
    }

    /// The saturation of the root lattice, as rows.
    pub fn saturated_root_lattice(&self) -> IntMatrix {
        let orth = kernel_basis(&self.datum.roots);
        kernel_basis(&orth)
    }

    /// `X -> X / sat(ZΦ)` onto a free presentation.
    pub fn radical_projection(&self) -> Result<GammaHom> {
        self.ensure_valid()?;
        let sat = self.saturated_root_lattice();
        let q = FgAbelianGroup::new(self.rank(), sat)?;
        let s = q.simplify();
        let act = self
            .gamma
            .elements()
            .map(|g| s.to.matrix().mul(&self.action[g]).mul(s.from.matrix()))
            .collect();
        let target = GammaModule::new(self.gamma.clone(), s.group.clone(), act)?;
        GammaHom::new(self.x_module(), target, s.to.matrix().clone())
    }

    pub fn radical_characters(&self) -> Result<GammaModule> {
        Ok(self.radical_projection()?.target().clone())
    }
}

/// Weight-lattice choice for a simple factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lattice {
    SimplyConnected,
    Adjoint,
    /// Rows are a basis in fundamental-weight coordinates.
    Basis(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Simple { kind: char, rank: usize, lattice: Lattice },
    /// The standard `Z^n` datum.
    Gl(usize),
    Torus(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    /// Order-two diagram symmetry.
    Flip,
    /// Order-three symmetry of `D4`.
    Triality,
}

/// A parsed group spec: factors, central torus, optional twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogSpec {
    pub name: String,
    pub factors: Vec<Factor>,
    pub twist: Option<Twist>,
}

fn spec_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::GroupSpec { spec: spec.to_string(), reason: reason.into() }
}

impl CatalogSpec {
    /// `SL(3)`, `GL(2)`, `PGL(4)`, `Sp(4)`, `PSp(4)`, `SO(5)`, `Spin(5)`, `SO(8)`,
    /// `Spin(8)`, `PSO(8)`, `G2`, `F4`, `E8`, `E6sc`, `E7ad`, `B3ad`, `T(2)`,
    /// products with `*`, and a twist suffix ` xΓ:flip` / ` xG:triality`.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        let (body, twist) = match trimmed.find(" x") {
            Some(pos) => {
                let suffix = trimmed[pos + 2..].trim();
                let t = suffix
                    .strip_prefix("Γ:")
                    .or_else(|| suffix.strip_prefix("G:"))
                    .ok_or_else(|| spec_err(spec, "twist suffix must look like xΓ:flip"))?;
                let twist = match t {
                    "flip" => Twist::Flip,
                    "triality" => Twist::Triality,
                    other => return Err(spec_err(spec, format!("unknown twist {other:?}"))),
                };
                (&trimmed[..pos], Some(twist))
            }
            None => (trimmed, None),
        };
        let factors = body
            .split('*')
            .map(|f| parse_factor(spec, f.trim()))
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(spec_err(spec, "empty spec"));
        }
        if twist.is_some() && factors.len() != 1 {
            return Err(spec_err(spec, "twists apply to a single factor"));
        }
        Ok(CatalogSpec { name: trimmed.to_string(), factors, twist })
    }

    pub fn build(&self) -> Result<ReductiveDatum> {
        let mut parts = Vec::new();
        for f in &self.factors {
            parts.push(factor_datum(&self.name, f)?);
        }
        let datum = RootDatum::direct_sum(&parts.iter().map(|(d, _)| d).collect::<Vec<_>>());
        let d = match self.twist {
            None => ReductiveDatum::split(self.name.clone(), datum),
            Some(t) => {
                let (gamma, gen) = twist_action(&self.name, &self.factors[0], t)?;
                let n = datum.rank;
                let mut action = vec![IntMatrix::identity(n)];
                for k in 1..gamma.order() {
                    action.push(gen.mul(&action[k - 1]));
                }
                ReductiveDatum::new(self.name.clone(), datum, Arc::new(gamma), action)?
            }
        };
        d.ensure_valid()?;
        Ok(d)
    }
}

fn parse_factor(spec: &str, f: &str) -> Result<Factor> {
    let num = |inner: &str| -> Result<usize> {
        inner.parse::<usize>().map_err(|_| spec_err(spec, format!("bad number in {f:?}")))
    };
    if let Some(open) = f.find('(') {
        let close = f.strip_suffix(')').ok_or_else(|| spec_err(spec, format!("missing ')' in {f:?}")))?;
        let n = num(&close[open + 1..])?;
        let head = &f[..open];
        let simple = |kind: char, rank: usize, lattice: Lattice| -> Result<Factor> {
            if rank == 0 {
                return Err(spec_err(spec, format!("{f} has rank zero")));
            }
            Ok(Factor::Simple { kind, rank, lattice })
        };
        let even = |n: usize| -> Result<usize> {
            if n % 2 == 0 {
                Ok(n / 2)
            } else {
                Err(spec_err(spec, format!("{f} needs an even argument")))
            }
        };
        let odd = |n: usize| -> Result<usize> {
            if n % 2 == 1 {
                Ok(n / 2)
            } else {
                Err(spec_err(spec, format!("{f} needs an odd argument")))
            }
        };
        return match head {
            "SL" => simple('A', n.saturating_sub(1), Lattice::SimplyConnected),
            "PGL" => simple('A', n.saturating_sub(1), Lattice::Adjoint),
            "GL" if n >= 1 => Ok(Factor::Gl(n)),
            "Sp" => simple('C', even(n)?, Lattice::SimplyConnected),
            "PSp" => simple('C', even(n)?, Lattice::Adjoint),
            "SO" if n % 2 == 1 => simple('B', odd(n)?, Lattice::Adjoint),
            "SO" => {
                let r = even(n)?;
                if r < 3 {
                    return Err(spec_err(spec, "SO(2n) needs n >= 3"));
                }
                Ok(Factor::Simple { kind: 'D', rank: r, lattice: Lattice::Basis(so_even_lattice(r)?) })
            }
            "Spin" if n % 2 == 1 => simple('B', odd(n)?, Lattice::SimplyConnected),
            "Spin" => simple('D', even(n)?, Lattice::SimplyConnected),
            "PSO" => simple('D', even(n)?, Lattice::Adjoint),
            "T" => Ok(Factor::Torus(n)),
            _ => Err(spec_err(spec, format!("unknown group {head:?}"))),
        };
    }
    let mut chars = f.chars();
    let kind = chars.next().ok_or_else(|| spec_err(spec, "empty factor"))?;
    if !('A'..='G').contains(&kind) {
        return Err(spec_err(spec, format!("unknown factor {f:?}")));
    }
    let rest: String = chars.collect();
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    let suffix = &rest[digits.len()..];
    let rank = num(&digits)?;
    let lattice = match suffix {
        "" | "sc" => Lattice::SimplyConnected,
        "ad" => Lattice::Adjoint,
        other => return Err(spec_err(spec, format!("unknown isogeny suffix {other:?}"))),
    };
    cartan_matrix(kind, rank).map_err(|e| spec_err(spec, e.to_string()))?;
    Ok(Factor::Simple { kind, rank, lattice })
}

/// `Q + Zϖ_1` for `D_r`.
fn so_even_lattice(r: usize) -> Result<IntMatrix> {
    let c = cartan_matrix('D', r)?;
    let mut e1 = IntMatrix::zeros(1, r);
    e1.set(0, 0, BigInt::one());
    Ok(hnf_basis(&c.vstack(&e1)))
}

/// Cartan matrix `C_ij = <α_i, α_j∨>` in Bourbaki numbering.
pub fn cartan_matrix(kind: char, rank: usize) -> Result<IntMatrix> {
    let bad = || Error::InvalidDatum(format!("no root system {kind}{rank}"));
    let n = rank;
    let valid = match kind {
        'A' => n >= 1,
        'B' => n >= 2,
        'C' => n >= 2,
        'D' => n >= 3,
        'E' => (6..=8).contains(&n),
        'F' => n == 4,
        'G' => n == 2,
        _ => false,
    };
    if !valid {
        return Err(bad());
    }
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..n {
        c.set(i, i, BigInt::from(2));
    }
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c.set(i, j, BigInt::from(cij));
        c.set(j, i, BigInt::from(cji));
    };
    match kind {
        'A' => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        'B' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        'C' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        'D' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        'E' => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        'F' => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        'G' => link(0, 1, -1, -3),
        _ => unreachable!(),
    }
    Ok(c)
}

/// All irreducible types up to the given rank, without duplicates.
pub fn irreducible_types(max_rank: usize) -> Vec<(char, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push(('A', n));
    }
    for n in 2..=max_rank {
        out.push(('B', n));
    }
    for n in 3..=max_rank {
        out.push(('C', n));
    }
    for n in 4..=max_rank {
        out.push(('D', n));
    }
    for (k, n) in [('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)] {
        if n <= max_rank {
            out.push((k, n));
        }
    }
    out
}

/// `x B⁻¹` for each row `x` of `m`, when integral.
fn right_divide(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let solver = LinearSolver::new(&b.transpose());
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        rows.push(solver.solve(m.row(r)).ok()??);
    }
    IntMatrix::from_bigint_rows(rows, b.rows()).ok()
}

fn factor_datum(spec: &str, f: &Factor) -> Result<(RootDatum, Option<IntMatrix>)> {
    match f {
        Factor::Torus(n) => Ok((RootDatum::torus(*n), None)),
        Factor::Gl(n) => {
            let n = *n;
            let mut roots = IntMatrix::zeros(n - 1, n);
            for i in 0..n - 1 {
                roots.set(i, i, BigInt::one());
                roots.set(i, i + 1, -BigInt::one());
            }
            Ok((RootDatum::new(n, roots.clone(), roots)?, None))
        }
        Factor::Simple { kind, rank, lattice } => {
            let c = cartan_matrix(*kind, *rank)?;
            let l = *rank;
            let basis = match lattice {
                Lattice::SimplyConnected => IntMatrix::identity(l),
                Lattice::Adjoint => c.clone(),
                Lattice::Basis(b) => b.clone(),
            };
            if basis.rows() != l || basis.cols() != l || basis.det()?.is_zero() {
                return Err(spec_err(spec, "lattice basis must be square and nonsingular"));
            }
            // Q ⊆ L: every root is an integral combination of the basis
            let roots = right_divide(&c, &basis)
                .ok_or_else(|| spec_err(spec, "lattice does not contain the root lattice"))?;
            let coroots = basis.transpose();
            Ok((RootDatum::new(l, roots, coroots)?, Some(basis)))
        }
    }
}

fn permutation_in_weights(sigma: &[usize]) -> IntMatrix {
    // ϖ_i -> ϖ_σ(i) on row vectors
    let l = sigma.len();
    let mut m = IntMatrix::zeros(l, l);
    for (i, &s) in sigma.iter().enumerate() {
        m.set(i, s, BigInt::one());
    }
    m
}

fn twist_action(spec: &str, f: &Factor, t: Twist) -> Result<(FiniteGroup, IntMatrix)> {
    match (f, t) {
        (Factor::Gl(n), Twist::Flip) => {
            let n = *n;
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                m.set(n - 1 - i, i, -BigInt::one());
            }
            Ok((FiniteGroup::cyclic(2), m))
        }
        (Factor::Simple { kind, rank, lattice }, _) => {
            let l = *rank;
            let sigma: Vec<usize> = match (kind, t) {
                ('A', Twist::Flip) if l >= 2 => (0..l).rev().collect(),
                ('D', Twist::Flip) => {
                    let mut s: Vec<usize> = (0..l).collect();
                    s.swap(l - 2, l - 1);
                    s
                }
                ('D', Twist::Triality) if l == 4 => vec![2, 1, 3, 0],
                ('E', Twist::Flip) if l == 6 => vec![5, 1, 4, 3, 2, 0],
                _ => return Err(spec_err(spec, format!("no {t:?} symmetry for {kind}{l}"))),
            };
            let order = if t == Twist::Triality { 3 } else { 2 };
            let c = cartan_matrix(*kind, l)?;
            let basis = match lattice {
                Lattice::SimplyConnected => IntMatrix::identity(l),
                Lattice::Adjoint => c,
                Lattice::Basis(b) => b.clone(),
            };
            let moved = basis.mul(&permutation_in_weights(&sigma));
            let a = right_divide(&moved, &basis)
                .ok_or_else(|| spec_err(spec, "the symmetry does not preserve the lattice"))?;
            Ok((FiniteGroup::cyclic(order), a.transpose()))
        }
        _ => Err(spec_err(spec, format!("no {t:?} twist for this factor"))),
    }
}

/// `|coker|` of the plain pairing map, or `None` if infinite.
pub fn mu_order(d: &ReductiveDatum) -> Result<Option<BigInt>> {
    Ok(d.mu_dual()?.group().order())
}

/// The plain hom `X -> P` of a split datum.
pub fn plain_pairing(d: &RootDatum) -> AbHom {
    AbHom::new_unchecked(FgAbelianGroup::free(d.rank), FgAbelianGroup::free(d.semisimple_rank()), d.coroots.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::{is_exact_at, Invariants};

    fn inv(m: &GammaModule) -> Invariants {
        m.invariants().clone()
    }

    fn z(n: usize) -> Invariants {
        Invariants::new(n, &[])
    }

    #[test]
    fn cartan_determinants() {
        let expect = [('A', 1, 2), ('A', 4, 5), ('B', 3, 2), ('C', 4, 2), ('D', 4, 4), ('D', 5, 4), ('E', 6, 3), ('E', 7, 2), ('E', 8, 1), ('F', 4, 1), ('G', 2, 1)];
        for (k, n, d) in expect {
            assert_eq!(cartan_matrix(k, n).unwrap().det().unwrap(), BigInt::from(d), "{k}{n}");
        }
        assert!(cartan_matrix('E', 9).is_err());
    }

    #[test]
    fn catalog_examples_validate() {
        for s in ["SL(2)", "GL(3)", "Sp(4)", "SO(5)", "SO(8)", "Spin(8)", "G2", "E6sc", "E7ad", "T(2)", "SL(2)*T(1)"] {
            let d = ReductiveDatum::from_spec(s).unwrap();
            assert!(d.validate().all_pass(), "{s}: {}", d.validate());
        }
    }

    #[test]
    fn bad_pairing_rejected() {
        let rd = RootDatum::new(1, IntMatrix::from_rows(&[[3]]), IntMatrix::from_rows(&[[1]])).unwrap();
        let r = rd.validate();
        assert!(!r.get("pairing-diagonal-two").unwrap().pass);
        let rd = RootDatum::new(2, IntMatrix::from_rows(&[[2, 1], [1, 2]]), IntMatrix::identity(2)).unwrap();
        assert!(!rd.validate().get("cartan-finite-type").unwrap().pass);
        // affine A1: minors 2, 2, 0
        let rd = RootDatum::new(2, IntMatrix::from_rows(&[[2, -2], [-2, 2]]), IntMatrix::identity(2)).unwrap();
        assert!(!rd.validate().get("cartan-finite-type").unwrap().pass);
    }

    #[test]
    fn flip_on_a2_is_valid() {
        for s in ["SL(3) xΓ:flip", "PGL(3) xG:flip", "GL(3) xΓ:flip"] {
            let d = ReductiveDatum::from_spec(s).unwrap();
            assert_eq!(d.gamma().order(), 2);
            assert_eq!(d.root_permutation(1).unwrap(), vec![1, 0], "{s}");
        }
        let e6 = ReductiveDatum::from_spec("E6sc xΓ:flip").unwrap();
        assert_eq!(e6.root_permutation(1).unwrap(), vec![5, 1, 4, 3, 2, 0]);
        assert!(ReductiveDatum::from_spec("Spin(8) xΓ:triality").is_ok());
        assert!(ReductiveDatum::from_spec("PSO(8) xΓ:triality").is_ok());
        // ϖ1 is not triality-stable
        assert!(ReductiveDatum::from_spec("SO(8) xΓ:triality").is_err());
        assert!(ReductiveDatum::from_spec("G2 xΓ:flip").is_err());
    }

    #[test]
    fn pairing_examples() {
        let t = ReductiveDatum::from_spec("T(2)").unwrap();
        assert_eq!(t.pairing_map().unwrap().matrix().rows(), 0);
        let gl2 = ReductiveDatum::from_spec("GL(2)").unwrap();
        assert_eq!(gl2.pairing_map().unwrap().matrix(), &IntMatrix::from_rows(&[[1, -1]]));
        let pgl2 = ReductiveDatum::from_spec("PGL(2)").unwrap();
        assert_eq!(pgl2.pairing_map().unwrap().matrix(), &IntMatrix::from_rows(&[[2]]));
    }

    #[test]
    fn basic_invariants() {
        let get = |s: &str| ReductiveDatum::from_spec(s).unwrap();
        assert!(get("SL(2)").character_group().unwrap().is_trivial());
        assert_eq!(inv(&get("GL(2)").character_group().unwrap()), z(1));
        let gl2_det = get("GL(2)").character_inclusion().unwrap();
        assert_eq!(gl2_det.matrix().column(0).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::one(); 2]);
        assert_eq!(inv(&get("T(3)").character_group().unwrap()), z(3));
        for n in 2..=5 {
            assert!(get(&format!("SL({n})")).mu_dual().unwrap().is_trivial());
            assert_eq!(inv(&get(&format!("PGL({n})")).mu_dual().unwrap()), Invariants::new(0, &[n as i64]));
            assert!(get(&format!("SL({n})")).pi1().unwrap().is_trivial());
            assert_eq!(inv(&get(&format!("GL({n})")).pi1().unwrap()), z(1));
        }
        assert_eq!(inv(&get("SO(5)").mu_dual().unwrap()), Invariants::new(0, &[2]));
        assert_eq!(inv(&get("PGL(2)").pi1().unwrap()), Invariants::new(0, &[2]));
        assert!(get("SL(3)").radical_characters().unwrap().is_trivial());
        assert_eq!(inv(&get("GL(4)").radical_characters().unwrap()), z(1));
        assert_eq!(inv(&get("T(2)").radical_characters().unwrap()), z(2));
        // SO(2n) has centre Z/2 in both directions
        assert_eq!(inv(&get("SO(8)").mu_dual().unwrap()), Invariants::new(0, &[2]));
        assert_eq!(inv(&get("SO(8)").pi1().unwrap()), Invariants::new(0, &[2]));
    }

    #[test]
    fn four_term_sequence_on_catalog_examples() {
        for s in ["GL(3)", "PGL(4)", "SO(8)", "E6sc xΓ:flip", "GL(3) xΓ:flip", "Sp(4)*T(2)"] {
            let d = ReductiveDatum::from_spec(s).unwrap();
            let beta = d.pairing_map().unwrap();
            let (_, ker) = beta.kernel().unwrap();
            let (_, cok) = beta.cokernel().unwrap();
            assert!(is_exact_at(ker.hom(), beta.hom()).unwrap(), "{s}");
            assert!(is_exact_at(beta.hom(), cok.hom()).unwrap(), "{s}");
        }
    }

    #[test]
    fn twisted_character_lattices() {
        // GL(3) with the flip: det is sent to det^-1, so the characters are the sign module
        let d = ReductiveDatum::from_spec("GL(3) xΓ:flip").unwrap();
        let x0 = d.character_group().unwrap();
        assert_eq!(inv(&x0), z(1));
        assert!(x0.fixed_points().unwrap().0.is_trivial());
        // PGL(3) with the flip acts by -1 on Z/3
        let mu = ReductiveDatum::from_spec("PGL(3) xΓ:flip").unwrap().mu_dual().unwrap();
        assert_eq!(inv(&mu), Invariants::new(0, &[3]));
        assert!(mu.fixed_points().unwrap().0.is_trivial());
    }

    #[test]
    fn spec_errors() {
        for s in ["XYZ(3)", "SL(x)", "Sp(3)", "E9", "A2zz", "SL(3) xΓ:rotate", "SL(2)*SL(2) xΓ:flip", ""] {
            assert!(matches!(ReductiveDatum::from_spec(s), Err(Error::GroupSpec { .. }) | Err(Error::InvalidDatum(_))), "{s}");
        }
    }
}
