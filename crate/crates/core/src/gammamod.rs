//! Modules over a finite group given by its multiplication table, and their
//! cohomology through the inhomogeneous bar complex.
//!
//! A finite group here stands in for a finite Galois quotient; a module over
//! it is the lattice-level picture of a twisted constant group scheme.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::abgrp::{self, AbHom, FgAbelianGroup, Invariants};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order())
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroupTable("empty table".into()));
        }
        if let Some(r) = table.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidGroupTable(format!("row {r} has the wrong length")));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroupTable("entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroupTable(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverses })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(table).expect("cyclic table")
    }

    /// Dihedral group of order `2n`; element `s*n + a` is `r^a s^s`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let enc = |a: usize, s: usize| s * n + a;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for s1 in 0..2 {
            for a1 in 0..n {
                for s2 in 0..2 {
                    for a2 in 0..n {
                        // r^a1 s^s1 r^a2 s^s2 = r^(a1 ± a2) s^(s1+s2)
                        let a = if s1 == 0 { (a1 + a2) % n } else { (a1 + n - a2) % n };
                        table[enc(a1, s1)][enc(a2, s2)] = enc(a, (s1 + s2) % 2);
                    }
                }
            }
        }
        Self::new(table).expect("dihedral table")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // unit u in {1,i,j,k} as 0..4, sign bit; index = 4*sign + u
        let mul_units = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign, unit)
            match (a, b) {
                (0, x) | (x, 0) => (0, x),
                (x, y) if x == y => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (s, u) = mul_units(a % 4, b % 4);
                let sign = (a / 4 + b / 4 + s) % 2;
                table[a][b] = 4 * sign + u;
            }
        }
        Self::new(table).expect("quaternion table")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (n, m) = (a.order(), b.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for x in 0..n * m {
            for y in 0..n * m {
                table[x][y] = a.mul(x / m, y / m) * m + b.mul(x % m, y % m);
            }
        }
        Self::new(table).expect("product table")
    }

    /// One representative of each isomorphism class of order at most 8.
    pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
        let c2 = Self::cyclic(2);
        vec![
            ("C1", Self::cyclic(1)),
            ("C2", Self::cyclic(2)),
            ("C3", Self::cyclic(3)),
            ("C4", Self::cyclic(4)),
            ("C2xC2", Self::direct_product(&c2, &c2)),
            ("C5", Self::cyclic(5)),
            ("C6", Self::cyclic(6)),
            ("S3", Self::dihedral(3)),
            ("C7", Self::cyclic(7)),
            ("C8", Self::cyclic(8)),
            ("C4xC2", Self::direct_product(&Self::cyclic(4), &c2)),
            ("C2xC2xC2", Self::direct_product(&Self::direct_product(&c2, &c2), &c2)),
            ("D4", Self::dihedral(4)),
            ("Q8", Self::quaternion()),
        ]
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }
}

/// A finitely generated abelian group with an action of a finite group,
/// stored as one ambient matrix per group element.
#[derive(Clone)]
pub struct GammaModule {
    gamma: Arc<FiniteGroup>,
    group: FgAbelianGroup,
    action: Vec<IntMatrix>,
}

impl fmt::Debug for GammaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaModule({:?} over order {})", self.group, self.gamma.order())
    }
}

impl PartialEq for GammaModule {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma
            && self.group == other.group
            && self
                .gamma
                .elements()
                .all(|g| self.action_hom(g).equals(&other.action_hom(g)))
    }
}

impl GammaModule {
    pub fn new(gamma: Arc<FiniteGroup>, group: FgAbelianGroup, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != gamma.order() {
            return Err(Error::InvalidAction(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                gamma.order()
            )));
        }
        let n = group.ambient_rank();
        let mut homs = Vec::with_capacity(action.len());
        let mut fixed = Vec::with_capacity(action.len());
        for (g, a) in action.into_iter().enumerate() {
            let h = AbHom::new(group.clone(), group.clone(), a)
                .map_err(|e| Error::InvalidAction(format!("element {g}: {e}")))?;
            fixed.push(h.matrix().clone());
            homs.push(h);
        }
        if !homs[gamma.identity()].equals(&AbHom::identity(&group)) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for a in gamma.elements() {
            for b in gamma.elements() {
                let ab = abgrp::compose(&homs[b], &homs[a])?;
                if !ab.equals(&homs[gamma.mul(a, b)]) {
                    return Err(Error::InvalidAction(format!("action({a})∘action({b}) != action({a}*{b})")));
                }
            }
        }
        debug_assert!(fixed.iter().all(|m| m.rows() == n));
        Ok(GammaModule { gamma, group, action: fixed })
    }

    pub fn trivial(gamma: Arc<FiniteGroup>, group: FgAbelianGroup) -> Self {
        let n = group.ambient_rank();
        let action = vec![IntMatrix::identity(n); gamma.order()];
        GammaModule { gamma, group, action }
    }

    pub fn zero(gamma: Arc<FiniteGroup>) -> Self {
        Self::trivial(gamma, FgAbelianGroup::zero())
    }

    /// `Z[Γ]^k` with left translation.
    pub fn induced(gamma: Arc<FiniteGroup>, k: usize) -> Self {
        let n = gamma.order();
        let action = gamma
            .elements()
            .map(|g| {
                let mut a = IntMatrix::zeros(k * n, k * n);
                for j in 0..k {
                    for h in 0..n {
                        a.set(j * n + gamma.mul(g, h), j * n + h, BigInt::one());
                    }
                }
                a
            })
            .collect();
        GammaModule { group: FgAbelianGroup::free(k * n), gamma, action }
    }

    pub fn direct_sum(parts: &[&GammaModule]) -> Result<Self> {
        let gamma = match parts.first() {
            Some(p) => p.gamma.clone(),
            None => return Err(Error::InvalidAction("empty direct sum has no group".into())),
        };
        if parts.iter().any(|p| p.gamma != gamma) {
            return Err(Error::InvalidAction("direct sum over different groups".into()));
        }
        let groups: Vec<&FgAbelianGroup> = parts.iter().map(|p| &p.group).collect();
        let group = FgAbelianGroup::direct_sum(&groups);
        let action = gamma
            .elements()
            .map(|g| IntMatrix::block_diag(&parts.iter().map(|p| &p.action[g]).collect::<Vec<_>>()))
            .collect();
        Ok(GammaModule { gamma, group, action })
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn invariants(&self) -> &Invariants {
        self.group.invariants()
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn action_matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn action_hom(&self, g: usize) -> AbHom {
        AbHom::new_unchecked(self.group.clone(), self.group.clone(), self.action[g].clone())
    }

    pub fn has_trivial_action(&self) -> bool {
        let id = AbHom::identity(&self.group);
        self.gamma.elements().all(|g| self.action_hom(g).equals(&id))
    }

    /// `{m : g·m = m for all g}` with its inclusion.
    pub fn fixed_points(&self) -> Result<(FgAbelianGroup, AbHom)> {
        let n = self.group.ambient_rank();
        let copies: Vec<&FgAbelianGroup> = self.gamma.elements().map(|_| &self.group).collect();
        let target = FgAbelianGroup::direct_sum(&copies);
        let mut m = IntMatrix::zeros(n * self.gamma.order(), n);
        let id = IntMatrix::identity(n);
        for g in self.gamma.elements() {
            m.set_block(g * n, 0, &self.action[g].sub(&id));
        }
        AbHom::new_unchecked(self.group.clone(), target, m).kernel()
    }

    /// Smith-form presentation with the action transported.
    pub fn simplified(&self) -> (GammaModule, GammaHom, GammaHom) {
        let s = self.group.simplify();
        let action = self
            .gamma
            .elements()
            .map(|g| s.to.matrix().mul(&self.action[g]).mul(s.from.matrix()))
            .collect();
        let m = GammaModule { gamma: self.gamma.clone(), group: s.group.clone(), action };
        let to = GammaHom { source: self.clone(), target: m.clone(), hom: s.to };
        let from = GammaHom { source: m.clone(), target: self.clone(), hom: s.from };
        (m, to, from)
    }

    pub fn cohomology(&self, degree: usize) -> Result<FgAbelianGroup> {
        group_cohomology(self, degree)
    }

    /// Fixed points, `H^1`, `H^2` and the plain invariants: the comparison
    /// data used when no equivariant map is available.
    pub fn evidence(&self) -> Result<Evidence> {
        Ok(Evidence {
            plain: self.invariants().clone(),
            fixed: self.fixed_points()?.0.invariants().clone(),
            h1: self.cohomology(1)?.invariants().clone(),
            h2: self.cohomology(2)?.invariants().clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub plain: Invariants,
    pub fixed: Invariants,
    pub h1: Invariants,
    pub h2: Invariants,
}

/// A homomorphism of modules commuting with every group element.
#[derive(Clone, PartialEq)]
pub struct GammaHom {
    source: GammaModule,
    target: GammaModule,
    hom: AbHom,
}

impl fmt::Debug for GammaHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaHom({:?})", self.hom)
    }
}

impl GammaHom {
    pub fn new(source: GammaModule, target: GammaModule, matrix: IntMatrix) -> Result<Self> {
        if source.gamma != target.gamma {
            return Err(Error::NotEquivariant("source and target carry different groups".into()));
        }
        let hom = AbHom::new(source.group.clone(), target.group.clone(), matrix)?;
        Self::from_hom(source, target, hom)
    }

    pub fn from_hom(source: GammaModule, target: GammaModule, hom: AbHom) -> Result<Self> {
        if hom.source() != &source.group || hom.target() != &target.group {
            return Err(Error::NotComposable("hom does not match the modules".into()));
        }
        for g in source.gamma.elements() {
            let left = abgrp::compose(&source.action_hom(g), &hom)?;
            let right = abgrp::compose(&hom, &target.action_hom(g))?;
            if !left.equals(&right) {
                return Err(Error::NotEquivariant(format!("fails to commute with element {g}")));
            }
        }
        Ok(GammaHom { source, target, hom })
    }

    pub(crate) fn new_unchecked(source: GammaModule, target: GammaModule, hom: AbHom) -> Self {
        GammaHom { source, target, hom }
    }

    pub fn identity(m: &GammaModule) -> Self {
        GammaHom { source: m.clone(), target: m.clone(), hom: AbHom::identity(&m.group) }
    }

    pub fn zero(source: &GammaModule, target: &GammaModule) -> Self {
        GammaHom { source: source.clone(), target: target.clone(), hom: AbHom::zero(&source.group, &target.group) }
    }

    pub fn source(&self) -> &GammaModule {
        &self.source
    }

    pub fn target(&self) -> &GammaModule {
        &self.target
    }

    pub fn hom(&self) -> &AbHom {
        &self.hom
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.hom.matrix()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GammaHom) -> Result<GammaHom> {
        if self.target != next.source {
            return Err(Error::NotComposable("equivariant maps do not compose".into()));
        }
        let hom = abgrp::compose(&self.hom, &next.hom)?;
        Ok(GammaHom { source: self.source.clone(), target: next.target.clone(), hom })
    }

    pub fn equals(&self, other: &GammaHom) -> bool {
        self.hom.equals(&other.hom)
    }

    pub fn is_zero(&self) -> bool {
        self.hom.is_zero()
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        self.hom.is_isomorphism()
    }

    /// The equivariant `h` with `inj ∘ h = self`.
    pub fn lift_through(&self, inj: &GammaHom) -> Result<GammaHom> {
        let hom = self.hom.lift_through(&inj.hom)?;
        Ok(GammaHom { source: self.source.clone(), target: inj.source.clone(), hom })
    }

    pub fn kernel(&self) -> Result<(GammaModule, GammaHom)> {
        equivariant_kernel(self)
    }

    pub fn cokernel(&self) -> Result<(GammaModule, GammaHom)> {
        equivariant_cokernel(self)
    }
}

pub fn equivariant_kernel(f: &GammaHom) -> Result<(GammaModule, GammaHom)> {
    let (k, incl) = f.hom.kernel()?;
    let action = f
        .source
        .gamma
        .elements()
        .map(|g| {
            abgrp::compose(&incl, &f.source.action_hom(g))
                .and_then(|a| a.lift_through(&incl))
                .map(|h| h.matrix().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let module = GammaModule { gamma: f.source.gamma.clone(), group: k, action };
    Ok((module.clone(), GammaHom { source: module, target: f.source.clone(), hom: incl }))
}

pub fn equivariant_cokernel(f: &GammaHom) -> Result<(GammaModule, GammaHom)> {
    let (q, proj) = f.hom.cokernel()?;
    let action = f.target.action.clone();
    for (g, a) in action.iter().enumerate() {
        AbHom::new(q.clone(), q.clone(), a.clone())
            .map_err(|e| Error::NotEquivariant(format!("induced action of {g} on the cokernel: {e}")))?;
    }
    let module = GammaModule { gamma: f.target.gamma.clone(), group: q, action };
    Ok((module.clone(), GammaHom { source: f.target.clone(), target: module, hom: proj }))
}

/// `Map(Γ^i, M)` as a plain group.
fn cochain_group(m: &GammaModule, i: usize) -> FgAbelianGroup {
    let count = m.gamma.order().pow(i as u32);
    let copies: Vec<&FgAbelianGroup> = (0..count).map(|_| &m.group).collect();
    FgAbelianGroup::direct_sum(&copies)
}

/// Bar differential `d^i: Map(Γ^i, M) -> Map(Γ^(i+1), M)`,
/// `(df)(g1..g(i+1)) = g1·f(g2..) + Σ_j (-1)^j f(.., gj g(j+1), ..) + (-1)^(i+1) f(g1..gi)`.
pub fn bar_differential(m: &GammaModule, i: usize) -> AbHom {
    let order = m.gamma.order();
    let n = m.group.ambient_rank();
    let src_count = order.pow(i as u32);
    let tgt_count = src_count * order;
    let id = IntMatrix::identity(n);
    let mut d = IntMatrix::zeros(tgt_count * n, src_count * n);
    let index = |t: &[usize]| t.iter().fold(0usize, |acc, &g| acc * order + g);
    let mut tuple = vec![0usize; i + 1];
    for row in 0..tgt_count {
        // decode row index, most significant first
        let mut r = row;
        for k in (0..=i).rev() {
            tuple[k] = r % order;
            r /= order;
        }
        d.add_block(row * n, index(&tuple[1..]) * n, &m.action[tuple[0]], 1);
        for j in 1..=i {
            let mut merged: Vec<usize> = Vec::with_capacity(i);
            merged.extend_from_slice(&tuple[..j - 1]);
            merged.push(m.gamma.mul(tuple[j - 1], tuple[j]));
            merged.extend_from_slice(&tuple[j + 1..]);
            d.add_block(row * n, index(&merged) * n, &id, if j % 2 == 0 { 1 } else { -1 });
        }
        d.add_block(row * n, index(&tuple[..i]) * n, &id, if (i + 1) % 2 == 0 { 1 } else { -1 });
    }
    AbHom::new_unchecked(cochain_group(m, i), cochain_group(m, i + 1), d)
}

/// `H^i(Γ, M)` for `i <= 2` from the bar complex.
pub fn group_cohomology(m: &GammaModule, degree: usize) -> Result<FgAbelianGroup> {
    if degree > 2 {
        return Err(Error::UnsupportedDegree(degree));
    }
    let next = bar_differential(m, degree);
    let prev = (degree > 0).then(|| bar_differential(m, degree - 1));
    Ok(abgrp::subquotient(prev.as_ref(), &next)?.0.simplify().group)
}

pub fn fixed_points(m: &GammaModule) -> Result<FgAbelianGroup> {
    Ok(m.fixed_points()?.0)
}

pub fn induced_module(gamma: Arc<FiniteGroup>, k: usize) -> GammaModule {
    GammaModule::induced(gamma, k)
}
