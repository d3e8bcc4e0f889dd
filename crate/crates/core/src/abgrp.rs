//! Finitely generated abelian groups as cokernels `Z^n / L`, with
//! homomorphisms given by integer matrices on ambient coordinates.
//!
//! Vectors are columns: a hom `f: A -> B` stores a `B.n x A.n` matrix and
//! sends `x` to `M x`. The relation lattice `L` is kept as the nonzero rows
//! of its Hermite form, which makes presentations comparable with `==` and
//! gives every element a canonical representative.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{hnf_basis, kernel_basis, smith_right, IntMatrix, LinearSolver};

/// Free rank plus torsion invariant factors `d1 | d2 | ...`, each `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Invariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Invariants {
    pub fn new(free_rank: usize, torsion: &[i64]) -> Self {
        Invariants { free_rank, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }

    pub fn zero() -> Self {
        Invariants { free_rank: 0, torsion: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().fold(BigInt::one(), |a, b| a * b))
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for Invariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            rank: usize,
            torsion: Vec<String>,
        }
        Wire { rank: self.free_rank, torsion: self.torsion.iter().map(|t| t.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Invariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            rank: usize,
            torsion: Vec<String>,
        }
        let w = Wire::deserialize(d)?;
        let torsion = w
            .torsion
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Invariants { free_rank: w.rank, torsion })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    ambient_rank: usize,
    relations: IntMatrix,
    invariants: Invariants,
}

impl FgAbelianGroup {
    /// `Z^n` modulo the row span of `relations`.
    pub fn new(ambient_rank: usize, relations: IntMatrix) -> Result<Self> {
        let r = relations.rows();
        let relations = relations.reshape_empty(r, ambient_rank)?;
        if relations.cols() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "relations have {} columns, ambient rank is {ambient_rank}",
                relations.cols()
            )));
        }
        let relations = hnf_basis(&relations);
        let diag = crate::exactalg::invariant_factors(&relations);
        let free_rank = ambient_rank - diag.len();
        let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
        Ok(FgAbelianGroup { ambient_rank, relations, invariants: Invariants { free_rank, torsion } })
    }

    pub fn free(n: usize) -> Self {
        FgAbelianGroup {
            ambient_rank: n,
            relations: IntMatrix::zeros(0, n),
            invariants: Invariants { free_rank: n, torsion: vec![] },
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/m`, with `m = 0` meaning `Z`.
    pub fn cyclic(m: i64) -> Self {
        if m == 0 {
            return Self::free(1);
        }
        Self::new(1, IntMatrix::from_rows(&[[m]])).expect("1x1 relation")
    }

    /// Smith-form presentation: torsion generators first, then free ones.
    pub fn from_invariants(inv: &Invariants) -> Self {
        let n = inv.torsion.len() + inv.free_rank;
        let mut rel = IntMatrix::zeros(inv.torsion.len(), n);
        for (i, d) in inv.torsion.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        Self::new(n, rel).expect("diagonal presentation")
    }

    pub fn direct_sum(parts: &[&FgAbelianGroup]) -> Self {
        let rels: Vec<&IntMatrix> = parts.iter().map(|g| &g.relations).collect();
        let n = parts.iter().map(|g| g.ambient_rank).sum();
        Self::new(n, IntMatrix::block_diag(&rels)).expect("block relations")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Hermite basis of the relation lattice.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.invariants.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_trivial()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.invariants.order()
    }

    /// Isomorphism as plain abelian groups.
    pub fn is_isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.invariants == other.invariants
    }

    /// Canonical representative of `v` modulo the relations.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut out = v.to_vec();
        for r in 0..self.relations.rows() {
            let row = self.relations.row(r);
            let c = row.iter().position(|x| !x.is_zero()).expect("hermite rows are nonzero");
            let q = out[c].div_floor(&row[c]);
            if q.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o -= &q * x;
            }
        }
        out
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Basis vector `e_i` of the ambient lattice.
    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ambient_rank];
        v[i] = BigInt::one();
        v
    }

    /// Equivalent presentation in Smith form with trivial generators dropped.
    pub fn simplify(&self) -> Simplified {
        let n = self.ambient_rank;
        let s = smith_right(&self.relations);
        let diag = s.nonzero_diagonal();
        let kept: Vec<usize> = (0..n).filter(|&i| i >= diag.len() || !diag[i].is_one()).collect();
        let mut rel = Vec::new();
        for (p, &k) in kept.iter().enumerate() {
            if k < diag.len() {
                let mut row = vec![BigInt::zero(); kept.len()];
                row[p] = diag[k].clone();
                rel.push(row);
            }
        }
        let rel = IntMatrix::from_bigint_rows(rel, kept.len()).expect("rows sized to kept");
        let group = FgAbelianGroup::new(kept.len(), rel).expect("diagonal presentation");
        let to = s.v.transpose().select_rows(&kept);
        let from = s.v_inv.transpose().select_cols(&kept);
        Simplified {
            to: AbHom::new_unchecked(self.clone(), group.clone(), to),
            from: AbHom::new_unchecked(group.clone(), self.clone(), from),
            group,
        }
    }

    /// The subgroup generated by the columns of `gens`, with its inclusion.
    /// The returned presentation is simplified.
    pub fn subgroup(&self, gens: &IntMatrix) -> Result<(FgAbelianGroup, AbHom)> {
        if gens.rows() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "generators live in Z^{}, group ambient rank is {}",
                gens.rows(),
                self.ambient_rank
            )));
        }
        let m = gens.cols();
        // coefficient vectors c with gens*c in L
        let a = gens.hstack(&self.relations.transpose().neg());
        let k = kernel_basis(&a);
        let rel = k.select_cols(&(0..m).collect::<Vec<_>>());
        let raw = FgAbelianGroup::new(m, rel)?;
        let simp = raw.simplify();
        let incl = gens.mul(simp.from.matrix());
        Ok((simp.group.clone(), AbHom::new_unchecked(simp.group, self.clone(), incl)))
    }

    /// Solver for membership in the subgroup generated by `gens` columns.
    fn span_solver(&self, gens: &IntMatrix) -> LinearSolver {
        LinearSolver::new(&gens.hstack(&self.relations.transpose()))
    }
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbelianGroup(Z^{} / {} ~ {})", self.ambient_rank, self.relations, self.invariants)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants)
    }
}

/// Result of [`FgAbelianGroup::simplify`]: the new group and mutually
/// inverse isomorphisms.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub group: FgAbelianGroup,
    pub to: AbHom,
    pub from: AbHom,
}

#[derive(Clone, PartialEq, Eq)]
pub struct AbHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbHom({} -> {}: {})", self.source.invariants, self.target.invariants, self.matrix)
    }
}

impl AbHom {
    /// Checks shapes and that relations of the source land in the target's.
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        let matrix = matrix.reshape_empty(target.ambient_rank, source.ambient_rank)?;
        if matrix.rows() != target.ambient_rank || matrix.cols() != source.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank,
                source.ambient_rank
            )));
        }
        for r in 0..source.relations.rows() {
            let img = matrix.mul_vec(source.relations.row(r));
            if !target.is_zero_element(&img) {
                return Err(Error::IllDefinedHom(format!(
                    "relation {:?} maps to nonzero {:?}",
                    to_strings(source.relations.row(r)),
                    to_strings(&target.reduce(&img))
                )));
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.ambient_rank);
        debug_assert_eq!(matrix.cols(), source.ambient_rank);
        AbHom { source, target, matrix }
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        AbHom::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.ambient_rank))
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> Self {
        AbHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.ambient_rank, source.ambient_rank),
        )
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Image of `x`, reduced in the target.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `self` followed by `next`, i.e. `next ∘ self`.
    pub fn then(&self, next: &AbHom) -> Result<AbHom> {
        compose(self, next)
    }

    /// True when both maps agree on every generator.
    pub fn equals(&self, other: &AbHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.source.ambient_rank).all(|j| {
                let d: Vec<BigInt> = self
                    .matrix
                    .column(j)
                    .iter()
                    .zip(other.matrix.column(j))
                    .map(|(a, b)| a - b)
                    .collect();
                self.target.is_zero_element(&d)
            })
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.ambient_rank).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    pub fn kernel(&self) -> Result<(FgAbelianGroup, AbHom)> {
        kernel(self)
    }

    pub fn cokernel(&self) -> Result<(FgAbelianGroup, AbHom)> {
        cokernel(self)
    }

    pub fn image(&self) -> Result<(FgAbelianGroup, AbHom)> {
        image(self)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// Some `x` with `f(x) = y`, canonical in the source.
    pub fn preimage_element(&self, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        Ok(self.preimages(&[y.to_vec()])?.pop().flatten())
    }

    fn preimages(&self, ys: &[Vec<BigInt>]) -> Result<Vec<Option<Vec<BigInt>>>> {
        let solver = self.target.span_solver(&self.matrix);
        let n = self.source.ambient_rank;
        ys.iter()
            .map(|y| {
                if y.len() != self.target.ambient_rank {
                    return Err(Error::DimensionMismatch(format!(
                        "element of length {} in a group of ambient rank {}",
                        y.len(),
                        self.target.ambient_rank
                    )));
                }
                Ok(solver.solve(y)?.map(|sol| self.source.reduce(&sol[..n])))
            })
            .collect()
    }

    /// The unique `h` with `inj ∘ h = self`, when `self` lands in the image
    /// of the injective map `inj`.
    pub fn lift_through(&self, inj: &AbHom) -> Result<AbHom> {
        if self.target != inj.target {
            return Err(Error::NotComposable("lift target differs from inclusion target".into()));
        }
        let cols: Vec<Vec<BigInt>> = (0..self.source.ambient_rank).map(|j| self.matrix.column(j)).collect();
        let pre = inj.preimages(&cols)?;
        let mut out = Vec::with_capacity(cols.len());
        for (j, p) in pre.into_iter().enumerate() {
            out.push(p.ok_or_else(|| {
                Error::IllDefinedHom(format!("generator {j} does not land in the image of the inclusion"))
            })?);
        }
        AbHom::new(self.source.clone(), inj.source.clone(), IntMatrix::from_columns(inj.source.ambient_rank, &out))
    }

    /// Restrict the source along `g` (i.e. `self ∘ g`).
    pub fn after(&self, g: &AbHom) -> Result<AbHom> {
        compose(g, self)
    }
}

/// `f` then `g`: the composite `g ∘ f`.
pub fn compose(f: &AbHom, g: &AbHom) -> Result<AbHom> {
    if f.target != g.source {
        return Err(Error::NotComposable(format!("{} vs {}", f.target.invariants, g.source.invariants)));
    }
    Ok(AbHom::new_unchecked(f.source.clone(), g.target.clone(), g.matrix.mul(&f.matrix)))
}

pub fn kernel(f: &AbHom) -> Result<(FgAbelianGroup, AbHom)> {
    let n = f.source.ambient_rank;
    // x with M x in L_target
    let a = f.matrix.hstack(&f.target.relations.transpose().neg());
    let k = kernel_basis(&a);
    let gens = k.select_cols(&(0..n).collect::<Vec<_>>()).transpose();
    f.source.subgroup(&gens)
}

pub fn cokernel(f: &AbHom) -> Result<(FgAbelianGroup, AbHom)> {
    let rel = f.target.relations.vstack(&f.matrix.transpose());
    let q = FgAbelianGroup::new(f.target.ambient_rank, rel)?;
    let proj = AbHom::new_unchecked(f.target.clone(), q.clone(), IntMatrix::identity(f.target.ambient_rank));
    Ok((q, proj))
}

pub fn image(f: &AbHom) -> Result<(FgAbelianGroup, AbHom)> {
    f.target.subgroup(&f.matrix)
}

pub fn preimage_element(f: &AbHom, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    f.preimage_element(y)
}

/// `ker next / im prev` for composable `prev`, `next`, together with the
/// inclusion of the cycles into `source(next)`. The quotient shares the
/// cycles' ambient coordinates, so a cycle's coordinates are its class.
pub fn subquotient(prev: Option<&AbHom>, next: &AbHom) -> Result<(FgAbelianGroup, AbHom)> {
    let (_, incl) = kernel(next)?;
    match prev {
        None => Ok((incl.source.clone(), incl)),
        Some(p) => {
            if p.target != next.source {
                return Err(Error::NotComposable("subquotient of non-composable maps".into()));
            }
            let boundaries = p.lift_through(&incl)?;
            let (h, _) = cokernel(&boundaries)?;
            Ok((h, incl))
        }
    }
}

/// `im f = ker g` inside `target(f) = source(g)`.
pub fn is_exact_at(f: &AbHom, g: &AbHom) -> Result<bool> {
    if f.target != g.source {
        return Err(Error::NotComposable(format!(
            "target {} of the first map is not the source {} of the second",
            f.target.invariants, g.source.invariants
        )));
    }
    if !compose(f, g)?.is_zero() {
        return Ok(false);
    }
    let (_, kincl) = kernel(g)?;
    let solver = f.target.span_solver(&f.matrix);
    for j in 0..kincl.source.ambient_rank {
        if solver.solve(&kincl.matrix.column(j))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exact sequence
/// `0 -> ker u -> ker vu -> ker v -> coker u -> coker vu -> coker v -> 0`.
#[derive(Clone, Debug)]
pub struct SixTermSequence {
    /// `ker u, ker vu, ker v, coker u, coker vu, coker v`
    pub groups: Vec<FgAbelianGroup>,
    pub maps: Vec<AbHom>,
    /// Exactness at each of the six groups.
    pub exact: Vec<bool>,
}

impl SixTermSequence {
    pub const LABELS: [&'static str; 6] = ["ker u", "ker vu", "ker v", "coker u", "coker vu", "coker v"];

    pub fn is_exact(&self) -> bool {
        self.exact.iter().all(|&e| e)
    }
}

pub fn six_term_sequence(u: &AbHom, v: &AbHom) -> Result<SixTermSequence> {
    let vu = compose(u, v)?;
    let (ku, iu) = kernel(u)?;
    let (kvu, ivu) = kernel(&vu)?;
    let (kv, iv) = kernel(v)?;
    let (cu, pu) = cokernel(u)?;
    let (cvu, _) = cokernel(&vu)?;
    let (cv, _) = cokernel(v)?;

    let a = iu.lift_through(&ivu)?;
    let b = compose(&ivu, u)?.lift_through(&iv)?;
    let c = compose(&iv, &pu)?;
    let d = AbHom::new(cu.clone(), cvu.clone(), v.matrix.clone())?;
    let e = AbHom::new(cvu.clone(), cv.clone(), IntMatrix::identity(cv.ambient_rank))?;

    let zero = FgAbelianGroup::zero();
    let into = AbHom::zero(&zero, &ku);
    let out = AbHom::zero(&cv, &zero);
    let chain = [into, a, b, c, d, e, out];
    let exact = chain.windows(2).map(|w| is_exact_at(&w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    Ok(SixTermSequence {
        groups: vec![ku, kvu, kv, cu, cvu, cv],
        maps: chain[1..6].to_vec(),
        exact,
    })
}

/// Element with canonical coordinates; equality is coordinate equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    group: FgAbelianGroup,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(group: &FgAbelianGroup, coords: &[BigInt]) -> Result<Self> {
        if coords.len() != group.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for ambient rank {}",
                coords.len(),
                group.ambient_rank
            )));
        }
        Ok(GroupElement { group: group.clone(), coords: group.reduce(coords) })
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::NotComposable("elements of different groups".into()));
        }
        let s: Vec<BigInt> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        GroupElement::new(&self.group, &s)
    }

    pub fn neg(&self) -> GroupElement {
        let s: Vec<BigInt> = self.coords.iter().map(|a| -a).collect();
        GroupElement { coords: self.group.reduce(&s), group: self.group.clone() }
    }
}

pub(crate) fn to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
