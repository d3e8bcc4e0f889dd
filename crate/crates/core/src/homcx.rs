//! Bounded cochain complexes of Γ-modules.

use std::fmt;
use std::sync::Arc;

use crate::abgrp::{self, AbHom, FgAbelianGroup, Invariants};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::gammamod::{equivariant_cokernel, equivariant_kernel, FiniteGroup, GammaHom, GammaModule};

/// Terms in degrees `lo..=hi`, zero outside; `diffs[k]` starts in degree `lo + k`.
#[derive(Clone, PartialEq)]
pub struct BoundedComplex {
    gamma: Arc<FiniteGroup>,
    lo: i32,
    terms: Vec<GammaModule>,
    diffs: Vec<GammaHom>,
}

impl fmt::Debug for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundedComplex[{}..={}](", self.lo, self.hi())?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{}", t.invariants())?;
        }
        write!(f, ")")
    }
}

impl BoundedComplex {
    pub fn new(lo: i32, terms: Vec<GammaModule>, diffs: Vec<GammaHom>) -> Result<Self> {
        let gamma = terms
            .first()
            .map(|t| t.gamma().clone())
            .ok_or_else(|| Error::InvalidComplex("a complex needs at least one term".into()))?;
        Self::with_gamma(gamma, lo, terms, diffs)
    }

    pub fn with_gamma(gamma: Arc<FiniteGroup>, lo: i32, terms: Vec<GammaModule>, diffs: Vec<GammaHom>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero(gamma));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::InvalidComplex(format!("{} terms need {} differentials", terms.len(), terms.len() - 1)));
        }
        if terms.iter().any(|t| **t.gamma() != *gamma) {
            return Err(Error::InvalidComplex("terms carry different groups".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(Error::InvalidComplex(format!("differential in degree {} has the wrong ends", lo + k as i32)));
            }
        }
        for (k, w) in diffs.windows(2).enumerate() {
            if !abgrp::compose(w[0].hom(), w[1].hom())?.is_zero() {
                return Err(Error::InvalidComplex(format!("d∘d != 0 starting in degree {}", lo + k as i32)));
            }
        }
        Ok(BoundedComplex { gamma, lo, terms, diffs })
    }

    pub fn zero(gamma: Arc<FiniteGroup>) -> Self {
        let z = GammaModule::zero(gamma.clone());
        BoundedComplex { gamma, lo: 0, terms: vec![z], diffs: vec![] }
    }

    /// A single module placed in degree `n`.
    pub fn concentrated(m: GammaModule, n: i32) -> Self {
        BoundedComplex { gamma: m.gamma().clone(), lo: n, terms: vec![m], diffs: vec![] }
    }

    /// `[source --d--> target]` in degrees `lo, lo + 1`.
    pub fn two_term(d: GammaHom, lo: i32) -> Self {
        BoundedComplex {
            gamma: d.source().gamma().clone(),
            lo,
            terms: vec![d.source().clone(), d.target().clone()],
            diffs: vec![d],
        }
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    fn index(&self, n: i32) -> Option<usize> {
        (n >= self.lo && n <= self.hi()).then(|| (n - self.lo) as usize)
    }

    pub fn term(&self, n: i32) -> GammaModule {
        match self.index(n) {
            Some(k) => self.terms[k].clone(),
            None => GammaModule::zero(self.gamma.clone()),
        }
    }

    pub fn diff(&self, n: i32) -> GammaHom {
        match self.index(n) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => GammaHom::zero(&self.term(n), &self.term(n + 1)),
        }
    }

    pub fn cohomology_data(&self, n: i32) -> Result<CohomologyData> {
        let (cycles, incl) = equivariant_kernel(&self.diff(n))?;
        let boundaries = self.diff(n - 1).lift_through(&incl)?;
        let (h, proj) = equivariant_cokernel(&boundaries)?;
        Ok(CohomologyData { degree: n, cycles, incl, h, proj })
    }

    /// `ker d^n / im d^(n-1)` with the induced action.
    pub fn cohomology(&self, n: i32) -> Result<GammaModule> {
        Ok(self.cohomology_data(n)?.h)
    }

    pub fn cohomology_invariants(&self) -> Result<Vec<(i32, Invariants)>> {
        (self.lo..=self.hi()).map(|n| Ok((n, self.cohomology(n)?.invariants().clone()))).collect()
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        for n in self.lo..=self.hi() {
            if !self.cohomology(n)?.is_trivial() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `C[k]^n = C^(n+k)` with differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i32) -> BoundedComplex {
        let diffs = if k.rem_euclid(2) == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(negate).collect()
        };
        BoundedComplex { gamma: self.gamma.clone(), lo: self.lo - k, terms: self.terms.clone(), diffs }
    }

    /// `... -> C^(n-1) -> ker d^n -> 0`.
    pub fn truncate(&self, n: i32) -> Result<BoundedComplex> {
        if n >= self.hi() {
            return Ok(self.clone());
        }
        if n < self.lo {
            return Ok(BoundedComplex::zero(self.gamma.clone()));
        }
        let data = self.cohomology_data(n)?;
        let k = (n - self.lo) as usize;
        let mut terms = self.terms[..k].to_vec();
        terms.push(data.cycles.clone());
        let mut diffs = self.diffs[..k.saturating_sub(1)].to_vec();
        if k > 0 {
            diffs.push(self.diffs[k - 1].lift_through(&data.incl)?);
        }
        Ok(BoundedComplex { gamma: self.gamma.clone(), lo: self.lo, terms, diffs })
    }

    pub fn identity(&self) -> ChainMap {
        ChainMap::from_components_unchecked(
            self.clone(),
            self.clone(),
            (self.lo..=self.hi()).map(|n| (n, GammaHom::identity(&self.term(n)))).collect(),
        )
    }

    /// Plain abelian groups of all terms, for reporting.
    pub fn term_invariants(&self) -> Vec<(i32, Invariants)> {
        (self.lo..=self.hi()).map(|n| (n, self.term(n).invariants().clone())).collect()
    }
}

fn negate(d: &GammaHom) -> GammaHom {
    let hom = AbHom::new_unchecked(d.hom().source().clone(), d.hom().target().clone(), d.matrix().neg());
    GammaHom::new_unchecked(d.source().clone(), d.target().clone(), hom)
}

/// Cycles `Z ⊂ C^n` and `H = Z / B`, presented on the same generators as `Z`.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub degree: i32,
    pub cycles: GammaModule,
    pub incl: GammaHom,
    pub h: GammaModule,
    pub proj: GammaHom,
}

/// The map on cohomology induced by a degree-preserving component `C^n -> D^m`
/// that sends cycles to cycles and boundaries to boundaries.
pub fn class_map(component: &GammaHom, from: &CohomologyData, to: &CohomologyData) -> Result<GammaHom> {
    let onto_cycles = from.incl.then(component)?.lift_through(&to.incl)?;
    GammaHom::new(from.h.clone(), to.h.clone(), onto_cycles.matrix().clone())
}

#[derive(Clone, PartialEq)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    lo: i32,
    components: Vec<GammaHom>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap({:?} -> {:?})", self.source, self.target)
    }
}

impl ChainMap {
    /// Components are given by degree; missing degrees are zero.
    pub fn new(source: BoundedComplex, target: BoundedComplex, components: Vec<(i32, GammaHom)>) -> Result<Self> {
        let map = Self::from_components_unchecked(source, target, components);
        for n in map.lo..map.lo + map.components.len() as i32 {
            let c = map.component(n);
            if c.source() != &map.source.term(n) || c.target() != &map.target.term(n) {
                return Err(Error::InvalidComplex(format!("component in degree {n} has the wrong ends")));
            }
        }
        for n in map.lo - 1..=map.lo + map.components.len() as i32 {
            let left = map.source.diff(n).then(&map.component(n + 1))?;
            let right = map.component(n).then(&map.target.diff(n))?;
            if !left.equals(&right) {
                return Err(Error::InvalidComplex(format!("square in degree {n} does not commute")));
            }
        }
        Ok(map)
    }

    fn from_components_unchecked(source: BoundedComplex, target: BoundedComplex, components: Vec<(i32, GammaHom)>) -> Self {
        let lo = source.lo.min(target.lo);
        let hi = source.hi().max(target.hi());
        let mut comps: Vec<GammaHom> = (lo..=hi).map(|n| GammaHom::zero(&source.term(n), &target.term(n))).collect();
        for (n, c) in components {
            if n >= lo && n <= hi {
                comps[(n - lo) as usize] = c;
            }
        }
        ChainMap { source, target, lo, components: comps }
    }

    pub fn zero(source: &BoundedComplex, target: &BoundedComplex) -> Self {
        Self::from_components_unchecked(source.clone(), target.clone(), vec![])
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn component(&self, n: i32) -> GammaHom {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.components.len() {
            self.components[k as usize].clone()
        } else {
            GammaHom::zero(&self.source.term(n), &self.target.term(n))
        }
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.lo + self.components.len() as i32 - 1
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        if self.target != next.source {
            return Err(Error::NotComposable("chain maps do not compose".into()));
        }
        let lo = self.lo.min(next.lo);
        let hi = (self.lo + self.components.len() as i32).max(next.lo + next.components.len() as i32);
        let comps = (lo..hi)
            .map(|n| Ok((n, self.component(n).then(&next.component(n))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_components_unchecked(self.source.clone(), next.target.clone(), comps))
    }

    pub fn equals(&self, other: &ChainMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.degrees().chain(other.degrees()).all(|n| self.component(n).equals(&other.component(n)))
    }

    pub fn on_cohomology(&self, n: i32) -> Result<GammaHom> {
        class_map(&self.component(n), &self.source.cohomology_data(n)?, &self.target.cohomology_data(n)?)
    }

    pub fn cone(&self) -> Result<BoundedComplex> {
        cone(self)
    }

    /// True iff the cone is acyclic.
    pub fn is_quasi_iso(&self) -> Result<bool> {
        cone(self)?.is_acyclic()
    }

    /// True iff every induced map on cohomology is an isomorphism.
    pub fn is_cohomology_iso(&self) -> Result<bool> {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        for n in lo..=hi {
            if !self.on_cohomology(n)?.is_isomorphism()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `C^n = A^(n+1) ⊕ B^n`, `d(a, b) = (-d_A a, u(a) + d_B b)`.
pub fn cone(u: &ChainMap) -> Result<BoundedComplex> {
    let (a, b) = (&u.source, &u.target);
    let lo = (a.lo - 1).min(b.lo);
    let hi = (a.hi() - 1).max(b.hi());
    let terms: Vec<GammaModule> = (lo..=hi)
        .map(|n| GammaModule::direct_sum(&[&a.term(n + 1), &b.term(n)]))
        .collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    for n in lo..hi {
        let (an1, bn) = (a.term(n + 1).group().ambient_rank(), b.term(n).group().ambient_rank());
        let (an2, bn1) = (a.term(n + 2).group().ambient_rank(), b.term(n + 1).group().ambient_rank());
        let mut m = IntMatrix::zeros(an2 + bn1, an1 + bn);
        m.add_block(0, 0, a.diff(n + 1).matrix(), -1);
        m.add_block(an2, 0, u.component(n + 1).matrix(), 1);
        m.add_block(an2, an1, b.diff(n).matrix(), 1);
        let k = (n - lo) as usize;
        diffs.push(GammaHom::new(terms[k].clone(), terms[k + 1].clone(), m)?);
    }
    BoundedComplex::with_gamma(a.gamma.clone(), lo, terms, diffs)
}

/// `A --u--> B --i--> cone(u) --v--> A[1]` with `i(b) = (0, b)` and `v(a, b) = -a`.
pub fn cone_triangle(u: &ChainMap) -> Result<Triangle> {
    let c = cone(u)?;
    let (a, b) = (u.source.clone(), u.target.clone());
    let a1 = a.shift(1);
    let mut inc = Vec::new();
    let mut proj = Vec::new();
    for n in c.lo..=c.hi() {
        let (an1, bn) = (a.term(n + 1).group().ambient_rank(), b.term(n).group().ambient_rank());
        let mut i = IntMatrix::zeros(an1 + bn, bn);
        i.set_block(an1, 0, &IntMatrix::identity(bn));
        inc.push((n, GammaHom::new(b.term(n), c.term(n), i)?));
        let mut p = IntMatrix::zeros(an1, an1 + bn);
        p.set_block(0, 0, &IntMatrix::identity(an1).neg());
        proj.push((n, GammaHom::new(c.term(n), a1.term(n), p)?));
    }
    Ok(Triangle {
        f: u.clone(),
        g: ChainMap::new(b, c.clone(), inc)?,
        h: ChainMap::new(c, a1, proj)?,
    })
}

/// `X --f--> Y --g--> Z --h--> X[1]`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

impl Triangle {
    /// The long sequence `H^n X -> H^n Y -> H^n Z -> H^(n+1) X -> ...` over every
    /// degree where something can be nonzero.
    pub fn long_sequence(&self) -> Result<LongExactSequence> {
        let (x, y, z) = (self.f.source(), self.f.target(), self.g.target());
        let lo = x.lo().min(y.lo()).min(z.lo()) - 1;
        let hi = x.hi().max(y.hi()).max(z.hi());
        let shifted = &self.h;
        build_les(lo, hi, x, y, z, &self.f, &self.g, |n, zc, xc| class_map(&shifted.component(n), zc, xc))
    }

    pub fn check(&self) -> Result<TriangleReport> {
        Ok(TriangleReport {
            complexes: [self.f.source(), self.f.target(), self.g.target(), self.h.target()]
                .iter()
                .map(|c| c.cohomology_invariants())
                .collect::<Result<_>>()?,
            sequence: self.long_sequence()?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct TriangleReport {
    /// Cohomology of `X`, `Y`, `Z`, `X[1]` by degree.
    pub complexes: Vec<Vec<(i32, Invariants)>>,
    pub sequence: LongExactSequence,
}

impl TriangleReport {
    pub fn is_exact(&self) -> bool {
        self.sequence.is_exact()
    }
}

#[derive(Clone, Debug)]
pub struct LesTerm {
    /// `"X"`, `"Y"` or `"Z"` for the first, second and third complex.
    pub complex: &'static str,
    pub degree: i32,
    pub module: GammaModule,
}

/// Terms with the maps between consecutive ones and exactness at each term.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub terms: Vec<LesTerm>,
    pub maps: Vec<GammaHom>,
    pub exact: Vec<bool>,
}

impl LongExactSequence {
    pub fn is_exact(&self) -> bool {
        self.exact.iter().all(|&e| e)
    }

    pub fn invariants(&self) -> Vec<Invariants> {
        self.terms.iter().map(|t| t.module.invariants().clone()).collect()
    }

    /// Drops leading and trailing zero terms.
    pub fn trimmed(&self) -> (usize, usize) {
        let first = self.terms.iter().position(|t| !t.module.is_trivial()).unwrap_or(self.terms.len());
        let last = self.terms.iter().rposition(|t| !t.module.is_trivial()).map_or(first, |p| p + 1);
        (first, last)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_les<F>(
    lo: i32,
    hi: i32,
    x: &BoundedComplex,
    y: &BoundedComplex,
    z: &BoundedComplex,
    f: &ChainMap,
    g: &ChainMap,
    mut connecting: F,
) -> Result<LongExactSequence>
where
    F: FnMut(i32, &CohomologyData, &CohomologyData) -> Result<GammaHom>,
{
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut xd = x.cohomology_data(lo)?;
    for n in lo..=hi {
        let yd = y.cohomology_data(n)?;
        let zd = z.cohomology_data(n)?;
        let xnext = x.cohomology_data(n + 1)?;
        maps.push(class_map(&f.component(n), &xd, &yd)?);
        maps.push(class_map(&g.component(n), &yd, &zd)?);
        maps.push(connecting(n, &zd, &xnext)?);
        terms.push(LesTerm { complex: "X", degree: n, module: xd.h.clone() });
        terms.push(LesTerm { complex: "Y", degree: n, module: yd.h.clone() });
        terms.push(LesTerm { complex: "Z", degree: n, module: zd.h.clone() });
        xd = xnext;
    }
    terms.push(LesTerm { complex: "X", degree: hi + 1, module: xd.h.clone() });
    let gamma = x.gamma().clone();
    let zero = GammaModule::zero(gamma);
    let mut chain = Vec::with_capacity(maps.len() + 2);
    chain.push(GammaHom::zero(&zero, &terms[0].module));
    chain.extend(maps.iter().cloned());
    chain.push(GammaHom::zero(&terms[terms.len() - 1].module, &zero));
    let exact = chain
        .windows(2)
        .map(|w| abgrp::is_exact_at(w[0].hom(), w[1].hom()))
        .collect::<Result<Vec<_>>>()?;
    Ok(LongExactSequence { terms, maps, exact })
}

/// `τ≤(n-1) A -> τ≤n A -> H^n(A)[-n] -> (τ≤(n-1) A)[1]`.
pub fn truncation_triangle(a: &BoundedComplex, n: i32) -> Result<Triangle> {
    let lower = a.truncate(n - 1)?;
    let upper = a.truncate(n)?;
    let data = a.cohomology_data(n)?;
    let hn = BoundedComplex::concentrated(data.h.clone(), n);
    // lower differs from upper only in degree n-1 (cycles instead of the term) and n
    let lower_cut = n - 1 >= a.lo() && n - 1 < a.hi();
    let mut incl = Vec::new();
    for k in upper.lo()..=upper.hi() {
        let (s, t) = (lower.term(k), upper.term(k));
        let c = if k == n - 1 && lower_cut {
            a.cohomology_data(n - 1)?.incl
        } else if s == t {
            GammaHom::identity(&s)
        } else {
            GammaHom::zero(&s, &t)
        };
        incl.push((k, c));
    }
    let f = ChainMap::new(lower.clone(), upper.clone(), incl)?;
    let proj = if n >= a.lo() && n < a.hi() {
        vec![(n, data.proj.clone())]
    } else if n == a.hi() {
        // every element of the top term is a cycle
        let into_cycles = GammaHom::identity(&a.term(n)).lift_through(&data.incl)?;
        vec![(n, into_cycles.then(&data.proj)?)]
    } else {
        vec![]
    };
    let g = ChainMap::new(upper, hn.clone(), proj)?;
    let h = ChainMap::zero(&hn, &lower.shift(1));
    Ok(Triangle { f, g, h })
}

pub fn truncation_triangle_check(a: &BoundedComplex, n: i32) -> Result<TriangleReport> {
    truncation_triangle(a, n)?.check()
}

/// `i: A -> B`, `p: B -> C` levelwise exact; the long sequence with the
/// connecting map computed by lifting.
pub fn les_of_ses(i: &ChainMap, p: &ChainMap) -> Result<LongExactSequence> {
    if i.target() != p.source() {
        return Err(Error::NotComposable("les of non-composable chain maps".into()));
    }
    let (a, b, c) = (i.source(), i.target(), p.target());
    let lo = a.lo().min(b.lo()).min(c.lo()) - 1;
    let hi = a.hi().max(b.hi()).max(c.hi());
    for n in lo..=hi + 1 {
        let (inn, pn) = (i.component(n), p.component(n));
        let zero_a = AbHom::zero(&FgAbelianGroup::zero(), inn.source().group());
        let zero_c = AbHom::zero(pn.target().group(), &FgAbelianGroup::zero());
        let ok = abgrp::is_exact_at(&zero_a, inn.hom())?
            && abgrp::is_exact_at(inn.hom(), pn.hom())?
            && abgrp::is_exact_at(pn.hom(), &zero_c)?;
        if !ok {
            return Err(Error::NotExact(format!("0 -> A -> B -> C -> 0 fails in degree {n}")));
        }
    }
    build_les(lo, hi, a, b, c, i, p, |n, cd, ad| connecting_map(n, i, p, cd, ad))
}

fn connecting_map(n: i32, i: &ChainMap, p: &ChainMap, cd: &CohomologyData, ad: &CohomologyData) -> Result<GammaHom> {
    let b = i.target();
    let (pn, in1, db) = (p.component(n), i.component(n + 1), b.diff(n));
    let gens = cd.cycles.group().ambient_rank();
    let mut cols = Vec::with_capacity(gens);
    for j in 0..gens {
        let zc = cd.incl.hom().apply(&cd.cycles.group().generator(j));
        let lift = pn
            .hom()
            .preimage_element(&zc)?
            .ok_or_else(|| Error::NotExact(format!("degree {n}: cycle does not lift to the middle term")))?;
        let boundary = db.hom().apply(&lift);
        let back = in1
            .hom()
            .preimage_element(&boundary)?
            .ok_or_else(|| Error::NotExact(format!("degree {n}: boundary does not come from the first term")))?;
        let cycle = ad
            .incl
            .hom()
            .preimage_element(&back)?
            .ok_or_else(|| Error::NotExact(format!("degree {n}: lifted element is not a cycle")))?;
        cols.push(cycle);
    }
    let m = IntMatrix::from_columns(ad.cycles.group().ambient_rank(), &cols);
    GammaHom::new(cd.h.clone(), ad.h.clone(), m)
}
