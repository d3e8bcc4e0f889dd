//! Resolutions by tori at the level of character lattices, the two-term
//! complex `π₁ᴰ(G) = [R* -> T*]` in degrees -1, 0, and the exact sequences
//! built from it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::abgrp::{is_exact_at, AbHom, FgAbelianGroup, Invariants};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::gammamod::{equivariant_cokernel, equivariant_kernel, GammaHom, GammaModule};
use crate::homcx::{les_of_ses, BoundedComplex, ChainMap, LongExactSequence};
use crate::report::{Check, Report};
use crate::rootdata::ReductiveDatum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Canonical,
    Pushout,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Canonical => "canonical",
            Provenance::Pushout => "pushout",
        })
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Provenance::Canonical),
            "pushout" => Ok(Provenance::Pushout),
            _ => Err(Error::InvalidDatum(format!("unknown resolution kind {s:?}"))),
        }
    }
}

/// Intermediate lattices of the pushout construction.
#[derive(Clone, Debug)]
pub struct PushoutParts {
    /// `X -> X_rad`.
    pub radical: GammaHom,
    /// `X -> X_rad ⊕ P`.
    pub j: GammaHom,
    /// `(μ')*` on a Smith presentation, with `q: X_rad ⊕ P -> (μ')*`.
    pub mu_prime: GammaModule,
    pub q: GammaHom,
    /// `s: T* -> (μ')*`.
    pub s: GammaHom,
    /// `R* -> X_rad ⊕ T*`.
    pub r_incl: GammaHom,
}

#[derive(Clone, Debug)]
pub struct TResolutionData {
    pub datum: ReductiveDatum,
    pub provenance: Provenance,
    pub t_star: GammaModule,
    pub r_star: GammaModule,
    pub rho_star: GammaHom,
    /// `T* -> μ*`.
    pub l_star: GammaHom,
    /// `G* -> R*`.
    pub tor_map: GammaHom,
    pub pushout: Option<PushoutParts>,
}

impl TResolutionData {
    pub fn pi1d(&self) -> BoundedComplex {
        pi1d_from_resolution(self)
    }
}

/// `[X --β--> P]` in degrees -1, 0.
pub fn canonical_pi1d(d: &ReductiveDatum) -> Result<BoundedComplex> {
    Ok(BoundedComplex::two_term(d.pairing_map()?, -1))
}

pub fn canonical_resolution(d: &ReductiveDatum) -> Result<TResolutionData> {
    let beta = d.pairing_map()?;
    let (_, l_star) = equivariant_cokernel(&beta)?;
    let (_, tor_map) = equivariant_kernel(&beta)?;
    Ok(TResolutionData {
        datum: d.clone(),
        provenance: Provenance::Canonical,
        t_star: beta.target().clone(),
        r_star: beta.source().clone(),
        rho_star: beta,
        l_star,
        tor_map,
        pushout: None,
    })
}

pub fn resolution(d: &ReductiveDatum, kind: Provenance) -> Result<TResolutionData> {
    match kind {
        Provenance::Canonical => canonical_resolution(d),
        Provenance::Pushout => pushout_t_resolution(d),
    }
}

fn stack_rows(parts: &[&IntMatrix], cols: usize) -> IntMatrix {
    parts.iter().fold(IntMatrix::zeros(0, cols), |acc, p| acc.vstack(p))
}

/// The torus is `Z[Γ]`-free on one generator per orbit of Smith generators of `(μ')*`.
pub fn pushout_t_resolution(d: &ReductiveDatum) -> Result<TResolutionData> {
    let gamma = d.gamma().clone();
    let beta = d.pairing_map()?;
    let radical = d.radical_projection()?;
    let x = d.x_module();
    let (xr, p) = (radical.target().clone(), beta.target().clone());
    let (r, l) = (xr.group().ambient_rank(), p.group().ambient_rank());

    let sum_rp = GammaModule::direct_sum(&[&xr, &p])?;
    let j = GammaHom::new(x.clone(), sum_rp.clone(), stack_rows(&[radical.matrix(), beta.matrix()], d.rank()))?;
    if !j.hom().is_injective()? {
        return Err(Error::InvalidDatum(format!("{}: X -> X_rad ⊕ P is not injective", d.name())));
    }
    let (mu_raw, q_raw) = equivariant_cokernel(&j)?;
    let (mu_prime, to, _) = mu_raw.simplified();
    if mu_prime.group().free_rank() != 0 {
        return Err(Error::InvalidDatum(format!("{}: (μ')* is not finite", d.name())));
    }
    let q = q_raw.then(&to)?;
    let m = mu_prime.group().ambient_rank();

    // one generator per Γ-orbit, skipping those already in the span
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    let mut span_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m {
        let e = mu_prime.group().generator(i);
        if !span_cols.is_empty() {
            let span = AbHom::new_unchecked(
                FgAbelianGroup::free(span_cols.len()),
                mu_prime.group().clone(),
                IntMatrix::from_columns(m, &span_cols),
            );
            if span.preimage_element(&e)?.is_some() {
                continue;
            }
        }
        for h in gamma.elements() {
            span_cols.push(mu_prime.action_matrix(h).mul_vec(&e));
        }
        chosen.push(e);
    }
    let t_star = GammaModule::induced(gamma.clone(), chosen.len());
    let s_cols: Vec<Vec<BigInt>> = chosen
        .iter()
        .flat_map(|g| gamma.elements().map(move |h| (h, g)))
        .map(|(h, g)| mu_prime.action_matrix(h).mul_vec(g))
        .collect();
    let s = GammaHom::new(t_star.clone(), mu_prime.clone(), IntMatrix::from_columns(m, &s_cols))?;
    if !s.hom().is_surjective()? {
        return Err(Error::InvalidDatum(format!("{}: torus characters do not cover (μ')*", d.name())));
    }

    // R* = {(a, b) : q(a, 0) + s(b) = 0}
    let sum_rt = GammaModule::direct_sum(&[&xr, &t_star])?;
    let q_rad = q.matrix().select_cols(&(0..r).collect::<Vec<_>>());
    let cond = GammaHom::new(sum_rt.clone(), mu_prime.clone(), q_rad.hstack(s.matrix()))?;
    let (r_star, r_incl) = equivariant_kernel(&cond)?;
    let t = t_star.group().ambient_rank();
    let mut second = IntMatrix::zeros(t, r + t);
    second.set_block(0, r, &IntMatrix::identity(t));
    let rho_star = r_incl.then(&GammaHom::new(sum_rt.clone(), t_star.clone(), second)?)?;

    // l* = T* -> (μ')* -> μ*, the second map induced by X_rad ⊕ P -> P
    let (mu, _) = equivariant_cokernel(&beta)?;
    let from = mu_raw.simplified().2;
    let mut onto_p = IntMatrix::zeros(l, r + l);
    onto_p.set_block(0, r, &IntMatrix::identity(l));
    let l_mat = onto_p.mul(from.matrix()).mul(s.matrix());
    let l_star = GammaHom::new(t_star.clone(), mu, l_mat)?;

    // G* -> R*, χ -> (pr χ, 0)
    let (_, x0_incl) = equivariant_kernel(&beta)?;
    let mut embed = IntMatrix::zeros(r + t, r);
    embed.set_block(0, 0, &IntMatrix::identity(r));
    let into_sum = GammaHom::new(xr.clone(), sum_rt, embed)?;
    let tor_map = x0_incl.then(&radical)?.then(&into_sum)?.lift_through(&r_incl)?;

    Ok(TResolutionData {
        datum: d.clone(),
        provenance: Provenance::Pushout,
        t_star,
        r_star,
        rho_star,
        l_star,
        tor_map,
        pushout: Some(PushoutParts { radical, j, mu_prime, q, s, r_incl }),
    })
}

/// `[R* --ρ*--> T*]` in degrees -1, 0.
pub fn pi1d_from_resolution(r: &TResolutionData) -> BoundedComplex {
    BoundedComplex::two_term(r.rho_star.clone(), -1)
}

/// `1 -> G* -> R* -> T* -> μ* -> 1`, and for the pushout also `1 -> R₁* -> T* -> μ* -> 1`.
pub fn four_term_check(r: &TResolutionData) -> Result<Report> {
    let mut rep = Report::new();
    let tor = r.tor_map.hom();
    let rho = r.rho_star.hom();
    let l = r.l_star.hom();
    let zero_in = AbHom::zero(&FgAbelianGroup::zero(), tor.source());
    let zero_out = AbHom::zero(l.target(), &FgAbelianGroup::zero());
    let spots = [
        ("four-term-exact-at-characters", is_exact_at(&zero_in, tor)?),
        ("four-term-exact-at-R*", is_exact_at(tor, rho)?),
        ("four-term-exact-at-T*", is_exact_at(rho, l)?),
        ("four-term-exact-at-mu*", is_exact_at(l, &zero_out)?),
    ];
    for (name, ok) in spots {
        rep.push(Check::from_bool(name, ok, || format!("{} ({})", r.datum.name(), r.provenance)));
    }
    let x0 = r.datum.character_group()?;
    rep.push(Check::from_bool(
        "four-term-left-is-character-group",
        tor.source().is_isomorphic(x0.group()),
        || format!("{} vs {}", tor.source(), x0.group()),
    ));
    if r.provenance == Provenance::Pushout {
        let (r1, r1_incl) = equivariant_kernel(&r.l_star)?;
        let ok = is_exact_at(&AbHom::zero(&FgAbelianGroup::zero(), r1.group()), r1_incl.hom())?
            && is_exact_at(r1_incl.hom(), l)?
            && is_exact_at(l, &zero_out)?;
        rep.push(Check::from_bool("derived-resolution-exact", ok, || {
            format!("1 -> R1* -> T* -> μ* -> 1 fails for {}", r.datum.name())
        }));
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    EvidenceOnly,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::EvidenceOnly => "evidence-only",
            Verdict::Mismatch => "mismatch",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `identity`, `roof`, `invariants` or `evidence`.
    pub method: &'static str,
    pub report: Report,
    /// `(first, second)` per degree -1, 0.
    pub cohomology: Vec<(i32, Invariants, Invariants)>,
}

/// The common target `[X_H -> P ⊕ T*]` of both resolutions, `X_H` being the
/// characters of the pushout group, with the two comparison maps into it.
pub struct Roof {
    pub apex: BoundedComplex,
    pub from_canonical: ChainMap,
    pub from_pushout: ChainMap,
}

pub fn roof(d: &ReductiveDatum, canonical: &TResolutionData, pushout: &TResolutionData) -> Result<Roof> {
    let parts = pushout
        .pushout
        .as_ref()
        .ok_or_else(|| Error::InvalidDatum("second resolution is not a pushout".into()))?;
    let (xr, p, t) = (parts.radical.target(), canonical.t_star.clone(), pushout.t_star.clone());
    let (r, l, k) = (xr.group().ambient_rank(), p.group().ambient_rank(), t.group().ambient_rank());
    let sum = GammaModule::direct_sum(&[xr, &p, &t])?;
    let cond = GammaHom::new(sum.clone(), parts.mu_prime.clone(), parts.q.matrix().hstack(parts.s.matrix()))?;
    let (_, xh_incl) = equivariant_kernel(&cond)?;
    let pt = GammaModule::direct_sum(&[&p, &t])?;
    let mut drop_rad = IntMatrix::zeros(l + k, r + l + k);
    drop_rad.set_block(0, r, &IntMatrix::identity(l + k));
    let d_e = xh_incl.then(&GammaHom::new(sum.clone(), pt.clone(), drop_rad)?)?;
    let apex = BoundedComplex::two_term(d_e, -1);

    let canon = pi1d_from_resolution(canonical);
    let x_to_sum = GammaHom::new(
        d.x_module(),
        sum.clone(),
        stack_rows(&[parts.radical.matrix(), canonical.rho_star.matrix(), &IntMatrix::zeros(k, d.rank())], d.rank()),
    )?;
    let mut p_in = IntMatrix::zeros(l + k, l);
    p_in.set_block(0, 0, &IntMatrix::identity(l));
    let from_canonical = ChainMap::new(
        canon,
        apex.clone(),
        vec![(-1, x_to_sum.lift_through(&xh_incl)?), (0, GammaHom::new(p.clone(), pt.clone(), p_in)?)],
    )?;

    let push = pi1d_from_resolution(pushout);
    let mut spread = IntMatrix::zeros(r + l + k, r + k);
    spread.set_block(0, 0, &IntMatrix::identity(r));
    spread.set_block(r + l, r, &IntMatrix::identity(k));
    let sum_rt = parts.r_incl.target().clone();
    let r_to_sum = parts.r_incl.then(&GammaHom::new(sum_rt, sum, spread)?)?;
    let mut t_in = IntMatrix::zeros(l + k, k);
    t_in.set_block(l, 0, &IntMatrix::identity(k));
    let from_pushout = ChainMap::new(
        push,
        apex.clone(),
        vec![(-1, r_to_sum.lift_through(&xh_incl)?), (0, GammaHom::new(t, pt, t_in)?)],
    )?;
    Ok(Roof { apex, from_canonical, from_pushout })
}

/// Certified when an explicit zig-zag of equivariant quasi-isomorphisms is
/// built and checked; otherwise compares invariants.
pub fn compare_resolutions(d: &ReductiveDatum, r1: &TResolutionData, r2: &TResolutionData) -> Result<Comparison> {
    if r1.datum != *d || r2.datum != *d {
        return Err(Error::InvalidDatum("resolutions of different data".into()));
    }
    let (c1, c2) = (r1.pi1d(), r2.pi1d());
    let mut report = Report::new();
    let mut cohomology = Vec::new();
    let mut plain_ok = true;
    for n in [-1, 0] {
        let (h1, h2) = (c1.cohomology(n)?, c2.cohomology(n)?);
        let ok = h1.group().is_isomorphic(h2.group());
        plain_ok &= ok;
        report.push(Check::from_bool(format!("H^{n}-invariants-agree"), ok, || {
            format!("{} vs {}", h1.invariants(), h2.invariants())
        }));
        cohomology.push((n, h1.invariants().clone(), h2.invariants().clone()));
    }

    let structural = r1.provenance == r2.provenance && c1 == c2;
    let (method, certified) = if structural {
        report.push(Check::pass("identical-complexes"));
        ("identity", true)
    } else if r1.provenance != r2.provenance {
        let (canon, push) = if r1.provenance == Provenance::Canonical { (r1, r2) } else { (r2, r1) };
        let roof = roof(d, canon, push)?;
        let a = roof.from_canonical.is_quasi_iso()?;
        let b = roof.from_pushout.is_quasi_iso()?;
        report.push(Check::from_bool("roof-canonical-leg-quasi-iso", a, || "cone not acyclic".into()));
        report.push(Check::from_bool("roof-pushout-leg-quasi-iso", b, || "cone not acyclic".into()));
        ("roof", a && b)
    } else {
        ("invariants", false)
    };

    let (verdict, method) = if !plain_ok {
        (Verdict::Mismatch, method)
    } else if certified {
        (Verdict::Certified, method)
    } else if d.is_split() {
        (Verdict::Certified, "invariants")
    } else {
        let mut ok = true;
        for n in [-1, 0] {
            let (e1, e2) = (c1.cohomology(n)?.evidence()?, c2.cohomology(n)?.evidence()?);
            let same = e1 == e2;
            ok &= same;
            report.push(Check::from_bool(format!("H^{n}-evidence-agrees"), same, || format!("{e1:?} vs {e2:?}")));
        }
        (if ok { Verdict::EvidenceOnly } else { Verdict::Mismatch }, "evidence")
    };
    Ok(Comparison { verdict, method, report, cohomology })
}

/// A short exact sequence `1 -> G1 -> G2 -> G3 -> 1` at the level of root data.
#[derive(Clone, Debug)]
pub struct SesData {
    pub g1: ReductiveDatum,
    pub g2: ReductiveDatum,
    pub g3: ReductiveDatum,
    /// `X3 -> X2`.
    pub inclusion: IntMatrix,
    /// `X2 -> X1`.
    pub restriction: IntMatrix,
    /// `(index in G2, index in G1)`.
    pub part1: Vec<(usize, usize)>,
    /// `(index in G2, index in G3)`.
    pub part3: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SesOutcome {
    pub report: Report,
    pub i: Option<ChainMap>,
    pub p: Option<ChainMap>,
    pub les: Option<LongExactSequence>,
    /// `G3*, G2*, G1*, Pic G3, Pic G2, Pic G1`.
    pub six: Vec<(&'static str, Invariants)>,
    /// `G2* -> G1*` on cohomology.
    pub restriction_on_characters: Option<IntMatrix>,
}

pub const SES_LABELS: [&str; 6] = ["G3*", "G2*", "G1*", "Pic G3", "Pic G2", "Pic G1"];

impl SesData {
    /// `1 -> Gm -> GL(n) -> PGL(n) -> 1`.
    pub fn gm_gl_pgl(n: usize) -> Result<Self> {
        let g1 = ReductiveDatum::from_spec("T(1)")?;
        let g2 = ReductiveDatum::from_spec(&format!("GL({n})"))?;
        let g3 = ReductiveDatum::from_spec(&format!("PGL({n})"))?;
        let mut inclusion = IntMatrix::zeros(n, n - 1);
        for i in 0..n - 1 {
            inclusion.set(i, i, BigInt::one());
            inclusion.set(i + 1, i, -BigInt::one());
        }
        let restriction = IntMatrix::new(1, n, vec![BigInt::one(); n])?;
        Ok(SesData { g1, g2, g3, inclusion, restriction, part1: vec![], part3: (0..n - 1).map(|i| (i, i)).collect() })
    }

    /// `1 -> SL(n) -> GL(n) -> Gm -> 1`.
    pub fn sl_gl_gm(n: usize) -> Result<Self> {
        let g1 = ReductiveDatum::from_spec(&format!("SL({n})"))?;
        let g2 = ReductiveDatum::from_spec(&format!("GL({n})"))?;
        let g3 = ReductiveDatum::from_spec("T(1)")?;
        let inclusion = IntMatrix::new(n, 1, vec![BigInt::one(); n])?;
        let restriction = g2.datum().coroots().clone();
        Ok(SesData { g1, g2, g3, inclusion, restriction, part1: (0..n - 1).map(|i| (i, i)).collect(), part3: vec![] })
    }

    /// `P3 -> P2` and `P2 -> P1` from the partition.
    fn p_maps(&self) -> (IntMatrix, IntMatrix) {
        let (l1, l2, l3) = (self.g1.semisimple_rank(), self.g2.semisimple_rank(), self.g3.semisimple_rank());
        let mut p32 = IntMatrix::zeros(l2, l3);
        for &(i2, i3) in &self.part3 {
            p32.set(i2, i3, BigInt::one());
        }
        let mut p21 = IntMatrix::zeros(l1, l2);
        for &(i2, i1) in &self.part1 {
            p21.set(i1, i2, BigInt::one());
        }
        (p32, p21)
    }

    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        for (label, g) in [("G1", &self.g1), ("G2", &self.g2), ("G3", &self.g3)] {
            let v = g.validate();
            rep.push(Check::from_bool(format!("{label}-valid"), v.all_pass(), || {
                v.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", ")
            }));
        }
        let same_gamma = self.g1.gamma() == self.g2.gamma() && self.g2.gamma() == self.g3.gamma();
        rep.push(Check::from_bool("same-galois-group", same_gamma, || "groups differ".into()));
        let (n1, n2, n3) = (self.g1.rank(), self.g2.rank(), self.g3.rank());
        let shapes = self.inclusion.rows() == n2
            && self.inclusion.cols() == n3
            && self.restriction.rows() == n1
            && self.restriction.cols() == n2;
        rep.push(Check::from_bool("lattice-map-shapes", shapes, || {
            format!(
                "inclusion {}x{}, restriction {}x{}",
                self.inclusion.rows(),
                self.inclusion.cols(),
                self.restriction.rows(),
                self.restriction.cols()
            )
        }));
        if !shapes || !rep.all_pass() {
            return rep;
        }

        let (x1, x2, x3) = (FgAbelianGroup::free(n1), FgAbelianGroup::free(n2), FgAbelianGroup::free(n3));
        let inc = AbHom::new_unchecked(x3.clone(), x2.clone(), self.inclusion.clone());
        let res = AbHom::new_unchecked(x2, x1.clone(), self.restriction.clone());
        let exact = (|| -> Result<bool> {
            Ok(is_exact_at(&AbHom::zero(&FgAbelianGroup::zero(), &x3), &inc)?
                && is_exact_at(&inc, &res)?
                && is_exact_at(&res, &AbHom::zero(&x1, &FgAbelianGroup::zero()))?)
        })()
        .unwrap_or(false);
        rep.push(Check::from_bool("character-sequence-exact", exact, || "0 -> X3 -> X2 -> X1 -> 0 is not exact".into()));

        let equivariant = self.g1.gamma().elements().all(|g| {
            self.g2.action()[g].mul(&self.inclusion) == self.inclusion.mul(&self.g3.action()[g])
                && self.g1.action()[g].mul(&self.restriction) == self.restriction.mul(&self.g2.action()[g])
        });
        rep.push(Check::from_bool("lattice-maps-equivariant", equivariant, || "a lattice map does not commute with Γ".into()));

        let (l1, l2, l3) = (self.g1.semisimple_rank(), self.g2.semisimple_rank(), self.g3.semisimple_rank());
        let mut seen2: Vec<usize> = self.part1.iter().chain(&self.part3).map(|p| p.0).collect();
        let mut seen1: Vec<usize> = self.part1.iter().map(|p| p.1).collect();
        let mut seen3: Vec<usize> = self.part3.iter().map(|p| p.1).collect();
        seen2.sort_unstable();
        seen1.sort_unstable();
        seen3.sort_unstable();
        let partition = seen2 == (0..l2).collect::<Vec<_>>()
            && seen1 == (0..l1).collect::<Vec<_>>()
            && seen3 == (0..l3).collect::<Vec<_>>();
        rep.push(Check::from_bool("coroot-partition", partition, || {
            format!("G2 indices {seen2:?}, G1 indices {seen1:?}, G3 indices {seen3:?}")
        }));
        if !partition {
            return rep;
        }

        let mut root_bad = vec![];
        for &(i2, i3) in &self.part3 {
            if self.inclusion.mul_vec(self.g3.datum().roots().row(i3)) != self.g2.datum().roots().row(i2) {
                root_bad.push(format!("G3 root {i3} -> G2 root {i2}"));
            }
            if self.restriction.mul_vec(self.g2.datum().roots().row(i2)).iter().any(|v| v != &BigInt::from(0)) {
                root_bad.push(format!("G2 root {i2} does not vanish on G1"));
            }
        }
        for &(i2, i1) in &self.part1 {
            if self.restriction.mul_vec(self.g2.datum().roots().row(i2)) != self.g1.datum().roots().row(i1) {
                root_bad.push(format!("G2 root {i2} -> G1 root {i1}"));
            }
        }
        rep.push(Check::from_bool("roots-compatible", root_bad.is_empty(), || root_bad.join("; ")));

        let (p32, p21) = self.p_maps();
        let b1 = self.g1.datum().coroots();
        let b2 = self.g2.datum().coroots();
        let b3 = self.g3.datum().coroots();
        let sq3 = b2.mul(&self.inclusion) == p32.mul(b3);
        let sq1 = b1.mul(&self.restriction) == p21.mul(b2);
        rep.push(Check::from_bool("coroots-compatible", sq3 && sq1, || {
            format!("square at G3 commutes: {sq3}, square at G1 commutes: {sq1}")
        }));
        rep
    }
}

/// `0 -> π₁ᴰ(G3) -> π₁ᴰ(G2) -> π₁ᴰ(G1) -> 0` and its long exact sequence.
pub fn ses_to_complex_ses(s: &SesData) -> Result<SesOutcome> {
    let mut report = s.check();
    let mut out = SesOutcome { report: Report::new(), i: None, p: None, les: None, six: vec![], restriction_on_characters: None };
    if !report.all_pass() {
        out.report = report;
        return Ok(out);
    }
    let (a, b, c) = (canonical_pi1d(&s.g3)?, canonical_pi1d(&s.g2)?, canonical_pi1d(&s.g1)?);
    let (p32, p21) = s.p_maps();
    let i = ChainMap::new(
        a.clone(),
        b.clone(),
        vec![
            (-1, GammaHom::new(a.term(-1), b.term(-1), s.inclusion.clone())?),
            (0, GammaHom::new(a.term(0), b.term(0), p32)?),
        ],
    )?;
    let p = ChainMap::new(
        b.clone(),
        c.clone(),
        vec![
            (-1, GammaHom::new(b.term(-1), c.term(-1), s.restriction.clone())?),
            (0, GammaHom::new(b.term(0), c.term(0), p21)?),
        ],
    )?;
    let les = match les_of_ses(&i, &p) {
        Ok(l) => l,
        Err(Error::NotExact(w)) => {
            report.push(Check::fail("levelwise-exact", w));
            out.report = report;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    report.push(Check::pass("levelwise-exact"));

    // the six terms in degrees -1 and 0, bracketed by zeros
    let pick = |complex: &str, degree: i32| les.terms.iter().position(|t| t.complex == complex && t.degree == degree);
    let idx: Vec<usize> = [("X", -1), ("Y", -1), ("Z", -1), ("X", 0), ("Y", 0), ("Z", 0)]
        .iter()
        .map(|&(c, d)| pick(c, d).expect("degree in range"))
        .collect();
    let terms: Vec<&GammaModule> = idx.iter().map(|&k| &les.terms[k].module).collect();
    let maps: Vec<&GammaHom> = idx[..5].iter().map(|&k| &les.maps[k]).collect();
    let zero = FgAbelianGroup::zero();
    let mut chain: Vec<AbHom> = vec![AbHom::zero(&zero, terms[0].group())];
    chain.extend(maps.iter().map(|m| m.hom().clone()));
    chain.push(AbHom::zero(terms[5].group(), &zero));
    for (k, w) in chain.windows(2).enumerate() {
        let ok = is_exact_at(&w[0], &w[1])?;
        report.push(Check::from_bool(format!("exact-at-{}", SES_LABELS[k]), ok, || {
            format!("image and kernel differ at {}", SES_LABELS[k])
        }));
    }
    report.push(Check::from_bool("long-sequence-exact", les.is_exact(), || {
        let bad: Vec<usize> = les.exact.iter().enumerate().filter(|(_, e)| !**e).map(|(k, _)| k).collect();
        format!("fails at positions {bad:?}")
    }));

    let expected = [
        s.g3.character_group()?,
        s.g2.character_group()?,
        s.g1.character_group()?,
        s.g3.mu_dual()?,
        s.g2.mu_dual()?,
        s.g1.mu_dual()?,
    ];
    for k in 0..6 {
        let ok = terms[k].group().is_isomorphic(expected[k].group())
            && terms[k].evidence()? == expected[k].evidence()?;
        report.push(Check::from_bool(format!("term-{}-matches", SES_LABELS[k]), ok, || {
            format!("{} vs {}", terms[k].invariants(), expected[k].invariants())
        }));
    }
    out.six = SES_LABELS.iter().zip(&terms).map(|(l, t)| (*l, t.invariants().clone())).collect();
    out.restriction_on_characters = Some(maps[1].matrix().clone());
    out.report = report;
    out.i = Some(i);
    out.p = Some(p);
    out.les = Some(les);
    Ok(out)
}

/// `φ: G -> G'` through its lattice maps: `X' -> X` on characters and
/// `c: ZΦ∨ -> ZΦ'∨` on coroots (`l' × l`).
#[derive(Clone, Debug)]
pub struct DatumMorphism {
    pub source: ReductiveDatum,
    pub target: ReductiveDatum,
    pub xmap: IntMatrix,
    pub coroot_map: IntMatrix,
}

impl DatumMorphism {
    pub fn identity(d: &ReductiveDatum) -> Self {
        DatumMorphism {
            source: d.clone(),
            target: d.clone(),
            xmap: IntMatrix::identity(d.rank()),
            coroot_map: IntMatrix::identity(d.semisimple_rank()),
        }
    }

    /// `SL(n) -> PGL(n)`: `Q ⊂ P` on characters, identity on coroots.
    pub fn sl_to_pgl(n: usize) -> Result<Self> {
        let source = ReductiveDatum::from_spec(&format!("SL({n})"))?;
        let target = ReductiveDatum::from_spec(&format!("PGL({n})"))?;
        // α_i has weight coordinates given by row i of the Cartan matrix
        let xmap = source.datum().cartan().transpose();
        Ok(DatumMorphism { source, target, xmap, coroot_map: IntMatrix::identity(n - 1) })
    }

    /// `x -> x^k` on a rank-one torus.
    pub fn torus_power(k: i64) -> Result<Self> {
        let t = ReductiveDatum::from_spec("T(1)")?;
        Ok(DatumMorphism { source: t.clone(), target: t, xmap: IntMatrix::from_rows(&[[k]]), coroot_map: IntMatrix::zeros(0, 0) })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DatumMorphism) -> Result<DatumMorphism> {
        if self.target != next.source {
            return Err(Error::NotComposable("morphisms of data do not compose".into()));
        }
        Ok(DatumMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            xmap: self.xmap.mul(&next.xmap),
            coroot_map: next.coroot_map.mul(&self.coroot_map),
        })
    }
}

/// The chain map `π₁ᴰ(G') -> π₁ᴰ(G)`: `X' -> X` in degree -1, `cᵀ: P' -> P` in degree 0.
pub fn induced_map(phi: &DatumMorphism) -> Result<ChainMap> {
    let (src, tgt) = (canonical_pi1d(&phi.target)?, canonical_pi1d(&phi.source)?);
    let (n, n2) = (phi.source.rank(), phi.target.rank());
    let (l, l2) = (phi.source.semisimple_rank(), phi.target.semisimple_rank());
    if phi.xmap.rows() != n || phi.xmap.cols() != n2 || phi.coroot_map.rows() != l2 || phi.coroot_map.cols() != l {
        return Err(Error::DimensionMismatch("morphism matrices have the wrong shape".into()));
    }
    let deg0 = phi.coroot_map.transpose();
    let left = phi.source.datum().coroots().mul(&phi.xmap);
    let right = deg0.mul(phi.target.datum().coroots());
    if left != right {
        return Err(Error::InvalidDatum("the morphism is not compatible with the pairings".into()));
    }
    ChainMap::new(
        src.clone(),
        tgt.clone(),
        vec![
            (-1, GammaHom::new(src.term(-1), tgt.term(-1), phi.xmap.clone())?),
            (0, GammaHom::new(src.term(0), tgt.term(0), deg0)?),
        ],
    )
}
