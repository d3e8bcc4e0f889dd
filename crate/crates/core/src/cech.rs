//! The cochain complex `Cⁱ = F(X) ⊕ F(G)ⁱ` attached to `φ: F(X) -> F(G)`,
//! its contracting homotopy above degree 1, and its cohomology.
//!
//! Differentials, with `(a, b₁, …, bᵢ) ∈ Cⁱ`:
//!
//! ```text
//! δ⁰(a)             = (0, φa)
//! δ^{2r}(a, b)      = (0, φa − b₁, 0, b₂ − b₃, 0, …, b_{2r−2} − b_{2r−1}, 0, b_{2r})
//! δ^{2r+1}(a, b)    = (a, φa, b₂, b₂, …, b_{2r}, b_{2r}, 0)
//! λᵢ(a, b₁, …, bᵢ)  = (a, −b₁, b₃, …, bᵢ)
//! ```
//!
//! Empty ranges drop out, so `δ²(a, b₁, b₂) = (0, φa − b₁, 0, b₂)` and
//! `δ¹(a, b₁) = (a, φa, 0)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::abgrp::{AbHom, FgAbelianGroup};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::gammamod::{FiniteGroup, GammaHom, GammaModule};
use crate::homcx::BoundedComplex;
use crate::report::{Check, Report};

pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechInput {
    pub phi: AbHom,
}

impl CechInput {
    pub fn new(fx: FgAbelianGroup, fg: FgAbelianGroup, phi: IntMatrix) -> Result<Self> {
        Ok(CechInput { phi: AbHom::new(fx, fg, phi)? })
    }

    pub fn fx(&self) -> &FgAbelianGroup {
        self.phi.source()
    }

    pub fn fg(&self) -> &FgAbelianGroup {
        self.phi.target()
    }
}

#[derive(Clone, Debug)]
pub struct CechComplex {
    pub input: CechInput,
    pub max_degree: usize,
    /// `C⁰, …, C^max`.
    pub groups: Vec<FgAbelianGroup>,
    /// `δ⁰, …, δ^{max−1}`.
    pub diffs: Vec<AbHom>,
}

fn unit(m: &mut IntMatrix, r: usize, c: usize, n: usize, sign: i8) {
    for k in 0..n {
        m.set(r + k, c + k, if sign < 0 { -BigInt::one() } else { BigInt::one() });
    }
}

fn differential_matrix(phi: &IntMatrix, nx: usize, ng: usize, i: usize) -> IntMatrix {
    // row offset of slot s (1-based) in C^{i+1}, column offset of b_s in C^i
    let slot = |s: usize| nx + (s - 1) * ng;
    let mut m = IntMatrix::zeros(nx + (i + 1) * ng, nx + i * ng);
    if i == 0 {
        m.set_block(slot(1), 0, phi);
    } else if i % 2 == 0 {
        let r = i / 2;
        m.set_block(slot(1), 0, phi);
        unit(&mut m, slot(1), slot(1), ng, -1);
        for k in 1..r {
            unit(&mut m, slot(2 * k + 1), slot(2 * k), ng, 1);
            unit(&mut m, slot(2 * k + 1), slot(2 * k + 1), ng, -1);
        }
        unit(&mut m, slot(2 * r + 1), slot(2 * r), ng, 1);
    } else {
        let r = i / 2;
        unit(&mut m, 0, 0, nx, 1);
        m.set_block(slot(1), 0, phi);
        for k in 1..=r {
            unit(&mut m, slot(2 * k), slot(2 * k), ng, 1);
            unit(&mut m, slot(2 * k + 1), slot(2 * k), ng, 1);
        }
    }
    m
}

/// `λᵢ: Cⁱ -> C^{i−1}` for `i ≥ 2`.
fn homotopy_matrix(nx: usize, ng: usize, i: usize) -> IntMatrix {
    let slot = |s: usize| nx + (s - 1) * ng;
    let mut m = IntMatrix::zeros(nx + (i - 1) * ng, nx + i * ng);
    unit(&mut m, 0, 0, nx, 1);
    unit(&mut m, slot(1), slot(1), ng, -1);
    for s in 3..=i {
        unit(&mut m, slot(s - 1), slot(s), ng, 1);
    }
    m
}

pub fn build_complex(inp: &CechInput, max_degree: usize) -> Result<CechComplex> {
    if max_degree > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: MAX_DEGREE });
    }
    let (fx, fg) = (inp.fx(), inp.fg());
    let (nx, ng) = (fx.ambient_rank(), fg.ambient_rank());
    let groups: Vec<FgAbelianGroup> = (0..=max_degree)
        .map(|i| {
            let mut parts = vec![fx];
            parts.extend(std::iter::repeat(fg).take(i));
            FgAbelianGroup::direct_sum(&parts)
        })
        .collect();
    let diffs = (0..max_degree)
        .map(|i| AbHom::new(groups[i].clone(), groups[i + 1].clone(), differential_matrix(inp.phi.matrix(), nx, ng, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CechComplex { input: inp.clone(), max_degree, groups, diffs })
}

impl CechComplex {
    pub fn homotopy(&self, i: usize) -> Result<AbHom> {
        if i < 2 || i > self.max_degree {
            return Err(Error::DegreeOutOfRange { degree: i, max: self.max_degree });
        }
        let (nx, ng) = (self.input.fx().ambient_rank(), self.input.fg().ambient_rank());
        AbHom::new(self.groups[i].clone(), self.groups[i - 1].clone(), homotopy_matrix(nx, ng, i))
    }

    pub fn to_bounded(&self) -> Result<BoundedComplex> {
        let gamma = Arc::new(FiniteGroup::trivial());
        let terms: Vec<GammaModule> = self.groups.iter().map(|g| GammaModule::trivial(gamma.clone(), g.clone())).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| GammaHom::from_hom(terms[i].clone(), terms[i + 1].clone(), d.clone()))
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(0, terms, diffs)
    }
}

/// `δδ = 0` everywhere and `δ^{i−1}λᵢ + λ_{i+1}δⁱ = 1` for `2 ≤ i ≤ max − 1`.
pub fn contraction_check(c: &CechComplex) -> Result<Report> {
    let mut rep = Report::new();
    for i in 0..c.diffs.len().saturating_sub(1) {
        let dd = c.diffs[i].then(&c.diffs[i + 1])?;
        rep.push(Check::from_bool(format!("delta-squared-zero-{i}"), dd.is_zero(), || format!("{:?}", dd.matrix())));
    }
    for i in 2..c.max_degree {
        let left = c.homotopy(i)?.then(&c.diffs[i - 1])?;
        let right = c.diffs[i].then(&c.homotopy(i + 1)?)?;
        let sum = AbHom::new(c.groups[i].clone(), c.groups[i].clone(), left.matrix().add(right.matrix()))?;
        let ok = sum.equals(&AbHom::identity(&c.groups[i]));
        rep.push(Check::from_bool(format!("homotopy-identity-{i}"), ok, || format!("{:?}", sum.matrix())));
    }
    Ok(rep)
}

/// `Ȟ⁰` is `ker δ⁰` on the nose; higher degrees come from the cochain complex.
pub fn cech_cohomology(c: &CechComplex, i: usize) -> Result<FgAbelianGroup> {
    if i + 1 > c.max_degree {
        return Err(Error::DegreeOutOfRange { degree: i, max: c.max_degree.saturating_sub(1) });
    }
    if i == 0 {
        return Ok(c.diffs[0].kernel()?.0);
    }
    Ok(c.to_bounded()?.cohomology(i as i32)?.group().clone())
}
