//! Exact integer linear algebra.
//!
//! Everything is arbitrary precision. Hermite form is row-style with positive
//! pivots and reduced entries above each pivot; Smith form has a nonnegative
//! diagonal with `d1 | d2 | ...`. Pivots are always the entry of minimal
//! nonzero absolute value, ties broken by lowest `(row, col)`, so the
//! transforms are reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Small-integer constructor, mostly for tests and catalog tables.
    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: nrows, cols, data })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    /// `n x n` diagonal matrix.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// A zero-row or zero-column matrix read from JSON carries no column
    /// count; this fixes the shape once the context knows it.
    pub fn reshape_empty(self, rows: usize, cols: usize) -> Result<Self> {
        if self.rows == rows && self.cols == cols {
            return Ok(self);
        }
        if self.data.is_empty() && rows * cols == 0 {
            return Ok(Self::zeros(rows, cols));
        }
        Err(Error::DimensionMismatch(format!(
            "expected {rows}x{cols}, found {}x{}",
            self.rows, self.cols
        )))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        IntMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        IntMatrix { rows: self.rows, cols, data }
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &IntMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.get(r, c).clone();
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &IntMatrix, sign: i8) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                let x = b.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let slot = &mut self.data[(r0 + r) * self.cols + c0 + c];
                if sign >= 0 {
                    *slot += x;
                } else {
                    *slot -= x;
                }
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= k * row[src]
    fn row_submul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let t = s * k;
            self.data[dst * self.cols + c] -= t;
        }
    }

    /// col[dst] -= k * col[src]
    fn col_submul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let t = s * k;
            self.data[r * self.cols + dst] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        echelon(&mut m, None, false).len()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// True when square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows_strings())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_rows_strings();
        write!(f, "[")?;
        for (i, r) in rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    fn to_rows_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|x| x.to_string()).collect()).collect()
    }
}

// JSON: array of rows, each an array of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in self.to_rows_strings() {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Str(String),
    Num(i64),
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<JsonInt>> = Vec::deserialize(d)?;
        let cols = raw.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(raw.len());
        for r in raw {
            let mut row = Vec::with_capacity(r.len());
            for x in r {
                row.push(match x {
                    JsonInt::Str(s) => s
                        .trim()
                        .parse::<BigInt>()
                        .map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}")))?,
                    JsonInt::Num(n) => BigInt::from(n),
                });
            }
            rows.push(row);
        }
        IntMatrix::from_bigint_rows(rows, cols).map_err(de::Error::custom)
    }
}

/// Row echelon form in place. With `reduce`, entries above each pivot are
/// brought into `[0, pivot)` and pivots made positive (Hermite form).
/// Every row operation is mirrored on `track`. Returns pivot positions.
fn echelon(m: &mut IntMatrix, mut track: Option<&mut IntMatrix>, reduce: bool) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let mut found = false;
        loop {
            // minimal nonzero |entry| in column c at or below r
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                let x = m.get(i, c);
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |b| x.abs() < m.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            found = true;
            m.swap_rows(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, p);
            }
            let mut clean = true;
            for i in r + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let q = m.get(i, c).div_floor(m.get(r, c));
                m.row_submul(i, r, &q);
                if let Some(t) = track.as_deref_mut() {
                    t.row_submul(i, r, &q);
                }
                if !m.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if reduce {
            if m.get(r, c).is_negative() {
                m.negate_row(r);
                if let Some(t) = track.as_deref_mut() {
                    t.negate_row(r);
                }
            }
            for i in 0..r {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let q = m.get(i, c).div_floor(m.get(r, c));
                m.row_submul(i, r, &q);
                if let Some(t) = track.as_deref_mut() {
                    t.row_submul(i, r, &q);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// Row Hermite normal form: returns `(H, U)` with `H = U * M`, `U` unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    echelon(&mut h, Some(&mut u), true);
    (h, u)
}

/// Nonzero rows of the Hermite form: the canonical basis of the row lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let r = echelon(&mut h, None, true).len();
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Full Smith decomposition `D = U * M * V`, with `V^-1` as well.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }
}

fn smith_core(m: &IntMatrix, track_u: bool, track_v: bool) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = if track_u { IntMatrix::identity(m.rows) } else { IntMatrix::zeros(0, 0) };
    let mut v = if track_v { IntMatrix::identity(m.cols) } else { IntMatrix::zeros(0, 0) };
    let mut v_inv = v.clone();
    let n = m.rows.min(m.cols);

    'outer: for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            d.swap_rows(t, pi);
            d.swap_cols(t, pj);
            if track_u {
                u.swap_rows(t, pi);
            }
            if track_v {
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
            }

            let mut dirty = false;
            for i in t + 1..d.rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.row_submul(i, t, &q);
                if track_u {
                    u.row_submul(i, t, &q);
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..d.cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.col_submul(j, t, &q);
                if track_v {
                    v.col_submul(j, t, &q);
                    // inverse of the column op acts on rows of V^-1
                    let neg = -&q;
                    v_inv.row_submul(t, j, &neg);
                }
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block
            let piv = d.get(t, t).clone();
            let offender = (t + 1..d.rows).find(|&i| (t + 1..d.cols).any(|j| !d.get(i, j).is_multiple_of(&piv)));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    d.row_submul(t, i, &minus_one);
                    if track_u {
                        u.row_submul(t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            if track_u {
                u.negate_row(t);
            }
        }
    }
    SmithDecomposition { u, d, v, v_inv }
}

/// Smith normal form: `(U, D, V)` with `D = U * M * V`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_core(m, true, true);
    (s.u, s.d, s.v)
}

pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    smith_core(m, true, true)
}

/// Smith form with only `V`, `V^-1` tracked.
pub(crate) fn smith_right(m: &IntMatrix) -> SmithDecomposition {
    smith_core(m, false, true)
}

/// Invariant factors (nonzero Smith diagonal) without transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_core(m, false, false).nonzero_diagonal()
}

/// Rows form a lattice basis of `{x : M x = 0}`, in Hermite form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    // Row operations preserve the kernel, so shrink tall inputs first.
    let mut e = m.clone();
    let r = echelon(&mut e, None, false).len();
    let e = e.select_rows(&(0..r).collect::<Vec<_>>());
    let mut t = e.transpose();
    let mut u = IntMatrix::identity(m.cols);
    let rank = echelon(&mut t, Some(&mut u), false).len();
    let k = u.select_rows(&(rank..m.cols).collect::<Vec<_>>());
    hnf_basis(&k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<BigInt>,
    /// Rows span the solutions of the homogeneous system.
    pub kernel: IntMatrix,
}

/// Solver for `M x = b` over the integers, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    rows: usize,
    cols: usize,
    smith: SmithDecomposition,
    diag: Vec<BigInt>,
    kernel: IntMatrix,
}

impl LinearSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let smith = smith_core(m, true, true);
        let diag = smith.nonzero_diagonal();
        let r = diag.len();
        let kernel = hnf_basis(&smith.v.select_cols(&(r..m.cols).collect::<Vec<_>>()).transpose());
        LinearSolver { rows: m.rows, cols: m.cols, smith, diag, kernel }
    }

    pub fn kernel(&self) -> &IntMatrix {
        &self.kernel
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let c = self.smith.u.mul_vec(b);
        let r = self.diag.len();
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&self.diag[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        Ok(Some(self.smith.v.mul_vec(&y)))
    }
}

/// One solution of `M x = b` plus a kernel basis, or `None` if unsolvable.
pub fn solve_linear(m: &IntMatrix, b: &[BigInt]) -> Result<Option<LinearSolution>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a {}x{} system",
            b.len(),
            m.rows,
            m.cols
        )));
    }
    let solver = LinearSolver::new(m);
    Ok(solver
        .solve(b)?
        .map(|particular| LinearSolution { particular, kernel: solver.kernel.clone() }))
}

pub fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
