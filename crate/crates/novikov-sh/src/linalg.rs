//! Exact linear algebra over the Novikov field: characteristic polynomials
//! by fraction-free elimination, Newton polygons, and eigenvalue-valuation
//! spectra with multiplicities.
//!
//! Eigenvalue data is extracted purely at the valuation level: the Newton
//! polygon of the characteristic polynomial already carries `(ev(λ), dim)`
//! for every generalized eigenspace, with no need for eigenvectors over a
//! field extension.

use std::fmt;

use num::rational::BigRational;
use thiserror::Error;

use crate::novikov::{Exponent, NovikovError, NovikovSeries, Valuation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("matrix entries must be exact (infinite precision)")]
    InexactEntries,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

/// Dense matrix with Novikov-series entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovMatrix {
    rows: usize,
    cols: usize,
    data: Vec<NovikovSeries>,
}

impl NovikovMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        NovikovMatrix {
            rows,
            cols,
            data: vec![NovikovSeries::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, NovikovSeries::from_int(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<NovikovSeries>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(NovikovMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NovikovSeries {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NovikovSeries) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|s| s.precision().is_infinite())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} · {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = NovikovSeries::zero();
                for l in 0..self.cols {
                    acc = acc.add(&self.get(i, l).mul(other.get(l, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape("add shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&NovikovSeries) -> NovikovSeries) -> Self {
        NovikovMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape("hstack row mismatch".into()));
        }
        let mut out = Self::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Vec<NovikovSeries> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<NovikovSeries>>) -> Result<Self, LinalgError> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Shape("column length mismatch".into()));
        }
        let n = cols.len();
        let mut out = Self::zero(rows, n);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Rank over the Novikov field, by fraction-free Gaussian elimination.
    /// Entries must be exact; pivot tests are then exact as well.
    pub fn rank(&self) -> Result<usize, LinalgError> {
        Ok(self.echelonize()?.1.len())
    }

    /// Fraction-free row echelon form; returns the reduced data and the
    /// list of `(row, col)` pivots.
    fn echelonize(&self) -> Result<(Vec<NovikovSeries>, Vec<(usize, usize)>), LinalgError> {
        if !self.is_exact() {
            return Err(LinalgError::InexactEntries);
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let at = |m: &Vec<NovikovSeries>, i: usize, j: usize| m[i * cols + j].clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut prev_pivot = NovikovSeries::from_int(1);
        let mut pivot_row = 0usize;
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            let found = (pivot_row..rows).find(|&r| !at(&m, r, col).is_zero());
            let Some(r) = found else { continue };
            if r != pivot_row {
                for j in 0..cols {
                    m.swap(pivot_row * cols + j, r * cols + j);
                }
            }
            let pivot = at(&m, pivot_row, col);
            // One Bareiss step below the pivot; divisions are exact.
            for i in pivot_row + 1..rows {
                for j in 0..cols {
                    if j == col {
                        continue;
                    }
                    let v = pivot
                        .mul(&at(&m, i, j))
                        .sub(&at(&m, i, col).mul(&at(&m, pivot_row, j)));
                    m[i * cols + j] = v.exact_div(&prev_pivot)?;
                }
                m[i * cols + col] = NovikovSeries::zero();
            }
            prev_pivot = pivot;
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        Ok((m, pivots))
    }

    /// A basis of the kernel (as vectors), fraction-free: each basis vector
    /// has exact Novikov-series entries and the set spans the kernel over
    /// the fraction field of the series ring.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<NovikovSeries>>, LinalgError> {
        let cols = self.cols;
        let (m, pivots) = self.echelonize()?;
        let at = |i: usize, j: usize| m[i * cols + j].clone();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();

        // Back-substitute once per free column, scaling by the product of
        // the pivots so every entry stays in the series ring.
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let full_prod = pivots
                .iter()
                .fold(NovikovSeries::from_int(1), |acc, &(r, c)| acc.mul(&at(r, c)));
            let mut x = vec![NovikovSeries::zero(); cols];
            x[f] = full_prod;
            for idx in (0..pivots.len()).rev() {
                let (r, c) = pivots[idx];
                // pivot·x_c = −Σ_{j>c} U_{r,j}·x_j
                let mut rhs = NovikovSeries::zero();
                for j in c + 1..cols {
                    let u = at(r, j);
                    if !u.is_zero() && !x[j].is_zero() {
                        rhs = rhs.add(&u.mul(&x[j]));
                    }
                }
                x[c] = rhs.neg().exact_div(&at(r, c))?;
            }
            basis.push(x);
        }
        Ok(basis)
    }
}

impl fmt::Display for NovikovMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Polynomial over the Novikov field; `coeffs[d]` is the degree-`d`
/// coefficient and the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovPolynomial {
    coeffs: Vec<NovikovSeries>,
}

impl NovikovPolynomial {
    pub fn new(mut coeffs: Vec<NovikovSeries>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        NovikovPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        NovikovPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, d: usize) -> NovikovSeries {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(NovikovSeries::zero)
    }

    pub fn coeffs(&self) -> &[NovikovSeries] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for d in 0..len {
            out.push(self.coeff(d).add(&other.coeff(d)));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for d in 0..len {
            out.push(self.coeff(d).sub(&other.coeff(d)));
        }
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![NovikovSeries::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    /// Exact polynomial division (must leave no remainder).
    pub fn exact_div(&self, other: &Self) -> Result<Self, LinalgError> {
        if other.is_zero() {
            return Err(LinalgError::Novikov(NovikovError::InvertZero));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut rem = self.clone();
        let db = other.degree();
        let lead = other.coeff(db);
        if self.degree() < db {
            return Err(LinalgError::Novikov(NovikovError::InexactDivision));
        }
        let mut out = vec![NovikovSeries::zero(); self.degree() - db + 1];
        while !rem.is_zero() && rem.degree() >= db {
            let dr = rem.degree();
            let q = rem.coeff(dr).exact_div(&lead)?;
            out[dr - db] = q.clone();
            let mut shifted = vec![NovikovSeries::zero(); dr - db];
            shifted.push(q);
            rem = rem.sub(&Self::new(shifted).mul(other));
        }
        if !rem.is_zero() {
            return Err(LinalgError::Novikov(NovikovError::InexactDivision));
        }
        Ok(Self::new(out))
    }
}

impl fmt::Display for NovikovPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Lower convex hull of `(degree index, coefficient valuation)`.
///
/// A factor `x^{d₀}` contributes `d₀` roots of valuation `+∞`; every hull
/// segment of horizontal length `ℓ` contributes `ℓ` roots whose common
/// valuation is the negated geometric slope of the segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    infinite_roots: usize,
    /// Hull vertices `(index, valuation)`, strictly increasing in index,
    /// geometric slopes strictly increasing left to right.
    vertices: Vec<(usize, Exponent)>,
}

impl NewtonPolygon {
    pub fn infinite_roots(&self) -> usize {
        self.infinite_roots
    }

    pub fn vertices(&self) -> &[(usize, Exponent)] {
        &self.vertices
    }

    /// Finite root valuations `(valuation, multiplicity)`, one per hull
    /// segment, in hull order (valuations strictly decreasing).
    pub fn root_valuations(&self) -> Vec<(Exponent, usize)> {
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let (i1, v1) = (&w[0].0, &w[0].1);
            let (i2, v2) = (&w[1].0, &w[1].1);
            let len = i2 - i1;
            let val = v1
                .sub(v2)
                .scale(&BigRational::new(1.into(), (len as i64).into()));
            out.push((val, len));
        }
        out
    }
}

/// Eigenvalue-valuation multiset of a matrix over the Novikov field.
///
/// Distinct eigenvalues sharing one valuation are reported as a single
/// entry whose multiplicity is the total dimension of their generalized
/// eigenspaces; the downstream threshold formulas only partition by
/// valuation, so the merge is harmless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationSpectrum {
    /// Multiplicity of the eigenvalue 0 (valuation `+∞`).
    infinite: usize,
    /// Finite valuations, strictly increasing.
    finite: Vec<(Exponent, usize)>,
}

impl ValuationSpectrum {
    pub fn new(infinite: usize, finite: Vec<(Exponent, usize)>) -> Self {
        let mut finite = finite;
        finite.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Exponent, usize)> = Vec::new();
        for (v, m) in finite {
            if m == 0 {
                continue;
            }
            if let Some(last) = merged.last_mut() {
                if last.0 == v {
                    last.1 += m;
                    continue;
                }
            }
            merged.push((v, m));
        }
        ValuationSpectrum {
            infinite,
            finite: merged,
        }
    }

    pub fn infinite_multiplicity(&self) -> usize {
        self.infinite
    }

    pub fn finite_entries(&self) -> &[(Exponent, usize)] {
        &self.finite
    }

    /// All entries, `+∞` first, then finite valuations increasing.
    pub fn entries(&self) -> Vec<(Valuation, usize)> {
        let mut out = Vec::new();
        if self.infinite > 0 {
            out.push((Valuation::Infinite, self.infinite));
        }
        for (v, m) in &self.finite {
            out.push((Valuation::Finite(v.clone()), *m));
        }
        out
    }

    pub fn total_multiplicity(&self) -> usize {
        self.infinite + self.finite.iter().map(|(_, m)| m).sum::<usize>()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.finite.iter().all(|(v, _)| !v.is_negative())
    }
}

impl fmt::Display for ValuationSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (v, m) in self.entries() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "({v}, {m})")?;
        }
        write!(f, "}}")
    }
}

/// `det(xI − M)` by fraction-free (Bareiss) elimination over the
/// polynomial ring. The leading principal minors of `xI − M` are monic in
/// `x`, so pivots never vanish and every intermediate division is exact.
pub fn charpoly(m: &NovikovMatrix) -> Result<NovikovPolynomial, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_exact() {
        return Err(LinalgError::InexactEntries);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(NovikovPolynomial::new(vec![NovikovSeries::from_int(1)]));
    }
    let x = NovikovPolynomial::new(vec![NovikovSeries::zero(), NovikovSeries::from_int(1)]);
    let mut w: Vec<NovikovPolynomial> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = NovikovPolynomial::new(vec![m.get(i, j).neg()]);
            if i == j {
                p = p.add(&x);
            }
            w.push(p);
        }
    }
    let mut prev = NovikovPolynomial::new(vec![NovikovSeries::from_int(1)]);
    for k in 0..n - 1 {
        let pivot = w[k * n + k].clone();
        debug_assert!(!pivot.is_zero(), "charpoly pivot vanished");
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.mul(&w[i * n + j]).sub(&w[i * n + k].mul(&w[k * n + j]));
                w[i * n + j] = num.exact_div(&prev)?;
            }
            w[i * n + k] = NovikovPolynomial::zero();
        }
        prev = pivot;
    }
    Ok(w[(n - 1) * n + (n - 1)].clone())
}

/// Newton polygon of a nonzero polynomial: zero low-order coefficients
/// contribute `+∞`-valuation roots, then the lower convex hull of the
/// remaining `(index, ev)` points.
pub fn newton_polygon(p: &NovikovPolynomial) -> Result<NewtonPolygon, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial);
    }
    let mut points: Vec<(usize, Exponent)> = Vec::new();
    for (d, c) in p.coeffs().iter().enumerate() {
        match c.valuation()? {
            Valuation::Finite(e) => points.push((d, e)),
            Valuation::Infinite => {}
        }
    }
    let infinite_roots = points.first().map(|&(d, _)| d).unwrap_or(0);
    // Lower hull by a monotone scan over indices.
    let mut hull: Vec<(usize, Exponent)> = Vec::new();
    for (d, v) in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2].clone();
            let (x2, y2) = hull[hull.len() - 1].clone();
            // Drop (x2,y2) when it lies on or above the chord (x1,y1)–(d,v).
            let lhs = y2.sub(&y1).scale_int((d - x1) as i64);
            let rhs = v.sub(&y1).scale_int((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((d, v));
    }
    Ok(NewtonPolygon {
        infinite_roots,
        vertices: hull,
    })
}

/// Eigenvalue-valuation spectrum of a square exact matrix.
pub fn spectrum(m: &NovikovMatrix) -> Result<ValuationSpectrum, LinalgError> {
    let cp = charpoly(m)?;
    let np = newton_polygon(&cp)?;
    Ok(ValuationSpectrum::new(
        np.infinite_roots(),
        np.root_valuations(),
    ))
}

/// `true` iff every entry of the spectrum has valuation `≥ 0`.
pub fn check_nonneg_valuations(s: &ValuationSpectrum) -> bool {
    s.all_nonnegative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> NovikovSeries {
        text.parse().unwrap()
    }

    fn exp(text: &str) -> Exponent {
        text.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> NovikovMatrix {
        NovikovMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|t| s(t)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Independent oracle: determinant of xI − M by permutation expansion.
    fn charpoly_oracle(m: &NovikovMatrix) -> NovikovPolynomial {
        let n = m.rows();
        let entry = |i: usize, j: usize| -> NovikovPolynomial {
            let mut p = NovikovPolynomial::new(vec![m.get(i, j).neg()]);
            if i == j {
                p = p.add(&NovikovPolynomial::new(vec![
                    NovikovSeries::zero(),
                    NovikovSeries::from_int(1),
                ]));
            }
            p
        };
        let mut acc = NovikovPolynomial::zero();
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p: &[usize], sign: i64| {
            let mut prod = NovikovPolynomial::new(vec![NovikovSeries::from_int(sign)]);
            for (i, &j) in p.iter().enumerate() {
                prod = prod.mul(&entry(i, j));
            }
            acc = acc.add(&prod);
        });
        acc
    }

    fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], i64)) {
        fn sign_of(p: &[usize]) -> i64 {
            let mut sign = 1i64;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    if p[i] > p[j] {
                        sign = -sign;
                    }
                }
            }
            sign
        }
        if k == p.len() {
            visit(p, sign_of(p));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, visit);
            p.swap(k, i);
        }
    }

    #[test]
    fn charpoly_1x1_zero() {
        let cp = charpoly(&mat(&[&["0"]])).unwrap();
        assert_eq!(cp.degree(), 1);
        assert!(cp.coeff(0).is_zero());
        assert!(cp.coeff(1).is_one());
    }

    #[test]
    fn charpoly_2x2() {
        // [[0, T],[1, 0]] → x² − T
        let m = mat(&[&["0", "T"], &["1", "0"]]);
        let cp = charpoly(&m).unwrap();
        assert_eq!(cp.coeff(0), s("-T"));
        assert!(cp.coeff(1).is_zero());
        assert!(cp.coeff(2).is_one());
    }

    #[test]
    fn charpoly_agrees_with_permutation_oracle() {
        let samples = [
            mat(&[&["1", "T", "0"], &["-1", "0", "T^2"], &["2", "1/2", "-T"]]),
            mat(&[
                &["0", "0", "0", "-3*T"],
                &["-1", "0", "0", "0"],
                &["0", "-1", "0", "T^(1/2)"],
                &["0", "0", "-1", "0"],
            ]),
        ];
        for m in samples {
            assert_eq!(charpoly(&m).unwrap(), charpoly_oracle(&m));
        }
    }

    #[test]
    fn charpoly_requires_square() {
        let m = NovikovMatrix::zero(2, 3);
        assert!(matches!(
            charpoly(&m),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn charpoly_rejects_inexact_entries() {
        let mut m = NovikovMatrix::zero(1, 1);
        m.set(0, 0, NovikovSeries::zero_mod(exp("4")));
        assert!(matches!(charpoly(&m), Err(LinalgError::InexactEntries)));
    }

    #[test]
    fn newton_polygon_simple_segment() {
        // x² − T: hull (0,1)—(2,0), one slope 1/2 of multiplicity 2.
        let p = NovikovPolynomial::new(vec![s("-T"), s("0"), s("1")]);
        let np = newton_polygon(&p).unwrap();
        assert_eq!(np.infinite_roots(), 0);
        assert_eq!(np.root_valuations(), vec![(exp("1/2"), 2)]);
    }

    #[test]
    fn newton_polygon_with_x_factor() {
        // x³ − T·x = x·(x² − T): one ∞-root, slope 1/2 with multiplicity 2.
        let p = NovikovPolynomial::new(vec![s("0"), s("-T"), s("0"), s("1")]);
        let np = newton_polygon(&p).unwrap();
        assert_eq!(np.infinite_roots(), 1);
        assert_eq!(np.root_valuations(), vec![(exp("1/2"), 2)]);
    }

    #[test]
    fn newton_polygon_binomial_family() {
        // x^d − c·T with ev(c) = 0: single slope 1/d, multiplicity d.
        for (m, k) in [(1usize, 1usize), (3, 1), (4, 2)] {
            let d = m + 1 - k;
            let mut coeffs = vec![NovikovSeries::zero(); d + 1];
            coeffs[0] = s("-7*T");
            coeffs[d] = s("1");
            let np = newton_polygon(&NovikovPolynomial::new(coeffs)).unwrap();
            assert_eq!(
                np.root_valuations(),
                vec![(Exponent::from_ratio(1, d as i64), d)]
            );
        }
    }

    #[test]
    fn newton_polygon_two_segments() {
        // (x − 1)(x − T) = x² − (1+T)x + T: valuations 0 and 1.
        let p = NovikovPolynomial::new(vec![s("T"), s("-1 - T"), s("1")]);
        let np = newton_polygon(&p).unwrap();
        assert_eq!(np.root_valuations(), vec![(exp("1"), 1), (exp("0"), 1)]);
    }

    #[test]
    fn newton_polygon_rejects_zero() {
        assert!(matches!(
            newton_polygon(&NovikovPolynomial::zero()),
            Err(LinalgError::ZeroPolynomial)
        ));
    }

    #[test]
    fn spectrum_of_zero_matrix() {
        let sp = spectrum(&NovikovMatrix::zero(3, 3)).unwrap();
        assert_eq!(sp.infinite_multiplicity(), 3);
        assert!(sp.finite_entries().is_empty());
    }

    #[test]
    fn spectrum_of_diagonal() {
        // diag(T, T, T²) → {(1,2),(2,1)}
        let m = mat(&[&["T", "0", "0"], &["0", "T", "0"], &["0", "0", "T^2"]]);
        let sp = spectrum(&m).unwrap();
        assert_eq!(sp.infinite_multiplicity(), 0);
        assert_eq!(sp.finite_entries(), &[(exp("1"), 2), (exp("2"), 1)]);
        assert_eq!(sp.total_multiplicity(), 3);
    }

    #[test]
    fn spectrum_companion_matrices() {
        // Companion of x^d − c·T^e: spectrum {(e/d, d)}.
        for (d, e, c) in [(2usize, 1i64, "3"), (3, 2, "-1"), (4, 3, "5/2")] {
            let mut m = NovikovMatrix::zero(d, d);
            for i in 1..d {
                m.set(i, i - 1, NovikovSeries::from_int(1));
            }
            let corner = s(c).mul(&NovikovSeries::t_pow(Exponent::from_int(e)));
            m.set(0, d - 1, corner);
            let sp = spectrum(&m).unwrap();
            assert_eq!(sp.finite_entries(), &[(Exponent::from_ratio(e, d as i64), d)]);
        }
    }

    #[test]
    fn nonneg_check() {
        let pos = ValuationSpectrum::new(1, vec![(exp("1/3"), 3)]);
        assert!(check_nonneg_valuations(&pos));
        let neg = ValuationSpectrum::new(0, vec![(exp("-1"), 1)]);
        assert!(!check_nonneg_valuations(&neg));
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&["1", "T", "0"], &["2", "2*T", "0"], &["0", "0", "1"]]);
        assert_eq!(m.rank().unwrap(), 2);
        let ker = m.kernel_basis().unwrap();
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        for i in 0..3 {
            let mut acc = NovikovSeries::zero();
            for j in 0..3 {
                acc = acc.add(&m.get(i, j).mul(&v[j]));
            }
            assert!(acc.is_exactly_zero());
        }
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        let m = mat(&[&["1", "T"], &["T", "1"]]);
        assert_eq!(m.rank().unwrap(), 2);
        assert!(m.kernel_basis().unwrap().is_empty());
    }

    #[test]
    fn kernel_vectors_annihilate_random_shapes() {
        // A deliberately rank-deficient 4x5 with Novikov entries.
        let m = mat(&[
            &["1", "0", "T", "2", "0"],
            &["0", "1", "-1", "T^2", "1"],
            &["1", "1", "T - 1", "2 + T^2", "1"],
            &["2", "0", "2*T", "4", "0"],
        ]);
        let r = m.rank().unwrap();
        let ker = m.kernel_basis().unwrap();
        assert_eq!(r + ker.len(), 5);
        for v in &ker {
            for i in 0..m.rows() {
                let mut acc = NovikovSeries::zero();
                for j in 0..m.cols() {
                    acc = acc.add(&m.get(i, j).mul(&v[j]));
                }
                assert!(acc.is_exactly_zero());
            }
        }
    }
}
