//! Quantum-cohomology model of `E = O(-k) → CP^m`: the matrix of quantum
//! cup product with the pulled-back first Chern class on the monomial
//! basis `{1, x, …, x^m}`, and its valuation spectrum.
//!
//! The single-variable presentation `x^{m+1} = u·T·x^k` is not written
//! down from memory: the unit `u` is derived from the mirror
//! superpotential's critical locus at construction time, so the only
//! hard-coded structure is the basis and the multiplication rule.

use std::fmt;

use num::rational::BigRational;
use thiserror::Error;

use crate::linalg::{spectrum, LinalgError, NovikovMatrix, ValuationSpectrum};
use crate::novikov::{Exponent, NovikovSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuantumError {
    #[error("geometry requires 1 <= k <= m, got m={m}, k={k}")]
    InvalidGeometry { m: usize, k: usize },
    #[error("presentation derivation failed: {0}")]
    Derivation(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The pair `(m, k)` determining `E = O(-k) → CP^m`.
///
/// The range `1 ≤ k ≤ m` keeps `E` in the monotone regime: with
/// `κ = m+1` the monotonicity constant `κ − k` stays positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineBundleGeometry {
    m: usize,
    k: usize,
}

impl LineBundleGeometry {
    pub fn new(m: usize, k: usize) -> Result<Self, QuantumError> {
        if k < 1 || k > m {
            return Err(QuantumError::InvalidGeometry { m, k });
        }
        Ok(LineBundleGeometry { m, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `dim_Λ QH*(E) = m + 1`.
    pub fn qh_dimension(&self) -> usize {
        self.m + 1
    }
}

impl fmt::Display for LineBundleGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(-{}) -> CP^{}", self.k, self.m)
    }
}

/// The derived single-variable presentation `x^{m+1} = unit·T·x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    geometry: LineBundleGeometry,
    unit: BigRational,
}

impl Presentation {
    pub fn geometry(&self) -> &LineBundleGeometry {
        &self.geometry
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    /// Degree of the nonzero-eigenvalue factor `x^{m+1−k} − unit·T`.
    pub fn nonzero_factor_degree(&self) -> usize {
        self.geometry.m + 1 - self.geometry.k
    }

    /// `x^{m+1}` rewritten in the basis: the only nonzero coordinate is
    /// `unit·T` at `x^k`.
    pub fn reduce_top_power(&self) -> Vec<NovikovSeries> {
        let mut out = vec![NovikovSeries::zero(); self.geometry.m + 1];
        out[self.geometry.k] = NovikovSeries::t().scalar_mul(&self.unit);
        out
    }

    pub fn render(&self) -> String {
        format!(
            "x^{} = {}*T*x^{}",
            self.geometry.m + 1,
            self.unit,
            self.geometry.k
        )
    }
}

/// Derive the presentation from the mirror superpotential.
///
/// The eliminated relation `z^{m+1−k} = u·T` induces the factor
/// `x^{m+1−k} − u·T` of the presentation, and specializing `T ↦ 0`
/// recovers the classical truncation `x^{m+1} = 0`.
pub fn build_presentation(g: &LineBundleGeometry) -> Result<Presentation, QuantumError> {
    let relation = crate::mirror::eliminate_critical_locus(g)
        .map_err(|e| QuantumError::Derivation(e.to_string()))?;
    if relation.degree != g.m + 1 - g.k {
        return Err(QuantumError::Derivation(format!(
            "eliminated degree {} does not match m+1-k = {}",
            relation.degree,
            g.m + 1 - g.k
        )));
    }
    Ok(Presentation {
        geometry: *g,
        unit: relation.unit,
    })
}

/// The `(m+1) × (m+1)` matrix of multiplication by `−k·x` on
/// `{1, x, …, x^m}` modulo the presentation relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernOperator {
    matrix: NovikovMatrix,
    presentation: Presentation,
}

impl ChernOperator {
    pub fn matrix(&self) -> &NovikovMatrix {
        &self.matrix
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Specialize `T ↦ 0`, the classical cup-product action.
    pub fn classical_limit(&self) -> NovikovMatrix {
        self.matrix.map(|s| {
            let mut kept = Vec::new();
            for (e, c) in s.terms() {
                if e.is_zero() {
                    kept.push((e.clone(), c.clone()));
                }
            }
            NovikovSeries::from_terms(kept, crate::novikov::Precision::Infinite)
        })
    }
}

/// Matrix of quantum cup product with `ρ*c₁^E = −k·x`.
pub fn chern_matrix(g: &LineBundleGeometry) -> Result<ChernOperator, QuantumError> {
    let presentation = build_presentation(g)?;
    let n = g.m + 1;
    let minus_k = BigRational::from_integer((-(g.k as i64)).into());
    let mut matrix = NovikovMatrix::zero(n, n);
    for j in 0..n {
        // (−k·x)·x^j
        if j < g.m {
            matrix.set(j + 1, j, NovikovSeries::constant(minus_k.clone()));
        } else {
            for (i, coeff) in presentation.reduce_top_power().into_iter().enumerate() {
                matrix.set(i, j, coeff.scalar_mul(&minus_k));
            }
        }
    }
    Ok(ChernOperator {
        matrix,
        presentation,
    })
}

/// The valuation spectrum of the Chern operator, repackaged with the
/// structure the subbundle theorems consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumSpectrum {
    geometry: LineBundleGeometry,
    spectrum: ValuationSpectrum,
    zero_multiplicity: usize,
    nonzero_valuation: Exponent,
}

impl QuantumSpectrum {
    pub fn geometry(&self) -> &LineBundleGeometry {
        &self.geometry
    }

    pub fn spectrum(&self) -> &ValuationSpectrum {
        &self.spectrum
    }

    /// `dim QH*₀(E)`.
    pub fn zero_multiplicity(&self) -> usize {
        self.zero_multiplicity
    }

    /// The common valuation of the nonzero eigenvalues.
    pub fn nonzero_valuation(&self) -> &Exponent {
        &self.nonzero_valuation
    }
}

/// Compute the spectrum and verify the model-level constraints: the zero
/// eigenspace has dimension `k` and all nonzero eigenvalues share the
/// valuation `1/(m+1−k)`.
pub fn quantum_spectrum(g: &LineBundleGeometry) -> Result<QuantumSpectrum, QuantumError> {
    let op = chern_matrix(g)?;
    let sp = spectrum(op.matrix())?;
    let inconsistent = |msg: String| Err(QuantumError::ModelInconsistency(msg));
    if sp.total_multiplicity() != g.qh_dimension() {
        return inconsistent(format!(
            "spectrum multiplicities sum to {}, expected {}",
            sp.total_multiplicity(),
            g.qh_dimension()
        ));
    }
    if sp.infinite_multiplicity() != g.k {
        return inconsistent(format!(
            "zero eigenspace has dimension {}, expected k = {}",
            sp.infinite_multiplicity(),
            g.k
        ));
    }
    let expected = Exponent::from_ratio(1, (g.m + 1 - g.k) as i64);
    let finite = sp.finite_entries();
    if finite.len() != 1 || finite[0].0 != expected || finite[0].1 != g.m + 1 - g.k {
        return inconsistent(format!(
            "nonzero eigenvalues {:?} deviate from valuation 1/(m+1-k)",
            finite
        ));
    }
    Ok(QuantumSpectrum {
        geometry: *g,
        spectrum: sp,
        zero_multiplicity: g.k,
        nonzero_valuation: expected,
    })
}

/// `dim_Λ SH*(E) = (m+1) − dim QH*₀(E) = m+1−k`.
pub fn total_sh_dimension(g: &LineBundleGeometry) -> Result<usize, QuantumError> {
    let qs = quantum_spectrum(g)?;
    Ok(g.qh_dimension() - qs.zero_multiplicity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::Valuation;
    use num::Zero;

    fn geom(m: usize, k: usize) -> LineBundleGeometry {
        LineBundleGeometry::new(m, k).unwrap()
    }

    fn exp(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn geometry_range() {
        assert!(LineBundleGeometry::new(3, 0).is_err());
        assert!(LineBundleGeometry::new(2, 3).is_err());
        assert!(LineBundleGeometry::new(4, 4).is_ok());
    }

    #[test]
    fn presentation_m1_k1() {
        // x² = u·T·x with a valuation-zero unit; elimination gives u = 1.
        let p = build_presentation(&geom(1, 1)).unwrap();
        assert_eq!(p.render(), "x^2 = 1*T*x");
        assert!(!p.unit().is_zero());
        assert_eq!(p.nonzero_factor_degree(), 1);
    }

    #[test]
    fn presentation_t_zero_truncation() {
        // Setting T = 0 kills the right-hand side entirely: x^{m+1} = 0.
        for (m, k) in [(1usize, 1usize), (3, 2), (4, 1)] {
            let p = build_presentation(&geom(m, k)).unwrap();
            for c in p.reduce_top_power() {
                let has_constant = c.terms().any(|(e, _)| e.is_zero());
                assert!(!has_constant, "T=0 must recover classical truncation");
            }
        }
    }

    #[test]
    fn presentation_nonzero_factor_degree() {
        assert_eq!(build_presentation(&geom(3, 2)).unwrap().nonzero_factor_degree(), 2);
    }

    /// Independent oracle: multiply basis monomials by −k·x and reduce
    /// modulo x^{m+1} = u·T·x^k by direct substitution.
    fn chern_column_oracle(p: &Presentation, j: usize) -> Vec<NovikovSeries> {
        let g = p.geometry();
        let n = g.m() + 1;
        let minus_k = BigRational::from_integer((-(g.k() as i64)).into());
        // (−k·x)·x^j = −k·x^{j+1}
        let mut out = vec![NovikovSeries::zero(); n];
        if j + 1 <= g.m() {
            out[j + 1] = NovikovSeries::constant(minus_k);
        } else {
            for (i, c) in p.reduce_top_power().into_iter().enumerate() {
                out[i] = c.scalar_mul(&minus_k);
            }
        }
        out
    }

    #[test]
    fn chern_matrix_m1_k1() {
        let op = chern_matrix(&geom(1, 1)).unwrap();
        let m = op.matrix();
        // Sub-diagonal −k, T-weighted corner from the relation.
        assert_eq!(m.get(1, 0), &NovikovSeries::from_int(-1));
        assert!(m.get(0, 0).is_zero());
        assert!(m.get(0, 1).is_zero());
        assert_eq!(m.get(1, 1), &NovikovSeries::t().neg());
    }

    #[test]
    fn chern_matrix_matches_modular_oracle() {
        for (m, k) in [(1usize, 1usize), (2, 1), (3, 2), (4, 3)] {
            let op = chern_matrix(&geom(m, k)).unwrap();
            for j in 0..=m {
                let col = op.matrix().column(j);
                let expect = chern_column_oracle(op.presentation(), j);
                assert_eq!(col, expect, "(m,k)=({m},{k}), column {j}");
            }
        }
    }

    #[test]
    fn chern_matrix_low_columns_have_no_t() {
        for (m, k) in [(3usize, 1usize), (4, 2)] {
            let op = chern_matrix(&geom(m, k)).unwrap();
            for j in 0..m {
                for i in 0..=m {
                    let entry = op.matrix().get(i, j);
                    assert!(entry.terms().all(|(e, _)| e.is_zero()));
                }
            }
        }
    }

    #[test]
    fn classical_limit_is_nilpotent() {
        for (m, k) in [(1usize, 1usize), (3, 1), (4, 4)] {
            let op = chern_matrix(&geom(m, k)).unwrap();
            let n0 = op.classical_limit();
            let mut power = n0.clone();
            for _ in 0..m {
                power = power.mul(&n0).unwrap();
            }
            // N^{m+1} = 0.
            for i in 0..=m {
                for j in 0..=m {
                    assert!(power.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn spectrum_m1_k1() {
        let qs = quantum_spectrum(&geom(1, 1)).unwrap();
        assert_eq!(
            qs.spectrum().entries(),
            vec![(Valuation::Infinite, 1), (Valuation::Finite(exp("1")), 1)]
        );
    }

    #[test]
    fn spectrum_m3_k1() {
        let qs = quantum_spectrum(&geom(3, 1)).unwrap();
        assert_eq!(
            qs.spectrum().entries(),
            vec![(Valuation::Infinite, 1), (Valuation::Finite(exp("1/3")), 3)]
        );
    }

    #[test]
    fn spectrum_m3_k3() {
        let qs = quantum_spectrum(&geom(3, 3)).unwrap();
        assert_eq!(
            qs.spectrum().entries(),
            vec![(Valuation::Infinite, 3), (Valuation::Finite(exp("1")), 1)]
        );
    }

    #[test]
    fn sh_dimension_examples() {
        assert_eq!(total_sh_dimension(&geom(1, 1)).unwrap(), 1);
        assert_eq!(total_sh_dimension(&geom(3, 1)).unwrap(), 3);
        assert_eq!(total_sh_dimension(&geom(3, 3)).unwrap(), 1);
    }

    #[test]
    fn spectrum_nonnegative_on_grid() {
        for m in 1..=4 {
            for k in 1..=m {
                let qs = quantum_spectrum(&geom(m, k)).unwrap();
                assert!(crate::linalg::check_nonneg_valuations(qs.spectrum()));
                assert_eq!(qs.spectrum().total_multiplicity(), m + 1);
            }
        }
    }

    #[test]
    fn sh_dimension_matches_jacobian_rank() {
        for m in 1..=4 {
            for k in 1..=m {
                let g = geom(m, k);
                assert_eq!(
                    total_sh_dimension(&g).unwrap(),
                    crate::mirror::jac_rank_global(&g).unwrap()
                );
            }
        }
    }
}
