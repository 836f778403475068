//! Dimension formulas for the reduced cohomology of disk subbundles and
//! the completed cohomology of annulus subbundles, evaluated exactly from
//! a valuation spectrum.
//!
//! Radii enter only through the normalized combination `kπR²`, accepted
//! as an exact rational (or `+∞` for the full space). The threshold
//! conventions are strict: the disk theory discards eigenvalues with
//! `ev(λ) > kπR²`, and an annulus window `(r₁, r₂]` is half-open.

use std::fmt;

use num::rational::BigRational;
use num::Signed;
use thiserror::Error;

use crate::linalg::ValuationSpectrum;
use crate::novikov::{Exponent, Valuation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShError {
    #[error("normalized radius must be non-negative, got {0}")]
    NegativeRadius(String),
    #[error("invalid sweep range: {0}")]
    BadRange(String),
}

/// The quantity `kπR²`, exact; `+∞` encodes the full space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedRadius {
    Finite(BigRational),
    Infinite,
}

impl NormalizedRadius {
    /// Panics on negative input; radii are squares scaled by `kπ > 0`.
    pub fn finite(q: BigRational) -> Self {
        assert!(!q.is_negative(), "normalized radius must be non-negative");
        NormalizedRadius::Finite(q)
    }

    pub fn try_finite(q: BigRational) -> Result<Self, ShError> {
        if q.is_negative() {
            return Err(ShError::NegativeRadius(q.to_string()));
        }
        Ok(NormalizedRadius::Finite(q))
    }

    pub fn infinite() -> Self {
        NormalizedRadius::Infinite
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            NormalizedRadius::Finite(q) => Some(q),
            NormalizedRadius::Infinite => None,
        }
    }

    /// `ev > self`, with `∞ > r` true for finite `r` and `∞ > ∞` false.
    fn lt_valuation(&self, v: &Valuation) -> bool {
        match (self, v) {
            (NormalizedRadius::Finite(_), Valuation::Infinite) => true,
            (NormalizedRadius::Finite(r), Valuation::Finite(e)) => e.as_rational() > r,
            (NormalizedRadius::Infinite, _) => false,
        }
    }

    /// `ev ≤ self`.
    fn ge_valuation(&self, v: &Valuation) -> bool {
        !self.lt_valuation(v)
    }
}

impl fmt::Display for NormalizedRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizedRadius::Finite(q) => write!(f, "{q}"),
            NormalizedRadius::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    ReducedDisk,
    CompletedAnnulusCohomology,
    CompletedAnnulusHomology,
    Total,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Theory::ReducedDisk => "reduced_disk",
            Theory::CompletedAnnulusCohomology => "completed_annulus_cohomology",
            Theory::CompletedAnnulusHomology => "completed_annulus_homology",
            Theory::Total => "total",
        };
        write!(f, "{tag}")
    }
}

/// Outcome of a threshold computation: the retained and discarded parts
/// of the spectrum and the resulting dimension over the Novikov field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SHResult {
    pub theory: Theory,
    pub dimension: usize,
    pub retained: Vec<(Valuation, usize)>,
    pub discarded: Vec<(Valuation, usize)>,
    /// Set for the homology-orientation annulus, whose grading carries a
    /// degree shift; recorded as a flag only.
    pub degree_shift: bool,
}

impl SHResult {
    fn from_partition(
        theory: Theory,
        spectrum: &ValuationSpectrum,
        retain: impl Fn(&Valuation) -> bool,
        degree_shift: bool,
    ) -> SHResult {
        let mut retained = Vec::new();
        let mut discarded = Vec::new();
        for (v, m) in spectrum.entries() {
            if retain(&v) {
                retained.push((v, m));
            } else {
                discarded.push((v, m));
            }
        }
        let dimension = retained.iter().map(|(_, m)| m).sum();
        SHResult {
            theory,
            dimension,
            retained,
            discarded,
            degree_shift,
        }
    }
}

/// Reduced cohomology of the disk bundle with `kπR² = r`: discard every
/// eigenvalue with `ev(λ) > r` (strictly), and the zero eigenvalue
/// always, since `ev(0) = ∞`.
pub fn reduced_sh_disk(spectrum: &ValuationSpectrum, r: &NormalizedRadius) -> SHResult {
    SHResult::from_partition(
        Theory::ReducedDisk,
        spectrum,
        |v| !v.is_infinite() && r.ge_valuation(v),
        false,
    )
}

/// The full-space theory, the disk bundle of infinite radius: everything
/// but the zero generalized eigenspace.
pub fn total_sh(spectrum: &ValuationSpectrum) -> SHResult {
    let mut result = reduced_sh_disk(spectrum, &NormalizedRadius::Infinite);
    result.theory = Theory::Total;
    result
}

/// Completed cohomology of the annulus bundle between `r1` and `r2`.
///
/// For `r1 ≤ r2` (cohomology orientation) the retained window is
/// `r1 < ev(λ) ≤ r2`. For `r1 > r2` the roles switch: the window is
/// `r2 < ev(λ) ≤ r1` and the result carries the homology degree-shift
/// flag.
pub fn completed_sh_annulus(
    spectrum: &ValuationSpectrum,
    r1: &NormalizedRadius,
    r2: &NormalizedRadius,
) -> SHResult {
    let cohomological = match (r1.as_rational(), r2.as_rational()) {
        (Some(a), Some(b)) => a <= b,
        (Some(_), None) => true,   // r2 = ∞
        (None, Some(_)) => false,  // r1 = ∞ > finite r2
        (None, None) => true,
    };
    let (lo, hi, theory, shift) = if cohomological {
        (r1, r2, Theory::CompletedAnnulusCohomology, false)
    } else {
        (r2, r1, Theory::CompletedAnnulusHomology, true)
    };
    SHResult::from_partition(
        theory,
        spectrum,
        |v| lo.lt_valuation(v) && hi.ge_valuation(v),
        shift,
    )
}

/// Dual windows have equal dimension.
pub fn duality_check(
    spectrum: &ValuationSpectrum,
    r1: &NormalizedRadius,
    r2: &NormalizedRadius,
) -> bool {
    completed_sh_annulus(spectrum, r1, r2).dimension
        == completed_sh_annulus(spectrum, r2, r1).dimension
}

/// The finite valuations of the spectrum, sorted: the only radii where
/// any of the dimension functions can jump.
pub fn critical_radii(spectrum: &ValuationSpectrum) -> Vec<Exponent> {
    spectrum
        .finite_entries()
        .iter()
        .map(|(v, _)| v.clone())
        .collect()
}

/// Piecewise-constant disk dimension profile over `r ∈ [start, stop]`
/// sampled in increments of `step`; a degenerate range yields one row.
pub fn dimension_profile(
    spectrum: &ValuationSpectrum,
    start: &BigRational,
    stop: &BigRational,
    step: &BigRational,
) -> Result<Vec<(BigRational, usize)>, ShError> {
    if start > stop {
        return Err(ShError::BadRange(format!("start {start} > stop {stop}")));
    }
    if start.is_negative() {
        return Err(ShError::NegativeRadius(start.to_string()));
    }
    if !step.is_positive() && start != stop {
        return Err(ShError::BadRange(format!("step {step} must be positive")));
    }
    let mut rows = Vec::new();
    let mut r = start.clone();
    loop {
        let dim = reduced_sh_disk(spectrum, &NormalizedRadius::Finite(r.clone())).dimension;
        rows.push((r.clone(), dim));
        if &r >= stop {
            break;
        }
        r = &r + step;
        if &r > stop {
            break;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{quantum_spectrum, LineBundleGeometry};

    fn q(s: &str) -> BigRational {
        crate::novikov::parse_rational(s).unwrap()
    }

    fn nr(s: &str) -> NormalizedRadius {
        NormalizedRadius::finite(q(s))
    }

    fn exp(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn spec_of(m: usize, k: usize) -> ValuationSpectrum {
        quantum_spectrum(&LineBundleGeometry::new(m, k).unwrap())
            .unwrap()
            .spectrum()
            .clone()
    }

    #[test]
    fn disk_below_critical_radius_vanishes() {
        // (m=1,k=1): spectrum {(∞,1),(1,1)}; at r = 1/2 both entries go.
        let s = spec_of(1, 1);
        let res = reduced_sh_disk(&s, &nr("1/2"));
        assert_eq!(res.dimension, 0);
        assert_eq!(res.retained, vec![]);
        assert_eq!(res.discarded.len(), 2);
    }

    #[test]
    fn disk_boundary_is_strict() {
        // At r = 1 the valuation-1 entry stays: 1 > 1 is false.
        let s = spec_of(1, 1);
        let res = reduced_sh_disk(&s, &nr("1"));
        assert_eq!(res.dimension, 1);
    }

    #[test]
    fn disk_infinite_radius_reproduces_total() {
        let s = spec_of(3, 1);
        let res = reduced_sh_disk(&s, &NormalizedRadius::Infinite);
        assert_eq!(res.dimension, 3);
        assert_eq!(total_sh(&s).dimension, 3);
        // The ∞ entry is discarded even at infinite radius.
        assert_eq!(res.discarded, vec![(Valuation::Infinite, 1)]);
    }

    #[test]
    fn annulus_window_contains_eigenvalue() {
        let s = spec_of(1, 1);
        let res = completed_sh_annulus(&s, &nr("1/2"), &nr("2"));
        assert_eq!(res.dimension, 1);
        assert_eq!(res.theory, Theory::CompletedAnnulusCohomology);
        assert!(!res.degree_shift);
    }

    #[test]
    fn annulus_window_misses_eigenvalue() {
        let s = spec_of(1, 1);
        let res = completed_sh_annulus(&s, &nr("2"), &nr("3"));
        assert_eq!(res.dimension, 0);
    }

    #[test]
    fn annulus_empty_window() {
        for (m, k) in [(1usize, 1usize), (3, 2)] {
            let s = spec_of(m, k);
            for r in ["0", "1/3", "1", "7/5"] {
                assert_eq!(completed_sh_annulus(&s, &nr(r), &nr(r)).dimension, 0);
            }
        }
    }

    #[test]
    fn annulus_homology_orientation() {
        let s = spec_of(1, 1);
        let res = completed_sh_annulus(&s, &nr("2"), &nr("1/2"));
        assert_eq!(res.theory, Theory::CompletedAnnulusHomology);
        assert!(res.degree_shift);
        assert_eq!(res.dimension, 1);
    }

    #[test]
    fn annulus_boundary_semantics() {
        // Window (r1, r2] keeps ev = r2, drops ev = r1.
        let s = spec_of(3, 1); // critical valuation 1/3
        assert_eq!(completed_sh_annulus(&s, &nr("0"), &nr("1/3")).dimension, 3);
        assert_eq!(completed_sh_annulus(&s, &nr("1/3"), &nr("1")).dimension, 0);
    }

    #[test]
    fn duality_examples() {
        assert!(duality_check(&spec_of(1, 1), &nr("1/2"), &nr("2")));
        assert!(duality_check(&spec_of(3, 1), &nr("0"), &nr("1/3")));
        assert!(duality_check(&spec_of(2, 1), &nr("1"), &nr("1")));
    }

    #[test]
    fn critical_radii_examples() {
        assert_eq!(critical_radii(&spec_of(1, 1)), vec![exp("1")]);
        assert_eq!(critical_radii(&spec_of(3, 1)), vec![exp("1/3")]);
        let zeros = ValuationSpectrum::new(4, vec![]);
        assert_eq!(critical_radii(&zeros), vec![]);
    }

    #[test]
    fn window_additivity() {
        let s = spec_of(4, 2);
        let windows = [("0", "1/3"), ("1/3", "1/2"), ("1/2", "2")];
        let total = completed_sh_annulus(&s, &nr("0"), &nr("2")).dimension;
        let sum: usize = windows
            .iter()
            .map(|(a, b)| completed_sh_annulus(&s, &nr(a), &nr(b)).dimension)
            .sum();
        assert_eq!(total, sum);
    }

    #[test]
    fn profile_matches_step_function() {
        // (m=1,k=1) over [0,2] step 1/4: zero before 1, one from 1 on.
        let s = spec_of(1, 1);
        let rows = dimension_profile(&s, &q("0"), &q("2"), &q("1/4")).unwrap();
        assert_eq!(rows.len(), 9);
        for (r, dim) in rows {
            assert_eq!(dim, usize::from(r >= q("1")), "at r = {r}");
        }
    }

    #[test]
    fn profile_degenerate_range() {
        let s = spec_of(1, 1);
        let rows = dimension_profile(&s, &q("1"), &q("1"), &q("1/4")).unwrap();
        assert_eq!(rows, vec![(q("1"), 1)]);
    }

    #[test]
    fn profile_rejects_bad_ranges() {
        let s = spec_of(1, 1);
        assert!(dimension_profile(&s, &q("2"), &q("1"), &q("1/4")).is_err());
        assert!(dimension_profile(&s, &q("0"), &q("1"), &q("0")).is_err());
    }

    #[test]
    fn disk_monotone_in_radius() {
        let s = spec_of(4, 1);
        let mut last = 0;
        for i in 0..=40 {
            let r = BigRational::new(i.into(), 10.into());
            let dim = reduced_sh_disk(&s, &NormalizedRadius::Finite(r)).dimension;
            assert!(dim >= last);
            last = dim;
        }
        assert_eq!(last, 4);
    }
}
