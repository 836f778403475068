//! The Landau–Ginzburg side: the superpotential of `O(-k) → CP^m`, its
//! critical locus, Jacobian ranks on the full mirror and on affinoid
//! annulus subdomains, and the comparison against the symplectic side.
//!
//! The critical-locus elimination exploits the fixed shape of this
//! superpotential: every partial derivative is `1 + (monomial)`, so the
//! critical equations combine multiplicatively into a single relation
//! `z^{m+1-k} = u·T` in the fiber variable. The unit `u` is derived, not
//! assumed.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{newton_polygon, NovikovPolynomial};
use crate::novikov::{Exponent, NovikovSeries};
use crate::quantum::LineBundleGeometry;
use crate::sh::{completed_sh_annulus, NormalizedRadius};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MirrorError {
    #[error("elimination failed: {0}")]
    EliminationFailed(String),
    #[error("window requires r1 <= r2, got {r1} > {r2}")]
    WindowOrder { r1: String, r2: String },
    #[error("annulus domain is empty or unbounded")]
    BadDomain,
    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),
}

/// Laurent polynomial in `m+1` variables `z_1, …, z_{m+1}` with
/// Novikov-series coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    vars: usize,
    /// Distinct exponent vectors with nonzero coefficients.
    terms: Vec<(Vec<i64>, NovikovSeries)>,
}

impl LaurentPolynomial {
    pub fn new(vars: usize, terms: Vec<(Vec<i64>, NovikovSeries)>) -> Self {
        let mut merged: Vec<(Vec<i64>, NovikovSeries)> = Vec::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent vector length mismatch");
            if let Some(slot) = merged.iter_mut().find(|(f, _)| *f == e) {
                slot.1 = slot.1.add(&c);
            } else {
                merged.push((e, c));
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        LaurentPolynomial {
            vars,
            terms: merged,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[(Vec<i64>, NovikovSeries)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Formal partial derivative in variable `i` (0-based).
    pub fn partial(&self, i: usize) -> LaurentPolynomial {
        assert!(i < self.vars);
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            let scaled = c.scalar_mul(&BigRational::from_integer(BigInt::from(e[i])));
            terms.push((f, scaled));
        }
        LaurentPolynomial::new(self.vars, terms)
    }

    /// Evaluate at a point whose coordinates are Novikov series (each must
    /// be invertible as a monomial for negative exponents to make sense).
    pub fn eval_monomials(&self, point: &[NovikovSeries]) -> NovikovSeries {
        assert_eq!(point.len(), self.vars);
        let mut acc = NovikovSeries::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (z, &p) in point.iter().zip(e.iter()) {
                let factor = if p >= 0 {
                    z.pow(p as u32)
                } else {
                    let (le, lc) = z.leading().expect("nonzero coordinate");
                    assert_eq!(z.term_count(), 1, "negative power of a non-monomial");
                    NovikovSeries::monomial(lc.recip(), le.neg()).pow((-p) as u32)
                };
                term = term.mul(&factor);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &p) in e.iter().enumerate() {
                if p != 0 {
                    write!(f, "*z{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

/// `W = z_1 + … + z_m + z_{m+1} + T·z_1^{-1}⋯z_m^{-1}·z_{m+1}^k`.
pub fn superpotential(g: &LineBundleGeometry) -> LaurentPolynomial {
    let n = g.m() + 1;
    let mut terms = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        terms.push((e, NovikovSeries::from_int(1)));
    }
    let mut e = vec![-1i64; n];
    e[n - 1] = g.k() as i64;
    terms.push((e, NovikovSeries::t()));
    LaurentPolynomial::new(n, terms)
}

/// All formal partials `(∂_{z_1}W, …, ∂_{z_{m+1}}W)`.
pub fn partials(w: &LaurentPolynomial) -> Vec<LaurentPolynomial> {
    (0..w.vars()).map(|i| w.partial(i)).collect()
}

/// Outcome of eliminating `z_1, …, z_m` from the critical equations:
/// the one-variable relation `z^{degree} = unit·T` in `z = z_{m+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminatedRelation {
    /// `m + 1 − k`: the number of critical points, with multiplicity.
    pub degree: usize,
    /// The exact rational unit `u` in `z^{degree} = u·T`.
    pub unit: BigRational,
    /// Common valuation of the critical `z_{m+1}`-coordinates.
    pub critical_valuation: Exponent,
}

impl EliminatedRelation {
    /// Render as `1 - u*T*z^(k-m-1) = 0` style text.
    pub fn render(&self) -> String {
        format!("1 - {}*T*z^-{}", self.unit, self.degree)
    }

    /// The relation as a polynomial `z^d − u·T` over the Novikov field.
    pub fn as_polynomial(&self) -> NovikovPolynomial {
        let mut coeffs = vec![NovikovSeries::zero(); self.degree + 1];
        coeffs[0] = NovikovSeries::t().scalar_mul(&self.unit).neg();
        coeffs[self.degree] = NovikovSeries::from_int(1);
        NovikovPolynomial::new(coeffs)
    }
}

/// Eliminate `z_1…z_m` from `{∂_i W = 0}`.
///
/// Every partial has the two-term shape `1 + c_i·z^{v_i} = 0`; a single
/// integer combination `Σ a_i·v_i = (m+1−k)·e_{m+1}` of the critical
/// equations then produces the one-variable relation with an explicitly
/// computed unit.
pub fn eliminate_critical_locus(
    g: &LineBundleGeometry,
) -> Result<EliminatedRelation, MirrorError> {
    let w = superpotential(g);
    let ps = partials(&w);
    let n = g.m() + 1;
    let structure_err = |what: &str| MirrorError::EliminationFailed(what.to_string());

    // Each critical equation, rewritten as c_i·z^{v_i} = −1.
    let mut exps: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut units: Vec<(BigRational, Exponent)> = Vec::with_capacity(n); // c_i = q·T^t
    for p in &ps {
        if p.term_count() != 2 {
            return Err(structure_err("partial is not binomial"));
        }
        let constant = p
            .terms()
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .ok_or_else(|| structure_err("partial lacks constant term"))?;
        if !constant.1.is_one() {
            return Err(structure_err("constant term of partial is not 1"));
        }
        let (e, c) = p
            .terms()
            .iter()
            .find(|(e, _)| e.iter().any(|&x| x != 0))
            .ok_or_else(|| structure_err("partial lacks monomial term"))?;
        if c.term_count() != 1 {
            return Err(structure_err("monomial coefficient is not a T-monomial"));
        }
        let (te, tc) = c.leading().unwrap();
        exps.push(e.clone());
        units.push((tc.clone(), te.clone()));
    }

    let degree = g.m() + 1 - g.k();
    // Solve Σ a_j·v_j = degree·e_{m+1} over the rationals.
    let mut target = vec![BigRational::zero(); n];
    target[n - 1] = BigRational::from_integer(BigInt::from(degree as i64));
    let cols: Vec<Vec<BigRational>> = exps
        .iter()
        .map(|v| {
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let a = solve_square_system(&cols, &target)
        .ok_or_else(|| structure_err("critical exponent lattice is degenerate"))?;
    let a_int: Vec<BigInt> = a
        .iter()
        .map(|q| {
            if q.is_integer() {
                Some(q.to_integer())
            } else {
                None
            }
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| structure_err("combination exponents are not integral"))?;

    // ∏ (c_j·z^{v_j})^{a_j} = (−1)^{Σ a_j} gives
    // z^{degree·e_{m+1}} = (−1)^{Σ a_j}·∏ c_j^{−a_j}.
    let mut unit = BigRational::one();
    let mut t_power = BigRational::zero();
    let mut a_sum = BigInt::from(0);
    for ((q, t), aj) in units.iter().zip(&a_int) {
        a_sum += aj;
        unit *= rational_int_pow(q, &-aj.clone());
        t_power += t.as_rational() * BigRational::from_integer(-aj.clone());
    }
    if (&a_sum % BigInt::from(2)).abs() == BigInt::from(1) {
        unit = -unit;
    }
    if t_power != BigRational::one() {
        return Err(structure_err("relation is not linear in T"));
    }
    if unit.is_zero() {
        return Err(structure_err("vanishing unit"));
    }

    // Valuation balance via the Newton polygon of z^d − u·T.
    let relation = EliminatedRelation {
        degree,
        unit,
        critical_valuation: Exponent::from_ratio(1, degree as i64),
    };
    let np = newton_polygon(&relation.as_polynomial())
        .map_err(|e| structure_err(&format!("newton polygon: {e}")))?;
    let vals = np.root_valuations();
    if np.infinite_roots() != 0 || vals != vec![(relation.critical_valuation.clone(), degree)] {
        return Err(structure_err("critical valuations disagree with balance"));
    }
    Ok(relation)
}

fn rational_int_pow(q: &BigRational, e: &BigInt) -> BigRational {
    let mut acc = BigRational::one();
    let mut n = e.clone();
    let base = if n.is_negative() {
        n = -n;
        q.recip()
    } else {
        q.clone()
    };
    let mut i = BigInt::from(0);
    while i < n {
        acc *= &base;
        i += 1;
    }
    acc
}

/// Solve `M·a = b` for square `M` given by columns; `None` when singular.
fn solve_square_system(cols: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    if cols.len() != n {
        return None;
    }
    // Augmented matrix rows.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    m[r][j] = &m[r][j] - &f * &m[col][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Global Jacobian rank: the number of critical points of `W`, with
/// multiplicity, which is `m+1−k` for this family.
pub fn jac_rank_global(g: &LineBundleGeometry) -> Result<usize, MirrorError> {
    Ok(eliminate_critical_locus(g)?.degree)
}

/// One linear inequality `⟨v, normal⟩ ≥ bound` on the valuation vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<BigRational>,
    pub bound: BigRational,
}

/// An affinoid annulus domain, encoded by the linear inequalities its
/// monomial norm conditions impose on `(ev(z_1), …, ev(z_{m+1}))`.
#[derive(Debug, Clone)]
pub struct LaurentDomain {
    vars: usize,
    inequalities: Vec<HalfSpace>,
}

impl LaurentDomain {
    /// The moment-polytope constraints of `O(-k) → CP^m` together with the
    /// annulus bounds `r1 ≤ ev(z_{m+1}) ≤ r2`.
    pub fn annulus(g: &LineBundleGeometry, r1: &BigRational, r2: &BigRational) -> Self {
        let n = g.m() + 1;
        let mut ineqs = Vec::new();
        // v_i ≥ 0
        for i in 0..n {
            let mut normal = vec![BigRational::zero(); n];
            normal[i] = BigRational::one();
            ineqs.push(HalfSpace {
                normal,
                bound: BigRational::zero(),
            });
        }
        // −v_1 − … − v_m + k·v_{m+1} ≥ −1
        let mut normal = vec![-BigRational::one(); n];
        normal[n - 1] = BigRational::from_integer(BigInt::from(g.k() as i64));
        ineqs.push(HalfSpace {
            normal,
            bound: -BigRational::one(),
        });
        // r1 ≤ v_{m+1} ≤ r2
        let mut lo = vec![BigRational::zero(); n];
        lo[n - 1] = BigRational::one();
        ineqs.push(HalfSpace {
            normal: lo,
            bound: r1.clone(),
        });
        let mut hi = vec![BigRational::zero(); n];
        hi[n - 1] = -BigRational::one();
        ineqs.push(HalfSpace {
            normal: hi,
            bound: -r2.clone(),
        });
        LaurentDomain {
            vars: n,
            inequalities: ineqs,
        }
    }

    pub fn inequalities(&self) -> &[HalfSpace] {
        &self.inequalities
    }

    /// Exact feasibility by Fourier–Motzkin elimination.
    pub fn is_feasible(&self) -> bool {
        let mut system: Vec<(Vec<BigRational>, BigRational)> = self
            .inequalities
            .iter()
            .map(|h| (h.normal.clone(), h.bound.clone()))
            .collect();
        for var in 0..self.vars {
            system = fm_eliminate(&system, var, self.vars);
        }
        // Only constant constraints 0 ≥ bound remain.
        system.iter().all(|(_, b)| !b.is_positive())
    }

    /// Feasible interval of one coordinate: eliminate all others, then read
    /// off the tightest lower/upper bounds. `None` means unbounded on that
    /// side.
    pub fn project_coordinate(&self, var: usize) -> Option<(Option<BigRational>, Option<BigRational>)> {
        if !self.is_feasible() {
            return None;
        }
        let mut system: Vec<(Vec<BigRational>, BigRational)> = self
            .inequalities
            .iter()
            .map(|h| (h.normal.clone(), h.bound.clone()))
            .collect();
        for v in 0..self.vars {
            if v != var {
                system = fm_eliminate(&system, v, self.vars);
            }
        }
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for (normal, bound) in &system {
            let c = &normal[var];
            if c.is_zero() {
                continue;
            }
            let b = bound / c;
            if c.is_positive() {
                lo = Some(match lo {
                    Some(cur) => cur.max(b),
                    None => b,
                });
            } else {
                hi = Some(match hi {
                    Some(cur) => cur.min(b),
                    None => b,
                });
            }
        }
        Some((lo, hi))
    }

    /// The region is a bounded polytope: every coordinate has finite
    /// extremes over the feasible set.
    pub fn is_bounded(&self) -> bool {
        (0..self.vars).all(|v| {
            matches!(
                self.project_coordinate(v),
                Some((Some(_), Some(_))) | None
            )
        })
    }
}

/// Eliminate `var` from a system of `⟨v, n⟩ ≥ b` constraints.
fn fm_eliminate(
    system: &[(Vec<BigRational>, BigRational)],
    var: usize,
    vars: usize,
) -> Vec<(Vec<BigRational>, BigRational)> {
    let mut zero_rows = Vec::new();
    let mut pos = Vec::new(); // coefficient > 0: gives lower bounds on var
    let mut neg = Vec::new();
    for (normal, bound) in system {
        let c = &normal[var];
        if c.is_zero() {
            zero_rows.push((normal.clone(), bound.clone()));
        } else if c.is_positive() {
            pos.push((normal.clone(), bound.clone()));
        } else {
            neg.push((normal.clone(), bound.clone()));
        }
    }
    let mut out = zero_rows;
    for (np, bp) in &pos {
        for (nn, bn) in &neg {
            // Scale so the var coefficients cancel: (1/cp)·P + (−1/cn)·N.
            let cp = np[var].clone();
            let cn = nn[var].clone(); // negative
            let mut normal = vec![BigRational::zero(); vars];
            for i in 0..vars {
                normal[i] = &np[i] / &cp - &nn[i] / &cn;
            }
            let bound = bp / &cp - bn / &cn;
            normal[var] = BigRational::zero();
            out.push((normal, bound));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishedReason {
    /// The eliminated relation's T-term has strictly positive valuation on
    /// the whole domain, so the relation is a unit.
    UnitPositive,
    /// Strictly negative valuation on the whole domain.
    UnitNegative,
    None,
}

impl fmt::Display for VanishedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishedReason::UnitPositive => write!(f, "unit_positive"),
            VanishedReason::UnitNegative => write!(f, "unit_negative"),
            VanishedReason::None => write!(f, "none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianResult {
    pub rank: usize,
    /// The eliminated one-variable relation, for reporting.
    pub relation: String,
    pub vanished_reason: VanishedReason,
}

/// Jacobian rank of `W` restricted to the annulus `r1 ≤ ev(z_{m+1}) ≤ r2`.
///
/// The computation is the linear valuation check on the eliminated
/// relation `1 − u·T·z^{-d}`: its T-term has valuation `h(v) = 1 − d·v`,
/// affine and strictly decreasing in `v = ev(z_{m+1})`. Over the feasible
/// interval the term is uniformly small (`h > 0`), uniformly large
/// (`h < 0`), or hits zero; the relation is a unit in the first two cases
/// and cuts out the full critical locus in the third.
pub fn jac_rank_on_annulus(
    g: &LineBundleGeometry,
    r1: &NormalizedRadius,
    r2: &NormalizedRadius,
) -> Result<JacobianResult, MirrorError> {
    let (q1, q2) = match (r1.as_rational(), r2.as_rational()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => {
            return Err(MirrorError::WindowOrder {
                r1: r1.to_string(),
                r2: r2.to_string(),
            })
        }
    };
    if q1 > q2 {
        return Err(MirrorError::WindowOrder {
            r1: q1.to_string(),
            r2: q2.to_string(),
        });
    }
    let relation = eliminate_critical_locus(g)?;
    let domain = LaurentDomain::annulus(g, &q1, &q2);
    if !domain.is_feasible() || !domain.is_bounded() {
        return Err(MirrorError::BadDomain);
    }
    let (lo, hi) = domain
        .project_coordinate(g.m())
        .ok_or(MirrorError::BadDomain)?;
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(MirrorError::BadDomain),
    };
    // h(v) = ev(u·T) − d·v = 1 − d·v, decreasing in v.
    let d = BigRational::from_integer(BigInt::from(relation.degree as i64));
    let h_at = |v: &BigRational| BigRational::one() - &d * v;
    let rendered = relation.render();
    if h_at(&hi).is_positive() {
        return Ok(JacobianResult {
            rank: 0,
            relation: rendered,
            vanished_reason: VanishedReason::UnitPositive,
        });
    }
    if h_at(&lo).is_negative() {
        return Ok(JacobianResult {
            rank: 0,
            relation: rendered,
            vanished_reason: VanishedReason::UnitNegative,
        });
    }
    Ok(JacobianResult {
        rank: relation.degree,
        relation: rendered,
        vanished_reason: VanishedReason::None,
    })
}

/// Closed-string comparison: Jacobian rank on the annulus equals the
/// completed cohomology dimension of the same window.
pub fn mirror_check(
    g: &LineBundleGeometry,
    r1: &NormalizedRadius,
    r2: &NormalizedRadius,
) -> Result<bool, MirrorError> {
    let jac = jac_rank_on_annulus(g, r1, r2)?;
    let spec = crate::quantum::quantum_spectrum(g)?;
    let sh = completed_sh_annulus(spec.spectrum(), r1, r2);
    Ok(jac.rank == sh.dimension)
}
