//! Exact arithmetic in the universal Novikov field.
//!
//! A series is a finite sum `Σ cᵢ·T^{αᵢ}` with rational coefficients `cᵢ`
//! and strictly increasing rational exponents `αᵢ`, together with a
//! precision cutoff `O(T^P)`: terms with exponent `≥ P` are unknown.
//! The valuation `ev` picks out the least exponent of a nonzero term and
//! sends the zero series to `+∞`; it induces the non-Archimedean norm
//! `‖x‖ = e^{−ev(x)}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient of a Novikov term.
pub type Coefficient = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NovikovError {
    #[error("cannot invert the zero series")]
    InvertZero,
    #[error("valuation is indeterminate: series vanishes up to O(T^{0}) but is not provably zero", .precision)]
    IndeterminateValuation { precision: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division is not exact")]
    InexactDivision,
}

/// Exact rational Novikov exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn one() -> Self {
        Exponent(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an exponent. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "exponent denominator must be nonzero");
        Exponent(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Exponent(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Self {
        Exponent(-self.0.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Exponent(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Exponent(&self.0 - &other.0)
    }

    pub fn scale(&self, by: &BigRational) -> Self {
        Exponent(&self.0 * by)
    }

    pub fn scale_int(&self, by: i64) -> Self {
        Exponent(&self.0 * BigRational::from_integer(BigInt::from(by)))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exponent {
    type Err = NovikovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Exponent)
    }
}

/// Parse `p`, `-p`, or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, NovikovError> {
    let s = s.trim();
    let err = || NovikovError::Parse(format!("invalid rational `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| err())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Precision cutoff: all terms with exponent `≥ P` are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precision {
    Finite(Exponent),
    Infinite,
}

impl Precision {
    pub fn min(a: &Precision, b: &Precision) -> Precision {
        match (a, b) {
            (Precision::Infinite, _) => b.clone(),
            (_, Precision::Infinite) => a.clone(),
            (Precision::Finite(x), Precision::Finite(y)) => {
                Precision::Finite(if x <= y { x.clone() } else { y.clone() })
            }
        }
    }

    /// Shift the cutoff by an exponent: `O(T^p) ↦ O(T^{p+e})`.
    pub fn shift(&self, e: &Exponent) -> Precision {
        match self {
            Precision::Infinite => Precision::Infinite,
            Precision::Finite(p) => Precision::Finite(p.add(e)),
        }
    }

    pub fn admits(&self, e: &Exponent) -> bool {
        match self {
            Precision::Infinite => true,
            Precision::Finite(p) => e < p,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Precision::Infinite)
    }
}

/// `ev(x)`: least exponent of a nonzero term, `+∞` for the zero series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(e) => !e.is_negative(),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => write!(f, "inf"),
            Valuation::Finite(e) => write!(f, "{e}"),
        }
    }
}

/// The norm `‖x‖ = e^{−ev(x)}`, kept symbolic so comparisons stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Zero,
    /// `e^{−exponent}`; larger exponent means smaller norm.
    ExpNeg(Exponent),
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Norm::Zero, Norm::Zero) => Equal,
            (Norm::Zero, Norm::ExpNeg(_)) => Less,
            (Norm::ExpNeg(_), Norm::Zero) => Greater,
            // e^{-a} ≥ e^{-b} iff a ≤ b
            (Norm::ExpNeg(a), Norm::ExpNeg(b)) => b.cmp(a),
        }
    }
}

impl Norm {
    pub fn at_least_one(&self) -> bool {
        match self {
            Norm::Zero => false,
            Norm::ExpNeg(e) => e.as_rational() <= &BigRational::zero(),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Zero => write!(f, "0"),
            Norm::ExpNeg(e) => {
                if e.is_zero() {
                    write!(f, "1")
                } else {
                    write!(f, "e^(-{})", e.as_rational())
                }
            }
        }
    }
}

/// A Novikov series in canonical form.
///
/// Canonical means: no stored term has a zero coefficient, and no stored
/// exponent lies at or beyond the precision cutoff. Two series are equal
/// exactly when their term lists and precisions coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovSeries {
    terms: BTreeMap<Exponent, Coefficient>,
    precision: Precision,
}

impl NovikovSeries {
    pub fn zero() -> Self {
        NovikovSeries {
            terms: BTreeMap::new(),
            precision: Precision::Infinite,
        }
    }

    /// The zero series known only up to `O(T^p)`.
    pub fn zero_mod(p: Exponent) -> Self {
        NovikovSeries {
            terms: BTreeMap::new(),
            precision: Precision::Finite(p),
        }
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The formal variable `T`.
    pub fn t() -> Self {
        Self::monomial(BigRational::one(), Exponent::one())
    }

    pub fn t_pow(e: Exponent) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: Coefficient, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        NovikovSeries {
            terms,
            precision: Precision::Infinite,
        }
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Exponent, Coefficient)>,
        precision: Precision,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(Coefficient::zero);
            *entry += c;
        }
        let mut s = NovikovSeries {
            terms: map,
            precision,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let precision = self.precision.clone();
        self.terms
            .retain(|e, c| !c.is_zero() && precision.admits(e));
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Coefficient)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Zero at the stored precision (no known nonzero term).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Provably the zero element of the field.
    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_infinite()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exponent::zero())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn leading(&self) -> Option<(&Exponent, &Coefficient)> {
        self.terms.iter().next()
    }

    /// Best known lower bound for `ev`: the leading exponent, the precision
    /// cutoff when no term is known, or `+∞` for the exact zero.
    pub fn ev_lower_bound(&self) -> Valuation {
        match self.leading() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => match &self.precision {
                Precision::Infinite => Valuation::Infinite,
                Precision::Finite(p) => Valuation::Finite(p.clone()),
            },
        }
    }

    /// `ev`: least exponent of a nonzero term; `+∞` for the zero series.
    ///
    /// Errors when the series vanishes up to a finite cutoff without being
    /// provably zero — its valuation could be anything `≥ P`.
    pub fn valuation(&self) -> Result<Valuation, NovikovError> {
        match self.leading() {
            Some((e, _)) => Ok(Valuation::Finite(e.clone())),
            None => match &self.precision {
                Precision::Infinite => Ok(Valuation::Infinite),
                Precision::Finite(p) => Err(NovikovError::IndeterminateValuation {
                    precision: p.to_string(),
                }),
            },
        }
    }

    /// `‖x‖ = e^{−ev(x)}`, exact and symbolic.
    pub fn norm(&self) -> Result<Norm, NovikovError> {
        Ok(match self.valuation()? {
            Valuation::Infinite => Norm::Zero,
            Valuation::Finite(e) => Norm::ExpNeg(e),
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = Precision::min(&self.precision, &other.precision);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Coefficient::zero);
            *entry += c;
        }
        let mut s = NovikovSeries { terms, precision };
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, by: &Coefficient) -> Self {
        if by.is_zero() {
            // Scaling by an exact zero keeps only the precision information.
            return NovikovSeries {
                terms: BTreeMap::new(),
                precision: self.precision.clone(),
            };
        }
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * by)).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Cauchy product. The result is known up to
    /// `min(ev(a) + prec(b), ev(b) + prec(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let prec_from = |lhs: &Self, rhs: &Self| -> Precision {
            match (&rhs.precision, lhs.ev_lower_bound()) {
                (Precision::Infinite, _) => Precision::Infinite,
                (_, Valuation::Infinite) => Precision::Infinite,
                (Precision::Finite(p), Valuation::Finite(e)) => Precision::Finite(p.add(&e)),
            }
        };
        let precision = Precision::min(&prec_from(self, other), &prec_from(other, self));
        let mut terms: BTreeMap<Exponent, Coefficient> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if !precision.admits(&e) {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(Coefficient::zero);
                *entry += ca * cb;
            }
        }
        let mut s = NovikovSeries { terms, precision };
        s.normalize();
        s
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = NovikovSeries::from_int(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse up to `a·invert(a) = 1 + O(T^{target})`,
    /// by leading-term extraction and a geometric series.
    pub fn invert(&self, target: &Exponent) -> Result<Self, NovikovError> {
        let (e0, c0) = match self.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(NovikovError::InvertZero),
        };
        let lead_inv = Self::monomial(c0.recip(), e0.neg());
        // self = c0·T^{e0}·(1 + u) with ev(u) > 0.
        let u = lead_inv.mul(self).sub(&Self::from_int(1));
        if u.is_exactly_zero() {
            // Pure monomial: the inverse is exact.
            return Ok(lead_inv);
        }
        // (1 + u)^{-1} = Σ (−u)^j, summed until the next power is invisible
        // at precision `target`.
        let cap = Precision::min(&Precision::Finite(target.clone()), &u.precision);
        let minus_u = {
            let mut m = u.neg();
            m.precision = cap.clone();
            m.normalize();
            m
        };
        let mut geo = Self::from_int(1);
        let mut power = Self::from_int(1);
        loop {
            power = power.mul(&minus_u);
            if power.is_zero() {
                break;
            }
            geo = geo.add(&power);
        }
        geo.precision = cap.clone();
        geo.normalize();
        Ok(lead_inv.mul(&geo))
    }

    /// Exact division: `self / other` when the quotient lies in the ring of
    /// finite series. Errors when the division leaves a remainder.
    ///
    /// Both operands must be exact (infinite precision); this backs the
    /// fraction-free linear algebra, where divisibility is guaranteed.
    pub fn exact_div(&self, other: &Self) -> Result<Self, NovikovError> {
        if other.is_zero() {
            return Err(NovikovError::InvertZero);
        }
        debug_assert!(self.precision.is_infinite() && other.precision.is_infinite());
        let mut rem = self.clone();
        let mut quo = NovikovSeries::zero();
        let (de, dc) = other.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let max_steps = {
            // Exponent support of a true quotient is finite; bound the loop.
            self.term_count() * other.term_count() + self.term_count() + 8
        };
        let mut steps = 0;
        while !rem.is_zero() {
            steps += 1;
            if steps > max_steps {
                return Err(NovikovError::InexactDivision);
            }
            let (re, rc) = rem.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
            let qt = Self::monomial(&rc / &dc, re.sub(&de));
            rem = rem.sub(&qt.mul(other));
            quo = quo.add(&qt);
        }
        Ok(quo)
    }

    /// Render in the `c*T^(p/q) + ... + O(T^(r/s))` grammar.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&render_term(&c.abs(), e));
        }
        if let Precision::Finite(p) = &self.precision {
            if !first {
                out.push_str(" + ");
            }
            out.push_str(&format!("O({})", render_t_power(p)));
            return out;
        }
        if first {
            out.push('0');
        }
        out
    }
}

fn render_term(c_abs: &Coefficient, e: &Exponent) -> String {
    if e.is_zero() {
        return format!("{c_abs}");
    }
    let t = render_t_power(e);
    if c_abs.is_one() {
        t
    } else {
        format!("{c_abs}*{t}")
    }
}

fn render_t_power(e: &Exponent) -> String {
    if e.is_zero() {
        return "1".to_string();
    }
    let r = e.as_rational();
    if r.is_one() {
        "T".to_string()
    } else if r.is_integer() {
        format!("T^{r}")
    } else {
        format!("T^({r})")
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl FromStr for NovikovSeries {
    type Err = NovikovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_series(s)
    }
}

/// Parse the rendering grammar: terms `c`, `c*T^(p/q)`, `T^e`, `T`,
/// joined by `+`/`-`, with an optional trailing `O(T^e)` cutoff.
fn parse_series(input: &str) -> Result<NovikovSeries, NovikovError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(NovikovError::Parse("empty series".into()));
    }
    let mut terms: Vec<(Exponent, Coefficient)> = Vec::new();
    let mut precision = Precision::Infinite;

    for (sign, chunk) in split_signed_terms(s)? {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(NovikovError::Parse(format!("dangling sign in `{input}`")));
        }
        if let Some(rest) = chunk.strip_prefix("O(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| NovikovError::Parse(format!("unterminated O(...) in `{input}`")))?;
            if sign < 0 {
                return Err(NovikovError::Parse("negative precision term".into()));
            }
            precision = Precision::Finite(parse_t_power(inner.trim())?);
            continue;
        }
        let (exp, coeff) = parse_term(chunk)?;
        let coeff = if sign < 0 { -coeff } else { coeff };
        terms.push((exp, coeff));
    }
    Ok(NovikovSeries::from_terms(terms, precision))
}

/// Split on top-level `+`/`-` (not inside parentheses, not in `( -3 )/...`).
fn split_signed_terms(s: &str) -> Result<Vec<(i8, String)>, NovikovError> {
    let mut out: Vec<(i8, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign: i8 = 1;
    let mut depth = 0usize;
    let mut expects_operand = true;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
                expects_operand = false;
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| NovikovError::Parse(format!("unbalanced parens in `{s}`")))?;
                cur.push(ch);
                expects_operand = false;
            }
            '+' | '-' if depth == 0 && !expects_operand => {
                if !cur.trim().is_empty() {
                    out.push((sign, std::mem::take(&mut cur)));
                }
                sign = if ch == '-' { -1 } else { 1 };
                expects_operand = true;
            }
            '-' if depth == 0 && expects_operand => {
                sign = -sign;
            }
            c if c.is_whitespace() => {
                cur.push(c);
            }
            _ => {
                cur.push(ch);
                expects_operand = false;
            }
        }
    }
    if depth != 0 {
        return Err(NovikovError::Parse(format!("unbalanced parens in `{s}`")));
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur));
    }
    Ok(out)
}

fn parse_term(chunk: &str) -> Result<(Exponent, Coefficient), NovikovError> {
    let chunk = chunk.trim();
    if let Some(pos) = chunk.find('T') {
        let (coeff_part, t_part) = chunk.split_at(pos);
        let coeff_part = coeff_part.trim().trim_end_matches('*').trim();
        let coeff = if coeff_part.is_empty() {
            Coefficient::one()
        } else {
            parse_rational(coeff_part)?
        };
        Ok((parse_t_power(t_part.trim())?, coeff))
    } else {
        Ok((Exponent::zero(), parse_rational(chunk)?))
    }
}

/// Parse `T`, `T^e`, `T^(p/q)`, or a bare `1` (exponent zero).
fn parse_t_power(s: &str) -> Result<Exponent, NovikovError> {
    let s = s.trim();
    if s == "1" {
        return Ok(Exponent::zero());
    }
    if s == "T" {
        return Ok(Exponent::one());
    }
    let rest = s
        .strip_prefix("T^")
        .ok_or_else(|| NovikovError::Parse(format!("expected power of T, found `{s}`")))?;
    let rest = rest.trim();
    let inner = if let Some(r) = rest.strip_prefix('(') {
        r.strip_suffix(')')
            .ok_or_else(|| NovikovError::Parse(format!("unbalanced parens in `{s}`")))?
    } else {
        rest
    };
    inner.parse()
}
