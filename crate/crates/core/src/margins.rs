//! Signed margins of the inequalities between the means.
//!
//! Every margin is oriented so that a nonnegative value means the stated
//! direction holds, and is reported in the natural units of the inequality
//! (squared units for products, linear units for sums).  Each margin comes
//! with a `magnitude`, the larger of its two sides, so that relative margins
//! and tolerances are well defined.
//!
//! Where the two sides agree to high order near the diagonal the margin is
//! evaluated in a rearranged form that keeps its sign; for example
//! `A G - Q H = A G w^4 / (1 + sqrt(1 - w^4))` with `w = (x - y) / (x + y)`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{LemmaError, MarginError};
use crate::means::{geometric_of, Kernel, DEFAULT_DIAGONAL_WINDOW};
use crate::pair::PositivePair;
use crate::{BINARY64_DIGITS, TOL};

/// Identifier of an inequality with a margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    /// `A G >= Q H`.
    Eq2Product,
    /// `A^n + G^n <= Q^n + H^n`, real exponent `n`.
    Eq1Power,
    /// `A + G <= Q + H`.
    Eq3Sum,
    /// `A + G <= 2P`.
    Eq4Sandor,
    /// Conjectured `Q + H <= 2P`.
    Eq6Conj,
    /// `P <= I`.
    PLeI,
    /// The six-term chain `sqrt(QH) <= sqrt(AG) <= sqrt(LI) <= (L+I)/2 <=
    /// (G+A)/2 <= (Q+H)/2`; the scalar margin is the smallest link.
    ChainEq10,
    /// Four-number power-sum lemma applied to `(a, b, c, d) = (A, G, Q, H)`
    /// with an integer exponent.
    LemmaEq11,
}

impl InequalityId {
    /// Every identifier.
    pub const ALL: [InequalityId; 8] = [
        InequalityId::Eq2Product,
        InequalityId::Eq1Power,
        InequalityId::Eq3Sum,
        InequalityId::Eq4Sandor,
        InequalityId::Eq6Conj,
        InequalityId::PLeI,
        InequalityId::ChainEq10,
        InequalityId::LemmaEq11,
    ];

    /// Stable name used on the command line and in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Eq2Product => "EQ2_PRODUCT",
            InequalityId::Eq1Power => "EQ1_POWER",
            InequalityId::Eq3Sum => "EQ3_SUM",
            InequalityId::Eq4Sandor => "EQ4_SANDOR",
            InequalityId::Eq6Conj => "EQ6_CONJ",
            InequalityId::PLeI => "P_LE_I",
            InequalityId::ChainEq10 => "CHAIN_EQ10",
            InequalityId::LemmaEq11 => "LEMMA_EQ11",
        }
    }

    /// Whether the margin takes an exponent.
    pub fn requires_exponent(self) -> bool {
        matches!(self, InequalityId::Eq1Power | InequalityId::LemmaEq11)
    }

    /// Whether the inequality is a proved statement for this exponent (all
    /// but the conjecture; the power inequality only for integer `n`).
    pub fn is_proved(self, exponent: Option<f64>) -> bool {
        match self {
            InequalityId::Eq6Conj => false,
            InequalityId::Eq1Power | InequalityId::LemmaEq11 => {
                exponent.is_some_and(|n| n.is_finite() && libm::trunc(n) == n)
            }
            _ => true,
        }
    }

    pub(crate) fn check_exponent(self, exponent: Option<f64>) -> Result<(), MarginError> {
        match (self.requires_exponent(), exponent) {
            (true, None) => Err(MarginError::MissingExponent),
            (false, Some(_)) => Err(MarginError::UnexpectedExponent),
            (true, Some(n)) if !n.is_finite() => Err(MarginError::NonFiniteExponent),
            (true, Some(n)) if self == InequalityId::LemmaEq11 && integer_exponent(n).is_none() => {
                Err(MarginError::NonIntegerExponent)
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn integer_exponent(n: f64) -> Option<i32> {
    (libm::trunc(n) == n && n.abs() <= f64::from(i32::MAX)).then_some(n as i32)
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unknown inequality name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseIdError;

impl fmt::Display for ParseIdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown inequality id")
    }
}

impl FromStr for InequalityId {
    type Err = ParseIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or(ParseIdError)
    }
}

/// A signed margin and the larger of the two sides it compares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    /// Signed margin; nonnegative when the stated direction holds.
    pub value: f64,
    /// Larger side, the scale for relative comparisons.
    pub magnitude: f64,
}

impl Margin {
    fn checked(value: f64, magnitude: f64) -> Result<Self, MarginError> {
        if value.is_finite() && magnitude.is_finite() {
            Ok(Self { value, magnitude })
        } else {
            Err(MarginError::OutOfRange)
        }
    }

    /// `value / magnitude`, or 0 when the magnitude is 0.
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.value / self.magnitude
        }
    }

    /// `value >= -TOL * magnitude`.
    pub fn holds_within_tol(&self) -> bool {
        self.value >= -TOL * self.magnitude
    }
}

/// A margin evaluated for a specific inequality, input and exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginRecord {
    /// Which inequality.
    pub id: InequalityId,
    /// Input pair.
    pub pair: PositivePair,
    /// Exponent, present exactly for the power and lemma margins.
    pub exponent: Option<f64>,
    /// Signed margin.
    pub margin: f64,
    /// Larger side.
    pub magnitude: f64,
    /// Decimal digits of the arithmetic that produced `margin`.
    pub digits: u32,
}

impl MarginRecord {
    /// `margin / magnitude`.
    pub fn relative(&self) -> f64 {
        Margin {
            value: self.margin,
            magnitude: self.magnitude,
        }
        .relative()
    }
}

/// Evaluates the margin of `id` in binary64.
pub fn evaluate(id: InequalityId, pair: PositivePair, exponent: Option<f64>) -> Result<Margin, MarginError> {
    id.check_exponent(exponent)?;
    match id {
        InequalityId::Eq2Product => margin_product(pair),
        InequalityId::Eq1Power => power_gap(pair, exponent.unwrap_or_default()),
        InequalityId::Eq3Sum => margin_sum(pair),
        InequalityId::Eq4Sandor => margin_sandor(pair),
        InequalityId::Eq6Conj => margin_seiffert_conj(pair),
        InequalityId::PLeI => margin_p_le_i(pair),
        InequalityId::ChainEq10 => {
            let c = chain_margins(pair);
            Margin::checked(c.min_margin(), c.quantities[5])
        }
        InequalityId::LemmaEq11 => {
            let n = exponent.and_then(integer_exponent).ok_or(MarginError::NonIntegerExponent)?;
            let k = Kernel::new(pair);
            if k.diagonal() {
                return Margin::checked(0.0, 2.0 * libm::pow(pair.x(), f64::from(n)));
            }
            lemma_gap(k.arithmetic(), k.geometric(), k.quadratic(), k.harmonic(), n)
        }
    }
}

/// Evaluates the margin of `id` and wraps it in a [`MarginRecord`].
pub fn margin(id: InequalityId, pair: PositivePair, exponent: Option<f64>) -> Result<MarginRecord, MarginError> {
    let m = evaluate(id, pair, exponent)?;
    Ok(MarginRecord {
        id,
        pair,
        exponent,
        margin: m.value,
        magnitude: m.magnitude,
        digits: BINARY64_DIGITS,
    })
}

/// `sqrt(1 - w^4) = (G / A) sqrt(1 + w^2)`, the ratio `QH / AG`.
#[inline]
fn product_ratio(k: &Kernel) -> f64 {
    (k.g / k.a) * libm::sqrt(1.0 + k.w * k.w)
}

/// `A G - Q H`; nonnegative, zero exactly on the diagonal.
pub fn margin_product(pair: PositivePair) -> Result<Margin, MarginError> {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return Margin::checked(0.0, k.x * k.x);
    }
    let ag = k.a * k.g;
    let w2 = k.w * k.w;
    Margin::checked(ag * (w2 * w2) / (1.0 + product_ratio(&k)), ag)
}

/// `Q^n + H^n - A^n - G^n` for real `n`.
///
/// Evaluated as `A^n f` with `f = (Q/A)^n + (H/A)^n - 1 - (G/A)^n` built
/// from `expm1` of `n ln(M / A)`, which keeps the near-diagonal cancellation
/// at order `w^2` instead of order one.
pub fn power_gap(pair: PositivePair, n: f64) -> Result<Margin, MarginError> {
    if !n.is_finite() {
        return Err(MarginError::NonFiniteExponent);
    }
    if n == 1.0 {
        return margin_sum(pair);
    }
    let k = Kernel::new(pair);
    if k.diagonal() || n == 0.0 {
        let side = 2.0 * libm::exp(n * libm::log(k.x));
        return if side.is_normal() {
            Ok(Margin { value: 0.0, magnitude: side })
        } else {
            Err(MarginError::OutOfRange)
        };
    }
    let w2 = k.w * k.w;
    let ln_q = 0.5 * libm::log1p(w2);
    let ln_g = if k.w < 0.5 {
        0.5 * libm::log1p(-w2)
    } else {
        libm::log(k.g / k.a)
    };
    let ln_h = 2.0 * ln_g;
    let scale = libm::exp(n * libm::log(k.a));
    if !scale.is_normal() {
        return Err(MarginError::OutOfRange);
    }
    let (eq, eh, eg) = (
        libm::expm1(n * ln_q),
        libm::expm1(n * ln_h),
        libm::expm1(n * ln_g),
    );
    let f = eq + eh - eg;
    let magnitude = scale * libm::fmax(2.0 + eq + eh, 2.0 + eg);
    Margin::checked(scale * f, magnitude)
}

/// `Q + H - A - G`.
///
/// Equals `A w^6 / ((1 + s)(1 + c)(1 + sc))` with `s = Q / A` and
/// `c = G / A`, which is nonnegative term by term.
pub fn margin_sum(pair: PositivePair) -> Result<Margin, MarginError> {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return Margin::checked(0.0, 2.0 * k.x);
    }
    let w2 = k.w * k.w;
    let (s, c) = (libm::sqrt(1.0 + w2), k.g / k.a);
    let value = k.a * (w2 * w2 * w2) / ((1.0 + s) * (1.0 + c) * (1.0 + s * c));
    let magnitude = libm::fmax(k.quadratic() + k.harmonic(), k.arithmetic() + k.geometric());
    Margin::checked(value, magnitude)
}

/// `asin(w) - w`, by its Taylor series for `w < 1/2` (no cancellation) and
/// directly above.
fn asin_excess(k: &Kernel) -> f64 {
    let w = k.w;
    if w >= 0.5 {
        return k.asin_w() - w;
    }
    // sum_{j >= 1} c_j w^(2j+1), c_j / c_{j-1} = (2j-1)^2 / (2j (2j+1)).
    let w2 = w * w;
    let mut c = 1.0;
    let mut power = w;
    let mut sum = 0.0;
    for j in 1..=200u32 {
        let j2 = 2.0 * f64::from(j);
        c *= (j2 - 1.0) * (j2 - 1.0) / (j2 * (j2 + 1.0));
        power *= w2;
        let term = c * power;
        sum += term;
        if term <= 0.5 * f64::EPSILON * sum {
            break;
        }
    }
    sum
}

/// `2 (P - A) / A = -2 (asin(w) - w) / asin(w)`.
fn seiffert_excess(k: &Kernel) -> f64 {
    -2.0 * asin_excess(k) / k.asin_w()
}

/// `2P - (A + G)`.
///
/// Written as `A (w^2 / (1 + G/A) - 2 (asin(w) - w) / asin(w))`, both terms
/// of order `w^2`, so the sign survives next to the diagonal.
pub fn margin_sandor(pair: PositivePair) -> Result<Margin, MarginError> {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return Margin::checked(0.0, 2.0 * k.x);
    }
    let (p, rhs_half) = (k.seiffert(), 0.5 * k.arithmetic() + 0.5 * k.geometric());
    let w2 = k.w * k.w;
    let value = k.a * (w2 / (1.0 + k.g / k.a) + seiffert_excess(&k));
    Margin::checked(value, 2.0 * libm::fmax(p, rhs_half))
}

/// `2P - (Q + H)`; the sign is an empirical finding, not a theorem.
///
/// Written as `A (w^2 s / (1 + s) - 2 (asin(w) - w) / asin(w))` with
/// `s = sqrt(1 + w^2) = Q / A`.
pub fn margin_seiffert_conj(pair: PositivePair) -> Result<Margin, MarginError> {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return Margin::checked(0.0, 2.0 * k.x);
    }
    let (p, rhs_half) = (k.seiffert(), 0.5 * k.quadratic() + 0.5 * k.harmonic());
    let w2 = k.w * k.w;
    let s = libm::sqrt(1.0 + w2);
    let value = k.a * (w2 * s / (1.0 + s) + seiffert_excess(&k));
    Margin::checked(value, 2.0 * libm::fmax(p, rhs_half))
}

/// `w` below which `I - P` uses its series.
const P_LE_I_WINDOW: f64 = 0.05;

/// Coefficients of `ln(I / P) = sum_k D_k w^(2k)`, `k = 2..=10`.
const LN_I_OVER_P: [f64; 9] = [
    1.0 / 90.0,
    4.0 / 405.0,
    461.0 / 56700.0,
    286.0 / 42525.0,
    0.005652559211642104,
    0.0048282482427103235,
    0.004183774839022617,
    0.0036703920196110304,
    0.0032542555819718008,
];

/// `I - P`.
///
/// Both means agree to second order at the diagonal; inside a small window
/// the margin is `P expm1(ln(I / P))` with the series of `ln(I / P)`, which
/// starts at `w^4 / 90`.
pub fn margin_p_le_i(pair: PositivePair) -> Result<Margin, MarginError> {
    let k = Kernel::new(pair);
    let (i, p) = (k.identric(DEFAULT_DIAGONAL_WINDOW), k.seiffert());
    if k.diagonal() {
        return Margin::checked(0.0, k.x);
    }
    if k.w < P_LE_I_WINDOW {
        let w2 = k.w * k.w;
        let ln_ratio = LN_I_OVER_P.iter().rev().fold(0.0, |acc, c| acc * w2 + c) * (w2 * w2);
        return Margin::checked(p * libm::expm1(ln_ratio), libm::fmax(i, p));
    }
    Margin::checked(i - p, libm::fmax(i, p))
}

/// Quantities and consecutive links of the six-term chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMargins {
    /// `sqrt(QH), sqrt(AG), sqrt(LI), (L+I)/2, (G+A)/2, (Q+H)/2`.
    pub quantities: [f64; 6],
    /// `quantities[k + 1] - quantities[k]`.
    pub margins: [f64; 5],
}

impl ChainMargins {
    /// Labels of the six quantities.
    pub const LABELS: [&'static str; 6] = [
        "sqrt(QH)",
        "sqrt(AG)",
        "sqrt(LI)",
        "(L+I)/2",
        "(G+A)/2",
        "(Q+H)/2",
    ];

    /// Smallest link.
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, libm::fmin)
    }
}

/// The six chain quantities and their five consecutive differences.
pub fn chain_margins(pair: PositivePair) -> ChainMargins {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return ChainMargins {
            quantities: [k.x; 6],
            margins: [0.0; 5],
        };
    }
    let (h, g, a, q) = (k.harmonic(), k.geometric(), k.arithmetic(), k.quadratic());
    let (l, i) = (k.logarithmic(), k.identric(DEFAULT_DIAGONAL_WINDOW));
    let quantities = [
        geometric_of(q, h),
        geometric_of(a, g),
        geometric_of(l, i),
        0.5 * l + 0.5 * i,
        0.5 * g + 0.5 * a,
        0.5 * q + 0.5 * h,
    ];
    let mut margins = [0.0; 5];
    for (j, m) in margins.iter_mut().enumerate() {
        *m = quantities[j + 1] - quantities[j];
    }
    // sqrt(AG) - sqrt(QH) = (AG - QH) / (sqrt(AG) + sqrt(QH)), in the same
    // rearranged form as `margin_product`.
    let w2 = k.w * k.w;
    let (r0, r1) = (quantities[0], quantities[1]);
    margins[0] = r1 * (w2 * w2) / ((1.0 + product_ratio(&k)) * (1.0 + r0 / r1));
    ChainMargins { quantities, margins }
}

/// `c^n + d^n - a^n - b^n` under the hypotheses `a + b <= c + d` and
/// `ab >= cd`, which guarantee a nonnegative result for every integer `n`.
///
/// The hypotheses are checked with a relative slack of [`TOL`] so that
/// quadruples that satisfy them exactly but were rounded on the way in are
/// accepted.
pub fn lemma_gap(a: f64, b: f64, c: f64, d: f64, n: i32) -> Result<Margin, MarginError> {
    if [a, b, c, d].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(LemmaError::NonPositive.into());
    }
    if a + b > (c + d) * (1.0 + TOL) {
        return Err(LemmaError::SumHypothesis.into());
    }
    if a * b < c * d * (1.0 - TOL) {
        return Err(LemmaError::ProductHypothesis.into());
    }
    let lhs = libm::pow(a, f64::from(n)) + libm::pow(b, f64::from(n));
    let rhs = libm::pow(c, f64::from(n)) + libm::pow(d, f64::from(n));
    Margin::checked(rhs - lhs, libm::fmax(lhs, rhs))
}

/// Power sums `p_k = a^k + b^k` for `k = 0..=n_max` via the three-term
/// recurrence `p_{k+1} = (a + b) p_k - ab p_{k-1}`.
pub fn power_sum_recurrence(a: f64, b: f64, n_max: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n_max + 1);
    p.push(2.0);
    if n_max == 0 {
        return p;
    }
    let (s, prod) = (a + b, a * b);
    p.push(s);
    for k in 1..n_max {
        p.push(s * p[k] - prod * p[k - 1]);
    }
    p
}

/// Residuals of the algebraic steps used to prove the product and sum
/// inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `(x+y)^2 - 2 sqrt(2xy(x^2+y^2))`, evaluated through
    /// `(x+y)^4 - 8xy(x^2+y^2) = (x-y)^4`; nonnegative.
    pub product_quartic_margin: f64,
    /// `(A - H) - (x-y)^2 / (2(x+y))`; zero in exact arithmetic.
    pub mean_difference_residual: f64,
    /// `(x+y) - (sqrt(2(x^2+y^2)) + sqrt(4xy)) / 2`; nonnegative.
    pub sum_margin: f64,
    /// `(Q - G) - (x-y)^2 / (sqrt(2(x^2+y^2)) + sqrt(4xy))`; zero in exact
    /// arithmetic.
    pub rationalization_residual: f64,
}

/// Evaluates the four proof identities at `pair`.
pub fn proof_identity_residuals(pair: PositivePair) -> IdentityResiduals {
    let k = Kernel::new(pair);
    if k.diagonal() {
        return IdentityResiduals {
            product_quartic_margin: 0.0,
            mean_difference_residual: 0.0,
            sum_margin: 0.0,
            rationalization_residual: 0.0,
        };
    }
    let (x, y, d) = (k.x, k.y, k.d);

    // In units of x: u = (x - y) / x, r = y / x.
    let (u, r) = (d / x, y / x);
    let u2 = u * u;
    let den = (1.0 + r) * (1.0 + r) + 2.0 * libm::sqrt(2.0 * r * (1.0 + r * r));
    let product_quartic_margin = x * x * (u2 * u2) / den;

    let (a, h, q, g) = (k.arithmetic(), k.harmonic(), k.quadratic(), k.geometric());
    let mean_difference_residual = (a - h) - 0.5 * d * k.w;

    // 2A - Q - G = A (2 - s - c) with s = sqrt(1 + w^2), c = sqrt(1 - w^2),
    // and 2 - s - c = 2 w^4 / ((s + c)(1 + s)(1 + c)).
    let w2 = k.w * k.w;
    let (s, c) = (libm::sqrt(1.0 + w2), k.g / k.a);
    let sum_margin = k.a * 2.0 * (w2 * w2) / ((s + c) * (1.0 + s) * (1.0 + c));

    let rationalization_residual = (q - g) - d * (d / (2.0 * (q + g)));

    IdentityResiduals {
        product_quartic_margin,
        mean_difference_residual,
        sum_margin,
        rationalization_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn pair(x: f64, y: f64) -> PositivePair {
        PositivePair::new(x, y).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn ids_round_trip_names() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>(), Ok(id));
            assert_eq!(id.as_str().to_ascii_lowercase().parse::<InequalityId>(), Ok(id));
        }
        assert!("EQ5".parse::<InequalityId>().is_err());
    }

    #[test]
    fn exponent_presence_is_enforced() {
        let p = pair(1.0, 4.0);
        assert_eq!(evaluate(InequalityId::Eq1Power, p, None), Err(MarginError::MissingExponent));
        assert_eq!(
            evaluate(InequalityId::Eq2Product, p, Some(1.0)),
            Err(MarginError::UnexpectedExponent)
        );
        assert_eq!(
            evaluate(InequalityId::LemmaEq11, p, Some(0.5)),
            Err(MarginError::NonIntegerExponent)
        );
        assert_eq!(
            evaluate(InequalityId::Eq1Power, p, Some(f64::NAN)),
            Err(MarginError::NonFiniteExponent)
        );
    }

    #[test]
    fn product_examples() {
        assert_eq!(margin_product(pair(3.0, 3.0)).unwrap().value, 0.0);
        // 50-digit oracle: 5 - 1.6 sqrt(8.5)
        let m = margin_product(pair(1.0, 4.0)).unwrap().value;
        assert!(close(m, 0.33523848412375962330, 1e-15));
        let lambda = 1e-3;
        let scaled = margin_product(pair(lambda, 4.0 * lambda)).unwrap().value;
        assert!(close(scaled, lambda * lambda * m, 1e-14));
    }

    #[test]
    fn power_gap_examples() {
        let p = pair(1.0, 4.0);
        assert_eq!(power_gap(p, 0.0).unwrap().value, 0.0);
        assert!(close(power_gap(p, 1.0).unwrap().value, 0.015475947422650235437, 1e-14));
        // Sixth-order zero at the diagonal; 60-digit oracle.
        let m = power_gap(pair(1.0 + 1e-4, 1.0), 1.0).unwrap().value;
        assert!(close(m, 1.95263679198235318e-27, 1e-13), "{m}");
        let m = power_gap(pair(1.1, 0.9), 0.5).unwrap().value;
        assert!(close(m, -1.2453512740030056e-5, 1e-10), "{m}");
        assert_eq!(power_gap(pair(2.0, 2.0), 3.7).unwrap().value, 0.0);
    }

    #[test]
    fn power_gap_overflow_is_reported() {
        let p = pair(1e300, 1.0);
        assert_eq!(power_gap(p, 5.0), Err(MarginError::OutOfRange));
        assert_eq!(power_gap(p, -5.0), Err(MarginError::OutOfRange));
    }

    #[test]
    fn sandor_examples() {
        assert_eq!(margin_sandor(pair(5.0, 5.0)).unwrap().value, 0.0);
        let m = margin_sandor(pair(3.0, 1.0)).unwrap().value;
        assert!(close(m, 12.0 / PI - (2.0 + libm::sqrt(3.0)), 1e-14));
        assert!(close(m, 0.087667826636610764926, 1e-14));
        let m = margin_sandor(pair(100.0, 1.0)).unwrap().value;
        assert!(close(m, 11.685897227288514347, 1e-14));
    }

    #[test]
    fn seiffert_conjecture_examples() {
        assert_eq!(margin_seiffert_conj(pair(2.0, 2.0)).unwrap().value, 0.0);
        let m = margin_seiffert_conj(pair(10.0, 1.0)).unwrap().value;
        assert!(close(m, 0.46768647906351565248, 1e-14));
        let m = margin_seiffert_conj(pair(100.0, 1.0)).unwrap().value;
        assert!(close(m, -0.50851435669022252141, 1e-13));
    }

    #[test]
    fn p_le_i_examples() {
        assert_eq!(margin_p_le_i(pair(2.0, 2.0)).unwrap().value, 0.0);
        let m = margin_p_le_i(pair(3.0, 1.0)).unwrap().value;
        assert!(close(m, 0.0016983324042078487078, 1e-12));
        let m = margin_p_le_i(pair(1.0, 4.0)).unwrap().value;
        assert!(close(m, 0.0048905331148296154409, 1e-12));
    }

    const P_LE_I_AT_1001: f64 = 6.9340394364956517072e-16;

    #[test]
    fn seiffert_margins_keep_sign_near_diagonal() {
        for eps in [1e-3, 1e-6, 1e-9, 1e-12, 1e-15] {
            let p = pair(1.0 + eps, 1.0);
            assert!(margin_sandor(p).unwrap().value > 0.0, "{eps}");
            assert!(margin_seiffert_conj(p).unwrap().value > 0.0, "{eps}");
            assert!(margin_p_le_i(p).unwrap().value >= 0.0, "{eps}");
        }
        // 50-digit oracle at (1.001, 1): I - P.
        let m = margin_p_le_i(pair(1.001, 1.0)).unwrap().value;
        assert!(close(m, P_LE_I_AT_1001, 1e-10), "{m}");
    }

    #[test]
    fn p_le_i_window_is_seamless() {
        let t = 1.0 + 2.0 * 0.05 / (1.0 - 0.05);
        let below = margin_p_le_i(pair(t * (1.0 - 1e-15), 1.0)).unwrap().value;
        let above = margin_p_le_i(pair(t * (1.0 + 1e-15), 1.0)).unwrap().value;
        assert!(close(below, above, 1e-7), "{below} {above}");
    }

    #[test]
    fn chain_examples() {
        let c = chain_margins(pair(7.0, 7.0));
        assert_eq!(c.quantities, [7.0; 6]);
        assert_eq!(c.margins, [0.0; 5]);
        let c = chain_margins(pair(1.0, 4.0));
        // 50-digit oracle.
        let expect = [
            2.1598058977316087458,
            2.2360679774997896964,
            2.2483244616521087206,
            2.2499657044927643439,
            2.25,
            2.2577379737113251177,
        ];
        for (v, e) in c.quantities.iter().zip(expect) {
            assert!(close(*v, e, 1e-15), "{v} vs {e}");
        }
        assert!(c.margins.iter().all(|&m| m > 0.0));
        let c = chain_margins(pair(1.0 + 1e-8, 1.0));
        assert!(c.margins.iter().all(|&m| m >= -TOL * c.quantities[5]));
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(lemma_gap(2.0, 2.0, 1.0, 3.0, 2).unwrap().value, 2.0);
        let m = lemma_gap(2.0, 2.0, 1.0, 3.0, -1).unwrap().value;
        assert!(close(m, 1.0 / 3.0, 1e-15));
        assert_eq!(lemma_gap(2.0, 2.0, 1.0, 3.0, 0).unwrap().value, 0.0);
        assert_eq!(lemma_gap(2.0, 3.0, 1.0, 3.0, 1), Err(MarginError::Lemma(LemmaError::SumHypothesis)));
        assert_eq!(lemma_gap(1.0, 3.0, 2.0, 2.0, 1), Err(MarginError::Lemma(LemmaError::ProductHypothesis)));
        assert_eq!(lemma_gap(0.0, 3.0, 2.0, 2.0, 1), Err(MarginError::Lemma(LemmaError::NonPositive)));
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(power_sum_recurrence(1.0, 2.0, 3), [2.0, 3.0, 5.0, 9.0]);
        assert_eq!(power_sum_recurrence(3.0, 3.0, 2), [2.0, 6.0, 18.0]);
        assert_eq!(power_sum_recurrence(3.0, 3.0, 0), [2.0]);
        let p = power_sum_recurrence(1.5, 0.5, 10);
        for (k, v) in p.iter().enumerate() {
            let direct = libm::pow(1.5, k as f64) + libm::pow(0.5, k as f64);
            assert!(close(*v, direct, 1e-12), "k={k}");
        }
    }

    #[test]
    fn identity_examples() {
        let r = proof_identity_residuals(pair(4.0, 4.0));
        assert_eq!(
            (r.product_quartic_margin, r.mean_difference_residual, r.sum_margin, r.rationalization_residual),
            (0.0, 0.0, 0.0, 0.0)
        );
        let r = proof_identity_residuals(pair(1.0, 4.0));
        assert_eq!(r.mean_difference_residual, 0.0);
        // 25 - 2 sqrt(136)
        assert!(close(r.product_quartic_margin, 1.6761924206187981165, 1e-15));
        assert!(r.sum_margin > 0.0);
        assert!(r.rationalization_residual.abs() <= 1e-14 * 5.0);
    }

    #[test]
    fn lemma_id_matches_power_gap_on_pairs() {
        let p = pair(3.0, 0.7);
        for n in -4..=4 {
            let a = evaluate(InequalityId::LemmaEq11, p, Some(f64::from(n))).unwrap();
            let b = power_gap(p, f64::from(n)).unwrap();
            assert!((a.value - b.value).abs() <= 1e-13 * b.magnitude, "n={n}");
        }
    }
}
