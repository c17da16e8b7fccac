//! Extended-precision evaluation and sign certification.
//!
//! The oracle evaluates the literal definitions of the means and margins in
//! arbitrary-precision binary floating point (`astro-float`), with a working
//! precision derived from the requested number of decimal digits.  It shares
//! no code with the binary64 paths in [`crate::means`] and
//! [`crate::margins`], which makes it usable as their test oracle.
//!
//! Each evaluation owns its own constants cache; there is no global rounding
//! state.
//!
//! Inputs are binary64 values, so `x - y` is exact and its relative size is
//! bounded below by `2^-53`.  The removable singularities of `P`, `L` and `I`
//! therefore lose a bounded number of bits near the diagonal, which the
//! evaluation adds back as guard bits.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{MarginError, OracleError};
use crate::kind::MeanKind;
use crate::margins::{integer_exponent, InequalityId};
use crate::pair::PositivePair;

/// Smallest supported working precision in decimal digits.
pub const MIN_DIGITS: u32 = 30;
/// Largest supported working precision in decimal digits.
pub const MAX_DIGITS: u32 = 10_000;
/// Default starting precision of [`certify_sign`].
pub const DEFAULT_START_DIGITS: u32 = 50;
/// Default precision cap of [`certify_sign`].
pub const DEFAULT_CAP_DIGITS: u32 = 480;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = core::f64::consts::LOG2_10;

fn check_digits(digits: u32) -> Result<(), OracleError> {
    if (MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(OracleError::UnsupportedDigits(digits))
    }
}

/// Binary precision for `digits` decimal digits plus 32 guard bits.
fn bits_for(digits: u32) -> usize {
    libm::ceil(f64::from(digits) * LOG2_10) as usize + 32
}

/// An extended-precision value with the decimal precision it was computed at.
#[derive(Debug)]
pub struct HpValue {
    value: BigFloat,
    digits: u32,
}

impl Clone for HpValue {
    fn clone(&self) -> Self {
        Self {
            value: self.value.clone(),
            digits: self.digits,
        }
    }
}

impl HpValue {
    /// Working precision in decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Underlying arbitrary-precision number.
    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.value
    }

    /// `true` when the value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `true` when the value is strictly negative.
    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    /// `true` when the value is strictly positive.
    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    /// Nearest binary64 value (faithfully rounded).
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    /// `log2 |value|`, or `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        log2_abs(&self.value)
    }

    /// Decimal representation with all working digits.
    pub fn to_decimal_string(&self) -> String {
        let mut cc = consts();
        self.value
            .format(Radix::Dec, RM, &mut cc)
            .unwrap_or_else(|_| String::from("NaN"))
    }
}

/// Rounds a decimal rendering `[-]d.ddd[e[+-]x]` to `sig` significant
/// digits (half up) and writes it as `[-]d.ddde<x>` without trailing zeros.
fn round_scientific(raw: &str, sig: usize) -> Option<String> {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let point = mant.find('.').unwrap_or(mant.len());
    let mut digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    // Exponent of the first digit, then drop leading zeros.
    let mut exp10 = exp + point as i64 - 1;
    let lead = digits.iter().take_while(|&&d| d == 0).count();
    if lead == digits.len() {
        return Some(String::from("0e0"));
    }
    digits.drain(..lead);
    exp10 -= lead as i64;
    let sig = sig.max(1);
    if digits.len() > sig {
        let up = digits[sig] >= 5;
        digits.truncate(sig);
        if up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push(char::from(b'0' + digits[0]));
    if digits.len() > 1 {
        out.push('.');
        out.extend(digits[1..].iter().map(|d| char::from(b'0' + d)));
    }
    out.push('e');
    out.push_str(&alloc::format!("{exp10}"));
    Some(out)
}

impl HpValue {
    /// Decimal scientific notation rounded to the working precision, e.g.
    /// `1.6e0`.
    pub fn to_scientific(&self) -> String {
        let raw = self.to_decimal_string();
        round_scientific(&raw, self.digits as usize).unwrap_or(raw)
    }
}

impl fmt::Display for HpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific())
    }
}

fn consts() -> Consts {
    // Allocation failure is the only error path of the cache constructor.
    Consts::new().expect("constants cache allocation")
}

/// Most significant 64 bits of the mantissa and the binary exponent, with
/// `|v| = top / 2^64 * 2^exp` up to the discarded low words.
fn top_word(v: &BigFloat) -> Option<(u64, i32)> {
    let (words, _, _, e, _) = v.as_raw_parts()?;
    let top = *words.last()?;
    (top != 0).then_some((top, e))
}

fn to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((top, e)) = top_word(v) else {
        return 0.0;
    };
    let magnitude = libm::ldexp(top as f64, e - 64);
    if v.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

fn log2_abs(v: &BigFloat) -> f64 {
    match top_word(v) {
        Some((top, e)) => f64::from(e) - 64.0 + libm::log2(top as f64),
        None => f64::NEG_INFINITY,
    }
}

/// Working precision and constants cache of one evaluation.
struct Ctx {
    p: usize,
    cc: Consts,
}

impl Ctx {
    fn new(p: usize) -> Self {
        Self { p, cc: consts() }
    }
    fn lit(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p.max(64))
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }
    fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }
    fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }
    fn atan(&mut self, a: &BigFloat) -> BigFloat {
        a.atan(self.p, RM, &mut self.cc)
    }
    fn half(&self, a: &BigFloat) -> BigFloat {
        self.mul(a, &self.lit(0.5))
    }
    fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if a.cmp(b).unwrap_or(0) >= 0 {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// `m^n`; integer exponents by repeated squaring, others as
    /// `exp(n ln m)`.
    fn pow(&mut self, m: &BigFloat, n: f64) -> BigFloat {
        if n == 0.0 {
            return self.lit(1.0);
        }
        match integer_exponent(n) {
            Some(k) => {
                let positive = m.powi(k.unsigned_abs() as usize, self.p, RM);
                if k < 0 {
                    positive.reciprocal(self.p, RM)
                } else {
                    positive
                }
            }
            None => {
                let l = self.ln(m);
                let nl = self.mul(&l, &self.lit(n));
                self.exp(&nl)
            }
        }
    }
}

/// The seven means of one pair in extended precision, computed on demand.
struct HpMeans {
    ctx: Ctx,
    x: BigFloat,
    y: BigFloat,
    diagonal: bool,
    cache: [Option<BigFloat>; 7],
}

impl HpMeans {
    fn new(pair: PositivePair, digits: u32) -> Result<Self, OracleError> {
        check_digits(digits)?;
        let (x, y) = (pair.x(), pair.y());
        let diagonal = x == y;
        // Bits lost to cancellation in x - y, twice over for x ln x - y ln y
        // near its stationary point.
        let cancel = if diagonal {
            0
        } else {
            libm::ceil(libm::log2(x / (x - y)).max(0.0)) as usize
        };
        let ctx = Ctx::new(bits_for(digits) + 2 * cancel + 64);
        Ok(Self {
            x: ctx.lit(x),
            y: ctx.lit(y),
            ctx,
            diagonal,
            cache: Default::default(),
        })
    }

    fn slot(kind: MeanKind) -> usize {
        MeanKind::ALL.iter().position(|k| *k == kind).unwrap_or(0)
    }

    fn get(&mut self, kind: MeanKind) -> BigFloat {
        let slot = Self::slot(kind);
        if let Some(v) = &self.cache[slot] {
            return v.clone();
        }
        let v = self.compute(kind);
        self.cache[slot] = Some(v.clone());
        v
    }

    fn compute(&mut self, kind: MeanKind) -> BigFloat {
        if self.diagonal {
            return self.x.clone();
        }
        let c = &mut self.ctx;
        let (x, y) = (&self.x, &self.y);
        match kind {
            MeanKind::H => {
                let xy = c.mul(x, y);
                let two_xy = c.add(&xy, &xy);
                c.div(&two_xy, &c.add(x, y))
            }
            MeanKind::G => c.sqrt(&c.mul(x, y)),
            MeanKind::A => c.half(&c.add(x, y)),
            MeanKind::Q => {
                let s = c.add(&c.mul(x, x), &c.mul(y, y));
                c.sqrt(&c.half(&s))
            }
            MeanKind::P => {
                // asin(w) = atan(w / sqrt(1 - w^2)) = atan((x - y) / (2 sqrt(xy))).
                let d = c.sub(x, y);
                let g = c.sqrt(&c.mul(x, y));
                let u = c.div(&d, &c.add(&g, &g));
                let asin_w = c.atan(&u);
                c.div(&d, &c.add(&asin_w, &asin_w))
            }
            MeanKind::L => {
                let d = c.sub(x, y);
                let lx = c.ln(x);
                let ly = c.ln(y);
                c.div(&d, &c.sub(&lx, &ly))
            }
            MeanKind::I => {
                let d = c.sub(x, y);
                let lx = c.ln(x);
                let ly = c.ln(y);
                let num = c.sub(&c.mul(x, &lx), &c.mul(y, &ly));
                let e = c.sub(&c.div(&num, &d), &c.lit(1.0));
                c.exp(&e)
            }
        }
    }
}

/// Evaluates `kind` at `digits` decimal digits.
pub fn eval_mean_hp(kind: MeanKind, pair: PositivePair, digits: u32) -> Result<HpValue, OracleError> {
    let mut m = HpMeans::new(pair, digits)?;
    finish(m.get(kind), digits)
}

fn finish(value: BigFloat, digits: u32) -> Result<HpValue, OracleError> {
    if value.is_nan() || value.is_inf() {
        Err(OracleError::Arithmetic)
    } else {
        Ok(HpValue { value, digits })
    }
}

/// A margin and its larger side in extended precision.
#[derive(Debug, Clone)]
pub struct HpMargin {
    /// Signed margin.
    pub value: HpValue,
    /// Larger side.
    pub magnitude: HpValue,
}

/// Evaluates the literal margin of `id` at `digits` decimal digits.
pub fn margin_hp(
    id: InequalityId,
    pair: PositivePair,
    exponent: Option<f64>,
    digits: u32,
) -> Result<HpMargin, OracleError> {
    id.check_exponent(exponent)?;
    let mut m = HpMeans::new(pair, digits)?;
    use MeanKind::*;
    let (value, magnitude) = match id {
        InequalityId::Eq2Product => {
            let (a, g, q, h) = (m.get(A), m.get(G), m.get(Q), m.get(H));
            let ag = m.ctx.mul(&a, &g);
            let qh = m.ctx.mul(&q, &h);
            (m.ctx.sub(&ag, &qh), m.ctx.max(&ag, &qh))
        }
        InequalityId::Eq1Power | InequalityId::Eq3Sum | InequalityId::LemmaEq11 => {
            let n = if id == InequalityId::Eq3Sum {
                1.0
            } else {
                exponent.ok_or(MarginError::MissingExponent)?
            };
            let (q, h, a, g) = (m.get(Q), m.get(H), m.get(A), m.get(G));
            let c = &mut m.ctx;
            let (qn, hn, an, gn) = (c.pow(&q, n), c.pow(&h, n), c.pow(&a, n), c.pow(&g, n));
            let rhs = c.add(&qn, &hn);
            let lhs = c.add(&an, &gn);
            (c.sub(&rhs, &lhs), c.max(&lhs, &rhs))
        }
        InequalityId::Eq4Sandor => {
            let p2 = {
                let p = m.get(P);
                m.ctx.add(&p, &p)
            };
            let (a, g) = (m.get(A), m.get(G));
            let ag = m.ctx.add(&a, &g);
            (m.ctx.sub(&p2, &ag), m.ctx.max(&p2, &ag))
        }
        InequalityId::Eq6Conj => {
            let p2 = {
                let p = m.get(P);
                m.ctx.add(&p, &p)
            };
            let (q, h) = (m.get(Q), m.get(H));
            let qh = m.ctx.add(&q, &h);
            (m.ctx.sub(&p2, &qh), m.ctx.max(&p2, &qh))
        }
        InequalityId::PLeI => {
            let (i, p) = (m.get(I), m.get(P));
            (m.ctx.sub(&i, &p), m.ctx.max(&i, &p))
        }
        InequalityId::ChainEq10 => {
            let q = chain_quantities_hp(&mut m);
            let mut min: Option<BigFloat> = None;
            for k in 0..5 {
                let link = m.ctx.sub(&q[k + 1], &q[k]);
                min = Some(match min {
                    Some(cur) if cur.cmp(&link).unwrap_or(0) <= 0 => cur,
                    _ => link,
                });
            }
            (min.unwrap_or_else(|| m.ctx.lit(0.0)), q[5].clone())
        }
    };
    Ok(HpMargin {
        value: finish(value, digits)?,
        magnitude: finish(magnitude, digits)?,
    })
}

fn chain_quantities_hp(m: &mut HpMeans) -> [BigFloat; 6] {
    use MeanKind::*;
    let (h, g, a, q, l, i) = (m.get(H), m.get(G), m.get(A), m.get(Q), m.get(L), m.get(I));
    let c = &m.ctx;
    [
        c.sqrt(&c.mul(&q, &h)),
        c.sqrt(&c.mul(&a, &g)),
        c.sqrt(&c.mul(&l, &i)),
        c.half(&c.add(&l, &i)),
        c.half(&c.add(&g, &a)),
        c.half(&c.add(&q, &h)),
    ]
}

/// The six chain quantities in extended precision.
pub fn chain_quantities_at(pair: PositivePair, digits: u32) -> Result<[HpValue; 6], OracleError> {
    let mut m = HpMeans::new(pair, digits)?;
    let q = chain_quantities_hp(&mut m);
    let [a, b, c, d, e, f] = q;
    Ok([
        finish(a, digits)?,
        finish(b, digits)?,
        finish(c, digits)?,
        finish(d, digits)?,
        finish(e, digits)?,
        finish(f, digits)?,
    ])
}

/// Sign determined by [`certify_sign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignOutcome {
    /// Strictly positive at two successive precisions.
    Positive,
    /// Strictly negative at two successive precisions.
    Negative,
    /// Not distinguishable from zero up to the precision cap.
    ZeroWithinBound,
}

impl SignOutcome {
    /// Short name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            SignOutcome::Positive => "positive",
            SignOutcome::Negative => "negative",
            SignOutcome::ZeroWithinBound => "zero",
        }
    }
}

/// Result of [`certify_sign`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedSign {
    /// Certified sign.
    pub outcome: SignOutcome,
    /// `log10` of the magnitude below which a value is indistinguishable from
    /// zero at the final precision; `-inf` when the margin evaluated to an
    /// exact zero.
    pub bound_log10: f64,
    /// Precision (decimal digits) at which the outcome stabilized.
    pub digits: u32,
    /// Oracle value of the margin at `digits`, rounded to binary64.
    pub value: f64,
}

impl CertifiedSign {
    /// The margin evaluated to exactly zero at two precisions.
    pub fn is_exact_zero(&self) -> bool {
        self.outcome == SignOutcome::ZeroWithinBound && self.bound_log10 == f64::NEG_INFINITY
    }
}

/// Escalation schedule of [`certify_sign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// First precision level, at least [`MIN_DIGITS`].
    pub start_digits: u32,
    /// No evaluation above this many digits.
    pub cap_digits: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            start_digits: DEFAULT_START_DIGITS,
            cap_digits: DEFAULT_CAP_DIGITS,
        }
    }
}

/// Certifies the sign of a margin.
///
/// Evaluates at `d` and `2d` digits. A sign is certified when both agree and
/// both exceed `10^(5 - d)` times the larger side; otherwise `d` doubles
/// while `2d` stays within the cap, after which the result is
/// [`SignOutcome::ZeroWithinBound`].  A margin that evaluates to exactly
/// zero at both levels returns immediately.
pub fn certify_sign(
    id: InequalityId,
    pair: PositivePair,
    exponent: Option<f64>,
    opts: CertifyOptions,
) -> Result<CertifiedSign, OracleError> {
    let mut d = opts.start_digits;
    check_digits(d)?;
    let cap = opts.cap_digits.max(2 * d);
    let mut lo = margin_hp(id, pair, exponent, d)?;
    loop {
        let hi = margin_hp(id, pair, exponent, 2 * d)?;
        if lo.value.is_zero() && hi.value.is_zero() {
            return Ok(CertifiedSign {
                outcome: SignOutcome::ZeroWithinBound,
                bound_log10: f64::NEG_INFINITY,
                digits: 2 * d,
                value: 0.0,
            });
        }
        let bound_log2 = (5.0 - f64::from(d)) * LOG2_10 + hi.magnitude.log2_abs();
        let clear = lo.value.log2_abs() > bound_log2 && hi.value.log2_abs() > bound_log2;
        let agree = lo.value.is_negative() == hi.value.is_negative();
        if clear && agree {
            let outcome = if hi.value.is_negative() {
                SignOutcome::Negative
            } else {
                SignOutcome::Positive
            };
            return Ok(CertifiedSign {
                outcome,
                bound_log10: bound_log2 / LOG2_10,
                digits: 2 * d,
                value: hi.value.to_f64(),
            });
        }
        if 4 * d > cap {
            return Ok(CertifiedSign {
                outcome: SignOutcome::ZeroWithinBound,
                bound_log10: bound_log2 / LOG2_10,
                digits: 2 * d,
                value: hi.value.to_f64(),
            });
        }
        d *= 2;
        lo = hi;
    }
}
