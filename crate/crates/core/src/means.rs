//! Binary64 evaluation of the seven means.
//!
//! All evaluators work on the canonical pair `x >= y` and share one
//! [`Kernel`] holding the difference `d = x - y`, the arithmetic and geometric
//! means and `w = (x - y) / (x + y)`.  For normal inputs `d` is exact whenever
//! `y >= x / 2`, which is what keeps the removable singularities of `P`, `L`
//! and `I` well conditioned:
//!
//! * `P = A w / asin(w)` with `asin(w) = atan2(d / 2, G)`, which is well
//!   conditioned both at `w -> 0` and at `w -> 1`;
//! * `L = A w / atanh(w)` with `2 atanh(w) = ln t = log1p(d / y)`;
//! * `ln(I / A) = -sum_k w^(2k) / (2k (2k + 1))` inside the diagonal window,
//!   and `I = x exp(y ln t / d - 1)` outside it (the exponent lies in
//!   `(-1, 0)`, so nothing overflows).
//!
//! Results are clamped into `[y, x]`, where the exact value always lies.

use crate::kind::MeanKind;
use crate::oracle;
use crate::pair::PositivePair;

/// Default `|x - y| / (x + y)` below which the identric series is used.
pub const DEFAULT_DIAGONAL_WINDOW: f64 = 1e-3;

/// Arithmetic used for an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkingFormat {
    /// Native binary64 with the stable paths of this module.
    Binary64,
    /// The extended-precision oracle at the given number of decimal digits,
    /// rounded to binary64 at the end.
    Extended(u32),
}

/// Evaluation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    diagonal_window: f64,
    working_format: WorkingFormat,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            diagonal_window: DEFAULT_DIAGONAL_WINDOW,
            working_format: WorkingFormat::Binary64,
        }
    }
}

impl EvalPolicy {
    /// Builds a policy; `diagonal_window` must lie strictly inside `(0, 1)`.
    pub fn new(diagonal_window: f64, working_format: WorkingFormat) -> Option<Self> {
        (diagonal_window > 0.0 && diagonal_window < 1.0).then_some(Self {
            diagonal_window,
            working_format,
        })
    }

    /// Threshold on `w` for the series paths.
    pub fn diagonal_window(&self) -> f64 {
        self.diagonal_window
    }

    /// Arithmetic in use.
    pub fn working_format(&self) -> WorkingFormat {
        self.working_format
    }
}

/// `sqrt(a * b)` without spurious overflow or underflow.
#[inline]
pub(crate) fn geometric_of(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_normal() {
        libm::sqrt(p)
    } else {
        libm::sqrt(a) * libm::sqrt(b)
    }
}

/// Quantities shared by all evaluators.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub x: f64,
    pub y: f64,
    /// `x - y`.
    pub d: f64,
    pub a: f64,
    pub g: f64,
    /// `(x - y) / (x + y)`, in `[0, 1)`.
    pub w: f64,
}

impl Kernel {
    pub fn new(pair: PositivePair) -> Self {
        let (x, y) = (pair.x(), pair.y());
        let d = x - y;
        let s = x + y;
        let (a, w) = if s.is_finite() {
            (0.5 * s, d / s)
        } else {
            let a = 0.5 * x + 0.5 * y;
            (a, (0.5 * d) / a)
        };
        Self {
            x,
            y,
            d,
            a,
            g: geometric_of(x, y),
            w,
        }
    }

    #[inline]
    pub fn diagonal(&self) -> bool {
        self.d == 0.0
    }

    #[inline]
    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.y, self.x)
    }

    pub fn harmonic(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        // 2xy / (x + y) = y * (x / A), with x / A in [1, 2).
        self.clamp(self.y * (self.x / self.a))
    }

    pub fn geometric(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        self.clamp(self.g)
    }

    pub fn arithmetic(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        self.clamp(self.a)
    }

    pub fn quadratic(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        self.clamp(libm::hypot(self.x, self.y) * core::f64::consts::FRAC_1_SQRT_2)
    }

    /// `asin(w)`, evaluated as the angle of `(d / 2, G)`.
    pub fn asin_w(&self) -> f64 {
        libm::atan2(0.5 * self.d, self.g)
    }

    pub fn seiffert(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        self.clamp((0.5 * self.d) / self.asin_w())
    }

    /// `ln(x / y) = 2 atanh(w)`.
    pub fn ln_ratio(&self) -> f64 {
        let r = self.d / self.y;
        if r.is_finite() {
            libm::log1p(r)
        } else {
            libm::log(self.x) - libm::log(self.y)
        }
    }

    pub fn logarithmic(&self) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        self.clamp(self.d / self.ln_ratio())
    }

    pub fn identric(&self, window: f64) -> f64 {
        if self.diagonal() {
            return self.x;
        }
        if self.w < window {
            self.clamp(self.a * libm::exp(identric_log_ratio_series(self.w)))
        } else {
            // ln(I / x) = y ln(x / y) / (x - y) - 1, in (-1, 0).
            let e = self.y * self.ln_ratio() / self.d - 1.0;
            self.clamp(self.x * libm::exp(e))
        }
    }

    pub fn eval(&self, kind: MeanKind) -> f64 {
        match kind {
            MeanKind::H => self.harmonic(),
            MeanKind::G => self.geometric(),
            MeanKind::A => self.arithmetic(),
            MeanKind::Q => self.quadratic(),
            MeanKind::P => self.seiffert(),
            MeanKind::L => self.logarithmic(),
            MeanKind::I => self.identric(DEFAULT_DIAGONAL_WINDOW),
        }
    }
}

/// `ln(I / A) = -sum_{k >= 1} w^(2k) / (2k (2k + 1))`, summed until the next
/// term no longer changes the result.
pub fn identric_log_ratio_series(w: f64) -> f64 {
    let w2 = w * w;
    let mut power = w2;
    let mut sum = 0.0;
    for k in 1..=4096u32 {
        let k2 = 2.0 * f64::from(k);
        let term = power / (k2 * (k2 + 1.0));
        sum += term;
        if term <= 0.5 * f64::EPSILON * sum {
            break;
        }
        power *= w2;
    }
    -sum
}

/// Harmonic mean.
pub fn harmonic(pair: PositivePair) -> f64 {
    Kernel::new(pair).harmonic()
}

/// Geometric mean.
pub fn geometric(pair: PositivePair) -> f64 {
    Kernel::new(pair).geometric()
}

/// Arithmetic mean.
pub fn arithmetic(pair: PositivePair) -> f64 {
    Kernel::new(pair).arithmetic()
}

/// Quadratic mean; `x^2 + y^2` is never formed.
pub fn quadratic(pair: PositivePair) -> f64 {
    Kernel::new(pair).quadratic()
}

/// Seiffert mean.
pub fn seiffert(pair: PositivePair) -> f64 {
    Kernel::new(pair).seiffert()
}

/// Logarithmic mean.
pub fn logarithmic(pair: PositivePair) -> f64 {
    Kernel::new(pair).logarithmic()
}

/// Identric mean with the default diagonal window.
pub fn identric(pair: PositivePair) -> f64 {
    Kernel::new(pair).identric(DEFAULT_DIAGONAL_WINDOW)
}

/// One of `H`, `G`, `A`, `Q`; `None` for the other three kinds.
pub fn eval_classical(kind: MeanKind, pair: PositivePair) -> Option<f64> {
    kind.is_classical().then(|| Kernel::new(pair).eval(kind))
}

/// Any of the seven means in binary64.
pub fn eval(kind: MeanKind, pair: PositivePair) -> f64 {
    Kernel::new(pair).eval(kind)
}

/// Evaluates `kind` under `policy`.
pub fn eval_with(kind: MeanKind, pair: PositivePair, policy: &EvalPolicy) -> f64 {
    match policy.working_format {
        WorkingFormat::Binary64 => {
            let k = Kernel::new(pair);
            match kind {
                MeanKind::I => k.identric(policy.diagonal_window),
                _ => k.eval(kind),
            }
        }
        WorkingFormat::Extended(digits) => oracle::eval_mean_hp(kind, pair, digits)
            .map(|v| v.to_f64())
            // Digit counts the oracle rejects fall back to binary64.
            .unwrap_or_else(|_| eval(kind, pair)),
    }
}

/// All seven means of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSet {
    /// Harmonic.
    pub h: f64,
    /// Geometric.
    pub g: f64,
    /// Arithmetic.
    pub a: f64,
    /// Quadratic.
    pub q: f64,
    /// Seiffert.
    pub p: f64,
    /// Logarithmic.
    pub l: f64,
    /// Identric.
    pub i: f64,
}

impl MeanSet {
    /// Evaluates all seven means in one pass.
    pub fn of(pair: PositivePair) -> Self {
        let k = Kernel::new(pair);
        Self {
            h: k.harmonic(),
            g: k.geometric(),
            a: k.arithmetic(),
            q: k.quadratic(),
            p: k.seiffert(),
            l: k.logarithmic(),
            i: k.identric(DEFAULT_DIAGONAL_WINDOW),
        }
    }

    /// Component for `kind`.
    pub fn get(&self, kind: MeanKind) -> f64 {
        match kind {
            MeanKind::H => self.h,
            MeanKind::G => self.g,
            MeanKind::A => self.a,
            MeanKind::Q => self.q,
            MeanKind::P => self.p,
            MeanKind::L => self.l,
            MeanKind::I => self.i,
        }
    }
}
