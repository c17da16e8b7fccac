//! Search over the ratio (and exponent) domain.
//!
//! Every margin is homogeneous, so its sign depends only on the canonical
//! ratio `t = max / min` (and the exponent, where there is one).  All
//! searches here therefore run over pairs `(t, 1)`.
//!
//! Randomized steps draw from a ChaCha stream keyed by `(seed, index)`, so
//! results are reproducible and independent of how callers schedule cells.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

use crate::error::ExploreError;
use crate::margins::{self, InequalityId};
use crate::oracle::{certify_sign, CertifiedSign, CertifyOptions, SignOutcome};
use crate::pair::{PositivePair, RatioForm};
use crate::{BINARY64_DIGITS, NEAR_ZERO};

/// Default upper end of the ratio domain.
pub const DEFAULT_T_MAX: f64 = 1e8;
/// Default evaluation budget of a search.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Default number of coarse grid points of [`min_margin_over_ratio`].
pub const DEFAULT_MIN_GRID: usize = 512;

/// Evenly spaced exponents `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentGrid {
    /// First exponent.
    pub lo: f64,
    /// Last exponent.
    pub hi: f64,
    /// Number of exponents; `1` requires `lo == hi`.
    pub steps: usize,
}

impl ExponentGrid {
    /// A single exponent.
    pub fn single(n: f64) -> Self {
        Self { lo: n, hi: n, steps: 1 }
    }

    /// The `i`-th exponent.
    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 || i == 0 {
            self.lo
        } else if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64 / (self.steps - 1) as f64)
        }
    }

    fn validate(&self) -> Result<(), ExploreError> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(ExploreError::InvalidConfig("exponent range must be finite"));
        }
        match self.steps {
            0 => Err(ExploreError::InvalidConfig("exponent steps must be at least 1")),
            1 if self.lo != self.hi => Err(ExploreError::InvalidConfig(
                "a single exponent step needs lo == hi",
            )),
            s if s >= 2 && self.lo >= self.hi => {
                Err(ExploreError::InvalidConfig("exponent range must satisfy lo < hi"))
            }
            _ => Ok(()),
        }
    }
}

/// Search region and reproducibility parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Inequality whose margin is explored.
    pub id: InequalityId,
    /// Smallest ratio, at least 1.
    pub t_lo: f64,
    /// Largest ratio.
    pub t_hi: f64,
    /// Number of ratio grid points, at least 2.
    pub t_steps: usize,
    /// Logarithmic rather than linear ratio spacing.
    pub log_t: bool,
    /// Exponent grid; present exactly when `id` takes an exponent.
    pub exponents: Option<ExponentGrid>,
    /// Seed of all randomized steps.
    pub seed: u64,
    /// Maximum number of binary64 margin evaluations.
    pub budget: usize,
}

impl ScanConfig {
    /// Log-spaced configuration with the default budget and seed 0.
    pub fn new(id: InequalityId, t_lo: f64, t_hi: f64, t_steps: usize) -> Self {
        Self {
            id,
            t_lo,
            t_hi,
            t_steps,
            log_t: true,
            exponents: None,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Sets the exponent grid.
    pub fn with_exponents(mut self, grid: ExponentGrid) -> Self {
        self.exponents = Some(grid);
        self
    }

    /// Sets the seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sets the budget.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Checks the invariants of the configuration.
    pub fn validate(&self) -> Result<(), ExploreError> {
        if !(self.t_lo.is_finite() && self.t_hi.is_finite()) {
            return Err(ExploreError::InvalidConfig("ratio range must be finite"));
        }
        if self.t_lo < 1.0 {
            return Err(ExploreError::InvalidConfig("ratio range must start at t >= 1"));
        }
        if self.t_lo >= self.t_hi {
            return Err(ExploreError::InvalidConfig("ratio range must satisfy t_lo < t_hi"));
        }
        if self.t_steps < 2 {
            return Err(ExploreError::InvalidConfig("ratio steps must be at least 2"));
        }
        match (self.id.requires_exponent(), self.exponents) {
            (true, None) => Err(ExploreError::InvalidConfig("this inequality needs an exponent range")),
            (false, Some(_)) => Err(ExploreError::InvalidConfig(
                "this inequality does not take an exponent",
            )),
            (true, Some(g)) => {
                g.validate()?;
                if self.id == InequalityId::LemmaEq11 {
                    for i in 0..g.steps {
                        let n = g.value(i);
                        if libm::trunc(n) != n {
                            return Err(ExploreError::InvalidConfig(
                                "this inequality needs integer exponents",
                            ));
                        }
                    }
                }
                Ok(())
            }
            (false, None) => Ok(()),
        }
    }

    /// Number of exponent rows (1 without an exponent).
    pub fn n_rows(&self) -> usize {
        self.exponents.map_or(1, |g| g.steps)
    }

    /// Total number of grid cells.
    pub fn cell_count(&self) -> usize {
        self.n_rows().saturating_mul(self.t_steps)
    }

    /// The `i`-th ratio grid point.
    pub fn t_at(&self, i: usize) -> f64 {
        grid_point(self.t_lo, self.t_hi, self.t_steps, i, self.log_t)
    }

    /// The exponent of row `row`.
    pub fn n_at(&self, row: usize) -> Option<f64> {
        self.exponents.map(|g| g.value(row))
    }

    /// `(row, column)` of a row-major cell index.
    pub fn cell_coords(&self, index: usize) -> (usize, usize) {
        (index / self.t_steps, index % self.t_steps)
    }
}

/// `i`-th of `steps` points from `lo` to `hi`; endpoints are exact.
fn grid_point(lo: f64, hi: f64, steps: usize, i: usize, log: bool) -> f64 {
    if i == 0 {
        return lo;
    }
    if i + 1 >= steps {
        return hi;
    }
    let f = i as f64 / (steps - 1) as f64;
    if log {
        let (a, b) = (libm::log(lo), libm::log(hi));
        libm::exp(a + (b - a) * f).clamp(lo, hi)
    } else {
        (lo + (hi - lo) * f).clamp(lo, hi)
    }
}

/// Sign assigned to a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellSign {
    /// Margin positive.
    Positive,
    /// Margin negative.
    Negative,
    /// Margin indistinguishable from zero (certified).
    Zero,
    /// Margin not representable in binary64.
    OutOfRange,
}

impl CellSign {
    /// Short name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            CellSign::Positive => "+",
            CellSign::Negative => "-",
            CellSign::Zero => "0",
            CellSign::OutOfRange => "out_of_range",
        }
    }
}

impl From<SignOutcome> for CellSign {
    fn from(s: SignOutcome) -> Self {
        match s {
            SignOutcome::Positive => CellSign::Positive,
            SignOutcome::Negative => CellSign::Negative,
            SignOutcome::ZeroWithinBound => CellSign::Zero,
        }
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    /// Inequality.
    pub id: InequalityId,
    /// Ratio; the pair is `(t, 1)`.
    pub t: f64,
    /// Exponent, if any.
    pub n: Option<f64>,
    /// Binary64 margin (NaN when out of range).
    pub margin: f64,
    /// Larger side of the margin (NaN when out of range).
    pub magnitude: f64,
    /// Sign, certified when `certified` is set.
    pub sign: CellSign,
    /// Decimal digits behind `sign`.
    pub digits: u32,
    /// Oracle certification, performed for near-zero margins.
    pub certified: Option<CertifiedSign>,
}

impl Cell {
    /// `margin / magnitude`.
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.margin / self.magnitude
        }
    }
}

/// Result of [`scan`]: cells in row-major `(n, t)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMap {
    /// Evaluated cells.
    pub cells: Vec<Cell>,
    /// `false` when the budget ran out before the last cell.
    pub complete: bool,
}

fn near_zero(value: f64, magnitude: f64) -> bool {
    value == 0.0 || value.abs() < NEAR_ZERO * magnitude
}

/// Evaluates cell `index` (row-major) of the grid of `cfg`.
pub fn evaluate_cell(cfg: &ScanConfig, index: usize, certify: CertifyOptions) -> Result<Cell, ExploreError> {
    let (row, col) = cfg.cell_coords(index);
    let (t, n) = (cfg.t_at(col), cfg.n_at(row));
    let pair = PositivePair::from_ratio(t).map_err(|_| ExploreError::InvalidConfig("ratio out of domain"))?;
    let mut cell = Cell {
        id: cfg.id,
        t,
        n,
        margin: f64::NAN,
        magnitude: f64::NAN,
        sign: CellSign::OutOfRange,
        digits: BINARY64_DIGITS,
        certified: None,
    };
    let m = match margins::evaluate(cfg.id, pair, n) {
        Ok(m) => m,
        Err(crate::MarginError::OutOfRange) => return Ok(cell),
        Err(e) => return Err(e.into()),
    };
    cell.margin = m.value;
    cell.magnitude = m.magnitude;
    if near_zero(m.value, m.magnitude) {
        let c = certify_sign(cfg.id, pair, n, certify)?;
        cell.sign = c.outcome.into();
        cell.digits = c.digits;
        cell.certified = Some(c);
    } else if m.value > 0.0 {
        cell.sign = CellSign::Positive;
    } else {
        cell.sign = CellSign::Negative;
    }
    Ok(cell)
}

/// Number of cells [`scan`] evaluates under the budget.
pub fn scan_len(cfg: &ScanConfig) -> usize {
    cfg.cell_count().min(cfg.budget)
}

/// Evaluates the full grid of `cfg`, certifying near-zero cells.
///
/// With a budget smaller than the grid the first `budget` cells are returned
/// and the map is flagged incomplete.
pub fn scan(cfg: &ScanConfig, certify: CertifyOptions) -> Result<SignMap, ExploreError> {
    cfg.validate()?;
    let len = scan_len(cfg);
    let cells = (0..len)
        .map(|i| evaluate_cell(cfg, i, certify))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignMap {
        cells,
        complete: len == cfg.cell_count(),
    })
}

/// A certified counterexample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    /// Inequality refuted at this point.
    pub id: InequalityId,
    /// The input, `(t, 1)`.
    pub ratio: RatioForm,
    /// Exponent, if any.
    pub exponent: Option<f64>,
    /// Binary64 margin.
    pub margin: f64,
    /// Larger side of the margin.
    pub magnitude: f64,
    /// Oracle certification; always [`SignOutcome::Negative`].
    pub certified: CertifiedSign,
}

impl Witness {
    /// Precision at which the sign was certified.
    pub fn digits(&self) -> u32 {
        self.certified.digits
    }

    /// The input pair.
    pub fn pair(&self) -> PositivePair {
        // `ratio` was built from a valid pair.
        PositivePair::from_ratio(self.ratio.t).expect("witness ratio is a valid input")
    }
}

/// Smallest margin seen by a search that found no counterexample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinObserved {
    /// Ratio of the minimum.
    pub t: f64,
    /// Exponent of the minimum.
    pub exponent: Option<f64>,
    /// Smallest binary64 margin.
    pub margin: f64,
    /// Larger side at the minimum.
    pub magnitude: f64,
}

/// Result of [`hunt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HuntOutcome {
    /// A certified counterexample.
    Found(Witness),
    /// No counterexample within the region and budget.
    NotFound {
        /// Smallest observed margin, if any cell was evaluable.
        min: Option<MinObserved>,
        /// Evaluations spent.
        evaluations: usize,
        /// The budget ran out before the search finished.
        exhausted: bool,
    },
}

impl HuntOutcome {
    /// The witness, if one was found.
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            HuntOutcome::Found(w) => Some(w),
            HuntOutcome::NotFound { .. } => None,
        }
    }
}

/// Tuning of [`hunt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuntOptions {
    /// Random samples drawn in each refinement interval.
    pub refine_samples: usize,
    /// Width, in `ln t`, at which golden-section search stops.
    pub golden_tol: f64,
    /// Maximum number of oracle certifications per exponent row.
    pub max_certifications: usize,
    /// Oracle schedule.
    pub certify: CertifyOptions,
}

impl Default for HuntOptions {
    fn default() -> Self {
        Self {
            refine_samples: 64,
            golden_tol: 1e-10,
            max_certifications: 8,
            certify: CertifyOptions::default(),
        }
    }
}

/// Binary64 margin at ratio `t` under an evaluation budget.
struct Probe {
    id: InequalityId,
    exponent: Option<f64>,
    used: usize,
    budget: usize,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    value: f64,
    magnitude: f64,
}

impl Probe {
    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    /// `None` when the budget is spent; NaN value when out of range.
    fn eval(&mut self, t: f64) -> Result<Option<Sample>, ExploreError> {
        if self.exhausted() {
            return Ok(None);
        }
        self.used += 1;
        let pair = PositivePair::from_ratio(t).map_err(|_| ExploreError::InvalidConfig("ratio out of domain"))?;
        match margins::evaluate(self.id, pair, self.exponent) {
            Ok(m) => Ok(Some(Sample {
                t,
                value: m.value,
                magnitude: m.magnitude,
            })),
            Err(crate::MarginError::OutOfRange) => Ok(Some(Sample {
                t,
                value: f64::NAN,
                magnitude: f64::NAN,
            })),
            Err(e) => Err(e.into()),
        }
    }
}

fn lower(a: &Sample, b: &Sample) -> bool {
    // NaN never wins.
    a.value < b.value || (b.value.is_nan() && !a.value.is_nan())
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded samples in `[a, b]`, uniform in `ln t`, sorted ascending.
fn log_samples(rng: &mut ChaCha8Rng, a: f64, b: f64, count: usize) -> Vec<f64> {
    let (la, lb) = (libm::log(a), libm::log(b));
    let mut v: Vec<f64> = (0..count)
        .map(|_| libm::exp(la + (lb - la) * unit_f64(rng)).clamp(a, b))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of the margin over `ln t` in `[a, b]`;
/// returns the best sample seen.
fn golden(probe: &mut Probe, a: f64, b: f64, tol: f64, best: Sample) -> Result<Sample, ExploreError> {
    let mut best = best;
    let (mut lo, mut hi) = (libm::log(a), libm::log(b));
    if !(hi > lo) {
        return Ok(best);
    }
    let at = |u: f64| libm::exp(u).clamp(a, b);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let Some(mut fc) = probe.eval(at(c))? else { return Ok(best) };
    let Some(mut fd) = probe.eval(at(d))? else { return Ok(best) };
    for s in [fc, fd] {
        if lower(&s, &best) {
            best = s;
        }
    }
    while hi - lo > tol {
        // NaN compares false: treat it as the higher side.
        if fc.value < fd.value || fd.value.is_nan() {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            match probe.eval(at(c))? {
                Some(s) => fc = s,
                None => break,
            }
            if lower(&fc, &best) {
                best = fc;
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            match probe.eval(at(d))? {
                Some(s) => fd = s,
                None => break,
            }
            if lower(&fd, &best) {
                best = fd;
            }
        }
    }
    Ok(best)
}

/// Searches for a certified counterexample in the region of `cfg`.
///
/// The diagonal `t = 1`, where every margin is exactly zero, is left out of
/// the coarse grid.
///
/// Per exponent row: evaluate the coarse grid; in the first run of negative
/// cells, refine the most negative cell with seeded random samples and
/// golden-section search when it is an interior local minimum, and otherwise
/// locate the onset of the run (the smallest ratio with a negative margin);
/// then certify.  Candidates that fail certification are replaced by the
/// next most negative cells.  Rows without negative cells refine around
/// their minimum and certify only if that turns negative.  Rows are
/// searched in order and the first certified witness is returned.
pub fn hunt(cfg: &ScanConfig, opts: &HuntOptions) -> Result<HuntOutcome, ExploreError> {
    cfg.validate()?;
    let mut used = 0usize;
    let mut min: Option<MinObserved> = None;
    let mut exhausted = false;
    for row in 0..cfg.n_rows() {
        let mut probe = Probe {
            id: cfg.id,
            exponent: cfg.n_at(row),
            used,
            budget: cfg.budget,
        };
        let found = hunt_row(cfg, row, opts, &mut probe, &mut min)?;
        used = probe.used;
        exhausted |= probe.exhausted();
        if let Some(w) = found {
            return Ok(HuntOutcome::Found(w));
        }
        if exhausted {
            break;
        }
    }
    Ok(HuntOutcome::NotFound {
        min,
        evaluations: used,
        exhausted,
    })
}

fn hunt_row(
    cfg: &ScanConfig,
    row: usize,
    opts: &HuntOptions,
    probe: &mut Probe,
    min: &mut Option<MinObserved>,
) -> Result<Option<Witness>, ExploreError> {
    let exponent = cfg.n_at(row);
    let mut grid = Vec::with_capacity(cfg.t_steps);
    // Every margin vanishes at t = 1; that point carries no sign information.
    let first = usize::from(cfg.t_lo == 1.0);
    for i in first..cfg.t_steps {
        match probe.eval(cfg.t_at(i))? {
            Some(s) => grid.push(s),
            None => break,
        }
    }
    let track = |s: &Sample, min: &mut Option<MinObserved>| {
        if !s.value.is_nan() && min.map_or(true, |m| s.value < m.margin) {
            *min = Some(MinObserved {
                t: s.t,
                exponent,
                margin: s.value,
                magnitude: s.magnitude,
            });
        }
    };
    for s in &grid {
        track(s, min);
    }
    let mut certifications = 0usize;
    let try_certify = |s: &Sample, certs: &mut usize| -> Result<Option<Witness>, ExploreError> {
        if !(s.value < 0.0) || *certs >= opts.max_certifications {
            return Ok(None);
        }
        *certs += 1;
        let pair = PositivePair::from_ratio(s.t).map_err(|_| ExploreError::InvalidConfig("ratio out of domain"))?;
        let c = certify_sign(cfg.id, pair, exponent, opts.certify)?;
        Ok((c.outcome == SignOutcome::Negative).then_some(Witness {
            id: cfg.id,
            ratio: RatioForm { t: s.t, scale: 1.0 },
            exponent,
            margin: s.value,
            magnitude: s.magnitude,
            certified: c,
        }))
    };

    let stream = |stage: u64| ((row as u64) << 8) | stage;
    let neg: Vec<usize> = (0..grid.len()).filter(|&i| grid[i].value < 0.0).collect();
    if let Some(&k0) = neg.first() {
        let k1 = (k0..grid.len()).take_while(|&i| grid[i].value < 0.0).last().unwrap_or(k0);
        let kmin = (k0..=k1).fold(k0, |b, i| if lower(&grid[i], &grid[b]) { i } else { b });
        let interior = kmin > 0 && kmin + 1 < grid.len() && grid[kmin - 1].value > grid[kmin].value
            && grid[kmin + 1].value > grid[kmin].value;
        let candidate = if interior {
            refine_min(cfg, probe, opts, &grid, kmin, stream(1))?
        } else {
            onset(cfg, probe, opts, &grid, k0, stream(2))?
        };
        track(&candidate, min);
        if let Some(w) = try_certify(&candidate, &mut certifications)? {
            return Ok(Some(w));
        }
        // Fall back to the negative grid cells, most negative first.
        let mut order = neg.clone();
        order.sort_by(|&a, &b| grid[a].value.total_cmp(&grid[b].value).then(a.cmp(&b)));
        for i in order {
            if let Some(w) = try_certify(&grid[i], &mut certifications)? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    let Some(kmin) = (0..grid.len())
        .filter(|&i| !grid[i].value.is_nan())
        .reduce(|b, i| if lower(&grid[i], &grid[b]) { i } else { b })
    else {
        return Ok(None);
    };
    let candidate = refine_min(cfg, probe, opts, &grid, kmin, stream(3))?;
    track(&candidate, min);
    try_certify(&candidate, &mut certifications)
}

/// Random then golden-section refinement in the cells adjacent to `k`.
fn refine_min(
    cfg: &ScanConfig,
    probe: &mut Probe,
    opts: &HuntOptions,
    grid: &[Sample],
    k: usize,
    stream: u64,
) -> Result<Sample, ExploreError> {
    let a = if k > 0 { grid[k - 1].t } else { cfg.t_lo };
    let b = grid[(k + 1).min(grid.len() - 1)].t;
    let mut best = grid[k];
    let mut rng = stream_rng(cfg.seed, stream);
    for t in log_samples(&mut rng, a, b, opts.refine_samples) {
        match probe.eval(t)? {
            Some(s) if lower(&s, &best) => best = s,
            Some(_) => {}
            None => return Ok(best),
        }
    }
    // Golden-section around the best sample, one grid cell either side.
    let la = libm::log(a);
    let lb = libm::log(b);
    let width = (lb - la) / (opts.refine_samples.max(1) as f64);
    let lt = libm::log(best.t);
    let ga = libm::exp((lt - width).max(la)).max(a);
    let gb = libm::exp((lt + width).min(lb)).min(b);
    golden(probe, ga, gb, opts.golden_tol, best)
}

/// Smallest-ratio negative sample between grid points `k0 - 1` and `k0`.
fn onset(
    cfg: &ScanConfig,
    probe: &mut Probe,
    opts: &HuntOptions,
    grid: &[Sample],
    k0: usize,
    stream: u64,
) -> Result<Sample, ExploreError> {
    let a = if k0 > 0 { grid[k0 - 1].t } else { cfg.t_lo };
    let b = grid[k0].t;
    if !(a < b) {
        return Ok(grid[k0]);
    }
    let mut rng = stream_rng(cfg.seed, stream);
    for t in log_samples(&mut rng, a, b, opts.refine_samples) {
        match probe.eval(t)? {
            Some(s) if s.value < 0.0 => return Ok(s),
            Some(_) => {}
            None => break,
        }
    }
    Ok(grid[k0])
}

/// A certified sign change of a margin in the ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    /// Lower ratio.
    pub t_lo: f64,
    /// Upper ratio.
    pub t_hi: f64,
    /// Certified sign at `t_lo`.
    pub sign_lo: CertifiedSign,
    /// Certified sign at `t_hi`, opposite to `sign_lo`.
    pub sign_hi: CertifiedSign,
    /// Bisection steps performed.
    pub steps: usize,
}

impl Bracket {
    /// `ln(t_hi / t_lo)`.
    pub fn log_width(&self) -> f64 {
        libm::log(self.t_hi) - libm::log(self.t_lo)
    }
}

fn certify_at(
    id: InequalityId,
    exponent: Option<f64>,
    t: f64,
    opts: CertifyOptions,
) -> Result<CertifiedSign, ExploreError> {
    let pair = PositivePair::from_ratio(t).map_err(|_| ExploreError::InvalidConfig("ratio out of domain"))?;
    Ok(certify_sign(id, pair, exponent, opts)?)
}

/// Bisects `ln t` between two ratios whose margins have certified opposite
/// signs until `ln(t_hi / t_lo) <= tol_log_t`.
///
/// Every midpoint is certified; bisection stops early if a midpoint is
/// indistinguishable from zero or the interval can no longer be split in
/// binary64.  Both endpoints always keep certified opposite signs.
pub fn bracket_ratio_crossing(
    id: InequalityId,
    exponent: Option<f64>,
    t_lo: f64,
    t_hi: f64,
    tol_log_t: f64,
    opts: CertifyOptions,
) -> Result<Bracket, ExploreError> {
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo >= 1.0 && t_lo < t_hi) {
        return Err(ExploreError::InvalidConfig("bracket needs 1 <= t_lo < t_hi"));
    }
    if !(tol_log_t > 0.0) {
        return Err(ExploreError::InvalidConfig("bracket tolerance must be positive"));
    }
    id.check_exponent(exponent)?;
    let decided = |c: &CertifiedSign| c.outcome != SignOutcome::ZeroWithinBound;
    let mut lo = (t_lo, certify_at(id, exponent, t_lo, opts)?);
    let mut hi = (t_hi, certify_at(id, exponent, t_hi, opts)?);
    if !decided(&lo.1) || !decided(&hi.1) || lo.1.outcome == hi.1.outcome {
        return Err(ExploreError::SameSign);
    }
    let mut steps = 0;
    while libm::log(hi.0) - libm::log(lo.0) > tol_log_t {
        let mid = libm::exp(0.5 * (libm::log(lo.0) + libm::log(hi.0)));
        if !(mid > lo.0 && mid < hi.0) {
            break;
        }
        let c = certify_at(id, exponent, mid, opts)?;
        steps += 1;
        if !decided(&c) {
            break;
        }
        if c.outcome == lo.1.outcome {
            lo = (mid, c);
        } else {
            hi = (mid, c);
        }
    }
    Ok(Bracket {
        t_lo: lo.0,
        t_hi: hi.0,
        sign_lo: lo.1,
        sign_hi: hi.1,
        steps,
    })
}

/// Tuning of [`min_margin_over_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinOptions {
    /// Number of coarse log-spaced grid points.
    pub grid: usize,
    /// Width, in `ln t`, at which golden-section refinement stops.
    pub refine_tol: f64,
    /// Exclude `t_lo` itself (the range is `(t_lo, t_hi]`).
    pub open_lo: bool,
    /// Oracle schedule for near-zero minima.
    pub certify: CertifyOptions,
}

impl Default for MinOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_MIN_GRID,
            refine_tol: 1e-8,
            open_lo: false,
            certify: CertifyOptions::default(),
        }
    }
}

/// Minimum of a margin over a ratio range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioMinimum {
    /// Minimizing ratio.
    pub t: f64,
    /// Binary64 margin at `t`.
    pub margin: f64,
    /// Larger side at `t`.
    pub magnitude: f64,
    /// Certification, present when the minimum is negative or within
    /// [`NEAR_ZERO`] of zero.
    pub certified: Option<CertifiedSign>,
}

/// Coarse log grid then golden-section refinement around the best cell.
///
/// Out-of-range points are skipped; if every point is out of range the
/// result carries a NaN margin.
pub fn min_margin_over_ratio(
    id: InequalityId,
    exponent: Option<f64>,
    t_lo: f64,
    t_hi: f64,
    opts: MinOptions,
) -> Result<RatioMinimum, ExploreError> {
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo >= 1.0 && t_lo < t_hi) {
        return Err(ExploreError::InvalidConfig("ratio range needs 1 <= t_lo < t_hi"));
    }
    if opts.grid < 2 {
        return Err(ExploreError::InvalidConfig("grid needs at least 2 points"));
    }
    id.check_exponent(exponent)?;
    let mut probe = Probe {
        id,
        exponent,
        used: 0,
        budget: usize::MAX,
    };
    // Closed range: points 0..grid; open: points 1..=grid of grid + 1.
    let (steps, first) = if opts.open_lo { (opts.grid + 1, 1) } else { (opts.grid, 0) };
    let ts: Vec<f64> = (first..steps).map(|i| grid_point(t_lo, t_hi, steps, i, true)).collect();
    let mut samples = Vec::with_capacity(ts.len());
    for &t in &ts {
        if let Some(s) = probe.eval(t)? {
            samples.push(s);
        }
    }
    let k = (0..samples.len()).fold(0, |b, i| if lower(&samples[i], &samples[b]) { i } else { b });
    let mut best = samples[k];
    if !best.value.is_nan() {
        let a = if k == 0 {
            if opts.open_lo {
                // Stay strictly inside the open end.
                libm::exp(0.5 * (libm::log(t_lo) + libm::log(ts[0])))
            } else {
                t_lo
            }
        } else {
            ts[k - 1]
        };
        let b = ts[(k + 1).min(ts.len() - 1)];
        best = golden(&mut probe, a, b, opts.refine_tol, best)?;
    }
    let certified = if best.value < 0.0 || near_zero(best.value, best.magnitude) {
        Some(certify_at(id, exponent, best.t, opts.certify)?)
    } else {
        None
    };
    Ok(RatioMinimum {
        t: best.t,
        margin: best.value,
        magnitude: best.magnitude,
        certified,
    })
}

/// Classification of one exponent row of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowClass {
    /// No certified negative margin on the sampled ratios.
    HoldsOnGrid,
    /// The minimum margin is certified negative.
    Fails,
    /// The minimum is within [`NEAR_ZERO`] of zero and the oracle cannot
    /// separate it from zero.
    Boundary,
}

impl RowClass {
    /// Short name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            RowClass::HoldsOnGrid => "holds-on-grid",
            RowClass::Fails => "fails",
            RowClass::Boundary => "boundary",
        }
    }
}

/// One row of a [`CriticalProfile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    /// Exponent.
    pub n: f64,
    /// Ratio of the minimum.
    pub t_at_min: f64,
    /// Smallest power gap found.
    pub min_margin: f64,
    /// Larger side at the minimum.
    pub magnitude: f64,
    /// Classification.
    pub class: RowClass,
    /// Certification of the minimum, if performed.
    pub certified: Option<CertifiedSign>,
}

/// Per-exponent minima of the power gap over a ratio range.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalProfile {
    /// One row per exponent, in input order.
    pub rows: Vec<ProfileRow>,
}

fn classify(m: &RatioMinimum) -> RowClass {
    match m.certified {
        Some(c) if c.outcome == SignOutcome::Negative => RowClass::Fails,
        Some(c)
            if c.outcome == SignOutcome::ZeroWithinBound
                && !c.is_exact_zero()
                && near_zero(m.margin, m.magnitude) =>
        {
            RowClass::Boundary
        }
        _ => RowClass::HoldsOnGrid,
    }
}

/// Profiles a single exponent over `(t_lo, t_hi]` (or `[t_lo, t_hi]`, per
/// `opts.open_lo`).
pub fn profile_row(n: f64, t_lo: f64, t_hi: f64, opts: MinOptions) -> Result<ProfileRow, ExploreError> {
    let m = min_margin_over_ratio(InequalityId::Eq1Power, Some(n), t_lo, t_hi, opts)?;
    Ok(ProfileRow {
        n,
        t_at_min: m.t,
        min_margin: m.margin,
        magnitude: m.magnitude,
        class: classify(&m),
        certified: m.certified,
    })
}

/// Profiles each exponent of `n_grid` over the ratio range.
pub fn exponent_profile(n_grid: &[f64], t_lo: f64, t_hi: f64, opts: MinOptions) -> Result<CriticalProfile, ExploreError> {
    if n_grid.iter().any(|n| !n.is_finite()) {
        return Err(ExploreError::InvalidConfig("exponents must be finite"));
    }
    let rows = n_grid
        .iter()
        .map(|&n| profile_row(n, t_lo, t_hi, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CriticalProfile { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let cfg = ScanConfig::new(InequalityId::Eq6Conj, 1.0, 1000.0, 4);
        assert_eq!(cfg.t_at(0), 1.0);
        assert_eq!(cfg.t_at(3), 1000.0);
        assert!((cfg.t_at(1) - 10.0).abs() < 1e-12);
        let g = ExponentGrid { lo: -1.0, hi: 1.0, steps: 3 };
        assert_eq!([g.value(0), g.value(1), g.value(2)], [-1.0, 0.0, 1.0]);
    }

    #[test]
    fn validation() {
        let ok = ScanConfig::new(InequalityId::Eq2Product, 1.0, 2.0, 2);
        assert!(ok.validate().is_ok());
        assert!(ScanConfig { t_lo: 0.5, ..ok }.validate().is_err());
        assert!(ScanConfig { t_hi: 1.0, ..ok }.validate().is_err());
        assert!(ScanConfig { t_steps: 1, ..ok }.validate().is_err());
        assert!(ok.with_exponents(ExponentGrid::single(1.0)).validate().is_err());
        let p = ScanConfig::new(InequalityId::Eq1Power, 1.0, 2.0, 2);
        assert!(p.validate().is_err());
        assert!(p.with_exponents(ExponentGrid::single(0.5)).validate().is_ok());
        assert!(p
            .with_exponents(ExponentGrid { lo: 1.0, hi: 0.0, steps: 2 })
            .validate()
            .is_err());
        let l = ScanConfig { id: InequalityId::LemmaEq11, ..p };
        assert!(l.with_exponents(ExponentGrid::single(0.5)).validate().is_err());
    }

    #[test]
    fn rng_streams_are_keyed() {
        let a = unit_f64(&mut stream_rng(7, 1));
        let b = unit_f64(&mut stream_rng(7, 1));
        let c = unit_f64(&mut stream_rng(7, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((0.0..1.0).contains(&a));
    }

    #[test]
    fn scan_respects_budget() {
        let cfg = ScanConfig::new(InequalityId::Eq2Product, 1.0, 100.0, 50).with_budget(10);
        let map = scan(&cfg, CertifyOptions::default()).unwrap();
        assert_eq!(map.cells.len(), 10);
        assert!(!map.complete);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        // Chain margin has its minimum at t = 1 on [1, 4].
        let mut probe = Probe {
            id: InequalityId::Eq2Product,
            exponent: None,
            used: 0,
            budget: usize::MAX,
        };
        let start = probe.eval(4.0).unwrap().unwrap();
        let best = golden(&mut probe, 1.0, 4.0, 1e-10, start).unwrap();
        assert!(best.t < 1.0 + 1e-8);
    }
}
