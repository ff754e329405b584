//! Adaptive quadrature for the integral representations on `[0, 1]`.
//!
//! The base rule is the embedded 7/15-point Gauss-Kronrod pair; panels are
//! refined by bisection, largest estimated error first, with ties broken by
//! the lower left endpoint so results are deterministic. The `(ln u)^(nu-1)`
//! endpoint singularity at `u = 0` is removed by the back-substitution
//! `u = e^(-t)`, which turns the singular factor into the smooth
//! `t^(nu-1) e^(-t)` on a geometrically truncated semi-infinite panel.

use crate::laplace::{IntegralRep, Singularity};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Tolerances and budgets for one integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_evals: u64,
    /// Test hook: pre-split panels at the annotated kernel-denominator
    /// minimum. Disabling this loses the sharply peaked golden cases.
    pub split_near_singular: bool,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 60,
            max_evals: 200_000,
            split_near_singular: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
    pub converged: bool,
    pub panels: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    /// Budget exhausted; the best estimate reached is in the payload.
    #[error("quadrature did not converge (best estimate {:.6e} +- {:.3e} after {} evals)",
            .0.value, .0.error_estimate, .0.evals)]
    NoConvergence(QuadResult),
    /// The integrand evaluated to NaN/inf at an interior point; signals a
    /// missing singularity annotation upstream.
    #[error("integrand non-finite at {point}")]
    NonFinite { point: f64 },
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard QUADPACK values, quoted at source
// precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One Gauss-Kronrod application. Returns (value, error estimate) or the
/// interior point where the integrand went non-finite.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 15];
    for (i, &xi) in XGK.iter().enumerate() {
        let lo = center - half * xi;
        let hi = center + half * xi;
        let flo = f(lo);
        if !flo.is_finite() {
            return Err(QuadError::NonFinite { point: lo });
        }
        fv[i] = flo;
        if i < 7 {
            let fhi = f(hi);
            if !fhi.is_finite() {
                return Err(QuadError::NonFinite { point: hi });
            }
            fv[14 - i] = fhi;
        }
    }
    let mut kronrod = WGK[7] * fv[7];
    let mut gauss = WG[3] * fv[7];
    let mut resabs = WGK[7] * fv[7].abs();
    for i in 0..7 {
        let fsum = fv[i] + fv[14 - i];
        kronrod += WGK[i] * fsum;
        resabs += WGK[i] * (fv[i].abs() + fv[14 - i].abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fv[7] - mean).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }
    let value = kronrod * half;
    resabs *= half.abs();
    resasc *= half.abs();
    // QUADPACK error rescaling: sharpens |K - G| without letting it
    // underestimate rounding noise
    let raw = ((kronrod - gauss) * half).abs();
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err, resabs))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
    /// Which integrand this panel belongs to (u-domain or t-domain).
    func: usize,
}

/// Max-heap ordering on error, ties broken by lower left endpoint.
#[derive(Debug, Clone, Copy)]
struct HeapKey {
    err: f64,
    a: f64,
    slot: usize,
}

impl PartialEq for HeapKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapKey {}
impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Adaptive<'a> {
    funcs: Vec<&'a dyn Fn(f64) -> f64>,
    panels: Vec<Panel>,
    heap: BinaryHeap<HeapKey>,
    evals: u64,
    /// Running integral of |f|, used for conditioning floors on the error.
    resabs: f64,
}

impl<'a> Adaptive<'a> {
    fn new(funcs: Vec<&'a dyn Fn(f64) -> f64>) -> Self {
        Self { funcs, panels: Vec::new(), heap: BinaryHeap::new(), evals: 0, resabs: 0.0 }
    }

    fn push_panel(&mut self, func: usize, a: f64, b: f64, depth: u32) -> Result<(), QuadError> {
        let (value, err, resabs) = gk15(self.funcs[func], a, b)?;
        self.evals += 15;
        self.resabs += resabs;
        let slot = self.panels.len();
        self.panels.push(Panel { a, b, value, err, depth, func });
        self.heap.push(HeapKey { err, a, slot });
        Ok(())
    }

    /// Deterministic totals: sum in (func, left endpoint) order.
    fn totals(&self) -> (f64, f64) {
        let mut order: Vec<usize> = (0..self.panels.len()).collect();
        order.sort_by(|&i, &j| {
            let (p, q) = (&self.panels[i], &self.panels[j]);
            p.func.cmp(&q.func).then(p.a.total_cmp(&q.a))
        });
        let mut value = 0.0;
        let mut err = 0.0;
        for i in order {
            value += self.panels[i].value;
            err += self.panels[i].err;
        }
        (value, err)
    }

    /// Refine until the tolerance, eval budget, or depth limit is hit.
    /// Totals are tracked incrementally; the returned value/error pair is the
    /// deterministic sorted-order sum (or, on non-convergence, the best
    /// snapshot along the refinement sequence).
    fn run(&mut self, cfg: &QuadConfig) -> Result<(f64, f64, bool), QuadError> {
        let (mut value, mut err) = self.totals();
        let mut best = (value, err);
        loop {
            if err < best.1 {
                best = (value, err);
            }
            let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
            if err <= tol {
                let (value, err) = self.totals();
                return Ok((value, err, err <= cfg.abs_tol.max(cfg.rel_tol * value.abs())));
            }
            if self.evals + 30 > cfg.max_evals {
                return Ok((best.0, best.1, false));
            }
            let key = match self.heap.pop() {
                Some(k) => k,
                None => return Ok((best.0, best.1, false)),
            };
            let panel = self.panels[key.slot];
            let mid = 0.5 * (panel.a + panel.b);
            // depth-capped or binary64-exhausted panels stop being refined but
            // keep contributing to the totals
            if panel.depth >= cfg.max_depth || !(panel.a < mid && mid < panel.b) {
                continue;
            }
            // replace the panel in place with its left child, append the right
            let (lv, le, lres) = gk15(self.funcs[panel.func], panel.a, mid)?;
            let (rv, re, rres) = gk15(self.funcs[panel.func], mid, panel.b)?;
            self.evals += 30;
            self.resabs += lres + rres;
            value += lv + rv - panel.value;
            err += le + re - panel.err;
            self.panels[key.slot] =
                Panel { a: panel.a, b: mid, value: lv, err: le, depth: panel.depth + 1, func: panel.func };
            self.heap.push(HeapKey { err: le, a: panel.a, slot: key.slot });
            let slot = self.panels.len();
            self.panels.push(Panel { a: mid, b: panel.b, value: rv, err: re, depth: panel.depth + 1, func: panel.func });
            self.heap.push(HeapKey { err: re, a: mid, slot });
        }
    }
}

/// Evaluate an [`IntegralRep`] to the configured tolerance.
///
/// Panels are pre-split at every annotated near-singular point and at
/// `u = 0.5`; the `u = 0` logarithmic endpoint (when `log_power >= 1`) is
/// handled by the exponential back-substitution.
pub fn integrate(rep: &IntegralRep, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    let scale = rep.constant * rep.prefactor;
    if scale == 0.0 {
        // identically zero integrand (e.g. a sin family at a boundary zero)
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evals: 0, converged: true, panels: 0 });
    }
    let p = rep.log_power as i32;
    let x = rep.x;
    let kernel = rep.kernel;

    // bounded kernel factor g(u) = P(u)/Q(u); poles map to +-inf and are
    // caught by the non-finite check rather than unwinding
    let g = move |u: f64| kernel.rational(x, u).unwrap_or(f64::INFINITY);

    let f_u = move |u: f64| {
        let w = if p == 0 { 1.0 } else { u.ln().powi(p) };
        scale * g(u) * w
    };
    // for u in [0, cut]: u = e^(-t), (ln u)^p du = (-1)^p t^p e^(-t) dt
    let neg1p = if p % 2 == 0 { 1.0 } else { -1.0 };
    let f_t = move |t: f64| scale * g((-t).exp()) * neg1p * t.powi(p) * (-t).exp();

    let log_cut: Option<f64> = if p >= 1 { Some(0.25) } else { None };
    let lower = log_cut.unwrap_or(0.0);

    // u-domain breakpoints
    let mut cuts = vec![lower, 0.5, 1.0];
    if cfg.split_near_singular {
        for s in &rep.singularities {
            if let Singularity::NearSingular { u0, .. } = s {
                if *u0 > lower + 1e-12 && *u0 < 1.0 - 1e-12 {
                    cuts.push(*u0);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut ad = Adaptive::new(vec![&f_u, &f_t]);
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            ad.push_panel(0, w[0], w[1], 0)?;
        }
    }

    // semi-infinite t-panel with geometric truncation
    let mut trunc_err = 0.0;
    if let Some(cut) = log_cut {
        let t0 = -cut.ln();
        // bound |g| on [0, cut] from a coarse sample
        let mut gmax: f64 = 0.0;
        for i in 0..=32 {
            let u = cut * i as f64 / 32.0;
            let v = g(u).abs();
            if v.is_finite() {
                gmax = gmax.max(v);
            }
        }
        ad.evals += 33;
        gmax = gmax.max(1e-30);
        let target = cfg.abs_tol / (10.0 * scale.abs() * gmax);
        let mut big_t = t0.max(30.0);
        while 2.0 * big_t.powi(p) * (-big_t).exp() > target && big_t < 800.0 {
            big_t *= 1.25;
        }
        trunc_err = scale.abs() * gmax * 2.0 * big_t.powi(p) * (-big_t).exp();
        ad.push_panel(1, t0, big_t, 0)?;
    }

    let (value, err, converged) = ad.run(cfg)?;
    // conditioning floor: the trig prefactor carries ~1 ulp of absolute
    // rounding, which scales the whole integral; near prefactor zeros (e.g.
    // sin x at x = pi) this, not the quadrature, dominates the uncertainty
    let cond_err = f64::EPSILON * ad.resabs / rep.prefactor.abs().max(f64::MIN_POSITIVE);
    let result = QuadResult {
        value,
        error_estimate: err + trunc_err + cond_err,
        evals: ad.evals,
        converged: converged && err + trunc_err <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
        panels: ad.panels.len() as u32,
    };
    if result.converged {
        Ok(result)
    } else {
        Err(QuadError::NoConvergence(result))
    }
}

/// Integrate `g(u) * (ln u)^log_power` over `[0, a]` via the back-substitution
/// `u = e^(-t)` onto a truncated semi-infinite panel. `log_power >= 1` and `g`
/// continuous on the interval.
pub fn integrate_log_endpoint<G: Fn(f64) -> f64>(
    g: G,
    log_power: u32,
    a: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    assert!(log_power >= 1, "log_power must be >= 1");
    assert!(a > 0.0 && a <= 1.0, "interval must be (0, a] with a <= 1");
    let p = log_power as i32;
    let neg1p = if p % 2 == 0 { 1.0 } else { -1.0 };
    let f_t = |t: f64| g((-t).exp()) * neg1p * t.powi(p) * (-t).exp();

    let t0 = -a.ln();
    let mut gmax: f64 = 0.0;
    for i in 0..=32 {
        let u = a * i as f64 / 32.0;
        let v = g(u).abs();
        if v.is_finite() {
            gmax = gmax.max(v);
        }
    }
    gmax = gmax.max(1e-30);
    let target = cfg.abs_tol / (10.0 * gmax);
    let mut big_t = t0.max(30.0);
    while 2.0 * big_t.powi(p) * (-big_t).exp() > target && big_t < 800.0 {
        big_t *= 1.25;
    }
    let trunc_err = gmax * 2.0 * big_t.powi(p) * (-big_t).exp();

    let f_obj: &dyn Fn(f64) -> f64 = &f_t;
    let mut ad = Adaptive::new(vec![f_obj]);
    ad.evals += 33;
    ad.push_panel(0, t0, big_t, 0)?;
    let (value, err, converged) = ad.run(cfg)?;
    Ok(QuadResult {
        value,
        error_estimate: err + trunc_err,
        evals: ad.evals,
        converged: converged && err + trunc_err <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
        panels: ad.panels.len() as u32,
    })
}

/// Adaptive integration of an arbitrary finite-interval integrand. Used by
/// self-tests (the Laplace-weight identity) and available to callers that
/// need a plain integral with the same determinism guarantees.
pub fn integrate_function<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    let f_obj: &dyn Fn(f64) -> f64 = &f;
    let mut ad = Adaptive::new(vec![f_obj]);
    ad.push_panel(0, a, b, 0)?;
    let (value, err, converged) = ad.run(cfg)?;
    let result = QuadResult {
        value,
        error_estimate: err,
        evals: ad.evals,
        converged,
        panels: ad.panels.len() as u32,
    };
    if converged {
        Ok(result)
    } else {
        Err(QuadError::NoConvergence(result))
    }
}
