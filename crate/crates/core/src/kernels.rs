//! Closed-form inner sums `h(t) = sum_{n in I} u_n e^(-nt)` for every
//! supported family, both in `t` and in the substituted variable `u = e^(-t)`.
//!
//! All kernels are rational in `u` with trig-polynomial coefficients in `x`:
//!
//! * all-positive families: denominator `1 - 2 cos(y) u + u^2`
//! * odd-index families:    denominator `1 - 2 cos(2y) u^2 + u^4`
//!
//! where `y` is the effective angle. Alternating sums are obtained by
//! argument shifts instead of separate formulas: `(-1)^n trig(nx) =
//! trig(n(x+pi))`, and for odd indices `(-1)^n z^(2n+1) = -i z'/(1-z'^2)`
//! with `z' = i z`, i.e. a shift by `pi/2` plus a sin/cos swap.

use crate::dsl::{IndexSet, SeriesSpec, SignMode, Trig};
use crate::kahan::KahanSum;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Denominator values below this are treated as a pole hit; such points only
/// arise at excluded endpoints (e.g. `x = 0` for the plain family as `u -> 1`).
const POLE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("kernel requires t > 0, got t = {0}")]
    NonPositiveT(f64),
    #[error("kernel requires u in [0, 1), got u = {0}")]
    UOutOfRange(f64),
    #[error("kernel denominator vanished at u = {u} (denominator {denominator:e})")]
    NearPole { u: f64, denominator: f64 },
}

/// A (trig, sign, index) family triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Family {
    pub trig: Trig,
    pub sign: SignMode,
    pub index: IndexSet,
}

impl Family {
    pub fn new(trig: Trig, sign: SignMode, index: IndexSet) -> Self {
        Self { trig, sign, index }
    }

    pub fn of_spec(spec: &SeriesSpec) -> Self {
        Self { trig: spec.trig, sign: spec.sign, index: spec.index }
    }
}

/// The kernel reduced to plain-sign form: `flip * trig_eff` evaluated at the
/// shifted angle `y = x + shift`.
#[derive(Debug, Clone, Copy)]
struct Effective {
    trig: Trig,
    index: IndexSet,
    shift: f64,
    flip: f64,
}

fn effective(family: Family) -> Effective {
    match (family.sign, family.index, family.trig) {
        (SignMode::Plain, index, trig) => {
            Effective { trig, index, shift: 0.0, flip: 1.0 }
        }
        (SignMode::Alternating, IndexSet::AllPositive, trig) => {
            Effective { trig, index: IndexSet::AllPositive, shift: PI, flip: 1.0 }
        }
        // sum (-1)^n z^(2n+1) = -i z'/(1 - z'^2) with z' = iz:
        // real part (cos) picks up the plain odd sin kernel at x + pi/2,
        // imaginary part (sin) picks up minus the plain odd cos kernel.
        (SignMode::Alternating, IndexSet::OddViaShift, Trig::Cos) => {
            Effective { trig: Trig::Sin, index: IndexSet::OddViaShift, shift: FRAC_PI_2, flip: 1.0 }
        }
        (SignMode::Alternating, IndexSet::OddViaShift, Trig::Sin) => {
            Effective { trig: Trig::Cos, index: IndexSet::OddViaShift, shift: FRAC_PI_2, flip: -1.0 }
        }
    }
}

/// Kernel as rational data in `u`: `prefactor(x) * P(u) / Q(u)`, in the
/// convention where the full inner sum is `u * prefactor * P(u)/Q(u)`
/// (i.e. the compact integral-representation form, bounded at `u = 0`).
#[derive(Debug, Clone, Copy)]
pub struct KernelForm {
    pub family: Family,
}

impl KernelForm {
    pub fn new(family: Family) -> Self {
        Self { family }
    }

    /// The separated trig prefactor at `x`: `sin y` for sin-shaped kernels,
    /// `cos y` for the odd cos kernel, `+-1` for the all-positive cos kernel.
    pub fn prefactor(&self, x: f64) -> f64 {
        let eff = effective(self.family);
        let y = x + eff.shift;
        let p = match (eff.trig, eff.index) {
            (Trig::Cos, IndexSet::AllPositive) => 1.0,
            (Trig::Sin, IndexSet::AllPositive) => y.sin(),
            (Trig::Cos, IndexSet::OddViaShift) => y.cos(),
            (Trig::Sin, IndexSet::OddViaShift) => y.sin(),
        };
        eff.flip * p
    }

    /// Numerator coefficients of `P(u)` (ascending powers of `u`).
    pub fn numerator_coeffs(&self, x: f64) -> Vec<f64> {
        let eff = effective(self.family);
        let y = x + eff.shift;
        match (eff.trig, eff.index) {
            (Trig::Cos, IndexSet::AllPositive) => vec![y.cos(), -1.0],
            (Trig::Sin, IndexSet::AllPositive) => vec![1.0],
            (Trig::Cos, IndexSet::OddViaShift) => vec![1.0, 0.0, -1.0],
            (Trig::Sin, IndexSet::OddViaShift) => vec![1.0, 0.0, 1.0],
        }
    }

    /// Denominator coefficients of `Q(u)` (ascending powers of `u`).
    pub fn denominator_coeffs(&self, x: f64) -> Vec<f64> {
        let eff = effective(self.family);
        let y = x + eff.shift;
        match eff.index {
            IndexSet::AllPositive => vec![1.0, -2.0 * y.cos(), 1.0],
            IndexSet::OddViaShift => vec![1.0, 0.0, -2.0 * (2.0 * y).cos(), 0.0, 1.0],
        }
    }

    /// Location and value of the denominator minimum over `u in (0, 1)`,
    /// if the minimum is interior. This is the near-singular point that the
    /// quadrature pre-splits at.
    pub fn denominator_min(&self, x: f64) -> Option<(f64, f64)> {
        let eff = effective(self.family);
        let y = x + eff.shift;
        match eff.index {
            IndexSet::AllPositive => {
                let c = y.cos();
                if c > 0.0 && c < 1.0 {
                    Some((c, y.sin() * y.sin()))
                } else {
                    None
                }
            }
            IndexSet::OddViaShift => {
                // Q(u) = (u^2 - cos 2y)^2 + sin^2 2y
                let c2 = (2.0 * y).cos();
                if c2 > 0.0 && c2 < 1.0 {
                    let s2 = (2.0 * y).sin();
                    Some((c2.sqrt(), s2 * s2))
                } else {
                    None
                }
            }
        }
    }

    #[cfg(test)]
    fn poly_eval(coeffs: &[f64], u: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// `P(u)/Q(u)` without the trig prefactor and without the `flip` sign.
    ///
    /// The denominator is evaluated as a completed square,
    /// `(u - cos y)^2 + sin^2 y` (and its degree-4 analogue), rather than from
    /// the expanded coefficients: near `u = cos y` with small `sin y` the
    /// expanded form loses all significant digits to cancellation, while the
    /// completed square stays accurate down to the `sin^2 y` floor.
    pub fn rational(&self, x: f64, u: f64) -> Result<f64, KernelError> {
        if !(0.0..1.0).contains(&u) {
            return Err(KernelError::UOutOfRange(u));
        }
        let eff = effective(self.family);
        let y = x + eff.shift;
        let (p, q) = match eff.index {
            IndexSet::AllPositive => {
                let d = u - y.cos();
                let s = y.sin();
                let p = match eff.trig {
                    Trig::Cos => -d,
                    Trig::Sin => 1.0,
                };
                (p, d * d + s * s)
            }
            IndexSet::OddViaShift => {
                let d = u * u - (2.0 * y).cos();
                let s = (2.0 * y).sin();
                let p = match eff.trig {
                    Trig::Cos => 1.0 - u * u,
                    Trig::Sin => 1.0 + u * u,
                };
                (p, d * d + s * s)
            }
        };
        if q.abs() < POLE_FLOOR {
            return Err(KernelError::NearPole { u, denominator: q });
        }
        Ok(p / q)
    }

    /// Full kernel in the compact `u` convention: `prefactor * P(u)/Q(u)`.
    pub fn eval_u(&self, x: f64, u: f64) -> Result<f64, KernelError> {
        Ok(self.prefactor(x) * self.rational(x, u)?)
    }
}

/// Kernel in the compact `u = e^(-t)` convention: the inner sum divided by
/// `u`, so `kernel_in_u(f, x, e^(-t)) * e^(-t) == kernel_in_t(f, x, t)`.
/// Bounded at `u = 0` (value `cos x` for the plain cos family, `sin x` for
/// the plain sin family, and the analogous per-family limits).
pub fn kernel_in_u(family: Family, x: f64, u: f64) -> Result<f64, KernelError> {
    KernelForm::new(family).eval_u(x, u)
}

/// The inner sum `sum_{n in I} u_n(x) e^(-nt)` in closed form, `t > 0`.
pub fn kernel_in_t(family: Family, x: f64, t: f64) -> Result<f64, KernelError> {
    // written to also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(t > 0.0) {
        return Err(KernelError::NonPositiveT(t));
    }
    let u = (-t).exp();
    Ok(u * kernel_in_u(family, x, u)?)
}

/// `|kernel_in_t - N-term partial sum|`; bounded by the geometric tail
/// `e^(-(N+1)t) / (1 - e^(-t))`.
pub fn kernel_consistency_check(
    family: Family,
    x: f64,
    t: f64,
    n_terms: u64,
) -> Result<f64, KernelError> {
    let closed = kernel_in_t(family, x, t)?;
    let mut acc = KahanSum::new();
    for j in 0..n_terms {
        let (m, alt_on) = match family.index {
            IndexSet::AllPositive => ((j + 1) as f64, (j + 1) % 2 == 1),
            IndexSet::OddViaShift => ((2 * j + 1) as f64, j % 2 == 1),
        };
        let s = match family.sign {
            SignMode::Plain => 1.0,
            SignMode::Alternating => {
                if alt_on {
                    -1.0
                } else {
                    1.0
                }
            }
        };
        let trig = match family.trig {
            Trig::Sin => (m * x).sin(),
            Trig::Cos => (m * x).cos(),
        };
        acc.add(s * trig * (-m * t).exp());
    }
    Ok((closed - acc.value()).abs())
}

/// Upper bound for the deviation of the `N`-term partial sum from the kernel.
pub fn geometric_tail_bound(t: f64, n_terms: u64) -> f64 {
    (-((n_terms + 1) as f64) * t).exp() / (1.0 - (-t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn fam(trig: Trig, sign: SignMode, index: IndexSet) -> Family {
        Family::new(trig, sign, index)
    }

    const ALL: [(Trig, SignMode, IndexSet); 8] = [
        (Trig::Sin, SignMode::Plain, IndexSet::AllPositive),
        (Trig::Cos, SignMode::Plain, IndexSet::AllPositive),
        (Trig::Sin, SignMode::Alternating, IndexSet::AllPositive),
        (Trig::Cos, SignMode::Alternating, IndexSet::AllPositive),
        (Trig::Sin, SignMode::Plain, IndexSet::OddViaShift),
        (Trig::Cos, SignMode::Plain, IndexSet::OddViaShift),
        (Trig::Sin, SignMode::Alternating, IndexSet::OddViaShift),
        (Trig::Cos, SignMode::Alternating, IndexSet::OddViaShift),
    ];

    #[test]
    fn sin_kernel_vanishes_at_zero_angle() {
        let f = fam(Trig::Sin, SignMode::Plain, IndexSet::AllPositive);
        assert_eq!(kernel_in_t(f, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sin_kernel_at_quarter_period() {
        // sum sin(n pi/2) 2^(-n) = (1/2)/(1 + 1/4) = 0.4
        let f = fam(Trig::Sin, SignMode::Plain, IndexSet::AllPositive);
        let v = kernel_in_t(f, FRAC_PI_2, 2.0_f64.ln()).unwrap();
        assert!((v - 0.4).abs() < 1e-15, "{v}");
    }

    #[test]
    fn cos_kernel_reduces_to_geometric_series() {
        let f = fam(Trig::Cos, SignMode::Plain, IndexSet::AllPositive);
        let v = kernel_in_t(f, 0.0, 1.0).unwrap();
        assert!((v - 1.0 / (E - 1.0)).abs() < 1e-15, "{v}");
    }

    #[test]
    fn compact_cos_kernel_value() {
        // (cos x - u)/(1 - 2 cos x u + u^2) at x = pi/2, u = 1/2
        let f = fam(Trig::Cos, SignMode::Plain, IndexSet::AllPositive);
        let v = kernel_in_u(f, FRAC_PI_2, 0.5).unwrap();
        assert!((v - (-0.4)).abs() < 1e-15, "{v}");
        // cross-check via the t-form at t = ln 2
        let t_form = kernel_in_t(f, FRAC_PI_2, 2.0_f64.ln()).unwrap();
        assert!((t_form - 0.5 * v).abs() < 1e-15);
    }

    #[test]
    fn sin_kernel_limit_at_u_zero() {
        let f = fam(Trig::Sin, SignMode::Plain, IndexSet::AllPositive);
        for x in [0.3, 1.0, 2.9] {
            assert!((kernel_in_u(f, x, 0.0).unwrap() - x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_cos_kernel_matches_odd_geometric_series() {
        // full inner sum at x=0, u=1/2: sum over odd n of 2^(-n) = 2/3,
        // so the compact (divided-by-u) form is 4/3
        let f = fam(Trig::Cos, SignMode::Plain, IndexSet::OddViaShift);
        let t_form = kernel_in_t(f, 0.0, 2.0_f64.ln()).unwrap();
        assert!((t_form - 2.0 / 3.0).abs() < 1e-15, "{t_form}");
        let u_form = kernel_in_u(f, 0.0, 0.5).unwrap();
        assert!((u_form - 4.0 / 3.0).abs() < 1e-15, "{u_form}");
    }

    #[test]
    fn partial_sums_within_geometric_tail_bound() {
        let cases = [
            (fam(Trig::Cos, SignMode::Alternating, IndexSet::AllPositive), 1.0, 1.0, 40),
            (fam(Trig::Sin, SignMode::Plain, IndexSet::OddViaShift), 0.7, 0.5, 80),
        ];
        for (f, x, t, n) in cases {
            let dev = kernel_consistency_check(f, x, t, n).unwrap();
            let bound = geometric_tail_bound(t, n) + 4e-15;
            assert!(dev < bound, "{f:?}: dev = {dev:e}");
        }
        // both sides identically zero
        let f = fam(Trig::Sin, SignMode::Plain, IndexSet::AllPositive);
        assert_eq!(kernel_consistency_check(f, 0.0, 1.0, 5).unwrap(), 0.0);
    }

    #[test]
    fn consistency_across_all_families_on_a_grid() {
        for (trig, sign, index) in ALL {
            let f = fam(trig, sign, index);
            for i in 0..7 {
                let x = -3.0 + i as f64;
                for t in [0.1, 0.5, 1.3] {
                    let n = 400;
                    let dev = kernel_consistency_check(f, x, t, n).unwrap();
                    let bound = geometric_tail_bound(t, n);
                    // the 1e-12 slack absorbs rounding in the 400-term sum,
                    // which can exceed the (tiny) exact tail at these t
                    assert!(
                        dev <= bound + 1e-12,
                        "{f:?} x={x} t={t}: dev {dev:e} > bound {bound:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn alternating_equals_plain_at_shifted_angle() {
        for trig in [Trig::Sin, Trig::Cos] {
            let alt = fam(trig, SignMode::Alternating, IndexSet::AllPositive);
            let plain = fam(trig, SignMode::Plain, IndexSet::AllPositive);
            for x in [-2.0, 0.4, 1.7] {
                for t in [0.2, 1.0] {
                    let a = kernel_in_t(alt, x, t).unwrap();
                    let b = kernel_in_t(plain, x + PI, t).unwrap();
                    assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn odd_equals_all_minus_even() {
        // sum over odd n = sum over all n - sum over even n, where the even
        // part is the all-positive kernel at (2x, 2t)
        for trig in [Trig::Sin, Trig::Cos] {
            let odd = fam(trig, SignMode::Plain, IndexSet::OddViaShift);
            let all = fam(trig, SignMode::Plain, IndexSet::AllPositive);
            for x in [0.3, 1.1, 2.0] {
                for t in [0.3, 0.9] {
                    let o = kernel_in_t(odd, x, t).unwrap();
                    let a = kernel_in_t(all, x, t).unwrap();
                    let e = kernel_in_t(all, 2.0 * x, 2.0 * t).unwrap();
                    assert!((o - (a - e)).abs() < 1e-13, "{trig:?} x={x} t={t}");
                }
            }
        }
    }

    #[test]
    fn u_and_t_forms_agree() {
        for (trig, sign, index) in ALL {
            let f = fam(trig, sign, index);
            for x in [0.25, 1.0, 2.4] {
                for t in [0.05f64, 0.4, 2.0] {
                    let u = (-t).exp();
                    let via_t = kernel_in_t(f, x, t).unwrap();
                    let via_u = u * kernel_in_u(f, x, u).unwrap();
                    assert!(
                        (via_t - via_u).abs() <= 4.0 * f64::EPSILON * via_t.abs().max(1.0),
                        "{f:?} x={x} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let f = fam(Trig::Cos, SignMode::Plain, IndexSet::AllPositive);
        assert!(matches!(kernel_in_t(f, 1.0, 0.0), Err(KernelError::NonPositiveT(_))));
        assert!(matches!(kernel_in_t(f, 1.0, -1.0), Err(KernelError::NonPositiveT(_))));
        assert!(matches!(kernel_in_u(f, 1.0, 1.0), Err(KernelError::UOutOfRange(_))));
        assert!(matches!(kernel_in_u(f, 1.0, -0.1), Err(KernelError::UOutOfRange(_))));
    }

    #[test]
    fn denominator_positive_away_from_poles() {
        // minimize Q over a u-grid; strictly positive whenever the per-family
        // pole condition is avoided
        for (trig, sign, index) in ALL {
            let f = KernelForm::new(fam(trig, sign, index));
            for i in 1..40 {
                let x = i as f64 * 0.15;
                let coeffs = f.denominator_coeffs(x);
                let mut min_q = f64::INFINITY;
                for j in 0..=1000 {
                    let u = j as f64 / 1000.0 * 0.999;
                    min_q = min_q.min(KernelForm::poly_eval(&coeffs, u));
                }
                if let Some((u0, dmin)) = f.denominator_min(x) {
                    assert!(u0 > 0.0 && u0 < 1.0);
                    assert!(min_q >= dmin - 1e-9, "x={x}: grid min {min_q} < {dmin}");
                }
                assert!(min_q > 0.0, "{f:?} x={x}: denominator not positive ({min_q})");
            }
        }
    }

    #[test]
    fn kernel_vanishes_as_t_grows() {
        for (trig, sign, index) in ALL {
            let f = fam(trig, sign, index);
            let v = kernel_in_t(f, 1.234, 500.0).unwrap();
            assert!(v.abs() < 1e-200, "{f:?}: {v}");
        }
    }
}
