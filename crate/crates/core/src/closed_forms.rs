//! The exact identities, tabulated as evaluatable reference functions with
//! domain checks. These are the oracle of record for `nu in {1, 2}`.

use crate::dsl::{validate_point, IndexSet, PointClass, SeriesSpec, SignMode, Trig, Validity};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("x = {x} is outside the validity interval {validity}")]
pub struct OutOfDomain {
    pub x: f64,
    pub validity: Validity,
}

/// A tabulated identity: normalized spec plus its exact evaluator.
#[derive(Clone, Copy)]
pub struct ClosedForm {
    pub spec: SeriesSpec,
    /// Stable identifier, also used as the row key in CLI output.
    pub id: &'static str,
    /// Human-readable right-hand side.
    pub formula: &'static str,
    eval: fn(f64) -> f64,
}

impl std::fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForm")
            .field("id", &self.id)
            .field("spec", &self.spec)
            .field("formula", &self.formula)
            .finish()
    }
}

impl ClosedForm {
    /// Evaluate on the validity interval; open endpoints are rejected rather
    /// than returning a float infinity.
    pub fn eval(&self, x: f64) -> Result<f64, OutOfDomain> {
        if validate_point(&self.spec, x) == PointClass::OutOfDomain {
            return Err(OutOfDomain { x, validity: self.spec.validity() });
        }
        Ok((self.eval)(x))
    }
}

fn eq1(x: f64) -> f64 {
    -(2.0 * (x / 2.0).sin()).ln()
}
fn eq2(x: f64) -> f64 {
    (3.0 * x * x - 6.0 * PI * x + 2.0 * PI * PI) / 12.0
}
fn eq3(x: f64) -> f64 {
    (PI - x) / 2.0
}
fn eq4(x: f64) -> f64 {
    -(2.0 * (x / 2.0).cos()).ln()
}
fn eq5(x: f64) -> f64 {
    (3.0 * x * x - PI * PI) / 12.0
}
fn eq6(x: f64) -> f64 {
    -0.5 * (x / 2.0).tan().ln()
}
fn eq7(x: f64) -> f64 {
    (PI * PI - 2.0 * PI * x) / 8.0
}
fn intro(x: f64) -> f64 {
    PI * x / 4.0
}

/// The eight tabulated identities, in display order.
pub fn table() -> [ClosedForm; 8] {
    use IndexSet::*;
    use SignMode::*;
    use Trig::*;
    [
        ClosedForm {
            spec: SeriesSpec::new(Cos, 1, Plain, AllPositive),
            id: "eq1",
            formula: "-ln(2 sin(x/2))",
            eval: eq1,
        },
        ClosedForm {
            spec: SeriesSpec::new(Cos, 2, Plain, AllPositive),
            id: "eq2",
            formula: "(3x^2 - 6*pi*x + 2*pi^2)/12",
            eval: eq2,
        },
        ClosedForm {
            spec: SeriesSpec::new(Sin, 1, Plain, AllPositive),
            id: "eq3",
            formula: "(pi - x)/2",
            eval: eq3,
        },
        ClosedForm {
            spec: SeriesSpec::new(Cos, 1, Alternating, AllPositive),
            id: "eq4",
            formula: "-ln(2 cos(x/2))",
            eval: eq4,
        },
        ClosedForm {
            spec: SeriesSpec::new(Cos, 2, Alternating, AllPositive),
            id: "eq5",
            formula: "(3x^2 - pi^2)/12",
            eval: eq5,
        },
        ClosedForm {
            spec: SeriesSpec::new(Cos, 1, Plain, OddViaShift),
            id: "eq6",
            formula: "-(1/2) ln(tan(x/2))",
            eval: eq6,
        },
        ClosedForm {
            spec: SeriesSpec::new(Cos, 2, Plain, OddViaShift),
            id: "eq7",
            formula: "(pi^2 - 2*pi*x)/8",
            eval: eq7,
        },
        ClosedForm {
            spec: SeriesSpec::new(Sin, 2, Alternating, OddViaShift),
            id: "intro",
            formula: "pi*x/4",
            eval: intro,
        },
    ]
}

/// Look up the exact value of `spec` at `x`. `Ok(None)` means the series is in
/// the supported family but has no tabulated identity (e.g. `nu = 3`).
pub fn closed_form(spec: &SeriesSpec, x: f64) -> Result<Option<f64>, OutOfDomain> {
    if validate_point(spec, x) == PointClass::OutOfDomain {
        return Err(OutOfDomain { x, validity: spec.validity() });
    }
    Ok(table().iter().find(|cf| cf.spec == *spec).map(|cf| (cf.eval)(x)))
}

/// Checks that integrating the sawtooth identity reproduces the parabolic one:
/// `eq2(x) = pi^2/6 - integral of (pi - s)/2 over [0, x]`, the integral taken
/// numerically with an `m`-panel composite Simpson rule. Returns the residual.
pub fn integrate_identity_check(x: f64, m: u32) -> f64 {
    assert!(x > 0.0 && x < 2.0 * PI);
    assert!(m >= 1);
    let f = eq3;
    let h = x / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        let a = i as f64 * h;
        let b = a + h;
        acc += h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    let lhs = PI * PI / 6.0 - acc;
    (lhs - eq2(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn spot_values() {
        let t = table();
        let get = |id: &str| *t.iter().find(|c| c.id == id).unwrap();
        assert!((get("eq1").eval(PI).unwrap() - (-(2.0f64).ln())).abs() < 1e-15);
        assert!((get("eq2").eval(PI).unwrap() - (-PI * PI / 12.0)).abs() < 1e-15);
        assert!((get("intro").eval(FRAC_PI_2).unwrap() - PI * PI / 8.0).abs() < 1e-15);
        assert_eq!(get("eq7").eval(FRAC_PI_2).unwrap(), 0.0);
        assert!((get("eq2").eval(0.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn lookup_by_spec() {
        let spec = SeriesSpec::new(Trig::Cos, 1, SignMode::Plain, IndexSet::AllPositive);
        let v = closed_form(&spec, PI).unwrap().unwrap();
        assert!((v + (2.0f64).ln()).abs() < 1e-15);
        // in-family spec without a tabulated identity
        let nu3 = SeriesSpec::new(Trig::Cos, 3, SignMode::Plain, IndexSet::AllPositive);
        assert_eq!(closed_form(&nu3, 1.0).unwrap(), None);
    }

    #[test]
    fn open_endpoints_are_rejected_not_infinite() {
        let spec = SeriesSpec::new(Trig::Cos, 1, SignMode::Plain, IndexSet::AllPositive);
        assert!(closed_form(&spec, 0.0).is_err());
        assert!(closed_form(&spec, 2.0 * PI).is_err());
        // and just inside the interval the value is large but finite
        let v = closed_form(&spec, 1e-8).unwrap().unwrap();
        assert!(v.is_finite() && v > 17.0);
    }

    #[test]
    fn parabolic_identity_is_symmetric() {
        for i in 0..=50 {
            let x = 2.0 * PI * i as f64 / 50.0;
            assert!((eq2(x) - eq2(2.0 * PI - x)).abs() < 1e-13);
        }
    }

    #[test]
    fn odd_equals_half_all_minus_half_even() {
        // eq6 = (eq1 - eq4)/2 on (0, pi)
        for i in 1..40 {
            let x = PI * i as f64 / 40.0;
            let lhs = eq6(x);
            let rhs = 0.5 * eq1(x) - 0.5 * eq4(x);
            assert!((lhs - rhs).abs() <= 1e-12, "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn integrating_sawtooth_gives_parabola() {
        for x in [1e-6, 1.0, PI, 5.0, 2.0 * PI - 1e-6] {
            let r = integrate_identity_check(x, 64);
            assert!(r < 1e-10, "x={x}: residual {r:e}");
        }
    }
}
