//! Evaluation reports: backend values, pairwise deviations, a verdict, and
//! deterministic JSON/CSV serialization.

use crate::dsl::{IndexSet, SeriesSpec, SignMode, Trig};
use crate::oracle::{OracleEstimate, OracleMethod};
use crate::quadrature::QuadResult;

/// Maximum allowed |quadrature - closed form| for agreement.
pub const QUAD_CLOSED_TOL: f64 = 1e-9;
/// Maximum allowed |oracle - closed form| for agreement.
pub const ORACLE_CLOSED_TOL: f64 = 1e-5;
/// Maximum allowed |oracle - quadrature| for agreement.
pub const ORACLE_QUAD_TOL: f64 = 1e-5;

/// Outcome of cross-checking the available backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// All three backends ran and every pair is within its threshold.
    Agree,
    /// At least one pair exceeds its threshold.
    Disagree,
    /// Some backend was skipped or unavailable, but every pair that could be
    /// formed is within its threshold.
    Partial,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Agree => "AGREE",
            Verdict::Disagree => "DISAGREE",
            Verdict::Partial => "PARTIAL",
        }
    }
}

/// Pairwise absolute deviations between the backends that produced values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Deviations {
    pub quad_closed: Option<f64>,
    pub oracle_closed: Option<f64>,
    pub oracle_quad: Option<f64>,
}

/// One evaluation of a series at a point, with every backend that ran.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// The series text as the user supplied it.
    pub input: String,
    pub spec: SeriesSpec,
    pub x: f64,
    pub closed_form: Option<f64>,
    pub quadrature: QuadResult,
    pub oracle: Option<OracleEstimate>,
    pub deviations: Deviations,
    pub verdict: Verdict,
}

impl EvalReport {
    /// Assemble a report; deviations and the verdict are derived here so they
    /// can never drift out of sync with the backend values.
    pub fn new(
        input: impl Into<String>,
        spec: SeriesSpec,
        x: f64,
        closed_form: Option<f64>,
        quadrature: QuadResult,
        oracle: Option<OracleEstimate>,
    ) -> Self {
        let q = quadrature.value;
        let deviations = Deviations {
            quad_closed: closed_form.map(|c| (q - c).abs()),
            oracle_closed: match (&oracle, closed_form) {
                (Some(o), Some(c)) => Some((o.value - c).abs()),
                _ => None,
            },
            oracle_quad: oracle.as_ref().map(|o| (o.value - q).abs()),
        };
        let pairs = [
            (deviations.quad_closed, QUAD_CLOSED_TOL),
            (deviations.oracle_closed, ORACLE_CLOSED_TOL),
            (deviations.oracle_quad, ORACLE_QUAD_TOL),
        ];
        let any_over = pairs.iter().any(|(d, tol)| matches!(d, Some(d) if d > tol));
        let all_present = pairs.iter().all(|(d, _)| d.is_some());
        let verdict = if any_over {
            Verdict::Disagree
        } else if all_present {
            Verdict::Agree
        } else {
            Verdict::Partial
        };
        Self { input: input.into(), spec, x, closed_form, quadrature, oracle, deviations, verdict }
    }

    /// Deterministic JSON serialization. Floats carry 17 significant digits
    /// so binary64 values round-trip exactly.
    pub fn to_json(&self) -> String {
        let mut s = String::with_capacity(1024);
        s.push_str("{\"schema\":\"trigsum/1\"");
        s.push_str(&format!(",\"input\":{}", json_string(&self.input)));
        s.push_str(&format!(
            ",\"spec\":{{\"trig\":\"{}\",\"power\":{},\"sign\":\"{}\",\"index\":\"{}\"}}",
            trig_name(self.spec.trig),
            self.spec.power,
            sign_name(self.spec.sign),
            index_name(self.spec.index),
        ));
        s.push_str(&format!(",\"x\":{}", json_f64(self.x)));
        match self.closed_form {
            Some(c) => s.push_str(&format!(",\"closed_form\":{}", json_f64(c))),
            None => s.push_str(",\"closed_form\":null"),
        }
        s.push_str(&format!(
            ",\"quadrature\":{{\"value\":{},\"error_estimate\":{},\"evals\":{},\"converged\":{},\"panels\":{}}}",
            json_f64(self.quadrature.value),
            json_f64(self.quadrature.error_estimate),
            self.quadrature.evals,
            self.quadrature.converged,
            self.quadrature.panels,
        ));
        match &self.oracle {
            Some(o) => s.push_str(&format!(
                ",\"oracle\":{{\"value\":{},\"error_bound\":{},\"terms_used\":{},\"method\":\"{}\"}}",
                json_f64(o.value),
                json_f64(o.error_bound),
                o.terms_used,
                method_name(o.method),
            )),
            None => s.push_str(",\"oracle\":null"),
        }
        s.push_str(&format!(
            ",\"deviations\":{{\"quad_closed\":{},\"oracle_closed\":{},\"oracle_quad\":{}}}",
            json_opt_f64(self.deviations.quad_closed),
            json_opt_f64(self.deviations.oracle_closed),
            json_opt_f64(self.deviations.oracle_quad),
        ));
        s.push_str(&format!(
            ",\"thresholds\":{{\"quad_closed\":{},\"oracle_closed\":{},\"oracle_quad\":{}}}",
            json_f64(QUAD_CLOSED_TOL),
            json_f64(ORACLE_CLOSED_TOL),
            json_f64(ORACLE_QUAD_TOL),
        ));
        s.push_str(&format!(",\"verdict\":\"{}\"}}", self.verdict.as_str()));
        s
    }

    /// Header row matching [`EvalReport::to_csv_row`]. LF endings are the
    /// caller's concern; rows carry no terminator.
    pub fn csv_header() -> &'static str {
        "x,family,nu,closed,quadrature,oracle,dev_quad_closed,dev_oracle_closed,dev_oracle_quad,verdict"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            json_f64(self.x),
            family_label(self.spec),
            self.spec.power,
            csv_opt_f64(self.closed_form),
            json_f64(self.quadrature.value),
            csv_opt_f64(self.oracle.as_ref().map(|o| o.value)),
            csv_opt_f64(self.deviations.quad_closed),
            csv_opt_f64(self.deviations.oracle_closed),
            csv_opt_f64(self.deviations.oracle_quad),
            self.verdict.as_str(),
        )
    }
}

/// Format a float with 17 significant digits, round-tripping binary64.
/// Also used for JSON; non-finite values are not expected here and map to
/// `null` to keep the output valid JSON.
pub fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".to_string()
    }
}

fn json_opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), json_f64)
}

fn csv_opt_f64(v: Option<f64>) -> String {
    v.map_or_else(String::new, json_f64)
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn trig_name(t: Trig) -> &'static str {
    match t {
        Trig::Sin => "sin",
        Trig::Cos => "cos",
    }
}

pub fn sign_name(s: SignMode) -> &'static str {
    match s {
        SignMode::Plain => "plain",
        SignMode::Alternating => "alternating",
    }
}

pub fn index_name(i: IndexSet) -> &'static str {
    match i {
        IndexSet::AllPositive => "all",
        IndexSet::OddViaShift => "odd",
    }
}

fn method_name(m: OracleMethod) -> &'static str {
    match m {
        OracleMethod::PlainTail => "plain-tail",
        OracleMethod::CesaroRichardson => "cesaro-richardson",
        OracleMethod::RichardsonTail => "richardson-tail",
    }
}

/// Compact family label for table output, e.g. `cos-alt-odd`.
pub fn family_label(spec: SeriesSpec) -> String {
    let mut s = trig_name(spec.trig).to_string();
    if spec.sign == SignMode::Alternating {
        s.push_str("-alt");
    }
    if spec.index == IndexSet::OddViaShift {
        s.push_str("-odd");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{IndexSet, SignMode, Trig};

    fn quad(value: f64) -> QuadResult {
        QuadResult { value, error_estimate: 1e-13, evals: 300, converged: true, panels: 10 }
    }

    fn oracle(value: f64) -> OracleEstimate {
        OracleEstimate {
            value,
            error_bound: 2e-6,
            terms_used: 20000,
            method: OracleMethod::CesaroRichardson,
        }
    }

    fn spec() -> SeriesSpec {
        SeriesSpec::new(Trig::Sin, 1, SignMode::Plain, IndexSet::AllPositive)
    }

    #[test]
    fn verdict_agree_when_all_pairs_within_thresholds() {
        let r = EvalReport::new(
            "sum(n=1..inf, sin(n*x)/n)",
            spec(),
            1.0,
            Some(1.0707963267948966),
            quad(1.0707963267948968),
            Some(oracle(1.0707963)),
        );
        assert_eq!(r.verdict, Verdict::Agree);
        assert!(r.deviations.quad_closed.unwrap() <= QUAD_CLOSED_TOL);
    }

    #[test]
    fn verdict_partial_when_backend_missing_and_rest_pass() {
        let r = EvalReport::new("s", spec(), 1.0, None, quad(1.0), Some(oracle(1.0)));
        assert_eq!(r.verdict, Verdict::Partial);
        assert!(r.deviations.quad_closed.is_none());
        assert!(r.deviations.oracle_quad.is_some());
    }

    #[test]
    fn verdict_disagree_dominates_missing_backends() {
        let r = EvalReport::new("s", spec(), 1.0, Some(1.0), quad(1.1), None);
        assert_eq!(r.verdict, Verdict::Disagree);
    }

    #[test]
    fn json_round_trips_through_a_generic_parser() {
        let r = EvalReport::new(
            "sum(n=1..inf, sin(n*x)/n)",
            spec(),
            0.5,
            Some(1.3207963267948966),
            quad(1.3207963267948968),
            Some(oracle(1.3207963299999999)),
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "trigsum/1");
        assert_eq!(v["input"], "sum(n=1..inf, sin(n*x)/n)");
        assert_eq!(v["spec"]["trig"], "sin");
        assert_eq!(v["verdict"], "AGREE");
        assert_eq!(v["x"].as_f64().unwrap(), 0.5);
        assert_eq!(v["closed_form"].as_f64().unwrap(), 1.3207963267948966);
        assert_eq!(v["quadrature"]["value"].as_f64().unwrap(), 1.3207963267948968);
        assert_eq!(v["oracle"]["terms_used"].as_u64().unwrap(), 20000);
    }

    #[test]
    fn float_formatting_round_trips_binary64() {
        for &v in &[0.1, std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE] {
            let s = json_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_row_has_header_arity_and_no_commas_in_fields() {
        let r = EvalReport::new("s", spec(), 0.5, Some(1.0), quad(1.0), None);
        let header_cols = EvalReport::csv_header().split(',').count();
        assert_eq!(r.to_csv_row().split(',').count(), header_cols);
    }
}
