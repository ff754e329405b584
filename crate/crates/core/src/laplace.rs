//! The rewrite pipeline: `1/n^nu` as a Laplace transform, sum-integral
//! interchange, kernel collapse, and the `u = e^(-t)` substitution, producing
//! an [`IntegralRep`] equal to the original series:
//!
//! ```text
//! sum u_n / m_n^nu  =  (-1)^(nu-1)/(nu-1)! * prefactor *
//!                      integral over [0,1] of P(u)/Q(u) * (ln u)^(nu-1) du
//! ```

use crate::dsl::{validate_point, PointClass, SeriesSpec, SignMode, Trig, Validity};
use crate::kernels::{Family, KernelForm};
use crate::quadrature::{integrate_function, QuadConfig};
use thiserror::Error;

/// Points where the integrand or one of its derivatives blows up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    /// `(ln u)^order` at `u = 0` (present whenever `nu >= 2`).
    LogEndpoint { order: u32 },
    /// Kernel denominator vanishes at `u = 1`; occurs when `x` sits at a
    /// closed endpoint (the singularity is removable but steep).
    KernelPoleAtEnd,
    /// Denominator minimum at `u0` interior to `(0, 1)` with the given
    /// minimum value; small values make the integrand sharply peaked.
    NearSingular { u0: f64, denom_min: f64 },
}

/// Integral representation of a series at a fixed point `x`.
#[derive(Debug, Clone)]
pub struct IntegralRep {
    pub spec: SeriesSpec,
    pub x: f64,
    /// `(-1)^(nu-1)/(nu-1)!`, exact in binary64 for `nu <= 8`.
    pub constant: f64,
    /// Separated trig prefactor (kept out of the kernel so the
    /// positive-definite denominator structure stays explicit).
    pub prefactor: f64,
    pub kernel: KernelForm,
    /// `nu - 1`, the power on the `(ln u)` weight.
    pub log_power: u32,
    pub singularities: Vec<Singularity>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("x = {x} is outside the validity interval {validity} of the series")]
    OutOfDomain { x: f64, validity: Validity },
}

const FACTORIALS: [f64; 8] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

/// `(-1)^(nu-1)/(nu-1)!`.
pub fn prefactor_constant(power: u32) -> f64 {
    let sign = if (power - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign / FACTORIALS[(power - 1) as usize]
}

/// Self-test of the method's foundation: numerically evaluates
/// `1/(nu-1)! * integral of e^(-nt) t^(nu-1) dt over [0, inf)` and returns
/// the absolute deviation from `1/n^nu`.
pub fn laplace_weight(power: u32, n: u64) -> f64 {
    assert!((1..=8).contains(&power));
    assert!(n >= 1);
    let inv_fact = 1.0 / FACTORIALS[(power - 1) as usize];
    let nf = n as f64;
    let p = (power - 1) as i32;
    // truncation point: e^(-nT) T^(nu-1) is far below 1e-18 here
    let big_t = (60.0 + 10.0 * power as f64) / nf;
    let cfg = QuadConfig { abs_tol: 1e-13, rel_tol: 1e-12, ..QuadConfig::default() };
    let r = integrate_function(
        |t: f64| inv_fact * (-nf * t).exp() * t.powi(p),
        0.0,
        big_t,
        &cfg,
    )
    .expect("laplace weight integrand is smooth");
    (r.value - nf.powi(-(power as i32))).abs()
}

/// Build the integral representation of `spec` at `x`.
pub fn build_integral_rep(spec: &SeriesSpec, x: f64) -> Result<IntegralRep, RewriteError> {
    if validate_point(spec, x) == PointClass::OutOfDomain {
        return Err(RewriteError::OutOfDomain { x, validity: spec.validity() });
    }
    let kernel = KernelForm::new(Family::of_spec(spec));
    let mut singularities = Vec::new();
    if spec.power >= 2 {
        singularities.push(Singularity::LogEndpoint { order: spec.power - 1 });
    }
    let q_at_one: f64 = kernel.denominator_coeffs(x).iter().sum();
    if q_at_one.abs() < 1e-12 {
        singularities.push(Singularity::KernelPoleAtEnd);
    }
    if let Some((u0, denom_min)) = kernel.denominator_min(x) {
        singularities.push(Singularity::NearSingular { u0, denom_min });
    }
    Ok(IntegralRep {
        spec: *spec,
        x,
        constant: prefactor_constant(spec.power),
        prefactor: kernel.prefactor(x),
        kernel,
        log_power: spec.power - 1,
        singularities,
    })
}

/// Output markup for [`render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Latex,
}

struct FamilyText {
    /// Prefactor ("sin x ", "cos x ", ...) in both markups, possibly empty.
    pre_ascii: String,
    pre_latex: String,
    numer_ascii: String,
    numer_latex: String,
    denom_ascii: String,
    denom_latex: String,
}

fn family_text(spec: &SeriesSpec) -> FamilyText {
    use crate::dsl::IndexSet;
    // effective argument after the alternating shift
    let (arg_a, arg_l) = match (spec.sign, spec.index) {
        (SignMode::Plain, _) => ("x", "x"),
        (SignMode::Alternating, IndexSet::AllPositive) => ("(x + π)", r"(x + \pi)"),
        (SignMode::Alternating, IndexSet::OddViaShift) => ("(x + π/2)", r"(x + \pi/2)"),
    };
    // the alternating odd families swap sin and cos under the shift
    let eff_trig = match (spec.sign, spec.index, spec.trig) {
        (SignMode::Alternating, IndexSet::OddViaShift, Trig::Cos) => Trig::Sin,
        (SignMode::Alternating, IndexSet::OddViaShift, Trig::Sin) => Trig::Cos,
        (_, _, t) => t,
    };
    match (eff_trig, spec.index) {
        (Trig::Cos, IndexSet::AllPositive) => FamilyText {
            pre_ascii: String::new(),
            pre_latex: String::new(),
            numer_ascii: format!("(cos {arg_a} − u)"),
            numer_latex: format!(r"\cos {arg_l} - u"),
            denom_ascii: format!("(1 − 2 cos {arg_a} u + u²)"),
            denom_latex: format!(r"1 - 2\cos {arg_l}\, u + u^2"),
        },
        (Trig::Sin, IndexSet::AllPositive) => FamilyText {
            pre_ascii: format!("sin {arg_a} "),
            pre_latex: format!(r"\sin {arg_l} \, "),
            numer_ascii: "1".into(),
            numer_latex: "1".into(),
            denom_ascii: format!("(1 − 2 cos {arg_a} u + u²)"),
            denom_latex: format!(r"1 - 2\cos {arg_l}\, u + u^2"),
        },
        (Trig::Cos, IndexSet::OddViaShift) => FamilyText {
            pre_ascii: format!("cos {arg_a} "),
            pre_latex: format!(r"\cos {arg_l} \, "),
            numer_ascii: "(1 − u²)".into(),
            numer_latex: "1 - u^2".into(),
            denom_ascii: format!("(1 − 2 cos 2{arg_a} u² + u⁴)"),
            denom_latex: format!(r"1 - 2\cos 2{arg_l}\, u^2 + u^4"),
        },
        (Trig::Sin, IndexSet::OddViaShift) => FamilyText {
            pre_ascii: format!("sin {arg_a} "),
            pre_latex: format!(r"\sin {arg_l} \, "),
            numer_ascii: "(1 + u²)".into(),
            numer_latex: "1 + u^2".into(),
            denom_ascii: format!("(1 − 2 cos 2{arg_a} u² + u⁴)"),
            denom_latex: format!(r"1 - 2\cos 2{arg_l}\, u^2 + u^4"),
        },
    }
}

/// Sign flip introduced by the alternating-odd sin/cos swap; folded into the
/// rendered constant so the displayed representation stays exact.
fn render_flip(spec: &SeriesSpec) -> bool {
    matches!(
        (spec.sign, spec.index, spec.trig),
        (SignMode::Alternating, crate::dsl::IndexSet::OddViaShift, Trig::Sin)
    )
}

/// Deterministic textual rendering of the compact integral representation of
/// `spec` with symbolic `x`; ascii and latex differ only in markup.
pub fn render_spec(spec: &SeriesSpec, format: RenderFormat) -> String {
    let nu = spec.power;
    let ft = family_text(spec);
    let flip = render_flip(spec);
    match format {
        RenderFormat::Ascii => {
            let mut s = String::new();
            if nu >= 2 {
                s.push_str(&format!("(-1)^{}/{}! · ", nu - 1, nu - 1));
            }
            if flip {
                s.push_str("(−1) · ");
            }
            s.push_str(&ft.pre_ascii);
            s.push_str("∫₀¹ ");
            s.push_str(&ft.numer_ascii);
            s.push('/');
            s.push_str(&ft.denom_ascii);
            match nu {
                1 => {}
                2 => s.push_str(" ln u"),
                _ => s.push_str(&format!(" (ln u)^{}", nu - 1)),
            }
            s.push_str(" du");
            s
        }
        RenderFormat::Latex => {
            let mut s = String::new();
            if nu >= 2 {
                s.push_str(&format!(
                    r"\frac{{(-1)^{{{}}}}}{{{}!}} ",
                    nu - 1,
                    nu - 1
                ));
            }
            if flip {
                s.push_str("(-1) ");
            }
            s.push_str(&ft.pre_latex);
            s.push_str(r"\int_0^1 \frac{");
            s.push_str(&ft.numer_latex);
            s.push_str("}{");
            s.push_str(&ft.denom_latex);
            s.push('}');
            match nu {
                1 => {}
                2 => s.push_str(r"\, \ln u"),
                _ => s.push_str(&format!(r"\, (\ln u)^{{{}}}", nu - 1)),
            }
            s.push_str(r"\, du");
            s
        }
    }
}

/// Rendering of an already-built representation (same text as [`render_spec`];
/// the numeric `x` does not enter the symbolic display).
pub fn render(rep: &IntegralRep, format: RenderFormat) -> String {
    render_spec(&rep.spec, format)
}

/// The three-step derivation chain printed by the CLI `rewrite` command.
pub fn render_derivation(spec: &SeriesSpec, format: RenderFormat) -> Vec<String> {
    let nu = spec.power;
    let idx_sym = match spec.index {
        crate::dsl::IndexSet::AllPositive => "n",
        crate::dsl::IndexSet::OddViaShift => "(2n+1)",
    };
    let trig_name = match spec.trig {
        Trig::Sin => "sin",
        Trig::Cos => "cos",
    };
    let sign_sym = match spec.sign {
        SignMode::Plain => String::new(),
        SignMode::Alternating => "(-1)^n ".to_string(),
    };
    match format {
        RenderFormat::Ascii => vec![
            format!(
                "1/{idx_sym}^{nu} = 1/{}! ∫₀^∞ e^(−{idx_sym}t) t^{} dt",
                nu - 1,
                nu - 1
            ),
            format!(
                "∑ {sign_sym}{trig_name}({idx_sym}x) e^(−{idx_sym}t) collapses to the rational kernel in u = e^(−t)"
            ),
            render_spec(spec, RenderFormat::Ascii),
        ],
        RenderFormat::Latex => vec![
            format!(
                r"\frac{{1}}{{{idx_sym}^{{{nu}}}}} = \frac{{1}}{{{}!}} \int_0^\infty e^{{-{idx_sym} t}} t^{{{}}}\, dt",
                nu - 1,
                nu - 1
            ),
            format!(
                r"\sum {sign_sym}\{trig_name}({idx_sym}x)\, e^{{-{idx_sym} t}} \to \text{{rational kernel in }} u = e^{{-t}}"
            ),
            render_spec(spec, RenderFormat::Latex),
        ],
    }
}
