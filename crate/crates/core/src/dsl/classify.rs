use super::{Expr, IndexSet, SeriesSpec, SignMode, Trig, MAX_POWER};
use thiserror::Error;

/// The expression is a well-formed sum outside the supported family.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsupported series: {reason} (offending subterm: {subterm})")]
pub struct ClassifyError {
    pub reason: String,
    pub subterm: String,
}

impl ClassifyError {
    fn new(reason: impl Into<String>, subterm: &Expr) -> Self {
        Self { reason: reason.into(), subterm: subterm.to_string() }
    }
}

/// Shape of the index expression multiplying `x` inside the trig argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IndexShape {
    Plain,
    OddShift,
}

/// Recognize `n` or `2*n+1` (in any commutative arrangement).
fn index_shape(e: &Expr, var: &str) -> Option<IndexShape> {
    match e {
        Expr::Var(v) if v == var => Some(IndexShape::Plain),
        Expr::Add(a, b) => {
            let two_n = |e: &Expr| -> bool {
                matches!(
                    e,
                    Expr::Mul(l, r)
                        if matches!((&**l, &**r), (Expr::Int(2), Expr::Var(v)) if v == var)
                            || matches!((&**l, &**r), (Expr::Var(v), Expr::Int(2)) if v == var)
                )
            };
            let one = |e: &Expr| matches!(e, Expr::Int(1));
            if (two_n(a) && one(b)) || (one(a) && two_n(b)) {
                Some(IndexShape::OddShift)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Recognize `idx*x` or `x*idx` and return the index shape.
fn trig_argument_shape(arg: &Expr, var: &str) -> Option<IndexShape> {
    match arg {
        Expr::Mul(a, b) => {
            if matches!(**b, Expr::X) {
                index_shape(a, var)
            } else if matches!(**a, Expr::X) {
                index_shape(b, var)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Flatten a `*`/`/` chain into (numerator factors, denominator factors).
fn flatten_term(e: &Expr, num: &mut Vec<Expr>, den: &mut Vec<Expr>, inverted: bool) {
    match e {
        Expr::Mul(a, b) => {
            flatten_term(a, num, den, inverted);
            flatten_term(b, num, den, inverted);
        }
        Expr::Div(a, b) => {
            flatten_term(a, num, den, inverted);
            flatten_term(b, num, den, !inverted);
        }
        other => {
            if inverted {
                den.push(other.clone());
            } else {
                num.push(other.clone());
            }
        }
    }
}

/// Classify a parsed series into the unique [`SeriesSpec`] whose expansion is
/// term-by-term identical to it.
pub fn classify(expr: &Expr) -> Result<SeriesSpec, ClassifyError> {
    let (var, lo, body) = match expr {
        Expr::Sum { var, lo, body } => (var.as_str(), *lo, &**body),
        other => return Err(ClassifyError::new("not a series (missing sum node)", other)),
    };

    let mut num = Vec::new();
    let mut den = Vec::new();
    flatten_term(body, &mut num, &mut den, false);

    // numerator: optional (-1)^n, exactly one trig call
    let mut sign = SignMode::Plain;
    let mut trig: Option<(Trig, IndexShape)> = None;
    for f in &num {
        match f {
            Expr::AltSign(_) => {
                if sign == SignMode::Alternating {
                    return Err(ClassifyError::new("repeated (-1)^n factor", f));
                }
                sign = SignMode::Alternating;
            }
            Expr::Sin(arg) | Expr::Cos(arg) => {
                if trig.is_some() {
                    return Err(ClassifyError::new(
                        "product of two trigonometric factors",
                        f,
                    ));
                }
                let shape = trig_argument_shape(arg, var).ok_or_else(|| {
                    ClassifyError::new("trig argument is not n*x or (2*n+1)*x", arg)
                })?;
                let t = if matches!(f, Expr::Sin(_)) { Trig::Sin } else { Trig::Cos };
                trig = Some((t, shape));
            }
            Expr::Int(1) => {}
            other => {
                return Err(ClassifyError::new("unsupported numerator factor", other));
            }
        }
    }
    let (trig, arg_shape) =
        trig.ok_or_else(|| ClassifyError::new("missing trigonometric numerator", body))?;

    // denominator: exactly one factor, idx or idx^nu with idx matching the argument
    if den.len() != 1 {
        return Err(ClassifyError::new(
            format!("expected exactly one denominator factor, found {}", den.len()),
            body,
        ));
    }
    let (den_base, power) = match &den[0] {
        Expr::Pow(b, e) => (&**b, *e),
        other => (other, 1),
    };
    if power < 1 {
        return Err(ClassifyError::new("power must be a positive integer", &den[0]));
    }
    if power > MAX_POWER as i64 {
        return Err(ClassifyError::new(
            format!("power exceeds supported maximum {MAX_POWER}"),
            &den[0],
        ));
    }
    let den_shape = index_shape(den_base, var)
        .ok_or_else(|| ClassifyError::new("denominator is not n or (2*n+1)", den_base))?;
    if den_shape != arg_shape {
        return Err(ClassifyError::new(
            "denominator index does not match the trig argument",
            &den[0],
        ));
    }

    let index = match arg_shape {
        IndexShape::Plain => {
            if lo != 1 {
                return Err(ClassifyError::new(
                    format!("series over n*x must start at n=1, found n={lo}"),
                    expr,
                ));
            }
            IndexSet::AllPositive
        }
        IndexShape::OddShift => {
            if lo != 0 {
                return Err(ClassifyError::new(
                    format!("series over (2*n+1)*x must start at n=0, found n={lo}"),
                    expr,
                ));
            }
            IndexSet::OddViaShift
        }
    };

    Ok(SeriesSpec::new(trig, power as u32, sign, index))
}

/// Canonical AST for a spec; `classify(spec_to_expr(s)) == s` for every spec.
pub fn spec_to_expr(spec: &SeriesSpec) -> Expr {
    let var = "n".to_string();
    let idx: Expr = match spec.index {
        IndexSet::AllPositive => Expr::Var(var.clone()),
        IndexSet::OddViaShift => Expr::Add(
            Box::new(Expr::Mul(Box::new(Expr::Int(2)), Box::new(Expr::Var(var.clone())))),
            Box::new(Expr::Int(1)),
        ),
    };
    let arg = Expr::Mul(Box::new(idx.clone()), Box::new(Expr::X));
    let trig = match spec.trig {
        Trig::Sin => Expr::Sin(Box::new(arg)),
        Trig::Cos => Expr::Cos(Box::new(arg)),
    };
    let numer = match spec.sign {
        SignMode::Plain => trig,
        SignMode::Alternating => {
            Expr::Mul(Box::new(Expr::AltSign(var.clone())), Box::new(trig))
        }
    };
    let denom = if spec.power == 1 {
        idx
    } else {
        Expr::Pow(Box::new(idx), spec.power as i64)
    };
    let body = Expr::Div(Box::new(numer), Box::new(denom));
    let lo = match spec.index {
        IndexSet::AllPositive => 1,
        IndexSet::OddViaShift => 0,
    };
    Expr::Sum { var, lo, body: Box::new(body) }
}
