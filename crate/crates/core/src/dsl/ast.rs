use std::fmt;

/// Expression AST as produced by the parser.
///
/// Invariants: exactly one bound index variable per `Sum` node, `x` is the
/// only free real symbol, and every operator node is well formed by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// `sum(var = lo .. inf, body)`
    Sum { var: String, lo: i64, body: Box<Expr> },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base ^ int` (non-negative integer exponent per the grammar)
    Pow(Box<Expr>, i64),
    /// `(-1)^var`
    AltSign(String),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// Bound index variable.
    Var(String),
    /// The free real symbol.
    X,
    Int(i64),
}

impl Expr {
    /// Evaluate the expression with the index variable bound to `n` and the
    /// free symbol bound to `x`. Used to check classified specs term by term.
    pub fn eval(&self, var: &str, n: i64, x: f64) -> f64 {
        match self {
            Expr::Sum { .. } => f64::NAN, // nested sums are not evaluable terms
            Expr::Add(a, b) => a.eval(var, n, x) + b.eval(var, n, x),
            Expr::Sub(a, b) => a.eval(var, n, x) - b.eval(var, n, x),
            Expr::Mul(a, b) => a.eval(var, n, x) * b.eval(var, n, x),
            Expr::Div(a, b) => a.eval(var, n, x) / b.eval(var, n, x),
            Expr::Pow(a, e) => a.eval(var, n, x).powi(*e as i32),
            Expr::AltSign(v) => {
                debug_assert_eq!(v, var);
                if n.rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Expr::Sin(a) => a.eval(var, n, x).sin(),
            Expr::Cos(a) => a.eval(var, n, x).cos(),
            Expr::Var(v) => {
                debug_assert_eq!(v, var);
                n as f64
            }
            Expr::X => x,
            Expr::Int(i) => *i as f64,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        let paren = prec < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Expr::Sum { var, lo, body } => write!(f, "sum({var}={lo}..inf, {body})")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "+")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "-")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, e) => {
                a.fmt_prec(f, 4)?;
                write!(f, "^{e}")?;
            }
            Expr::AltSign(v) => write!(f, "(-1)^{v}")?,
            Expr::Sin(a) => write!(f, "sin({a})")?,
            Expr::Cos(a) => write!(f, "cos({a})")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::X => write!(f, "x")?,
            Expr::Int(i) => write!(f, "{i}")?,
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Pretty-printer; output re-parses to an identical AST.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
