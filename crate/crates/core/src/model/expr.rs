//! Arithmetic expressions shared by functional rates, location sizes,
//! event assignments and SBML kinetic laws.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::numfmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 3,
        }
    }
}

/// Expression tree. Unary negation is `Sub(0, x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Symbol(String),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression evaluates to a non-finite value")]
    NonFiniteResult,
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(value: f64) -> Expr {
        Expr::Number(value)
    }

    pub fn sym(name: impl Into<String>) -> Expr {
        Expr::Symbol(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn add(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Add, lhs, rhs)
    }

    pub fn sub(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Sub, lhs, rhs)
    }

    pub fn mul(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Mul, lhs, rhs)
    }

    pub fn div(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Div, lhs, rhs)
    }

    pub fn pow(lhs: Expr, rhs: Expr) -> Expr {
        Expr::binary(BinOp::Pow, lhs, rhs)
    }

    pub fn neg(operand: Expr) -> Expr {
        Expr::sub(Expr::Number(0.0), operand)
    }

    /// Evaluates against a symbol lookup.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<f64, EvalError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let value = self.eval_inner(lookup)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFiniteResult)
        }
    }

    fn eval_inner<F>(&self, lookup: &F) -> Result<f64, EvalError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        match self {
            Expr::Number(v) => Ok(*v),
            Expr::Symbol(name) => lookup(name).ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval_inner(lookup)?;
                let b = rhs.eval_inner(lookup)?;
                Ok(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                })
            }
        }
    }

    /// Evaluates with symbols looked up in `env`.
    pub fn eval(&self, env: &HashMap<String, f64>) -> Result<f64, EvalError> {
        self.eval_with(&|name: &str| env.get(name).copied())
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_symbols(&mut |s| {
            out.insert(s.to_string());
        });
        out
    }

    pub fn visit_symbols<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Number(_) => {}
            Expr::Symbol(s) => f(s),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.visit_symbols(f);
                rhs.visit_symbols(f);
            }
        }
    }

    /// Returns a copy with every symbol passed through `f`.
    pub fn map_symbols(&self, f: &impl Fn(&str) -> String) -> Expr {
        match self {
            Expr::Number(v) => Expr::Number(*v),
            Expr::Symbol(s) => Expr::Symbol(f(s)),
            Expr::Binary { op, lhs, rhs } => Expr::binary(*op, lhs.map_symbols(f), rhs.map_symbols(f)),
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Expr::Number(_))
    }

    /// Normal form used to compare kinetic laws: chains of `+` and of `*`
    /// are flattened, their operands sorted, then rebuilt left-nested.
    pub fn canonical(&self) -> Expr {
        match self {
            Expr::Binary {
                op: op @ (BinOp::Add | BinOp::Mul),
                ..
            } => {
                let mut operands = Vec::new();
                self.collect_chain(*op, &mut operands);
                let mut operands: Vec<Expr> = operands.into_iter().map(Expr::canonical).collect();
                operands.sort_by_cached_key(|e| e.to_string());
                let mut it = operands.into_iter();
                let first = it.next().expect("chain has at least two operands");
                it.fold(first, |acc, e| Expr::binary(*op, acc, e))
            }
            Expr::Binary { op, lhs, rhs } => Expr::binary(*op, lhs.canonical(), rhs.canonical()),
            leaf => leaf.clone(),
        }
    }

    fn collect_chain<'a>(&'a self, chain_op: BinOp, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Binary { op, lhs, rhs } if *op == chain_op => {
                lhs.collect_chain(chain_op, out);
                rhs.collect_chain(chain_op, out);
            }
            other => out.push(other),
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, parent: BinOp, right: bool) -> fmt::Result {
        let parens = match self {
            Expr::Binary { op, .. } => {
                let (p, q) = (op.precedence(), parent.precedence());
                if parent == BinOp::Pow {
                    // right-associative
                    if right {
                        p < q
                    } else {
                        p <= q
                    }
                } else if right {
                    p <= q
                } else {
                    p < q
                }
            }
            Expr::Number(v) => v.is_sign_negative() && *v != 0.0,
            Expr::Symbol(_) => false,
        };
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Canonical infix with single spaces around operators. Negative literals
/// print as `(0 - x)` so the text stays inside the grammar.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) if v.is_sign_negative() && *v != 0.0 => {
                write!(f, "0 - {}", numfmt::shortest(-v))
            }
            Expr::Number(v) => f.write_str(&numfmt::shortest(v.abs())),
            Expr::Symbol(s) => f.write_str(s),
            Expr::Binary { op, lhs, rhs } => {
                lhs.write_operand(f, *op, false)?;
                write!(f, " {} ", op.symbol())?;
                rhs.write_operand(f, *op, true)
            }
        }
    }
}

/// Evaluates `expr` under `env`.
pub fn eval_expr(expr: &Expr, env: &HashMap<String, f64>) -> Result<f64, EvalError> {
    expr.eval(env)
}

pub fn free_symbols(expr: &Expr) -> BTreeSet<String> {
    expr.free_symbols()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lsi() -> Expr {
        Expr::mul(Expr::mul(Expr::sym("lambda"), Expr::sym("S")), Expr::sym("I"))
    }

    #[test]
    fn evaluates_mass_action_law() {
        let env: HashMap<String, f64> = [("lambda", 0.0005), ("S", 990.0), ("I", 10.0)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let v = eval_expr(&lsi(), &env).unwrap();
        assert!((v - 4.95).abs() < 1e-12);
    }

    #[test]
    fn unbound_symbol_is_reported() {
        let env = HashMap::new();
        assert_eq!(
            eval_expr(&Expr::sym("W"), &env),
            Err(EvalError::UnboundSymbol("W".into()))
        );
    }

    #[test]
    fn number_is_identity() {
        assert_eq!(eval_expr(&Expr::num(7.0), &HashMap::new()), Ok(7.0));
    }

    #[test]
    fn division_by_zero_and_non_finite() {
        let env = HashMap::new();
        assert_eq!(
            eval_expr(&Expr::div(Expr::num(1.0), Expr::num(0.0)), &env),
            Err(EvalError::DivisionByZero)
        );
        assert_eq!(
            eval_expr(&Expr::pow(Expr::num(10.0), Expr::num(400.0)), &env),
            Err(EvalError::NonFiniteResult)
        );
    }

    #[test]
    fn free_symbols_cases() {
        let s: Vec<_> = free_symbols(&lsi()).into_iter().collect();
        assert_eq!(s, ["I", "S", "lambda"]);
        assert!(free_symbols(&Expr::num(3.0)).is_empty());
        let wvp = Expr::mul(Expr::sym("W"), Expr::sym("VP"));
        assert_eq!(free_symbols(&wvp).into_iter().collect::<Vec<_>>(), ["VP", "W"]);
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        assert_eq!(lsi().to_string(), "lambda * S * I");
        let e = Expr::mul(Expr::sym("a"), Expr::add(Expr::sym("b"), Expr::sym("c")));
        assert_eq!(e.to_string(), "a * (b + c)");
        let e = Expr::sub(Expr::sym("a"), Expr::sub(Expr::sym("b"), Expr::sym("c")));
        assert_eq!(e.to_string(), "a - (b - c)");
        let e = Expr::pow(Expr::pow(Expr::sym("a"), Expr::sym("b")), Expr::sym("c"));
        assert_eq!(e.to_string(), "(a ^ b) ^ c");
        let e = Expr::pow(Expr::sym("a"), Expr::pow(Expr::sym("b"), Expr::sym("c")));
        assert_eq!(e.to_string(), "a ^ b ^ c");
        assert_eq!(Expr::neg(Expr::sym("x")).to_string(), "0 - x");
        assert_eq!(Expr::mul(Expr::num(-2.0), Expr::sym("x")).to_string(), "(0 - 2) * x");
    }

    #[test]
    fn canonical_ignores_operand_order_in_chains() {
        let a = Expr::mul(Expr::mul(Expr::sym("lambda"), Expr::sym("S")), Expr::sym("I"));
        let b = Expr::mul(Expr::sym("I"), Expr::mul(Expr::sym("S"), Expr::sym("lambda")));
        assert_eq!(a.canonical(), b.canonical());
        let c = Expr::div(Expr::sym("S"), Expr::sym("I"));
        let d = Expr::div(Expr::sym("I"), Expr::sym("S"));
        assert_ne!(c.canonical(), d.canonical());
    }
}
