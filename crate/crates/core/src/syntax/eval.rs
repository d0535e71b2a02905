//! Compile-time evaluation of integer and boolean expressions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use super::ast::{BinaryOp, Expr, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch {
        expected: &'static str,
        found: Value,
    },
}

/// Name lookup for expression evaluation.
pub trait Env {
    fn lookup(&self, name: &str) -> Option<i64>;
}

impl Env for HashMap<String, i64> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.get(name).copied()
    }
}

impl Env for BTreeMap<String, i64> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.get(name).copied()
    }
}

impl Env for IndexMap<String, i64> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.get(name).copied()
    }
}

/// Binders shadow constants.
pub struct Scoped<'a, B: Env, C: Env> {
    pub binders: &'a B,
    pub consts: &'a C,
}

impl<B: Env, C: Env> Env for Scoped<'_, B, C> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.binders
            .lookup(name)
            .or_else(|| self.consts.lookup(name))
    }
}

impl<E: Env + ?Sized> Env for &E {
    fn lookup(&self, name: &str) -> Option<i64> {
        (**self).lookup(name)
    }
}

pub fn eval_expr(e: &Expr, env: &impl Env) -> Result<Value, EvalError> {
    match e {
        Expr::Int(n) => Ok(Value::Int(*n)),
        Expr::Ident(name) => env
            .lookup(name)
            .map(Value::Int)
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Expr::Unary(op, inner) => apply_unary(*op, eval_expr(inner, env)?),
        Expr::Binary(op, lhs, rhs) => {
            let a = eval_expr(lhs, env)?;
            // Short-circuit the connectives so a false guard protects its right side.
            match (op, a) {
                (BinaryOp::And, Value::Bool(false)) => return Ok(Value::Bool(false)),
                (BinaryOp::Or, Value::Bool(true)) => return Ok(Value::Bool(true)),
                _ => {}
            }
            apply_binary(*op, a, eval_expr(rhs, env)?)
        }
        Expr::If(cond, then, otherwise) => {
            if as_bool(eval_expr(cond, env)?)? {
                eval_expr(then, env)
            } else {
                eval_expr(otherwise, env)
            }
        }
    }
}

pub fn eval_int(e: &Expr, env: &impl Env) -> Result<i64, EvalError> {
    as_int(eval_expr(e, env)?)
}

pub fn eval_bool(e: &Expr, env: &impl Env) -> Result<bool, EvalError> {
    as_bool(eval_expr(e, env)?)
}

pub(crate) fn as_int(v: Value) -> Result<i64, EvalError> {
    match v {
        Value::Int(n) => Ok(n),
        other => Err(EvalError::TypeMismatch {
            expected: "integer",
            found: other,
        }),
    }
}

pub(crate) fn as_bool(v: Value) -> Result<bool, EvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        other => Err(EvalError::TypeMismatch {
            expected: "boolean",
            found: other,
        }),
    }
}

pub(crate) fn apply_unary(op: UnaryOp, v: Value) -> Result<Value, EvalError> {
    match op {
        UnaryOp::Neg => as_int(v)?
            .checked_neg()
            .map(Value::Int)
            .ok_or(EvalError::Overflow),
        UnaryOp::Not => Ok(Value::Bool(!as_bool(v)?)),
    }
}

pub(crate) fn apply_binary(op: BinaryOp, a: Value, b: Value) -> Result<Value, EvalError> {
    use BinaryOp::*;
    let overflow = || EvalError::Overflow;
    Ok(match op {
        Add => Value::Int(as_int(a)?.checked_add(as_int(b)?).ok_or_else(overflow)?),
        Sub => Value::Int(as_int(a)?.checked_sub(as_int(b)?).ok_or_else(overflow)?),
        Mul => Value::Int(as_int(a)?.checked_mul(as_int(b)?).ok_or_else(overflow)?),
        Div | Mod => {
            let (x, y) = (as_int(a)?, as_int(b)?);
            if y == 0 {
                return Err(EvalError::DivisionByZero);
            }
            let r = if op == Div {
                x.checked_div(y)
            } else {
                x.checked_rem(y)
            };
            Value::Int(r.ok_or_else(overflow)?)
        }
        Lt => Value::Bool(as_int(a)? < as_int(b)?),
        Le => Value::Bool(as_int(a)? <= as_int(b)?),
        Gt => Value::Bool(as_int(a)? > as_int(b)?),
        Ge => Value::Bool(as_int(a)? >= as_int(b)?),
        Eq | Ne => {
            let same = match (a, b) {
                (Value::Int(x), Value::Int(y)) => x == y,
                (Value::Bool(x), Value::Bool(y)) => x == y,
                (Value::Int(_), other) => {
                    return Err(EvalError::TypeMismatch {
                        expected: "integer",
                        found: other,
                    })
                }
                (Value::Bool(_), other) => {
                    return Err(EvalError::TypeMismatch {
                        expected: "boolean",
                        found: other,
                    })
                }
            };
            Value::Bool(if op == Eq { same } else { !same })
        }
        And => Value::Bool(as_bool(a)? && as_bool(b)?),
        Or => Value::Bool(as_bool(a)? || as_bool(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn env(pairs: &[(&str, i64)]) -> HashMap<String, i64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn arithmetic_on_binder() {
        let e = parse_expr("16+t").unwrap();
        assert_eq!(eval_expr(&e, &env(&[("t", 4)])), Ok(Value::Int(20)));
    }

    #[test]
    fn controller_guard() {
        let e = parse_expr("q < BEST1+FTRD && p <= 3*P").unwrap();
        let env = env(&[("q", 5), ("BEST1", 10), ("FTRD", 2), ("p", 4), ("P", 2)]);
        assert_eq!(eval_expr(&e, &env), Ok(Value::Bool(true)));
    }

    #[test]
    fn division_by_zero() {
        let e = parse_expr("x/0").unwrap();
        assert_eq!(eval_expr(&e, &env(&[("x", 1)])), Err(EvalError::DivisionByZero));
        let e = parse_expr("x%0").unwrap();
        assert_eq!(eval_expr(&e, &env(&[("x", 1)])), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn unbound_and_mismatch() {
        let e = parse_expr("y + 1").unwrap();
        assert_eq!(
            eval_expr(&e, &env(&[])),
            Err(EvalError::Unbound("y".into()))
        );
        let e = parse_expr("(1 < 2) + 1").unwrap();
        assert!(matches!(
            eval_expr(&e, &env(&[])),
            Err(EvalError::TypeMismatch { .. })
        ));
        let e = parse_expr("1 && 2").unwrap();
        assert!(matches!(
            eval_expr(&e, &env(&[])),
            Err(EvalError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn truncating_division_and_conditional() {
        let e = parse_expr("-7 / 2").unwrap();
        assert_eq!(eval_int(&e, &env(&[])), Ok(-3));
        let e = parse_expr("if q+p-v > C then C else q+p-v").unwrap();
        let env = env(&[("q", 9), ("p", 3), ("v", 1), ("C", 10)]);
        assert_eq!(eval_int(&e, &env), Ok(10));
    }

    #[test]
    fn overflow_is_reported() {
        let e = parse_expr("9223372036854775807 + 1").unwrap();
        assert_eq!(eval_expr(&e, &env(&[])), Err(EvalError::Overflow));
    }
}
