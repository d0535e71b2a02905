//! Source rendering. Printing and reparsing yields an equal AST.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

/// Loosest precedence at which an operand can appear without parentheses.
const ATOM: u8 = 7;

fn write_expr(f: &mut impl Write, e: &Expr, min_prec: u8) -> fmt::Result {
    match e {
        Expr::Int(n) => write!(f, "{n}"),
        Expr::Ident(name) => f.write_str(name),
        Expr::Unary(op, inner) => {
            f.write_str(match op {
                UnaryOp::Neg => "-",
                UnaryOp::Not => "!",
            })?;
            if matches!(**inner, Expr::Int(_) | Expr::Unary(..)) {
                write!(f, "(")?;
                write_expr(f, inner, 0)?;
                write!(f, ")")
            } else {
                write_expr(f, inner, ATOM)
            }
        }
        Expr::Binary(op, lhs, rhs) => {
            let prec = op.precedence();
            let wrap = prec < min_prec;
            if wrap {
                f.write_char('(')?;
            }
            write_expr(f, lhs, prec)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, rhs, prec + 1)?;
            if wrap {
                f.write_char(')')?;
            }
            Ok(())
        }
        Expr::If(cond, then, otherwise) => {
            let wrap = min_prec > 0;
            if wrap {
                f.write_char('(')?;
            }
            f.write_str("if ")?;
            write_expr(f, cond, 1)?;
            f.write_str(" then ")?;
            write_expr(f, then, 1)?;
            f.write_str(" else ")?;
            write_expr(f, otherwise, 0)?;
            if wrap {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl Display for Domain {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Named(name) => f.write_str(name),
            Domain::Span(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

impl Display for Binder {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.domain)
    }
}

impl Display for IndexTemplate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            IndexTemplate::Expr(e) => write!(f, "[{e}]"),
            IndexTemplate::Span(lo, hi) => write!(f, "[{lo}..{hi}]"),
            IndexTemplate::Binder(b) => write!(f, "[{b}]"),
        }
    }
}

impl Display for LabelTemplate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_char('.')?;
            }
            f.write_str(&part.name)?;
            for index in &part.indices {
                write!(f, "{index}")?;
            }
        }
        Ok(())
    }
}

impl Display for ProcRef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for arg in &self.args {
            write!(f, "[{arg}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BodyCtx {
    Top,
    Continuation,
    IfArm,
}

fn write_body(f: &mut Formatter<'_>, body: &Body, ctx: BodyCtx, indent: usize) -> fmt::Result {
    match body {
        Body::Stop => f.write_str("STOP"),
        Body::Ref(r) => write!(f, "{r}"),
        Body::Choice(branches) => {
            let bare = ctx == BodyCtx::Continuation && branches.len() == 1;
            if !bare {
                f.write_char('(')?;
            }
            for (i, branch) in branches.iter().enumerate() {
                if i > 0 {
                    write!(f, "\n{:width$}| ", "", width = indent)?;
                }
                if let Some(g) = &branch.guard {
                    write!(f, "when (")?;
                    write_expr(f, g, 0)?;
                    f.write_str(") ")?;
                }
                write!(f, "{} -> ", branch.label)?;
                write_body(f, &branch.next, BodyCtx::Continuation, indent + 2)?;
            }
            if !bare {
                f.write_char(')')?;
            }
            Ok(())
        }
        Body::If {
            cond,
            then,
            otherwise,
        } => {
            let wrap = ctx == BodyCtx::IfArm;
            if wrap {
                f.write_char('(')?;
            }
            write!(f, "if {cond} then ")?;
            write_body(f, then, BodyCtx::IfArm, indent + 2)?;
            if let Some(o) = otherwise {
                f.write_str(" else ")?;
                write_body(f, o, BodyCtx::IfArm, indent + 2)?;
            }
            if wrap {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_label_set(f: &mut Formatter<'_>, labels: &[LabelTemplate]) -> fmt::Result {
    f.write_char('{')?;
    for (i, label) in labels.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{label}")?;
    }
    f.write_char('}')
}

impl Display for ProcessDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.is_property {
            f.write_str("property ")?;
        }
        for (i, local) in self.locals.iter().enumerate() {
            if i > 0 {
                f.write_str(",\n")?;
            }
            f.write_str(&local.name)?;
            for param in &local.params {
                write!(f, "[{param}]")?;
            }
            f.write_str(" = ")?;
            write_body(f, &local.body, BodyCtx::Top, 4)?;
        }
        if !self.alphabet_extension.is_empty() {
            f.write_str(" + ")?;
            write_label_set(f, &self.alphabet_extension)?;
        }
        f.write_str(".\n")
    }
}

impl Display for SpecAst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.consts {
            writeln!(f, "const {name} = {value}")?;
        }
        for (name, decl) in &self.ranges {
            writeln!(f, "range {name} = {}..{}", decl.lo, decl.hi)?;
        }
        for (name, labels) in &self.sets {
            write!(f, "set {name} = ")?;
            write_label_set(f, labels)?;
            writeln!(f)?;
        }
        for process in &self.processes {
            writeln!(f)?;
            write!(f, "{process}")?;
        }
        if !self.progress.is_empty() {
            writeln!(f)?;
        }
        for (name, labels) in &self.progress {
            write!(f, "progress {name} = ")?;
            write_label_set(f, labels)?;
            writeln!(f)?;
        }
        for (name, parts) in &self.composites {
            writeln!(f)?;
            write!(f, "||{name} = (")?;
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(" || ")?;
                }
                write!(f, "{part}")?;
            }
            writeln!(f, ").")?;
        }
        Ok(())
    }
}
