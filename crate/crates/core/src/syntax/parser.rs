//! Recursive descent parser for the FSP subset.

use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::SyntaxError;

pub(crate) fn parse_unit(src: &str) -> Result<SpecAst, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        names: HashSet::new(),
        spec: SpecAst::default(),
    };
    while parser.peek() != &Tok::Eof {
        parser.decl()?;
    }
    Ok(parser.spec)
}

/// Parses a standalone expression (used by tests and tooling).
pub(crate) fn parse_expr_text(src: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        names: HashSet::new(),
        spec: SpecAst::default(),
    };
    let e = parser.expr()?;
    parser.expect(Tok::Eof)?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: HashSet<String>,
    spec: SpecAst,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn here(&self) -> Pos {
        self.tokens[self.pos].pos
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error_at(&self, pos: Pos, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        if let Some(feature) = self.unsupported_here() {
            let pos = self.here();
            return SyntaxError::Unsupported {
                line: pos.line,
                col: pos.col,
                feature: feature.into(),
            };
        }
        self.error_at(
            self.here(),
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    fn unsupported_here(&self) -> Option<&'static str> {
        match (self.peek(), self.peek_at(1)) {
            (Tok::Slash, Tok::LBrace) => Some("relabeling `/{...}`"),
            (Tok::Backslash, _) => Some("hiding `\\{...}`"),
            (Tok::At, _) => Some("interface `@{...}`"),
            (Tok::ShiftLeft, _) | (Tok::ShiftRight, _) => Some("action priority `<<` / `>>`"),
            _ => None,
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == &tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn declare(&mut self, name: &str, pos: Pos) -> PResult<()> {
        if !self.names.insert(name.to_string()) {
            return Err(SyntaxError::Duplicate {
                line: pos.line,
                col: pos.col,
                name: name.to_string(),
            });
        }
        Ok(())
    }

    fn decl(&mut self) -> PResult<()> {
        let pos = self.here();
        match self.peek() {
            Tok::Const => {
                self.advance();
                let name_pos = self.here();
                let name = self.ident()?;
                self.declare(&name, name_pos)?;
                self.expect(Tok::Assign)?;
                let value = self.expr()?;
                self.spec.consts.insert(name, value);
            }
            Tok::Range => {
                self.advance();
                let name_pos = self.here();
                let name = self.ident()?;
                self.declare(&name, name_pos)?;
                self.expect(Tok::Assign)?;
                let lo = self.expr()?;
                self.expect(Tok::DotDot)?;
                let hi = self.expr()?;
                self.spec.ranges.insert(name, RangeDecl { lo, hi });
            }
            Tok::Set => {
                self.advance();
                let name_pos = self.here();
                let name = self.ident()?;
                self.declare(&name, name_pos)?;
                self.expect(Tok::Assign)?;
                let labels = self.label_set()?;
                self.spec.sets.insert(name, labels);
            }
            Tok::Progress => {
                self.advance();
                let name_pos = self.here();
                let name = self.ident()?;
                self.declare(&name, name_pos)?;
                self.expect(Tok::Assign)?;
                let labels = self.label_set()?;
                self.spec.progress.insert(name, labels);
            }
            Tok::BarBar => {
                self.advance();
                let name_pos = self.here();
                let name = self.ident()?;
                self.declare(&name, name_pos)?;
                self.expect(Tok::Assign)?;
                self.expect(Tok::LParen)?;
                let mut parts = vec![self.proc_ref()?];
                while self.eat(&Tok::BarBar) {
                    parts.push(self.proc_ref()?);
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                self.spec.composites.insert(name, parts);
            }
            Tok::Property => {
                self.advance();
                self.process(true)?;
            }
            Tok::Ident(_) => self.process(false)?,
            _ => return Err(self.error_at(pos, format!("expected declaration, found {}", self.peek()))),
        }
        Ok(())
    }

    fn label_set(&mut self) -> PResult<Vec<LabelTemplate>> {
        self.expect(Tok::LBrace)?;
        let mut labels = vec![self.label()?];
        while self.eat(&Tok::Comma) {
            labels.push(self.label()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(labels)
    }

    fn process(&mut self, is_property: bool) -> PResult<()> {
        let name_pos = self.here();
        let first = self.local_def()?;
        if !first.name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(self.error_at(
                name_pos,
                format!("process name `{}` must begin with an uppercase letter", first.name),
            ));
        }
        self.declare(&first.name, name_pos)?;
        let name = first.name.clone();
        let mut locals = vec![first];
        while self.eat(&Tok::Comma) {
            let pos = self.here();
            let local = self.local_def()?;
            if locals
                .iter()
                .any(|l| l.name == local.name && l.params.len() == local.params.len())
            {
                return Err(SyntaxError::Duplicate {
                    line: pos.line,
                    col: pos.col,
                    name: local.name,
                });
            }
            locals.push(local);
        }
        let alphabet_extension = if self.eat(&Tok::Plus) {
            self.label_set()?
        } else {
            Vec::new()
        };
        if self.peek() != &Tok::Dot {
            return Err(self.unexpected("`.` ending the process definition"));
        }
        self.advance();
        self.spec.processes.push(ProcessDecl {
            name,
            locals,
            alphabet_extension,
            is_property,
        });
        Ok(())
    }

    fn local_def(&mut self) -> PResult<LocalDef> {
        let pos = self.here();
        let name = self.ident()?;
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(self.error_at(
                pos,
                format!("local process name `{name}` must begin with an uppercase letter"),
            ));
        }
        let mut params: Vec<Binder> = Vec::new();
        while self.peek() == &Tok::LBracket {
            self.advance();
            let binder_pos = self.here();
            let binder = match (self.peek(), self.peek_at(1)) {
                (Tok::Ident(_), Tok::Colon) => self.binder()?,
                _ => {
                    return Err(self.error_at(
                        binder_pos,
                        format!("parameter of `{name}` needs a range, as in `[i:R]`"),
                    ))
                }
            };
            if params.iter().any(|b| b.name == binder.name) {
                return Err(self.error_at(
                    binder_pos,
                    format!("parameter `{}` bound twice in `{name}`", binder.name),
                ));
            }
            params.push(binder);
            self.expect(Tok::RBracket)?;
        }
        self.expect(Tok::Assign)?;
        let body = self.body()?;
        Ok(LocalDef { name, params, body })
    }

    fn binder(&mut self) -> PResult<Binder> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let domain = match (self.peek().clone(), self.peek_at(1)) {
            (Tok::Ident(range), Tok::RBracket) => {
                self.advance();
                Domain::Named(range)
            }
            _ => {
                let lo = self.expr()?;
                self.expect(Tok::DotDot)?;
                let hi = self.expr()?;
                Domain::Span(lo, hi)
            }
        };
        Ok(Binder { name, domain })
    }

    fn body(&mut self) -> PResult<Body> {
        match self.peek().clone() {
            Tok::Stop => {
                self.advance();
                Ok(Body::Stop)
            }
            Tok::If => {
                self.advance();
                let cond = self.expr()?;
                self.expect(Tok::Then)?;
                let then = Box::new(self.body()?);
                let otherwise = if self.eat(&Tok::Else) {
                    Some(Box::new(self.body()?))
                } else {
                    None
                };
                Ok(Body::If {
                    cond,
                    then,
                    otherwise,
                })
            }
            Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_uppercase()) => {
                Ok(Body::Ref(self.proc_ref()?))
            }
            Tok::Ident(_) | Tok::When => Ok(Body::Choice(vec![self.guarded()?])),
            Tok::LParen => {
                self.advance();
                let inner = match self.peek() {
                    Tok::Stop | Tok::If => self.body()?,
                    Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_uppercase()) => {
                        self.body()?
                    }
                    Tok::LParen => self.body()?,
                    _ => Body::Choice(self.choice()?),
                };
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("process body")),
        }
    }

    fn choice(&mut self) -> PResult<Vec<Guarded>> {
        let mut branches = vec![self.guarded()?];
        while self.eat(&Tok::Bar) {
            branches.push(self.guarded()?);
        }
        Ok(branches)
    }

    fn guarded(&mut self) -> PResult<Guarded> {
        let guard = if self.eat(&Tok::When) {
            Some(self.expr()?)
        } else {
            None
        };
        let label = self.label()?;
        self.expect(Tok::Arrow)?;
        let next = self.body()?;
        Ok(Guarded { guard, label, next })
    }

    fn label(&mut self) -> PResult<LabelTemplate> {
        let mut parts = vec![self.label_part()?];
        while self.peek() == &Tok::Dot && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.advance();
            parts.push(self.label_part()?);
        }
        Ok(LabelTemplate { parts })
    }

    fn label_part(&mut self) -> PResult<PartTemplate> {
        let pos = self.here();
        let name = self.ident()?;
        if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(self.error_at(
                pos,
                format!("action name `{name}` must begin with a lowercase letter"),
            ));
        }
        let mut indices = Vec::new();
        while self.eat(&Tok::LBracket) {
            let index = match (self.peek(), self.peek_at(1)) {
                (Tok::Ident(_), Tok::Colon) => IndexTemplate::Binder(self.binder()?),
                _ => {
                    let lo = self.expr()?;
                    if self.eat(&Tok::DotDot) {
                        IndexTemplate::Span(lo, self.expr()?)
                    } else {
                        IndexTemplate::Expr(lo)
                    }
                }
            };
            self.expect(Tok::RBracket)?;
            indices.push(index);
        }
        Ok(PartTemplate { name, indices })
    }

    fn proc_ref(&mut self) -> PResult<ProcRef> {
        let pos = self.here();
        let name = self.ident()?;
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(self.error_at(
                pos,
                format!("process reference `{name}` must begin with an uppercase letter"),
            ));
        }
        let mut args = Vec::new();
        while self.eat(&Tok::LBracket) {
            args.push(self.expr()?);
            self.expect(Tok::RBracket)?;
        }
        Ok(ProcRef { name, args })
    }

    // Expressions, loosest first.

    fn expr(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::If) {
            let cond = self.expr()?;
            self.expect(Tok::Then)?;
            let then = self.expr()?;
            self.expect(Tok::Else)?;
            let otherwise = self.expr()?;
            return Ok(Expr::If(Box::new(cond), Box::new(then), Box::new(otherwise)));
        }
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        Some(match self.peek() {
            Tok::BarBar => BinaryOp::Or,
            Tok::AndAnd => BinaryOp::And,
            Tok::EqEq => BinaryOp::Eq,
            Tok::NotEq => BinaryOp::Ne,
            Tok::Lt => BinaryOp::Lt,
            Tok::Le => BinaryOp::Le,
            Tok::Gt => BinaryOp::Gt,
            Tok::Ge => BinaryOp::Ge,
            Tok::Plus => BinaryOp::Add,
            Tok::Minus => BinaryOp::Sub,
            Tok::Star => BinaryOp::Mul,
            Tok::Slash => BinaryOp::Div,
            Tok::Percent => BinaryOp::Mod,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            if op == BinaryOp::Div && self.peek_at(1) == &Tok::LBrace {
                return Err(self.unexpected("expression"));
            }
            self.advance();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.advance();
                if let Tok::Int(n) = self.peek().clone() {
                    self.advance();
                    return Ok(Expr::Int(-n));
                }
                Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.advance();
                self.unary()
            }
            Tok::Bang => {
                self.advance();
                Ok(Expr::Unary(UnaryOp::Not, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                self.advance();
                Ok(Expr::Ident(name))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}
