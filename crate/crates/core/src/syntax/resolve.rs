//! Name resolution and constant evaluation over a freshly parsed unit.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::ast::*;
use super::eval::{eval_int, EvalError};
use super::SyntaxError;

pub(crate) fn resolve(spec: &mut SpecAst) -> Result<(), SyntaxError> {
    let values = evaluate_consts(&spec.consts)?;
    spec.values = values;
    let r = Resolver { spec };

    for (name, decl) in &spec.ranges {
        let ctx = format!("range `{name}`");
        r.expr(&decl.lo, &[], &ctx)?;
        r.expr(&decl.hi, &[], &ctx)?;
        let lo = eval_int(&decl.lo, &spec.values).map_err(|e| eval_err(&ctx, e))?;
        let hi = eval_int(&decl.hi, &spec.values).map_err(|e| eval_err(&ctx, e))?;
        if lo > hi {
            return Err(SyntaxError::Invalid {
                context: ctx,
                msg: format!("empty range {lo}..{hi}"),
            });
        }
    }
    for (name, labels) in &spec.sets {
        let ctx = format!("set `{name}`");
        for label in labels {
            r.label(label, &mut Vec::new(), &ctx)?;
        }
    }
    for (name, labels) in &spec.progress {
        let ctx = format!("progress `{name}`");
        for label in labels {
            r.label(label, &mut Vec::new(), &ctx)?;
        }
    }
    for process in &spec.processes {
        r.process(process)?;
    }
    for (name, parts) in &spec.composites {
        let ctx = format!("composite `{name}`");
        for part in parts {
            r.component(part, &ctx)?;
        }
    }
    r.composite_cycles()?;
    Ok(())
}

fn eval_err(ctx: &str, e: EvalError) -> SyntaxError {
    SyntaxError::Invalid {
        context: ctx.to_string(),
        msg: e.to_string(),
    }
}

fn evaluate_consts(consts: &IndexMap<String, Expr>) -> Result<IndexMap<String, i64>, SyntaxError> {
    fn visit(
        name: &str,
        consts: &IndexMap<String, Expr>,
        values: &mut IndexMap<String, i64>,
        active: &mut Vec<String>,
    ) -> Result<i64, SyntaxError> {
        if let Some(v) = values.get(name) {
            return Ok(*v);
        }
        let ctx = format!("const `{name}`");
        if active.iter().any(|a| a == name) {
            return Err(SyntaxError::Invalid {
                context: ctx,
                msg: format!("cyclic definition through {}", active.join(" -> ")),
            });
        }
        active.push(name.to_string());
        let expr = &consts[name];
        let mut idents = Vec::new();
        expr.idents(&mut idents);
        for id in idents {
            if !consts.contains_key(id) {
                return Err(SyntaxError::Unresolved {
                    name: id.to_string(),
                    context: ctx,
                });
            }
            visit(id, consts, values, active)?;
        }
        active.pop();
        let v = eval_int(expr, &*values).map_err(|e| eval_err(&ctx, e))?;
        values.insert(name.to_string(), v);
        Ok(v)
    }

    let mut values = IndexMap::new();
    for name in consts.keys() {
        visit(name, consts, &mut values, &mut Vec::new())?;
    }
    // Keep declaration order regardless of visit order.
    let mut ordered = IndexMap::new();
    for name in consts.keys() {
        ordered.insert(name.clone(), values[name]);
    }
    Ok(ordered)
}

struct Resolver<'a> {
    spec: &'a SpecAst,
}

impl Resolver<'_> {
    fn expr(&self, e: &Expr, scope: &[String], ctx: &str) -> Result<(), SyntaxError> {
        let mut idents = Vec::new();
        e.idents(&mut idents);
        for id in idents {
            if !scope.iter().any(|s| s == id) && !self.spec.consts.contains_key(id) {
                return Err(SyntaxError::Unresolved {
                    name: id.to_string(),
                    context: ctx.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Checks a binder domain; returns true when it binds an integer.
    fn domain(&self, d: &Domain, scope: &[String], ctx: &str) -> Result<bool, SyntaxError> {
        match d {
            Domain::Named(name) => {
                if self.spec.ranges.contains_key(name) {
                    Ok(true)
                } else if self.spec.sets.contains_key(name) {
                    Ok(false)
                } else {
                    Err(SyntaxError::Unresolved {
                        name: name.clone(),
                        context: format!("{ctx} (expected a range or set)"),
                    })
                }
            }
            Domain::Span(lo, hi) => {
                self.expr(lo, scope, ctx)?;
                self.expr(hi, scope, ctx)?;
                Ok(true)
            }
        }
    }

    fn label(
        &self,
        label: &LabelTemplate,
        scope: &mut Vec<String>,
        ctx: &str,
    ) -> Result<(), SyntaxError> {
        for part in &label.parts {
            for index in &part.indices {
                match index {
                    IndexTemplate::Expr(Expr::Ident(name))
                        if !scope.contains(name)
                            && (self.spec.ranges.contains_key(name)
                                || self.spec.sets.contains_key(name)) => {}
                    IndexTemplate::Expr(e) => self.expr(e, scope, ctx)?,
                    IndexTemplate::Span(lo, hi) => {
                        self.expr(lo, scope, ctx)?;
                        self.expr(hi, scope, ctx)?;
                    }
                    IndexTemplate::Binder(b) => {
                        if self.domain(&b.domain, scope, ctx)? {
                            scope.push(b.name.clone());
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn process(&self, process: &ProcessDecl) -> Result<(), SyntaxError> {
        for local in &process.locals {
            let ctx = format!("process `{}`, local `{}`", process.name, local.name);
            let mut scope = Vec::new();
            for param in &local.params {
                if !self.domain(&param.domain, &scope, &ctx)? {
                    return Err(SyntaxError::Invalid {
                        context: ctx,
                        msg: format!("parameter `{}` must range over integers", param.name),
                    });
                }
                scope.push(param.name.clone());
            }
            self.body(process, &local.body, &mut scope, &ctx)?;
        }
        let ctx = format!("alphabet extension of `{}`", process.name);
        for label in &process.alphabet_extension {
            self.label(label, &mut Vec::new(), &ctx)?;
        }
        Ok(())
    }

    fn body(
        &self,
        process: &ProcessDecl,
        body: &Body,
        scope: &mut Vec<String>,
        ctx: &str,
    ) -> Result<(), SyntaxError> {
        match body {
            Body::Stop => Ok(()),
            Body::Ref(r) => {
                if process.local(&r.name, r.args.len()).is_none() {
                    let arities: Vec<usize> = process
                        .locals
                        .iter()
                        .filter(|l| l.name == r.name)
                        .map(|l| l.params.len())
                        .collect();
                    if arities.is_empty() {
                        return Err(SyntaxError::Unresolved {
                            name: r.name.clone(),
                            context: format!("{ctx} (no such local process)"),
                        });
                    }
                    return Err(SyntaxError::Invalid {
                        context: ctx.to_string(),
                        msg: format!(
                            "`{}` takes {:?} index(es) but {} given",
                            r.name,
                            arities,
                            r.args.len()
                        ),
                    });
                }
                for arg in &r.args {
                    self.expr(arg, scope, ctx)?;
                }
                Ok(())
            }
            Body::Choice(branches) => {
                for branch in branches {
                    let mark = scope.len();
                    self.label(&branch.label, scope, ctx)?;
                    if let Some(g) = &branch.guard {
                        self.expr(g, scope, ctx)?;
                    }
                    self.body(process, &branch.next, scope, ctx)?;
                    scope.truncate(mark);
                }
                Ok(())
            }
            Body::If {
                cond,
                then,
                otherwise,
            } => {
                self.expr(cond, scope, ctx)?;
                self.body(process, then, scope, ctx)?;
                if let Some(o) = otherwise {
                    self.body(process, o, scope, ctx)?;
                }
                Ok(())
            }
        }
    }

    fn component(&self, part: &ProcRef, ctx: &str) -> Result<(), SyntaxError> {
        for arg in &part.args {
            self.expr(arg, &[], ctx)?;
        }
        if let Some(p) = self.spec.process(&part.name) {
            if !part.args.is_empty() && p.local(&p.name, part.args.len()).is_none() {
                return Err(SyntaxError::Invalid {
                    context: ctx.to_string(),
                    msg: format!(
                        "`{}` has no definition taking {} index(es)",
                        part.name,
                        part.args.len()
                    ),
                });
            }
            Ok(())
        } else if self.spec.composites.contains_key(&part.name) {
            if !part.args.is_empty() {
                return Err(SyntaxError::Invalid {
                    context: ctx.to_string(),
                    msg: format!("composite `{}` takes no indices", part.name),
                });
            }
            Ok(())
        } else {
            Err(SyntaxError::Unresolved {
                name: part.name.clone(),
                context: ctx.to_string(),
            })
        }
    }

    fn composite_cycles(&self) -> Result<(), SyntaxError> {
        fn visit(
            spec: &SpecAst,
            name: &str,
            done: &mut HashSet<String>,
            active: &mut Vec<String>,
        ) -> Result<(), SyntaxError> {
            if done.contains(name) {
                return Ok(());
            }
            if active.iter().any(|a| a == name) {
                return Err(SyntaxError::Invalid {
                    context: format!("composite `{name}`"),
                    msg: format!("composes itself through {}", active.join(" || ")),
                });
            }
            active.push(name.to_string());
            for part in &spec.composites[name] {
                if spec.composites.contains_key(&part.name) {
                    visit(spec, &part.name, done, active)?;
                }
            }
            active.pop();
            done.insert(name.to_string());
            Ok(())
        }
        let mut done = HashSet::new();
        for name in self.spec.composites.keys() {
            visit(self.spec, name, &mut done, &mut Vec::new())?;
        }
        Ok(())
    }
}
