//! Expansion of label templates into concrete action labels.

use thiserror::Error;

use super::ast::*;
use super::eval::{eval_int, Env, EvalError, Scoped};
use crate::label::{ActionLabel, LabelError, LabelPart};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("in label `{label}`: {source}")]
    Eval { label: String, source: EvalError },
    #[error("in label `{label}`: `{name}` is neither a range nor a set")]
    UnknownDomain { label: String, name: String },
    #[error("in label `{label}`: empty index range {lo}..{hi}")]
    EmptySpan { label: String, lo: i64, hi: i64 },
    #[error("in label `{label}`: {source}")]
    Label { label: String, source: LabelError },
}

/// One concrete label together with the binder values that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub label: ActionLabel,
    pub bindings: Vec<(String, i64)>,
}

/// Binder values pushed on top of an outer environment; later entries shadow earlier ones.
struct Layered<'a, E: Env> {
    local: &'a [(String, i64)],
    outer: &'a E,
}

impl<E: Env> Env for Layered<'_, E> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.local
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .or_else(|| self.outer.lookup(name))
    }
}

#[derive(Clone)]
struct Partial {
    parts: Vec<LabelPart>,
    bindings: Vec<(String, i64)>,
}

/// Expands `template` under `binders` (constants come from `spec`).
///
/// The result is the cross product over every binder and inline range, in
/// template order, with the last index varying fastest.
pub fn expand_label(
    template: &LabelTemplate,
    binders: &impl Env,
    spec: &SpecAst,
) -> Result<Vec<Expansion>, ExpandError> {
    let text = || template.to_string();
    let env = Scoped {
        binders,
        consts: &spec.values,
    };
    let mut partials = vec![Partial {
        parts: Vec::new(),
        bindings: Vec::new(),
    }];

    for part in &template.parts {
        for p in &mut partials {
            p.parts.push(LabelPart::new(part.name.clone(), Vec::new()));
        }
        for index in &part.indices {
            let mut next = Vec::with_capacity(partials.len());
            for p in partials {
                let scope = Layered {
                    local: &p.bindings,
                    outer: &env,
                };
                let eval = |e: &Expr| {
                    eval_int(e, &scope).map_err(|source| ExpandError::Eval {
                        label: text(),
                        source,
                    })
                };
                let span = |lo: &Expr, hi: &Expr| -> Result<(i64, i64), ExpandError> {
                    let (lo, hi) = (eval(lo)?, eval(hi)?);
                    if lo > hi {
                        return Err(ExpandError::EmptySpan {
                            label: text(),
                            lo,
                            hi,
                        });
                    }
                    Ok((lo, hi))
                };
                match index {
                    IndexTemplate::Expr(Expr::Ident(name))
                        if scope.lookup(name).is_none() =>
                    {
                        named_domain(&p, None, name, spec, &text, &mut next)?;
                    }
                    IndexTemplate::Expr(e) => {
                        let v = eval(e)?;
                        let mut q = p.clone();
                        push_index(&mut q, v);
                        next.push(q);
                    }
                    IndexTemplate::Span(lo, hi) => {
                        let (lo, hi) = span(lo, hi)?;
                        for v in lo..=hi {
                            let mut q = p.clone();
                            push_index(&mut q, v);
                            next.push(q);
                        }
                    }
                    IndexTemplate::Binder(b) => match &b.domain {
                        Domain::Named(name) => {
                            named_domain(&p, Some(&b.name), name, spec, &text, &mut next)?
                        }
                        Domain::Span(lo, hi) => {
                            let (lo, hi) = span(lo, hi)?;
                            for v in lo..=hi {
                                let mut q = p.clone();
                                push_index(&mut q, v);
                                q.bindings.push((b.name.clone(), v));
                                next.push(q);
                            }
                        }
                    },
                }
            }
            partials = next;
        }
    }

    partials
        .into_iter()
        .map(|p| {
            let label = ActionLabel::new(p.parts).map_err(|source| ExpandError::Label {
                label: text(),
                source,
            })?;
            Ok(Expansion {
                label,
                bindings: p.bindings,
            })
        })
        .collect()
}

fn push_index(p: &mut Partial, v: i64) {
    p.parts
        .last_mut()
        .expect("label part pushed before its indices")
        .indices
        .push(v);
}

/// Expands an index over a declared range (binding `binder` when given) or
/// splices in the members of a declared set.
fn named_domain(
    p: &Partial,
    binder: Option<&String>,
    name: &str,
    spec: &SpecAst,
    text: &dyn Fn() -> String,
    out: &mut Vec<Partial>,
) -> Result<(), ExpandError> {
    if let Some((lo, hi)) = spec.range_bounds(name) {
        for v in lo..=hi {
            let mut q = p.clone();
            push_index(&mut q, v);
            if let Some(b) = binder {
                q.bindings.push((b.clone(), v));
            }
            out.push(q);
        }
        return Ok(());
    }
    if let Some(members) = spec.sets.get(name) {
        let none: std::collections::HashMap<String, i64> = Default::default();
        for member in members {
            for e in expand_label(member, &none, spec)? {
                let mut q = p.clone();
                q.parts.extend(e.label.parts().iter().cloned());
                out.push(q);
            }
        }
        return Ok(());
    }
    Err(ExpandError::UnknownDomain {
        label: text(),
        name: name.to_string(),
    })
}

/// Expands every template of a set-like declaration and returns the sorted,
/// deduplicated labels.
pub fn expand_set(
    templates: &[LabelTemplate],
    spec: &SpecAst,
) -> Result<Vec<ActionLabel>, ExpandError> {
    let none: std::collections::HashMap<String, i64> = Default::default();
    let mut out = Vec::new();
    for t in templates {
        out.extend(expand_label(t, &none, spec)?.into_iter().map(|e| e.label));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::collections::HashMap;

    fn spec() -> SpecAst {
        parse(
            "const N = 2
             range R = 0..N
             set S = {x, y[1..2]}
             P = (a -> P).",
        )
        .unwrap()
    }

    fn label_of(src: &str) -> LabelTemplate {
        let unit = crate::syntax::parser::parse_unit(&format!("P = ({src} -> P).")).unwrap();
        match &unit.processes[0].locals[0].body {
            Body::Choice(b) => b[0].label.clone(),
            other => panic!("unexpected body {other:?}"),
        }
    }

    fn texts(src: &str, env: &HashMap<String, i64>) -> Vec<String> {
        expand_label(&label_of(src), env, &spec())
            .unwrap()
            .into_iter()
            .map(|e| e.label.to_string())
            .collect()
    }

    #[test]
    fn binder_and_inline_range_cross_product() {
        let none = HashMap::new();
        assert_eq!(
            texts("a[i:R][0..1]", &none),
            ["a[0][0]", "a[0][1]", "a[1][0]", "a[1][1]", "a[2][0]", "a[2][1]"]
        );
    }

    #[test]
    fn later_index_sees_earlier_binder() {
        let none = HashMap::new();
        assert_eq!(texts("a[i:0..2][i*2]", &none), ["a[0][0]", "a[1][2]", "a[2][4]"]);
    }

    #[test]
    fn set_binder_splices_members() {
        let none = HashMap::new();
        assert_eq!(texts("ch[s:S]", &none), ["ch.x", "ch.y[1]", "ch.y[2]"]);
    }

    #[test]
    fn outer_binders_are_visible() {
        let env: HashMap<String, i64> = [("q".to_string(), 5)].into();
        assert_eq!(texts("get[q+1]", &env), ["get[6]"]);
    }

    #[test]
    fn bare_range_name_enumerates() {
        let none = HashMap::new();
        assert_eq!(texts("b[R]", &none), ["b[0]", "b[1]", "b[2]"]);
    }

    proptest::proptest! {
        #[test]
        fn cardinality_is_product_of_domain_sizes(
            sizes in proptest::collection::vec(1i64..5, 1..4),
            with_set in proptest::bool::ANY,
        ) {
            let mut src = String::from("set S = {x, y, z}\n");
            let mut template = String::from("a");
            for (i, n) in sizes.iter().enumerate() {
                src.push_str(&format!("range R{i} = 0..{}\n", n - 1));
                template.push_str(&format!("[v{i}:R{i}]"));
            }
            if with_set {
                template.push_str("[s:S]");
            }
            src.push_str("P = (b -> P).");
            let spec = parse(&src).unwrap();
            let expected: i64 = sizes.iter().product::<i64>() * if with_set { 3 } else { 1 };
            let got = expand_label(&label_of(&template), &HashMap::new(), &spec).unwrap();
            proptest::prop_assert_eq!(got.len() as i64, expected);
            let mut distinct: Vec<_> = got.iter().map(|e| e.label.clone()).collect();
            distinct.sort();
            distinct.dedup();
            proptest::prop_assert_eq!(distinct.len(), got.len());
        }
    }
}
