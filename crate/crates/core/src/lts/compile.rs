//! Compilation of primitive process declarations to explicit systems.
//!
//! A state is a choice node of the declaration together with the values of
//! the binders it actually reads; `STOP` is one shared state. References and
//! conditionals are resolved eagerly, so they never become states of their
//! own.

use std::collections::{HashMap, VecDeque};

use super::{compose_with_limit, property::as_property, LabelId, Lts, LtsError, Naming, StateId};
use crate::label::ActionLabel;
use crate::syntax::{
    eval_bool, eval_int, expand_label, expand_set, Binder, Body, Domain, Env, Expr, IndexTemplate,
    ProcessDecl, Scoped, SpecAst,
};

pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub max_states: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// Compiles the primitive process (or property, without completion) `name`,
/// starting from its first local definition with every index at the lower
/// bound of its range.
pub fn compile(spec: &SpecAst, name: &str, opts: CompileOptions) -> Result<Lts, LtsError> {
    compile_with_args(spec, name, None, opts)
}

/// As [`compile`], with explicit start indices for the first local definition.
pub fn compile_with_args(
    spec: &SpecAst,
    name: &str,
    args: Option<&[i64]>,
    opts: CompileOptions,
) -> Result<Lts, LtsError> {
    let process = spec
        .process(name)
        .ok_or_else(|| LtsError::UnknownTarget(name.to_string()))?;
    Compiler::new(spec, process, opts).run(args)
}

/// Builds the analysable system for a top-level name: a composite is
/// flattened and composed, a property is completed into a monitor, and a
/// plain process is compiled as is.
pub fn build_target(spec: &SpecAst, name: &str, opts: CompileOptions) -> Result<Lts, LtsError> {
    if spec.process(name).is_some() {
        return component(spec, name, None, opts);
    }
    if !spec.composites.contains_key(name) {
        return Err(LtsError::UnknownTarget(name.to_string()));
    }
    let mut parts = Vec::new();
    flatten(spec, name, opts, &mut parts)?;
    compose_with_limit(&parts, opts.max_states, name)
}

fn component(
    spec: &SpecAst,
    name: &str,
    args: Option<&[i64]>,
    opts: CompileOptions,
) -> Result<Lts, LtsError> {
    let lts = compile_with_args(spec, name, args, opts)?;
    match spec.process(name) {
        Some(p) if p.is_property => as_property(&lts, name),
        _ => Ok(lts),
    }
}

fn flatten(
    spec: &SpecAst,
    name: &str,
    opts: CompileOptions,
    out: &mut Vec<Lts>,
) -> Result<(), LtsError> {
    for part in &spec.composites[name] {
        if spec.composites.contains_key(&part.name) {
            flatten(spec, &part.name, opts, out)?;
            continue;
        }
        let args = part
            .args
            .iter()
            .map(|a| eval_int(a, spec.const_values()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| LtsError::Eval {
                process: part.name.clone(),
                source,
            })?;
        let args = (!args.is_empty()).then_some(args.as_slice());
        out.push(component(spec, &part.name, args, opts)?);
    }
    Ok(())
}

/// Binder values in scope; later entries shadow earlier ones.
#[derive(Debug, Clone, Default)]
struct Bindings(Vec<(String, i64)>);

impl Env for Bindings {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.0
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

struct NodeInfo<'a> {
    local: usize,
    ordinal: usize,
    body: &'a Body,
    free: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Stop,
    Node(usize, Box<[i64]>),
}

struct Compiler<'a> {
    spec: &'a SpecAst,
    process: &'a ProcessDecl,
    opts: CompileOptions,
    nodes: Vec<NodeInfo<'a>>,
    node_of: HashMap<*const Body, usize>,
}

impl<'a> Compiler<'a> {
    fn new(spec: &'a SpecAst, process: &'a ProcessDecl, opts: CompileOptions) -> Self {
        let mut c = Compiler {
            spec,
            process,
            opts,
            nodes: Vec::new(),
            node_of: HashMap::new(),
        };
        for (i, local) in process.locals.iter().enumerate() {
            let mut scope: Vec<String> = local.params.iter().map(|b| b.name.clone()).collect();
            let mut ordinal = 0;
            c.index(&local.body, i, &mut scope, &mut ordinal);
        }
        c
    }

    fn int_binder(&self, b: &Binder) -> bool {
        match &b.domain {
            Domain::Named(name) => self.spec.ranges.contains_key(name),
            Domain::Span(..) => true,
        }
    }

    /// Records every choice node with the binders it reads from its scope.
    fn index(&mut self, body: &'a Body, local: usize, scope: &mut Vec<String>, ordinal: &mut usize) {
        match body {
            Body::Stop | Body::Ref(_) => {}
            Body::If {
                then, otherwise, ..
            } => {
                self.index(then, local, scope, ordinal);
                if let Some(o) = otherwise {
                    self.index(o, local, scope, ordinal);
                }
            }
            Body::Choice(branches) => {
                let mut used = Vec::new();
                self.reads(body, &mut Vec::new(), &mut used);
                let mut free: Vec<String> = Vec::new();
                for name in scope.iter().rev() {
                    if used.contains(name) && !free.contains(name) {
                        free.push(name.clone());
                    }
                }
                free.reverse();
                self.node_of.insert(body as *const Body, self.nodes.len());
                self.nodes.push(NodeInfo {
                    local,
                    ordinal: *ordinal,
                    body,
                    free,
                });
                *ordinal += 1;
                for branch in branches {
                    let mark = scope.len();
                    for part in &branch.label.parts {
                        for index in &part.indices {
                            if let IndexTemplate::Binder(b) = index {
                                if self.int_binder(b) {
                                    scope.push(b.name.clone());
                                }
                            }
                        }
                    }
                    self.index(&branch.next, local, scope, ordinal);
                    scope.truncate(mark);
                }
            }
        }
    }

    /// Names read by `body` that are not bound inside it.
    fn reads(&self, body: &Body, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let expr = |e: &Expr, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut ids = Vec::new();
            e.idents(&mut ids);
            for id in ids {
                if !bound.iter().any(|b| b == id) && !out.iter().any(|o| o == id) {
                    out.push(id.to_string());
                }
            }
        };
        match body {
            Body::Stop => {}
            Body::Ref(r) => {
                for a in &r.args {
                    expr(a, bound, out);
                }
            }
            Body::If {
                cond,
                then,
                otherwise,
            } => {
                expr(cond, bound, out);
                self.reads(then, bound, out);
                if let Some(o) = otherwise {
                    self.reads(o, bound, out);
                }
            }
            Body::Choice(branches) => {
                for branch in branches {
                    let mark = bound.len();
                    for part in &branch.label.parts {
                        for index in &part.indices {
                            match index {
                                IndexTemplate::Expr(e) => expr(e, bound, out),
                                IndexTemplate::Span(lo, hi) => {
                                    expr(lo, bound, out);
                                    expr(hi, bound, out);
                                }
                                IndexTemplate::Binder(b) => {
                                    if let Domain::Span(lo, hi) = &b.domain {
                                        expr(lo, bound, out);
                                        expr(hi, bound, out);
                                    }
                                    if self.int_binder(b) {
                                        bound.push(b.name.clone());
                                    }
                                }
                            }
                        }
                    }
                    if let Some(g) = &branch.guard {
                        expr(g, bound, out);
                    }
                    self.reads(&branch.next, bound, out);
                    bound.truncate(mark);
                }
            }
        }
    }

    fn eval_err(&self, source: crate::syntax::EvalError) -> LtsError {
        LtsError::Eval {
            process: self.process.name.clone(),
            source,
        }
    }

    /// Values for a local's parameters, checked against their ranges.
    fn enter_local(&self, local: usize, args: &[i64]) -> Result<Bindings, LtsError> {
        let def = &self.process.locals[local];
        let mut env = Bindings::default();
        for (param, &value) in def.params.iter().zip(args) {
            let (lo, hi) = self.domain_bounds(&param.domain, &env)?;
            if value < lo || value > hi {
                return Err(LtsError::OutOfRange {
                    process: self.process.name.clone(),
                    local: def.name.clone(),
                    param: param.name.clone(),
                    value,
                    lo,
                    hi,
                });
            }
            env.0.push((param.name.clone(), value));
        }
        Ok(env)
    }

    fn domain_bounds(&self, domain: &Domain, env: &Bindings) -> Result<(i64, i64), LtsError> {
        match domain {
            Domain::Named(name) => self.spec.range_bounds(name).ok_or_else(|| LtsError::Eval {
                process: self.process.name.clone(),
                source: crate::syntax::EvalError::Unbound(name.clone()),
            }),
            Domain::Span(lo, hi) => {
                let scope = Scoped {
                    binders: env,
                    consts: self.spec.const_values(),
                };
                let lo = eval_int(lo, &scope).map_err(|e| self.eval_err(e))?;
                let hi = eval_int(hi, &scope).map_err(|e| self.eval_err(e))?;
                Ok((lo, hi))
            }
        }
    }

    /// Follows references and conditionals until a choice node or STOP.
    fn resolve(&self, body: &'a Body, env: &Bindings) -> Result<Key, LtsError> {
        let mut body = body;
        let mut env = env.clone();
        let mut visited: Vec<(usize, Vec<i64>)> = Vec::new();
        loop {
            match body {
                Body::Stop => return Ok(Key::Stop),
                Body::Choice(_) => {
                    let id = self.node_of[&(body as *const Body)];
                    let values = self.nodes[id]
                        .free
                        .iter()
                        .map(|n| env.lookup(n).expect("free binder is in scope"))
                        .collect();
                    return Ok(Key::Node(id, values));
                }
                Body::If {
                    cond,
                    then,
                    otherwise,
                } => {
                    let scope = Scoped {
                        binders: &env,
                        consts: self.spec.const_values(),
                    };
                    let taken = eval_bool(cond, &scope).map_err(|e| self.eval_err(e))?;
                    body = match (taken, otherwise) {
                        (true, _) => then,
                        (false, Some(o)) => o,
                        (false, None) => return Ok(Key::Stop),
                    };
                }
                Body::Ref(r) => {
                    let scope = Scoped {
                        binders: &env,
                        consts: self.spec.const_values(),
                    };
                    let args = r
                        .args
                        .iter()
                        .map(|a| eval_int(a, &scope))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| self.eval_err(e))?;
                    let (local, def) = self
                        .process
                        .local(&r.name, args.len())
                        .expect("references are resolved at parse time");
                    let entry = (local, args);
                    if visited.contains(&entry) {
                        return Err(LtsError::UnguardedRecursion {
                            process: self.process.name.clone(),
                            local: def.name.clone(),
                        });
                    }
                    env = self.enter_local(local, &entry.1)?;
                    visited.push(entry);
                    body = &def.body;
                }
            }
        }
    }

    fn state_name(&self, key: &Key) -> String {
        match key {
            Key::Stop => "STOP".to_string(),
            Key::Node(id, values) => {
                let node = &self.nodes[*id];
                let local = &self.process.locals[node.local];
                if node.ordinal == 0 {
                    let mut s = local.name.clone();
                    for v in values.iter() {
                        s.push_str(&format!("[{v}]"));
                    }
                    s
                } else {
                    let vars: Vec<String> = node
                        .free
                        .iter()
                        .zip(values.iter())
                        .map(|(n, v)| format!("{n}={v}"))
                        .collect();
                    format!("{}.{}{{{}}}", local.name, node.ordinal, vars.join(","))
                }
            }
        }
    }

    fn run(&self, args: Option<&[i64]>) -> Result<Lts, LtsError> {
        let (start, start_args) = match args {
            Some(a) => {
                let (i, _) = self
                    .process
                    .local(&self.process.name, a.len())
                    .ok_or_else(|| LtsError::UnknownTarget(format!("{}/{}", self.process.name, a.len())))?;
                (i, a.to_vec())
            }
            None => {
                let mut env = Bindings::default();
                let mut values = Vec::new();
                for param in &self.process.locals[0].params {
                    let (lo, _) = self.domain_bounds(&param.domain, &env)?;
                    env.0.push((param.name.clone(), lo));
                    values.push(lo);
                }
                (0, values)
            }
        };
        let env = self.enter_local(start, &start_args)?;
        let initial_key = self.resolve(&self.process.locals[start].body, &env)?;

        let mut labels: Vec<ActionLabel> = Vec::new();
        let mut label_ids: HashMap<ActionLabel, LabelId> = HashMap::new();
        let mut intern_label = |label: ActionLabel| -> LabelId {
            if let Some(&id) = label_ids.get(&label) {
                return id;
            }
            let id = labels.len() as LabelId;
            labels.push(label.clone());
            label_ids.insert(label, id);
            id
        };

        let mut keys: Vec<Key> = vec![initial_key.clone()];
        let mut index: HashMap<Key, StateId> = HashMap::from([(initial_key, 0)]);
        let mut rows: Vec<Vec<(LabelId, StateId)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0 as StateId]);

        while let Some(s) = queue.pop_front() {
            let Key::Node(id, values) = keys[s as usize].clone() else {
                continue;
            };
            let node = &self.nodes[id];
            let Body::Choice(branches) = node.body else {
                unreachable!("nodes are choices");
            };
            let env = Bindings(node.free.iter().cloned().zip(values.iter().copied()).collect());
            let mut row = Vec::new();
            for branch in branches {
                let expansions =
                    expand_label(&branch.label, &env, self.spec).map_err(|source| {
                        LtsError::Expand {
                            process: self.process.name.clone(),
                            source,
                        }
                    })?;
                for e in expansions {
                    let label = intern_label(e.label);
                    let mut inner = env.clone();
                    inner.0.extend(e.bindings);
                    if let Some(g) = &branch.guard {
                        let scope = Scoped {
                            binders: &inner,
                            consts: self.spec.const_values(),
                        };
                        if !eval_bool(g, &scope).map_err(|e| self.eval_err(e))? {
                            continue;
                        }
                    }
                    let target = self.resolve(&branch.next, &inner)?;
                    let t = match index.get(&target) {
                        Some(&t) => t,
                        None => {
                            if keys.len() >= self.opts.max_states {
                                return Err(LtsError::StateLimit {
                                    target: self.process.name.clone(),
                                    limit: self.opts.max_states,
                                });
                            }
                            let t = keys.len() as StateId;
                            keys.push(target.clone());
                            index.insert(target, t);
                            rows.push(Vec::new());
                            queue.push_back(t);
                            t
                        }
                    };
                    row.push((label, t));
                }
            }
            rows[s as usize] = row;
        }

        let extension = expand_set(&self.process.alphabet_extension, self.spec).map_err(
            |source| LtsError::Expand {
                process: self.process.name.clone(),
                source,
            },
        )?;
        for label in extension {
            intern_label(label);
        }

        let names: Vec<String> = keys.iter().map(|k| self.state_name(k)).collect();
        let lts = Lts::from_parts(labels, 0, rows, None)?.with_naming(Naming::Listed(names.into()));
        Ok(lts.canonicalize())
    }
}
