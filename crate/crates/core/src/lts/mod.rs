//! Explicit labelled transition systems.

mod compile;
mod compose;
mod property;
mod text;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::label::{ActionLabel, LabelError};
use crate::syntax::{EvalError, ExpandError};

pub use compile::{build_target, compile, compile_with_args, CompileOptions, DEFAULT_MAX_STATES};
pub use compose::{compose, compose_with_limit};
pub use property::as_property;

pub type StateId = u32;
pub type LabelId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error("`{0}` is not a declared process or composite")]
    UnknownTarget(String),
    #[error("in process `{process}`: {source}")]
    Eval {
        process: String,
        source: EvalError,
    },
    #[error("in process `{process}`: {source}")]
    Expand {
        process: String,
        source: ExpandError,
    },
    #[error("in process `{process}`: `{local}` index `{param}` = {value} is outside {lo}..{hi}")]
    OutOfRange {
        process: String,
        local: String,
        param: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("in process `{process}`: unguarded recursion through `{local}`")]
    UnguardedRecursion { process: String, local: String },
    #[error("state limit of {limit} exceeded while building `{target}`")]
    StateLimit { target: String, limit: usize },
    #[error("property `{process}` is nondeterministic: state {state} has several `{label}` transitions")]
    NondeterministicProperty {
        process: String,
        state: String,
        label: String,
    },
    #[error("composition of zero processes")]
    EmptyComposition,
    #[error("malformed transition system: {0}")]
    Malformed(String),
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// How state identities are rendered for people.
#[derive(Debug, Clone)]
pub(crate) enum Naming {
    Anonymous,
    Listed(Arc<[String]>),
    Product {
        parts: Arc<[Naming]>,
        /// Row-major component states; `u32::MAX` rows mark the error state.
        tuples: Arc<[u32]>,
    },
}

impl Naming {
    fn name(&self, s: StateId) -> String {
        match self {
            Naming::Anonymous => s.to_string(),
            Naming::Listed(names) => names[s as usize].clone(),
            Naming::Product { parts, tuples } => {
                let width = parts.len();
                let row = &tuples[s as usize * width..(s as usize + 1) * width];
                if row[0] == u32::MAX {
                    return "ERROR".to_string();
                }
                let inner: Vec<String> = parts
                    .iter()
                    .zip(row)
                    .map(|(naming, &c)| naming.name(c))
                    .collect();
                format!("({})", inner.join(", "))
            }
        }
    }

    /// Naming after renumbering, where `order[new] = old`.
    fn permute(&self, order: &[StateId]) -> Naming {
        match self {
            Naming::Anonymous => Naming::Anonymous,
            Naming::Listed(names) => {
                Naming::Listed(order.iter().map(|&o| names[o as usize].clone()).collect())
            }
            Naming::Product { parts, tuples } => {
                let width = parts.len();
                let mut out = Vec::with_capacity(order.len() * width);
                for &o in order {
                    out.extend_from_slice(&tuples[o as usize * width..(o as usize + 1) * width]);
                }
                Naming::Product {
                    parts: parts.clone(),
                    tuples: out.into(),
                }
            }
        }
    }
}

/// An immutable labelled transition system.
///
/// Labels are stored once in a sorted alphabet and referenced by index, so
/// iterating a state's successors visits labels in canonical text order.
#[derive(Debug, Clone)]
pub struct Lts {
    alphabet: Arc<[ActionLabel]>,
    initial: StateId,
    transitions: Vec<Vec<(LabelId, StateId)>>,
    error: Option<StateId>,
    naming: Naming,
}

impl PartialEq for Lts {
    /// Structural equality; state names are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.initial == other.initial
            && self.transitions == other.transitions
            && self.error == other.error
    }
}

impl Eq for Lts {}

impl Lts {
    /// Builds a system from raw parts, sorting the alphabet and each state's
    /// successor list.
    pub fn from_parts(
        alphabet: Vec<ActionLabel>,
        initial: StateId,
        transitions: Vec<Vec<(LabelId, StateId)>>,
        error: Option<StateId>,
    ) -> Result<Lts, LtsError> {
        let n = transitions.len();
        if n == 0 {
            return Err(LtsError::Malformed("no states".into()));
        }
        if initial as usize >= n {
            return Err(LtsError::Malformed(format!("initial state {initial} out of range")));
        }
        let mut order: Vec<usize> = (0..alphabet.len()).collect();
        order.sort_by(|&a, &b| alphabet[a].cmp(&alphabet[b]));
        let mut remap = vec![0u32; alphabet.len()];
        let mut sorted: Vec<ActionLabel> = Vec::with_capacity(alphabet.len());
        for &old in &order {
            if sorted.last() != Some(&alphabet[old]) {
                sorted.push(alphabet[old].clone());
            }
            remap[old] = (sorted.len() - 1) as u32;
        }
        let mut rows = transitions;
        for (s, row) in rows.iter_mut().enumerate() {
            for (l, t) in row.iter_mut() {
                if *l as usize >= remap.len() {
                    return Err(LtsError::Malformed(format!("state {s}: label index {l} out of range")));
                }
                if *t as usize >= n {
                    return Err(LtsError::Malformed(format!("state {s}: target {t} out of range")));
                }
                *l = remap[*l as usize];
            }
            row.sort_unstable();
            row.dedup();
        }
        if let Some(e) = error {
            if e as usize >= n {
                return Err(LtsError::Malformed(format!("error state {e} out of range")));
            }
            if !rows[e as usize].is_empty() {
                return Err(LtsError::Malformed("error state has outgoing transitions".into()));
            }
        }
        Ok(Lts {
            alphabet: sorted.into(),
            initial,
            transitions: rows,
            error,
            naming: Naming::Anonymous,
        })
    }

    /// Attaches one display name per state.
    pub fn with_names(mut self, names: Vec<String>) -> Lts {
        assert_eq!(names.len(), self.num_states(), "one name per state");
        self.naming = Naming::Listed(names.into());
        self
    }

    pub(crate) fn with_naming(mut self, naming: Naming) -> Lts {
        self.naming = naming;
        self
    }

    pub fn alphabet(&self) -> &[ActionLabel] {
        &self.alphabet
    }

    pub fn label(&self, id: LabelId) -> &ActionLabel {
        &self.alphabet[id as usize]
    }

    pub fn label_id(&self, label: &ActionLabel) -> Option<LabelId> {
        self.alphabet.binary_search(label).ok().map(|i| i as LabelId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn error(&self) -> Option<StateId> {
        self.error
    }

    pub fn is_error(&self, s: StateId) -> bool {
        self.error == Some(s)
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Outgoing transitions, sorted by label then target.
    pub fn successors(&self, s: StateId) -> &[(LabelId, StateId)] {
        &self.transitions[s as usize]
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.num_states() as StateId
    }

    /// All transitions as `(from, label, to)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, LabelId, StateId)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |&(l, t)| (s as StateId, l, t)))
    }

    pub fn state_name(&self, s: StateId) -> String {
        if self.is_error(s) {
            return "ERROR".into();
        }
        self.naming.name(s)
    }

    /// True when no state has two transitions with the same label.
    pub fn is_deterministic(&self) -> bool {
        self.transitions
            .iter()
            .all(|row| row.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Restriction to states reachable from the initial state, keeping their
    /// relative order.
    pub fn reachable(&self) -> Lts {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut stack = vec![self.initial];
        seen[self.initial as usize] = true;
        while let Some(s) = stack.pop() {
            for &(_, t) in self.successors(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        let order: Vec<StateId> = (0..n as StateId).filter(|&s| seen[s as usize]).collect();
        self.renumber(&order)
    }

    /// Renumbers states in breadth-first order from the initial state,
    /// exploring successors in canonical label order. Unreachable states are
    /// dropped.
    pub fn canonicalize(&self) -> Lts {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        seen[self.initial as usize] = true;
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(_, t) in self.successors(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        self.renumber(&order)
    }

    /// Keeps exactly the states in `order` (`order[new] = old`).
    fn renumber(&self, order: &[StateId]) -> Lts {
        let mut new_id = vec![u32::MAX; self.num_states()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old as usize] = new as StateId;
        }
        let transitions = order
            .iter()
            .map(|&old| {
                let mut row: Vec<(LabelId, StateId)> = self
                    .successors(old)
                    .iter()
                    .map(|&(l, t)| (l, new_id[t as usize]))
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Lts {
            alphabet: self.alphabet.clone(),
            initial: new_id[self.initial as usize],
            transitions,
            error: self
                .error
                .map(|e| new_id[e as usize])
                .filter(|&e| e != u32::MAX),
            naming: self.naming.permute(order),
        }
    }

    /// Labels that occur on at least one transition.
    pub fn used_labels(&self) -> Vec<&ActionLabel> {
        let mut used = vec![false; self.alphabet.len()];
        for row in &self.transitions {
            for &(l, _) in row {
                used[l as usize] = true;
            }
        }
        self.alphabet
            .iter()
            .zip(used)
            .filter_map(|(a, u)| u.then_some(a))
            .collect()
    }
}

/// Incremental construction with string labels; mostly for tests and tools.
#[derive(Debug, Default)]
pub struct LtsBuilder {
    labels: Vec<ActionLabel>,
    label_ids: HashMap<ActionLabel, LabelId>,
    transitions: Vec<Vec<(LabelId, StateId)>>,
    names: Vec<String>,
    initial: StateId,
    error: Option<StateId>,
}

impl LtsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.transitions.push(Vec::new());
        self.names.push(name.into());
        (self.transitions.len() - 1) as StateId
    }

    /// Adds `n` states named by their index and returns the first id.
    pub fn add_states(&mut self, n: usize) -> StateId {
        let first = self.transitions.len() as StateId;
        for i in 0..n {
            self.add_state((first as usize + i).to_string());
        }
        first
    }

    pub fn set_initial(&mut self, s: StateId) -> &mut Self {
        self.initial = s;
        self
    }

    pub fn set_error(&mut self, s: StateId) -> &mut Self {
        self.error = Some(s);
        self
    }

    pub fn add_label(&mut self, label: &str) -> Result<LabelId, LtsError> {
        let label: ActionLabel = label.parse()?;
        Ok(self.intern(label))
    }

    fn intern(&mut self, label: ActionLabel) -> LabelId {
        if let Some(&id) = self.label_ids.get(&label) {
            return id;
        }
        let id = self.labels.len() as LabelId;
        self.labels.push(label.clone());
        self.label_ids.insert(label, id);
        id
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        label: &str,
        to: StateId,
    ) -> Result<&mut Self, LtsError> {
        let id = self.add_label(label)?;
        let row = self
            .transitions
            .get_mut(from as usize)
            .ok_or_else(|| LtsError::Malformed(format!("unknown state {from}")))?;
        row.push((id, to));
        Ok(self)
    }

    pub fn build(self) -> Result<Lts, LtsError> {
        let names = self.names;
        Ok(Lts::from_parts(self.labels, self.initial, self.transitions, self.error)?
            .with_names(names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_lts() -> impl Strategy<Value = Lts> {
        (1usize..10, 1usize..4).prop_flat_map(|(n, k)| {
            let edges = prop::collection::vec((0..n as u32, 0..k as u32, 0..n as u32), 0..n * 3);
            (Just(n), Just(k), edges, 0..n as u32)
        })
        .prop_map(|(n, k, edges, initial)| {
            let alphabet = (0..k).map(|i| format!("a{i}").parse().unwrap()).collect();
            let mut rows = vec![Vec::new(); n];
            for (f, l, t) in edges {
                rows[f as usize].push((l, t));
            }
            Lts::from_parts(alphabet, initial, rows, None).unwrap()
        })
    }

    fn edge_set(l: &Lts) -> std::collections::BTreeSet<(String, String, String)> {
        l.transitions()
            .map(|(f, a, t)| (l.state_name(f), l.label(a).to_string(), l.state_name(t)))
            .collect()
    }

    proptest! {
        #[test]
        fn reachable_is_a_subset_and_idempotent(l in arb_lts()) {
            let names = (0..l.num_states()).map(|i| i.to_string()).collect();
            let l = l.with_names(names);
            let r = l.reachable();
            prop_assert!(edge_set(&r).is_subset(&edge_set(&l)));
            prop_assert_eq!(r.state_name(r.initial()), l.state_name(l.initial()));
            prop_assert_eq!(&r.reachable(), &r);
        }

        #[test]
        fn canonical_form_is_stable(l in arb_lts()) {
            let c = l.canonicalize();
            prop_assert_eq!(&c.canonicalize(), &c);
            prop_assert_eq!(c.initial(), 0);
            prop_assert_eq!(c.num_states(), l.reachable().num_states());
        }
    }

    #[test]
    fn island_is_removed() {
        let mut b = LtsBuilder::new();
        let s = b.add_states(5);
        b.add_transition(s, "a", s + 1).unwrap();
        b.add_transition(s + 2, "b", s + 3).unwrap();
        b.add_transition(s + 3, "b", s + 4).unwrap();
        let l = b.build().unwrap();
        let r = l.reachable();
        assert_eq!(r.num_states(), 2);
        assert_eq!(r.num_transitions(), 1);
        assert_eq!(r.alphabet().len(), 2);
    }

    #[test]
    fn rejects_error_with_successors() {
        let mut b = LtsBuilder::new();
        let s = b.add_states(1);
        b.add_transition(s, "a", s).unwrap();
        b.set_error(s);
        assert!(b.build().is_err());
    }
}
