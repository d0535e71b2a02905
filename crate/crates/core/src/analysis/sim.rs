use std::collections::VecDeque;

use super::AnalysisError;
use crate::label::ActionLabel;
use crate::lts::{LabelId, Lts, StateId};

/// Labels enabled in `state`, in canonical order and without repetition.
pub fn enabled(lts: &Lts, state: StateId) -> Vec<&ActionLabel> {
    let mut out: Vec<&ActionLabel> = Vec::new();
    for &(l, _) in lts.successors(state) {
        let label = lts.label(l);
        if out.last() != Some(&label) {
            out.push(label);
        }
    }
    out
}

/// Every target reachable from `state` by one `label` transition.
pub fn step(lts: &Lts, state: StateId, label: &ActionLabel) -> Vec<StateId> {
    let Some(id) = lts.label_id(label) else {
        return Vec::new();
    };
    lts.successors(state)
        .iter()
        .filter(|(l, _)| *l == id)
        .map(|&(_, t)| t)
        .collect()
}

/// Interactive walk through an LTS with undo.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    lts: &'a Lts,
    states: Vec<StateId>,
    labels: Vec<LabelId>,
}

impl<'a> Simulator<'a> {
    pub fn new(lts: &'a Lts) -> Self {
        Simulator {
            lts,
            states: vec![lts.initial()],
            labels: Vec::new(),
        }
    }

    pub fn lts(&self) -> &'a Lts {
        self.lts
    }

    pub fn current(&self) -> StateId {
        *self.states.last().expect("simulator path is never empty")
    }

    /// Outgoing transitions of the current state as (label, target); a
    /// nondeterministic label appears once per target.
    pub fn options(&self) -> &'a [(LabelId, StateId)] {
        self.lts.successors(self.current())
    }

    /// Takes the `index`-th entry of [`Simulator::options`].
    pub fn choose(&mut self, index: usize) -> Option<StateId> {
        let &(l, t) = self.options().get(index)?;
        self.states.push(t);
        self.labels.push(l);
        Some(t)
    }

    /// Takes the first transition labelled `label`.
    pub fn fire(&mut self, label: &ActionLabel) -> Result<StateId, AnalysisError> {
        let id = self.lts.label_id(label);
        let index = self
            .options()
            .iter()
            .position(|(l, _)| Some(*l) == id)
            .ok_or_else(|| AnalysisError::NotEnabled {
                label: label.to_string(),
                state: self.lts.state_name(self.current()),
            })?;
        Ok(self.choose(index).expect("index comes from options"))
    }

    /// Undoes the last step; returns false at the initial state.
    pub fn back(&mut self) -> bool {
        if self.labels.is_empty() {
            return false;
        }
        self.states.pop();
        self.labels.pop();
        true
    }

    pub fn trace(&self) -> Vec<&'a ActionLabel> {
        self.labels.iter().map(|&l| self.lts.label(l)).collect()
    }

    pub fn path(&self) -> &[StateId] {
        &self.states
    }

    pub fn is_error(&self) -> bool {
        self.lts.is_error(self.current())
    }

    /// Restarts from the initial state and follows `trace`, resolving
    /// nondeterminism so that every label can be taken. Among the possible
    /// end states ERROR is preferred, so a counterexample replays to the violation.
    pub fn replay(&mut self, trace: &[ActionLabel]) -> Result<StateId, AnalysisError> {
        let ids: Vec<LabelId> = trace
            .iter()
            .enumerate()
            .map(|(i, l)| {
                self.lts.label_id(l).ok_or_else(|| AnalysisError::Replay {
                    step: i,
                    label: l.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;

        // Breadth-first over (position, state) keeping one parent per node.
        let n = self.lts.num_states();
        let mut parent: Vec<Vec<Option<StateId>>> = vec![vec![None; n]; ids.len() + 1];
        let mut frontier = vec![self.lts.initial()];
        let mut seen = vec![false; n];
        for (i, &id) in ids.iter().enumerate() {
            seen.iter_mut().for_each(|b| *b = false);
            let mut next = Vec::new();
            for &s in &frontier {
                for &(l, t) in self.lts.successors(s) {
                    if l == id && !seen[t as usize] {
                        seen[t as usize] = true;
                        parent[i + 1][t as usize] = Some(s);
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                return Err(AnalysisError::Replay {
                    step: i,
                    label: trace[i].to_string(),
                });
            }
            frontier = next;
        }

        let end = frontier
            .iter()
            .copied()
            .find(|&s| self.lts.is_error(s))
            .unwrap_or(frontier[0]);
        let mut states = VecDeque::from([end]);
        for i in (1..=ids.len()).rev() {
            let s = parent[i][states[0] as usize].expect("frontier nodes have parents");
            states.push_front(s);
        }
        self.states = states.into();
        self.labels = ids;
        Ok(self.current())
    }
}
