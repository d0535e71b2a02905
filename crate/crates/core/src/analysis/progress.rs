use std::collections::HashSet;
use std::time::Instant;

use super::safety::{labels, shortest_path};
use super::scc::terminal_sccs;
use super::{AnalysisError, AnalysisReport, CheckKind, Stats, Verdict};
use crate::label::ActionLabel;
use crate::lts::{LabelId, Lts, StateId};
use crate::syntax::{expand_set, ExpandError, SpecAst};

/// A named set of labels of which at least one must occur infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressSet {
    pub name: String,
    pub labels: Vec<ActionLabel>,
}

impl ProgressSet {
    pub fn new(name: impl Into<String>, labels: impl IntoIterator<Item = ActionLabel>) -> Self {
        let mut labels: Vec<ActionLabel> = labels.into_iter().collect();
        labels.sort();
        labels.dedup();
        ProgressSet {
            name: name.into(),
            labels,
        }
    }
}

/// Expands every `progress` declaration of `spec`.
pub fn progress_sets(spec: &SpecAst) -> Result<Vec<ProgressSet>, ExpandError> {
    spec.progress
        .iter()
        .map(|(name, templates)| Ok(ProgressSet::new(name.clone(), expand_set(templates, spec)?)))
        .collect()
}

/// Checks each progress set against the terminal components of `lts`.
///
/// A set is violated when some terminal component reachable from the
/// initial state has no internal transition labelled by a member of the
/// set. When ERROR is reachable every set is reported as not evaluated.
pub fn check_progress(
    lts: &Lts,
    sets: &[ProgressSet],
) -> Result<Vec<AnalysisReport>, AnalysisError> {
    let mut resolved: Vec<HashSet<LabelId>> = Vec::with_capacity(sets.len());
    for set in sets {
        if set.labels.is_empty() {
            return Err(AnalysisError::EmptyProgressSet(set.name.clone()));
        }
        let missing: Vec<String> = set
            .labels
            .iter()
            .filter(|l| lts.label_id(l).is_none())
            .map(ToString::to_string)
            .collect();
        if !missing.is_empty() {
            return Err(AnalysisError::LabelsOutsideAlphabet {
                set: set.name.clone(),
                labels: missing,
            });
        }
        resolved.push(set.labels.iter().filter_map(|l| lts.label_id(l)).collect());
    }

    let start = Instant::now();
    let error_reachable = lts
        .error()
        .is_some_and(|e| shortest_path(lts, |s| s == e).is_some());
    let terminals = if error_reachable {
        Vec::new()
    } else {
        let reachable = reachable_mask(lts);
        terminal_sccs(lts)
            .into_iter()
            .filter(|c| reachable[c.states[0] as usize])
            .collect()
    };

    let mut reports = Vec::with_capacity(sets.len());
    for (set, ids) in sets.iter().zip(&resolved) {
        let mut report = AnalysisReport {
            kind: CheckKind::Progress,
            verdict: Verdict::Holds,
            set: Some(set.name.clone()),
            trace: Vec::new(),
            violated_set: None,
            cycle: None,
            stats: Stats::of(lts, start.elapsed()),
        };
        if error_reachable {
            report.verdict = Verdict::NotEvaluated;
        } else {
            let mut owner = vec![None; lts.num_states()];
            for (i, c) in terminals.iter().enumerate() {
                if c.labels.iter().all(|l| !ids.contains(l)) {
                    for &s in &c.states {
                        owner[s as usize] = Some(i);
                    }
                }
            }
            if let Some((entry, path)) = shortest_path(lts, |s| owner[s as usize].is_some()) {
                let comp = &terminals[owner[entry as usize].expect("entry is owned")];
                report.verdict = Verdict::Violated;
                report.trace = labels(lts, &path);
                report.violated_set = Some(set.name.clone());
                report.cycle = Some(labels(lts, &cycle_through(lts, entry, &comp.states)));
            }
        }
        report.stats = Stats::of(lts, start.elapsed());
        reports.push(report);
    }
    Ok(reports)
}

fn reachable_mask(lts: &Lts) -> Vec<bool> {
    let mut seen = vec![false; lts.num_states()];
    let mut stack = vec![lts.initial()];
    seen[lts.initial() as usize] = true;
    while let Some(s) = stack.pop() {
        for &(_, t) in lts.successors(s) {
            if !seen[t as usize] {
                seen[t as usize] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Shortest cycle from `entry` back to itself inside `members`; empty when
/// the component has no internal transition.
fn cycle_through(lts: &Lts, entry: StateId, members: &[StateId]) -> Vec<LabelId> {
    use std::collections::{HashMap, VecDeque};
    let inside = |s: StateId| members.binary_search(&s).is_ok();
    let mut parent: HashMap<StateId, (StateId, LabelId)> = HashMap::new();
    let mut queue = VecDeque::new();
    for &(l, t) in lts.successors(entry) {
        if t == entry {
            return vec![l];
        }
        if inside(t) && !parent.contains_key(&t) {
            parent.insert(t, (entry, l));
            queue.push_back(t);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &(l, t) in lts.successors(s) {
            if t == entry {
                let mut out = vec![l];
                let mut cur = s;
                while cur != entry {
                    let (p, pl) = parent[&cur];
                    out.push(pl);
                    cur = p;
                }
                out.reverse();
                return out;
            }
            if inside(t) && !parent.contains_key(&t) {
                parent.insert(t, (s, l));
                queue.push_back(t);
            }
        }
    }
    Vec::new()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{build_target, CompileOptions, LtsBuilder};
    use crate::syntax::parse;
    use proptest::prelude::*;

    fn run(src: &str, target: &str) -> Vec<AnalysisReport> {
        let spec = parse(src).unwrap();
        let lts = build_target(&spec, target, CompileOptions::default()).unwrap();
        check_progress(&lts, &progress_sets(&spec).unwrap()).unwrap()
    }

    fn texts(v: &[ActionLabel]) -> Vec<&str> {
        v.iter().map(ActionLabel::as_str).collect()
    }

    #[test]
    fn timer_makes_progress() {
        let r = run("TIMER = (tick -> TIMER). progress TICK = {tick}", "TIMER");
        assert_eq!(r.len(), 1);
        assert!(r[0].holds());
        assert_eq!(r[0].set.as_deref(), Some("TICK"));
    }

    #[test]
    fn livelock_violates_with_trace_and_cycle() {
        let r = run(
            "P = (a -> P | b -> Q), Q = (c -> Q). progress A = {a}",
            "P",
        );
        assert_eq!(r[0].verdict, Verdict::Violated);
        assert_eq!(r[0].violated_set.as_deref(), Some("A"));
        assert_eq!(texts(&r[0].trace), ["b"]);
        assert_eq!(texts(r[0].cycle.as_ref().unwrap()), ["c"]);
    }

    #[test]
    fn reachable_error_suppresses_progress() {
        let r = run(
            "SYS = (a -> SYS | b -> SYS). property SAFE = (a -> SAFE) + {b}.
             ||S = (SYS || SAFE). progress A = {a}",
            "S",
        );
        assert_eq!(r[0].verdict, Verdict::NotEvaluated);
    }

    #[test]
    fn unknown_label_is_a_configuration_error() {
        let spec = parse("TIMER = (tick -> TIMER). progress X = {tock}").unwrap();
        let lts = build_target(&spec, "TIMER", CompileOptions::default()).unwrap();
        let err = check_progress(&lts, &progress_sets(&spec).unwrap()).unwrap_err();
        assert!(matches!(err, AnalysisError::LabelsOutsideAlphabet { .. }));
    }

    #[test]
    fn deadlock_violates_every_set() {
        let r = run("P = (a -> b -> STOP). progress A = {a, b}", "P");
        assert_eq!(r[0].verdict, Verdict::Violated);
        assert_eq!(texts(&r[0].trace), ["a", "b"]);
        assert_eq!(r[0].cycle.as_deref(), Some(&[][..]));
    }

    #[test]
    fn longer_cycle_is_reported_in_order() {
        let r = run(
            "P = (go -> Q), Q = (x -> y -> z -> Q). progress G = {go}",
            "P",
        );
        assert_eq!(texts(r[0].cycle.as_ref().unwrap()), ["x", "y", "z"]);
    }

    fn permuted(l: &Lts, perm: &[u32]) -> Lts {
        let mut b = LtsBuilder::new();
        b.add_states(l.num_states());
        for label in l.alphabet() {
            b.add_label(label.as_str()).unwrap();
        }
        b.set_initial(perm[l.initial() as usize]);
        for s in l.states() {
            for &(lab, t) in l.successors(s) {
                b.add_transition(perm[s as usize], l.label(lab).as_str(), perm[t as usize])
                    .unwrap();
            }
        }
        b.build().unwrap()
    }

    proptest! {
        #[test]
        fn verdicts_ignore_state_numbering(
            n in 1usize..9,
            edges in prop::collection::vec((0u32..9, 0u8..3, 0u32..9), 0..20),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let names = ["a", "b", "c"];
            let mut b = LtsBuilder::new();
            b.add_states(n);
            for name in names {
                b.add_label(name).unwrap();
            }
            for (f, l, t) in edges {
                if (f as usize) < n && (t as usize) < n {
                    b.add_transition(f, names[l as usize], t).unwrap();
                }
            }
            let l = b.build().unwrap();
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            let p = permuted(&l, &perm);
            let sets: Vec<ProgressSet> = names
                .iter()
                .map(|n| ProgressSet::new(*n, [n.parse().unwrap()]))
                .collect();
            let v1: Vec<Verdict> = check_progress(&l, &sets).unwrap().iter().map(|r| r.verdict).collect();
            let v2: Vec<Verdict> = check_progress(&p, &sets).unwrap().iter().map(|r| r.verdict).collect();
            prop_assert_eq!(v1, v2);
            prop_assert_eq!(super::super::check_deadlock(&l).verdict, super::super::check_deadlock(&p).verdict);
        }
    }
}
