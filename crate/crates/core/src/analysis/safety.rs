use std::collections::VecDeque;
use std::time::Instant;

use super::{AnalysisReport, CheckKind, Stats, Verdict};
use crate::label::ActionLabel;
use crate::lts::{LabelId, Lts, StateId};

/// Shortest path from the initial state to a state satisfying `target`.
/// Among the shortest paths the one with the least label sequence (labels
/// compared in canonical order) is returned, so the trace does not depend
/// on how states are numbered. The end state is the lowest-numbered target
/// that sequence can reach.
pub fn shortest_path(
    lts: &Lts,
    target: impl Fn(StateId) -> bool,
) -> Option<(StateId, Vec<LabelId>)> {
    let n = lts.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (f, _, t) in lts.transitions() {
        preds[t as usize].push(f);
    }
    // Distance from every state to the nearest target.
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in lts.states() {
        if target(s) {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &p in &preds[s as usize] {
            if dist[p as usize] == usize::MAX {
                dist[p as usize] = dist[s as usize] + 1;
                queue.push_back(p);
            }
        }
    }
    let mut remaining = dist[lts.initial() as usize];
    if remaining == usize::MAX {
        return None;
    }

    let mut current = vec![lts.initial()];
    let mut path = Vec::with_capacity(remaining);
    let mut on_layer = vec![false; n];
    while remaining > 0 {
        remaining -= 1;
        let label = current
            .iter()
            .flat_map(|&s| lts.successors(s))
            .filter(|&&(_, t)| dist[t as usize] == remaining)
            .map(|&(l, _)| l)
            .min()
            .expect("a state at distance d+1 has a successor at distance d");
        let mut next = Vec::new();
        for &s in &current {
            for &(l, t) in lts.successors(s) {
                if l == label && dist[t as usize] == remaining && !on_layer[t as usize] {
                    on_layer[t as usize] = true;
                    next.push(t);
                }
            }
        }
        for &t in &next {
            on_layer[t as usize] = false;
        }
        path.push(label);
        current = next;
    }
    let end = current
        .into_iter()
        .filter(|&s| target(s))
        .min()
        .expect("distance zero means target");
    Some((end, path))
}

pub(super) fn labels(lts: &Lts, ids: &[LabelId]) -> Vec<ActionLabel> {
    ids.iter().map(|&l| lts.label(l).clone()).collect()
}

/// Violated iff the ERROR state is reachable; the trace is a shortest path to it.
pub fn check_safety(lts: &Lts) -> AnalysisReport {
    let start = Instant::now();
    let found = lts
        .error()
        .and_then(|e| shortest_path(lts, |s| s == e));
    report(lts, CheckKind::Safety, found.map(|(_, p)| labels(lts, &p)), start)
}

/// Violated iff some reachable non-ERROR state has no outgoing transitions.
pub fn check_deadlock(lts: &Lts) -> AnalysisReport {
    let start = Instant::now();
    let found = shortest_path(lts, |s| !lts.is_error(s) && lts.successors(s).is_empty());
    report(lts, CheckKind::Deadlock, found.map(|(_, p)| labels(lts, &p)), start)
}

fn report(lts: &Lts, kind: CheckKind, trace: Option<Vec<ActionLabel>>, start: Instant) -> AnalysisReport {
    let verdict = if trace.is_some() {
        Verdict::Violated
    } else {
        Verdict::Holds
    };
    AnalysisReport {
        kind,
        verdict,
        set: None,
        trace: trace.unwrap_or_default(),
        violated_set: None,
        cycle: None,
        stats: Stats::of(lts, start.elapsed()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{build_target, CompileOptions};
    use crate::syntax::parse;

    fn build(src: &str, target: &str) -> Lts {
        build_target(&parse(src).unwrap(), target, CompileOptions::default()).unwrap()
    }

    fn texts(trace: &[ActionLabel]) -> Vec<&str> {
        trace.iter().map(ActionLabel::as_str).collect()
    }

    #[test]
    fn monitor_catches_forbidden_label() {
        let l = build(
            "SYS = (a -> b -> STOP). property SAFE = (a -> SAFE) + {b}. ||S = (SYS || SAFE).",
            "S",
        );
        let r = check_safety(&l);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(texts(&r.trace), ["a", "b"]);
    }

    #[test]
    fn no_error_state_holds() {
        let l = build("TIMER = (tick -> TIMER).", "TIMER");
        let r = check_safety(&l);
        assert!(r.holds());
        assert!(r.trace.is_empty());
        assert!(check_deadlock(&l).holds());
    }

    #[test]
    fn stop_is_a_deadlock() {
        let l = build("P = (a -> STOP).", "P");
        let r = check_deadlock(&l);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(texts(&r.trace), ["a"]);
    }

    #[test]
    fn error_state_is_not_a_deadlock() {
        let l = build(
            "SYS = (a -> SYS | b -> SYS). property SAFE = (a -> SAFE) + {b}. ||S = (SYS || SAFE).",
            "S",
        );
        assert!(check_deadlock(&l).holds());
        assert!(!check_safety(&l).holds());
    }

    #[test]
    fn ties_break_by_label_order() {
        let l = build("P = (b -> STOP | a -> STOP | c -> P).", "P");
        let r = check_deadlock(&l);
        assert_eq!(texts(&r.trace), ["a"]);
    }
}
