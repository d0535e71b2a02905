use crate::lts::{LabelId, Lts, StateId};

/// A strongly connected component and the labels of its internal transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    /// Member states in increasing order.
    pub states: Vec<StateId>,
    /// Sorted, deduplicated labels of transitions staying inside the component.
    pub labels: Vec<LabelId>,
}

/// Strongly connected components of all states (iterative Tarjan). Every
/// state belongs to exactly one component; components come out in reverse
/// topological order.
pub fn sccs(lts: &Lts) -> Vec<Vec<StateId>> {
    const UNVISITED: u32 = u32::MAX;
    let n = lts.num_states();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<StateId> = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0u32;
    // Call stack of (state, next successor position).
    let mut calls: Vec<(StateId, usize)> = Vec::new();

    for root in 0..n as StateId {
        if index[root as usize] != UNVISITED {
            continue;
        }
        calls.push((root, 0));
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            let succ = lts.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos].1;
                *pos += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = counter;
                    low[w as usize] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    calls.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent as usize] = low[parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w as usize] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Components with no transition leaving them.
pub fn terminal_sccs(lts: &Lts) -> Vec<Scc> {
    let all = sccs(lts);
    let mut comp_of = vec![0usize; lts.num_states()];
    for (i, comp) in all.iter().enumerate() {
        for &s in comp {
            comp_of[s as usize] = i;
        }
    }
    let mut out = Vec::new();
    for (i, comp) in all.into_iter().enumerate() {
        let mut labels = Vec::new();
        let mut leaves = false;
        for &s in &comp {
            for &(l, t) in lts.successors(s) {
                if comp_of[t as usize] == i {
                    labels.push(l);
                } else {
                    leaves = true;
                }
            }
        }
        if leaves {
            continue;
        }
        labels.sort_unstable();
        labels.dedup();
        out.push(Scc {
            states: comp,
            labels,
        });
    }
    out.sort_by_key(|c| c.states[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{build_target, CompileOptions, LtsBuilder};
    use crate::syntax::parse;
    use proptest::prelude::*;

    fn build(src: &str, target: &str) -> Lts {
        build_target(&parse(src).unwrap(), target, CompileOptions::default()).unwrap()
    }

    #[test]
    fn timer_is_one_terminal_component() {
        let l = build("TIMER = (tick -> TIMER).", "TIMER");
        let t = terminal_sccs(&l);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].states, vec![0]);
        assert_eq!(l.label(t[0].labels[0]).as_str(), "tick");
    }

    #[test]
    fn livelock_loop_is_terminal() {
        let l = build("P = (a -> P | b -> Q), Q = (b -> Q).", "P");
        let t = terminal_sccs(&l);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].states.len(), 1);
        let labels: Vec<&str> = t[0].labels.iter().map(|&i| l.label(i).as_str()).collect();
        assert_eq!(labels, ["b"]);
        assert_ne!(t[0].states[0], l.initial());
    }

    #[test]
    fn dag_ends_in_stop_singleton() {
        let l = build("P = (a -> b -> STOP).", "P");
        let t = terminal_sccs(&l);
        assert_eq!(t.len(), 1);
        assert!(t[0].labels.is_empty());
    }

    /// Mutual reachability by brute force.
    fn reach(l: &Lts, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; l.num_states()];
        let mut stack = vec![from];
        seen[from as usize] = true;
        while let Some(s) = stack.pop() {
            for &(_, t) in l.successors(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    proptest! {
        #[test]
        fn components_partition_and_match_mutual_reachability(
            n in 1usize..12,
            edges in prop::collection::vec((0u32..12, 0u32..12), 0..30),
        ) {
            let mut b = LtsBuilder::new();
            b.add_states(n);
            for (f, t) in edges {
                if (f as usize) < n && (t as usize) < n {
                    b.add_transition(f, "a", t).unwrap();
                }
            }
            let l = b.build().unwrap();
            let comps = sccs(&l);
            let mut all: Vec<StateId> = comps.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n as StateId).collect::<Vec<_>>());
            let r: Vec<Vec<bool>> = (0..n as StateId).map(|s| reach(&l, s)).collect();
            for comp in &comps {
                for &x in comp {
                    for y in 0..n as StateId {
                        let same = comp.contains(&y);
                        let mutual = r[x as usize][y as usize] && r[y as usize][x as usize];
                        prop_assert_eq!(same, mutual);
                    }
                }
            }
            for t in terminal_sccs(&l) {
                for &s in &t.states {
                    for &(_, x) in l.successors(s) {
                        prop_assert!(t.states.contains(&x));
                    }
                }
            }
        }
    }
}
