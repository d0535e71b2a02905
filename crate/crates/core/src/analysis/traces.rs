use std::collections::{BTreeMap, BTreeSet};

use crate::label::ActionLabel;
use crate::lts::{Lts, StateId};

/// All sequences of at most `max_len` visible labels that some path from
/// the initial state can produce, hiding every label for which `visible`
/// is false. The result is prefix-closed and contains the empty sequence.
pub fn visible_sequences(
    lts: &Lts,
    visible: impl Fn(&ActionLabel) -> bool,
    max_len: usize,
) -> BTreeSet<Vec<ActionLabel>> {
    let shown: Vec<bool> = lts.alphabet().iter().map(&visible).collect();
    let closure = |seed: BTreeSet<StateId>| -> BTreeSet<StateId> {
        let mut out = seed.clone();
        let mut stack: Vec<StateId> = seed.into_iter().collect();
        while let Some(s) = stack.pop() {
            for &(l, t) in lts.successors(s) {
                if !shown[l as usize] && out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    };

    let mut result = BTreeSet::new();
    let mut frontier: Vec<(Vec<ActionLabel>, BTreeSet<StateId>)> =
        vec![(Vec::new(), closure(BTreeSet::from([lts.initial()])))];
    result.insert(Vec::new());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, states) in frontier {
            let mut moves: BTreeMap<u32, BTreeSet<StateId>> = BTreeMap::new();
            for &s in &states {
                for &(l, t) in lts.successors(s) {
                    if shown[l as usize] {
                        moves.entry(l).or_default().insert(t);
                    }
                }
            }
            for (l, targets) in moves {
                let mut longer = seq.clone();
                longer.push(lts.label(l).clone());
                result.insert(longer.clone());
                next.push((longer, closure(targets)));
            }
        }
        frontier = next;
    }
    result
}
