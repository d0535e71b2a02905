use std::collections::{HashMap, VecDeque};

use super::compile::DEFAULT_MAX_STATES;
use super::{LabelId, Lts, LtsError, Naming, StateId};
use crate::label::ActionLabel;

/// Synchronous product of `parts` with the default state ceiling.
pub fn compose(parts: &[Lts]) -> Result<Lts, LtsError> {
    compose_with_limit(parts, DEFAULT_MAX_STATES, "composition")
}

/// Synchronous product explored on the fly from the tuple of initial states.
///
/// A label synchronises every component whose alphabet contains it; the
/// others keep their state. Reaching any component's ERROR state leads to
/// the single composite ERROR state. States are numbered breadth-first with
/// successors in canonical label order.
pub fn compose_with_limit(parts: &[Lts], max_states: usize, target: &str) -> Result<Lts, LtsError> {
    if parts.is_empty() {
        return Err(LtsError::EmptyComposition);
    }

    let mut alphabet: Vec<ActionLabel> = parts
        .iter()
        .flat_map(|p| p.alphabet().iter().cloned())
        .collect();
    alphabet.sort();
    alphabet.dedup();
    let global: Vec<Vec<LabelId>> = parts
        .iter()
        .map(|p| {
            p.alphabet()
                .iter()
                .map(|a| alphabet.binary_search(a).expect("label in union") as LabelId)
                .collect()
        })
        .collect();
    let mut participants = vec![0usize; alphabet.len()];
    for ids in &global {
        for &g in ids {
            participants[g as usize] += 1;
        }
    }

    let width = parts.len();
    let mut index: HashMap<Box<[u32]>, StateId> = HashMap::new();
    let mut tuples: Vec<u32> = Vec::new();
    let mut rows: Vec<Vec<(LabelId, StateId)>> = Vec::new();
    let mut error: Option<StateId> = None;
    let mut queue: VecDeque<StateId> = VecDeque::new();

    let limit_err = || LtsError::StateLimit {
        target: target.to_string(),
        limit: max_states,
    };

    let mut intern = |tuple: &[u32],
                      tuples: &mut Vec<u32>,
                      rows: &mut Vec<Vec<(LabelId, StateId)>>,
                      queue: &mut VecDeque<StateId>,
                      error: &mut Option<StateId>|
     -> Result<StateId, LtsError> {
        let is_error = tuple
            .iter()
            .zip(parts)
            .any(|(&s, p)| p.is_error(s));
        if is_error {
            if let Some(e) = *error {
                return Ok(e);
            }
        } else if let Some(&id) = index.get(tuple) {
            return Ok(id);
        }
        if rows.len() >= max_states {
            return Err(limit_err());
        }
        let id = rows.len() as StateId;
        rows.push(Vec::new());
        if is_error {
            *error = Some(id);
            tuples.extend(std::iter::repeat_n(u32::MAX, width));
        } else {
            index.insert(tuple.into(), id);
            tuples.extend_from_slice(tuple);
            queue.push_back(id);
        }
        Ok(id)
    };

    let start: Vec<u32> = parts.iter().map(Lts::initial).collect();
    let initial = intern(&start, &mut tuples, &mut rows, &mut queue, &mut error)?;

    let mut moves: Vec<(LabelId, usize, StateId)> = Vec::new();
    let mut current = vec![0u32; width];
    let mut next = vec![0u32; width];
    while let Some(s) = queue.pop_front() {
        current.copy_from_slice(&tuples[s as usize * width..(s as usize + 1) * width]);
        moves.clear();
        for (i, part) in parts.iter().enumerate() {
            for &(l, t) in part.successors(current[i]) {
                moves.push((global[i][l as usize], i, t));
            }
        }
        moves.sort_unstable();

        let mut row = Vec::new();
        let mut lo = 0;
        while lo < moves.len() {
            let g = moves[lo].0;
            let mut hi = lo;
            while hi < moves.len() && moves[hi].0 == g {
                hi += 1;
            }
            // Per participating component, the range of its candidate targets.
            let mut groups: Vec<(usize, usize, usize)> = Vec::new();
            let mut k = lo;
            while k < hi {
                let comp = moves[k].1;
                let mut end = k;
                while end < hi && moves[end].1 == comp {
                    end += 1;
                }
                groups.push((comp, k, end));
                k = end;
            }
            if groups.len() == participants[g as usize] {
                let mut choice: Vec<usize> = groups.iter().map(|&(_, start, _)| start).collect();
                loop {
                    next.copy_from_slice(&current);
                    for &c in &choice {
                        let (_, comp, t) = moves[c];
                        next[comp] = t;
                    }
                    let t = intern(&next, &mut tuples, &mut rows, &mut queue, &mut error)?;
                    row.push((g, t));
                    // Odometer over the groups, last group fastest.
                    let mut j = groups.len();
                    let exhausted = loop {
                        if j == 0 {
                            break true;
                        }
                        j -= 1;
                        choice[j] += 1;
                        if choice[j] < groups[j].2 {
                            break false;
                        }
                        choice[j] = groups[j].1;
                    };
                    if exhausted {
                        break;
                    }
                }
            }
            lo = hi;
        }
        rows[s as usize] = row;
    }

    let naming = Naming::Product {
        parts: parts.iter().map(|p| p.naming.clone()).collect(),
        tuples: tuples.into(),
    };
    Ok(Lts::from_parts(alphabet, initial, rows, error)?.with_naming(naming))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::LtsBuilder;

    fn cycle(labels: &[&str]) -> Lts {
        let mut b = LtsBuilder::new();
        let s = b.add_states(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let to = (i + 1) % labels.len();
            b.add_transition(s + i as u32, l, s + to as u32).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn shared_label_synchronises() {
        let p = cycle(&["a", "b"]);
        let q = cycle(&["b", "c"]);
        let pq = compose(&[p, q]).unwrap();
        assert_eq!((pq.num_states(), pq.num_transitions()), (4, 5));
        assert_eq!(pq.state_name(0), "(0, 0)");
    }

    #[test]
    fn disjoint_alphabets_interleave() {
        let pq = compose(&[cycle(&["a", "b"]), cycle(&["c", "d"])]).unwrap();
        assert_eq!(pq.num_states(), 4);
        assert_eq!(pq.num_transitions(), 8);
    }

    #[test]
    fn output_is_already_canonical() {
        let pq = compose(&[cycle(&["a", "b", "c"]), cycle(&["c", "d"]), cycle(&["e"])]).unwrap();
        assert_eq!(pq.canonicalize(), pq);
    }

    #[test]
    fn blocked_extension_label_is_never_taken() {
        let mut b = LtsBuilder::new();
        let s = b.add_state("P");
        b.add_transition(s, "a", s).unwrap();
        b.add_label("b").unwrap();
        let p = b.build().unwrap();
        let q = cycle(&["b", "a"]);
        let pq = compose(&[p, q]).unwrap();
        assert_eq!(pq.num_states(), 1);
        assert_eq!(pq.num_transitions(), 0);
    }

    #[test]
    fn error_state_absorbs() {
        let mut b = LtsBuilder::new();
        let s = b.add_states(2);
        b.add_transition(s, "a", s + 1).unwrap();
        b.set_error(s + 1);
        let monitor = b.build().unwrap();
        let sys = compose(&[cycle(&["a"]), monitor]).unwrap();
        assert_eq!(sys.num_states(), 2);
        assert_eq!(sys.error(), Some(1));
        assert_eq!(sys.state_name(1), "ERROR");
    }

    #[test]
    fn state_limit_is_a_resource_error() {
        let parts: Vec<Lts> = (0..4).map(|i| cycle(&[&format!("x{i}"), &format!("y{i}")])).collect();
        let err = compose_with_limit(&parts, 10, "T").unwrap_err();
        assert!(matches!(err, LtsError::StateLimit { limit: 10, .. }));
    }
}
