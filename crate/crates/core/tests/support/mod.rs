//! Random small specifications and a brute-force composition oracle,
//! shared by the integration tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fspcheck_core::lts::{build_target, CompileOptions, LabelId};
use fspcheck_core::{ActionLabel, Lts, StateId};
use rand::seq::SliceRandom;
use rand::Rng;

const LABEL_POOL: [&str; 5] = ["a", "b", "c", "d", "e"];

/// A generated FSP unit with `components` composed into `target`.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub text: String,
    pub components: Vec<String>,
    pub target: String,
}

/// Two or three components of at most 8 states over at most 4 labels each;
/// roughly one spec in three contains a property.
pub fn random_spec(rng: &mut impl Rng) -> RandomSpec {
    let count = rng.gen_range(2..=3);
    let with_property = rng.gen_bool(0.35);
    let mut text = String::new();
    let mut components = Vec::new();
    for c in 0..count {
        let name = format!("P{c}");
        let property = with_property && c == count - 1;
        let mut labels: Vec<&str> = LABEL_POOL.to_vec();
        labels.shuffle(rng);
        labels.truncate(rng.gen_range(1..=4));
        labels.sort();
        let states = rng.gen_range(1..=8);
        let state_name = |i: usize| {
            if i == 0 {
                name.clone()
            } else {
                format!("{name}S{i}")
            }
        };
        if property {
            text.push_str("property ");
        }
        for i in 0..states {
            let mut branches = Vec::new();
            let mut used = BTreeSet::new();
            for _ in 0..rng.gen_range(0..=3) {
                let label = *labels.choose(rng).expect("at least one label");
                if property && !used.insert(label) {
                    continue;
                }
                let target = state_name(rng.gen_range(0..states));
                branches.push(format!("{label} -> {target}"));
            }
            let body = if branches.is_empty() {
                "STOP".to_string()
            } else {
                format!("({})", branches.join(" | "))
            };
            let sep = if i + 1 == states { "." } else { "," };
            text.push_str(&format!("{} = {body}{sep}\n", state_name(i)));
        }
        components.push(name);
    }
    text.push_str(&format!("||SYS = ({}).\n", components.join(" || ")));
    RandomSpec {
        text,
        components,
        target: "SYS".into(),
    }
}

/// Compiles the generated target and, separately, each component, so the
/// oracle can rebuild the product from the parts.
pub fn compile_random(spec: &RandomSpec) -> (Lts, Vec<Lts>) {
    let ast = fspcheck_core::parse(&spec.text).unwrap_or_else(|e| panic!("{e}\n{}", spec.text));
    let opts = CompileOptions::default();
    let composed = build_target(&ast, &spec.target, opts).unwrap();
    let parts = spec
        .components
        .iter()
        .map(|c| build_target(&ast, c, opts).unwrap())
        .collect();
    (composed, parts)
}

/// Product of `parts` built the slow way: enumerate every state tuple,
/// connect tuples by the synchronisation rule, keep what is reachable from
/// the initial tuple, and merge every tuple containing a component ERROR
/// into one absorbing state. Returned in canonical numbering.
pub fn product_oracle(parts: &[Lts]) -> Lts {
    let alphabet: BTreeSet<ActionLabel> = parts
        .iter()
        .flat_map(|p| p.alphabet().iter().cloned())
        .collect();
    let alphabet: Vec<ActionLabel> = alphabet.into_iter().collect();
    let sizes: Vec<usize> = parts.iter().map(Lts::num_states).collect();
    let total: usize = sizes.iter().product();

    let decode = |mut code: usize| -> Vec<StateId> {
        let mut tuple = Vec::with_capacity(sizes.len());
        for &n in &sizes {
            tuple.push((code % n) as StateId);
            code /= n;
        }
        tuple
    };
    let encode = |tuple: &[StateId]| -> usize {
        tuple
            .iter()
            .zip(&sizes)
            .rev()
            .fold(0, |acc, (&s, &n)| acc * n + s as usize)
    };

    // All edges of the full cross product, error tuples included.
    let mut edges: Vec<Vec<(LabelId, usize)>> = vec![Vec::new(); total];
    for (code, out) in edges.iter_mut().enumerate() {
        let tuple = decode(code);
        for (li, label) in alphabet.iter().enumerate() {
            let mut choices: Vec<Vec<StateId>> = Vec::new();
            let mut blocked = false;
            for (i, part) in parts.iter().enumerate() {
                match part.label_id(label) {
                    None => choices.push(vec![tuple[i]]),
                    Some(l) => {
                        let targets: Vec<StateId> = part
                            .successors(tuple[i])
                            .iter()
                            .filter(|&&(pl, _)| pl == l)
                            .map(|&(_, t)| t)
                            .collect();
                        if targets.is_empty() {
                            blocked = true;
                            break;
                        }
                        choices.push(targets);
                    }
                }
            }
            if blocked {
                continue;
            }
            let mut combos: Vec<Vec<StateId>> = vec![Vec::new()];
            for options in &choices {
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |&o| {
                            let mut next = prefix.clone();
                            next.push(o);
                            next
                        })
                    })
                    .collect();
            }
            for combo in combos {
                out.push((li as LabelId, encode(&combo)));
            }
        }
    }

    let is_error = |code: usize| {
        decode(code)
            .iter()
            .zip(parts)
            .any(|(&s, p)| p.is_error(s))
    };
    let start = encode(&parts.iter().map(Lts::initial).collect::<Vec<_>>());

    // Prune to the reachable part; error tuples are not expanded.
    let mut reached = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(code) = stack.pop() {
        if is_error(code) {
            continue;
        }
        for &(_, t) in &edges[code] {
            if reached.insert(t) {
                stack.push(t);
            }
        }
    }

    let mut ids: BTreeMap<usize, StateId> = BTreeMap::new();
    let mut error_id = None;
    let mut next_id = 0;
    for &code in &reached {
        if is_error(code) {
            if error_id.is_none() {
                error_id = Some(next_id);
                next_id += 1;
            }
            ids.insert(code, error_id.expect("just set"));
        } else {
            ids.insert(code, next_id);
            next_id += 1;
        }
    }
    let mut rows: Vec<Vec<(LabelId, StateId)>> = vec![Vec::new(); next_id as usize];
    for &code in &reached {
        if is_error(code) {
            continue;
        }
        let mut row: Vec<(LabelId, StateId)> = edges[code].iter().map(|&(l, t)| (l, ids[&t])).collect();
        row.sort_unstable();
        row.dedup();
        rows[ids[&code] as usize] = row;
    }
    Lts::from_parts(alphabet, ids[&start], rows, error_id)
        .expect("oracle builds a well-formed system")
        .canonicalize()
}

/// A random system with up to `max_states` states over `labels` labels,
/// optionally with an error state.
pub fn random_lts(rng: &mut impl Rng, max_states: usize, labels: usize, with_error: bool) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let alphabet: Vec<ActionLabel> = (0..labels)
        .map(|i| format!("l{i}").parse().expect("plain label"))
        .collect();
    let mut rows = vec![Vec::new(); n];
    for row in rows.iter_mut() {
        for _ in 0..rng.gen_range(0..=3) {
            row.push((rng.gen_range(0..labels) as LabelId, rng.gen_range(0..n) as StateId));
        }
    }
    let error = (with_error && n > 1).then(|| rng.gen_range(1..n) as StateId);
    if let Some(e) = error {
        rows[e as usize].clear();
    }
    Lts::from_parts(alphabet, 0, rows, error)
        .expect("random system is well-formed")
        .with_names((0..n).map(|i| format!("s{i}")).collect())
}

/// Structural isomorphism: same alphabet, and a bijection of states that
/// preserves the initial state, the error state and every labelled edge.
/// Colour refinement narrows the candidates; backtracking settles ties
/// left by nondeterminism.
pub fn isomorphic(a: &Lts, b: &Lts) -> bool {
    if a.alphabet() != b.alphabet()
        || a.num_states() != b.num_states()
        || a.num_transitions() != b.num_transitions()
    {
        return false;
    }
    let n = a.num_states();
    let systems = [a, b];
    let mut colour: Vec<Vec<usize>> = systems
        .iter()
        .map(|l| {
            l.states()
                .map(|s| usize::from(l.is_error(s)) + 2 * usize::from(s == l.initial()))
                .collect()
        })
        .collect();
    let mut classes = 0;
    loop {
        let mut index: BTreeMap<(usize, Vec<(LabelId, usize)>), usize> = BTreeMap::new();
        let mut next = vec![vec![0; n]; 2];
        for (k, l) in systems.iter().enumerate() {
            for s in l.states() {
                let mut sig: Vec<(LabelId, usize)> = l
                    .successors(s)
                    .iter()
                    .map(|&(x, t)| (x, colour[k][t as usize]))
                    .collect();
                sig.sort_unstable();
                let key = (colour[k][s as usize], sig);
                let fresh = index.len();
                next[k][s as usize] = *index.entry(key).or_insert(fresh);
            }
        }
        colour = next;
        if index.len() == classes {
            break;
        }
        classes = index.len();
    }
    let mut ca: Vec<usize> = colour[0].clone();
    let mut cb: Vec<usize> = colour[1].clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return false;
    }

    let edges_b: BTreeSet<(StateId, LabelId, StateId)> = b.transitions().collect();
    let order: Vec<StateId> = a.states().collect();
    let mut map: Vec<Option<StateId>> = vec![None; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        order: &[StateId],
        a: &Lts,
        colour: &[Vec<usize>],
        edges_b: &BTreeSet<(StateId, LabelId, StateId)>,
        map: &mut Vec<Option<StateId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&s) = order.get(i) else {
            return true;
        };
        for cand in 0..map.len() as StateId {
            if used[cand as usize] || colour[1][cand as usize] != colour[0][s as usize] {
                continue;
            }
            map[s as usize] = Some(cand);
            let consistent = a.transitions().all(|(f, l, t)| {
                match (map[f as usize], map[t as usize]) {
                    (Some(mf), Some(mt)) => edges_b.contains(&(mf, l, mt)),
                    _ => true,
                }
            });
            if consistent {
                used[cand as usize] = true;
                if extend(i + 1, order, a, colour, edges_b, map, used) {
                    return true;
                }
                used[cand as usize] = false;
            }
            map[s as usize] = None;
        }
        false
    }

    extend(0, &order, a, &colour, &edges_b, &mut map, &mut used)
}
