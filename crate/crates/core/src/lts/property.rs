use super::{LabelId, Lts, LtsError, Naming, StateId};

/// Completes a deterministic property monitor over its alphabet: every
/// missing (state, label) pair gets a transition to a fresh ERROR state.
///
/// `name` is only used in the error message.
pub fn as_property(lts: &Lts, name: &str) -> Result<Lts, LtsError> {
    for s in lts.states() {
        if let Some(w) = lts.successors(s).windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(LtsError::NondeterministicProperty {
                process: name.to_string(),
                state: lts.state_name(s),
                label: lts.label(w[0].0).to_string(),
            });
        }
    }
    let n = lts.num_states();
    let error = match lts.error() {
        Some(e) => e,
        None => n as StateId,
    };
    let k = lts.alphabet().len() as LabelId;
    let mut rows: Vec<Vec<(LabelId, StateId)>> = Vec::with_capacity(n + 1);
    let mut names = Vec::with_capacity(n + 1);
    for s in lts.states() {
        names.push(lts.state_name(s));
        if Some(s) == lts.error() {
            rows.push(Vec::new());
            continue;
        }
        let row = lts.successors(s);
        let mut completed = Vec::with_capacity(k as usize);
        let mut present = row.iter().peekable();
        for l in 0..k {
            match present.peek() {
                Some(&&(pl, t)) if pl == l => {
                    completed.push((l, t));
                    present.next();
                }
                _ => completed.push((l, error)),
            }
        }
        rows.push(completed);
    }
    if lts.error().is_none() {
        rows.push(Vec::new());
        names.push("ERROR".to_string());
    }
    let monitor = Lts::from_parts(lts.alphabet().to_vec(), lts.initial(), rows, Some(error))?
        .with_naming(Naming::Listed(names.into()));
    Ok(monitor.canonicalize())
}
