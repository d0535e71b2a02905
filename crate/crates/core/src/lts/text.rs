//! Line-oriented text form:
//!
//! ```text
//! states 2
//! initial 0
//! error 1
//! alphabet a b
//! 0 a 0
//! 0 b 1
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write};

use super::{LabelId, Lts, LtsError, StateId};
use crate::label::ActionLabel;

impl Lts {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out).expect("writing to a String cannot fail");
        out
    }

    pub fn write_text(&self, out: &mut impl Write) -> fmt::Result {
        writeln!(out, "states {}", self.num_states())?;
        writeln!(out, "initial {}", self.initial())?;
        if let Some(e) = self.error() {
            writeln!(out, "error {e}")?;
        }
        out.write_str("alphabet")?;
        for label in self.alphabet() {
            write!(out, " {label}")?;
        }
        out.write_char('\n')?;
        for (from, label, to) in self.transitions() {
            writeln!(out, "{from} {} {to}", self.label(label))?;
        }
        Ok(())
    }

    pub fn from_text(src: &str) -> Result<Lts, LtsError> {
        let mut states: Option<usize> = None;
        let mut initial: Option<StateId> = None;
        let mut error = None;
        let mut alphabet: Vec<ActionLabel> = Vec::new();
        let mut edges: Vec<(usize, StateId, String, StateId)> = Vec::new();

        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| LtsError::Text { line, msg };
            let words: Vec<&str> = raw.split_whitespace().collect();
            let number = |w: &str| -> Result<u32, LtsError> {
                w.parse()
                    .map_err(|_| err(format!("expected a state number, found `{w}`")))
            };
            match words.as_slice() {
                [] => {}
                ["states", n] => states = Some(number(n)? as usize),
                ["initial", n] => initial = Some(number(n)?),
                ["error", n] => error = Some(number(n)?),
                ["alphabet", labels @ ..] => {
                    for l in labels {
                        alphabet.push(l.parse()?);
                    }
                }
                [from, label, to] => {
                    edges.push((line, number(from)?, label.to_string(), number(to)?));
                }
                _ => return Err(err(format!("cannot read `{raw}`"))),
            }
        }

        let n = states.ok_or(LtsError::Text {
            line: 1,
            msg: "missing `states` header".into(),
        })?;
        let initial = initial.ok_or(LtsError::Text {
            line: 1,
            msg: "missing `initial` header".into(),
        })?;
        let mut ids: HashMap<ActionLabel, usize> = alphabet
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut rows: Vec<Vec<(LabelId, StateId)>> = vec![Vec::new(); n];
        for (line, from, label, to) in edges {
            let label: ActionLabel = label.parse()?;
            let id = *ids.entry(label.clone()).or_insert_with(|| {
                alphabet.push(label);
                alphabet.len() - 1
            });
            let row = rows.get_mut(from as usize).ok_or(LtsError::Text {
                line,
                msg: format!("state {from} out of range"),
            })?;
            row.push((id as LabelId, to));
        }
        Lts::from_parts(alphabet, initial, rows, error)
    }
}
