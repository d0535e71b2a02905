//! Concrete action labels such as `waterchan.send[7]`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use thiserror::Error;

/// One dot-separated component of a label: a name plus integer indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelPart {
    pub name: String,
    pub indices: Vec<i64>,
}

impl LabelPart {
    pub fn new(name: impl Into<String>, indices: Vec<i64>) -> Self {
        Self {
            name: name.into(),
            indices,
        }
    }
}

/// A concrete event name.
///
/// Equality, hashing and ordering all go through the canonical text form, so
/// two labels are equal exactly when they print the same, and sorting is
/// lexicographic on that text.
#[derive(Debug, Clone)]
pub struct ActionLabel {
    parts: Vec<LabelPart>,
    text: String,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("action label has no parts")]
    Empty,
    #[error("invalid label part name `{0}`")]
    BadName(String),
    #[error("malformed action label `{0}`")]
    Malformed(String),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ActionLabel {
    pub fn new(parts: Vec<LabelPart>) -> Result<Self, LabelError> {
        if parts.is_empty() {
            return Err(LabelError::Empty);
        }
        for part in &parts {
            if !is_identifier(&part.name) {
                return Err(LabelError::BadName(part.name.clone()));
            }
        }
        let text = render(&parts);
        Ok(Self { parts, text })
    }

    /// Single-part label without indices.
    pub fn simple(name: &str) -> Result<Self, LabelError> {
        Self::new(vec![LabelPart::new(name, Vec::new())])
    }

    pub fn parts(&self) -> &[LabelPart] {
        &self.parts
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Name of the first part, e.g. `getWaterQuantity` for `getWaterQuantity[3]`.
    pub fn head(&self) -> &str {
        &self.parts[0].name
    }
}

fn render(parts: &[LabelPart]) -> String {
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        out.push_str(&part.name);
        for idx in &part.indices {
            out.push('[');
            out.push_str(&idx.to_string());
            out.push(']');
        }
    }
    out
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl PartialEq for ActionLabel {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for ActionLabel {}

impl Hash for ActionLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl PartialOrd for ActionLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ActionLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text.cmp(&other.text)
    }
}

impl FromStr for ActionLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || LabelError::Malformed(s.to_string());
        let mut parts = Vec::new();
        for raw in s.split('.') {
            let (name, mut rest) = match raw.find('[') {
                Some(i) => (&raw[..i], &raw[i..]),
                None => (raw, ""),
            };
            let mut indices = Vec::new();
            while !rest.is_empty() {
                let close = rest.find(']').ok_or_else(malformed)?;
                if !rest.starts_with('[') {
                    return Err(malformed());
                }
                let value: i64 = rest[1..close].trim().parse().map_err(|_| malformed())?;
                indices.push(value);
                rest = &rest[close + 1..];
            }
            parts.push(LabelPart::new(name, indices));
        }
        Self::new(parts)
    }
}

impl serde::Serialize for ActionLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}
