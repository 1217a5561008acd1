use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    /// Interned string values with no order.
    Categorical,
    /// Finite numbers under their natural total order.
    Ordered,
}

impl FeatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Categorical => "categorical",
            FeatureKind::Ordered => "ordered",
        }
    }
}

/// One slot of a feature vector.
///
/// Categorical values are indices into the dimension's interned value table.
/// Numbers are always finite, which makes the bitwise equality below agree
/// with numeric equality except for the sign of zero (normalised on
/// construction).
#[derive(Debug, Clone, Copy)]
pub enum FeatureValue {
    Missing,
    Category(u32),
    Number(f64),
}

impl FeatureValue {
    pub fn number(x: f64) -> Option<Self> {
        x.is_finite()
            .then_some(FeatureValue::Number(if x == 0.0 { 0.0 } else { x }))
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, FeatureValue::Missing)
    }

    fn rank(&self) -> u8 {
        match self {
            FeatureValue::Missing => 0,
            FeatureValue::Category(_) => 1,
            FeatureValue::Number(_) => 2,
        }
    }
}

impl PartialEq for FeatureValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FeatureValue {}

/// Missing sorts first; values of one dimension never mix kinds.
impl Ord for FeatureValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FeatureValue::Category(a), FeatureValue::Category(b)) => a.cmp(b),
            (FeatureValue::Number(a), FeatureValue::Number(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for FeatureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for FeatureValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            FeatureValue::Missing => {}
            FeatureValue::Category(c) => c.hash(state),
            FeatureValue::Number(x) => x.to_bits().hash(state),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dimension {
    name: String,
    kind: FeatureKind,
    values: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl Dimension {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    /// Interned categorical values in first-occurrence order.
    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn lookup(&self, value: &str) -> Option<u32> {
        self.lookup.get(value).copied()
    }

    pub fn value_name(&self, id: u32) -> Option<&str> {
        self.values.get(id as usize).map(String::as_str)
    }

    fn intern(&mut self, value: &str) -> u32 {
        if let Some(&id) = self.lookup.get(value) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(value.to_owned());
        self.lookup.insert(value.to_owned(), id);
        id
    }
}

#[derive(Debug, Clone, Default)]
pub struct FeatureSchema {
    dims: Vec<Dimension>,
    by_name: HashMap<String, usize>,
}

impl FeatureSchema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_dimension(&mut self, name: &str, kind: FeatureKind) -> Result<usize> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateDimension(name.to_owned()));
        }
        let index = self.dims.len();
        self.dims.push(Dimension {
            name: name.to_owned(),
            kind,
            values: Vec::new(),
            lookup: HashMap::new(),
        });
        self.by_name.insert(name.to_owned(), index);
        Ok(index)
    }

    pub fn with_dimension(mut self, name: &str, kind: FeatureKind) -> Result<Self> {
        self.add_dimension(name, kind)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dimensions(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn dimension(&self, index: usize) -> Option<&Dimension> {
        self.dims.get(index)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Interns a categorical value, growing the dimension's domain.
    pub fn intern(&mut self, dim: usize, value: &str) -> Result<FeatureValue> {
        let d = &mut self.dims[dim];
        if d.kind != FeatureKind::Categorical {
            return Err(Error::KindMismatch {
                location: "schema".into(),
                feature: d.name.clone(),
                expected: FeatureKind::Ordered.as_str(),
            });
        }
        Ok(FeatureValue::Category(d.intern(value)))
    }

    /// True iff the value is admissible in slot `dim`.
    pub fn admits(&self, dim: usize, value: &FeatureValue) -> bool {
        match (self.dims.get(dim), value) {
            (None, _) => false,
            (Some(_), FeatureValue::Missing) => true,
            (Some(d), FeatureValue::Category(c)) => {
                d.kind == FeatureKind::Categorical && (*c as usize) < d.values.len()
            }
            (Some(d), FeatureValue::Number(x)) => d.kind == FeatureKind::Ordered && x.is_finite(),
        }
    }

    pub fn conforms(&self, vector: &[FeatureValue]) -> bool {
        vector.len() == self.dims.len()
            && vector.iter().enumerate().all(|(i, v)| self.admits(i, v))
    }

    pub fn render(&self, dim: usize, value: &FeatureValue) -> serde_json::Value {
        match value {
            FeatureValue::Missing => serde_json::Value::Null,
            FeatureValue::Category(c) => self.dims[dim]
                .value_name(*c)
                .map(|s| serde_json::Value::String(s.to_owned()))
                .unwrap_or(serde_json::Value::Null),
            FeatureValue::Number(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        }
    }

    /// Human-readable value, used in text output and DOT attributes.
    pub fn display(&self, dim: usize, value: &FeatureValue) -> String {
        match value {
            FeatureValue::Missing => "null".to_owned(),
            FeatureValue::Category(c) => self.dims[dim]
                .value_name(*c)
                .unwrap_or("?")
                .to_owned(),
            FeatureValue::Number(x) => format!("{x}"),
        }
    }

    /// Parses a JSON scalar into a value of dimension `dim`, interning
    /// categorical strings.
    pub fn parse_value(
        &mut self,
        dim: usize,
        raw: &serde_json::Value,
        location: &str,
    ) -> Result<FeatureValue> {
        let d = &self.dims[dim];
        let mismatch = || Error::KindMismatch {
            location: location.to_owned(),
            feature: d.name.clone(),
            expected: d.kind.as_str(),
        };
        match (d.kind, raw) {
            (_, serde_json::Value::Null) => Ok(FeatureValue::Missing),
            (FeatureKind::Categorical, serde_json::Value::String(s)) => {
                let s = s.clone();
                self.intern(dim, &s)
            }
            (FeatureKind::Ordered, serde_json::Value::Number(n)) => n
                .as_f64()
                .and_then(FeatureValue::number)
                .ok_or_else(mismatch),
            _ => Err(mismatch()),
        }
    }

    /// Like [`parse_value`](Self::parse_value) but never grows a domain.
    pub fn lookup_value(&self, dim: usize, raw: &serde_json::Value) -> Option<FeatureValue> {
        let d = self.dims.get(dim)?;
        match (d.kind, raw) {
            (_, serde_json::Value::Null) => Some(FeatureValue::Missing),
            (FeatureKind::Categorical, serde_json::Value::String(s)) => {
                d.lookup(s).map(FeatureValue::Category)
            }
            (FeatureKind::Ordered, serde_json::Value::Number(n)) => {
                n.as_f64().and_then(FeatureValue::number)
            }
            _ => None,
        }
    }
}
