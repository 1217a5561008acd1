//! Criteria over feature vectors: atoms and their conjunctions/disjunctions.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{FeatureKind, FeatureSchema, FeatureValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Eq => "=",
            Op::Ge => ">=",
            Op::Gt => ">",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "<" => Op::Lt,
            "<=" | "≤" => Op::Le,
            "=" | "==" => Op::Eq,
            ">=" | "≥" => Op::Ge,
            ">" => Op::Gt,
            _ => return None,
        })
    }

    pub fn is_order(self) -> bool {
        self != Op::Eq
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            Op::Lt => ord == Ordering::Less,
            Op::Le => ord != Ordering::Greater,
            Op::Eq => ord == Ordering::Equal,
            Op::Ge => ord != Ordering::Less,
            Op::Gt => ord == Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Atom {
        feature: usize,
        op: Op,
        threshold: FeatureValue,
    },
    All(Vec<Criterion>),
    Any(Vec<Criterion>),
}

impl Criterion {
    pub fn atom(feature: usize, op: Op, threshold: FeatureValue) -> Self {
        Criterion::Atom {
            feature,
            op,
            threshold,
        }
    }

    /// Checks the criterion against `schema`: known dimensions, thresholds
    /// of the right kind, no order operator on a categorical dimension or
    /// with a missing threshold, and no empty `All`/`Any`.
    pub fn validate(&self, schema: &FeatureSchema) -> Result<()> {
        match self {
            Criterion::Atom {
                feature,
                op,
                threshold,
            } => {
                let dim = schema.dimension(*feature).ok_or_else(|| {
                    Error::InvalidCriterion(format!("feature #{feature} is outside the schema"))
                })?;
                if !schema.admits(*feature, threshold) {
                    return Err(Error::InvalidCriterion(format!(
                        "threshold does not fit feature `{}`",
                        dim.name()
                    )));
                }
                if op.is_order() && threshold.is_missing() {
                    return Err(Error::InvalidCriterion(format!(
                        "`{}` on `{}` needs a present threshold",
                        op.as_str(),
                        dim.name()
                    )));
                }
                if op.is_order() && dim.kind() == FeatureKind::Categorical {
                    return Err(Error::InvalidCriterion(format!(
                        "categorical feature `{}` admits only `=`",
                        dim.name()
                    )));
                }
                Ok(())
            }
            Criterion::All(cs) | Criterion::Any(cs) => {
                if cs.is_empty() {
                    return Err(Error::InvalidCriterion("empty conjunction or disjunction".into()));
                }
                cs.iter().try_for_each(|c| c.validate(schema))
            }
        }
    }

    /// Evaluates a criterion already checked by [`validate`](Self::validate).
    ///
    /// Missing fails every order comparison and equals only a missing
    /// threshold.
    pub fn eval(&self, features: &[FeatureValue]) -> bool {
        match self {
            Criterion::Atom {
                feature,
                op,
                threshold,
            } => match (features.get(*feature), threshold) {
                (None, _) => false,
                (Some(FeatureValue::Missing), t) => *op == Op::Eq && t.is_missing(),
                (Some(_), FeatureValue::Missing) => false,
                (Some(x), t) => op.holds(x.cmp(t)),
            },
            Criterion::All(cs) => cs.iter().all(|c| c.eval(features)),
            Criterion::Any(cs) => cs.iter().any(|c| c.eval(features)),
        }
    }

    pub fn to_json(&self, schema: &FeatureSchema) -> Value {
        match self {
            Criterion::Atom {
                feature,
                op,
                threshold,
            } => {
                let name = schema
                    .dimension(*feature)
                    .map(|d| d.name().to_owned())
                    .unwrap_or_default();
                json!({"atom": {"f": name, "op": op.as_str(), "v": schema.render(*feature, threshold)}})
            }
            Criterion::All(cs) => json!({"all": cs.iter().map(|c| c.to_json(schema)).collect::<Vec<_>>()}),
            Criterion::Any(cs) => json!({"any": cs.iter().map(|c| c.to_json(schema)).collect::<Vec<_>>()}),
        }
    }

    /// Parses and validates the JSON form against `schema`.
    pub fn from_json(schema: &FeatureSchema, v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidCriterion(msg.to_owned());
        let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(|| {
            bad("expected an object with exactly one of `atom`, `all`, `any`")
        })?;
        let (key, body) = obj.iter().next().unwrap();
        let c = match key.as_str() {
            "atom" => parse_atom(schema, body)?,
            "all" | "any" => {
                let items = body
                    .as_array()
                    .ok_or_else(|| bad("`all`/`any` take an array"))?
                    .iter()
                    .map(|x| Criterion::from_json(schema, x))
                    .collect::<Result<Vec<_>>>()?;
                if key == "all" {
                    Criterion::All(items)
                } else {
                    Criterion::Any(items)
                }
            }
            other => return Err(bad(&format!("unknown criterion key `{other}`"))),
        };
        c.validate(schema)?;
        Ok(c)
    }

    pub fn display<'a>(&'a self, schema: &'a FeatureSchema) -> impl fmt::Display + 'a {
        DisplayCriterion { c: self, schema }
    }
}

fn parse_atom(schema: &FeatureSchema, body: &Value) -> Result<Criterion> {
    let bad = |msg: String| Error::InvalidCriterion(msg);
    let obj: &Map<String, Value> = body
        .as_object()
        .ok_or_else(|| bad("`atom` takes an object".into()))?;
    for k in obj.keys() {
        if !matches!(k.as_str(), "f" | "op" | "v") {
            return Err(bad(format!("unexpected atom key `{k}`")));
        }
    }
    let name = obj
        .get("f")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("atom needs a string `f`".into()))?;
    let feature = schema.index_of(name).ok_or_else(|| Error::UnknownFeature {
        location: "criterion".into(),
        feature: name.to_owned(),
    })?;
    let op_raw = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("atom needs a string `op`".into()))?;
    let op = Op::parse(op_raw).ok_or_else(|| bad(format!("unknown operator `{op_raw}`")))?;
    let raw = obj.get("v").unwrap_or(&Value::Null);
    let threshold = schema
        .lookup_value(feature, raw)
        .ok_or_else(|| bad(format!("value {raw} is not in the domain of `{name}`")))?;
    Ok(Criterion::atom(feature, op, threshold))
}

struct DisplayCriterion<'a> {
    c: &'a Criterion,
    schema: &'a FeatureSchema,
}

impl fmt::Display for DisplayCriterion<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, cs: &[Criterion], sep: &str| {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{}", c.display(self.schema))?;
            }
            f.write_str(")")
        };
        match self.c {
            Criterion::Atom {
                feature,
                op,
                threshold,
            } => {
                let name = self.schema.dimension(*feature).map_or("?", |d| d.name());
                let shown = if feature < &self.schema.len() {
                    self.schema.display(*feature, threshold)
                } else {
                    "?".into()
                };
                write!(f, "{name} {} {shown}", op.as_str())
            }
            Criterion::All(cs) => join(f, cs, " ∧ "),
            Criterion::Any(cs) => join(f, cs, " ∨ "),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> FeatureSchema {
        let mut s = FeatureSchema::new()
            .with_dimension("color", FeatureKind::Categorical)
            .unwrap()
            .with_dimension("level", FeatureKind::Ordered)
            .unwrap();
        s.intern(0, "red").unwrap();
        s.intern(0, "green").unwrap();
        s
    }

    fn num(x: f64) -> FeatureValue {
        FeatureValue::number(x).unwrap()
    }

    #[test]
    fn atoms() {
        let x = [FeatureValue::Missing, num(3.0)];
        assert!(Criterion::atom(1, Op::Le, num(5.0)).eval(&x));
        assert!(!Criterion::atom(1, Op::Gt, num(3.0)).eval(&x));
        assert!(Criterion::atom(1, Op::Ge, num(3.0)).eval(&x));
        let missing = [FeatureValue::Missing, FeatureValue::Missing];
        assert!(!Criterion::atom(1, Op::Lt, num(5.0)).eval(&missing));
        assert!(Criterion::atom(1, Op::Eq, FeatureValue::Missing).eval(&missing));
        assert!(!Criterion::atom(1, Op::Eq, FeatureValue::Missing).eval(&x));
    }

    #[test]
    fn any_and_all() {
        let x = [FeatureValue::Category(1), num(2.0)];
        let any = Criterion::Any(vec![
            Criterion::atom(1, Op::Eq, num(1.0)),
            Criterion::atom(1, Op::Eq, num(2.0)),
        ]);
        assert!(any.eval(&x));
        let all = Criterion::All(vec![any, Criterion::atom(0, Op::Eq, FeatureValue::Category(0))]);
        assert!(!all.eval(&x));
    }

    #[test]
    fn validation() {
        let s = schema();
        assert!(Criterion::atom(0, Op::Le, FeatureValue::Category(0)).validate(&s).is_err());
        assert!(Criterion::atom(1, Op::Lt, FeatureValue::Missing).validate(&s).is_err());
        assert!(Criterion::atom(1, Op::Eq, FeatureValue::Missing).validate(&s).is_ok());
        assert!(Criterion::atom(2, Op::Eq, FeatureValue::Missing).validate(&s).is_err());
        assert!(Criterion::atom(0, Op::Eq, num(1.0)).validate(&s).is_err());
        assert!(Criterion::All(vec![]).validate(&s).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = schema();
        let c = Criterion::All(vec![
            Criterion::atom(0, Op::Eq, FeatureValue::Category(0)),
            Criterion::Any(vec![
                Criterion::atom(1, Op::Le, num(3.0)),
                Criterion::atom(1, Op::Eq, FeatureValue::Missing),
            ]),
        ]);
        let j = c.to_json(&s);
        assert_eq!(
            j,
            json!({"all": [
                {"atom": {"f": "color", "op": "=", "v": "red"}},
                {"any": [
                    {"atom": {"f": "level", "op": "<=", "v": 3.0}},
                    {"atom": {"f": "level", "op": "=", "v": null}}
                ]}
            ]})
        );
        assert_eq!(Criterion::from_json(&s, &j).unwrap(), c);
        assert_eq!(c.display(&s).to_string(), "(color = red ∧ (level <= 3 ∨ level = null))");
    }

    #[test]
    fn json_rejects_unknowns() {
        let s = schema();
        for bad in [
            json!({"atom": {"f": "weight", "op": "=", "v": 1}}),
            json!({"atom": {"f": "color", "op": "=", "v": "mauve"}}),
            json!({"atom": {"f": "level", "op": "~", "v": 1}}),
            json!({"none": []}),
            json!({"any": []}),
        ] {
            assert!(Criterion::from_json(&s, &bad).is_err(), "{bad}");
        }
    }
}
