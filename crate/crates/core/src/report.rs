//! Named inequality instances and their serialization.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Direction of an inequality `lhs ? rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

impl Relation {
    /// Signed slack: positive means the inequality holds with room to spare.
    pub fn slack(self, lhs: f64, rhs: f64) -> f64 {
        if lhs == rhs {
            return 0.0;
        }
        match self {
            Relation::Ge => lhs - rhs,
            Relation::Le => rhs - lhs,
            Relation::Eq => -(lhs - rhs).abs(),
        }
    }
}

pub fn default_tolerance(rhs: f64) -> f64 {
    1e-9 * rhs.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(with = "sig12")]
    pub lhs: f64,
    #[serde(with = "sig12")]
    pub rhs: f64,
    pub relation: Relation,
    #[serde(with = "sig12")]
    pub slack: f64,
    pub satisfied: bool,
    pub provenance: String,
    /// False for informational checks that are expected to fail on some inputs.
    pub guaranteed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self::with_tolerance(name, lhs, relation, rhs, provenance, default_tolerance(rhs))
    }

    pub fn with_tolerance(
        name: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        provenance: impl Into<String>,
        tol: f64,
    ) -> Self {
        let slack = relation.slack(lhs, rhs);
        let provenance = provenance.into();
        debug_assert!(!provenance.is_empty());
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            relation,
            slack,
            satisfied: slack >= -tol,
            provenance,
            guaranteed: true,
            note: String::new(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.guaranteed = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn violated_guarantee(&self) -> bool {
        self.guaranteed && !self.satisfied
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<18} {:>14.9} {} {:<14.9} slack {:+.3e} [{}]",
            self.name,
            self.lhs,
            self.relation,
            self.rhs,
            self.slack,
            if self.satisfied { "ok" } else { "VIOLATED" }
        )
    }
}

/// A pointwise inequality checked on a grid, summarized by its worst point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport {
    /// Report for the abscissa with the smallest slack.
    pub worst: BoundReport,
    pub worst_at: f64,
    pub checked: usize,
    /// Abscissae where the inequality failed beyond tolerance.
    pub violations: Vec<f64>,
}

impl PointwiseReport {
    /// Builds the summary from `(x, lhs, rhs)` triples. Returns `None` for an empty set.
    pub fn collect(
        name: &str,
        relation: Relation,
        provenance: &str,
        tol: f64,
        points: impl IntoIterator<Item = (f64, f64, f64)>,
    ) -> Option<Self> {
        let mut worst: Option<(f64, BoundReport)> = None;
        let mut checked = 0;
        let mut violations = Vec::new();
        for (x, lhs, rhs) in points {
            checked += 1;
            let r = BoundReport::with_tolerance(name, lhs, relation, rhs, provenance, tol);
            if !r.satisfied {
                violations.push(x);
            }
            if worst.as_ref().map_or(true, |(_, w)| r.slack < w.slack) {
                worst = Some((x, r));
            }
        }
        let (worst_at, mut worst) = worst?;
        worst.satisfied = violations.is_empty();
        Some(PointwiseReport {
            worst: worst.with_note(format!("worst at {worst_at:.6e} of {checked} points")),
            worst_at,
            checked,
            violations,
        })
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Smallest and largest violating abscissa.
    pub fn violation_window(&self) -> Option<(f64, f64)> {
        let lo = self.violations.iter().copied().reduce(f64::min)?;
        let hi = self.violations.iter().copied().reduce(f64::max)?;
        Some((lo, hi))
    }
}

/// Serde adapter writing floats rounded to 12 significant digits.
///
/// Non-finite values become the strings `"inf"`, `"-inf"` and `"nan"`.
/// Rounding is idempotent, so parse-and-emit cycles are byte-stable.
pub mod sig12 {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn round(x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return x;
        }
        format!("{x:.11e}").parse().unwrap_or(x)
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_nan() {
            s.serialize_str("nan")
        } else if x.is_infinite() {
            s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(round(*x))
        }
    }

    struct F64Visitor;

    impl Visitor<'_> for F64Visitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                "nan" | "NaN" => Ok(f64::NAN),
                other => other.parse().map_err(E::custom),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(F64Visitor)
    }

    /// Text form used in CSV output.
    pub fn format(x: f64) -> String {
        if x.is_nan() {
            "nan".into()
        } else if x.is_infinite() {
            if x > 0.0 { "inf" } else { "-inf" }.into()
        } else {
            let r = round(x);
            // `{}` on f64 prints the shortest round-trip form.
            if r.abs() < 1e-4 || r.abs() >= 1e15 {
                format!("{r:e}")
            } else {
                format!("{r}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_signs() {
        assert_eq!(Relation::Ge.slack(2.0, 1.0), 1.0);
        assert_eq!(Relation::Le.slack(2.0, 1.0), -1.0);
        assert_eq!(Relation::Eq.slack(2.0, 1.0), -1.0);
        let r = BoundReport::new("x", 1.0 - 1e-12, Relation::Ge, 1.0, "test");
        assert!(r.satisfied);
        let r = BoundReport::new("x", 0.9, Relation::Ge, 1.0, "test");
        assert!(!r.satisfied && r.violated_guarantee());
        assert!(!r.clone().informational().violated_guarantee());
    }

    #[test]
    fn json_round_trip_is_stable() {
        let r = BoundReport::new("Gislason", 0.842_977_767_724_887_3, Relation::Ge, 1.0 / 3.0, "test");
        let a = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&a).unwrap();
        let b = serde_json::to_string(&back).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("0.842977767725"));
    }

    #[test]
    fn infinities_serialize_as_strings() {
        let r = BoundReport::new("x", f64::INFINITY, Relation::Ge, 1.0, "test");
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"lhs\":\"inf\""));
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert!(back.lhs.is_infinite());
    }

    #[test]
    fn pointwise_summary() {
        let pts = (0..10).map(|i| {
            let x = i as f64;
            (x, x, 5.0)
        });
        let p = PointwiseReport::collect("x", Relation::Ge, "test", 1e-9, pts).unwrap();
        assert_eq!(p.checked, 10);
        assert_eq!(p.violation_window(), Some((0.0, 4.0)));
        assert_eq!(p.worst_at, 0.0);
        assert!(!p.worst.satisfied);
    }
}
