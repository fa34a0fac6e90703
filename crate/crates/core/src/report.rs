//! Certificates and counterexamples.
//!
//! A check collects named defect polynomials. It certifies when every one of
//! them is identically zero; otherwise the first nonzero defect is evaluated
//! on a small grid of rational points to produce a witness.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::ratpoly::{format_rational, parse_rational, RatPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub label: String,
    pub location: String,
    pub poly: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub location: String,
    pub point: Vec<(String, Rational)>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub conditions: Vec<Condition>,
    pub defects: Vec<Defect>,
    pub checked: usize,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    /// Whether the condition with this label was checked and passed.
    pub fn passed(&self, label: &str) -> Option<bool> {
        self.conditions.iter().find(|c| c.label == label).map(|c| c.passed)
    }

    pub fn failed_labels(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let defects: Vec<_> = self
            .defects
            .iter()
            .map(|d| {
                serde_json::json!({
                    "label": d.label,
                    "location": d.location,
                    "defect": d.poly.to_string(),
                })
            })
            .collect();
        let witness = self.witness.as_ref().map(|w| {
            let point: serde_json::Map<String, serde_json::Value> = w
                .point
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(format_rational(v))))
                .collect();
            serde_json::json!({
                "label": w.label,
                "location": w.location,
                "point": point,
                "value": w.value,
            })
        });
        serde_json::json!({
            "name": self.name,
            "verdict": self.verdict,
            "conditions": self.conditions,
            "checked": self.checked,
            "defects": defects,
            "witness": witness,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.verdict {
            Verdict::Certified => "CERTIFIED",
            Verdict::Refuted => "REFUTED",
        };
        writeln!(f, "{}: {} ({} identities checked)", self.name, v, self.checked)?;
        for c in &self.conditions {
            writeln!(f, "  {:<16} {}", c.label, if c.passed { "ok" } else { "FAILED" })?;
        }
        for d in self.defects.iter().take(8) {
            writeln!(f, "  defect {} [{}] = {}", d.label, d.location, d.poly)?;
        }
        if self.defects.len() > 8 {
            writeln!(f, "  ... {} more defects", self.defects.len() - 8)?;
        }
        if let Some(w) = &self.witness {
            let pt: Vec<String> =
                w.point.iter().map(|(k, v)| format!("{k}={}", format_rational(v))).collect();
            writeln!(f, "  witness {} [{}] at ({}) -> {}", w.label, w.location, pt.join(", "), w.value)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates defects for one check.
#[derive(Debug)]
pub struct ReportBuilder {
    name: String,
    conditions: Vec<Condition>,
    defects: Vec<Defect>,
    checked: usize,
    witness: Option<Witness>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ReportBuilder {
            name: name.into(),
            conditions: Vec::new(),
            defects: Vec::new(),
            checked: 0,
            witness: None,
            notes: Vec::new(),
        }
    }

    /// Registers a condition so it shows up even when nothing fails.
    pub fn condition(&mut self, label: &str) -> &mut Self {
        if !self.conditions.iter().any(|c| c.label == label) {
            self.conditions.push(Condition { label: label.to_string(), passed: true });
        }
        self
    }

    fn mark_failed(&mut self, label: &str) {
        self.condition(label);
        for c in &mut self.conditions {
            if c.label == label {
                c.passed = false;
            }
        }
    }

    /// Records one identity `poly ≡ 0`.
    pub fn push(&mut self, label: &str, location: impl Into<String>, poly: RatPoly) {
        self.condition(label);
        self.checked += 1;
        if !poly.is_zero() {
            self.mark_failed(label);
            self.defects.push(Defect { label: label.to_string(), location: location.into(), poly });
        }
    }

    pub fn push_all(&mut self, label: &str, location: &str, polys: impl IntoIterator<Item = RatPoly>) {
        for (k, p) in polys.into_iter().enumerate() {
            self.push(label, format!("{location}[{k}]"), p);
        }
    }

    /// Records a failure observed at a fixed point (pointwise linear algebra).
    pub fn fail_at(&mut self, label: &str, location: impl Into<String>, point: Vec<(String, Rational)>, value: String) {
        self.checked += 1;
        self.mark_failed(label);
        if self.witness.is_none() {
            self.witness = Some(Witness { label: label.to_string(), location: location.into(), point, value });
        }
    }

    /// Records a pointwise identity that held.
    pub fn pass_at(&mut self, label: &str) {
        self.condition(label);
        self.checked += 1;
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    /// Folds a finished sub-report into this one.
    pub fn merge(&mut self, sub: CheckReport) {
        for c in sub.conditions {
            if c.passed {
                self.condition(&c.label);
            } else {
                self.mark_failed(&c.label);
            }
        }
        self.defects.extend(sub.defects);
        self.checked += sub.checked;
        if self.witness.is_none() {
            self.witness = sub.witness;
        }
        self.notes.extend(sub.notes);
    }

    pub fn finish(mut self) -> CheckReport {
        let failed = self.conditions.iter().any(|c| !c.passed);
        if failed && self.witness.is_none() {
            if let Some(d) = self.defects.first() {
                self.witness = Some(find_witness(d));
            }
        }
        CheckReport {
            name: self.name,
            verdict: if failed { Verdict::Refuted } else { Verdict::Certified },
            conditions: self.conditions,
            defects: self.defects,
            checked: self.checked,
            witness: self.witness,
            notes: self.notes,
        }
    }
}

const DEFAULT_GRID: [(i64, i64); 6] = [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1)];
const GRID_CAP: usize = 4096;

/// The witness grid, overridable with `GCK_WITNESS_GRID=0,1,-1/2,...`.
pub fn witness_grid() -> Vec<Rational> {
    if let Ok(s) = std::env::var("GCK_WITNESS_GRID") {
        let parsed: Option<Vec<Rational>> =
            s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_rational(t.trim()).ok()).collect();
        if let Some(v) = parsed {
            if !v.is_empty() {
                return v;
            }
        }
    }
    DEFAULT_GRID.iter().map(|&(n, d)| crate::ratpoly::rat(n, d)).collect()
}

fn find_witness(d: &Defect) -> Witness {
    let point = nonzero_point(&d.poly);
    let value = d.poly.eval(&point).expect("point matches variables");
    let names = d.poly.vars();
    Witness {
        label: d.label.clone(),
        location: d.location.clone(),
        point: names.iter().cloned().zip(point).collect(),
        value: format_rational(&value),
    }
}

/// A rational point where a nonzero polynomial does not vanish.
///
/// Searches the grid first (capped), then fixes one variable at a time with
/// a value that keeps the partially substituted polynomial nonzero, which
/// always terminates because a nonzero univariate slice has finitely many
/// roots.
pub fn nonzero_point(p: &RatPoly) -> Vec<Rational> {
    let n = p.vars().len();
    assert!(!p.is_zero(), "zero polynomial has no witness");
    let grid = witness_grid();
    let total = grid.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    let mut idx = vec![0usize; n];
    for _ in 0..total.min(GRID_CAP) {
        let pt: Vec<Rational> = idx.iter().map(|&i| grid[i].clone()).collect();
        if !p.eval(&pt).expect("length matches").is_zero() {
            return pt;
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < grid.len() {
                break;
            }
            *slot = 0;
        }
    }
    let vars = p.vars().clone();
    let mut cur = p.clone();
    let mut point = Vec::with_capacity(n);
    for i in 0..n {
        let candidates = grid.iter().cloned().chain((3..).map(crate::ratpoly::int));
        for c in candidates {
            let subs: Vec<RatPoly> = (0..n)
                .map(|j| if j == i { RatPoly::constant(&vars, c.clone()) } else { RatPoly::var(&vars, j) })
                .collect();
            let next = cur.compose(&subs, &vars).expect("same variables");
            if !next.is_zero() {
                cur = next;
                point.push(c);
                break;
            }
        }
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::vars;

    #[test]
    fn certified_when_all_zero() {
        let v = vars(&["x"]);
        let mut b = ReportBuilder::new("t");
        b.push("(a)", "0", RatPoly::zero(&v));
        let r = b.finish();
        assert!(r.certified());
        assert_eq!(r.passed("(a)"), Some(true));
        assert!(r.witness.is_none());
    }

    #[test]
    fn refuted_carries_witness() {
        let v = vars(&["x", "y"]);
        let p = RatPoly::parse("x - 2", &v).unwrap();
        let mut b = ReportBuilder::new("t");
        b.push("(b)", "0", p.clone());
        let r = b.finish();
        assert!(r.refuted());
        let w = r.witness.unwrap();
        let pt: Vec<Rational> = w.point.iter().map(|(_, q)| q.clone()).collect();
        assert!(!p.eval(&pt).unwrap().is_zero());
    }

    #[test]
    fn fallback_beats_grid_roots() {
        let v = vars(&["x"]);
        // vanishes on the whole default grid
        let p = RatPoly::parse("x*(x-1)*(x+1)*(2*x-1)*(2*x+1)*(x-2)", &v).unwrap();
        let pt = nonzero_point(&p);
        assert!(!p.eval(&pt).unwrap().is_zero());
    }
}
