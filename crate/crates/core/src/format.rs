//! JSON structure files: charts, named tensors with polynomial-string
//! components, and named structure bundles referencing them.
//!
//! ```json
//! {
//!   "charts": { "M": ["x", "y"] },
//!   "tensors": {
//!     "w": { "kind": "2form", "chart": "M", "components": { "x^y": "1" } },
//!     "a": { "kind": "endo", "chart": "M", "rows": [["1", "0"], ["0", "1"]] }
//!   },
//!   "structures": { "p": { "type": "hitchin", "omega": "w", "a": "a" } }
//! }
//! ```
//!
//! Printing is canonical: keys sorted, zero form components dropped,
//! polynomials in their display order. Parse then print is byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::courant::GeneralizedStructure;
use crate::error::{Error, Result};
use crate::groupoid::{HitchinGroupoidCandidate, PairGroupoid};
use crate::hitchin::HitchinPair;
use crate::morphism::GHolMapCandidate;
use crate::matrix::PolyMatrix;
use crate::tensor::{Bivector, Chart, EndoField, KForm, PolyMap, VectorField};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    charts: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    tensors: BTreeMap<String, RawTensor>,
    #[serde(default)]
    structures: BTreeMap<String, Bundle>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum RawTensor {
    #[serde(rename = "vector")]
    Vector { chart: String, components: Vec<String> },
    #[serde(rename = "1form")]
    OneForm { chart: String, components: Vec<String> },
    #[serde(rename = "2form")]
    TwoForm { chart: String, components: BTreeMap<String, String> },
    #[serde(rename = "3form")]
    ThreeForm { chart: String, components: BTreeMap<String, String> },
    #[serde(rename = "bivector")]
    Bivector { chart: String, components: BTreeMap<String, String> },
    #[serde(rename = "endo")]
    Endo { chart: String, rows: Vec<Vec<String>> },
    #[serde(rename = "map")]
    Map { source: String, target: String, components: Vec<String> },
}

/// A named structure; fields hold tensor or structure names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Bundle {
    Gcs { a: String, pi: String, sigma: String },
    Hitchin { omega: String, a: String },
    /// `source` and `target` name gcs bundles.
    Morphism { map: String, source: String, target: String },
    /// `base` names a hitchin bundle; `omega` and `j` live on the pair chart.
    Groupoid { base: String, omega: String, j: String, sigma: String },
}

impl Bundle {
    pub fn kind(&self) -> &'static str {
        match self {
            Bundle::Gcs { .. } => "gcs",
            Bundle::Hitchin { .. } => "hitchin",
            Bundle::Morphism { .. } => "morphism",
            Bundle::Groupoid { .. } => "groupoid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tensor {
    Vector(VectorField),
    Form(KForm),
    Bivector(Bivector),
    Endo(EndoField),
    Map(PolyMap),
}

impl Tensor {
    pub fn kind(&self) -> String {
        match self {
            Tensor::Vector(_) => "vector".into(),
            Tensor::Form(f) => format!("{}form", f.degree()),
            Tensor::Bivector(_) => "bivector".into(),
            Tensor::Endo(_) => "endo".into(),
            Tensor::Map(_) => "map".into(),
        }
    }

    fn chart(&self) -> &Chart {
        match self {
            Tensor::Vector(v) => v.chart(),
            Tensor::Form(f) => f.chart(),
            Tensor::Bivector(b) => b.chart(),
            Tensor::Endo(e) => e.chart(),
            Tensor::Map(m) => m.source(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFile {
    charts: BTreeMap<String, Chart>,
    tensors: BTreeMap<String, Tensor>,
    structures: BTreeMap<String, Bundle>,
}

fn resolution(what: impl Into<String>) -> Error {
    Error::Resolution(what.into())
}

/// serde_json reports line and column; convert to a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn wedge_key(chart: &Chart, idx: &[usize]) -> String {
    idx.iter().map(|&i| chart.coords()[i].as_str()).collect::<Vec<_>>().join("^")
}

fn parse_wedge_key(chart: &Chart, key: &str) -> Result<Vec<usize>> {
    key.split('^')
        .map(|name| {
            let name = name.trim();
            chart.coords().iter().position(|c| c == name).ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
        })
        .collect()
}

/// A form from `"x^y" → polynomial` entries; keys need not be increasing.
pub fn form_from_map(chart: &Chart, degree: usize, comps: &BTreeMap<String, String>) -> Result<KForm> {
    let entries = comps
        .iter()
        .map(|(k, v)| Ok((parse_wedge_key(chart, k)?, chart.poly(v)?)))
        .collect::<Result<Vec<_>>>()?;
    KForm::from_entries(chart, degree, entries)
}

/// Nonzero components keyed by wedge products of coordinate names.
pub fn form_to_map(f: &KForm) -> BTreeMap<String, String> {
    f.indexed().filter(|(_, p)| !p.is_zero()).map(|(idx, p)| (wedge_key(f.chart(), &idx), p.to_string())).collect()
}

fn polys(chart: &Chart, comps: &[String]) -> Result<Vec<crate::ratpoly::RatPoly>> {
    comps.iter().map(|s| chart.poly(s)).collect()
}

fn strings(comps: &[crate::ratpoly::RatPoly]) -> Vec<String> {
    comps.iter().map(ToString::to_string).collect()
}

impl StructureFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse { pos: byte_offset(text, e.line(), e.column()), msg: e.to_string() })?;
        let mut file = StructureFile::new();
        for (name, coords) in &raw.charts {
            file.add_chart(name, Chart::new(coords)?)?;
        }
        for (name, t) in &raw.tensors {
            let tensor = file.lower(t)?;
            file.tensors.insert(name.clone(), tensor);
        }
        file.structures = raw.structures;
        file.validate()?;
        Ok(file)
    }

    fn chart_named(&self, name: &str) -> Result<&Chart> {
        self.charts.get(name).ok_or_else(|| resolution(format!("chart `{name}`")))
    }

    fn lower(&self, t: &RawTensor) -> Result<Tensor> {
        Ok(match t {
            RawTensor::Vector { chart, components } => {
                let c = self.chart_named(chart)?;
                Tensor::Vector(VectorField::new(c, polys(c, components)?)?)
            }
            RawTensor::OneForm { chart, components } => {
                let c = self.chart_named(chart)?;
                Tensor::Form(KForm::one_form(c, polys(c, components)?)?)
            }
            RawTensor::TwoForm { chart, components } => {
                Tensor::Form(form_from_map(self.chart_named(chart)?, 2, components)?)
            }
            RawTensor::ThreeForm { chart, components } => {
                Tensor::Form(form_from_map(self.chart_named(chart)?, 3, components)?)
            }
            RawTensor::Bivector { chart, components } => {
                Tensor::Bivector(Bivector::from_form(&form_from_map(self.chart_named(chart)?, 2, components)?))
            }
            RawTensor::Endo { chart, rows } => {
                let c = self.chart_named(chart)?;
                let rows = rows.iter().map(|r| polys(c, r)).collect::<Result<Vec<_>>>()?;
                Tensor::Endo(EndoField::new(c, PolyMatrix::from_rows(c.vars(), rows)?)?)
            }
            RawTensor::Map { source, target, components } => {
                let (s, t) = (self.chart_named(source)?, self.chart_named(target)?);
                Tensor::Map(PolyMap::new(s, t, polys(s, components)?)?)
            }
        })
    }

    /// Chart name for a chart object, preferring the first in key order.
    fn name_of(&self, chart: &Chart) -> Result<&str> {
        self.charts
            .iter()
            .find(|(_, c)| *c == chart)
            .map(|(n, _)| n.as_str())
            .ok_or_else(|| resolution(format!("chart ({})", chart.coords().join(", "))))
    }

    fn raise(&self, t: &Tensor) -> Result<RawTensor> {
        let chart = self.name_of(t.chart())?.to_string();
        Ok(match t {
            Tensor::Vector(v) => RawTensor::Vector { chart, components: strings(v.comps()) },
            Tensor::Form(f) => match f.degree() {
                1 => RawTensor::OneForm { chart, components: strings(f.comps()) },
                2 => RawTensor::TwoForm { chart, components: form_to_map(f) },
                3 => RawTensor::ThreeForm { chart, components: form_to_map(f) },
                k => return Err(Error::InvalidArgument(format!("cannot store a {k}-form"))),
            },
            Tensor::Bivector(b) => RawTensor::Bivector { chart, components: form_to_map(&b.as_form()) },
            Tensor::Endo(e) => RawTensor::Endo {
                chart,
                rows: (0..e.matrix().rows()).map(|r| strings(e.matrix().row(r))).collect(),
            },
            Tensor::Map(m) => RawTensor::Map {
                source: chart,
                target: self.name_of(m.target())?.to_string(),
                components: strings(m.comps()),
            },
        })
    }

    pub fn to_canonical_string(&self) -> Result<String> {
        let raw = RawFile {
            charts: self.charts.iter().map(|(n, c)| (n.clone(), c.coords().to_vec())).collect(),
            tensors: self.tensors.iter().map(|(n, t)| Ok((n.clone(), self.raise(t)?))).collect::<Result<_>>()?,
            structures: self.structures.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn add_chart(&mut self, name: &str, chart: Chart) -> Result<()> {
        match self.charts.get(name) {
            Some(c) if *c != chart => Err(resolution(format!("chart `{name}` declared twice"))),
            _ => {
                self.charts.insert(name.to_string(), chart);
                Ok(())
            }
        }
    }

    /// Adds a tensor; its chart (and a map's target) must already be declared.
    pub fn add_tensor(&mut self, name: &str, t: Tensor) -> Result<()> {
        self.name_of(t.chart())?;
        if let Tensor::Map(m) = &t {
            self.name_of(m.target())?;
        }
        self.tensors.insert(name.to_string(), t);
        Ok(())
    }

    pub fn add_structure(&mut self, name: &str, b: Bundle) -> Result<()> {
        self.structures.insert(name.to_string(), b);
        self.validate()
    }

    pub fn charts(&self) -> &BTreeMap<String, Chart> {
        &self.charts
    }

    pub fn tensors(&self) -> &BTreeMap<String, Tensor> {
        &self.tensors
    }

    pub fn structures(&self) -> &BTreeMap<String, Bundle> {
        &self.structures
    }

    pub fn tensor(&self, name: &str) -> Result<&Tensor> {
        self.tensors.get(name).ok_or_else(|| resolution(format!("tensor `{name}`")))
    }

    pub fn bundle(&self, name: &str) -> Result<&Bundle> {
        self.structures.get(name).ok_or_else(|| resolution(format!("structure `{name}`")))
    }

    /// The chart name a tensor lives on.
    pub fn chart_of(&self, tensor: &str) -> Result<&str> {
        self.name_of(self.tensor(tensor)?.chart())
    }

    fn expect_kind(&self, name: &str, kind: &str) -> Result<&Tensor> {
        let t = self.tensor(name)?;
        if t.kind() == kind {
            Ok(t)
        } else {
            Err(resolution(format!("tensor `{name}` is a {}, expected {kind}", t.kind())))
        }
    }

    pub fn form(&self, name: &str, degree: usize) -> Result<KForm> {
        match self.expect_kind(name, &format!("{degree}form"))? {
            Tensor::Form(f) => Ok(f.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn endo(&self, name: &str) -> Result<EndoField> {
        match self.expect_kind(name, "endo")? {
            Tensor::Endo(e) => Ok(e.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn bivector(&self, name: &str) -> Result<Bivector> {
        match self.expect_kind(name, "bivector")? {
            Tensor::Bivector(b) => Ok(b.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn map(&self, name: &str) -> Result<PolyMap> {
        match self.expect_kind(name, "map")? {
            Tensor::Map(m) => Ok(m.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    fn expect_bundle(&self, name: &str, kind: &str) -> Result<&Bundle> {
        let b = self.bundle(name)?;
        if b.kind() == kind {
            Ok(b)
        } else {
            Err(resolution(format!("structure `{name}` is {}, expected {kind}", b.kind())))
        }
    }

    pub fn gcs(&self, name: &str) -> Result<GeneralizedStructure> {
        match self.expect_bundle(name, "gcs")? {
            Bundle::Gcs { a, pi, sigma } => GeneralizedStructure::new(self.endo(a)?, self.bivector(pi)?, self.form(sigma, 2)?),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn hitchin(&self, name: &str) -> Result<HitchinPair> {
        match self.expect_bundle(name, "hitchin")? {
            Bundle::Hitchin { omega, a } => HitchinPair::new(self.form(omega, 2)?, self.endo(a)?),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn morphism(&self, name: &str) -> Result<GHolMapCandidate> {
        match self.expect_bundle(name, "morphism")? {
            Bundle::Morphism { map, source, target } => {
                GHolMapCandidate::new(self.map(map)?, self.gcs(source)?, self.gcs(target)?)
            }
            _ => unreachable!("kind checked"),
        }
    }

    pub fn groupoid(&self, name: &str) -> Result<HitchinGroupoidCandidate> {
        match self.expect_bundle(name, "groupoid")? {
            Bundle::Groupoid { base, omega, j, sigma } => {
                let base = self.hitchin(base)?;
                let groupoid = PairGroupoid::new(base.chart())?;
                let omega = self.form(omega, 2)?;
                let j = self.endo(j)?;
                groupoid.total.ensure_same(omega.chart())?;
                groupoid.total.ensure_same(j.chart())?;
                let sigma = self.form(sigma, 2)?;
                base.chart().ensure_same(sigma.chart())?;
                Ok(HitchinGroupoidCandidate { groupoid, omega, j, sigma, base })
            }
            _ => unreachable!("kind checked"),
        }
    }

    /// Every structure resolves with the right tensor kinds.
    pub fn validate(&self) -> Result<()> {
        for name in self.structures.keys() {
            match self.bundle(name)? {
                Bundle::Gcs { .. } => self.gcs(name).map(drop)?,
                Bundle::Hitchin { .. } => self.hitchin(name).map(drop)?,
                Bundle::Morphism { .. } => self.morphism(name).map(drop)?,
                Bundle::Groupoid { .. } => self.groupoid(name).map(drop)?,
            }
        }
        Ok(())
    }
}
