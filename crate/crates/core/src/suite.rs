//! Check suites and conversions on named structures of a [`StructureFile`].

use std::fmt;
use std::str::FromStr;

use crate::algebroid::{check_im_form, IMFormCandidate, PoissonAlgebroid};
use crate::courant::{check_gcs, dirac_check, gauge, is_closed, opposite, GeneralizedStructure};
use crate::error::{Error, Result};
use crate::format::{Bundle, StructureFile, Tensor};
use crate::groupoid::{
    build_pair_hitchin_groupoid, check_hitchin_groupoid, check_ts_gholomorphic, isotropy_complex_check,
    right_invariant_identity, HitchinGroupoidCandidate,
};
use crate::hitchin::{check_hitchin_pair, gcs_to_hitchin, hitchin_to_gcs, sc_structure_check, HitchinPair};
use crate::morphism::check_gholomorphic;
use crate::ratpoly::int;
use crate::report::{CheckReport, ReportBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Gcs,
    Hitchin,
    Sc,
    Dirac,
    Im,
    Morphism,
    Groupoid,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Gcs, Suite::Hitchin, Suite::Sc, Suite::Dirac, Suite::Im, Suite::Morphism, Suite::Groupoid];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gcs => "gcs",
            Suite::Hitchin => "hitchin",
            Suite::Sc => "sc",
            Suite::Dirac => "dirac",
            Suite::Im => "im",
            Suite::Morphism => "morphism",
            Suite::Groupoid => "groupoid",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

fn groupoid_candidate(file: &StructureFile, target: &str) -> Result<HitchinGroupoidCandidate> {
    match file.bundle(target)? {
        Bundle::Hitchin { .. } => build_pair_hitchin_groupoid(&file.hitchin(target)?),
        _ => file.groupoid(target),
    }
}

/// Runs one suite on a named structure.
pub fn run_suite(file: &StructureFile, target: &str, suite: Suite) -> Result<CheckReport> {
    match suite {
        Suite::Gcs => check_gcs(&file.gcs(target)?),
        Suite::Hitchin => check_hitchin_pair(&file.hitchin(target)?),
        Suite::Sc => {
            let p = file.hitchin(target)?;
            sc_structure_check(&p.omega, &p.a)
        }
        Suite::Dirac => {
            let s = file.gcs(target)?;
            dirac_check(&s.pi, &s.a)
        }
        Suite::Im => {
            let s = file.gcs(target)?;
            let alg = PoissonAlgebroid::new(s.pi.clone())?;
            check_im_form(&alg, &IMFormCandidate::dual_of(&s.a))
        }
        Suite::Morphism => check_gholomorphic(&file.morphism(target)?),
        Suite::Groupoid => {
            let c = groupoid_candidate(file, target)?;
            let origin = vec![int(0); c.groupoid.dim()];
            let mut b = ReportBuilder::new("pair Hitchin groupoid");
            b.merge(check_hitchin_groupoid(&c)?);
            b.merge(check_ts_gholomorphic(&c)?);
            b.merge(isotropy_complex_check(&c, &origin)?);
            b.merge(right_invariant_identity(&c)?);
            Ok(b.finish())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvertOp {
    HitchinToGcs,
    GcsToHitchin,
    Opposite,
    Gauge,
    BuildGroupoid,
}

impl ConvertOp {
    pub const ALL: [ConvertOp; 5] =
        [ConvertOp::HitchinToGcs, ConvertOp::GcsToHitchin, ConvertOp::Opposite, ConvertOp::Gauge, ConvertOp::BuildGroupoid];

    pub fn name(self) -> &'static str {
        match self {
            ConvertOp::HitchinToGcs => "hitchin-to-gcs",
            ConvertOp::GcsToHitchin => "gcs-to-hitchin",
            ConvertOp::Opposite => "opposite",
            ConvertOp::Gauge => "gauge",
            ConvertOp::BuildGroupoid => "build-groupoid",
        }
    }

    /// The suite an input must pass before conversion.
    fn precondition(self) -> Suite {
        match self {
            ConvertOp::HitchinToGcs | ConvertOp::BuildGroupoid => Suite::Hitchin,
            _ => Suite::Gcs,
        }
    }
}

impl FromStr for ConvertOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvertOp::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown conversion `{s}`")))
    }
}

fn emit_gcs(out: &mut StructureFile, target: &str, s: &GeneralizedStructure) -> Result<()> {
    let names = [format!("{target}_a"), format!("{target}_pi"), format!("{target}_sigma")];
    out.add_tensor(&names[0], Tensor::Endo(s.a.clone()))?;
    out.add_tensor(&names[1], Tensor::Bivector(s.pi.clone()))?;
    out.add_tensor(&names[2], Tensor::Form(s.sigma.clone()))?;
    let [a, pi, sigma] = names;
    out.add_structure(target, Bundle::Gcs { a, pi, sigma })
}

fn emit_hitchin(out: &mut StructureFile, target: &str, p: &HitchinPair) -> Result<()> {
    let (omega, a) = (format!("{target}_omega"), format!("{target}_a"));
    out.add_tensor(&omega, Tensor::Form(p.omega.clone()))?;
    out.add_tensor(&a, Tensor::Endo(p.a.clone()))?;
    out.add_structure(target, Bundle::Hitchin { omega, a })
}

/// Converts a named structure. The output holds the charts it needs, the
/// new tensors named `{target}_{role}` and a structure named `target`.
pub fn convert(file: &StructureFile, target: &str, op: ConvertOp, b: Option<&str>, force: bool) -> Result<StructureFile> {
    if !force {
        let r = run_suite(file, target, op.precondition())?;
        if r.refuted() {
            return Err(Error::Precondition(format!(
                "`{target}` is refuted ({}); pass --force to convert anyway",
                r.failed_labels().join(", ")
            )));
        }
    }
    let chart_name = match file.bundle(target)? {
        Bundle::Gcs { a, .. } | Bundle::Hitchin { a, .. } => file.chart_of(a)?.to_string(),
        other => return Err(Error::Resolution(format!("cannot convert a {} structure", other.kind()))),
    };
    let mut out = StructureFile::new();
    out.add_chart(&chart_name, file.charts()[&chart_name].clone())?;
    match op {
        ConvertOp::HitchinToGcs => emit_gcs(&mut out, target, &hitchin_to_gcs(&file.hitchin(target)?)?)?,
        ConvertOp::GcsToHitchin => emit_hitchin(&mut out, target, &gcs_to_hitchin(&file.gcs(target)?)?)?,
        ConvertOp::Opposite => emit_gcs(&mut out, target, &opposite(&file.gcs(target)?))?,
        ConvertOp::Gauge => {
            let name = b.ok_or_else(|| Error::InvalidArgument("gauge needs --B <2-form name>".into()))?;
            let bf = file.form(name, 2)?;
            if !is_closed(&bf) {
                return Err(Error::NonClosedB);
            }
            emit_gcs(&mut out, target, &gauge(&file.gcs(target)?, &bf)?)?
        }
        ConvertOp::BuildGroupoid => {
            let c = build_pair_hitchin_groupoid(&file.hitchin(target)?)?;
            out.add_chart(&format!("{chart_name}_pair"), c.groupoid.total.clone())?;
            let base = format!("{target}_base");
            emit_hitchin(&mut out, &base, &c.base)?;
            let (omega, j, sigma) = (format!("{target}_omega"), format!("{target}_j"), format!("{target}_sigma"));
            out.add_tensor(&omega, Tensor::Form(c.omega))?;
            out.add_tensor(&j, Tensor::Endo(c.j))?;
            out.add_tensor(&sigma, Tensor::Form(c.sigma))?;
            out.add_structure(target, Bundle::Groupoid { base, omega, j, sigma })?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HITCHIN_ID: &str = r#"{
      "charts": { "M": ["x", "y"] },
      "tensors": {
        "w": { "kind": "2form", "chart": "M", "components": { "x^y": "1" } },
        "id": { "kind": "endo", "chart": "M", "rows": [["1", "0"], ["0", "1"]] },
        "b": { "kind": "2form", "chart": "M", "components": { "x^y": "x^2 + y" } }
      },
      "structures": { "p": { "type": "hitchin", "omega": "w", "a": "id" } }
    }"#;

    #[test]
    fn convert_then_check() {
        let f = StructureFile::parse(HITCHIN_ID).unwrap();
        assert!(run_suite(&f, "p", Suite::Hitchin).unwrap().certified());
        let g = convert(&f, "p", ConvertOp::HitchinToGcs, None, false).unwrap();
        assert!(run_suite(&g, "p", Suite::Gcs).unwrap().certified());
        let text = g.to_canonical_string().unwrap();
        assert_eq!(StructureFile::parse(&text).unwrap(), g);

        let back = convert(&g, "p", ConvertOp::GcsToHitchin, None, false).unwrap();
        assert_eq!(back.hitchin("p").unwrap(), f.hitchin("p").unwrap());

        let once = convert(&g, "p", ConvertOp::Opposite, None, false).unwrap();
        let thrice = convert(
            &convert(&once, "p", ConvertOp::Opposite, None, false).unwrap(),
            "p",
            ConvertOp::Opposite,
            None,
            false,
        )
        .unwrap();
        assert_eq!(once.to_canonical_string().unwrap(), thrice.to_canonical_string().unwrap());
    }

    #[test]
    fn groupoid_suite_and_build() {
        let f = StructureFile::parse(HITCHIN_ID).unwrap();
        assert!(run_suite(&f, "p", Suite::Groupoid).unwrap().certified());
        let g = convert(&f, "p", ConvertOp::BuildGroupoid, None, false).unwrap();
        let text = g.to_canonical_string().unwrap();
        let g2 = StructureFile::parse(&text).unwrap();
        assert!(run_suite(&g2, "p", Suite::Groupoid).unwrap().certified());
        assert!(run_suite(&g2, "p_base", Suite::Sc).is_ok());
    }

    #[test]
    fn gauge_requires_closed_b() {
        let f = StructureFile::parse(HITCHIN_ID).unwrap();
        let g = convert(&f, "p", ConvertOp::HitchinToGcs, None, false).unwrap();
        let mut with_b = g.clone();
        with_b.add_tensor("b", f.tensor("b").unwrap().clone()).unwrap();
        let gauged = convert(&with_b, "p", ConvertOp::Gauge, Some("b"), false).unwrap();
        assert!(run_suite(&gauged, "p", Suite::Gcs).unwrap().certified());
        assert!(matches!(convert(&with_b, "p", ConvertOp::Gauge, None, false), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn refuses_refuted_input() {
        let bad = HITCHIN_ID.replace("[\"0\", \"1\"]]", "[\"0\", \"x\"]]");
        let f = StructureFile::parse(&bad).unwrap();
        assert!(run_suite(&f, "p", Suite::Hitchin).unwrap().refuted());
        assert!(matches!(convert(&f, "p", ConvertOp::HitchinToGcs, None, false), Err(Error::Precondition(_))));
        assert!(convert(&f, "p", ConvertOp::HitchinToGcs, None, true).is_ok());
    }

    #[test]
    fn suite_kind_mismatch_is_resolution_error() {
        let f = StructureFile::parse(HITCHIN_ID).unwrap();
        assert!(matches!(run_suite(&f, "p", Suite::Gcs), Err(Error::Resolution(_))));
        assert!(matches!(run_suite(&f, "q", Suite::Hitchin), Err(Error::Resolution(_))));
    }
}
