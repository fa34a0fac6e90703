//! Generalized holomorphic maps, Hitchin realizations and pointwise checks
//! along fibers.

use num_traits::Zero;

use crate::courant::GeneralizedStructure;
use crate::error::{Error, Result};
use crate::hitchin::{check_hitchin_pair, hitchin_to_gcs, HitchinPair};
use crate::matrix::QMatrix;
use crate::ratpoly::{format_rational, Rational};
use crate::report::{CheckReport, ReportBuilder};
use crate::tensor::{push_bivector_defects, pullback, torsion, KForm, PolyMap, VectorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GHolMapCandidate {
    pub f: PolyMap,
    pub source: GeneralizedStructure,
    pub target: GeneralizedStructure,
}

impl GHolMapCandidate {
    pub fn new(f: PolyMap, source: GeneralizedStructure, target: GeneralizedStructure) -> Result<Self> {
        f.source().ensure_same(source.chart())?;
        f.target().ensure_same(target.chart())?;
        Ok(GHolMapCandidate { f, source, target })
    }
}

/// `f` relates the bivectors, pulls `σ₂` back to `σ₁`, and intertwines
/// `a₁` with `a₂`.
pub fn check_gholomorphic(c: &GHolMapCandidate) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("generalized holomorphic map");
    b.condition("(pi)").condition("(sigma)").condition("(a)");
    push_bivector_defects(&mut b, "(pi)", &c.f, &c.source.pi, &c.target.pi)?;
    let pulled = pullback(&c.f, &c.target.sigma)?;
    for (idx, p) in c.source.sigma.sub(&pulled).indexed() {
        b.push("(sigma)", format!("{idx:?}"), p.clone());
    }
    let df = c.f.jacobian();
    let lhs = &df * c.source.a.matrix();
    let rhs = &c.f.pull_matrix(c.target.a.matrix())? * &df;
    for ((r, col), p) in (&lhs - &rhs).entries() {
        b.push("(a)", format!("{r},{col}"), p.clone());
    }
    Ok(b.finish())
}

/// `μ` is generalized holomorphic from the structure of the Hitchin pair.
pub fn check_hitchin_realization(
    mu: &PolyMap,
    pair: &HitchinPair,
    target: &GeneralizedStructure,
) -> Result<CheckReport> {
    let pre = check_hitchin_pair(pair)?;
    if pre.refuted() {
        return Err(Error::Precondition(format!("not a Hitchin pair: {}", pre.failed_labels().join(", "))));
    }
    let c = GHolMapCandidate::new(mu.clone(), hitchin_to_gcs(pair)?, target.clone())?;
    check_gholomorphic(&c)
}

fn labelled(names: &[String], point: &[Rational]) -> Vec<(String, Rational)> {
    names.iter().cloned().zip(point.iter().cloned()).collect()
}

fn constant_field(chart: &crate::tensor::Chart, v: &[Rational]) -> VectorField {
    VectorField::new(chart, v.iter().map(|q| chart.constant(q.clone())).collect()).expect("dimension matches")
}

/// At a regular point: `a₁` preserves `Ker df`, squares to `−Id` there, and
/// its torsion vanishes on kernel directions.
pub fn fiber_complex_check(c: &GHolMapCandidate, point: &[Rational]) -> Result<CheckReport> {
    let src = c.f.source();
    if point.len() != src.dim() {
        return Err(Error::DimensionMismatch { expected: src.dim(), got: point.len() });
    }
    let df = c.f.jacobian().eval(point)?;
    let full = df.rows().min(df.cols());
    if df.rank() != full {
        return Err(Error::NotRegularPoint(format!("Jacobian rank {} < {}", df.rank(), full)));
    }
    let kernel = df.kernel();
    let a = c.source.a.matrix().eval(point)?;
    let at = labelled(src.coords(), point);
    let mut b = ReportBuilder::new("fiber complex structure");
    b.condition("(a preserves ker)").condition("(a^2 = -1 on ker)").condition("(N_a on ker)");
    if kernel.is_empty() {
        b.note("kernel is zero; fiber conditions hold vacuously");
    }
    for (k, v) in kernel.iter().enumerate() {
        let av = a.mul_vec(v);
        if df.mul_vec(&av).iter().all(Zero::is_zero) {
            b.pass_at("(a preserves ker)");
        } else {
            b.fail_at("(a preserves ker)", format!("k{k}"), at.clone(), "df(a v) != 0".into());
        }
        let aav = a.mul_vec(&av);
        if aav.iter().zip(v).all(|(x, y)| (x + y).is_zero()) {
            b.pass_at("(a^2 = -1 on ker)");
        } else {
            b.fail_at("(a^2 = -1 on ker)", format!("k{k}"), at.clone(), "a^2 v != -v".into());
        }
    }
    for (p, u) in kernel.iter().enumerate() {
        for (q, v) in kernel.iter().enumerate().skip(p + 1) {
            let n = torsion(&c.source.a, &constant_field(src, u), &constant_field(src, v))?.eval(point)?;
            if n.iter().all(Zero::is_zero) {
                b.pass_at("(N_a on ker)");
            } else {
                let shown: Vec<String> = n.iter().map(format_rational).collect();
                b.fail_at("(N_a on ker)", format!("k{p},k{q}"), at.clone(), format!("N = ({})", shown.join(", ")));
            }
        }
    }
    Ok(b.finish())
}

/// `i_{ρ(α)}ω − μ*α` at a point of the source, for a covector `α` at
/// `μ(point)` lying in `Ker π♯` of the target bivector.
pub fn moment_map_defect(
    mu: &PolyMap,
    omega: &KForm,
    target_pi: &crate::tensor::Bivector,
    point: &[Rational],
    alpha: &[Rational],
    rho_alpha: &VectorField,
) -> Result<Vec<Rational>> {
    mu.source().ensure_same(omega.chart())?;
    mu.target().ensure_same(target_pi.chart())?;
    if alpha.len() != mu.target().dim() {
        return Err(Error::DimensionMismatch { expected: mu.target().dim(), got: alpha.len() });
    }
    let image = mu.eval(point)?;
    let p = target_pi.sharp().eval(&image)?;
    if !p.mul_vec(alpha).iter().all(Zero::is_zero) {
        return Err(Error::NotInIsotropyKernel);
    }
    let s = omega.sharp().eval(point)?;
    let rho = rho_alpha.eval(point)?;
    let lhs = s.mul_vec(&rho);
    let dmu: QMatrix = mu.jacobian().eval(point)?;
    let pulled = dmu.transpose().mul_vec(alpha);
    Ok(lhs.iter().zip(&pulled).map(|(x, y)| x - y).collect())
}
