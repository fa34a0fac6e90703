//! Hitchin pairs `(ω, a)` and their correspondence with non-degenerate
//! generalized complex structures.

use crate::courant::GeneralizedStructure;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ratpoly::RatPoly;
use crate::report::{CheckReport, ReportBuilder};
use crate::tensor::{
    combinations, contract_first, double_pullback, exterior_d, interior, interior2, invert_2form, invert_bivector,
    torsion, Chart, EndoField, KForm, VectorField,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinPair {
    pub omega: KForm,
    pub a: EndoField,
}

impl HitchinPair {
    pub fn new(omega: KForm, a: EndoField) -> Result<Self> {
        omega.chart().ensure_same(a.chart())?;
        if omega.degree() != 2 {
            return Err(Error::InvalidArgument("ω must be a 2-form".into()));
        }
        Ok(HitchinPair { omega, a })
    }

    pub fn chart(&self) -> &Chart {
        self.omega.chart()
    }
}

/// `ω_a(X, Y) = ω(aX, Y)`; requires `ω(aX, Y) = ω(X, aY)`.
pub fn omega_a(omega: &KForm, a: &EndoField) -> Result<KForm> {
    omega.chart().ensure_same(a.chart())?;
    let (form, defect) = contract_first(omega, a);
    if defect.is_zero() {
        Ok(form)
    } else {
        Err(Error::CommutationFailure)
    }
}

fn push_commutation(b: &mut ReportBuilder, label: &str, omega: &KForm, a: &EndoField) {
    let (_, defect) = contract_first(omega, a);
    for ((r, c), p) in defect.entries() {
        b.push(label, format!("{r},{c}"), p.clone());
    }
}

fn push_nondegenerate(b: &mut ReportBuilder, omega: &KForm) {
    let det = omega.sharp().determinant();
    let chart = omega.chart();
    // constant nonzero determinant ⇔ (det − det(0)) ≡ 0 and det(0) ≠ 0
    let at_origin = det.eval(&vec![crate::ratpoly::int(0); chart.dim()]).expect("chart point");
    let varying = &det - &chart.constant(at_origin.clone());
    if !varying.is_zero() {
        b.push("(nondegenerate)", "det varies", varying);
    } else if num_traits::Zero::is_zero(&at_origin) {
        b.push("(nondegenerate)", "det = 0", chart.one());
    } else {
        b.push("(nondegenerate)", "det", chart.zero());
    }
}

fn push_closed(b: &mut ReportBuilder, label: &str, f: &KForm) {
    let d = exterior_d(f);
    for (idx, c) in d.indexed() {
        b.push(label, format!("{idx:?}"), c.clone());
    }
    b.condition(label);
}

/// Closedness, polynomial non-degeneracy, commutation and `dω_a = 0`.
pub fn check_hitchin_pair(p: &HitchinPair) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("Hitchin pair");
    push_closed(&mut b, "(d omega)", &p.omega);
    push_nondegenerate(&mut b, &p.omega);
    push_commutation(&mut b, "(commute)", &p.omega, &p.a);
    let (wa, _) = contract_first(&p.omega, &p.a);
    push_closed(&mut b, "(d omega_a)", &wa);
    Ok(b.finish())
}

/// `σ = −(ω + a*ω)` with `a*ω(X, Y) = ω(aX, aY)`.
pub fn twist(p: &HitchinPair) -> KForm {
    p.omega.add(&double_pullback(&p.omega, &p.a)).neg()
}

/// `(a, ω⁻¹, twist)`.
pub fn hitchin_to_gcs(p: &HitchinPair) -> Result<GeneralizedStructure> {
    let pi = invert_2form(&p.omega)?;
    GeneralizedStructure::new(p.a.clone(), pi, twist(p))
}

/// `(π⁻¹, a)`; fails with `DegeneratePi` unless `π♯` is polynomially
/// invertible.
pub fn gcs_to_hitchin(s: &GeneralizedStructure) -> Result<HitchinPair> {
    let omega = invert_bivector(&s.pi)?;
    HitchinPair::new(omega, s.a.clone())
}

/// `i_{𝒩_a(X,Y)}ω − i_{aX∧Y + X∧aY}dω_a + i_{aX∧aY}dω + i_{X∧Y}d(a*ω)` on
/// coordinate pairs, as `(location, 1-form)` entries.
pub fn torsion_identity_defect(omega: &KForm, a: &EndoField) -> Result<Vec<(String, KForm)>> {
    let wa = omega_a(omega, a)?;
    let chart = omega.chart();
    let dwa = exterior_d(&wa);
    let dw = exterior_d(omega);
    let dastar = exterior_d(&double_pullback(omega, a));
    let mut out = Vec::new();
    for ij in combinations(chart.dim(), 2).iter() {
        let (x, y) = (VectorField::basis(chart, ij[0]), VectorField::basis(chart, ij[1]));
        let (ax, ay) = (a.apply(&x), a.apply(&y));
        let lhs = interior(&torsion(a, &x, &y)?, omega)?;
        let rhs = interior2(&ax, &y, &dwa)?
            .add(&interior2(&x, &ay, &dwa)?)
            .sub(&interior2(&ax, &ay, &dw)?)
            .sub(&interior2(&x, &y, &dastar)?);
        out.push((format!("d{},d{}", ij[0], ij[1]), lhs.sub(&rhs)));
    }
    Ok(out)
}

fn j_squared_defect(j: &EndoField) -> PolyMatrix {
    let m = j.matrix();
    &(m * m) + &PolyMatrix::identity(m.vars(), m.rows())
}

fn push_torsion_free(b: &mut ReportBuilder, j: &EndoField) -> Result<()> {
    let chart = j.chart();
    b.condition("(N_J)");
    for ij in combinations(chart.dim(), 2).iter() {
        let (x, y) = (VectorField::basis(chart, ij[0]), VectorField::basis(chart, ij[1]));
        b.push_all("(N_J)", &format!("d{},d{}", ij[0], ij[1]), torsion(j, &x, &y)?.comps().to_vec());
    }
    Ok(())
}

/// `2dω_J(X,Y,Z) − dω(JX,Y,Z) − dω(X,JY,Z) − dω(X,Y,JZ) − dω(JX,JY,JZ)` on
/// coordinate triples. The preconditions `J² = −Id`, `𝒩_J = 0` and
/// commutation are certified first.
pub fn complex_commuting_defect(j: &EndoField, omega: &KForm) -> Result<Vec<(String, RatPoly)>> {
    j.chart().ensure_same(omega.chart())?;
    let mut pre = ReportBuilder::new("preconditions");
    for ((r, c), p) in j_squared_defect(j).entries() {
        pre.push("(J^2)", format!("{r},{c}"), p.clone());
    }
    push_torsion_free(&mut pre, j)?;
    push_commutation(&mut pre, "(commute)", omega, j);
    let pre = pre.finish();
    if pre.refuted() {
        return Err(Error::Precondition(format!("failed {}", pre.failed_labels().join(", "))));
    }
    let chart = j.chart();
    let dwj = exterior_d(&omega_a(omega, j)?);
    let dw = exterior_d(omega);
    let mut out = Vec::new();
    for ijk in combinations(chart.dim(), 3).iter() {
        let [x, y, z] = [0, 1, 2].map(|t| VectorField::basis(chart, ijk[t]));
        let (jx, jy, jz) = (j.apply(&x), j.apply(&y), j.apply(&z));
        let lhs = dwj.eval_on(&[&x, &y, &z])?.scale(&crate::ratpoly::int(2));
        let mut rhs = dw.eval_on(&[&jx, &y, &z])?;
        rhs = &rhs + &dw.eval_on(&[&x, &jy, &z])?;
        rhs = &rhs + &dw.eval_on(&[&x, &y, &jz])?;
        rhs = &rhs + &dw.eval_on(&[&jx, &jy, &jz])?;
        out.push((format!("d{},d{},d{}", ijk[0], ijk[1], ijk[2]), &lhs - &rhs));
    }
    Ok(out)
}

/// Symplectic + complex: `ω` symplectic, `J² = −Id`, `𝒩_J = 0`, commuting.
/// The equivalent form `dω_J = 0`, `ω + J*ω = 0` is checked alongside and
/// any disagreement between the two is noted.
pub fn sc_structure_check(omega: &KForm, j: &EndoField) -> Result<CheckReport> {
    omega.chart().ensure_same(j.chart())?;
    let mut b = ReportBuilder::new("symplectic + complex");
    push_closed(&mut b, "(d omega)", omega);
    push_nondegenerate(&mut b, omega);
    let mut direct = ReportBuilder::new("direct");
    for ((r, c), p) in j_squared_defect(j).entries() {
        direct.push("(J^2)", format!("{r},{c}"), p.clone());
    }
    push_torsion_free(&mut direct, j)?;
    push_commutation(&mut direct, "(commute)", omega, j);
    let direct = direct.finish();

    let mut twisted = ReportBuilder::new("twisted");
    twisted.condition("(commute)");
    push_commutation(&mut twisted, "(commute)", omega, j);
    let (wj, _) = contract_first(omega, j);
    push_closed(&mut twisted, "(d omega_J)", &wj);
    let zero_twist = omega.add(&double_pullback(omega, j));
    for (idx, c) in zero_twist.indexed() {
        twisted.push("(twist)", format!("{idx:?}"), c.clone());
    }
    let twisted = twisted.finish();
    if direct.certified() != twisted.certified() {
        b.note(format!(
            "characterizations disagree: direct {:?}, twist form {:?}",
            direct.verdict, twisted.verdict
        ));
    }
    b.merge(direct);
    b.merge(twisted);
    Ok(b.finish())
}
