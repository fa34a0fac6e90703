//! The cotangent Lie algebroid of a Poisson bivector and infinitesimal
//! multiplicative (IM) forms on it.

use crate::courant::{check_c1, one_form_pairs, pi_bracket};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ratpoly::RatPoly;
use crate::report::{CheckReport, ReportBuilder};
use crate::tensor::{d_fn, interior, lie_bracket, lie_derivative, Bivector, Chart, EndoField, KForm};

/// `T*M` with anchor `π♯` and bracket `[·,·]_π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonAlgebroid {
    pi: Bivector,
}

impl PoissonAlgebroid {
    /// Certifies that `π` is Poisson before wrapping it.
    pub fn new(pi: Bivector) -> Result<Self> {
        if check_c1(&pi)?.refuted() {
            return Err(Error::NotPoisson);
        }
        Ok(PoissonAlgebroid { pi })
    }

    pub fn pi(&self) -> &Bivector {
        &self.pi
    }

    pub fn chart(&self) -> &Chart {
        self.pi.chart()
    }

    pub fn anchor(&self, xi: &KForm) -> crate::tensor::VectorField {
        self.pi.apply(xi)
    }
}

/// A bundle map `u: T*M → T*M` as a matrix acting on covector components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMFormCandidate {
    chart: Chart,
    matrix: PolyMatrix,
}

impl IMFormCandidate {
    pub fn new(chart: &Chart, matrix: PolyMatrix) -> Result<Self> {
        // reuse the shape checks of EndoField
        let e = EndoField::new(chart, matrix)?;
        Ok(IMFormCandidate { chart: chart.clone(), matrix: e.matrix().clone() })
    }

    pub fn identity(chart: &Chart) -> Self {
        IMFormCandidate { chart: chart.clone(), matrix: PolyMatrix::identity(chart.vars(), chart.dim()) }
    }

    /// `u = a*`.
    pub fn dual_of(a: &EndoField) -> Self {
        IMFormCandidate { chart: a.chart().clone(), matrix: a.matrix().transpose() }
    }

    pub fn apply(&self, xi: &KForm) -> KForm {
        KForm::one_form(&self.chart, self.matrix.mul_vec(xi.comps())).expect("shape matches")
    }
}

/// `[ξ, η]_π`, additionally certifying the Leibniz rule
/// `[ξ, fη]_π = f[ξ,η]_π + (π♯ξ)(f) η` for the supplied `f`.
pub fn algebroid_bracket(alg: &PoissonAlgebroid, xi: &KForm, eta: &KForm, f: &RatPoly) -> Result<(KForm, CheckReport)> {
    let br = pi_bracket(&alg.pi, xi, eta)?;
    let lhs = pi_bracket(&alg.pi, xi, &eta.scale(f))?;
    let rhs = br.scale(f).add(&eta.scale(&alg.anchor(xi).apply(f)));
    let mut b = ReportBuilder::new("Leibniz");
    b.push_all("(Leibniz)", "", lhs.sub(&rhs).comps().to_vec());
    Ok((br, b.finish()))
}

/// The two IM equations:
/// `⟨u(α), π♯β⟩ + ⟨u(β), π♯α⟩ = 0` and
/// `u([α,β]_π) = L_{π♯α} u(β) − L_{π♯β} u(α) + d⟨u(α), π♯β⟩`.
pub fn check_im_form(alg: &PoissonAlgebroid, u: &IMFormCandidate) -> Result<CheckReport> {
    alg.chart().ensure_same(&u.chart)?;
    let chart = alg.chart();
    let n = chart.dim();
    let pi = &alg.pi;
    let mut b = ReportBuilder::new("IM form");
    b.condition("(IM skew)").condition("(IM bracket)");
    for i in 0..n {
        for j in i..n {
            let (ai, aj) = (KForm::basis_one(chart, i), KForm::basis_one(chart, j));
            let p = &interior(&pi.apply(&aj), &u.apply(&ai))?.as_function()
                + &interior(&pi.apply(&ai), &u.apply(&aj))?.as_function();
            b.push("(IM skew)", format!("dx{i},dx{j}"), p);
        }
    }
    for (loc, alpha, beta) in one_form_pairs(chart) {
        let lhs = u.apply(&pi_bracket(pi, &alpha, &beta)?);
        let ua = u.apply(&alpha);
        let ub = u.apply(&beta);
        let pb = pi.apply(&beta);
        let rhs = lie_derivative(&pi.apply(&alpha), &ub)?
            .sub(&lie_derivative(&pb, &ua)?)
            .add(&d_fn(chart, &interior(&pb, &ua)?.as_function()));
        b.push_all("(IM bracket)", &loc, lhs.sub(&rhs).comps().to_vec());
    }
    Ok(b.finish())
}

/// `π♯[ξ,η]_π − [π♯ξ, π♯η]` for one pair.
pub fn anchor_defect(alg: &PoissonAlgebroid, xi: &KForm, eta: &KForm) -> Result<Vec<RatPoly>> {
    let lhs = alg.anchor(&pi_bracket(&alg.pi, xi, eta)?);
    let rhs = lie_bracket(&alg.anchor(xi), &alg.anchor(eta))?;
    Ok(lhs.sub(&rhs).comps().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::check_c2;

    fn plane() -> (Chart, PoissonAlgebroid) {
        let c = Chart::new(&["x", "y"]).unwrap();
        let pi = Bivector::from_entries(&c, [((0, 1), c.one())]).unwrap();
        (c, PoissonAlgebroid::new(pi).unwrap())
    }

    #[test]
    fn rejects_non_poisson() {
        let c3 = Chart::new(&["x", "y", "z"]).unwrap();
        let pi = Bivector::from_entries(&c3, [((0, 1), c3.one()), ((1, 2), c3.coord(1))]).unwrap();
        assert_eq!(PoissonAlgebroid::new(pi), Err(Error::NotPoisson));
    }

    #[test]
    fn bracket_examples() {
        let (c, alg) = plane();
        let f = c.coord(0);
        let g = c.poly("x*y").unwrap();
        let (br, leib) = algebroid_bracket(&alg, &d_fn(&c, &f), &d_fn(&c, &g), &c.poly("x^2 + y").unwrap()).unwrap();
        assert!(leib.certified());
        assert_eq!(br, d_fn(&c, &alg.pi().eval_on(&d_fn(&c, &f), &d_fn(&c, &g)).unwrap()));
        let xi = KForm::one_form(&c, vec![c.coord(1), c.one()]).unwrap();
        assert!(algebroid_bracket(&alg, &xi, &xi, &c.one()).unwrap().0.is_zero());

        // Jacobiator on (dx, dy, x dx)
        let a = KForm::basis_one(&c, 0);
        let b = KForm::basis_one(&c, 1);
        let e = KForm::basis_one(&c, 0).scale(&c.coord(0));
        let br = |p: &KForm, q: &KForm| pi_bracket(alg.pi(), p, q).unwrap();
        let jac = br(&a, &br(&b, &e)).add(&br(&b, &br(&e, &a))).add(&br(&e, &br(&a, &b)));
        assert!(jac.is_zero());
    }

    #[test]
    fn identity_is_im() {
        let (c, alg) = plane();
        assert!(check_im_form(&alg, &IMFormCandidate::identity(&c)).unwrap().certified());
    }

    #[test]
    fn dual_endomorphism_matches_c2() {
        let (c, alg) = plane();
        for rows in [&[&["2", "0"][..], &["0", "2"][..]][..], &[&["1", "0"], &["0", "x"]]] {
            let a = EndoField::parse(&c, rows).unwrap();
            let c2 = check_c2(alg.pi(), &a).unwrap();
            let im = check_im_form(&alg, &IMFormCandidate::dual_of(&a)).unwrap();
            assert_eq!(c2.certified(), im.certified());
        }
    }

    #[test]
    fn anchor_preserves_brackets() {
        let (c, alg) = plane();
        let xi = KForm::one_form(&c, vec![c.coord(1), c.poly("x^2").unwrap()]).unwrap();
        let eta = KForm::one_form(&c, vec![c.one(), c.poly("x*y").unwrap()]).unwrap();
        assert!(anchor_defect(&alg, &xi, &eta).unwrap().iter().all(RatPoly::is_zero));
    }
}
