//! The pair groupoid `Σ = M × M` over a chart and its Hitchin groupoid
//! structure.
//!
//! Coordinates on `Σ` are the base coordinates suffixed `_1` (target) and
//! `_2` (source); composable pairs live on the chart `M × M × M` with
//! suffixes `_1, _2, _3`, the pair `((x,y),(y,z))` multiplying to `(x,z)`.
//!
//! With `ω_Σ = s*ω − t*ω` the source map is Poisson and the target map is
//! anti-Poisson, and `(t, s)` is generalized holomorphic into `M̄ × M`.

use crate::courant::{gauge, GeneralizedStructure};
use crate::error::{Error, Result};
use crate::hitchin::{check_hitchin_pair, hitchin_to_gcs, twist, HitchinPair};
use crate::matrix::{PolyMatrix, QMatrix};
use crate::morphism::{check_gholomorphic, GHolMapCandidate};
use crate::ratpoly::Rational;
use crate::report::{CheckReport, ReportBuilder};
use crate::tensor::{
    contract_first, exterior_d, invert_2form, pullback, Bivector, Chart, EndoField, KForm, PolyMap, VectorField,
};

/// Map from a power of the base chart to another, picking whole blocks.
fn block_map(src: &Chart, dst: &Chart, n: usize, blocks: &[usize]) -> PolyMap {
    let comps = blocks.iter().flat_map(|&b| (0..n).map(move |i| src.coord(b * n + i))).collect();
    PolyMap::new(src, dst, comps).expect("block map shapes agree")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGroupoid {
    pub base: Chart,
    pub total: Chart,
    pub composable: Chart,
    pub t: PolyMap,
    pub s: PolyMap,
    pub m: PolyMap,
    pub pr1: PolyMap,
    pub pr2: PolyMap,
    pub unit: PolyMap,
    pub inv: PolyMap,
}

impl PairGroupoid {
    /// Builds the pair groupoid and certifies its axioms.
    pub fn new(base: &Chart) -> Result<Self> {
        let n = base.dim();
        let total = base.power(2);
        let composable = base.power(3);
        let g = PairGroupoid {
            base: base.clone(),
            t: block_map(&total, base, n, &[0]),
            s: block_map(&total, base, n, &[1]),
            m: block_map(&composable, &total, n, &[0, 2]),
            pr1: block_map(&composable, &total, n, &[0, 1]),
            pr2: block_map(&composable, &total, n, &[1, 2]),
            unit: block_map(base, &total, n, &[0, 0]),
            inv: block_map(&total, &total, n, &[1, 0]),
            total,
            composable,
        };
        let r = g.axioms()?;
        if r.refuted() {
            return Err(Error::Precondition(format!("groupoid axioms fail: {r}")));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Source/target compatibility, units, inverses and associativity as
    /// identities between polynomial maps.
    pub fn axioms(&self) -> Result<CheckReport> {
        let n = self.dim();
        let mut b = ReportBuilder::new("groupoid axioms");
        let mut same = |label: &str, f: &PolyMap, g: &PolyMap| {
            for (k, (p, q)) in f.comps().iter().zip(g.comps()).enumerate() {
                b.push(label, format!("{k}"), p - q);
            }
        };
        same("(t m)", &self.m.then(&self.t)?, &self.pr1.then(&self.t)?);
        same("(s m)", &self.m.then(&self.s)?, &self.pr2.then(&self.s)?);
        let id_base = PolyMap::identity(&self.base);
        same("(unit)", &self.unit.then(&self.t)?, &id_base);
        same("(unit)", &self.unit.then(&self.s)?, &id_base);
        let id_total = PolyMap::identity(&self.total);
        let left_unit = block_map(&self.total, &self.composable, n, &[0, 0, 1]);
        let right_unit = block_map(&self.total, &self.composable, n, &[0, 1, 1]);
        same("(unit)", &left_unit.then(&self.m)?, &id_total);
        same("(unit)", &right_unit.then(&self.m)?, &id_total);
        let with_inverse = block_map(&self.total, &self.composable, n, &[0, 1, 0]);
        same("(inverse)", &with_inverse.then(&self.m)?, &self.t.then(&self.unit)?);
        same("(inverse)", &self.inv.then(&self.inv)?, &id_total);
        let four = self.base.power(4);
        let left = block_map(&four, &self.composable, n, &[0, 2, 3]);
        let right = block_map(&four, &self.composable, n, &[0, 1, 3]);
        same("(associative)", &left.then(&self.m)?, &right.then(&self.m)?);
        Ok(b.finish())
    }

    /// `a(x) ⊕ b(y)` on `Σ`.
    pub fn block_endo(&self, a: &EndoField, b: &EndoField) -> Result<EndoField> {
        let n = self.dim();
        let mut m = PolyMatrix::zeros(self.total.vars(), 2 * n, 2 * n);
        m.set_block(0, 0, &self.t.pull_matrix(a.matrix())?);
        m.set_block(n, n, &self.s.pull_matrix(b.matrix())?);
        EndoField::new(&self.total, m)
    }

    /// `s*φ − t*φ`.
    pub fn coboundary(&self, phi: &KForm) -> Result<KForm> {
        Ok(pullback(&self.s, phi)?.sub(&pullback(&self.t, phi)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinGroupoidCandidate {
    pub groupoid: PairGroupoid,
    pub omega: KForm,
    pub j: EndoField,
    pub sigma: KForm,
    /// The Hitchin pair on the base the candidate was built from.
    pub base: HitchinPair,
}

/// `ω_Σ = s*ω − t*ω`, `J_Σ = a ⊕ a`, `σ = twist(ω, a)`.
pub fn build_pair_hitchin_groupoid(pair: &HitchinPair) -> Result<HitchinGroupoidCandidate> {
    let pre = check_hitchin_pair(pair)?;
    if pre.refuted() {
        return Err(Error::Precondition(format!("not a Hitchin pair: {}", pre.failed_labels().join(", "))));
    }
    let groupoid = PairGroupoid::new(pair.chart())?;
    let omega = groupoid.coboundary(&pair.omega)?;
    let j = groupoid.block_endo(&pair.a, &pair.a)?;
    Ok(HitchinGroupoidCandidate { omega, j, sigma: twist(pair), base: pair.clone(), groupoid })
}

fn push_multiplicative_form(b: &mut ReportBuilder, g: &PairGroupoid, omega: &KForm) -> Result<()> {
    g.total.ensure_same(omega.chart())?;
    b.condition("(multiplicative form)");
    let d = pullback(&g.m, omega)?.sub(&pullback(&g.pr1, omega)?).sub(&pullback(&g.pr2, omega)?);
    for (idx, p) in d.indexed() {
        b.push("(multiplicative form)", format!("{idx:?}"), p.clone());
    }
    Ok(())
}

/// `m*ω = pr₁*ω + pr₂*ω` on composable pairs.
pub fn check_multiplicative_form(g: &PairGroupoid, omega: &KForm) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("multiplicative 2-form");
    push_multiplicative_form(&mut b, g, omega)?;
    Ok(b.finish())
}

fn push_multiplicative_endo(b: &mut ReportBuilder, g: &PairGroupoid, j: &EndoField) -> Result<()> {
    g.total.ensure_same(j.chart())?;
    b.condition("(tangent)").condition("(dm)");
    let n = g.dim();
    let vars = g.composable.vars();
    let ident = PolyMatrix::identity(vars, n);
    let select = |blocks: &[usize]| {
        let mut e = PolyMatrix::zeros(vars, n * blocks.len(), 3 * n);
        for (r, &c) in blocks.iter().enumerate() {
            e.set_block(r * n, c * n, &ident);
        }
        e
    };
    // a tangent vector (u, v, w) to the composable pairs sits in Σ × Σ as
    // ((u, v), (v, w))
    let e1 = select(&[0, 1]);
    let e2 = select(&[1, 2]);
    let dm = select(&[0, 2]);
    let a1 = &g.pr1.pull_matrix(j.matrix())? * &e1;
    let a2 = &g.pr2.pull_matrix(j.matrix())? * &e2;
    let tangency = &a1.block(n, 0, n, 3 * n) - &a2.block(0, 0, n, 3 * n);
    for ((r, c), p) in tangency.entries() {
        b.push("(tangent)", format!("{r},{c}"), p.clone());
    }
    let mut image = PolyMatrix::zeros(vars, 3 * n, 3 * n);
    image.set_block(0, 0, &a1.block(0, 0, n, 3 * n));
    image.set_block(n, 0, &a1.block(n, 0, n, 3 * n));
    image.set_block(2 * n, 0, &a2.block(n, 0, n, 3 * n));
    let lhs = &dm * &image;
    let rhs = &g.m.pull_matrix(j.matrix())? * &dm;
    for ((r, c), p) in (&lhs - &rhs).entries() {
        b.push("(dm)", format!("{r},{c}"), p.clone());
    }
    Ok(())
}

/// `J ⊕ J` preserves the tangent bundle of the composable pairs and
/// commutes with `dm`.
pub fn check_multiplicative_endo(g: &PairGroupoid, j: &EndoField) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("multiplicative (1,1)-tensor");
    push_multiplicative_endo(&mut b, g, j)?;
    Ok(b.finish())
}

fn push_twist_identity(b: &mut ReportBuilder, c: &HitchinGroupoidCandidate) -> Result<()> {
    b.condition("(twist)");
    let lhs = c.omega.add(&crate::tensor::double_pullback(&c.omega, &c.j));
    let rhs = c.groupoid.coboundary(&c.sigma)?.neg();
    for (idx, p) in lhs.sub(&rhs).indexed() {
        b.push("(twist)", format!("{idx:?}"), p.clone());
    }
    Ok(())
}

/// `ω_Σ` symplectic, `ω_Σ` and `J_Σ` multiplicative, `(ω_Σ, J_Σ)` a Hitchin
/// pair, and `ω_Σ + J_Σ*ω_Σ = t*σ − s*σ`.
pub fn check_hitchin_groupoid(c: &HitchinGroupoidCandidate) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("Hitchin groupoid");
    b.merge(check_hitchin_pair(&HitchinPair::new(c.omega.clone(), c.j.clone())?)?);
    push_multiplicative_form(&mut b, &c.groupoid, &c.omega)?;
    push_multiplicative_endo(&mut b, &c.groupoid, &c.j)?;
    push_twist_identity(&mut b, c)?;
    Ok(b.finish())
}

/// The base structure `(a, ω⁻¹, σ)` carried by the candidate.
pub fn base_structure(c: &HitchinGroupoidCandidate) -> Result<GeneralizedStructure> {
    let pi = invert_2form(&c.base.omega)?;
    GeneralizedStructure::new(c.base.a.clone(), pi, c.sigma.clone())
}

/// `M̄ × M` on the chart of `Σ`: the opposite structure on the target factor.
pub fn opposite_product(g: &PairGroupoid, base: &GeneralizedStructure) -> Result<GeneralizedStructure> {
    let n = g.dim();
    let a = g.block_endo(&base.a, &base.a)?;
    let mut p = PolyMatrix::zeros(g.total.vars(), 2 * n, 2 * n);
    let pb = base.pi.sharp();
    p.set_block(0, 0, &-&g.t.pull_matrix(&pb)?);
    p.set_block(n, n, &g.s.pull_matrix(&pb)?);
    let pi = Bivector::from_sharp(&g.total, &p)?;
    GeneralizedStructure::new(a, pi, g.coboundary(&base.sigma)?)
}

/// `(t, s): Σ → M̄ × M` is generalized holomorphic, together with
/// `dt∘J = a∘dt` and `ds∘J = a∘ds`.
pub fn check_ts_gholomorphic(c: &HitchinGroupoidCandidate) -> Result<CheckReport> {
    let g = &c.groupoid;
    let n = g.dim();
    let sigma_struct = hitchin_to_gcs(&HitchinPair::new(c.omega.clone(), c.j.clone())?)?;
    let target = opposite_product(g, &base_structure(c)?)?;
    let cand = GHolMapCandidate::new(PolyMap::identity(&g.total), sigma_struct, target)?;
    let mut b = ReportBuilder::new("(t, s) generalized holomorphic");
    b.merge(check_gholomorphic(&cand)?);
    for (label, map, block) in [("(dt J)", &g.t, 0), ("(ds J)", &g.s, 1)] {
        b.condition(label);
        let mut d = PolyMatrix::zeros(g.total.vars(), n, 2 * n);
        d.set_block(0, block * n, &PolyMatrix::identity(g.total.vars(), n));
        let lhs = &d * c.j.matrix();
        let rhs = &map.pull_matrix(c.base.a.matrix())? * &d;
        for ((r, col), p) in (&lhs - &rhs).entries() {
            b.push(label, format!("{r},{col}"), p.clone());
        }
    }
    Ok(b.finish())
}

/// `J_B = J + π_Σ♯ (s*B − t*B)♯` with `σ` and the base pair replaced by
/// those of the gauged base structure.
pub fn groupoid_gauge(c: &HitchinGroupoidCandidate, bf: &KForm) -> Result<HitchinGroupoidCandidate> {
    if !exterior_d(bf).is_zero() {
        return Err(Error::NonClosedB);
    }
    let g = &c.groupoid;
    let pi_sigma = invert_2form(&c.omega)?;
    let shift = &pi_sigma.sharp() * &g.coboundary(bf)?.sharp();
    let j = EndoField::new(&g.total, c.j.matrix() + &shift)?;
    let gauged = gauge(&base_structure(c)?, bf)?;
    Ok(HitchinGroupoidCandidate {
        groupoid: g.clone(),
        omega: c.omega.clone(),
        j,
        sigma: gauged.sigma,
        base: HitchinPair::new(c.base.omega.clone(), gauged.a)?,
    })
}

/// At the unit `(x, x)`: the isotropy `Ker dt ∩ Ker ds` is zero, `J_Σ`
/// preserves `Ker ds`, and on it squares to `−Id − π♯σ♯` as on the base.
pub fn isotropy_complex_check(c: &HitchinGroupoidCandidate, x: &[Rational]) -> Result<CheckReport> {
    let g = &c.groupoid;
    let n = g.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let unit: Vec<Rational> = x.iter().chain(x.iter()).cloned().collect();
    let labelled: Vec<(String, Rational)> = g.total.coords().iter().cloned().zip(unit.iter().cloned()).collect();
    let mut b = ReportBuilder::new("isotropy complex structure");
    // stacked dt, ds is the identity on T_(x,x)Σ
    let both = QMatrix::identity(2 * n);
    if both.kernel().is_empty() {
        b.pass_at("(isotropy)");
        b.note("isotropy of the pair groupoid is trivial");
    } else {
        b.fail_at("(isotropy)", "ker", labelled.clone(), "nonzero isotropy".into());
    }
    let j = c.j.matrix().eval(&unit)?;
    for k in 0..n {
        if (0..n).all(|r| num_traits::Zero::is_zero(&j[(n + r, k)])) {
            b.pass_at("(ker ds)");
        } else {
            b.fail_at("(ker ds)", format!("d{k}"), labelled.clone(), "J leaves ker ds".into());
        }
    }
    let base = base_structure(c)?;
    let j11 = c.j.matrix().block(0, 0, n, n);
    let j11 = g.unit.pull_matrix(&j11)?;
    let surrogate = &(&(&j11 * &j11) + &(&base.pi.sharp() * &base.sigma.sharp())) + &PolyMatrix::identity(g.base.vars(), n);
    let at = surrogate.eval(x)?;
    if at.is_zero() {
        b.pass_at("(surrogate)");
    } else {
        let base_pt = g.base.coords().iter().cloned().zip(x.iter().cloned()).collect();
        b.fail_at("(surrogate)", "J^2 + pi sigma + 1", base_pt, "nonzero".into());
    }
    Ok(b.finish())
}

/// `(ω_Σ)_J(X, Y) = ω_Σ(JX, Y)`.
pub fn omega_j(c: &HitchinGroupoidCandidate) -> KForm {
    contract_first(&c.omega, &c.j).0
}

/// `ω_Σ(α̃, V) = α(dt V)` and `ω_Σ(Jα̃, V) = (a*α)(dt V)` where `α̃` is the
/// right-invariant field `(−π♯α(x), 0)` at `(x, y)`.
pub fn right_invariant_identity(c: &HitchinGroupoidCandidate) -> Result<CheckReport> {
    let g = &c.groupoid;
    let n = g.dim();
    let total = &g.total;
    let pi = invert_2form(&c.base.omega)?;
    let p = g.t.pull_matrix(&pi.sharp())?;
    let a = g.t.pull_matrix(c.base.a.matrix())?;
    let mut b = ReportBuilder::new("right-invariant identity");
    b.condition("(u = Id)").condition("(u = a*)");
    for k in 0..n {
        // −π♯(dx^k) = −(column k of P)
        let mut comps = vec![total.zero(); 2 * n];
        for (r, slot) in comps.iter_mut().enumerate().take(n) {
            *slot = -&p[(r, k)];
        }
        let field = VectorField::new(total, comps)?;
        let jfield = c.j.apply(&field);
        for v in 0..2 * n {
            let vf = VectorField::basis(total, v);
            let expected = if v == k { total.one() } else { total.zero() };
            b.push("(u = Id)", format!("dx{k},d{v}"), &c.omega.eval_on(&[&field, &vf])? - &expected);
            let expected = if v < n { a[(k, v)].clone() } else { total.zero() };
            b.push("(u = a*)", format!("dx{k},d{v}"), &c.omega.eval_on(&[&jfield, &vf])? - &expected);
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{check_c3, check_gcs};
    use crate::ratpoly::int;

    fn r2() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn area(c: &Chart) -> KForm {
        KForm::basis(c, &[0, 1]).unwrap()
    }

    fn pair(a: EndoField) -> HitchinPair {
        HitchinPair::new(area(a.chart()), a).unwrap()
    }

    #[test]
    fn axioms_certify() {
        let g = PairGroupoid::new(&r2()).unwrap();
        let r = g.axioms().unwrap();
        assert!(r.certified());
        assert_eq!(g.total.coords(), &["x_1", "y_1", "x_2", "y_2"]);
    }

    #[test]
    fn build_examples() {
        let c = r2();
        let cand = build_pair_hitchin_groupoid(&pair(EndoField::zero(&c))).unwrap();
        let expected = KForm::basis(&cand.groupoid.total, &[2, 3]).unwrap().sub(&KForm::basis(&cand.groupoid.total, &[0, 1]).unwrap());
        assert_eq!(cand.omega, expected);
        assert!(cand.j.is_zero());
        assert_eq!(cand.sigma, area(&c).neg());
        assert!(check_hitchin_groupoid(&cand).unwrap().certified());
        assert!(check_ts_gholomorphic(&cand).unwrap().certified());

        let cand = build_pair_hitchin_groupoid(&pair(EndoField::identity(&c))).unwrap();
        assert_eq!(cand.sigma, area(&c).scale_q(&int(-2)));
        let r = check_hitchin_groupoid(&cand).unwrap();
        assert!(r.certified(), "{r}");

        let c4 = Chart::standard(4);
        let w4 = KForm::basis(&c4, &[0, 1]).unwrap().add(&KForm::basis(&c4, &[2, 3]).unwrap());
        let a4 = EndoField::parse(
            &c4,
            &[&["2", "0", "0", "0"], &["0", "2", "0", "0"], &["0", "0", "-1", "0"], &["0", "0", "0", "-1"]],
        )
        .unwrap();
        let cand = build_pair_hitchin_groupoid(&HitchinPair::new(w4, a4).unwrap()).unwrap();
        assert!(check_hitchin_groupoid(&cand).unwrap().certified());
        assert!(check_ts_gholomorphic(&cand).unwrap().certified());
    }

    #[test]
    fn multiplicative_form_examples() {
        let c = r2();
        let g = PairGroupoid::new(&c).unwrap();
        let phi = area(&c).scale(&c.poly("x^2 + y").unwrap());
        assert!(check_multiplicative_form(&g, &g.coboundary(&phi).unwrap()).unwrap().certified());
        let only_t = pullback(&g.t, &area(&c)).unwrap();
        let r = check_multiplicative_form(&g, &only_t).unwrap();
        assert!(r.refuted());
        assert!(r.witness.is_some());
    }

    #[test]
    fn multiplicative_endo_examples() {
        let c = r2();
        let g = PairGroupoid::new(&c).unwrap();
        let a = EndoField::parse(&c, &[&["x", "1"], &["0", "y"]]).unwrap();
        assert!(check_multiplicative_endo(&g, &g.block_endo(&a, &a).unwrap()).unwrap().certified());
        let b2 = EndoField::identity(&c);
        let r = check_multiplicative_endo(&g, &g.block_endo(&a, &b2).unwrap()).unwrap();
        assert_eq!(r.passed("(tangent)"), Some(false));
        assert!(check_multiplicative_endo(&g, &EndoField::zero(&g.total)).unwrap().certified());
    }

    #[test]
    fn hitchin_groupoid_refutations() {
        let c = r2();
        let mut cand = build_pair_hitchin_groupoid(&pair(EndoField::identity(&c))).unwrap();
        cand.sigma = cand.sigma.add(&area(&c));
        let r = check_hitchin_groupoid(&cand).unwrap();
        assert_eq!(r.failed_labels(), vec!["(twist)"]);
        let ts = check_ts_gholomorphic(&cand).unwrap();
        assert_eq!(ts.failed_labels(), vec!["(sigma)"]);
        let base = base_structure(&cand).unwrap();
        assert!(check_c3(&base.pi, &base.a, &base.sigma).unwrap().refuted());

        let mut cand = build_pair_hitchin_groupoid(&pair(EndoField::identity(&c))).unwrap();
        cand.j = EndoField::zero(&cand.groupoid.total);
        let r = check_hitchin_groupoid(&cand).unwrap();
        assert_eq!(r.failed_labels(), vec!["(twist)"]);
    }

    #[test]
    fn target_is_anti_poisson() {
        let c = r2();
        let cand = build_pair_hitchin_groupoid(&pair(EndoField::zero(&c))).unwrap();
        let g = &cand.groupoid;
        let pi_s = invert_2form(&cand.omega).unwrap();
        let pi = invert_2form(&area(&c)).unwrap();
        let ps = crate::tensor::pushforward_bivector_check(&g.s, &pi_s, &pi).unwrap();
        let pt = crate::tensor::pushforward_bivector_check(&g.t, &pi_s, &pi.neg()).unwrap();
        assert!(ps.certified());
        assert!(pt.certified());
        assert!(crate::tensor::pushforward_bivector_check(&g.t, &pi_s, &pi).unwrap().refuted());
    }

    #[test]
    fn gauge_examples() {
        let c = r2();
        let cand = build_pair_hitchin_groupoid(&pair(EndoField::zero(&c))).unwrap();
        assert_eq!(groupoid_gauge(&cand, &KForm::zero(&c, 2)).unwrap(), cand);
        let b = area(&c);
        let gauged = groupoid_gauge(&cand, &b).unwrap();
        assert!(check_hitchin_groupoid(&gauged).unwrap().certified());
        assert!(check_gcs(&base_structure(&gauged).unwrap()).unwrap().certified());
        assert_eq!(groupoid_gauge(&gauged, &b.neg()).unwrap(), cand);
    }

    #[test]
    fn gauge_rejects_non_closed() {
        let c4 = Chart::standard(4);
        let w4 = KForm::basis(&c4, &[0, 1]).unwrap().add(&KForm::basis(&c4, &[2, 3]).unwrap());
        let cand = build_pair_hitchin_groupoid(&HitchinPair::new(w4, EndoField::zero(&c4)).unwrap()).unwrap();
        let b = KForm::basis(&c4, &[0, 1]).unwrap().scale(&c4.coord(2));
        assert_eq!(groupoid_gauge(&cand, &b), Err(Error::NonClosedB));
    }

    #[test]
    fn isotropy_examples() {
        let c = r2();
        for a in [EndoField::zero(&c), EndoField::identity(&c)] {
            let cand = build_pair_hitchin_groupoid(&pair(a)).unwrap();
            let r = isotropy_complex_check(&cand, &[int(1), int(-2)]).unwrap();
            assert!(r.certified(), "{r}");
        }
    }

    #[test]
    fn omega_j_multiplicative_iff_j() {
        let c = r2();
        let cand = build_pair_hitchin_groupoid(&pair(EndoField::scalar(&c, int(2)))).unwrap();
        let g = &cand.groupoid;
        assert!(check_multiplicative_form(g, &omega_j(&cand)).unwrap().certified());
        let mut skewed = cand.clone();
        skewed.j = g.block_endo(&EndoField::scalar(&c, int(2)), &EndoField::scalar(&c, int(3))).unwrap();
        assert!(check_multiplicative_endo(g, &skewed.j).unwrap().refuted());
        assert!(check_multiplicative_form(g, &omega_j(&skewed)).unwrap().refuted());
    }

    #[test]
    fn right_invariant_examples() {
        let c = r2();
        for a in [EndoField::zero(&c), EndoField::identity(&c), EndoField::scalar(&c, int(-3))] {
            let cand = build_pair_hitchin_groupoid(&pair(a)).unwrap();
            let r = right_invariant_identity(&cand).unwrap();
            assert!(r.certified(), "{r}");
        }
    }
}
