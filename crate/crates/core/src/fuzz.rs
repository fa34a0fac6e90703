//! Seeded generators for random tensors and structures, and the summary
//! driver behind `gck fuzz`.
//!
//! Valid structures are built constructively: a symplectic `ω`, a closed
//! `β = dθ` and `a = c·Id + π♯β♯`, which commutes with `ω` and has
//! `ω_a = cω + β` closed. `degree` bounds the coefficients of the generating
//! data (`θ`, shears, random entries), not of the derived tensors.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebroid::{check_im_form, IMFormCandidate, PoissonAlgebroid};
use crate::courant::{
    check_c1, check_c2, check_gcs, gauge, gauge_by_conjugation, integrable_on_basis, opposite, proof_audit,
    GeneralizedStructure,
};
use crate::error::Result;
use crate::hitchin::{gcs_to_hitchin, hitchin_to_gcs, torsion_identity_defect, HitchinPair};
use crate::matrix::PolyMatrix;
use crate::ratpoly::{rat, RatPoly, Rational};
use crate::tensor::{
    exterior_d, interior, interior2, invert_2form, koszul_d2, lie_bracket, lie_derivative, pullback, Bivector, Chart,
    EndoField, KForm, PolyMap, VectorField,
};

const COEFFS: [(i64, i64); 7] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1)];

/// Which way a valid structure was broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Perturbation {
    /// `σ + c·dx^i∧dx^j`.
    ConstantSigma,
    /// `a` rebuilt from a non-closed `β`.
    OpenBeta,
    /// Gauge by a non-closed `B`.
    OpenGauge,
    /// `a + c·E_ij`.
    Endo,
}

pub struct Fuzzer {
    rng: ChaCha8Rng,
    degree: u32,
}

impl Fuzzer {
    pub fn new(seed: u64, degree: u32) -> Self {
        Fuzzer { rng: ChaCha8Rng::seed_from_u64(seed), degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> Rational {
        let (n, d) = *COEFFS.choose(&mut self.rng).expect("nonempty");
        rat(n, d)
    }

    /// Nonzero small integer.
    pub fn small_int(&mut self) -> i64 {
        *[-2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty")
    }

    /// One to three terms of total degree at most `degree`.
    pub fn poly_of_degree(&mut self, chart: &Chart, degree: u32) -> RatPoly {
        let n = chart.dim();
        let terms = self.rng.gen_range(1..=3);
        let mut p = chart.zero();
        for _ in 0..terms {
            let total = self.rng.gen_range(0..=degree);
            let mut exps = vec![0u32; n];
            for _ in 0..total {
                exps[self.rng.gen_range(0..n)] += 1;
            }
            p = &p + &RatPoly::monomial(chart.vars(), exps, self.coefficient());
        }
        p
    }

    pub fn poly(&mut self, chart: &Chart) -> RatPoly {
        self.poly_of_degree(chart, self.degree)
    }

    /// Zero a third of the time.
    pub fn sparse_poly(&mut self, chart: &Chart, degree: u32) -> RatPoly {
        if self.rng.gen_ratio(1, 3) {
            chart.zero()
        } else {
            self.poly_of_degree(chart, degree)
        }
    }

    pub fn vector_field(&mut self, chart: &Chart) -> VectorField {
        let d = self.degree;
        let comps = (0..chart.dim()).map(|_| self.sparse_poly(chart, d)).collect();
        VectorField::new(chart, comps).expect("component count")
    }

    pub fn form(&mut self, chart: &Chart, k: usize) -> KForm {
        let d = self.degree;
        let mut f = KForm::zero(chart, k);
        if k > chart.dim() {
            return f;
        }
        for idx in crate::tensor::combinations(chart.dim(), k).iter() {
            let c = self.sparse_poly(chart, d);
            f = f.add(&KForm::basis(chart, idx).expect("increasing").scale(&c));
        }
        f
    }

    pub fn endo(&mut self, chart: &Chart) -> EndoField {
        let n = chart.dim();
        let d = self.degree;
        let rows = (0..n).map(|_| (0..n).map(|_| self.sparse_poly(chart, d)).collect()).collect();
        EndoField::new(chart, PolyMatrix::from_rows(chart.vars(), rows).expect("square")).expect("square")
    }

    /// `dθ` with `θ` of coefficient degree at most `degree + 1`.
    pub fn closed_two_form(&mut self, chart: &Chart) -> KForm {
        let d = self.degree + 1;
        let comps = (0..chart.dim()).map(|_| self.sparse_poly(chart, d)).collect();
        exterior_d(&KForm::one_form(chart, comps).expect("component count"))
    }

    /// A 2-form with nonzero `d`, or `None` in dimension 2.
    pub fn open_two_form(&mut self, chart: &Chart) -> Option<KForm> {
        if chart.dim() < 3 {
            return None;
        }
        loop {
            let f = self.form(chart, 2);
            let bumped = f.add(&KForm::basis(chart, &[0, 1]).expect("n ≥ 2").scale(&chart.coord(2)));
            if !exterior_d(&bumped).is_zero() {
                return Some(bumped);
            }
        }
    }

    /// Upper unitriangular with entries of degree at most `degree`.
    pub fn unipotent(&mut self, chart: &Chart, degree: u32) -> PolyMatrix {
        let n = chart.dim();
        let entries: Vec<Vec<RatPoly>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match r.cmp(&c) {
                        std::cmp::Ordering::Equal => chart.one(),
                        std::cmp::Ordering::Less => self.sparse_poly(chart, degree),
                        std::cmp::Ordering::Greater => chart.zero(),
                    })
                    .collect()
            })
            .collect();
        PolyMatrix::from_rows(chart.vars(), entries).expect("square")
    }

    /// `Σ dx^{2i}∧dx^{2i+1}`.
    pub fn darboux(chart: &Chart) -> KForm {
        let mut w = KForm::zero(chart, 2);
        for i in 0..chart.dim() / 2 {
            w = w.add(&KForm::basis(chart, &[2 * i, 2 * i + 1]).expect("increasing"));
        }
        w
    }

    /// `gᵀ W₀ g` for a unitriangular `g` of the given degree: nondegenerate
    /// with constant determinant, closed only in special cases.
    pub fn nondegenerate(&mut self, chart: &Chart, degree: u32) -> KForm {
        let g = self.unipotent(chart, degree);
        let w0 = Self::darboux(chart).sharp();
        KForm::from_sharp(chart, &(&(&g.transpose() * &w0) * &g)).expect("congruent to a skew matrix")
    }

    /// A constant symplectic form, pulled back along a polynomial shear
    /// `x_k ↦ x_k + c·x_j²` when `degree > 0`.
    pub fn symplectic(&mut self, chart: &Chart) -> KForm {
        let n = chart.dim();
        assert!(n.is_multiple_of(2), "symplectic forms need even dimension");
        let w = self.nondegenerate(chart, 0);
        if self.degree == 0 {
            return w;
        }
        let k = self.rng.gen_range(0..n);
        let j = (k + self.rng.gen_range(1..n)) % n;
        let mut comps: Vec<RatPoly> = (0..n).map(|i| chart.coord(i)).collect();
        comps[k] = &comps[k] + &(&chart.coord(j) * &chart.coord(j)).scale(&self.coefficient());
        let shear = PolyMap::new(chart, chart, comps).expect("shapes agree");
        pullback(&shear, &w).expect("same chart")
    }

    /// `c·Id + π♯β♯`.
    fn commuting_endo(&mut self, omega: &KForm, beta: &KForm) -> EndoField {
        let chart = omega.chart();
        let pi = invert_2form(omega).expect("constant determinant");
        let scalar = if self.rng.gen_bool(0.5) { rat(0, 1) } else { self.coefficient() };
        let m = &(&pi.sharp() * &beta.sharp()) + &PolyMatrix::identity(chart.vars(), chart.dim()).scale(&scalar);
        EndoField::new(chart, m).expect("square")
    }

    /// A Hitchin pair built through `a = c·Id + π♯β♯` with `β` closed.
    pub fn hitchin_pair(&mut self, chart: &Chart) -> HitchinPair {
        let omega = self.symplectic(chart);
        let beta = self.closed_two_form(chart);
        let a = self.commuting_endo(&omega, &beta);
        HitchinPair::new(omega, a).expect("same chart")
    }

    pub fn valid_gcs(&mut self, chart: &Chart) -> GeneralizedStructure {
        hitchin_to_gcs(&self.hitchin_pair(chart)).expect("symplectic")
    }

    /// A commuting pair whose `ω` is nondegenerate but generally not closed.
    pub fn commuting_pair(&mut self, chart: &Chart) -> HitchinPair {
        let d = self.degree;
        if chart.dim() % 2 == 1 {
            // any 2-form commutes with a scalar endomorphism
            let omega = self.form(chart, 2);
            let a = EndoField::scalar(chart, self.coefficient());
            return HitchinPair::new(omega, a).expect("same chart");
        }
        let omega = self.nondegenerate(chart, d.max(1));
        let beta = self.form(chart, 2);
        let a = self.commuting_endo(&omega, &beta);
        HitchinPair::new(omega, a).expect("same chart")
    }

    pub fn perturb(&mut self, s: &GeneralizedStructure) -> (GeneralizedStructure, Perturbation) {
        let chart = s.chart().clone();
        let n = chart.dim();
        let mut kinds = vec![Perturbation::ConstantSigma, Perturbation::Endo];
        if n >= 3 {
            kinds.push(Perturbation::OpenBeta);
            kinds.push(Perturbation::OpenGauge);
        }
        let kind = *kinds.choose(&mut self.rng).expect("nonempty");
        let i = self.rng.gen_range(0..n);
        let j = (i + self.rng.gen_range(1..n)) % n;
        let out = match kind {
            Perturbation::ConstantSigma => {
                let bump = KForm::basis(&chart, &[i.min(j), i.max(j)]).expect("distinct").scale_q(&self.coefficient());
                GeneralizedStructure::new(s.a.clone(), s.pi.clone(), s.sigma.add(&bump)).expect("same chart")
            }
            Perturbation::Endo => {
                let mut m = s.a.matrix().clone();
                let e = PolyMatrix::from_rows(chart.vars(), vec![vec![chart.constant(self.coefficient())]]).expect("1x1");
                m.set_block(i, j, &(&m.block(i, j, 1, 1) + &e));
                GeneralizedStructure::new(EndoField::new(&chart, m).expect("square"), s.pi.clone(), s.sigma.clone())
                    .expect("same chart")
            }
            Perturbation::OpenBeta => {
                let omega = crate::tensor::invert_bivector(&s.pi).expect("symplectic input");
                let beta = self.open_two_form(&chart).expect("n ≥ 3");
                let a = self.commuting_endo(&omega, &beta);
                let pair = HitchinPair::new(omega, a).expect("same chart");
                hitchin_to_gcs(&pair).expect("symplectic")
            }
            Perturbation::OpenGauge => {
                let b = self.open_two_form(&chart).expect("n ≥ 3");
                GeneralizedStructure::from_j_matrix(&chart, &gauge_by_conjugation(s, &b)).expect("2n x 2n")
            }
        };
        (out, kind)
    }

    /// `f·∂_i∧∂_j`, the inverse of a symplectic form, or zero.
    pub fn poisson(&mut self, chart: &Chart) -> Bivector {
        let n = chart.dim();
        let pick = self.rng.gen_range(0..if n.is_multiple_of(2) { 3 } else { 2 });
        match pick {
            0 => {
                let i = self.rng.gen_range(0..n);
                let j = (i + self.rng.gen_range(1..n)) % n;
                let f = self.poly(chart);
                Bivector::from_entries(chart, [((i.min(j), i.max(j)), f)]).expect("in range")
            }
            1 => Bivector::zero(chart),
            _ => invert_2form(&self.symplectic(chart)).expect("symplectic"),
        }
    }

    /// Poisson `π` with `a` compatible by construction or random.
    pub fn im_pair(&mut self, chart: &Chart) -> (Bivector, EndoField) {
        match self.rng.gen_range(0..4) {
            0 if chart.dim().is_multiple_of(2) => {
                let s = self.valid_gcs(chart);
                (s.pi, s.a)
            }
            1 => (self.poisson(chart), EndoField::scalar(chart, self.coefficient())),
            _ => {
                let pi = self.poisson(chart);
                let a = self.endo(chart);
                (pi, a)
            }
        }
    }

    /// `σ♯ = M − a*Ma` for a random 2-form `M`, so that `a*σ♯ = σ♯a` when
    /// `a² = −Id`.
    fn commuting_sigma(&mut self, a: &EndoField) -> KForm {
        let chart = a.chart();
        let m = self.form(chart, 2).sharp();
        let am = a.matrix();
        KForm::from_sharp(chart, &(&m - &(&(&am.transpose() * &m) * am))).expect("skew")
    }

    /// Structures with (C1), (C2), (3.1) and (4.1) certified, some failing
    /// (3.2) or (4.2): Hitchin-derived ones, and `π = 0` with `a = gJg⁻¹`
    /// for a constant complex `J`, polynomial unitriangular `g` and a
    /// commuting `σ`.
    pub fn audit_instance(&mut self, chart: &Chart) -> GeneralizedStructure {
        let n = chart.dim();
        assert!(n.is_multiple_of(2), "audit families need even dimension");
        let j0 = EndoField::new(chart, Self::darboux(chart).sharp()).expect("square");
        if self.rng.gen_ratio(1, 3) {
            return self.valid_gcs(chart);
        }
        let a = if self.rng.gen_ratio(1, 4) {
            j0
        } else {
            let g = self.unipotent(chart, self.degree.max(1));
            let ginv = g.inverse_constant_det().expect("unitriangular");
            EndoField::new(chart, &(&g * j0.matrix()) * &ginv).expect("square")
        };
        let sigma = if self.rng.gen_ratio(1, 3) { KForm::zero(chart, 2) } else { self.commuting_sigma(&a) };
        GeneralizedStructure::new(a, Bivector::zero(chart), sigma).expect("same chart")
    }
}

/// `(i_{X∧Y}dσ, L_X i_Yσ − L_Y i_Xσ + d(i_{X∧Y}σ) − i_{[X,Y]}σ)`.
pub fn differential_sides(sigma: &KForm, x: &VectorField, y: &VectorField) -> Result<(KForm, KForm)> {
    let lhs = interior2(x, y, &exterior_d(sigma))?;
    let inner = interior2(x, y, sigma)?;
    let rhs = lie_derivative(x, &interior(y, sigma)?)?
        .sub(&lie_derivative(y, &interior(x, sigma)?)?)
        .add(&exterior_d(&inner))
        .sub(&interior(&lie_bracket(x, y)?, sigma)?);
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub dim: usize,
    pub degree: u32,
    pub count: usize,
    pub properties: Vec<Tally>,
}

impl FuzzSummary {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|t| t.failed == 0)
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuzz seed={} dim={} degree={} count={}", self.seed, self.dim, self.degree, self.count)?;
        for t in &self.properties {
            let mark = if t.failed == 0 { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<28} passed {:>4}  failed {:>4}", t.name, t.passed, t.failed)?;
        }
        Ok(())
    }
}

struct Tallies(Vec<Tally>);

impl Tallies {
    fn record(&mut self, name: &str, ok: bool) {
        let t = match self.0.iter_mut().find(|t| t.name == name) {
            Some(t) => t,
            None => {
                self.0.push(Tally { name: name.into(), ..Tally::default() });
                self.0.last_mut().expect("just pushed")
            }
        };
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
        }
    }
}

/// Runs every property the generators support in dimension `n`, `count`
/// times. Deterministic per seed.
pub fn run_fuzz(seed: u64, n: usize, degree: u32, count: usize) -> Result<FuzzSummary> {
    if !(2..=4).contains(&n) {
        return Err(crate::error::Error::InvalidArgument(format!("dimension must be 2, 3 or 4, got {n}")));
    }
    if degree > 2 {
        return Err(crate::error::Error::InvalidArgument(format!("degree must be at most 2, got {degree}")));
    }
    let chart = Chart::standard(n);
    let mut fz = Fuzzer::new(seed, degree);
    let mut t = Tallies(Vec::new());
    for i in 0..count {
        let (p, q, r) = (fz.poly(&chart), fz.poly(&chart), fz.poly(&chart));
        let ring = &(&p + &q) + &r == &p + &(&q + &r) && &p * &q == &q * &p && &p * &(&q + &r) == &(&p * &q) + &(&p * &r);
        t.record("ring axioms", ring);

        let one = fz.form(&chart, 1);
        let two = fz.form(&chart, 2);
        t.record("d^2 = 0", exterior_d(&exterior_d(&one)).is_zero() && exterior_d(&exterior_d(&two)).is_zero());

        let [x, y, z] = [0, 1, 2].map(|_| fz.vector_field(&chart));
        let koszul = koszul_d2(&two, &x, &y, &z)? == exterior_d(&two).eval_on(&[&x, &y, &z])?;
        t.record("Koszul", koszul);
        let (lhs, rhs) = differential_sides(&two, &x, &y)?;
        t.record("differential", lhs == rhs);
        let jac = lie_bracket(&x, &lie_bracket(&y, &z)?)?
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)?)?)
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)?)?);
        t.record("Jacobi", jac.is_zero());

        let pair = fz.commuting_pair(&chart);
        let torsion_ok = torsion_identity_defect(&pair.omega, &pair.a)?.iter().all(|(_, d)| d.is_zero());
        t.record("torsion lemma", torsion_ok);

        let structure = if n.is_multiple_of(2) {
            let valid = fz.valid_gcs(&chart);
            if n == 2 || i % 8 == 0 {
                // the Hitchin round trip is cheap, keep it on every even-n pass
                let pair = gcs_to_hitchin(&valid)?;
                t.record("Hitchin round trip", hitchin_to_gcs(&pair)? == valid);
            }
            if i % 2 == 0 {
                valid
            } else {
                fz.perturb(&valid).0
            }
        } else {
            GeneralizedStructure::new(fz.endo(&chart), fz.poisson(&chart), fz.form(&chart, 2))?
        };
        let verdict = check_gcs(&structure)?.certified();
        t.record("check_gcs <=> basis defect", verdict == integrable_on_basis(&structure)?.certified());
        t.record("opposite keeps verdict", check_gcs(&opposite(&structure))?.certified() == verdict);
        let b = fz.closed_two_form(&chart);
        t.record("closed gauge keeps verdict", check_gcs(&gauge(&structure, &b)?)?.certified() == verdict);

        let (pi, a) = fz.im_pair(&chart);
        if check_c1(&pi)?.certified() {
            let alg = PoissonAlgebroid::new(pi.clone())?;
            let im = check_im_form(&alg, &IMFormCandidate::dual_of(&a))?.certified();
            t.record("(C2) <=> IM form", check_c2(&pi, &a)?.certified() == im);
        }

        if n.is_multiple_of(2) {
            let s = fz.audit_instance(&chart);
            let audit = proof_audit(&s)?;
            if audit.c1_c2 {
                let ok = audit.int2 == audit.int3 && audit.int3 == audit.eq_3_2 && audit.int4 == audit.eq_4_2;
                t.record("proof audit", ok);
            }
        }
    }
    Ok(FuzzSummary { seed, dim: n, degree, count, properties: t.0 })
}
