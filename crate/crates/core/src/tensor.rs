//! Polynomial tensor calculus on a single coordinate chart.
//!
//! Sign conventions:
//! * forms are evaluated with the determinant convention, so
//!   `(dx∧dy)(∂x, ∂y) = 1` and a k-form component `α_I` for increasing `I`
//!   equals `α(∂_{I_1}, …, ∂_{I_k})`;
//! * `σ♯(X) = i_X σ`, as a matrix `S[j][i] = σ_{ij}` acting on vector
//!   components;
//! * `β(π♯ α) = π(α, β)`, as a matrix `P[j][i] = π^{ij}` acting on covector
//!   components;
//! * `i_{X∧Y} = i_Y ∘ i_X`, so `(i_{X∧Y} φ)(Z) = φ(X, Y, Z)`.
//!
//! With these, `ω = dx∧dy` has inverse bivector `-∂x∧∂y`. Everything
//! downstream talks to bivectors through `π♯` only.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ratpoly::{self, RatPoly, Rational, Vars};
use crate::report::{CheckReport, ReportBuilder};

type ComboTable = Arc<Vec<Vec<usize>>>;

/// Strictly increasing k-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> ComboTable {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), ComboTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&(n, k)) {
        return t.clone();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    let t = Arc::new(out);
    cache.write().unwrap().insert((n, k), t.clone());
    t
}

/// Sorts an index tuple, returning the permutation sign; `None` on repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

#[derive(Clone, Debug)]
pub struct Chart {
    coords: Vars,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let coords = ratpoly::vars(names);
        for (i, a) in coords.iter().enumerate() {
            if a.is_empty() || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidArgument(format!("bad coordinate name `{a}`")));
            }
            if !a.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                return Err(Error::InvalidArgument(format!("bad coordinate name `{a}`")));
            }
            if coords[..i].contains(a) {
                return Err(Error::InvalidArgument(format!("duplicate coordinate `{a}`")));
            }
        }
        if coords.is_empty() {
            return Err(Error::InvalidArgument("chart needs at least one coordinate".into()));
        }
        Ok(Chart { coords })
    }

    /// Chart with coordinates `x0, …, x{n-1}`.
    pub fn standard(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Chart::new(&names).expect("standard names are valid")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.coords
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn zero(&self) -> RatPoly {
        RatPoly::zero(&self.coords)
    }

    pub fn one(&self) -> RatPoly {
        RatPoly::one(&self.coords)
    }

    pub fn constant(&self, c: Rational) -> RatPoly {
        RatPoly::constant(&self.coords, c)
    }

    pub fn coord(&self, i: usize) -> RatPoly {
        RatPoly::var(&self.coords, i)
    }

    pub fn poly(&self, s: &str) -> Result<RatPoly> {
        RatPoly::parse(s, &self.coords)
    }

    pub fn same_as(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.coords, &other.coords) || self.coords[..] == other.coords[..]
    }

    pub fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(format!(
                "({}) vs ({})",
                self.coords.join(", "),
                other.coords.join(", ")
            )))
        }
    }

    /// Product chart with every coordinate suffixed per factor.
    pub fn power(&self, factors: usize) -> Chart {
        let names: Vec<String> = (1..=factors)
            .flat_map(|k| self.coords.iter().map(move |c| format!("{c}_{k}")))
            .collect();
        Chart::new(&names).expect("suffixed names are valid")
    }

    fn lift(&self, p: &RatPoly) -> RatPoly {
        p.with_vars(&self.coords).expect("polynomial lives on this chart")
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Chart {}

/// `X(f) = Σ X^i ∂_i f`.
fn directional(comps: &[RatPoly], f: &RatPoly) -> RatPoly {
    let mut acc = RatPoly::zero(f.vars());
    for (i, c) in comps.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = f.partial_idx(i);
        if !d.is_zero() {
            acc = &acc + &(c * &d);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<RatPoly>,
}

impl VectorField {
    pub fn new(chart: &Chart, comps: Vec<RatPoly>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), got: comps.len() });
        }
        let comps = comps.iter().map(|p| p.with_vars(chart.vars())).collect::<Result<_>>()?;
        Ok(VectorField { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), comps: vec![chart.zero(); chart.dim()] }
    }

    /// The coordinate field `∂_i`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[i] = chart.one();
        v
    }

    pub fn parse(chart: &Chart, comps: &[&str]) -> Result<Self> {
        Self::new(chart, comps.iter().map(|s| chart.poly(s)).collect::<Result<_>>()?)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn comps(&self) -> &[RatPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatPoly::is_zero)
    }

    pub fn apply(&self, f: &RatPoly) -> RatPoly {
        directional(&self.comps, &self.chart.lift(f))
    }

    pub fn scale(&self, f: &RatPoly) -> Self {
        let f = self.chart.lift(f);
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * &f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|a| -a).collect() }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

/// `[X,Y]^i = Σ_j (X^j ∂_j Y^i − Y^j ∂_j X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.chart.ensure_same(&y.chart)?;
    let comps = (0..x.chart.dim())
        .map(|i| &directional(&x.comps, &y.comps[i]) - &directional(&y.comps, &x.comps[i]))
        .collect();
    Ok(VectorField { chart: x.chart.clone(), comps })
}

/// Differential form with polynomial coefficients, stored on increasing
/// multi-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    chart: Chart,
    degree: usize,
    comps: Vec<RatPoly>,
}

impl KForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        let len = combinations(chart.dim(), degree).len();
        KForm { chart: chart.clone(), degree, comps: vec![chart.zero(); len] }
    }

    pub fn function(chart: &Chart, f: RatPoly) -> Self {
        KForm { chart: chart.clone(), degree: 0, comps: vec![chart.lift(&f)] }
    }

    /// Builds a form from `(index tuple, coefficient)` pairs. Tuples need not
    /// be increasing; they are sorted with the appropriate sign and summed.
    pub fn from_entries(
        chart: &Chart,
        degree: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, RatPoly)>,
    ) -> Result<Self> {
        let mut f = Self::zero(chart, degree);
        for (idx, c) in entries {
            if idx.len() != degree {
                return Err(Error::DimensionMismatch { expected: degree, got: idx.len() });
            }
            if idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::InvalidArgument(format!("index out of range in {idx:?}")));
            }
            let c = c.with_vars(chart.vars())?;
            match sort_with_sign(&idx) {
                None => {
                    if !c.is_zero() {
                        return Err(Error::InvalidArgument(format!("repeated index in {idx:?}")));
                    }
                }
                Some((sorted, sign)) => {
                    let k = f.position(&sorted);
                    f.comps[k] = if sign > 0 { &f.comps[k] + &c } else { &f.comps[k] - &c };
                }
            }
        }
        Ok(f)
    }

    /// 1-form `Σ ξ_i dx^i`.
    pub fn one_form(chart: &Chart, comps: Vec<RatPoly>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), got: comps.len() });
        }
        Self::from_entries(chart, 1, comps.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// The coordinate 1-form `dx^i`.
    pub fn basis_one(chart: &Chart, i: usize) -> Self {
        let mut f = Self::zero(chart, 1);
        f.comps[i] = chart.one();
        f
    }

    /// Basis form `dx^{i_1} ∧ … ∧ dx^{i_k}` (any order, signed).
    pub fn basis(chart: &Chart, idx: &[usize]) -> Result<Self> {
        Self::from_entries(chart, idx.len(), [(idx.to_vec(), chart.one())])
    }

    fn position(&self, sorted: &[usize]) -> usize {
        combinations(self.chart.dim(), self.degree)
            .binary_search_by(|c| c.as_slice().cmp(sorted))
            .expect("valid increasing index")
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Components in lexicographic order of increasing multi-indices.
    pub fn comps(&self) -> &[RatPoly] {
        &self.comps
    }

    pub fn indexed(&self) -> impl Iterator<Item = (Vec<usize>, &RatPoly)> + '_ {
        let table = combinations(self.chart.dim(), self.degree);
        self.comps.iter().enumerate().map(move |(k, c)| (table[k].clone(), c))
    }

    /// Component for an arbitrary index tuple (antisymmetrized).
    pub fn get(&self, idx: &[usize]) -> RatPoly {
        match sort_with_sign(idx) {
            None => self.chart.zero(),
            Some((sorted, sign)) => {
                let c = &self.comps[self.position(&sorted)];
                if sign > 0 {
                    c.clone()
                } else {
                    -c
                }
            }
        }
    }

    /// The scalar value of a 0-form.
    pub fn as_function(&self) -> RatPoly {
        assert_eq!(self.degree, 0, "not a function");
        self.comps[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatPoly::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "form degree");
        KForm {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "form degree");
        KForm {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        KForm { chart: self.chart.clone(), degree: self.degree, comps: self.comps.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, f: &RatPoly) -> Self {
        let f = self.chart.lift(f);
        KForm {
            chart: self.chart.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|a| a * &f).collect(),
        }
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        KForm { chart: self.chart.clone(), degree: self.degree, comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// Evaluates the form on `degree` vector fields.
    pub fn eval_on(&self, vectors: &[&VectorField]) -> Result<RatPoly> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: vectors.len() });
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = interior(v, &cur)?;
        }
        Ok(cur.as_function())
    }

    /// `σ♯` for a 2-form: the matrix `S` with `(σ♯X)_j = Σ_i S[j][i] X^i`.
    pub fn sharp(&self) -> PolyMatrix {
        assert_eq!(self.degree, 2, "sharp needs a 2-form");
        let n = self.chart.dim();
        PolyMatrix::from_fn(self.chart.vars(), n, n, |j, i| self.get(&[i, j]))
    }

    /// Inverse of [`KForm::sharp`]; the matrix must be skew.
    pub fn from_sharp(chart: &Chart, s: &PolyMatrix) -> Result<Self> {
        let n = chart.dim();
        if s.rows() != n || s.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.rows() });
        }
        for i in 0..n {
            for j in i..n {
                if !(&s[(i, j)] + &s[(j, i)]).is_zero() {
                    return Err(Error::InvalidArgument("matrix is not skew".into()));
                }
            }
        }
        Self::from_entries(
            chart,
            2,
            combinations(n, 2).iter().map(|c| (c.clone(), s[(c[1], c[0])].clone())),
        )
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (idx, c) in self.indexed() {
            if c.is_zero() {
                continue;
            }
            let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", self.chart.coords()[i])).collect();
            if basis.is_empty() {
                parts.push(format!("{c}"));
            } else {
                parts.push(format!("({c})*{}", basis.join("^")));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Contraction in the first slot: `(i_X α)(Y, …) = α(X, Y, …)`.
pub fn interior(x: &VectorField, alpha: &KForm) -> Result<KForm> {
    x.chart.ensure_same(&alpha.chart)?;
    if alpha.degree == 0 {
        return Err(Error::InvalidArgument("interior product of a 0-form".into()));
    }
    let n = alpha.chart.dim();
    let mut out = KForm::zero(&alpha.chart, alpha.degree - 1);
    let targets = combinations(n, alpha.degree - 1);
    for (k, j) in targets.iter().enumerate() {
        let mut acc = alpha.chart.zero();
        for i in 0..n {
            if x.comps[i].is_zero() || j.contains(&i) {
                continue;
            }
            // move i to the front of the sorted tuple
            let before = j.iter().filter(|&&v| v < i).count();
            let mut sorted = j.clone();
            sorted.insert(before, i);
            let c = &alpha.comps[alpha.position(&sorted)];
            if c.is_zero() {
                continue;
            }
            let term = &x.comps[i] * c;
            acc = if before % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        out.comps[k] = acc;
    }
    Ok(out)
}

/// `i_{X∧Y} φ = i_Y i_X φ`.
pub fn interior2(x: &VectorField, y: &VectorField, phi: &KForm) -> Result<KForm> {
    interior(y, &interior(x, phi)?)
}

/// Coordinate exterior derivative.
pub fn exterior_d(alpha: &KForm) -> KForm {
    let n = alpha.chart.dim();
    let mut out = KForm::zero(&alpha.chart, alpha.degree + 1);
    let targets = combinations(n, alpha.degree + 1);
    for (k, idx) in targets.iter().enumerate() {
        let mut acc = alpha.chart.zero();
        for p in 0..idx.len() {
            let mut rest = idx.clone();
            let i = rest.remove(p);
            let c = &alpha.comps[alpha.position(&rest)];
            let d = c.partial_idx(i);
            if d.is_zero() {
                continue;
            }
            acc = if p % 2 == 0 { &acc + &d } else { &acc - &d };
        }
        out.comps[k] = acc;
    }
    out
}

/// `df` for a function.
pub fn d_fn(chart: &Chart, f: &RatPoly) -> KForm {
    exterior_d(&KForm::function(chart, f.clone()))
}

pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    a.chart.ensure_same(&b.chart)?;
    let n = a.chart.dim();
    let p = a.degree;
    let deg = a.degree + b.degree;
    let mut out = KForm::zero(&a.chart, deg);
    if deg > n {
        return Ok(out);
    }
    let targets = combinations(n, deg);
    let splits = combinations(deg, p);
    for (k, idx) in targets.iter().enumerate() {
        let mut acc = a.chart.zero();
        for s in splits.iter() {
            let left: Vec<usize> = s.iter().map(|&t| idx[t]).collect();
            let right: Vec<usize> = (0..deg).filter(|t| !s.contains(t)).map(|t| idx[t]).collect();
            let ca = &a.comps[a.position(&left)];
            let cb = &b.comps[b.position(&right)];
            if ca.is_zero() || cb.is_zero() {
                continue;
            }
            // shuffle sign: inversions between the chosen slots and the rest
            let inversions: usize =
                s.iter().enumerate().map(|(r, &t)| t - r).sum();
            let term = ca * cb;
            acc = if inversions.is_multiple_of(2) { &acc + &term } else { &acc - &term };
        }
        out.comps[k] = acc;
    }
    Ok(out)
}

/// Cartan formula `L_X = i_X d + d i_X`.
pub fn lie_derivative(x: &VectorField, alpha: &KForm) -> Result<KForm> {
    x.chart.ensure_same(&alpha.chart)?;
    if alpha.degree == 0 {
        return Ok(KForm::function(&alpha.chart, x.apply(&alpha.comps[0])));
    }
    let a = interior(x, &exterior_d(alpha))?;
    let b = exterior_d(&interior(x, alpha)?);
    Ok(a.add(&b))
}

/// Six-term Koszul expression for `dσ(X, Y, Z)`.
pub fn koszul_d2(sigma: &KForm, x: &VectorField, y: &VectorField, z: &VectorField) -> Result<RatPoly> {
    if sigma.degree != 2 {
        return Err(Error::InvalidArgument("koszul_d2 needs a 2-form".into()));
    }
    for v in [x, y, z] {
        v.chart.ensure_same(&sigma.chart)?;
    }
    let s = |u: &VectorField, v: &VectorField| sigma.eval_on(&[u, v]);
    let mut acc = x.apply(&s(y, z)?);
    acc = &acc + &y.apply(&s(z, x)?);
    acc = &acc + &z.apply(&s(x, y)?);
    acc = &acc - &s(&lie_bracket(x, y)?, z)?;
    acc = &acc - &s(&lie_bracket(z, x)?, y)?;
    acc = &acc - &s(&lie_bracket(y, z)?, x)?;
    Ok(acc)
}

/// Bivector with components `π^{ij} = π(dx^i, dx^j)` on `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    chart: Chart,
    comps: Vec<RatPoly>,
}

impl Bivector {
    pub fn zero(chart: &Chart) -> Self {
        Bivector { chart: chart.clone(), comps: vec![chart.zero(); combinations(chart.dim(), 2).len()] }
    }

    pub fn from_entries(chart: &Chart, entries: impl IntoIterator<Item = ((usize, usize), RatPoly)>) -> Result<Self> {
        let f = KForm::from_entries(chart, 2, entries.into_iter().map(|((i, j), c)| (vec![i, j], c)))?;
        Ok(Bivector { chart: chart.clone(), comps: f.comps })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn comps(&self) -> &[RatPoly] {
        &self.comps
    }

    /// `π^{ij}` for any ordered pair.
    pub fn get(&self, i: usize, j: usize) -> RatPoly {
        if i == j {
            return self.chart.zero();
        }
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let k = combinations(self.chart.dim(), 2).binary_search(&vec![a, b]).unwrap();
        if s > 0 {
            self.comps[k].clone()
        } else {
            -&self.comps[k]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatPoly::is_zero)
    }

    pub fn neg(&self) -> Self {
        Bivector { chart: self.chart.clone(), comps: self.comps.iter().map(|c| -c).collect() }
    }

    /// `π(ξ, η) = Σ π^{ij} ξ_i η_j`.
    pub fn eval_on(&self, xi: &KForm, eta: &KForm) -> Result<RatPoly> {
        self.chart.ensure_same(&xi.chart)?;
        self.chart.ensure_same(&eta.chart)?;
        let n = self.chart.dim();
        let mut acc = self.chart.zero();
        for (k, c) in combinations(n, 2).iter().enumerate() {
            let p = &self.comps[k];
            if p.is_zero() {
                continue;
            }
            let (i, j) = (c[0], c[1]);
            let t = &(&xi.comps[i] * &eta.comps[j]) - &(&xi.comps[j] * &eta.comps[i]);
            acc = &acc + &(p * &t);
        }
        Ok(acc)
    }

    /// `π♯` as a matrix acting on covector components: `P[j][i] = π^{ij}`.
    pub fn sharp(&self) -> PolyMatrix {
        let n = self.chart.dim();
        PolyMatrix::from_fn(self.chart.vars(), n, n, |j, i| self.get(i, j))
    }

    pub fn from_sharp(chart: &Chart, p: &PolyMatrix) -> Result<Self> {
        // same storage rule as 2-forms: component (i,j) is P[j][i]
        let f = KForm::from_sharp(chart, p)?;
        Ok(Bivector { chart: chart.clone(), comps: f.comps })
    }

    pub fn apply(&self, xi: &KForm) -> VectorField {
        let comps = self.sharp().mul_vec(&xi.comps);
        VectorField { chart: self.chart.clone(), comps }
    }

    /// The bivector with the same components viewed as a 2-form; used for
    /// printing and storage only.
    pub fn as_form(&self) -> KForm {
        KForm { chart: self.chart.clone(), degree: 2, comps: self.comps.clone() }
    }

    pub fn from_form(f: &KForm) -> Self {
        assert_eq!(f.degree, 2);
        Bivector { chart: f.chart.clone(), comps: f.comps.clone() }
    }
}

/// `σ♯(X) = i_X σ` as a 1-form.
pub fn sharp_form(sigma: &KForm, x: &VectorField) -> Result<KForm> {
    interior(x, sigma)
}

/// `π♯(ξ)` as a vector field.
pub fn sharp_bivector(pi: &Bivector, xi: &KForm) -> Result<VectorField> {
    pi.chart.ensure_same(&xi.chart)?;
    Ok(pi.apply(xi))
}

/// Bivector `π` with `π♯ = (ω♯)⁻¹`; requires a constant nonzero determinant.
pub fn invert_2form(omega: &KForm) -> Result<Bivector> {
    if omega.degree != 2 {
        return Err(Error::InvalidArgument("invert_2form needs a 2-form".into()));
    }
    let inv = omega.sharp().inverse_constant_det()?;
    Bivector::from_sharp(&omega.chart, &inv)
}

/// 2-form `ω` with `ω♯ = (π♯)⁻¹`.
pub fn invert_bivector(pi: &Bivector) -> Result<KForm> {
    let inv = pi.sharp().inverse_constant_det().map_err(|e| match e {
        Error::NondegenerateInverseUnavailable(m) => Error::DegeneratePi(m),
        other => other,
    })?;
    KForm::from_sharp(&pi.chart, &inv)
}

/// (1,1)-tensor given by its matrix on tangent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoField {
    chart: Chart,
    matrix: PolyMatrix,
}

impl EndoField {
    pub fn new(chart: &Chart, matrix: PolyMatrix) -> Result<Self> {
        if matrix.rows() != chart.dim() || matrix.cols() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), got: matrix.rows() });
        }
        let rows = (0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect();
        let matrix = PolyMatrix::from_rows(chart.vars(), rows)?;
        Ok(EndoField { chart: chart.clone(), matrix })
    }

    pub fn parse(chart: &Chart, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| chart.poly(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(chart, PolyMatrix::from_rows(chart.vars(), rows)?)
    }

    pub fn zero(chart: &Chart) -> Self {
        EndoField { chart: chart.clone(), matrix: PolyMatrix::zeros(chart.vars(), chart.dim(), chart.dim()) }
    }

    pub fn identity(chart: &Chart) -> Self {
        EndoField { chart: chart.clone(), matrix: PolyMatrix::identity(chart.vars(), chart.dim()) }
    }

    pub fn scalar(chart: &Chart, c: Rational) -> Self {
        EndoField { chart: chart.clone(), matrix: PolyMatrix::identity(chart.vars(), chart.dim()).scale(&c) }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.matrix.mul_vec(&x.comps) }
    }

    /// `a*ξ = ξ ∘ a`.
    pub fn transpose_apply(&self, xi: &KForm) -> KForm {
        assert_eq!(xi.degree, 1, "a* acts on 1-forms");
        let comps = self.matrix.transpose().mul_vec(&xi.comps);
        KForm { chart: self.chart.clone(), degree: 1, comps }
    }

    pub fn compose(&self, o: &EndoField) -> EndoField {
        EndoField { chart: self.chart.clone(), matrix: &self.matrix * &o.matrix }
    }

    pub fn add(&self, o: &EndoField) -> EndoField {
        EndoField { chart: self.chart.clone(), matrix: &self.matrix + &o.matrix }
    }

    pub fn sub(&self, o: &EndoField) -> EndoField {
        EndoField { chart: self.chart.clone(), matrix: &self.matrix - &o.matrix }
    }

    pub fn neg(&self) -> EndoField {
        EndoField { chart: self.chart.clone(), matrix: -&self.matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// `𝒩_a(X,Y) = [aX, aY] + a²[X,Y] − a([aX,Y] + [X,aY])`.
pub fn torsion(a: &EndoField, x: &VectorField, y: &VectorField) -> Result<VectorField> {
    let ax = a.apply(x);
    let ay = a.apply(y);
    let t1 = lie_bracket(&ax, &ay)?;
    let xy = lie_bracket(x, y)?;
    let t2 = a.apply(&a.apply(&xy));
    let t3 = a.apply(&lie_bracket(&ax, y)?.add(&lie_bracket(x, &ay)?));
    Ok(t1.add(&t2).sub(&t3))
}

/// `ω(a·, ·)` as a bilinear form; a genuine 2-form only when `ω` and `a`
/// commute. Returns the antisymmetric part stored on increasing indices
/// together with the commutation defect matrix `ω♯a − a*ω♯`.
pub fn contract_first(omega: &KForm, a: &EndoField) -> (KForm, PolyMatrix) {
    let s = omega.sharp();
    let m = &a.matrix;
    let sa = &s * m; // (ω♯ a X)_j = ω(aX, ∂_j)
    let ats = &m.transpose() * &s; // (a* ω♯ X)_j = ω(X, a ∂_j)
    let defect = &sa - &ats;
    let n = omega.chart.dim();
    let form = KForm::from_entries(
        &omega.chart,
        2,
        combinations(n, 2).iter().map(|c| (c.clone(), sa[(c[1], c[0])].clone())),
    )
    .expect("valid indices");
    (form, defect)
}

/// `a*ω = ω(a·, a·)`.
pub fn double_pullback(omega: &KForm, a: &EndoField) -> KForm {
    let s = omega.sharp();
    let m = &a.matrix;
    let full = &(&m.transpose() * &s) * m;
    KForm::from_sharp(&omega.chart, &full).expect("congruence preserves skewness")
}

/// Polynomial map between charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    source: Chart,
    target: Chart,
    comps: Vec<RatPoly>,
}

impl PolyMap {
    pub fn new(source: &Chart, target: &Chart, comps: Vec<RatPoly>) -> Result<Self> {
        if comps.len() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), got: comps.len() });
        }
        let comps = comps.iter().map(|p| p.with_vars(source.vars())).collect::<Result<_>>()?;
        Ok(PolyMap { source: source.clone(), target: target.clone(), comps })
    }

    pub fn parse(source: &Chart, target: &Chart, comps: &[&str]) -> Result<Self> {
        Self::new(source, target, comps.iter().map(|s| source.poly(s)).collect::<Result<_>>()?)
    }

    pub fn identity(chart: &Chart) -> Self {
        PolyMap { source: chart.clone(), target: chart.clone(), comps: (0..chart.dim()).map(|i| chart.coord(i)).collect() }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn comps(&self) -> &[RatPoly] {
        &self.comps
    }

    /// Jacobian `Df[j][i] = ∂f^j/∂x^i`.
    pub fn jacobian(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.source.vars(), self.target.dim(), self.source.dim(), |j, i| {
            self.comps[j].partial_idx(i)
        })
    }

    /// Pulls a target polynomial back to the source.
    pub fn pull_fn(&self, f: &RatPoly) -> Result<RatPoly> {
        f.with_vars(self.target.vars())?.compose(&self.comps, self.source.vars())
    }

    pub fn pull_matrix(&self, m: &PolyMatrix) -> Result<PolyMatrix> {
        m.compose(&self.comps, self.source.vars())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PolyMap) -> Result<PolyMap> {
        self.target.ensure_same(&g.source)?;
        let comps = g.comps.iter().map(|c| self.pull_fn(c)).collect::<Result<_>>()?;
        Ok(PolyMap { source: self.source.clone(), target: g.target.clone(), comps })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

/// Pullback of a form along a polynomial map.
pub fn pullback(f: &PolyMap, alpha: &KForm) -> Result<KForm> {
    f.target.ensure_same(&alpha.chart)?;
    if alpha.degree == 0 {
        return Ok(KForm::function(&f.source, f.pull_fn(&alpha.comps[0])?));
    }
    let dfs: Vec<KForm> = f.comps.iter().map(|c| d_fn(&f.source, c)).collect();
    let mut out = KForm::zero(&f.source, alpha.degree);
    for (idx, c) in alpha.indexed() {
        if c.is_zero() {
            continue;
        }
        let mut w = dfs[idx[0]].clone();
        for &j in &idx[1..] {
            w = wedge(&w, &dfs[j])?;
        }
        out = out.add(&w.scale(&f.pull_fn(c)?));
    }
    Ok(out)
}

/// Certifies `Df π₁♯ Dfᵀ = π₂♯ ∘ f`, i.e. that `f` relates the bivectors.
pub fn pushforward_bivector_check(f: &PolyMap, pi1: &Bivector, pi2: &Bivector) -> Result<CheckReport> {
    f.source.ensure_same(&pi1.chart)?;
    f.target.ensure_same(&pi2.chart)?;
    let mut b = ReportBuilder::new("f-relatedness of bivectors");
    push_bivector_defects(&mut b, "(bivector)", f, pi1, pi2)?;
    Ok(b.finish())
}

pub(crate) fn push_bivector_defects(
    b: &mut ReportBuilder,
    label: &str,
    f: &PolyMap,
    pi1: &Bivector,
    pi2: &Bivector,
) -> Result<()> {
    let df = f.jacobian();
    let lhs = &(&df * &pi1.sharp()) * &df.transpose();
    let rhs = f.pull_matrix(&pi2.sharp())?;
    let diff = &lhs - &rhs;
    for ((i, j), p) in diff.entries() {
        if i <= j {
            b.push(label, format!("{i},{j}"), p.clone());
        }
    }
    Ok(())
}

/// Unit rational for convenience in tests and builders.
pub fn q(n: i64) -> Rational {
    ratpoly::int(n)
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

pub fn is_zero_q(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn r3() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn form(c: &Chart, entries: &[(&[usize], &str)]) -> KForm {
        let k = entries.first().map_or(0, |e| e.0.len());
        KForm::from_entries(c, k, entries.iter().map(|(i, s)| (i.to_vec(), c.poly(s).unwrap()))).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let c = r2();
        let dx = VectorField::basis(&c, 0);
        let dy = VectorField::basis(&c, 1);
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        let x = VectorField::parse(&c, &["x*y", "x^2"]).unwrap();
        assert!(lie_bracket(&x, &x).unwrap().is_zero());
        // [x∂y, y∂x] = x∂x − y∂y
        let a = VectorField::parse(&c, &["0", "x"]).unwrap();
        let b = VectorField::parse(&c, &["y", "0"]).unwrap();
        assert_eq!(lie_bracket(&a, &b).unwrap(), VectorField::parse(&c, &["x", "-y"]).unwrap());
    }

    #[test]
    fn exterior_d_examples() {
        let c = r2();
        assert_eq!(exterior_d(&form(&c, &[(&[1], "x")])), form(&c, &[(&[0, 1], "1")]));
        let f = c.poly("x^2*y").unwrap();
        assert!(exterior_d(&d_fn(&c, &f)).is_zero());
        let top = form(&c, &[(&[0, 1], "x*y")]);
        let d = exterior_d(&top);
        assert_eq!(d.degree(), 3);
        assert!(d.is_zero());
    }

    #[test]
    fn koszul_examples() {
        let c = r3();
        let [ex, ey, ez] = [0, 1, 2].map(|i| VectorField::basis(&c, i));
        let s = form(&c, &[(&[0, 1], "1")]);
        assert!(koszul_d2(&s, &ex, &ey, &ez).unwrap().is_zero());
        let s = form(&c, &[(&[1, 2], "x")]);
        assert_eq!(koszul_d2(&s, &ex, &ey, &ez).unwrap(), c.one());
        let v = VectorField::parse(&c, &["y", "x*z", "1"]).unwrap();
        assert!(koszul_d2(&s, &v, &v, &ez).unwrap().is_zero());
    }

    #[test]
    fn interior_examples() {
        let c = r2();
        let area = form(&c, &[(&[0, 1], "1")]);
        assert_eq!(interior(&VectorField::basis(&c, 0), &area).unwrap(), KForm::basis_one(&c, 1));
        let x = VectorField::parse(&c, &["x", "y^2"]).unwrap();
        assert!(interior(&x, &interior(&x, &area).unwrap()).unwrap().is_zero());
        let xdy = VectorField::parse(&c, &["0", "x"]).unwrap();
        assert_eq!(interior(&xdy, &area).unwrap(), form(&c, &[(&[0], "-x")]));
        assert!(interior(&x, &KForm::function(&c, c.one())).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let c = r2();
        let ex = VectorField::basis(&c, 0);
        assert_eq!(lie_derivative(&ex, &form(&c, &[(&[1], "x")])).unwrap(), KForm::basis_one(&c, 1));
        let f = c.poly("x*y").unwrap();
        assert_eq!(lie_derivative(&ex, &d_fn(&c, &f)).unwrap(), d_fn(&c, &ex.apply(&f)));
        assert!(lie_derivative(&ex, &KForm::basis_one(&c, 1)).unwrap().is_zero());
    }

    #[test]
    fn sharp_conventions() {
        let c = r2();
        let pi = Bivector::from_entries(&c, [((0, 1), c.one())]).unwrap();
        assert_eq!(pi.apply(&KForm::basis_one(&c, 0)), VectorField::basis(&c, 1));
        let w = form(&c, &[(&[0, 1], "1")]);
        assert_eq!(sharp_form(&w, &VectorField::basis(&c, 0)).unwrap(), KForm::basis_one(&c, 1));
        assert!(Bivector::zero(&c).sharp().is_zero());
    }

    #[test]
    fn invert_examples() {
        let c = r2();
        let w = form(&c, &[(&[0, 1], "1")]);
        let pi = invert_2form(&w).unwrap();
        assert_eq!(pi.apply(&KForm::basis_one(&c, 1)), VectorField::basis(&c, 0));
        assert_eq!(pi.apply(&KForm::basis_one(&c, 0)), VectorField::basis(&c, 1).neg());
        assert_eq!(pi.get(0, 1), c.poly("-1").unwrap());
        let back = invert_bivector(&pi).unwrap();
        assert_eq!(back.sharp(), w.sharp());

        let c4 = Chart::new(&["x", "y", "z", "w"]).unwrap();
        let w4 = form(&c4, &[(&[0, 1], "1"), (&[2, 3], "1")]);
        let pi4 = invert_2form(&w4).unwrap();
        assert_eq!(&pi4.sharp() * &w4.sharp(), PolyMatrix::identity(c4.vars(), 4));
        assert_eq!(pi4.get(0, 1), c4.poly("-1").unwrap());
        assert_eq!(pi4.get(2, 3), c4.poly("-1").unwrap());

        let deg = form(&c, &[(&[0, 1], "x")]);
        assert!(matches!(invert_2form(&deg), Err(Error::NondegenerateInverseUnavailable(_))));
    }

    #[test]
    fn pullback_examples() {
        let s = Chart::new(&["t"]).unwrap();
        let c = r2();
        let id = PolyMap::identity(&c);
        let a = form(&c, &[(&[0], "x*y"), (&[1], "y^2")]);
        assert_eq!(pullback(&id, &a).unwrap(), a);
        let f = PolyMap::parse(&s, &c, &["t", "t^2"]).unwrap();
        let dy = KForm::basis_one(&c, 1);
        assert_eq!(pullback(&f, &dy).unwrap(), form(&s, &[(&[0], "2*t")]));
        assert_eq!(pullback(&f, &exterior_d(&dy)).unwrap(), exterior_d(&pullback(&f, &dy).unwrap()));
        let g = form(&c, &[(&[0], "y"), (&[1], "x^2")]);
        assert_eq!(pullback(&f, &exterior_d(&g)).unwrap(), exterior_d(&pullback(&f, &g).unwrap()));
    }

    #[test]
    fn pushforward_examples() {
        let c = r2();
        let pi = Bivector::from_entries(&c, [((0, 1), c.poly("x").unwrap())]).unwrap();
        assert!(pushforward_bivector_check(&PolyMap::identity(&c), &pi, &pi).unwrap().certified());

        let line = Chart::new(&["u"]).unwrap();
        let proj = PolyMap::parse(&c, &line, &["x"]).unwrap();
        assert!(pushforward_bivector_check(&proj, &pi, &Bivector::zero(&line)).unwrap().certified());

        let c3 = r3();
        let inc = PolyMap::parse(&c, &c3, &["x", "y", "0"]).unwrap();
        let p1 = Bivector::from_entries(&c, [((0, 1), c.one())]).unwrap();
        let p2 = Bivector::from_entries(&c3, [((0, 1), c3.one())]).unwrap();
        assert!(pushforward_bivector_check(&inc, &p1, &p2).unwrap().certified());
        let p3 = Bivector::from_entries(&c3, [((1, 2), c3.one())]).unwrap();
        assert!(!pushforward_bivector_check(&inc, &p1, &p3).unwrap().certified());
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let c = r3();
        let a = form(&c, &[(&[0], "x"), (&[2], "y")]);
        let b = form(&c, &[(&[1], "1"), (&[2], "z")]);
        let ab = wedge(&a, &b).unwrap();
        assert_eq!(ab, wedge(&b, &a).unwrap().neg());
        let vol = wedge(&wedge(&KForm::basis_one(&c, 0), &KForm::basis_one(&c, 1)).unwrap(), &KForm::basis_one(&c, 2)).unwrap();
        assert_eq!(vol, KForm::basis(&c, &[0, 1, 2]).unwrap());
        assert_eq!(KForm::basis(&c, &[1, 0]).unwrap(), KForm::basis(&c, &[0, 1]).unwrap().neg());
    }
}
