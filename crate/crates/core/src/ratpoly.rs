//! Exact multivariate polynomials over the rationals.
//!
//! A [`RatPoly`] carries its own ordered variable list. Binary operations on
//! polynomials with different variable lists align them by name, so a
//! polynomial in `(x, y)` can be added to one in `(y, z)`; the result lives
//! in `(x, y, z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Ordered, shared list of variable names.
pub type Vars = Arc<[String]>;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/2"` and similar.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse { pos: 0, msg: format!("invalid rational `{s}`") };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(Error::Parse { pos: 0, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug)]
pub struct RatPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl RatPoly {
    pub fn zero(vars: &Vars) -> Self {
        RatPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        RatPoly { vars: vars.clone(), terms }
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, int(c))
    }

    /// The coordinate function for variable `idx`.
    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[idx] = 1;
        Self::monomial(vars, m, Rational::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(Self::var(vars, idx))
    }

    pub fn monomial(vars: &Vars, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        RatPoly { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if !self.is_constant() {
            return None;
        }
        self.terms.values().next().cloned()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Re-expresses `self` over `target`, which must contain every variable
    /// that actually occurs in `self`.
    pub fn with_vars(&self, target: &Vars) -> Result<Self> {
        if same_vars(&self.vars, target) {
            return Ok(RatPoly { vars: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| target.iter().position(|t| t == v)).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => return Err(Error::UnknownCoordinate(self.vars[i].clone())),
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    fn aligned(&self, other: &Self) -> (std::borrow::Cow<'_, Self>, Self) {
        if same_vars(&self.vars, &other.vars) {
            return (std::borrow::Cow::Borrowed(self), other.clone());
        }
        let mut names: Vec<String> = self.vars.to_vec();
        for v in other.vars.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        let union: Vars = names.into();
        let a = self.with_vars(&union).expect("union contains all variables");
        let b = other.with_vars(&union).expect("union contains all variables");
        (std::borrow::Cow::Owned(a), b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        RatPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_idx(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[idx] = e - 1;
            out.add_term(m2, c * int(e as i64));
        }
        out
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn partial(&self, name: &str) -> Result<Self> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(self.partial_idx(idx))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes a polynomial for every variable of `self`.
    ///
    /// `subs[i]` replaces variable `i`; all substitutes must share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, subs: &[RatPoly], target: &Vars) -> Result<Self> {
        if subs.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: subs.len() });
        }
        let subs: Vec<RatPoly> =
            subs.iter().map(|s| s.with_vars(target)).collect::<Result<_>>()?;
        let mut powers: Vec<Vec<RatPoly>> = vec![vec![RatPoly::one(target)]; subs.len()];
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Parses the textual grammar `3*x0^2*x1 - 1/2*x1`, with parentheses
    /// allowed. Identifiers must name variables in `vars`.
    pub fn parse(s: &str, vars: &Vars) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, vars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }

    fn cmp_display(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    }
}

impl PartialEq for RatPoly {
    fn eq(&self, other: &Self) -> bool {
        if same_vars(&self.vars, &other.vars) {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for RatPoly {}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &'a RatPoly) -> RatPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = a.into_owned();
        for (m, c) in b.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &'a RatPoly) -> RatPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = a.into_owned();
        for (m, c) in b.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &'a RatPoly) -> RatPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = RatPoly::zero(&a.vars);
        if a.is_zero() || b.is_zero() {
            return out;
        }
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: RatPoly) -> RatPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: &'a RatPoly) -> RatPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<RatPoly> for &'a RatPoly {
            type Output = RatPoly;
            fn $f(self, rhs: RatPoly) -> RatPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Display for RatPoly {
    /// Graded order, highest degree first; byte-stable for equal polynomials.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| RatPoly::cmp_display(a.0, b.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = RatPoly::zero(self.vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected exponent"));
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = s.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(Some(e));
        }
        Ok(None)
    }

    fn factor(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(match self.exponent()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                })
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                if let Some(e) = self.exponent()? {
                    value = num_traits::pow(value, e as usize);
                }
                Ok(RatPoly::constant(self.vars, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self.vars.iter().position(|v| v == name).ok_or(Error::Parse {
                    pos: start,
                    msg: format!("unknown identifier `{name}`"),
                })?;
                let mut m = vec![0; self.vars.len()];
                m[idx] = self.exponent()?.unwrap_or(1);
                Ok(RatPoly::monomial(self.vars, m, Rational::one()))
            }
            _ => Err(self.error("expected number, identifier or `(`")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }
}

/// Best-effort conversion for diagnostics only.
pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    fn p(s: &str) -> RatPoly {
        RatPoly::parse(s, &xy()).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert!((p("x") + p("-x")).is_zero());
        assert_eq!(p("(x+y)") * p("(x-y)"), p("x^2 - y^2"));
        assert_eq!(p("1/2*x") * p("2/3*y"), p("1/3*x*y"));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(p("x^2*y").partial("x").unwrap(), p("2*x*y"));
        assert!(p("x^2").partial("y").unwrap().is_zero());
        assert_eq!(p("3*x - 1/2*x*y^2").partial("x").unwrap(), p("3 - 1/2*y^2"));
        assert_eq!(p("x").partial("z"), Err(Error::UnknownCoordinate("z".into())));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("x^2*y").eval(&[int(2), int(3)]).unwrap(), int(12));
        assert_eq!(p("0").eval(&[int(5), rat(1, 7)]).unwrap(), int(0));
        assert_eq!(p("x - y").eval(&[rat(1, 2), rat(1, 3)]).unwrap(), rat(1, 6));
        assert!(matches!(p("x").eval(&[int(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn alignment_by_name() {
        let a = RatPoly::parse("x*y", &vars(&["x", "y"])).unwrap();
        let b = RatPoly::parse("y*z", &vars(&["y", "z"])).unwrap();
        let s = &a + &b;
        assert_eq!(&s.vars()[..], &["x".to_string(), "y".into(), "z".into()]);
        assert_eq!(s, RatPoly::parse("x*y + y*z", &vars(&["x", "y", "z"])).unwrap());
        // a zero difference across variable lists is still zero
        assert_eq!(a, RatPoly::parse("y*x", &vars(&["y", "x", "w"])).unwrap());
    }

    #[test]
    fn display_is_canonical() {
        let q = p("-1/2*y + 3*x^2*y + 7 - x");
        assert_eq!(q.to_string(), "3*x^2*y - x - 1/2*y + 7");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(p("-x^2").to_string(), "-x^2");
        assert_eq!(p("0*x").to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!(RatPoly::parse("x + ", &xy()).is_err());
        assert!(RatPoly::parse("q", &xy()).is_err());
        assert!(RatPoly::parse("1/0", &xy()).is_err());
        assert!(RatPoly::parse("x y", &xy()).is_err());
    }

    #[test]
    fn compose_substitutes() {
        let v = vars(&["t"]);
        let t = RatPoly::var(&v, 0);
        let subs = [t.clone(), &t * &t];
        let out = p("x*y + y").compose(&subs, &v).unwrap();
        assert_eq!(out, RatPoly::parse("t^3 + t^2", &v).unwrap());
    }
}
