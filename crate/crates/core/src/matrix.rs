//! Dense matrices of polynomials and of rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{int, RatPoly, Rational, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    data: Vec<RatPoly>,
}

impl PolyMatrix {
    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, vars: vars.clone(), data: vec![RatPoly::zero(vars); rows * cols] }
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m[(i, i)] = RatPoly::one(vars);
        }
        m
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<RatPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            for p in row {
                data.push(p.with_vars(vars)?);
            }
        }
        Ok(PolyMatrix { rows: r, cols: c, vars: vars.clone(), data })
    }

    pub fn from_fn(vars: &Vars, rows: usize, cols: usize, f: impl Fn(usize, usize) -> RatPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, vars: vars.clone(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn row(&self, i: usize) -> &[RatPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RatPoly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RatPoly)> {
        self.data.iter().enumerate().map(move |(k, p)| ((k / self.cols, k % self.cols), p))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatPoly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.vars, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|p| *p = p.scale(c));
        out
    }

    pub fn scale_poly(&self, f: &RatPoly) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|p| *p = &*p * f);
        out
    }

    pub fn mul_vec(&self, v: &[RatPoly]) -> Vec<RatPoly> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = RatPoly::zero(&self.vars);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> RatPoly {
        let mut acc = RatPoly::zero(&self.vars);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    /// Substitutes polynomials for the variables of every entry.
    pub fn compose(&self, subs: &[RatPoly], target: &Vars) -> Result<Self> {
        let data = self.data.iter().map(|p| p.compose(subs, target)).collect::<Result<_>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, vars: target.clone(), data })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<QMatrix> {
        let data = self.data.iter().map(|p| p.eval(point)).collect::<Result<_>>()?;
        Ok(QMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Sub-block `[r0, r0+nr) x [c0, c0+nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(&self.vars, nr, nc, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Characteristic data by Faddeev–LeVerrier: returns `(det, adjugate)`.
    ///
    /// Uses only ring operations and division by small integers, so it stays
    /// inside the polynomial ring.
    pub fn det_and_adjugate(&self) -> (RatPoly, PolyMatrix) {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let id = Self::identity(&self.vars, n);
        if n == 0 {
            return (RatPoly::one(&self.vars), id);
        }
        let mut m = Self::zeros(&self.vars, n, n);
        let mut c = RatPoly::one(&self.vars);
        let mut prev_m = m.clone();
        for k in 1..=n {
            prev_m = &(self * &m) + &id.scale_poly(&c);
            let am = self * &prev_m;
            c = am.trace().scale(&(-Rational::one() / int(k as i64)));
            m = prev_m.clone();
        }
        // after the loop, c = c_0 and prev_m = M_n
        let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let det = c.scale(&sign);
        let adj = prev_m.scale(&(-sign));
        (det, adj)
    }

    pub fn determinant(&self) -> RatPoly {
        self.det_and_adjugate().0
    }

    /// Inverse when the determinant is a nonzero constant.
    pub fn inverse_constant_det(&self) -> Result<PolyMatrix> {
        let (det, adj) = self.det_and_adjugate();
        match det.constant_value() {
            Some(d) if !d.is_zero() => Ok(adj.scale(&(Rational::one() / d))),
            Some(_) => Err(Error::NondegenerateInverseUnavailable("determinant is zero".into())),
            None => Err(Error::NondegenerateInverseUnavailable(format!(
                "determinant `{det}` is not constant"
            ))),
        }
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = RatPoly;
    fn index(&self, (i, j): (usize, usize)) -> &RatPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> std::ops::Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = PolyMatrix::zeros(&self.vars, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> std::ops::Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, vars: self.vars.clone(), data }
    }
}

impl<'a> std::ops::Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, vars: self.vars.clone(), data }
    }
}

impl std::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        let data = self.data.iter().map(|a| -a).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, vars: self.vars.clone(), data }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense rational matrix for pointwise linear algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).fold(Rational::zero(), |a, b| a + b))
            .collect()
    }

    /// Reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = Rational::one() / self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let v = &self[(r, j)] * &f;
                        self[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); self.cols];
                v[fc] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, fc)].clone();
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the column span of `self`.
    pub fn spans(&self, v: &[Rational]) -> bool {
        let mut cols: Vec<Vec<Rational>> = (0..self.cols).map(|j| self.column(j)).collect();
        let before = QMatrix::from_columns(self.rows, &cols).rank();
        cols.push(v.to_vec());
        QMatrix::from_columns(self.rows, &cols).rank() == before
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> std::ops::Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &'a QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::vars;

    fn m(rows: &[&[&str]]) -> PolyMatrix {
        let v = vars(&["x", "y"]);
        PolyMatrix::from_rows(
            &v,
            rows.iter().map(|r| r.iter().map(|s| RatPoly::parse(s, &v).unwrap()).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn faddeev_matches_cofactor_on_3x3() {
        let a = m(&[&["x", "1", "y"], &["0", "2", "x*y"], &["1", "y", "3"]]);
        // cofactor expansion along the first row
        let minor = |r: [usize; 2], c: [usize; 2]| {
            &(&a[(r[0], c[0])] * &a[(r[1], c[1])]) - &(&a[(r[0], c[1])] * &a[(r[1], c[0])])
        };
        let det = &(&(&a[(0, 0)] * &minor([1, 2], [1, 2])) - &(&a[(0, 1)] * &minor([1, 2], [0, 2])))
            + &(&a[(0, 2)] * &minor([1, 2], [0, 1]));
        let (d, adj) = a.det_and_adjugate();
        assert_eq!(d, det);
        let prod = &a * &adj;
        assert_eq!(prod, PolyMatrix::identity(a.vars(), 3).scale_poly(&det));
    }

    #[test]
    fn unipotent_inverse_is_polynomial() {
        let a = m(&[&["1", "x^2"], &["0", "1"]]);
        let inv = a.inverse_constant_det().unwrap();
        assert_eq!(inv, m(&[&["1", "-x^2"], &["0", "1"]]));
        assert!(m(&[&["x", "0"], &["0", "1"]]).inverse_constant_det().is_err());
        assert!(m(&[&["1", "1"], &["1", "1"]]).inverse_constant_det().is_err());
    }

    #[test]
    fn rational_kernel() {
        let q = m(&[&["1", "2"], &["2", "4"]]).eval(&[int(0), int(0)]).unwrap();
        assert_eq!(q.rank(), 1);
        let k = q.kernel();
        assert_eq!(k.len(), 1);
        assert!(q.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }
}
