//! Dense matrices over an exact field and fraction-free solving over ℚ(λ).

use super::field::Field;
use super::multipoly::{lcm, MultiPoly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct DenseMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Matrix over the rational-function field ℚ(λ).
pub type FieldMatrix = DenseMatrix<RatFunc>;

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DenseMatrix<G> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<DenseMatrix<G>> {
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, a: &F) -> Self {
        self.map(|x| x.mul(a))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(o.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().unwrap();
            for i in c + 1..m.rows {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solution with free variables zero, by Gauss–Jordan elimination.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| if j < self.cols { self.get(i, j).clone() } else { b[i].clone() });
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, &c) in piv.iter().enumerate() {
            x[c] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (k, &c) in piv.iter().enumerate() {
                    v[c] = r.get(k, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

/// Solves `A·x = b` over ℚ(λ).
///
/// Rows are cleared of denominators and reduced by fraction-free (Bareiss)
/// elimination over ℤ[λ]; back substitution sets free variables to zero.  The
/// result is checked by exact substitution.
pub fn solve_linear(a: &FieldMatrix, b: &[RatFunc]) -> Result<Vec<RatFunc>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<MultiPoly>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut l = MultiPoly::one();
        for e in a.row(i).iter().chain(std::iter::once(&b[i])) {
            if !e.is_zero() && !e.den().is_constant() {
                l = lcm(&l, e.den());
            }
        }
        let row = a
            .row(i)
            .iter()
            .chain(std::iter::once(&b[i]))
            .map(|e| if e.is_zero() { MultiPoly::zero() } else { &l.div_exact(e.den()).expect("lcm is a multiple") * e.num() })
            .collect();
        m.push(row);
    }
    let mut prev = MultiPoly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                for j in c + 1..=cols {
                    let v = &m[r][c] * &m[i][j];
                    m[i][j] = v.div_exact(&prev).expect("Bareiss step is exact");
                }
                continue;
            }
            for j in c + 1..=cols {
                let v = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = v.div_exact(&prev).expect("Bareiss step is exact");
            }
            m[i][c] = MultiPoly::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !m[i][cols].is_zero()) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![RatFunc::zero(); cols];
    for &(k, c) in pivots.iter().rev() {
        let mut acc = RatFunc::from_poly(m[k][cols].clone());
        for j in c + 1..cols {
            if !m[k][j].is_zero() && !x[j].is_zero() {
                acc = acc.sub(&RatFunc::from_poly(m[k][j].clone()).mul(&x[j]));
            }
        }
        x[c] = acc.div(&RatFunc::from_poly(m[k][c].clone())).unwrap();
    }
    let residual = a.mul_vec(&x);
    assert!(residual.iter().zip(b).all(|(u, v)| u == v), "solve_linear verification failed");
    Ok(x)
}
