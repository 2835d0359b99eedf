//! Incremental sparse row echelon solver over an exact field.

use std::collections::BTreeMap;

use super::field::Field;

type Row<F> = Vec<(usize, F)>;

/// Rows are reduced against existing pivots as they arrive; the pivot set is
/// that of the row space, so the free-variables-zero solution does not depend
/// on row order.
#[derive(Clone, Debug)]
pub struct SparseSolver<F: Field> {
    ncols: usize,
    pivots: BTreeMap<usize, (Row<F>, F)>,
    inconsistent: bool,
}

fn axpy<F: Field>(row: &Row<F>, f: &F, piv: &Row<F>) -> Row<F> {
    // row - f * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, f.mul(&piv[j].1).neg()));
            j += 1;
        } else {
            let v = row[i].1.sub(&f.mul(&piv[j].1));
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> SparseSolver<F> {
    pub fn new(ncols: usize) -> Self {
        SparseSolver { ncols, pivots: BTreeMap::new(), inconsistent: false }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Adds the equation `Σ row[k].1 · x[row[k].0] = rhs`.
    pub fn add_row(&mut self, row: impl IntoIterator<Item = (usize, F)>, rhs: F) {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (c, v) in row {
            assert!(c < self.ncols, "column out of range");
            let slot = acc.entry(c).or_insert_with(F::zero);
            *slot = slot.add(&v);
        }
        let mut r: Row<F> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut rhs = rhs;
        loop {
            let Some((c, lead)) = r.first().cloned() else {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            match self.pivots.get(&c) {
                Some((prow, prhs)) => {
                    rhs = rhs.sub(&lead.mul(prhs));
                    r = axpy(&r, &lead, prow);
                }
                None => {
                    let inv = lead.inv().unwrap();
                    let r: Row<F> = r.into_iter().map(|(k, v)| (k, v.mul(&inv))).collect();
                    self.pivots.insert(c, (r, rhs.mul(&inv)));
                    return;
                }
            }
        }
    }

    /// Solution with every free variable zero, or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<F>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![F::zero(); self.ncols];
        for (&c, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (k, a) in row.iter().skip(1) {
                if !x[*k].is_zero() {
                    v = v.sub(&a.mul(&x[*k]));
                }
            }
            x[c] = v;
        }
        Some(x)
    }
}
