//! Exact sparse linear algebra over the rationals.
//!
//! Elimination scans columns left to right and takes the first row, in
//! current order, with a nonzero entry as pivot, so results depend only on
//! the input order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

type Row = BTreeMap<usize, Rational>;

/// A rational matrix stored by sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Row>,
}

/// Row-reduced echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { cols, rows: vec![Row::new(); rows] }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = RationalMatrix::zeros(0, cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {}-column matrix", r.len(), cols)));
            }
            m.push_dense(r);
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>], dim: usize) -> Result<Self> {
        let mut m = RationalMatrix::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Dimension(format!("vector of length {} in dimension {}", c.len(), dim)));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn push_dense(&mut self, r: &[Rational]) {
        self.rows.push(r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect());
    }

    /// Appends a sparse row given as `(column, value)` pairs.
    pub fn push_sparse(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut row = Row::new();
        for (j, x) in entries {
            assert!(j < self.cols, "column {} out of range", j);
            let e = row.entry(j).or_insert_with(Rational::zero);
            *e += x;
        }
        row.retain(|_, x| !x.is_zero());
        self.rows.push(row);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        if x.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, x);
        }
    }

    pub fn row_dense(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols];
        for (j, x) in &self.rows[i] {
            v[*j] = x.clone();
        }
        v
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.rows[i].iter().map(|(j, x)| (*j, x))
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.rows[i].is_empty()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                t.rows[*j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok(self.rows.iter().map(|r| r.iter().fold(Rational::zero(), |acc, (j, x)| acc + x * &v[*j])).collect())
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].contains_key(&c)) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = Rational::one() / &rows[rank][&c];
            if !inv.is_one() {
                for x in rows[rank].values_mut() {
                    *x *= &inv;
                }
            }
            let pivot_row = rows[rank].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i == rank {
                    continue;
                }
                if let Some(f) = r.get(&c).cloned() {
                    for (j, x) in &pivot_row {
                        let e = r.entry(*j).or_insert_with(Rational::zero);
                        *e -= &f * x;
                        if e.is_zero() {
                            r.remove(j);
                        }
                    }
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        Echelon { matrix: RationalMatrix { cols: self.cols, rows }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let e = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = e.pivots.iter().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in e.pivots.iter().enumerate() {
                if let Some(x) = e.matrix.rows[i].get(&f) {
                    v[p] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows.len() {
            return Err(Error::Dimension(format!("right side of length {} for {} rows", b.len(), self.rows.len())));
        }
        let mut aug = RationalMatrix::zeros(0, self.cols + 1);
        for (r, y) in self.rows.iter().zip(b) {
            let mut row = r.clone();
            if !y.is_zero() {
                row.insert(self.cols, y.clone());
            }
            aug.rows.push(row);
        }
        let e = aug.rref();
        if e.pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in e.pivots.iter().enumerate() {
            x[p] = e.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

/// Kernel of a matrix.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.kernel()
}

fn check_dims(vs: &[Vec<Rational>], dim: usize) -> Result<()> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::Dimension(format!("vector of length {} in dimension {}", v.len(), dim))),
        None => Ok(()),
    }
}

/// Canonical basis of a span: the nonzero rows of its reduced echelon form.
pub fn span_basis(vs: &[Vec<Rational>], dim: usize) -> Result<Vec<Vec<Rational>>> {
    check_dims(vs, dim)?;
    let mut m = RationalMatrix::zeros(0, dim);
    for v in vs {
        m.push_dense(v);
    }
    let e = m.rref();
    Ok((0..e.pivots.len()).map(|i| e.matrix.row_dense(i)).collect())
}

/// Whether two families span the same subspace.
pub fn span_equal(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> Result<bool> {
    Ok(span_basis(a, dim)? == span_basis(b, dim)?)
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(v: &[Rational], vs: &[Vec<Rational>], dim: usize) -> Result<bool> {
    let base = span_basis(vs, dim)?;
    let mut with = base.clone();
    with.push(v.to_vec());
    Ok(span_basis(&with, dim)?.len() == base.len())
}

/// A basis of `span(a) ∩ span(b)`.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> Result<Vec<Vec<Rational>>> {
    check_dims(a, dim)?;
    check_dims(b, dim)?;
    let mut cols: Vec<Vec<Rational>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
    let m = RationalMatrix::from_columns(&cols, dim)?;
    let mut out = Vec::new();
    for k in m.kernel() {
        let mut v = vec![Rational::zero(); dim];
        for (coef, va) in k.iter().zip(a) {
            if !coef.is_zero() {
                for (x, y) in v.iter_mut().zip(va) {
                    *x += coef * y;
                }
            }
        }
        out.push(v);
    }
    span_basis(&out, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn trivial_kernels() {
        let id = RationalMatrix::from_dense(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert!(id.kernel().is_empty());
        assert_eq!(RationalMatrix::zeros(2, 3).kernel().len(), 3);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = RationalMatrix::from_dense(&[v(&[1, 2, 3, 4]), v(&[2, 4, 6, 8]), v(&[0, 1, 1, 0])]).unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.mul_vec(x).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn intersections() {
        let span = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        assert!(span_equal(&intersect_spans(&span, &span, 3).unwrap(), &span, 3).unwrap());
        assert!(intersect_spans(&[v(&[1, 0])], &[v(&[0, 1])], 2).unwrap().is_empty());
        assert!(intersect_spans(&[v(&[1, 0])], &[v(&[0, 1, 0])], 2).is_err());
    }

    #[test]
    fn solving() {
        let m = RationalMatrix::from_dense(&[v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert_eq!(m.solve(&v(&[2, 0])).unwrap(), Some(v(&[1, 1])));
        let s = RationalMatrix::from_dense(&[v(&[1, 1]), v(&[2, 2])]).unwrap();
        assert_eq!(s.solve(&v(&[1, 3])).unwrap(), None);
    }
}
