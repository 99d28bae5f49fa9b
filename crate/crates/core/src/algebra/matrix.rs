//! Dense exact matrices: fraction-free rank, kernels, and linear algebra over
//! the two-element field.

use rayon::prelude::*;

use super::field::Field;
use crate::error::{domain, Result};

/// Work threshold (rows × cols) above which row updates run on the rayon
/// pool. Each row update is independent, so the result is identical.
const PAR_THRESHOLD: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: Clone + PartialEq + Send + Sync> ExactMatrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![f.zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows, checking shape and that every entry is a
    /// well-formed element of `f`.
    pub fn from_rows<F: Field<Elem = E>>(f: &F, rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return domain(format!("row {i} has {} entries, expected {cols}", r.len()));
            }
            for e in &r {
                f.validate(e)?;
            }
            entries.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(f, self.row(i), v))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Rank by fraction-free (Bareiss) elimination. Pivots are the first
    /// nonzero entry met scanning each column top-down from the current row.
    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        let mut a = self.row_vecs();
        let (nr, nc) = (self.rows, self.cols);
        let mut prev = f.one();
        let mut r = 0;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(p) = (r..nr).find(|&i| !f.is_zero(&a[i][c])) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = pivot_row[c].clone();
            let prev_inv = f.inv(&prev).expect("previous pivot is nonzero");
            let update = |row: &mut Vec<E>| {
                let factor = row[c].clone();
                for j in c + 1..nc {
                    let v = f.sub(&f.mul(&pivot, &row[j]), &f.mul(&factor, &pivot_row[j]));
                    row[j] = f.mul(&v, &prev_inv);
                }
                row[c] = f.zero();
            };
            if tail.len() * (nc - c) >= PAR_THRESHOLD {
                tail.par_iter_mut().for_each(update);
            } else {
                tail.iter_mut().for_each(update);
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Reduced row echelon form; returns the reduced rows (only the nonzero
    /// ones) and the pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> (Vec<Vec<E>>, Vec<usize>) {
        let mut a = self.row_vecs();
        let (nr, nc) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(p) = (r..nr).find(|&i| !f.is_zero(&a[i][c])) else {
                continue;
            };
            a.swap(r, p);
            let inv = f.inv(&a[r][c]).unwrap();
            for x in &mut a[r][c..nc] {
                *x = f.mul(x, &inv);
            }
            let pivot_row = a[r].clone();
            let update = |(i, row): (usize, &mut Vec<E>)| {
                if i == r || f.is_zero(&row[c]) {
                    return;
                }
                let factor = row[c].clone();
                for j in c..nc {
                    if !f.is_zero(&pivot_row[j]) {
                        row[j] = f.sub(&row[j], &f.mul(&factor, &pivot_row[j]));
                    }
                }
            };
            if nr * (nc - c) >= PAR_THRESHOLD {
                a.par_iter_mut().enumerate().for_each(update);
            } else {
                a.iter_mut().enumerate().for_each(update);
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    /// Basis of the right kernel. Each vector is scaled so that its first
    /// nonzero entry is 1; vectors are ordered by their free column.
    pub fn kernel_basis<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let (red, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in red.iter().zip(&pivots) {
                if pc < free || !f.is_zero(&row[free]) {
                    v[pc] = f.neg(&row[free]);
                }
            }
            basis.push(normalize_leading(f, v));
        }
        basis
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut prev = f.one();
        let mut sign = false;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
                return f.zero();
            };
            if p != c {
                a.swap(c, p);
                sign = !sign;
            }
            let prev_inv = f.inv(&prev).unwrap();
            let (head, tail) = a.split_at_mut(c + 1);
            let pivot_row = &head[c];
            for row in tail.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..n {
                    let v = f.sub(&f.mul(&pivot_row[c], &row[j]), &f.mul(&factor, &pivot_row[j]));
                    row[j] = f.mul(&v, &prev_inv);
                }
                row[c] = f.zero();
            }
            prev = a[c][c].clone();
        }
        if sign {
            f.neg(&prev)
        } else {
            prev
        }
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (red, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Self::from_rows(f, rows, n).unwrap())
    }

    pub fn map<G: Field>(&self, phi: impl Fn(&E) -> G::Elem) -> ExactMatrix<G::Elem> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(phi).collect(),
        }
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| {
        if f.is_zero(x) || f.is_zero(y) {
            acc
        } else {
            f.add(&acc, &f.mul(x, y))
        }
    })
}

/// Scales a vector so its first nonzero entry is 1 (zero vectors unchanged).
pub fn normalize_leading<F: Field>(f: &F, v: Vec<F::Elem>) -> Vec<F::Elem> {
    match v.iter().find(|e| !f.is_zero(e)) {
        None => v,
        Some(lead) => {
            let inv = f.inv(lead).unwrap();
            v.iter().map(|e| f.mul(e, &inv)).collect()
        }
    }
}

/// Basis of the kernel over 𝔽₂ of a 0/1 matrix given as rows of bits.
/// Basis vectors are indexed by free columns, with pivots scanned left to
/// right.
pub fn z2_kernel(rows: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    let mut a: Vec<Vec<bool>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), cols, "ragged bit-matrix");
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![false; cols];
            v[free] = true;
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = row[free];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, Rational, Rationals};

    fn m(rows: &[&[i64]]) -> ExactMatrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        ExactMatrix::from_rows(
            &Rationals,
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[&[1, 0], &[0, 1]]).rank(&Rationals), 2);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(&Rationals), 1);
        assert_eq!(m(&[&[0, 0, 0]]).rank(&Rationals), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(m(&[&[1, 0], &[0, 1]]).kernel_basis(&Rationals).is_empty());
        assert_eq!(
            m(&[&[1, 1]]).kernel_basis(&Rationals),
            vec![vec![int(1), int(-1)]]
        );
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(&Rationals), int(18));
        let inv = a.inverse(&Rationals).unwrap();
        assert_eq!(a.mul(&Rationals, &inv), ExactMatrix::identity(&Rationals, 3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse(&Rationals).is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(&Rationals), int(-1));
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = ExactMatrix::from_rows(&Rationals, vec![vec![int(1)], vec![]], 1);
        assert!(r.is_err());
    }

    #[test]
    fn z2_examples() {
        let id = vec![vec![true, false], vec![false, true]];
        assert!(z2_kernel(&id, 2).is_empty());
        assert_eq!(z2_kernel(&[vec![false; 4]], 4).len(), 4);
        let k = z2_kernel(&[vec![true, true, false]], 3);
        assert_eq!(k, vec![vec![true, true, false], vec![false, false, true]]);
    }
}
