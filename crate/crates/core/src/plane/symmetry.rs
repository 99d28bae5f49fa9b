use super::curve::{basis_size, monomial_basis, PlaneCurve};
use crate::algebra::{ExactMatrix, Field};
use crate::error::{domain, Error, Result};

/// Linear map of the plane with M² a nonzero scalar multiple of the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjInvolution<E> {
    matrix: ExactMatrix<E>,
}

/// Which eigenspace of the induced action on curves to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eigenspace {
    Plus,
    Minus,
}

impl<E: Clone + PartialEq + Send + Sync> ProjInvolution<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, matrix: ExactMatrix<E>) -> Result<Self> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return domain("involution matrix must be 3×3");
        }
        let sq = matrix.mul(f, &matrix);
        let lambda = sq.get(0, 0).clone();
        if f.is_zero(&lambda) {
            return domain("M² is not a nonzero scalar matrix");
        }
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { lambda.clone() } else { f.zero() };
                if sq.get(i, j) != &want {
                    return domain("M² is not a nonzero scalar matrix");
                }
            }
        }
        Ok(ProjInvolution { matrix })
    }

    pub fn diagonal<F: Field<Elem = E>>(f: &F, d: [E; 3]) -> Result<Self> {
        let mut m = ExactMatrix::zeros(f, 3, 3);
        for (i, c) in d.into_iter().enumerate() {
            m.set(i, i, c);
        }
        Self::new(f, m)
    }

    pub fn matrix(&self) -> &ExactMatrix<E> {
        &self.matrix
    }

    /// Image of a point under the involution.
    pub fn apply_point<F: Field<Elem = E>>(&self, f: &F, p: &[E; 3]) -> [E; 3] {
        let v = self.matrix.mul_vec(f, p);
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    /// Image of a curve: the curve vanishing on the image points, f ∘ M⁻¹
    /// (equal to f ∘ M up to scalar).
    pub fn apply_curve<F: Field<Elem = E>>(&self, f: &F, c: &PlaneCurve<E>) -> PlaneCurve<E> {
        c.substitute_unchecked(f, &self.matrix)
    }

    fn is_diagonal<F: Field<Elem = E>>(&self, f: &F) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || f.is_zero(self.matrix.get(i, j))))
    }

    /// Matrix P with columns eigenvectors of M, those of the eigenvalue of
    /// the first column first; M = P·D·P⁻¹ with D diagonal.
    fn diagonalize<F: Field<Elem = E>>(&self, f: &F) -> Result<(ExactMatrix<E>, [E; 3])> {
        if self.is_diagonal(f) {
            let d = [
                self.matrix.get(0, 0).clone(),
                self.matrix.get(1, 1).clone(),
                self.matrix.get(2, 2).clone(),
            ];
            return Ok((ExactMatrix::identity(f, 3), d));
        }
        let lambda = self.matrix.mul(f, &self.matrix).get(0, 0).clone();
        let mu = f.sqrt(&lambda).ok_or_else(|| {
            Error::Unsupported(format!(
                "eigenvalues ±√({}) of the involution are not in the field",
                f.fmt_elem(&lambda)
            ))
        })?;
        let mut cols: Vec<Vec<E>> = Vec::new();
        let mut diag: Vec<E> = Vec::new();
        for ev in [mu.clone(), f.neg(&mu)] {
            let mut shifted = self.matrix.clone();
            for i in 0..3 {
                shifted.set(i, i, f.sub(self.matrix.get(i, i), &ev));
            }
            for v in shifted.kernel_basis(f) {
                cols.push(v);
                diag.push(ev.clone());
            }
        }
        if cols.len() != 3 {
            return Err(Error::Consistency("involution is not diagonalizable".into()));
        }
        let mut p = ExactMatrix::zeros(f, 3, 3);
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                p.set(i, j, c.clone());
            }
        }
        Ok((p, [diag[0].clone(), diag[1].clone(), diag[2].clone()]))
    }

    /// Bases (as coefficient vectors in the canonical monomial order) of the
    /// two eigenspaces of f ↦ f∘M on degree-d forms. Eigenvalues are
    /// normalized by the first diagonal entry, so the split does not depend
    /// on the scalar multiple chosen for M.
    pub fn eigen_split<F: Field<Elem = E>>(&self, f: &F, d: usize) -> Result<(Vec<Vec<E>>, Vec<Vec<E>>)> {
        let (p, diag) = self.diagonalize(f)?;
        let rb = f.div(&diag[1], &diag[0])?;
        let rc = f.div(&diag[2], &diag[0])?;
        let pinv = p.inverse(f).ok_or_else(|| Error::Consistency("singular eigenbasis".into()))?;
        let identity = p == ExactMatrix::identity(f, 3);
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for m in monomial_basis(d) {
            let ratio = f.mul(&f.pow(&rb, m.ey as u64), &f.pow(&rc, m.ez as u64));
            let vec = if identity {
                let mut v = vec![f.zero(); basis_size(d)];
                v[super::curve::monomial_index(&m)] = f.one();
                v
            } else {
                let mono = PlaneCurve::new(f, d, [(m, f.one())])?;
                mono.substitute_unchecked(f, &pinv).to_coeff_vector(f)
            };
            if f.is_one(&ratio) {
                plus.push(vec);
            } else if f.is_one(&f.neg(&ratio)) {
                minus.push(vec);
            } else {
                return Err(Error::Consistency("eigenvalue ratio is not ±1".into()));
            }
        }
        Ok((plus, minus))
    }

    pub fn eigenbasis<F: Field<Elem = E>>(&self, f: &F, d: usize, which: Eigenspace) -> Result<Vec<Vec<E>>> {
        let (plus, minus) = self.eigen_split(f, d)?;
        Ok(match which {
            Eigenspace::Plus => plus,
            Eigenspace::Minus => minus,
        })
    }
}
