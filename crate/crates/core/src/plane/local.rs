//! Local expansions of degree-d forms around a point given by a frame.

use super::bipoly::BiPoly;
use super::curve::{monomial_basis, PlaneCurve};
use crate::algebra::{ExactMatrix, Field};

/// Dense bivariate polynomial truncated to total degree < `t`.
#[derive(Clone)]
struct Trunc<E> {
    t: usize,
    c: Vec<E>,
}

fn tidx(a: usize, b: usize) -> usize {
    let s = a + b;
    s * (s + 1) / 2 + b
}

impl<E: Clone> Trunc<E> {
    fn one<F: Field<Elem = E>>(f: &F, t: usize) -> Self {
        let mut c = vec![f.zero(); t * (t + 1) / 2];
        if t > 0 {
            c[0] = f.one();
        }
        Trunc { t, c }
    }

    /// c0 + cu·u + cv·v
    fn linear<F: Field<Elem = E>>(f: &F, t: usize, c0: &E, cu: &E, cv: &E) -> Self {
        let mut r = Self::one(f, t);
        if t == 0 {
            return r;
        }
        r.c[0] = c0.clone();
        if t > 1 {
            r.c[tidx(1, 0)] = cu.clone();
            r.c[tidx(0, 1)] = cv.clone();
        }
        r
    }

    fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let t = self.t;
        let mut c = vec![f.zero(); self.c.len()];
        for s1 in 0..t {
            for b1 in 0..=s1 {
                let x = &self.c[tidx(s1 - b1, b1)];
                if f.is_zero(x) {
                    continue;
                }
                for s2 in 0..t - s1 {
                    for b2 in 0..=s2 {
                        let y = &o.c[tidx(s2 - b2, b2)];
                        if f.is_zero(y) {
                            continue;
                        }
                        let k = tidx(s1 + s2 - b1 - b2, b1 + b2);
                        c[k] = f.add(&c[k], &f.mul(x, y));
                    }
                }
            }
        }
        Trunc { t, c }
    }

    fn get(&self, a: usize, b: usize) -> &E {
        &self.c[tidx(a, b)]
    }
}

/// Rows of the linear functionals f ↦ [u^a v^b] f(A·(u,v,1)) on the
/// degree-d monomial coefficient space, one row per requested pair.
pub fn local_coefficient_rows<F: Field>(
    f: &F,
    d: usize,
    frame: &ExactMatrix<F::Elem>,
    pairs: &[(usize, usize)],
) -> Vec<Vec<F::Elem>> {
    if pairs.is_empty() {
        return Vec::new();
    }
    let t = pairs.iter().map(|(a, b)| a + b).max().unwrap() + 1;
    let lin: Vec<Trunc<F::Elem>> = (0..3)
        .map(|i| Trunc::linear(f, t, frame.get(i, 2), frame.get(i, 0), frame.get(i, 1)))
        .collect();
    let powers: Vec<Vec<Trunc<F::Elem>>> = lin
        .iter()
        .map(|l| {
            let mut v = vec![Trunc::one(f, t)];
            for i in 0..d {
                let next = v[i].mul(f, l);
                v.push(next);
            }
            v
        })
        .collect();
    let basis = monomial_basis(d);
    let cols: Vec<Trunc<F::Elem>> = basis
        .iter()
        .map(|m| {
            powers[0][m.ex as usize]
                .mul(f, &powers[1][m.ey as usize])
                .mul(f, &powers[2][m.ez as usize])
        })
        .collect();
    pairs
        .iter()
        .map(|&(a, b)| cols.iter().map(|c| c.get(a, b).clone()).collect())
        .collect()
}

/// Full local expansion g(u,v) = f(A·(u,v,1)).
pub fn local_expansion<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>, frame: &ExactMatrix<F::Elem>) -> BiPoly<F::Elem> {
    curve
        .substitute_unchecked(f, frame)
        .dehomogenize(f, super::curve::Var::Z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::algebra::matrix::dot;
    use crate::algebra::Rationals;

    #[test]
    fn rows_match_full_expansion() {
        let q = Rationals;
        let f = PlaneCurve::parse_expr("x^3 - 2*x*y*z + 5*y^2*z + z^3 - x^2*y").unwrap();
        let a = ExactMatrix::from_rows(
            &q,
            vec![vec![int(1), int(2), int(1)], vec![int(0), int(1), int(-1)], vec![int(3), int(0), int(1)]],
            3,
        )
        .unwrap();
        let g = local_expansion(&q, &f, &a);
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|s| (0..=s).map(move |b| (s - b, b))).collect();
        let rows = local_coefficient_rows(&q, 3, &a, &pairs);
        let v = f.to_coeff_vector(&q);
        for (row, (a_, b_)) in rows.iter().zip(&pairs) {
            assert_eq!(dot(&q, row, &v), g.coeff(&q, *a_ as u32, *b_ as u32));
        }
    }
}
