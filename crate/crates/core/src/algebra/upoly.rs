//! Dense univariate polynomials over a [`Field`].

use num_traits::{One, Signed, Zero};

use super::field::{Field, Rational};
use crate::error::{domain, Result};

/// Coefficients lowest degree first; no trailing zeros (the zero polynomial
/// is the empty vector).
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UniPoly<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::new(f, vec![c])
    }

    /// The monic linear polynomial x - a.
    pub fn linear_root<F: Field<Elem = E>>(f: &F, a: &E) -> Self {
        Self::new(f, vec![f.neg(a), f.one()])
    }

    pub fn monomial<F: Field<Elem = E>>(f: &F, c: E, deg: usize) -> Self {
        let mut v = vec![f.zero(); deg + 1];
        v[deg] = c;
        Self::new(f, v)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::new(f, v)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Self::new(f, v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, v)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, e: usize) -> Self {
        let mut acc = Self::constant(f, f.one());
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(lc) => self.scale(f, &f.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        Self::new(f, v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> (Self, Self) {
        let dl = d.lc().expect("division by the zero polynomial");
        let dinv = f.inv(dl).unwrap();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dd], &dinv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, dc));
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Self {
        self.divrem(f, d).1
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn div_exact<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(f, d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut a = self.monic(f);
        let mut b = other.monic(f);
        while !b.is_zero() {
            let r = a.rem(f, &b).monic(f);
            a = b;
            b = r;
        }
        a
    }

    /// Returns (g, s, t) with s·self + t·other = g, g the (non-normalized) gcd.
    pub fn ext_gcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(f, f.one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(f, f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            let s = s0.sub(f, &q.mul(f, &s1));
            let t = t0.sub(f, &q.mul(f, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    /// Resultant with respect to the variable, by the Euclidean remainder
    /// sequence over the field.
    pub fn resultant<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<E> {
        if self.is_zero() || other.is_zero() {
            return domain("resultant of a zero polynomial");
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = f.one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                return Ok(f.mul(&acc, &f.pow(b.lc().unwrap(), da as u64)));
            }
            if da < db {
                // res(a,b) = (-1)^{da·db} res(b,a)
                if (da * db) % 2 == 1 {
                    acc = f.neg(&acc);
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(f, &b);
            if r.is_zero() {
                return Ok(f.zero());
            }
            let dr = r.degree().unwrap();
            // res(a,b) = (-1)^{da·db} lc(b)^{da-dr} res(b,r)
            if (da * db) % 2 == 1 {
                acc = f.neg(&acc);
            }
            acc = f.mul(&acc, &f.pow(b.lc().unwrap(), (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Resultant of the Sylvester matrix for formal degrees (da, db) ≥ the
    /// actual ones. This is the specialization of a resultant taken over a
    /// polynomial ring, so it can be evaluated pointwise and interpolated.
    pub fn resultant_formal<F: Field<Elem = E>>(&self, f: &F, other: &Self, da: usize, db: usize) -> E {
        if db == 0 {
            return f.pow(&other.coeff(f, 0), da as u64);
        }
        if da == 0 {
            return f.pow(&self.coeff(f, 0), db as u64);
        }
        let (a, b) = match (self.degree(), other.degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return if da + db == 0 { f.one() } else { f.zero() },
        };
        assert!(a <= da && b <= db, "formal degrees below actual degrees");
        let res = self.resultant(f, other).expect("nonzero inputs");
        if a == da {
            f.mul(&f.pow(self.lc().unwrap(), (db - b) as u64), &res)
        } else if b == db {
            let r = f.mul(&f.pow(other.lc().unwrap(), (da - a) as u64), &res);
            if (da * db + a * db) % 2 == 1 {
                f.neg(&r)
            } else {
                r
            }
        } else {
            f.zero()
        }
    }

    /// f / gcd(f, f'), made monic. Valid in characteristic zero, and in
    /// characteristic p whenever f' is nonzero.
    pub fn squarefree_part<F: Field<Elem = E>>(&self, f: &F) -> Result<Self> {
        if self.is_zero() {
            return domain("squarefree part of the zero polynomial");
        }
        let d = self.derivative(f);
        if d.is_zero() {
            return Ok(self.monic(f));
        }
        let g = self.gcd(f, &d);
        Ok(self.div_exact(f, &g).expect("gcd divides").monic(f))
    }

    pub fn is_squarefree<F: Field<Elem = E>>(&self, f: &F) -> bool {
        let d = self.derivative(f);
        !d.is_zero() && self.gcd(f, &d).degree() == Some(0)
    }

    /// Composition self(other).
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(f, other).add(f, &Self::constant(f, c.clone()))
        })
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl FnMut(&E) -> G::Elem) -> UniPoly<G::Elem> {
        UniPoly::new(g, self.coeffs.iter().map(phi).collect())
    }
}

/// Newton interpolation through (xs[i], ys[i]); xs pairwise distinct.
pub fn interpolate<F: Field>(f: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<UniPoly<F::Elem>> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd: Vec<F::Elem> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = f.sub(&xs[i], &xs[i - j]);
            dd[i] = f.div(&f.sub(&dd[i], &dd[i - 1]), &den)?;
        }
    }
    let mut poly = UniPoly::zero();
    for i in (0..n).rev() {
        let lin = UniPoly::linear_root(f, &xs[i]);
        poly = poly.mul(f, &lin).add(f, &UniPoly::constant(f, dd[i].clone()));
    }
    Ok(poly)
}

/// Human-readable rendering of a rational polynomial in `var`.
pub fn format_rational_poly(coeffs: &[Rational], var: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match i {
            0 => mag.to_string(),
            _ => {
                let v = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if mag.is_one() {
                    v
                } else {
                    format!("{mag}*{v}")
                }
            }
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

impl UniPoly<Rational> {
    pub fn to_string_in(&self, var: &str) -> String {
        format_rational_poly(&self.coeffs, var)
    }

    /// Integer multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<num_bigint::BigInt> {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut v: Vec<num_bigint::BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = num_bigint::BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
        if v.last().is_some_and(|c| c.is_negative()) {
            for c in v.iter_mut() {
                *c = -&*c;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, Rationals};

    fn sylvester(a: &[Rational], b: &[Rational], da: usize, db: usize) -> Rational {
        let q = Rationals;
        let n = da + db;
        let mut rows = Vec::new();
        let pad = |c: &[Rational], d: usize| -> Vec<Rational> {
            (0..=d).map(|i| c.get(d - i).cloned().unwrap_or_else(|| int(0))).collect()
        };
        let (pa, pb) = (pad(a, da), pad(b, db));
        for k in 0..db {
            let mut r = vec![int(0); n];
            r[k..k + da + 1].clone_from_slice(&pa);
            rows.push(r);
        }
        for k in 0..da {
            let mut r = vec![int(0); n];
            r[k..k + db + 1].clone_from_slice(&pb);
            rows.push(r);
        }
        crate::algebra::ExactMatrix::from_rows(&q, rows, n).unwrap().det(&q)
    }

    #[test]
    fn formal_resultant_constant_side() {
        let q = Rationals;
        let zero = UniPoly::<Rational>::zero();
        let three = UniPoly::constant(&q, int(3));
        assert_eq!(zero.resultant_formal(&q, &three, 2, 0), int(9));
        assert_eq!(three.resultant_formal(&q, &zero, 0, 2), int(9));
    }

    #[test]
    fn formal_resultant_matches_sylvester() {
        let q = Rationals;
        let a = vec![int(3), int(-1), int(2)];
        let b = vec![int(1), int(4)];
        for (da, db) in [(2, 1), (2, 3), (4, 1), (3, 3), (2, 0), (5, 0)] {
            let pa = UniPoly::new(&q, a.clone());
            let pb = UniPoly::new(&q, b.clone());
            assert_eq!(pa.resultant_formal(&q, &pb, da, db), sylvester(&a, &b, da, db), "{da} {db}");
        }
    }

    fn p(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(&Rationals, c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn resultant_examples() {
        let q = Rationals;
        assert_eq!(p(&[-1, 1]).resultant(&q, &p(&[1, 1])).unwrap(), int(2));
        assert_eq!(p(&[-1, 0, 1]).resultant(&q, &p(&[-1, 1])).unwrap(), int(0));
        assert_eq!(p(&[1, 0, 1]).resultant(&q, &p(&[-2, 0, 1])).unwrap(), int(9));
        assert!(p(&[]).resultant(&q, &p(&[1])).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let q = Rationals;
        assert_eq!(p(&[1, -2, 1]).squarefree_part(&q).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[-2, 0, 1]).squarefree_part(&q).unwrap(), p(&[-2, 0, 1]));
        assert_eq!(p(&[0, 0, -1, 1]).squarefree_part(&q).unwrap(), p(&[0, -1, 1]));
        assert!(p(&[]).squarefree_part(&q).is_err());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = Rationals;
        let f = p(&[3, -1, 0, 2]);
        let xs: Vec<_> = (0..4).map(int).collect();
        let ys: Vec<_> = xs.iter().map(|x| f.eval(&q, x)).collect();
        assert_eq!(interpolate(&q, &xs, &ys).unwrap(), f);
    }

    #[test]
    fn formatting() {
        assert_eq!(p(&[-2, 0, 1]).to_string_in("t"), "t^2 - 2");
        assert_eq!(p(&[0, -3]).to_string_in("x"), "-3*x");
    }
}
