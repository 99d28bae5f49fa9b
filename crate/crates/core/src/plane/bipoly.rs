use std::collections::BTreeMap;

use crate::algebra::{Field, UniPoly};

/// Bivariate polynomial Σ c_ab u^a v^b.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<E> {
    terms: BTreeMap<(u32, u32), E>,
}

impl<E: Clone + PartialEq + Send + Sync> BiPoly<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, terms: impl IntoIterator<Item = ((u32, u32), E)>) -> Self {
        let mut map: BTreeMap<(u32, u32), E> = BTreeMap::new();
        for (k, c) in terms {
            let entry = map.entry(k).or_insert_with(|| f.zero());
            *entry = f.add(entry, &c);
        }
        map.retain(|_, c| !f.is_zero(c));
        BiPoly { terms: map }
    }

    pub fn zero() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &E)> {
        self.terms.iter()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, a: u32, b: u32) -> E {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(|| f.zero())
    }

    /// Lowest total degree of a nonzero term (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn degree_u(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _)| *a).max()
    }

    pub fn degree_v(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| *b).max()
    }

    /// Homogeneous part of total degree k, as a univariate polynomial in
    /// v/u (coefficient of u^(k-j) v^j at index j).
    pub fn form<F: Field<Elem = E>>(&self, f: &F, k: u32) -> UniPoly<E> {
        let mut c = vec![f.zero(); k as usize + 1];
        for ((a, b), v) in &self.terms {
            if a + b == k {
                c[*b as usize] = v.clone();
            }
        }
        UniPoly::new(f, c)
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        Self::new(
            f,
            self.terms.iter().chain(other.terms.iter()).map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        Self::new(
            f,
            self.terms
                .iter()
                .map(|(k, c)| (*k, c.clone()))
                .chain(other.terms.iter().map(|(k, c)| (*k, f.neg(c)))),
        )
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out: BTreeMap<(u32, u32), E> = BTreeMap::new();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let e = out.entry((a + c, b + d)).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(x, y));
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        BiPoly { terms: out }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::new(f, self.terms.iter().map(|(k, v)| (*k, f.mul(v, c))))
    }

    pub fn partial_u<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self::new(
            f,
            self.terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|((a, b), c)| ((a - 1, *b), f.mul(c, &f.from_int(*a as i64)))),
        )
    }

    pub fn partial_v<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self::new(
            f,
            self.terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|((a, b), c)| ((*a, b - 1), f.mul(c, &f.from_int(*b as i64)))),
        )
    }

    pub fn swap(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect(),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, u: &E, v: &E) -> E {
        let mut acc = f.zero();
        for ((a, b), c) in &self.terms {
            let t = f.mul(&f.pow(u, *a as u64), &f.pow(v, *b as u64));
            acc = f.add(&acc, &f.mul(c, &t));
        }
        acc
    }

    /// Specializes u, giving a univariate polynomial in v.
    pub fn eval_u<F: Field<Elem = E>>(&self, f: &F, u: &E) -> UniPoly<E> {
        let n = self.degree_v().map_or(0, |d| d as usize + 1);
        let mut c = vec![f.zero(); n];
        let mut pow_cache: Vec<E> = vec![f.one()];
        for ((a, b), v) in &self.terms {
            while pow_cache.len() <= *a as usize {
                let next = f.mul(pow_cache.last().unwrap(), u);
                pow_cache.push(next);
            }
            c[*b as usize] = f.add(&c[*b as usize], &f.mul(v, &pow_cache[*a as usize]));
        }
        UniPoly::new(f, c)
    }

    /// Coefficients as a polynomial in v whose coefficients are polynomials in u.
    pub fn as_poly_in_v<F: Field<Elem = E>>(&self, f: &F) -> Vec<UniPoly<E>> {
        let n = self.degree_v().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<E>> = vec![Vec::new(); n];
        for ((a, b), c) in &self.terms {
            let r = &mut rows[*b as usize];
            while r.len() <= *a as usize {
                r.push(f.zero());
            }
            r[*a as usize] = c.clone();
        }
        rows.into_iter().map(|r| UniPoly::new(f, r)).collect()
    }

    /// p(u + s, v + t).
    pub fn translate<F: Field<Elem = E>>(&self, f: &F, s: &E, t: &E) -> Self {
        let du = self.degree_u().unwrap_or(0) as usize;
        let dv = self.degree_v().unwrap_or(0) as usize;
        let upow = binomial_powers(f, s, du);
        let vpow = binomial_powers(f, t, dv);
        let mut out: BTreeMap<(u32, u32), E> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            for (i, x) in upow[*a as usize].iter().enumerate() {
                if f.is_zero(x) {
                    continue;
                }
                let cx = f.mul(c, x);
                for (j, y) in vpow[*b as usize].iter().enumerate() {
                    if f.is_zero(y) {
                        continue;
                    }
                    let e = out.entry((i as u32, j as u32)).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&cx, y));
                }
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        BiPoly { terms: out }
    }

    /// p(u, v + λu).
    pub fn shear_v<F: Field<Elem = E>>(&self, f: &F, lambda: &E) -> Self {
        let dv = self.degree_v().unwrap_or(0) as usize;
        let pw = binomial_powers(f, lambda, dv);
        let mut out: BTreeMap<(u32, u32), E> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            // (v + λu)^b = Σ_k C(b,k) λ^k u^k v^(b-k); pw[b][i] is the coefficient of v^i
            for (i, x) in pw[*b as usize].iter().enumerate() {
                if f.is_zero(x) {
                    continue;
                }
                let k = *b - i as u32;
                let e = out.entry((a + k, i as u32)).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(c, x));
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        BiPoly { terms: out }
    }

    /// Strict transform in the chart v = u·w: p(u, u·w) / u^m where m is the
    /// order at the origin. Result is a polynomial in (u, w).
    pub fn blow_up_v(&self) -> (Self, u32) {
        let m = self.order().unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|((a, b), c)| ((a + b - m, *b), c.clone()))
            .collect();
        (BiPoly { terms }, m)
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl Fn(&E) -> G::Elem) -> BiPoly<G::Elem> {
        BiPoly::new(g, self.terms.iter().map(|(k, c)| (*k, phi(c))))
    }
}

/// (x + s)^n expansions: row n holds the coefficients of x^0..x^n.
fn binomial_powers<F: Field>(f: &F, s: &F::Elem, n: usize) -> Vec<Vec<F::Elem>> {
    let mut rows: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![f.zero(); k + 1];
        for (i, c) in prev.iter().enumerate() {
            row[i] = f.add(&row[i], &f.mul(c, s));
            row[i + 1] = f.add(&row[i + 1], c);
        }
        rows.push(row);
    }
    rows
}
