//! Exact scalar fields.
//!
//! A field is a context value implementing [`Field`]; its elements are plain
//! data (`Field::Elem`) and every operation goes through the context. This
//! keeps elements small and lets the same linear algebra run over ℚ, over a
//! number field ℚ[t]/(m(t)) and over a prime field 𝔽_p.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Image of a rational number; fails in characteristic p when the
    /// denominator is divisible by p.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Degree over the prime field (1 for ℚ and 𝔽_p).
    fn degree(&self) -> usize {
        1
    }
    /// Checks that an element is a well-formed member of this field.
    fn validate(&self, _a: &Self::Elem) -> Result<()> {
        Ok(())
    }
    /// A square root inside the field, if one exists and can be found.
    fn sqrt(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }
    /// Rational value of an element lying in the prime field, if it does.
    fn as_rational(&self, a: &Self::Elem) -> Option<Rational>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// A ring homomorphism onto 𝔽_p defined on p-integral elements, if the
    /// field admits one for this prime.
    fn reduction(&self, _p: u64) -> Option<Reduction<Self::Elem>> {
        None
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_integer(BigInt::from(n)))
            .expect("integers embed in every field")
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Reduction map into a prime field; `apply` is `None` on elements whose
/// denominators are divisible by p.
#[derive(Clone)]
pub struct Reduction<E> {
    pub target: PrimeField,
    map: Arc<dyn Fn(&E) -> Option<u64> + Send + Sync>,
}

impl<E> Reduction<E> {
    pub fn new(target: PrimeField, map: impl Fn(&E) -> Option<u64> + Send + Sync + 'static) -> Self {
        Reduction {
            target,
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, a: &E) -> Option<u64> {
        (self.map)(a)
    }
}

impl<E> fmt::Debug for Reduction<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reduction(mod {})", self.target.modulus())
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &Rational) -> Option<Rational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| Rational::new(n, d))
    }
    fn as_rational(&self, a: &Rational) -> Option<Rational> {
        Some(a.clone())
    }
    fn fmt_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn reduction(&self, p: u64) -> Option<Reduction<Rational>> {
        let fp = PrimeField::new(p).ok()?;
        Some(Reduction::new(fp, move |a: &Rational| fp.from_rational(a).ok()))
    }
}

/// The prime field 𝔽_p for a word-sized prime (p < 2³¹).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime_u64(p) {
            return domain(format!("{p} is not a prime below 2^31"));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return domain(format!(
                "denominator {} is divisible by {}",
                q.denom(),
                self.p
            ));
        }
        let num = self.reduce_int(q.numer());
        Ok(self.mul(&num, &self.inv(&den)?))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn as_rational(&self, a: &u64) -> Option<Rational> {
        Some(Rational::from_integer(BigInt::from(*a)))
    }
    fn validate(&self, a: &u64) -> Result<()> {
        if *a >= self.p {
            return domain(format!("{a} is not a residue mod {}", self.p));
        }
        Ok(())
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn reduction(&self, p: u64) -> Option<Reduction<u64>> {
        (p == self.p).then(|| Reduction::new(*self, |a: &u64| Some(*a)))
    }
}

/// A number field ℚ[t]/(m(t)), with m monic and (by caller assertion)
/// irreducible. Elements are residue vectors of length `degree`, lowest
/// power first.
#[derive(Clone, PartialEq)]
pub struct NumberField {
    inner: Arc<NfInner>,
}

#[derive(PartialEq)]
struct NfInner {
    /// Monic minimal polynomial, lowest degree first, length degree+1.
    minpoly: Vec<Rational>,
    /// t^(n+i) reduced mod m, for i in 0..n-1.
    reductions: Vec<Vec<Rational>>,
}

/// Element of a [`NumberField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElem(pub Vec<Rational>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.minpoly_string())
    }
}

impl NumberField {
    /// Builds the field from a minimal polynomial (lowest degree first). The
    /// polynomial is made monic; irreducibility is the caller's claim.
    pub fn new(minpoly: &[Rational]) -> Result<Self> {
        let mut m: Vec<Rational> = minpoly.to_vec();
        while m.last().is_some_and(|c| c.is_zero()) {
            m.pop();
        }
        if m.len() < 2 {
            return domain("minimal polynomial must have degree at least 1");
        }
        let lc = m.last().unwrap().clone();
        for c in m.iter_mut() {
            *c = &*c / &lc;
        }
        let n = m.len() - 1;
        let mut reductions = Vec::with_capacity(n.saturating_sub(1));
        // t^n = -(m_0 + ... + m_{n-1} t^{n-1})
        let mut cur: Vec<Rational> = m[..n].iter().map(|c| -c).collect();
        for _ in 0..n.saturating_sub(1) {
            reductions.push(cur.clone());
            // multiply by t
            let top = cur[n - 1].clone();
            let mut next = vec![Rational::zero(); n];
            next[1..].clone_from_slice(&cur[..n - 1]);
            if !top.is_zero() {
                for i in 0..n {
                    next[i] -= &top * &m[i];
                }
            }
            cur = next;
        }
        Ok(Self {
            inner: Arc::new(NfInner {
                minpoly: m,
                reductions,
            }),
        })
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.inner.minpoly
    }

    /// The generator t.
    pub fn generator(&self) -> NfElem {
        let n = self.degree();
        if n == 1 {
            return NfElem(vec![-&self.inner.minpoly[0]]);
        }
        let mut v = vec![Rational::zero(); n];
        v[1] = Rational::one();
        NfElem(v)
    }

    /// Reduces an arbitrary polynomial in t (lowest first) to a residue.
    pub fn from_poly(&self, coeffs: &[Rational]) -> NfElem {
        let n = self.degree();
        let mut out = vec![Rational::zero(); n];
        // Horner in t, reducing as we go.
        for c in coeffs.iter().rev() {
            out = self.mul_by_t(&out);
            out[0] += c;
        }
        NfElem(out)
    }

    fn mul_by_t(&self, a: &[Rational]) -> Vec<Rational> {
        let n = self.degree();
        let m = &self.inner.minpoly;
        let top = a[n - 1].clone();
        let mut next = vec![Rational::zero(); n];
        next[1..].clone_from_slice(&a[..n - 1]);
        if !top.is_zero() {
            for i in 0..n {
                next[i] -= &top * &m[i];
            }
        }
        next
    }

    pub fn minpoly_string(&self) -> String {
        crate::algebra::upoly::format_rational_poly(&self.inner.minpoly, "t")
    }

    /// Best-effort irreducibility spot check: looks for a prime modulo which
    /// the minimal polynomial stays irreducible. `false` is inconclusive.
    pub fn spot_check_irreducible(&self) -> bool {
        crate::algebra::factor::irreducible_mod_some_prime(&self.inner.minpoly, 40)
    }
}

impl Field for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        NfElem(vec![Rational::zero(); self.degree()])
    }
    fn one(&self) -> NfElem {
        let mut v = vec![Rational::zero(); self.degree()];
        v[0] = Rational::one();
        NfElem(v)
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let n = self.degree();
        if n == 1 {
            return NfElem(vec![&a.0[0] * &b.0[0]]);
        }
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = prod[..n].to_vec();
        for (k, c) in prod[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.inner.reductions[k]) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        NfElem(out)
    }
    fn inv(&self, a: &NfElem) -> Result<NfElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid in ℚ[t]: find s with s·a ≡ 1 mod m.
        use crate::algebra::upoly::UniPoly;
        let q = Rationals;
        let a_poly = UniPoly::new(&q, a.0.clone());
        let m_poly = UniPoly::new(&q, self.inner.minpoly.clone());
        let (g, s, _) = a_poly.ext_gcd(&q, &m_poly);
        if g.degree() != Some(0) {
            return domain(format!(
                "{} is not invertible modulo {} (reducible minimal polynomial)",
                self.fmt_elem(a),
                self.minpoly_string()
            ));
        }
        let ginv = g.coeffs()[0].recip();
        let s = s.scale(&q, &ginv);
        Ok(self.from_poly(s.coeffs()))
    }
    fn from_rational(&self, q: &Rational) -> Result<NfElem> {
        let mut v = vec![Rational::zero(); self.degree()];
        v[0] = q.clone();
        Ok(NfElem(v))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn degree(&self) -> usize {
        self.inner.minpoly.len() - 1
    }
    fn validate(&self, a: &NfElem) -> Result<()> {
        if a.0.len() != self.degree() {
            return domain(format!(
                "element has {} coordinates but the field has degree {}",
                a.0.len(),
                self.degree()
            ));
        }
        Ok(())
    }
    fn sqrt(&self, a: &NfElem) -> Option<NfElem> {
        let r = self.as_rational(a)?;
        let s = Rationals.sqrt(&r)?;
        self.from_rational(&s).ok()
    }
    fn as_rational(&self, a: &NfElem) -> Option<Rational> {
        a.0[1..].iter().all(Zero::is_zero).then(|| a.0[0].clone())
    }
    fn fmt_elem(&self, a: &NfElem) -> String {
        if self.degree() == 1 {
            return a.0[0].to_string();
        }
        crate::algebra::upoly::format_rational_poly(&a.0, "t")
    }
    /// Sends the generator to a root of the minimal polynomial mod p.
    fn reduction(&self, p: u64) -> Option<Reduction<NfElem>> {
        let fp = PrimeField::new(p).ok()?;
        let coeffs: Option<Vec<u64>> = self.inner.minpoly.iter().map(|c| fp.from_rational(c).ok()).collect();
        let m = crate::algebra::UniPoly::new(&fp, coeffs?);
        if !m.is_squarefree(&fp) {
            return None;
        }
        let root = crate::algebra::factor::factor_mod_p(&fp, &m)
            .into_iter()
            .find(|g| g.degree() == Some(1))
            .map(|g| fp.neg(&g.coeffs()[0]))?;
        Some(Reduction::new(fp, move |a: &NfElem| {
            let mut acc = 0u64;
            for c in a.0.iter().rev() {
                acc = fp.add(&fp.mul(&acc, &root), &fp.from_rational(c).ok()?);
            }
            Some(acc)
        }))
    }
}

/// Parses `p`, `-p`, `p/q` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("malformed rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
