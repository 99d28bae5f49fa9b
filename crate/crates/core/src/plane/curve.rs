use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::bipoly::BiPoly;
use crate::algebra::{ExactMatrix, Field, PrimeField, Rational, Rationals};
use crate::error::{domain, Error, Result};

/// Exponent triple of x^a y^b z^c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Monomial {
    pub const fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Monomial { ex, ey, ez }
    }

    pub fn degree(&self) -> u32 {
        self.ex + self.ey + self.ez
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.ex, self.ey, self.ez]
    }
}

/// Canonical order: descending lexicographic on (e_x, e_y, e_z).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exps().cmp(&self.exps())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, e) in ["x", "y", "z"].iter().zip(self.exps()) {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of degree d in canonical order.
pub fn monomial_basis(d: usize) -> Vec<Monomial> {
    let d = d as u32;
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for ex in (0..=d).rev() {
        for ey in (0..=d - ex).rev() {
            out.push(Monomial::new(ex, ey, d - ex - ey));
        }
    }
    out
}

pub fn basis_size(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Position of a monomial in `monomial_basis(deg)`.
pub fn monomial_index(m: &Monomial) -> usize {
    let d = m.degree() as usize;
    let a = m.ex as usize;
    // monomials with larger e_x come first: Σ_{k>a} (d-k+1)
    let before: usize = (a + 1..=d).map(|k| d - k + 1).sum();
    before + (d - a - m.ey as usize)
}

/// Coordinate variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Var {
        [Var::X, Var::Y, Var::Z][i]
    }
}

/// Homogeneous polynomial in x, y, z with sparse storage.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve<E> {
    degree: usize,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq + Send + Sync> PlaneCurve<E> {
    pub fn zero(degree: usize) -> Self {
        PlaneCurve {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn new<F: Field<Elem = E>>(
        f: &F,
        degree: usize,
        terms: impl IntoIterator<Item = (Monomial, E)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, E> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() as usize != degree {
                return domain(format!("monomial {m} does not have degree {degree}"));
            }
            f.validate(&c)?;
            let entry = map.entry(m).or_insert_with(|| f.zero());
            *entry = f.add(entry, &c);
        }
        map.retain(|_, c| !f.is_zero(c));
        Ok(PlaneCurve { degree, terms: map })
    }

    /// Linear form a·x + b·y + c·z.
    pub fn linear<F: Field<Elem = E>>(f: &F, coeffs: [E; 3]) -> Self {
        let [a, b, c] = coeffs;
        Self::new(
            f,
            1,
            [
                (Monomial::new(1, 0, 0), a),
                (Monomial::new(0, 1, 0), b),
                (Monomial::new(0, 0, 1), c),
            ],
        )
        .expect("linear form")
    }

    pub fn from_coeff_vector<F: Field<Elem = E>>(f: &F, degree: usize, v: &[E]) -> Result<Self> {
        if v.len() != basis_size(degree) {
            return domain(format!(
                "coefficient vector of length {} for degree {degree}",
                v.len()
            ));
        }
        Self::new(f, degree, monomial_basis(degree).into_iter().zip(v.iter().cloned()))
    }

    pub fn to_coeff_vector<F: Field<Elem = E>>(&self, f: &F) -> Vec<E> {
        monomial_basis(self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(|| f.zero()))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, m: &Monomial) -> E {
        self.terms.get(m).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, p: &[E; 3]) -> Result<E> {
        if p.iter().all(|c| f.is_zero(c)) {
            return domain("evaluation at (0,0,0), which is not a projective point");
        }
        let mut powers: Vec<Vec<E>> = Vec::with_capacity(3);
        for c in p {
            let mut row = vec![f.one()];
            for i in 0..self.degree {
                row.push(f.mul(&row[i], c));
            }
            powers.push(row);
        }
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let t = f.mul(
                &f.mul(&powers[0][m.ex as usize], &powers[1][m.ey as usize]),
                &powers[2][m.ez as usize],
            );
            acc = f.add(&acc, &f.mul(c, &t));
        }
        Ok(acc)
    }

    pub fn partial<F: Field<Elem = E>>(&self, f: &F, var: Var) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let mut e = m.exps();
            let k = e[var.index()];
            if k == 0 {
                continue;
            }
            e[var.index()] -= 1;
            terms.push((Monomial::new(e[0], e[1], e[2]), f.mul(c, &f.from_int(k as i64))));
        }
        Self::new(f, self.degree - 1, terms).unwrap()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return domain("adding curves of different degree");
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Self::new(
            f,
            degree,
            self.terms.iter().chain(other.terms.iter()).map(|(m, c)| (*m, c.clone())),
        )
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::new(
            f,
            self.degree,
            self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))),
        )
        .unwrap()
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut map: BTreeMap<Monomial, E> = BTreeMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let k = Monomial::new(m.ex + n.ex, m.ey + n.ey, m.ez + n.ez);
                let entry = map.entry(k).or_insert_with(|| f.zero());
                *entry = f.add(entry, &f.mul(a, b));
            }
        }
        map.retain(|_, c| !f.is_zero(c));
        PlaneCurve {
            degree: self.degree + other.degree,
            terms: map,
        }
    }

    /// Exact division by another curve, `None` when not divisible.
    pub fn div_exact<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Option<Self> {
        if d.is_zero() || d.degree > self.degree {
            return None;
        }
        let (lead_m, lead_c) = d.terms.iter().next()?;
        let lead_inv = f.inv(lead_c).ok()?;
        let mut rem = self.clone();
        let mut quo: Vec<(Monomial, E)> = Vec::new();
        while let Some((m, c)) = rem.terms.iter().next().map(|(m, c)| (*m, c.clone())) {
            if m.ex < lead_m.ex || m.ey < lead_m.ey || m.ez < lead_m.ez {
                return None;
            }
            let qm = Monomial::new(m.ex - lead_m.ex, m.ey - lead_m.ey, m.ez - lead_m.ez);
            let qc = f.mul(&c, &lead_inv);
            let term = PlaneCurve::new(f, qm.degree() as usize, [(qm, qc.clone())]).ok()?;
            rem = rem.add(f, &term.mul(f, d).scale(f, &f.neg(&f.one()))).ok()?;
            quo.push((qm, qc));
        }
        PlaneCurve::new(f, self.degree - d.degree, quo).ok()
    }

    /// f ∘ A, i.e. f(A·(x,y,z)).
    pub fn substitute<F: Field<Elem = E>>(&self, f: &F, a: &ExactMatrix<E>) -> Result<Self> {
        if a.rows() != 3 || a.cols() != 3 {
            return domain("substitution matrix must be 3×3");
        }
        if f.is_zero(&a.det(f)) {
            return domain("substitution matrix is singular");
        }
        Ok(self.substitute_unchecked(f, a))
    }

    pub(crate) fn substitute_unchecked<F: Field<Elem = E>>(&self, f: &F, a: &ExactMatrix<E>) -> Self {
        let lin: Vec<Self> = (0..3)
            .map(|i| Self::linear(f, [a.get(i, 0).clone(), a.get(i, 1).clone(), a.get(i, 2).clone()]))
            .collect();
        let powers: Vec<Vec<Self>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![Self::constant(f, f.one())];
                for i in 0..self.degree {
                    let next = v[i].mul(f, l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: BTreeMap<Monomial, E> = BTreeMap::new();
        for (m, c) in &self.terms {
            let prod = powers[0][m.ex as usize]
                .mul(f, &powers[1][m.ey as usize])
                .mul(f, &powers[2][m.ez as usize]);
            for (k, v) in prod.terms {
                let entry = acc.entry(k).or_insert_with(|| f.zero());
                *entry = f.add(entry, &f.mul(c, &v));
            }
        }
        acc.retain(|_, c| !f.is_zero(c));
        PlaneCurve {
            degree: self.degree,
            terms: acc,
        }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        Self::new(f, 0, [(Monomial::new(0, 0, 0), c)]).unwrap()
    }

    /// Sets the chart variable to 1; the two remaining variables keep their
    /// relative order (e.g. chart y gives a polynomial in (x, z)).
    pub fn dehomogenize<F: Field<Elem = E>>(&self, f: &F, chart: Var) -> BiPoly<E> {
        let keep: Vec<usize> = (0..3).filter(|&i| i != chart.index()).collect();
        BiPoly::new(
            f,
            self.terms.iter().map(|(m, c)| {
                let e = m.exps();
                ((e[keep[0]], e[keep[1]]), c.clone())
            }),
        )
    }

    /// Homogenizes a bivariate polynomial in the chart's two remaining variables.
    pub fn homogenize<F: Field<Elem = E>>(f: &F, p: &BiPoly<E>, chart: Var, degree: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..3).filter(|&i| i != chart.index()).collect();
        let mut terms = Vec::new();
        for ((a, b), c) in p.terms() {
            if (a + b) as usize > degree {
                return domain("homogenization degree too small");
            }
            let mut e = [0u32; 3];
            e[keep[0]] = *a;
            e[keep[1]] = *b;
            e[chart.index()] = degree as u32 - a - b;
            terms.push((Monomial::new(e[0], e[1], e[2]), c.clone()));
        }
        Self::new(f, degree, terms)
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl Fn(&E) -> G::Elem) -> PlaneCurve<G::Elem> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = phi(c);
            if !g.is_zero(&v) {
                terms.insert(*m, v);
            }
        }
        PlaneCurve {
            degree: self.degree,
            terms,
        }
    }

    pub fn to_string_with<F: Field<Elem = E>>(&self, f: &F) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let s = f.fmt_elem(c);
            let s = if s.contains(['+', ' ']) || (s[1..].contains('-')) {
                format!("({s})")
            } else {
                s
            };
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            let mono = m.to_string();
            let term = if mono == "1" {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            match (i, neg) {
                (0, false) => out.push_str(&term),
                (0, true) => out.push_str(&format!("-{term}")),
                (_, false) => out.push_str(&format!(" + {term}")),
                (_, true) => out.push_str(&format!(" - {term}")),
            }
        }
        out
    }
}

impl PlaneCurve<Rational> {
    /// Scales to coprime integer coefficients with the first term positive.
    pub fn normalize_integer(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("cannot normalize the zero polynomial");
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|c| (c * &lcm).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints[0].is_negative() {
            g = -g;
        }
        let terms = self
            .terms
            .keys()
            .zip(ints)
            .map(|(m, c)| (*m, Rational::from_integer(c / &g)));
        Self::new(&Rationals, self.degree, terms)
    }

    pub fn reduce_mod_p(&self, fp: &PrimeField) -> Result<PlaneCurve<u64>> {
        let p = BigInt::from(fp.modulus());
        let bad: Vec<String> = self
            .terms
            .values()
            .filter(|c| c.denom().is_multiple_of(&p))
            .map(|c| c.denom().to_string())
            .collect();
        if !bad.is_empty() {
            return Err(Error::Domain(format!(
                "prime {} divides the denominators {}",
                fp.modulus(),
                bad.join(", ")
            )));
        }
        Ok(self.map(fp, |c| fp.from_rational(c).unwrap()))
    }

    /// Golden-file text: one `coeff e_x e_y e_z` line per term, canonical order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            s.push_str(&format!("{} {} {} {}\n", c, m.ex, m.ey, m.ez));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut degree = None;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return domain(format!("line {}: expected `coeff ex ey ez`", no + 1));
            }
            let c = crate::algebra::field::parse_rational(parts[0])
                .map_err(|e| Error::Domain(format!("line {}: {e}", no + 1)))?;
            let mut e = [0u32; 3];
            for i in 0..3 {
                e[i] = parts[i + 1]
                    .parse()
                    .map_err(|_| Error::Domain(format!("line {}: bad exponent `{}`", no + 1, parts[i + 1])))?;
            }
            let m = Monomial::new(e[0], e[1], e[2]);
            match degree {
                None => degree = Some(m.degree() as usize),
                Some(d) if d != m.degree() as usize => {
                    return domain(format!("line {}: inconsistent degree", no + 1))
                }
                _ => {}
            }
            terms.push((m, c));
        }
        let degree = degree.ok_or_else(|| Error::Domain("empty curve file".into()))?;
        Self::new(&Rationals, degree, terms)
    }

    /// Parses an expression such as `x^2 - 3/2*y*z + z^2` (no parentheses).
    pub fn parse_expr(text: &str) -> Result<Self> {
        let q = Rationals;
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return domain("empty polynomial expression");
        }
        let mut terms: Vec<(Monomial, Rational)> = Vec::new();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push((sign, std::mem::take(&mut cur)));
                sign = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                sign = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((sign, cur));
        let mut degree: Option<usize> = None;
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return domain(format!("malformed polynomial `{text}`"));
            }
            let mut coeff = Rational::one();
            let mut e = [0u32; 3];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return domain(format!("malformed term `{chunk}`"));
                }
                let (base, pow) = match factor.split_once('^') {
                    Some((b, p)) => (
                        b,
                        p.parse::<u32>()
                            .map_err(|_| Error::Domain(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                match base {
                    "x" => e[0] += pow,
                    "y" => e[1] += pow,
                    "z" => e[2] += pow,
                    num => {
                        let c = crate::algebra::field::parse_rational(num)?;
                        coeff *= num_traits::pow(c, pow as usize);
                    }
                }
            }
            if neg {
                coeff = -coeff;
            }
            let m = Monomial::new(e[0], e[1], e[2]);
            match degree {
                None => degree = Some(m.degree() as usize),
                Some(d) if d != m.degree() as usize => {
                    return domain(format!("`{text}` is not homogeneous"))
                }
                _ => {}
            }
            terms.push((m, coeff));
        }
        Self::new(&q, degree.unwrap(), terms)
    }
}

impl fmt::Display for PlaneCurve<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&Rationals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, rat};

    fn q() -> Rationals {
        Rationals
    }

    fn c(s: &str) -> PlaneCurve<Rational> {
        PlaneCurve::parse_expr(s).unwrap()
    }

    fn pt(a: i64, b: i64, cc: i64) -> [Rational; 3] {
        [int(a), int(b), int(cc)]
    }

    #[test]
    fn basis_order_and_index() {
        let b = monomial_basis(2);
        let names: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        for d in 0..8 {
            for (i, m) in monomial_basis(d).iter().enumerate() {
                assert_eq!(monomial_index(m), i);
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        assert!(q().is_zero(&c("x").evaluate(&q(), &pt(0, 1, 0)).unwrap()));
        assert_eq!(c("x^2+y^2+z^2").evaluate(&q(), &pt(1, 0, 0)).unwrap(), int(1));
        assert!(c("x").evaluate(&q(), &pt(0, 0, 0)).is_err());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(c("x^2*y").partial(&q(), Var::X), c("2*x*y"));
        assert!(c("x^3").partial(&q(), Var::Z).is_zero());
        assert_eq!(c("y^4*z^8").partial(&q(), Var::Y), c("4*y^3*z^8"));
        let k = PlaneCurve::constant(&q(), int(5));
        let d = k.partial(&q(), Var::X);
        assert!(d.is_zero() && d.degree() == 0);
    }

    #[test]
    fn substitute_examples() {
        let f = c("x^2 - 3*y*z + 2*z^2");
        let id = ExactMatrix::identity(&q(), 3);
        assert_eq!(f.substitute(&q(), &id).unwrap(), f);
        let swap = ExactMatrix::from_rows(
            &q(),
            vec![
                vec![int(0), int(0), int(1)],
                vec![int(0), int(1), int(0)],
                vec![int(1), int(0), int(0)],
            ],
            3,
        )
        .unwrap();
        assert_eq!(c("x^2").substitute(&q(), &swap).unwrap(), c("z^2"));
        let sing = ExactMatrix::zeros(&q(), 3, 3);
        assert!(f.substitute(&q(), &sing).is_err());
    }

    #[test]
    fn dehomogenize_examples() {
        let g = c("x*z - y^2").dehomogenize(&q(), Var::Z);
        assert_eq!(g, BiPoly::new(&q(), [((1, 0), int(1)), ((0, 2), int(-1))]));
        let g = c("z^5").dehomogenize(&q(), Var::Z);
        assert_eq!(g, BiPoly::new(&q(), [((0, 0), int(1))]));
        let g = c("x^3 - y^2*z").dehomogenize(&q(), Var::Z);
        assert_eq!(g, BiPoly::new(&q(), [((3, 0), int(1)), ((0, 2), int(-1))]));
    }

    #[test]
    fn normalize_examples() {
        let f = PlaneCurve::new(
            &q(),
            1,
            [(Monomial::new(1, 0, 0), rat(1, 2)), (Monomial::new(0, 1, 0), rat(-1, 3))],
        )
        .unwrap();
        assert_eq!(f.normalize_integer().unwrap(), c("3*x - 2*y"));
        assert_eq!(c("-x+y").normalize_integer().unwrap(), c("x-y"));
        assert!(PlaneCurve::<Rational>::zero(3).normalize_integer().is_err());
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f7 = PrimeField::new(7).unwrap();
        let r = c("15625*x^8*y^4").reduce_mod_p(&f7).unwrap();
        assert_eq!(r.coeff(&f7, &Monomial::new(8, 4, 0)), 1);
        let f5 = PrimeField::new(5).unwrap();
        let r = c("x-y").reduce_mod_p(&f5).unwrap();
        assert_eq!(r.coeff(&f5, &Monomial::new(0, 1, 0)), 4);
        let f2 = PrimeField::new(2).unwrap();
        let half = PlaneCurve::new(&q(), 1, [(Monomial::new(1, 0, 0), rat(1, 2))]).unwrap();
        let err = half.reduce_mod_p(&f2).unwrap_err();
        assert!(err.to_string().contains('2'));
    }

    #[test]
    fn text_round_trip() {
        let f = c("3*x^2 - 1/2*y*z + z^2");
        let t = f.to_text();
        assert_eq!(t, "3 2 0 0\n-1/2 0 1 1\n1 0 0 2\n");
        assert_eq!(PlaneCurve::from_text(&t).unwrap(), f);
    }

    #[test]
    fn exact_division() {
        let a = c("x - y");
        let b = c("x^2 + 3*y*z - z^2");
        let p = a.mul(&q(), &b);
        assert_eq!(p.div_exact(&q(), &a).unwrap(), b);
        assert!(b.div_exact(&q(), &a).is_none());
    }

    #[test]
    fn display_format() {
        assert_eq!(c("3*x - 2*y + z").to_string(), "3*x - 2*y + z");
    }
}
