//! Univariate factorization: distinct/equal-degree factorization over 𝔽_p
//! and Zassenhaus-style factorization over ℚ (modular factorization,
//! quadratic Hensel lifting, exhaustive recombination with exact trial
//! division).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Field, PrimeField, Rational, Rationals};
use super::upoly::UniPoly;
use crate::error::{domain, Result};

type Fp = UniPoly<u64>;

fn x_poly(f: &PrimeField) -> Fp {
    UniPoly::monomial(f, 1, 1)
}

/// base^e mod m over 𝔽_p, for an arbitrary-size exponent.
fn powmod(f: &PrimeField, base: &Fp, e: &BigUint, m: &Fp) -> Fp {
    let mut acc = UniPoly::constant(f, 1);
    let base = base.rem(f, m);
    for i in (0..e.bits()).rev() {
        acc = acc.mul(f, &acc).rem(f, m);
        if e.bit(i) {
            acc = acc.mul(f, &base).rem(f, m);
        }
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial over 𝔽_p:
/// pairs (product of all irreducible factors of degree d, d).
pub fn distinct_degree(f: &PrimeField, poly: &Fp) -> Vec<(Fp, usize)> {
    let p = BigUint::from(f.modulus());
    let x = x_poly(f);
    let mut rest = poly.monic(f);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(f, &h, &p, &rest);
        let g = h.sub(f, &x).gcd(f, &rest);
        if g.degree() != Some(0) {
            rest = rest.div_exact(f, &g).unwrap();
            h = h.rem(f, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Splits a product of distinct irreducibles of common degree d over 𝔽_p
/// (p odd) by Cantor–Zassenhaus.
pub fn equal_degree(f: &PrimeField, poly: &Fp, d: usize, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = poly.degree().unwrap();
    if n == d {
        return vec![poly.monic(f)];
    }
    let p = f.modulus();
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a = UniPoly::new(f, a);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = powmod(f, &a, &e, poly).sub(f, &UniPoly::constant(f, 1));
        let g = b.gcd(f, poly);
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < n {
                let h = poly.div_exact(f, &g).unwrap();
                let mut out = equal_degree(f, &g, d, rng);
                out.extend(equal_degree(f, &h, d, rng));
                return out;
            }
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial over 𝔽_p (p odd),
/// sorted by (degree, coefficients).
pub fn factor_mod_p(f: &PrimeField, poly: &Fp) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ f.modulus());
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, poly) {
        out.extend(equal_degree(f, &g, d, &mut rng));
    }
    out.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    out
}

fn reduce_mod_p(f: &PrimeField, poly: &[BigInt]) -> Fp {
    UniPoly::new(f, poly.iter().map(|c| f.reduce_int(c)).collect())
}

/// Primes from `start` upwards.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| super::field::is_prime_u64(n))
}

/// Degree patterns of the factorization modulo `count` good primes. Every
/// pattern refines the degrees of the factorization over ℚ. Empty when the
/// polynomial is not squarefree, since then no prime is good.
pub fn degree_patterns(poly: &UniPoly<Rational>, count: usize) -> Vec<(u64, Vec<usize>)> {
    let mut out = Vec::new();
    if poly.degree().is_none() || !poly.is_squarefree(&Rationals) {
        return out;
    }
    let ints = poly.primitive_integer();
    for p in primes_from(1000) {
        if out.len() == count {
            break;
        }
        let f = PrimeField::new(p).unwrap();
        if f.reduce_int(ints.last().unwrap()) == 0 {
            continue;
        }
        let red = reduce_mod_p(&f, &ints);
        if !red.is_squarefree(&f) {
            continue;
        }
        let mut degs: Vec<usize> = factor_mod_p(&f, &red.monic(&f))
            .iter()
            .map(|g| g.degree().unwrap())
            .collect();
        degs.sort_unstable();
        out.push((p, degs));
    }
    out
}

/// True if some prime among the first `tries` good primes keeps the
/// polynomial irreducible (which proves irreducibility over ℚ). Polynomials
/// with a repeated factor are reported reducible.
pub fn irreducible_mod_some_prime(poly: &[Rational], tries: usize) -> bool {
    let q = Rationals;
    let up = UniPoly::new(&q, poly.to_vec());
    if up.degree().unwrap_or(0) <= 1 {
        return true;
    }
    degree_patterns(&up, tries).iter().any(|(_, d)| d.len() == 1)
}

// ---- integer polynomial helpers (lowest degree first) ----

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(&mut v);
    v
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let mut v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut v);
    v
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let nb: Vec<BigInt> = b.iter().map(|c| -c).collect();
    zadd(a, &nb)
}

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut v);
    v
}

fn zsym(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut v: Vec<BigInt> = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut v);
    v
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let dd = d.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * dc).mod_floor(m);
        }
        q[i] = c;
    }
    r.truncate(dd);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Exact division over ℤ; `None` if not divisible.
fn zdiv_exact(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dl = d.last()?;
    let dd = d.len() - 1;
    let mut r = a.to_vec();
    if r.len() < d.len() {
        return r.is_empty().then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + dd].div_rem(dl);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[i + j] -= &c * dc;
        }
        q[i] = c;
    }
    trim(&mut r);
    if !r.is_empty() {
        return None;
    }
    trim(&mut q);
    Some(q)
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let c = content(a);
    let mut v: Vec<BigInt> = a.iter().map(|x| x / &c).collect();
    if v.last().is_some_and(|c| c.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

fn fp_to_z(g: &Fp) -> Vec<BigInt> {
    g.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from f ≡ g·h, s·g + t·h ≡ 1 (mod m) to the
/// same relations modulo m². h is monic.
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h2 = zmod(&zadd(h, &r), &m2);
    let one = vec![BigInt::one()];
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &one), &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zmod(&zsub(s, &d), &m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts f ≡ lc·Π factors (mod p) to monic factors modulo p^(2^k) ≥ bound.
fn hensel_lift(f: &[BigInt], factors: &[Fp], fp: &PrimeField, bound: &BigInt) -> (Vec<Vec<BigInt>>, BigInt) {
    let p = BigInt::from(fp.modulus());
    let mut modulus = p.clone();
    let mut steps = 0;
    while &modulus <= bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let mut lifted = Vec::new();
    let mut target = f.to_vec();
    let mut rest: Vec<Fp> = factors.to_vec();
    while rest.len() > 1 {
        let head = rest.remove(0);
        let tail = rest
            .iter()
            .fold(UniPoly::constant(fp, 1), |acc, g| acc.mul(fp, g));
        // target ≡ (lc·head)·tail with tail monic.
        let lc = fp.reduce_int(target.last().unwrap());
        let g0 = head.scale(fp, &lc);
        let (gcd, s, t) = g0.ext_gcd(fp, &tail);
        let ginv = fp.inv(&gcd.coeffs()[0]).unwrap();
        // s·g0 + t·tail = 1 with deg s < deg tail, deg t < deg g0
        let s = s.scale(fp, &ginv);
        let t = t.scale(fp, &ginv);
        let (mut g, mut h, mut s, mut t) = (fp_to_z(&g0), fp_to_z(&tail), fp_to_z(&s), fp_to_z(&t));
        let mut m = p.clone();
        for _ in 0..steps {
            (g, h, s, t) = hensel_step(&target, &g, &h, &s, &t, &m);
            m = &m * &m;
        }
        // make g monic modulo the final modulus
        let lc_g = g.last().unwrap().clone();
        let inv = mod_inverse(&lc_g, &modulus);
        lifted.push(zmod(&g.iter().map(|c| c * &inv).collect::<Vec<_>>(), &modulus));
        target = h;
    }
    if let Some(last) = rest.pop() {
        let _ = last;
        let lc = target.last().unwrap().clone();
        let inv = mod_inverse(&lc, &modulus);
        lifted.push(zmod(&target.iter().map(|c| c * &inv).collect::<Vec<_>>(), &modulus));
    }
    (lifted, modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one() || e.gcd == -BigInt::one(), "not invertible");
    (e.x * e.gcd).mod_floor(m)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factors a squarefree nonzero rational polynomial into monic irreducible
/// factors over ℚ, sorted by degree then coefficients.
pub fn factor_squarefree(poly: &UniPoly<Rational>) -> Result<Vec<UniPoly<Rational>>> {
    let q = Rationals;
    if poly.is_zero() {
        return domain("factorization of the zero polynomial");
    }
    if !poly.is_squarefree(&q) && poly.degree() != Some(0) {
        return domain("factor_squarefree needs a squarefree polynomial");
    }
    let n = poly.degree().unwrap();
    if n == 0 {
        return Ok(Vec::new());
    }
    let f = poly.primitive_integer();
    if n == 1 {
        return Ok(vec![poly.monic(&q)]);
    }
    // pick the good prime (of the first few) giving the fewest modular factors
    let mut best: Option<(PrimeField, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in primes_from(1 << 20) {
        let fp = PrimeField::new(p).unwrap();
        if fp.reduce_int(f.last().unwrap()) == 0 {
            continue;
        }
        let red = reduce_mod_p(&fp, &f);
        if !red.is_squarefree(&fp) {
            continue;
        }
        let facs = factor_mod_p(&fp, &red.monic(&fp));
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((fp, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (fp, modular) = best.unwrap();
    if modular.len() == 1 {
        return Ok(vec![poly.monic(&q)]);
    }
    // Landau–Mignotte: any factor's coefficients are below 2^n·‖f‖₂.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let lc = f.last().unwrap().abs();
    let bound = BigInt::from(2) * &lc * (BigInt::one() << n) * norm;
    let (mut lifted, modulus) = hensel_lift(&f, &modular, &fp, &bound);

    let mut remaining = f.clone();
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in subsets(lifted.len(), size) {
            let lc_r = remaining.last().unwrap().clone();
            let mut cand = vec![lc_r.clone()];
            for &i in &subset {
                cand = zmod(&zmul(&cand, &lifted[i]), &modulus);
            }
            let cand = primitive(&zsym(&cand, &modulus));
            if let Some(quo) = zdiv_exact(&remaining, &cand) {
                hit = Some((subset, cand, quo));
                break;
            }
        }
        match hit {
            Some((subset, cand, quo)) => {
                found.push(cand);
                remaining = primitive(&quo);
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if remaining.len() > 1 {
        found.push(remaining);
    }
    let mut out: Vec<UniPoly<Rational>> = found
        .into_iter()
        .map(|v| {
            UniPoly::new(&q, v.into_iter().map(Rational::from_integer).collect()).monic(&q)
        })
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(out)
}

/// Rational roots of a nonzero polynomial (distinct, ascending).
pub fn rational_roots(poly: &UniPoly<Rational>) -> Result<Vec<Rational>> {
    let q = Rationals;
    let sf = poly.squarefree_part(&q)?;
    let mut roots: Vec<Rational> = factor_squarefree(&sf)?
        .into_iter()
        .filter(|g| g.degree() == Some(1))
        .map(|g| -g.coeffs()[0].clone())
        .collect();
    roots.sort();
    Ok(roots)
}

#[allow(dead_code)]
fn to_u64(b: &BigInt) -> Option<u64> {
    b.to_u64()
}
