//! Checks on concrete curves: multiplicities along chains of infinitely
//! near points, scans for singular points, absolute irreducibility and
//! genus bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::factor::{factor_squarefree, primes_from};
use crate::algebra::field::{NumberField, PrimeField, Rational, Rationals};
use crate::algebra::upoly::interpolate;
use crate::algebra::{ExactMatrix, Field, UniPoly};
use crate::error::{domain, Error, Result};
use crate::plane::local::local_expansion;
use crate::plane::{BiPoly, Monomial, PlaneCurve, Var};
use crate::scheme::{local_frame, ProjPoint, Scheme, SingChain, Tangent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Exact,
    Worse,
    Insufficient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exact => "EXACT",
            Verdict::Worse => "WORSE",
            Verdict::Insufficient => "INSUFFICIENT",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainWitness<E> {
    /// Multiplicities met along the chain, as far as it was followed.
    pub multiplicities: Vec<u32>,
    /// Lowest form at the proper point in the local frame: index j holds the
    /// coefficient of u^(m-j) v^j.
    pub tangent_cone: UniPoly<E>,
    /// Multiplicity of the infinitely near point after the last chain point,
    /// computed whenever it could equal the last multiplicity.
    pub extension: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport<E> {
    pub verdict: Verdict,
    pub witness: ChainWitness<E>,
}

/// Per-item verdicts for a whole scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport<E> {
    pub items: Vec<(String, ChainReport<E>)>,
}

impl<E> VerifyReport<E> {
    pub fn all_exact(&self) -> bool {
        self.items.iter().all(|(_, r)| r.verdict == Verdict::Exact)
    }

    /// The worst verdict: WORSE beats INSUFFICIENT beats EXACT.
    pub fn overall(&self) -> Verdict {
        let vs: Vec<Verdict> = self.items.iter().map(|(_, r)| r.verdict).collect();
        if vs.contains(&Verdict::Worse) {
            Verdict::Worse
        } else if vs.contains(&Verdict::Insufficient) {
            Verdict::Insufficient
        } else {
            Verdict::Exact
        }
    }
}

/// Order of vanishing of the curve at p (0 when p is not on it).
pub fn multiplicity_at<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>, p: &ProjPoint<F::Elem>) -> Result<u32> {
    if curve.is_zero() {
        return domain("multiplicity of the zero polynomial");
    }
    let frame = local_frame(f, p, None)?;
    Ok(local_expansion(f, curve, &frame).order().unwrap_or(0))
}

#[derive(Clone, Debug)]
enum Direction<E> {
    /// The line v = λu.
    Slope(E),
    /// The line u = 0.
    Vertical,
}

/// L when the cone (a binary form of degree m, as a polynomial in v/u) is
/// c·L^m.
fn pure_power_direction<F: Field>(f: &F, cone: &UniPoly<F::Elem>, m: u32) -> Option<Direction<F::Elem>> {
    match cone.degree()? {
        0 => Some(Direction::Vertical),
        k if k as u32 == m => {
            let c = cone.coeffs();
            let lead = &c[k];
            let lambda = f.div(&f.neg(&c[k - 1]), &f.mul(&f.from_int(k as i64), lead)).ok()?;
            let root = UniPoly::linear_root(f, &lambda).pow(f, k).scale(f, lead);
            (root == *cone).then_some(Direction::Slope(lambda))
        }
        _ => None,
    }
}

/// Directions along which the cone vanishes to order ≥ k.
fn directions_of_order<F: Field>(f: &F, cone: &UniPoly<F::Elem>, m: u32, k: u32) -> Result<Vec<Direction<F::Elem>>> {
    let mut out = Vec::new();
    let deg = cone.degree().unwrap_or(0) as u32;
    if m - deg >= k {
        out.push(Direction::Vertical);
    }
    let mut h = cone.clone();
    let mut der = cone.clone();
    for _ in 1..k {
        der = der.derivative(f);
        h = h.gcd(f, &der);
    }
    match h.degree() {
        Some(0) | None => {}
        Some(1) => {
            let c = h.coeffs();
            out.push(Direction::Slope(f.div(&f.neg(&c[0]), &c[1])?));
        }
        Some(_) => {
            return Err(Error::Unsupported(
                "several candidate directions for a free tangent".into(),
            ))
        }
    }
    Ok(out)
}

fn blow_up_along<F: Field>(f: &F, g: &BiPoly<F::Elem>, dir: &Direction<F::Elem>) -> BiPoly<F::Elem> {
    match dir {
        Direction::Slope(l) => g.shear_v(f, l).blow_up_v().0,
        Direction::Vertical => g.swap().blow_up_v().0,
    }
}

fn compare(actual: u32, want: u32) -> Option<Verdict> {
    match actual.cmp(&want) {
        std::cmp::Ordering::Less => Some(Verdict::Insufficient),
        std::cmp::Ordering::Greater => Some(Verdict::Worse),
        std::cmp::Ordering::Equal => None,
    }
}

/// Checks that the curve has exactly the chain at p: the required
/// multiplicities in the required direction, and no further infinitely near
/// point of the last multiplicity (for multiplicities ≥ 2).
pub fn chain_verify<F: Field>(
    f: &F,
    curve: &PlaneCurve<F::Elem>,
    p: &ProjPoint<F::Elem>,
    chain: &SingChain<F::Elem>,
) -> Result<ChainReport<F::Elem>> {
    if curve.is_zero() {
        return domain("cannot verify the zero polynomial");
    }
    let frame = local_frame(f, p, chain.tangent_line())?;
    let mut g = local_expansion(f, curve, &frame);
    let req = chain.mults();
    let m0 = g.order().unwrap_or(0);
    let tangent_cone = g.form(f, m0);
    let mut witness = ChainWitness {
        multiplicities: vec![m0],
        tangent_cone,
        extension: None,
    };
    let report = |verdict, witness| Ok(ChainReport { verdict, witness });
    if let Some(v) = compare(m0, req[0]) {
        return report(v, witness);
    }
    for &want in &req[1..] {
        let prev = *witness.multiplicities.last().unwrap();
        let dir = match chain.tangent() {
            Some(Tangent::Line(_)) => Direction::Slope(f.zero()),
            _ => {
                let cone = g.form(f, prev);
                let mut dirs = directions_of_order(f, &cone, prev, want)?;
                match dirs.len() {
                    0 => return report(Verdict::Insufficient, witness),
                    1 => dirs.pop().unwrap(),
                    _ => {
                        return Err(Error::Unsupported(
                            "several candidate directions for a free tangent".into(),
                        ))
                    }
                }
            }
        };
        g = blow_up_along(f, &g, &dir);
        let mk = g.order().unwrap_or(0);
        witness.multiplicities.push(mk);
        if let Some(v) = compare(mk, want) {
            return report(v, witness);
        }
    }
    let last = *witness.multiplicities.last().unwrap();
    if last >= 2 {
        if let Some(dir) = pure_power_direction(f, &g.form(f, last), last) {
            let next = blow_up_along(f, &g, &dir).order().unwrap_or(0);
            witness.extension = Some(next);
            if next >= last {
                return report(Verdict::Worse, witness);
            }
        }
    }
    report(Verdict::Exact, witness)
}

/// chain_verify at every item of a scheme, in parallel.
pub fn verify_scheme<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>, scheme: &Scheme<F::Elem>) -> Result<VerifyReport<F::Elem>> {
    let items: Result<Vec<_>> = scheme
        .items()
        .par_iter()
        .map(|it| Ok((it.label.clone(), chain_verify(f, curve, &it.point, &it.chain)?)))
        .collect();
    Ok(VerifyReport { items: items? })
}

/// Why a candidate curve fails to be a reduced, absolutely irreducible curve
/// with exactly the given scheme; `None` when it is one.
pub fn solution_defect<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>, scheme: &Scheme<F::Elem>) -> Result<Option<String>> {
    if !squarefree_check(f, curve)? {
        return Ok(Some("has a repeated component".into()));
    }
    let report = verify_scheme(f, curve, scheme)?;
    let bad: Vec<String> = report
        .items
        .iter()
        .filter(|(_, r)| r.verdict != Verdict::Exact)
        .map(|(l, r)| format!("{} at {l}", r.verdict))
        .collect();
    if !bad.is_empty() {
        return Ok(Some(format!("singularities differ: {}", bad.join(", "))));
    }
    let n = absolute_factor_count(f, curve)?;
    if n > 1 {
        return Ok(Some(format!("splits into {n} absolutely irreducible components")));
    }
    Ok(None)
}

/// (d−1)(d−2)/2 − Σ m(m−1)/2 over every point of every chain.
pub fn geometric_genus<E: Clone + PartialEq + Send + Sync>(d: usize, s: &Scheme<E>) -> Result<i64> {
    let d = d as i64;
    let drop: i64 = s
        .items()
        .iter()
        .flat_map(|it| it.chain.mults().iter())
        .map(|&m| (m as i64) * (m as i64 - 1) / 2)
        .sum();
    let g = (d - 1) * (d - 2) / 2 - drop;
    if g < 0 {
        return Err(Error::Consistency(format!(
            "inconsistent declared data: genus {g} for degree {d}"
        )));
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// resultants of bivariate polynomials

/// Res_y(a, b) as a polynomial in x, by evaluation at x = 0, 1, 2, … and
/// interpolation (formal y-degrees, so every specialization is exact).
fn resultant_y<F: Field>(f: &F, a: &BiPoly<F::Elem>, b: &BiPoly<F::Elem>) -> Result<UniPoly<F::Elem>> {
    let da = a.degree_v().unwrap_or(0) as usize;
    let db = b.degree_v().unwrap_or(0) as usize;
    let ta = a.total_degree().unwrap_or(0) as usize;
    let tb = b.total_degree().unwrap_or(0) as usize;
    let n = ta * tb + 1;
    let xs: Vec<F::Elem> = (0..n as i64).map(|i| f.from_int(i)).collect();
    let ys: Vec<F::Elem> = xs
        .iter()
        .map(|x| a.eval_u(f, x).resultant_formal(f, &b.eval_u(f, x), da, db))
        .collect();
    if f.characteristic() != 0 && (n as u64) >= f.characteristic() {
        return domain("prime too small for interpolation");
    }
    interpolate(f, &xs, &ys)
}

fn gcd_all<F: Field>(f: &F, polys: &[UniPoly<F::Elem>]) -> Option<UniPoly<F::Elem>> {
    let mut acc: Option<UniPoly<F::Elem>> = None;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(f),
            Some(g) => g.gcd(f, p).monic(f),
        });
    }
    acc
}

fn partials<F: Field>(f: &F, c: &PlaneCurve<F::Elem>) -> [PlaneCurve<F::Elem>; 3] {
    [c.partial(f, Var::X), c.partial(f, Var::Y), c.partial(f, Var::Z)]
}

/// Homogeneous form at z = 0, dehomogenized at y = 1: a polynomial in x.
fn at_infinity<F: Field>(f: &F, c: &PlaneCurve<F::Elem>) -> UniPoly<F::Elem> {
    let mut coeffs = vec![f.zero(); c.degree() + 1];
    for (m, v) in c.terms() {
        if m.ez == 0 {
            coeffs[m.ex as usize] = v.clone();
        }
    }
    UniPoly::new(f, coeffs)
}

fn specialize_x<F: Field>(f: &F, c: &PlaneCurve<F::Elem>, x: &F::Elem) -> UniPoly<F::Elem> {
    c.dehomogenize(f, Var::Z).eval_u(f, x)
}

fn divide_out<F: Field>(f: &F, mut g: UniPoly<F::Elem>, root: &F::Elem) -> UniPoly<F::Elem> {
    let lin = UniPoly::linear_root(f, root);
    while g.degree().unwrap_or(0) > 0 {
        match g.div_exact(f, &lin) {
            Some(q) => g = q,
            None => break,
        }
    }
    g
}

// ---------------------------------------------------------------------------
// full singular-locus scan over ℚ

/// Singular points whose coordinates generate an extension of ℚ, kept in
/// symbolic form.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicPoints {
    /// `Z`: affine points [x, y, 1]; `Y`: points [x, 1, 0] at infinity.
    pub chart: Var,
    /// Irreducible monic polynomial of the x-coordinate.
    pub abscissa: UniPoly<Rational>,
    /// For a rational x-coordinate: irreducible polynomial of y.
    pub ordinate: Option<UniPoly<Rational>>,
    /// Singular points above each root of the abscissa polynomial.
    pub points_per_root: usize,
    /// Multiplicity of the abscissa factor in the eliminant.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SingularPoint {
    Rational(ProjPoint<Rational>),
    Algebraic(AlgebraicPoints),
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Rational(p) => write!(out, "{}", p.fmt_with(&Rationals)),
            SingularPoint::Algebraic(a) => {
                let chart = if a.chart == Var::Z { "[x, y, 1]" } else { "[x, 1, 0]" };
                write!(out, "{chart} with x a root of {}", a.abscissa.to_string_in("x"))?;
                if let Some(o) = &a.ordinate {
                    write!(out, " and y a root of {}", o.to_string_in("y"))?;
                }
                write!(out, " ({} per root, multiplicity {})", a.points_per_root, a.multiplicity)
            }
        }
    }
}

/// Options of the modular prefilter.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Primes are taken from here upwards.
    pub first_prime: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            first_prime: (1 << 30) + 1,
        }
    }
}

/// Integer-coefficient copy of a rational curve (scaled by a nonzero rational).
fn integral(curve: &PlaneCurve<Rational>) -> Result<PlaneCurve<Rational>> {
    curve.normalize_integer()
}

fn reduce_bipoly(p: &BiPoly<Rational>, fp: &PrimeField) -> Option<BiPoly<u64>> {
    let terms: Option<Vec<_>> = p
        .terms()
        .map(|(k, c)| fp.from_rational(c).ok().map(|v| (*k, v)))
        .collect();
    Some(BiPoly::new(fp, terms?))
}

/// Monic gcd of the pairwise resultants of the affine partials, modulo p.
fn eliminant_mod_p(parts: &[BiPoly<Rational>; 3], p: u64) -> Option<UniPoly<u64>> {
    let fp = PrimeField::new(p).ok()?;
    let red: Option<Vec<BiPoly<u64>>> = parts.iter().map(|b| reduce_bipoly(b, &fp)).collect();
    let red = red?;
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let rs: Vec<UniPoly<u64>> = pairs
        .iter()
        .map(|&(i, j)| resultant_y(&fp, &red[i], &red[j]).unwrap_or_else(|_| UniPoly::zero()))
        .collect();
    gcd_all(&fp, &rs)
}

/// Rational number with |n|, d ≤ √(m/2) congruent to a mod m, if any.
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn crt_combine(acc: &[BigInt], modulus: &BigInt, img: &[u64], p: u64) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let minv = {
        let m = modulus.mod_floor(&pb);
        let e = m.extended_gcd(&pb);
        e.x.mod_floor(&pb)
    };
    acc.iter()
        .zip(img)
        .map(|(a, &r)| {
            let diff = (BigInt::from(r) - a).mod_floor(&pb);
            a + modulus * ((diff * &minv).mod_floor(&pb))
        })
        .collect()
}

/// The eliminant over ℚ: gcd of Res_y of the partials, reconstructed from
/// images modulo primes of minimal degree until it stabilizes.
fn rational_eliminant(parts: &[BiPoly<Rational>; 3], opts: &ScanOptions) -> Result<Option<UniPoly<Rational>>> {
    let q = Rationals;
    let mut primes = primes_from(opts.first_prime);
    let mut best_deg: Option<usize> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<Rational>> = None;
    let mut agreeing = 0;
    for _round in 0..200 {
        let batch: Vec<u64> = primes.by_ref().take(4).collect();
        let images: Vec<(u64, Option<UniPoly<u64>>)> =
            batch.par_iter().map(|&p| (p, eliminant_mod_p(parts, p))).collect();
        for (p, img) in images {
            let img = match img {
                Some(g) => g,
                None => continue,
            };
            let deg = img.degree().unwrap();
            match best_deg {
                Some(b) if deg > b => continue,
                Some(b) if deg == b => {
                    residues = crt_combine(&residues, &modulus, img.coeffs(), p);
                    modulus *= BigInt::from(p);
                }
                _ => {
                    best_deg = Some(deg);
                    residues = img.coeffs().iter().map(|&c| BigInt::from(c)).collect();
                    modulus = BigInt::from(p);
                    last = None;
                    agreeing = 0;
                    continue;
                }
            }
            let rec: Option<Vec<Rational>> = residues.iter().map(|a| rational_reconstruct(a, &modulus)).collect();
            match (rec, &last) {
                (Some(r), Some(l)) if r == *l => {
                    agreeing += 1;
                    if agreeing >= 2 {
                        return Ok(Some(UniPoly::new(&q, r)));
                    }
                }
                (r, _) => {
                    last = r;
                    agreeing = 0;
                }
            }
        }
        if best_deg.is_none() && _round > 3 {
            return Ok(None);
        }
    }
    Err(Error::Consistency("eliminant reconstruction did not stabilize".into()))
}

/// Common y-roots of the partials over x = a: rational points and
/// irreducible leftovers.
fn fiber_rational(parts: &[PlaneCurve<Rational>; 3], a: &Rational) -> Result<(Vec<Rational>, Vec<UniPoly<Rational>>)> {
    let q = Rationals;
    let polys: Vec<UniPoly<Rational>> = parts.iter().map(|c| specialize_x(&q, c, a)).collect();
    let g = match gcd_all(&q, &polys) {
        Some(g) => g,
        None => return domain("a vertical line of singular points: the curve is not squarefree"),
    };
    if g.degree() == Some(0) {
        return Ok((Vec::new(), Vec::new()));
    }
    let factors = factor_squarefree(&g.squarefree_part(&q)?)?;
    let mut roots = Vec::new();
    let mut rest = Vec::new();
    for h in factors {
        if h.degree() == Some(1) {
            roots.push(-h.coeffs()[0].clone() / h.coeffs()[1].clone());
        } else {
            rest.push(h);
        }
    }
    Ok((roots, rest))
}

fn multiplicity_in(g: &UniPoly<Rational>, h: &UniPoly<Rational>) -> usize {
    let q = Rationals;
    let mut k = 0;
    let mut cur = g.clone();
    while let Some(next) = cur.div_exact(&q, h) {
        k += 1;
        cur = next;
    }
    k
}

/// All singular points of a squarefree rational curve. Rational points are
/// listed explicitly; the others symbolically.
pub fn singular_locus_scan(curve: &PlaneCurve<Rational>, opts: &ScanOptions) -> Result<Vec<SingularPoint>> {
    let q = Rationals;
    if !squarefree_check(&q, curve)? {
        return domain("curve is not squarefree");
    }
    let curve = integral(curve)?;
    let parts = partials(&q, &curve);
    let affine = [
        parts[0].dehomogenize(&q, Var::Z),
        parts[1].dehomogenize(&q, Var::Z),
        parts[2].dehomogenize(&q, Var::Z),
    ];
    let mut out = Vec::new();
    if let Some(g) = rational_eliminant(&affine, opts)? {
        if g.degree().unwrap_or(0) > 0 {
            for h in factor_squarefree(&g.squarefree_part(&q)?)? {
                let mult = multiplicity_in(&g, &h);
                if h.degree() == Some(1) {
                    let a = -h.coeffs()[0].clone() / h.coeffs()[1].clone();
                    let (ys, rest) = fiber_rational(&parts, &a)?;
                    for y in ys {
                        out.push(SingularPoint::Rational(ProjPoint::new(&q, [a.clone(), y, q.one()])?));
                    }
                    for r in rest {
                        out.push(SingularPoint::Algebraic(AlgebraicPoints {
                            chart: Var::Z,
                            abscissa: h.clone(),
                            points_per_root: r.degree().unwrap(),
                            ordinate: Some(r),
                            multiplicity: mult,
                        }));
                    }
                } else {
                    let k = NumberField::new(h.coeffs())?;
                    let theta = k.generator();
                    let polys: Vec<UniPoly<_>> = parts
                        .iter()
                        .map(|c| specialize_x(&k, &c.map(&k, |v| k.from_rational(v).unwrap()), &theta))
                        .collect();
                    if let Some(common) = gcd_all(&k, &polys) {
                        if common.degree().unwrap_or(0) > 0 {
                            out.push(SingularPoint::Algebraic(AlgebraicPoints {
                                chart: Var::Z,
                                abscissa: h.clone(),
                                ordinate: None,
                                points_per_root: common.degree().unwrap(),
                                multiplicity: mult,
                            }));
                        }
                    }
                }
            }
        }
    } else {
        return Err(Error::Unsupported(
            "the affine partials share a component; change coordinates before scanning".into(),
        ));
    }
    // the line z = 0
    let inf: Vec<UniPoly<Rational>> = parts.iter().map(|c| at_infinity(&q, c)).collect();
    if let Some(g) = gcd_all(&q, &inf) {
        if g.degree().unwrap_or(0) > 0 {
            for h in factor_squarefree(&g.squarefree_part(&q)?)? {
                if h.degree() == Some(1) {
                    let a = -h.coeffs()[0].clone() / h.coeffs()[1].clone();
                    out.push(SingularPoint::Rational(ProjPoint::new(&q, [a, q.one(), q.zero()])?));
                } else {
                    out.push(SingularPoint::Algebraic(AlgebraicPoints {
                        chart: Var::Y,
                        abscissa: h.clone(),
                        ordinate: None,
                        points_per_root: 1,
                        multiplicity: multiplicity_in(&g, &h),
                    }));
                }
            }
        }
    }
    let e0 = [q.one(), q.zero(), q.zero()];
    if parts.iter().all(|c| c.evaluate(&q, &e0).map(|v| v.is_zero()).unwrap_or(false)) {
        out.push(SingularPoint::Rational(ProjPoint::new(&q, e0)?));
    }
    Ok(out)
}

/// Rational singular points of a scan that are not among the given points.
pub fn undeclared<'a>(found: &'a [SingularPoint], declared: &[ProjPoint<Rational>]) -> Vec<&'a SingularPoint> {
    found
        .iter()
        .filter(|s| match s {
            SingularPoint::Rational(p) => !declared.contains(p),
            SingularPoint::Algebraic(_) => true,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// singular points on an auxiliary curve, over any field

/// Singular points of a curve lying on an auxiliary curve, outside a list of
/// excluded points.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedScan<E> {
    /// Points located exactly.
    pub points: Vec<ProjPoint<E>>,
    /// Eliminant factors whose roots could not be separated in the field;
    /// each may or may not hide further points.
    pub unresolved: Vec<UniPoly<E>>,
}

impl<E> RestrictedScan<E> {
    /// Certified absence of further singular points on the auxiliary curve.
    pub fn is_clear(&self) -> bool {
        self.points.is_empty() && self.unresolved.is_empty()
    }
}

fn locate<F: Field>(
    f: &F,
    g: UniPoly<F::Elem>,
    mk_point: impl Fn(&F::Elem) -> Result<Option<ProjPoint<F::Elem>>>,
    out: &mut RestrictedScan<F::Elem>,
) -> Result<()> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let s = g.squarefree_part(f)?;
    if s.degree() == Some(1) {
        let root = f.div(&f.neg(&s.coeffs()[0]), &s.coeffs()[1])?;
        if let Some(p) = mk_point(&root)? {
            out.points.push(p);
        }
    } else {
        out.unresolved.push(s);
    }
    Ok(())
}

/// Singular points of `curve` on `aux`, other than `exclude`, found from
/// resultants of `aux` with the partials of `curve`.
pub fn singular_points_on<F: Field>(
    f: &F,
    curve: &PlaneCurve<F::Elem>,
    aux: &PlaneCurve<F::Elem>,
    exclude: &[ProjPoint<F::Elem>],
) -> Result<RestrictedScan<F::Elem>> {
    let parts = partials(f, curve);
    let mut all = vec![aux.clone()];
    all.extend(parts.iter().cloned());
    let mut out = RestrictedScan {
        points: Vec::new(),
        unresolved: Vec::new(),
    };
    let on_all = |p: &[F::Elem; 3]| -> Result<bool> {
        for c in &all {
            if !f.is_zero(&c.evaluate(f, p)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let one = f.one();
    let zero = f.zero();

    // affine part: eliminate y, then look at excluded abscissae separately
    let a_aff = aux.dehomogenize(f, Var::Z);
    let rs: Result<Vec<UniPoly<F::Elem>>> = parts
        .iter()
        .map(|c| resultant_y(f, &a_aff, &c.dehomogenize(f, Var::Z)))
        .collect();
    let g = gcd_all(f, &rs?).ok_or_else(|| {
        Error::Unsupported("the auxiliary curve shares a component with every partial".into())
    })?;
    let mut excluded_x: Vec<F::Elem> = Vec::new();
    for p in exclude {
        let c = p.coords();
        if f.is_one(&c[2]) && !excluded_x.contains(&c[0]) {
            excluded_x.push(c[0].clone());
        }
    }
    let mut rest = g;
    for x in &excluded_x {
        rest = divide_out(f, rest, x);
    }
    locate(
        f,
        rest,
        |x| {
            let polys: Vec<UniPoly<F::Elem>> = all.iter().map(|c| specialize_x(f, c, x)).collect();
            match gcd_all(f, &polys) {
                Some(h) if h.degree() == Some(1) => {
                    let y = f.div(&f.neg(&h.coeffs()[0]), &h.coeffs()[1])?;
                    Ok(Some(ProjPoint::new(f, [x.clone(), y, one.clone()])?))
                }
                _ => Ok(None),
            }
        },
        &mut out,
    )?;
    for x in &excluded_x {
        let polys: Vec<UniPoly<F::Elem>> = all.iter().map(|c| specialize_x(f, c, x)).collect();
        let mut h = match gcd_all(f, &polys) {
            Some(h) => h,
            None => continue,
        };
        for p in exclude {
            let c = p.coords();
            if f.is_one(&c[2]) && c[0] == *x {
                h = divide_out(f, h, &c[1]);
            }
        }
        let xv = x.clone();
        locate(
            f,
            h,
            |y| Ok(Some(ProjPoint::new(f, [xv.clone(), y.clone(), one.clone()])?)),
            &mut out,
        )?;
    }

    // the line z = 0
    let inf: Vec<UniPoly<F::Elem>> = all.iter().map(|c| at_infinity(f, c)).collect();
    if let Some(mut h) = gcd_all(f, &inf) {
        for p in exclude {
            let c = p.coords();
            if f.is_zero(&c[2]) && f.is_one(&c[1]) {
                h = divide_out(f, h, &c[0]);
            }
        }
        locate(
            f,
            h,
            |x| Ok(Some(ProjPoint::new(f, [x.clone(), one.clone(), zero.clone()])?)),
            &mut out,
        )?;
    }
    let e0 = [f.one(), f.zero(), f.zero()];
    let e0p = ProjPoint::new(f, e0.clone())?;
    if !exclude.contains(&e0p) && on_all(&e0)? {
        out.points.push(e0p);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// squarefreeness and absolute irreducibility

/// Small integer coordinate changes tried in order; each maps e_x and e_y to
/// points off the curve so that the affine chart keeps full degree in x and y.
fn chart_candidates() -> Vec<[[i64; 3]; 3]> {
    let mut out = vec![[[1, 0, 0], [0, 1, 0], [0, 0, 1]]];
    for s in 1..6i64 {
        for (a, b, c, e) in [(s, 0, 0, 0), (0, s, 0, 0), (s, -s, 0, 0), (0, 0, s, 1), (s, 1, 2, -s), (-s, 2, 1, s)] {
            // columns (1, b, c), (a, 1, e), (0, 0, 1)
            out.push([[1, a, 0], [b, 1, 0], [c, e, 1]]);
        }
    }
    out
}

/// The curve in a chart where the coefficients of x^d and y^d are nonzero.
fn general_chart<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>) -> Result<BiPoly<F::Elem>> {
    let d = curve.degree();
    for m in chart_candidates() {
        let rows: Vec<Vec<F::Elem>> = m.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect();
        let a = ExactMatrix::from_rows(f, rows, 3)?;
        if f.is_zero(&a.det(f)) {
            continue;
        }
        let g = match curve.substitute(f, &a) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let xd = g.coeff(f, &Monomial::new(d as u32, 0, 0));
        let yd = g.coeff(f, &Monomial::new(0, d as u32, 0));
        if !f.is_zero(&xd) && !f.is_zero(&yd) {
            return Ok(g.dehomogenize(f, Var::Z));
        }
    }
    Err(Error::Unsupported("no chart keeps the full degree in both variables".into()))
}

fn bipoly_reduce<E: Clone + PartialEq + Send + Sync>(p: &BiPoly<E>, red: &crate::algebra::field::Reduction<E>) -> Option<BiPoly<u64>> {
    let terms: Option<Vec<_>> = p.terms().map(|(k, c)| red.apply(c).map(|v| (*k, v))).collect();
    Some(BiPoly::new(&red.target, terms?))
}

/// Whether Res_y(p, ∂p/∂y) is a nonzero polynomial, given full y-degree d.
fn discriminant_nonzero<G: Field>(g: &G, p: &BiPoly<G::Elem>) -> Option<bool> {
    let d = p.degree_v().unwrap_or(0) as usize;
    if d == 0 {
        return Some(true);
    }
    let py = p.partial_v(g);
    let bound = p.total_degree().unwrap_or(0) as usize * d;
    if g.characteristic() != 0 && (bound as u64 + 1) >= g.characteristic() {
        return None;
    }
    for i in 0..=bound as i64 {
        let x = g.from_int(i);
        if !g.is_zero(&p.eval_u(g, &x).resultant_formal(g, &py.eval_u(g, &x), d, d - 1)) {
            return Some(true);
        }
    }
    Some(false)
}

fn modular_primes(first: u64) -> impl Iterator<Item = u64> {
    primes_from(first)
}

/// True when the curve has no repeated component.
pub fn squarefree_check<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>) -> Result<bool> {
    if curve.is_zero() {
        return domain("the zero polynomial");
    }
    if curve.degree() == 0 {
        return Ok(true);
    }
    let p = general_chart(f, curve)?;
    for prime in modular_primes((1 << 30) + 1).take(2) {
        if let Some(red) = f.reduction(prime) {
            if let Some(pp) = bipoly_reduce(&p, &red) {
                if discriminant_nonzero(&red.target, &pp) == Some(true) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(discriminant_nonzero(f, &p).unwrap_or(false))
}

/// Coefficient matrix of (g, h) ↦ p·g_y − g·p_y − p·h_x + h·p_x with
/// deg g ≤ (m−1, n), deg h ≤ (m, n−1).
fn ruppert_matrix<G: Field>(g: &G, p: &BiPoly<G::Elem>) -> ExactMatrix<G::Elem> {
    let m = p.degree_u().unwrap_or(0);
    let n = p.degree_v().unwrap_or(0);
    let px = p.partial_u(g);
    let py = p.partial_v(g);
    let mut cols: Vec<BiPoly<G::Elem>> = Vec::new();
    for a in 0..m {
        for b in 0..=n {
            let mono = BiPoly::new(g, [((a, b), g.one())]);
            cols.push(p.mul(g, &mono.partial_v(g)).sub(g, &mono.mul(g, &py)));
        }
    }
    for a in 0..=m {
        for b in 0..n {
            let mono = BiPoly::new(g, [((a, b), g.one())]);
            cols.push(mono.mul(g, &px).sub(g, &p.mul(g, &mono.partial_u(g))));
        }
    }
    let w = (2 * n + 1) as usize;
    let rows = ((2 * m + 1) as usize) * w;
    let mut mat = ExactMatrix::zeros(g, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for ((a, b), v) in c.terms() {
            mat.set(*a as usize * w + *b as usize, j, v.clone());
        }
    }
    mat
}

/// How the factor count was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCount {
    pub count: usize,
    /// Prime whose reduction certified absolute irreducibility, if that
    /// shortcut applied; otherwise the count is an exact kernel dimension.
    pub certified_mod: Option<u64>,
}

/// Number of absolutely irreducible factors of a squarefree curve, as the
/// dimension of the Ruppert–Gao solution space.
pub fn absolute_factor_count<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>) -> Result<usize> {
    Ok(absolute_factor_count_with(f, curve, (1 << 30) + 1)?.count)
}

pub fn absolute_factor_count_with<F: Field>(f: &F, curve: &PlaneCurve<F::Elem>, first_prime: u64) -> Result<FactorCount> {
    if curve.is_zero() || curve.degree() == 0 {
        return domain("absolute factor count needs a curve of degree ≥ 1");
    }
    if !squarefree_check(f, curve)? {
        return domain("curve is not squarefree");
    }
    if curve.degree() == 1 {
        return Ok(FactorCount {
            count: 1,
            certified_mod: None,
        });
    }
    let p = general_chart(f, curve)?;
    for prime in modular_primes(first_prime).take(3) {
        let red = match f.reduction(prime) {
            Some(r) => r,
            None => continue,
        };
        let pp = match bipoly_reduce(&p, &red) {
            Some(pp) => pp,
            None => continue,
        };
        let mat = ruppert_matrix(&red.target, &pp);
        if mat.cols() - mat.rank(&red.target) == 1 {
            return Ok(FactorCount {
                count: 1,
                certified_mod: Some(prime),
            });
        }
    }
    let mat = ruppert_matrix(f, &p);
    Ok(FactorCount {
        count: mat.cols() - mat.rank(f),
        certified_mod: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::scheme::Tangent;

    fn c(s: &str) -> PlaneCurve<Rational> {
        PlaneCurve::parse_expr(s).unwrap()
    }

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint<Rational> {
        ProjPoint::new(&Rationals, [int(x), int(y), int(z)]).unwrap()
    }

    #[test]
    fn multiplicities() {
        let q = Rationals;
        assert_eq!(multiplicity_at(&q, &c("x - y + z"), &pt(0, 1, 1)).unwrap(), 1);
        assert_eq!(multiplicity_at(&q, &c("x^3 - y^2*z"), &pt(0, 0, 1)).unwrap(), 2);
        assert_eq!(multiplicity_at(&q, &c("x^3 - y^2*z"), &pt(1, 1, 1)).unwrap(), 1);
        assert_eq!(multiplicity_at(&q, &c("x^3 - y^2*z"), &pt(1, 2, 1)).unwrap(), 0);
    }

    #[test]
    fn node_and_worse_point() {
        let q = Rationals;
        let node = chain_verify(&q, &c("x*y"), &pt(0, 0, 1), &SingChain::ordinary(2).unwrap()).unwrap();
        assert_eq!(node.verdict, Verdict::Exact);
        let quad = c("x^4*z^8 - y^4*z^8 + x^12");
        let r = chain_verify(&q, &quad, &pt(0, 0, 1), &SingChain::ordinary(3).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Worse);
        let r = chain_verify(&q, &quad, &pt(0, 0, 1), &SingChain::ordinary(5).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Insufficient);
    }

    #[test]
    fn tacnode_chains() {
        let q = Rationals;
        // y^2 = x^4: tacnode with tangent y = 0
        let f = c("y^2*z^2 - x^4");
        let tac = SingChain::chain(2, 2, Tangent::Line(c("y"))).unwrap();
        assert_eq!(chain_verify(&q, &f, &pt(0, 0, 1), &tac).unwrap().verdict, Verdict::Exact);
        // ordinary [2] is extended by the tacnode
        let r = chain_verify(&q, &f, &pt(0, 0, 1), &SingChain::ordinary(2).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Worse);
        assert_eq!(r.witness.extension, Some(2));
        // wrong tangent
        let wrong = SingChain::chain(2, 2, Tangent::Line(c("x"))).unwrap();
        assert_eq!(chain_verify(&q, &f, &pt(0, 0, 1), &wrong).unwrap().verdict, Verdict::Insufficient);
        // y^2 = x^6 has a third double point: [2,2] is exceeded
        let f = c("y^2*z^4 - x^6");
        assert_eq!(chain_verify(&q, &f, &pt(0, 0, 1), &tac).unwrap().verdict, Verdict::Worse);
        // free tangent finds the direction
        let free = SingChain::chain(2, 2, Tangent::Free).unwrap();
        let g = c("x^2*z^2 - 2*x*y*z^2 + y^2*z^2 - x^4");
        assert_eq!(chain_verify(&q, &g, &pt(0, 0, 1), &free).unwrap().verdict, Verdict::Exact);
    }

    #[test]
    fn genus_examples() {
        let q = Rationals;
        let mut s = Scheme::new();
        s.push(&q, "p", pt(0, 0, 1), SingChain::ordinary(2).unwrap()).unwrap();
        assert_eq!(geometric_genus(3, &s).unwrap(), 0);
        assert_eq!(geometric_genus(2, &Scheme::<Rational>::new()).unwrap(), 0);
        assert!(geometric_genus(2, &s).is_err());
    }

    #[test]
    fn scans() {
        let opts = ScanOptions::default();
        assert!(singular_locus_scan(&c("x*z - y^2"), &opts).unwrap().is_empty());
        let s = singular_locus_scan(&c("y^2*z - x^3 - x^2*z"), &opts).unwrap();
        assert_eq!(s, vec![SingularPoint::Rational(pt(0, 0, 1))]);
        // three concurrent-free lines: three rational nodes, one at infinity
        let s = singular_locus_scan(&c("x*y*z"), &opts).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&SingularPoint::Rational(pt(1, 0, 0))));
        // (x^2 - 2z^2)·y: nodes at [±√2, 0, 1] and where the two lines meet
        let s = singular_locus_scan(&c("x^2*y - 2*y*z^2"), &opts).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&SingularPoint::Rational(pt(0, 1, 0))));
        match &s[0] {
            SingularPoint::Algebraic(a) => {
                assert_eq!(a.abscissa.degree(), Some(2));
                assert_eq!(a.points_per_root, 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(singular_locus_scan(&c("x^2*y"), &opts).is_err());
    }

    #[test]
    fn restricted_scan() {
        let q = Rationals;
        // x·y·(x + y − z): nodes [0,0,1], [1,0,1], [0,1,1]; on the line y = 0
        // we see [0,0,1] and [1,0,1]
        let f = c("x^2*y + x*y^2 - x*y*z");
        let r = singular_points_on(&q, &f, &c("y"), &[pt(0, 0, 1)]).unwrap();
        assert_eq!(r.points, vec![pt(1, 0, 1)]);
        let r = singular_points_on(&q, &f, &c("y"), &[pt(0, 0, 1), pt(1, 0, 1)]).unwrap();
        assert!(r.is_clear());
    }

    #[test]
    fn factor_counts() {
        let q = Rationals;
        assert_eq!(absolute_factor_count(&q, &c("x*y")).unwrap(), 2);
        assert_eq!(absolute_factor_count(&q, &c("x^2 - 2*y^2")).unwrap(), 2);
        assert_eq!(absolute_factor_count(&q, &c("x*z - y^2")).unwrap(), 1);
        assert_eq!(absolute_factor_count(&q, &c("x^2 + y^2")).unwrap(), 2);
        assert_eq!(absolute_factor_count(&q, &c("x*y*z + x^3 + y^3")).unwrap(), 1);
        assert_eq!(absolute_factor_count(&q, &c("x^3 - 2*z^3")).unwrap(), 3);
        assert!(absolute_factor_count(&q, &c("x^2*y")).is_err());
    }
}
