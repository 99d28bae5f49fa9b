//! Condition matrices of schemes on degree-d curves, their solutions, and
//! rank-drop loci of one-parameter families.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::factor::factor_squarefree;
use crate::algebra::field::NfElem;
use crate::algebra::matrix::dot;
use crate::algebra::upoly::interpolate;
use crate::algebra::{ExactMatrix, Field, NumberField, Rational, Rationals, UniPoly};
use crate::error::{domain, Error, Result};
use crate::plane::local::local_coefficient_rows;
use crate::plane::{basis_size, monomial_basis, Eigenspace, PlaneCurve, ProjInvolution};
use crate::scheme::{
    condition_pairs, conditions, frame_from_columns, points_on_line, ProjPoint, Scheme, SchemeItem,
    SingChain, Tangent,
};

/// A linear system of plane curves: degree, scheme, optional symmetry and
/// fixed component, and the assembled condition matrix.
#[derive(Clone, Debug)]
pub struct LinearSystem<E> {
    degree: usize,
    scheme: Scheme<E>,
    symmetry: Option<(ProjInvolution<E>, Eigenspace)>,
    fixed: Option<PlaneCurve<E>>,
    /// Column j is the degree-d curve with coefficient vector `coords[j]`;
    /// `None` means the monomial basis.
    coords: Option<Vec<Vec<E>>>,
    matrix: ExactMatrix<E>,
    kernel: OnceLock<Vec<Vec<E>>>,
}

fn lines_proportional<F: Field>(f: &F, a: &PlaneCurve<F::Elem>, b: &PlaneCurve<F::Elem>) -> bool {
    let va = a.to_coeff_vector(f);
    let vb = b.to_coeff_vector(f);
    (0..3).all(|i| {
        (0..3).all(|j| f.sub(&f.mul(&va[i], &vb[j]), &f.mul(&va[j], &vb[i])) == f.zero())
    })
}

fn same_tangent<F: Field>(f: &F, a: Option<&Tangent<F::Elem>>, b: Option<&Tangent<F::Elem>>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(Tangent::Free), Some(Tangent::Free)) => true,
        (Some(Tangent::Line(x)), Some(Tangent::Line(y))) => lines_proportional(f, x, y),
        _ => false,
    }
}

/// Orbit representatives of a scheme under an involution, checking that
/// the scheme is stable (listed images match, fixed points keep their
/// tangent). Images that are not listed are implied.
pub fn orbit_representatives<F: Field>(
    f: &F,
    scheme: &Scheme<F::Elem>,
    inv: &ProjInvolution<F::Elem>,
) -> Result<Vec<usize>> {
    let items = scheme.items();
    let mut reps = Vec::new();
    for (i, it) in items.iter().enumerate() {
        let img_pt = ProjPoint::new(f, inv.apply_point(f, it.point.coords()))?;
        let img_tan = it.chain.tangent().map(|t| match t {
            Tangent::Line(l) => Tangent::Line(inv.apply_curve(f, l)),
            Tangent::Free => Tangent::Free,
        });
        if img_pt == it.point {
            if !same_tangent(f, it.chain.tangent(), img_tan.as_ref()) {
                return domain(format!(
                    "scheme is not stable under the involution: the tangent at the fixed point {} is moved",
                    it.label
                ));
            }
            reps.push(i);
            continue;
        }
        match items.iter().position(|o| o.point == img_pt) {
            Some(j) => {
                let other = &items[j];
                if other.chain.mults() != it.chain.mults()
                    || !same_tangent(f, other.chain.tangent(), img_tan.as_ref())
                {
                    return domain(format!(
                        "scheme is not stable under the involution: the image of {} does not match {}",
                        it.label, other.label
                    ));
                }
                if j > i {
                    reps.push(i);
                }
            }
            None => reps.push(i),
        }
    }
    Ok(reps)
}

fn multiplication_coords<F: Field>(f: &F, fixed: &PlaneCurve<F::Elem>, residual: &[Vec<F::Elem>], rdeg: usize) -> Vec<Vec<F::Elem>> {
    residual
        .iter()
        .map(|v| {
            let g = PlaneCurve::from_coeff_vector(f, rdeg, v).expect("residual basis vector");
            fixed.mul(f, &g).to_coeff_vector(f)
        })
        .collect()
}

impl<E: Clone + PartialEq + Send + Sync + std::fmt::Debug> LinearSystem<E> {
    pub fn assemble<F: Field<Elem = E>>(
        f: &F,
        d: usize,
        scheme: &Scheme<E>,
        symmetry: Option<(&ProjInvolution<E>, Eigenspace)>,
    ) -> Result<Self> {
        Self::assemble_full(f, d, scheme, symmetry, None)
    }

    /// As `assemble`, additionally requiring `fixed` as a component: the
    /// unknowns are the coefficients of the residual curve of degree
    /// d − deg(fixed) (restricted to the eigenspace when a symmetry is given).
    pub fn assemble_full<F: Field<Elem = E>>(
        f: &F,
        d: usize,
        scheme: &Scheme<E>,
        symmetry: Option<(&ProjInvolution<E>, Eigenspace)>,
        fixed: Option<&PlaneCurve<E>>,
    ) -> Result<Self> {
        let items: Vec<&SchemeItem<E>> = match symmetry {
            Some((inv, _)) => orbit_representatives(f, scheme, inv)?
                .into_iter()
                .map(|i| &scheme.items()[i])
                .collect(),
            None => scheme.items().iter().collect(),
        };
        let rdeg = match fixed {
            Some(c) if c.degree() > d => return domain("fixed component has degree above the system degree"),
            Some(c) => d - c.degree(),
            None => d,
        };
        let residual_basis: Option<Vec<Vec<E>>> = match symmetry {
            Some((inv, which)) => Some(inv.eigenbasis(f, rdeg, which)?),
            None => None,
        };
        let coords = match (fixed, residual_basis) {
            (None, b) => b,
            (Some(c), Some(b)) => Some(multiplication_coords(f, c, &b, rdeg)),
            (Some(c), None) => {
                let unit: Vec<Vec<E>> = (0..basis_size(rdeg))
                    .map(|i| {
                        let mut v = vec![f.zero(); basis_size(rdeg)];
                        v[i] = f.one();
                        v
                    })
                    .collect();
                Some(multiplication_coords(f, c, &unit, rdeg))
            }
        };
        let per_item: Vec<Result<Vec<Vec<E>>>> = items
            .par_iter()
            .map(|it| conditions(f, d, &it.point, &it.chain))
            .collect();
        let mut rows = Vec::new();
        for r in per_item {
            rows.extend(r?);
        }
        let ncols = coords.as_ref().map_or(basis_size(d), |c| c.len());
        let rows: Vec<Vec<E>> = match &coords {
            None => rows,
            Some(cs) => rows
                .par_iter()
                .map(|r| cs.iter().map(|c| dot(f, r, c)).collect())
                .collect(),
        };
        let matrix = ExactMatrix::from_rows(f, rows, ncols)?;
        Ok(LinearSystem {
            degree: d,
            scheme: scheme.clone(),
            symmetry: symmetry.map(|(i, w)| (i.clone(), w)),
            fixed: fixed.cloned(),
            coords,
            matrix,
            kernel: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn scheme(&self) -> &Scheme<E> {
        &self.scheme
    }

    pub fn symmetry(&self) -> Option<&(ProjInvolution<E>, Eigenspace)> {
        self.symmetry.as_ref()
    }

    pub fn fixed_component(&self) -> Option<&PlaneCurve<E>> {
        self.fixed.as_ref()
    }

    pub fn matrix(&self) -> &ExactMatrix<E> {
        &self.matrix
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        match self.kernel.get() {
            Some(k) => self.cols() - k.len(),
            None => self.matrix.rank(f),
        }
    }

    fn kernel<F: Field<Elem = E>>(&self, f: &F) -> &Vec<Vec<E>> {
        self.kernel.get_or_init(|| self.matrix.kernel_basis(f))
    }

    /// Projective dimension; −1 means empty.
    pub fn dimension<F: Field<Elem = E>>(&self, f: &F) -> i64 {
        self.kernel(f).len() as i64 - 1
    }

    fn to_curve<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<PlaneCurve<E>> {
        let full: Vec<E> = match &self.coords {
            None => v.to_vec(),
            Some(cs) => {
                let mut acc = vec![f.zero(); basis_size(self.degree)];
                for (c, col) in v.iter().zip(cs) {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(col) {
                        *a = f.add(a, &f.mul(c, x));
                    }
                }
                acc
            }
        };
        let curve = PlaneCurve::from_coeff_vector(f, self.degree, &full)?;
        Ok(normalize_generic(f, &curve))
    }

    /// Kernel basis as curves (integer-normalized over ℚ), each re-checked
    /// against every condition.
    pub fn solve_basis<F: Field<Elem = E>>(&self, f: &F) -> Result<Vec<PlaneCurve<E>>> {
        let mut out = Vec::new();
        for v in self.kernel(f) {
            let r = self.matrix.mul_vec(f, v);
            if r.iter().any(|c| !f.is_zero(c)) {
                return Err(Error::Consistency("kernel vector fails re-substitution".into()));
            }
            out.push(self.to_curve(f, v)?);
        }
        self.recheck(f, &out)?;
        Ok(out)
    }

    fn recheck<F: Field<Elem = E>>(&self, f: &F, curves: &[PlaneCurve<E>]) -> Result<()> {
        for it in self.scheme.items() {
            let rows = conditions(f, self.degree, &it.point, &it.chain)?;
            for c in curves {
                let v = c.to_coeff_vector(f);
                if rows.iter().any(|r| !f.is_zero(&dot(f, r, &v))) {
                    return Err(Error::Consistency(format!(
                        "solution violates the conditions at {}",
                        it.label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn solve_unique<F: Field<Elem = E>>(&self, f: &F) -> Result<PlaneCurve<E>> {
        let dim = self.dimension(f);
        if dim != 0 {
            return Err(Error::Contract(format!(
                "a unique curve needs dimension 0, but the system has dimension {dim}"
            )));
        }
        Ok(self.solve_basis(f)?.remove(0))
    }
}

/// Integer normalization over ℚ; leading coefficient 1 otherwise.
pub fn normalize_generic<F: Field>(f: &F, c: &PlaneCurve<F::Elem>) -> PlaneCurve<F::Elem> {
    if c.is_zero() {
        return c.clone();
    }
    if f.characteristic() == 0 && f.degree() == 1 {
        let q = c.map(&Rationals, |x| f.as_rational(x).unwrap());
        if let Ok(n) = q.normalize_integer() {
            return n.map(f, |x| f.from_rational(x).unwrap());
        }
    }
    let lead = c.terms().next().unwrap().1.clone();
    let inv = f.inv(&lead).unwrap();
    c.scale(f, &inv)
}

// ---------------------------------------------------------------------------
// rank-drop loci

/// A scheme item whose point moves affinely: p(t) = base + t·dir.
#[derive(Clone, Debug)]
pub struct MovingItem {
    pub label: String,
    pub base: [Rational; 3],
    pub dir: [Rational; 3],
    pub chain: SingChain<Rational>,
}

/// A constant scheme plus one moving item.
#[derive(Clone, Debug)]
pub struct ParamScheme {
    pub fixed: Scheme<Rational>,
    pub moving: MovingItem,
}

impl ParamScheme {
    /// The full scheme over a field containing the parameter value t0.
    pub fn scheme_at<F: Field>(&self, f: &F, t0: &F::Elem) -> Result<Scheme<F::Elem>> {
        let lift = |c: &Rational| f.from_rational(c).unwrap();
        let mut s = self.fixed.map(f, lift)?;
        let mv = &self.moving;
        let p: [F::Elem; 3] = std::array::from_fn(|i| f.add(&lift(&mv.base[i]), &f.mul(t0, &lift(&mv.dir[i]))));
        s.push(f, mv.label.clone(), ProjPoint::new(f, p)?, mv.chain.map(f, lift))?;
        Ok(s)
    }
}

/// One irreducible factor of a rank-drop locus.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusFactor {
    /// Monic irreducible factor over ℚ.
    pub factor: UniPoly<Rational>,
    /// Exact re-substitution confirmed a nonzero solution at its roots.
    pub certified: bool,
    /// Set when the specialization violates the scheme's hypotheses (the
    /// moving point meets another scheme point) or when the general solution
    /// there is not a reduced, absolutely irreducible curve with exactly the
    /// scheme.
    pub degenerate: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Locus {
    /// The specialized system is nonempty for every parameter value.
    Everything,
    Polynomial {
        /// Squarefree part of the gcd of the maximal minors.
        raw: UniPoly<Rational>,
        factors: Vec<LocusFactor>,
    },
}

impl Locus {
    /// Product of the certified, non-degenerate factors.
    pub fn essential(&self) -> Option<UniPoly<Rational>> {
        match self {
            Locus::Everything => None,
            Locus::Polynomial { factors, .. } => {
                let q = Rationals;
                Some(
                    factors
                        .iter()
                        .filter(|f| f.certified && f.degenerate.is_none())
                        .fold(UniPoly::constant(&q, q.one()), |acc, f| acc.mul(&q, &f.factor)),
                )
            }
        }
    }

    pub fn essential_factors(&self) -> Vec<&LocusFactor> {
        match self {
            Locus::Everything => Vec::new(),
            Locus::Polynomial { factors, .. } => factors
                .iter()
                .filter(|f| f.certified && f.degenerate.is_none())
                .collect(),
        }
    }
}

/// Frame A(t) = A0 + t·A1, affine in the parameter.
#[derive(Clone, Debug)]
struct AffineFrame {
    a0: ExactMatrix<Rational>,
    a1: ExactMatrix<Rational>,
}

impl AffineFrame {
    fn at(&self, t: &Rational) -> ExactMatrix<Rational> {
        let q = Rationals;
        let mut m = self.a0.clone();
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, q.add(self.a0.get(i, j), &q.mul(t, self.a1.get(i, j))));
            }
        }
        m
    }

    fn at_nf(&self, k: &NumberField, t: &NfElem) -> ExactMatrix<NfElem> {
        let mut m = ExactMatrix::zeros(k, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let a = k.from_rational(self.a0.get(i, j)).unwrap();
                let b = k.from_rational(self.a1.get(i, j)).unwrap();
                m.set(i, j, k.add(&a, &k.mul(t, &b)));
            }
        }
        m
    }

    /// det A(t) as a polynomial (degree ≤ 3).
    fn det_poly(&self) -> UniPoly<Rational> {
        let q = Rationals;
        let xs: Vec<Rational> = (0..4).map(|i| q.from_int(i)).collect();
        let ys: Vec<Rational> = xs.iter().map(|t| self.at(t).det(&q)).collect();
        interpolate(&q, &xs, &ys).unwrap()
    }
}

fn unit_q(i: usize) -> [Rational; 3] {
    let q = Rationals;
    let mut v = [q.zero(), q.zero(), q.zero()];
    v[i] = q.one();
    v
}

fn det3_q(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    let q = Rationals;
    let m = frame_from_columns(&q, [a, b, c]);
    m.det(&q)
}

fn moving_frame(item: &MovingItem) -> Result<AffineFrame> {
    let q = Rationals;
    let zero3 = [q.zero(), q.zero(), q.zero()];
    let (c0s, c1s): (Vec<[Rational; 3]>, Vec<[Rational; 3]>) = match item.chain.tangent() {
        Some(Tangent::Free) => {
            return Err(Error::Unsupported("a moving point with a free tangent".into()));
        }
        Some(Tangent::Line(l)) => {
            let lc = l.to_coeff_vector(&q);
            let lc = [lc[0].clone(), lc[1].clone(), lc[2].clone()];
            let on = |p: &[Rational; 3]| dot(&q, &lc, p);
            if !q.is_zero(&on(&item.base)) || !q.is_zero(&on(&item.dir)) {
                return domain(format!(
                    "tangent of {} does not contain the whole moving point's path",
                    item.label
                ));
            }
            let mut c0s: Vec<[Rational; 3]> = (0..3).map(unit_q).filter(|e| q.is_zero(&on(e))).collect();
            c0s.extend(points_on_line(&q, &lc));
            let c1s = (0..3).map(unit_q).filter(|e| !q.is_zero(&on(e))).collect();
            (c0s, c1s)
        }
        None => ((0..3).map(unit_q).collect(), (0..3).map(unit_q).collect()),
    };
    let mut best: Option<(u8, AffineFrame)> = None;
    for c0 in &c0s {
        for c1 in &c1s {
            let d0 = det3_q(c0, c1, &item.base);
            let d1 = det3_q(c0, c1, &item.dir);
            let score = match (q.is_zero(&d0), q.is_zero(&d1)) {
                (false, true) => 0,
                (_, false) => 1,
                (true, true) => continue,
            };
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((
                    score,
                    AffineFrame {
                        a0: frame_from_columns(&q, [c0, c1, &item.base]),
                        a1: frame_from_columns(&q, [&zero3, &zero3, &item.dir]),
                    },
                ));
            }
        }
    }
    best.map(|(_, f)| f)
        .ok_or_else(|| Error::Consistency(format!("no moving frame for {}", item.label)))
}

/// Generic rank-drop engine: the system is `constant` rows plus rows
/// P(t) whose entries are polynomials of degree ≤ `tdeg` in t.
struct ParamRows<'a> {
    constant: &'a ExactMatrix<Rational>,
    frame: AffineFrame,
    d: usize,
    pairs: Vec<(usize, usize)>,
    tdeg: usize,
}

impl ParamRows<'_> {
    fn rows_q(&self, t: &Rational) -> Vec<Vec<Rational>> {
        local_coefficient_rows(&Rationals, self.d, &self.frame.at(t), &self.pairs)
    }

    fn rows_nf(&self, k: &NumberField, t: &NfElem) -> Vec<Vec<NfElem>> {
        local_coefficient_rows(k, self.d, &self.frame.at_nf(k, t), &self.pairs)
    }
}

fn project(rows: &[Vec<Rational>], kernel: &[Vec<Rational>]) -> ExactMatrix<Rational> {
    let q = Rationals;
    let n: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| kernel.iter().map(|k| dot(&q, r, k)).collect())
        .collect();
    ExactMatrix::from_rows(&q, n, kernel.len()).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn rank_drop_engine(
    pr: &ParamRows<'_>,
    degenerate: impl Fn(&UniPoly<Rational>) -> Option<String>,
) -> Result<(Locus, Vec<Vec<Rational>>)> {
    let q = Rationals;
    let kernel = pr.constant.kernel_basis(&q);
    let k = kernel.len();
    if k == 0 {
        let locus = Locus::Polynomial {
            raw: UniPoly::constant(&q, q.one()),
            factors: Vec::new(),
        };
        return Ok((locus, kernel));
    }
    let r1 = pr.pairs.len();
    if r1 < k {
        return Ok((Locus::Everything, kernel));
    }
    // row combinations whose k×k determinants generate the minors' gcd
    let selections: Vec<Vec<Vec<Rational>>> = if binomial(r1, k) <= 20 {
        combos(r1, k)
            .into_iter()
            .map(|c| {
                c.iter()
                    .map(|&i| {
                        let mut v = vec![q.zero(); r1];
                        v[i] = q.one();
                        v
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x10c05);
        (0..4)
            .map(|_| {
                (0..k)
                    .map(|_| (0..r1).map(|_| q.from_int(rng.gen_range(-9..=9))).collect())
                    .collect()
            })
            .collect()
    };
    let npts = k * pr.tdeg + 1;
    let xs: Vec<Rational> = (0..npts).map(|i| q.from_int(i as i64)).collect();
    let samples: Vec<Vec<Rational>> = xs
        .par_iter()
        .map(|t| {
            let n = project(&pr.rows_q(t), &kernel);
            selections
                .iter()
                .map(|sel| {
                    let s = ExactMatrix::from_rows(&q, sel.clone(), r1).unwrap();
                    s.mul(&q, &n).det(&q)
                })
                .collect()
        })
        .collect();
    let mut g = UniPoly::<Rational>::zero();
    for j in 0..selections.len() {
        let ys: Vec<Rational> = samples.iter().map(|s| s[j].clone()).collect();
        let minor = interpolate(&q, &xs, &ys)?;
        g = if g.is_zero() { minor } else { g.gcd(&q, &minor) };
        if g.degree() == Some(0) {
            break;
        }
    }
    if g.is_zero() {
        return Ok((Locus::Everything, kernel));
    }
    let raw = g.squarefree_part(&q)?;
    let mut factors = Vec::new();
    for fac in factor_squarefree(&raw)? {
        let certified = certify(pr, &kernel, &fac)?;
        let degenerate = degenerate(&fac);
        factors.push(LocusFactor {
            factor: fac,
            certified,
            degenerate,
        });
    }
    Ok((Locus::Polynomial { raw, factors }, kernel))
}

/// Exact check that the specialized system has a nonzero solution at the
/// roots of `fac`.
fn certify(pr: &ParamRows<'_>, kernel: &[Vec<Rational>], fac: &UniPoly<Rational>) -> Result<bool> {
    let q = Rationals;
    let k = kernel.len();
    if fac.degree() == Some(1) {
        let t0 = q.neg(&fac.coeffs()[0]);
        let n = project(&pr.rows_q(&t0), kernel);
        return Ok(n.rank(&q) < k);
    }
    let nf = NumberField::new(fac.coeffs())?;
    let theta = nf.generator();
    let rows = pr.rows_nf(&nf, &theta);
    let kn: Vec<Vec<NfElem>> = kernel
        .iter()
        .map(|v| v.iter().map(|c| nf.from_rational(c).unwrap()).collect())
        .collect();
    let n: Vec<Vec<NfElem>> = rows
        .iter()
        .map(|r| kn.iter().map(|kv| dot(&nf, r, kv)).collect())
        .collect();
    let n = ExactMatrix::from_rows(&nf, n, k)?;
    Ok(n.rank(&nf) < k)
}

/// Solutions of the specialized system at t0 (rows already specialized),
/// combined into one general member.
fn general_solution<F: Field>(
    f: &F,
    d: usize,
    kernel: &[Vec<Rational>],
    rows: &[Vec<F::Elem>],
) -> Result<Option<PlaneCurve<F::Elem>>> {
    let kn: Vec<Vec<F::Elem>> = kernel
        .iter()
        .map(|v| v.iter().map(|c| f.from_rational(c).unwrap()).collect())
        .collect();
    let n: Vec<Vec<F::Elem>> = rows
        .iter()
        .map(|r| kn.iter().map(|kv| dot(f, r, kv)).collect())
        .collect();
    let nulls = ExactMatrix::from_rows(f, n, kn.len())?.kernel_basis(f);
    if nulls.is_empty() {
        return Ok(None);
    }
    let mut coeffs = vec![f.zero(); basis_size(d)];
    for (i, nv) in nulls.iter().enumerate() {
        let w = f.from_int(i as i64 + 1);
        for (c, kv) in nv.iter().zip(&kn) {
            let s = f.mul(&w, c);
            for (acc, x) in coeffs.iter_mut().zip(kv) {
                *acc = f.add(acc, &f.mul(&s, x));
            }
        }
    }
    Ok(Some(PlaneCurve::from_coeff_vector(f, d, &coeffs)?))
}

fn classify_at<F: Field>(
    f: &F,
    ps: &ParamScheme,
    pr: &ParamRows<'_>,
    kernel: &[Vec<Rational>],
    rows: Vec<Vec<F::Elem>>,
    t0: &F::Elem,
) -> Result<Option<String>> {
    match general_solution(f, pr.d, kernel, &rows)? {
        None => Ok(Some("no solution on re-solving".into())),
        Some(curve) => crate::verify::solution_defect(f, &curve, &ps.scheme_at(f, t0)?),
    }
}

fn classify_factor(ps: &ParamScheme, pr: &ParamRows<'_>, kernel: &[Vec<Rational>], fac: &UniPoly<Rational>) -> Result<Option<String>> {
    let q = Rationals;
    if fac.degree() == Some(1) {
        let t0 = q.neg(&fac.coeffs()[0]);
        classify_at(&q, ps, pr, kernel, pr.rows_q(&t0), &t0)
    } else {
        let nf = NumberField::new(fac.coeffs())?;
        let theta = nf.generator();
        classify_at(&nf, ps, pr, kernel, pr.rows_nf(&nf, &theta), &theta)
    }
}

/// Parameter values t at which the family's specialized system acquires a
/// nonzero solution. Every factor is certified by exact re-substitution and
/// flagged when the moving point meets another scheme point or when the
/// general solution there is degenerate (repeated or reducible components,
/// or singularities other than the scheme's).
pub fn rank_drop_locus(d: usize, ps: &ParamScheme) -> Result<Locus> {
    let q = Rationals;
    let constant = LinearSystem::assemble(&q, d, &ps.fixed, None)?;
    let frame = moving_frame(&ps.moving)?;
    let det = frame.det_poly();
    let mults = ps.moving.chain.mults();
    let pr = ParamRows {
        constant: constant.matrix(),
        frame,
        d,
        pairs: condition_pairs(mults[0], mults.get(1).copied()),
        tdeg: d,
    };
    let fixed = ps.fixed.clone();
    let mv = ps.moving.clone();
    let (mut locus, kernel) = rank_drop_engine(&pr, |fac| {
        if fac.degree() == Some(1) {
            let t0 = q.neg(&fac.coeffs()[0]);
            let p: Vec<Rational> = (0..3).map(|i| &mv.base[i] + &t0 * &mv.dir[i]).collect();
            if let Ok(pt) = ProjPoint::new(&q, [p[0].clone(), p[1].clone(), p[2].clone()]) {
                if let Some(it) = fixed.items().iter().find(|it| it.point == pt) {
                    return Some(format!("{} coincides with {}", mv.label, it.label));
                }
            } else {
                return Some(format!("{} is undefined", mv.label));
            }
        }
        if det.rem(&q, fac).is_zero() {
            return Some("local frame degenerates".into());
        }
        None
    })?;
    if let Locus::Polynomial { factors, .. } = &mut locus {
        let flags: Vec<Result<Option<String>>> = factors
            .par_iter()
            .map(|lf| {
                if lf.certified && lf.degenerate.is_none() {
                    classify_factor(ps, &pr, &kernel, &lf.factor)
                } else {
                    Ok(lf.degenerate.clone())
                }
            })
            .collect();
        for (lf, flag) in factors.iter_mut().zip(flags) {
            lf.degenerate = flag?;
        }
    }
    Ok(locus)
}

/// How a free tangent can be resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum TangentBranch {
    /// A rational tangent line, with the resulting system dimension.
    Line(PlaneCurve<Rational>, i64),
    /// Tangent directions col0 + s·col1 for s a root of the polynomial
    /// (irreducible, degree ≥ 2).
    Algebraic {
        poly: UniPoly<Rational>,
        base: [Rational; 3],
        dir: [Rational; 3],
    },
    /// Every direction works.
    Any,
}

/// Resolves the free tangent of item `label`: finds the tangent directions
/// for which the system (with that tangent assigned) is nonempty.
pub fn free_tangent_branches(d: usize, scheme: &Scheme<Rational>, label: &str) -> Result<Vec<TangentBranch>> {
    let q = Rationals;
    let item = scheme
        .find(label)
        .ok_or_else(|| Error::Domain(format!("no scheme item {label}")))?;
    if !item.chain.has_free_tangent() {
        return domain(format!("{label} has no free tangent"));
    }
    if scheme.items().iter().any(|it| it.label != label && it.chain.has_free_tangent()) {
        return Err(Error::Unsupported("more than one free tangent".into()));
    }
    let rest = scheme.without(label);
    let constant = LinearSystem::assemble(&q, d, &rest, None)?;
    let p = item.point.coords().clone();
    let last = p.iter().rposition(|c| !q.is_zero(c)).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != last).collect();
    let w0 = unit_q(others[0]);
    let w1 = unit_q(others[1]);
    let zero3 = [q.zero(), q.zero(), q.zero()];
    let mults = item.chain.mults();
    let pairs = condition_pairs(mults[0], mults.get(1).copied());
    let tdeg = pairs.iter().map(|(a, _)| *a).max().unwrap_or(0);
    let pr = ParamRows {
        constant: constant.matrix(),
        frame: AffineFrame {
            a0: frame_from_columns(&q, [&w0, &w1, &p]),
            a1: frame_from_columns(&q, [&w1, &zero3, &zero3]),
        },
        d,
        pairs: pairs.clone(),
        tdeg: tdeg.max(1),
    };
    let line_through = |dirv: &[Rational; 3]| -> Result<PlaneCurve<Rational>> {
        // the line spanned by p and dirv
        let m = ExactMatrix::from_rows(&q, vec![p.to_vec(), dirv.to_vec()], 3)?;
        let k = m.kernel_basis(&q);
        let l = PlaneCurve::linear(&q, [k[0][0].clone(), k[0][1].clone(), k[0][2].clone()]);
        l.normalize_integer()
    };
    let assigned_dim = |line: &PlaneCurve<Rational>| -> Result<i64> {
        let chain = SingChain::chain(mults[0], mults[1], Tangent::Line(line.clone()))?;
        let mut s = rest.clone();
        s.push(&q, label, item.point.clone(), chain)?;
        Ok(LinearSystem::assemble(&q, d, &s, None)?.dimension(&q))
    };
    let mut out = Vec::new();
    match rank_drop_engine(&pr, |_| None)?.0 {
        Locus::Everything => out.push(TangentBranch::Any),
        Locus::Polynomial { factors, .. } => {
            for fac in factors.into_iter().filter(|f| f.certified) {
                if fac.factor.degree() == Some(1) {
                    let s0 = q.neg(&fac.factor.coeffs()[0]);
                    let dirv: [Rational; 3] = std::array::from_fn(|i| &w0[i] + &s0 * &w1[i]);
                    let line = line_through(&dirv)?;
                    let dim = assigned_dim(&line)?;
                    out.push(TangentBranch::Line(line, dim));
                } else {
                    out.push(TangentBranch::Algebraic {
                        poly: fac.factor,
                        base: w0.clone(),
                        dir: w1.clone(),
                    });
                }
            }
            // the direction w1 itself (s = ∞)
            let line = line_through(&w1)?;
            let dim = assigned_dim(&line)?;
            if dim >= 0 {
                out.push(TangentBranch::Line(line, dim));
            }
        }
    }
    Ok(out)
}

/// Monomial labels of the canonical basis of degree d (for reports).
pub fn basis_labels(d: usize) -> Vec<String> {
    monomial_basis(d).iter().map(|m| m.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint<Rational> {
        ProjPoint::new(&Rationals, [int(a), int(b), int(c)]).unwrap()
    }

    fn simple_points(pts: &[(i64, i64, i64)]) -> Scheme<Rational> {
        let mut s = Scheme::new();
        for (i, p) in pts.iter().enumerate() {
            s.push(&Rationals, format!("p{i}"), pt(p.0, p.1, p.2), SingChain::ordinary(1).unwrap())
                .unwrap();
        }
        s
    }

    #[test]
    fn lines_through_origin() {
        let q = Rationals;
        let s = simple_points(&[(0, 0, 1)]);
        let ls = LinearSystem::assemble(&q, 1, &s, None).unwrap();
        assert_eq!((ls.matrix().rows(), ls.cols()), (1, 3));
        let basis: Vec<String> = ls.solve_basis(&q).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(basis, ["x", "y"]);
    }

    #[test]
    fn six_points_no_conic() {
        let q = Rationals;
        let s = simple_points(&[(1, 1, 1), (1, -1, 1), (1, 0, 0), (0, 1, 1), (0, -1, 1), (-2, 0, 1)]);
        let ls = LinearSystem::assemble(&q, 2, &s, None).unwrap();
        assert_eq!((ls.matrix().rows(), ls.cols()), (6, 6));
        assert_eq!(ls.dimension(&q), -1);
        assert!(ls.solve_basis(&q).unwrap().is_empty());
        assert!(matches!(ls.solve_unique(&q), Err(Error::Contract(_))));
    }

    #[test]
    fn symmetric_stability_errors() {
        let q = Rationals;
        let inv = ProjInvolution::diagonal(&q, [int(1), int(-1), int(1)]).unwrap();
        let mut s = Scheme::new();
        // fixed point on y = 0 with a tangent that is not φ-invariant
        let line = PlaneCurve::parse_expr("x + y - 2*z").unwrap();
        s.push(&q, "q6", pt(2, 0, 1), SingChain::chain(2, 2, Tangent::Line(line)).unwrap()).unwrap();
        let err = LinearSystem::assemble(&q, 6, &s, Some((&inv, Eigenspace::Plus))).unwrap_err();
        assert!(err.to_string().contains("q6"));
        // listed image with a different multiplicity
        let s = Scheme::new()
            .with(&q, "a", pt(1, 1, 1), SingChain::ordinary(2).unwrap())
            .unwrap()
            .with(&q, "b", pt(1, -1, 1), SingChain::ordinary(3).unwrap())
            .unwrap();
        let err = LinearSystem::assemble(&q, 6, &s, Some((&inv, Eigenspace::Plus))).unwrap_err();
        assert!(err.to_string().contains("image of a"));
    }

    #[test]
    fn node_moving_on_a_line() {
        // conics through [±1,±1,1] singular at [t,0,1]: the line pair
        // (x-y)(x+y) at t = 0, which is reducible and so degenerate;
        // (y-z)(y+z) is singular at [1,0,0], i.e. t = ∞
        let q = Rationals;
        let fixed = simple_points(&[(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)]);
        let ps = ParamScheme {
            fixed,
            moving: MovingItem {
                label: "n".into(),
                base: [int(0), int(0), int(1)],
                dir: [int(1), int(0), int(0)],
                chain: SingChain::ordinary(2).unwrap(),
            },
        };
        let locus = rank_drop_locus(2, &ps).unwrap();
        let Locus::Polynomial { raw, factors } = &locus else { panic!("{locus:?}") };
        let t = UniPoly::new(&q, vec![int(0), int(1)]);
        assert_eq!(raw, &t);
        assert_eq!(factors.len(), 1);
        assert!(factors[0].certified);
        assert_eq!(factors[0].degenerate.as_deref(), Some("splits into 2 absolutely irreducible components"));
        assert_eq!(locus.essential().unwrap(), UniPoly::new(&q, vec![int(1)]));
    }

    #[test]
    fn everything_locus() {
        // lines through a moving point: always solvable
        let ps = ParamScheme {
            fixed: Scheme::new(),
            moving: MovingItem {
                label: "m".into(),
                base: [int(0), int(0), int(1)],
                dir: [int(1), int(0), int(0)],
                chain: SingChain::ordinary(1).unwrap(),
            },
        };
        assert_eq!(rank_drop_locus(1, &ps).unwrap(), Locus::Everything);
    }

    #[test]
    fn free_tangent_cusp_directions() {
        // conics through 4 points with [1,1] at the origin: the tangent at
        // the origin must be that of the unique conic through the 5 points
        let q = Rationals;
        let mut s = simple_points(&[(1, 1, 1), (1, -1, 1), (2, 1, 1), (-1, 3, 1)]);
        s.push(&q, "o", pt(0, 0, 1), SingChain::chain(1, 1, Tangent::Free).unwrap()).unwrap();
        let br = free_tangent_branches(2, &s, "o").unwrap();
        assert!(!br.is_empty());
        for b in br {
            if let TangentBranch::Line(_, dim) = b {
                assert!(dim >= 0);
            }
        }
    }
}
