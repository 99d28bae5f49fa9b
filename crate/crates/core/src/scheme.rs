//! Singularity requirements (ordinary points and length-two chains of
//! infinitely near points) and the linear conditions they impose.

use std::fmt;

use crate::algebra::{ExactMatrix, Field};
use crate::error::{domain, Error, Result};
use crate::plane::local::local_coefficient_rows;
use crate::plane::{basis_size, PlaneCurve};

/// Projective point, scaled so its last nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint<E> {
    coords: [E; 3],
}

impl<E: Clone + PartialEq + Send + Sync> ProjPoint<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, coords: [E; 3]) -> Result<Self> {
        for c in &coords {
            f.validate(c)?;
        }
        let last = coords
            .iter()
            .rposition(|c| !f.is_zero(c))
            .ok_or_else(|| Error::Domain("(0,0,0) is not a projective point".into()))?;
        let inv = f.inv(&coords[last])?;
        let coords = coords.map(|c| f.mul(&c, &inv));
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[E; 3] {
        &self.coords
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl Fn(&E) -> G::Elem) -> Result<ProjPoint<G::Elem>> {
        ProjPoint::new(g, [phi(&self.coords[0]), phi(&self.coords[1]), phi(&self.coords[2])])
    }

    pub fn fmt_with<F: Field<Elem = E>>(&self, f: &F) -> String {
        format!(
            "[{}, {}, {}]",
            f.fmt_elem(&self.coords[0]),
            f.fmt_elem(&self.coords[1]),
            f.fmt_elem(&self.coords[2])
        )
    }
}

/// Direction of the infinitely near point of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Tangent<E> {
    /// A line through the point.
    Line(PlaneCurve<E>),
    /// Unknown direction, to be determined.
    Free,
}

/// Multiplicity requirement at a proper point: `[m]` or `[m1, m2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingChain<E> {
    mults: Vec<u32>,
    tangent: Option<Tangent<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> SingChain<E> {
    pub fn ordinary(m: u32) -> Result<Self> {
        if m == 0 {
            return domain("multiplicity must be positive");
        }
        Ok(SingChain {
            mults: vec![m],
            tangent: None,
        })
    }

    pub fn chain(m1: u32, m2: u32, tangent: Tangent<E>) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return domain("multiplicities must be positive");
        }
        if m2 > m1 {
            return domain(format!("chain [{m1},{m2}] is not monotone"));
        }
        Ok(SingChain {
            mults: vec![m1, m2],
            tangent: Some(tangent),
        })
    }

    pub fn from_mults(mults: &[u32], tangent: Option<Tangent<E>>) -> Result<Self> {
        match (mults, tangent) {
            ([m], None) => Self::ordinary(*m),
            ([_], Some(_)) => domain("a tangent is only meaningful for a chain of length 2"),
            ([m1, m2], Some(t)) => Self::chain(*m1, *m2, t),
            ([_, _], None) => domain("a chain of length 2 needs a tangent (a line or `free`)"),
            _ => domain(format!("chains of length {} are not supported", mults.len())),
        }
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn tangent(&self) -> Option<&Tangent<E>> {
        self.tangent.as_ref()
    }

    pub fn tangent_line(&self) -> Option<&PlaneCurve<E>> {
        match &self.tangent {
            Some(Tangent::Line(l)) => Some(l),
            _ => None,
        }
    }

    pub fn has_free_tangent(&self) -> bool {
        matches!(self.tangent, Some(Tangent::Free))
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl Fn(&E) -> G::Elem) -> SingChain<G::Elem> {
        SingChain {
            mults: self.mults.clone(),
            tangent: self.tangent.as_ref().map(|t| match t {
                Tangent::Line(l) => Tangent::Line(l.map(g, &phi)),
                Tangent::Free => Tangent::Free,
            }),
        }
    }
}

impl<E> fmt::Display for SingChain<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.mults.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", m.join(","))
    }
}

/// One requirement: a named proper point with its chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeItem<E> {
    pub label: String,
    pub point: ProjPoint<E>,
    pub chain: SingChain<E>,
}

/// List of singularity requirements at pairwise distinct proper points.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Scheme<E> {
    items: Vec<SchemeItem<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> Scheme<E> {
    pub fn new() -> Self {
        Scheme { items: Vec::new() }
    }

    /// Adds an item; rejects duplicate points and tangents missing the point.
    pub fn push<F: Field<Elem = E>>(
        &mut self,
        f: &F,
        label: impl Into<String>,
        point: ProjPoint<E>,
        chain: SingChain<E>,
    ) -> Result<()> {
        let label = label.into();
        if let Some(other) = self.items.iter().find(|it| it.point == point) {
            return domain(format!(
                "points {} and {label} coincide at {}",
                other.label,
                point.fmt_with(f)
            ));
        }
        if let Some(line) = chain.tangent_line() {
            check_tangent(f, &point, line, &label)?;
        }
        self.items.push(SchemeItem { label, point, chain });
        Ok(())
    }

    pub fn with<F: Field<Elem = E>>(
        mut self,
        f: &F,
        label: impl Into<String>,
        point: ProjPoint<E>,
        chain: SingChain<E>,
    ) -> Result<Self> {
        self.push(f, label, point, chain)?;
        Ok(self)
    }

    pub fn items(&self) -> &[SchemeItem<E>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn without(&self, label: &str) -> Self {
        Scheme {
            items: self.items.iter().filter(|it| it.label != label).cloned().collect(),
        }
    }

    pub fn find(&self, label: &str) -> Option<&SchemeItem<E>> {
        self.items.iter().find(|it| it.label == label)
    }

    pub fn map<G: Field>(&self, g: &G, phi: impl Fn(&E) -> G::Elem) -> Result<Scheme<G::Elem>> {
        let mut items = Vec::new();
        for it in &self.items {
            items.push(SchemeItem {
                label: it.label.clone(),
                point: it.point.map(g, &phi)?,
                chain: it.chain.map(g, &phi),
            });
        }
        Ok(Scheme { items })
    }
}

fn check_tangent<F: Field>(f: &F, p: &ProjPoint<F::Elem>, line: &PlaneCurve<F::Elem>, label: &str) -> Result<()> {
    if line.degree() != 1 || line.is_zero() {
        return domain(format!("tangent at {label} is not a line"));
    }
    if !f.is_zero(&line.evaluate(f, p.coords())?) {
        return domain(format!(
            "tangent line {} does not pass through {label} = {}",
            line.to_string_with(f),
            p.fmt_with(f)
        ));
    }
    Ok(())
}

fn line_coeffs<F: Field>(f: &F, line: &PlaneCurve<F::Elem>) -> [F::Elem; 3] {
    use crate::plane::Monomial;
    [
        line.coeff(f, &Monomial::new(1, 0, 0)),
        line.coeff(f, &Monomial::new(0, 1, 0)),
        line.coeff(f, &Monomial::new(0, 0, 1)),
    ]
}

fn unit<F: Field>(f: &F, i: usize) -> [F::Elem; 3] {
    let mut v = [f.zero(), f.zero(), f.zero()];
    v[i] = f.one();
    v
}

fn det3<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3], c: &[F::Elem; 3]) -> F::Elem {
    let m = |x: &F::Elem, y: &F::Elem| f.mul(x, y);
    let t0 = f.sub(&m(&b[1], &c[2]), &m(&b[2], &c[1]));
    let t1 = f.sub(&m(&b[0], &c[2]), &m(&b[2], &c[0]));
    let t2 = f.sub(&m(&b[0], &c[1]), &m(&b[1], &c[0]));
    f.add(&f.sub(&m(&a[0], &t0), &m(&a[1], &t1)), &m(&a[2], &t2))
}

pub(crate) fn frame_from_columns<F: Field>(f: &F, cols: [&[F::Elem; 3]; 3]) -> ExactMatrix<F::Elem> {
    let mut a = ExactMatrix::zeros(f, 3, 3);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            a.set(i, j, col[i].clone());
        }
    }
    a
}

/// Points spanning the given line (as a 2-dimensional subspace).
pub(crate) fn points_on_line<F: Field>(f: &F, l: &[F::Elem; 3]) -> Vec<[F::Elem; 3]> {
    let m = ExactMatrix::from_rows(f, vec![l.to_vec()], 3).expect("1×3");
    m.kernel_basis(f)
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone()])
        .collect()
}

/// Invertible A with A·(0,0,1) = p; with a tangent line, the line pulls back
/// to v = 0 in the chart z = 1 (local coordinates (u, v)).
pub fn local_frame<F: Field>(f: &F, p: &ProjPoint<F::Elem>, tangent: Option<&PlaneCurve<F::Elem>>) -> Result<ExactMatrix<F::Elem>> {
    let pc = p.coords();
    match tangent {
        None => {
            let last = pc.iter().rposition(|c| !f.is_zero(c)).unwrap();
            let others: Vec<usize> = (0..3).filter(|&i| i != last).collect();
            let c0 = unit(f, others[0]);
            let c1 = unit(f, others[1]);
            Ok(frame_from_columns(f, [&c0, &c1, pc]))
        }
        Some(line) => {
            check_tangent(f, p, line, "the point")?;
            let l = line_coeffs(f, line);
            let on_line = points_on_line(f, &l);
            let c1 = (0..3)
                .map(|i| unit(f, i))
                .find(|e| !f.is_zero(&l[e.iter().position(|c| f.is_one(c)).unwrap()]))
                .unwrap();
            for c0 in on_line {
                if !f.is_zero(&det3(f, &c0, &c1, pc)) {
                    return Ok(frame_from_columns(f, [&c0, &c1, pc]));
                }
            }
            Err(Error::Consistency("no frame found for the tangent".into()))
        }
    }
}

/// Exponent pairs (a, b) of u^a v^b whose local coefficients must vanish
/// for multiplicity ≥ m1 at the origin and, when `m2` is given, ≥ m2 at the
/// infinitely near point in the direction v = 0. Ordered by local degree.
pub(crate) fn condition_pairs(m1: u32, m2: Option<u32>) -> Vec<(usize, usize)> {
    let m1 = m1 as usize;
    let mut out = Vec::new();
    let top = m1 + m2.unwrap_or(0) as usize;
    for s in 0..top.max(m1) {
        for b in 0..=s {
            let a = s - b;
            let keep = if s < m1 {
                true
            } else {
                let m2 = m2.unwrap() as usize;
                (s - m1) + b < m2
            };
            if keep {
                out.push((a, b));
            }
        }
    }
    out
}

/// Rows for an arbitrary (possibly non-monotone or zero-entry) chain, used
/// for adjoint systems whose virtual multiplicities are not proper chains.
pub(crate) fn raw_conditions<F: Field>(
    f: &F,
    d: usize,
    p: &ProjPoint<F::Elem>,
    mults: &[u32],
    tangent: Option<&PlaneCurve<F::Elem>>,
) -> Result<Vec<Vec<F::Elem>>> {
    let frame = local_frame(f, p, tangent)?;
    let pairs = condition_pairs(mults[0], mults.get(1).copied());
    Ok(local_coefficient_rows(f, d, &frame, &pairs))
}

pub(crate) fn rows_for_frame<F: Field>(
    f: &F,
    d: usize,
    frame: &ExactMatrix<F::Elem>,
    chain: &SingChain<F::Elem>,
) -> Vec<Vec<F::Elem>> {
    let pairs = condition_pairs(chain.mults[0], chain.mults.get(1).copied());
    local_coefficient_rows(f, d, frame, &pairs)
}

/// Linear functionals (rows over the canonical monomial basis of degree d)
/// cutting out the curves with at least the given chain at p.
pub fn conditions<F: Field>(f: &F, d: usize, p: &ProjPoint<F::Elem>, c: &SingChain<F::Elem>) -> Result<Vec<Vec<F::Elem>>> {
    if c.has_free_tangent() {
        return Err(Error::Unsupported(
            "a free tangent is not a linear condition; resolve it with free_tangent_branches".into(),
        ));
    }
    let frame = local_frame(f, p, c.tangent_line())?;
    let rows = rows_for_frame(f, d, &frame, c);
    debug_assert!(rows.iter().all(|r| r.len() == basis_size(d)));
    Ok(rows)
}

/// Σ m_i(m_i+1)/2, less one per free tangent.
pub fn expected_conditions<E>(c: &SingChain<E>) -> i64 {
    let total: i64 = c.mults.iter().map(|&m| (m as i64) * (m as i64 + 1) / 2).sum();
    total - i64::from(matches!(c.tangent, Some(Tangent::Free)))
}

pub fn virtual_dimension<E>(d: usize, s: &Scheme<E>) -> i64 {
    let d = d as i64;
    d * (d + 3) / 2 - s.items.iter().map(|it| expected_conditions(&it.chain)).sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::algebra::{Rational, Rationals};
    use crate::plane::curve::Var;

    type Q = Rational;

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint<Q> {
        ProjPoint::new(&Rationals, [int(a), int(b), int(c)]).unwrap()
    }

    fn line(s: &str) -> PlaneCurve<Q> {
        PlaneCurve::parse_expr(s).unwrap()
    }

    #[test]
    fn point_normalization() {
        let p = ProjPoint::new(&Rationals, [int(2), int(4), int(2)]).unwrap();
        assert_eq!(p, pt(1, 2, 1));
        assert_eq!(pt(3, 0, 0).coords()[0], int(1));
        assert!(ProjPoint::new(&Rationals, [int(0), int(0), int(0)]).is_err());
    }

    fn check_frame(p: &ProjPoint<Q>, t: Option<&PlaneCurve<Q>>) {
        let q = Rationals;
        let a = local_frame(&q, p, t).unwrap();
        assert!(!q.is_zero(&a.det(&q)));
        let img = a.mul_vec(&q, &[int(0), int(0), int(1)]);
        assert_eq!(ProjPoint::new(&q, [img[0].clone(), img[1].clone(), img[2].clone()]).unwrap(), *p);
        if let Some(l) = t {
            // the pulled-back line is a multiple of v
            let g = l.substitute(&q, &a).unwrap().dehomogenize(&q, Var::Z);
            assert_eq!(g.terms().count(), 1);
            assert_eq!(g.terms().next().unwrap().0, &(0, 1));
        }
    }

    #[test]
    fn frame_contracts() {
        check_frame(&pt(0, 0, 1), Some(&line("y")));
        check_frame(&pt(1, 0, 0), None);
        check_frame(&pt(1, 1, 1), Some(&line("x - y")));
        check_frame(&pt(-2, 0, 1), Some(&line("x + 2*z")));
        check_frame(&pt(0, 1, 0), Some(&line("x")));
        assert!(local_frame(&Rationals, &pt(0, 0, 1), Some(&line("x - z"))).is_err());
    }

    #[test]
    fn condition_counts() {
        let q = Rationals;
        let p = pt(1, 1, 1);
        let c4 = SingChain::ordinary(4).unwrap();
        assert_eq!(conditions(&q, 6, &p, &c4).unwrap().len(), 10);
        let c33 = SingChain::chain(3, 3, Tangent::Line(line("x - y"))).unwrap();
        assert_eq!(conditions(&q, 7, &p, &c33).unwrap().len(), 12);
        assert_eq!(conditions(&q, 2, &p, &SingChain::ordinary(1).unwrap()).unwrap().len(), 1);
        assert_eq!(expected_conditions(&c4), 10);
        let c44 = SingChain::chain(4, 4, Tangent::Line(line("x - y"))).unwrap();
        assert_eq!(expected_conditions(&c44), 20);
        assert_eq!(expected_conditions(&c33), 12);
        let free = SingChain::<Q>::chain(3, 3, Tangent::Free).unwrap();
        assert_eq!(expected_conditions(&free), 11);
        assert!(conditions(&q, 7, &p, &free).is_err());
    }

    #[test]
    fn chain_validation() {
        assert!(SingChain::<Q>::chain(2, 3, Tangent::Free).is_err());
        assert!(SingChain::<Q>::from_mults(&[3, 3, 3], Some(Tangent::Free)).is_err());
        assert!(SingChain::<Q>::from_mults(&[3, 3], None).is_err());
        let mut s = Scheme::new();
        s.push(&Rationals, "a", pt(0, 0, 1), SingChain::ordinary(2).unwrap()).unwrap();
        assert!(s.push(&Rationals, "b", pt(0, 0, 2), SingChain::ordinary(2).unwrap()).is_err());
        let bad = SingChain::chain(2, 2, Tangent::Line(line("x - z"))).unwrap();
        assert!(s.push(&Rationals, "c", pt(0, 1, 1), bad).is_err());
    }

    #[test]
    fn tangent_direction_matters() {
        // y - x^2 (dehomogenized) has a [1,1] chain along y = 0 only
        let q = Rationals;
        let f = line("y*z - x^2").to_coeff_vector(&q);
        let p = pt(0, 0, 1);
        let along = SingChain::chain(1, 1, Tangent::Line(line("y"))).unwrap();
        let across = SingChain::chain(1, 1, Tangent::Line(line("x"))).unwrap();
        let vanish = |rows: Vec<Vec<Q>>| rows.iter().all(|r| q.is_zero(&crate::algebra::matrix::dot(&q, r, &f)));
        assert!(vanish(conditions(&q, 2, &p, &along).unwrap()));
        assert!(!vanish(conditions(&q, 2, &p, &across).unwrap()));
    }

    #[test]
    fn virtual_dimension_examples() {
        let q = Rationals;
        let mut s = Scheme::new();
        for (i, (a, b, c)) in [(1, 1, 1), (1, -1, 1), (1, 0, 0), (0, 1, 1), (0, -1, 1), (-2, 0, 1)].iter().enumerate() {
            s.push(&q, format!("q{}", i + 1), pt(*a, *b, *c), SingChain::ordinary(1).unwrap()).unwrap();
        }
        assert_eq!(virtual_dimension(2, &s), -1);
    }
}
