//! Picard-lattice arithmetic on iterated blow-ups of the plane, canonical
//! resolution of double planes, 2-torsion, and the Du Val torsion and
//! Campedelli-obstruction criteria.

use std::fmt;

use serde::Serialize;

use crate::algebra::matrix::z2_kernel;
use crate::algebra::{ExactMatrix, Field};
use crate::configs::DuValConfig;
use crate::error::{domain, Error, Result};
use crate::plane::{basis_size, PlaneCurve};
use crate::scheme::{raw_conditions, ProjPoint, Scheme, SingChain, Tangent};
use crate::system::LinearSystem;
use crate::verify::{absolute_factor_count, geometric_genus, singular_points_on, verify_scheme, RestrictedScan};

// ---------------------------------------------------------------------------
// lattice

/// h·H − Σ e_i·E_i in the total-transform basis of a blow-up of the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub h: i64,
    pub e: Vec<i64>,
}

impl DivisorClass {
    pub fn new(h: i64, e: Vec<i64>) -> Self {
        DivisorClass { h, e }
    }

    pub fn hyperplane(n: usize) -> Self {
        DivisorClass::new(1, vec![0; n])
    }

    /// The exceptional class E_i (coefficient −1 in the `e` convention).
    pub fn exceptional(i: usize, n: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = -1;
        DivisorClass::new(0, e)
    }

    /// K = −3H + Σ E_i.
    pub fn canonical(n: usize) -> Self {
        DivisorClass::new(-3, vec![-1; n])
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.e.len() != other.e.len() {
            return domain(format!(
                "classes live on different blow-ups ({} and {} centers)",
                self.e.len(),
                other.e.len()
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(DivisorClass::new(
            self.h + other.h,
            self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass::new(k * self.h, self.e.iter().map(|x| k * x).collect())
    }

    pub fn is_even(&self) -> bool {
        self.h % 2 == 0 && self.e.iter().all(|x| x % 2 == 0)
    }

    pub fn self_intersection(&self) -> i64 {
        intersect(self, self).expect("same lattice")
    }

    /// p_a = 1 + (D² + K·D)/2.
    pub fn arithmetic_genus(&self) -> i64 {
        let k = DivisorClass::canonical(self.rank());
        1 + (self.self_intersection() + intersect(&k, self).expect("same lattice")) / 2
    }

    fn mod2(&self) -> Vec<bool> {
        std::iter::once(self.h).chain(self.e.iter().copied()).map(|x| x.rem_euclid(2) == 1).collect()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H", self.h)?;
        for (i, x) in self.e.iter().enumerate() {
            match x {
                0 => {}
                x if *x > 0 => write!(f, " - {x}E{i}")?,
                x => write!(f, " + {}E{i}", -x)?,
            }
        }
        Ok(())
    }
}

/// h_a·h_b − Σ e_a,i·e_b,i.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    a.check(b)?;
    Ok(a.h * b.h - a.e.iter().zip(&b.e).map(|(x, y)| x * y).sum::<i64>())
}

// ---------------------------------------------------------------------------
// blow-up trees and branch data

#[derive(Clone, Debug, PartialEq)]
pub enum Center<E> {
    Proper {
        label: String,
        point: ProjPoint<E>,
    },
    /// The point of the exceptional line over `parent` in the direction of
    /// a line through the parent point.
    Near {
        label: String,
        parent: usize,
        direction: PlaneCurve<E>,
    },
}

impl<E> Center<E> {
    pub fn label(&self) -> &str {
        match self {
            Center::Proper { label, .. } | Center::Near { label, .. } => label,
        }
    }

    pub fn parent(&self) -> Option<usize> {
        match self {
            Center::Near { parent, .. } => Some(*parent),
            Center::Proper { .. } => None,
        }
    }
}

/// Ordered blow-up centers; parents precede children.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupTree<E> {
    centers: Vec<Center<E>>,
}

impl<E> BlowupTree<E> {
    pub fn centers(&self) -> &[Center<E>] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.centers.len()).filter(|&c| self.centers[c].parent() == Some(i)).collect()
    }
}

/// A component of the branch curve.
#[derive(Clone, Debug)]
pub enum BranchComponent<E> {
    Line { label: String, line: PlaneCurve<E> },
    /// A curve known through its declared singularities (assumed complete,
    /// with tangent directions not declared otherwise).
    Curve { label: String, degree: usize, scheme: Scheme<E> },
}

impl<E: Clone + PartialEq + Send + Sync> BranchComponent<E> {
    pub fn label(&self) -> &str {
        match self {
            BranchComponent::Line { label, .. } | BranchComponent::Curve { label, .. } => label,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            BranchComponent::Line { .. } => 1,
            BranchComponent::Curve { degree, .. } => *degree,
        }
    }

    fn multiplicity<F: Field<Elem = E>>(&self, f: &F, tree: &BlowupTree<E>, i: usize) -> Result<u32> {
        let proper = |j: usize| match &tree.centers[j] {
            Center::Proper { point, .. } => point,
            Center::Near { .. } => unreachable!("chains have length at most 2"),
        };
        Ok(match (self, &tree.centers[i]) {
            (BranchComponent::Line { line, .. }, Center::Proper { point, .. }) => {
                u32::from(f.is_zero(&line.evaluate(f, point.coords())?))
            }
            (BranchComponent::Line { line, .. }, Center::Near { parent, direction, .. }) => {
                let through = f.is_zero(&line.evaluate(f, proper(*parent).coords())?);
                u32::from(through && proportional(f, line, direction))
            }
            (BranchComponent::Curve { scheme, .. }, Center::Proper { point, .. }) => scheme
                .items()
                .iter()
                .find(|it| &it.point == point)
                .map_or(0, |it| it.chain.mults()[0]),
            (BranchComponent::Curve { scheme, .. }, Center::Near { parent, direction, .. }) => scheme
                .items()
                .iter()
                .find(|it| &it.point == proper(*parent))
                .and_then(|it| match (it.chain.mults(), it.chain.tangent_line()) {
                    ([_, m2], Some(t)) if proportional(f, t, direction) => Some(*m2),
                    _ => None,
                })
                .unwrap_or(0),
        })
    }
}

fn proportional<F: Field>(f: &F, a: &PlaneCurve<F::Elem>, b: &PlaneCurve<F::Elem>) -> bool {
    let va = a.to_coeff_vector(f);
    let vb = b.to_coeff_vector(f);
    (0..va.len()).all(|i| (0..vb.len()).all(|j| f.is_zero(&f.sub(&f.mul(&va[i], &vb[j]), &f.mul(&va[j], &vb[i])))))
}

fn build_tree<F: Field>(f: &F, comps: &[BranchComponent<F::Elem>]) -> Result<BlowupTree<F::Elem>> {
    let mut centers: Vec<Center<F::Elem>> = Vec::new();
    for c in comps {
        let BranchComponent::Curve { scheme, .. } = c else { continue };
        for it in scheme.items() {
            let pi = match centers
                .iter()
                .position(|x| matches!(x, Center::Proper { point, .. } if point == &it.point))
            {
                Some(i) => i,
                None => {
                    centers.push(Center::Proper {
                        label: it.label.clone(),
                        point: it.point.clone(),
                    });
                    centers.len() - 1
                }
            };
            if it.chain.mults().len() < 2 {
                continue;
            }
            let dir = match it.chain.tangent() {
                Some(Tangent::Line(l)) => l,
                _ => return Err(Error::Unsupported(format!("{}: resolve the free tangent first", it.label))),
            };
            let known = centers.iter().any(
                |x| matches!(x, Center::Near { parent, direction, .. } if *parent == pi && proportional(f, direction, dir)),
            );
            if !known {
                centers.push(Center::Near {
                    label: format!("{}'", it.label),
                    parent: pi,
                    direction: dir.clone(),
                });
            }
        }
    }
    // parents first: proper centers, then their children
    let roots: Vec<usize> = (0..centers.len()).filter(|&i| centers[i].parent().is_none()).collect();
    let mut out_idx = vec![usize::MAX; centers.len()];
    let mut ordered = Vec::new();
    for r in roots {
        out_idx[r] = ordered.len();
        ordered.push(r);
        for (c, x) in centers.iter().enumerate() {
            if x.parent() == Some(r) {
                out_idx[c] = ordered.len();
                ordered.push(c);
            }
        }
    }
    let centers = ordered
        .into_iter()
        .map(|i| match &centers[i] {
            Center::Near { label, parent, direction } => Center::Near {
                label: label.clone(),
                parent: out_idx[*parent],
                direction: direction.clone(),
            },
            p => p.clone(),
        })
        .collect();
    Ok(BlowupTree { centers })
}

/// Branch multiplicities per center, their halves, and which exceptional
/// curves join the branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchLedger {
    pub total: DivisorClass,
    pub multiplicities: Vec<u32>,
    pub halves: Vec<u32>,
    pub joins: Vec<bool>,
}

/// A canonical resolution of a double plane.
#[derive(Clone, Debug)]
pub struct Resolution<E> {
    pub tree: BlowupTree<E>,
    pub ledger: BranchLedger,
    /// Half the branch degree.
    pub k: i64,
    /// L with 2L the resolved branch class.
    pub half_branch: DivisorClass,
    /// Components of the resolved (reduced) branch curve.
    pub components: Vec<(String, DivisorClass)>,
    pub chi: i64,
    pub k2_cover: i64,
    /// Pairs of components meeting outside the centers, with the number of
    /// missing intersections; each is assumed to be an ordinary node, which
    /// changes neither χ nor K².
    pub unaccounted: Vec<(String, String, i64)>,
}

impl<E> Resolution<E> {
    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::canonical(self.tree.len())
    }

    /// Branch components that are smooth rational (−2)-curves.
    pub fn minus_two_curves(&self) -> Vec<&(String, DivisorClass)> {
        self.components
            .iter()
            .filter(|(_, c)| c.self_intersection() == -2 && c.arithmetic_genus() == 0)
            .collect()
    }

    /// The remaining branch components.
    pub fn main_branch(&self) -> Result<DivisorClass> {
        let mut acc = DivisorClass::new(0, vec![0; self.tree.len()]);
        for (_, c) in &self.components {
            if !(c.self_intersection() == -2 && c.arithmetic_genus() == 0) {
                acc = acc.add(c)?;
            }
        }
        Ok(acc)
    }
}

/// Canonical resolution of the double cover branched along the sum of the
/// given components: blow up every declared center, subtract 2⌊m/2⌋E and let
/// E join the branch when m is odd.
pub fn canonical_resolution<F: Field>(f: &F, components: &[BranchComponent<F::Elem>]) -> Result<Resolution<F::Elem>> {
    let degree: usize = components.iter().map(|c| c.degree()).sum();
    if degree % 2 == 1 {
        return domain(format!("branch degree {degree} is odd"));
    }
    let tree = build_tree(f, components)?;
    let n = tree.len();
    let mult_table: Vec<Vec<u32>> = components
        .iter()
        .map(|c| (0..n).map(|i| c.multiplicity(f, &tree, i)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let mut multiplicities = Vec::with_capacity(n);
    let mut joins = Vec::with_capacity(n);
    for i in 0..n {
        let from_exceptional = tree.centers[i].parent().map_or(0, |p| u32::from(joins[p]));
        let m: u32 = mult_table.iter().map(|row| row[i]).sum::<u32>() + from_exceptional;
        if m == 0 {
            return Err(Error::Consistency(format!("center {} is not on the branch", tree.centers[i].label())));
        }
        multiplicities.push(m);
        joins.push(m % 2 == 1);
    }
    let halves: Vec<u32> = multiplicities.iter().map(|m| m / 2).collect();
    let k = degree as i64 / 2;
    let half_branch = DivisorClass::new(k, halves.iter().map(|&d| d as i64).collect());
    let total = half_branch.scale(2);

    let mut comps = Vec::new();
    for (c, row) in components.iter().zip(&mult_table) {
        comps.push((
            c.label().to_string(),
            DivisorClass::new(c.degree() as i64, row.iter().map(|&m| m as i64).collect()),
        ));
    }
    for i in (0..n).filter(|&i| joins[i]) {
        let mut e = vec![0; n];
        e[i] = -1;
        for c in tree.children(i) {
            e[c] = 1;
        }
        comps.push((format!("E[{}]", tree.centers[i].label()), DivisorClass::new(0, e)));
    }
    let mut reduced = DivisorClass::new(0, vec![0; n]);
    for (_, c) in &comps {
        reduced = reduced.add(c)?;
    }
    if reduced != total {
        let diff = reduced.sub(&total)?;
        return Err(Error::Consistency(format!(
            "resolved branch is not 2L (difference {diff}; even: {})",
            diff.is_even()
        )));
    }

    let mut unaccounted = Vec::new();
    for a in 0..components.len() {
        for b in a + 1..components.len() {
            let local: i64 = (0..n).map(|i| (mult_table[a][i] * mult_table[b][i]) as i64).sum();
            let bezout = (components[a].degree() * components[b].degree()) as i64;
            if local > bezout {
                return Err(Error::Consistency(format!(
                    "{} and {} meet {local} times at the centers, more than {bezout}",
                    components[a].label(),
                    components[b].label()
                )));
            }
            if local < bezout {
                unaccounted.push((components[a].label().to_string(), components[b].label().to_string(), bezout - local));
            }
        }
    }

    let kc = DivisorClass::canonical(n);
    let l2 = intersect(&half_branch, &half_branch)?;
    let kl = intersect(&kc, &half_branch)?;
    if (l2 + kl) % 2 != 0 {
        return Err(Error::Consistency("L² + K·L is odd".into()));
    }
    let chi = 2 + (l2 + kl) / 2;
    let kpl = kc.add(&half_branch)?;
    let k2_cover = 2 * intersect(&kpl, &kpl)?;
    Ok(Resolution {
        tree,
        ledger: BranchLedger {
            total,
            multiplicities,
            halves,
            joins,
        },
        k,
        half_branch,
        components: comps,
        chi,
        k2_cover,
        unaccounted,
    })
}

/// Recomputes the declared multiplicities of components from their
/// equations and fails on any mismatch.
pub fn cross_check<F: Field>(
    f: &F,
    components: &[BranchComponent<F::Elem>],
    equations: &[PlaneCurve<F::Elem>],
) -> Result<()> {
    if components.len() != equations.len() {
        return domain("one equation per component is required");
    }
    for (c, eq) in components.iter().zip(equations) {
        if eq.degree() != c.degree() {
            return Err(Error::Consistency(format!("{}: equation has the wrong degree", c.label())));
        }
        if let BranchComponent::Curve { scheme, label, .. } = c {
            let report = verify_scheme(f, eq, scheme)?;
            if let Some((l, r)) = report.items.iter().find(|(_, r)| r.verdict != crate::verify::Verdict::Exact) {
                return Err(Error::Consistency(format!("{label}: declared chain at {l} is {}", r.verdict)));
            }
        }
    }
    Ok(())
}

/// p_g of the cover: h⁰ of plane curves of degree k−3 with virtual
/// multiplicity d_i − 1 at every center.
pub fn pg_adjoint<F: Field>(f: &F, res: &Resolution<F::Elem>) -> Result<usize> {
    if res.k < 3 {
        return Ok(0);
    }
    let deg = (res.k - 3) as usize;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (i, c) in res.tree.centers.iter().enumerate() {
        let Center::Proper { point, .. } = c else { continue };
        let m1 = res.ledger.halves[i].saturating_sub(1);
        let kids = res.tree.children(i);
        match kids.as_slice() {
            [] if m1 > 0 => rows.extend(raw_conditions(f, deg, point, &[m1], None)?),
            [] => {}
            [c] => {
                let m2 = res.ledger.halves[*c].saturating_sub(1);
                let Center::Near { direction, .. } = &res.tree.centers[*c] else { unreachable!() };
                if m1 + m2 > 0 {
                    rows.extend(raw_conditions(f, deg, point, &[m1, m2], Some(direction))?);
                }
            }
            _ => return Err(Error::Unsupported("several infinitely near points over one center".into())),
        }
    }
    let m = ExactMatrix::from_rows(f, rows, basis_size(deg))?;
    Ok(m.kernel_basis(f).len())
}

/// Order of the 2-torsion of the double cover branched along the sum of
/// the components: 2^(dim ker ψ − 1), ψ(ε) = Σ ε_i·C_i mod 2.
pub fn beauville_tors2(components: &[DivisorClass]) -> Result<u64> {
    let Some(first) = components.first() else {
        return domain("no components");
    };
    let mut total = DivisorClass::new(0, vec![0; first.rank()]);
    for c in components {
        total = total.add(c)?;
    }
    if !total.is_even() {
        return domain(format!("the branch class {total} is not even"));
    }
    let cols: Vec<Vec<bool>> = components.iter().map(|c| c.mod2()).collect();
    let rows: Vec<Vec<bool>> = (0..first.rank() + 1)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let dim = z2_kernel(&rows, components.len()).len();
    Ok(1u64 << (dim - 1))
}

/// Identities of D = 2K + B₀ on the resolved surface, where B₀ is the
/// branch minus its (−2)-curves.
#[derive(Clone, Debug, Serialize)]
pub struct SelfCheck {
    pub d: DivisorClass,
    pub checks: Vec<(String, i64, i64, bool)>,
    pub even: bool,
    pub minus_two_curves: usize,
}

impl SelfCheck {
    pub fn passed(&self) -> bool {
        self.even && self.checks.iter().all(|c| c.3)
    }
}

pub fn divisor_selfcheck<E>(res: &Resolution<E>) -> Result<SelfCheck> {
    let k = res.canonical();
    let b0 = res.main_branch()?;
    let d = k.scale(2).add(&b0)?;
    let d2 = d.self_intersection();
    let kd = intersect(&k, &d)?;
    let pa = d.arithmetic_genus();
    let cs = res.minus_two_curves();
    let mut all = b0.clone();
    for (_, c) in &cs {
        all = all.add(c)?;
    }
    Ok(SelfCheck {
        checks: vec![
            ("D^2".into(), d2, 2, d2 == 2),
            ("K.D".into(), kd, 0, kd == 0),
            ("p_a(D)".into(), pa, 2, pa == 2),
        ],
        d,
        even: all.is_even(),
        minus_two_curves: cs.len(),
    })
}

// ---------------------------------------------------------------------------
// Du Val configurations

/// Branch components of a Du Val configuration: r1, r2 and the degree-12
/// curve.
pub fn duval_branch<F: Field>(f: &F, cfg: &DuValConfig<F::Elem>) -> Result<Vec<BranchComponent<F::Elem>>> {
    Ok(vec![
        BranchComponent::Line {
            label: "r1".into(),
            line: cfg.r1.clone(),
        },
        BranchComponent::Line {
            label: "r2".into(),
            line: cfg.r2.clone(),
        },
        BranchComponent::Curve {
            label: "B".into(),
            degree: 12,
            scheme: cfg.scheme_in(f)?,
        },
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TorsionVerdict {
    Z2,
    Z4,
}

impl fmt::Display for TorsionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionVerdict::Z2 => "Z/2",
            TorsionVerdict::Z4 => "Z/4",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TorsionReport<E> {
    pub verdict: TorsionVerdict,
    /// Projective dimension of the degree-8 system.
    pub dimension: i64,
    pub solutions: Vec<PlaneCurve<E>>,
    /// Hypothesis checks on the branch curve, reported rather than enforced.
    pub hypotheses: Vec<(String, bool)>,
}

/// The degree-8 scheme: [2] at q0, [3,2] at q1, q2 towards r1, r2, [3] at
/// q3, q4, q5 and [2,2] at q6 tangent to r3.
pub fn octic_scheme<F: Field>(f: &F, cfg: &DuValConfig<F::Elem>) -> Result<Scheme<F::Elem>> {
    let mut s = Scheme::new();
    for (i, (name, p)) in cfg.points.iter().enumerate() {
        let c = match i {
            0 => SingChain::ordinary(2)?,
            1 => SingChain::chain(3, 2, Tangent::Line(cfg.r1.clone()))?,
            2 => SingChain::chain(3, 2, Tangent::Line(cfg.r2.clone()))?,
            6 => SingChain::chain(2, 2, Tangent::Line(cfg.r3.clone()))?,
            _ => SingChain::ordinary(3)?,
        };
        s.push(f, name.clone(), p.clone(), c)?;
    }
    Ok(s)
}

fn check_structure<F: Field>(f: &F, cfg: &DuValConfig<F::Elem>) -> Result<()> {
    let na = |m: String| Err(Error::NotApplicable(m));
    if cfg.points.len() != 7 {
        return na(format!("expected 7 points, got {}", cfg.points.len()));
    }
    for i in 0..7 {
        for j in i + 1..7 {
            if cfg.q(i) == cfg.q(j) {
                return na(format!("{} and {} coincide", cfg.points[i].0, cfg.points[j].0));
            }
        }
    }
    let on = |l: &PlaneCurve<F::Elem>, i: usize| -> Result<bool> { Ok(f.is_zero(&l.evaluate(f, cfg.q(i).coords())?)) };
    for (l, i, name) in [(&cfg.r1, 0, "r1"), (&cfg.r2, 0, "r2"), (&cfg.r1, 1, "r1"), (&cfg.r2, 2, "r2"), (&cfg.r3, 6, "r3")] {
        if !on(l, i)? {
            return na(format!("{} is not on {name}", cfg.points[i].0));
        }
    }
    if proportional(f, &cfg.r1, &cfg.r2) {
        return na("r1 and r2 coincide".into());
    }
    if let Some(z) = &cfg.fixed_line {
        if z.degree() != 1 {
            return na("the fixed component must be a line".into());
        }
    }
    Ok(())
}

/// Torsion of the Du Val surface: Z/4 exactly when the degree-8 system is
/// nonempty (containing the fixed line of the reducible case).
pub fn duval_torsion<F: Field>(
    f: &F,
    cfg: &DuValConfig<F::Elem>,
    branch: Option<&PlaneCurve<F::Elem>>,
) -> Result<TorsionReport<F::Elem>> {
    check_structure(f, cfg)?;
    let scheme = octic_scheme(f, cfg)?;
    let sys = LinearSystem::assemble_full(f, 8, &scheme, None, cfg.fixed_line.as_ref())?;
    let dimension = sys.dimension(f);
    let solutions = if dimension >= 0 { sys.solve_basis(f)? } else { Vec::new() };
    let mut hypotheses = Vec::new();
    let b_scheme = cfg.scheme_in(f)?;
    if cfg.fixed_line.is_none() {
        hypotheses.push(("declared genus of B is 1".to_string(), geometric_genus(12, &b_scheme)? == 1));
    }
    if let Some(b) = branch {
        hypotheses.push((
            "B has exactly the declared singularities".into(),
            verify_scheme(f, b, &b_scheme)?.all_exact(),
        ));
        match &cfg.fixed_line {
            None => hypotheses.push(("B is absolutely irreducible".into(), absolute_factor_count(f, b)? == 1)),
            Some(z) => hypotheses.push(("B contains the fixed line".into(), b.div_exact(f, z).is_some())),
        }
    }
    Ok(TorsionReport {
        verdict: if dimension >= 0 { TorsionVerdict::Z4 } else { TorsionVerdict::Z2 },
        dimension,
        solutions,
        hypotheses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ObstructionVerdict {
    NotCampedelli,
    Inconclusive,
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionVerdict::NotCampedelli => "NOT_CAMPEDELLI",
            ObstructionVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport<E> {
    pub verdict: ObstructionVerdict,
    pub cubic: PlaneCurve<E>,
    pub irreducible: bool,
    /// Singular points of the branch curve on the cubic away from q0..q6.
    pub scan: RestrictedScan<E>,
}

/// The cubic through q0, q3..q6 and tangent to r1, r2 at q1, q2.
pub fn obstruction_cubic<F: Field>(f: &F, cfg: &DuValConfig<F::Elem>) -> Result<PlaneCurve<F::Elem>> {
    let mut s = Scheme::new();
    for (i, (name, p)) in cfg.points.iter().enumerate() {
        let c = match i {
            1 => SingChain::chain(1, 1, Tangent::Line(cfg.r1.clone()))?,
            2 => SingChain::chain(1, 1, Tangent::Line(cfg.r2.clone()))?,
            _ => SingChain::ordinary(1)?,
        };
        s.push(f, name.clone(), p.clone(), c)?;
    }
    let sys = LinearSystem::assemble(f, 3, &s, None)?;
    let dim = sys.dimension(f);
    if dim != 0 {
        return Err(Error::NotApplicable(format!(
            "degenerate configuration: the cubic system has dimension {dim}"
        )));
    }
    sys.solve_unique(f)
}

/// Rules out the Campedelli type when the cubic is irreducible and misses
/// every singular point of `branch` other than q0..q6.
pub fn campedelli_obstruction<F: Field>(
    f: &F,
    cfg: &DuValConfig<F::Elem>,
    branch: &PlaneCurve<F::Elem>,
) -> Result<ObstructionReport<F::Elem>> {
    let cubic = obstruction_cubic(f, cfg)?;
    let irreducible = absolute_factor_count(f, &cubic)? == 1;
    let exclude: Vec<ProjPoint<F::Elem>> = cfg.points.iter().map(|(_, p)| p.clone()).collect();
    let scan = singular_points_on(f, branch, &cubic, &exclude)?;
    let verdict = if irreducible && scan.is_clear() {
        ObstructionVerdict::NotCampedelli
    } else {
        ObstructionVerdict::Inconclusive
    };
    Ok(ObstructionReport {
        verdict,
        cubic,
        irreducible,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::algebra::{Rational, Rationals};
    use crate::configs::{campedelli, ex_z4, point};

    fn curve_comp(label: &str, degree: usize, scheme: Scheme<Rational>) -> BranchComponent<Rational> {
        BranchComponent::Curve {
            label: label.into(),
            degree,
            scheme,
        }
    }

    #[test]
    fn lattice_basics() {
        let h = DivisorClass::hyperplane(9);
        let e = DivisorClass::exceptional(0, 9);
        assert_eq!(intersect(&h, &h).unwrap(), 1);
        assert_eq!(intersect(&e, &e).unwrap(), -1);
        assert_eq!(intersect(&h, &e).unwrap(), 0);
        assert_eq!(DivisorClass::canonical(9).self_intersection(), 0);
        assert!(intersect(&h, &DivisorClass::hyperplane(2)).is_err());
        // exceptional curves and lines are rational
        assert_eq!(e.arithmetic_genus(), 0);
        assert_eq!(h.arithmetic_genus(), 0);
        assert_eq!(h.scale(3).arithmetic_genus(), 1);
        assert_eq!(h.sub(&e).unwrap().to_string(), "1H - 1E0");
    }

    #[test]
    fn smooth_sextic_is_k3() {
        let q = Rationals;
        let res = canonical_resolution(&q, &[curve_comp("B", 6, Scheme::new())]).unwrap();
        assert_eq!((res.chi, res.k2_cover), (2, 0));
        assert_eq!(pg_adjoint(&q, &res).unwrap(), 1);
    }

    #[test]
    fn odd_degree_rejected() {
        let q = Rationals;
        assert!(matches!(
            canonical_resolution(&q, &[curve_comp("B", 5, Scheme::new())]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn duval_invariants() {
        let q = Rationals;
        let cfg = ex_z4();
        let res = canonical_resolution(&q, &duval_branch(&q, &cfg).unwrap()).unwrap();
        assert_eq!(res.tree.len(), 10);
        assert_eq!(res.ledger.multiplicities, vec![6, 5, 6, 5, 6, 4, 4, 4, 3, 4]);
        assert_eq!((res.chi, res.k2_cover), (1, -4));
        assert!(res.unaccounted.is_empty());
        assert_eq!(pg_adjoint(&q, &res).unwrap(), 0);
        assert_eq!(res.minus_two_curves().len(), 5);
        let sc = divisor_selfcheck(&res).unwrap();
        assert!(sc.passed(), "{sc:?}");
        let classes: Vec<DivisorClass> = res.components.iter().map(|c| c.1.clone()).collect();
        assert_eq!(beauville_tors2(&classes).unwrap(), 2);
    }

    #[test]
    fn campedelli_invariants() {
        let q = Rationals;
        let res = canonical_resolution(&q, &[curve_comp("B", 10, campedelli().scheme())]).unwrap();
        assert_eq!((res.chi, res.k2_cover), (1, -4));
        assert_eq!(pg_adjoint(&q, &res).unwrap(), 0);
        assert!(divisor_selfcheck(&res).unwrap().passed());
        let classes: Vec<DivisorClass> = res.components.iter().map(|c| c.1.clone()).collect();
        assert_eq!(beauville_tors2(&classes).unwrap(), 1);
    }

    #[test]
    fn corrupted_scheme_fails_selfcheck() {
        let q = Rationals;
        let cfg = ex_z4();
        let mut comps = duval_branch(&q, &cfg).unwrap();
        comps[2] = curve_comp("B", 12, cfg.scheme().without("q6"));
        let res = canonical_resolution(&q, &comps).unwrap();
        let sc = divisor_selfcheck(&res).unwrap();
        assert!(!sc.passed());
        assert_eq!(sc.checks[0].1, 4);
        assert_eq!(sc.minus_two_curves, 4);
    }

    #[test]
    fn beauville_small_cases() {
        let two_h = DivisorClass::new(2, vec![]);
        assert_eq!(beauville_tors2(std::slice::from_ref(&two_h)).unwrap(), 1);
        assert_eq!(beauville_tors2(&[two_h.clone(), two_h]).unwrap(), 2);
        assert!(beauville_tors2(&[DivisorClass::hyperplane(0)]).is_err());
    }

    #[test]
    fn missing_intersections_are_reported() {
        let q = Rationals;
        // a line and a conic through one common declared point
        let mut s = Scheme::new();
        s.push(&q, "p", point(0, 0, 1), SingChain::ordinary(1).unwrap()).unwrap();
        let comps = vec![
            BranchComponent::Line {
                label: "l".into(),
                line: PlaneCurve::linear(&q, [int(1), int(0), int(0)]),
            },
            curve_comp("C", 3, s),
        ];
        let res = canonical_resolution(&q, &comps).unwrap();
        assert_eq!(res.unaccounted, vec![("l".to_string(), "C".to_string(), 2)]);
        assert_eq!(res.ledger.multiplicities, vec![2]);
    }

    #[test]
    fn structure_violations_are_not_applicable() {
        let q = Rationals;
        let mut cfg = ex_z4();
        cfg.points[6].1 = point(0, 0, 1);
        assert!(matches!(duval_torsion(&q, &cfg, None), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn obstruction_cubic_is_unique() {
        let q = Rationals;
        let c = obstruction_cubic(&q, &ex_z4()).unwrap();
        assert_eq!(c.degree(), 3);
        for (_, p) in &ex_z4().points {
            assert!(q.is_zero(&c.evaluate(&q, p.coords()).unwrap()));
        }
    }
}
