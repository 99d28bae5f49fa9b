//! Strategies and checks shared by the property suite and the acceptance runner.

#![allow(dead_code)]

use godeaux_core::algebra::factor::irreducible_mod_some_prime;
use godeaux_core::algebra::field::int;
use godeaux_core::algebra::{ExactMatrix, Field, NumberField, Rational, Rationals};
use godeaux_core::configs::ex_z4;
use godeaux_core::plane::{basis_size, PlaneCurve};
use godeaux_core::scheme::{conditions, expected_conditions, ProjPoint, Scheme, SingChain, Tangent};
use godeaux_core::surface::{beauville_tors2, canonical_resolution, duval_branch, intersect, BranchComponent, DivisorClass};
use godeaux_core::system::LinearSystem;
use godeaux_core::verify::{absolute_factor_count, chain_verify, multiplicity_at, squarefree_check, Verdict};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub type Check = std::result::Result<(), TestCaseError>;

fn q() -> Rationals {
    Rationals
}

fn point(c: [i64; 3]) -> ProjPoint<Rational> {
    ProjPoint::new(&q(), c.map(int)).expect("nonzero point")
}

fn line(c: [i64; 3]) -> PlaneCurve<Rational> {
    PlaneCurve::linear(&q(), c.map(int))
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn nonzero3(r: i64) -> impl Strategy<Value = [i64; 3]> {
    [-r..=r, -r..=r, -r..=r].prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

/// A point together with a chain through it: an ordinary point or an [m,m]
/// chain whose tangent is the line joining the point to a second point.
#[derive(Clone, Debug)]
pub struct PointChain {
    pub point: [i64; 3],
    pub mults: Vec<u32>,
    pub tangent: Option<[i64; 3]>,
}

impl PointChain {
    pub fn chain(&self) -> SingChain<Rational> {
        match self.tangent {
            None => SingChain::ordinary(self.mults[0]).unwrap(),
            Some(l) => SingChain::chain(self.mults[0], self.mults[1], Tangent::Line(line(l))).unwrap(),
        }
    }

    pub fn total(&self) -> u32 {
        self.mults.iter().sum()
    }
}

pub fn point_chain() -> impl Strategy<Value = PointChain> {
    (nonzero3(3), nonzero3(3), 1u32..=3, any::<bool>()).prop_filter_map("degenerate tangent", |(p, other, m, chained)| {
        if !chained {
            return Some(PointChain { point: p, mults: vec![m], tangent: None });
        }
        let l = cross(p, other);
        (l != [0, 0, 0] && m <= 2).then(|| PointChain { point: p, mults: vec![m, m], tangent: Some(l) })
    })
}

pub fn matrix_q(rows: usize, cols: usize, entries: &[i64]) -> ExactMatrix<Rational> {
    let rows: Vec<Vec<Rational>> = entries.chunks(cols).take(rows).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    ExactMatrix::from_rows(&q(), rows, cols).unwrap()
}

/// Number of linear conditions equals the expected count.
pub fn condition_count_law(pc: &PointChain, extra: usize) -> Check {
    let d = pc.total() as usize + extra;
    let c = pc.chain();
    let rows = conditions(&q(), d, &point(pc.point), &c).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(rows.len() as i64, expected_conditions(&c));
    Ok(())
}

/// Satisfying the linear conditions agrees with following the blow-ups.
pub fn blowup_oracle(pc: &PointChain, d: usize, weights: &[i64], random: &[i64]) -> Check {
    let f = q();
    let c = pc.chain();
    let p = point(pc.point);
    let rows = conditions(&f, d, &p, &c).unwrap();
    let n = basis_size(d);
    let m = ExactMatrix::from_rows(&f, rows.clone(), n).unwrap();
    let kernel = m.kernel_basis(&f);
    let mut member = vec![f.zero(); n];
    for (k, w) in kernel.iter().zip(weights.iter().cycle()) {
        for (a, b) in member.iter_mut().zip(k) {
            *a = f.add(a, &f.mul(b, &int(*w)));
        }
    }
    let arbitrary: Vec<Rational> = random.iter().cycle().take(n).map(|&x| int(x)).collect();
    for v in [member, arbitrary] {
        let curve = PlaneCurve::from_coeff_vector(&f, d, &v).unwrap();
        if curve.is_zero() {
            continue;
        }
        let satisfied = rows.iter().all(|r| f.is_zero(&godeaux_core::algebra::matrix::dot(&f, r, &v)));
        let verdict = chain_verify(&f, &curve, &p, &c).map_err(|e| TestCaseError::fail(e.to_string()))?.verdict;
        if satisfied {
            prop_assert_ne!(verdict, Verdict::Insufficient);
        }
        if verdict == Verdict::Exact || (pc.tangent.is_none() && verdict == Verdict::Worse) {
            prop_assert!(satisfied, "verdict {} but conditions fail", verdict);
        }
        if verdict == Verdict::Insufficient {
            prop_assert!(!satisfied);
        }
    }
    Ok(())
}

fn transform_scheme(items: &[PointChain], a: Option<&ExactMatrix<Rational>>) -> Option<Scheme<Rational>> {
    let f = q();
    let inv = a.map(|a| a.inverse(&f).expect("invertible"));
    let mut s = Scheme::new();
    for (i, pc) in items.iter().enumerate() {
        let mut p = point(pc.point);
        let mut chain = pc.chain();
        if let (Some(a), Some(inv)) = (a, &inv) {
            let img = a.mul_vec(&f, p.coords());
            p = ProjPoint::new(&f, [img[0].clone(), img[1].clone(), img[2].clone()]).unwrap();
            if let Some(l) = pc.tangent {
                let moved = line(l).substitute(&f, inv).unwrap();
                chain = SingChain::chain(pc.mults[0], pc.mults[1], Tangent::Line(moved)).unwrap();
            }
        }
        s.push(&f, format!("p{i}"), p, chain).ok()?;
    }
    Some(s)
}

/// Dimensions of systems and multiplicities of curves do not depend on
/// the choice of projective coordinates.
pub fn projective_invariance(items: &[PointChain], d: usize, a: &[i64], curve: &[i64]) -> Check {
    let f = q();
    let a = matrix_q(3, 3, a);
    prop_assume!(!f.is_zero(&a.det(&f)));
    let (Some(before), Some(after)) = (transform_scheme(items, None), transform_scheme(items, Some(&a))) else {
        return Err(TestCaseError::reject("coincident points"));
    };
    let d0 = LinearSystem::assemble(&f, d, &before, None).unwrap().dimension(&f);
    let d1 = LinearSystem::assemble(&f, d, &after, None).unwrap().dimension(&f);
    prop_assert_eq!(d0, d1);

    let v: Vec<Rational> = curve.iter().cycle().take(basis_size(d)).map(|&x| int(x)).collect();
    let c = PlaneCurve::from_coeff_vector(&f, d, &v).unwrap();
    prop_assume!(!c.is_zero());
    let moved = c.substitute(&f, &a.inverse(&f).unwrap()).unwrap();
    for (pc, item) in items.iter().zip(after.items()) {
        prop_assert_eq!(
            multiplicity_at(&f, &c, &point(pc.point)).unwrap(),
            multiplicity_at(&f, &moved, &item.point).unwrap()
        );
    }
    Ok(())
}

/// A factor with a known number of absolutely irreducible components: a
/// line, a smooth conic, or a rank-2 conic splitting into two lines.
#[derive(Clone, Debug)]
pub enum Factor {
    Line([i64; 3]),
    Conic { forms: [[i64; 3]; 3], weights: [i64; 3], rank: usize },
}

impl Factor {
    fn degree(&self) -> usize {
        match self {
            Factor::Line(_) => 1,
            Factor::Conic { .. } => 2,
        }
    }

    fn components(&self) -> usize {
        match self {
            Factor::Line(_) => 1,
            Factor::Conic { rank, .. } => if *rank == 3 { 1 } else { 2 },
        }
    }

    fn curve(&self) -> PlaneCurve<Rational> {
        let f = q();
        match self {
            Factor::Line(l) => line(*l),
            Factor::Conic { forms, weights, rank } => {
                let mut c = PlaneCurve::zero(2);
                for i in 0..*rank {
                    let l = line(forms[i]);
                    c = c.add(&f, &l.mul(&f, &l).scale(&f, &int(weights[i]))).unwrap();
                }
                c
            }
        }
    }
}

pub fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        nonzero3(4).prop_map(Factor::Line),
        (
            [nonzero3(2), nonzero3(2), nonzero3(2)],
            [prop_oneof![-3i64..=-1, 1i64..=3], prop_oneof![-3i64..=-1, 1i64..=3], prop_oneof![-3i64..=-1, 1i64..=3]],
            2usize..=3
        )
            .prop_filter("dependent forms", |(forms, _, _)| {
                let d = cross(forms[0], forms[1]);
                d.iter().zip(forms[2]).map(|(a, b)| a * b).sum::<i64>() != 0
            })
            .prop_map(|(forms, weights, rank)| Factor::Conic { forms, weights, rank }),
    ]
}

/// Products of at most degree 4 with at least one factor.
pub fn product() -> impl Strategy<Value = Vec<Factor>> {
    prop::collection::vec(factor(), 1..=4).prop_map(|fs| {
        let mut total = 0;
        fs.into_iter()
            .filter(|x| {
                total += x.degree();
                total <= 4
            })
            .collect()
    })
}

/// The absolute factor count matches the count known from construction.
pub fn factor_counts(factors: &[Factor]) -> Check {
    let f = q();
    let mut c = PlaneCurve::constant(&f, f.one());
    for x in factors {
        c = c.mul(&f, &x.curve());
    }
    prop_assume!(squarefree_check(&f, &c).unwrap());
    let expected: usize = factors.iter().map(Factor::components).sum();
    prop_assert_eq!(absolute_factor_count(&f, &c).unwrap(), expected);
    Ok(())
}

/// rank + nullity = columns, and the kernel really is annihilated.
pub fn kernel_rank(rows: usize, cols: usize, entries: &[i64]) -> Check {
    let f = q();
    let m = matrix_q(rows, cols, entries);
    let ker = m.kernel_basis(&f);
    prop_assert_eq!(m.rank(&f) + ker.len(), cols);
    for k in &ker {
        prop_assert!(m.mul_vec(&f, k).iter().all(|x| f.is_zero(x)));
    }
    Ok(())
}

/// a · a⁻¹ = 1 and (a⁻¹)⁻¹ = a in a number field.
pub fn nf_invert(minpoly: &[i64], elem: &[i64]) -> Check {
    let mut coeffs: Vec<Rational> = minpoly.iter().map(|&x| int(x)).collect();
    coeffs.push(int(1));
    prop_assume!(irreducible_mod_some_prime(&coeffs, 30));
    let nf = NumberField::new(&coeffs).unwrap();
    let n = minpoly.len();
    let a = godeaux_core::algebra::field::NfElem(elem.iter().take(n).map(|&x| int(x)).collect());
    prop_assume!(!nf.is_zero(&a));
    let inv = nf.inv(&a).unwrap();
    prop_assert!(nf.is_one(&nf.mul(&a, &inv)));
    prop_assert_eq!(nf.inv(&inv).unwrap(), a);
    Ok(())
}

/// The intersection form is symmetric and bilinear.
pub fn intersection_form(a: &[i64], b: &[i64], c: &[i64], k: i64) -> Check {
    let cls = |v: &[i64]| DivisorClass::new(v[0], v[1..].to_vec());
    let (a, b, c) = (cls(a), cls(b), cls(c));
    prop_assert_eq!(intersect(&a, &b).unwrap(), intersect(&b, &a).unwrap());
    let lhs = intersect(&a.add(&b.scale(k)).unwrap(), &c).unwrap();
    prop_assert_eq!(lhs, intersect(&a, &c).unwrap() + k * intersect(&b, &c).unwrap());
    Ok(())
}

/// Resolution invariants do not depend on the order of the components.
pub fn permutation_invariance(order: &[usize]) -> Check {
    let f = q();
    let comps: Vec<BranchComponent<Rational>> = duval_branch(&f, &ex_z4()).unwrap();
    let permuted: Vec<_> = order.iter().map(|&i| comps[i].clone()).collect();
    let a = canonical_resolution(&f, &comps).unwrap();
    let b = canonical_resolution(&f, &permuted).unwrap();
    prop_assert_eq!((a.chi, a.k2_cover), (b.chi, b.k2_cover));
    prop_assert_eq!(a.minus_two_curves().len(), b.minus_two_curves().len());
    Ok(())
}

/// The 2-torsion order is a power of two bounded by 2^(#classes − 1).
pub fn tors2_power_of_two(classes: &[Vec<i64>]) -> Check {
    let cls: Vec<DivisorClass> = classes.iter().map(|v| DivisorClass::new(v[0], v[1..].to_vec())).collect();
    let mut total = DivisorClass::new(0, vec![0; classes[0].len() - 1]);
    for c in &cls {
        total = total.add(c).unwrap();
    }
    prop_assume!(total.is_even());
    let t = beauville_tors2(&cls).unwrap();
    prop_assert!(t.is_power_of_two());
    prop_assert!(t <= 1 << (cls.len() - 1));
    Ok(())
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Check) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Runs the core properties with `cases` cases each.
pub fn run_all(cases: u32) -> Vec<(&'static str, std::result::Result<(), String>)> {
    vec![
        ("condition-count law", run(cases, (point_chain(), 0usize..=2), |(pc, e)| condition_count_law(&pc, e))),
        (
            "blow-up oracle",
            run(
                cases,
                (point_chain(), 2usize..=5, prop::collection::vec(-3i64..=3, 1..6), prop::collection::vec(-3i64..=3, 1..8)),
                |(pc, d, w, r)| blowup_oracle(&pc, d, &w, &r),
            ),
        ),
        (
            "projective invariance",
            run(
                cases,
                (
                    prop::collection::vec(point_chain(), 1..=3),
                    2usize..=5,
                    prop::collection::vec(-2i64..=2, 9),
                    prop::collection::vec(-3i64..=3, 1..8),
                ),
                |(items, d, a, c)| projective_invariance(&items, d, &a, &c),
            ),
        ),
        ("Ruppert-Gao vs construction", run(cases, product(), |fs| factor_counts(&fs))),
        (
            "kernel/rank identity",
            run(cases, (1usize..=5, 1usize..=6, prop::collection::vec(-3i64..=3, 30)), |(r, c, e)| kernel_rank(r, c, &e)),
        ),
        (
            "number-field inversion",
            run(cases, (prop::collection::vec(-5i64..=5, 2..=4), prop::collection::vec(-4i64..=4, 4)), |(m, a)| nf_invert(&m, &a)),
        ),
    ]
}
