//! Built-in configurations: the φ-symmetric degree-12 Du Val example, the
//! degree-11 one-parameter example, and a Campedelli-type configuration.

use crate::algebra::field::int;
use crate::algebra::{Field, Rational, Rationals};
use crate::error::Result;
use crate::plane::{PlaneCurve, ProjInvolution};
use crate::scheme::{ProjPoint, Scheme, SingChain, Tangent};
use crate::system::{MovingItem, ParamScheme};

pub const EX_Z4_CURVE: &str = include_str!("../data/ex_z4_curve.txt");
pub const TORSION_SEXTIC: &str = include_str!("../data/torsion_sextic.txt");

pub fn point(x: i64, y: i64, z: i64) -> ProjPoint<Rational> {
    ProjPoint::new(&Rationals, [int(x), int(y), int(z)]).expect("nonzero point")
}

pub fn line(expr: &str) -> PlaneCurve<Rational> {
    PlaneCurve::parse_expr(expr).expect("valid line")
}

fn ord(m: u32) -> SingChain<Rational> {
    SingChain::ordinary(m).unwrap()
}

fn chain(m1: u32, m2: u32, tangent: &str) -> SingChain<Rational> {
    SingChain::chain(m1, m2, Tangent::Line(line(tangent))).unwrap()
}

/// Named points and lines of a Du Val configuration: the quadruple point
/// q0 = r1 ∩ r2, the [4,4] points q1 ∈ r1 and q2 ∈ r2, the quadruple points
/// q3, q4, q5 and the [3,3] point q6 with tangent r3.
#[derive(Clone, Debug)]
pub struct DuValConfig<E = Rational> {
    pub points: Vec<(String, ProjPoint<E>)>,
    pub r1: PlaneCurve<E>,
    pub r2: PlaneCurve<E>,
    pub r3: PlaneCurve<E>,
    /// A line known to be a component of the degree-12 branch curve.
    pub fixed_line: Option<PlaneCurve<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> DuValConfig<E> {
    pub fn q(&self, i: usize) -> &ProjPoint<E> {
        &self.points[i].1
    }

    /// The degree-12 scheme of the curve B•.
    pub fn scheme_in<F: Field<Elem = E>>(&self, f: &F) -> Result<Scheme<E>> {
        let mut s = Scheme::new();
        let tan = |l: &PlaneCurve<E>| Tangent::Line(l.clone());
        for (i, (name, p)) in self.points.iter().enumerate() {
            let c = match i {
                1 => SingChain::chain(4, 4, tan(&self.r1))?,
                2 => SingChain::chain(4, 4, tan(&self.r2))?,
                6 => SingChain::chain(3, 3, tan(&self.r3))?,
                _ => SingChain::ordinary(4)?,
            };
            s.push(f, name.clone(), p.clone(), c)?;
        }
        Ok(s)
    }
}

impl DuValConfig<Rational> {
    pub fn scheme(&self) -> Scheme<Rational> {
        self.scheme_in(&Rationals).expect("well-formed configuration")
    }
}

/// The φ-symmetric example: q0=[0,0,1], q1=[1,1,1], q2=[1,−1,1],
/// q3=[1,0,0], q4=[0,1,1], q5=[0,−1,1], q6=[−2,0,1]; r1: x=y, r2: x=−y,
/// r3: x+2z=0.
pub fn ex_z4() -> DuValConfig {
    let pts = [(0, 0, 1), (1, 1, 1), (1, -1, 1), (1, 0, 0), (0, 1, 1), (0, -1, 1), (-2, 0, 1)];
    DuValConfig {
        points: pts
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("q{i}"), point(p.0, p.1, p.2)))
            .collect(),
        r1: line("x - y"),
        r2: line("x + y"),
        r3: line("x + 2*z"),
        fixed_line: None,
    }
}

/// φ: [x,y,z] ↦ [x,−y,z].
pub fn phi_y() -> ProjInvolution<Rational> {
    ProjInvolution::diagonal(&Rationals, [int(1), int(-1), int(1)]).unwrap()
}

/// Orbit representatives q0, q1, q3, q4, q6 of the symmetric example.
pub fn ex_z4_representatives() -> Scheme<Rational> {
    let full = ex_z4().scheme();
    let mut s = Scheme::new();
    for it in full.items() {
        if ["q0", "q1", "q3", "q4", "q6"].contains(&it.label.as_str()) {
            s.push(&Rationals, it.label.clone(), it.point.clone(), it.chain.clone()).unwrap();
        }
    }
    s
}

pub fn ex_z4_golden() -> PlaneCurve<Rational> {
    PlaneCurve::from_text(EX_Z4_CURVE).expect("golden curve parses")
}

pub fn torsion_sextic() -> PlaneCurve<Rational> {
    PlaneCurve::from_text(TORSION_SEXTIC).expect("sextic parses")
}

/// Degree-12 family of the symmetric example with q4 removed and a
/// quadruple point moving along y = z: q4(t) = [t, 1, 1].
pub fn ex_z4_moving_q4() -> ParamScheme {
    ParamScheme {
        fixed: ex_z4().scheme().without("q4"),
        moving: MovingItem {
            label: "q4".into(),
            base: [int(0), int(1), int(1)],
            dir: [int(1), int(0), int(0)],
            chain: ord(4),
        },
    }
}

/// Data of the degree-11 example: r1: x=0, r2: x=y, r3: y=0; q0=[0,0,1],
/// q1=[0,1,0], q2=[1,1,0], q3=[1,0,0], q4=[−1,1,1], q5=[1,−2,1] and the
/// tacnode q6=[t,0,1] with tangent r3.
pub struct Deg11Config {
    pub points: Vec<(String, ProjPoint<Rational>)>,
    pub r1: PlaneCurve<Rational>,
    pub r2: PlaneCurve<Rational>,
    pub r3: PlaneCurve<Rational>,
}

pub fn ex_deg11() -> Deg11Config {
    let pts = [(0, 0, 1), (0, 1, 0), (1, 1, 0), (1, 0, 0), (-1, 1, 1), (1, -2, 1)];
    Deg11Config {
        points: pts
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("q{i}"), point(p.0, p.1, p.2)))
            .collect(),
        r1: line("x"),
        r2: line("x - y"),
        r3: line("y"),
    }
}

impl Deg11Config {
    /// Constant part of the degree-11 scheme (everything but q6).
    pub fn fixed_scheme(&self) -> Scheme<Rational> {
        let q = Rationals;
        let mut s = Scheme::new();
        let tan = |l: &PlaneCurve<Rational>| Tangent::Line(l.clone());
        for (i, (name, p)) in self.points.iter().enumerate() {
            let c = match i {
                1 => SingChain::chain(4, 4, tan(&self.r1)).unwrap(),
                2 => SingChain::chain(4, 4, tan(&self.r2)).unwrap(),
                4 | 5 => ord(4),
                _ => ord(3),
            };
            s.push(&q, name.clone(), p.clone(), c).unwrap();
        }
        s
    }

    pub fn family(&self) -> ParamScheme {
        ParamScheme {
            fixed: self.fixed_scheme(),
            moving: MovingItem {
                label: "q6".into(),
                base: [int(0), int(0), int(1)],
                dir: [int(1), int(0), int(0)],
                chain: chain(2, 2, "y"),
            },
        }
    }

    /// The Du Val configuration at q6 = [t0, 0, 1]: the degree-12 branch
    /// curve is r3 plus the degree-11 curve.
    pub fn duval_at<F: Field>(&self, f: &F, t0: &F::Elem) -> Result<DuValConfig<F::Elem>> {
        let lift = |c: &Rational| f.from_rational(c).unwrap();
        let mut points = self
            .points
            .iter()
            .map(|(n, p)| Ok((n.clone(), p.map(f, lift)?)))
            .collect::<Result<Vec<_>>>()?;
        points.push(("q6".into(), ProjPoint::new(f, [t0.clone(), f.zero(), f.one()])?));
        let r3 = self.r3.map(f, lift);
        Ok(DuValConfig {
            points,
            r1: self.r1.map(f, lift),
            r2: self.r2.map(f, lift),
            r3: r3.clone(),
            fixed_line: Some(r3),
        })
    }

    /// The full degree-11 scheme over a field containing t0.
    pub fn scheme_at<F: Field>(&self, f: &F, t0: &F::Elem) -> Result<Scheme<F::Elem>> {
        let mut s = self.fixed_scheme().map(f, |c| f.from_rational(c).unwrap())?;
        let r3 = self.r3.map(f, |c| f.from_rational(c).unwrap());
        let q6 = ProjPoint::new(f, [t0.clone(), f.zero(), f.one()])?;
        s.push(f, "q6", q6, SingChain::chain(2, 2, Tangent::Line(r3))?)?;
        Ok(s)
    }
}

/// A Campedelli-type configuration: a quadruple point q and five [3,3]
/// points whose tangents all pass through q (so the tangent lines are
/// branch-relevant in the standard way), not on a common conic with q.
pub struct CampedelliConfig {
    pub q: ProjPoint<Rational>,
    pub points: Vec<(String, ProjPoint<Rational>, PlaneCurve<Rational>)>,
}

pub fn campedelli() -> CampedelliConfig {
    let pts = [(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, -1, 1), (-1, 3, 1)];
    CampedelliConfig {
        q: point(0, 0, 1),
        points: pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let tangent = PlaneCurve::linear(&Rationals, [int(-p.1), int(p.0), int(0)]);
                (format!("p{}", i + 1), point(p.0, p.1, p.2), tangent)
            })
            .collect(),
    }
}

impl CampedelliConfig {
    /// Degree-10 branch scheme: [4] at q and [3,3] at each point.
    pub fn scheme(&self) -> Scheme<Rational> {
        let q = Rationals;
        let mut s = Scheme::new();
        s.push(&q, "q", self.q.clone(), ord(4)).unwrap();
        for (name, p, t) in &self.points {
            s.push(&q, name.clone(), p.clone(), SingChain::chain(3, 3, Tangent::Line(t.clone())).unwrap())
                .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_files_parse() {
        let g = ex_z4_golden();
        assert_eq!(g.degree(), 12);
        assert_eq!(g.num_terms(), 37);
        let s = torsion_sextic();
        assert_eq!((s.degree(), s.num_terms()), (6, 13));
    }

    #[test]
    fn schemes_are_well_formed() {
        assert_eq!(ex_z4().scheme().len(), 7);
        assert_eq!(ex_z4_representatives().len(), 5);
        assert_eq!(ex_deg11().fixed_scheme().len(), 6);
        assert_eq!(campedelli().scheme().len(), 6);
    }
}
