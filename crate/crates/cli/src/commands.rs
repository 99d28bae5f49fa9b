use std::collections::HashMap;

use godeaux_core::algebra::{ExactMatrix, Field, NumberField, PrimeField, Rational, Rationals};
use godeaux_core::configs::DuValConfig;
use godeaux_core::plane::{Eigenspace, Monomial, PlaneCurve, ProjInvolution};
use godeaux_core::scheme::{virtual_dimension, ProjPoint, Scheme, SingChain, Tangent};
use godeaux_core::surface::{
    beauville_tors2, campedelli_obstruction, canonical_resolution, divisor_selfcheck, duval_branch, duval_torsion,
    pg_adjoint, BranchComponent, DivisorClass,
};
use godeaux_core::system::LinearSystem;
use godeaux_core::verify::verify_scheme;
use godeaux_core::Error;
use num_traits::Zero;

use crate::report::Report;
use crate::scene::{format_entry, Entry, Scene, SymmetryDecl, TangentDecl};

/// A field in which scene entries can be read and written.
pub trait SceneField: Field {
    fn lift(&self, e: &Entry) -> Result<Self::Elem, String>;
    fn lower(&self, x: &Self::Elem) -> Entry;
}

impl SceneField for Rationals {
    fn lift(&self, e: &Entry) -> Result<Rational, String> {
        match e.len() {
            0 => Ok(Rational::zero()),
            1 => Ok(e[0].clone()),
            _ => Err("t is not defined over the rationals".into()),
        }
    }
    fn lower(&self, x: &Rational) -> Entry {
        if x.is_zero() {
            Vec::new()
        } else {
            vec![x.clone()]
        }
    }
}

impl SceneField for NumberField {
    fn lift(&self, e: &Entry) -> Result<Self::Elem, String> {
        Ok(self.from_poly(e))
    }
    fn lower(&self, x: &Self::Elem) -> Entry {
        let mut v = x.0.clone();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub modp: Option<u64>,
    pub eigenspace: Option<Eigenspace>,
    pub curve: Option<String>,
}

/// Scene data over a concrete field.
pub struct Typed<E> {
    pub points: HashMap<String, ProjPoint<E>>,
    pub lines: HashMap<String, PlaneCurve<E>>,
    pub scheme: Scheme<E>,
    pub symmetry: Option<ProjInvolution<E>>,
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

pub fn build<F: SceneField>(f: &F, scene: &Scene) -> Result<Typed<F::Elem>, String> {
    let lift3 = |v: &[Entry; 3]| -> Result<[F::Elem; 3], String> {
        Ok([f.lift(&v[0])?, f.lift(&v[1])?, f.lift(&v[2])?])
    };
    let mut points = HashMap::new();
    for (n, v) in &scene.points {
        points.insert(n.clone(), ProjPoint::new(f, lift3(v)?).map_err(|e| format!("point {n}: {e}"))?);
    }
    let mut lines = HashMap::new();
    for (n, v) in &scene.lines {
        lines.insert(n.clone(), PlaneCurve::linear(f, lift3(v)?));
    }
    let mut scheme = Scheme::new();
    for s in &scene.sings {
        let tangent = match &s.tangent {
            None => None,
            Some(TangentDecl::Free) => Some(Tangent::Free),
            Some(TangentDecl::Line(l)) => Some(Tangent::Line(lines[l].clone())),
        };
        let chain = SingChain::from_mults(&s.mults, tangent).map_err(|e| format!("sing {}: {e}", s.point))?;
        scheme
            .push(f, s.point.clone(), points[&s.point].clone(), chain)
            .map_err(|e| format!("sing {}: {e}", s.point))?;
    }
    let symmetry = match &scene.symmetry {
        None => None,
        Some(SymmetryDecl::Diagonal(d)) => Some(ProjInvolution::diagonal(f, lift3(d)?).map_err(err)?),
        Some(SymmetryDecl::Matrix(m)) => {
            let rows: Vec<Vec<F::Elem>> = m
                .chunks(3)
                .map(|r| r.iter().map(|e| f.lift(e)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            let mat = ExactMatrix::from_rows(f, rows, 3).map_err(err)?;
            Some(ProjInvolution::new(f, mat).map_err(err)?)
        }
    };
    Ok(Typed {
        points,
        lines,
        scheme,
        symmetry,
    })
}

impl<E: Clone + PartialEq + Send + Sync> Typed<E> {
    /// The declared scheme closed under the symmetry: images that are not
    /// declared are added, named after a declared point with the same
    /// coordinates when there is one.
    pub fn full_scheme<F: Field<Elem = E>>(&self, f: &F) -> Result<Scheme<E>, String> {
        let Some(inv) = &self.symmetry else {
            return Ok(self.scheme.clone());
        };
        let mut s = self.scheme.clone();
        for it in self.scheme.items() {
            let img = ProjPoint::new(f, inv.apply_point(f, it.point.coords())).map_err(err)?;
            if s.items().iter().any(|x| x.point == img) {
                continue;
            }
            let name = self
                .points
                .iter()
                .filter(|(_, p)| **p == img)
                .map(|(n, _)| n.clone())
                .min()
                .unwrap_or_else(|| format!("{}*", it.label));
            let tangent = it.chain.tangent().map(|t| match t {
                Tangent::Line(l) => Tangent::Line(inv.apply_curve(f, l)),
                Tangent::Free => Tangent::Free,
            });
            let chain = SingChain::from_mults(it.chain.mults(), tangent).map_err(err)?;
            s.push(f, name, img, chain).map_err(err)?;
        }
        Ok(s)
    }
}

fn degree_of(scene: &Scene, task: &str) -> Result<usize, String> {
    scene.degree.ok_or_else(|| format!("the scene declares no degree, which `{task}` needs"))
}

fn system<F: SceneField>(
    f: &F,
    scene: &Scene,
    typed: &Typed<F::Elem>,
    opts: &Options,
    task: &str,
) -> Result<LinearSystem<F::Elem>, String>
where
    F::Elem: std::fmt::Debug,
{
    let d = degree_of(scene, task)?;
    let which = opts.eigenspace.or(scene.eigenspace).unwrap_or(Eigenspace::Plus);
    let sym = typed.symmetry.as_ref().map(|s| (s, which));
    LinearSystem::assemble(f, d, &typed.scheme, sym).map_err(err)
}

/// Dimension of the system reduced mod p, when the field reduces there.
pub fn modp_dimension<F: Field>(f: &F, sys: &LinearSystem<F::Elem>, p: u64) -> Result<i64, String>
where
    F::Elem: std::fmt::Debug,
{
    let red = f
        .reduction(p)
        .ok_or_else(|| format!("{p} is not a usable prime for this field"))?;
    let m = sys.matrix();
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row: Option<Vec<u64>> = m.row(r).iter().map(|x| red.apply(x)).collect();
        rows.push(row.ok_or_else(|| format!("the system has a coefficient that is not {p}-integral"))?);
    }
    let fp = PrimeField::new(p).map_err(err)?;
    let mm = ExactMatrix::from_rows(&fp, rows, m.cols()).map_err(err)?;
    Ok(m.cols() as i64 - mm.rank(&fp) as i64 - 1)
}

pub fn curve_text<F: SceneField>(f: &F, c: &PlaneCurve<F::Elem>) -> String {
    let mut s = String::new();
    for (m, x) in c.terms() {
        let [a, b, e] = m.exps();
        s.push_str(&format!("{} {a} {b} {e}\n", format_entry(&f.lower(x)).replace(' ', "")));
    }
    s
}

/// Reads `coeff e_x e_y e_z` lines; coefficients may be polynomials in t.
pub fn parse_curve<F: SceneField>(f: &F, text: &str) -> Result<PlaneCurve<F::Elem>, String> {
    let mut terms = Vec::new();
    let mut degree = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() < 4 {
            return Err(format!("curve line {}: expected `coeff ex ey ez`", i + 1));
        }
        let k = parts.len() - 3;
        let mut e = [0u32; 3];
        for j in 0..3 {
            e[j] = parts[k + j]
                .parse()
                .map_err(|_| format!("curve line {}: bad exponent `{}`", i + 1, parts[k + j]))?;
        }
        let c = crate::scene::parse_entry(&parts[..k].join(" ")).map_err(|m| format!("curve line {}: {m}", i + 1))?;
        let m = Monomial::new(e[0], e[1], e[2]);
        let d = m.degree() as usize;
        if *degree.get_or_insert(d) != d {
            return Err(format!("curve line {}: inconsistent degree", i + 1));
        }
        terms.push((m, f.lift(&c).map_err(|m| format!("curve line {}: {m}", i + 1))?));
    }
    let degree = degree.ok_or("empty curve file")?;
    PlaneCurve::new(f, degree, terms).map_err(err)
}

fn load_curve<F: SceneField>(f: &F, opts: &Options) -> Result<Option<PlaneCurve<F::Elem>>, String> {
    match &opts.curve {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            parse_curve(f, &text).map(Some).map_err(|e| format!("{path}: {e}"))
        }
    }
}

pub fn run<F: SceneField>(f: &F, task: &str, scene: &Scene, opts: &Options) -> Report
where
    F::Elem: std::fmt::Debug,
{
    let typed = match build(f, scene) {
        Ok(t) => t,
        Err(e) => return Report::error(task, vec![e]),
    };
    let out = match task {
        "dim" => cmd_dim(f, scene, &typed, opts),
        "solve" => cmd_solve(f, scene, &typed, opts),
        "verify" => cmd_verify(f, scene, &typed, opts),
        "invariants" => cmd_invariants(f, scene, &typed),
        "torsion" => cmd_torsion(f, scene, &typed, opts),
        other => Err(format!("unknown task {other}")),
    };
    out.unwrap_or_else(|e| Report::error(task, vec![e]))
}

fn cmd_dim<F: SceneField>(f: &F, scene: &Scene, typed: &Typed<F::Elem>, opts: &Options) -> Result<Report, String>
where
    F::Elem: std::fmt::Debug,
{
    let mut r = Report::new("dim");
    let sys = system(f, scene, typed, opts, "dim")?;
    if let Some(p) = opts.modp {
        let dp = modp_dimension(f, &sys, p)?;
        r.line(format!("dimension mod {p}: {dp}"));
        r.witness("modp_dimension", (p, dp));
    }
    let dim = sys.dimension(f);
    let full = typed.full_scheme(f)?;
    let vdim = virtual_dimension(sys.degree(), &full);
    r.line(format!("dimension {dim}"));
    r.line(format!("virtual dimension {vdim}"));
    r.line(format!("conditions {} on {} unknowns", sys.matrix().rows(), sys.cols()));
    r.data("dimension", dim);
    r.data("virtual_dimension", vdim);
    r.witness("rows", sys.matrix().rows());
    r.witness("cols", sys.cols());
    if dim < 0 {
        r.negative();
    }
    Ok(r)
}

fn cmd_solve<F: SceneField>(f: &F, scene: &Scene, typed: &Typed<F::Elem>, opts: &Options) -> Result<Report, String>
where
    F::Elem: std::fmt::Debug,
{
    let mut r = Report::new("solve");
    let sys = system(f, scene, typed, opts, "solve")?;
    let dim = sys.dimension(f);
    r.data("dimension", dim);
    if dim < 0 {
        r.line("empty (dimension -1)");
        r.negative();
        return Ok(r);
    }
    let basis = sys.solve_basis(f).map_err(err)?;
    if dim == 0 {
        r.line(format!("unique curve ({} terms)", basis[0].num_terms()));
    } else {
        r.line(format!("dimension {dim}; basis of {} curves", basis.len()));
    }
    let texts: Vec<String> = basis.iter().map(|c| curve_text(f, c)).collect();
    for (i, t) in texts.iter().enumerate() {
        if basis.len() > 1 {
            r.line(format!("# curve {i}"));
        }
        r.line(t.trim_end());
    }
    r.data("curves", texts);
    Ok(r)
}

fn cmd_verify<F: SceneField>(f: &F, scene: &Scene, typed: &Typed<F::Elem>, opts: &Options) -> Result<Report, String> {
    let mut r = Report::new("verify");
    let curve = load_curve(f, opts)?.ok_or("verify needs --curve <file>")?;
    if let Some(d) = scene.degree {
        if d != curve.degree() {
            return Err(format!("the curve has degree {}, the scene declares {d}", curve.degree()));
        }
    }
    let scheme = typed.full_scheme(f)?;
    let report = verify_scheme(f, &curve, &scheme).map_err(err)?;
    let mut items = Vec::new();
    for (label, rep) in &report.items {
        let chain = scheme.find(label).map(|it| it.chain.to_string()).unwrap_or_default();
        r.line(format!(
            "{label} {chain}: {} (multiplicities {:?})",
            rep.verdict, rep.witness.multiplicities
        ));
        items.push(serde_json::json!({
            "label": label,
            "chain": chain,
            "verdict": rep.verdict,
            "multiplicities": rep.witness.multiplicities,
            "extension": rep.witness.extension,
        }));
    }
    let overall = report.overall();
    r.line(format!("overall {overall}"));
    r.data("overall", overall);
    r.witness("items", items);
    if !report.all_exact() {
        r.negative();
    }
    Ok(r)
}

fn cmd_invariants<F: SceneField>(f: &F, scene: &Scene, typed: &Typed<F::Elem>) -> Result<Report, String> {
    let mut r = Report::new("invariants");
    let d = degree_of(scene, "invariants")?;
    let mut comps: Vec<BranchComponent<F::Elem>> = scene
        .branch
        .iter()
        .map(|n| BranchComponent::Line {
            label: n.clone(),
            line: typed.lines[n].clone(),
        })
        .collect();
    comps.push(BranchComponent::Curve {
        label: "B".into(),
        degree: d,
        scheme: typed.full_scheme(f)?,
    });
    let res = canonical_resolution(f, &comps).map_err(err)?;
    let pg = pg_adjoint(f, &res).map_err(err)?;
    r.line(format!("chi {}, Ksq_cover {}", res.chi, res.k2_cover));
    r.line(format!("p_g {pg}"));
    r.data("chi", res.chi);
    r.data("k2_cover", res.k2_cover);
    r.data("pg", pg);
    let c = res.minus_two_curves().len();
    r.line(format!("(-2)-curves in the branch: {c}; minimal K^2 {}", res.k2_cover + c as i64));
    r.data("minus_two_curves", c);
    let sc = divisor_selfcheck(&res).map_err(err)?;
    let parts: Vec<String> = sc
        .checks
        .iter()
        .map(|(n, got, want, ok)| format!("{n}={got}{}", if *ok { String::new() } else { format!(" (want {want})") }))
        .collect();
    r.line(format!(
        "selfcheck {}; even {}: {}",
        parts.join(", "),
        sc.even,
        if sc.passed() { "pass" } else { "FAIL" }
    ));
    r.data("selfcheck", &sc);
    let classes: Vec<DivisorClass> = res.components.iter().map(|c| c.1.clone()).collect();
    let t2 = beauville_tors2(&classes).map_err(err)?;
    r.line(format!("2-torsion order {t2}"));
    r.data("tors2", t2);
    for (a, b, n) in &res.unaccounted {
        r.line(format!("note: {a} and {b} meet {n} more time(s) away from the centers"));
    }
    r.witness("multiplicities", &res.ledger.multiplicities);
    r.witness(
        "components",
        res.components.iter().map(|(n, c)| (n.clone(), c.to_string())).collect::<Vec<_>>(),
    );
    Ok(r)
}

pub fn duval_config<E: Clone>(scene: &Scene, typed: &Typed<E>) -> Result<DuValConfig<E>, String> {
    let decl = scene.duval.as_ref().ok_or("the scene has no `duval` declaration")?;
    Ok(DuValConfig {
        points: decl.points.iter().map(|n| (n.clone(), typed.points[n].clone())).collect(),
        r1: typed.lines[&decl.lines[0]].clone(),
        r2: typed.lines[&decl.lines[1]].clone(),
        r3: typed.lines[&decl.lines[2]].clone(),
        fixed_line: scene.fixed.as_ref().map(|l| typed.lines[l].clone()),
    })
}

fn cmd_torsion<F: SceneField>(f: &F, scene: &Scene, typed: &Typed<F::Elem>, opts: &Options) -> Result<Report, String> {
    let mut r = Report::new("torsion");
    let cfg = duval_config(scene, typed)?;
    let curve = load_curve(f, opts)?;
    let branch = match (&curve, &cfg.fixed_line) {
        (Some(c), Some(z)) if c.degree() == 11 => Some(c.mul(f, z)),
        (Some(c), _) if c.degree() == 12 => Some(c.clone()),
        (Some(c), _) => return Err(format!("the branch curve must have degree 12, not {}", c.degree())),
        (None, _) => None,
    };
    let tr = duval_torsion(f, &cfg, branch.as_ref()).map_err(err)?;
    r.line(format!("torsion {} (degree-8 system of dimension {})", tr.verdict, tr.dimension));
    r.data("torsion", tr.verdict);
    r.data("octic_dimension", tr.dimension);
    for (h, ok) in &tr.hypotheses {
        r.line(format!("hypothesis: {h}: {}", if *ok { "yes" } else { "NO" }));
    }
    r.witness("hypotheses", &tr.hypotheses);
    r.witness("octics", tr.solutions.iter().map(|c| curve_text(f, c)).collect::<Vec<_>>());
    if cfg.fixed_line.is_none() {
        let res = canonical_resolution(f, &duval_branch(f, &cfg).map_err(err)?).map_err(err)?;
        let classes: Vec<DivisorClass> = res.components.iter().map(|c| c.1.clone()).collect();
        let t2 = beauville_tors2(&classes).map_err(err)?;
        r.line(format!("2-torsion order {t2}"));
        r.data("tors2", t2);
    }
    if let Some(b) = &branch {
        match campedelli_obstruction(f, &cfg, b) {
            Ok(o) => {
                r.line(format!(
                    "campedelli obstruction: {} (cubic irreducible: {}, singular points on it: {}, unresolved: {})",
                    o.verdict,
                    o.irreducible,
                    o.scan.points.len(),
                    o.scan.unresolved.len()
                ));
                r.data("obstruction", o.verdict);
                r.witness("cubic", curve_text(f, &o.cubic));
            }
            Err(Error::NotApplicable(m)) => r.line(format!("campedelli obstruction: not applicable ({m})")),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(r)
}
