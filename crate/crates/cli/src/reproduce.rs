use std::path::Path;

use godeaux_core::algebra::{Field, NumberField, Rational, Rationals};
use godeaux_core::configs::{ex_deg11, ex_z4, ex_z4_golden, phi_y, torsion_sextic};
use godeaux_core::plane::{Eigenspace, PlaneCurve};
use godeaux_core::surface::{campedelli_obstruction, duval_torsion, ObstructionVerdict, TorsionVerdict};
use godeaux_core::system::{rank_drop_locus, LinearSystem, Locus};
use godeaux_core::verify::{absolute_factor_count_with, verify_scheme, ScanOptions};

use crate::report::Report;

fn check(r: &mut Report, name: &str, ok: bool, detail: String) {
    r.line(format!("{} {name}: {detail}", if ok { "ok  " } else { "FAIL" }));
    r.data(name, ok);
    if !ok {
        r.negative();
    }
}

/// Terms that differ between two curves, as text lines.
fn curve_diff(got: &PlaneCurve<Rational>, want: &PlaneCurve<Rational>) -> Vec<String> {
    let (got, want) = (got.to_text(), want.to_text());
    let g: Vec<&str> = got.lines().collect();
    let w: Vec<&str> = want.lines().collect();
    let mut out = Vec::new();
    for l in &w {
        if !g.contains(l) {
            out.push(format!("- {l}"));
        }
    }
    for l in &g {
        if !w.contains(l) {
            out.push(format!("+ {l}"));
        }
    }
    out
}

pub fn ex_z4_target(out: &Path, modp: Option<u64>) -> Report {
    let mut r = Report::new("reproduce ex-z4");
    let q = Rationals;
    let cfg = ex_z4();
    let scheme = cfg.scheme();
    let inv = phi_y();
    let sys = match LinearSystem::assemble(&q, 12, &scheme, Some((&inv, Eigenspace::Plus))) {
        Ok(s) => s,
        Err(e) => return Report::error(&r.task, vec![e.to_string()]),
    };
    r.line(format!("invariant degree-12 curves: {} unknowns, {} conditions", sys.cols(), sys.matrix().rows()));
    r.data("eigenspace_dimension", sys.cols());
    let dim = sys.dimension(&q);
    if let Some(p) = modp {
        match crate::commands::modp_dimension(&q, &sys, p) {
            Ok(dp) => check(&mut r, "prefilter", dp == dim, format!("dimension mod {p} is {dp}, exact {dim}")),
            Err(e) => return Report::error(&r.task, vec![e]),
        }
    }
    check(&mut r, "dimension", dim == 0, format!("{dim}"));
    let curve = match sys.solve_unique(&q).and_then(|c| c.normalize_integer()) {
        Ok(c) => c,
        Err(e) => {
            r.line(format!("FAIL solve: {e}"));
            r.negative();
            return r;
        }
    };
    let golden = ex_z4_golden();
    let diff = curve_diff(&curve, &golden);
    check(
        &mut r,
        "golden",
        diff.is_empty(),
        format!("{} terms, {} differing lines", curve.num_terms(), diff.len()),
    );
    for l in &diff {
        r.line(format!("  {l}"));
    }
    r.witness("diff", &diff);
    match std::fs::write(out, curve.to_text()) {
        Ok(()) => r.line(format!("wrote {}", out.display())),
        Err(e) => {
            r.line(format!("FAIL write {}: {e}", out.display()));
            r.negative();
        }
    }
    match verify_scheme(&q, &curve, &scheme) {
        Ok(v) => {
            let bad: Vec<String> = v
                .items
                .iter()
                .filter(|(_, x)| x.verdict != godeaux_core::verify::Verdict::Exact)
                .map(|(l, x)| format!("{l}: {}", x.verdict))
                .collect();
            check(&mut r, "verify", bad.is_empty(), format!("{} items, {}", v.items.len(), v.overall()));
        }
        Err(e) => check(&mut r, "verify", false, e.to_string()),
    }
    let first = modp.unwrap_or(ScanOptions::default().first_prime);
    match absolute_factor_count_with(&q, &curve, first) {
        Ok(fc) => check(
            &mut r,
            "irreducible",
            fc.count == 1,
            format!(
                "{} absolutely irreducible factor(s){}",
                fc.count,
                fc.certified_mod.map(|p| format!(", certified mod {p}")).unwrap_or_default()
            ),
        ),
        Err(e) => check(&mut r, "irreducible", false, e.to_string()),
    }
    match duval_torsion(&q, &cfg, Some(&curve)) {
        Ok(t) => {
            let lines = PlaneCurve::parse_expr("y^2 - z^2").expect("valid");
            let want = torsion_sextic().mul(&q, &lines).normalize_integer().ok();
            let same = t.solutions.len() == 1 && t.solutions[0].normalize_integer().ok() == want;
            check(
                &mut r,
                "torsion",
                t.verdict == TorsionVerdict::Z4 && t.dimension == 0 && same,
                format!(
                    "{} (degree-8 system of dimension {}, {} sextic*(y-z)*(y+z))",
                    t.verdict,
                    t.dimension,
                    if same { "equal to" } else { "NOT equal to" }
                ),
            );
            for (h, ok) in &t.hypotheses {
                r.line(format!("     hypothesis: {h}: {}", if *ok { "yes" } else { "NO" }));
            }
        }
        Err(e) => check(&mut r, "torsion", false, e.to_string()),
    }
    r
}

pub fn ex_deg11_target() -> Report {
    deg11_locus("reproduce ex-deg11").0
}

fn deg11_locus(task: &str) -> (Report, Option<Locus>) {
    let mut r = Report::new(task);
    let locus = match rank_drop_locus(11, &ex_deg11().family()) {
        Ok(l) => l,
        Err(e) => return (Report::error(task, vec![e.to_string()]), None),
    };
    let Locus::Polynomial { raw, factors } = &locus else {
        r.line("FAIL every parameter value is a solution");
        r.negative();
        return (r, None);
    };
    r.line(format!("raw rank-drop polynomial: degree {}", raw.degree().unwrap_or(0)));
    for fac in factors {
        if let Some(why) = &fac.degenerate {
            r.line(format!("  excluded factor {}: {why}", fac.factor.to_string_in("t")));
        }
    }
    let ess = locus.essential_factors();
    let mut degs: Vec<usize> = ess.iter().map(|f| f.factor.degree().unwrap_or(0)).collect();
    degs.sort_unstable();
    let total: usize = degs.iter().sum();
    let squarefree = locus.essential().is_some_and(|p| p.is_squarefree(&Rationals));
    r.line(format!(
        "p(t): degree {total} = {}",
        degs.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" + ")
    ));
    r.data("degree", total);
    r.data("factor_degrees", &degs);
    r.witness(
        "factors",
        ess.iter().map(|f| f.factor.to_string_in("t")).collect::<Vec<_>>(),
    );
    check(
        &mut r,
        "locus",
        total == 15 && degs == [5, 10] && squarefree,
        "squarefree of degree 15 with factors of degree 5 and 10".into(),
    );
    (r, Some(locus))
}

pub fn ex_deg11_full_target() -> Report {
    let (mut r, locus) = deg11_locus("reproduce ex-deg11-full");
    let Some(locus) = locus else { return r };
    let cfg = ex_deg11();
    let mut ess: Vec<_> = locus.essential_factors().into_iter().map(|f| f.factor.clone()).collect();
    ess.sort_by_key(|f| f.degree());
    for fac in ess {
        let deg = fac.degree().unwrap_or(0);
        let tag = format!("deg{deg}");
        let nf = match NumberField::new(fac.coeffs()) {
            Ok(nf) => nf,
            Err(e) => return Report::error(&r.task, vec![e.to_string()]),
        };
        let t0 = nf.generator();
        let outcome = (|| -> godeaux_core::Result<()> {
            let scheme = cfg.scheme_at(&nf, &t0)?;
            let curve = LinearSystem::assemble(&nf, 11, &scheme, None)?.solve_unique(&nf)?;
            check(&mut r, &format!("{tag}_solve"), true, format!("unique degree-11 curve over Q(t), deg t = {deg}"));
            let v = verify_scheme(&nf, &curve, &scheme)?;
            check(&mut r, &format!("{tag}_verify"), v.all_exact(), format!("{}", v.overall()));
            let dv = cfg.duval_at(&nf, &t0)?;
            let tr = duval_torsion(&nf, &dv, None)?;
            let want = if deg == 5 { TorsionVerdict::Z4 } else { TorsionVerdict::Z2 };
            check(
                &mut r,
                &format!("{tag}_torsion"),
                tr.verdict == want,
                format!("{} (degree-8 system of dimension {})", tr.verdict, tr.dimension),
            );
            let r3 = cfg.r3.map(&nf, |c| nf.from_rational(c).expect("rational"));
            let branch = curve.mul(&nf, &r3);
            let ob = campedelli_obstruction(&nf, &dv, &branch)?;
            check(
                &mut r,
                &format!("{tag}_obstruction"),
                ob.verdict == ObstructionVerdict::NotCampedelli,
                format!("{} (cubic irreducible: {})", ob.verdict, ob.irreducible),
            );
            Ok(())
        })();
        if let Err(e) = outcome {
            check(&mut r, &tag, false, e.to_string());
        }
    }
    r
}
