//! Line-oriented scene files.
//!
//! ```text
//! # comment
//! field rational                      # or: field number t^2 - 2
//! degree 12
//! point q0 = [0, 0, 1]                # entries: rationals or polynomials in t
//! line r1 = x - y                     # or: line r1 = [1, -1, 0]
//! sing q0 mult 4
//! sing q1 chain [4,4] tangent r1      # tangent: a line name or `free`
//! symmetry diag 1 -1 1                # or: symmetry matrix a b c d e f g h i
//! eigenspace plus
//! branch r1 r2                        # extra line components of the branch
//! duval q0 q1 q2 q3 q4 q5 q6 lines r1 r2 r3
//! fixed r3                            # line component of the degree-12 curve
//! task dim
//! ```

use std::collections::HashSet;
use std::fmt;

use godeaux_core::algebra::field::parse_rational;
use godeaux_core::algebra::{Field, NumberField, Rational, Rationals};
use godeaux_core::plane::Eigenspace;
use num_traits::{One, Zero};

/// Polynomial in the field generator t, coefficients from t^0 upward.
pub type Entry = Vec<Rational>;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldDecl {
    Rational,
    /// Minimal polynomial of t, coefficients from t^0 upward.
    Number(Entry),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TangentDecl {
    Line(String),
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingDecl {
    pub point: String,
    pub mults: Vec<u32>,
    pub tangent: Option<TangentDecl>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymmetryDecl {
    Diagonal([Entry; 3]),
    Matrix([Entry; 9]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DuValDecl {
    pub points: Vec<String>,
    pub lines: [String; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub field: FieldDecl,
    pub degree: Option<usize>,
    pub points: Vec<(String, [Entry; 3])>,
    pub lines: Vec<(String, [Entry; 3])>,
    pub sings: Vec<SingDecl>,
    pub symmetry: Option<SymmetryDecl>,
    pub eigenspace: Option<Eigenspace>,
    pub branch: Vec<String>,
    pub duval: Option<DuValDecl>,
    pub fixed: Option<String>,
    pub tasks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SceneError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

const TASKS: [&str; 5] = ["dim", "solve", "verify", "invariants", "torsion"];

// ---------------------------------------------------------------------------
// entries

fn trim(mut e: Entry) -> Entry {
    while e.last().is_some_and(|c| c.is_zero()) {
        e.pop();
    }
    e
}

/// Parses `3/2*t^2 - t + 1`.
pub fn parse_entry(text: &str) -> Result<Entry, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let mut out: Entry = Vec::new();
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        if ch == '+' || ch == '-' {
            if i > 0 {
                chunks.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    chunks.push((neg, cur));
    for (neg, chunk) in chunks {
        if chunk.is_empty() {
            return Err(format!("malformed number `{text}`"));
        }
        let mut c = Rational::one();
        let mut k = 0usize;
        for factor in chunk.split('*') {
            match factor.split_once('^') {
                Some(("t", p)) => k += p.parse::<usize>().map_err(|_| format!("bad exponent in `{factor}`"))?,
                Some(_) => return Err(format!("malformed term `{factor}`")),
                None if factor == "t" => k += 1,
                None => c *= parse_rational(factor).map_err(|_| format!("malformed rational `{factor}`"))?,
            }
        }
        if neg {
            c = -c;
        }
        if out.len() <= k {
            out.resize(k + 1, Rational::zero());
        }
        out[k] += c;
    }
    Ok(trim(out))
}

pub fn format_entry(e: &Entry) -> String {
    if e.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, c) in e.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (neg, a) = if c < &Rational::zero() { (true, -c.clone()) } else { (false, c.clone()) };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => "t".into(),
            k => format!("t^{k}"),
        };
        match (a.is_one(), mono.is_empty()) {
            (true, false) => s.push_str(&mono),
            (_, true) => s.push_str(&a.to_string()),
            (false, false) => s.push_str(&format!("{a}*{mono}")),
        }
    }
    s
}

fn parse_vector<const N: usize>(text: &str) -> Result<[Entry; N], String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("expected [..] with {N} entries"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} entries, got {}", parts.len()));
    }
    let v: Vec<Entry> = parts.iter().map(|p| parse_entry(p)).collect::<Result<_, _>>()?;
    Ok(v.try_into().expect("length checked"))
}

fn format_vector(v: &[Entry]) -> String {
    format!("[{}]", v.iter().map(format_entry).collect::<Vec<_>>().join(", "))
}

fn parse_line_rhs(text: &str) -> Result<[Entry; 3], String> {
    if text.trim_start().starts_with('[') {
        return parse_vector::<3>(text);
    }
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out: [Entry; 3] = Default::default();
    let mut start = 0;
    let bytes = s.as_bytes();
    for end in (1..=s.len()).filter(|&i| i == s.len() || bytes[i] == b'+' || bytes[i] == b'-') {
        let term = &s[start..end];
        start = end;
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => ("-", &term[1..]),
            Some(b'+') => ("", &term[1..]),
            _ => ("", term),
        };
        let factors: Vec<&str> = body.split('*').collect();
        let vars: Vec<usize> = factors.iter().filter_map(|f| ["x", "y", "z"].iter().position(|v| v == f)).collect();
        let [var] = vars[..] else {
            return Err(format!("`{text}` is not a linear form"));
        };
        let rest: Vec<&str> = factors.into_iter().filter(|f| !["x", "y", "z"].contains(f)).collect();
        let coeff = if rest.is_empty() { "1".to_string() } else { rest.join("*") };
        let c = parse_entry(&format!("{sign}{coeff}"))?;
        let sum = std::mem::take(&mut out[var]);
        out[var] = add_entries(sum, c);
    }
    if out.iter().all(|e| e.is_empty()) {
        return Err(format!("`{text}` is the zero form"));
    }
    Ok(out)
}

fn add_entries(mut a: Entry, b: Entry) -> Entry {
    if a.len() < b.len() {
        a.resize(b.len(), Rational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    trim(a)
}

fn name_ok(s: &str) -> bool {
    let mut ch = s.chars();
    ch.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

// ---------------------------------------------------------------------------
// parsing

struct Located<T> {
    line: usize,
    item: T,
}

pub fn parse_scene(text: &str) -> Result<Scene, Vec<SceneError>> {
    let mut errs: Vec<SceneError> = Vec::new();
    let mut err = |line: usize, m: String| errs.push(SceneError { line, message: m });
    let mut scene = Scene {
        field: FieldDecl::Rational,
        degree: None,
        points: Vec::new(),
        lines: Vec::new(),
        sings: Vec::new(),
        symmetry: None,
        eigenspace: None,
        branch: Vec::new(),
        duval: None,
        fixed: None,
        tasks: Vec::new(),
    };
    let mut field_seen = false;
    let mut field_bad = false;
    let mut sing_lines: Vec<usize> = Vec::new();
    let mut refs: Vec<Located<(String, &'static str)>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        match kw {
            "field" => {
                if field_seen {
                    err(no, "field declared twice".into());
                }
                field_seen = true;
                match words.first() {
                    Some(&"rational") if words.len() == 1 => scene.field = FieldDecl::Rational,
                    Some(&"number") => match parse_entry(&words[1..].join(" ")) {
                        Ok(mp) if mp.len() >= 2 => scene.field = FieldDecl::Number(mp),
                        Ok(_) => {
                            field_bad = true;
                            err(no, "the minimal polynomial must have positive degree".into())
                        }
                        Err(e) => {
                            field_bad = true;
                            err(no, e)
                        }
                    },
                    _ => {
                        field_bad = true;
                        err(no, "expected `field rational` or `field number <polynomial in t>`".into())
                    }
                }
            }
            "degree" => match (words.as_slice(), scene.degree) {
                (_, Some(_)) => err(no, "degree declared twice".into()),
                ([d], None) => match d.parse::<usize>() {
                    Ok(d) => scene.degree = Some(d),
                    Err(_) => err(no, format!("malformed degree `{d}`")),
                },
                _ => err(no, "expected `degree <d>`".into()),
            },
            "point" | "line" => {
                let Some((name, rhs)) = rest.split_once('=') else {
                    err(no, format!("expected `{kw} <name> = ...`"));
                    continue;
                };
                let name = name.trim().to_string();
                if !name_ok(&name) {
                    err(no, format!("invalid name `{name}`"));
                    continue;
                }
                let taken = scene.points.iter().chain(&scene.lines).any(|(n, _)| n == &name);
                if taken {
                    err(no, format!("`{name}` declared twice"));
                    continue;
                }
                let parsed = if kw == "point" { parse_vector::<3>(rhs) } else { parse_line_rhs(rhs) };
                match parsed {
                    Ok(v) if v.iter().all(|e| e.is_empty()) => err(no, format!("`{name}` is the zero vector")),
                    Ok(v) if kw == "point" => scene.points.push((name, v)),
                    Ok(v) => scene.lines.push((name, v)),
                    Err(e) => err(no, e),
                }
            }
            "sing" => match parse_sing(&words) {
                Ok(s) => {
                    refs.push(Located {
                        line: no,
                        item: (s.point.clone(), "point"),
                    });
                    if let Some(TangentDecl::Line(l)) = &s.tangent {
                        refs.push(Located {
                            line: no,
                            item: (l.clone(), "line"),
                        });
                    }
                    if scene.sings.iter().any(|x| x.point == s.point) {
                        err(no, format!("`{}` has two singularity declarations", s.point));
                    }
                    scene.sings.push(s);
                    sing_lines.push(no);
                }
                Err(e) => err(no, e),
            },
            "symmetry" => {
                if scene.symmetry.is_some() {
                    err(no, "symmetry declared twice".into());
                }
                let parse_all = |ws: &[&str]| ws.iter().map(|w| parse_entry(w)).collect::<Result<Vec<_>, _>>();
                match words.split_first() {
                    Some((&"diag", ws)) if ws.len() == 3 => match parse_all(ws) {
                        Ok(v) => scene.symmetry = Some(SymmetryDecl::Diagonal(v.try_into().unwrap())),
                        Err(e) => err(no, e),
                    },
                    Some((&"matrix", ws)) if ws.len() == 9 => match parse_all(ws) {
                        Ok(v) => scene.symmetry = Some(SymmetryDecl::Matrix(v.try_into().unwrap())),
                        Err(e) => err(no, e),
                    },
                    _ => err(no, "expected `symmetry diag a b c` or `symmetry matrix` with 9 entries".into()),
                }
            }
            "eigenspace" => match words.as_slice() {
                ["plus"] => scene.eigenspace = Some(Eigenspace::Plus),
                ["minus"] => scene.eigenspace = Some(Eigenspace::Minus),
                _ => err(no, "expected `eigenspace plus` or `eigenspace minus`".into()),
            },
            "branch" => {
                if words.is_empty() {
                    err(no, "expected at least one line name".into());
                }
                for w in &words {
                    refs.push(Located {
                        line: no,
                        item: (w.to_string(), "line"),
                    });
                    scene.branch.push(w.to_string());
                }
            }
            "duval" => match words.as_slice() {
                [p @ .., "lines", a, b, c] if p.len() == 7 => {
                    for w in p {
                        refs.push(Located {
                            line: no,
                            item: (w.to_string(), "point"),
                        });
                    }
                    for w in [a, b, c] {
                        refs.push(Located {
                            line: no,
                            item: (w.to_string(), "line"),
                        });
                    }
                    scene.duval = Some(DuValDecl {
                        points: p.iter().map(|s| s.to_string()).collect(),
                        lines: [a.to_string(), b.to_string(), c.to_string()],
                    });
                }
                _ => err(no, "expected `duval q0 q1 q2 q3 q4 q5 q6 lines r1 r2 r3`".into()),
            },
            "fixed" => match words.as_slice() {
                [l] => {
                    refs.push(Located {
                        line: no,
                        item: (l.to_string(), "line"),
                    });
                    scene.fixed = Some(l.to_string());
                }
                _ => err(no, "expected `fixed <line>`".into()),
            },
            "task" => {
                for w in &words {
                    if TASKS.contains(w) {
                        scene.tasks.push(w.to_string());
                    } else {
                        err(no, format!("unknown task `{w}`"));
                    }
                }
            }
            other => err(no, format!("unknown keyword `{other}`")),
        }
    }

    let points: HashSet<&str> = scene.points.iter().map(|(n, _)| n.as_str()).collect();
    let lines: HashSet<&str> = scene.lines.iter().map(|(n, _)| n.as_str()).collect();
    for r in &refs {
        let (name, kind) = &r.item;
        let known = if *kind == "point" { &points } else { &lines };
        if !known.contains(name.as_str()) {
            err(r.line, format!("undeclared {kind} `{name}`"));
        }
    }
    if scene.tasks.iter().any(|t| t == "solve" || t == "dim") && scene.degree.is_none() {
        err(0, "a degree is required for dim and solve tasks".into());
    }
    if !field_bad {
        errs.extend(validate(&scene, &sing_lines));
    }
    if errs.is_empty() {
        Ok(scene)
    } else {
        errs.sort_by_key(|e| e.line);
        Err(errs)
    }
}

fn parse_sing(words: &[&str]) -> Result<SingDecl, String> {
    match words {
        [p, "mult", m] => Ok(SingDecl {
            point: p.to_string(),
            mults: vec![m.parse::<u32>().map_err(|_| format!("malformed multiplicity `{m}`"))?],
            tangent: None,
        }),
        [p, "chain", rest @ ..] => {
            let joined = rest.join(" ");
            let (chain, tangent) = joined
                .split_once("tangent")
                .ok_or_else(|| "a chain needs `tangent <line|free>`".to_string())?;
            let inner = chain
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| format!("malformed chain `{}`", chain.trim()))?;
            let mults = inner
                .split(',')
                .map(|m| m.trim().parse::<u32>().map_err(|_| format!("malformed multiplicity `{}`", m.trim())))
                .collect::<Result<Vec<_>, _>>()?;
            let tangent = match tangent.trim() {
                "free" => TangentDecl::Free,
                "" => return Err("missing tangent".into()),
                l => TangentDecl::Line(l.to_string()),
            };
            Ok(SingDecl {
                point: p.to_string(),
                mults,
                tangent: Some(tangent),
            })
        }
        _ => Err("expected `sing <point> mult <m>` or `sing <point> chain [m1,m2] tangent <line|free>`".into()),
    }
}

/// Field-dependent checks: the field is valid and tangents pass through
/// their points.
fn validate(scene: &Scene, sing_lines: &[usize]) -> Vec<SceneError> {
    match &scene.field {
        FieldDecl::Rational => {
            let mut out = Vec::new();
            let uses_t = scene.points.iter().chain(&scene.lines).any(|(_, v)| v.iter().any(|e| e.len() > 1));
            if uses_t {
                out.push(SceneError {
                    line: 0,
                    message: "t is only available after `field number ...`".into(),
                });
                return out;
            }
            validate_in(scene, sing_lines, &Rationals, |e| Ok(e.first().cloned().unwrap_or_else(Rational::zero)))
        }
        FieldDecl::Number(mp) => match NumberField::new(mp) {
            Ok(nf) => validate_in(scene, sing_lines, &nf, |e| Ok(nf.from_poly(e))),
            Err(e) => vec![SceneError {
                line: 0,
                message: format!("invalid number field: {e}"),
            }],
        },
    }
}

fn validate_in<F: Field>(
    scene: &Scene,
    sing_lines: &[usize],
    f: &F,
    lift: impl Fn(&Entry) -> Result<F::Elem, String>,
) -> Vec<SceneError> {
    let mut out = Vec::new();
    for (s, &no) in scene.sings.iter().zip(sing_lines) {
        let Some(TangentDecl::Line(l)) = &s.tangent else { continue };
        // undeclared names are reported by the caller
        let Some((_, p)) = scene.points.iter().find(|(n, _)| n == &s.point) else { continue };
        let Some((_, c)) = scene.lines.iter().find(|(n, _)| n == l) else { continue };
        let mut acc = f.zero();
        for (a, b) in p.iter().zip(c) {
            match (lift(a), lift(b)) {
                (Ok(a), Ok(b)) => acc = f.add(&acc, &f.mul(&a, &b)),
                (Err(e), _) | (_, Err(e)) => out.push(SceneError { line: no, message: e }),
            }
        }
        if !f.is_zero(&acc) {
            out.push(SceneError {
                line: no,
                message: format!("tangent {l} does not pass through {}", s.point),
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// serialization

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            FieldDecl::Rational => writeln!(f, "field rational")?,
            FieldDecl::Number(mp) => writeln!(f, "field number {}", format_entry(mp))?,
        }
        if let Some(d) = self.degree {
            writeln!(f, "degree {d}")?;
        }
        for (n, v) in &self.points {
            writeln!(f, "point {n} = {}", format_vector(v))?;
        }
        for (n, v) in &self.lines {
            writeln!(f, "line {n} = {}", format_vector(v))?;
        }
        for s in &self.sings {
            match (&s.mults[..], &s.tangent) {
                ([m], None) => writeln!(f, "sing {} mult {m}", s.point)?,
                (ms, t) => {
                    let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                    let t = match t {
                        Some(TangentDecl::Line(l)) => l.as_str(),
                        _ => "free",
                    };
                    writeln!(f, "sing {} chain [{}] tangent {t}", s.point, ms.join(","))?
                }
            }
        }
        match &self.symmetry {
            Some(SymmetryDecl::Diagonal(d)) => {
                writeln!(f, "symmetry diag {}", d.iter().map(|e| format_entry(e).replace(' ', "")).collect::<Vec<_>>().join(" "))?
            }
            Some(SymmetryDecl::Matrix(m)) => {
                writeln!(f, "symmetry matrix {}", m.iter().map(|e| format_entry(e).replace(' ', "")).collect::<Vec<_>>().join(" "))?
            }
            None => {}
        }
        match self.eigenspace {
            Some(Eigenspace::Plus) => writeln!(f, "eigenspace plus")?,
            Some(Eigenspace::Minus) => writeln!(f, "eigenspace minus")?,
            None => {}
        }
        if !self.branch.is_empty() {
            writeln!(f, "branch {}", self.branch.join(" "))?;
        }
        if let Some(d) = &self.duval {
            writeln!(f, "duval {} lines {}", d.points.join(" "), d.lines.join(" "))?;
        }
        if let Some(l) = &self.fixed {
            writeln!(f, "fixed {l}")?;
        }
        if !self.tasks.is_empty() {
            writeln!(f, "task {}", self.tasks.join(" "))?;
        }
        Ok(())
    }
}
