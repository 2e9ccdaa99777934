use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use avtk::doc::{
    from_json, read_torus, to_canonical_json, MatrixDoc, PointsDoc, SublatticeDoc, TorusDoc,
};
use avtk::elliptic::{compare_quotient, formal_quotient_isomorphic, reduce_tau, QuadNumber};
use avtk::gallery::{self, isom_verdict_json, pp_verdict_json, DemoParams};
use avtk::homs::{self, IsomVerdict};
use avtk::linalg::IntMatrix;
use avtk::ppsearch::{admissible_family, pp_search_family, PpVerdict};
use avtk::torus::{
    isogeny_degree, FiniteSubgroup, PolarisedTorus, SubvarietyEmbedding, TorsionPoint,
};
use avtk::Error;
use serde_json::{json, Value};

use crate::args::{Command, DemoArgs, EllipticArgs};
use crate::report::{Outcome, Verdict};

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Document(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub type CmdResult = Result<Outcome, Failure>;

/// Files read so far, in order, for the inputs digest.
#[derive(Default)]
pub struct Inputs {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        })?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
            code: 1,
            message: format!("{}: not UTF-8", path.display()),
        })?;
        self.files.push((path.display().to_string(), bytes));
        Ok(text)
    }

    fn torus(&mut self, path: &Path) -> Result<PolarisedTorus, Failure> {
        let text = self.read(path)?;
        read_torus(&text).map_err(|e| in_file(path, e))
    }

    fn points(&mut self, path: &Path, t: &PolarisedTorus) -> Result<Vec<TorsionPoint>, Failure> {
        let text = self.read(path)?;
        from_json::<PointsDoc>(&text)
            .and_then(|d| d.to_points(t))
            .map_err(|e| in_file(path, e))
    }

    fn sublattice(&mut self, path: &Path, t: &PolarisedTorus) -> Result<IntMatrix, Failure> {
        let text = self.read(path)?;
        from_json::<SublatticeDoc>(&text)
            .and_then(|d| d.to_matrix(2 * t.dim()))
            .map_err(|e| in_file(path, e))
    }
}

fn in_file(path: &Path, e: Error) -> Failure {
    let f = Failure::from(e);
    Failure {
        code: f.code,
        message: format!("{}: {}", path.display(), f.message),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn rows_text(rows: &[Vec<String>]) -> String {
    rows.iter()
        .map(|r| format!("  [{}]", r.join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn subgroup_json(g: &FiniteSubgroup) -> Value {
    json!({
        "order": g.order().to_string(),
        "invariants": g.invariants().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "generators": g.generators().iter().map(|p| json!({
            "coords": p.to_strings(),
            "order": p.order().to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn subgroup_text(label: &str, g: &FiniteSubgroup) -> String {
    let inv: Vec<String> = g.invariants().iter().map(ToString::to_string).collect();
    let mut s = format!(
        "{label}: order {}, invariants ({})",
        g.order(),
        inv.join(", ")
    );
    for p in g.generators() {
        let _ = write!(s, "\n  {p} of order {}", p.order());
    }
    s
}

/// Parameters echoed into the report.
pub fn params_of(cmd: &Command) -> Value {
    let p = |x: &PathBuf| x.display().to_string();
    match cmd {
        Command::Type { torus } | Command::Kernel { torus } => json!({"torus": p(torus)}),
        Command::Quotient { torus, points, out } => {
            json!({"torus": p(torus), "points": p(points), "out": out.as_ref().map(p)})
        }
        Command::Complement { torus, points } => json!({"torus": p(torus), "points": p(points)}),
        Command::Dual { torus, raw, out } => {
            json!({"torus": p(torus), "raw": raw, "out": out.as_ref().map(p)})
        }
        Command::Sub { torus, sublattice } | Command::Idempotent { torus, sublattice } => {
            json!({"torus": p(torus), "sublattice": p(sublattice)})
        }
        Command::Hom { x, y } => json!({"x": p(x), "y": p(y)}),
        Command::IsomSearch {
            x,
            y,
            bound,
            polarised,
        } => json!({"x": p(x), "y": p(y), "bound": bound, "polarised": polarised}),
        Command::PpSearch { a, a_hat, bound } => {
            json!({"a": p(a), "a_hat": p(a_hat), "bound": bound})
        }
        Command::Elliptic(e) => json!({"tau": e.tau, "n": e.n, "formal": e.formal}),
        Command::Degree { matrix } => json!({"matrix": p(matrix)}),
        Command::Demo(d) => json!({
            "name": d.name,
            "n": d.n,
            "type": d.ty,
            "bound": d.bound,
            "max_d": d.max_d,
            "out": d.out.as_ref().map(p),
        }),
    }
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Type { .. } => "type",
        Command::Kernel { .. } => "kernel",
        Command::Quotient { .. } => "quotient",
        Command::Complement { .. } => "complement",
        Command::Dual { .. } => "dual",
        Command::Sub { .. } => "sub",
        Command::Idempotent { .. } => "idempotent",
        Command::Hom { .. } => "hom",
        Command::IsomSearch { .. } => "isom-search",
        Command::PpSearch { .. } => "pp-search",
        Command::Elliptic(_) => "elliptic",
        Command::Degree { .. } => "degree",
        Command::Demo(_) => "demo",
    }
}

pub fn run(cmd: &Command, inputs: &mut Inputs) -> CmdResult {
    match cmd {
        Command::Type { torus } => {
            let t = inputs.torus(torus)?;
            let ty = t.polarisation_type()?;
            Ok(Outcome::pass(
                json!({"type": ty.to_string(), "dim": t.dim(), "principal": ty.is_principal()}),
                format!("type {ty}"),
            ))
        }
        Command::Kernel { torus } => {
            let t = inputs.torus(torus)?;
            let k = t.polarising_kernel();
            Ok(Outcome::pass(
                subgroup_json(&k),
                subgroup_text("ker φ_L", &k),
            ))
        }
        Command::Quotient { torus, points, out } => quotient(inputs, torus, points, out.as_deref()),
        Command::Complement { torus, points } => {
            let t = inputs.torus(torus)?;
            let pts = inputs.points(points, &t)?;
            let g = t.symplectic_complement(&pts)?;
            Ok(Outcome::pass(subgroup_json(&g), subgroup_text("G^⊥", &g)))
        }
        Command::Dual { torus, raw, out } => dual(inputs, torus, *raw, out.as_deref()),
        Command::Sub { torus, sublattice } => {
            let t = inputs.torus(torus)?;
            let m = inputs.sublattice(sublattice, &t)?;
            let e = SubvarietyEmbedding::new(t, m)?;
            let r = e.restricted_polarisation()?;
            Ok(Outcome::pass(
                json!({
                    "dim": e.dim(),
                    "gram": r.gram.to_string_rows(),
                    "type": r.ptype.to_string(),
                    "exponent": r.exponent.to_string(),
                }),
                format!(
                    "restricted type {}, exponent {}\ngram:\n{}",
                    r.ptype,
                    r.exponent,
                    rows_text(&r.gram.to_string_rows())
                ),
            ))
        }
        Command::Idempotent { torus, sublattice } => {
            let t = inputs.torus(torus)?;
            let m = inputs.sublattice(sublattice, &t)?;
            let e = SubvarietyEmbedding::new(t, m)?;
            let d = homs::idempotent(&e)?;
            let c = homs::complementary_subvariety(&e)?;
            let comp = SublatticeDoc::from_matrix(c.sublattice());
            Ok(Outcome::pass(
                json!({
                    "epsilon": d.epsilon.to_string_rows(),
                    "exponent": d.exponent.to_string(),
                    "norm": d.norm.to_string_rows(),
                    "complement": comp,
                }),
                format!(
                    "exponent {}\nε:\n{}\nNm:\n{}\ncomplement columns:\n{}",
                    d.exponent,
                    rows_text(&d.epsilon.to_string_rows()),
                    rows_text(&d.norm.to_string_rows()),
                    rows_text(&c.sublattice().transpose().to_string_rows())
                ),
            ))
        }
        Command::Hom { x, y } => {
            let tx = inputs.torus(x)?;
            let ty = inputs.torus(y)?;
            let hs = homs::hom_module(&tx, &ty)?;
            let mut text = format!("rank {}", hs.len());
            for (i, h) in hs.iter().enumerate() {
                let _ = write!(
                    text,
                    "\ngenerator {i}:\n{}",
                    rows_text(&h.rational_rep.to_string_rows())
                );
            }
            let gens: Vec<Value> = hs
                .iter()
                .map(|h| {
                    json!({
                        "rational_rep": h.rational_rep.to_string_rows(),
                        "analytic_rep": h.analytic_rep.to_strings(),
                    })
                })
                .collect();
            Ok(Outcome::pass(
                json!({"rank": hs.len(), "generators": gens}),
                text,
            ))
        }
        Command::IsomSearch {
            x,
            y,
            bound,
            polarised,
        } => {
            let tx = inputs.torus(x)?;
            let ty = inputs.torus(y)?;
            let v = homs::isom_search(&tx, &ty, *bound, *polarised)?;
            Ok(isom_outcome(&v))
        }
        Command::PpSearch { a, a_hat, bound } => {
            let ta = inputs.torus(a)?;
            let th = inputs.torus(a_hat)?;
            let fam = admissible_family(&ta, &th)?;
            let v = pp_search_family(&fam, &ta, &th, *bound)?;
            let mut result = pp_verdict_json(&v);
            result["family"] = json!(fam
                .basis
                .iter()
                .map(IntMatrix::to_string_rows)
                .collect::<Vec<_>>());
            let text = match &v {
                PpVerdict::Found { h, tested, .. } => format!(
                    "found after {tested} candidates (family rank {}):\n{}",
                    fam.rank(),
                    rows_text(&h.to_string_rows())
                ),
                PpVerdict::NotFoundUpToBound { bound, tested, .. } => format!(
                    "not found up to bound {bound}: {tested} candidates, family rank {} (bounded evidence only)",
                    fam.rank()
                ),
            };
            let (verdict, exit) = match v {
                PpVerdict::Found { .. } => (Verdict::Pass, 0),
                PpVerdict::NotFoundUpToBound { .. } => (Verdict::Bounded, 3),
            };
            Ok(Outcome {
                result,
                text,
                verdict,
                exit,
            })
        }
        Command::Elliptic(e) => elliptic(e),
        Command::Degree { matrix } => {
            let text = inputs.read(matrix)?;
            let m = from_json::<MatrixDoc>(&text)
                .and_then(|d| d.to_matrix())
                .map_err(|e| in_file(matrix, e))?;
            let d = isogeny_degree(&m)?;
            Ok(Outcome::pass(
                json!({"degree": d.to_string()}),
                format!("degree {d}"),
            ))
        }
        Command::Demo(d) => demo(d),
    }
}

fn isom_outcome(v: &IsomVerdict) -> Outcome {
    let (text, verdict, exit) = match v {
        IsomVerdict::Found {
            witness, tested, ..
        } => (
            format!(
                "isomorphism found after {tested} candidates:\n{}",
                rows_text(&witness.to_string_rows())
            ),
            Verdict::Pass,
            0,
        ),
        IsomVerdict::NotFoundUpToBound {
            bound,
            tested,
            hom_rank,
        } => (
            format!("not found up to bound {bound}: {tested} candidates, Hom rank {hom_rank}"),
            Verdict::Bounded,
            3,
        ),
        IsomVerdict::NoHoms => ("Hom(X, Y) = 0".to_string(), Verdict::Bounded, 4),
    };
    let result = isom_verdict_json(v);
    Outcome {
        result,
        text,
        verdict,
        exit,
    }
}

fn quotient(inputs: &mut Inputs, torus: &Path, points: &Path, out: Option<&Path>) -> CmdResult {
    let mut t = inputs.torus(torus)?;
    let mut pts = inputs.points(points, &t)?;
    let dim = 2 * t.dim();
    let mut rep = IntMatrix::identity(dim);
    while !pts.is_empty() {
        let p = pts.remove(0);
        let q = t.quotient_map(&p)?;
        let r = q.rational_rep.to_rational();
        pts = pts
            .iter()
            .map(|x| TorsionPoint::new(r.mul_vec(x.coords())))
            .collect();
        rep = q.rational_rep.checked_mul(&rep)?;
        t = q.torus;
    }
    let doc = to_canonical_json(&TorusDoc::from_torus(&t));
    if let Some(path) = out {
        write_file(path, &doc)?;
    }
    let ty = t.polarisation_type()?;
    Ok(Outcome::pass(
        json!({
            "type": ty.to_string(),
            "torus": TorusDoc::from_torus(&t),
            "rational_rep": rep.to_string_rows(),
        }),
        format!(
            "quotient of type {ty}\nperiods:\n{}\nprojection:\n{}",
            rows_text(&t.periods().to_strings()),
            rows_text(&rep.to_string_rows())
        ),
    ))
}

fn dual(inputs: &mut Inputs, torus: &Path, raw: bool, out: Option<&Path>) -> CmdResult {
    let t = inputs.torus(torus)?;
    let (frame, converted) = match t.standard_frame_divisors() {
        Some(_) => (t, false),
        None => (t.to_standard_frame()?.torus, true),
    };
    let d = frame.dual()?;
    let dt = if raw { &d.raw } else { &d.torus };
    let doc = to_canonical_json(&TorusDoc::from_torus(dt));
    if let Some(path) = out {
        write_file(path, &doc)?;
    }
    let ty = dt.polarisation_type()?;
    Ok(Outcome::pass(
        json!({
            "type": ty.to_string(),
            "torus": TorusDoc::from_torus(dt),
            "converted_to_standard_frame": converted,
            "permutation": d.permutation,
        }),
        format!(
            "dual of type {ty}{}\nperiods:\n{}",
            if converted {
                " (input converted to a standard frame)"
            } else {
                ""
            },
            rows_text(&dt.periods().to_strings())
        ),
    ))
}

fn elliptic(e: &EllipticArgs) -> CmdResult {
    if let Some(name) = &e.formal {
        let n = e.n.ok_or_else(|| Failure {
            code: 1,
            message: "--formal needs --n".into(),
        })?;
        let cert = formal_quotient_isomorphic(name, n)?;
        let text = format!(
            "E/<{name}/{n}> is not isomorphic to E:\n  {}",
            cert.reasons.join("\n  ")
        );
        return Ok(Outcome::pass(json!(cert), text));
    }
    let src = e.tau.as_deref().expect("clap requires tau or --formal");
    let tau: QuadNumber = src.parse()?;
    match e.n {
        None => {
            let c = reduce_tau(&tau);
            let trail: Vec<String> = c.trail.iter().map(ToString::to_string).collect();
            Ok(Outcome::pass(
                json!({"tau": tau, "class": c, "matrix": c.matrix()}),
                format!("{tau} reduces to {} via [{}]", c.reduced, trail.join(", ")),
            ))
        }
        Some(n) => {
            let c = compare_quotient(&tau, n)?;
            let text = format!(
                "τ = {} reduces to {}\nτ/{n} = {} reduces to {}\n{}",
                c.tau,
                c.tau_class.reduced,
                c.quotient,
                c.quotient_class.reduced,
                if c.isomorphic {
                    "isomorphic"
                } else {
                    "not isomorphic"
                }
            );
            Ok(Outcome::pass(json!(c), text))
        }
    }
}

fn demo(d: &DemoArgs) -> CmdResult {
    if d.name == "list" {
        let names = gallery::demo_list();
        return Ok(Outcome::pass(json!(names), names.join("\n")));
    }
    let params = DemoParams {
        n: d.n,
        ty: d.ty.clone(),
        bound: d.bound,
        max_d: d.max_d,
    };
    let out = gallery::run_demo(&d.name, &params)?;
    if let Some(dir) = &d.out {
        fs::create_dir_all(dir).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", dir.display()),
        })?;
        for (name, t) in &out.tori {
            write_file(
                &dir.join(format!("{name}.json")),
                &to_canonical_json(&TorusDoc::from_torus(t)),
            )?;
        }
    }
    let mut text = format!("demo {}", out.demo);
    for c in &out.checks {
        let mark = if c.pass { "pass" } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = write!(text, "\n  [{mark}] {}", c.name);
        } else {
            let _ = write!(text, "\n  [{mark}] {}: {}", c.name, c.detail);
        }
    }
    let (verdict, exit) = match out.verdict {
        gallery::Verdict::Pass => (Verdict::Pass, 0),
        gallery::Verdict::Bounded => (Verdict::Bounded, 3),
        gallery::Verdict::Fail => (Verdict::Fail, 5),
    };
    let _ = write!(text, "\nverdict: {}", verdict.as_str());
    Ok(Outcome {
        result: json!({"demo": out.demo, "params": out.params, "checks": out.checks, "result": out.result}),
        text,
        verdict,
        exit,
    })
}
