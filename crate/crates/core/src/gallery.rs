//! Replayable demos of the worked examples, each a list of named checks.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::doc::{read_torus, write_torus};
use crate::elliptic::{compare_quotient, formal_quotient_isomorphic, QuadNumber};
use crate::error::{Error, Result};
use crate::examples::{check_type, elliptic_product, general_product, self_dual, QuotientExample};
use crate::homs::{
    complementary_subvariety, hom_module, idempotent, isom_search, IsomVerdict, DEFAULT_BOUND,
};
use crate::linalg::{span_equal, IntMatrix};
use crate::ppsearch::{
    admissible_family, family_shape, obstruction_certificate, pp_search, PpVerdict,
};
use crate::torus::{PolarisationType, PolarisedTorus};

pub const DEMOS: &[&str] = &[
    "ex-4.1",
    "ex-4.2",
    "ex-5.3",
    "lemma-5.4",
    "remark-3.3",
    "thm-3.2-generic",
    "obstruction-table",
];

pub const PP_BOUND: u32 = 25;

pub fn demo_list() -> &'static [&'static str] {
    DEMOS
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DemoParams {
    pub n: Option<usize>,
    pub ty: Option<Vec<i64>>,
    pub bound: Option<u32>,
    pub max_d: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// All checks pass and the headline claim is a bounded non-existence.
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoOutcome {
    pub demo: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub result: Value,
    #[serde(skip)]
    pub tori: Vec<(String, PolarisedTorus)>,
}

impl DemoOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Default)]
struct Run {
    checks: Vec<Check>,
    tori: Vec<(String, PolarisedTorus)>,
    bounded: bool,
}

impl Run {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    fn eq<T: PartialEq + std::fmt::Display>(&mut self, name: &str, got: &T, want: &T) {
        let detail = if got == want {
            format!("{got}")
        } else {
            format!("got {got}, expected {want}")
        };
        self.check(name, got == want, detail);
    }

    /// Register a torus and confirm its document reads back unchanged.
    fn torus(&mut self, name: &str, t: &PolarisedTorus) -> Result<PolarisedTorus> {
        let back = read_torus(&write_torus(t))?;
        self.check(
            &format!("document round trip: {name}"),
            &back == t,
            format!("{name}.json"),
        );
        self.tori.push((name.to_string(), t.clone()));
        Ok(back)
    }
}

fn inline(rows: &[Vec<String>]) -> String {
    let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn type_str(d: &[i64]) -> String {
    PolarisationType::from_i64(d).to_string()
}

pub fn run_demo(name: &str, params: &DemoParams) -> Result<DemoOutcome> {
    let mut run = Run::default();
    let (params_json, result) = match name {
        "ex-4.1" => {
            let ty = quotient_type(params, &[1, 3])?;
            let bound = params.bound.unwrap_or(DEFAULT_BOUND);
            let ex = elliptic_product(&ty)?;
            let r = quotient_demo(&mut run, &ex, bound)?;
            (json!({"type": type_str(&ty), "bound": bound}), r)
        }
        "ex-4.2" => {
            let ty = quotient_type(params, &[1, 3])?;
            let bound = params.bound.unwrap_or(DEFAULT_BOUND);
            let ex = general_product(&ty)?;
            let r = quotient_demo(&mut run, &ex, bound)?;
            (json!({"type": type_str(&ty), "bound": bound}), r)
        }
        "thm-3.2-generic" => {
            let ty = quotient_type(params, &[1, 2, 4])?;
            let r = generic_demo(&mut run, &ty)?;
            (json!({"type": type_str(&ty)}), r)
        }
        "ex-5.3" => {
            let bound = params.bound.unwrap_or(PP_BOUND);
            let r = self_dual_demo(&mut run, bound)?;
            (json!({"bound": bound}), r)
        }
        "lemma-5.4" => {
            let bound = params.bound.unwrap_or(PP_BOUND);
            let r = no_principal_demo(&mut run, bound)?;
            run.bounded = true;
            (json!({"bound": bound}), r)
        }
        "remark-3.3" => (json!({}), remark_demo(&mut run)?),
        "obstruction-table" => {
            let max_d = params.max_d.unwrap_or(20);
            let r = obstruction_demo(&mut run, max_d)?;
            (json!({"max_d": max_d}), r)
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown demo {other:?}; available: {}",
                DEMOS.join(", ")
            )))
        }
    };
    let verdict = if run.checks.iter().any(|c| !c.pass) {
        Verdict::Fail
    } else if run.bounded {
        Verdict::Bounded
    } else {
        Verdict::Pass
    };
    Ok(DemoOutcome {
        demo: name.to_string(),
        params: params_json,
        checks: run.checks,
        verdict,
        result,
        tori: run.tori,
    })
}

/// `--type` wins; otherwise `--n` picks `(1, .., 1, 3)`; otherwise `default`.
fn quotient_type(params: &DemoParams, default: &[i64]) -> Result<Vec<i64>> {
    let ty = match (&params.ty, params.n) {
        (Some(t), n) => {
            if n.is_some_and(|n| n != t.len()) {
                return Err(Error::Precondition(format!(
                    "--n {} does not match the length of type {t:?}",
                    n.unwrap_or(0)
                )));
            }
            t.clone()
        }
        (None, Some(n)) if n == default.len() => default.to_vec(),
        (None, Some(n)) => {
            let mut t = vec![1; n.max(2)];
            *t.last_mut().expect("n >= 2") = 3;
            t
        }
        (None, None) => default.to_vec(),
    };
    check_type(&ty)?;
    Ok(ty)
}

pub fn isom_verdict_json(v: &IsomVerdict) -> Value {
    match v {
        IsomVerdict::Found {
            witness,
            coefficients,
            tested,
        } => json!({
            "verdict": v.label(),
            "witness": witness.to_string_rows(),
            "coefficients": coefficients,
            "tested": tested,
        }),
        IsomVerdict::NotFoundUpToBound {
            bound,
            tested,
            hom_rank,
        } => json!({
            "verdict": v.label(),
            "bound": bound,
            "tested": tested,
            "hom_rank": hom_rank,
        }),
        IsomVerdict::NoHoms => json!({"verdict": v.label()}),
    }
}

pub fn pp_verdict_json(v: &PpVerdict) -> Value {
    match v {
        PpVerdict::Found {
            h,
            coefficients,
            tested,
            family_rank,
        } => json!({
            "verdict": v.label(),
            "h": h.to_string_rows(),
            "coefficients": coefficients,
            "tested": tested,
            "family_rank": family_rank,
        }),
        PpVerdict::NotFoundUpToBound {
            bound,
            tested,
            family_rank,
        } => json!({
            "verdict": v.label(),
            "bound": bound,
            "tested": tested,
            "family_rank": family_rank,
            "note": "bounded evidence only",
        }),
    }
}

/// Product and quotient types, the kernel identity and the frame of `A`.
fn pipeline_checks(run: &mut Run, ex: &QuotientExample) -> Result<()> {
    let ty = &ex.ty;
    let n = ty.len();
    let mut prod_ty: Vec<i64> = ty[1..].to_vec();
    prod_ty.push(ty[n - 1]);
    run.eq(
        "product type (d_2, .., d_n, d_n)",
        &ex.product.polarisation_type()?,
        &PolarisationType::from_i64(&prod_ty),
    );
    let g = crate::torus::FiniteSubgroup::from_points(2 * n, std::slice::from_ref(&ex.point));
    run.eq("order of <(P, Q)>", &g.order(), &BigInt::from(ty[n - 1]));
    run.check(
        "<(P, Q)> lies in the polarising kernel",
        g.is_subgroup_of(&ex.product.polarising_kernel()),
        ex.point.to_string(),
    );
    run.eq(
        "quotient type (1, d_2, .., d_n)",
        &ex.quotient.torus.polarisation_type()?,
        &PolarisationType::from_i64(ty),
    );
    let perp = ex
        .product
        .symplectic_complement(std::slice::from_ref(&ex.point))?;
    let image = perp.map(&ex.quotient.rational_rep.to_rational())?;
    let kernel = ex.quotient.torus.polarising_kernel();
    run.check(
        "ker φ_A = π(G^⊥)",
        image == kernel,
        format!("order {}", kernel.order()),
    );
    let homs = hom_module(&ex.e, &ex.b)?;
    run.eq("rank Hom(E, B)", &homs.len(), &0);
    Ok(())
}

fn quotient_demo(run: &mut Run, ex: &QuotientExample, bound: u32) -> Result<Value> {
    run.torus("E", &ex.e)?;
    run.torus("B", &ex.b)?;
    run.torus("product", &ex.product)?;
    pipeline_checks(run, ex)?;
    let shown = ex.closed_form_lattice()?;
    run.check(
        "replayed base change gives the closed-form lattice",
        ex.hand_torus.periods() == &shown,
        inline(&shown.to_strings()),
    );
    let moved = ex
        .quotient
        .torus
        .periods()
        .left_mul_rational(&ex.hand_complex)?;
    run.check(
        "span of the constructed lattice equals span of Λ_A",
        span_equal(&moved, &shown)?,
        "after z'_n = z_n + z_1",
    );
    let d: Vec<BigInt> = ex.ty.iter().map(|&x| x.into()).collect();
    run.check(
        "Λ_A is a standard frame [Z | D]",
        ex.hand_torus.standard_frame_divisors() == Some(d),
        format!("D = diag{}", type_str(&ex.ty)),
    );
    let a = run.torus("A", &ex.hand_torus)?;
    let a_hat = a.dual()?.torus;
    run.torus("A_hat", &a_hat)?;
    run.eq(
        "dual type",
        &a_hat.polarisation_type()?,
        &PolarisationType::from_i64(&ex.ty).dual(),
    );
    let v = isom_search(&a, &a_hat, bound, false)?;
    run.check(
        "no isomorphism A -> Â up to the bound",
        !matches!(v, IsomVerdict::Found { .. }),
        format!("{} (bound {bound})", v.label()),
    );
    Ok(json!({
        "type": type_str(&ex.ty),
        "point": ex.point.to_string(),
        "lambda_a": ex.hand_torus.periods().to_strings(),
        "dual_type": a_hat.polarisation_type()?.to_string(),
        "isom_search": isom_verdict_json(&v),
    }))
}

fn generic_demo(run: &mut Run, ty: &[i64]) -> Result<Value> {
    let ex = general_product(ty)?;
    run.torus("product", &ex.product)?;
    pipeline_checks(run, &ex)?;
    let a = run.torus("A", &ex.quotient.torus)?;
    let e_in_a = &ex.e_in_a;
    let c = complementary_subvariety(e_in_a)?;
    run.check(
        "A = E ⊞ B: complement of E is π(0 × B)",
        c.sublattice() == ex.b_in_a.sublattice(),
        format!("rank {}", c.sublattice().cols()),
    );
    let ie = idempotent(e_in_a)?;
    let ib = idempotent(&ex.b_in_a)?;
    let sum = ie.epsilon.checked_add(&ib.epsilon)?;
    run.check("ε_E + ε_B = 1", sum.is_identity(), "");
    let lhs = IntMatrix::identity(2 * a.dim()).scale(&(&ie.exponent * &ib.exponent));
    let rhs = ie
        .norm
        .scale(&ib.exponent)
        .checked_add(&ib.norm.scale(&ie.exponent))?;
    run.check(
        "e(E) e(B) = e(B) Nm_E + e(E) Nm_B",
        lhs == rhs,
        format!("e(E) = {}, e(B) = {}", ie.exponent, ib.exponent),
    );
    let n = *ty.last().expect("nonempty") as u64;
    let cert = formal_quotient_isomorphic("tau_E", n)?;
    run.check(
        "E/<P> is not isomorphic to E",
        !cert.isomorphic,
        cert.reasons.join("; "),
    );
    let fr = a.to_standard_frame()?;
    let a_hat = fr.torus.dual()?.torus;
    run.eq(
        "dual type",
        &a_hat.polarisation_type()?,
        &PolarisationType::from_i64(ty).dual(),
    );
    Ok(json!({
        "type": type_str(ty),
        "dual_type": a_hat.polarisation_type()?.to_string(),
        "exponents": {"E": ie.exponent.to_string(), "B": ib.exponent.to_string()},
        "certificate": cert,
    }))
}

fn self_dual_demo(run: &mut Run, bound: u32) -> Result<Value> {
    let ex = self_dual(3)?;
    run.torus("S", &ex.s)?;
    run.torus("S_hat", &ex.s_hat)?;
    let a = run.torus("A", &ex.a)?;
    let a_hat = run.torus("A_hat", &ex.a_hat)?;
    let ss = ex.s_hat.dual()?.raw;
    run.check("dual of Ŝ is S", ss == ex.s, "");
    run.eq(
        "type of A",
        &a.polarisation_type()?,
        &PolarisationType::from_i64(&[1, 1, 3, 3]),
    );
    let v = isom_search(&a, &a_hat, 3, false)?;
    run.check(
        "A is isomorphic to Â (factor swap)",
        matches!(v, IsomVerdict::Found { .. }),
        v.label(),
    );
    let p = pp_search(&a, &a_hat, bound)?;
    run.check(
        "no principal polarisation up to the bound",
        matches!(p, PpVerdict::NotFoundUpToBound { .. }),
        format!("{} (bound {bound})", p.label()),
    );
    Ok(json!({
        "lambda_s_hat": ex.s_hat.periods().to_strings(),
        "isom_search": isom_verdict_json(&v),
        "pp_search": pp_verdict_json(&p),
    }))
}

fn no_principal_demo(run: &mut Run, bound: u32) -> Result<Value> {
    let ex = self_dual(3)?;
    let a = run.torus("A", &ex.a)?;
    let a_hat = run.torus("A_hat", &ex.a_hat)?;
    let fam = admissible_family(&a, &a_hat)?;
    run.eq("admissible family rank", &fam.rank(), &3);
    let shaped = fam.basis.iter().all(|h| family_shape(h, 3).is_some());
    run.check(
        "every admissible H is [[3k,0,h,0],[0,k,0,h],[h,0,m,0],[0,h,0,3m]]",
        shaped,
        "",
    );
    let p = pp_search(&a, &a_hat, bound)?;
    run.check(
        "pp-search finds no witness",
        matches!(p, PpVerdict::NotFoundUpToBound { .. }),
        format!("{} (bound {bound})", p.label()),
    );
    let cert = obstruction_certificate(3)?;
    run.check(
        "3km - h² = 1 has no solution mod 3",
        cert.obstructed,
        cert.to_string(),
    );
    Ok(json!({
        "family": fam.basis.iter().map(IntMatrix::to_string_rows).collect::<Vec<_>>(),
        "pp_search": pp_verdict_json(&p),
        "certificate": cert.to_string(),
    }))
}

fn remark_demo(run: &mut Run) -> Result<Value> {
    let r2: QuadNumber = "sqrt(-2)".parse()?;
    let i: QuadNumber = "i".parse()?;
    let a = compare_quotient(&r2, 2)?;
    run.check(
        "E/<τ/2> ≅ E for τ = √−2",
        a.isomorphic,
        format!(
            "τ/2 = {} reduces to {}",
            a.quotient, a.quotient_class.reduced
        ),
    );
    let b = compare_quotient(&i, 2)?;
    run.check(
        "E/<τ/2> is not isomorphic to E for τ = i",
        !b.isomorphic,
        format!("{} vs {}", b.tau_class.reduced, b.quotient_class.reduced),
    );
    let cert = formal_quotient_isomorphic("tau_E", 2)?;
    run.check(
        "formal τ_E: never isomorphic",
        !cert.isomorphic,
        cert.reasons.join("; "),
    );
    Ok(json!({"sqrt_minus_2": a, "i": b, "formal": cert}))
}

fn obstruction_demo(run: &mut Run, max_d: u64) -> Result<Value> {
    if max_d < 2 {
        return Err(Error::Precondition("--max-d must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for d in 2..=max_d {
        let c = obstruction_certificate(d)?;
        if d == 3 {
            run.check("d = 3 is obstructed", c.obstructed, c.to_string());
        }
        if d == 5 {
            run.check("d = 5 is not obstructed", !c.obstructed, c.to_string());
        }
        rows.push(json!({"d": d, "obstructed": c.obstructed, "squares": c.squares}));
    }
    Ok(Value::Array(rows))
}
