//! Three operations for the static page in `www/`: reduce a quadratic period
//! into the fundamental domain, run the quotient pipeline for a polarisation
//! type, and search for a principal polarisation on `S × Ŝ`.

use avtk::elliptic::{compare_quotient, reduce_tau, QuadNumber};
use avtk::examples::self_dual;
use avtk::gallery::{pp_verdict_json, run_demo, DemoParams};
use avtk::ppsearch::{admissible_family, obstruction_certificate, pp_search_family};
use avtk::{Error, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest bound accepted from the page; the search is single threaded here.
pub const MAX_BOUND: u32 = 12;

fn point(t: &QuadNumber) -> [f64; 2] {
    let (x, y) = t.approx();
    [x, y]
}

/// Reduction of `tau`, the path through the upper half plane, and the
/// comparison of `E_τ` with `E_τ / <τ/n>` when `n > 1`.
pub fn reduce(tau: &str, n: u64) -> Result<Value> {
    let t: QuadNumber = tau.parse()?;
    let class = reduce_tau(&t);
    let path: Vec<[f64; 2]> = class.path(&t).iter().map(point).collect();
    let mut out = json!({
        "input": t.to_string(),
        "reduced": class.reduced.to_string(),
        "trail": class.trail.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "matrix": class.matrix(),
        "path": path,
    });
    if n > 1 {
        let c = compare_quotient(&t, n)?;
        let qpath: Vec<[f64; 2]> = c
            .quotient_class
            .path(&c.quotient)
            .iter()
            .map(point)
            .collect();
        out["quotient"] = json!({
            "tau": c.quotient.to_string(),
            "reduced": c.quotient_class.reduced.to_string(),
            "isomorphic": c.isomorphic,
            "witness": c.witness,
            "path": qpath,
        });
    }
    Ok(out)
}

fn parse_type(ty: &str) -> Result<Vec<i64>> {
    let mut column = 1;
    let mut out = Vec::new();
    for s in ty.split(',') {
        let d = s.trim().parse::<i64>().map_err(|_| Error::Parse {
            input: ty.to_string(),
            column,
            message: format!("expected an integer, found {:?}", s.trim()),
        })?;
        out.push(d);
        column += s.chars().count() + 1;
    }
    Ok(out)
}

/// Runs one of the quotient demos (`ex-4.1`, `ex-4.2`, `thm-3.2-generic`)
/// for the type written as `"1,2,4"`.
pub fn pipeline(demo: &str, ty: &str, bound: u32) -> Result<Value> {
    if !matches!(demo, "ex-4.1" | "ex-4.2" | "thm-3.2-generic") {
        return Err(Error::Precondition(format!(
            "{demo:?} is not a quotient demo"
        )));
    }
    let params = DemoParams {
        ty: Some(parse_type(ty)?),
        bound: Some(bound.min(MAX_BOUND)),
        ..DemoParams::default()
    };
    let outcome = run_demo(demo, &params)?;
    Ok(serde_json::to_value(&outcome).expect("demo outcomes serialise"))
}

/// Admissible family and bounded search on `S × Ŝ` for `S` of type `(1, d)`,
/// next to the residue obstruction for `d`.
pub fn principal(d: u32, bound: u32) -> Result<Value> {
    let ex = self_dual(i64::from(d))?;
    let fam = admissible_family(&ex.a, &ex.a_hat)?;
    let verdict = pp_search_family(&fam, &ex.a, &ex.a_hat, bound.min(MAX_BOUND))?;
    let cert = obstruction_certificate(u64::from(d))?;
    Ok(json!({
        "d": d,
        "family": fam.basis.iter().map(|h| h.to_string_rows()).collect::<Vec<_>>(),
        "search": pp_verdict_json(&verdict),
        "obstructed": cert.obstructed,
        "certificate": cert.to_string(),
    }))
}

fn export(r: Result<Value>) -> std::result::Result<String, JsValue> {
    r.map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = reduceTau)]
pub fn reduce_tau_js(tau: &str, n: u32) -> std::result::Result<String, JsValue> {
    export(reduce(tau, u64::from(n)))
}

#[wasm_bindgen(js_name = runPipeline)]
pub fn pipeline_js(demo: &str, ty: &str, bound: u32) -> std::result::Result<String, JsValue> {
    export(pipeline(demo, ty, bound))
}

#[wasm_bindgen(js_name = principalSearch)]
pub fn principal_js(d: u32, bound: u32) -> std::result::Result<String, JsValue> {
    export(principal(d, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_with_quotient() {
        let v = reduce("sqrt(-2)", 2).unwrap();
        assert_eq!(v["reduced"], "sqrt(-2)");
        assert_eq!(v["quotient"]["isomorphic"], true);
        assert_eq!(v["quotient"]["reduced"], "sqrt(-2)");
        let v = reduce("(7+i)/5", 0).unwrap();
        let path = v["path"].as_array().unwrap();
        assert_eq!(path.len(), v["trail"].as_array().unwrap().len() + 1);
        assert!(v.get("quotient").is_none());
        assert!(reduce("sqrt(2)", 2).is_err());
    }

    #[test]
    fn pipeline_runs() {
        let v = pipeline("thm-3.2-generic", "1, 2, 4", 1).unwrap();
        assert_eq!(v["verdict"], "pass");
        let v = pipeline("ex-4.1", "1,3", 2).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert!(pipeline("lemma-5.4", "1,3", 2).is_err());
        assert!(pipeline("ex-4.1", "1,x", 2).is_err());
    }

    #[test]
    fn principal_search() {
        let v = principal(3, 4).unwrap();
        assert_eq!(v["obstructed"], true);
        assert_eq!(v["search"]["verdict"], "not-found-up-to-bound");
        assert_eq!(v["family"].as_array().unwrap().len(), 3);
        let v = principal(5, 4).unwrap();
        assert_eq!(v["obstructed"], false);
        assert_eq!(v["search"]["verdict"], "found");
    }
}
