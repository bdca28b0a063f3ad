//! Browser bindings for the density engine and the prime scanner.
//!
//! Every exported function returns a JSON string; the plain `*_json`
//! functions carry the logic so they can be tested natively.

use gcdeq_core::catalog::Catalog;
use gcdeq_core::density::{density_table, SplittingType};
use gcdeq_core::equiv::{arithmetically_equivalent_same_closure, gcd_equivalent_same_closure};
use gcdeq_core::ffpoly::parse_polynomial_input;
use gcdeq_core::scanner::scan;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest bound accepted from the page; keeps a scan under a few seconds.
pub const MAX_BOUND: u64 = 2_000_000;

fn entry(name: &str) -> Result<&'static gcdeq_core::CatalogEntry, String> {
    Catalog::standard().get(name).map_err(|e| e.to_string())
}

pub fn catalog_json() -> String {
    let entries: Vec<Value> = Catalog::standard()
        .entries()
        .iter()
        .map(|e| {
            let mut subs = vec!["stabilizer".to_string()];
            subs.extend(e.named_subgroups.keys().cloned());
            json!({
                "name": e.name,
                "order": e.group.order(),
                "field_degree": e.field_degree,
                "subgroups": subs,
            })
        })
        .collect();
    json!({ "entries": entries }).to_string()
}

pub fn densities_json(group: &str, subgroup: &str) -> Result<String, String> {
    let e = entry(group)?;
    let u = e.subgroup(subgroup).map_err(|e| e.to_string())?;
    let table = density_table(&e.group, u).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = table
        .rows()
        .map(|(k, d)| json!({ "type": k.to_string(), "density": d.to_string(), "value": d.to_f64() }))
        .collect();
    Ok(json!({
        "group": e.name,
        "subgroup": subgroup,
        "index": e.group.order() / u.order(),
        "rows": rows,
    })
    .to_string())
}

/// Empirical fractions of a prime scan next to the exact densities of a
/// catalog entry of the same degree.
pub fn scan_vs_group_json(polynomial: &str, bound: u64, group: &str) -> Result<String, String> {
    if bound > MAX_BOUND {
        return Err(format!("bound is limited to {MAX_BOUND} in the browser"));
    }
    let f = parse_polynomial_input(polynomial.trim()).map_err(|e| e.to_string())?;
    let e = entry(group)?;
    if e.field_degree != f.degree() {
        return Err(format!(
            "{} has degree {}, the polynomial has degree {}",
            e.name,
            e.field_degree,
            f.degree()
        ));
    }
    let report = scan(&f, bound).map_err(|e| e.to_string())?;
    let table = density_table(&e.group, &e.stabilizer).map_err(|e| e.to_string())?;
    let mut types: Vec<SplittingType> = table.keys().cloned().collect();
    for t in report.counts.keys() {
        if !types.contains(t) {
            types.push(t.clone());
        }
    }
    types.sort();
    let rows: Vec<Value> = types
        .iter()
        .map(|t| {
            json!({
                "type": t.to_string(),
                "count": report.counts.get(t).copied().unwrap_or(0),
                "empirical": report.fraction(t),
                "exact": table.get(t).to_string(),
                "expected": table.get(t).to_f64(),
            })
        })
        .collect();
    Ok(json!({
        "polynomial": f.to_string(),
        "bound": bound,
        "group": e.name,
        "classified": report.unramified_count(),
        "excluded_primes": report.excluded_primes,
        "rows": rows,
    })
    .to_string())
}

pub fn equiv_json(group: &str, left: &str, right: &str) -> Result<String, String> {
    let e = entry(group)?;
    let u1 = e.subgroup(left).map_err(|e| e.to_string())?;
    let u2 = e.subgroup(right).map_err(|e| e.to_string())?;
    let gcd = gcd_equivalent_same_closure(&e.group, u1, u2).map_err(|e| e.to_string())?;
    let arith = arithmetically_equivalent_same_closure(&e.group, u1, u2).map_err(|e| e.to_string())?;
    let conjugate = e.group.are_conjugate_subgroups(u1, u2).map_err(|e| e.to_string())?;
    let classes: Vec<Value> = arith
        .profiles
        .0
        .iter()
        .zip(&arith.profiles.1)
        .map(|((c, a), (_, b))| {
            json!({
                "class": c.representative.to_string(),
                "size": c.size(),
                "left": a.to_string(),
                "right": b.to_string(),
                "left_gcd": a.gcd(),
                "right_gcd": b.gcd(),
            })
        })
        .collect();
    Ok(json!({
        "group": e.name,
        "conjugate": conjugate,
        "gcd_equivalent": gcd.equivalent,
        "arithmetically_equivalent": arith.equivalent,
        "gcd_witness": gcd.witness_class.map(|c| c.representative.to_string()),
        "classes": classes,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}

#[wasm_bindgen]
pub fn densities(group: &str, subgroup: &str) -> Result<String, JsError> {
    densities_json(group, subgroup).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scan_vs_group(polynomial: &str, bound: u32, group: &str) -> Result<String, JsError> {
    scan_vs_group_json(polynomial, bound as u64, group).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn equivalence(group: &str, left: &str, right: &str) -> Result<String, JsError> {
    equiv_json(group, left, right).map_err(|e| JsError::new(&e))
}
