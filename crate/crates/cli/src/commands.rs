use std::error::Error;
use std::fs;

use gcdeq_core::catalog::{Catalog, CatalogEntry};
use gcdeq_core::density::{density_table, joint_density_table, type_class_profile};
use gcdeq_core::equiv::{
    arithmetically_equivalent_same_closure, cross_degree_exclusion, gcd_equivalent_same_closure,
    product_inert_analysis, rigidity_scan,
};
use gcdeq_core::ffpoly::{parse_polynomial_input, IntPoly};
use gcdeq_core::perm::{Group, Perm};
use gcdeq_core::scanner::{compare_scans, read_report, scan_with_jobs, write_report, ScanReport};
use gcdeq_core::verify::{self, Outcome as CheckOutcome, VerifyConfig};
use serde_json::{json, Value};

use crate::render::{density_cell, density_value, pretty, Table};
use crate::{Cli, Command, Format};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

pub struct Outcome {
    pub exit_code: u8,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome {
            exit_code: 0,
            output,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let structured = cli.format == Format::Structured;
    let decimal = cli.decimal;
    match &cli.command {
        Command::Catalog { name } => catalog(name.as_deref(), structured),
        Command::Densities { group, subfield } => {
            densities(group, subfield.as_deref(), structured, decimal)
        }
        Command::Joint { group, subfields } => joint(group, subfields, structured, decimal),
        Command::GcdProfile { group, subfield } => gcd_profile(group, subfield.as_deref(), structured),
        Command::Equiv { group, left, right } => equiv(group, left, right, structured),
        Command::ProductAnalysis {
            left,
            right,
            left_subfield,
            right_subfield,
        } => product(left, right, left_subfield, right_subfield, structured, decimal),
        Command::Rigidity {
            max_degree,
            cross_degree,
        } => rigidity(*max_degree, *cross_degree, structured),
        Command::Scan {
            polynomial,
            bound,
            out,
            jobs,
        } => {
            let f = read_polynomial(polynomial)?;
            let report = scan_with_jobs(&f, *bound, *jobs)?;
            if let Some(path) = out {
                write_report(path, &report)?;
            }
            Ok(Outcome::ok(render_scan(&report, structured, decimal)))
        }
        Command::Compare {
            left,
            right,
            bound,
            reports,
            jobs,
        } => {
            let (a, b) = if *reports {
                (read_report(left.as_ref())?, read_report(right.as_ref())?)
            } else {
                (
                    scan_with_jobs(&read_polynomial(left)?, *bound, *jobs)?,
                    scan_with_jobs(&read_polynomial(right)?, *bound, *jobs)?,
                )
            };
            compare(&a, &b, structured, decimal)
        }
        Command::VerifyPaper {
            bound,
            jobs,
            inject_fault,
        } => verify_paper(*bound, *jobs, *inject_fault, structured),
    }
}

fn read_polynomial(arg: &str) -> Result<IntPoly> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?,
        None => arg.to_string(),
    };
    Ok(parse_polynomial_input(text.trim())?)
}

fn entry(name: &str) -> Result<&'static CatalogEntry> {
    Ok(Catalog::standard().get(name)?)
}

fn subgroup<'a>(e: &'a CatalogEntry, name: Option<&str>) -> Result<(String, &'a Group)> {
    let name = name.unwrap_or("stabilizer");
    Ok((name.to_string(), e.subgroup(name)?))
}

fn generators(g: &Group) -> Vec<String> {
    g.generators().iter().map(Perm::to_string).collect()
}

fn catalog(name: Option<&str>, structured: bool) -> Result<Outcome> {
    let cat = Catalog::standard();
    let Some(name) = name else {
        if structured {
            let list: Vec<Value> = cat
                .entries()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "order": e.group.order(),
                        "field_degree": e.field_degree,
                        "galois": e.is_galois(),
                        "generators": generators(&e.group),
                        "named_subgroups": e.named_subgroups.keys().collect::<Vec<_>>(),
                    })
                })
                .collect();
            return Ok(Outcome::ok(pretty(&json!({ "entries": list }))));
        }
        let mut t = Table::new(&["name", "order", "degree", "generators", "named subgroups"]);
        for e in cat.entries() {
            t.row(vec![
                e.name.clone(),
                e.group.order().to_string(),
                e.field_degree.to_string(),
                generators(&e.group).join(", "),
                e.named_subgroups.keys().cloned().collect::<Vec<_>>().join(" "),
            ]);
        }
        return Ok(Outcome::ok(t.render()));
    };
    let e = cat.get(name)?;
    let subs: Vec<Value> = e
        .named_subgroups
        .iter()
        .map(|(n, s)| {
            json!({
                "name": n,
                "order": s.group.order(),
                "index": s.index,
                "normal": e.group.is_normal(&s.group).unwrap_or(false),
                "generators": generators(&s.group),
            })
        })
        .collect();
    if structured {
        let v = json!({
            "name": e.name,
            "order": e.group.order(),
            "field_degree": e.field_degree,
            "generators": generators(&e.group),
            "stabilizer": { "order": e.stabilizer.order(), "generators": generators(&e.stabilizer) },
            "presentation": e.presentation.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
            "relations": e.relations,
            "named_subgroups": subs,
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut out = format!(
        "{}: order {}, field degree {}, generated by {}\n",
        e.name,
        e.group.order(),
        e.field_degree,
        generators(&e.group).join(", ")
    );
    out += &format!(
        "stabilizer of 1: order {}, generated by {}\n",
        e.stabilizer.order(),
        display_gens(&e.stabilizer)
    );
    let pres: Vec<String> = e.presentation.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    out += &format!("presentation: {}; {}\n", pres.join(", "), e.relations.join(", "));
    if !e.named_subgroups.is_empty() {
        out.push('\n');
        let mut t = Table::new(&["subgroup", "order", "index", "normal", "generators"]);
        for (n, s) in &e.named_subgroups {
            t.row(vec![
                n.clone(),
                s.group.order().to_string(),
                s.index.to_string(),
                if e.group.is_normal(&s.group).unwrap_or(false) { "yes" } else { "no" }.into(),
                display_gens(&s.group),
            ]);
        }
        out += &t.render();
    }
    Ok(Outcome::ok(out))
}

fn display_gens(g: &Group) -> String {
    let gens = generators(g);
    if gens.is_empty() {
        "()".into()
    } else {
        gens.join(", ")
    }
}

fn densities(group: &str, sub: Option<&str>, structured: bool, decimal: bool) -> Result<Outcome> {
    let e = entry(group)?;
    let (sub_name, u) = subgroup(e, sub)?;
    let table = density_table(&e.group, u)?;
    let index = e.group.order() / u.order();
    if structured {
        let rows: Vec<Value> = table
            .rows()
            .map(|(k, d)| {
                json!({ "splitting_type": k.key(), "count": table.count(k), "density": density_value(d, decimal) })
            })
            .collect();
        let v = json!({
            "group": e.name,
            "subgroup": sub_name,
            "group_order": table.group_order(),
            "index": index,
            "rows": rows,
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut out = format!(
        "{} (order {}), subgroup {} (index {})\n",
        e.name,
        e.group.order(),
        sub_name,
        index
    );
    let mut t = Table::new(&["type", "count", "density"]);
    for (k, d) in table.rows() {
        t.row(vec![k.to_string(), table.count(k).to_string(), density_cell(d, decimal)]);
    }
    out += &t.render();
    Ok(Outcome::ok(out))
}

fn joint(group: &str, subs: &[String], structured: bool, decimal: bool) -> Result<Outcome> {
    let e = entry(group)?;
    let groups = subs
        .iter()
        .map(|s| Ok(subgroup(e, Some(s))?.1.clone()))
        .collect::<Result<Vec<Group>>>()?;
    let table = joint_density_table(&e.group, &groups)?;
    if structured {
        let rows: Vec<Value> = table
            .rows()
            .map(|(k, d)| {
                json!({
                    "splitting_types": k.iter().map(|t| t.key()).collect::<Vec<_>>(),
                    "count": table.count(k),
                    "density": density_value(d, decimal),
                })
            })
            .collect();
        let v = json!({ "group": e.name, "subgroups": subs, "group_order": table.group_order(), "rows": rows });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut header: Vec<&str> = subs.iter().map(String::as_str).collect();
    header.extend(["count", "density"]);
    let mut t = Table::new(&header);
    for (k, d) in table.rows() {
        let mut cells: Vec<String> = k.iter().map(ToString::to_string).collect();
        cells.push(table.count(k).to_string());
        cells.push(density_cell(d, decimal));
        t.row(cells);
    }
    Ok(Outcome::ok(format!("{} (order {})\n{}", e.name, e.group.order(), t.render())))
}

fn gcd_profile(group: &str, sub: Option<&str>, structured: bool) -> Result<Outcome> {
    let e = entry(group)?;
    let (sub_name, u) = subgroup(e, sub)?;
    let profile = type_class_profile(&e.group, u)?;
    if structured {
        let rows: Vec<Value> = profile
            .iter()
            .map(|(c, t)| {
                json!({
                    "representative": c.representative.to_string(),
                    "class_size": c.size(),
                    "splitting_type": t.key(),
                    "gcd": t.gcd(),
                })
            })
            .collect();
        let v = json!({ "group": e.name, "subgroup": sub_name, "classes": rows });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut t = Table::new(&["class of", "size", "type", "gcd"]);
    for (c, ty) in &profile {
        t.row(vec![
            c.representative.to_string(),
            c.size().to_string(),
            ty.to_string(),
            ty.gcd().to_string(),
        ]);
    }
    Ok(Outcome::ok(format!("{}, subgroup {}\n{}", e.name, sub_name, t.render())))
}

fn equiv(group: &str, left: &str, right: &str, structured: bool) -> Result<Outcome> {
    let e = entry(group)?;
    let (_, u1) = subgroup(e, Some(left))?;
    let (_, u2) = subgroup(e, Some(right))?;
    let gcd = gcd_equivalent_same_closure(&e.group, u1, u2)?;
    let arith = arithmetically_equivalent_same_closure(&e.group, u1, u2)?;
    let conjugate = e.group.are_conjugate_subgroups(u1, u2)?;
    let gcd_witness = gcd
        .witness_class
        .as_ref()
        .zip(gcd.witness_values())
        .map(|(c, (a, b))| (c.representative.to_string(), a, b));
    let type_witness = arith
        .witness_class
        .as_ref()
        .zip(arith.witness_values())
        .map(|(c, (a, b))| (c.representative.to_string(), a, b));
    if structured {
        let v = json!({
            "group": e.name,
            "left": left,
            "right": right,
            "conjugate": conjugate,
            "gcd_equivalent": gcd.equivalent,
            "gcd_witness": gcd_witness.as_ref().map(|(c, a, b)| json!({ "class": c, "left": a, "right": b })),
            "arithmetically_equivalent": arith.equivalent,
            "type_witness": type_witness.as_ref().map(|(c, a, b)| json!({ "class": c, "left": a.key(), "right": b.key() })),
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!("{}: {} vs {}\n", e.name, left, right);
    out += &format!("conjugate: {}\n", yn(conjugate));
    out += &format!("gcd equivalent: {}", yn(gcd.equivalent));
    if let Some((c, a, b)) = &gcd_witness {
        out += &format!(" (class of {c}: gcd {a} vs {b})");
    }
    out += &format!("\narithmetically equivalent: {}", yn(arith.equivalent));
    if let Some((c, a, b)) = &type_witness {
        out += &format!(" (class of {c}: {a} vs {b})");
    }
    out.push('\n');
    Ok(Outcome::ok(out))
}

fn product(
    left: &str,
    right: &str,
    left_sub: &str,
    right_sub: &str,
    structured: bool,
    decimal: bool,
) -> Result<Outcome> {
    let (a, b) = (entry(left)?, entry(right)?);
    let (_, u1) = subgroup(a, Some(left_sub))?;
    let (_, u2) = subgroup(b, Some(right_sub))?;
    let rep = product_inert_analysis(&a.group, u1, &b.group, u2)?;
    if structured {
        let v = json!({
            "left": a.name,
            "right": b.name,
            "product_order": a.group.order() * b.group.order(),
            "degree": rep.degree,
            "single_inert_densities": [density_value(rep.single_inert_densities.0, decimal), density_value(rep.single_inert_densities.1, decimal)],
            "joint_inert_density": density_value(rep.joint_inert_density, decimal),
            "order_p_pair_density": density_value(rep.order_p_pair_density, decimal),
            "contradiction": rep.contradiction,
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let order = (a.group.order() * b.group.order()) as i64;
    let over = |d: gcdeq_core::rational::Rational| format!("{}/{}", d.numer() * (order / d.denom()), order);
    let mut t = Table::new(&["quantity", "density", "pairs"]);
    let mut row = |label: String, d| t.row(vec![label, density_cell(d, decimal), over(d)]);
    row(format!("inert in {}", a.name), rep.single_inert_densities.0);
    row(format!("inert in {}", b.name), rep.single_inert_densities.1);
    row("inert in both".into(), rep.joint_inert_density);
    row(
        format!("g^{0} = h^{0} = 1, not both 1", rep.degree),
        rep.order_p_pair_density,
    );
    Ok(Outcome::ok(format!(
        "{} x {} (order {}), degree {}\n{}contradiction: {}\n",
        a.name,
        b.name,
        a.group.order() * b.group.order(),
        rep.degree,
        t.render(),
        if rep.contradiction { "yes" } else { "no" }
    )))
}

fn rigidity(max_degree: usize, cross: bool, structured: bool) -> Result<Outcome> {
    let rep = rigidity_scan(max_degree)?;
    let cross_rep = if cross { Some(cross_degree_exclusion()?) } else { None };
    let passed = rep.passed() && cross_rep.as_ref().is_none_or(|c| c.passed());
    let exit_code = if passed { 0 } else { 1 };
    if structured {
        let violations: Vec<Value> = rep
            .violations
            .iter()
            .map(|v| {
                json!({
                    "entry": v.entry,
                    "index": v.index,
                    "left": generators(&v.left),
                    "right": generators(&v.right),
                })
            })
            .collect();
        let mut v = json!({
            "max_degree": rep.max_degree,
            "passed": passed,
            "groups": rep.groups,
            "violations": violations,
        });
        if let Some(c) = &cross_rep {
            v["cross_degree"] = serde_json::to_value(c)?;
        }
        return Ok(Outcome {
            exit_code,
            output: pretty(&v),
        });
    }
    let mut t = Table::new(&["entry", "subgroups", "pairs", "conjugate", "distinguished", "violations"]);
    for g in &rep.groups {
        t.row(vec![
            g.entry.clone(),
            g.subgroups_checked.to_string(),
            g.pairs_checked.to_string(),
            g.conjugate_pairs.to_string(),
            g.pairs_distinguished.to_string(),
            g.violations.to_string(),
        ]);
    }
    let mut out = format!("subgroup pairs of equal index <= {}\n{}", rep.max_degree, t.render());
    for v in &rep.violations {
        out += &format!(
            "violation in {} at index {}: <{}> vs <{}>\n",
            v.entry,
            v.index,
            display_gens(&v.left),
            display_gens(&v.right)
        );
    }
    if let Some(c) = &cross_rep {
        out += "\ngcd values by field degree\n";
        for (g, degs) in &c.gcd_degrees {
            let d: Vec<String> = degs.iter().map(ToString::to_string).collect();
            out += &format!("  gcd {g}: degree {}\n", d.join(", "));
        }
        out += &format!(
            "quadratic inert density {}; quartic densities of even gcd:\n",
            c.quadratic_inert_density
        );
        for r in &c.quartic_rows {
            out += &format!("  {}: {} (type (2,2) alone {})\n", r.entry, r.gcd2_density, r.type_22_density);
        }
        out += &format!(
            "{} cross-degree pairs separated, {} unresolved\n",
            c.witnesses.len(),
            c.unresolved.len()
        );
    }
    out += &format!("result: {}\n", if passed { "pass" } else { "FAIL" });
    Ok(Outcome { exit_code, output: out })
}

fn render_scan(r: &ScanReport, structured: bool, decimal: bool) -> String {
    if structured {
        return r.to_json() + "\n";
    }
    let mut out = format!(
        "{} up to {}: {} primes, {} classified, excluded {:?}\n",
        r.polynomial,
        r.bound,
        r.prime_count,
        r.unramified_count(),
        r.excluded_primes
    );
    let mut t = Table::new(&["type", "count", "fraction"]);
    for (k, &c) in &r.counts {
        t.row(vec![k.to_string(), c.to_string(), density_cell(r.empirical_density(k), decimal)]);
    }
    out += &t.render();
    let gcds: Vec<String> = r.gcd_counts.iter().map(|(g, c)| format!("{g}: {c}")).collect();
    out += &format!("gcd counts: {}\n", gcds.join(", "));
    let shown: Vec<String> = r.inert_primes.iter().take(12).map(ToString::to_string).collect();
    out += &format!(
        "inert primes ({}{}): {}{}\n",
        r.inert_count(),
        if r.inert_truncated { ", list truncated" } else { "" },
        shown.join(" "),
        if r.inert_primes.len() > shown.len() { " ..." } else { "" }
    );
    out
}

fn compare(a: &ScanReport, b: &ScanReport, structured: bool, decimal: bool) -> Result<Outcome> {
    let c = compare_scans(a, b)?;
    if structured {
        let v = json!({
            "left": a.polynomial.to_string(),
            "right": b.polynomial.to_string(),
            "bound": c.bound,
            "common_primes": c.common_primes,
            "inert_sets_equal": c.inert_sets_equal,
            "first_inert_disagreement": c.first_inert_disagreement,
            "first_gcd_disagreement": c.first_gcd_disagreement,
            "first_type_disagreement": c.first_type_disagreement,
            "type_agreement_fraction": density_value(c.type_agreement_fraction, decimal),
            "gcd_agreement_fraction": density_value(c.gcd_agreement_fraction, decimal),
        });
        return Ok(Outcome::ok(pretty(&v)));
    }
    let opt = |p: Option<u64>| p.map_or("none".to_string(), |p| p.to_string());
    let mut out = format!("{} vs {} up to {}\n", a.polynomial, b.polynomial, c.bound);
    out += &format!("primes unramified in both: {}\n", c.common_primes);
    out += &format!(
        "inert sets equal: {}\n",
        if c.inert_sets_equal { "yes" } else { "no" }
    );
    out += &format!("first inert disagreement: {}\n", opt(c.first_inert_disagreement));
    out += &format!("first gcd disagreement: {}\n", opt(c.first_gcd_disagreement));
    out += &format!("first type disagreement: {}\n", opt(c.first_type_disagreement));
    out += &format!(
        "type agreement: {}\ngcd agreement: {}\n",
        density_cell(c.type_agreement_fraction, decimal),
        density_cell(c.gcd_agreement_fraction, decimal)
    );
    Ok(Outcome::ok(out))
}

fn faulty_catalog() -> Result<Catalog> {
    // an entry named S3 that is really the cyclic group of order 3
    let wrong = CatalogEntry::build("S3", 3, &["(1 2 3)"], 3, &[("s", "(1 2 3)")], &["s^3 = 1"], &[])?;
    Ok(Catalog::from_entries(Catalog::standard().entries().to_vec()).with_entry(wrong))
}

fn verify_paper(bound: Option<u64>, jobs: usize, fault: bool, structured: bool) -> Result<Outcome> {
    let mut cfg = match bound {
        Some(b) => VerifyConfig::with_bound(b),
        None => VerifyConfig::default(),
    };
    cfg.jobs = jobs.max(1);
    let catalog = if fault {
        faulty_catalog()?
    } else {
        Catalog::from_entries(Catalog::standard().entries().to_vec())
    };
    let results = verify::run_all(&catalog, &cfg);
    let passed = verify::all_passed(&results);
    let exit_code = if passed { 0 } else { 1 };
    if structured {
        let v = json!({ "passed": passed, "checks": results });
        return Ok(Outcome {
            exit_code,
            output: pretty(&v),
        });
    }
    let mut out = String::new();
    for r in &results {
        out += &format!("{r}\n");
    }
    let count = |o: CheckOutcome| results.iter().filter(|r| r.outcome == o).count();
    out += &format!(
        "{} passed, {} failed, {} inconclusive\n",
        count(CheckOutcome::Pass),
        count(CheckOutcome::Fail),
        count(CheckOutcome::Inconclusive)
    );
    Ok(Outcome { exit_code, output: out })
}
