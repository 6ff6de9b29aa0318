//! Writes the fixture graphs, the parameter scan and the golden reports
//! under `crates/core/fixtures`. Run from the workspace root:
//! `cargo run --release --example gen_fixtures`.

use std::fs;
use std::path::Path;

use plumbcalc::fixtures::{self, stability_scan, T1_N, T_DOUBLE_PRIME_NMK, T_NM};
use plumbcalc::report::golden_reports;
use plumbcalc::{Graph, Plumbing, Result};
use serde_json::json;

fn pl(g: Graph) -> Plumbing {
    Plumbing::new(g).expect("fixture is definite")
}

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(dir.join("golden")).expect("fixture dir");
    for (stem, g) in fixtures::shipped() {
        fs::write(dir.join(format!("{stem}.json")), g.to_json() + "\n").expect("write graph");
    }
    let (n, m) = T_NM;
    let (a, b, c) = T_DOUBLE_PRIME_NMK;
    let e1 = stability_scan(&[T1_N], |x| fixtures::t1_e1(&pl(fixtures::t1(x[0]))))?;
    let e2 = stability_scan(&[T1_N], |x| fixtures::t1_e2(&pl(fixtures::t1(x[0]))))?;
    let pair = stability_scan(&[n, m], |x| fixtures::t_sw_pair(&pl(fixtures::t_glued(x[0], x[1]))))?;
    let tdp = stability_scan(&[a, b, c], |x| {
        fixtures::t_double_prime_sum(&pl(fixtures::t_double_prime(x[0], x[1], x[2])))
    })?;
    let params = json!({
        "rule": "a value is stable when raising any one parameter by 1 leaves it unchanged",
        "t1": {"N": T1_N, "e1": e1.0.to_string(), "e2": e2.0.to_string(), "stable": e1.1 && e2.1},
        "t": {"N": n, "M": m, "sw_0": pair.0 .0.to_string(), "sw_estar_v": pair.0 .1.to_string(), "stable": pair.1},
        "t_double_prime": {"N": a, "M": b, "K": c, "sum": tdp.0.to_string(), "stable": tdp.1},
    });
    fs::write(dir.join("params.json"), serde_json::to_string_pretty(&params).unwrap() + "\n").expect("write params");
    for (stem, doc) in golden_reports()? {
        let text = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        fs::write(dir.join("golden").join(format!("{stem}.json")), text).expect("write golden");
    }
    println!("{}", serde_json::to_string_pretty(&params).unwrap());
    Ok(())
}
