//! JSON reports for the command-line front end. Every command returns a
//! single document and an exit code: 0 computed, 1 identity violated,
//! 2 input error, 3 resource bound.

use serde_json::{json, Map, Value};

use crate::checkers::{monomial_condition, pg_weighted_homogeneous, MonomialSearch, Verdict};
use crate::duality::{duality_check, duality_incarnation_check};
use crate::error::{Error, Result};
use crate::fuzz::{blowup_stabilized, run_suite, FuzzConfig, Suite, BLOWUP_MAX_S};
use crate::graph::Graph;
use crate::invariants::{h1_virt, sw_norm, sw_table};
use crate::lattice::{HClass, QCycle};
use crate::plumbing::Plumbing;
use crate::rational::{fmt_q, q_i128};
use crate::seifert::SeifertData;
use crate::series::{counting_q_projected, Profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
    pub terms: u64,
}

impl Outcome {
    fn new(report: Value, exit: i32, terms: u64) -> Outcome {
        Outcome { report, exit, terms }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } | Error::Overflow(_) | Error::Unstable(_) => EXIT_RESOURCE,
        Error::NonIntegral(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

pub fn error_report(command: &str, e: &Error) -> Value {
    json!({"command": command, "error": {"code": e.code(), "message": e.to_string()}})
}

pub fn graph_info(g: &Graph) -> Value {
    json!({"name": g.name(), "fingerprint": g.fingerprint(), "vertices": g.len()})
}

fn exit_if(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Cycle from `E:(..)`, `Estar:(..)`, cycle JSON, or bare coordinates
/// together with a basis name.
pub fn parse_cycle(p: &Plumbing, text: &str, basis: Option<&str>) -> Result<QCycle> {
    let t = text.trim();
    if t.starts_with('{') || t.contains(':') {
        return p.lattice().parse_cycle(t);
    }
    let basis = basis.ok_or_else(|| Error::Malformed(format!("cycle `{t}` needs a basis")))?;
    let inner = t.trim_start_matches('(').trim_end_matches(')');
    p.lattice().parse_cycle(&format!("{basis}:({inner})"))
}

/// Class of a cycle, or the zero class for `0`.
pub fn parse_class(p: &Plumbing, text: &str, basis: Option<&str>) -> Result<HClass> {
    if text.trim() == "0" {
        return Ok(p.lattice().zero_class());
    }
    p.lattice().class_of(&parse_cycle(p, text, basis)?)
}

pub fn validate(g: &Graph) -> Outcome {
    let d = g.validate();
    let report = json!({
        "command": "validate",
        "graph": graph_info(g),
        "results": {
            "tree": d.tree,
            "connected": d.connected,
            "negative_definite": d.negative_definite,
            "det_abs": d.det_abs.to_string(),
            "leading_minors": d.leading_minors.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        },
        "verdict": if d.negative_definite { "VALID" } else { "NOT_NEG_DEFINITE" },
    });
    Outcome::new(report, if d.negative_definite { EXIT_OK } else { EXIT_INPUT }, 0)
}

pub fn invariants(p: &Plumbing, all_classes: bool) -> Result<Outcome> {
    let lat = p.lattice();
    let mut sw = Map::new();
    let mut deep = Map::new();
    if all_classes {
        for e in sw_table(p)? {
            sw.insert(e.class.label(), json!(e.sw.to_string()));
            deep.insert(e.class.label(), json!(e.deep_point.to_strings()));
        }
    } else {
        let h = lat.zero_class();
        sw.insert(h.label(), json!(sw_norm(p, &h)?.to_string()));
        deep.insert(h.label(), json!(lat.deep_point(&h).to_strings()));
    }
    let report = json!({
        "command": "invariants",
        "graph": graph_info(p.graph()),
        "inputs": {"all_classes": all_classes},
        "results": {
            "det_abs": lat.d().to_string(),
            "group_order": lat.group_order().to_string(),
            "z_k": lat.canonical_cycle().to_strings(),
            "z_k_square_plus_n": fmt_q(&lat.zk_square_plus_n()),
            "z_min": lat.artin_min_cycle().to_strings(),
            "deep_points": deep,
        },
        "sw_norm": sw,
    });
    Ok(Outcome::new(report, EXIT_OK, p.terms_used()))
}

pub fn h1virt(p: &Plumbing, cycle: &str, basis: Option<&str>) -> Result<Outcome> {
    let lat = p.lattice();
    let l = parse_cycle(p, cycle, basis)?;
    let h = lat.class_of(&l)?;
    let value = h1_virt(p, &l)?;
    let report = json!({
        "command": "h1virt",
        "graph": graph_info(p.graph()),
        "inputs": {"cycle": lat.cycle_json(&l), "estar": lat.e_star_coords(&l).iter().map(fmt_q).collect::<Vec<_>>()},
        "results": {
            "class": h.label(),
            "chi": fmt_q(&lat.chi(&l)),
            "chi_rep": fmt_q(&lat.chi(h.rep())),
            "sw_norm": sw_norm(p, &h)?.to_string(),
            "h1_virt": fmt_q(&value),
        },
    });
    Ok(Outcome::new(report, EXIT_OK, p.terms_used()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Main,
    Incarnation,
    Blowup,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "main" => Ok(Variant::Main),
            "incarnation" => Ok(Variant::Incarnation),
            "blowup" => Ok(Variant::Blowup),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// Both sides of the chosen identity. For the blow-up route the right side
/// is `h1_virt`, and a mismatch counts as a violation only on graphs
/// satisfying the monomial condition.
pub fn duality(p: &Plumbing, cycle: &str, basis: Option<&str>, variant: Variant) -> Result<Outcome> {
    let lat = p.lattice();
    let l = parse_cycle(p, cycle, basis)?;
    let inputs = json!({
        "cycle": lat.cycle_json(&l),
        "estar": lat.e_star_coords(&l).iter().map(fmt_q).collect::<Vec<_>>(),
    });
    let (name, results, ok) = match variant {
        Variant::Main | Variant::Incarnation => {
            let c = if variant == Variant::Main { duality_check(p, &l)? } else { duality_incarnation_check(p, &l)? };
            let name = if variant == Variant::Main { "main" } else { "incarnation" };
            (name, json!({"lhs": fmt_q(&c.lhs), "rhs": fmt_q(&c.rhs), "equal": c.equal}), c.equal)
        }
        Variant::Blowup => {
            let verdict = monomial_condition(p, None).verdict;
            let (s, route) = blowup_stabilized(p, &l, BLOWUP_MAX_S)?;
            let h = h1_virt(p, &l)?;
            let equal = q_i128(route) == h;
            let results = json!({
                "lhs": route.to_string(),
                "rhs": fmt_q(&h),
                "equal": equal,
                "s": s,
                "monomial": verdict.as_str(),
            });
            ("blowup", results, equal || verdict != Verdict::Satisfied)
        }
    };
    let mut inputs = inputs;
    inputs["variant"] = json!(name);
    let report = json!({
        "command": "duality",
        "graph": graph_info(p.graph()),
        "inputs": inputs,
        "results": results,
        "verdict": if ok { "HOLDS" } else { "VIOLATED" },
    });
    Ok(Outcome::new(report, exit_if(ok), p.terms_used()))
}

/// `Q_{h,I}(x)`; the class defaults to that of `x`, the projection to all
/// vertices.
pub fn counting(
    p: &Plumbing,
    class: Option<&str>,
    bound: &str,
    project: Option<&[String]>,
    basis: Option<&str>,
) -> Result<Outcome> {
    let lat = p.lattice();
    let x = parse_cycle(p, bound, basis)?;
    let h = match class {
        Some(c) => parse_class(p, c, basis)?,
        None => lat.class_of(&x)?,
    };
    let subset = match project {
        Some(ids) => p.graph().indices_of(ids)?,
        None => (0..p.n()).collect(),
    };
    let value = counting_q_projected(p, &h, &subset, &x, &Profile::zero(p.n()))?;
    let report = json!({
        "command": "counting",
        "graph": graph_info(p.graph()),
        "inputs": {
            "class": h.label(),
            "bound": lat.cycle_json(&x),
            "project": subset.iter().map(|&v| p.graph().id(v)).collect::<Vec<_>>(),
        },
        "results": {"counting": value.to_string()},
    });
    Ok(Outcome::new(report, EXIT_OK, p.terms_used()))
}

pub fn monomial(p: &Plumbing, bound: Option<i64>) -> Outcome {
    let g = p.graph();
    let rep = monomial_condition(p, bound);
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|(v, u, s)| {
            let mut e = json!({"node": g.id(*v), "branch": g.id(*u)});
            match s {
                MonomialSearch::Sat(w) => {
                    let mut a = Map::new();
                    for (end, k) in &w.coefficients {
                        a.insert(g.id(*end).to_string(), json!(k));
                    }
                    e["status"] = json!("SAT");
                    e["coefficients"] = Value::Object(a);
                    e["difference"] = json!(w.difference.to_strings());
                }
                MonomialSearch::Unsat => e["status"] = json!("UNSAT"),
                MonomialSearch::UnsatWithinBound => e["status"] = json!("UNSAT_WITHIN_BOUND"),
            }
            e
        })
        .collect();
    let report = json!({
        "command": "monomial",
        "graph": graph_info(g),
        "inputs": {"bound": bound},
        "results": {"entries": entries},
        "verdict": rep.verdict.as_str(),
    });
    Outcome::new(report, EXIT_OK, 0)
}

pub fn seifert(data: &str, emit_graph: bool, max_terms: u64) -> Result<Outcome> {
    let sf = SeifertData::parse(data)?;
    let g = sf.star_graph()?;
    let pg = pg_weighted_homogeneous(&sf)?;
    let p = Plumbing::with_limit(g, max_terms)?;
    let sw0 = sw_norm(&p, &p.lattice().zero_class())?;
    let mut results = json!({"p_g": pg.to_string(), "sw_0": sw0.to_string(), "equal": pg as i128 == sw0});
    if emit_graph {
        results["star_graph"] = p.graph().to_json_value();
    }
    let report = json!({
        "command": "seifert",
        "graph": graph_info(p.graph()),
        "inputs": {"data": data, "e_orb": fmt_q(&sf.e_orb())},
        "results": results,
        "verdict": if pg as i128 == sw0 { "HOLDS" } else { "VIOLATED" },
    });
    Ok(Outcome::new(report, exit_if(pg as i128 == sw0), p.terms_used()))
}

pub fn fuzz(cfg: &FuzzConfig, suites: &[Suite]) -> Outcome {
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, cfg)).collect();
    let violated = reports.iter().any(|r| r.count("violation") > 0);
    let limited = reports.iter().any(|r| r.resource_limited());
    let failed = reports.iter().any(|r| r.count("error") > 0);
    let (verdict, exit) = if violated {
        ("VIOLATED", EXIT_VIOLATION)
    } else if limited {
        ("RESOURCE_LIMIT", EXIT_RESOURCE)
    } else if failed {
        ("ERROR", EXIT_VIOLATION)
    } else {
        ("HOLDS", EXIT_OK)
    };
    let terms = reports.iter().map(|r| r.terms()).sum();
    let report = json!({
        "command": "fuzz",
        "inputs": {
            "seed": cfg.seed.to_string(),
            "count": cfg.count,
            "max_vertices": cfg.max_vertices,
            "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        },
        "results": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "verdict": verdict,
    });
    Outcome::new(report, exit, terms)
}

/// Reports checked into `fixtures/golden`, by file stem, with the stats
/// block left out.
pub fn golden_reports() -> Result<Vec<(String, Value)>> {
    use crate::fixtures::{self, T1_N, T_DOUBLE_PRIME_NMK, T_NM};
    let mut out = Vec::new();
    for (stem, g) in fixtures::shipped().into_iter().take(5) {
        let p = Plumbing::new(g)?;
        out.push((format!("invariants_{stem}"), invariants(&p, true)?.report));
        out.push((format!("monomial_{stem}"), monomial(&p, None).report));
    }
    let g2 = Plumbing::new(fixtures::g2())?;
    out.push(("duality_g2".into(), duality(&g2, "Estar:(0,1)", None, Variant::Main)?.report));
    out.push(("seifert_2_3_7".into(), seifert("1;(2,1),(3,1),(7,1)", false, crate::plumbing::DEFAULT_MAX_TERMS)?.report));
    let t1 = Plumbing::new(fixtures::t1(T1_N))?;
    let (n, m) = T_NM;
    let t = Plumbing::new(fixtures::t_glued(n, m))?;
    let (a, b, c) = T_DOUBLE_PRIME_NMK;
    let tdp = Plumbing::new(fixtures::t_double_prime(a, b, c))?;
    let (sw0, swv) = fixtures::t_sw_pair(&t)?;
    out.push((
        "large_parameter_fixtures".into(),
        json!({
            "t1": {"graph": graph_info(t1.graph()), "N": T1_N,
                   "e1": fixtures::t1_e1(&t1)?.to_string(), "e2": fixtures::t1_e2(&t1)?.to_string()},
            "t": {"graph": graph_info(t.graph()), "N": n, "M": m,
                  "sw_0": sw0.to_string(), "sw_estar_v": swv.to_string()},
            "t_double_prime": {"graph": graph_info(tdp.graph()), "N": a, "M": b, "K": c,
                               "sum": fixtures::t_double_prime_sum(&tdp)?.to_string()},
        }),
    ));
    Ok(out)
}
