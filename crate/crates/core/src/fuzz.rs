//! Seeded property suites over random graphs. Every instance is derived
//! from the master seed, the suite and its index, so reports are
//! reproducible; violations carry self-contained reproduction records.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checkers::{monomial_condition, sw_via_rectangle_auto, z_via_weights, Verdict};
use crate::duality::{duality_check, duality_incarnation_check, h1virt_blowup_route, vertex_special_identity};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{h1_virt, pc_dual, pc_surgery, pc_surgery_shorthand, sw_norm, sw_norm_dual, sw_norm_stable};
use crate::lattice::{HClass, QCycle};
use crate::plumbing::Plumbing;
use crate::random::{random_negdef_tree, random_seifert, rng};
use crate::rational::{fmt_q, q, q_i128, to_i128};
use crate::series::{fixed_coords_sum, z_coeff, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Duality,
    Incarnation,
    PcRoutes,
    Blowup,
    DeepVanish,
    Integrality,
    SqBounds,
    WeightsOracle,
    RectOracle,
    SpecialVertex,
    NonnegMonomial,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Duality,
        Suite::Incarnation,
        Suite::PcRoutes,
        Suite::Blowup,
        Suite::DeepVanish,
        Suite::Integrality,
        Suite::SqBounds,
        Suite::WeightsOracle,
        Suite::RectOracle,
        Suite::SpecialVertex,
        Suite::NonnegMonomial,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Incarnation => "incarnation",
            Suite::PcRoutes => "pc-routes",
            Suite::Blowup => "blowup",
            Suite::DeepVanish => "deep-vanish",
            Suite::Integrality => "integrality",
            Suite::SqBounds => "sqbounds",
            Suite::WeightsOracle => "weights-oracle",
            Suite::RectOracle => "rect-oracle",
            Suite::SpecialVertex => "special-vertex",
            Suite::NonnegMonomial => "nonneg-monomial",
        }
    }

    fn index(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_vertices: usize,
    pub max_terms: u64,
}

/// Largest `s` tried when stabilizing the blow-up route.
pub const BLOWUP_MAX_S: usize = 8;

/// Inputs of one instance. Classes are given by the E-coordinates of
/// `r_h`, vertices by id, cycles by E*-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub graph: Graph,
    pub profile: Option<Vec<i64>>,
    pub class: Option<QCycle>,
    pub subset: Option<Vec<String>>,
    pub vertex: Option<String>,
    pub shift: Option<Vec<i64>>,
}

impl Case {
    fn new(graph: Graph) -> Case {
        Case { graph, profile: None, class: None, subset: None, vertex: None, shift: None }
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("graph".into(), self.graph.to_json_value());
        if let Some(a) = &self.profile {
            m.insert("estar".into(), json!(a));
        }
        if let Some(c) = &self.class {
            m.insert("class_rep".into(), json!(c.to_strings()));
        }
        if let Some(s) = &self.subset {
            m.insert("subset".into(), json!(s));
        }
        if let Some(v) = &self.vertex {
            m.insert("vertex".into(), json!(v));
        }
        if let Some(s) = &self.shift {
            m.insert("shift".into(), json!(s));
        }
        Value::Object(m)
    }
}

/// Outcome of checking one case: `holds` is `None` when the property's
/// hypothesis is not met.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked {
    pub holds: Option<bool>,
    pub values: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Vacuous,
    Violation,
    Failed(Error),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Violation => "violation",
            Status::Failed(_) => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceRecord {
    pub index: usize,
    pub seed: u64,
    pub case: Case,
    pub status: Status,
    pub values: Value,
    /// Smaller inputs that still violate, when shrinking found any.
    pub minimized: Option<(Case, Value)>,
    pub terms: u64,
}

impl InstanceRecord {
    pub fn to_json(&self, suite: Suite) -> Value {
        let mut v = json!({
            "suite": suite.name(),
            "index": self.index,
            "instance_seed": self.seed.to_string(),
            "status": self.status.as_str(),
            "inputs": self.case.to_json(),
            "values": self.values,
        });
        if let Status::Failed(e) = &self.status {
            v["error"] = json!({"code": e.code(), "message": e.to_string()});
        }
        if let Some((c, vals)) = &self.minimized {
            v["minimized"] = json!({"inputs": c.to_json(), "values": vals});
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub records: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn count(&self, status: &str) -> usize {
        self.records.iter().filter(|r| r.status.as_str() == status).count()
    }

    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| matches!(r.status, Status::Pass | Status::Vacuous))
    }

    pub fn resource_limited(&self) -> bool {
        self.records.iter().any(|r| {
            matches!(r.status, Status::Failed(Error::ResourceLimit { .. }) | Status::Failed(Error::Overflow(_)))
        })
    }

    pub fn terms(&self) -> u64 {
        self.records.iter().map(|r| r.terms).sum()
    }

    pub fn to_json(&self) -> Value {
        let bad: Vec<Value> = self
            .records
            .iter()
            .filter(|r| matches!(r.status, Status::Violation | Status::Failed(_)))
            .map(|r| r.to_json(self.suite))
            .collect();
        json!({
            "suite": self.suite.name(),
            "instances": self.records.len(),
            "passed": self.count("pass"),
            "vacuous": self.count("vacuous"),
            "violations": self.count("violation"),
            "errors": self.count("error"),
            "terms": self.terms(),
            "records": bad,
        })
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of instance `index` of `suite` under the master seed.
pub fn instance_seed(seed: u64, suite: Suite, index: usize) -> u64 {
    mix(mix(mix(seed) ^ suite.index()) ^ index as u64)
}

/// Runs one suite; instances run in parallel and are reported in order.
pub fn run_suite(suite: Suite, cfg: &FuzzConfig) -> SuiteReport {
    let records = (0..cfg.count)
        .into_par_iter()
        .map(|i| run_instance(suite, cfg, i))
        .collect();
    SuiteReport { suite, records }
}

/// Draws and checks one instance, shrinking its inputs on a violation.
pub fn run_instance(suite: Suite, cfg: &FuzzConfig, index: usize) -> InstanceRecord {
    let seed = instance_seed(cfg.seed, suite, index);
    let case = draw(suite, seed, cfg.max_vertices.max(1));
    let (status, values, terms) = evaluate(suite, &case, cfg.max_terms);
    let minimized = if status == Status::Violation { shrink(suite, &case, cfg.max_terms) } else { None };
    InstanceRecord { index, seed, case, status, values, minimized, terms }
}

fn evaluate(suite: Suite, case: &Case, max_terms: u64) -> (Status, Value, u64) {
    let p = match Plumbing::with_limit(case.graph.clone(), max_terms) {
        Ok(p) => p,
        Err(e) => return (Status::Failed(e), Value::Null, 0),
    };
    let r = check(suite, case, &p);
    let terms = p.terms_used();
    match r {
        Ok(Checked { holds: Some(true), values }) => (Status::Pass, values, terms),
        Ok(Checked { holds: Some(false), values }) => (Status::Violation, values, terms),
        Ok(Checked { holds: None, values }) => (Status::Vacuous, values, terms),
        Err(e) => (Status::Failed(e), Value::Null, terms),
    }
}

/// Greedily lowers E*-coordinates and shifts while the violation persists.
fn shrink(suite: Suite, case: &Case, max_terms: u64) -> Option<(Case, Value)> {
    let mut best: Option<(Case, Value)> = None;
    let mut cur = case.clone();
    loop {
        let mut improved = false;
        for field in 0..2 {
            let len = match field {
                0 => cur.profile.as_ref().map_or(0, Vec::len),
                _ => cur.shift.as_ref().map_or(0, Vec::len),
            };
            for k in 0..len {
                let mut next = cur.clone();
                let xs = if field == 0 { next.profile.as_mut() } else { next.shift.as_mut() }.unwrap();
                if xs[k] <= 0 {
                    continue;
                }
                xs[k] -= 1;
                if let (Status::Violation, values, _) = evaluate(suite, &next, max_terms) {
                    best = Some((next.clone(), values));
                    cur = next;
                    improved = true;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

fn random_tree(r: &mut impl Rng, max_n: usize) -> Graph {
    let n = r.gen_range(1..=max_n);
    random_negdef_tree(r.gen(), n)
}

fn random_star(r: &mut impl Rng, max_alpha: i64) -> Graph {
    let seed: u64 = r.gen();
    random_seifert(seed, max_alpha)
        .star_graph()
        .expect("valid Seifert data")
        .with_name(format!("seifert-{seed}"))
}

fn monomial_ok(g: &Graph) -> bool {
    Plumbing::new(g.clone()).is_ok_and(|p| monomial_condition(&p, None).verdict == Verdict::Satisfied)
}

fn random_profile(r: &mut impl Rng, n: usize, max: i64, density: f64) -> Vec<i64> {
    let mut a: Vec<i64> =
        (0..n).map(|_| if r.gen_bool(density) { r.gen_range(0..=max) } else { 0 }).collect();
    if a.iter().all(|&x| x == 0) {
        a[r.gen_range(0..n)] = r.gen_range(1..=max);
    }
    a
}

fn random_class(r: &mut impl Rng, g: &Graph) -> QCycle {
    let p = Plumbing::new(g.clone()).expect("definite");
    let classes = p.lattice().classes();
    classes[r.gen_range(0..classes.len())].rep().clone()
}

/// A random effective shift keeping the deep point inside
/// `Z_K + int S'`; multiples of `Z_min` when rejection sampling fails.
fn vanishing_shift(r: &mut impl Rng, g: &Graph, rep: &QCycle) -> Vec<i64> {
    let p = Plumbing::new(g.clone()).expect("definite");
    let lat = p.lattice();
    let h = lat.class_of(rep).expect("class");
    let base = &lat.deep_point(&h) - lat.canonical_cycle();
    for _ in 0..50 {
        let s: Vec<i64> = (0..g.len()).map(|_| r.gen_range(0..=2)).collect();
        if lat.in_interior(&(&base + &QCycle::from_ints(&s))) {
            return s;
        }
    }
    let k = r.gen_range(0..=2);
    lat.artin_min_cycle().coords().iter().map(|c| k * to_i128(c).expect("small cycle") as i64).collect()
}

/// Draws the inputs of one instance.
pub fn draw(suite: Suite, seed: u64, max_vertices: usize) -> Case {
    let mut r = rng(seed);
    let r = &mut r;
    match suite {
        Suite::Duality | Suite::Incarnation => {
            let g = random_tree(r, max_vertices);
            let a = random_profile(r, g.len(), 2, 0.5);
            Case { profile: Some(a), ..Case::new(g) }
        }
        Suite::PcRoutes => {
            let g = random_tree(r, max_vertices);
            let class = random_class(r, &g);
            let mut subset: Vec<String> =
                g.ids().iter().filter(|_| r.gen_bool(0.4)).cloned().collect();
            if subset.is_empty() {
                subset.push(g.id(r.gen_range(0..g.len())).to_string());
            }
            Case { class: Some(class), subset: Some(subset), ..Case::new(g) }
        }
        Suite::Blowup => {
            let mut g = None;
            for _ in 0..20 {
                let t = random_tree(r, max_vertices.min(6));
                if monomial_ok(&t) {
                    g = Some(t);
                    break;
                }
            }
            let g = g.unwrap_or_else(|| random_star(r, 5));
            let n = g.len();
            let mut a = vec![0i64; n];
            for _ in 0..r.gen_range(1..=2) {
                a[r.gen_range(0..n)] += 1;
            }
            Case { profile: Some(a), ..Case::new(g) }
        }
        Suite::DeepVanish => {
            let g = random_tree(r, max_vertices);
            let class = random_class(r, &g);
            let shift = vanishing_shift(r, &g, &class);
            Case { class: Some(class), shift: Some(shift), ..Case::new(g) }
        }
        Suite::Integrality => Case::new(random_tree(r, max_vertices)),
        Suite::SqBounds => {
            let g = random_star(r, 7);
            let v = g.id(r.gen_range(0..g.len())).to_string();
            let a = (0..g.len()).map(|_| if r.gen_bool(0.3) { r.gen_range(0..=2) } else { 0 }).collect();
            Case { profile: Some(a), vertex: Some(v), ..Case::new(g) }
        }
        Suite::WeightsOracle => {
            let g = random_tree(r, max_vertices.min(4));
            let a = (0..g.len()).map(|_| r.gen_range(-1..=3)).collect();
            Case { profile: Some(a), ..Case::new(g) }
        }
        Suite::RectOracle => Case::new(random_tree(r, max_vertices.min(3))),
        Suite::SpecialVertex => {
            let g = random_tree(r, max_vertices);
            let v = g.id(r.gen_range(0..g.len())).to_string();
            Case { vertex: Some(v), ..Case::new(g) }
        }
        Suite::NonnegMonomial => {
            let g = if r.gen_bool(0.5) { random_tree(r, max_vertices) } else { random_star(r, 7) };
            Case::new(g)
        }
    }
}

fn class_of_case(p: &Plumbing, case: &Case) -> Result<HClass> {
    let rep = case.class.as_ref().ok_or_else(|| Error::InvalidArgument("case has no class".into()))?;
    p.lattice().class_of(rep)
}

fn profile_cycle(p: &Plumbing, case: &Case) -> Result<QCycle> {
    let a = case.profile.as_ref().ok_or_else(|| Error::InvalidArgument("case has no cycle".into()))?;
    if a.len() != p.n() {
        return Err(Error::Malformed("cycle length differs from the vertex count".into()));
    }
    Ok(p.lattice().from_e_star_ints(a))
}

fn vertex_of_case(p: &Plumbing, case: &Case) -> Result<usize> {
    p.vertex(case.vertex.as_deref().ok_or_else(|| Error::InvalidArgument("case has no vertex".into()))?)
}

/// Blow-up route at increasing `s` until two consecutive values agree.
pub fn blowup_stabilized(p: &Plumbing, l: &QCycle, max_s: usize) -> Result<(usize, i128)> {
    let mut prev = h1virt_blowup_route(p, l, 1)?;
    for s in 2..=max_s {
        let next = h1virt_blowup_route(p, l, s)?;
        if next == prev {
            return Ok((s - 1, prev));
        }
        prev = next;
    }
    Err(Error::Unstable(format!("blow-up route did not settle by s = {max_s}")))
}

/// Checks the suite's property on one case.
pub fn check(suite: Suite, case: &Case, p: &Plumbing) -> Result<Checked> {
    let lat = p.lattice();
    match suite {
        Suite::Duality | Suite::Incarnation => {
            let l = profile_cycle(p, case)?;
            let c = if suite == Suite::Duality { duality_check(p, &l)? } else { duality_incarnation_check(p, &l)? };
            Ok(Checked {
                holds: Some(c.equal),
                values: json!({"lhs": fmt_q(&c.lhs), "rhs": fmt_q(&c.rhs)}),
            })
        }
        Suite::PcRoutes => {
            let h = class_of_case(p, case)?;
            let subset = p.graph().indices_of(case.subset.as_deref().unwrap_or_default())?;
            let a = pc_dual(p, &h, &subset)?;
            let b = pc_surgery(p, &h, &subset)?;
            let c = pc_surgery_shorthand(p, &h, &subset)?;
            Ok(Checked {
                holds: Some(a == b),
                values: json!({"pc_dual": a.to_string(), "pc_surgery": b.to_string(), "shorthand": c.to_string()}),
            })
        }
        Suite::Blowup => {
            if monomial_condition(p, None).verdict != Verdict::Satisfied {
                return Ok(Checked { holds: None, values: json!({"monomial": "not satisfied"}) });
            }
            let l = profile_cycle(p, case)?;
            let (s, route) = blowup_stabilized(p, &l, BLOWUP_MAX_S)?;
            let h = h1_virt(p, &l)?;
            Ok(Checked {
                holds: Some(q_i128(route) == h),
                values: json!({"route": route.to_string(), "s": s, "h1_virt": fmt_q(&h)}),
            })
        }
        Suite::DeepVanish => {
            let h = class_of_case(p, case)?;
            let shift = case.shift.as_ref().ok_or_else(|| Error::InvalidArgument("case has no shift".into()))?;
            let x = &lat.deep_point(&h) + &QCycle::from_ints(shift);
            if !lat.in_interior(&(&x - lat.canonical_cycle())) {
                return Ok(Checked { holds: None, values: json!({"outside": "Z_K + int S'"}) });
            }
            let deep = h1_virt(p, &x)?;
            let at_rep = h1_virt(p, h.rep())?;
            let sw = sw_norm(p, &h)?;
            Ok(Checked {
                holds: Some(deep == q(0) && at_rep == q_i128(sw)),
                values: json!({
                    "h1_virt_deep": fmt_q(&deep),
                    "h1_virt_rep": fmt_q(&at_rep),
                    "sw_norm": sw.to_string(),
                }),
            })
        }
        Suite::Integrality => {
            let mut table = serde_json::Map::new();
            let mut ok = true;
            for h in lat.classes() {
                let a = sw_norm_stable(p, &h)?;
                let b = sw_norm_dual(p, &h)?;
                ok &= a == b;
                table.insert(h.label(), json!({"sw_norm": a.to_string(), "dual": b.to_string()}));
            }
            Ok(Checked { holds: Some(ok), values: Value::Object(table) })
        }
        Suite::SqBounds => {
            let l = profile_cycle(p, case)?;
            let v = vertex_of_case(p, case)?;
            let s = fixed_coords_sum(p, &[v], &l, &Profile::zero(p.n()))?;
            let bound = -lat.pairing(&l, &QCycle::e(p.n(), v)) + q(1);
            Ok(Checked {
                holds: Some(s >= 0 && q_i128(s) <= bound),
                values: json!({"sum": s.to_string(), "upper": fmt_q(&bound)}),
            })
        }
        Suite::WeightsOracle => {
            let l = profile_cycle(p, case)?;
            let a = z_via_weights(p, &l)?;
            let b = z_coeff(p, &l, &Profile::zero(p.n()));
            Ok(Checked { holds: Some(a == q_i128(b)), values: json!({"weights": fmt_q(&a), "z": b.to_string()}) })
        }
        Suite::RectOracle => {
            let mut table = serde_json::Map::new();
            let mut ok = true;
            for h in lat.classes() {
                let rect = sw_via_rectangle_auto(p, &h)?;
                let sw = sw_norm(p, &h)?;
                ok &= rect.sw == q_i128(sw);
                table.insert(
                    h.label(),
                    json!({"rectangle": fmt_q(&rect.sw), "radius": rect.radius, "sw_norm": sw.to_string()}),
                );
            }
            Ok(Checked { holds: Some(ok), values: Value::Object(table) })
        }
        Suite::SpecialVertex => {
            let v = vertex_of_case(p, case)?;
            let s = vertex_special_identity(p, v)?;
            Ok(Checked {
                holds: Some(s.holds),
                values: json!({
                    "lhs": fmt_q(&s.lhs),
                    "sw_complement": s.sw_complement.to_string(),
                    "q_dual": s.q_dual.to_string(),
                    "q_direct": s.q_direct.to_string(),
                }),
            })
        }
        Suite::NonnegMonomial => {
            let verdict = monomial_condition(p, None).verdict;
            if verdict != Verdict::Satisfied {
                return Ok(Checked { holds: None, values: json!({"monomial": verdict.as_str()}) });
            }
            let sw = sw_norm(p, &lat.zero_class())?;
            Ok(Checked { holds: Some(sw >= 0), values: json!({"monomial": verdict.as_str(), "sw_0": sw.to_string()}) })
        }
    }
}
