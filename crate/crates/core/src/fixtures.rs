//! Named example graphs, the large-parameter graphs with their pinned
//! parameters, and the quantities computed on them.

use crate::error::Result;
use crate::graph::Graph;
use crate::invariants::sw_norm;
use crate::plumbing::Plumbing;
use crate::seifert::SeifertData;
use crate::series::{fixed_coords_sum, Profile};

fn build(name: &str, vs: &[(&str, i64)], es: &[(&str, &str)]) -> Graph {
    Graph::new(Some(name.to_string()), vs, es).expect("fixture is a tree")
}

/// Single `-2` vertex (A1).
pub fn g1() -> Graph {
    build("G1", &[("v", -2)], &[])
}

/// `v(-3) -- w(-1)`, the blow-up of G1.
pub fn g2() -> Graph {
    build("G2", &[("v", -3), ("w", -1)], &[("v", "w")])
}

/// E8 with eight `-2` vertices in Bourbaki order (`a2` hangs off `a4`).
pub fn g3() -> Graph {
    e8().with_name("G3")
}

/// Center `c(-35)` with five `-1` nodes `m_i`, each carrying ends
/// `a_i(-2)` and `b_i(-3)`.
pub fn g4() -> Graph {
    let mut vs = vec![("c".to_string(), -35)];
    let mut es = vec![];
    for i in 1..=5 {
        let (m, a, b) = (format!("m{i}"), format!("a{i}"), format!("b{i}"));
        vs.push((m.clone(), -1));
        vs.push((a.clone(), -2));
        vs.push((b.clone(), -3));
        es.push(("c".to_string(), m.clone()));
        es.push((m.clone(), a));
        es.push((m, b));
    }
    Graph::new(Some("G4".into()), &vs, &es).expect("fixture is a tree")
}

/// Star graph of `(1;(2,1),(3,1),(7,1))`.
pub fn g5() -> Graph {
    SeifertData::new(1, vec![(2, 1), (3, 1), (7, 1)])
        .unwrap()
        .star_graph()
        .unwrap()
        .with_name("G5")
}

/// Chain of `n` vertices of euler `-2`.
pub fn a_n(n: usize) -> Graph {
    let ids: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let vs: Vec<(String, i64)> = ids.iter().map(|s| (s.clone(), -2)).collect();
    let es: Vec<(String, String)> = ids.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    Graph::new(Some(format!("A{n}")), &vs, &es).unwrap()
}

/// `D_n` (n >= 4): chain `a1..a(n-2)` plus two ends on `a(n-2)`.
pub fn d_n(n: usize) -> Graph {
    assert!(n >= 4);
    let ids: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let vs: Vec<(String, i64)> = ids.iter().map(|s| (s.clone(), -2)).collect();
    let mut es: Vec<(String, String)> =
        ids[..n - 2].windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    es.push((ids[n - 3].clone(), ids[n - 2].clone()));
    es.push((ids[n - 3].clone(), ids[n - 1].clone()));
    Graph::new(Some(format!("D{n}")), &vs, &es).unwrap()
}

/// `E_n` for n in 6..=8, Bourbaki numbering.
pub fn e_n(n: usize) -> Graph {
    assert!((6..=8).contains(&n));
    let ids: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let vs: Vec<(String, i64)> = ids.iter().map(|s| (s.clone(), -2)).collect();
    let mut es = vec![("a1".to_string(), "a3".to_string()), ("a2".into(), "a4".into())];
    for i in 3..n {
        es.push((format!("a{i}"), format!("a{}", i + 1)));
    }
    Graph::new(Some(format!("E{n}")), &vs, &es).unwrap()
}

pub fn e8() -> Graph {
    e_n(8)
}

/// The ADE graphs used for the rationality checks.
pub fn ade_suite() -> Vec<Graph> {
    let mut out: Vec<Graph> = (1..=5).map(a_n).collect();
    out.push(d_n(4));
    out.extend((6..=8).map(e_n));
    out
}

/// Node `n(-3)` with four `-N` ends `v1..v4` and a `-1` end `v5`.
pub fn t1(big_n: i64) -> Graph {
    let mut vs = vec![("n".to_string(), -3)];
    let mut es = vec![];
    for i in 1..=4 {
        vs.push((format!("v{i}"), -big_n));
        es.push(("n".to_string(), format!("v{i}")));
    }
    vs.push(("v5".into(), -1));
    es.push(("n".into(), "v5".into()));
    Graph::new(Some(format!("T1(N={big_n})")), &vs, &es).unwrap()
}

fn t_half(vs: &mut Vec<(String, i64)>, es: &mut Vec<(String, String)>, k: usize, big_n: i64, hub: &str) {
    let n = format!("n{k}");
    vs.push((n.clone(), -3));
    for i in 1..=4 {
        let v = format!("v{k}{i}");
        vs.push((v.clone(), -big_n));
        es.push((n.clone(), v));
    }
    es.push((n, hub.to_string()));
}

/// Two copies of T1 glued along `v5`; the merged vertex `v` has euler `-M`.
pub fn t_glued(big_n: i64, big_m: i64) -> Graph {
    let mut vs = vec![];
    let mut es = vec![];
    t_half(&mut vs, &mut es, 1, big_n, "v");
    t_half(&mut vs, &mut es, 2, big_n, "v");
    vs.push(("v".into(), -big_m));
    Graph::new(Some(format!("T(N={big_n},M={big_m})")), &vs, &es).unwrap()
}

/// `T` blown up once at `v`; the new vertex is `vnew`.
pub fn t_new(big_n: i64, big_m: i64) -> Graph {
    let mut vs = vec![];
    let mut es = vec![];
    t_half(&mut vs, &mut es, 1, big_n, "v");
    t_half(&mut vs, &mut es, 2, big_n, "v");
    vs.push(("v".into(), -big_m - 1));
    vs.push(("vnew".into(), -1));
    es.push(("v".into(), "vnew".into()));
    Graph::new(Some(format!("Tnew(N={big_n},M={big_m})")), &vs, &es).unwrap()
}

/// Two copies of `Tnew` glued along `vnew` into `w(-K)`, then blown up at
/// `w`: `w` gets `-K-1` and a new `-1` leaf `wp`. The neighbours of `w` on
/// the two sides are `v` and `v_b`.
pub fn t_double_prime(big_n: i64, big_m: i64, big_k: i64) -> Graph {
    let side = t_new(big_n, big_m);
    let glued = side.glue("vnew", &side, "vnew", -big_k, "_b").unwrap();
    let mut vs: Vec<(String, i64)> = glued
        .ids()
        .iter()
        .zip(glued.eulers())
        .map(|(id, &e)| (if id == "vnew" { "w".to_string() } else { id.clone() }, e))
        .collect();
    let mut es: Vec<(String, String)> = glued
        .edges()
        .iter()
        .map(|&(a, b)| (vs[a].0.clone(), vs[b].0.clone()))
        .collect();
    let w = vs.iter().position(|(id, _)| id == "w").unwrap();
    vs[w].1 -= 1;
    vs.push(("wp".into(), -1));
    es.push(("w".into(), "wp".into()));
    Graph::new(Some(format!("T''(N={big_n},M={big_m},K={big_k})")), &vs, &es).unwrap()
}

/// Pinned `N` of [`t1`].
pub const T1_N: i64 = 5;
/// Pinned `(N, M)` of [`t_glued`].
pub const T_NM: (i64, i64) = (3, 4);
/// Pinned `(N, M, K)` of [`t_double_prime`].
pub const T_DOUBLE_PRIME_NMK: (i64, i64, i64) = (3, 4, 200);

/// The graphs shipped as JSON files, by file stem.
pub fn shipped() -> Vec<(&'static str, Graph)> {
    let (n, m) = T_NM;
    let (a, b, c) = T_DOUBLE_PRIME_NMK;
    vec![
        ("g1", g1()),
        ("g2", g2()),
        ("g3", g3()),
        ("g4", g4()),
        ("g5", g5()),
        ("t1", t1(T1_N)),
        ("t", t_glued(n, m)),
        ("t_double_prime", t_double_prime(a, b, c)),
    ]
}

/// `sum z(l)` over `l >= 0` with `l_v5 = l_n = 0` on `T1`.
pub fn t1_e1(p: &Plumbing) -> Result<i128> {
    let fixed = [p.vertex("v5")?, p.vertex("n")?];
    fixed_coords_sum(p, &fixed, &crate::lattice::QCycle::zero(p.n()), &Profile::zero(p.n()))
}

/// The same sum shifted by `3 E*_n - sum_{i <= 4} E*_{v_i}`.
pub fn t1_e2(p: &Plumbing) -> Result<i128> {
    let fixed = [p.vertex("v5")?, p.vertex("n")?];
    let mut a = vec![0i64; p.n()];
    a[p.vertex("n")?] = 3;
    for i in 1..=4 {
        a[p.vertex(&format!("v{i}"))?] = -1;
    }
    fixed_coords_sum(p, &fixed, &p.lattice().from_e_star_ints(&a), &Profile::zero(p.n()))
}

/// `(sw_0, sw_{[E*_v]})` on `T`.
pub fn t_sw_pair(p: &Plumbing) -> Result<(i128, i128)> {
    let lat = p.lattice();
    let hv = lat.class_of_dual(p.vertex("v")?);
    Ok((sw_norm(p, &lat.zero_class())?, sw_norm(p, &hv)?))
}

/// `sum z(l' + l)` over `l >= 0` with `l_wp = 0` on `T''`, where
/// `l' = E*_w + E*_v + E*_{v_b}`.
pub fn t_double_prime_sum(p: &Plumbing) -> Result<i128> {
    let lat = p.lattice();
    let l = ["w", "v", "v_b"]
        .iter()
        .map(|id| Ok(lat.dual_base(p.vertex(id)?).clone()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .fold(crate::lattice::QCycle::zero(p.n()), |acc, x| &acc + x);
    fixed_coords_sum(p, &[p.vertex("wp")?], &l, &Profile::zero(p.n()))
}

/// Evaluates `f` at `params` and at each parameter raised by one; the value
/// is stable when all of them agree.
pub fn stability_scan<T: PartialEq + Clone>(
    params: &[i64],
    f: impl Fn(&[i64]) -> Result<T>,
) -> Result<(T, bool)> {
    let base = f(params)?;
    for k in 0..params.len() {
        let mut next = params.to_vec();
        next[k] += 1;
        if f(&next)? != base {
            return Ok((base, false));
        }
    }
    Ok((base, true))
}
