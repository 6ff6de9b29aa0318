//! Monomial conditions, lattice-cube weights, and the geometric genus of
//! weighted-homogeneous singularities.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::{HClass, QCycle};
use crate::plumbing::Plumbing;
use crate::rational::{ceil_q, q, q_i128, Q};
use crate::seifert::SeifertData;

/// A monomial cycle `Z(a) = sum a_w E*_w` over the ends of a branch with
/// `Z(a) - E*_v` effective, integral and supported on the branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialWitness {
    pub node: usize,
    /// Neighbour of the node inside the branch.
    pub branch: usize,
    /// `(end, a_end)` for every end of the branch.
    pub coefficients: Vec<(usize, i64)>,
    /// `Z(a) - E*_v`.
    pub difference: QCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialSearch {
    Sat(MonomialWitness),
    /// No solution exists at all.
    Unsat,
    /// No solution with every coefficient at most the bound.
    UnsatWithinBound,
}

/// Ends of the whole graph lying in the branch of `v` through `u`.
pub fn branch_ends(p: &Plumbing, v: usize, u: usize) -> Vec<usize> {
    let g = p.graph();
    let mut ends: Vec<usize> = g.branch(v, u).into_iter().filter(|&w| g.valency(w) == 1).collect();
    ends.sort_unstable();
    ends
}

/// Searches `a` in lexicographic order. Vanishing off the branch reduces
/// to the single equation `sum a_w (E*_w)_v = (E*_v)_v`, which also caps
/// every `a_w`; the search is exhaustive unless `bound` cuts below that cap.
pub fn monomial_cycle_exists(p: &Plumbing, v: usize, u: usize, bound: Option<i64>) -> MonomialSearch {
    let bound = bound.unwrap_or(i64::MAX);
    let lat = p.lattice();
    let d = lat.d();
    let dual = lat.dual_scaled();
    let branch = p.graph().branch(v, u);
    let ends = branch_ends(p, v, u);
    let target = dual[v][v];
    let caps: Vec<i64> = ends.iter().map(|&w| (target / dual[w][v]) as i64).collect();
    let truncated = caps.iter().any(|&c| c > bound);
    let caps: Vec<i64> = caps.into_iter().map(|c| c.min(bound)).collect();
    let mut a = vec![0i64; ends.len()];
    let check = |a: &[i64]| -> Option<Vec<i128>> {
        let mut y: Vec<i128> = dual[v].iter().map(|x| -x).collect();
        for (k, &w) in ends.iter().enumerate() {
            for (yu, du) in y.iter_mut().zip(&dual[w]) {
                *yu += a[k] as i128 * du;
            }
        }
        if y[v] != 0 {
            return None;
        }
        let ok = branch.iter().all(|&x| y[x] >= 0 && y[x] % d == 0);
        ok.then_some(y)
    };
    let mut found = None;
    'search: loop {
        let s: i128 = ends.iter().zip(&a).map(|(&w, &k)| k as i128 * dual[w][v]).sum();
        if s == target {
            if let Some(y) = check(&a) {
                found = Some(y);
                break 'search;
            }
        }
        // Next vector in lexicographic order, last coordinate fastest.
        let mut i = a.len();
        loop {
            if i == 0 {
                break 'search;
            }
            i -= 1;
            let partial: i128 = ends[..i].iter().zip(&a).map(|(&w, &k)| k as i128 * dual[w][v]).sum();
            if a[i] < caps[i] && partial + (a[i] + 1) as i128 * dual[ends[i]][v] <= target {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
    match found {
        Some(y) => MonomialSearch::Sat(MonomialWitness {
            node: v,
            branch: u,
            coefficients: ends.iter().copied().zip(a).collect(),
            difference: lat.unscale(&y),
        }),
        None if truncated => MonomialSearch::UnsatWithinBound,
        None => MonomialSearch::Unsat,
    }
}

/// Whether `Z(a) - E*_v` vanishes off the branch, checked on every
/// coordinate.
pub fn monomial_full_check(p: &Plumbing, v: usize, u: usize, coefficients: &[(usize, i64)]) -> bool {
    let lat = p.lattice();
    let branch = p.graph().branch(v, u);
    let mut z = -lat.dual_base(v);
    for &(w, k) in coefficients {
        z = &z + &lat.dual_base(w).scaled(&q(k));
    }
    (0..p.n()).all(|x| {
        let c = &z.coords()[x];
        if branch.contains(&x) {
            c.is_integer() && !c.is_negative()
        } else {
            num_traits::Zero::is_zero(c)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Failed,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Satisfied => "SATISFIED",
            Verdict::Failed => "FAILED",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MonomialReport {
    pub bound: Option<i64>,
    pub entries: Vec<(usize, usize, MonomialSearch)>,
    pub verdict: Verdict,
}

/// Runs the search for every node and branch.
pub fn monomial_condition(p: &Plumbing, bound: Option<i64>) -> MonomialReport {
    let g = p.graph();
    let mut entries = Vec::new();
    for v in g.nodes() {
        for &u in g.neighbors(v) {
            entries.push((v, u, monomial_cycle_exists(p, v, u, bound)));
        }
    }
    let verdict = if entries.iter().any(|e| e.2 == MonomialSearch::Unsat) {
        Verdict::Failed
    } else if entries.iter().any(|e| e.2 == MonomialSearch::UnsatWithinBound) {
        Verdict::Unknown
    } else {
        Verdict::Satisfied
    };
    MonomialReport { bound, entries, verdict }
}

/// `2d chi(l)` as an integer, for `l` in `L'`.
struct ChiScaled<'a> {
    p: &'a Plumbing,
    d: i128,
}

impl ChiScaled<'_> {
    fn of(&self, l: &QCycle) -> i128 {
        let c = self.p.lattice().chi(l) * q_i128(2 * self.d);
        debug_assert!(c.is_integer());
        c.to_integer().to_i128().expect("chi fits")
    }
}

fn subsets(set: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..(1u64 << set.len())).map(move |mask| {
        set.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect()
    })
}

fn add_e(l: &QCycle, f: &[usize]) -> QCycle {
    let mut c = l.coords().to_vec();
    for &u in f {
        c[u] += q(1);
    }
    QCycle::new(c)
}

/// `w((l', I)) = max_{F in I} chi(l' + E_F)`.
pub fn weight_w(p: &Plumbing, l: &QCycle, set: &[usize]) -> Result<Q> {
    if set.len() > 20 {
        return Err(Error::ResourceLimit { limit: 1 << 20 });
    }
    let lat = p.lattice();
    let best = subsets(set).map(|f| lat.chi(&add_e(l, &f))).max().expect("nonempty");
    Ok(best)
}

/// `z(l') = sum_I (-1)^{|I|+1} w((l', I))`.
pub fn z_via_weights(p: &Plumbing, l: &QCycle) -> Result<Q> {
    let all: Vec<usize> = (0..p.n()).collect();
    if all.len() > 12 {
        return Err(Error::ResourceLimit { limit: 1 << 12 });
    }
    let mut total = q(0);
    for set in subsets(&all) {
        let w = weight_w(p, l, &set)?;
        if set.len() % 2 == 1 {
            total += w;
        } else {
            total -= w;
        }
    }
    Ok(total)
}

/// Weighted Euler characteristic `sum (-1)^{|I|+1} w((l', I))` over the
/// cubes of the rectangle `[r_h - N, r_h + N]`.
pub fn chi_w_rectangle(p: &Plumbing, h: &HClass, radius: i64) -> Result<Q> {
    let n = p.n();
    let d = p.lattice().d();
    let side = (2 * radius + 1) as u64;
    let cubes = side.checked_pow(n as u32).and_then(|x| x.checked_mul(1 << n));
    match cubes {
        Some(c) if c <= p.max_terms() => p.record_terms(c),
        _ => return Err(Error::ResourceLimit { limit: p.max_terms() }),
    }
    let chi = ChiScaled { p, d };
    let base = h.rep();
    // 2d chi at every lattice point of the box, indexed in base 2N+1.
    let s = side as usize;
    let mut values = vec![0i128; s.pow(n as u32)];
    let mut k = vec![-radius; n];
    for slot in values.iter_mut() {
        let l = &QCycle::from_ints(&k) + base;
        *slot = chi.of(&l);
        for x in k.iter_mut() {
            if *x < radius {
                *x += 1;
                break;
            }
            *x = -radius;
        }
    }
    let index = |k: &[i64]| -> usize {
        k.iter().rev().fold(0usize, |acc, &x| acc * s + (x + radius) as usize)
    };
    let mut total: i128 = 0;
    let mut k = vec![-radius; n];
    for _ in 0..values.len() {
        let free: Vec<usize> = (0..n).filter(|&u| k[u] < radius).collect();
        for set in subsets(&free) {
            let mut best = i128::MIN;
            for f in subsets(&set) {
                let mut kk = k.clone();
                for &u in &f {
                    kk[u] += 1;
                }
                best = best.max(values[index(&kk)]);
            }
            if set.len() % 2 == 1 {
                total += best;
            } else {
                total -= best;
            }
        }
        for x in k.iter_mut() {
            if *x < radius {
                *x += 1;
                break;
            }
            *x = -radius;
        }
    }
    Ok(q_i128(total) / q_i128(2 * d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleResult {
    pub radius: i64,
    pub sw: Q,
    pub stabilized: bool,
}

/// `chi(r_h) + chi_w(R)` at radius `N`, with stabilization meaning radius
/// `N + 1` gives the same value.
pub fn sw_via_rectangle(p: &Plumbing, h: &HClass, radius: i64) -> Result<RectangleResult> {
    let lat = p.lattice();
    let at = |r: i64| -> Result<Q> { Ok(lat.chi(h.rep()) + chi_w_rectangle(p, h, r)?) };
    let sw = at(radius)?;
    let next = at(radius + 1)?;
    Ok(RectangleResult { radius, stabilized: sw == next, sw })
}

/// Doubles the radius from 1 until two consecutive radii agree.
pub fn sw_via_rectangle_auto(p: &Plumbing, h: &HClass) -> Result<RectangleResult> {
    let mut r = 1;
    loop {
        let res = sw_via_rectangle(p, h, r)?;
        if res.stabilized {
            return Ok(res);
        }
        r *= 2;
    }
}

/// The value the rectangle formula gives with the opposite sign convention,
/// `chi(r_h) - chi_w(R)`.
pub fn sw_via_rectangle_literal(p: &Plumbing, h: &HClass, radius: i64) -> Result<Q> {
    Ok(p.lattice().chi(h.rep()) - chi_w_rectangle(p, h, radius)?)
}

/// `n_l = -b0 l - 2 + sum_j ceil(omega_j l / alpha_j)`.
pub fn n_ell(sf: &SeifertData, l: i64) -> i64 {
    let s: i64 = sf.legs.iter().map(|&(a, w)| Integer::div_ceil(&(w * l), &a)).sum();
    -sf.b0 * l - 2 + s
}

/// `p_g = sum_{l >= 1, n_l >= 0} (n_l + 1)`, scanning up to
/// `ceil((nu - 2) / |e_orb|)`.
pub fn pg_weighted_homogeneous(sf: &SeifertData) -> Result<i64> {
    let e = sf.e_orb();
    if !e.is_negative() {
        return Err(Error::NotNegDefinite);
    }
    let nu = sf.legs.len() as i64;
    let lmax = ceil_q(&(q(nu - 2) / e.abs())).to_i64().ok_or(Error::Overflow("scan bound"))?;
    Ok((1..=lmax).map(|l| n_ell(sf, l)).filter(|&x| x >= 0).map(|x| x + 1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::invariants::sw_norm;
    use crate::series::{z_coeff, Profile};

    fn pl(g: crate::graph::Graph) -> Plumbing {
        Plumbing::new(g).unwrap()
    }

    #[test]
    fn monomial_on_fixtures() {
        let e8 = pl(fixtures::g3());
        let r = monomial_condition(&e8, None);
        assert_eq!(r.verdict, Verdict::Satisfied);
        for (v, u, s) in &r.entries {
            let MonomialSearch::Sat(w) = s else { panic!() };
            assert!(monomial_full_check(&e8, *v, *u, &w.coefficients));
        }
        let g4 = pl(fixtures::g4());
        let r = monomial_condition(&g4, None);
        assert_eq!(r.verdict, Verdict::Failed);
        assert_eq!(monomial_condition(&e8, Some(1)).verdict, Verdict::Unknown);
        for g in [fixtures::g1(), fixtures::g2(), fixtures::a_n(4)] {
            assert_eq!(monomial_condition(&pl(g), Some(5)).verdict, Verdict::Satisfied);
        }
        for g in [fixtures::g5(), fixtures::d_n(4)] {
            let p = pl(g);
            assert_eq!(monomial_condition(&p, None).verdict, Verdict::Satisfied);
        }
    }

    #[test]
    fn weights() {
        let p = pl(fixtures::g1());
        let zero = QCycle::zero(1);
        assert_eq!(weight_w(&p, &zero, &[]).unwrap(), q(0));
        assert_eq!(weight_w(&p, &zero, &[0]).unwrap(), q(1));
        assert_eq!(z_via_weights(&p, &QCycle::from_ints(&[1])).unwrap(), q(3));
        assert_eq!(z_via_weights(&p, &zero).unwrap(), q(1));
        let p2 = pl(fixtures::g2());
        for a in 0..3 {
            for b in 0..3 {
                let l = p2.lattice().from_e_star_ints(&[a, b]);
                let z = z_coeff(&p2, &l, &Profile::zero(2));
                assert_eq!(z_via_weights(&p2, &l).unwrap(), q_i128(z), "{l}");
            }
        }
    }

    #[test]
    fn rectangles() {
        for g in [fixtures::g1(), fixtures::g2(), fixtures::a_n(3)] {
            let p = pl(g);
            for h in p.lattice().classes() {
                let r = sw_via_rectangle_auto(&p, &h).unwrap();
                assert_eq!(r.sw, q_i128(sw_norm(&p, &h).unwrap()), "{h}");
            }
        }
    }

    #[test]
    fn literal_rectangle_sign_disagrees() {
        let p = pl(fixtures::g1());
        let h = p.lattice().class_of(p.lattice().dual_base(0)).unwrap();
        assert_eq!(sw_via_rectangle_literal(&p, &h, 3).unwrap(), crate::rational::q_frac(1, 2));
    }

    #[test]
    fn genus() {
        let sf = |s: &str| SeifertData::parse(s).unwrap();
        assert_eq!(pg_weighted_homogeneous(&sf("1;(2,1),(3,1),(7,1)")).unwrap(), 1);
        assert_eq!(pg_weighted_homogeneous(&sf("2;(2,1),(3,2),(5,4)")).unwrap(), 0);
        assert_eq!(pg_weighted_homogeneous(&sf("2;(2,1),(2,1),(2,1)")).unwrap(), 0);
        assert!(n_ell(&sf("2;(2,1),(2,1),(2,1)"), 0) == -2);
    }
}
