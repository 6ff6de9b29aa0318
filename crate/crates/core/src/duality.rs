//! The duality between alternating sums of virtual cohomology numbers and
//! sums of relative series coefficients, its incarnation with counting
//! functions, its single-vertex specialization, and the blow-up route.

use num_traits::ToPrimitive;

use crate::enumerate::{region_sum, Region};
use crate::error::{Error, Result};
use crate::invariants::{h1_virt, sw0_complement, sw_norm};
use crate::lattice::QCycle;
use crate::plumbing::Plumbing;
use crate::rational::{q_i128, Q};
use crate::series::{bounded_sum, counting_q_projected, exponents, Profile};
use crate::treesum::{tree_sum, OffsetRegion};

/// The multisubsets `k` with `0 <= k_v <= a_v`, each standing for
/// `prod_v binom(a_v, k_v)` distinguishable choices.
#[derive(Debug, Clone)]
pub struct MultiSubsetExpansion {
    a: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSubset {
    pub k: Vec<i64>,
    pub weight: i128,
    /// `(-1)^{|k|}`.
    pub sign: i128,
}

impl MultiSubsetExpansion {
    pub fn new(a: &Profile) -> MultiSubsetExpansion {
        MultiSubsetExpansion { a: a.values().to_vec() }
    }

    /// Vertices with positive multiplicity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.a.len()).filter(|&v| self.a[v] > 0).collect()
    }

    /// All terms, the empty multisubset first.
    pub fn terms(&self) -> Vec<MultiSubset> {
        let mut out = Vec::new();
        let mut k = vec![0i64; self.a.len()];
        loop {
            let weight = k
                .iter()
                .zip(&self.a)
                .map(|(&k, &a)| binom(a, k))
                .product();
            let size: i64 = k.iter().sum();
            out.push(MultiSubset { k: k.clone(), weight, sign: if size % 2 == 0 { 1 } else { -1 } });
            let mut i = 0;
            loop {
                if i == k.len() {
                    return out;
                }
                if k[i] < self.a[i] {
                    k[i] += 1;
                    break;
                }
                k[i] = 0;
                i += 1;
            }
        }
    }

    /// `sum_v k_v E*_v`.
    pub fn cycle(p: &Plumbing, k: &[i64]) -> QCycle {
        p.lattice().from_e_star_ints(k)
    }
}

fn binom(n: i64, k: i64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn profile_of(p: &Plumbing, l: &QCycle) -> Result<Profile> {
    Profile::of_cycle(p, l)
}

/// `sum_k (-1)^{|k|} prod binom(a_v, k_v) h^1_virt(l'(k))`.
pub fn duality_lhs(p: &Plumbing, l: &QCycle) -> Result<Q> {
    let a = profile_of(p, l)?;
    let mut total = Q::from_integer(0.into());
    for t in MultiSubsetExpansion::new(&a).terms() {
        let h = h1_virt(p, &MultiSubsetExpansion::cycle(p, &t.k))?;
        total += h * q_i128(t.sign * t.weight);
    }
    Ok(total)
}

/// `sum r(l'')` over `[l''] = [Z_K]`, `l''_J <= (Z_K - E)_J`.
pub fn duality_rhs(p: &Plumbing, l: &QCycle) -> Result<i128> {
    let a = profile_of(p, l)?;
    let j = a.support();
    if j.is_empty() {
        return Err(Error::InvalidArgument(
            "the cycle has empty E*-support, so the coefficient region is unbounded".into(),
        ));
    }
    let lat = p.lattice();
    let zk = lat.canonical_cycle();
    let bound = zk - &QCycle::ones(p.n());
    bounded_sum(p, &lat.class_of(zk)?, &j, &bound, &a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityCheck {
    pub lhs: Q,
    pub rhs: Q,
    pub equal: bool,
}

/// Both sides of the main duality.
pub fn duality_check(p: &Plumbing, l: &QCycle) -> Result<DualityCheck> {
    let lhs = duality_lhs(p, l)?;
    let rhs = q_i128(duality_rhs(p, l)?);
    Ok(DualityCheck { equal: lhs == rhs, lhs, rhs })
}

/// The identity with `h^1_virt` unfolded into counting functions: the left
/// side sums `chi(l'(k)) + sw - chi(r) - sum_{l''_J <= (l'(k) - E)_J} z`, the
/// right side is `Q^R_{[Z_K], J}(Z_K)`.
pub fn duality_incarnation_check(p: &Plumbing, l: &QCycle) -> Result<DualityCheck> {
    let a = profile_of(p, l)?;
    let j = a.support();
    if j.is_empty() {
        return Err(Error::InvalidArgument("the cycle has empty E*-support".into()));
    }
    let lat = p.lattice();
    let zero = Profile::zero(p.n());
    let ones = QCycle::ones(p.n());
    let mut lhs = Q::from_integer(0.into());
    for t in MultiSubsetExpansion::new(&a).terms() {
        let c = MultiSubsetExpansion::cycle(p, &t.k);
        let h = lat.class_of(&c)?;
        let inner = bounded_sum(p, &h, &j, &(&c - &ones), &zero)?;
        let term = lat.chi(&c) + q_i128(sw_norm(p, &h)?) - lat.chi(h.rep()) - q_i128(inner);
        lhs += term * q_i128(t.sign * t.weight);
    }
    let zk = lat.canonical_cycle();
    let rhs = q_i128(counting_q_projected(p, &lat.class_of(zk)?, &j, zk, &a)?);
    Ok(DualityCheck { equal: lhs == rhs, lhs, rhs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialIdentity {
    pub vertex: usize,
    pub lhs: Q,
    pub sw_complement: i128,
    pub q_dual: i128,
    pub q_direct: i128,
    pub holds: bool,
}

/// `chi(E*_v) - chi(r_{h_v}) + sw_{h_v} = sw_0(T - v) +
/// Q_{[Z_K]-h_v, v}(Z_K - E*_v) + Q_{h_v, v}(E*_v)` with `h_v = [E*_v]`.
pub fn vertex_special_identity(p: &Plumbing, v: usize) -> Result<SpecialIdentity> {
    let lat = p.lattice();
    let ev = lat.dual_base(v);
    let hv = lat.class_of(ev)?;
    let zero = Profile::zero(p.n());
    let lhs = lat.chi(ev) - lat.chi(hv.rep()) + q_i128(sw_norm(p, &hv)?);
    let sw_complement = sw0_complement(p, &[v])?;
    let x = lat.canonical_cycle() - ev;
    let q_dual = counting_q_projected(p, &lat.class_of(&x)?, &[v], &x, &zero)?;
    let q_direct = counting_q_projected(p, &hv, &[v], ev, &zero)?;
    let holds = lhs == q_i128(sw_complement + q_dual + q_direct);
    Ok(SpecialIdentity { vertex: v, lhs, sw_complement, q_dual, q_direct, holds })
}

/// The blown-up graph of the route, the pullback of `Z_K` and the leg ends
/// with their lower bounds `(Z_K)_v`.
struct BlowUp {
    bp: Plumbing,
    pull: QCycle,
    ends: Vec<(usize, Q)>,
}

fn blow_up_for_route(p: &Plumbing, a: &Profile, s: usize) -> Result<BlowUp> {
    let zk = p.lattice().canonical_cycle();
    let mut g = p.graph().clone();
    let mut legs: Vec<(usize, Vec<String>)> = Vec::new();
    for v in a.support() {
        for _ in 0..a.get(v) {
            let before = g.len();
            let (next, _) = g.blow_up_leg(p.graph().id(v), s)?;
            let chain: Vec<String> = next.ids()[before..].to_vec();
            legs.push((v, chain));
            g = next;
        }
    }
    let bp = p.derived(g)?;
    let mut pull = vec![Q::from_integer(0.into()); bp.n()];
    for (v, x) in zk.coords().iter().enumerate() {
        pull[bp.vertex(p.graph().id(v))?] = x.clone();
    }
    let mut ends = Vec::new();
    for (v, chain) in &legs {
        for id in chain {
            pull[bp.vertex(id)?] = zk.coords()[*v].clone();
        }
        ends.push((bp.vertex(chain.last().expect("nonempty leg"))?, zk.coords()[*v].clone()));
    }
    Ok(BlowUp { bp, pull: QCycle::new(pull), ends })
}

/// `h^1` through the blow-up of `E_v` in `a_v` points, `s` times each:
/// the sum of `z` on the blown-up graph over `[l''] = [Z_{K,s}]`,
/// `l''_{v_k} >= (Z_K)_v` on the new ends, and `l'' >= pi^*(Z_K)` failing.
pub fn h1virt_blowup_route(p: &Plumbing, l: &QCycle, s: usize) -> Result<i128> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let a = profile_of(p, l)?;
    if a.is_zero() {
        return sw_norm(p, &p.lattice().zero_class());
    }
    let BlowUp { bp, pull, ends } = blow_up_for_route(p, &a, s)?;
    let blat = bp.lattice();
    let base = blat.class_of(blat.canonical_cycle())?.rep().clone();
    let mut region = OffsetRegion::around(&bp, &base)?;
    for (u, y) in &ends {
        region.lower(*u, &base.coords()[*u], y)?;
    }
    for u in 0..bp.n() {
        region.witness(u, &base.coords()[u], &pull.coords()[u])?;
    }
    let r = tree_sum(&bp, &exponents(&bp, &Profile::zero(bp.n())), &region);
    p.record_terms(bp.terms_used());
    r
}

/// [`h1virt_blowup_route`] by enumeration of E*-exponents.
pub fn h1virt_blowup_route_enum(p: &Plumbing, l: &QCycle, s: usize) -> Result<i128> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let a = profile_of(p, l)?;
    if a.is_zero() {
        return sw_norm(p, &p.lattice().zero_class());
    }
    let BlowUp { bp, pull, ends } = blow_up_for_route(p, &a, s)?;
    let blat = bp.lattice();
    let ps = blat.scale(&pull)?;
    let d = q_i128(blat.d());
    let lower = ends
        .iter()
        .map(|(u, x)| {
            let y = x * &d;
            y.to_integer().to_i128().map(|y| (*u, y)).ok_or(Error::Overflow("scaled cycle"))
        })
        .collect::<Result<Vec<_>>>()?;
    let region = Region {
        target: blat.class_of(blat.canonical_cycle())?.key().to_vec(),
        upper: vec![],
        lower,
        witnesses: (0..bp.n()).map(|u| (u, ps[u])).collect(),
    };
    let r = region_sum(&bp, &exponents(&bp, &Profile::zero(bp.n())), &region);
    p.record_terms(bp.terms_used());
    r
}

/// The blow-up route at `s` and `s + 1`; `Unstable` if they differ.
pub fn h1virt_blowup_stable(p: &Plumbing, l: &QCycle, s: usize) -> Result<i128> {
    let x = h1virt_blowup_route(p, l, s)?;
    let y = h1virt_blowup_route(p, l, s + 1)?;
    if x != y {
        return Err(Error::Unstable(format!("blow-up route gives {x} at s = {s} and {y} at s = {}", s + 1)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;

    fn pl(g: crate::graph::Graph) -> Plumbing {
        Plumbing::new(g).unwrap()
    }

    #[test]
    fn expansion_counts() {
        let e = MultiSubsetExpansion::new(&Profile::new(vec![2, 0, 3]).unwrap());
        let terms = e.terms();
        assert_eq!(terms.len(), 12);
        assert_eq!(terms[0].k, vec![0, 0, 0]);
        assert_eq!(terms.iter().map(|t| t.weight).sum::<i128>(), 32);
        assert_eq!(terms.iter().map(|t| t.sign * t.weight).sum::<i128>(), 0);
        assert_eq!(e.support(), vec![0, 2]);
    }

    #[test]
    fn small_dualities() {
        let p1 = pl(fixtures::g1());
        let e = p1.lattice().dual_base(0).clone();
        assert_eq!(duality_lhs(&p1, &e).unwrap(), q(0));
        assert_eq!(duality_rhs(&p1, &e).unwrap(), 0);
        assert!(duality_incarnation_check(&p1, &e).unwrap().equal);
        let p2 = pl(fixtures::g2());
        let w = p2.vertex("w").unwrap();
        let ew = p2.lattice().dual_base(w).clone();
        assert_eq!(duality_lhs(&p2, &ew).unwrap(), q(0));
        assert_eq!(duality_rhs(&p2, &ew).unwrap(), 0);
        assert!(duality_incarnation_check(&p2, &ew).unwrap().equal);
        let zero = QCycle::zero(2);
        assert_eq!(duality_lhs(&p2, &zero).unwrap(), q(0));
        assert!(duality_rhs(&p2, &zero).is_err());
    }

    #[test]
    fn star_duality() {
        let p = pl(fixtures::g5());
        let c = p.vertex("c").unwrap();
        let l = p.lattice().dual_base(c).clone();
        let r = duality_check(&p, &l).unwrap();
        assert!(r.equal, "{r:?}");
        assert!(duality_incarnation_check(&p, &l).unwrap().equal);
    }

    #[test]
    fn special_identities() {
        let p1 = pl(fixtures::g1());
        assert!(vertex_special_identity(&p1, 0).unwrap().holds);
        let p2 = pl(fixtures::g2());
        for v in 0..2 {
            assert!(vertex_special_identity(&p2, v).unwrap().holds);
        }
        let p5 = pl(fixtures::g5());
        for v in 0..p5.n() {
            assert!(vertex_special_identity(&p5, v).unwrap().holds);
        }
    }

    #[test]
    fn blow_up_route() {
        let p1 = pl(fixtures::g1());
        let l = p1.lattice().from_e_star_ints(&[2]);
        let h = h1virt_blowup_stable(&p1, &l, 2).unwrap();
        assert_eq!(q_i128(h), h1_virt(&p1, &l).unwrap());
        assert_eq!(h1virt_blowup_route(&p1, &QCycle::zero(1), 1).unwrap(), 0);
        let p5 = pl(fixtures::g5());
        let c = p5.vertex("c").unwrap();
        let l = p5.lattice().dual_base(c).clone();
        let h = h1virt_blowup_stable(&p5, &l, 2).unwrap();
        assert_eq!(q_i128(h), h1_virt(&p5, &l).unwrap());
    }

    #[test]
    fn blow_up_route_matches_enumeration() {
        let p = pl(fixtures::g2());
        for a in [[1, 0], [0, 1], [1, 1], [2, 0]] {
            let l = p.lattice().from_e_star_ints(&a);
            for s in 1..=2 {
                assert_eq!(
                    h1virt_blowup_route(&p, &l, s).unwrap(),
                    h1virt_blowup_route_enum(&p, &l, s).unwrap(),
                    "a = {a:?}, s = {s}"
                );
            }
        }
    }
}
