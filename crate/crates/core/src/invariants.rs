//! Normalized Seiberg-Witten invariants, the quasipolynomial of the
//! counting function, virtual cohomology numbers and projected periodic
//! constants.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{HClass, QCycle};
use crate::plumbing::Plumbing;
use crate::rational::{fmt_q, q_i128, Q};
use crate::series::{counting_q, counting_q_projected, Profile};

fn integral(x: Q, what: &str) -> Result<i128> {
    if !x.is_integer() {
        return Err(Error::NonIntegral(format!("{what} = {}", fmt_q(&x))));
    }
    x.to_integer().to_i128().ok_or(Error::Overflow("invariant"))
}

/// `Q_h(x) - chi(x) + chi(r_h)` at a point `x` of class `h`.
fn sw_at(p: &Plumbing, h: &HClass, x: &QCycle) -> Result<i128> {
    let lat = p.lattice();
    let qh = counting_q(p, x, &Profile::zero(p.n()))?;
    integral(q_i128(qh) - lat.chi(x) + lat.chi(h.rep()), "normalized invariant")
}

/// `sw_h^norm`, from the counting function at the minimal deep point.
pub fn sw_norm(p: &Plumbing, h: &HClass) -> Result<i128> {
    if let Some(&x) = p.sw_cache.lock().unwrap().get(h) {
        return Ok(x);
    }
    let x = sw_at(p, h, &p.lattice().deep_point(h))?;
    p.sw_cache.lock().unwrap().insert(h.clone(), x);
    Ok(x)
}

/// `sw_h^norm` evaluated at the deep point and at the deep point shifted by
/// the fundamental cycle; `Unstable` if they differ.
pub fn sw_norm_stable(p: &Plumbing, h: &HClass) -> Result<i128> {
    let lat = p.lattice();
    let x = lat.deep_point(h);
    let a = sw_norm(p, h)?;
    let b = sw_at(p, h, &(&x + &lat.artin_min_cycle()))?;
    if a != b {
        return Err(Error::Unstable(format!("class {h}: {a} at the deep point, {b} one step deeper")));
    }
    Ok(a)
}

/// `sw_h^norm` at `r_h + ceil(Z_K - r_h) + k d sum E*_v`.
pub fn sw_norm_coarse(p: &Plumbing, h: &HClass, k: u32) -> Result<i128> {
    sw_at(p, h, &p.lattice().coarse_deep_point(h, k))
}

/// `sw_h^norm` as the periodic constant of the whole series, computed by
/// the dual counting formula `Q_{[Z_K]-h}(Z_K - r_h)`.
pub fn sw_norm_dual(p: &Plumbing, h: &HClass) -> Result<i128> {
    let all: Vec<usize> = (0..p.n()).collect();
    pc_dual(p, h, &all)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwEntry {
    pub class: HClass,
    pub deep_point: QCycle,
    pub sw: i128,
}

/// `sw_h^norm` for every class, in the lattice's class order.
pub fn sw_table(p: &Plumbing) -> Result<Vec<SwEntry>> {
    let lat = p.lattice();
    lat.classes()
        .into_iter()
        .map(|h| {
            let sw = sw_norm(p, &h)?;
            Ok(SwEntry { deep_point: lat.deep_point(&h), class: h, sw })
        })
        .collect()
}

/// `chi(r_h + l) - chi(r_h) + sw_h^norm` for integral `l`.
pub fn quasipoly_q(p: &Plumbing, h: &HClass, l: &QCycle) -> Result<Q> {
    if !l.is_integral() {
        return Err(Error::InvalidArgument(format!("{l} is not integral")));
    }
    let lat = p.lattice();
    let sw = sw_norm(p, h)?;
    Ok(lat.chi(&(h.rep() + l)) - lat.chi(h.rep()) + q_i128(sw))
}

/// `h^1_virt(l') = -Q_h(l') + chi(l') - chi(r_h) + sw_h^norm`.
pub fn h1_virt(p: &Plumbing, l: &QCycle) -> Result<Q> {
    let lat = p.lattice();
    let h = lat.class_of(l)?;
    let qh = counting_q(p, l, &Profile::zero(p.n()))?;
    let sw = sw_norm(p, &h)?;
    Ok(-q_i128(qh) + lat.chi(l) - lat.chi(h.rep()) + q_i128(sw))
}

/// Projected periodic constant by the dual counting formula
/// `Q_{[Z_K]-h, I}(Z_K - r_h)`.
pub fn pc_dual(p: &Plumbing, h: &HClass, subset: &[usize]) -> Result<i128> {
    let lat = p.lattice();
    let zk = lat.canonical_cycle();
    let x = zk - h.rep();
    let target = lat.class_of(&x)?;
    counting_q_projected(p, &target, subset, &x, &Profile::zero(p.n()))
}

/// Projected periodic constant by the surgery formula on the
/// quasipolynomial level at `l = 0`: `sw_h^norm` minus, for each component
/// `T_i` of the graph with `I` removed, `sw^norm_{h_i}(T_i) +
/// chi_i(j*_i(r_h)) - chi_i(r_{h_i})` with `h_i = [j*_i(r_h)]`. The chi
/// terms vanish when `j*_i(r_h)` is already the reduced representative.
pub fn pc_surgery(p: &Plumbing, h: &HClass, subset: &[usize]) -> Result<i128> {
    surgery(p, h, subset, true)
}

/// The shorthand `sw_h^norm - sum_i sw^norm_{[j*_i(r_h)]}(T_i)`, which drops
/// the chi terms of [`pc_surgery`].
pub fn pc_surgery_shorthand(p: &Plumbing, h: &HClass, subset: &[usize]) -> Result<i128> {
    surgery(p, h, subset, false)
}

fn surgery(p: &Plumbing, h: &HClass, subset: &[usize], chi_terms: bool) -> Result<i128> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("projection set must be nonempty".into()));
    }
    let lat = p.lattice();
    let mut total = q_i128(sw_norm(p, h)?);
    for comp in p.graph().split_at(subset) {
        let sub = p.derived(comp.graph.clone())?;
        let slat = sub.lattice();
        let r = lat.j_dual_restrict(h.rep(), &comp, slat);
        let hi = slat.class_of(&r)?;
        total -= q_i128(sw_norm(&sub, &hi)?);
        if chi_terms {
            total -= slat.chi(&r) - slat.chi(hi.rep());
        }
        p.record_terms(sub.terms_used());
    }
    integral(total, "projected periodic constant")
}

/// Sum of `sw_0^norm` over the components of the graph with `I` removed.
pub fn sw0_complement(p: &Plumbing, subset: &[usize]) -> Result<i128> {
    let mut total = 0;
    for comp in p.graph().split_at(subset) {
        let sub = p.derived(comp.graph)?;
        total += sw_norm(&sub, &sub.lattice().zero_class())?;
    }
    Ok(total)
}

/// The class on a blown-up graph with the same E*-coordinates on the old
/// vertices and zero on the new ones.
pub fn pullback_class(p: &Plumbing, blown: &Plumbing, h: &HClass) -> Result<HClass> {
    let a = p.lattice().e_star_ints(h.rep())?;
    let mut b = vec![0i64; blown.n()];
    for (v, &x) in a.iter().enumerate() {
        let w = blown.vertex(p.graph().id(v))?;
        b[w] = x.to_i64().ok_or(Error::Overflow("E* coordinate"))?;
    }
    blown.lattice().class_of(&blown.lattice().from_e_star_ints(&b))
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
    fn a1_values() {
        let p = pl(fixtures::g1());
        for h in p.lattice().classes() {
            assert_eq!(sw_norm(&p, &h).unwrap(), 0);
            assert_eq!(sw_norm_stable(&p, &h).unwrap(), 0);
            assert_eq!(sw_norm_dual(&p, &h).unwrap(), 0);
            for k in 1..=2 {
                assert_eq!(sw_norm_coarse(&p, &h, k).unwrap(), 0);
            }
        }
        let z = p.lattice().zero_class();
        for k in 0..5 {
            assert_eq!(quasipoly_q(&p, &z, &QCycle::from_ints(&[k])).unwrap(), q(k * k));
        }
    }

    #[test]
    fn h1_virt_values() {
        let p = pl(fixtures::g2());
        let lat = p.lattice();
        let w = p.vertex("w").unwrap();
        assert_eq!(h1_virt(&p, lat.dual_base(w)).unwrap(), q(0));
        for h in lat.classes() {
            assert_eq!(h1_virt(&p, h.rep()).unwrap(), q_i128(sw_norm(&p, &h).unwrap()));
            assert_eq!(h1_virt(&p, &lat.deep_point(&h)).unwrap(), q(0));
        }
    }

    #[test]
    fn ade_vanishing() {
        for g in fixtures::ade_suite() {
            let p = pl(g);
            for e in sw_table(&p).unwrap() {
                assert_eq!(e.sw, 0, "{:?} {}", p.graph().name(), e.class);
                assert_eq!(sw_norm_dual(&p, &e.class).unwrap(), 0);
            }
        }
    }

    #[test]
    fn projected_constants() {
        let p = pl(fixtures::g2());
        let z = p.lattice().zero_class();
        let w = p.vertex("w").unwrap();
        assert_eq!(pc_dual(&p, &z, &[w]).unwrap(), 0);
        assert_eq!(pc_surgery(&p, &z, &[w]).unwrap(), 0);
        let p1 = pl(fixtures::g1());
        assert_eq!(pc_dual(&p1, &p1.lattice().zero_class(), &[0]).unwrap(), 0);
        let p5 = pl(fixtures::g5());
        let c = p5.vertex("c").unwrap();
        for h in p5.lattice().classes() {
            assert_eq!(pc_dual(&p5, &h, &[c]).unwrap(), pc_surgery(&p5, &h, &[c]).unwrap(), "{h}");
        }
    }

    #[test]
    fn surgery_needs_chi_terms_off_the_reduced_representative() {
        let vs = [("v0", -2), ("v1", -2), ("v2", -4), ("v3", -3), ("v4", -4), ("v5", -4), ("v6", -2)];
        let es = [("v0", "v1"), ("v1", "v2"), ("v0", "v3"), ("v0", "v4"), ("v0", "v5"), ("v0", "v6")];
        let p = pl(crate::graph::Graph::new(None, &vs, &es).unwrap());
        let lat = p.lattice();
        let rep = QCycle::parse_coords(
            &["3/8", "1/2", "5/8", "1/8", "3/32", "27/32", "3/16"].map(String::from),
        )
        .unwrap();
        let h = lat.class_of(&rep).unwrap();
        let v2 = p.vertex("v2").unwrap();
        assert_eq!(pc_dual(&p, &h, &[v2]).unwrap(), 1);
        assert_eq!(pc_surgery(&p, &h, &[v2]).unwrap(), 1);
        assert_eq!(pc_surgery_shorthand(&p, &h, &[v2]).unwrap(), 3);
    }

    #[test]
    fn blow_up_invariance() {
        let p = pl(fixtures::g5());
        let (g, _) = p.graph().blow_up_vertex("c").unwrap();
        let b = pl(g);
        for h in p.lattice().classes() {
            let hb = pullback_class(&p, &b, &h).unwrap();
            assert_eq!(sw_norm(&p, &h).unwrap(), sw_norm(&b, &hb).unwrap(), "{h}");
        }
    }
}
