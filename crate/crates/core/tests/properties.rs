use proptest::prelude::*;

use plumbcalc::checkers::{branch_ends, monomial_cycle_exists, monomial_full_check, MonomialSearch};
use plumbcalc::invariants::{h1_virt, sw_norm, sw_norm_dual};
use plumbcalc::random::random_negdef_tree;
use plumbcalc::rational::{floor_q, q, q_i128};
use plumbcalc::series::{
    bounded_sum, bounded_sum_enum, counting_q_projected, counting_q_projected_enum, fixed_coords_sum,
    fixed_coords_sum_enum, Profile,
};
use plumbcalc::{Plumbing, QCycle};

fn plumbing(seed: u64, n: usize) -> Plumbing {
    Plumbing::new(random_negdef_tree(seed, n)).unwrap()
}

fn subset(n: usize, mask: u32) -> Vec<usize> {
    let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    if s.is_empty() {
        vec![0]
    } else {
        s
    }
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn chi_is_quadratic(seed in any::<u64>(), n in 1usize..6, xs in prop::collection::vec(-3i64..4, 6), ys in prop::collection::vec(-3i64..4, 6)) {
        let p = plumbing(seed, n);
        let lat = p.lattice();
        let x = lat.from_e_star_ints(&xs[..n]);
        let y = QCycle::from_ints(&ys[..n]);
        let lhs = lat.chi(&(&x + &y));
        prop_assert_eq!(lhs, lat.chi(&x) + lat.chi(&y) - lat.pairing(&x, &y));
        let zk = lat.canonical_cycle();
        let t = &(&x + &x) - zk;
        prop_assert_eq!(lat.pairing(&t, &t), lat.pairing(zk, zk) - q(8) * lat.chi(&x));
    }

    #[test]
    fn dual_basis_is_positive_and_dual(seed in any::<u64>(), n in 1usize..7) {
        let p = plumbing(seed, n);
        let lat = p.lattice();
        for u in 0..n {
            for v in 0..n {
                prop_assert!(lat.pairing(lat.dual_base(u), lat.dual_base(v)) < q(0));
                prop_assert!(lat.dual_base(u).coords()[v] > q(0));
                let e = lat.pairing(lat.dual_base(u), &QCycle::e(n, v));
                prop_assert_eq!(e, if u == v { q(-1) } else { q(0) });
            }
        }
    }

    #[test]
    fn blow_up_identities(seed in any::<u64>(), n in 1usize..6, pick in any::<prop::sample::Index>()) {
        let p = plumbing(seed, n);
        let v = pick.index(n);
        let id = p.graph().id(v).to_string();
        let (g, new) = p.graph().blow_up_vertex(&id).unwrap();
        let b = Plumbing::new(g).unwrap();
        let (bv, bn) = (b.vertex(&id).unwrap(), b.vertex(&new).unwrap());
        let blat = b.lattice();
        prop_assert_eq!(&(blat.dual_base(bv) + &QCycle::e(b.n(), bn)), blat.dual_base(bn));
        prop_assert_eq!(blat.zk_square_plus_n(), p.lattice().zk_square_plus_n());
    }

    #[test]
    fn deep_points_and_fundamental_cycle(seed in any::<u64>(), n in 1usize..7) {
        let p = plumbing(seed, n);
        let lat = p.lattice();
        for h in lat.classes() {
            let x = lat.deep_point(&h);
            prop_assert_eq!(&lat.class_of(&x).unwrap(), &h);
            prop_assert!(lat.in_interior(&(&x - lat.canonical_cycle())));
            prop_assert!(h.rep().coords().iter().all(|c| *c >= q(0) && *c < q(1)));
        }
        let z = lat.artin_min_cycle();
        prop_assert!(z.is_integral());
        prop_assert!(z.coords().iter().all(|c| *c >= q(1)));
        prop_assert!(lat.in_lipman(&z));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn tree_sums_match_enumeration(
        seed in any::<u64>(),
        n in 1usize..5,
        mask in any::<u32>(),
        cls in any::<prop::sample::Index>(),
        xs in prop::collection::vec(0i64..4, 4),
        prof in prop::collection::vec(0i64..2, 4),
    ) {
        let p = plumbing(seed, n);
        let lat = p.lattice();
        let classes = lat.classes();
        let h = &classes[cls.index(classes.len())];
        let s = subset(n, mask);
        let x = &QCycle::from_ints(&xs[..n]) + h.rep();
        let profile = Profile::new(prof[..n].to_vec()).unwrap();
        prop_assert_eq!(
            counting_q_projected(&p, h, &s, &x, &profile).unwrap(),
            counting_q_projected_enum(&p, h, &s, &x, &profile).unwrap()
        );
        prop_assert_eq!(
            bounded_sum(&p, h, &s, &x, &profile).unwrap(),
            bounded_sum_enum(&p, h, &s, &x, &profile).unwrap()
        );
        let l = lat.from_e_star_ints(&xs[..n]);
        prop_assert_eq!(
            fixed_coords_sum(&p, &s, &l, &profile).unwrap(),
            fixed_coords_sum_enum(&p, &s, &l, &profile).unwrap()
        );
    }

    #[test]
    fn normalized_invariants_agree(seed in any::<u64>(), n in 1usize..6) {
        let p = plumbing(seed, n);
        for h in p.lattice().classes() {
            let sw = sw_norm(&p, &h).unwrap();
            prop_assert_eq!(sw, sw_norm_dual(&p, &h).unwrap());
            prop_assert_eq!(h1_virt(&p, h.rep()).unwrap(), q_i128(sw));
        }
    }

    #[test]
    fn monomial_search_matches_brute_force(seed in any::<u64>(), n in 4usize..8) {
        let p = plumbing(seed, n);
        let g = p.graph();
        let lat = p.lattice();
        for v in g.nodes() {
            for &u in g.neighbors(v) {
                let ends = branch_ends(&p, v, u);
                let caps: Vec<i64> = ends
                    .iter()
                    .map(|&w| {
                        let r = &lat.dual_base(v).coords()[v] / &lat.dual_base(w).coords()[v];
                        floor_q(&r).to_string().parse().unwrap()
                    })
                    .collect();
                let mut a = vec![0i64; ends.len()];
                let mut found = false;
                'outer: loop {
                    let coeffs: Vec<(usize, i64)> = ends.iter().copied().zip(a.iter().copied()).collect();
                    if monomial_full_check(&p, v, u, &coeffs) {
                        found = true;
                        break;
                    }
                    for k in 0..a.len() {
                        if a[k] < caps[k] {
                            a[k] += 1;
                            continue 'outer;
                        }
                        a[k] = 0;
                    }
                    break;
                }
                match monomial_cycle_exists(&p, v, u, None) {
                    MonomialSearch::Sat(w) => {
                        prop_assert!(found);
                        prop_assert!(monomial_full_check(&p, v, u, &w.coefficients));
                    }
                    MonomialSearch::Unsat => prop_assert!(!found),
                    MonomialSearch::UnsatWithinBound => prop_assert!(false, "no bound was given"),
                }
            }
        }
    }
}
