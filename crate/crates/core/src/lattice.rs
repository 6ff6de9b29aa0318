//! The lattice `L` spanned by the vertices, its dual `L'`, the
//! discriminant group `H = L'/L`, and the cycles attached to them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Component, Graph};
use crate::linalg;
use crate::rational::{ceil_q, floor_q, fmt_q, frac_q, parse_q, q, q_i128, Q};

/// A rational cycle in the `E`-basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QCycle(Vec<Q>);

impl QCycle {
    pub fn new(coords: Vec<Q>) -> QCycle {
        QCycle(coords)
    }

    pub fn zero(n: usize) -> QCycle {
        QCycle(vec![Q::zero(); n])
    }

    /// The vertex cycle `E_v`.
    pub fn e(n: usize, v: usize) -> QCycle {
        let mut c = QCycle::zero(n);
        c.0[v] = Q::one();
        c
    }

    /// The reduced cycle `E = sum_v E_v`.
    pub fn ones(n: usize) -> QCycle {
        QCycle(vec![Q::one(); n])
    }

    pub fn from_ints(xs: &[i64]) -> QCycle {
        QCycle(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Componentwise `>=`.
    pub fn geq(&self, other: &QCycle) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scaled(&self, k: &Q) -> QCycle {
        QCycle(self.0.iter().map(|x| x * k).collect())
    }

    pub fn floor(&self) -> QCycle {
        QCycle(self.0.iter().map(|x| Q::from_integer(floor_q(x))).collect())
    }

    pub fn ceil(&self) -> QCycle {
        QCycle(self.0.iter().map(|x| Q::from_integer(ceil_q(x))).collect())
    }

    pub fn frac(&self) -> QCycle {
        QCycle(self.0.iter().map(frac_q).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_q).collect()
    }

    pub fn parse_coords(parts: &[String]) -> Result<QCycle> {
        Ok(QCycle(parts.iter().map(|s| parse_q(s)).collect::<Result<_>>()?))
    }
}

impl fmt::Display for QCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl Add<&QCycle> for &QCycle {
    type Output = QCycle;
    fn add(self, o: &QCycle) -> QCycle {
        QCycle(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&QCycle> for &QCycle {
    type Output = QCycle;
    fn sub(self, o: &QCycle) -> QCycle {
        QCycle(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QCycle {
    type Output = QCycle;
    fn neg(self) -> QCycle {
        QCycle(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<i64> for &QCycle {
    type Output = QCycle;
    fn mul(self, k: i64) -> QCycle {
        self.scaled(&q(k))
    }
}

/// An element of `H = L'/L`, identified by its residues in the Smith
/// decomposition and carrying its representative `r_h` in `[0,1)^V`.
#[derive(Debug, Clone)]
pub struct HClass {
    key: Vec<i64>,
    rep: QCycle,
}

impl HClass {
    pub fn key(&self) -> &[i64] {
        &self.key
    }

    /// `r_h`.
    pub fn rep(&self) -> &QCycle {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.key.iter().all(|&x| x == 0)
    }

    /// Stable textual label: the coordinates of `r_h`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            "0".to_string()
        } else {
            self.rep.to_string()
        }
    }
}

impl PartialEq for HClass {
    fn eq(&self, o: &HClass) -> bool {
        self.key == o.key
    }
}

impl Eq for HClass {}

impl Hash for HClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl PartialOrd for HClass {
    fn partial_cmp(&self, o: &HClass) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for HClass {
    fn cmp(&self, o: &HClass) -> Ordering {
        self.key.cmp(&o.key)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Exact lattice data of a negative definite plumbing graph.
#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    matrix: Vec<Vec<i64>>,
    valency: Vec<i64>,
    d: i128,
    dual: Vec<QCycle>,
    /// `dual_scaled[v][u] = d * (E*_v)_u`, strictly positive integers.
    dual_scaled: Vec<Vec<i128>>,
    zk: QCycle,
    factors: Vec<i64>,
    /// Rows of the Smith transform for the nontrivial factors, reduced.
    class_rows: Vec<Vec<i64>>,
    /// Class residues of each `E*_v`.
    dual_keys: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(g: &Graph) -> Result<Lattice> {
        let diag = g.validate();
        if !diag.negative_definite {
            return Err(Error::NotNegDefinite);
        }
        let n = g.len();
        let matrix = g.intersection_matrix();
        let d_big = diag.det_abs;
        let d = d_big.to_i128().ok_or(Error::Overflow("determinant"))?;
        let inv = linalg::inverse(&matrix).ok_or(Error::NotNegDefinite)?;
        let dual: Vec<QCycle> = (0..n)
            .map(|v| QCycle((0..n).map(|u| -&inv[u][v]).collect()))
            .collect();
        let dq = q_i128(d);
        let mut dual_scaled = vec![vec![0i128; n]; n];
        for v in 0..n {
            for u in 0..n {
                let x = &dual[v].0[u] * &dq;
                dual_scaled[v][u] = x
                    .to_integer()
                    .to_i128()
                    .ok_or(Error::Overflow("dual basis"))?;
            }
        }
        let valency: Vec<i64> = (0..n).map(|v| g.valency(v) as i64).collect();
        let mut zk = QCycle::zero(n);
        for v in 0..n {
            let c = q(-g.euler(v) - 2);
            zk = &zk + &dual[v].scaled(&c);
        }
        let smith = linalg::smith_rows(&matrix);
        let mut factors = Vec::new();
        let mut class_rows = Vec::new();
        for (t, f) in smith.factors.iter().enumerate() {
            if f > &BigInt::one() {
                let fi = f.to_i64().ok_or(Error::Overflow("invariant factor"))?;
                factors.push(fi);
                class_rows.push(
                    smith.u[t]
                        .iter()
                        .map(|x| x.mod_floor(f).to_i64().unwrap())
                        .collect(),
                );
            }
        }
        let mut lat = Lattice {
            n,
            matrix,
            valency,
            d,
            dual,
            dual_scaled,
            zk,
            factors,
            class_rows,
            dual_keys: vec![],
        };
        lat.dual_keys = (0..n)
            .map(|v| {
                let mut a = vec![0i128; n];
                a[v] = 1;
                lat.key_of_estar(&a)
            })
            .collect();
        Ok(lat)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d = |det I| = |H|`.
    pub fn d(&self) -> i128 {
        self.d
    }

    pub fn group_order(&self) -> BigInt {
        BigInt::from(self.d)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn valency(&self, v: usize) -> i64 {
        self.valency[v]
    }

    /// Nontrivial invariant factors of `H`.
    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub(crate) fn dual_scaled(&self) -> &[Vec<i128>] {
        &self.dual_scaled
    }

    pub(crate) fn dual_keys(&self) -> &[Vec<i64>] {
        &self.dual_keys
    }

    pub fn pairing(&self, a: &QCycle, b: &QCycle) -> Q {
        let ib = self.apply(b);
        a.0.iter().zip(&ib).map(|(x, y)| x * y).sum()
    }

    /// `I * l`, i.e. the vector of `(l, E_v)`.
    pub fn apply(&self, l: &QCycle) -> Vec<Q> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(&l.0).map(|(&m, x)| x * q(m)).sum())
            .collect()
    }

    pub fn dual_base(&self, v: usize) -> &QCycle {
        &self.dual[v]
    }

    /// `a_v = -(l, E_v)`, so that `l = sum a_v E*_v`.
    pub fn e_star_coords(&self, l: &QCycle) -> Vec<Q> {
        self.apply(l).into_iter().map(|x| -x).collect()
    }

    pub fn from_e_star(&self, a: &[Q]) -> QCycle {
        let mut out = QCycle::zero(self.n);
        for (v, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.dual[v].scaled(c);
            }
        }
        out
    }

    pub fn from_e_star_ints(&self, a: &[i64]) -> QCycle {
        self.from_e_star(&a.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    /// Integral E*-coordinates, or `NonIntegral` if `l` is not in `L'`.
    pub fn e_star_ints(&self, l: &QCycle) -> Result<Vec<i128>> {
        self.e_star_coords(l)
            .iter()
            .map(|x| {
                if x.is_integer() {
                    x.to_integer().to_i128().ok_or(Error::Overflow("E* coordinate"))
                } else {
                    Err(Error::NonIntegral(format!("cycle {l} is not in the dual lattice")))
                }
            })
            .collect()
    }

    /// `Z_K`, determined by `(Z_K, E_v) = e_v + 2`.
    pub fn canonical_cycle(&self) -> &QCycle {
        &self.zk
    }

    /// `chi(l) = -(l, l - Z_K)/2`.
    pub fn chi(&self, l: &QCycle) -> Q {
        -self.pairing(l, &(l - &self.zk)) / q(2)
    }

    pub fn in_lipman(&self, l: &QCycle) -> bool {
        self.apply(l).iter().all(|x| !x.is_positive())
    }

    pub fn in_interior(&self, l: &QCycle) -> bool {
        self.apply(l).iter().all(|x| x.is_negative())
    }

    pub(crate) fn key_of_estar(&self, a: &[i128]) -> Vec<i64> {
        self.class_rows
            .iter()
            .zip(&self.factors)
            .map(|(row, &f)| {
                let mut s: i128 = 0;
                for (r, x) in row.iter().zip(a) {
                    s = (s + (*r as i128) * x.rem_euclid(f as i128)).rem_euclid(f as i128);
                }
                s as i64
            })
            .collect()
    }

    pub fn class_of(&self, l: &QCycle) -> Result<HClass> {
        let a = self.e_star_ints(l)?;
        Ok(HClass { key: self.key_of_estar(&a), rep: l.frac() })
    }

    pub fn class_rep<'a>(&self, h: &'a HClass) -> &'a QCycle {
        &h.rep
    }

    pub fn zero_class(&self) -> HClass {
        HClass { key: vec![0; self.factors.len()], rep: QCycle::zero(self.n) }
    }

    pub fn class_of_dual(&self, v: usize) -> HClass {
        self.class_of(&self.dual[v]).expect("dual basis lies in L'")
    }

    pub fn class_add(&self, a: &HClass, b: &HClass) -> HClass {
        self.class_of(&(&a.rep + &b.rep)).expect("sum of dual cycles")
    }

    pub fn class_neg(&self, a: &HClass) -> HClass {
        self.class_of(&-&a.rep).expect("negated dual cycle")
    }

    pub fn class_sub(&self, a: &HClass, b: &HClass) -> HClass {
        self.class_of(&(&a.rep - &b.rep)).expect("difference of dual cycles")
    }

    /// All classes, sorted by key.
    pub fn classes(&self) -> Vec<HClass> {
        let mut seen: BTreeSet<HClass> = BTreeSet::new();
        let zero = self.zero_class();
        seen.insert(zero.clone());
        let mut queue = VecDeque::from([zero]);
        while let Some(h) = queue.pop_front() {
            for v in 0..self.n {
                let next = self.class_of(&(&h.rep + &self.dual[v])).expect("dual sum");
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Smallest `l'` in class `h` with `l' - Z_K` in the interior of the
    /// Lipman cone: starting at `r_h + ceil(Z_K - r_h)`, add `E_u` while
    /// some `(l' - Z_K, E_u) > -1`, always at the lowest such `u`.
    pub fn deep_point(&self, h: &HClass) -> QCycle {
        let mut x = &h.rep + &(&self.zk - &h.rep).ceil();
        loop {
            let pair = self.apply(&(&x - &self.zk));
            match pair.iter().position(|p| p > &q(-1)) {
                Some(u) => x.0[u] += Q::one(),
                None => return x,
            }
        }
    }

    /// `r_h + ceil(Z_K - r_h) + k * d * sum_v E*_v`.
    pub fn coarse_deep_point(&self, h: &HClass, k: u32) -> QCycle {
        let base = &h.rep + &(&self.zk - &h.rep).ceil();
        let mut step = QCycle::zero(self.n);
        for v in 0..self.n {
            step = &step + &self.dual[v];
        }
        &base + &step.scaled(&(q_i128(self.d) * q(k as i64)))
    }

    /// Artin's fundamental cycle by Laufer's algorithm.
    pub fn artin_min_cycle(&self) -> QCycle {
        let mut x = QCycle::e(self.n, 0);
        loop {
            let pair = self.apply(&x);
            match pair.iter().position(|p| p.is_positive()) {
                Some(u) => x.0[u] += Q::one(),
                None => return x,
            }
        }
    }

    /// The restriction `j*` to a component: keep the E*-coordinates of the
    /// component's vertices and rebuild in the component's dual basis.
    pub fn j_dual_restrict(&self, l: &QCycle, comp: &Component, sub: &Lattice) -> QCycle {
        let a = self.e_star_coords(l);
        let local: Vec<Q> = comp.map.iter().map(|&v| a[v].clone()).collect();
        sub.from_e_star(&local)
    }

    /// `d * l` as integers; fails if `l` is not in `L'`.
    pub fn scale(&self, l: &QCycle) -> Result<Vec<i128>> {
        let dq = q_i128(self.d);
        l.0.iter()
            .map(|x| {
                let y = x * &dq;
                if y.is_integer() {
                    y.to_integer().to_i128().ok_or(Error::Overflow("scaled cycle"))
                } else {
                    Err(Error::NonIntegral(format!("{} times {} is not integral", fmt_q(x), self.d)))
                }
            })
            .collect()
    }

    pub fn unscale(&self, xs: &[i128]) -> QCycle {
        let dq = q_i128(self.d);
        QCycle(xs.iter().map(|&x| q_i128(x) / &dq).collect())
    }

    /// `Z_K^2 + |V|`, invariant under blow-up.
    pub fn zk_square_plus_n(&self) -> Q {
        self.pairing(&self.zk, &self.zk) + q(self.n as i64)
    }

    /// Parses a cycle given as `E:(...)`, `Estar:(...)` or as a cycle JSON
    /// document.
    pub fn parse_cycle(&self, text: &str) -> Result<QCycle> {
        let text = text.trim();
        let (basis, coords): (String, Vec<String>) = if text.starts_with('{') {
            #[derive(serde::Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Doc {
                basis: String,
                coords: Vec<String>,
            }
            let doc: Doc =
                serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
            (doc.basis, doc.coords)
        } else {
            let (b, rest) = text
                .split_once(':')
                .ok_or_else(|| Error::Malformed(format!("bad cycle `{text}`")))?;
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Malformed(format!("bad cycle `{text}`")))?;
            let parts = inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            (b.trim().to_string(), parts)
        };
        if coords.len() != self.n {
            return Err(Error::Malformed(format!(
                "cycle has {} coordinates, graph has {} vertices",
                coords.len(),
                self.n
            )));
        }
        let c = QCycle::parse_coords(&coords)?;
        match basis.as_str() {
            "E" => Ok(c),
            "Estar" => Ok(self.from_e_star(c.coords())),
            other => Err(Error::Malformed(format!("unknown basis `{other}`"))),
        }
    }

    /// Cycle JSON document in the E-basis.
    pub fn cycle_json(&self, l: &QCycle) -> serde_json::Value {
        serde_json::json!({"basis": "E", "coords": l.to_strings()})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q_frac;

    fn g2() -> Lattice {
        Lattice::new(&fixtures::g2()).unwrap()
    }

    #[test]
    fn pairings_and_duals() {
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        assert_eq!(l1.pairing(&QCycle::e(1, 0), &QCycle::e(1, 0)), q(-2));
        assert_eq!(l1.dual_base(0).coords(), &[q_frac(1, 2)]);
        let l = g2();
        let (ev, ew) = (QCycle::e(2, 0), QCycle::e(2, 1));
        assert_eq!(l.pairing(l.dual_base(1), &ew), q(-1));
        assert_eq!(l.pairing(l.dual_base(1), &ev), q(0));
        assert_eq!(l.pairing(l.dual_base(1), l.dual_base(1)), q_frac(-3, 2));
        assert_eq!(l.dual_base(0).coords(), &[q_frac(1, 2), q_frac(1, 2)]);
        assert_eq!(l.dual_base(1).coords(), &[q_frac(1, 2), q_frac(3, 2)]);
    }

    #[test]
    fn e_star_coordinates() {
        let l = g2();
        assert_eq!(l.e_star_coords(l.dual_base(1)), vec![q(0), q(1)]);
        assert_eq!(l.e_star_coords(l.canonical_cycle()), vec![q(1), q(-1)]);
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        assert_eq!(l1.e_star_coords(&QCycle::e(1, 0)), vec![q(2)]);
    }

    #[test]
    fn canonical_cycles() {
        assert!(Lattice::new(&fixtures::g1()).unwrap().canonical_cycle().is_zero());
        assert_eq!(g2().canonical_cycle(), &QCycle::from_ints(&[0, -1]));
        assert!(Lattice::new(&fixtures::e8()).unwrap().canonical_cycle().is_zero());
    }

    #[test]
    fn chi_values() {
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        assert_eq!(l1.chi(&QCycle::e(1, 0)), q(1));
        let l = g2();
        assert_eq!(l.chi(l.dual_base(1)), q_frac(5, 4));
        assert_eq!(l.chi(l.dual_base(0)), q_frac(1, 4));
        assert_eq!(l.chi(&QCycle::zero(2)), q(0));
        assert_eq!(l.chi(l.canonical_cycle()), q(0));
    }

    #[test]
    fn classes_and_reps() {
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        let h = l1.class_of(l1.dual_base(0)).unwrap();
        assert_eq!(h.rep().coords(), &[q_frac(1, 2)]);
        assert_eq!(l1.d(), 2);
        assert_eq!(l1.classes().len(), 2);
        let l = g2();
        assert!(l.class_of(l.canonical_cycle()).unwrap().is_zero());
        assert!(l.class_of(&QCycle::from_ints(&[3, -2])).unwrap().rep().is_zero());
        let h = l.class_of(l.dual_base(1)).unwrap();
        assert_eq!(l.class_of(h.rep()).unwrap(), h);
    }

    #[test]
    fn lipman_membership() {
        let l = g2();
        assert!(l.in_lipman(l.dual_base(0)) && l.in_lipman(l.dual_base(1)));
        let s = l.dual_base(0) + l.dual_base(1);
        assert!(l.in_interior(&s));
        assert!(!l.in_lipman(&QCycle::e(2, 1)));
    }

    #[test]
    fn deep_points() {
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        let z = l1.zero_class();
        assert_eq!(l1.deep_point(&z), QCycle::e(1, 0));
        assert_eq!(l1.coarse_deep_point(&z, 1), QCycle::e(1, 0));
        let l = Lattice::new(&fixtures::g4()).unwrap();
        for h in l.classes() {
            let p = l.deep_point(&h);
            assert_eq!(l.class_of(&p).unwrap(), h);
            assert!(l.in_interior(&(&p - l.canonical_cycle())));
        }
    }

    #[test]
    fn artin_cycles() {
        let l1 = Lattice::new(&fixtures::g1()).unwrap();
        assert_eq!(l1.artin_min_cycle(), QCycle::e(1, 0));
        assert_eq!(g2().artin_min_cycle(), QCycle::from_ints(&[1, 1]));
        let e8 = Lattice::new(&fixtures::e8()).unwrap();
        // Dynkin order: long arm end ... node ... short arms.
        let z = e8.artin_min_cycle();
        let mut coeffs: Vec<i64> = z.coords().iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        coeffs.sort_unstable();
        assert_eq!(coeffs, vec![2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn dual_restriction() {
        let g = fixtures::g2();
        let l = g2();
        let comps = g.split_at(&[0]);
        let sub = Lattice::new(&comps[0].graph).unwrap();
        assert_eq!(l.j_dual_restrict(l.dual_base(1), &comps[0], &sub), QCycle::from_ints(&[1]));
        assert!(l.j_dual_restrict(l.dual_base(0), &comps[0], &sub).is_zero());
        assert_eq!(
            &l.j_dual_restrict(l.canonical_cycle(), &comps[0], &sub),
            sub.canonical_cycle()
        );
    }

    #[test]
    fn parse_cycles() {
        let l = g2();
        assert_eq!(l.parse_cycle("Estar:(0,1)").unwrap(), *l.dual_base(1));
        assert_eq!(l.parse_cycle("E:(1/2, 3/2)").unwrap(), *l.dual_base(1));
        let doc = r#"{"basis":"Estar","coords":["1","0"]}"#;
        assert_eq!(l.parse_cycle(doc).unwrap(), *l.dual_base(0));
        assert!(l.parse_cycle("E:(1)").is_err());
        assert!(l.parse_cycle("F:(1,1)").is_err());
    }
}
