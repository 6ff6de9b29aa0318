//! Coefficients of `Z(t) = prod_v (1 - t^{E*_v})^{delta_v - 2}` and of the
//! relative series `R(t) = Z(t) prod_v (1 - t^{E*_v})^{a_v}`, and finite
//! sums of them.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};

use crate::enumerate::{coeff, region_sum, region_visit, Region};
use crate::error::{Error, Result};
use crate::lattice::{HClass, QCycle};
use crate::plumbing::Plumbing;
use crate::rational::{q_i128, Q};
use crate::treesum::{tree_sum, OffsetRegion};

/// Extra exponents `a_v` of the relative series, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile(Vec<i64>);

impl Profile {
    pub fn zero(n: usize) -> Profile {
        Profile(vec![0; n])
    }

    pub fn new(a: Vec<i64>) -> Result<Profile> {
        if a.iter().any(|&x| x < 0) {
            return Err(Error::InvalidArgument("profile entries must be nonnegative".into()));
        }
        Ok(Profile(a))
    }

    /// The E*-coordinates of `l`, which must be nonnegative integers.
    pub fn of_cycle(p: &Plumbing, l: &QCycle) -> Result<Profile> {
        let a = p.lattice().e_star_ints(l)?;
        let a: Vec<i64> = a.into_iter().map(|x| x as i64).collect();
        Profile::new(a).map_err(|_| {
            Error::InvalidArgument(format!("cycle {l} is not in the Lipman cone"))
        })
    }

    pub fn get(&self, v: usize) -> i64 {
        self.0[v]
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Vertices with nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// `m_v = delta_v - 2 + a_v`.
pub fn exponents(p: &Plumbing, profile: &Profile) -> Vec<i64> {
    (0..p.n())
        .map(|v| p.lattice().valency(v) - 2 + profile.get(v))
        .collect()
}

/// Coefficient of `t^l` in `R(t)` (in `Z(t)` for the zero profile).
pub fn z_coeff(p: &Plumbing, l: &QCycle, profile: &Profile) -> i128 {
    let a = p.lattice().e_star_coords(l);
    let m = exponents(p, profile);
    let mut c: i128 = 1;
    for (v, x) in a.iter().enumerate() {
        if !x.is_integer() || x.is_negative() {
            return 0;
        }
        let Some(k) = x.to_integer().to_i64() else { return 0 };
        c *= coeff(m[v], k);
        if c == 0 {
            return 0;
        }
    }
    c
}

fn key_of(p: &Plumbing, l: &QCycle) -> Result<Vec<i64>> {
    Ok(p.lattice().class_of(l)?.key().to_vec())
}

/// `Q_{[x]}(x)`: sum of coefficients over `l` in the class of `x` with
/// `l` not `>= x`.
pub fn counting_q(p: &Plumbing, x: &QCycle, profile: &Profile) -> Result<i128> {
    let all: Vec<usize> = (0..p.n()).collect();
    let h = p.lattice().class_of(x)?;
    counting_q_projected(p, &h, &all, x, profile)
}

fn nonempty(subset: &[usize], what: &str) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} must be nonempty")));
    }
    Ok(())
}

/// Sum over `[l] = h` with `l_I` not `>= x_I`.
pub fn counting_q_projected(
    p: &Plumbing,
    h: &HClass,
    subset: &[usize],
    x: &QCycle,
    profile: &Profile,
) -> Result<i128> {
    nonempty(subset, "projection set")?;
    let base = h.rep();
    let mut region = OffsetRegion::around(p, base)?;
    for &u in subset {
        region.witness(u, &base.coords()[u], &x.coords()[u])?;
    }
    tree_sum(p, &exponents(p, profile), &region)
}

/// Sum over `[l] = h` with `l_J <= y_J`.
pub fn bounded_sum(
    p: &Plumbing,
    h: &HClass,
    subset: &[usize],
    y: &QCycle,
    profile: &Profile,
) -> Result<i128> {
    nonempty(subset, "bound set")?;
    let base = h.rep();
    let mut region = OffsetRegion::around(p, base)?;
    for &u in subset {
        region.upper(u, &base.coords()[u], &y.coords()[u])?;
    }
    tree_sum(p, &exponents(p, profile), &region)
}

/// `sum_{l in L, l >= 0, l_F = 0} coeff(l' + l)`.
pub fn fixed_coords_sum(p: &Plumbing, fixed: &[usize], l: &QCycle, profile: &Profile) -> Result<i128> {
    nonempty(fixed, "fixed set")?;
    let mut region = OffsetRegion::around(p, l)?;
    for v in 0..p.n() {
        region.lo[v] = region.lo[v].max(0);
    }
    for &u in fixed {
        region.hi[u] = Some(0);
    }
    tree_sum(p, &exponents(p, profile), &region)
}

/// [`counting_q_projected`] by enumeration of E*-exponents.
pub fn counting_q_projected_enum(
    p: &Plumbing,
    h: &HClass,
    subset: &[usize],
    x: &QCycle,
    profile: &Profile,
) -> Result<i128> {
    nonempty(subset, "projection set")?;
    let xs = p.lattice().scale(x)?;
    let region = Region {
        target: h.key().to_vec(),
        witnesses: subset.iter().map(|&u| (u, xs[u])).collect(),
        ..Region::default()
    };
    region_sum(p, &exponents(p, profile), &region)
}

/// [`bounded_sum`] by enumeration of E*-exponents.
pub fn bounded_sum_enum(
    p: &Plumbing,
    h: &HClass,
    subset: &[usize],
    y: &QCycle,
    profile: &Profile,
) -> Result<i128> {
    nonempty(subset, "bound set")?;
    let ys = p.lattice().scale(y)?;
    let region = Region {
        target: h.key().to_vec(),
        upper: subset.iter().map(|&u| (u, ys[u])).collect(),
        ..Region::default()
    };
    region_sum(p, &exponents(p, profile), &region)
}

/// [`fixed_coords_sum`] by enumeration of the region `l'' >= l'`,
/// `l''_F = l'_F`, `[l''] = [l']`.
pub fn fixed_coords_sum_enum(
    p: &Plumbing,
    fixed: &[usize],
    l: &QCycle,
    profile: &Profile,
) -> Result<i128> {
    nonempty(fixed, "fixed set")?;
    let xs = p.lattice().scale(l)?;
    let region = Region {
        target: key_of(p, l)?,
        upper: fixed.iter().map(|&u| (u, xs[u])).collect(),
        lower: (0..p.n()).map(|u| (u, xs[u])).collect(),
        ..Region::default()
    };
    region_sum(p, &exponents(p, profile), &region)
}

/// Outcome of [`reduced_series_support_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    /// Largest projected total degree with a nonzero coefficient.
    pub max_nonzero_degree: Option<Q>,
    pub nonzero_terms: usize,
    /// Coefficients checked to vanish beyond that degree.
    pub vanishing_checks: usize,
    /// The probe bound on every `J`-coordinate.
    pub probe: i64,
    /// True when every nonzero exponent has all coordinates below half of
    /// the probe.
    pub finite: bool,
}

/// Coefficients of `prod_{v in J} (1 - t_J^{E*_v}) Z(t_J)` for projected
/// exponents with every `J`-coordinate at most `probe`.
pub fn reduced_series_support_bound(p: &Plumbing, subset: &[usize], probe: i64) -> Result<SupportReport> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("projection set must be nonempty".into()));
    }
    let lat = p.lattice();
    let d = lat.d();
    let dual = lat.dual_scaled();
    let bound = probe as i128 * d;
    let m = exponents(p, &Profile::zero(p.n()));
    let mut zj: BTreeMap<Vec<i128>, i128> = BTreeMap::new();
    let region = Region {
        target: vec![],
        upper: subset.iter().map(|&u| (u, bound)).collect(),
        ..Region::default()
    };
    // The class condition is not wanted here: visit all classes.
    region_visit(p, &m, &region, &mut |a, c| {
        let y: Vec<i128> = subset
            .iter()
            .map(|&u| (0..a.len()).map(|v| a[v] * dual[v][u]).sum())
            .collect();
        *zj.entry(y).or_insert(0) += c;
    })?;
    let shifts: Vec<Vec<i128>> = subset
        .iter()
        .map(|&v| subset.iter().map(|&u| dual[v][u]).collect())
        .collect();
    let mut product: BTreeMap<Vec<i128>, i128> = BTreeMap::new();
    for (y, &c) in &zj {
        for mask in 0u32..(1 << subset.len()) {
            let mut z = y.clone();
            let mut sign = 1;
            for (k, s) in shifts.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    sign = -sign;
                    for (zi, si) in z.iter_mut().zip(s) {
                        *zi += si;
                    }
                }
            }
            if z.iter().all(|&x| x <= bound) {
                *product.entry(z).or_insert(0) += sign * c;
            }
        }
    }
    let degree = |y: &Vec<i128>| -> i128 { y.iter().sum() };
    let nonzero: Vec<&Vec<i128>> = product.iter().filter(|(_, &c)| c != 0).map(|(y, _)| y).collect();
    let max_deg = nonzero.iter().map(|y| degree(y)).max();
    let vanishing_checks = product
        .iter()
        .filter(|(y, &c)| c == 0 && max_deg.map_or(true, |m| degree(y) > m))
        .count();
    let max_coord = nonzero.iter().flat_map(|y| y.iter().copied()).max();
    let finite = max_coord.map_or(true, |m| 2 * m < bound);
    Ok(SupportReport {
        max_nonzero_degree: max_deg.map(|m| q_i128(m) / q_i128(d)),
        nonzero_terms: nonzero.len(),
        vanishing_checks,
        probe,
        finite,
    })
}
