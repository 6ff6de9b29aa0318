//! Sums of series coefficients over lattice regions.
//!
//! Exponents are `l = sum_v a_v E*_v` with `a >= 0`. Coordinates are kept
//! scaled by `d`, so `(d * l)_u = sum_v a_v * D[v][u]` with `D` positive.
//! A region is a conjunction of coordinate bounds, a class condition and
//! optionally a disjunction "some witness coordinate lies below its bound".
//! The disjunction is split by the lowest failing witness, which makes the
//! pieces disjoint. The innermost variable is summed in closed form.

use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plumbing::Plumbing;
use crate::rational::{div_ceil, div_floor};

/// Coefficient of `x^a` in `(1 - x)^m`.
pub fn coeff(m: i64, a: i64) -> i128 {
    if a < 0 {
        return 0;
    }
    if m >= 0 {
        if a > m {
            return 0;
        }
        let c = binom(m as i128, a as i128);
        if a % 2 == 0 {
            c
        } else {
            -c
        }
    } else {
        // binom(a - m - 1, a) = binom(a + k - 1, k - 1) with k = -m.
        let k = (-m) as i128;
        binom(a as i128 + k - 1, k - 1)
    }
}

fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i).expect("binomial overflow") / (i + 1);
    }
    r
}

/// A region of exponent vectors, in scaled coordinates.
#[derive(Debug, Clone, Default)]
pub(crate) struct Region {
    /// Target class key.
    pub target: Vec<i64>,
    /// `(d l)_u <= bound`.
    pub upper: Vec<(usize, i128)>,
    /// `(d l)_u >= bound`.
    pub lower: Vec<(usize, i128)>,
    /// At least one `(d l)_u < bound`.
    pub witnesses: Vec<(usize, i128)>,
}

#[derive(Debug, Clone)]
struct Slot {
    coord: usize,
    ub: Option<i128>,
    lb: Option<i128>,
}

struct Plan<'a> {
    /// Variables in enumeration order.
    order: Vec<usize>,
    /// `cols[depth][slot]`: contribution of one unit of `order[depth]`.
    cols: Vec<Vec<i128>>,
    slots: Vec<Slot>,
    m: &'a [i64],
    keys: Vec<Vec<i64>>,
    factors: &'a [i64],
    target: &'a [i64],
}

struct Guard<'a> {
    used: &'a AtomicU64,
    limit: u64,
}

impl Guard<'_> {
    fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before + n > self.limit {
            Err(Error::ResourceLimit { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

const BATCH: u64 = 4096;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Solutions `a` of `a * c = delta (mod f)` as `(t, modulus)`.
fn solve_linear(c: i128, delta: i128, f: i128) -> Option<(i128, i128)> {
    let c = c.rem_euclid(f);
    let delta = delta.rem_euclid(f);
    let g = c.gcd(&f);
    if delta % g != 0 {
        return None;
    }
    let m = f / g;
    if m == 1 {
        return Some((0, 1));
    }
    let (_, inv, _) = ext_gcd(c / g, m);
    Some(((delta / g * inv.rem_euclid(m)).rem_euclid(m), m))
}

fn crt(a: (i128, i128), b: (i128, i128)) -> Option<(i128, i128)> {
    let (r1, m1) = a;
    let (r2, m2) = b;
    let g = m1.gcd(&m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let (_, inv, _) = ext_gcd(m1 / g, m2 / g);
    let k = ((r2 - r1) / g).rem_euclid(m2 / g) * inv.rem_euclid(m2 / g) % (m2 / g).max(1);
    Some(((r1 + m1 * k).rem_euclid(l), l))
}

impl Plan<'_> {
    fn max_units(&self, depth: usize, sums: &[i128]) -> i128 {
        let v = self.order[depth];
        let mut hi = if self.m[v] >= 0 { self.m[v] as i128 } else { i128::MAX };
        for (s, slot) in self.slots.iter().enumerate() {
            if let Some(ub) = slot.ub {
                hi = hi.min(div_floor(ub - sums[s], self.cols[depth][s]));
            }
        }
        hi
    }

    /// Residue progression of the last variable completing the class.
    fn last_progression(&self, cls: &[i64]) -> Option<(i128, i128)> {
        let depth = self.order.len() - 1;
        let mut acc = (0i128, 1i128);
        for (i, &f) in self.factors.iter().enumerate() {
            let need = (self.target[i] - cls[i]) as i128;
            let sol = solve_linear(self.keys[depth][i] as i128, need, f as i128)?;
            acc = crt(acc, sol)?;
        }
        Some(acc)
    }

    fn leaf(&self, sums: &[i128], cls: &[i64], pref: i128) -> Result<i128> {
        let depth = self.order.len() - 1;
        let v = self.order[depth];
        let mut lo: i128 = 0;
        let mut hi = if self.m[v] >= 0 { self.m[v] as i128 } else { i128::MAX };
        for (s, slot) in self.slots.iter().enumerate() {
            let c = self.cols[depth][s];
            if let Some(ub) = slot.ub {
                hi = hi.min(div_floor(ub - sums[s], c));
            }
            if let Some(lb) = slot.lb {
                lo = lo.max(div_ceil(lb - sums[s], c));
            }
        }
        if hi < lo {
            return Ok(0);
        }
        let Some((t, md)) = self.last_progression(cls) else {
            return Ok(0);
        };
        let a0 = lo + (t - lo).rem_euclid(md);
        if a0 > hi {
            return Ok(0);
        }
        let count = (hi - a0) / md + 1;
        let m = self.m[v];
        let total = match m {
            -1 => count,
            -2 => count
                .checked_mul(a0 + 1)
                .and_then(|x| x.checked_add(md * (count * (count - 1) / 2)))
                .ok_or(Error::Overflow("closed-form sum"))?,
            _ => {
                let mut s: i128 = 0;
                let mut a = a0;
                while a <= hi {
                    s += coeff(m, a as i64);
                    a += md;
                }
                s
            }
        };
        total.checked_mul(pref).ok_or(Error::Overflow("coefficient sum"))
    }

    fn dfs(
        &self,
        depth: usize,
        sums: &mut [i128],
        cls: &mut [i64],
        pref: i128,
        guard: &Guard,
        pending: &mut u64,
    ) -> Result<i128> {
        *pending += 1;
        if *pending >= BATCH {
            guard.charge(*pending)?;
            *pending = 0;
        }
        if depth + 1 == self.order.len() {
            return self.leaf(sums, cls, pref);
        }
        let v = self.order[depth];
        let hi = self.max_units(depth, sums);
        let mut total: i128 = 0;
        let mut a: i128 = 0;
        while a <= hi {
            let c = coeff(self.m[v], a as i64);
            if c != 0 {
                let p = pref.checked_mul(c).ok_or(Error::Overflow("coefficient product"))?;
                let r = self.dfs(depth + 1, sums, cls, p, guard, pending)?;
                total = total.checked_add(r).ok_or(Error::Overflow("region sum"))?;
            }
            for (s, x) in sums.iter_mut().enumerate() {
                *x += self.cols[depth][s];
            }
            for (i, x) in cls.iter_mut().enumerate() {
                *x = (*x + self.keys[depth][i]) % self.factors[i];
            }
            a += 1;
        }
        // Undo the a+1 increments applied above.
        for (s, x) in sums.iter_mut().enumerate() {
            *x -= self.cols[depth][s] * a;
        }
        for (i, x) in cls.iter_mut().enumerate() {
            let f = self.factors[i] as i128;
            *x = ((*x as i128 - (self.keys[depth][i] as i128 * a) % f).rem_euclid(f)) as i64;
        }
        Ok(total)
    }

    /// Splits the top level across threads.
    fn run(&self, guard: &Guard) -> Result<i128> {
        let k = self.factors.len();
        if self.order.len() == 1 {
            guard.charge(1)?;
            return self.leaf(&vec![0; self.slots.len()], &vec![0; k], 1);
        }
        let hi = self.max_units(0, &vec![0; self.slots.len()]);
        if hi < 0 {
            return Ok(0);
        }
        let v = self.order[0];
        let parts: Vec<Result<i128>> = (0..=hi)
            .into_par_iter()
            .map(|a| {
                let c = coeff(self.m[v], a as i64);
                if c == 0 {
                    return Ok(0);
                }
                let mut sums: Vec<i128> = self.cols[0].iter().map(|x| x * a).collect();
                let mut cls: Vec<i64> = self.keys[0]
                    .iter()
                    .zip(self.factors)
                    .map(|(&key, &f)| ((key as i128 * a).rem_euclid(f as i128)) as i64)
                    .collect();
                let mut pending = 0;
                let r = self.dfs(1, &mut sums, &mut cls, c, guard, &mut pending);
                guard.charge(pending)?;
                r
            })
            .collect();
        let mut total: i128 = 0;
        for p in parts {
            total = total.checked_add(p?).ok_or(Error::Overflow("region sum"))?;
        }
        Ok(total)
    }
}

fn slots_for(upper: &[(usize, i128)], lower: &[(usize, i128)]) -> Vec<Slot> {
    let mut slots: Vec<Slot> = Vec::new();
    let get = |u: usize, slots: &mut Vec<Slot>| -> usize {
        match slots.iter().position(|s| s.coord == u) {
            Some(i) => i,
            None => {
                slots.push(Slot { coord: u, ub: None, lb: None });
                slots.len() - 1
            }
        }
    };
    for &(u, b) in upper {
        let i = get(u, &mut slots);
        slots[i].ub = Some(slots[i].ub.map_or(b, |x: i128| x.min(b)));
    }
    for &(u, b) in lower {
        let i = get(u, &mut slots);
        slots[i].lb = Some(slots[i].lb.map_or(b, |x: i128| x.max(b)));
    }
    slots
}

/// Sum of `prod_v c_{m_v}(a_v)` over the region. Counts every visited node
/// against the plumbing's term guard.
pub(crate) fn region_sum(p: &Plumbing, m: &[i64], region: &Region) -> Result<i128> {
    let lat = p.lattice();
    let n = lat.n();
    let dual = lat.dual_scaled();
    let mut pieces: Vec<(Vec<(usize, i128)>, Vec<(usize, i128)>)> = Vec::new();
    if region.witnesses.is_empty() {
        pieces.push((region.upper.clone(), region.lower.clone()));
    } else {
        for (i, &(w, x)) in region.witnesses.iter().enumerate() {
            let mut up = region.upper.clone();
            up.push((w, x - 1));
            let mut lo = region.lower.clone();
            lo.extend(region.witnesses[..i].iter().copied());
            pieces.push((up, lo));
        }
    }
    let used = AtomicU64::new(0);
    let guard = Guard { used: &used, limit: p.max_terms() };
    let mut total: i128 = 0;
    let mut result = Ok(());
    for (up, lo) in pieces {
        if up.is_empty() {
            return Err(Error::InvalidArgument("unbounded coefficient region".into()));
        }
        let slots = slots_for(&up, &lo);
        if slots.iter().any(|s| matches!((s.ub, s.lb), (Some(u), _) if u < 0))
            || slots.iter().any(|s| matches!((s.ub, s.lb), (Some(u), Some(l)) if u < l))
        {
            continue;
        }
        // Range of each variable at the origin.
        let range = |v: usize| -> i128 {
            let mut hi = if m[v] >= 0 { m[v] as i128 } else { i128::MAX };
            for s in &slots {
                if let Some(ub) = s.ub {
                    hi = hi.min(ub / dual[v][s.coord]);
                }
            }
            hi
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (m[v] < 0, range(v), v));
        let plan = Plan {
            cols: order
                .iter()
                .map(|&v| slots.iter().map(|s| dual[v][s.coord]).collect())
                .collect(),
            keys: order.iter().map(|&v| lat.dual_keys()[v].clone()).collect(),
            order,
            slots,
            m,
            factors: lat.factors(),
            target: &region.target,
        };
        match plan.run(&guard) {
            Ok(x) => total = total.checked_add(x).ok_or(Error::Overflow("region sum"))?,
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    p.record_terms(used.load(Ordering::Relaxed));
    result.map(|_| total)
}

/// Visits every exponent vector of a region without a disjunction, passing
/// `(a, coefficient)`. Ignores the class target. Sequential; intended for
/// small regions.
pub(crate) fn region_visit(
    p: &Plumbing,
    m: &[i64],
    region: &Region,
    f: &mut dyn FnMut(&[i128], i128),
) -> Result<()> {
    assert!(region.witnesses.is_empty(), "visit needs a conjunctive region");
    let lat = p.lattice();
    let n = lat.n();
    let dual = lat.dual_scaled();
    if region.upper.is_empty() {
        return Err(Error::InvalidArgument("unbounded coefficient region".into()));
    }
    let slots = slots_for(&region.upper, &region.lower);
    let used = AtomicU64::new(0);
    let guard = Guard { used: &used, limit: p.max_terms() };
    let mut a = vec![0i128; n];
    let mut sums = vec![0i128; slots.len()];
    let mut pending = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        n: usize,
        m: &[i64],
        slots: &[Slot],
        dual: &[Vec<i128>],
        a: &mut Vec<i128>,
        sums: &mut Vec<i128>,
        coef: i128,
        guard: &Guard,
        pending: &mut u64,
        f: &mut dyn FnMut(&[i128], i128),
    ) -> Result<()> {
        *pending += 1;
        if *pending >= BATCH {
            guard.charge(*pending)?;
            *pending = 0;
        }
        if v == n {
            let ok = slots.iter().enumerate().all(|(s, sl)| sl.lb.map_or(true, |lb| sums[s] >= lb));
            if ok {
                f(a, coef);
            }
            return Ok(());
        }
        let mut hi = if m[v] >= 0 { m[v] as i128 } else { i128::MAX };
        for (s, sl) in slots.iter().enumerate() {
            if let Some(ub) = sl.ub {
                hi = hi.min(div_floor(ub - sums[s], dual[v][sl.coord]));
            }
        }
        let mut k = 0;
        while k <= hi {
            let c = coeff(m[v], k as i64);
            if c != 0 {
                a[v] = k;
                go(v + 1, n, m, slots, dual, a, sums, coef * c, guard, pending, f)?;
            }
            for (s, sl) in slots.iter().enumerate() {
                sums[s] += dual[v][sl.coord];
            }
            k += 1;
        }
        for (s, sl) in slots.iter().enumerate() {
            sums[s] -= dual[v][sl.coord] * k;
        }
        a[v] = 0;
        Ok(())
    }
    let r = go(0, n, m, &slots, dual, &mut a, &mut sums, 1, &guard, &mut pending, f);
    let _ = guard.charge(pending);
    p.record_terms(used.load(Ordering::Relaxed));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        assert_eq!(coeff(-2, 3), 4);
        assert_eq!(coeff(-1, 9), 1);
        assert_eq!(coeff(1, 1), -1);
        assert_eq!(coeff(1, 2), 0);
        assert_eq!(coeff(3, 2), 3);
        assert_eq!(coeff(-3, 2), 6);
        assert_eq!(coeff(0, 0), 1);
        assert_eq!(coeff(0, 1), 0);
    }

    #[test]
    fn congruences() {
        assert_eq!(solve_linear(3, 1, 5), Some((2, 5)));
        assert_eq!(solve_linear(2, 1, 4), None);
        assert_eq!(solve_linear(2, 2, 4), Some((1, 2)));
        assert_eq!(solve_linear(0, 0, 4), Some((0, 1)));
        assert_eq!(crt((1, 2), (2, 3)), Some((5, 6)));
        assert_eq!(crt((1, 2), (0, 4)), None);
        assert_eq!(crt((0, 1), (3, 7)), Some((3, 7)));
    }
}
