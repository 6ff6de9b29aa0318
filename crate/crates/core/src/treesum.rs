//! Sums of series coefficients by convolution along the tree.
//!
//! Exponents are written `l = x + sum_u i_u E_u` with integer offsets `i`
//! around a base point `x` of the wanted class, so the class condition is
//! automatic. The E*-coordinate at `u` is `b_u - e_u i_u - sum_{w ~ u} i_w`
//! with `b` the E*-coordinates of `x`, hence the sum factors over branches.
//! Every offset is bounded below (support elements are effective); rooting
//! the tree at a vertex with an upper bound makes every range finite.
//! One term of the guard is one memoized subtree sum.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::enumerate::coeff;
use crate::error::{Error, Result};
use crate::lattice::QCycle;
use crate::plumbing::Plumbing;
use crate::rational::{big_to_i128, ceil_q, floor_q, Q};

/// Offset bounds around a base point, with an optional disjunction "some
/// witness offset lies below its bound".
#[derive(Debug, Clone)]
pub(crate) struct OffsetRegion {
    /// The base point.
    pub x: Vec<Q>,
    pub b: Vec<i64>,
    pub lo: Vec<i64>,
    pub hi: Vec<Option<i64>>,
    /// At least one `i_u < bound`.
    pub witnesses: Vec<(usize, i64)>,
}

fn to_i64(x: num_bigint::BigInt) -> Result<i64> {
    big_to_i128(&x)?.to_i64().ok_or(Error::Overflow("offset bound"))
}

impl OffsetRegion {
    /// All exponents of the class of `x`, offsets measured from `x`.
    pub fn around(p: &Plumbing, x: &QCycle) -> Result<OffsetRegion> {
        let b = p
            .lattice()
            .e_star_ints(x)?
            .into_iter()
            .map(|v| v.to_i64().ok_or(Error::Overflow("E* coordinate")))
            .collect::<Result<Vec<_>>>()?;
        let lo = x
            .coords()
            .iter()
            .map(|c| to_i64(ceil_q(&-c)))
            .collect::<Result<Vec<_>>>()?;
        let n = b.len();
        Ok(OffsetRegion { x: x.coords().to_vec(), b, lo, hi: vec![None; n], witnesses: vec![] })
    }

    /// `l_u <= y` given the base coordinate `x_u`.
    pub fn upper(&mut self, u: usize, x: &Q, y: &Q) -> Result<()> {
        let h = to_i64(floor_q(&(y - x)))?;
        self.hi[u] = Some(self.hi[u].map_or(h, |old| old.min(h)));
        Ok(())
    }

    /// `l_u >= y` given the base coordinate `x_u`.
    pub fn lower(&mut self, u: usize, x: &Q, y: &Q) -> Result<()> {
        self.lo[u] = self.lo[u].max(to_i64(ceil_q(&(y - x)))?);
        Ok(())
    }

    /// Adds the disjunct `l_u < y`.
    pub fn witness(&mut self, u: usize, x: &Q, y: &Q) -> Result<()> {
        let w = to_i64(ceil_q(&(y - x)))?;
        self.witnesses.push((u, w));
        Ok(())
    }
}

/// Sum of `prod_u c_{m_u}(a_u)` over the region.
pub(crate) fn tree_sum(p: &Plumbing, m: &[i64], region: &OffsetRegion) -> Result<i128> {
    let mut pieces: Vec<(Vec<i64>, Vec<Option<i64>>, usize)> = Vec::new();
    if region.witnesses.is_empty() {
        let root = (0..m.len())
            .filter(|&u| region.hi[u].is_some())
            .min_by_key(|&u| region.hi[u].unwrap() - region.lo[u])
            .ok_or_else(|| Error::InvalidArgument("unbounded coefficient region".into()))?;
        pieces.push((region.lo.clone(), region.hi.clone(), root));
    } else {
        for (k, &(w, x)) in region.witnesses.iter().enumerate() {
            let mut lo = region.lo.clone();
            let mut hi = region.hi.clone();
            hi[w] = Some(hi[w].map_or(x - 1, |h| h.min(x - 1)));
            for &(v, y) in &region.witnesses[..k] {
                lo[v] = lo[v].max(y);
            }
            pieces.push((lo, hi, w));
        }
    }
    let mut work = 0u64;
    let mut total: i128 = 0;
    let mut result = Ok(());
    for (lo, hi, root) in pieces {
        if (0..m.len()).any(|u| hi[u].is_some_and(|h| h < lo[u])) {
            continue;
        }
        let hi = implied_upper(p, &region.x, &lo, hi)?;
        let mut t = Tree::new(p, m, &region.b, lo, hi, root, work);
        let r = t.root_sum();
        work = t.work;
        match r {
            Ok(x) => total = total.checked_add(x).ok_or(Error::Overflow("tree sum"))?,
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    p.record_terms(work);
    result.map(|_| total)
}

/// Upper bounds on every offset implied by the given ones: an effective
/// `l = sum a_v E*_v` with `l_s <= B` has
/// `l_u <= B * max_v (E*_v)_u / (E*_v)_s`.
fn implied_upper(p: &Plumbing, x: &[Q], lo: &[i64], hi: Vec<Option<i64>>) -> Result<Vec<Option<i64>>> {
    let dual = p.lattice().dual_scaled();
    let n = x.len();
    let mut out = hi.clone();
    for s in 0..n {
        let Some(h) = hi[s] else { continue };
        let cap = &x[s] + Q::from_integer(h.into());
        for u in 0..n {
            let mut best = Q::from_integer(0.into());
            for row in dual {
                let r = Q::new(row[u].into(), row[s].into());
                if r > best {
                    best = r;
                }
            }
            let b = to_i64(floor_q(&(&best * &cap - &x[u])))?;
            out[u] = Some(out[u].map_or(b, |o| o.min(b)));
        }
    }
    for u in 0..n {
        if let Some(h) = out[u] {
            out[u] = Some(h.max(lo[u] - 1));
        }
    }
    Ok(out)
}

struct Tree<'a> {
    p: &'a Plumbing,
    m: &'a [i64],
    b: &'a [i64],
    lo: Vec<i64>,
    hi: Vec<Option<i64>>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    memo: Vec<HashMap<(i64, i64), i128>>,
    work: u64,
}

impl<'a> Tree<'a> {
    fn new(
        p: &'a Plumbing,
        m: &'a [i64],
        b: &'a [i64],
        lo: Vec<i64>,
        hi: Vec<Option<i64>>,
        root: usize,
        work: u64,
    ) -> Tree<'a> {
        let g = p.graph();
        let n = g.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    children[u].push(w);
                    stack.push(w);
                }
            }
        }
        Tree { p, m, b, lo, hi, root, parent, children, memo: vec![HashMap::new(); n], work }
    }

    fn tick(&mut self, n: u64) -> Result<()> {
        self.work += n;
        if self.work > self.p.max_terms() {
            return Err(Error::ResourceLimit { limit: self.p.max_terms() });
        }
        Ok(())
    }

    fn root_sum(&mut self) -> Result<i128> {
        let r = self.root;
        let hi = self.hi[r].expect("root has an upper bound");
        let mut total: i128 = 0;
        for i in self.lo[r]..=hi {
            let x = self.node(r, 0, i)?;
            total = total.checked_add(x).ok_or(Error::Overflow("tree sum"))?;
        }
        Ok(total)
    }

    /// Sum over the subtree of `u` with the parent offset `ip` and own
    /// offset `iu` fixed.
    fn node(&mut self, u: usize, ip: i64, iu: i64) -> Result<i128> {
        if let Some(&x) = self.memo[u].get(&(ip, iu)) {
            return Ok(x);
        }
        self.tick(1)?;
        let e = self.p.graph().euler(u);
        let kids = self.children[u].clone();
        let base: i64 = kids.iter().map(|&c| self.lo[c]).sum();
        let parent = if self.parent[u].is_some() { ip } else { 0 };
        // a_u = top - sum_c (i_c - lo_c).
        let top = self.b[u] - e * iu - parent - base;
        let mut result: i128 = 0;
        if top >= 0 {
            // Children sums beyond `top` make a_u negative.
            let mut poly: Vec<i128> = vec![1];
            let mut dead = false;
            for c in kids {
                let span = match self.hi[c] {
                    Some(h) => (h - self.lo[c]).min(top),
                    None => top,
                };
                if span < 0 {
                    dead = true;
                    break;
                }
                let mut f = Vec::with_capacity(span as usize + 1);
                for j in 0..=span {
                    f.push(self.node(c, iu, self.lo[c] + j)?);
                }
                let deg = (poly.len() - 1 + f.len() - 1).min(top as usize);
                let mut next = vec![0i128; deg + 1];
                for (i, &x) in poly.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in f.iter().enumerate().take(deg + 1 - i) {
                        if y != 0 {
                            let t = x.checked_mul(y).ok_or(Error::Overflow("tree convolution"))?;
                            next[i + j] = next[i + j].checked_add(t).ok_or(Error::Overflow("tree convolution"))?;
                        }
                    }
                }
                poly = next;
                if poly.iter().all(|&x| x == 0) {
                    dead = true;
                    break;
                }
            }
            if !dead {
                for (k, &x) in poly.iter().enumerate() {
                    if x != 0 {
                        let c = coeff(self.m[u], top - k as i64);
                        result = result
                            .checked_add(x.checked_mul(c).ok_or(Error::Overflow("tree sum"))?)
                            .ok_or(Error::Overflow("tree sum"))?;
                    }
                }
            }
        }
        self.memo[u].insert((ip, iu), result);
        Ok(result)
    }
}
