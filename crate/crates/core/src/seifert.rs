//! Normalized Seifert invariants and their star-shaped plumbing graphs.

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{q, q_frac, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub b0: i64,
    /// Pairs `(alpha, omega)` with `0 < omega < alpha` coprime.
    pub legs: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(b0: i64, legs: Vec<(i64, i64)>) -> Result<SeifertData> {
        if b0 < 1 {
            return Err(Error::Malformed(format!("b0 = {b0} must be positive")));
        }
        if legs.len() < 3 {
            return Err(Error::Malformed(format!("{} legs, need at least 3", legs.len())));
        }
        for &(a, w) in &legs {
            if !(0 < w && w < a) || a.gcd(&w) != 1 {
                return Err(Error::Malformed(format!("bad leg ({a},{w})")));
            }
        }
        Ok(SeifertData { b0, legs })
    }

    /// Parses `"b0;(a1,w1),(a2,w2),..."`.
    pub fn parse(s: &str) -> Result<SeifertData> {
        let bad = || Error::Malformed(format!("bad Seifert string `{s}`"));
        let (b0, rest) = s.split_once(';').ok_or_else(bad)?;
        let b0: i64 = b0.trim().parse().map_err(|_| bad())?;
        let mut legs = Vec::new();
        for part in rest.split(')') {
            let part = part.trim().trim_start_matches(',').trim();
            if part.is_empty() {
                continue;
            }
            let inner = part.strip_prefix('(').ok_or_else(bad)?;
            let (a, w) = inner.split_once(',').ok_or_else(bad)?;
            legs.push((
                a.trim().parse().map_err(|_| bad())?,
                w.trim().parse().map_err(|_| bad())?,
            ));
        }
        SeifertData::new(b0, legs)
    }

    /// Orbifold Euler number `-b0 + sum omega/alpha`.
    pub fn e_orb(&self) -> Q {
        self.legs.iter().fold(q(-self.b0), |acc, &(a, w)| acc + q_frac(w, a))
    }

    pub fn is_negative_definite(&self) -> bool {
        self.e_orb().is_negative()
    }

    /// Center `c` with euler `-b0`; leg `j` (from 1) has vertices `l{j}_{i}`.
    pub fn star_graph(&self) -> Result<Graph> {
        if !self.is_negative_definite() {
            return Err(Error::NotNegDefinite);
        }
        let mut vs = vec![("c".to_string(), -self.b0)];
        let mut es = Vec::new();
        for (j, &(a, w)) in self.legs.iter().enumerate() {
            let mut prev = "c".to_string();
            for (i, b) in hj_expansion(a, w).into_iter().enumerate() {
                let id = format!("l{}_{}", j + 1, i + 1);
                vs.push((id.clone(), -b));
                es.push((prev, id.clone()));
                prev = id;
            }
        }
        Graph::new(Some(self.to_string()), &vs, &es)
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.b0)?;
        for (i, (a, w)) in self.legs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{w})")?;
        }
        Ok(())
    }
}

/// Negative continued fraction `a/w = [b1, ..., bs]`, all `b_i >= 2`.
pub fn hj_expansion(a: i64, w: i64) -> Vec<i64> {
    assert!(0 < w && w < a, "need 0 < w < a");
    let (mut num, mut den) = (a, w);
    let mut out = Vec::new();
    while den != 0 {
        let b = Integer::div_ceil(&num, &den);
        out.push(b);
        (num, den) = (den, b * den - num);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(hj_expansion(2, 1), vec![2]);
        assert_eq!(hj_expansion(3, 2), vec![2, 2]);
        assert_eq!(hj_expansion(7, 1), vec![7]);
        assert_eq!(hj_expansion(5, 3), vec![2, 3]);
        assert_eq!(hj_expansion(7, 3), vec![3, 2, 2]);
    }

    #[test]
    fn parse_and_star() {
        let sf = SeifertData::parse("1;(2,1),(3,1),(7,1)").unwrap();
        assert_eq!(sf.to_string(), "1;(2,1),(3,1),(7,1)");
        assert_eq!(sf.e_orb(), q_frac(-1, 42));
        let g = sf.star_graph().unwrap();
        assert_eq!(g.eulers(), &[-1, -2, -3, -7]);
        let d4 = SeifertData::parse("2;(2,1),(2,1),(2,1)").unwrap().star_graph().unwrap();
        assert_eq!(d4.eulers(), &[-2, -2, -2, -2]);
        assert_eq!(d4.valency(0), 3);
        assert!(SeifertData::parse("1;(2,1),(2,1),(2,1)").unwrap().star_graph().is_err());
        assert!(SeifertData::parse("1;(2,1),(2,1)").is_err());
        assert!(SeifertData::parse("1;(4,2),(2,1),(3,1)").is_err());
        assert!(SeifertData::parse("nonsense").is_err());
    }
}
