//! Exact integer linear algebra: fraction-free determinants, adjugates and
//! the row transform of a Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_big(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Leading principal minors det_1, ..., det_n.
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a = to_big(m);
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        // Without pivoting a[k][k] is the (k+1)-th leading minor.
        out.push(a[k][k].clone());
        if a[k][k].is_zero() {
            for j in k + 1..n {
                let sub: Vec<Vec<i64>> = m[..=j].iter().map(|r| r[..=j].to_vec()).collect();
                out.push(det(&sub));
            }
            return out;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    out
}

/// Exact inverse over the rationals, `None` when singular.
pub fn inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        inv.swap(p, col);
        let piv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &piv;
            inv[col][j] = &inv[col][j] / &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Smith normal form data: invariant factors and a unimodular `u` with
/// `u * m * v = diag(factors)` for some unimodular `v`.
#[derive(Debug, Clone)]
pub struct SmithRows {
    pub factors: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
}

pub fn smith_rows(m: &[Vec<i64>]) -> SmithRows {
    let n = m.len();
    let mut a = to_big(m);
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut factors = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                factors.push(BigInt::zero());
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    for j in 0..n {
                        let s = &q * &u[t][j];
                        u[i][j] -= s;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..n {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                    for j in 0..n {
                        let s = u[i][j].clone();
                        u[t][j] += s;
                    }
                }
                None => {
                    if a[t][t].is_negative() {
                        for j in t..n {
                            a[t][j] = -&a[t][j];
                        }
                        for j in 0..n {
                            u[t][j] = -&u[t][j];
                        }
                    }
                    factors.push(a[t][t].clone());
                    break;
                }
            }
        }
    }
    SmithRows { factors, u }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det(&[vec![-2]]), BigInt::from(-2));
        assert_eq!(det(&[vec![-3, 1], vec![1, -1]]), BigInt::from(2));
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(
            leading_minors(&[vec![-3, 1], vec![1, -1]]),
            vec![BigInt::from(-3), BigInt::from(2)]
        );
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = vec![vec![-3, 1, 0], vec![1, -2, 1], vec![0, 1, -5]];
        let inv = inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = BigRational::zero();
                for k in 0..3 {
                    s += &inv[i][k] * BigRational::from_integer(m[k][j].into());
                }
                assert_eq!(s, BigRational::from_integer(((i == j) as i64).into()));
            }
        }
    }

    #[test]
    fn smith_factors_multiply_to_determinant() {
        // D4: group (Z/2)^2.
        let m = vec![
            vec![-2, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ];
        let s = smith_rows(&m);
        let nontrivial: Vec<_> = s.factors.iter().filter(|f| !f.is_one()).cloned().collect();
        assert_eq!(nontrivial, vec![BigInt::from(2), BigInt::from(2)]);
        let prod: BigInt = s.factors.iter().product();
        assert_eq!(prod, det(&m).abs());
    }
}
