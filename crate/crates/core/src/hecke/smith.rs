//! p-adic elementary divisors of integer matrices.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// `v_p(x)` for nonzero `x`.
pub fn valuation(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

fn strip(x: &BigInt, p: u64, v: i64) -> BigInt {
    x / BigInt::from(p).pow(v as u32)
}

/// Elementary divisors over `Z_(p)` by pivoted elimination, returned in descending order.
pub fn smith_divisors_big(m: &[[BigInt; 3]; 3], p: u64) -> Result<[i64; 3]> {
    let mut a = m.clone();
    let mut divs = [0i64; 3];
    for s in 0..3 {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in s..3 {
            for j in s..3 {
                if !a[i][j].is_zero() {
                    let v = valuation(&a[i][j], p);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or_else(|| Error::InvalidInput("singular matrix has no elementary divisors".into()))?;
        a.swap(s, i);
        for row in a.iter_mut() {
            row.swap(s, j);
        }
        let u = strip(&a[s][s], p, v);
        for i in s + 1..3 {
            let c = strip(&a[i][s], p, v);
            for j in s..3 {
                a[i][j] = &u * &a[i][j] - &c * &a[s][j];
            }
        }
        for j in s + 1..3 {
            let c = strip(&a[s][j], p, v);
            for i in s..3 {
                a[i][j] = &u * &a[i][j] - &c * &a[i][s];
            }
        }
        divs[s] = v;
    }
    divs.sort_by(|x, y| y.cmp(x));
    Ok(divs)
}

/// Elementary divisors of an integer matrix at `p`.
pub fn smith_divisors(x: &[[i64; 3]; 3], p: u64) -> Result<[i64; 3]> {
    smith_divisors_big(&x.map(|r| r.map(BigInt::from)), p)
}

fn valuation_i128(mut x: i128, p: i128) -> i64 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Elementary divisors via determinantal divisors in `i128`, for matrices whose 2×2 minors
/// and determinant fit. `None` on a singular matrix.
pub fn smith_divisors_small(x: &[[i64; 3]; 3], p: u64) -> Option<[i64; 3]> {
    let p = p as i128;
    let b = x.map(|r| r.map(|v| v as i128));
    let min_val = |it: &mut dyn Iterator<Item = i128>| it.filter(|&z| z != 0).map(|z| valuation_i128(z, p)).min();
    let d1 = min_val(&mut b.iter().flatten().copied())?;
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let d2 = min_val(&mut pairs.iter().flat_map(|&(r1, r2)| pairs.iter().map(move |&(c1, c2)| b[r1][c1] * b[r2][c2] - b[r1][c2] * b[r2][c1])))?;
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let d3 = min_val(&mut std::iter::once(det))?;
    Some([d3 - d2, d2 - d1, d1])
}

/// Determinantal-divisor valuations `(v(Δ₁), v(Δ₂) − v(Δ₁), v(Δ₃) − v(Δ₂))`, descending.
/// An independent route used to check the elimination.
pub fn determinantal_divisors(x: &[[i64; 3]; 3], p: u64) -> Result<[i64; 3]> {
    let b = x.map(|r| r.map(BigInt::from));
    let min_val = |xs: Vec<BigInt>| xs.iter().filter(|z| !z.is_zero()).map(|z| valuation(&z.abs(), p)).min();
    let d1 = min_val(b.iter().flatten().cloned().collect());
    let mut minors = Vec::new();
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            minors.push(&b[r1][c1] * &b[r2][c2] - &b[r1][c2] * &b[r2][c1]);
        }
    }
    let d2 = min_val(minors);
    let det = &b[0][0] * (&b[1][1] * &b[2][2] - &b[1][2] * &b[2][1]) - &b[0][1] * (&b[1][0] * &b[2][2] - &b[1][2] * &b[2][0])
        + &b[0][2] * (&b[1][0] * &b[2][1] - &b[1][1] * &b[2][0]);
    let d3 = min_val(vec![det]);
    match (d1, d2, d3) {
        (Some(d1), Some(d2), Some(d3)) => Ok([d3 - d2, d2 - d1, d1]),
        _ => Err(Error::InvalidInput("singular matrix has no elementary divisors".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn mul(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
        let mut c = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }

    /// Product of random elementary matrices, hence unimodular.
    fn unimodular<R: Rng>(rng: &mut R) -> [[i64; 3]; 3] {
        let mut u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for _ in 0..4 {
            let (i, j) = (rng.random_range(0..3), rng.random_range(0..3));
            if i == j {
                continue;
            }
            let mut e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            e[i][j] = rng.random_range(-2..=2);
            u = mul(&u, &e);
        }
        u
    }

    #[test]
    fn diagonal_and_identity() {
        assert_eq!(smith_divisors(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]], 2).unwrap(), [0, 0, 0]);
        assert_eq!(smith_divisors(&[[9, 0, 0], [0, 3, 0], [0, 0, 1]], 3).unwrap(), [2, 1, 0]);
        assert_eq!(smith_divisors(&[[1, 0, 0], [0, 9, 0], [0, 0, 3]], 3).unwrap(), [2, 1, 0]);
        assert!(smith_divisors(&[[1, 2, 3], [2, 4, 6], [0, 0, 1]], 5).is_err());
    }

    #[test]
    fn unimodular_invariance() {
        let mut rng = crate::rng::stream(31, "smith");
        for p in [2u64, 3, 5] {
            let d = [[(p * p) as i64, 0, 0], [0, p as i64, 0], [0, 0, 1]];
            for _ in 0..100 {
                let x = mul(&mul(&unimodular(&mut rng), &d), &unimodular(&mut rng));
                assert_eq!(smith_divisors(&x, p).unwrap(), [2, 1, 0]);
            }
        }
    }

    #[test]
    fn elimination_matches_determinantal_divisors() {
        let mut rng = crate::rng::stream(32, "smith-dd");
        for _ in 0..500 {
            let x: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-40..=40)));
            for p in [2u64, 3, 5, 7] {
                match determinantal_divisors(&x, p) {
                    Ok(d) => {
                        assert_eq!(smith_divisors(&x, p).unwrap(), d, "{x:?} p={p}");
                        assert_eq!(smith_divisors_small(&x, p), Some(d));
                    }
                    Err(_) => assert!(smith_divisors(&x, p).is_err() && smith_divisors_small(&x, p).is_none()),
                }
            }
        }
    }
}
