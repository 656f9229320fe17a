//! Small number-theoretic helpers shared by the field modules.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Prime factorization of `|n|` by trial division.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(m: i64) -> bool {
    m != 0 && factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// `n = g² · s` with `s` squarefree carrying the sign of `n`; returns `(s, g)`.
pub fn squarefree_decomposition(n: i64) -> (i64, i64) {
    let mut s: i64 = n.signum();
    let mut g: i64 = 1;
    for (p, e) in factor(n.unsigned_abs()) {
        let p = p as i64;
        g *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
    }
    (s, g)
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn rational_valuation(q: &BigRational, p: u64) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it exists.
pub fn sqrt_rational(q: &BigRational) -> Option<BigRational> {
    let n = sqrt_int(q.numer())?;
    let d = sqrt_int(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Kronecker symbol `(D/p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i8 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let p_i = p as i64;
    let a = d.rem_euclid(p_i);
    if a == 0 {
        return 0;
    }
    let r = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Natural logarithm of `|n|` without overflowing `f64`.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().expect("64 bits").ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ln_abs_rational(q: &BigRational) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

/// `q` as `f64` with graceful handling of huge numerators and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs_rational(q).exp()
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Integer square root floor for `u64`.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// Solution `y` of `Σ y_j · cols[j] = x` over the rationals, for linearly
/// independent columns.
pub fn solve_rational(cols: &[Vec<BigRational>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = x.len();
    let k = cols.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            return None;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| a[c][k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_solve() {
        let cols = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        assert_eq!(solve_rational(&cols, &[rat(3), rat(0)]), Some(vec![rat_frac(3, 2), rat_frac(3, 2)]));
        let dependent = vec![vec![rat(1), rat(0), rat(0)]];
        assert!(solve_rational(&dependent, &[rat(1), rat(1), rat(0)]).is_none());
    }

    #[test]
    fn squarefree_and_decomposition() {
        assert!(is_squarefree(-5));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(0));
        assert_eq!(squarefree_decomposition(-20), (-5, 2));
        assert_eq!(squarefree_decomposition(6), (6, 1));
        assert_eq!(squarefree_decomposition(-3 * -1), (3, 1));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-20, 3), 1);
        assert_eq!(kronecker(-20, 5), 0);
        assert_eq!(kronecker(-20, 11), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn logs_of_huge_numbers() {
        let big = BigInt::from(10).pow(400);
        let l = ln_abs_int(&big);
        assert!((l - 400.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn rational_roots() {
        assert_eq!(sqrt_rational(&rat_frac(9, 4)), Some(rat_frac(3, 2)));
        assert_eq!(sqrt_rational(&rat(2)), None);
        assert_eq!(sqrt_rational(&rat(-4)), None);
    }
}
