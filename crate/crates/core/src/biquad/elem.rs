//! Elements of `K = Q(√m₁, √m₂)` over the frame `(1, √m₁, √m₂, √m₁√m₂)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::rat;
use crate::quadfield::QuadElem;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiquadElem {
    m1: i64,
    m2: i64,
    c: [BigRational; 4],
}

impl BiquadElem {
    pub fn new(m1: i64, m2: i64, c: [BigRational; 4]) -> Self {
        BiquadElem { m1, m2, c }
    }

    pub fn from_i64s(m1: i64, m2: i64, c: [i64; 4]) -> Self {
        Self::new(m1, m2, c.map(rat))
    }

    pub fn from_rational(m1: i64, m2: i64, q: BigRational) -> Self {
        let z = BigRational::zero();
        Self::new(m1, m2, [q, z.clone(), z.clone(), z])
    }

    pub fn zero(m1: i64, m2: i64) -> Self {
        Self::from_rational(m1, m2, BigRational::zero())
    }

    pub fn one(m1: i64, m2: i64) -> Self {
        Self::from_rational(m1, m2, BigRational::one())
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn params(&self) -> (i64, i64) {
        (self.m1, self.m2)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, o: &BiquadElem) {
        assert_eq!((self.m1, self.m2), (o.m1, o.m2), "elements of different fields");
    }

    pub fn add(&self, o: &BiquadElem) -> BiquadElem {
        self.check(o);
        let c = std::array::from_fn(|i| &self.c[i] + &o.c[i]);
        BiquadElem { m1: self.m1, m2: self.m2, c }
    }

    pub fn sub(&self, o: &BiquadElem) -> BiquadElem {
        self.check(o);
        let c = std::array::from_fn(|i| &self.c[i] - &o.c[i]);
        BiquadElem { m1: self.m1, m2: self.m2, c }
    }

    pub fn neg(&self) -> BiquadElem {
        let c = std::array::from_fn(|i| -&self.c[i]);
        BiquadElem { m1: self.m1, m2: self.m2, c }
    }

    pub fn scale(&self, q: &BigRational) -> BiquadElem {
        let c = std::array::from_fn(|i| &self.c[i] * q);
        BiquadElem { m1: self.m1, m2: self.m2, c }
    }

    pub fn mul(&self, o: &BiquadElem) -> BiquadElem {
        self.check(o);
        let (x, y) = (&self.c, &o.c);
        let m1 = rat(self.m1);
        let m2 = rat(self.m2);
        let c0 = &x[0] * &y[0] + &m1 * &x[1] * &y[1] + &m2 * &x[2] * &y[2] + &m1 * &m2 * &x[3] * &y[3];
        let c1 = &x[0] * &y[1] + &x[1] * &y[0] + &m2 * (&x[2] * &y[3] + &x[3] * &y[2]);
        let c2 = &x[0] * &y[2] + &x[2] * &y[0] + &m1 * (&x[1] * &y[3] + &x[3] * &y[1]);
        let c3 = &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] + &x[2] * &y[1];
        BiquadElem { m1: self.m1, m2: self.m2, c: [c0, c1, c2, c3] }
    }

    /// Automorphism `σ_k`: `σ_0` is the identity and `σ_k` (k = 1, 2, 3)
    /// fixes the `k`-th quadratic subfield.
    pub fn apply(&self, k: usize) -> BiquadElem {
        let signs: [i8; 3] = match k {
            0 => [1, 1, 1],
            1 => [1, -1, -1],
            2 => [-1, 1, -1],
            3 => [-1, -1, 1],
            _ => panic!("automorphism index {k} out of range"),
        };
        let mut c = self.c.clone();
        for (i, s) in signs.iter().enumerate() {
            if *s < 0 {
                c[i + 1] = -&c[i + 1];
            }
        }
        BiquadElem { m1: self.m1, m2: self.m2, c }
    }

    /// `N_{K/Q}`.
    pub fn norm(&self) -> BigRational {
        let n = self.mul(&self.apply(1)).mul(&self.apply(2).mul(&self.apply(3)));
        debug_assert!(n.is_rational());
        n.c[0].clone()
    }

    pub fn trace(&self) -> BigRational {
        &self.c[0] * rat(4)
    }

    pub fn inv(&self) -> Option<BiquadElem> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.apply(1).mul(&self.apply(2)).mul(&self.apply(3)).scale(&n.recip()))
    }

    pub fn div(&self, o: &BiquadElem) -> Option<BiquadElem> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> BiquadElem {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = BiquadElem::one(self.m1, self.m2);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &num_bigint::BigInt) -> BiquadElem {
        use num_traits::ToPrimitive;
        self.pow(e.to_i64().expect("exponent fits in i64"))
    }

    /// `(u, v)` with `self = u + v√m₂`, `u, v ∈ Q(√m₁)`.
    fn split(&self) -> (QuadElem, QuadElem) {
        (
            QuadElem::new(self.m1, self.c[0].clone(), self.c[1].clone()),
            QuadElem::new(self.m1, self.c[2].clone(), self.c[3].clone()),
        )
    }

    fn join(m2: i64, u: &QuadElem, v: &QuadElem) -> BiquadElem {
        BiquadElem { m1: u.m(), m2, c: [u.a().clone(), u.b().clone(), v.a().clone(), v.b().clone()] }
    }

    /// Square root in `K`, normalized so the first nonzero coordinate is
    /// positive; every returned root is checked by squaring.
    pub fn sqrt(&self) -> Option<BiquadElem> {
        let r = self.sqrt_raw()?;
        if r.mul(&r) != *self {
            return None;
        }
        let first = r.c.iter().find(|x| !x.is_zero());
        Some(match first {
            Some(x) if x.is_negative() => r.neg(),
            _ => r,
        })
    }

    fn sqrt_raw(&self) -> Option<BiquadElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let m2 = self.m2;
        let (u, v) = self.split();
        let m2q = QuadElem::from_int(self.m1, m2);
        if v.is_zero() {
            // √u inside Q(√m₁), or t√m₂ with t² = u/m₂
            if let Some(s) = u.sqrt() {
                return Some(Self::join(m2, &s, &QuadElem::zero(self.m1)));
            }
            let t = u.div(&m2q)?.sqrt()?;
            return Some(Self::join(m2, &QuadElem::zero(self.m1), &t));
        }
        // (s + t√m₂)² = u + v√m₂: s² = (u ± r)/2 with r² = u² − m₂v², t = v/(2s)
        let n = u.mul(&u).sub(&m2q.mul(&v).mul(&v));
        let r = n.sqrt()?;
        let half = QuadElem::from_rational(self.m1, BigRational::new(1.into(), 2.into()));
        for rr in [r.clone(), r.neg()] {
            let s2 = u.add(&rr).mul(&half);
            if let Some(s) = s2.sqrt() {
                if s.is_zero() {
                    continue;
                }
                let t = v.mul(&half).div(&s)?;
                let cand = Self::join(m2, &s, &t);
                if cand.mul(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

impl fmt::Display for BiquadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            String::new(),
            format!("sqrt({})", self.m1),
            format!("sqrt({})", self.m2),
            format!("sqrt({})*sqrt({})", self.m1, self.m2),
        ];
        let mut parts = Vec::new();
        for (c, name) in self.c.iter().zip(&names) {
            if c.is_zero() {
                continue;
            }
            let term = if name.is_empty() {
                c.to_string()
            } else if c.is_one() {
                name.clone()
            } else if (-c).is_one() {
                format!("-{name}")
            } else {
                format!("{c}*{name}")
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{s}")
    }
}

/// Serialized as frame coordinates plus the frame tag.
impl Serialize for BiquadElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BiquadElem", 2)?;
        st.serialize_field("frame", "sqrt")?;
        let coords: Vec<String> = self.c.iter().map(ToString::to_string).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: [i64; 4]) -> BiquadElem {
        BiquadElem::from_i64s(2, 3, c)
    }

    #[test]
    fn multiplication_and_inverse() {
        let x = e([0, 1, 1, 0]);
        assert_eq!(x.mul(&x), e([5, 0, 0, 2]));
        let y = e([1, 2, -1, 3]);
        assert!(y.mul(&y.inv().unwrap()).is_one());
        assert_eq!(y.pow(3).mul(&y.pow(-3)), BiquadElem::one(2, 3));
    }

    #[test]
    fn automorphisms_form_klein_group() {
        let y = e([1, 2, -1, 3]);
        for k in 0..4 {
            assert_eq!(y.apply(k).apply(k), y);
        }
        assert_eq!(y.apply(1).apply(2), y.apply(3));
        // σ₁ fixes √2
        assert_eq!(e([0, 1, 0, 0]).apply(1), e([0, 1, 0, 0]));
        assert_eq!(e([0, 0, 0, 1]).apply(3), e([0, 0, 0, 1]));
    }

    #[test]
    fn square_roots() {
        assert_eq!(e([5, 0, 0, 2]).sqrt(), Some(e([0, 1, 1, 0])));
        assert_eq!(e([2, 0, 0, 0]).sqrt(), Some(e([0, 1, 0, 0])));
        assert_eq!(e([6, 0, 0, 0]).sqrt(), Some(e([0, 0, 0, 1])));
        assert_eq!(e([1, 1, 0, 0]).sqrt(), None);
        let i = BiquadElem::from_i64s(-1, 2, [0, 1, 0, 0]);
        let z8 = i.sqrt().unwrap();
        assert_eq!(z8.pow(8), BiquadElem::one(-1, 2));
        assert_ne!(z8.pow(4), BiquadElem::one(-1, 2));
    }

    #[test]
    fn norm_of_units() {
        assert_eq!(e([0, 1, 1, 0]).norm(), rat(1));
        assert_eq!(e([1, 1, 0, 0]).norm(), rat(1));
    }
}
