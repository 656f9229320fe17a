//! Elements `a + b√m` of a quadratic field with exact rational coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::arith::{is_integral, ln_abs_rational, rat, sqrt_rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    m: i64,
    a: BigRational,
    b: BigRational,
}

impl QuadElem {
    pub fn new(m: i64, a: BigRational, b: BigRational) -> Self {
        QuadElem { m, a, b }
    }

    pub fn from_int(m: i64, n: impl Into<BigInt>) -> Self {
        Self::from_rational(m, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(m: i64, q: BigRational) -> Self {
        QuadElem { m, a: q, b: BigRational::zero() }
    }

    pub fn from_i64s(m: i64, a: i64, b: i64) -> Self {
        QuadElem { m, a: rat(a), b: rat(b) }
    }

    pub fn zero(m: i64) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: i64) -> Self {
        Self::from_int(m, 1)
    }

    pub fn sqrt_m(m: i64) -> Self {
        QuadElem { m, a: BigRational::zero(), b: BigRational::one() }
    }

    fn m_is_1_mod_4(m: i64) -> bool {
        m.rem_euclid(4) == 1
    }

    /// `ω = √m` or `(1 + √m)/2`.
    pub fn omega(m: i64) -> Self {
        if Self::m_is_1_mod_4(m) {
            let h = BigRational::new(1.into(), 2.into());
            QuadElem { m, a: h.clone(), b: h }
        } else {
            Self::sqrt_m(m)
        }
    }

    /// `x + yω`.
    pub fn from_omega(m: i64, x: BigRational, y: BigRational) -> Self {
        Self::from_rational(m, x).add(&Self::omega(m).scale(&y))
    }

    pub fn from_omega_int(m: i64, x: &BigInt, y: &BigInt) -> Self {
        Self::from_omega(m, BigRational::from_integer(x.clone()), BigRational::from_integer(y.clone()))
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `√m`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Coordinates `(x, y)` with `self = x + yω`.
    pub fn omega_coords(&self) -> (BigRational, BigRational) {
        if Self::m_is_1_mod_4(self.m) {
            let y = &self.b * BigRational::from_integer(2.into());
            let x = &self.a - &self.b;
            (x, y)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    /// Integer coordinates over `(1, ω)` when the element is integral.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        let (x, y) = self.omega_coords();
        (is_integral(&x) && is_integral(&y)).then(|| (x.to_integer(), y.to_integer()))
    }

    pub fn is_integral(&self) -> bool {
        self.integral_coords().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &QuadElem) {
        assert_eq!(self.m, other.m, "elements of different fields");
    }

    pub fn add(&self, other: &QuadElem) -> QuadElem {
        self.check(other);
        QuadElem { m: self.m, a: &self.a + &other.a, b: &self.b + &other.b }
    }

    pub fn sub(&self, other: &QuadElem) -> QuadElem {
        self.check(other);
        QuadElem { m: self.m, a: &self.a - &other.a, b: &self.b - &other.b }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem { m: self.m, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, other: &QuadElem) -> QuadElem {
        self.check(other);
        let m = rat(self.m);
        QuadElem {
            m: self.m,
            a: &self.a * &other.a + &self.b * &other.b * m,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    pub fn scale(&self, q: &BigRational) -> QuadElem {
        QuadElem { m: self.m, a: &self.a * q, b: &self.b * q }
    }

    pub fn scale_int(&self, n: &BigInt) -> QuadElem {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { m: self.m, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.m)
    }

    pub fn trace(&self) -> BigRational {
        &self.a * BigRational::from_integer(2.into())
    }

    pub fn inv(&self) -> Option<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, other: &QuadElem) -> Option<QuadElem> {
        Some(self.mul(&other.inv()?))
    }

    /// `self^e`; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> QuadElem {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadElem::one(self.m);
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

    pub fn pow_big(&self, e: &BigInt) -> QuadElem {
        use num_traits::ToPrimitive;
        self.pow(e.to_i64().expect("exponent fits in i64"))
    }

    /// Square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<QuadElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let m = self.m;
        if self.b.is_zero() {
            if let Some(r) = sqrt_rational(&self.a) {
                return Some(QuadElem::from_rational(m, r));
            }
            // a = m·q²  ⇒  √a = q√m
            let q = sqrt_rational(&(&self.a / rat(m)))?;
            return Some(QuadElem { m, a: BigRational::zero(), b: q });
        }
        // (p + q√m)² = a + b√m  ⇒  p² = (a ± √N)/2, q = b/(2p)
        let n = sqrt_rational(&self.norm())?;
        let two = rat(2);
        for r in [n.clone(), -n] {
            let p2 = (&self.a + r) / &two;
            if let Some(p) = sqrt_rational(&p2) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let cand = QuadElem { m, a: p, b: q };
                if cand.mul(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// `ln |ι(self)|` for the real embedding `√m ↦ +√m` (`conjugate = false`)
    /// or `√m ↦ −√m`; for imaginary fields the two coincide.
    pub fn ln_abs(&self, conjugate: bool) -> f64 {
        assert!(!self.is_zero(), "log of zero");
        if self.m < 0 {
            return 0.5 * ln_abs_rational(&self.norm());
        }
        let b = if conjugate { -&self.b } else { self.b.clone() };
        let same_sign = self.a.is_zero() || b.is_zero() || self.a.is_positive() == b.is_positive();
        if same_sign {
            ln_sum(&self.a, &b, self.m)
        } else {
            ln_abs_rational(&self.norm()) - ln_sum(&self.a, &-b, self.m)
        }
    }

    /// Real value in the embedding `√m ↦ +√m`, for real fields.
    pub fn to_f64(&self) -> f64 {
        let l = self.ln_abs(false);
        let pos = self.real_sign(false) > 0;
        if pos {
            l.exp()
        } else {
            -l.exp()
        }
    }

    /// Sign of the real embedding, decided exactly.
    pub fn real_sign(&self, conjugate: bool) -> i8 {
        assert!(self.m > 0, "sign needs a real embedding");
        let b = if conjugate { -&self.b } else { self.b.clone() };
        let sa = sign(&self.a);
        let sb = sign(&b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // a and b√m have opposite signs: compare a² with b²m
        let lhs = &self.a * &self.a;
        let rhs = &b * &b * rat(self.m);
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }
}

fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// `ln(|a| + |b|√m)` without cancellation.
fn ln_sum(a: &BigRational, b: &BigRational, m: i64) -> f64 {
    let la = (!a.is_zero()).then(|| ln_abs_rational(a));
    let lb = (!b.is_zero()).then(|| ln_abs_rational(b) + 0.5 * (m as f64).ln());
    match (la, lb) {
        (Some(x), Some(y)) => {
            let (hi, lo) = if x > y { (x, y) } else { (y, x) };
            hi + (lo - hi).exp().ln_1p()
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => f64::NEG_INFINITY,
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.m);
        let bpart = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if bpart.starts_with('-') {
            write!(f, "{} - {}", self.a, &bpart[1..])
        } else {
            write!(f, "{} + {bpart}", self.a)
        }
    }
}

/// Serialized as the pair `(x, y)` of rationals meaning `x + yω`.
impl Serialize for QuadElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (x, y) = self.omega_coords();
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&x.to_string())?;
        t.serialize_element(&y.to_string())?;
        t.end()
    }
}
