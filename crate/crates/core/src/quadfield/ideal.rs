//! Integral ideals of a quadratic order in Hermite normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::elem::QuadElem;
use crate::abelian::matrix::hnf_upper;
use crate::abelian::IntMatrix;
use crate::arith::{factor, kronecker, valuation};
use crate::error::{Error, Result};

/// `I = aZ + (b + cω)Z` with `c | a`, `c | b`, `0 ≤ b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    m: i64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// `ω²  = t·ω + n` in the basis `(1, ω)`.
fn omega_square(m: i64) -> (BigInt, BigInt) {
    if m.rem_euclid(4) == 1 {
        (BigInt::one(), BigInt::from((m - 1) / 4))
    } else {
        (BigInt::zero(), BigInt::from(m))
    }
}

/// `(x + yω)(u + vω)` in `(1, ω)` coordinates.
fn mul_coords(m: i64, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) -> (BigInt, BigInt) {
    let (t, n) = omega_square(m);
    let yv = y * v;
    (x * u + &yv * &n, x * v + y * u + &yv * &t)
}

impl QuadIdeal {
    /// Validates the HNF shape and closure under multiplication by `ω`.
    pub fn from_hnf(m: i64, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() || b.is_negative() || b >= a {
            return Err(Error::domain(format!("not an ideal HNF: [{a}, {b}; 0, {c}]")));
        }
        let id = QuadIdeal { m, a, b, c };
        let (x1, y1) = mul_coords(m, &id.a, &BigInt::zero(), &BigInt::zero(), &BigInt::one());
        let (x2, y2) = mul_coords(m, &id.b, &id.c, &BigInt::zero(), &BigInt::one());
        if !id.contains_coords(&x1, &y1) || !id.contains_coords(&x2, &y2) {
            return Err(Error::domain("lattice is not closed under multiplication by ω"));
        }
        Ok(id)
    }

    /// Ideal spanned over `Z` by the given `(1, ω)` coordinate vectors.
    fn from_lattice(m: i64, gens: &[(BigInt, BigInt)]) -> Option<Self> {
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
        let h = hnf_upper(&IntMatrix::from_columns(2, &cols))?;
        Some(QuadIdeal { m, a: h[(0, 0)].clone(), b: h[(0, 1)].clone(), c: h[(1, 1)].clone() })
    }

    /// The ideal generated over `O_F` by integral elements.
    pub fn from_generators(m: i64, gens: &[QuadElem]) -> Result<Self> {
        let mut lat = Vec::new();
        for g in gens {
            let (x, y) = g.integral_coords().ok_or_else(|| Error::domain(format!("{g} is not integral")))?;
            lat.push((x.clone(), y.clone()));
            lat.push(mul_coords(m, &x, &y, &BigInt::zero(), &BigInt::one()));
        }
        Self::from_lattice(m, &lat).ok_or_else(|| Error::domain("zero ideal"))
    }

    pub fn principal(alpha: &QuadElem) -> Result<Self> {
        Self::from_generators(alpha.m(), std::slice::from_ref(alpha))
    }

    pub fn unit(m: i64) -> Self {
        QuadIdeal { m, a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() }
    }

    pub fn rational(m: i64, n: &BigInt) -> Self {
        let n = n.abs();
        QuadIdeal { m, a: n.clone(), b: BigInt::zero(), c: n }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn hnf(&self) -> IntMatrix {
        IntMatrix::from_rows(&[vec![self.a.clone(), self.b.clone()], vec![BigInt::zero(), self.c.clone()]])
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one()
    }

    /// Largest rational integer dividing the ideal.
    pub fn content(&self) -> BigInt {
        self.c.clone()
    }

    /// Z-basis elements `a` and `b + cω`.
    pub fn basis(&self) -> [QuadElem; 2] {
        [
            QuadElem::from_int(self.m, self.a.clone()),
            QuadElem::from_omega_int(self.m, &self.b, &self.c),
        ]
    }

    fn contains_coords(&self, x: &BigInt, y: &BigInt) -> bool {
        let (q, r) = y.div_rem(&self.c);
        r.is_zero() && (x - &q * &self.b).is_multiple_of(&self.a)
    }

    pub fn contains(&self, x: &QuadElem) -> bool {
        match x.integral_coords() {
            Some((u, v)) => self.contains_coords(&u, &v),
            None => false,
        }
    }

    /// `other ⊆ self`, i.e. `self` divides `other`.
    pub fn divides(&self, other: &QuadIdeal) -> bool {
        other.basis().iter().all(|g| self.contains(g))
    }

    pub fn mul(&self, other: &QuadIdeal) -> QuadIdeal {
        assert_eq!(self.m, other.m);
        let zero = BigInt::zero();
        let p = [(self.a.clone(), zero.clone()), (self.b.clone(), self.c.clone())];
        let q = [(other.a.clone(), zero.clone()), (other.b.clone(), other.c.clone())];
        let mut gens = Vec::new();
        for (x, y) in &p {
            for (u, v) in &q {
                gens.push(mul_coords(self.m, x, y, u, v));
            }
        }
        Self::from_lattice(self.m, &gens).expect("product of nonzero ideals")
    }

    pub fn pow(&self, e: u32) -> QuadIdeal {
        let mut acc = QuadIdeal::unit(self.m);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> QuadIdeal {
        let gens: Vec<(BigInt, BigInt)> = self
            .basis()
            .iter()
            .map(|g| g.conj().integral_coords().expect("conjugate of integral element"))
            .collect();
        Self::from_lattice(self.m, &gens).expect("nonzero")
    }

    pub fn scale(&self, alpha: &QuadElem) -> Result<QuadIdeal> {
        let gens: Vec<(BigInt, BigInt)> = self
            .basis()
            .iter()
            .map(|g| g.mul(alpha).integral_coords().ok_or_else(|| Error::domain("scaled ideal is fractional")))
            .collect::<Result<_>>()?;
        Self::from_lattice(self.m, &gens).ok_or_else(|| Error::domain("zero multiplier"))
    }

    /// `self / n` for a rational integer `n` dividing the ideal.
    pub fn div_integer(&self, n: &BigInt) -> Option<QuadIdeal> {
        if !self.c.is_multiple_of(n) {
            return None;
        }
        Some(QuadIdeal { m: self.m, a: &self.a / n, b: &self.b / n, c: &self.c / n })
    }

    /// Whether `(α) = self`.
    pub fn is_generated_by(&self, alpha: &QuadElem) -> bool {
        match QuadIdeal::principal(alpha) {
            Ok(p) => p == *self,
            Err(_) => false,
        }
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = if self.m.rem_euclid(4) == 1 {
            format!("(1+sqrt({}))/2", self.m)
        } else {
            format!("sqrt({})", self.m)
        };
        let second = match (self.b.is_zero(), self.c.is_one()) {
            (true, true) => w,
            (true, false) => format!("{}*{w}", self.c),
            (false, true) => format!("{}+{w}", self.b),
            (false, false) => format!("{}+{}*{w}", self.b, self.c),
        };
        write!(f, "({}, {})", self.a, second)
    }
}

/// Serialized as the HNF quadruple `[a, b, 0, c]`.
impl Serialize for QuadIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string(), "0".to_string(), self.c.to_string()].serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal with its residue characteristic and ramification data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Index among the primes above `p` (0 or 1).
    pub index: usize,
    pub e: u32,
    pub f: u32,
    pub ideal: QuadIdeal,
}

impl PrimeIdeal {
    pub fn label(&self) -> String {
        format!("{}.{}", self.p, self.index)
    }
}

/// Splitting type of `p` and the primes above it, ordered so that in the
/// split case the first prime is `[p, (−b + √D)/2]` with the smaller `b`.
pub fn primes_above(m: i64, disc: i64, p: u64) -> (Splitting, Vec<PrimeIdeal>) {
    let symbol = kronecker(disc, p);
    if symbol == -1 {
        let pi = BigInt::from(p);
        let ideal = QuadIdeal::rational(m, &pi);
        return (Splitting::Inert, vec![PrimeIdeal { p, index: 0, e: 1, f: 2, ideal }]);
    }
    let four_p = 4 * p as i128;
    let d = disc as i128;
    let b = (0..2 * p as i128)
        .find(|b| (b - d).rem_euclid(2) == 0 && (b * b - d).rem_euclid(four_p) == 0)
        .expect("square root of D modulo 4p exists");
    let make = |bq: i128, index: usize, e: u32| {
        let ideal = super::reduce::Prim::new(BigInt::from(p), BigInt::from(bq)).to_ideal(m, disc);
        PrimeIdeal { p, index, e, f: 1, ideal }
    };
    if symbol == 0 {
        (Splitting::Ramified, vec![make(b, 0, 2)])
    } else {
        (Splitting::Split, vec![make(b, 0, 1), make(-b, 1, 1)])
    }
}

/// `v_P(I)` for an integral ideal.
pub fn ideal_valuation(ideal: &QuadIdeal, prime: &PrimeIdeal) -> u32 {
    let pbig = BigInt::from(prime.p);
    if !ideal.norm().is_multiple_of(&pbig) {
        return 0;
    }
    // I·P̄ = I·(p)/P, so dividing by p strips one factor of P
    let pbar = prime.ideal.conj();
    let mut cur = ideal.clone();
    let mut v = 0;
    while prime.ideal.divides(&cur) {
        if prime.f == 2 {
            cur = cur.div_integer(&pbig).expect("inert prime divides");
        } else {
            cur = cur.mul(&pbar).div_integer(&pbig).expect("P·P̄ = (p)");
        }
        v += 1;
    }
    v
}

/// `v_P(α)` for a nonzero element.
pub fn element_valuation(alpha: &QuadElem, prime: &PrimeIdeal) -> i64 {
    assert!(!alpha.is_zero());
    let (x, y) = alpha.omega_coords();
    let den = x.denom().lcm(y.denom());
    let scaled = alpha.scale_int(&den);
    let ideal = QuadIdeal::principal(&scaled).expect("integral after clearing denominators");
    ideal_valuation(&ideal, prime) as i64 - (prime.e as i64) * valuation(&den, prime.p) as i64
}

/// Rational primes dividing the numerator or denominator of `N(α)`.
pub fn norm_primes(alpha: &QuadElem) -> Vec<u64> {
    let n = alpha.norm();
    let mut ps: Vec<u64> = Vec::new();
    for part in [n.numer(), n.denom()] {
        let v = part.abs().to_u64().expect("norm fits in u64 for factorization");
        ps.extend(factor(v).into_iter().map(|(p, _)| p));
    }
    // denominators of α itself may cancel in the norm
    let (x, y) = alpha.omega_coords();
    for part in [x.denom(), y.denom()] {
        let v = part.to_u64().expect("denominator fits in u64");
        ps.extend(factor(v).into_iter().map(|(p, _)| p));
    }
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Prime factorization `I = ∏ P^e`.
pub fn factor_ideal(ideal: &QuadIdeal, disc: i64) -> Vec<(PrimeIdeal, u32)> {
    let n = ideal.norm().to_u64().expect("norm fits in u64 for factorization");
    let mut out = Vec::new();
    for (p, _) in factor(n) {
        for prime in primes_above(ideal.m(), disc, p).1 {
            let v = ideal_valuation(ideal, &prime);
            if v > 0 {
                out.push((prime, v));
            }
        }
    }
    out
}
