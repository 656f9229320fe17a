//! Reduction of primitive ideals `[a, (−b + √D)/2]`, i.e. of binary
//! quadratic forms `(a, b, c)` with `b² − 4ac = D`, with exact tracking of
//! the multiplier relating an ideal to its reduced representative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::elem::QuadElem;
use super::ideal::QuadIdeal;

/// Primitive ideal `[a, (−b + √D)/2]` with `a > 0` and `b² ≡ D (mod 4a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prim {
    pub a: BigInt,
    pub b: BigInt,
}

impl Prim {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        Prim { a, b }
    }

    pub fn c(&self, disc: i64) -> BigInt {
        (&self.b * &self.b - BigInt::from(disc)) / (BigInt::from(4) * &self.a)
    }

    pub fn to_ideal(&self, m: i64, disc: i64) -> QuadIdeal {
        let delta = BigInt::from(disc.rem_euclid(2));
        let beta0: BigInt = (-&self.b - delta) / 2;
        QuadIdeal::from_hnf(m, self.a.clone(), beta0.mod_floor(&self.a), BigInt::one())
            .expect("primitive ideal from a form")
    }

    /// Splits `I = content · J` with `J` primitive.
    pub fn from_ideal(ideal: &QuadIdeal, disc: i64) -> (BigInt, Prim) {
        let c = ideal.content();
        let a = ideal.a() / &c;
        let beta0 = ideal.b() / &c;
        let b = if disc.rem_euclid(4) == 0 { -BigInt::from(2) * beta0 } else { -BigInt::from(2) * beta0 - 1 };
        (c, Prim { a, b })
    }
}

/// `√D = s·√m`.
fn sqrt_d_scale(disc: i64) -> i64 {
    if disc.rem_euclid(4) == 0 {
        2
    } else {
        1
    }
}

/// One reduction step: `J' = λ J` with `λ = (−b − √D)/(2a)`, returning `J'`
/// before normalization of `b'`.
fn rho(p: &Prim, m: i64, disc: i64) -> (Prim, QuadElem) {
    let c = p.c(disc);
    let two_a = BigInt::from(2) * &p.a;
    let lam = QuadElem::new(
        m,
        BigRational::new(-&p.b, two_a.clone()),
        BigRational::new(BigInt::from(-sqrt_d_scale(disc)), two_a),
    );
    (Prim { a: c.abs(), b: -&p.b }, lam)
}

fn normalize_imaginary(p: &mut Prim) {
    let two_a = BigInt::from(2) * &p.a;
    let mut r = p.b.mod_floor(&two_a);
    if r > p.a {
        r -= &two_a;
    }
    p.b = r;
}

fn normalize_real(p: &mut Prim, disc: i64) {
    let d = BigInt::from(disc);
    let two_a = BigInt::from(2) * &p.a;
    if &p.a * &p.a > d {
        normalize_imaginary(p);
    } else {
        // largest b' ≡ b (mod 2a) with b' < √D
        let s = d.sqrt();
        let r = (&s - &p.b).mod_floor(&two_a);
        p.b = s - r;
    }
}

pub fn is_reduced_real(p: &Prim, disc: i64) -> bool {
    let d = BigInt::from(disc);
    let two_a = BigInt::from(2) * &p.a;
    if !p.b.is_positive() || &p.b * &p.b >= d {
        return false;
    }
    let lo = &two_a + &p.b;
    if !(lo.is_positive() && &lo * &lo > d) {
        return false;
    }
    let hi = &two_a - &p.b;
    hi.is_negative() || &hi * &hi < d
}

/// `(J_red, λ)` with `λ J = J_red` reduced.
pub fn reduce(p: &Prim, m: i64, disc: i64) -> (Prim, QuadElem) {
    let mut cur = p.clone();
    let mut lam = QuadElem::one(m);
    if disc < 0 {
        loop {
            normalize_imaginary(&mut cur);
            let c = cur.c(disc);
            if cur.a > c || (cur.a == c && cur.b.is_negative()) {
                let (next, l) = rho(&cur, m, disc);
                cur = next;
                lam = lam.mul(&l);
            } else {
                return (cur, lam);
            }
        }
    }
    normalize_real(&mut cur, disc);
    while !is_reduced_real(&cur, disc) {
        let (mut next, l) = rho(&cur, m, disc);
        normalize_real(&mut next, disc);
        cur = next;
        lam = lam.mul(&l);
    }
    (cur, lam)
}

/// Successor of a reduced ideal in its cycle, for real fields.
pub fn cycle_step(p: &Prim, m: i64, disc: i64) -> (Prim, QuadElem) {
    let (mut next, l) = rho(p, m, disc);
    normalize_real(&mut next, disc);
    (next, l)
}

/// The cycle of reduced ideals through `start` (real fields), with the
/// multiplier from `start` to each member.
pub fn cycle(start: &Prim, m: i64, disc: i64) -> Vec<(Prim, QuadElem)> {
    let mut out = vec![(start.clone(), QuadElem::one(m))];
    let mut cur = start.clone();
    let mut lam = QuadElem::one(m);
    loop {
        let (next, l) = cycle_step(&cur, m, disc);
        lam = lam.mul(&l);
        if next == *start {
            return out;
        }
        out.push((next.clone(), lam.clone()));
        cur = next;
    }
}

/// Cycle members without multipliers, for class identification.
pub fn cycle_forms(start: &Prim, m: i64, disc: i64) -> Vec<Prim> {
    let mut out = vec![start.clone()];
    let mut cur = start.clone();
    loop {
        let (mut next, _) = rho(&cur, m, disc);
        normalize_real(&mut next, disc);
        if next == *start {
            return out;
        }
        out.push(next.clone());
        cur = next;
    }
}

/// Canonical key of the class of a reduced ideal.
pub fn class_key(reduced: &Prim, m: i64, disc: i64) -> Prim {
    if disc < 0 {
        reduced.clone()
    } else {
        cycle_forms(reduced, m, disc).into_iter().min().expect("nonempty cycle")
    }
}

/// The reduced principal ideal `O_F` as a form.
pub fn unit_form(m: i64, disc: i64) -> Prim {
    let b = BigInt::from(disc.rem_euclid(2));
    let (r, _) = reduce(&Prim::new(BigInt::one(), b), m, disc);
    r
}

/// `(J_red, μ)` with `μ I = J_red` for an arbitrary integral ideal.
pub fn reduce_ideal(ideal: &QuadIdeal, disc: i64) -> (Prim, QuadElem) {
    let (content, p) = Prim::from_ideal(ideal, disc);
    let (r, lam) = reduce(&p, ideal.m(), disc);
    (r, lam.scale(&BigRational::new(BigInt::one(), content)))
}

/// A generator of `I` when it is principal; `None` is a certified negative
/// since reduced ideals in the principal class are exactly those with
/// `a = 1` on the principal cycle.
pub fn principal_generator(ideal: &QuadIdeal, disc: i64) -> Option<QuadElem> {
    let m = ideal.m();
    let (r, mu) = reduce_ideal(ideal, disc);
    let total = if disc < 0 {
        if !r.a.is_one() {
            return None;
        }
        mu
    } else {
        let (_, lam) = cycle(&r, m, disc).into_iter().find(|(p, _)| p.a.is_one())?;
        mu.mul(&lam)
    };
    // total·I = O_F, so I = (total⁻¹)
    let g = total.inv().expect("nonzero multiplier");
    debug_assert!(ideal.is_generated_by(&g));
    Some(g)
}

/// Reduced forms `(a, b, c)` of negative discriminant `D`, counted by brute
/// force over `|b| ≤ a ≤ c`.
pub fn count_reduced_forms(disc: i64) -> u64 {
    assert!(disc < 0);
    let mut count = 0;
    let mut a: i64 = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd3(a, b, c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}
