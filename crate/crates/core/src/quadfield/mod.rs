//! Quadratic fields `F = Q(√m)`: integral structure, ideals, class groups,
//! fundamental units, Σ-class groups and S-unit groups.

pub mod classgroup;
pub mod elem;
pub mod ideal;
pub mod reduce;
pub mod sunits;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

pub use classgroup::ClassGroup;
pub use elem::QuadElem;
pub use ideal::{PrimeIdeal, QuadIdeal, Splitting};
pub use sunits::{sigma_generator, Sigma, SigmaClassGroup, SUnitLattice};

use crate::arith::is_squarefree;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ABS_DISC: u64 = 1_000_000;
pub const DEFAULT_SEARCH_BOUND: u64 = 1 << 20;

/// Hard caps shared by the field layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest admissible `|D|` for a quadratic field.
    pub max_abs_disc: u64,
    /// Largest number of candidates any exhaustive search may test.
    pub search: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_abs_disc: DEFAULT_MAX_ABS_DISC, search: DEFAULT_SEARCH_BOUND }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticFieldData {
    pub m: i64,
    pub discriminant: i64,
    pub integral_basis: [QuadElem; 2],
    /// `(real embeddings, complex pairs)`.
    pub signature: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    m: i64,
    disc: i64,
}

pub fn discriminant_of(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

impl QuadraticField {
    pub fn new(m: i64) -> Result<Self> {
        Self::with_bounds(m, &Bounds::default())
    }

    pub fn with_bounds(m: i64, bounds: &Bounds) -> Result<Self> {
        if m == 0 || m == 1 || !is_squarefree(m) {
            return Err(Error::domain(format!("m = {m} is not a squarefree integer other than 0, 1")));
        }
        let disc = discriminant_of(m);
        if disc.unsigned_abs() > bounds.max_abs_disc {
            return Err(Error::BoundExceeded { what: format!("|D| = {}", disc.unsigned_abs()), bound: bounds.max_abs_disc });
        }
        Ok(QuadraticField { m, disc })
    }

    /// Field with fundamental discriminant `disc`.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        let m = if disc.rem_euclid(4) == 0 { disc / 4 } else { disc };
        let f = Self::new(m)?;
        if f.disc != disc {
            return Err(Error::domain(format!("{disc} is not a fundamental discriminant")));
        }
        Ok(f)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.m > 0
    }

    pub fn omega(&self) -> QuadElem {
        QuadElem::omega(self.m)
    }

    pub fn data(&self) -> QuadraticFieldData {
        QuadraticFieldData {
            m: self.m,
            discriminant: self.disc,
            integral_basis: [QuadElem::one(self.m), self.omega()],
            signature: if self.is_real() { (2, 0) } else { (0, 1) },
        }
    }

    pub fn elem(&self, a: i64, b: i64) -> QuadElem {
        QuadElem::from_i64s(self.m, a, b)
    }

    pub fn primes_above(&self, p: u64) -> Vec<PrimeIdeal> {
        ideal::primes_above(self.m, self.disc, p).1
    }

    pub fn splitting(&self, p: u64) -> (Splitting, Vec<PrimeIdeal>) {
        ideal::primes_above(self.m, self.disc, p)
    }

    pub fn ideal(&self, gens: &[QuadElem]) -> Result<QuadIdeal> {
        QuadIdeal::from_generators(self.m, gens)
    }

    pub fn factor(&self, i: &QuadIdeal) -> Vec<(PrimeIdeal, u32)> {
        ideal::factor_ideal(i, self.disc)
    }

    /// Generator of the roots of unity and their number.
    pub fn roots_of_unity(&self) -> (QuadElem, u32) {
        match self.disc {
            -4 => (QuadElem::sqrt_m(-1), 4),
            -3 => (QuadElem::omega(-3), 6),
            _ => (QuadElem::from_int(self.m, -1), 2),
        }
    }

    /// The fundamental unit `ε > 1` (embedding `√m > 0`), from the product of
    /// reduction multipliers around the cycle of the principal ideal.
    pub fn fundamental_unit(&self) -> Result<QuadElem> {
        if !self.is_real() {
            return Err(Error::domain("fundamental unit needs a real quadratic field"));
        }
        let start = reduce::unit_form(self.m, self.disc);
        let mut cur = start.clone();
        let mut lam = QuadElem::one(self.m);
        loop {
            let (next, l) = reduce::cycle_step(&cur, self.m, self.disc);
            lam = lam.mul(&l);
            cur = next;
            if cur == start {
                break;
            }
        }
        let mut eps = lam;
        if eps.ln_abs(false) < 0.0 {
            eps = eps.inv().expect("unit");
        }
        if eps.real_sign(false) < 0 {
            eps = eps.neg();
        }
        let n = eps.norm();
        if !eps.is_integral() || !(n.is_one() || (-n).is_one()) || eps.is_one() {
            return Err(Error::inconsistency(format!("cycle product {eps} is not a nontrivial unit")));
        }
        Ok(eps)
    }

    pub fn class_group(&self) -> ClassGroup {
        ClassGroup::compute(self)
    }

    /// A generator of `a` when principal; `None` is a certified negative.
    pub fn is_principal(&self, a: &QuadIdeal) -> Option<QuadElem> {
        reduce::principal_generator(a, self.disc).map(|g| self.normalize_generator(&g))
    }

    /// Canonical associate of a generator: times a root of unity, and for
    /// real fields times a power of `ε`, balancing the two embeddings.
    pub fn normalize_generator(&self, g: &QuadElem) -> QuadElem {
        let mut g = g.clone();
        if self.is_real() {
            if let Ok(eps) = self.fundamental_unit() {
                let le = eps.ln_abs(false);
                let k = ((g.ln_abs(false) - g.ln_abs(true)) / (2.0 * le)).round() as i64;
                if k != 0 {
                    g = g.mul(&eps.pow(-k));
                }
            }
            if g.real_sign(false) < 0 {
                g = g.neg();
            }
            return g;
        }
        let (zeta, w) = self.roots_of_unity();
        let mut best = g.clone();
        let mut cur = g;
        for _ in 1..w {
            cur = cur.mul(&zeta);
            if generator_key(&cur) > generator_key(&best) {
                best = cur.clone();
            }
        }
        best
    }

    /// Prime ideals of norm up to this bound generate the class group.
    pub(crate) fn prime_bound(&self) -> u64 {
        let d = self.disc.unsigned_abs() as f64;
        let b = if self.is_real() { d.sqrt() / 2.0 } else { (d / 3.0).sqrt() };
        b.floor() as u64
    }
}

fn generator_key(x: &QuadElem) -> (bool, bool, num_rational::BigRational, num_rational::BigRational) {
    (x.a().is_positive(), !x.b().is_negative(), x.a().clone(), x.b().clone())
}

/// Fundamental discriminants in `[lo, hi]`.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&d| is_fundamental(d)).collect()
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m) && m != 1
        }
        _ => false,
    }
}
