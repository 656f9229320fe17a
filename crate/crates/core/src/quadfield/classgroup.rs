//! Class groups of quadratic fields by closure over small prime ideals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::elem::QuadElem;
use super::ideal::QuadIdeal;
use super::reduce::{class_key, reduce_ideal, unit_form, Prim};
use super::QuadraticField;
use crate::abelian::group::Presentation;
use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::arith::primes_up_to;

/// The (wide) ideal class group with a discrete logarithm.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    m: i64,
    disc: i64,
    group: FgAbelianGroup,
    generators: Vec<QuadIdeal>,
    /// Prime ideals found by the closure, one per new class generator.
    basis: Vec<QuadIdeal>,
    /// class key → exponents over `basis`.
    table: HashMap<Prim, Vec<i64>>,
    to_normal: IntMatrix,
}

fn reduced(ideal: &QuadIdeal, disc: i64) -> Prim {
    reduce_ideal(ideal, disc).0
}

impl ClassGroup {
    pub fn compute(field: &QuadraticField) -> Self {
        let (m, disc) = (field.m(), field.disc());
        let key_of = |p: &Prim| class_key(p, m, disc);
        let unit = unit_form(m, disc);
        let mut elements: Vec<(Prim, Vec<i64>)> = vec![(unit.clone(), Vec::new())];
        let mut table: HashMap<Prim, Vec<i64>> = HashMap::new();
        table.insert(key_of(&unit), Vec::new());
        let mut basis: Vec<QuadIdeal> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();

        for p in primes_up_to(field.prime_bound()) {
            let (_, primes) = field.splitting(p);
            let prime = &primes[0];
            if prime.f == 2 {
                continue;
            }
            let g = reduced(&prime.ideal, disc);
            if table.contains_key(&key_of(&g)) {
                continue;
            }
            let g_ideal = g.to_ideal(m, disc);
            // order of [g] modulo the classes found so far
            let mut powers = vec![unit.clone(), g.clone()];
            let found = loop {
                let last = powers.last().unwrap().to_ideal(m, disc);
                let next = reduced(&last.mul(&g_ideal), disc);
                if let Some(v) = table.get(&key_of(&next)) {
                    break v.clone();
                }
                powers.push(next);
            };
            let k = powers.len() as i64;
            let n = basis.len();
            let mut rel: Vec<i64> = found.iter().map(|x| -x).collect();
            rel.resize(n, 0);
            rel.push(k);
            for r in relations.iter_mut() {
                r.push(0);
            }
            relations.push(rel);
            let mut fresh = Vec::new();
            for (j, pw) in powers.iter().enumerate().skip(1) {
                let pw_ideal = pw.to_ideal(m, disc);
                for (h, exps) in &elements {
                    let prod = reduced(&h.to_ideal(m, disc).mul(&pw_ideal), disc);
                    let mut e = exps.clone();
                    e.resize(n, 0);
                    e.push(j as i64);
                    table.insert(key_of(&prod), e.clone());
                    fresh.push((prod, e));
                }
            }
            for (_, e) in elements.iter_mut() {
                e.resize(n + 1, 0);
            }
            for v in table.values_mut() {
                v.resize(n + 1, 0);
            }
            elements.extend(fresh);
            basis.push(prime.ideal.clone());
        }

        let n = basis.len();
        let cols: Vec<Vec<BigInt>> = relations
            .iter()
            .map(|r| (0..n).map(|i| BigInt::from(*r.get(i).unwrap_or(&0))).collect())
            .collect();
        let rel = IntMatrix::from_columns(n, &cols);
        let norm = Presentation::new(n, rel).normalize();
        let mut cg = ClassGroup {
            m,
            disc,
            group: norm.group.clone(),
            generators: Vec::new(),
            basis,
            table,
            to_normal: norm.to_normal.clone(),
        };
        cg.generators = (0..norm.group.ngens())
            .map(|j| cg.product(&norm.from_normal.col(j)).to_ideal(m, disc))
            .collect();
        cg
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Ideals representing the invariant-factor generators.
    pub fn generators(&self) -> &[QuadIdeal] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.group.order_u64().expect("class groups are finite")
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Reduced representative of `∏ basis_i^{e_i}`.
    fn product(&self, exps: &[BigInt]) -> Prim {
        let ideals: Vec<(QuadIdeal, BigInt)> = self.basis.iter().cloned().zip(exps.iter().cloned()).collect();
        product_with_multiplier(self.m, self.disc, &ideals).0
    }

    /// Class of an integral ideal in invariant-factor coordinates.
    pub fn dlog(&self, ideal: &QuadIdeal) -> Vec<BigInt> {
        let key = class_key(&reduced(ideal, self.disc), self.m, self.disc);
        let exps = self.table.get(&key).expect("closure reaches every class");
        let v: Vec<BigInt> = exps.iter().map(|&x| BigInt::from(x)).collect();
        self.group.normalized(&self.to_normal.mul_vec(&v))
    }

    /// Reduced ideal in the class with the given coordinates.
    pub fn class_ideal(&self, coords: &[BigInt]) -> QuadIdeal {
        let ideals: Vec<(QuadIdeal, BigInt)> = self.generators.iter().cloned().zip(coords.iter().cloned()).collect();
        product_with_multiplier(self.m, self.disc, &ideals).0.to_ideal(self.m, self.disc)
    }

    pub fn is_principal(&self, ideal: &QuadIdeal) -> bool {
        self.dlog(ideal).iter().all(Zero::is_zero)
    }
}

/// `(J, μ)` with `μ · ∏ I_j^{e_j} = J` reduced, for integral `I_j` and
/// arbitrary integer exponents.
pub fn product_with_multiplier(m: i64, disc: i64, factors: &[(QuadIdeal, BigInt)]) -> (Prim, QuadElem) {
    let mut acc = unit_form(m, disc);
    let mut mu = QuadElem::one(m);
    for (ideal, e) in factors {
        if e.is_zero() {
            continue;
        }
        // I^{-1} = Ī / N(I)
        let base = if e.is_negative() {
            let n = ideal.norm();
            mu = mu.scale_int(&num_traits::pow(n, e.abs().to_usize().expect("small exponent")));
            ideal.conj()
        } else {
            ideal.clone()
        };
        let (p, lam) = pow_with_multiplier(&base, &e.abs(), disc);
        let prod = acc.to_ideal(m, disc).mul(&p.to_ideal(m, disc));
        let (r, l2) = reduce_ideal(&prod, disc);
        mu = mu.mul(&lam).mul(&l2);
        acc = r;
    }
    let (r, l) = reduce_ideal(&acc.to_ideal(m, disc), disc);
    (r, mu.mul(&l))
}

/// `(J, μ)` with `μ I^e = J` reduced, by square and multiply.
pub fn pow_with_multiplier(ideal: &QuadIdeal, e: &BigInt, disc: i64) -> (Prim, QuadElem) {
    let m = ideal.m();
    let (mut base, mut base_mu) = reduce_ideal(ideal, disc);
    let mut acc = unit_form(m, disc);
    let mut mu = QuadElem::one(m);
    let mut e = e.clone();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            let (r, l) = reduce_ideal(&acc.to_ideal(m, disc).mul(&base.to_ideal(m, disc)), disc);
            acc = r;
            mu = mu.mul(&base_mu).mul(&l);
        }
        e = e.div_floor(&two);
        if !e.is_zero() {
            let b = base.to_ideal(m, disc);
            let (r, l) = reduce_ideal(&b.mul(&b), disc);
            base = r;
            base_mu = base_mu.mul(&base_mu).mul(&l);
        }
    }
    (acc, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::reduce::count_reduced_forms;
    use crate::quadfield::{fundamental_discriminants, QuadraticField};

    fn cl(d: i64) -> ClassGroup {
        QuadraticField::from_discriminant(d).unwrap().class_group()
    }

    #[test]
    fn examples() {
        assert_eq!(cl(-20).group(), &FgAbelianGroup::cyclic(2));
        assert!(cl(-4).group().is_trivial());
        assert_eq!(cl(-23).group(), &FgAbelianGroup::cyclic(3));
        assert_eq!(cl(-84).group(), &FgAbelianGroup::from_cyclic_orders(&[2, 2]));
        // wide class numbers of real fields
        assert_eq!(cl(40).order(), 2);
        assert_eq!(cl(12).order(), 1);
        assert_eq!(cl(60).order(), 2);
        assert_eq!(cl(229).order(), 3);
        assert_eq!(cl(136).order(), 2);
    }

    #[test]
    fn matches_form_count() {
        for d in fundamental_discriminants(-400, -3) {
            assert_eq!(cl(d).order(), count_reduced_forms(d), "D = {d}");
        }
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let c = cl(-84);
        let f = QuadraticField::from_discriminant(-84).unwrap();
        let p = &f.primes_above(5)[0].ideal;
        let q = &f.primes_above(2)[0].ideal;
        let sum: Vec<BigInt> = c.dlog(p).iter().zip(c.dlog(q)).map(|(a, b)| a + b).collect();
        assert_eq!(c.dlog(&p.mul(q)), c.group().normalized(&sum));
        for (j, g) in c.generators().iter().enumerate() {
            let mut e = vec![BigInt::zero(); c.group().ngens()];
            e[j] = BigInt::from(1);
            assert_eq!(c.dlog(g), e);
        }
    }

    #[test]
    fn multiplier_bookkeeping() {
        let f = QuadraticField::new(-14).unwrap();
        let p = &f.primes_above(3)[0].ideal;
        let (r, mu) = pow_with_multiplier(p, &BigInt::from(5), f.disc());
        assert_eq!(p.pow(5).scale(&mu).unwrap(), r.to_ideal(-14, f.disc()));
        let (r, mu) = product_with_multiplier(-14, f.disc(), &[(p.clone(), BigInt::from(-3))]);
        // μ·P^{-3} = J  ⇔  μ·P̄³ = J·N(P)³
        let lhs = p.conj().pow(3).scale(&mu).unwrap();
        assert_eq!(lhs, r.to_ideal(-14, f.disc()).mul(&QuadIdeal::rational(-14, &BigInt::from(27))));
    }
}
