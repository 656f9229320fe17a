//! `K/F` with `F` one of the three quadratic subfields, `Δ = ⟨τ⟩`, and a
//! Galois-stable Σ.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::elem::BiquadElem;
use super::ideal::KIdeal;
pub use super::units::SquareRootCertificate;
use super::units::KSUnits;
use super::BiquadField;
use crate::abelian::IntMatrix;
use crate::arith::{factor, is_prime};
use crate::cohomology::CyclicModule;
use crate::error::{Error, Result};
use crate::quadfield::{
    sigma_generator, Bounds, ClassGroup, QuadElem, QuadIdeal, QuadraticField, SUnitLattice, Sigma, SigmaClassGroup,
};

/// Quadratic subextension `K/F` together with Σ, given by the rational
/// primes below its finite places.
#[derive(Debug)]
pub struct RelativeExtension {
    k: BiquadField,
    f: usize,
    primes: Vec<u64>,
    bounds: Bounds,
    units: OnceLock<KSUnits>,
    class_groups: OnceLock<Vec<ClassGroup>>,
}

impl Clone for RelativeExtension {
    fn clone(&self) -> Self {
        RelativeExtension {
            k: self.k.clone(),
            f: self.f,
            primes: self.primes.clone(),
            bounds: self.bounds,
            units: self.units.clone(),
            class_groups: self.class_groups.clone(),
        }
    }
}

/// Serializable summary of an extension.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeExtensionData {
    pub m1: i64,
    pub m2: i64,
    pub f: i64,
    pub tau: usize,
    pub sigma_f: Vec<String>,
    /// `(p, number of primes of K above p)` for each finite place of Σ.
    pub sigma_k: Vec<(u64, u32)>,
    pub ramified: Vec<u64>,
}

/// `(α) = A·∏P^{v}` over Σ-primes, certified by `α² = square`.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipalityCertificate {
    pub ideal: KIdeal,
    pub generator: BiquadElem,
    pub square: BiquadElem,
}

impl PrincipalityCertificate {
    /// Exact squaring, plus the ideal equality `(α) = A` when Σ has no
    /// finite places.
    pub fn verify(&self, e: &RelativeExtension) -> bool {
        if self.generator.mul(&self.generator) != self.square {
            return false;
        }
        if e.primes.is_empty() {
            return KIdeal::principal(&e.k, &self.generator).is_ok_and(|p| p == self.ideal);
        }
        true
    }
}

impl RelativeExtension {
    /// `K/k_f` with Σ above `primes`; Σ must contain every prime ramified in `K/F`.
    pub fn new(k: BiquadField, f: usize, primes: &[u64]) -> Result<Self> {
        Self::with_bounds(k, f, primes, Bounds::default())
    }

    pub fn with_bounds(k: BiquadField, f: usize, primes: &[u64], bounds: Bounds) -> Result<Self> {
        if !(1..=3).contains(&f) {
            return Err(Error::domain(format!("subfield index {f} out of range")));
        }
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let e = RelativeExtension {
            k,
            f,
            primes,
            bounds,
            units: OnceLock::new(),
            class_groups: OnceLock::new(),
        };
        let missing: Vec<u64> = e.ramified_primes().into_iter().filter(|p| !e.primes.contains(p)).collect();
        if !missing.is_empty() {
            return Err(Error::domain(format!("Σ must contain the primes ramified in K/F: missing {missing:?}")));
        }
        Ok(e)
    }

    /// `F = Q(√f)`, `K = F(√adjoin)`.
    pub fn from_fields(f: i64, adjoin: i64, primes: &[u64], bounds: Bounds) -> Result<Self> {
        let k = BiquadField::with_bounds(adjoin, f, &bounds)?;
        let idx = k.subfield_index(f).ok_or_else(|| Error::domain(format!("Q(√{f}) is not a subfield")))?;
        Self::with_bounds(k, idx, primes, bounds)
    }

    /// Explicit automorphism index (0 = identity); it must fix `F` and move `K`.
    pub fn with_automorphism(k: BiquadField, f: usize, tau: usize, primes: &[u64]) -> Result<Self> {
        if tau == 0 {
            return Err(Error::domain("τ = identity does not move K"));
        }
        if tau != f {
            return Err(Error::domain(format!("σ_{tau} does not fix Q(√{})", k.subfield(f).m())));
        }
        Self::new(k, f, primes)
    }

    /// Σ given as primes of `F`; it must be the full set above its rational primes.
    pub fn from_sigma(k: BiquadField, f: usize, sigma: &Sigma) -> Result<Self> {
        let field = k.subfield(f).clone();
        let ps = sigma.rational_primes();
        for &p in &ps {
            if field.primes_above(p).iter().any(|q| !sigma.contains(q)) {
                return Err(Error::domain(format!("Σ must contain every prime of F above {p}")));
            }
        }
        Self::new(k, f, &ps)
    }

    /// Rational primes below the primes of `F` that ramify in `K`.
    pub fn ramified(k: &BiquadField, f: usize) -> Vec<u64> {
        let fd = k.subfield(f).disc();
        let mut ps: Vec<u64> =
            k.subfields().iter().flat_map(|q| factor(q.disc().unsigned_abs())).map(|(p, _)| p).collect();
        ps.sort_unstable();
        ps.dedup();
        ps.into_iter()
            .filter(|&p| {
                let ef = if fd.rem_euclid(p as i64) == 0 { 2 } else { 1 };
                k.ramification_index(p) > ef
            })
            .collect()
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        Self::ramified(&self.k, self.f)
    }

    /// Smallest admissible Σ: the ramified primes.
    pub fn minimal(k: BiquadField, f: usize) -> Result<Self> {
        let p = Self::ramified(&k, f);
        Self::new(k, f, &p)
    }

    pub fn field(&self) -> &BiquadField {
        &self.k
    }

    pub fn base(&self) -> &QuadraticField {
        self.k.subfield(self.f)
    }

    pub fn base_index(&self) -> usize {
        self.f
    }

    /// Index of `τ` among the automorphisms `σ_1, σ_2, σ_3`.
    pub fn tau(&self) -> usize {
        self.f
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn sigma_f(&self) -> Sigma {
        Sigma::above(self.base(), &self.primes)
    }

    /// Number of primes of `K` above `p`: `4/|D_p|`, read off from how many
    /// subfields `p` splits in.
    pub fn primes_of_k_above(&self, p: u64) -> u32 {
        let split = self.k.subfields().iter().filter(|q| q.primes_above(p).len() == 2).count();
        match split {
            3 => 4,
            1 => 2,
            _ => 1,
        }
    }

    pub fn data(&self) -> RelativeExtensionData {
        RelativeExtensionData {
            m1: self.k.m1(),
            m2: self.k.m2(),
            f: self.base().m(),
            tau: self.f,
            sigma_f: self.sigma_f().labels(),
            sigma_k: self.primes.iter().map(|&p| (p, self.primes_of_k_above(p))).collect(),
            ramified: self.ramified_primes(),
        }
    }

    /// `N_{K/F}(x) = x·τ(x)`.
    pub fn relative_norm(&self, x: &BiquadElem) -> QuadElem {
        self.k.relative_norm(self.f, x)
    }

    pub fn embed(&self, x: &QuadElem) -> BiquadElem {
        self.k.embed(self.f, x)
    }

    pub fn s_units(&self) -> Result<&KSUnits> {
        if let Some(u) = self.units.get() {
            return Ok(u);
        }
        let u = KSUnits::compute(&self.k, &self.primes, &self.bounds)?;
        Ok(self.units.get_or_init(|| u))
    }

    fn class_groups(&self) -> &[ClassGroup] {
        self.class_groups.get_or_init(|| self.k.subfields().iter().map(QuadraticField::class_group).collect())
    }

    pub fn sigma_class_group(&self) -> SigmaClassGroup {
        SigmaClassGroup::from_class_group(self.class_groups()[self.f - 1].clone(), &self.sigma_f())
    }

    pub fn base_s_units(&self) -> Result<SUnitLattice> {
        SUnitLattice::with_class_group(self.base(), &self.class_groups()[self.f - 1], &self.sigma_f())
    }

    /// `O*_{K,Σ}` as a Δ-module, torsion coordinate first.
    pub fn s_unit_module(&self) -> Result<CyclicModule> {
        let units = self.s_units()?;
        let cols: Vec<Vec<BigInt>> = units
            .generators()
            .iter()
            .map(|g| units.dlog(&self.k, &g.apply(self.f)))
            .collect::<Result<_>>()?;
        let group = units.group();
        let tau = IntMatrix::from_columns(group.ngens(), &cols);
        CyclicModule::new(group, tau, 2)
    }

    /// Fixed points of the module against the independently computed `O*_{F,Σ}`.
    pub fn check_fixed_points(&self, module: &CyclicModule) -> Result<()> {
        let fixed = module.fixed_points();
        let base = self.base_s_units()?.group();
        if fixed.rank() != base.rank() || fixed.torsion() != base.torsion() {
            return Err(Error::inconsistency(format!(
                "fixed points {:?} differ from O*_F,Σ {:?}",
                fixed.invariant_factors(),
                base.invariant_factors()
            )));
        }
        Ok(())
    }

    pub fn extend_ideal(&self, a: &QuadIdeal) -> KIdeal {
        KIdeal::extend(&self.k, self.f, a)
    }

    /// Decides whether `A·O_{K,Σ}` is principal.
    ///
    /// With `γ_i` a Σ-generator of `N_{K/k_i}(A)`, `A² = (γ₁γ₂γ₃/N(A))` up to
    /// Σ-primes, so `A` is Σ-principal iff `γ₁γ₂γ₃·u/N(A)` is a square for
    /// some `u` in `O*_{K,Σ}/(O*_{K,Σ})²`. Both answers are exact.
    pub fn is_principal_sigma(&self, a: &KIdeal) -> Result<Option<PrincipalityCertificate>> {
        let units = self.s_units()?;
        let mut beta = self.k.from_rational(BigRational::from_integer(a.norm()).recip());
        for i in 1..=3 {
            let field = self.k.subfield(i);
            let sigma = Sigma::above(field, &self.primes);
            let n = a.relative_norm(&self.k, i);
            match sigma_generator(field, &self.class_groups()[i - 1], sigma.primes(), &n) {
                Some((gamma, _)) => beta = beta.mul(&self.k.embed(i, &gamma)),
                None => return Ok(None),
            }
        }
        let gens = units.generators();
        if gens.len() >= 63 || (1u64 << gens.len()) > self.bounds.search {
            return Err(Error::BoundExceeded { what: "unit square classes".into(), bound: self.bounds.search });
        }
        for mask in 0u64..(1u64 << gens.len()) {
            let mut y = beta.clone();
            for (j, g) in gens.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    y = y.mul(g);
                }
            }
            if let Some(root) = y.sqrt() {
                let cert = PrincipalityCertificate { ideal: a.clone(), generator: root, square: y };
                if !cert.verify(self) {
                    return Err(Error::inconsistency(format!("certificate {} for {:?} fails", cert.generator, a)));
                }
                return Ok(Some(cert));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::group::vec_i64;

    fn flagship() -> RelativeExtension {
        RelativeExtension::from_fields(-5, -1, &[], Bounds::default()).unwrap()
    }

    #[test]
    fn flagship_module() {
        let e = flagship();
        let m = e.s_unit_module().unwrap();
        assert_eq!(m.group().invariant_factors(), vec!["4", "0"]);
        assert_eq!(m.sigma().matrix().col(0), vec_i64(&[3, 0]));
        assert_eq!(m.sigma().matrix().col(1), vec_i64(&[2, -1]));
        e.check_fixed_points(&m).unwrap();
    }

    #[test]
    fn relative_norms() {
        let e = flagship();
        let k = e.field();
        let i = k.embed(k.subfield_index(-1).unwrap(), &QuadElem::from_i64s(-1, 0, 1));
        assert!(e.relative_norm(&i).is_one());
        let phi = k.embed(
            k.subfield_index(5).unwrap(),
            &QuadElem::new(5, BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())),
        );
        assert!(e.relative_norm(&phi).neg().is_one());
        let x = QuadElem::from_i64s(-5, 3, 2);
        assert_eq!(e.relative_norm(&e.embed(&x)), x.mul(&x));
    }

    #[test]
    fn norm_matches_module_norm() {
        let e = flagship();
        let m = e.s_unit_module().unwrap();
        let units = e.s_units().unwrap();
        let n = m.norm_endomorphism();
        for g in units.generators() {
            let c = units.dlog(e.field(), &g).unwrap();
            let lhs = units.element(e.field(), &n.apply(&c));
            assert_eq!(lhs, e.embed(&e.relative_norm(&g)));
        }
    }

    #[test]
    fn automorphism_validation() {
        let k = BiquadField::new(-1, -5).unwrap();
        assert!(RelativeExtension::with_automorphism(k.clone(), 2, 0, &[]).is_err());
        assert!(RelativeExtension::with_automorphism(k.clone(), 2, 1, &[]).is_err());
        assert!(RelativeExtension::with_automorphism(k, 2, 2, &[]).is_ok());
    }

    #[test]
    fn sigma_validation() {
        // 2 ramifies in Q(i, √2)/Q(i)
        let k = BiquadField::new(-1, 2).unwrap();
        let f = k.subfield_index(-1).unwrap();
        assert!(RelativeExtension::new(k.clone(), f, &[]).is_err());
        assert_eq!(RelativeExtension::ramified(&k, f), vec![2]);
        assert!(RelativeExtension::new(k.clone(), f, &[2]).is_ok());
        let fld = k.subfield(f).clone();
        let half = Sigma::new(vec![fld.primes_above(5)[0].clone()]).with(fld.primes_above(2)[0].clone());
        assert!(RelativeExtension::from_sigma(k, f, &half).is_err());
        // Q(i, √−5)/Q(√−5) is unramified
        assert!(flagship().ramified_primes().is_empty());
    }

    #[test]
    fn flagship_capitulation() {
        let e = flagship();
        let p2 = e.base().primes_above(2)[0].ideal.clone();
        let cert = e.is_principal_sigma(&e.extend_ideal(&p2)).unwrap().expect("capitulates");
        assert!(cert.verify(&e));
        let one = e.is_principal_sigma(&e.extend_ideal(&QuadIdeal::unit(-5))).unwrap().unwrap();
        assert!(one.generator.norm() == BigRational::from_integer(1.into()));
        // every class capitulates in the Hilbert class field
        let p3 = e.base().primes_above(3)[0].ideal.clone();
        assert!(e.is_principal_sigma(&e.extend_ideal(&p3)).unwrap().is_some());
    }

    #[test]
    fn q_sqrt2_sqrt_minus3() {
        let k = BiquadField::new(2, -3).unwrap();
        let f = k.subfield_index(-6).unwrap();
        let e = RelativeExtension::new(k, f, &[]).unwrap();
        let p2 = e.base().primes_above(2)[0].ideal.clone();
        assert!(!e.base().class_group().is_principal(&p2));
        let cert = e.is_principal_sigma(&e.extend_ideal(&p2)).unwrap().expect("capitulates");
        assert!(cert.verify(&e));
        e.check_fixed_points(&e.s_unit_module().unwrap()).unwrap();
    }

    #[test]
    fn sigma_principal_with_finite_places() {
        let k = BiquadField::new(-1, -5).unwrap();
        let f = k.subfield_index(-5).unwrap();
        let e = RelativeExtension::new(k, f, &[3]).unwrap();
        let p2 = e.base().primes_above(2)[0].ideal.clone();
        assert!(e.is_principal_sigma(&e.extend_ideal(&p2)).unwrap().is_some());
        e.check_fixed_points(&e.s_unit_module().unwrap()).unwrap();
    }
}
