//! Σ-class groups and Σ-unit groups of quadratic fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::classgroup::{product_with_multiplier, ClassGroup};
use super::elem::QuadElem;
use super::ideal::{element_valuation, PrimeIdeal, QuadIdeal};
use super::reduce::principal_generator;
use super::QuadraticField;
use crate::abelian::group::preimage;
use crate::abelian::matrix::{lattice_basis, solve_integer};
use crate::abelian::{FgAbelianGroup, GroupHom, IntMatrix};
use crate::error::{Error, Result};

/// A set of places of `F`: all archimedean places plus finitely many prime
/// ideals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Sigma {
    primes: Vec<PrimeIdeal>,
}

impl Sigma {
    pub fn infinite() -> Self {
        Sigma { primes: Vec::new() }
    }

    pub fn new(mut primes: Vec<PrimeIdeal>) -> Self {
        primes.sort_by_key(|x| (x.p, x.index));
        primes.dedup();
        Sigma { primes }
    }

    /// All primes of `F` above the given rational primes.
    pub fn above(field: &QuadraticField, ps: &[u64]) -> Self {
        Self::new(ps.iter().flat_map(|&p| field.primes_above(p)).collect())
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn rational_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.primes.iter().map(|p| p.p).collect();
        ps.dedup();
        ps
    }

    pub fn contains(&self, p: &PrimeIdeal) -> bool {
        self.primes.contains(p)
    }

    pub fn with(&self, p: PrimeIdeal) -> Sigma {
        let mut v = self.primes.clone();
        v.push(p);
        Sigma::new(v)
    }

    /// `|Σ|` counting archimedean places.
    pub fn size(&self, field: &QuadraticField) -> usize {
        self.primes.len() + if field.is_real() { 2 } else { 1 }
    }

    pub fn labels(&self) -> Vec<String> {
        std::iter::once("inf".to_string()).chain(self.primes.iter().map(PrimeIdeal::label)).collect()
    }
}

/// `Cl_Σ(F) = Cl(F) / ⟨[P] : P ∈ Σ⟩`.
#[derive(Clone, Debug)]
pub struct SigmaClassGroup {
    pub class_group: ClassGroup,
    pub group: FgAbelianGroup,
    /// `Cl(F) → Cl_Σ(F)`.
    pub projection: GroupHom,
    pub generators: Vec<QuadIdeal>,
}

impl SigmaClassGroup {
    pub fn compute(field: &QuadraticField, sigma: &Sigma) -> Self {
        Self::from_class_group(field.class_group(), sigma)
    }

    pub fn from_class_group(class_group: ClassGroup, sigma: &Sigma) -> Self {
        let cl = class_group.group().clone();
        let cols: Vec<Vec<BigInt>> = sigma.primes().iter().map(|p| class_group.dlog(&p.ideal)).collect();
        let sub = IntMatrix::from_columns(cl.ngens(), &cols);
        let hom = GroupHom::new(
            FgAbelianGroup::free(sub.cols()),
            cl.clone(),
            sub,
        )
        .expect("free source");
        let (group, projection) = hom.cokernel();
        let sq = hom.cokernel_subquotient();
        let generators = (0..group.ngens()).map(|j| class_group.class_ideal(&sq.rep(j))).collect();
        SigmaClassGroup { class_group, group, projection, generators }
    }

    pub fn dlog(&self, ideal: &QuadIdeal) -> Vec<BigInt> {
        self.projection.apply(&self.class_group.dlog(ideal))
    }

    /// Every class of `Cl_Σ(F)` with a representative ideal.
    pub fn classes(&self) -> Vec<(Vec<BigInt>, QuadIdeal)> {
        let elems = self.group.elements().expect("finite");
        elems
            .map(|e| {
                let lift = self.lift(&e);
                (e, self.class_group.class_ideal(&lift))
            })
            .collect()
    }

    /// A class-group element mapping to `e`.
    fn lift(&self, e: &[BigInt]) -> Vec<BigInt> {
        let cl = self.class_group.group();
        let mut acc = vec![BigInt::zero(); cl.ngens()];
        for (j, ej) in e.iter().enumerate() {
            let rep = self.class_group.dlog(&self.generators[j]);
            for (a, r) in acc.iter_mut().zip(rep) {
                *a += ej * r;
            }
        }
        cl.normalized(&acc)
    }
}

/// `O*_{F,Σ}` with its torsion, free generators and valuation data.
#[derive(Clone, Debug, Serialize)]
pub struct SUnitLattice {
    pub m: i64,
    pub torsion_generator: QuadElem,
    pub torsion_order: u32,
    /// The fundamental unit (real fields) followed by one generator per
    /// basis vector of the Σ-valuation lattice.
    pub free_generators: Vec<QuadElem>,
    pub primes: Vec<PrimeIdeal>,
    /// Rows: finite Σ-primes; columns: free generators.
    pub valuation_matrix: IntMatrix,
    /// Rows: archimedean embeddings; columns: free generators.
    pub log_matrix: Vec<Vec<f64>>,
    #[serde(skip)]
    units: usize,
}

impl SUnitLattice {
    pub fn compute(field: &QuadraticField, sigma: &Sigma) -> Result<Self> {
        Self::with_class_group(field, &field.class_group(), sigma)
    }

    pub fn with_class_group(field: &QuadraticField, cl: &ClassGroup, sigma: &Sigma) -> Result<Self> {
        let m = field.m();
        let (zeta, w) = field.roots_of_unity();
        let mut gens = Vec::new();
        if field.is_real() {
            gens.push(field.fundamental_unit()?);
        }
        let units = gens.len();
        let primes = sigma.primes().to_vec();
        let s = primes.len();
        // valuation lattice {v : ∏ P^v principal}
        let cols: Vec<Vec<BigInt>> = primes.iter().map(|p| cl.dlog(&p.ideal)).collect();
        let dl = IntMatrix::from_columns(cl.group().ngens(), &cols);
        let lattice = preimage(&FgAbelianGroup::free(s), &dl, cl.group(), &IntMatrix::zeros(cl.group().ngens(), 0));
        let basis = if s == 0 { IntMatrix::zeros(0, 0) } else { lattice_basis(&lattice) };
        if basis.cols() != s {
            return Err(Error::inconsistency("valuation lattice is not of full rank"));
        }
        let mut valuation_matrix = IntMatrix::zeros(s, units + s);
        for j in 0..s {
            let v = basis.col(j);
            let factors: Vec<(QuadIdeal, BigInt)> =
                primes.iter().map(|p| p.ideal.clone()).zip(v.iter().cloned()).collect();
            let (r, mu) = product_with_multiplier(m, field.disc(), &factors);
            let gamma = principal_generator(&r.to_ideal(m, field.disc()), field.disc())
                .ok_or_else(|| Error::inconsistency("relation ideal is not principal"))?;
            let alpha = field.normalize_generator(&gamma.div(&mu).expect("nonzero"));
            for (i, p) in primes.iter().enumerate() {
                let val = element_valuation(&alpha, p);
                if BigInt::from(val) != v[i] {
                    return Err(Error::inconsistency(format!("generator {alpha} has valuation {val} at {}", p.label())));
                }
                valuation_matrix[(i, units + j)] = v[i].clone();
            }
            gens.push(alpha);
        }
        let log_matrix = log_rows(field, &gens);
        let lat = SUnitLattice {
            m,
            torsion_generator: zeta,
            torsion_order: w,
            free_generators: gens,
            primes,
            valuation_matrix,
            log_matrix,
            units,
        };
        for g in &lat.free_generators {
            if !lat.is_s_unit(g) {
                return Err(Error::inconsistency(format!("{g} is not a Σ-unit")));
            }
        }
        Ok(lat)
    }

    pub fn rank(&self) -> usize {
        self.free_generators.len()
    }

    /// `Z/w ⊕ Z^rank`, torsion coordinate first.
    pub fn group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.rank(), vec![BigInt::from(self.torsion_order)]).expect("w ≥ 2")
    }

    /// All generators in group order: torsion, then free.
    pub fn generators(&self) -> Vec<QuadElem> {
        std::iter::once(self.torsion_generator.clone()).chain(self.free_generators.iter().cloned()).collect()
    }

    /// `∏ g_i^{c_i}`.
    pub fn element(&self, coords: &[BigInt]) -> QuadElem {
        self.generators()
            .iter()
            .zip(coords)
            .fold(QuadElem::one(self.m), |acc, (g, c)| acc.mul(&g.pow_big(c)))
    }

    /// Whether `x` is a unit away from the finite Σ-primes.
    pub fn is_s_unit(&self, x: &QuadElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let ps: Vec<u64> = {
            let mut v: Vec<u64> = self.primes.iter().map(|p| p.p).collect();
            v.dedup();
            v
        };
        let n = x.norm();
        for part in [n.numer(), n.denom()] {
            let mut r = part.abs();
            for &p in &ps {
                let pb = BigInt::from(p);
                while r.is_multiple_of(&pb) {
                    r /= &pb;
                }
            }
            if !r.is_one() {
                return false;
            }
        }
        // no valuation at primes outside Σ lying over Σ's rational primes
        let disc = super::discriminant_of(self.m);
        for &p in &ps {
            for q in super::ideal::primes_above(self.m, disc, p).1 {
                if !self.primes.contains(&q) && element_valuation(x, &q) != 0 {
                    return false;
                }
            }
        }
        // denominators must be Σ-supported too
        let (a, b) = x.omega_coords();
        let den = a.denom().lcm(b.denom());
        let mut r = den;
        for &p in &ps {
            let pb = BigInt::from(p);
            while r.is_multiple_of(&pb) {
                r /= &pb;
            }
        }
        r.is_one()
    }

    pub fn valuations(&self, x: &QuadElem) -> Vec<BigInt> {
        self.primes.iter().map(|p| BigInt::from(element_valuation(x, p))).collect()
    }

    /// Coordinates of a Σ-unit in [`SUnitLattice::group`] order.
    pub fn dlog(&self, x: &QuadElem) -> Result<Vec<BigInt>> {
        if !self.is_s_unit(x) {
            return Err(Error::domain(format!("{x} is not a Σ-unit")));
        }
        let s = self.primes.len();
        let mut coords = vec![BigInt::zero(); 1 + self.rank()];
        let mut u = x.clone();
        if s > 0 {
            let v = self.valuations(x);
            let vs = self.valuation_matrix.select_cols(&(self.units..self.units + s).collect::<Vec<_>>());
            let y = solve_integer(&vs, &v).ok_or_else(|| Error::inconsistency("valuations outside the lattice"))?;
            for (j, yj) in y.iter().enumerate() {
                coords[1 + self.units + j] = yj.clone();
                u = u.mul(&self.free_generators[self.units + j].pow_big(&-yj));
            }
        }
        if self.units == 1 {
            let eps = &self.free_generators[0];
            let k0 = (u.ln_abs(false) / eps.ln_abs(false)).round() as i64;
            let mut hit = None;
            for k in [k0, k0 - 1, k0 + 1] {
                let r = u.mul(&eps.pow(-k));
                if r.is_one() || r.neg().is_one() {
                    hit = Some((k, r));
                    break;
                }
            }
            let (k, r) = hit.ok_or_else(|| Error::Precision("unit exponent rounding failed".into()))?;
            coords[1] = BigInt::from(k);
            u = r;
        }
        let mut t = None;
        let mut z = QuadElem::one(self.m);
        for i in 0..self.torsion_order {
            if z == u {
                t = Some(i);
                break;
            }
            z = z.mul(&self.torsion_generator);
        }
        coords[0] = BigInt::from(t.ok_or_else(|| Error::inconsistency(format!("{u} is not a root of unity")))?);
        debug_assert_eq!(&self.element(&coords), x);
        Ok(coords)
    }
}

/// `(γ, v)` with `(γ) = I·∏ P_j^{v_j}` over the given primes, or `None`
/// when the class of `I` lies outside the subgroup they generate.
pub fn sigma_generator(
    field: &QuadraticField,
    cl: &ClassGroup,
    primes: &[PrimeIdeal],
    ideal: &QuadIdeal,
) -> Option<(QuadElem, Vec<BigInt>)> {
    let g = cl.group();
    let target: Vec<BigInt> = cl.dlog(ideal).iter().map(|x| -x).collect();
    let mut cols: Vec<Vec<BigInt>> = primes.iter().map(|p| cl.dlog(&p.ideal)).collect();
    let rel = g.relation_matrix();
    cols.extend((0..rel.cols()).map(|j| rel.col(j)));
    let v: Vec<BigInt> = if cols.is_empty() {
        if target.iter().all(Zero::is_zero) {
            Vec::new()
        } else {
            return None;
        }
    } else {
        let sol = solve_integer(&IntMatrix::from_columns(g.ngens(), &cols), &target)?;
        sol[..primes.len()].to_vec()
    };
    let mut factors = vec![(ideal.clone(), BigInt::one())];
    factors.extend(primes.iter().map(|p| p.ideal.clone()).zip(v.iter().cloned()));
    let (r, mu) = product_with_multiplier(field.m(), field.disc(), &factors);
    let gamma = principal_generator(&r.to_ideal(field.m(), field.disc()), field.disc())?;
    Some((gamma.div(&mu).expect("nonzero multiplier"), v))
}

fn log_rows(field: &QuadraticField, gens: &[QuadElem]) -> Vec<Vec<f64>> {
    let embeddings: &[bool] = if field.is_real() { &[false, true] } else { &[false] };
    embeddings.iter().map(|&c| gens.iter().map(|g| g.ln_abs(c)).collect()).collect()
}

/// `x^e` for rational `x`, used for norms of Σ-units.
pub fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs().to_usize().expect("small exponent"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_class_group_examples() {
        let f = QuadraticField::new(-5).unwrap();
        let c = SigmaClassGroup::compute(&f, &Sigma::infinite());
        assert_eq!(c.group, FgAbelianGroup::cyclic(2));
        let c2 = SigmaClassGroup::compute(&f, &Sigma::above(&f, &[2]));
        assert!(c2.group.is_trivial());
        let g = QuadraticField::new(-1).unwrap();
        assert!(SigmaClassGroup::compute(&g, &Sigma::above(&g, &[2, 5])).group.is_trivial());
        assert_eq!(c.classes().len(), 2);
    }

    #[test]
    fn s_unit_examples() {
        let f = QuadraticField::new(-5).unwrap();
        let l = SUnitLattice::compute(&f, &Sigma::infinite()).unwrap();
        assert_eq!(l.torsion_order, 2);
        assert_eq!(l.rank(), 0);

        let f = QuadraticField::new(5).unwrap();
        let l = SUnitLattice::compute(&f, &Sigma::infinite()).unwrap();
        assert_eq!(l.free_generators, vec![f.fundamental_unit().unwrap()]);

        let g = QuadraticField::new(-1).unwrap();
        let l = SUnitLattice::compute(&g, &Sigma::above(&g, &[2])).unwrap();
        assert_eq!(l.torsion_order, 4);
        assert_eq!(l.free_generators, vec![QuadElem::from_i64s(-1, 1, 1)]);
        assert_eq!(l.valuation_matrix, IntMatrix::from_rows(&[vec![1]]));
    }

    #[test]
    fn s_unit_rank_and_dlog() {
        let f = QuadraticField::new(-5).unwrap();
        let sigma = Sigma::above(&f, &[2, 3]);
        let l = SUnitLattice::compute(&f, &sigma).unwrap();
        assert_eq!(l.rank(), sigma.size(&f) - 1);
        // 6 = 2·3 is a Σ-unit
        let six = QuadElem::from_int(-5, 6);
        let c = l.dlog(&six).unwrap();
        assert_eq!(l.element(&c), six);
        assert!(l.dlog(&QuadElem::from_int(-5, 7)).is_err());

        let r = QuadraticField::new(10).unwrap();
        let sigma = Sigma::above(&r, &[2, 3]);
        let l = SUnitLattice::compute(&r, &sigma).unwrap();
        assert_eq!(l.rank(), sigma.size(&r) - 1);
        let x = QuadElem::from_i64s(10, 4, 1).mul(&QuadElem::from_rational(10, crate::arith::rat_frac(1, 2)));
        let c = l.dlog(&x).unwrap();
        assert_eq!(l.element(&c), x);
    }

    #[test]
    fn adding_primes_shrinks_class_group() {
        let f = QuadraticField::new(-14).unwrap();
        let base = SigmaClassGroup::compute(&f, &Sigma::infinite());
        let more = SigmaClassGroup::compute(&f, &Sigma::above(&f, &[3]));
        assert_eq!(base.group.order_u64().unwrap() % more.group.order_u64().unwrap(), 0);
        assert!(more.group.order_u64().unwrap() < base.group.order_u64().unwrap());
    }
}
