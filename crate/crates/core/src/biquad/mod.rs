//! Biquadratic fields `K = Q(√m₁, √m₂)`: integral structure, Galois action,
//! roots of unity, S-unit groups, ideals and relative quadratic extensions
//! `K/F` over one of the three quadratic subfields.

pub mod elem;
pub mod ideal;
pub mod relative;
pub mod units;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use elem::BiquadElem;
pub use ideal::KIdeal;

pub use relative::{RelativeExtension, SquareRootCertificate};
pub use units::KSUnits;

use crate::abelian::matrix::hnf_upper;
use crate::abelian::IntMatrix;
use crate::arith::{rat, solve_rational, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::quadfield::{Bounds, QuadElem, QuadraticField, QuadraticFieldData};

#[derive(Clone, Debug, Serialize)]
pub struct BiquadFieldData {
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
    pub subfields: [QuadraticFieldData; 3],
    pub integral_basis: Vec<BiquadElem>,
    pub discriminant: String,
    /// Automorphisms in integral-basis coordinates, identity first.
    pub galois: Vec<IntMatrix>,
}

#[derive(Clone, Debug)]
pub struct BiquadField {
    m1: i64,
    m2: i64,
    m3: i64,
    /// `√m₁√m₂ = g·√m₃`.
    g: i64,
    subfields: [QuadraticField; 3],
    basis: Vec<BiquadElem>,
    disc: BigInt,
}

impl BiquadField {
    pub fn new(m1: i64, m2: i64) -> Result<Self> {
        Self::with_bounds(m1, m2, &Bounds::default())
    }

    pub fn with_bounds(m1: i64, m2: i64, bounds: &Bounds) -> Result<Self> {
        if m1 == m2 {
            return Err(Error::domain("m1 and m2 must be distinct"));
        }
        let k1 = QuadraticField::with_bounds(m1, bounds)?;
        let k2 = QuadraticField::with_bounds(m2, bounds)?;
        let (m3, g) = squarefree_decomposition(m1 * m2);
        let k3 = QuadraticField::with_bounds(m3, bounds)?;
        let mut field = BiquadField {
            m1,
            m2,
            m3,
            g,
            subfields: [k1, k2, k3],
            basis: Vec::new(),
            disc: BigInt::zero(),
        };
        field.basis = field.compute_integral_basis();
        field.disc = field.compute_discriminant();
        let expected: BigInt = field.subfields.iter().map(|k| BigInt::from(k.disc())).product();
        if field.disc != expected {
            return Err(Error::inconsistency(format!(
                "discriminant {} of the integral basis differs from D1·D2·D3 = {expected}",
                field.disc
            )));
        }
        Ok(field)
    }

    pub fn m1(&self) -> i64 {
        self.m1
    }

    pub fn m2(&self) -> i64 {
        self.m2
    }

    pub fn m3(&self) -> i64 {
        self.m3
    }

    /// Subfield `k_i = Q(√m_i)`, `i ∈ {1, 2, 3}`.
    pub fn subfield(&self, i: usize) -> &QuadraticField {
        &self.subfields[i - 1]
    }

    pub fn subfields(&self) -> &[QuadraticField; 3] {
        &self.subfields
    }

    /// Index of the subfield `Q(√m)`, if `m` is one of `m₁, m₂, m₃`.
    pub fn subfield_index(&self, m: i64) -> Option<usize> {
        [self.m1, self.m2, self.m3].iter().position(|&x| x == m).map(|i| i + 1)
    }

    pub fn is_totally_real(&self) -> bool {
        self.m1 > 0 && self.m2 > 0
    }

    pub fn unit_rank(&self) -> usize {
        if self.is_totally_real() {
            3
        } else {
            1
        }
    }

    pub fn elem(&self, c: [i64; 4]) -> BiquadElem {
        BiquadElem::from_i64s(self.m1, self.m2, c)
    }

    pub fn one(&self) -> BiquadElem {
        BiquadElem::one(self.m1, self.m2)
    }

    pub fn from_rational(&self, q: BigRational) -> BiquadElem {
        BiquadElem::from_rational(self.m1, self.m2, q)
    }

    /// Image of `x ∈ k_i` in `K`.
    pub fn embed(&self, i: usize, x: &QuadElem) -> BiquadElem {
        assert_eq!(x.m(), self.subfield(i).m(), "element of the wrong subfield");
        let z = BigRational::zero();
        let c = match i {
            1 => [x.a().clone(), x.b().clone(), z.clone(), z],
            2 => [x.a().clone(), z.clone(), x.b().clone(), z],
            3 => [x.a().clone(), z.clone(), z, x.b() / rat(self.g)],
            _ => panic!("subfield index {i} out of range"),
        };
        BiquadElem::new(self.m1, self.m2, c)
    }

    /// `x` as an element of `k_i`, if it lies there.
    pub fn restrict(&self, i: usize, x: &BiquadElem) -> Option<QuadElem> {
        let c = x.coords();
        let m = self.subfield(i).m();
        let (keep, drop): (usize, [usize; 2]) = match i {
            1 => (1, [2, 3]),
            2 => (2, [1, 3]),
            3 => (3, [1, 2]),
            _ => return None,
        };
        if drop.iter().any(|&j| !c[j].is_zero()) {
            return None;
        }
        let b = if i == 3 { &c[keep] * rat(self.g) } else { c[keep].clone() };
        Some(QuadElem::new(m, c[0].clone(), b))
    }

    /// `N_{K/k_i}(x) = x·σ_i(x)`.
    pub fn relative_norm(&self, i: usize, x: &BiquadElem) -> QuadElem {
        let n = x.mul(&x.apply(i));
        self.restrict(i, &n).expect("relative norm lies in the subfield")
    }

    fn is_integral_frame(&self, x: &BiquadElem) -> bool {
        let t = x.add(&x.apply(1));
        let n = x.mul(&x.apply(1));
        match (self.restrict(1, &t), self.restrict(1, &n)) {
            (Some(t), Some(n)) => t.is_integral() && n.is_integral(),
            _ => false,
        }
    }

    pub fn is_integral(&self, x: &BiquadElem) -> bool {
        self.is_integral_frame(x)
    }

    /// Integral basis: the lattice spanned by products of subfield bases,
    /// saturated by every integral half-sum of basis vectors.
    fn compute_integral_basis(&self) -> Vec<BiquadElem> {
        let omegas: Vec<BiquadElem> = (1..=3).map(|i| self.embed(i, &self.subfield(i).omega())).collect();
        let mut gens = vec![self.one()];
        gens.extend(omegas.iter().cloned());
        for i in 0..3 {
            for j in i + 1..3 {
                gens.push(omegas[i].mul(&omegas[j]));
            }
        }
        let mut basis = lattice_hnf(self.m1, self.m2, &gens);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        'outer: loop {
            for mask in 1u32..16 {
                let mut x = BiquadElem::zero(self.m1, self.m2);
                for (k, b) in basis.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        x = x.add(b);
                    }
                }
                let x = x.scale(&half);
                if self.is_integral_frame(&x) {
                    let mut g = basis.clone();
                    g.push(x);
                    basis = lattice_hnf(self.m1, self.m2, &g);
                    continue 'outer;
                }
            }
            break;
        }
        basis
    }

    fn compute_discriminant(&self) -> BigInt {
        let n = self.basis.len();
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.basis[i].mul(&self.basis[j]).trace()).collect())
            .collect();
        let det = rational_det(rows);
        assert!(det.is_integer(), "trace form of an integral basis is integral");
        det.to_integer()
    }

    pub fn integral_basis(&self) -> &[BiquadElem] {
        &self.basis
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Coordinates over the integral basis, if `x` is integral.
    pub fn integral_coords(&self, x: &BiquadElem) -> Option<Vec<BigInt>> {
        let cols: Vec<Vec<BigRational>> = self.basis.iter().map(|b| b.coords().to_vec()).collect();
        let y = solve_rational(&cols, x.coords())?;
        y.iter().all(|q| q.is_integer()).then(|| y.iter().map(|q| q.to_integer()).collect())
    }

    pub fn from_integral_coords(&self, y: &[BigInt]) -> BiquadElem {
        self.basis
            .iter()
            .zip(y)
            .fold(BiquadElem::zero(self.m1, self.m2), |acc, (b, c)| {
                acc.add(&b.scale(&BigRational::from_integer(c.clone())))
            })
    }

    /// The four automorphisms in integral-basis coordinates.
    pub fn galois_matrices(&self) -> Vec<IntMatrix> {
        (0..4)
            .map(|k| {
                let cols: Vec<Vec<BigInt>> = self
                    .basis
                    .iter()
                    .map(|b| self.integral_coords(&b.apply(k)).expect("automorphisms preserve O_K"))
                    .collect();
                IntMatrix::from_columns(4, &cols)
            })
            .collect()
    }

    /// Generator of the roots of unity and their number.
    pub fn roots_of_unity(&self) -> (BiquadElem, u32) {
        let ms = [self.m1, self.m2, self.m3];
        let find = |m: i64| ms.iter().position(|&x| x == m).map(|i| i + 1);
        let i_elem = find(-1).map(|k| self.embed(k, &QuadElem::sqrt_m(-1)));
        let zeta3 = find(-3).map(|k| {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            self.embed(k, &QuadElem::new(-3, -half.clone(), half))
        });
        match (i_elem, zeta3) {
            (Some(i), Some(z3)) => (i.mul(&z3), 12),
            (Some(i), None) => match i.sqrt() {
                Some(z8) => (z8, 8),
                None => (i, 4),
            },
            (None, Some(z3)) => (z3.neg(), 6),
            (None, None) => (self.one().neg(), 2),
        }
    }

    pub fn data(&self) -> BiquadFieldData {
        BiquadFieldData {
            m1: self.m1,
            m2: self.m2,
            m3: self.m3,
            subfields: [self.subfields[0].data(), self.subfields[1].data(), self.subfields[2].data()],
            integral_basis: self.basis.clone(),
            discriminant: self.disc.to_string(),
            galois: self.galois_matrices(),
        }
    }

    /// Ramification index of the rational prime `p` in `K`.
    pub fn ramification_index(&self, p: u64) -> u32 {
        let ramified = self.subfields.iter().filter(|k| k.disc().rem_euclid(p as i64) == 0).count();
        match ramified {
            0 => 1,
            3 => 4,
            _ => 2,
        }
    }
}

/// HNF basis of the Z-span of elements with rational frame coordinates.
fn lattice_hnf(m1: i64, m2: i64, gens: &[BiquadElem]) -> Vec<BiquadElem> {
    let den = gens
        .iter()
        .flat_map(|g| g.coords().iter().map(|c| c.denom().clone()))
        .fold(BigInt::one(), |a, d| a.lcm(&d));
    let cols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.coords().iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = hnf_upper(&IntMatrix::from_columns(4, &cols)).expect("full-rank lattice");
    (0..4)
        .map(|j| {
            let c: [BigRational; 4] = std::array::from_fn(|i| BigRational::new(h[(i, j)].clone(), den.clone()));
            BiquadElem::new(m1, m2, c)
        })
        .collect()
}

fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    det
}
