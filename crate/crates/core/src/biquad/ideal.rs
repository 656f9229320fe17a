//! Ideals of `O_K` as 4 × 4 Hermite bases over the integral basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::elem::BiquadElem;
use super::BiquadField;
use crate::abelian::matrix::{hnf_upper, kernel_basis};
use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::quadfield::{QuadIdeal, QuadElem};

/// Nonzero integral ideal; columns of `hnf` are a Z-basis in integral-basis
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KIdeal {
    hnf: IntMatrix,
}

impl KIdeal {
    /// Z-span of integral elements that is already closed under `O_K`.
    fn from_z_span(k: &BiquadField, elems: &[BiquadElem]) -> Result<Self> {
        let cols: Vec<Vec<BigInt>> = elems
            .iter()
            .map(|e| k.integral_coords(e).ok_or_else(|| Error::domain(format!("{e} is not integral"))))
            .collect::<Result<_>>()?;
        let hnf = hnf_upper(&IntMatrix::from_columns(4, &cols)).ok_or_else(|| Error::domain("not a full-rank lattice"))?;
        Ok(KIdeal { hnf })
    }

    /// The ideal generated over `O_K` by integral elements.
    pub fn from_generators(k: &BiquadField, gens: &[BiquadElem]) -> Result<Self> {
        let mut span = Vec::new();
        for g in gens {
            for b in k.integral_basis() {
                span.push(g.mul(b));
            }
        }
        Self::from_z_span(k, &span)
    }

    pub fn principal(k: &BiquadField, alpha: &BiquadElem) -> Result<Self> {
        Self::from_generators(k, std::slice::from_ref(alpha))
    }

    pub fn unit(k: &BiquadField) -> Self {
        Self::principal(k, &k.one()).expect("O_K")
    }

    /// `a·O_K` for an ideal `a` of the subfield `k_i`.
    pub fn extend(k: &BiquadField, i: usize, a: &QuadIdeal) -> Self {
        let gens: Vec<BiquadElem> = a.basis().iter().map(|x| k.embed(i, x)).collect();
        Self::from_generators(k, &gens).expect("extension of a nonzero integral ideal")
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Z-basis as elements of `K`.
    pub fn basis(&self, k: &BiquadField) -> Vec<BiquadElem> {
        (0..4).map(|j| k.from_integral_coords(&self.hnf.col(j))).collect()
    }

    pub fn norm(&self) -> BigInt {
        self.hnf.determinant()
    }

    pub fn mul(&self, k: &BiquadField, other: &KIdeal) -> KIdeal {
        let a = self.basis(k);
        let b = other.basis(k);
        let prods: Vec<BiquadElem> = a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect();
        Self::from_z_span(k, &prods).expect("product of nonzero ideals")
    }

    /// `σ_j(A)`.
    pub fn apply(&self, k: &BiquadField, j: usize) -> KIdeal {
        let imgs: Vec<BiquadElem> = self.basis(k).iter().map(|x| x.apply(j)).collect();
        Self::from_z_span(k, &imgs).expect("automorphic image")
    }

    pub fn contains(&self, k: &BiquadField, x: &BiquadElem) -> bool {
        match k.integral_coords(x) {
            Some(c) => crate::abelian::matrix::solve_integer(&self.hnf, &c).is_some(),
            None => false,
        }
    }

    /// `N_{K/k_i}(A) = A·σ_i(A) ∩ k_i` as an ideal of `k_i`.
    pub fn relative_norm(&self, k: &BiquadField, i: usize) -> QuadIdeal {
        let prod = self.mul(k, &self.apply(k, i));
        let basis = prod.basis(k);
        let drop: [usize; 2] = match i {
            1 => [2, 3],
            2 => [1, 3],
            3 => [1, 2],
            _ => panic!("subfield index {i} out of range"),
        };
        let den = basis
            .iter()
            .flat_map(|b| drop.iter().map(move |&d| b.coords()[d].denom().clone()))
            .fold(BigInt::from(1), |a, d| num_integer::Integer::lcm(&a, &d));
        let rows: Vec<Vec<BigInt>> = drop
            .iter()
            .map(|&d| basis.iter().map(|b| (&b.coords()[d] * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let ker = kernel_basis(&IntMatrix::from_rows(&rows));
        let m = k.subfield(i).m();
        let gens: Vec<QuadElem> = (0..ker.cols())
            .map(|c| {
                let x = basis.iter().enumerate().fold(BiquadElem::zero(k.m1(), k.m2()), |acc, (j, b)| {
                    acc.add(&b.scale(&BigRational::from_integer(ker[(j, c)].clone())))
                });
                k.restrict(i, &x).expect("element of the subfield")
            })
            .filter(|x| !x.is_zero())
            .collect();
        QuadIdeal::from_generators(m, &gens).expect("relative norm of a nonzero ideal")
    }
}

/// Serialized as the 4 × 4 Hermite matrix, row by row.
impl Serialize for KIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.hnf.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadraticField;

    #[test]
    fn extension_and_norms() {
        let k = BiquadField::new(-1, -5).unwrap();
        let f = QuadraticField::new(-5).unwrap();
        let p2 = f.primes_above(2)[0].ideal.clone();
        let a = KIdeal::extend(&k, 2, &p2);
        assert_eq!(a.norm(), BigInt::from(4));
        // N_{K/F}(aO_K) = a², other norms are (N a)
        assert_eq!(a.relative_norm(&k, 2), p2.mul(&p2));
        assert_eq!(a.relative_norm(&k, 1), QuadIdeal::rational(-1, &BigInt::from(2)));
        assert_eq!(a.relative_norm(&k, 3), QuadIdeal::rational(5, &BigInt::from(2)));
        // (2, 1+√−5)·O_K = (1 + i)
        let g = k.elem([1, 1, 0, 0]);
        assert_eq!(KIdeal::principal(&k, &g).unwrap(), a);
    }

    #[test]
    fn multiplicative_extension() {
        let k = BiquadField::new(2, -3).unwrap();
        let f = QuadraticField::new(-6).unwrap();
        let p = f.primes_above(5)[0].ideal.clone();
        let q = f.primes_above(7)[0].ideal.clone();
        let i3 = k.subfield_index(-6).unwrap();
        let lhs = KIdeal::extend(&k, i3, &p.mul(&q));
        let rhs = KIdeal::extend(&k, i3, &p).mul(&k, &KIdeal::extend(&k, i3, &q));
        assert_eq!(lhs, rhs);
        assert_eq!(KIdeal::unit(&k).norm(), BigInt::from(1));
    }
}
