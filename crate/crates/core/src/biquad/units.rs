//! S-unit groups of biquadratic fields from those of the three quadratic
//! subfields, via `x² = N₁(x)·N₂(x)·N₃(x) / N_{K/Q}(x)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::elem::BiquadElem;
use super::BiquadField;
use crate::abelian::matrix::{smith_normal_form, solve_integer};
use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::arith::solve_rational;
use crate::error::{Error, Result};
use crate::quadfield::{Bounds, SUnitLattice, Sigma};

/// A claimed square root, verified by exact squaring.
#[derive(Clone, Debug, Serialize)]
pub struct SquareRootCertificate {
    pub square: BiquadElem,
    pub root: BiquadElem,
}

impl SquareRootCertificate {
    pub fn verify(&self) -> bool {
        self.root.mul(&self.root) == self.square
    }
}

/// `O*_{K,S}` for `S` = archimedean places and all primes above a set of
/// rational primes.
#[derive(Clone, Debug, Serialize)]
pub struct KSUnits {
    pub primes: Vec<u64>,
    pub torsion_generator: BiquadElem,
    pub torsion_order: u32,
    pub free_generators: Vec<BiquadElem>,
    /// Rows: free coordinates of the subfield S-unit logarithms of the
    /// three relative norms; columns: free generators.
    pub norm_coordinates: IntMatrix,
    /// `[O*_{K,S} : μ_K·E₁E₂E₃]`.
    pub index: BigInt,
    pub certificates: Vec<SquareRootCertificate>,
    #[serde(skip)]
    pub subfield_units: Vec<SUnitLattice>,
}

/// `(lattice vector, element)` pairs handled during basis selection.
type Candidate = (Vec<BigInt>, BiquadElem);

impl KSUnits {
    pub fn compute(k: &BiquadField, primes: &[u64], bounds: &Bounds) -> Result<Self> {
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        let subfield_units: Vec<SUnitLattice> = (1..=3)
            .map(|i| {
                let f = k.subfield(i);
                SUnitLattice::compute(f, &Sigma::above(f, &primes))
            })
            .collect::<Result<_>>()?;
        let (zeta, w) = k.roots_of_unity();
        let mut units = KSUnits {
            primes,
            torsion_generator: zeta.clone(),
            torsion_order: w,
            free_generators: Vec::new(),
            norm_coordinates: IntMatrix::zeros(0, 0),
            index: BigInt::one(),
            certificates: Vec::new(),
            subfield_units,
        };

        // subfield generators f_j with their norm coordinates
        let mut sub: Vec<Candidate> = Vec::new();
        for (i, lat) in units.subfield_units.iter().enumerate() {
            for g in &lat.free_generators {
                let e = k.embed(i + 1, g);
                sub.push((units.lambda(k, &e)?, e));
            }
        }
        let t = sub.len();
        let dim: usize = units.subfield_units.iter().map(SUnitLattice::rank).sum();

        // squares among ζ^a ∏ f_j^{e_j}: only exponent vectors with even
        // norm coordinates can be squares
        let lam = IntMatrix::from_columns(dim, &sub.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>());
        let kernel = f2_kernel(&lam);
        let space = kernel.len() + 1;
        if space >= 63 || (1u64 << space) > bounds.search {
            return Err(Error::BoundExceeded { what: "square-root candidates".into(), bound: bounds.search });
        }
        let mut found: Vec<(Vec<u8>, BiquadElem)> = Vec::new();
        let mut found_basis: Vec<Vec<u8>> = Vec::new();
        for mask in 1u64..(1u64 << space) {
            let mut e = vec![0u8; t + 1];
            for (b, kv) in kernel.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    for (x, y) in e.iter_mut().zip(kv) {
                        *x ^= y;
                    }
                }
            }
            if mask & (1 << kernel.len()) != 0 {
                e[t] ^= 1;
            }
            if f2_in_span(&found_basis, &e) {
                continue;
            }
            let mut y = if e[t] == 1 { zeta.clone() } else { k.one() };
            for (j, (_, f)) in sub.iter().enumerate() {
                if e[j] == 1 {
                    y = y.mul(f);
                }
            }
            if let Some(root) = y.sqrt() {
                units.certificates.push(SquareRootCertificate { square: y, root: root.clone() });
                f2_insert(&mut found_basis, e.clone());
                found.push((e, root));
            }
        }

        // lattice generators: square roots first, then subfield generators
        let mut cands: Vec<Candidate> = Vec::new();
        for (e, root) in &found {
            let v: Vec<BigInt> = (0..dim)
                .map(|r| (0..t).filter(|&j| e[j] == 1).map(|j| &sub[j].0[r]).sum::<BigInt>() / 2)
                .collect();
            cands.push((v, root.clone()));
        }
        cands.extend(sub.iter().cloned());
        let basis = choose_basis(&cands);
        units.free_generators = basis.iter().map(|(_, e)| e.clone()).collect();
        units.norm_coordinates =
            IntMatrix::from_columns(dim, &basis.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>());

        // index of the subfield units
        let coords: Vec<Vec<BigInt>> = sub
            .iter()
            .map(|(v, _)| solve_integer(&units.norm_coordinates, v).expect("subfield units lie in the lattice"))
            .collect();
        let rank = units.free_generators.len();
        if rank > 0 {
            let c = IntMatrix::from_columns(rank, &coords);
            let snf = smith_normal_form(&c);
            if snf.rank != rank {
                return Err(Error::inconsistency("subfield units do not span a full-rank sublattice"));
            }
            units.index = snf.diagonal().iter().take(rank).product();
        }
        units.verify(k)?;
        Ok(units)
    }

    /// Concatenated free coordinates of `N_{K/k_i}(x)` in the subfield
    /// S-unit groups; injective modulo roots of unity.
    pub fn lambda(&self, k: &BiquadField, x: &BiquadElem) -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        for (i, lat) in self.subfield_units.iter().enumerate() {
            let n = k.relative_norm(i + 1, x);
            let d = lat.dlog(&n)?;
            out.extend(d.into_iter().skip(1));
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.free_generators.len()
    }

    /// `Z/w ⊕ Z^rank`, torsion coordinate first.
    pub fn group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.rank(), vec![BigInt::from(self.torsion_order)]).expect("w ≥ 2")
    }

    pub fn generators(&self) -> Vec<BiquadElem> {
        std::iter::once(self.torsion_generator.clone()).chain(self.free_generators.iter().cloned()).collect()
    }

    pub fn element(&self, k: &BiquadField, coords: &[BigInt]) -> BiquadElem {
        self.generators().iter().zip(coords).fold(k.one(), |acc, (g, c)| acc.mul(&g.pow_big(c)))
    }

    /// Coordinates of an S-unit of `K` in [`KSUnits::group`] order.
    pub fn dlog(&self, k: &BiquadField, x: &BiquadElem) -> Result<Vec<BigInt>> {
        let v = self.lambda(k, x)?;
        let y = if self.rank() == 0 {
            Vec::new()
        } else {
            solve_integer(&self.norm_coordinates, &v)
                .ok_or_else(|| Error::inconsistency(format!("{x} has norm coordinates outside the unit lattice")))?
        };
        let mut u = x.clone();
        for (g, c) in self.free_generators.iter().zip(&y) {
            u = u.mul(&g.pow_big(&-c));
        }
        let mut z = k.one();
        for t in 0..self.torsion_order {
            if z == u {
                let mut out = vec![BigInt::from(t)];
                out.extend(y);
                return Ok(out);
            }
            z = z.mul(&self.torsion_generator);
        }
        Err(Error::inconsistency(format!("{u} has trivial norm coordinates but is not a root of unity")))
    }

    /// Exact checks: square-root certificates, S-unit norms, torsion order.
    pub fn verify(&self, k: &BiquadField) -> Result<()> {
        for c in &self.certificates {
            if !c.verify() {
                return Err(Error::inconsistency(format!("{} is not a square root of {}", c.root, c.square)));
            }
        }
        for g in &self.free_generators {
            let n = g.norm();
            if !self.is_s_number(&n) {
                return Err(Error::inconsistency(format!("N({g}) = {n} is not an S-unit of Q")));
            }
            if !k.is_integral(g) && self.primes.is_empty() {
                return Err(Error::inconsistency(format!("unit {g} is not integral")));
            }
        }
        if !self.torsion_generator.pow(self.torsion_order as i64).is_one() {
            return Err(Error::inconsistency("torsion generator has the wrong order"));
        }
        Ok(())
    }

    fn is_s_number(&self, q: &BigRational) -> bool {
        [q.numer(), q.denom()].iter().all(|n| {
            let mut r = n.abs();
            for &p in &self.primes {
                let pb = BigInt::from(p);
                while r.is_multiple_of(&pb) {
                    r /= &pb;
                }
            }
            r.is_one()
        })
    }
}

/// Picks lattice generators in order while the rank grows, then swaps in
/// any candidate outside the span whose coordinates allow it; falls back to
/// a Smith-form basis.
fn choose_basis(cands: &[Candidate]) -> Vec<Candidate> {
    let mut chosen: Vec<Candidate> = Vec::new();
    for c in cands {
        let mut trial: Vec<Vec<BigInt>> = chosen.iter().map(|(v, _)| v.clone()).collect();
        trial.push(c.0.clone());
        if rank_of(&trial) > chosen.len() {
            chosen.push(c.clone());
        }
    }
    for _ in 0..cands.len() * 4 {
        let cols: Vec<Vec<BigRational>> = chosen.iter().map(|(v, _)| to_rat(v)).collect();
        let mut progress = false;
        let mut complete = true;
        for c in cands {
            let q = solve_rational(&cols, &to_rat(&c.0)).expect("candidates lie in the rational span");
            if q.iter().all(BigRational::is_integer) {
                continue;
            }
            complete = false;
            let swap = (0..q.len()).find(|&k| {
                q[k].numer().abs().is_one() && q.iter().all(|qi| (qi / &q[k]).is_integer())
            });
            if let Some(k) = swap {
                chosen[k] = c.clone();
                progress = true;
                break;
            }
        }
        if complete {
            return chosen;
        }
        if !progress {
            break;
        }
    }
    smith_basis(cands)
}

fn smith_basis(cands: &[Candidate]) -> Vec<Candidate> {
    let dim = cands[0].0.len();
    let a = IntMatrix::from_columns(dim, &cands.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>());
    let snf = smith_normal_form(&a);
    let av = a.mul(&snf.v);
    (0..snf.rank)
        .map(|k| {
            let mut e = cands[0].1.clone();
            e = e.div(&e).expect("nonzero");
            for (j, c) in cands.iter().enumerate() {
                let x = &snf.v[(j, k)];
                if !x.is_zero() {
                    e = e.mul(&c.1.pow(x.to_i64().expect("small exponent")));
                }
            }
            (av.col(k), e)
        })
        .collect()
}

fn to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn rank_of(vecs: &[Vec<BigInt>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let m = IntMatrix::from_columns(vecs[0].len(), vecs);
    smith_normal_form(&m).rank
}

/// Basis of `{e ∈ F₂^cols : A e ≡ 0 (mod 2)}`.
fn f2_kernel(a: &IntMatrix) -> Vec<Vec<u8>> {
    let (rows, cols) = (a.rows(), a.cols());
    let two = BigInt::from(2);
    let mut m: Vec<Vec<u8>> = (0..rows)
        .map(|i| (0..cols).map(|j| u8::from(!a[(i, j)].is_multiple_of(&two))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] == 1 {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fcol| {
            let mut v = vec![0u8; cols];
            v[fcol] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][fcol];
            }
            v
        })
        .collect()
}

/// Inserts into an echelon basis kept as a list of reduced vectors.
fn f2_insert(basis: &mut Vec<Vec<u8>>, v: Vec<u8>) {
    let r = f2_reduce(basis, v);
    if r.contains(&1) {
        basis.push(r);
    }
}

fn f2_reduce(basis: &[Vec<u8>], mut v: Vec<u8>) -> Vec<u8> {
    for b in basis {
        let lead = b.iter().position(|&x| x == 1).expect("nonzero basis vector");
        if v[lead] == 1 {
            for (x, y) in v.iter_mut().zip(b) {
                *x ^= y;
            }
        }
    }
    v
}

fn f2_in_span(basis: &[Vec<u8>], v: &[u8]) -> bool {
    f2_reduce(basis, v.to_vec()).iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_kernel_small() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 4]]);
        let k = f2_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: i64 = (0..3).map(|j| a[(0, j)].to_i64().unwrap() * v[j] as i64).sum();
            assert_eq!(s % 2, 0);
        }
    }

    #[test]
    fn units_of_q_sqrt2_sqrt3() {
        let k = BiquadField::new(2, 3).unwrap();
        let u = KSUnits::compute(&k, &[], &Bounds::default()).unwrap();
        assert_eq!(u.torsion_order, 2);
        assert_eq!(u.rank(), 3);
        // 2 + √3 = ((√2 + √6)/2)², so the index is 4
        assert_eq!(u.index, BigInt::from(4));
        let mut gens = u.free_generators.clone();
        gens.sort_by_key(|g| g.to_string());
        let half = BigRational::new(1.into(), 2.into());
        let z = BigRational::zero();
        let sqrt_eps3 = BiquadElem::new(2, 3, [z.clone(), half.clone(), z, half]);
        let mut want = vec![k.elem([1, 1, 0, 0]), sqrt_eps3, k.elem([0, 1, 1, 0])];
        want.sort_by_key(|g| g.to_string());
        assert_eq!(gens, want);
        assert!(u.certificates.iter().all(SquareRootCertificate::verify));
    }

    #[test]
    fn units_of_q_i_sqrt_minus5() {
        let k = BiquadField::new(-1, -5).unwrap();
        let u = KSUnits::compute(&k, &[], &Bounds::default()).unwrap();
        assert_eq!(u.torsion_order, 4);
        assert_eq!(u.rank(), 1);
        let phi = k.embed(3, &crate::quadfield::QuadraticField::new(5).unwrap().fundamental_unit().unwrap());
        // a generator up to roots of unity and inversion
        let d = u.dlog(&k, &phi).unwrap();
        assert!(d[1].abs().is_one());
    }

    #[test]
    fn dlog_round_trip() {
        let k = BiquadField::new(-1, 2).unwrap();
        let u = KSUnits::compute(&k, &[2], &Bounds::default()).unwrap();
        let x = u.free_generators[0].mul(&u.torsion_generator).pow(3);
        let c = u.dlog(&k, &x).unwrap();
        assert_eq!(u.element(&k, &c), x);
        assert_eq!(u.torsion_order, 8);
    }
}
