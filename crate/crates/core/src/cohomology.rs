//! Modules over a finite cyclic group `Δ = ⟨σ⟩`: fixed points, norm, Tate
//! cohomology, `H¹`, the norm subgroup `Ψ_N` and the four-term sequence of
//! 2-torsion groups attached to a module over a group of order 2.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::exact::{check_exact_at, check_injective, check_surjective, NodeCheck};
use crate::abelian::group::{direct_sum_presentation, intersection, preimage, Normalized};
use crate::abelian::matrix::solve_integer;
use crate::abelian::{FgAbelianGroup, GroupHom, IntMatrix, Subquotient};
use crate::error::{Error, Result};

/// A finitely generated abelian group (written additively) with an
/// automorphism `σ` satisfying `σ^n = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicModule {
    sigma: GroupHom,
    order: u32,
}

impl CyclicModule {
    pub fn new(group: FgAbelianGroup, sigma: IntMatrix, order: u32) -> Result<Self> {
        let sigma = GroupHom::new(group.clone(), group, sigma)?;
        Self::from_hom(sigma, order)
    }

    pub fn from_hom(sigma: GroupHom, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("group order must be at least 1"));
        }
        if sigma.source() != sigma.target() {
            return Err(Error::shape("σ must be an endomorphism"));
        }
        let id = GroupHom::identity(sigma.source());
        if !sigma.pow(order as usize)?.same_map(&id) {
            return Err(Error::domain(format!("σ^{order} is not the identity")));
        }
        if !sigma.is_isomorphism() {
            return Err(Error::domain("σ is not an automorphism"));
        }
        Ok(CyclicModule { sigma, order })
    }

    /// `M` with the trivial action.
    pub fn trivial_action(group: FgAbelianGroup, order: u32) -> Self {
        let sigma = GroupHom::identity(&group);
        CyclicModule { sigma, order }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        self.sigma.source()
    }

    pub fn sigma(&self) -> &GroupHom {
        &self.sigma
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn ngens(&self) -> usize {
        self.group().ngens()
    }

    fn identity_matrix(&self) -> IntMatrix {
        IntMatrix::identity(self.ngens())
    }

    fn empty(&self) -> IntMatrix {
        IntMatrix::zeros(self.ngens(), 0)
    }

    pub fn sigma_minus_one(&self) -> GroupHom {
        self.sigma.sub(&GroupHom::identity(self.group())).expect("same endpoints")
    }

    /// `N = Σ_{i<n} σ^i`.
    pub fn norm_endomorphism(&self) -> GroupHom {
        let mut acc = GroupHom::zero(self.group(), self.group());
        let mut power = GroupHom::identity(self.group());
        for _ in 0..self.order {
            acc = acc.add(&power).expect("same endpoints");
            power = power.then(&self.sigma).expect("endomorphism");
        }
        acc
    }

    fn fixed_gens(&self) -> IntMatrix {
        let g = self.group();
        preimage(g, self.sigma_minus_one().matrix(), g, &self.empty())
    }

    /// `M^Δ = Ker(σ − 1)` as a subgroup of `M`.
    pub fn fixed_subgroup(&self) -> Subquotient {
        Subquotient::subgroup(self.group(), &self.fixed_gens())
    }

    pub fn fixed_points(&self) -> FgAbelianGroup {
        self.fixed_subgroup().group().clone()
    }

    /// `Ĥ⁰ = M^Δ / N M`.
    pub fn tate_h0(&self) -> Subquotient {
        Subquotient::new(self.group(), &self.fixed_gens(), self.norm_endomorphism().matrix())
    }

    /// `Ĥ⁻¹ = Ker N / (σ − 1) M`.
    pub fn tate_h_minus1(&self) -> Subquotient {
        let g = self.group();
        let ker_n = preimage(g, self.norm_endomorphism().matrix(), g, &self.empty());
        Subquotient::new(g, &ker_n, self.sigma_minus_one().matrix())
    }

    /// `H¹(Δ, M)` from the inhomogeneous cochain complex
    /// `M → Map(Δ, M) → Map(Δ², M)`.
    pub fn h1(&self) -> FgAbelianGroup {
        self.h1_cochains().group().clone()
    }

    pub fn h1_cochains(&self) -> Subquotient {
        let n = self.order as usize;
        let g = self.ngens();
        let m = self.group();
        let c1 = direct_sum_presentation(&vec![m.clone(); n]).normalize();
        let c2 = direct_sum_presentation(&vec![m.clone(); n * n]).normalize();
        let powers: Vec<IntMatrix> = (0..n)
            .map(|i| self.sigma.pow(i).expect("endomorphism").matrix().clone())
            .collect();
        let id = self.identity_matrix();

        // d0(m) = (σ^i m − m)_i
        let mut d0 = IntMatrix::zeros(n * g, g);
        for (i, p) in powers.iter().enumerate() {
            place(&mut d0, i * g, 0, &p.sub(&id));
        }
        // d1(c)(i, j) = σ^i c_j − c_{i+j} + c_i
        let mut d1 = IntMatrix::zeros(n * n * g, n * g);
        for i in 0..n {
            for j in 0..n {
                let row = (i * n + j) * g;
                add_block(&mut d1, row, j * g, &powers[i]);
                add_block(&mut d1, row, ((i + j) % n) * g, &id.scale(&-BigInt::one()));
                add_block(&mut d1, row, i * g, &id);
            }
        }
        let d0n = c1.to_normal.mul(&d0);
        let d1n = c2.to_normal.mul(&d1).mul(&c1.from_normal);
        let cocycles = preimage(&c1.group, &d1n, &c2.group, &IntMatrix::zeros(c2.group.ngens(), 0));
        Subquotient::new(&c1.group, &cocycles, &d0n)
    }

    /// Brute-force `H¹` for a finite module: enumerates the candidate values
    /// `c(σ)` of a cocycle, extends along powers of `σ`, keeps those that
    /// satisfy the cocycle identity on all of `Δ × Δ`, and divides by
    /// coboundaries.
    pub fn h1_brute_force(&self) -> Result<BruteForceH1> {
        let moduli: Vec<i64> = match self.group().is_finite() {
            true => self
                .group()
                .torsion()
                .iter()
                .map(|d| d.to_i64().ok_or_else(|| Error::Unsupported("modulus too large".into())))
                .collect::<Result<_>>()?,
            false => {
                return Err(Error::Unsupported(
                    "brute-force cocycle enumeration needs a finite module".into(),
                ))
            }
        };
        let fm = FiniteModule::new(moduli, self.sigma.matrix());
        let n = self.order as usize;
        let powers: Vec<Vec<Vec<i64>>> = (0..n).map(|i| fm.power(i)).collect();
        let mut cocycles: Vec<u64> = Vec::new();
        for code in 0..fm.size {
            let a = fm.decode(code);
            // c(σ^k) = Σ_{i<k} σ^i a
            let mut c = vec![fm.zero()];
            for k in 1..n {
                let next = fm.add(&c[k - 1], &fm.apply(&powers[k - 1], &a));
                c.push(next);
            }
            let ok = (0..n).all(|i| {
                (0..n).all(|j| {
                    let lhs = &c[(i + j) % n];
                    let rhs = fm.add(&c[i], &fm.apply(&powers[i], &c[j]));
                    *lhs == rhs
                })
            });
            if ok {
                cocycles.push(code);
            }
        }
        let coboundaries: HashSet<u64> = (0..fm.size)
            .map(|code| {
                let b = fm.decode(code);
                let sb = fm.apply(&powers[1 % n], &b);
                fm.encode(&fm.sub(&sb, &b))
            })
            .collect();
        let order = cocycles.len() / coboundaries.len();
        let exponent = fm.moduli.iter().fold(1i64, |acc, &d| acc.lcm(&d)).max(1);
        let mut killed_by = BTreeMap::new();
        for k in 1..=exponent {
            if exponent % k != 0 {
                continue;
            }
            let count = cocycles
                .iter()
                .filter(|&&code| {
                    let a = fm.decode(code);
                    coboundaries.contains(&fm.encode(&fm.scale(&a, k)))
                })
                .count();
            killed_by.insert(k as u64, (count / coboundaries.len()) as u64);
        }
        Ok(BruteForceH1 {
            order: order as u64,
            cocycles: cocycles.len() as u64,
            coboundaries: coboundaries.len() as u64,
            killed_by,
        })
    }

    /// `Ψ_N(n) = {m : N m ∈ n M^Δ}` and its quotient by `M^Δ + nM`.
    pub fn psi_n(&self, n: u64) -> Result<PsiN> {
        if n < 2 {
            return Err(Error::domain("Ψ_N needs n ≥ 2"));
        }
        let g = self.group();
        let fixed = self.fixed_gens();
        let n_big = BigInt::from(n);
        let psi = preimage(g, self.norm_endomorphism().matrix(), g, &fixed.scale(&n_big));
        let den = fixed.hstack(&IntMatrix::scalar(self.ngens(), &n_big));
        Ok(PsiN {
            subgroup: Subquotient::subgroup(g, &psi),
            quotient: Subquotient::new(g, &psi, &den),
        })
    }

    /// The four-term sequence of 2-torsion groups
    ///
    /// `0 → (M^Δ ∩ 2M)/2M^Δ → H¹(Δ, M₂) → H¹(Δ, M) → Ψ_N(2)/(M^Δ + 2M) → 0`
    ///
    /// with the connecting map of `0 → M₂ → M → 2M → 0`, the map induced by
    /// `M₂ ⊆ M`, and reduction of representatives; exactness is verified.
    pub fn cool_sequence(&self) -> Result<CoolSequence> {
        if self.order != 2 {
            return Err(Error::Unsupported(format!(
                "four-term sequence needs Δ of order 2, got {}",
                self.order
            )));
        }
        let g = self.group();
        let k = self.ngens();
        let two = BigInt::from(2);
        let id = self.identity_matrix();
        let two_id = IntMatrix::scalar(k, &two);
        let s1 = self.sigma_minus_one();
        let norm = self.norm_endomorphism();
        let fixed = self.fixed_gens();

        let term1 = Subquotient::new(g, &intersection(g, &fixed, &two_id), &fixed.scale(&two));

        let m2 = preimage(g, &two_id, g, &self.empty());
        let nm2 = norm.matrix().mul(&m2);
        let sys = nm2.hstack(&g.relation_matrix().scale(&-BigInt::one()));
        let z = crate::abelian::matrix::kernel_basis(&sys).top_rows(m2.cols());
        let term2 = Subquotient::new(g, &m2.mul(&z), &s1.matrix().mul(&m2));

        let term3 = self.tate_h_minus1();
        let psi = self.psi_n(2)?;
        let term4 = psi.quotient;

        // connecting map: x = 2m ↦ (σ − 1) m
        let halving = two_id.hstack(&g.relation_matrix());
        let mut cols = Vec::new();
        for j in 0..term1.group().ngens() {
            let x = term1.rep(j);
            let sol = solve_integer(&halving, &x)
                .ok_or_else(|| Error::inconsistency("element of 2M has no half"))?;
            let m = &sol[..k];
            let img = s1.matrix().mul_vec(m);
            let y = term2
                .reduce(&img)
                .ok_or_else(|| Error::inconsistency("connecting map leaves Ker N on M₂"))?;
            cols.push(y);
        }
        let delta = GroupHom::new(
            term1.group().clone(),
            term2.group().clone(),
            IntMatrix::from_columns(term2.group().ngens(), &cols),
        )?;
        let inclusion = term2.induced_map(&term3, &id)?;
        let reduction = term3.induced_map(&term4, &id)?;

        let checks = vec![
            check_injective(COOL_NODES[0], &delta),
            check_exact_at(COOL_NODES[1], &delta, &inclusion)?,
            check_exact_at(COOL_NODES[2], &inclusion, &reduction)?,
            check_surjective(COOL_NODES[3], &reduction),
        ];
        let terms = [&term1, &term2, &term3, &term4];
        let two_torsion = terms.iter().all(|t| t.group().is_killed_by(2));
        let exact = checks.iter().all(|c| c.exact);
        Ok(CoolSequence {
            term1: term1.group().clone(),
            term2: term2.group().clone(),
            term3: term3.group().clone(),
            term4: term4.group().clone(),
            term_reps: terms.iter().map(|t| t.reps().clone()).collect(),
            maps: vec![delta, inclusion, reduction],
            checks,
            two_torsion,
            exact,
        })
    }
}

fn place(dst: &mut IntMatrix, r0: usize, c0: usize, block: &IntMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            dst[(r0 + i, c0 + j)] = block[(i, j)].clone();
        }
    }
}

fn add_block(dst: &mut IntMatrix, r0: usize, c0: usize, block: &IntMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = &dst[(r0 + i, c0 + j)] + &block[(i, j)];
            dst[(r0 + i, c0 + j)] = v;
        }
    }
}

pub const COOL_NODES: [&str; 4] = [
    "(M^Δ ∩ 2M)/2M^Δ",
    "H^1(Δ, M_2)",
    "H^1(Δ, M)",
    "Ψ_N(2)/(M^Δ + 2M)",
];

/// `Ψ_N(n)` as a subgroup of `M` and the quotient `Ψ_N(n)/(M^Δ + nM)`.
#[derive(Clone, Debug)]
pub struct PsiN {
    pub subgroup: Subquotient,
    pub quotient: Subquotient,
}

/// Outcome of the brute-force cocycle count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceH1 {
    pub order: u64,
    pub cocycles: u64,
    pub coboundaries: u64,
    /// `k ↦ |H¹[k]|` for every divisor `k` of the exponent of `M`; these
    /// counts determine the isomorphism type.
    pub killed_by: BTreeMap<u64, u64>,
}

impl BruteForceH1 {
    /// Whether `group` has the same isomorphism type as the enumerated `H¹`.
    pub fn matches(&self, group: &FgAbelianGroup) -> bool {
        group.order_u64() == Some(self.order)
            && self
                .killed_by
                .iter()
                .all(|(&k, &c)| group.count_killed_by(k).and_then(|x| x.to_u64()) == Some(c))
    }
}

/// The four-term 2-torsion sequence with its maps and exactness verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoolSequence {
    pub term1: FgAbelianGroup,
    pub term2: FgAbelianGroup,
    pub term3: FgAbelianGroup,
    pub term4: FgAbelianGroup,
    /// Module-level representatives (columns) of each term's generators.
    #[serde(skip)]
    pub term_reps: Vec<IntMatrix>,
    pub maps: Vec<GroupHom>,
    pub checks: Vec<NodeCheck>,
    pub two_torsion: bool,
    pub exact: bool,
}

impl CoolSequence {
    pub fn terms(&self) -> [&FgAbelianGroup; 4] {
        [&self.term1, &self.term2, &self.term3, &self.term4]
    }

    /// `|term1| · |term3| = |term2| · |term4|`, which exactness forces.
    pub fn order_identity(&self) -> Option<bool> {
        let o: Vec<BigInt> = self.terms().iter().map(|t| t.order()).collect::<Option<_>>()?;
        Some(&o[0] * &o[2] == &o[1] * &o[3])
    }
}

/// Finite module with `i64` coordinates, for enumeration.
struct FiniteModule {
    moduli: Vec<i64>,
    sigma: Vec<Vec<i64>>,
    size: u64,
}

impl FiniteModule {
    fn new(moduli: Vec<i64>, sigma: &IntMatrix) -> Self {
        let n = moduli.len();
        let sigma = (0..n)
            .map(|i| (0..n).map(|j| sigma[(i, j)].to_i64().expect("small entries")).collect())
            .collect();
        let size = moduli.iter().map(|&d| d as u64).product();
        FiniteModule { moduli, sigma, size }
    }

    fn zero(&self) -> Vec<i64> {
        vec![0; self.moduli.len()]
    }

    fn decode(&self, mut code: u64) -> Vec<i64> {
        self.moduli
            .iter()
            .map(|&d| {
                let x = (code % d as u64) as i64;
                code /= d as u64;
                x
            })
            .collect()
    }

    fn encode(&self, x: &[i64]) -> u64 {
        let mut code = 0u64;
        for (xi, &d) in x.iter().zip(&self.moduli).rev() {
            code = code * d as u64 + xi.rem_euclid(d) as u64;
        }
        code
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), d)| (x + y).rem_euclid(*d)).collect()
    }

    fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), d)| (x - y).rem_euclid(*d)).collect()
    }

    fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        a.iter().zip(&self.moduli).map(|(x, d)| (x * k).rem_euclid(*d)).collect()
    }

    fn apply(&self, m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        m.iter()
            .zip(&self.moduli)
            .map(|(row, d)| {
                row.iter().zip(x).fold(0i64, |acc, (a, b)| (acc + a * b).rem_euclid(*d))
            })
            .collect()
    }

    fn power(&self, e: usize) -> Vec<Vec<i64>> {
        let n = self.moduli.len();
        let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for _ in 0..e {
            acc = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .fold(0i64, |s, k| (s + self.sigma[i][k] * acc[k][j]).rem_euclid(self.moduli[i]))
                        })
                        .collect()
                })
                .collect();
        }
        acc
    }
}

/// Invariant factors the random generator draws from.
pub const RANDOM_FACTORS: [i64; 6] = [2, 3, 4, 8, 9, 12];

/// A random finite module of order dividing 2 with `|M| ≤ max_order`.
///
/// The involution is drawn as `g s g⁻¹` where `s` is a signed permutation
/// of equal-order generators, optionally composed with a transvection
/// `1 + T` found by rejection, and `g` is a random product of elementary
/// automorphisms.
pub fn random_order_two_module<R: Rng>(rng: &mut R, max_order: u64) -> CyclicModule {
    let count = rng.gen_range(1..=6);
    let mut orders: Vec<i64> = Vec::new();
    let mut size: u64 = 1;
    for _ in 0..count {
        let d = RANDOM_FACTORS[rng.gen_range(0..RANDOM_FACTORS.len())];
        if size * d as u64 > max_order {
            continue;
        }
        size *= d as u64;
        orders.push(d);
    }
    let group = FgAbelianGroup::from_cyclic_orders(&orders);
    let moduli: Vec<i64> = group.torsion().iter().map(|d| d.to_i64().unwrap()).collect();
    let n = moduli.len();
    if n == 0 {
        return CyclicModule::trivial_action(group, 2);
    }
    let to_big = |m: &Vec<Vec<i64>>| IntMatrix::from_rows(m);
    let reduce = |m: Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        m.into_iter()
            .enumerate()
            .map(|(i, row)| row.into_iter().map(|x| x.rem_euclid(moduli[i])).collect())
            .collect()
    };
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        reduce(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(0i64, |s, k| (s + a[i][k] * b[k][j]).rem_euclid(moduli[i])))
                        .collect()
                })
                .collect(),
        )
    };
    let identity: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    // allowed step for entry (i, j): multiples of d_i / gcd(d_i, d_j)
    let step = |i: usize, j: usize| moduli[i] / moduli[i].gcd(&moduli[j]);

    // signed permutation of equal-order generators
    let mut s = vec![vec![0i64; n]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if i + 1 < n && moduli[i] == moduli[i + 1] && rng.gen_bool(0.3) && perm[i] == i && perm[i + 1] == i + 1 {
            perm.swap(i, i + 1);
        }
    }
    let signs: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
    for j in 0..n {
        // swapped pairs share a sign, otherwise s² = −1 on the pair
        s[perm[j]][j] = signs[j.min(perm[j])];
    }
    let mut s = reduce(s);
    for _ in 0..8 {
        let mut t = vec![vec![0i64; n]; n];
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let k = rng.gen_range(0..moduli[i].gcd(&moduli[j]));
        t[i][j] = k * step(i, j);
        let cand = mul(&s, &reduce((0..n).map(|a| (0..n).map(|b| identity[a][b] + t[a][b]).collect()).collect()));
        if mul(&cand, &cand) == identity {
            s = cand;
            break;
        }
    }
    // random automorphism g and its inverse from elementary factors
    let mut g = identity.clone();
    let mut g_inv = identity.clone();
    for _ in 0..rng.gen_range(0..10) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            let d = moduli[i];
            let units: Vec<i64> = (1..d).filter(|u| u.gcd(&d) == 1).collect();
            let u = units[rng.gen_range(0..units.len())];
            let u_inv = (1..d).find(|v| (u * v).rem_euclid(d) == 1).unwrap();
            let mut e = identity.clone();
            e[i][i] = u;
            let mut e_inv = identity.clone();
            e_inv[i][i] = u_inv;
            g = mul(&e, &g);
            g_inv = mul(&g_inv, &e_inv);
        } else {
            let k = rng.gen_range(0..moduli[i].gcd(&moduli[j])) * step(i, j);
            let mut e = identity.clone();
            e[i][j] = k;
            let mut e_inv = identity.clone();
            e_inv[i][j] = -k;
            g = mul(&e, &g);
            g_inv = mul(&g_inv, &reduce(e_inv));
        }
    }
    let sigma = mul(&mul(&g, &s), &g_inv);
    CyclicModule::new(group, to_big(&sigma), 2).expect("conjugate of an involution is an involution")
}

/// Convenience: the additive module of a normalized presentation with a
/// `σ` given in presentation coordinates.
pub fn module_from_presentation(norm: &Normalized, sigma: &IntMatrix, order: u32) -> Result<CyclicModule> {
    let m = norm.to_normal.mul(sigma).mul(&norm.from_normal);
    CyclicModule::new(norm.group.clone(), m, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::group::vec_i64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn module(orders: &[i64], sigma: &[Vec<i64>]) -> CyclicModule {
        let g = FgAbelianGroup::from_cyclic_orders(orders);
        CyclicModule::new(g, IntMatrix::from_rows(sigma), 2).unwrap()
    }

    fn z_neg() -> CyclicModule {
        module(&[0], &[vec![-1]])
    }

    fn z_triv() -> CyclicModule {
        module(&[0], &[vec![1]])
    }

    fn z4_3() -> CyclicModule {
        module(&[4], &[vec![3]])
    }

    #[test]
    fn rejects_non_involutions() {
        let g = FgAbelianGroup::free(1);
        assert!(CyclicModule::new(g.clone(), IntMatrix::from_rows(&[vec![2]]), 2).is_err());
        let z5 = FgAbelianGroup::cyclic(5);
        assert!(CyclicModule::new(z5, IntMatrix::from_rows(&[vec![2]]), 2).is_err());
        let z2 = FgAbelianGroup::free(2);
        assert!(CyclicModule::new(z2, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), 2).is_ok());
    }

    #[test]
    fn fixed_points_examples() {
        assert!(z_neg().fixed_points().is_trivial());
        assert_eq!(z_triv().fixed_points(), FgAbelianGroup::free(1));
        let fixed = z4_3().fixed_subgroup();
        assert_eq!(fixed.group(), &FgAbelianGroup::cyclic(2));
        assert_eq!(fixed.rep(0), vec_i64(&[2]));
    }

    #[test]
    fn norm_examples() {
        assert!(z_neg().norm_endomorphism().is_zero());
        assert_eq!(z_triv().norm_endomorphism().matrix()[(0, 0)], BigInt::from(2));
        assert!(z4_3().norm_endomorphism().is_zero());
    }

    #[test]
    fn tate_examples() {
        assert_eq!(z_triv().tate_h0().group(), &FgAbelianGroup::cyclic(2));
        assert!(z_triv().tate_h_minus1().group().is_trivial());
        assert!(z_neg().tate_h0().group().is_trivial());
        assert_eq!(z_neg().tate_h_minus1().group(), &FgAbelianGroup::cyclic(2));
        let z2 = CyclicModule::trivial_action(FgAbelianGroup::cyclic(2), 2);
        assert_eq!(z2.tate_h_minus1().group(), &FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn h1_examples() {
        let z2 = CyclicModule::trivial_action(FgAbelianGroup::cyclic(2), 2);
        assert_eq!(z2.h1(), FgAbelianGroup::cyclic(2));
        assert_eq!(z4_3().h1(), FgAbelianGroup::cyclic(2));
        let swap = module(&[0, 0], &[vec![0, 1], vec![1, 0]]);
        assert!(swap.h1().is_trivial());
        assert_eq!(z_neg().h1(), FgAbelianGroup::cyclic(2));
        assert!(z_triv().h1().is_trivial());
    }

    #[test]
    fn brute_force_agrees_on_small_examples() {
        let bf = z4_3().h1_brute_force().unwrap();
        assert_eq!(bf.order, 2);
        assert!(bf.matches(&z4_3().h1()));
        assert!(matches!(z_neg().h1_brute_force(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn h1_of_order_three_action() {
        // Z/7 with σ = ×2 (2³ = 8 ≡ 1): N = 1+2+4 = 7 = 0, σ−1 = ×1 bijective → H¹ = 0
        let g = FgAbelianGroup::cyclic(7);
        let m = CyclicModule::new(g, IntMatrix::from_rows(&[vec![2]]), 3).unwrap();
        assert!(m.h1().is_trivial());
        assert!(m.tate_h_minus1().group().is_trivial());
        assert!(m.h1_brute_force().unwrap().matches(&m.h1()));
        // Z/3 trivial, order 3: H¹ = Hom(Z/3, Z/3) = Z/3
        let t = CyclicModule::trivial_action(FgAbelianGroup::cyclic(3), 3);
        assert_eq!(t.h1(), FgAbelianGroup::cyclic(3));
    }

    #[test]
    fn psi_examples() {
        let p = z_neg().psi_n(2).unwrap();
        assert_eq!(p.subgroup.group(), &FgAbelianGroup::free(1));
        assert_eq!(p.quotient.group(), &FgAbelianGroup::cyclic(2));
        let p = z_triv().psi_n(2).unwrap();
        assert_eq!(p.subgroup.group(), &FgAbelianGroup::free(1));
        assert!(p.quotient.group().is_trivial());
        let p = z4_3().psi_n(2).unwrap();
        assert_eq!(p.quotient.group(), &FgAbelianGroup::cyclic(2));
        assert!(z_neg().psi_n(1).is_err());
    }

    #[test]
    fn cool_examples() {
        let zero = CyclicModule::trivial_action(FgAbelianGroup::trivial(), 2);
        let s = zero.cool_sequence().unwrap();
        assert!(s.exact && s.terms().iter().all(|t| t.is_trivial()));

        let s = z4_3().cool_sequence().unwrap();
        let z2 = FgAbelianGroup::cyclic(2);
        assert_eq!(s.terms(), [&z2, &z2, &z2, &z2]);
        assert!(s.exact);
        assert!(s.maps[1].is_zero());
        assert!(s.maps[2].is_isomorphism());

        let s = z_neg().cool_sequence().unwrap();
        assert!(s.exact);
        assert!(s.term1.is_trivial() && s.term2.is_trivial());
        assert_eq!(s.term3, z2);
        assert_eq!(s.term4, z2);

        let order3 = CyclicModule::trivial_action(FgAbelianGroup::cyclic(3), 3);
        assert!(matches!(order3.cool_sequence(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn random_modules_are_valid_involutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_order_two_module(&mut rng, 4096);
            assert!(m.group().order_u64().unwrap() <= 4096);
            let s2 = m.sigma().pow(2).unwrap();
            assert!(s2.same_map(&GroupHom::identity(m.group())));
        }
    }

    #[test]
    fn random_modules_satisfy_cohomology_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = random_order_two_module(&mut rng, 512);
            let h1 = m.h1();
            assert_eq!(&h1, m.tate_h_minus1().group());
            assert!(m.h1_brute_force().unwrap().matches(&h1));
            let s = m.cool_sequence().unwrap();
            assert!(s.exact && s.two_torsion);
            assert_eq!(s.order_identity(), Some(true));
        }
    }
}
