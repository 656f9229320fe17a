use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{kernel_basis, smith_normal_form, solve_integer, IntMatrix};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^rank` held in
/// invariant-factor normal form (`d_1 | d_2 | …`, every `d_i ≥ 2`).
///
/// Elements are coordinate vectors over the canonical generators, torsion
/// generators first. Torsion coordinates are kept reduced into `[0, d_i)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator_labels: Option<Vec<String>>,
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

impl Eq for FgAbelianGroup {}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(Error::domain(format!("invariant factor {d} < 2")));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::domain(format!("invariant factors {} ∤ {}", w[0], w[1])));
            }
        }
        Ok(FgAbelianGroup {
            rank,
            torsion,
            generator_labels: None,
        })
    }

    /// Normal form of an arbitrary list of cyclic orders (0 meaning `Z`).
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        let n = orders.len();
        let mut rel = IntMatrix::zeros(n, n);
        for (i, &d) in orders.iter().enumerate() {
            rel[(i, i)] = BigInt::from(d);
        }
        Presentation::new(n, rel).normalize().group
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
            generator_labels: None,
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
            generator_labels: None,
        }
    }

    pub fn cyclic(d: u64) -> Self {
        Self::from_cyclic_orders(&[d as i64])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.ngens() {
            return Err(Error::shape("one label per generator required"));
        }
        self.generator_labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.generator_labels.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| o.to_u64())
    }

    /// Whether `n` kills the group.
    pub fn is_killed_by(&self, n: u64) -> bool {
        self.rank == 0 && self.torsion.iter().all(|d| BigInt::from(n).is_multiple_of(d))
    }

    /// `|G[k]|` for a finite group: the number of elements killed by `k`.
    pub fn count_killed_by(&self, k: u64) -> Option<BigInt> {
        self.is_finite().then(|| {
            self.torsion
                .iter()
                .map(|d| d.gcd(&BigInt::from(k)))
                .product()
        })
    }

    /// Column-per-torsion-generator relation matrix `diag(d_i)` padded with
    /// zero rows for the free part.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let t = self.torsion.len();
        let mut m = IntMatrix::zeros(n, t);
        for (i, d) in self.torsion.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn normalize(&self, x: &mut [BigInt]) {
        for (xi, d) in x.iter_mut().zip(&self.torsion) {
            *xi = xi.mod_floor(d);
        }
    }

    pub fn normalized(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut v = x.to_vec();
        self.normalize(&mut v);
        v
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        x.iter().zip(self.torsion.iter().map(Some).chain(std::iter::repeat(None))).all(
            |(xi, d)| match d {
                Some(d) => xi.is_multiple_of(d),
                None => xi.is_zero(),
            },
        )
    }

    /// Iterates over every element of a finite group (mixed radix order).
    pub fn elements(&self) -> Option<ElementIter> {
        if !self.is_finite() {
            return None;
        }
        let radices: Vec<u64> = self.torsion.iter().map(|d| d.to_u64()).collect::<Option<_>>()?;
        Some(ElementIter {
            radices,
            current: None,
            done: false,
        })
    }

    /// `G ⊕ H` with `G`'s generators first (coordinates are then re-normalized;
    /// use [`direct_sum_presentation`] to keep the block structure).
    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        direct_sum_presentation(&[self.clone(), other.clone()]).normalize().group
    }

    /// The `n`-torsion subgroup `G_n` with its inclusion.
    pub fn n_torsion(&self, n: u64) -> (FgAbelianGroup, GroupHom) {
        GroupHom::multiplication(self, n).kernel()
    }

    /// `G/nG` with its projection.
    pub fn mod_n(&self, n: u64) -> (FgAbelianGroup, GroupHom) {
        GroupHom::multiplication(self, n).cokernel()
    }

    pub fn invariant_factors(&self) -> Vec<String> {
        self.torsion
            .iter()
            .map(ToString::to_string)
            .chain(std::iter::repeat_n("0".to_string(), self.rank))
            .collect()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

pub struct ElementIter {
    radices: Vec<u64>,
    current: Option<Vec<u64>>,
    done: bool,
}

impl Iterator for ElementIter {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        if self.done {
            return None;
        }
        match &mut self.current {
            None => self.current = Some(vec![0; self.radices.len()]),
            Some(cur) => {
                let mut i = 0;
                loop {
                    if i == cur.len() {
                        self.done = true;
                        return None;
                    }
                    cur[i] += 1;
                    if cur[i] < self.radices[i] {
                        break;
                    }
                    cur[i] = 0;
                    i += 1;
                }
            }
        }
        Some(self.current.as_ref().unwrap().iter().map(|&x| BigInt::from(x)).collect())
    }
}

/// `Z^n / ⟨relations⟩`, relations given as columns.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub ngens: usize,
    pub relations: IntMatrix,
}

/// Result of bringing a presentation to normal form.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub group: FgAbelianGroup,
    /// `group.ngens × ngens`: presentation coordinates → normal coordinates.
    pub to_normal: IntMatrix,
    /// `ngens × group.ngens`: normal generators as presentation vectors.
    pub from_normal: IntMatrix,
}

impl Presentation {
    pub fn new(ngens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), ngens);
        Presentation { ngens, relations }
    }

    pub fn normalize(&self) -> Normalized {
        let n = self.ngens;
        let snf = smith_normal_form(&self.relations);
        let diag: Vec<BigInt> = (0..n)
            .map(|i| {
                if i < snf.rank {
                    snf.d[(i, i)].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
        let torsion: Vec<BigInt> = keep.iter().filter(|&&i| !diag[i].is_zero()).map(|&i| diag[i].clone()).collect();
        let rank = keep.len() - torsion.len();
        let group = FgAbelianGroup {
            rank,
            torsion,
            generator_labels: None,
        };
        let mut to_normal = snf.u.select_rows(&keep);
        // reduce torsion rows so coordinates stay small
        for (r, d) in group.torsion.iter().enumerate() {
            for j in 0..n {
                let v = to_normal[(r, j)].mod_floor(d);
                to_normal[(r, j)] = v;
            }
        }
        let from_normal = snf.u_inv.select_cols(&keep);
        Normalized {
            group,
            to_normal,
            from_normal,
        }
    }
}

/// Presentation of a direct sum, generators of each summand in order.
pub fn direct_sum_presentation(groups: &[FgAbelianGroup]) -> Presentation {
    let n: usize = groups.iter().map(FgAbelianGroup::ngens).sum();
    let t: usize = groups.iter().map(|g| g.torsion.len()).sum();
    let mut rel = IntMatrix::zeros(n, t);
    let (mut off, mut col) = (0, 0);
    for g in groups {
        for (i, d) in g.torsion.iter().enumerate() {
            rel[(off + i, col)] = d.clone();
            col += 1;
        }
        off += g.ngens();
    }
    Presentation::new(n, rel)
}

/// A subquotient `(num + den) / den` of an ambient group, both subgroups
/// given by generating columns in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: FgAbelianGroup,
    group: FgAbelianGroup,
    /// `[num | den | ambient relations]`, used to decompose elements.
    system: IntMatrix,
    num_cols: usize,
    to_normal: IntMatrix,
    reps: IntMatrix,
}

impl Subquotient {
    pub fn new(ambient: &FgAbelianGroup, num: &IntMatrix, den: &IntMatrix) -> Self {
        let n = ambient.ngens();
        assert_eq!(num.rows(), n, "numerator generators in wrong coordinates");
        assert_eq!(den.rows(), n, "denominator generators in wrong coordinates");
        let p = num.cols();
        let system = num.hstack(den).hstack(&ambient.relation_matrix());
        let rel = kernel_basis(&system).top_rows(p);
        let norm = Presentation::new(p, rel).normalize();
        let mut reps = num.mul(&norm.from_normal);
        for j in 0..reps.cols() {
            let mut c = reps.col(j);
            ambient.normalize(&mut c);
            for i in 0..n {
                reps[(i, j)] = c[i].clone();
            }
        }
        Subquotient {
            ambient: ambient.clone(),
            group: norm.group,
            system,
            num_cols: p,
            to_normal: norm.to_normal,
            reps,
        }
    }

    /// The subgroup generated by `gens` (no quotient).
    pub fn subgroup(ambient: &FgAbelianGroup, gens: &IntMatrix) -> Self {
        Self::new(ambient, gens, &IntMatrix::zeros(ambient.ngens(), 0))
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn ambient(&self) -> &FgAbelianGroup {
        &self.ambient
    }

    /// Ambient representatives of the normal-form generators, as columns.
    pub fn reps(&self) -> &IntMatrix {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> Vec<BigInt> {
        self.reps.col(i)
    }

    /// Coordinates of the class of `x`, or `None` when `x` lies outside
    /// `num + den`.
    pub fn reduce(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let z = solve_integer(&self.system, x)?;
        let mut y = self.to_normal.mul_vec(&z[..self.num_cols]);
        self.group.normalize(&mut y);
        Some(y)
    }

    /// Ambient representative of an element given in normal coordinates.
    pub fn lift(&self, y: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.reps.mul_vec(y);
        self.ambient.normalize(&mut x);
        x
    }

    /// Inclusion of a subgroup (meaningful when `den` is zero).
    pub fn inclusion(&self) -> GroupHom {
        GroupHom::new_unchecked(self.group.clone(), self.ambient.clone(), self.reps.clone())
    }

    /// Homomorphism into `target` induced by an ambient-level linear map
    /// applied to representatives.
    pub fn induced_map(&self, target: &Subquotient, linear: &IntMatrix) -> Result<GroupHom> {
        let mut cols = Vec::with_capacity(self.group.ngens());
        for j in 0..self.group.ngens() {
            let img = linear.mul_vec(&self.rep(j));
            let y = target
                .reduce(&img)
                .ok_or_else(|| Error::inconsistency("induced map leaves the target numerator"))?;
            cols.push(y);
        }
        GroupHom::new(
            self.group.clone(),
            target.group.clone(),
            IntMatrix::from_columns(target.group.ngens(), &cols),
        )
    }
}

/// Generators of `{x ∈ G : L x ∈ ⟨T⟩}` for a linear map `L : G → H` and a
/// subgroup `⟨T⟩ ⊆ H` given by generating columns.
pub fn preimage(source: &FgAbelianGroup, linear: &IntMatrix, target: &FgAbelianGroup, t: &IntMatrix) -> IntMatrix {
    let n = source.ngens();
    let sys = linear.hstack(&t.scale(&-BigInt::one())).hstack(&target.relation_matrix().scale(&-BigInt::one()));
    kernel_basis(&sys).top_rows(n)
}

/// Generators of `⟨A⟩ ∩ ⟨B⟩` inside `G`.
pub fn intersection(g: &FgAbelianGroup, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let sys = a
        .hstack(&b.scale(&-BigInt::one()))
        .hstack(&g.relation_matrix().scale(&-BigInt::one()));
    let k = kernel_basis(&sys).top_rows(a.cols());
    a.mul(&k)
}

/// Membership of `x` in the subgroup generated by the columns of `gens`.
pub fn contains(g: &FgAbelianGroup, gens: &IntMatrix, x: &[BigInt]) -> bool {
    solve_integer(&gens.hstack(&g.relation_matrix()), x).is_some()
}

/// A homomorphism between two groups in normal form; column `j` of the
/// matrix holds the image of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks shape and that every torsion generator's image is killed by its
    /// order; entries in torsion rows are reduced.
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::shape(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (j, d) in source.torsion.iter().enumerate() {
            let img: Vec<BigInt> = matrix.col(j).iter().map(|x| x * d).collect();
            if !target.is_zero_element(&img) {
                return Err(Error::domain(format!(
                    "generator {j} has order {d} but its image is not killed by {d}"
                )));
            }
        }
        Ok(Self::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: FgAbelianGroup, target: FgAbelianGroup, mut matrix: IntMatrix) -> Self {
        for (i, d) in target.torsion.iter().enumerate() {
            for j in 0..matrix.cols() {
                let v = matrix[(i, j)].mod_floor(d);
                matrix[(i, j)] = v;
            }
        }
        GroupHom { source, target, matrix }
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        Self::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.ngens()))
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), IntMatrix::zeros(target.ngens(), source.ngens()))
    }

    pub fn multiplication(g: &FgAbelianGroup, n: u64) -> Self {
        Self::new_unchecked(g.clone(), g.clone(), IntMatrix::scalar(g.ngens(), &BigInt::from(n)))
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.matrix.mul_vec(x);
        self.target.normalize(&mut y);
        y
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source || self.target.ngens() != other.source.ngens() {
            return Err(Error::shape("composition of incompatible homomorphisms"));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(&self.matrix),
        ))
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::shape("sum of homomorphisms with different endpoints"));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        ))
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::shape("difference of homomorphisms with different endpoints"));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix),
        ))
    }

    pub fn scaled(&self, k: i64) -> GroupHom {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(&BigInt::from(k)))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.col(j)))
    }

    /// Equality as maps (entries compared modulo the target relations).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    fn kernel_gens(&self) -> IntMatrix {
        preimage(
            &self.source,
            &self.matrix,
            &self.target,
            &IntMatrix::zeros(self.target.ngens(), 0),
        )
    }

    pub fn kernel_subquotient(&self) -> Subquotient {
        Subquotient::subgroup(&self.source, &self.kernel_gens())
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbelianGroup, GroupHom) {
        let sq = self.kernel_subquotient();
        (sq.group().clone(), sq.inclusion())
    }

    pub fn image_subquotient(&self) -> Subquotient {
        Subquotient::subgroup(&self.target, &self.matrix)
    }

    pub fn image(&self) -> FgAbelianGroup {
        self.image_subquotient().group().clone()
    }

    pub fn cokernel_subquotient(&self) -> Subquotient {
        Subquotient::new(&self.target, &IntMatrix::identity(self.target.ngens()), &self.matrix)
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (FgAbelianGroup, GroupHom) {
        let sq = self.cokernel_subquotient();
        let cols: Vec<Vec<BigInt>> = (0..self.target.ngens())
            .map(|i| {
                let mut e = self.target.zero_element();
                e[i] = BigInt::one();
                sq.reduce(&e).expect("every element lies in the full group")
            })
            .collect();
        let proj = Self::new_unchecked(
            self.target.clone(),
            sq.group().clone(),
            IntMatrix::from_columns(sq.group().ngens(), &cols),
        );
        (sq.group().clone(), proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_subquotient().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_subquotient().group().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `self^e` for an endomorphism.
    pub fn pow(&self, e: usize) -> Result<GroupHom> {
        if self.source != self.target {
            return Err(Error::shape("power of a non-endomorphism"));
        }
        let mut acc = Self::identity(&self.source);
        for _ in 0..e {
            acc = acc.then(self)?;
        }
        Ok(acc)
    }
}

/// Small helper for tests and callers that think in `i64`.
pub fn vec_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
