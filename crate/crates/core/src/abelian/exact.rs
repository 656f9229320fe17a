use std::collections::HashSet;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::group::{FgAbelianGroup, GroupHom, Subquotient};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Groups up to this order are also checked by explicit enumeration.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// Element-by-element comparison of image and kernel sets, together
    /// with the algebraic comparison.
    Enumeration,
    /// Algebraic comparison only: composite vanishes and `Ker / Im` is the
    /// trivial group (rank 0, no invariant factors).
    Bookkeeping,
}

/// Verdict of one exactness test at one node of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCheck {
    pub node: String,
    pub method: CheckMethod,
    pub exact: bool,
}

fn enumerable(g: &FgAbelianGroup) -> bool {
    g.order_u64().is_some_and(|o| o <= ENUMERATION_LIMIT)
}

/// The subgroup generated by `gens` inside a finite group, as a set.
fn span_set(g: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> HashSet<Vec<BigInt>> {
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let zero = g.zero_element();
    let mut frontier = vec![zero.clone()];
    seen.insert(zero);
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y: Vec<BigInt> = x.iter().zip(s).map(|(a, b)| a + b).collect();
            let y = g.normalized(&y);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Exactness of `A --f--> B --g--> C` at `B`.
pub fn check_exact_at(node: &str, f: &GroupHom, g: &GroupHom) -> Result<NodeCheck> {
    if f.target() != g.source() {
        return Err(Error::shape(format!("maps do not meet at {node}")));
    }
    let b = f.target();
    let composite_zero = f.then(g)?.is_zero();
    let ker = g.kernel_subquotient();
    let quotient = Subquotient::new(b, ker.reps(), f.matrix());
    let algebraic = composite_zero && quotient.group().is_trivial();
    if !enumerable(b) {
        return Ok(NodeCheck {
            node: node.to_string(),
            method: CheckMethod::Bookkeeping,
            exact: algebraic,
        });
    }
    let kernel_set: HashSet<Vec<BigInt>> = b
        .elements()
        .expect("finite")
        .filter(|x| g.target().is_zero_element(&g.apply(x)))
        .collect();
    let image_set = span_set(b, &f.matrix().columns().iter().map(|c| b.normalized(c)).collect::<Vec<_>>());
    let enumerated = kernel_set == image_set;
    Ok(NodeCheck {
        node: node.to_string(),
        method: CheckMethod::Enumeration,
        exact: algebraic && enumerated,
    })
}

/// Exactness of `0 → A --f--> B` at `A`.
pub fn check_injective(node: &str, f: &GroupHom) -> NodeCheck {
    let algebraic = f.is_injective();
    if !enumerable(f.source()) {
        return NodeCheck {
            node: node.to_string(),
            method: CheckMethod::Bookkeeping,
            exact: algebraic,
        };
    }
    let zeros = f
        .source()
        .elements()
        .expect("finite")
        .filter(|x| f.target().is_zero_element(&f.apply(x)))
        .count();
    NodeCheck {
        node: node.to_string(),
        method: CheckMethod::Enumeration,
        exact: algebraic && zeros == 1,
    }
}

/// Exactness of `A --f--> B → 0` at `B`.
pub fn check_surjective(node: &str, f: &GroupHom) -> NodeCheck {
    let algebraic = f.is_surjective();
    let b = f.target();
    if !enumerable(b) {
        return NodeCheck {
            node: node.to_string(),
            method: CheckMethod::Bookkeeping,
            exact: algebraic,
        };
    }
    let image = span_set(b, &f.matrix().columns().iter().map(|c| b.normalized(c)).collect::<Vec<_>>());
    let order = b.order_u64().expect("finite") as usize;
    NodeCheck {
        node: node.to_string(),
        method: CheckMethod::Enumeration,
        exact: algebraic && image.len() == order,
    }
}

/// The six-term kernel/cokernel sequence attached to a composable pair
/// `A --f--> B --g--> C`:
///
/// `0 → Ker f → Ker gf → Ker g → Coker f → Coker gf → Coker g → 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SixTermSequence {
    /// `Ker f, Ker gf, Ker g, Coker f, Coker gf, Coker g`
    pub groups: Vec<FgAbelianGroup>,
    pub maps: Vec<GroupHom>,
    pub checks: Vec<NodeCheck>,
    pub exact: bool,
}

pub const SIX_TERM_NODES: [&str; 6] = ["ker f", "ker gf", "ker g", "coker f", "coker gf", "coker g"];

pub fn six_term(f: &GroupHom, g: &GroupHom) -> Result<SixTermSequence> {
    if f.target() != g.source() || f.target().ngens() != g.source().ngens() {
        return Err(Error::shape(format!(
            "f lands in {} but g starts at {}",
            f.target(),
            g.source()
        )));
    }
    let gf = f.then(g)?;
    let a = f.source();
    let b = f.target();
    let c = g.target();

    let ker_f = f.kernel_subquotient();
    let ker_gf = gf.kernel_subquotient();
    let ker_g = g.kernel_subquotient();
    let coker_f = f.cokernel_subquotient();
    let coker_gf = gf.cokernel_subquotient();
    let coker_g = g.cokernel_subquotient();

    let id_a = IntMatrix::identity(a.ngens());
    let id_c = IntMatrix::identity(c.ngens());
    let maps = vec![
        ker_f.induced_map(&ker_gf, &id_a)?,
        ker_gf.induced_map(&ker_g, f.matrix())?,
        ker_g.induced_map(&coker_f, &IntMatrix::identity(b.ngens()))?,
        coker_f.induced_map(&coker_gf, g.matrix())?,
        coker_gf.induced_map(&coker_g, &id_c)?,
    ];
    let groups: Vec<FgAbelianGroup> = [&ker_f, &ker_gf, &ker_g, &coker_f, &coker_gf, &coker_g]
        .iter()
        .map(|sq| sq.group().clone())
        .collect();

    let mut checks = vec![check_injective(SIX_TERM_NODES[0], &maps[0])];
    for i in 1..5 {
        checks.push(check_exact_at(SIX_TERM_NODES[i], &maps[i - 1], &maps[i])?);
    }
    checks.push(check_surjective(SIX_TERM_NODES[5], &maps[4]));
    let exact = checks.iter().all(|c| c.exact);
    Ok(SixTermSequence {
        groups,
        maps,
        checks,
        exact,
    })
}

/// Random `f: Z^a → Z^b`, `g: Z^b → Z^c` with `a, b, c ≤ max_size` and
/// entries in `[-bound, bound]`.
pub fn random_free_pair<R: Rng>(rng: &mut R, max_size: usize, bound: i64) -> (GroupHom, GroupHom) {
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = rng.gen_range(1..=max_size);
    }
    let mut mat = |rows: usize, cols: usize| {
        let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        IntMatrix::from_rows(&data)
    };
    let f = mat(dims[1], dims[0]);
    let g = mat(dims[2], dims[1]);
    let free = |n| FgAbelianGroup::free(n);
    (
        GroupHom::new(free(dims[0]), free(dims[1]), f).expect("free source"),
        GroupHom::new(free(dims[1]), free(dims[2]), g).expect("free source"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hom(src: &FgAbelianGroup, tgt: &FgAbelianGroup, rows: &[Vec<i64>]) -> GroupHom {
        let m = if tgt.ngens() == 0 {
            IntMatrix::zeros(0, src.ngens())
        } else {
            IntMatrix::from_rows(rows)
        };
        GroupHom::new(src.clone(), tgt.clone(), m).unwrap()
    }

    #[test]
    fn multiplication_by_two_then_three() {
        let z = FgAbelianGroup::free(1);
        let seq = six_term(&hom(&z, &z, &[vec![2]]), &hom(&z, &z, &[vec![3]])).unwrap();
        assert!(seq.exact);
        let expect = [
            FgAbelianGroup::trivial(),
            FgAbelianGroup::trivial(),
            FgAbelianGroup::trivial(),
            FgAbelianGroup::cyclic(2),
            FgAbelianGroup::cyclic(6),
            FgAbelianGroup::cyclic(3),
        ];
        assert_eq!(seq.groups, expect);
    }

    #[test]
    fn projection_then_zero() {
        let z = FgAbelianGroup::free(1);
        let z2 = FgAbelianGroup::cyclic(2);
        let zero = FgAbelianGroup::trivial();
        let seq = six_term(&hom(&z, &z2, &[vec![1]]), &hom(&z2, &zero, &[])).unwrap();
        assert!(seq.exact);
        assert_eq!(seq.groups[0], z);
        assert_eq!(seq.groups[1], z);
        assert_eq!(seq.groups[2], z2);
        assert!(seq.groups[3..].iter().all(FgAbelianGroup::is_trivial));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let z = FgAbelianGroup::free(1);
        let z2 = FgAbelianGroup::free(2);
        let f = hom(&z, &z, &[vec![1]]);
        let g = hom(&z2, &z, &[vec![1, 1]]);
        assert!(matches!(six_term(&f, &g), Err(Error::Shape(_))));
    }

    #[test]
    fn detects_non_exactness() {
        // Z --2--> Z --1--> Z is not exact at the middle (composite ≠ 0)
        let z = FgAbelianGroup::free(1);
        let chk = check_exact_at("mid", &hom(&z, &z, &[vec![2]]), &hom(&z, &z, &[vec![1]])).unwrap();
        assert!(!chk.exact);
        // Z/4 --2--> Z/4 --2--> Z/4 is exact at the middle
        let z4 = FgAbelianGroup::cyclic(4);
        let chk = check_exact_at("mid", &hom(&z4, &z4, &[vec![2]]), &hom(&z4, &z4, &[vec![2]])).unwrap();
        assert!(chk.exact);
        assert_eq!(chk.method, CheckMethod::Enumeration);
    }
}
