//! The capitulation kernel `Ker(j: Cl_Σ(F) → Cl_Σ(K))` computed three ways:
//! as `H¹(Δ, O*_{K,Σ})`, as `Ĥ⁻¹(Δ, O*_{K,Σ})`, and class by class through
//! exact Σ-principality in `K`. The four-term 2-torsion sequence
//!
//! `0 → (O*_F ∩ (O*_K)²)/(O*_F)² → {±1} → Ker j → Ψ_N/O*_F(O*_K)² → 0`
//!
//! is assembled from the same module and checked for exactness.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{FgAbelianGroup, IntMatrix, NodeCheck};
use crate::biquad::relative::{PrincipalityCertificate, RelativeExtensionData};
use crate::biquad::RelativeExtension;
use crate::cohomology::{CoolSequence, CyclicModule};
use crate::error::{Error, Result};
use crate::quadfield::QuadIdeal;
use crate::serial;

/// How the `{±1}` term is realized.
pub const PM1_REALIZATION: &str = "H^1(Δ, μ₂) with μ₂ = (O*_K,Σ)[2]";

/// `Ker j = H¹(Δ, O*_{K,Σ})`.
pub fn capitulation_kernel(e: &RelativeExtension) -> Result<FgAbelianGroup> {
    Ok(e.s_unit_module()?.h1())
}

/// `{u : N_{K/F}(u) = 1}/(1 − τ)O*_{K,Σ}`.
pub fn remark_fin_kernel(e: &RelativeExtension) -> Result<FgAbelianGroup> {
    Ok(e.s_unit_module()?.tate_h_minus1().group().clone())
}

/// A class of `Cl_Σ(F)` that becomes Σ-principal in `K`.
#[derive(Clone, Debug, Serialize)]
pub struct CapitulatingClass {
    #[serde(serialize_with = "serial::ints")]
    pub class: Vec<BigInt>,
    pub ideal: QuadIdeal,
    pub certificate: PrincipalityCertificate,
}

/// Outcome of testing every class of `Cl_Σ(F)`.
#[derive(Clone, Debug, Serialize)]
pub struct DirectCapitulation {
    /// Nontrivial capitulating classes with certificates.
    pub classes: Vec<CapitulatingClass>,
    /// Order of the subgroup they generate, the trivial class included.
    pub order: u64,
    /// Classes tested, the trivial class included.
    pub tested: u64,
}

/// Every class of `Cl_Σ(F)` is extended to `K` and tested; positives carry
/// generators, negatives are exact.
pub fn direct_capitulation(e: &RelativeExtension) -> Result<DirectCapitulation> {
    let cl = e.sigma_class_group();
    let order = cl.group.order_u64().expect("class groups are finite");
    if order > e.bounds().search {
        return Err(Error::BoundExceeded { what: "Σ-class group size".into(), bound: e.bounds().search });
    }
    let mut classes = Vec::new();
    for (class, ideal) in cl.classes() {
        if class.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(certificate) = e.is_principal_sigma(&e.extend_ideal(&ideal))? {
            classes.push(CapitulatingClass { class, ideal, certificate });
        }
    }
    let gens: Vec<Vec<BigInt>> = classes.iter().map(|c| c.class.clone()).collect();
    let span = span_order(&cl.group, &gens);
    if span != classes.len() as u64 + 1 {
        return Err(Error::inconsistency(format!(
            "capitulating classes generate a group of order {span}, but {} classes capitulate",
            classes.len() + 1
        )));
    }
    Ok(DirectCapitulation { classes, order: span, tested: order })
}

fn span_order(g: &FgAbelianGroup, gens: &[Vec<BigInt>]) -> u64 {
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![g.zero_element()];
    seen.insert(g.zero_element());
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y: Vec<BigInt> = x.iter().zip(s).map(|(a, b)| a + b).collect();
            let y = g.normalized(&y);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len() as u64
}

/// The four lac terms with their maps and exactness verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct LacTerms {
    #[serde(serialize_with = "serial::group")]
    pub fixed_squares: FgAbelianGroup,
    #[serde(serialize_with = "serial::group")]
    pub pm1: FgAbelianGroup,
    pub pm1_realization: &'static str,
    #[serde(serialize_with = "serial::group")]
    pub ker_j: FgAbelianGroup,
    #[serde(serialize_with = "serial::group")]
    pub psi_quotient: FgAbelianGroup,
    #[serde(serialize_with = "serial::matrices")]
    pub maps: Vec<IntMatrix>,
    pub checks: Vec<NodeCheck>,
    pub exact: bool,
}

impl LacTerms {
    fn from_sequence(seq: &CoolSequence) -> Self {
        LacTerms {
            fixed_squares: seq.term1.clone(),
            pm1: seq.term2.clone(),
            pm1_realization: PM1_REALIZATION,
            ker_j: seq.term3.clone(),
            psi_quotient: seq.term4.clone(),
            maps: seq.maps.iter().map(|m| m.matrix().clone()).collect(),
            checks: seq.checks.clone(),
            exact: seq.exact,
        }
    }

    pub fn orders(&self) -> [u64; 4] {
        [&self.fixed_squares, &self.pm1, &self.ker_j, &self.psi_quotient]
            .map(|g| g.order_u64().expect("finite 2-torsion term"))
    }

    /// `|term1|·|Ker j| = |{±1}|·|term4|`.
    pub fn order_identity(&self) -> bool {
        let [a, b, c, d] = self.orders();
        a * c == b * d
    }

    pub fn two_torsion(&self) -> bool {
        [&self.fixed_squares, &self.pm1, &self.ker_j, &self.psi_quotient].iter().all(|g| g.is_killed_by(2))
    }
}

/// `O*_{K,Σ}` with the matrix of `τ`.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    #[serde(serialize_with = "serial::group")]
    pub group: FgAbelianGroup,
    #[serde(serialize_with = "serial::matrix")]
    pub tau: IntMatrix,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapitulationReport {
    pub extension: RelativeExtensionData,
    #[serde(serialize_with = "serial::group")]
    pub cl_sigma_f: FgAbelianGroup,
    pub s_unit_module: ModuleSummary,
    #[serde(serialize_with = "serial::group")]
    pub ker_j_h1: FgAbelianGroup,
    #[serde(serialize_with = "serial::group")]
    pub ker_j_fin: FgAbelianGroup,
    pub ker_j_direct: DirectCapitulation,
    pub lac_terms: LacTerms,
    pub order_identity: bool,
    pub two_torsion: bool,
    pub fixed_points_match: bool,
    pub consistent: bool,
    /// Disagreements found, empty when consistent.
    pub diagnostics: Vec<String>,
}

impl CapitulationReport {
    pub fn ker_j_order(&self) -> u64 {
        self.ker_j_h1.order_u64().expect("finite")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Assembles every route and records disagreements without failing on them.
pub fn assemble_report(e: &RelativeExtension) -> Result<CapitulationReport> {
    let module = e.s_unit_module()?;
    let units = e.s_units()?;
    let mut diagnostics = Vec::new();
    let fixed_points_match = match e.check_fixed_points(&module) {
        Ok(()) => true,
        Err(err) => {
            diagnostics.push(err.to_string());
            false
        }
    };
    let cl = e.sigma_class_group().group;
    let h1 = module.h1();
    let fin = module.tate_h_minus1().group().clone();
    let direct = direct_capitulation(e)?;
    let seq = module.cool_sequence()?;
    let lac = LacTerms::from_sequence(&seq);

    if h1 != fin {
        diagnostics.push(format!("H^1 = {h1} but Ĥ^-1 = {fin}"));
    }
    if lac.ker_j != h1 {
        diagnostics.push(format!("lac Ker j term {} differs from H^1 = {h1}", lac.ker_j));
    }
    if h1.order_u64() != Some(direct.order) {
        diagnostics.push(format!("H^1 = {h1} but {} classes capitulate", direct.order));
    }
    if !lac.exact {
        diagnostics.push("lac sequence is not exact".into());
    }
    let order_identity = lac.order_identity();
    if !order_identity {
        diagnostics.push(format!("order identity fails: {:?}", lac.orders()));
    }
    let two_torsion = lac.two_torsion() && h1.is_killed_by(2);
    if !two_torsion {
        diagnostics.push("a term is not 2-torsion".into());
    }
    if lac.pm1 != FgAbelianGroup::cyclic(2) {
        diagnostics.push(format!("{{±1}} term is {}", lac.pm1));
    }
    let consistent = diagnostics.is_empty();
    Ok(CapitulationReport {
        extension: e.data(),
        cl_sigma_f: cl,
        s_unit_module: ModuleSummary {
            group: module.group().clone(),
            tau: module.sigma().matrix().clone(),
            generators: units.generators().iter().map(ToString::to_string).collect(),
        },
        ker_j_h1: h1,
        ker_j_fin: fin,
        ker_j_direct: direct,
        lac_terms: lac,
        order_identity,
        two_torsion,
        fixed_points_match,
        consistent,
        diagnostics,
    })
}

/// The report, or an inconsistency alarm carrying the full report.
pub fn corollary_lac_report(e: &RelativeExtension) -> Result<CapitulationReport> {
    let r = assemble_report(e)?;
    if !r.consistent {
        return Err(Error::inconsistency(format!("routes disagree: {}", r.to_json())));
    }
    Ok(r)
}

/// The report with its wall-clock time, kept out of the canonical body.
pub fn timed_report(e: &RelativeExtension) -> Result<(CapitulationReport, Duration)> {
    let t = Instant::now();
    let r = corollary_lac_report(e)?;
    Ok((r, t.elapsed()))
}

/// `A(K)` with its Galois involution, as supplied by the user.
#[derive(Clone, Debug)]
pub struct MordellWeilInput {
    pub group: FgAbelianGroup,
    pub tau: IntMatrix,
    pub fixed_claim: FgAbelianGroup,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MordellWeilReport {
    pub provenance: String,
    #[serde(serialize_with = "serial::groups")]
    pub terms: Vec<FgAbelianGroup>,
    pub term_labels: [&'static str; 4],
    pub checks: Vec<NodeCheck>,
    pub exact: bool,
    #[serde(skip)]
    pub sequence: CoolSequence,
}

pub const MORDELL_WEIL_LABELS: [&str; 4] = [
    "A(F) ∩ 2A(K) / 2A(F)",
    "H^1(Δ, A(K)_2)",
    "H^1(Δ, A(K)), containing Ш_Σ(Δ, A(K))",
    "Ψ_N(2, A) / (A(F) + 2A(K))",
];

/// The four-term sequence for `M = A(K)`; the third term is the global `H¹`.
pub fn mordell_weil_sequence(data: &MordellWeilInput) -> Result<MordellWeilReport> {
    let module = CyclicModule::new(data.group.clone(), data.tau.clone(), 2)?;
    let fixed = module.fixed_points();
    if fixed != data.fixed_claim {
        return Err(Error::domain(format!(
            "claimed A(F) = {} but the fixed submodule is {fixed}",
            data.fixed_claim
        )));
    }
    let sequence = module.cool_sequence()?;
    Ok(MordellWeilReport {
        provenance: data.provenance.clone(),
        terms: sequence.terms().iter().map(|&g| g.clone()).collect(),
        term_labels: MORDELL_WEIL_LABELS,
        checks: sequence.checks.clone(),
        exact: sequence.exact,
        sequence,
    })
}

/// Orders of the four lac terms of a synthetic module.
pub fn lac_orders(module: &CyclicModule) -> Result<([u64; 4], bool)> {
    let seq = module.cool_sequence()?;
    let lac = LacTerms::from_sequence(&seq);
    Ok((lac.orders(), lac.exact))
}

/// Order as `u64`, for finite groups.
pub fn order(g: &FgAbelianGroup) -> Option<u64> {
    g.order().and_then(|o| o.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Bounds;

    fn ext(f: i64, adjoin: i64, primes: &[u64]) -> RelativeExtension {
        RelativeExtension::from_fields(f, adjoin, primes, Bounds::default()).unwrap()
    }

    #[test]
    fn flagship() {
        let e = ext(-5, -1, &[]);
        let r = corollary_lac_report(&e).unwrap();
        assert_eq!(r.ker_j_order(), 2);
        assert_eq!(r.lac_terms.orders(), [2, 2, 2, 2]);
        assert_eq!(r.ker_j_direct.classes.len(), 1);
        assert!(r.ker_j_direct.classes[0].certificate.verify(&e));
        assert_eq!(capitulation_kernel(&e).unwrap(), remark_fin_kernel(&e).unwrap());
    }

    #[test]
    fn q_sqrt2_sqrt_minus3() {
        let e = ext(-6, 2, &[]);
        let r = corollary_lac_report(&e).unwrap();
        assert_eq!(r.ker_j_order(), 2);
        assert_eq!(r.ker_j_direct.classes.len(), 1);
    }

    #[test]
    fn trivial_sigma_class_group() {
        let e = ext(-1, 2, &[2]);
        let r = corollary_lac_report(&e).unwrap();
        assert!(r.ker_j_h1.is_trivial());
        assert!(r.lac_terms.psi_quotient.is_trivial());
        assert!(r.ker_j_direct.classes.is_empty());
        assert!(r.lac_terms.exact);
    }

    #[test]
    fn synthetic_modules() {
        let z4 = CyclicModule::new(FgAbelianGroup::cyclic(4), IntMatrix::from_rows(&[vec![3]]), 2).unwrap();
        assert_eq!(lac_orders(&z4).unwrap(), ([2, 2, 2, 2], true));
        let z = CyclicModule::new(FgAbelianGroup::free(1), IntMatrix::from_rows(&[vec![-1]]), 2).unwrap();
        assert_eq!(z.tate_h_minus1().group(), &FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn mordell_weil_examples() {
        let cases: [(FgAbelianGroup, Vec<Vec<i64>>, FgAbelianGroup, [u64; 4]); 2] = [
            (FgAbelianGroup::cyclic(2), vec![vec![1]], FgAbelianGroup::cyclic(2), [1, 2, 2, 1]),
            (FgAbelianGroup::free(2), vec![vec![0, 1], vec![1, 0]], FgAbelianGroup::free(1), [1, 1, 1, 1]),
        ];
        for (g, t, fixed, orders) in cases {
            let input = MordellWeilInput {
                group: g,
                tau: IntMatrix::from_rows(&t),
                fixed_claim: fixed,
                provenance: "test".into(),
            };
            let r = mordell_weil_sequence(&input).unwrap();
            assert!(r.exact);
            let got: Vec<u64> = r.terms.iter().map(|t| order(t).unwrap()).collect();
            assert_eq!(got, orders);
        }
        let anti = MordellWeilInput {
            group: FgAbelianGroup::free(1),
            tau: IntMatrix::from_rows(&[vec![-1]]),
            fixed_claim: FgAbelianGroup::trivial(),
            provenance: "test".into(),
        };
        let r = mordell_weil_sequence(&anti).unwrap();
        let got: Vec<u64> = r.terms.iter().map(|t| order(t).unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 2]);
        let bad = MordellWeilInput { tau: IntMatrix::from_rows(&[vec![2]]), ..anti.clone() };
        assert!(mordell_weil_sequence(&bad).is_err());
        let wrong = MordellWeilInput { fixed_claim: FgAbelianGroup::free(1), ..anti };
        assert!(mordell_weil_sequence(&wrong).is_err());
    }

    #[test]
    fn deterministic_json() {
        let a = corollary_lac_report(&ext(-5, -1, &[])).unwrap().to_json();
        let b = corollary_lac_report(&ext(-5, -1, &[])).unwrap().to_json();
        assert_eq!(a, b);
    }
}
