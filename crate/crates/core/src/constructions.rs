//! KP designs (paths of `K_{2k-1}`), KC designs (cycles of `K_{2k-3}`), the
//! fan/rectangle/triangle 3-design on `K_5`, and the adjacent/nonadjacent
//! pair counts that show paths balance only at `n = 2k - 1`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{binom, factorial, perm};
use crate::design::{BalanceAccumulator, BalanceReport, Design, DesignError, DesignParams};
use crate::graph::{edge_endpoints, CompleteGraph, GraphError};
use crate::subgraph::{
    enumerate_cycles, enumerate_cycles_from, enumerate_k5_special, enumerate_paths,
    enumerate_paths_from, walk_edges, SubgraphError,
};

/// Default ceiling on the number of blocks a build will materialize.
pub const DEFAULT_MAX_BLOCKS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0}")]
    Domain(String),
    #[error("{family} khat={khat} has {blocks} blocks, above the ceiling of {max}")]
    Capacity {
        family: Family,
        khat: u64,
        blocks: BigUint,
        max: u64,
    },
    #[error(transparent)]
    Subgraph(#[from] SubgraphError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which subgraph family supplies the blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Paths with `khat` edges in `K_{2 khat - 1}`.
    Kp,
    /// Cycles on `khat` vertices in `K_{2 khat - 3}`.
    Kc,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Kp => "KP",
            Family::Kc => "KC",
        })
    }
}

/// Path length `khat >= 2`, built on `n = 2 khat - 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KpSpec {
    khat: u64,
}

impl KpSpec {
    pub fn new(khat: u64) -> Result<Self, ConstructionError> {
        if khat < 2 {
            return Err(ConstructionError::Domain(format!(
                "KP designs need khat >= 2, got {khat}"
            )));
        }
        Ok(Self { khat })
    }

    pub fn khat(&self) -> u64 {
        self.khat
    }

    pub fn n(&self) -> u64 {
        2 * self.khat - 1
    }
}

/// Cycle length `khat >= 3`, built on `n = 2 khat - 3` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KcSpec {
    khat: u64,
}

impl KcSpec {
    pub fn new(khat: u64) -> Result<Self, ConstructionError> {
        if khat < 3 {
            return Err(ConstructionError::Domain(format!(
                "KC designs need khat >= 3, got {khat}"
            )));
        }
        Ok(Self { khat })
    }

    pub fn khat(&self) -> u64 {
        self.khat
    }

    pub fn n(&self) -> u64 {
        2 * self.khat - 3
    }
}

/// Closed-form parameters of the KP design with paths of `khat` edges.
pub fn kp_parameters(khat: u64) -> Result<DesignParams, ConstructionError> {
    let spec = KpSpec::new(khat)?;
    let k = spec.khat;
    let v = binom(spec.n(), 2).expect("n >= 3");
    let b = factorial(2 * k - 1) / (factorial(k - 2) * 2u32);
    let r = factorial(2 * k - 3) * k / factorial(k - 2);
    let lambda = factorial(2 * k - 4) * (k - 1) / factorial(k - 2);
    Ok(DesignParams::new(v, b, r, k, lambda))
}

/// Closed-form parameters of the KC design with cycles on `khat` vertices.
pub fn kc_parameters(khat: u64) -> Result<DesignParams, ConstructionError> {
    let spec = KcSpec::new(khat)?;
    let k = spec.khat;
    let v = binom(spec.n(), 2).expect("n >= 3");
    let b = factorial(2 * k - 3) / (factorial(k - 3) * (2 * k));
    let r = factorial(2 * k - 5) / factorial(k - 3);
    let lambda = factorial(2 * k - 6) / factorial(k - 3);
    Ok(DesignParams::new(v, b, r, k, lambda))
}

fn parameters(family: Family, khat: u64) -> Result<DesignParams, ConstructionError> {
    match family {
        Family::Kp => kp_parameters(khat),
        Family::Kc => kc_parameters(khat),
    }
}

fn graph_order(family: Family, khat: u64) -> u64 {
    match family {
        Family::Kp => 2 * khat - 1,
        Family::Kc => 2 * khat - 3,
    }
}

/// Refuses families whose block count exceeds `max_blocks`.
fn check_capacity(family: Family, khat: u64, max_blocks: u64) -> Result<u32, ConstructionError> {
    let params = parameters(family, khat)?;
    if params.b > BigUint::from(max_blocks) {
        return Err(ConstructionError::Capacity {
            family,
            khat,
            blocks: params.b,
            max: max_blocks,
        });
    }
    let n = u32::try_from(graph_order(family, khat))
        .map_err(|_| ConstructionError::Domain(format!("K_n too large for khat={khat}")))?;
    CompleteGraph::new(n)?;
    Ok(n)
}

/// Builds the KP design: every path with `khat` edges in `K_{2 khat - 1}`.
pub fn build_kp(khat: u64, max_blocks: u64) -> Result<Design, ConstructionError> {
    let n = check_capacity(Family::Kp, khat, max_blocks)?;
    let g = CompleteGraph::new(n)?;
    let mut design = Design::new(g.size());
    let mut stream = enumerate_paths(n, khat as u32)?;
    let mut edges = Vec::new();
    while let Some(word) = stream.next_vertices() {
        walk_edges(word, n, false, &mut edges);
        design.insert(crate::block::Block::from_sorted_unchecked(edges.clone()))?;
    }
    Ok(design)
}

/// Builds the KC design: every cycle on `khat` vertices in `K_{2 khat - 3}`.
pub fn build_kc(khat: u64, max_blocks: u64) -> Result<Design, ConstructionError> {
    let n = check_capacity(Family::Kc, khat, max_blocks)?;
    let g = CompleteGraph::new(n)?;
    let mut design = Design::new(g.size());
    let mut stream = enumerate_cycles(n, khat as u32)?;
    let mut edges = Vec::new();
    while let Some(word) = stream.next_vertices() {
        walk_edges(word, n, true, &mut edges);
        design.insert(crate::block::Block::from_sorted_unchecked(edges.clone()))?;
    }
    Ok(design)
}

pub fn build(family: Family, khat: u64, max_blocks: u64) -> Result<Design, ConstructionError> {
    match family {
        Family::Kp => build_kp(khat, max_blocks),
        Family::Kc => build_kc(khat, max_blocks),
    }
}

/// The 30-block 3-(10, 4, 1) design on the edges of `K_5`.
pub fn build_k5_special() -> Design {
    Design::from_blocks(10, enumerate_k5_special().map(|(_, b)| b))
        .expect("K_5 blocks use edge ids below 10")
}

/// Verifies a KP or KC design while generating it, without storing blocks.
///
/// The stream is split by first vertex; partitions are counted on the
/// current rayon pool and merged in partition order, so the report does
/// not depend on the number of threads.
pub fn verify_streaming(
    family: Family,
    khat: u64,
    max_blocks: u64,
) -> Result<BalanceReport, ConstructionError> {
    let n = check_capacity(family, khat, max_blocks)?;
    let v = CompleteGraph::new(n)?.size();
    let khat = khat as u32;
    let partials: Vec<BalanceAccumulator> = (0..n)
        .into_par_iter()
        .map(|first| -> Result<BalanceAccumulator, ConstructionError> {
            let mut acc = BalanceAccumulator::new(v)?;
            let mut edges = Vec::new();
            match family {
                Family::Kp => {
                    let mut s = enumerate_paths_from(n, khat, first)?;
                    while let Some(word) = s.next_vertices() {
                        walk_edges(word, n, false, &mut edges);
                        acc.add(&edges, 1)?;
                    }
                }
                Family::Kc => {
                    let mut s = enumerate_cycles_from(n, khat, first)?;
                    while let Some(word) = s.next_vertices() {
                        walk_edges(word, n, true, &mut edges);
                        acc.add(&edges, 1)?;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, _>>()?;
    let mut total = BalanceAccumulator::new(v)?;
    for part in &partials {
        total.merge(part)?;
    }
    Ok(total.finish()?)
}

/// How many length-`khat` paths of `K_n` contain a fixed adjacent edge
/// pair, and how many contain a fixed nonadjacent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImbalanceWitness {
    pub n: u64,
    pub khat: u64,
    pub lambda_adj: BigUint,
    pub lambda_non: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessVerdict {
    Balanced,
    AdjacentFewer,
    AdjacentMore,
}

impl fmt::Display for WitnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessVerdict::Balanced => "balanced",
            WitnessVerdict::AdjacentFewer => "adjacent-fewer",
            WitnessVerdict::AdjacentMore => "adjacent-more",
        })
    }
}

impl ImbalanceWitness {
    pub fn verdict(&self) -> WitnessVerdict {
        use std::cmp::Ordering::*;
        match self.lambda_adj.cmp(&self.lambda_non) {
            Equal => WitnessVerdict::Balanced,
            Less => WitnessVerdict::AdjacentFewer,
            Greater => WitnessVerdict::AdjacentMore,
        }
    }
}

impl fmt::Display for ImbalanceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lambda_adj={} lambda_non={} {}",
            self.lambda_adj,
            self.lambda_non,
            self.verdict()
        )
    }
}

/// Closed-form shared-block counts for adjacent and nonadjacent edge pairs.
///
/// `khat = 2` is rejected: a two-edge path never holds two disjoint edges.
pub fn imbalance_witness(n: u64, khat: u64) -> Result<ImbalanceWitness, ConstructionError> {
    if khat < 3 || n < khat + 1 || n < 4 {
        return Err(ConstructionError::Domain(format!(
            "witness needs khat >= 3, n >= khat + 1 and n >= 4 (n={n}, khat={khat})"
        )));
    }
    let arith = |e: crate::arith::ArithError| ConstructionError::Domain(e.to_string());
    let lambda_adj = perm(n - 3, khat - 2).map_err(arith)? * (khat - 1);
    let lambda_non = binom(khat - 1, 2).map_err(arith)? * perm(n - 4, khat - 3).map_err(arith)? * 4u32;
    Ok(ImbalanceWitness {
        n,
        khat,
        lambda_adj,
        lambda_non,
    })
}

/// Distinct pair counts over adjacent and over nonadjacent edge pairs,
/// taken from the full path enumeration of `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCensus {
    pub adjacent: BTreeSet<u64>,
    pub nonadjacent: BTreeSet<u64>,
}

pub fn path_pair_census(n: u32, khat: u32) -> Result<PairCensus, ConstructionError> {
    let v = CompleteGraph::new(n)?.size();
    let mut counts = vec![0u64; (v as usize) * (v as usize)];
    let mut edges = Vec::new();
    let mut stream = enumerate_paths(n, khat)?;
    while let Some(word) = stream.next_vertices() {
        walk_edges(word, n, false, &mut edges);
        for (i, &x) in edges.iter().enumerate() {
            for &y in &edges[i + 1..] {
                counts[x as usize * v as usize + y as usize] += 1;
            }
        }
    }
    let mut census = PairCensus {
        adjacent: BTreeSet::new(),
        nonadjacent: BTreeSet::new(),
    };
    for x in 0..v {
        let ex = edge_endpoints(x, n)?;
        for y in x + 1..v {
            let ey = edge_endpoints(y, n)?;
            let c = counts[x as usize * v as usize + y as usize];
            if ex.shares_vertex(&ey) {
                census.adjacent.insert(c);
            } else {
                census.nonadjacent.insert(c);
            }
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::perm;
    use crate::design::{verify_bibd, verify_t_design, Verdict};

    fn p(v: u64, b: u64, r: u64, k: u64, l: u64) -> DesignParams {
        DesignParams::new(v, b, r, k, l)
    }

    #[test]
    fn kp_parameter_examples() {
        assert_eq!(kp_parameters(3).unwrap(), p(10, 60, 18, 3, 4));
        assert_eq!(kp_parameters(2).unwrap(), p(3, 3, 2, 2, 1));
        assert_eq!(kp_parameters(4).unwrap(), p(21, 1260, 240, 4, 36));
        assert!(kp_parameters(1).is_err());
    }

    #[test]
    fn kc_parameter_examples() {
        assert_eq!(kc_parameters(4).unwrap(), p(10, 15, 6, 4, 2));
        assert_eq!(kc_parameters(3).unwrap(), p(3, 1, 1, 3, 1));
        assert_eq!(kc_parameters(5).unwrap(), p(21, 252, 60, 5, 12));
        assert!(kc_parameters(2).is_err());
    }

    #[test]
    fn closed_forms_match_arrangement_counts_up_to_50() {
        for khat in 2..=50u64 {
            let kp = kp_parameters(khat).unwrap();
            assert_eq!(kp.b.clone() * 2u32, perm(2 * khat - 1, khat + 1).unwrap());
            assert_eq!(kp.r, perm(2 * khat - 3, khat - 1).unwrap() * khat);
            assert_eq!(kp.lambda, perm(2 * khat - 4, khat - 2).unwrap() * (khat - 1));
            assert_eq!(crate::design::check_admissibility(&kp), Ok(()));
            if khat >= 3 {
                let kc = kc_parameters(khat).unwrap();
                assert_eq!(kc.b.clone() * (2 * khat), perm(2 * khat - 3, khat).unwrap());
                assert_eq!(crate::design::check_admissibility(&kc), Ok(()));
            }
        }
    }

    #[test]
    fn builds_match_closed_forms() {
        for khat in 2..=4 {
            let d = build_kp(khat, DEFAULT_MAX_BLOCKS).unwrap();
            let report = verify_bibd(&d).unwrap();
            assert_eq!(report.verdict, Verdict::Balanced);
            assert_eq!(report.params.unwrap(), kp_parameters(khat).unwrap());
            assert_eq!(d.max_multiplicity(), 1);
        }
        for khat in 4..=5 {
            let d = build_kc(khat, DEFAULT_MAX_BLOCKS).unwrap();
            let report = verify_bibd(&d).unwrap();
            assert_eq!(report.verdict, Verdict::Balanced);
            assert_eq!(report.params.unwrap(), kc_parameters(khat).unwrap());
        }
        let triangle = build_kc(3, DEFAULT_MAX_BLOCKS).unwrap();
        assert_eq!(triangle.block_count(), 1);
        assert_eq!(triangle.blocks().next().unwrap().as_slice(), &[0, 1, 2]);
        let report = verify_bibd(&triangle).unwrap();
        assert_eq!(report.verdict, Verdict::Complete);
        assert_eq!(report.params.unwrap(), kc_parameters(3).unwrap());
    }

    #[test]
    fn k5_special_is_3_design() {
        let d = build_k5_special();
        assert_eq!(d.block_count(), 30);
        assert_eq!((d.v(), d.block_size()), (10, Some(4)));
        assert_eq!(verify_t_design(&d, 3).unwrap().lambda_t(), Some(1));
    }

    #[test]
    fn capacity_guard() {
        let err = build_kp(5, 1000).unwrap_err();
        assert!(matches!(err, ConstructionError::Capacity { max: 1000, .. }));
        assert!(matches!(
            build_kc(40, DEFAULT_MAX_BLOCKS),
            Err(ConstructionError::Capacity { .. })
        ));
        assert!(verify_streaming(Family::Kp, 30, DEFAULT_MAX_BLOCKS).is_err());
    }

    #[test]
    fn streaming_matches_stored_verification() {
        for khat in 2..=4 {
            let stored = verify_bibd(&build_kp(khat, DEFAULT_MAX_BLOCKS).unwrap()).unwrap();
            let streamed = verify_streaming(Family::Kp, khat, DEFAULT_MAX_BLOCKS).unwrap();
            assert_eq!(stored, streamed);
        }
        for khat in 3..=5 {
            let stored = verify_bibd(&build_kc(khat, DEFAULT_MAX_BLOCKS).unwrap()).unwrap();
            let streamed = verify_streaming(Family::Kc, khat, DEFAULT_MAX_BLOCKS).unwrap();
            assert_eq!(stored, streamed);
        }
    }

    #[test]
    fn witness_examples() {
        let w = imbalance_witness(5, 3).unwrap();
        assert_eq!((w.lambda_adj.clone(), w.lambda_non.clone()), (4u32.into(), 4u32.into()));
        assert_eq!(w.verdict(), WitnessVerdict::Balanced);
        assert_eq!(w.to_string(), "lambda_adj=4 lambda_non=4 balanced");
        let w = imbalance_witness(4, 3).unwrap();
        assert_eq!((w.lambda_adj.clone(), w.lambda_non.clone()), (2u32.into(), 4u32.into()));
        assert_eq!(w.verdict(), WitnessVerdict::AdjacentFewer);
        let w = imbalance_witness(6, 3).unwrap();
        assert_eq!((w.lambda_adj.clone(), w.lambda_non.clone()), (6u32.into(), 4u32.into()));
        assert_eq!(w.verdict(), WitnessVerdict::AdjacentMore);
        assert!(imbalance_witness(5, 2).is_err());
        assert!(imbalance_witness(4, 4).is_err());
        assert!(imbalance_witness(3, 3).is_err());
    }

    #[test]
    fn witness_sign_law() {
        for khat in 3..=12u64 {
            for n in (khat + 1).max(4)..=30 {
                let w = imbalance_witness(n, khat).unwrap();
                let expected = match n.cmp(&(2 * khat - 1)) {
                    std::cmp::Ordering::Less => WitnessVerdict::AdjacentFewer,
                    std::cmp::Ordering::Equal => WitnessVerdict::Balanced,
                    std::cmp::Ordering::Greater => WitnessVerdict::AdjacentMore,
                };
                assert_eq!(w.verdict(), expected, "n={n} khat={khat}");
            }
        }
    }

    #[test]
    fn census_agrees_with_witness() {
        for khat in 3..=4u32 {
            for n in khat + 1..=7 {
                let census = path_pair_census(n, khat).unwrap();
                let w = imbalance_witness(n.into(), khat.into()).unwrap();
                let one = |x: &BigUint| BTreeSet::from([u64::try_from(x).unwrap()]);
                assert_eq!(census.adjacent, one(&w.lambda_adj), "n={n} khat={khat}");
                assert_eq!(census.nonadjacent, one(&w.lambda_non), "n={n} khat={khat}");
            }
        }
    }
}
