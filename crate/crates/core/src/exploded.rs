//! Exploded designs: every block replaced by all of its `j`-subsets.
//!
//! The result is a multiset. Two source blocks sharing `j` varieties both
//! contribute that `j`-subset, so exploded designs can repeat blocks even
//! when the source design does not.

use itertools::Itertools;
use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::binom;
use crate::block::Block;
use crate::constructions::{build_kc, build_kp, ConstructionError};
use crate::design::{check_admissibility, AdmissibilityFailure, Design, DesignError, DesignParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplodeError {
    #[error("j = {j} must satisfy 2 <= j <= k = {k}")]
    BadJ { j: u64, k: BigUint },
    #[error("source parameters are not admissible: {0}")]
    Inadmissible(AdmissibilityFailure),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Block size `j` of an exploded design, `2 <= j <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplodeSpec {
    j: usize,
}

impl ExplodeSpec {
    pub fn new(j: u64, k: u64) -> Result<Self, ExplodeError> {
        if j < 2 || j > k {
            return Err(ExplodeError::BadJ { j, k: k.into() });
        }
        Ok(Self { j: j as usize })
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

/// `(v, b C(k,j), r C(k-1,j-1), j, lambda C(k-2,j-2))`.
pub fn exploded_parameters(p: &DesignParams, j: u64) -> Result<DesignParams, ExplodeError> {
    check_admissibility(p).map_err(ExplodeError::Inadmissible)?;
    let k = u64::try_from(&p.k).map_err(|_| ExplodeError::BadJ { j, k: p.k.clone() })?;
    if j < 2 || j > k {
        return Err(ExplodeError::BadJ { j, k: p.k.clone() });
    }
    let c = |n, m| binom(n, m).expect("2 <= j <= k");
    Ok(DesignParams {
        v: p.v.clone(),
        b: &p.b * c(k, j),
        r: &p.r * c(k - 1, j - 1),
        k: j.into(),
        lambda: &p.lambda * c(k - 2, j - 2),
    })
}

/// Multiset union over blocks of all their `j`-subsets, multiplicities summed.
pub fn explode_design(d: &Design, j: u64) -> Result<Design, ExplodeError> {
    let k = d.block_size().ok_or(DesignError::NonUniformBlockSize)?;
    let spec = ExplodeSpec::new(j, k as u64)?;
    let mut out = Design::new(d.v());
    for (block, &mult) in d {
        for sub in block.as_slice().iter().copied().combinations(spec.j()) {
            out.insert_many(Block::from_sorted_unchecked(sub), mult)?;
        }
    }
    Ok(out)
}

/// Whether the `khat`-exploded KC design on cycles of `khat + 1` vertices
/// is exactly the KP design on paths of `khat` edges, each block once.
pub fn check_kp_equals_exploded_kc(khat: u64, max_blocks: u64) -> Result<bool, ExplodeError> {
    if khat < 2 {
        return Err(ConstructionError::Domain(format!("need khat >= 2, got {khat}")).into());
    }
    let kc = build_kc(khat + 1, max_blocks)?;
    let exploded = explode_design(&kc, khat)?;
    let kp = build_kp(khat, max_blocks)?;
    Ok(exploded == kp && exploded.max_multiplicity() == 1)
}
