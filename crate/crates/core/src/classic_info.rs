//! Shannon-based dependence measures on explicit joint tables: mutual
//! information, multi-information and interaction information.
//!
//! These see only the macroscale distribution, so all three vanish on a
//! product table regardless of the entropic parameters used elsewhere.

use serde::{Deserialize, Serialize};

use crate::distribution::{marginalize, JointTable};
use crate::entropy::{bgs_slice, check_base};
use crate::error::{Error, Result};

/// Interaction information enumerates every axis subset; tables with more
/// axes than this are rejected.
pub const MAX_INTERACTION_AXES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    MutualInformation,
    MultiInformation,
    InteractionInformation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoResult {
    pub value: f64,
    pub measure: Measure,
    pub log_base: f64,
}

fn subset_entropy(joint: &JointTable, axes: &[usize], base: f64) -> f64 {
    let table = marginalize(joint, axes).expect("axes in range");
    bgs_slice(table.probs(), base)
}

fn marginal_entropy_sum(joint: &JointTable, base: f64) -> f64 {
    (0..joint.arity())
        .map(|a| subset_entropy(joint, &[a], base))
        .sum()
}

/// `I(X; Y) = H(X) + H(Y) - H(X, Y)` for a two-axis table.
pub fn mutual_information(joint: &JointTable, log_base: f64) -> Result<InfoResult> {
    check_base(log_base)?;
    if joint.arity() != 2 {
        return Err(Error::WrongArity {
            measure: "mutual information",
            expected: "exactly 2",
            actual: joint.arity(),
        });
    }
    let value = marginal_entropy_sum(joint, log_base) - bgs_slice(joint.probs(), log_base);
    Ok(InfoResult {
        value,
        measure: Measure::MutualInformation,
        log_base,
    })
}

/// Total correlation: sum of single-axis entropies minus the joint entropy.
pub fn multi_information(joint: &JointTable, log_base: f64) -> Result<InfoResult> {
    check_base(log_base)?;
    if joint.arity() < 2 {
        return Err(Error::WrongArity {
            measure: "multi-information",
            expected: "at least 2",
            actual: joint.arity(),
        });
    }
    let value = marginal_entropy_sum(joint, log_base) - bgs_slice(joint.probs(), log_base);
    Ok(InfoResult {
        value,
        measure: Measure::MultiInformation,
        log_base,
    })
}

/// Interaction information by inclusion-exclusion over all non-empty axis
/// subsets `Z`:
///
/// ```text
/// I_t = -sum_Z (-1)^(M - |Z|) H(Z)
/// ```
///
/// With this sign, `M = 2` gives the mutual information and a three-way XOR
/// gives `+1` bit, so positive values mark synergy.
pub fn interaction_information(joint: &JointTable, log_base: f64) -> Result<InfoResult> {
    check_base(log_base)?;
    let m = joint.arity();
    if !(2..=MAX_INTERACTION_AXES).contains(&m) {
        return Err(Error::WrongArity {
            measure: "interaction information",
            expected: "between 2 and 12",
            actual: m,
        });
    }
    let mut value = 0.0;
    let mut axes = Vec::with_capacity(m);
    for mask in 1u32..(1 << m) {
        axes.clear();
        axes.extend((0..m).filter(|&a| mask & (1 << a) != 0));
        let h = if axes.len() == m {
            bgs_slice(joint.probs(), log_base)
        } else {
            subset_entropy(joint, &axes, log_base)
        };
        if (m - axes.len()).is_multiple_of(2) {
            value -= h;
        } else {
            value += h;
        }
    }
    Ok(InfoResult {
        value,
        measure: Measure::InteractionInformation,
        log_base,
    })
}
