//! Discrete distributions: single marginals, factored product systems and
//! explicit joint tables.
//!
//! All three types validate on construction and are immutable afterwards.
//! Nothing is ever renormalized; an input that does not sum to one within
//! [`TOL_SUM`] is rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::compensated_sum;

/// Tolerance on `|sum - 1|` for caller-supplied probabilities.
pub const TOL_SUM: f64 = 1e-9;

/// Tolerance on `|sum - 1|` expected of tables produced internally from
/// validated inputs.
pub const TOL_INTERNAL: f64 = 1e-12;

/// Default cap on the number of cells [`materialize`] will allocate.
pub const DEFAULT_MAX_CELLS: usize = 10_000_000;

fn check_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    let sum = compensated_sum(probs.iter().copied());
    if (sum - 1.0).abs() > TOL_SUM {
        return Err(Error::NotNormalized { sum, tol: TOL_SUM });
    }
    Ok(())
}

/// A probability mass function over `N >= 1` microstates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf(Vec<f64>);

impl Pmf {
    /// Validates `probs` and wraps it. Entries are kept as given.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs)?;
        Ok(Pmf(probs))
    }

    /// Uniform distribution over `n` states.
    ///
    /// # Panics
    ///
    /// If `n == 0`.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one state");
        Pmf(vec![1.0 / n as f64; n])
    }

    /// The one-state distribution `[1.0]`.
    pub fn deterministic() -> Self {
        Pmf(vec![1.0])
    }

    pub(crate) fn from_vec_unchecked(probs: Vec<f64>) -> Self {
        Pmf(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// Number of microstates `N`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; a valid `Pmf` has at least one state.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Validates a probability vector. Free-function form of [`Pmf::new`].
pub fn validate_pmf(probs: &[f64]) -> Result<Pmf> {
    Pmf::new(probs.to_vec())
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Pmf::new(probs)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for Pmf {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Statistically independent subsystems. The joint distribution is the
/// product of the marginals and is never stored unless [`materialize`]d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFactored")]
pub struct FactoredSystem {
    marginals: Vec<Pmf>,
}

#[derive(Deserialize)]
struct RawFactored {
    marginals: Vec<Pmf>,
}

impl TryFrom<RawFactored> for FactoredSystem {
    type Error = Error;

    fn try_from(raw: RawFactored) -> Result<Self> {
        FactoredSystem::new(raw.marginals)
    }
}

impl FactoredSystem {
    pub fn new(marginals: Vec<Pmf>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(FactoredSystem { marginals })
    }

    pub fn marginals(&self) -> &[Pmf] {
        &self.marginals
    }

    /// Number of subsystems `M`.
    pub fn arity(&self) -> usize {
        self.marginals.len()
    }

    /// Per-axis cardinalities.
    pub fn shape(&self) -> Vec<usize> {
        self.marginals.iter().map(Pmf::len).collect()
    }

    /// Number of joint cells, computed without overflow.
    pub fn cell_count(&self) -> u128 {
        self.marginals
            .iter()
            .map(|m| m.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    /// The same system with one more independent subsystem appended.
    pub fn with_marginal(&self, marginal: Pmf) -> Self {
        let mut marginals = self.marginals.clone();
        marginals.push(marginal);
        FactoredSystem { marginals }
    }
}

/// An explicit joint distribution over `M` axes, stored row-major (the last
/// axis varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointTable {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawJoint {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl TryFrom<RawJoint> for JointTable {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        JointTable::new(raw.shape, raw.probs)
    }
}

fn shape_cells(shape: &[usize]) -> Option<usize> {
    shape.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n))
}

impl JointTable {
    pub fn new(shape: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let expected = shape_cells(&shape).unwrap_or(usize::MAX);
        if shape.is_empty() || shape.contains(&0) || expected != probs.len() {
            return Err(Error::ShapeMismatch {
                shape,
                expected,
                actual: probs.len(),
            });
        }
        check_probs(&probs)?;
        Ok(JointTable { shape, probs })
    }

    /// Builds a two-axis table from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let probs: Vec<f64> = rows.iter().flatten().copied().collect();
        JointTable::new(vec![rows.len(), ncols], probs)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of axes `M`.
    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    /// The whole table viewed as one distribution over joint microstates.
    pub fn as_pmf(&self) -> Pmf {
        Pmf::from_vec_unchecked(self.probs.clone())
    }

    /// Marginal distribution of a single axis.
    pub fn axis_marginal(&self, axis: usize) -> Result<Pmf> {
        let t = marginalize(self, &[axis])?;
        Ok(Pmf::from_vec_unchecked(t.probs))
    }

    /// Marginals of every axis, in axis order.
    pub fn axis_marginals(&self) -> Vec<Pmf> {
        (0..self.arity())
            .map(|a| self.axis_marginal(a).expect("axis in range"))
            .collect()
    }
}

/// Expands a factored system into its explicit product table.
///
/// Entry `(i1, ..., iM)` is `marginal_1[i1] * ... * marginal_M[iM]`.
pub fn materialize(system: &FactoredSystem, max_cells: usize) -> Result<JointTable> {
    let cells = system.cell_count();
    if cells > max_cells as u128 {
        return Err(Error::TooLarge {
            cells,
            max: max_cells,
        });
    }
    let mut probs = Vec::with_capacity(cells as usize);
    probs.push(1.0);
    for marginal in system.marginals() {
        let mut next = Vec::with_capacity(probs.len() * marginal.len());
        for &a in &probs {
            next.extend(marginal.probs().iter().map(|&p| a * p));
        }
        probs = next;
    }
    Ok(JointTable {
        shape: system.shape(),
        probs,
    })
}

/// Sums out every axis not listed in `keep`. The result keeps the retained
/// axes in ascending order; duplicates in `keep` are ignored.
pub fn marginalize(joint: &JointTable, keep: &[usize]) -> Result<JointTable> {
    let arity = joint.arity();
    if keep.is_empty() {
        return Err(Error::NoAxesKept);
    }
    if let Some(&axis) = keep.iter().find(|&&a| a >= arity) {
        return Err(Error::BadAxis { axis, arity });
    }
    let mut kept = vec![false; arity];
    for &a in keep {
        kept[a] = true;
    }

    let out_shape: Vec<usize> = (0..arity)
        .filter(|&a| kept[a])
        .map(|a| joint.shape[a])
        .collect();
    if out_shape.len() == arity {
        return Ok(joint.clone());
    }

    // Stride in the output table for each input axis (0 when summed out).
    let mut out_stride = vec![0usize; arity];
    let mut stride = 1;
    for a in (0..arity).rev() {
        if kept[a] {
            out_stride[a] = stride;
            stride *= joint.shape[a];
        }
    }

    let mut out = vec![0.0; stride];
    let mut index = vec![0usize; arity];
    let mut target = 0usize;
    for &p in &joint.probs {
        out[target] += p;
        // advance the row-major multi-index and keep `target` in step
        for a in (0..arity).rev() {
            index[a] += 1;
            target += out_stride[a];
            if index[a] < joint.shape[a] {
                break;
            }
            target -= out_stride[a] * index[a];
            index[a] = 0;
        }
    }
    Ok(JointTable {
        shape: out_shape,
        probs: out,
    })
}

/// Largest absolute cellwise gap between `joint` and the product of its own
/// single-axis marginals. Zero exactly when the joint factorizes.
pub fn independence_defect(joint: &JointTable) -> f64 {
    let marginals = joint.axis_marginals();
    let product = materialize(
        &FactoredSystem {
            marginals: marginals.clone(),
        },
        usize::MAX,
    )
    .expect("same cell count as the input table");
    joint
        .probs
        .iter()
        .zip(&product.probs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
