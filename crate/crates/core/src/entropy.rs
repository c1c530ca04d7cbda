//! The two-parameter generalized entropy
//!
//! ```text
//! H_{q,r}(p) = sum_i (p_i^r - p_i^q) / (q - r)
//! ```
//!
//! with its Tsallis (`r = 1`) and Boltzmann-Gibbs-Shannon (`q = r = 1`)
//! special cases, and joint entropies of factored systems.
//!
//! The functional is evaluated as `sum_i p_i^lo * (1 - p_i^(hi - lo)) / (hi - lo)`
//! with `lo = min(q, r)`, `hi = max(q, r)`. Every term is non-negative, the
//! result is bit-for-bit symmetric in `(q, r)`, and `expm1` keeps the
//! difference of powers accurate when `q` and `r` are close. Within
//! [`EPS_PARAM`] of the diagonal the analytic limit `-sum_i p_i^s ln p_i` is
//! used, evaluated at the midpoint `s = (q + r) / 2`.

use serde::{Deserialize, Serialize};

use crate::distribution::{FactoredSystem, JointTable, Pmf};
use crate::error::{Error, Result};
use crate::summation::compensated_sum;

/// Width of the seam around `q = r` handled by the limit formula.
pub const EPS_PARAM: f64 = 1e-9;

/// Entropic parameters `(q, r)`. The scale constant `k` is fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct EntropyParams {
    q: f64,
    r: f64,
}

#[derive(Deserialize)]
struct RawParams {
    q: f64,
    r: f64,
}

impl TryFrom<RawParams> for EntropyParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        EntropyParams::new(raw.q, raw.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Branch {
    /// `lo < hi`, separated by more than `EPS_PARAM`.
    Split { lo: f64, hi: f64 },
    /// On the seam; evaluate the derivative at `s`.
    Limit { s: f64 },
}

impl EntropyParams {
    /// Both parameters must be finite and strictly positive.
    pub fn new(q: f64, r: f64) -> Result<Self> {
        if !(q.is_finite() && r.is_finite() && q > 0.0 && r > 0.0) {
            return Err(Error::BadParams { q, r });
        }
        Ok(EntropyParams { q, r })
    }

    /// The Tsallis slice `(q, 1)`.
    pub fn tsallis(q: f64) -> Result<Self> {
        Self::new(q, 1.0)
    }

    /// `q = r = 1`.
    pub fn bgs() -> Self {
        EntropyParams { q: 1.0, r: 1.0 }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// True when `(q, r)` lies on the limit seam around `q = r`.
    pub fn is_limit(&self) -> bool {
        (self.q - self.r).abs() <= EPS_PARAM
    }

    /// True for `q = r = 1` exactly.
    pub fn is_bgs(&self) -> bool {
        self.q == 1.0 && self.r == 1.0
    }

    /// `(q, 1)`: the Tsallis entropy sharing this `q`.
    pub(crate) fn q_one(&self) -> Self {
        EntropyParams { q: self.q, r: 1.0 }
    }

    /// `(r, 1)`: the Tsallis entropy sharing this `r`.
    pub(crate) fn r_one(&self) -> Self {
        EntropyParams { q: self.r, r: 1.0 }
    }

    pub(crate) fn branch(&self) -> Branch {
        if self.is_limit() {
            Branch::Limit {
                s: 0.5 * (self.q + self.r),
            }
        } else {
            Branch::Split {
                lo: self.q.min(self.r),
                hi: self.q.max(self.r),
            }
        }
    }
}

fn power_sum_unchecked(p: &[f64], s: f64) -> f64 {
    if s == 1.0 {
        return compensated_sum(p.iter().copied());
    }
    compensated_sum(p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(s)))
}

/// `sum_i p_i^s`, with `0^s = 0`.
pub fn power_sum(p: &Pmf, s: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 || s.is_infinite() {
        return Err(Error::NonPositiveExponent(s));
    }
    Ok(power_sum_unchecked(p.probs(), s))
}

fn generalized_slice(p: &[f64], params: EntropyParams) -> f64 {
    match params.branch() {
        Branch::Split { lo, hi } => {
            let d = hi - lo;
            let sum = compensated_sum(p.iter().filter(|&&x| x > 0.0).map(|&x| {
                let ln = x.ln();
                // p^lo - p^hi = p^lo * (1 - p^d)
                (lo * ln).exp() * -(d * ln).exp_m1()
            }));
            sum / d
        }
        Branch::Limit { s } => {
            compensated_sum(p.iter().filter(|&&x| x > 0.0).map(|&x| -x.powf(s) * x.ln()))
        }
    }
}

/// Generalized entropy `H_{q,r}` in nat-compatible units.
pub fn entropy_generalized(p: &Pmf, params: EntropyParams) -> f64 {
    generalized_slice(p.probs(), params)
}

/// Tsallis entropy `H_{q,1}`. At `q = 1` this is the Shannon entropy in nats.
pub fn entropy_tsallis(p: &Pmf, q: f64) -> Result<f64> {
    Ok(entropy_generalized(p, EntropyParams::tsallis(q)?))
}

fn log_in_base(x: f64, base: f64) -> f64 {
    if base == 2.0 {
        x.log2()
    } else if base == std::f64::consts::E {
        x.ln()
    } else if base == 10.0 {
        x.log10()
    } else {
        x.ln() / base.ln()
    }
}

pub(crate) fn check_base(base: f64) -> Result<()> {
    if base > 1.0 && base.is_finite() {
        Ok(())
    } else {
        Err(Error::BadBase(base))
    }
}

pub(crate) fn bgs_slice(p: &[f64], base: f64) -> f64 {
    compensated_sum(
        p.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -x * log_in_base(x, base)),
    )
}

/// Shannon entropy `-sum_i p_i log_b p_i`. Base 2 gives bits, base `e` nats.
pub fn entropy_bgs(p: &Pmf, log_base: f64) -> Result<f64> {
    check_base(log_base)?;
    Ok(bgs_slice(p.probs(), log_base))
}

/// Joint generalized entropy of a product system, from marginal power sums
/// only. Cost is linear in the total number of marginal states.
///
/// Uses the telescoped form
///
/// ```text
/// (prod_m A_lo(m) - prod_m A_hi(m)) / (hi - lo)
///     = sum_m [prod_{k<m} A_hi(k)] * H(m) * [prod_{k>m} A_lo(k)]
/// ```
///
/// so that each summand is non-negative.
pub fn entropy_joint_factored(system: &FactoredSystem, params: EntropyParams) -> f64 {
    let (s_lo, s_hi) = match params.branch() {
        Branch::Split { lo, hi } => (lo, hi),
        Branch::Limit { s } => (s, s),
    };
    let marginals = system.marginals();
    let a_lo: Vec<f64> = marginals
        .iter()
        .map(|m| power_sum_unchecked(m.probs(), s_lo))
        .collect();
    let a_hi: Vec<f64> = marginals
        .iter()
        .map(|m| power_sum_unchecked(m.probs(), s_hi))
        .collect();

    // suffix[m] = prod_{k >= m} A_lo(k)
    let mut suffix = vec![1.0; marginals.len() + 1];
    for m in (0..marginals.len()).rev() {
        suffix[m] = suffix[m + 1] * a_lo[m];
    }
    let mut prefix = 1.0;
    let mut total = 0.0;
    for (m, marginal) in marginals.iter().enumerate() {
        total += prefix * entropy_generalized(marginal, params) * suffix[m + 1];
        prefix *= a_hi[m];
    }
    total
}

/// Generalized entropy of an explicit joint table, treating every cell as a
/// microstate.
pub fn entropy_joint_table(joint: &JointTable, params: EntropyParams) -> f64 {
    generalized_slice(joint.probs(), params)
}
