//! Polyadic synergy among statistically independent subsystems:
//!
//! ```text
//! S_M = H_{q,r}(Y_1, ..., Y_M) - sum_m H_{q,r}(Y_m)
//! ```
//!
//! The joint is the product of the marginals, so every classical measure of
//! statistical dependence vanishes. A non-zero `S_M` comes entirely from the
//! entropic parameters: positive values are synergy, negative values
//! redundancy. The direct difference above is always the reported value;
//! expanded forms are carried along as diagnostics.

use serde::{Deserialize, Serialize};

use crate::composition::{triadic_derived_groups, triadic_printed_groups, Entropies, Term};
use crate::distribution::{FactoredSystem, Pmf};
use crate::entropy::{entropy_generalized, entropy_joint_factored, EntropyParams};
use crate::error::{Error, Result};

/// Synergy values with `|S| <= TOL_ZERO` are classified as additive.
pub const TOL_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Synergistic,
    Redundant,
    Additive,
}

impl Classification {
    pub fn of(value: f64) -> Self {
        if value > TOL_ZERO {
            Classification::Synergistic
        } else if value < -TOL_ZERO {
            Classification::Redundant
        } else {
            Classification::Additive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Synergistic => "synergistic",
            Classification::Redundant => "redundant",
            Classification::Additive => "additive",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How [`SynergyReport::value`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    ExpandedPrinted,
    ExpandedDerived,
    TsallisPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynergyReport {
    pub value: f64,
    pub arity: usize,
    pub params: EntropyParams,
    pub classification: Classification,
    pub method: Method,
    pub terms: Vec<Term>,
}

impl SynergyReport {
    fn new(
        value: f64,
        arity: usize,
        params: EntropyParams,
        method: Method,
        terms: Vec<Term>,
    ) -> Self {
        SynergyReport {
            value,
            arity,
            params,
            classification: Classification::of(value),
            method,
            terms,
        }
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.value)
    }
}

fn direct_value(marginals: &[Pmf], params: EntropyParams) -> (f64, f64, f64) {
    let system = FactoredSystem::new(marginals.to_vec()).expect("non-empty");
    let joint = entropy_joint_factored(&system, params);
    let parts: f64 = marginals
        .iter()
        .map(|m| entropy_generalized(m, params))
        .sum();
    (joint - parts, joint, parts)
}

/// `S_M` by direct evaluation.
pub fn polyadic_synergy(system: &FactoredSystem, params: EntropyParams) -> Result<SynergyReport> {
    if system.arity() < 2 {
        return Err(Error::ArityTooSmall(system.arity()));
    }
    let (value, joint, parts) = direct_value(system.marginals(), params);
    Ok(SynergyReport::new(
        value,
        system.arity(),
        params,
        Method::Direct,
        vec![Term::new("joint", joint), Term::new("marginal sum", parts)],
    ))
}

/// Dyadic synergy from its closed form
/// `(1-q) H_{q,r}(i) H_{q,1}(j) + (1-r) H_{q,r}(j) H_{r,1}(i)`.
pub fn dyadic_synergy_expanded(yi: &Pmf, yj: &Pmf, params: EntropyParams) -> SynergyReport {
    let (a, b) = (1.0 - params.q(), 1.0 - params.r());
    let ei = Entropies::of(yi, params);
    let ej = Entropies::of(yj, params);
    let q_term = a * ei.h * ej.t;
    let r_term = b * ej.h * ei.r;
    SynergyReport::new(
        q_term + r_term,
        2,
        params,
        Method::ExpandedPrinted,
        vec![
            Term::new("(1-q) H(i) T(j)", q_term),
            Term::new("(1-r) H(j) R(i)", r_term),
        ],
    )
}

fn tsallis_params(q: f64) -> Result<EntropyParams> {
    let params = EntropyParams::tsallis(q)?;
    if q == 1.0 {
        return Err(Error::QEqualsOne);
    }
    Ok(params)
}

/// Tsallis dyadic synergy `(1-q) H_{q,1}(i) H_{q,1}(j)`. Positive for `q < 1`,
/// negative for `q > 1` when neither marginal is deterministic.
pub fn tsallis_dyadic_synergy(yi: &Pmf, yj: &Pmf, q: f64) -> Result<SynergyReport> {
    let params = tsallis_params(q)?;
    let ti = entropy_generalized(yi, params);
    let tj = entropy_generalized(yj, params);
    let value = (1.0 - q) * ti * tj;
    Ok(SynergyReport::new(
        value,
        2,
        params,
        Method::TsallisPrinted,
        vec![Term::new("(1-q) T(i) T(j)", value)],
    ))
}

/// Triadic synergy. The value is the direct one; `terms` carries the derived
/// and printed expansions (labels `derived`, `printed`, and per-group
/// entries) for comparison.
pub fn triadic_synergy_expanded(
    yi: &Pmf,
    yj: &Pmf,
    yl: &Pmf,
    params: EntropyParams,
) -> SynergyReport {
    let (a, b) = (1.0 - params.q(), 1.0 - params.r());
    let (ei, ej, el) = (
        Entropies::of(yi, params),
        Entropies::of(yj, params),
        Entropies::of(yl, params),
    );
    let (direct, _, _) = direct_value(&[yi.clone(), yj.clone(), yl.clone()], params);
    let derived_groups = triadic_derived_groups(ei, ej, el, a, b);
    let printed_groups = triadic_printed_groups(ei, ej, el, a, b);
    let derived: f64 = derived_groups.iter().map(|(_, v)| v).sum();
    let printed: f64 = printed_groups.iter().map(|(_, v)| v).sum();

    let mut terms = vec![
        Term::new("direct", direct),
        Term::new("derived", derived),
        Term::new("printed", printed),
    ];
    terms.extend(
        derived_groups
            .iter()
            .map(|&(sig, v)| Term::new(format!("derived {sig}"), v)),
    );
    terms.extend(
        printed_groups
            .iter()
            .map(|&(sig, v)| Term::new(format!("printed {sig}"), v)),
    );
    SynergyReport::new(direct, 3, params, Method::Direct, terms)
}

/// Tsallis triadic synergy. Returns the direct value with the derived
/// expansion
/// `(1-q)(T_i T_j + T_i T_l + T_j T_l) + (1-q)^2 T_i T_j T_l`
/// and the printed one in `terms`.
pub fn tsallis_triadic_synergy(yi: &Pmf, yj: &Pmf, yl: &Pmf, q: f64) -> Result<SynergyReport> {
    let params = tsallis_params(q)?;
    let a = 1.0 - q;
    let t: Vec<f64> = [yi, yj, yl]
        .iter()
        .map(|p| entropy_generalized(p, params))
        .collect();
    let bj = entropy_generalized(yj, EntropyParams::bgs());
    let (direct, _, _) = direct_value(&[yi.clone(), yj.clone(), yl.clone()], params);

    let pairwise = a * (t[0] * t[1] + t[0] * t[2] + t[1] * t[2]);
    let cubic = a * a * t[0] * t[1] * t[2];
    let printed_linear = a * (t[0] + bj + (t[0] + t[1]) * t[2]);

    Ok(SynergyReport::new(
        direct,
        3,
        params,
        Method::Direct,
        vec![
            Term::new("direct", direct),
            Term::new("derived", pairwise + cubic),
            Term::new("printed", printed_linear + cubic),
            Term::new("derived (1-q)", pairwise),
            Term::new("printed (1-q)", printed_linear),
            Term::new("(1-q)^2", cubic),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> Pmf {
        Pmf::uniform(2)
    }

    fn params(q: f64, r: f64) -> EntropyParams {
        EntropyParams::new(q, r).unwrap()
    }

    fn coins(m: usize) -> FactoredSystem {
        FactoredSystem::new(vec![coin(); m]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    // H_{0.5,1}(coin) = (sqrt 2 - 1) / 0.5
    fn tsallis_half_coin() -> f64 {
        (2f64.sqrt() - 1.0) / 0.5
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(Classification::of(2e-12), Classification::Synergistic);
        assert_eq!(Classification::of(-2e-12), Classification::Redundant);
        assert_eq!(Classification::of(5e-13), Classification::Additive);
        assert_eq!(Classification::of(0.0), Classification::Additive);
    }

    #[test]
    fn polyadic_examples() {
        let s = polyadic_synergy(&coins(3), EntropyParams::bgs()).unwrap();
        assert!(s.value.abs() <= 1e-12);
        assert_eq!(s.classification, Classification::Additive);

        let s = polyadic_synergy(&coins(2), params(2.0, 1.0)).unwrap();
        close(s.value, -0.25, 1e-15);
        assert_eq!(s.classification, Classification::Redundant);

        let s = polyadic_synergy(&coins(3), params(2.0, 1.0)).unwrap();
        close(s.value, -0.625, 1e-15);
        assert_eq!(s.arity, 3);

        let s = polyadic_synergy(&coins(2), params(0.5, 1.0)).unwrap();
        close(s.value, 0.5 * tsallis_half_coin().powi(2), 1e-14);
        close(s.value, 0.3431458, 1e-7);
        assert_eq!(s.classification, Classification::Synergistic);
    }

    #[test]
    fn polyadic_rejects_single_subsystem() {
        assert_eq!(
            polyadic_synergy(&coins(1), EntropyParams::bgs()),
            Err(Error::ArityTooSmall(1))
        );
    }

    #[test]
    fn dyadic_expanded_examples() {
        let s = dyadic_synergy_expanded(&coin(), &coin(), params(2.0, 1.0));
        close(s.value, -0.25, 1e-15);
        assert_eq!(s.method, Method::ExpandedPrinted);

        let s = dyadic_synergy_expanded(&coin(), &coin(), params(2.0, 0.5));
        let direct = polyadic_synergy(&coins(2), params(2.0, 0.5)).unwrap();
        close(s.value, direct.value, 1e-14);
        close(s.value, -0.0522847, 1e-7);
        close(s.term("(1-q) H(i) T(j)").unwrap(), -0.3047379, 1e-7);
        close(s.term("(1-r) H(j) R(i)").unwrap(), 0.2524532, 1e-7);

        let yi = Pmf::new(vec![0.2, 0.8]).unwrap();
        let s = dyadic_synergy_expanded(&yi, &Pmf::uniform(5), EntropyParams::bgs());
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn tsallis_dyadic_examples() {
        let s = tsallis_dyadic_synergy(&coin(), &coin(), 2.0).unwrap();
        close(s.value, -0.25, 1e-15);
        let s = tsallis_dyadic_synergy(&coin(), &coin(), 0.5).unwrap();
        close(s.value, 0.5 * tsallis_half_coin().powi(2), 1e-14);
        close(s.value, 0.3431458, 1e-7);
        for q in [0.3, 1.7] {
            let s = tsallis_dyadic_synergy(&Pmf::deterministic(), &coin(), q).unwrap();
            assert_eq!(s.value, 0.0);
        }
    }

    #[test]
    fn tsallis_rejects_q_one_and_bad_q() {
        assert_eq!(
            tsallis_dyadic_synergy(&coin(), &coin(), 1.0),
            Err(Error::QEqualsOne)
        );
        assert!(matches!(
            tsallis_dyadic_synergy(&coin(), &coin(), 0.0),
            Err(Error::BadParams { .. })
        ));
        assert_eq!(
            tsallis_triadic_synergy(&coin(), &coin(), &coin(), 1.0),
            Err(Error::QEqualsOne)
        );
    }

    #[test]
    fn triadic_expanded_examples() {
        let s = triadic_synergy_expanded(&coin(), &coin(), &coin(), params(2.0, 1.0));
        close(s.value, -0.625, 1e-15);
        close(s.term("derived").unwrap(), -0.625, 1e-15);

        let s = triadic_synergy_expanded(&coin(), &Pmf::uniform(3), &coin(), EntropyParams::bgs());
        assert!(s.value.abs() <= 1e-12);
        assert!(s.terms.iter().all(|t| t.value.abs() <= 1e-12));

        let s = triadic_synergy_expanded(&coin(), &coin(), &coin(), params(2.0, 0.5));
        let h = (2f64.sqrt() - 0.5) / 1.5;
        let expect = (2.0 * 2f64.sqrt() - 0.125) / 1.5 - 3.0 * h;
        close(s.value, expect, 1e-14);
        close(s.value, -0.0261424, 1e-7);
        close(s.term("derived").unwrap(), expect, 1e-14);
        assert!(s.term("printed").is_some());
    }

    #[test]
    fn tsallis_triadic_examples() {
        let s = tsallis_triadic_synergy(&coin(), &coin(), &coin(), 2.0).unwrap();
        close(s.value, -0.625, 1e-15);
        close(s.term("derived").unwrap(), -0.625, 1e-15);
        close(s.term("(1-q)^2").unwrap(), 0.125, 1e-15);

        let d = Pmf::deterministic();
        let s = tsallis_triadic_synergy(&d, &d, &d, 0.4).unwrap();
        assert_eq!(s.value, 0.0);

        let s = tsallis_triadic_synergy(&coin(), &coin(), &coin(), 0.5).unwrap();
        let t = tsallis_half_coin();
        let joint = (8f64.sqrt() - 1.0) / 0.5;
        close(s.value, joint - 3.0 * t, 1e-14);
        assert!(s.value > 0.0);
        close(s.term("derived").unwrap(), s.value, 1e-12);
    }

    #[test]
    fn appending_deterministic_subsystem_keeps_synergy() {
        let base =
            FactoredSystem::new(vec![Pmf::new(vec![0.3, 0.7]).unwrap(), Pmf::uniform(3)]).unwrap();
        for p in [params(2.0, 0.5), params(0.4, 1.3), params(1.1, 1.1)] {
            let s0 = polyadic_synergy(&base, p).unwrap().value;
            let s1 = polyadic_synergy(&base.with_marginal(Pmf::deterministic()), p)
                .unwrap()
                .value;
            let s2 = polyadic_synergy(
                &base.with_marginal(Pmf::new(vec![0.0, 1.0, 0.0]).unwrap()),
                p,
            )
            .unwrap()
            .value;
            close(s1, s0, 1e-12);
            close(s2, s0, 1e-12);
        }
    }
}
