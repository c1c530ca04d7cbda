//! Generalized two-parameter entropies on discrete distributions and the
//! synergy they reveal among statistically independent subsystems.
//!
//! The central quantity is
//!
//! ```text
//! H_{q,r}(p) = sum_i (p_i^r - p_i^q) / (q - r)
//! ```
//!
//! which reduces to the Tsallis entropy for `r = 1` and to the Shannon
//! entropy for `q = r = 1`. For a product distribution the joint `H_{q,r}`
//! is in general not the sum of the marginal entropies; the difference is
//! the polyadic synergy computed in [`synergy`].
//!
//! ```
//! use polyent::{EntropyParams, FactoredSystem, Pmf};
//! use polyent::synergy::polyadic_synergy;
//!
//! let coins = FactoredSystem::new(vec![Pmf::uniform(2), Pmf::uniform(2)]).unwrap();
//! let s = polyadic_synergy(&coins, EntropyParams::new(2.0, 1.0).unwrap()).unwrap();
//! assert!((s.value + 0.25).abs() < 1e-15);
//! ```
//!
//! Modules:
//!
//! * [`distribution`]: validated pmfs, factored systems and joint tables;
//! * [`entropy`]: `H_{q,r}`, Tsallis and Shannon entropies, joint entropies
//!   of factored systems;
//! * [`composition`]: dyadic and triadic expansions and their audit;
//! * [`synergy`]: polyadic synergy and its expanded forms;
//! * [`classic_info`]: mutual, multi- and interaction information;
//! * [`cli`]: the `polyent` command line.
//!
//! The `book/` directory at the repository root walks through each topic;
//! its code snippets are compiled and run as doc-tests of this crate.

pub mod classic_info;
pub mod cli;
pub mod composition;
pub mod distribution;
pub mod entropy;
pub mod error;
pub mod summation;
pub mod synergy;

pub use distribution::{FactoredSystem, JointTable, Pmf};
pub use entropy::EntropyParams;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/distributions.md")]
    struct Distributions;
    #[doc = include_str!("../../../book/src/generalized-entropy.md")]
    struct GeneralizedEntropy;
    #[doc = include_str!("../../../book/src/composition.md")]
    struct Composition;
    #[doc = include_str!("../../../book/src/synergy.md")]
    struct Synergy;
    #[doc = include_str!("../../../book/src/classical-information.md")]
    struct ClassicalInformation;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct CommandLine;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
