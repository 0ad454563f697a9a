//! Endhered patterns in perfect matchings, with the tools to apply them to
//! RNA secondary structures.
//!
//! * [`matching`]: matchings as involutions, enumeration, uniform sampling,
//!   endhered twists.
//! * [`pattern`]: endhered patterns and their occurrences.
//! * [`census`]: exhaustive and Monte Carlo occurrence distributions.
//! * [`enumeration`]: exact distribution tables for patterns of size 2 and 3.
//! * [`asymptotics`]: leading-order laws and the Poisson(1/2) limit.
//! * [`structure`]: extended dot-bracket notation and RNA shapes.
//! * [`corpus`]: censuses over files of dot-bracket records.
//! * [`cli`]: the `endhered` command line.
//!
//! ```
//! use endhered::matching::Matching;
//! use endhered::pattern::{count_occurrences, EndheredPattern};
//!
//! let m: Matching = "1-8 2-7 3-6 4-5".parse().unwrap();
//! let stacked: EndheredPattern = "21".parse().unwrap();
//! assert_eq!(count_occurrences(&m, &stacked), 3);
//! ```

pub mod asymptotics;
pub mod census;
pub mod cli;
pub mod corpus;
pub mod enumeration;
pub mod error;
pub mod matching;
pub mod pattern;
pub mod series;
pub mod structure;

// The guide's Rust snippets run as doc-tests so the book cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/matchings.md")]
    mod matchings {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/structures.md")]
    mod structures {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
}
