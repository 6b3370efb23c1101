//! Exact best-worst choice systems and their random-ranking representations.
//!
//! Probabilities are exact rationals throughout. A [`BwSystem`] holds
//! `BW_B(a, b)` for every offered set; [`poly`] computes its Block-Marschak
//! polynomials and the sign test; [`rankings`] and [`measure`] cover pattern
//! sets of rankings, the forward oracle and witness construction; [`lp`] is an
//! independent feasibility oracle; [`sim`] draws observations.
#![no_std]
extern crate alloc;

pub mod lp;
pub mod measure;
pub mod poly;
pub mod rankings;
pub mod rational;
pub mod sim;
pub mod subset;
pub mod system;

pub use measure::RankingDistribution;
pub use poly::{check_representable, CheckOptions, PolynomialTable, RepresentabilityReport, Verdict};
pub use rankings::{Pattern, Ranking};
pub use rational::{parse_rational, to_fraction_string, Rational};
pub use subset::{Alt, Subset};
pub use system::{BwSystem, Limits, SystemError};
