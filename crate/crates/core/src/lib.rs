//! Log-optimal portfolios on finite markets.
//!
//! A market is an `m × k` matrix of price relatives: row `j` is what each of
//! the `k` assets returns when outcome `j` occurs. The crate computes growth
//! rates and their maximisers, the regret of betting on the wrong
//! distribution, dominance between portfolios, embeddings into ideal
//! gambling assets, minimax regret over finite families of distributions,
//! and a sampling test for markets whose regret is proportional to
//! information divergence.

pub mod divergence;
pub mod dominance;
pub mod error;
pub mod gambling;
mod geometry;
pub mod io;
pub mod logopt;
pub mod market;
pub mod minimax;
pub mod sufficiency;

pub use divergence::{
    action_regret, bregman_identity_residual, cover_gap, distribution_regret, kl_divergence, Regret,
};
pub use dominance::{prune, prune_with, PruneOptions, Pruned};
pub use error::{Error, Result};
pub use gambling::{classify_fairness, dutch_book, embed_ideal, is_kelly_market, Odds};
pub use logopt::{
    kkt_residual, optimal_face, solve, LinearConstraint, PortfolioConstraints, SolveReport, Uniqueness,
};
pub use minimax::{minimax_regret, MinimaxReport};
pub use sufficiency::{characterization_crosscheck, injectivity_test, proportionality_test};
pub use market::{
    empirical_distribution, growth_rate, wealth_trajectory, Distribution, GrowthRate, Market, Portfolio,
};
