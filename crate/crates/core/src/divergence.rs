//! Information divergence and the regret of portfolios and distributions.
//!
//! With `F(p) = max_b W(b, p)`, the regret of playing `b` under `p` is
//! `F(p) − W(b, p)`, and the regret of acting on `q` when `p` holds is the
//! smallest such regret over the portfolios that are optimal for `q`.
//! In Kelly gambling markets the latter equals `D(p‖q)`; in every market it
//! is bounded above by `D(p‖q)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::logopt::{best_growth_on_hull, optimal_face, solve};
use crate::market::{growth_rate, Distribution, Market, Portfolio};

/// Nonnegative extended real; `+∞` is [`Regret::POS_INFINITY`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Regret(f64);

impl Regret {
    pub const ZERO: Regret = Regret(0.0);
    pub const POS_INFINITY: Regret = Regret(f64::INFINITY);

    /// Clamps round-off negatives to zero. `None` for NaN.
    pub fn from_raw(value: f64) -> Option<Self> {
        (!value.is_nan()).then(|| Regret(value.max(0.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Regret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

/// `D(p‖q) = Σ_j p_j ln(p_j / q_j)` in nats.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<Regret> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            what: "distribution",
            expected: p.len(),
            found: q.len(),
        });
    }
    let mut acc = 0.0;
    for (&pj, &qj) in p.probs().iter().zip(q.probs()) {
        if pj == 0.0 {
            continue;
        }
        if qj == 0.0 {
            return Ok(Regret::POS_INFINITY);
        }
        acc += pj * (pj / qj).ln();
    }
    Ok(Regret(acc.max(0.0)))
}

fn regret_from(best: f64, achieved: f64) -> Regret {
    if achieved == f64::NEG_INFINITY {
        Regret::POS_INFINITY
    } else {
        Regret((best - achieved).max(0.0))
    }
}

/// `max_b' W(b', p) − W(b, p)`.
pub fn action_regret(market: &Market, p: &Distribution, b: &Portfolio) -> Result<Regret> {
    let w = growth_rate(market, b, p)?;
    let best = solve(market, p, None)?.growth.value();
    Ok(regret_from(best, w.value()))
}

/// `W(b_p, p) − max { W(b, p) : b optimal for q }`.
pub fn distribution_regret(market: &Market, p: &Distribution, q: &Distribution) -> Result<Regret> {
    market.check_distribution(p)?;
    market.check_distribution(q)?;
    let best = solve(market, p, None)?.growth.value();
    let face = optimal_face(market, q)?;
    let vertices: Vec<Vec<f64>> = face.vertices.into_iter().map(Portfolio::into_vec).collect();
    let (achieved, _) = best_growth_on_hull(market, p, &vertices)?;
    Ok(regret_from(best, achieved))
}

/// `D(p‖q) − regret(p, q)`; nonnegative up to round-off in every market.
pub fn cover_gap(market: &Market, p: &Distribution, q: &Distribution) -> Result<f64> {
    let d = kl_divergence(p, q)?;
    let r = distribution_regret(market, p, q)?;
    match (d.is_finite(), r.is_finite()) {
        (false, false) => Err(Error::IndeterminateGap),
        (false, true) => Ok(f64::INFINITY),
        (true, false) => Ok(f64::NEG_INFINITY),
        (true, true) => Ok(d.value() - r.value()),
    }
}

/// `|Σ t_i D(p_i, q) − Σ t_i D(p_i, p̂) − D(p̂, q)|` with `p̂ = Σ t_i p_i`
/// and `D` the distribution regret of the market.
pub fn bregman_identity_residual(
    market: &Market,
    mixture: &[(f64, Distribution)],
    q: &Distribution,
) -> Result<f64> {
    if mixture.is_empty() {
        return Err(Error::InvalidDistribution("empty mixture".into()));
    }
    let parts: Vec<(f64, &Distribution)> = mixture.iter().map(|(t, p)| (*t, p)).collect();
    let center = Distribution::mixture(&parts)?;
    let finite = |r: Regret| -> Result<f64> {
        r.is_finite()
            .then_some(r.value())
            .ok_or(Error::InfiniteRegret("Bregman identity"))
    };
    let mut lhs = 0.0;
    let mut rhs = finite(distribution_regret(market, &center, q)?)?;
    for (t, p) in mixture {
        if *t == 0.0 {
            continue;
        }
        lhs += t * finite(distribution_regret(market, p, q)?)?;
        rhs += t * finite(distribution_regret(market, p, &center)?)?;
    }
    Ok((lhs - rhs).abs())
}
