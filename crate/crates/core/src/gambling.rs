//! Ideal gambling assets.
//!
//! A gambling asset pays `o_j > 0` in exactly one outcome `j` and nothing
//! otherwise. Markets whose assets are orthogonal gambling assets are Kelly
//! markets; in them the log-optimal portfolio equals the outcome
//! distribution. General markets can often be written as portfolios of the
//! `m` ideal gambling assets of their outcomes, which turns growth
//! maximisation over the market into a reverse information projection.

use nalgebra::DVector;

use crate::divergence::kl_divergence;
use crate::dominance::{prune_with, PruneOptions};
use crate::error::{Error, Result};
use crate::geometry::{solve_least_squares, solve_square, LinearProgram, Sense};
use crate::logopt::{solve, PortfolioConstraints, Uniqueness};
use crate::market::{Distribution, Market, Portfolio};

const EMBED_TOL: f64 = 1e-9;
const FAIR_TOL: f64 = 1e-12;

/// Strictly positive payoffs of the ideal gambling assets.
#[derive(Debug, Clone, PartialEq)]
pub struct Odds(Vec<f64>);

impl Odds {
    pub fn new(odds: Vec<f64>) -> Result<Self> {
        if odds.is_empty() {
            return Err(Error::InvalidOdds("empty odds vector".into()));
        }
        if let Some(o) = odds.iter().find(|o| !o.is_finite() || **o <= 0.0) {
            return Err(Error::InvalidOdds(format!("{o} is not a positive finite number")));
        }
        Ok(Self(odds))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ 1/o_i`.
    pub fn inverse_sum(&self) -> f64 {
        self.0.iter().map(|o| 1.0 / o).sum()
    }

    /// The Kelly market `diag(o)`.
    pub fn market(&self) -> Market {
        let m = self.0.len();
        Market::new(
            (0..m)
                .map(|j| (0..m).map(|i| if i == j { self.0[j] } else { 0.0 }).collect())
                .collect(),
        )
        .expect("positive odds form a valid market")
    }
}

/// Every original asset written as a portfolio of ideal gambling assets.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub odds: Odds,
    /// One portfolio over the `m` ideal assets per original asset.
    pub weights: Vec<Portfolio>,
}

impl Embedding {
    /// The ideal market `diag(o)` with the original outcome labels.
    pub fn ideal_market(&self, original: &Market) -> Market {
        let m = self.odds.len();
        let rows = (0..m)
            .map(|j| (0..m).map(|i| if i == j { self.odds.0[j] } else { 0.0 }).collect())
            .collect();
        let names = original.outcome_names().iter().map(|n| format!("ideal_{n}")).collect();
        Market::with_names(rows, names, original.outcome_names().to_vec())
            .expect("positive odds form a valid market")
    }

    /// Image `Σ_i b_i w^{(i)}` of an original portfolio.
    pub fn embed(&self, b: &Portfolio) -> Result<Portfolio> {
        if b.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                what: "portfolio",
                expected: self.weights.len(),
                found: b.len(),
            });
        }
        let m = self.odds.len();
        let mut out = vec![0.0; m];
        for (bi, w) in b.weights().iter().zip(&self.weights) {
            for (o, wj) in out.iter_mut().zip(w.weights()) {
                *o += bi * wj;
            }
        }
        Ok(Portfolio::from_raw(out))
    }
}

/// Finds `u > 0` with `Σ_j X_{j,i} u_j = 1` for every asset `i` and returns
/// odds `1/u_j` together with the weights `X_{j,i} u_j`.
pub fn embed_ideal(market: &Market) -> Result<Embedding> {
    let (m, k) = (market.outcomes(), market.assets());
    let xt = market.matrix().transpose();
    let ones = DVector::from_element(k, 1.0);

    let square = if m == k { solve_square(&xt, &ones) } else { None };
    let mut u = square.unwrap_or_else(|| solve_least_squares(&xt, &ones));
    let residual = (&xt * &u - &ones).amax();
    if residual > EMBED_TOL {
        return Err(Error::NoExactEmbedding { residual });
    }
    if u.iter().any(|&v| v <= 0.0) {
        // Underdetermined system: look for a strictly positive solution by
        // maximising the smallest coordinate.
        let mut objective = vec![0.0; m + 1];
        objective[m] = 1.0;
        let mut bounds = vec![(0.0, f64::INFINITY); m + 1];
        bounds[m] = (f64::NEG_INFINITY, f64::INFINITY);
        let mut lp = LinearProgram::maximize(&objective, &bounds);
        for i in 0..k {
            let mut row: Vec<f64> = (0..m).map(|j| market.get(j, i)).collect();
            row.push(0.0);
            lp.constraint(&row, Sense::Eq, 1.0);
        }
        for j in 0..m {
            let mut row = vec![0.0; m + 1];
            row[j] = 1.0;
            row[m] = -1.0;
            lp.constraint(&row, Sense::Ge, 0.0);
        }
        let sol = lp.solve()?.ok_or(Error::NoExactEmbedding { residual })?;
        if sol[m] <= EMBED_TOL {
            return Err(Error::NoExactEmbedding { residual });
        }
        u = DVector::from_iterator(m, sol.into_iter().take(m));
    }
    let odds = Odds::new(u.iter().map(|v| 1.0 / v).collect())?;
    let weights = (0..k)
        .map(|i| Portfolio::from_raw((0..m).map(|j| market.get(j, i) * u[j]).collect()))
        .collect();
    Ok(Embedding { odds, weights })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FairnessClass {
    Fair,
    Superfair,
    Subfair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fairness {
    pub class: FairnessClass,
    pub inverse_sum: f64,
}

/// Fair when `Σ 1/o_i = 1`, superfair below, subfair above.
pub fn classify_fairness(odds: &Odds) -> Fairness {
    let s = odds.inverse_sum();
    let class = if (s - 1.0).abs() <= FAIR_TOL {
        FairnessClass::Fair
    } else if s < 1.0 {
        FairnessClass::Superfair
    } else {
        FairnessClass::Subfair
    };
    Fairness {
        class,
        inverse_sum: s,
    }
}

/// Riskless bet in superfair odds.
#[derive(Debug, Clone)]
pub struct DutchBook {
    pub portfolio: Portfolio,
    /// Price relative obtained in every outcome, `(Σ 1/o_i)^{-1} > 1`.
    pub guarantee: f64,
}

/// The portfolio `b_i = o_i^{-1} / Σ o^{-1}` when the odds are superfair.
pub fn dutch_book(odds: &Odds) -> Option<DutchBook> {
    let f = classify_fairness(odds);
    if f.class != FairnessClass::Superfair {
        return None;
    }
    let weights = odds.0.iter().map(|o| (1.0 / o) / f.inverse_sum).collect();
    Some(DutchBook {
        portfolio: Portfolio::from_raw(weights),
        guarantee: 1.0 / f.inverse_sum,
    })
}

/// Odds of the market if, after removing dominated assets and merging
/// identical outcomes, it consists of `m = k` orthogonal gambling assets.
/// The odds are listed in the order of the surviving assets.
pub fn is_kelly_market(market: &Market) -> Result<Option<Odds>> {
    let (deduped, _) = market.dedup_outcomes();
    let pruned = prune_with(&deduped, PruneOptions { remove_weak: true })?;
    let x = pruned.market;
    let (m, k) = (x.outcomes(), x.assets());
    if m != k {
        return Ok(None);
    }
    let mut odds = vec![0.0; k];
    for i in 0..k {
        let rows: Vec<usize> = (0..m).filter(|&j| x.get(j, i) > 0.0).collect();
        if rows.len() != 1 {
            return Ok(None);
        }
        odds[i] = x.get(rows[0], i);
    }
    for j in 0..m {
        if (0..k).filter(|&i| x.get(j, i) > 0.0).count() != 1 {
            return Ok(None);
        }
    }
    Odds::new(odds).map(Some)
}

/// Reverse information projection `argmin_{q ∈ C} D(p‖q)`.
#[derive(Debug, Clone)]
pub struct ReverseProjection {
    pub q: Distribution,
    pub divergence: f64,
    pub unique: bool,
}

/// Minimises `D(p‖q)` over the distributions in `c`. Equivalent to
/// maximising `Σ_j p_j ln q_j`, i.e. growth in the unit-odds Kelly market.
pub fn reverse_iprojection(p: &Distribution, c: &PortfolioConstraints) -> Result<ReverseProjection> {
    let m = p.len();
    if c.assets() != m {
        return Err(Error::DimensionMismatch {
            what: "constraints",
            expected: m,
            found: c.assets(),
        });
    }
    let unit = Odds::new(vec![1.0; m])?.market();
    let report = solve(&unit, p, Some(c))?;
    let q: Distribution = report.portfolio.into();
    let divergence = kl_divergence(p, &q)?;
    if !divergence.is_finite() {
        return Err(Error::NoFiniteGrowth);
    }
    Ok(ReverseProjection {
        q,
        divergence: divergence.value(),
        unique: report.unique != Uniqueness::NonUnique,
    })
}

/// Unit odds diagonal market of size `m`, handy for projections.
pub fn unit_odds_market(m: usize) -> Market {
    Odds(vec![1.0; m]).market()
}
