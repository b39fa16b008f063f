//! Markets, probability vectors and the doubling rate.
//!
//! A [`Market`] is an `m × k` matrix of price relatives: row `j` is the
//! price-relative vector realised in outcome `j`, column `i` is asset `i`.
//! The growth rate of a constantly rebalanced portfolio `b` under an outcome
//! distribution `p` is `W(b, p) = Σ_j p_j ln⟨X_j, b⟩` (natural log).

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance on the sum of a probability vector.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Matrix of nonnegative price relatives with asset and outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Market {
    relatives: DMatrix<f64>,
    asset_names: Vec<String>,
    outcome_names: Vec<String>,
}

impl Market {
    /// Builds a market from rows of price relatives with default labels
    /// `A1..Ak` and `w1..wm`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let assets = (1..=k).map(|i| format!("A{i}")).collect();
        let outcomes = (1..=m).map(|j| format!("w{j}")).collect();
        Self::with_names(rows, assets, outcomes)
    }

    pub fn with_names(
        rows: Vec<Vec<f64>>,
        asset_names: Vec<String>,
        outcome_names: Vec<String>,
    ) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidMarket("no outcomes".into()));
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(Error::InvalidMarket("no assets".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidMarket(format!(
                    "row {j} has {} entries, expected {k}",
                    row.len()
                )));
            }
        }
        if asset_names.len() != k {
            return Err(Error::DimensionMismatch {
                what: "asset names",
                expected: k,
                found: asset_names.len(),
            });
        }
        if outcome_names.len() != m {
            return Err(Error::DimensionMismatch {
                what: "outcome names",
                expected: m,
                found: outcome_names.len(),
            });
        }
        let relatives = DMatrix::from_fn(m, k, |j, i| rows[j][i]);
        Self::from_matrix(relatives, asset_names, outcome_names)
    }

    pub(crate) fn from_matrix(
        relatives: DMatrix<f64>,
        asset_names: Vec<String>,
        outcome_names: Vec<String>,
    ) -> Result<Self> {
        let (m, k) = relatives.shape();
        for j in 0..m {
            for i in 0..k {
                let x = relatives[(j, i)];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidMarket(format!(
                        "entry ({}, {}) = {x} is not a nonnegative finite number",
                        outcome_names[j], asset_names[i]
                    )));
                }
            }
        }
        for j in 0..m {
            if relatives.row(j).iter().all(|&x| x == 0.0) {
                return Err(Error::InvalidMarket(format!(
                    "outcome {} has no asset with positive price relative",
                    outcome_names[j]
                )));
            }
        }
        for i in 0..k {
            if relatives.column(i).iter().all(|&x| x == 0.0) {
                return Err(Error::InvalidMarket(format!(
                    "asset {} is worthless in every outcome",
                    asset_names[i]
                )));
            }
        }
        Ok(Self {
            relatives,
            asset_names,
            outcome_names,
        })
    }

    pub fn outcomes(&self) -> usize {
        self.relatives.nrows()
    }

    pub fn assets(&self) -> usize {
        self.relatives.ncols()
    }

    pub fn get(&self, outcome: usize, asset: usize) -> f64 {
        self.relatives[(outcome, asset)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.relatives
    }

    pub fn row(&self, outcome: usize) -> Vec<f64> {
        self.relatives.row(outcome).iter().copied().collect()
    }

    pub fn column(&self, asset: usize) -> Vec<f64> {
        self.relatives.column(asset).iter().copied().collect()
    }

    pub fn asset_names(&self) -> &[String] {
        &self.asset_names
    }

    pub fn outcome_names(&self) -> &[String] {
        &self.outcome_names
    }

    /// Total price relative `⟨X_j, b⟩` of weights `b` in outcome `j`.
    pub fn payoff(&self, outcome: usize, weights: &[f64]) -> f64 {
        self.relatives
            .row(outcome)
            .iter()
            .zip(weights)
            .map(|(x, w)| x * w)
            .sum()
    }

    /// Payoff of a portfolio in every outcome.
    pub fn payoffs(&self, b: &Portfolio) -> Vec<f64> {
        (0..self.outcomes()).map(|j| self.payoff(j, b.weights())).collect()
    }

    /// Sub-market on the given assets, in the given order.
    pub fn select_assets(&self, assets: &[usize]) -> Result<Market> {
        let m = self.outcomes();
        let relatives = DMatrix::from_fn(m, assets.len(), |j, c| self.relatives[(j, assets[c])]);
        let names = assets.iter().map(|&i| self.asset_names[i].clone()).collect();
        Market::from_matrix(relatives, names, self.outcome_names.clone())
    }

    /// Merges identical outcome rows. Returns the reduced market and, for
    /// every original outcome, the index of its representative row.
    pub fn dedup_outcomes(&self) -> (Market, Vec<usize>) {
        let m = self.outcomes();
        let mut keep: Vec<usize> = Vec::new();
        let mut map = Vec::with_capacity(m);
        for j in 0..m {
            let found = keep
                .iter()
                .position(|&r| self.relatives.row(r) == self.relatives.row(j));
            match found {
                Some(pos) => map.push(pos),
                None => {
                    map.push(keep.len());
                    keep.push(j);
                }
            }
        }
        let relatives = DMatrix::from_fn(keep.len(), self.assets(), |r, i| self.relatives[(keep[r], i)]);
        let names = keep.iter().map(|&j| self.outcome_names[j].clone()).collect();
        let market = Market::from_matrix(relatives, self.asset_names.clone(), names)
            .expect("row subset of a valid market keeps every column positive");
        (market, map)
    }

    fn check_portfolio(&self, b: &Portfolio) -> Result<()> {
        if b.len() != self.assets() {
            return Err(Error::DimensionMismatch {
                what: "portfolio",
                expected: self.assets(),
                found: b.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_distribution(&self, p: &Distribution) -> Result<()> {
        if p.len() != self.outcomes() {
            return Err(Error::DimensionMismatch {
                what: "distribution",
                expected: self.outcomes(),
                found: p.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_dims(&self, b: &Portfolio, p: &Distribution) -> Result<()> {
        self.check_portfolio(b)?;
        self.check_distribution(p)
    }
}

fn validate_simplex(values: &[f64], tol: f64) -> std::result::Result<(), String> {
    if values.is_empty() {
        return Err("empty vector".into());
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(format!("entry {i} = {v} is not a nonnegative finite number"));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(format!("entries sum to {sum}, not 1"));
    }
    Ok(())
}

fn renormalize(mut values: Vec<f64>, tol: f64) -> std::result::Result<Vec<f64>, String> {
    validate_simplex(&values, tol)?;
    let sum: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= sum);
    Ok(values)
}

fn support_of(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Probability vector over the outcomes of a market.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_simplex(&probs, SIMPLEX_TOL).map_err(Error::InvalidDistribution)?;
        Ok(Self(probs))
    }

    /// Accepts vectors summing to 1 within `tol` and rescales them to sum to 1.
    pub fn normalized(probs: Vec<f64>, tol: f64) -> Result<Self> {
        renormalize(probs, tol)
            .map(Self)
            .map_err(Error::InvalidDistribution)
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn point_mass(m: usize, outcome: usize) -> Self {
        let mut v = vec![0.0; m];
        v[outcome] = 1.0;
        Self(v)
    }

    /// Convex combination `Σ t_i p_i`.
    pub fn mixture(parts: &[(f64, &Distribution)]) -> Result<Self> {
        let weights: Vec<f64> = parts.iter().map(|(t, _)| *t).collect();
        validate_simplex(&weights, SIMPLEX_TOL)
            .map_err(|e| Error::InvalidDistribution(format!("mixture weights: {e}")))?;
        let m = parts[0].1.len();
        let mut out = vec![0.0; m];
        for (t, p) in parts {
            if p.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "mixture component",
                    expected: m,
                    found: p.len(),
                });
            }
            for (o, x) in out.iter_mut().zip(p.probs()) {
                *o += t * x;
            }
        }
        let sum: f64 = out.iter().sum();
        out.iter_mut().for_each(|v| *v /= sum);
        Ok(Self(out))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        support_of(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Pushes probability mass through an outcome map (see
    /// [`Market::dedup_outcomes`]).
    pub fn merge(&self, map: &[usize], outcomes: usize) -> Distribution {
        let mut out = vec![0.0; outcomes];
        for (j, &r) in map.iter().enumerate() {
            out[r] += self.0[j];
        }
        Distribution(out)
    }
}

/// Wealth fractions over the assets of a market.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio(Vec<f64>);

impl Portfolio {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        validate_simplex(&weights, SIMPLEX_TOL).map_err(Error::InvalidPortfolio)?;
        Ok(Self(weights))
    }

    pub fn normalized(weights: Vec<f64>, tol: f64) -> Result<Self> {
        renormalize(weights, tol)
            .map(Self)
            .map_err(Error::InvalidPortfolio)
    }

    pub fn uniform(k: usize) -> Self {
        Self(vec![1.0 / k as f64; k])
    }

    /// Basis portfolio `e_i`.
    pub fn basis(k: usize, asset: usize) -> Self {
        let mut v = vec![0.0; k];
        v[asset] = 1.0;
        Self(v)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        support_of(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Builds a portfolio from solver output, clipping round-off negatives.
    pub(crate) fn from_raw(mut weights: Vec<f64>) -> Self {
        weights.iter_mut().for_each(|w| {
            if *w < 0.0 {
                *w = 0.0
            }
        });
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);
        Self(weights)
    }
}

impl From<Distribution> for Portfolio {
    fn from(d: Distribution) -> Self {
        Portfolio(d.0)
    }
}

impl From<Portfolio> for Distribution {
    fn from(b: Portfolio) -> Self {
        Distribution(b.0)
    }
}

/// Expected log price relative; finite or negative infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GrowthRate(f64);

impl GrowthRate {
    pub const NEG_INFINITY: GrowthRate = GrowthRate(f64::NEG_INFINITY);

    pub fn new(value: f64) -> Option<Self> {
        (!value.is_nan() && value != f64::INFINITY).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Growth in bits per period, i.e. the doubling rate.
    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl fmt::Display for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("-inf")
        }
    }
}

/// `Σ_j p_j ln y_j` with `0 · ln 0 = 0`.
pub(crate) fn expected_log(p: &[f64], payoffs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pj, &y) in p.iter().zip(payoffs) {
        if pj == 0.0 {
            continue;
        }
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += pj * y.ln();
    }
    acc
}

/// Doubling rate `W(b, p) = Σ_j p_j ln⟨X_j, b⟩`.
pub fn growth_rate(market: &Market, b: &Portfolio, p: &Distribution) -> Result<GrowthRate> {
    market.check_dims(b, p)?;
    let w = expected_log(p.probs(), &market.payoffs(b));
    Ok(GrowthRate(w))
}

/// Wealth `S_1, …, S_n` of a constantly rebalanced portfolio along a path of
/// outcomes, starting from `S_0 = 1`.
pub fn wealth_trajectory(market: &Market, b: &Portfolio, outcomes: &[usize]) -> Result<Vec<f64>> {
    if b.len() != market.assets() {
        return Err(Error::DimensionMismatch {
            what: "portfolio",
            expected: market.assets(),
            found: b.len(),
        });
    }
    let payoffs = market.payoffs(b);
    let mut wealth = 1.0;
    outcomes
        .iter()
        .map(|&j| {
            let x = payoffs.get(j).ok_or(Error::OutcomeOutOfRange {
                index: j,
                outcomes: market.outcomes(),
            })?;
            wealth *= x;
            Ok(wealth)
        })
        .collect()
}

/// Frequency vector of a sequence of outcome indices.
pub fn empirical_distribution(outcomes: &[usize], m: usize) -> Result<Distribution> {
    if outcomes.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut counts = vec![0usize; m];
    for &j in outcomes {
        *counts.get_mut(j).ok_or(Error::OutcomeOutOfRange { index: j, outcomes: m })? += 1;
    }
    let n = outcomes.len() as f64;
    Ok(Distribution(counts.into_iter().map(|c| c as f64 / n).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kelly2() -> Market {
        Market::new(vec![vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap()
    }

    #[test]
    fn market_invariants() {
        assert!(Market::new(vec![]).is_err());
        assert!(Market::new(vec![vec![]]).is_err());
        assert!(Market::new(vec![vec![1.0, -0.1]]).is_err());
        assert!(Market::new(vec![vec![1.0, f64::NAN]]).is_err());
        assert!(Market::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).is_err());
        assert!(Market::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).is_err());
        assert!(Market::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn simplex_vectors() {
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Portfolio::new(vec![]).is_err());
        let d = Distribution::normalized(vec![0.5, 0.5 + 1e-10], 1e-9).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn safe_asset_market_has_zero_growth() {
        let m = Market::new(vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let b = Portfolio::new(vec![0.3, 0.7]).unwrap();
        let p = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(growth_rate(&m, &b, &p).unwrap().value(), 0.0);
    }

    #[test]
    fn kelly_growth_matches_formula() {
        let p = Distribution::new(vec![0.75, 0.25]).unwrap();
        let b = Portfolio::new(vec![0.75, 0.25]).unwrap();
        let w = growth_rate(&kelly2(), &b, &p).unwrap().value();
        let expected = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
        assert!((w - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_payoff_with_positive_probability_is_neg_infinity() {
        let m = Market::new(vec![vec![1.0, 2.0], vec![1.0, 0.0]]).unwrap();
        let b = Portfolio::basis(2, 1);
        let p = Distribution::uniform(2);
        assert_eq!(growth_rate(&m, &b, &p).unwrap(), GrowthRate::NEG_INFINITY);
        // zero-probability outcomes contribute nothing
        let q = Distribution::point_mass(2, 0);
        assert_eq!(growth_rate(&m, &b, &q).unwrap().value(), 2f64.ln());
    }

    #[test]
    fn growth_rate_checks_dimensions() {
        let b = Portfolio::uniform(3);
        let p = Distribution::uniform(2);
        assert!(matches!(
            growth_rate(&kelly2(), &b, &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn wealth_paths() {
        let m = Market::new(vec![vec![1.0, 2.0], vec![1.0, 0.0]]).unwrap();
        let b = Portfolio::uniform(2);
        assert!(wealth_trajectory(&m, &b, &[]).unwrap().is_empty());
        let s = wealth_trajectory(&m, &b, &[0, 0, 1]).unwrap();
        assert_eq!(s, vec![1.5, 2.25, 1.125]);
        let safe = wealth_trajectory(&m, &Portfolio::basis(2, 0), &[1, 0, 1, 1]).unwrap();
        assert!(safe.iter().all(|&w| w == 1.0));
        assert!(matches!(
            wealth_trajectory(&m, &b, &[0, 2]),
            Err(Error::OutcomeOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn empirical_frequencies() {
        let d = empirical_distribution(&[0, 0, 1], 2).unwrap();
        assert_eq!(d.probs(), &[2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(empirical_distribution(&[1], 3).unwrap().probs(), &[0.0, 1.0, 0.0]);
        assert_eq!(empirical_distribution(&[0, 1, 0, 1], 2).unwrap().probs(), &[0.5, 0.5]);
        assert!(matches!(empirical_distribution(&[], 2), Err(Error::EmptySequence)));
        assert!(empirical_distribution(&[3], 2).is_err());
    }

    #[test]
    fn dedup_merges_rows() {
        let m = Market::new(vec![vec![2.0, 0.0], vec![0.0, 3.0], vec![2.0, 0.0]]).unwrap();
        let (d, map) = m.dedup_outcomes();
        assert_eq!(d.outcomes(), 2);
        assert_eq!(map, vec![0, 1, 0]);
        let p = Distribution::new(vec![0.2, 0.5, 0.3]).unwrap().merge(&map, 2);
        assert_eq!(p.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn growth_in_bits() {
        let g = GrowthRate::new(std::f64::consts::LN_2).unwrap();
        assert!((g.bits() - 1.0).abs() < 1e-15);
        assert!(GrowthRate::new(f64::INFINITY).is_none());
        assert!(GrowthRate::new(f64::NAN).is_none());
    }
}
