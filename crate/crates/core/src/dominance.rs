//! Dominance between portfolios and pruning of dominated assets.
//!
//! `b1` dominates `b2` when `⟨X_j, b1⟩ ≥ ⟨X_j, b2⟩` in every outcome, and
//! strictly dominates it when every inequality is strict. Whether a basis
//! asset is dominated by some portfolio of the others is decided by a
//! linear program that maximises the worst-case payoff margin.

use crate::error::{Error, Result};
use crate::geometry::{LinearProgram, Sense};
use crate::market::{Market, Portfolio};

/// Margin above which a basis asset counts as strictly dominated.
pub const STRICT_MARGIN: f64 = 1e-10;

/// Margin above which a basis asset counts as (weakly) dominated.
pub const WEAK_MARGIN: f64 = -1e-10;

fn check(market: &Market, b: &Portfolio) -> Result<()> {
    if b.len() != market.assets() {
        return Err(Error::DimensionMismatch {
            what: "portfolio",
            expected: market.assets(),
            found: b.len(),
        });
    }
    Ok(())
}

/// `⟨X_j, b1⟩ ≥ ⟨X_j, b2⟩` for every outcome, compared exactly.
pub fn dominates(market: &Market, b1: &Portfolio, b2: &Portfolio) -> Result<bool> {
    check(market, b1)?;
    check(market, b2)?;
    Ok((0..market.outcomes())
        .all(|j| market.payoff(j, b1.weights()) >= market.payoff(j, b2.weights())))
}

/// `⟨X_j, b1⟩ > ⟨X_j, b2⟩` for every outcome, compared exactly.
pub fn strictly_dominates(market: &Market, b1: &Portfolio, b2: &Portfolio) -> Result<bool> {
    check(market, b1)?;
    check(market, b2)?;
    Ok((0..market.outcomes())
        .all(|j| market.payoff(j, b1.weights()) > market.payoff(j, b2.weights())))
}

/// Some `i ∈ supp(b2)` such that `b1` strictly dominates `e_i`.
///
/// Strict domination of `b2` does not by itself guarantee such an index
/// (a mixture can be beaten while each of its components is not), so the
/// result is `None` whenever no basis asset in the support qualifies.
pub fn basis_domination_witness(
    market: &Market,
    b1: &Portfolio,
    b2: &Portfolio,
) -> Result<Option<usize>> {
    check(market, b1)?;
    check(market, b2)?;
    let k = market.assets();
    for i in b2.support() {
        if strictly_dominates(market, b1, &Portfolio::basis(k, i))? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Best worst-case margin `max_b min_j (⟨X_j, b⟩ − X_{j,asset})` over
/// portfolios `b` supported on `others`, with the maximising portfolio.
/// The margin is recomputed exactly from the LP solution.
pub fn domination_margin(market: &Market, asset: usize, others: &[usize]) -> Result<Option<(f64, Portfolio)>> {
    if others.is_empty() {
        return Ok(None);
    }
    let n = others.len();
    // variables: weights on `others`, then the margin s
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut bounds = vec![(0.0, 1.0); n + 1];
    bounds[n] = (f64::NEG_INFINITY, f64::INFINITY);
    let mut lp = LinearProgram::maximize(&objective, &bounds);
    for j in 0..market.outcomes() {
        let mut row: Vec<f64> = others.iter().map(|&l| market.get(j, l)).collect();
        row.push(-1.0);
        lp.constraint(&row, Sense::Ge, market.get(j, asset));
    }
    let mut ones = vec![1.0; n + 1];
    ones[n] = 0.0;
    lp.constraint(&ones, Sense::Eq, 1.0);
    let Some(sol) = lp.solve()? else {
        return Err(Error::LinearProgram("domination LP reported infeasible".into()));
    };
    let mut weights = vec![0.0; market.assets()];
    for (c, &l) in others.iter().enumerate() {
        weights[l] = sol[c].max(0.0);
    }
    let b = Portfolio::from_raw(weights);
    let margin = (0..market.outcomes())
        .map(|j| market.payoff(j, b.weights()) - market.get(j, asset))
        .fold(f64::INFINITY, f64::min);
    Ok(Some((margin, b)))
}

/// Pairwise relation between two basis assets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    StrictlyDominates,
    Dominates,
    None,
}

/// `matrix[a][b]` describes how `e_a` relates to `e_b`.
pub fn dominance_matrix(market: &Market) -> Vec<Vec<Relation>> {
    let k = market.assets();
    (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let rows = 0..market.outcomes();
                    if rows.clone().all(|j| market.get(j, a) > market.get(j, b)) {
                        Relation::StrictlyDominates
                    } else if rows.clone().all(|j| market.get(j, a) >= market.get(j, b)) {
                        Relation::Dominates
                    } else {
                        Relation::None
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PruneOptions {
    /// Also remove assets that are dominated but not strictly dominated.
    pub remove_weak: bool,
}

/// Result of pruning; indices refer to the original market.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub market: Market,
    /// Original indices of the assets kept, in order.
    pub kept: Vec<usize>,
    /// Original indices of removed assets, in removal order.
    pub removed: Vec<usize>,
    /// Kept assets that are dominated, but not strictly, by the others.
    pub weakly_dominated: Vec<usize>,
}

/// Removes strictly dominated assets until none remain.
pub fn prune(market: &Market) -> Result<Pruned> {
    prune_with(market, PruneOptions::default())
}

pub fn prune_with(market: &Market, options: PruneOptions) -> Result<Pruned> {
    let mut kept: Vec<usize> = (0..market.assets()).collect();
    let mut removed = Vec::new();

    let find = |kept: &[usize], threshold: f64, strict: bool| -> Result<Option<usize>> {
        if kept.len() < 2 {
            return Ok(None);
        }
        for &i in kept {
            let others: Vec<usize> = kept.iter().copied().filter(|&l| l != i).collect();
            if let Some((margin, _)) = domination_margin(market, i, &others)? {
                if (strict && margin > threshold) || (!strict && margin >= threshold) {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    };

    loop {
        while let Some(i) = find(&kept, STRICT_MARGIN, true)? {
            kept.retain(|&l| l != i);
            removed.push(i);
        }
        if !options.remove_weak {
            break;
        }
        match find(&kept, WEAK_MARGIN, false)? {
            Some(i) => {
                kept.retain(|&l| l != i);
                removed.push(i);
            }
            None => break,
        }
    }

    let mut weakly_dominated = Vec::new();
    if kept.len() >= 2 {
        for &i in &kept {
            let others: Vec<usize> = kept.iter().copied().filter(|&l| l != i).collect();
            if let Some((margin, _)) = domination_margin(market, i, &others)? {
                if margin >= WEAK_MARGIN {
                    weakly_dominated.push(i);
                }
            }
        }
    }
    Ok(Pruned {
        market: market.select_assets(&kept)?,
        kept,
        removed,
        weakly_dominated,
    })
}
