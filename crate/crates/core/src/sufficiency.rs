//! Sampling tests for markets whose regret is information divergence.
//!
//! In a Kelly gambling market the regret of betting on `q` when `p` holds is
//! exactly `D(p‖q)`. The tests here fit a constant `c` on a reference pair
//! and then look for pairs where `regret ≠ c · D`, using seeded random
//! interior and near-boundary pairs plus pairs found by linear programming:
//! every `p` for which the optimum for `q` stays optimal has zero regret,
//! and such `p ≠ q` exist in most markets that are not Kelly markets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::divergence::{distribution_regret, kl_divergence};
use crate::error::{Error, Result};
use crate::gambling::{is_kelly_market, Odds};
use crate::geometry::{LinearProgram, Sense};
use crate::logopt::solve;
use crate::market::{Distribution, Market};

/// Samples used by [`characterization_crosscheck`].
pub const DEFAULT_SAMPLES: usize = 64;

/// Relative tolerance of the proportionality test: `1e-7 · (1 + D)`.
pub const PROPORTIONALITY_TOL: f64 = 1e-7;

const ZERO_REGRET: f64 = 1e-9;
const MIN_SEPARATION: f64 = 1e-6;
/// Sampled `q`s that also seed a linear-programming witness search.
const TARGETED: usize = 32;
const BOUNDARY_MASS: f64 = 0.99;

/// A pair violating `regret = c · D`.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub p: Distribution,
    pub q: Distribution,
    pub regret: f64,
    pub divergence: f64,
    /// `c · D(p‖q)`; absent when no positive `c` could be fitted.
    pub scaled_divergence: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ProportionalityVerdict {
    pub proportional: bool,
    /// Only one distribution exists (`m = 1`), so the question is vacuous.
    pub degenerate: bool,
    pub constant_c: Option<f64>,
    pub counterexample: Option<Counterexample>,
    pub samples_tested: usize,
}

fn dirichlet(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1) + 1e-300).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn near_boundary(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let j = rng.gen_range(0..m);
    let rest = dirichlet(rng, m);
    (0..m)
        .map(|l| (1.0 - BOUNDARY_MASS) * rest[l] + if l == j { BOUNDARY_MASS } else { 0.0 })
        .collect()
}

fn to_dist(v: Vec<f64>) -> Distribution {
    Distribution::normalized(v, 1e-9).expect("sampled vectors are probability vectors")
}

/// Deterministic list of `(p, q)` pairs: interior pairs interleaved with
/// pairs where one side puts most of its mass on a single outcome.
pub(crate) fn sample_pairs(m: usize, count: usize, seed: u64) -> Vec<(Distribution, Distribution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (p, q) = match i % 4 {
                2 => (near_boundary(&mut rng, m), dirichlet(&mut rng, m)),
                3 => (dirichlet(&mut rng, m), near_boundary(&mut rng, m)),
                _ => (dirichlet(&mut rng, m), dirichlet(&mut rng, m)),
            };
            (to_dist(p), to_dist(q))
        })
        .collect()
}

/// Some `p` with `‖p − q‖∞ > 1e-6` for which the optimum found for `q` is
/// also optimal, so that the regret of `q` under `p` vanishes.
///
/// The set of such `p` is a polytope cut out by the stationarity conditions
/// at the fixed portfolio; its extent along each coordinate is probed by
/// linear programs and the farthest verified point is returned.
pub fn zero_regret_witness(market: &Market, q: &Distribution) -> Result<Option<(Distribution, f64)>> {
    let m = market.outcomes();
    let k = market.assets();
    let b = solve(market, q, None)?.portfolio;
    let y = market.payoffs(&b);
    let slack = 1e-12;

    let bounds: Vec<(f64, f64)> = y.iter().map(|&yj| (0.0, if yj > 0.0 { 1.0 } else { 0.0 })).collect();
    let scaled = |i: usize| -> Vec<f64> {
        (0..m)
            .map(|j| if y[j] > 0.0 { market.get(j, i) / y[j] } else { 0.0 })
            .collect()
    };
    let build = |objective: &[f64], maximize: bool| {
        let mut lp = if maximize {
            LinearProgram::maximize(objective, &bounds)
        } else {
            LinearProgram::minimize(objective, &bounds)
        };
        lp.constraint(&vec![1.0; m], Sense::Eq, 1.0);
        for i in 0..k {
            let row = scaled(i);
            lp.constraint(&row, Sense::Le, 1.0 + slack);
            if b.weights()[i] > 0.0 {
                lp.constraint(&row, Sense::Ge, 1.0 - slack);
            }
        }
        lp
    };

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for j in 0..m {
        let mut objective = vec![0.0; m];
        objective[j] = 1.0;
        for maximize in [true, false] {
            if let Some(x) = build(&objective, maximize).solve()? {
                candidates.push(x);
            }
        }
    }
    let dist = |v: &[f64]| -> f64 {
        v.iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    candidates.sort_by(|a, b| dist(b).total_cmp(&dist(a)));

    for c in candidates {
        if dist(&c) <= 2.0 * MIN_SEPARATION {
            break;
        }
        let far: Vec<f64> = c.iter().map(|v| v.max(0.0)).collect();
        let mid: Vec<f64> = far.iter().zip(q.probs()).map(|(a, b)| 0.5 * (a + b)).collect();
        for v in [far, mid] {
            let s: f64 = v.iter().sum();
            let Ok(p) = Distribution::normalized(v.into_iter().map(|x| x / s).collect(), 1e-9) else {
                continue;
            };
            if dist(p.probs()) <= MIN_SEPARATION {
                continue;
            }
            let r = distribution_regret(market, &p, q)?;
            if r.is_finite() && r.value() <= ZERO_REGRET {
                return Ok(Some((p, r.value())));
            }
        }
    }
    Ok(None)
}

fn reference_pair(m: usize) -> (Distribution, Distribution) {
    let total = (m * (m + 1) / 2) as f64;
    let q = (0..m).map(|j| (j + 1) as f64 / total).collect();
    (Distribution::uniform(m), to_dist(q))
}

/// Fits `c` on a fixed reference pair and tests `regret = c · D` on
/// `sample_count` seeded pairs, plus witness pairs found from the first
/// sampled `q`s. Deterministic for a given seed.
pub fn proportionality_test(market: &Market, sample_count: usize, seed: u64) -> Result<ProportionalityVerdict> {
    let m = market.outcomes();
    if m < 2 {
        return Ok(ProportionalityVerdict {
            proportional: false,
            degenerate: true,
            constant_c: None,
            counterexample: None,
            samples_tested: 0,
        });
    }
    let (p0, q0) = reference_pair(m);
    let d0 = kl_divergence(&p0, &q0)?.value();
    let r0 = distribution_regret(market, &p0, &q0)?;
    if !r0.is_finite() || r0.value() <= ZERO_REGRET {
        return Ok(ProportionalityVerdict {
            proportional: false,
            degenerate: false,
            constant_c: None,
            counterexample: Some(Counterexample {
                p: p0,
                q: q0,
                regret: r0.value(),
                divergence: d0,
                scaled_divergence: None,
            }),
            samples_tested: 0,
        });
    }
    let c = r0.value() / d0;

    let pairs = sample_pairs(m, sample_count, seed);
    let evaluated: Vec<Result<(f64, f64)>> = pairs
        .par_iter()
        .map(|(p, q)| {
            let d = kl_divergence(p, q)?.value();
            let r = distribution_regret(market, p, q)?.value();
            Ok((r, d))
        })
        .collect();
    let violates = |r: f64, d: f64| !((r - c * d).abs() <= PROPORTIONALITY_TOL * (1.0 + d));

    let mut tested = 0;
    let mut found = None;
    for ((p, q), res) in pairs.iter().zip(evaluated) {
        let (r, d) = res?;
        tested += 1;
        if violates(r, d) {
            found = Some(Counterexample {
                p: p.clone(),
                q: q.clone(),
                regret: r,
                divergence: d,
                scaled_divergence: Some(c * d),
            });
            break;
        }
    }
    if found.is_none() {
        let targeted: Vec<Result<Option<(Distribution, f64)>>> = pairs
            .par_iter()
            .take(TARGETED)
            .map(|(_, q)| zero_regret_witness(market, q))
            .collect();
        for ((_, q), res) in pairs.iter().zip(targeted) {
            if let Some((p, r)) = res? {
                tested += 1;
                let d = kl_divergence(&p, q)?.value();
                if violates(r, d) {
                    found = Some(Counterexample {
                        p,
                        q: q.clone(),
                        regret: r,
                        divergence: d,
                        scaled_divergence: Some(c * d),
                    });
                    break;
                }
            }
        }
    }
    Ok(ProportionalityVerdict {
        proportional: found.is_none(),
        degenerate: false,
        constant_c: found.is_none().then_some(c),
        counterexample: found,
        samples_tested: tested,
    })
}

#[derive(Debug, Clone)]
pub struct InjectivityReport {
    /// No pair `p ≠ q` with zero regret was found.
    pub injective: bool,
    /// `(p, q, regret)` with `regret ≤ 1e-9` and `‖p − q‖∞ > 1e-6`.
    pub witness: Option<(Distribution, Distribution, f64)>,
    pub distinct_outcomes: usize,
    /// Whether the market has at least three distinct price relative vectors,
    /// the setting in which injectivity characterises Kelly markets.
    pub equivalence_applies: bool,
}

/// Searches for `p ≠ q` whose regret vanishes.
pub fn injectivity_test(market: &Market, sample_count: usize, seed: u64) -> Result<InjectivityReport> {
    let m = market.outcomes();
    let distinct_outcomes = market.dedup_outcomes().0.outcomes();
    let mut report = InjectivityReport {
        injective: true,
        witness: None,
        distinct_outcomes,
        equivalence_applies: distinct_outcomes >= 3,
    };
    if m < 2 {
        return Ok(report);
    }
    let pairs = sample_pairs(m, sample_count, seed);
    let targeted: Vec<Result<Option<(Distribution, f64)>>> = pairs
        .par_iter()
        .map(|(_, q)| zero_regret_witness(market, q))
        .collect();
    for ((_, q), res) in pairs.iter().zip(targeted) {
        if let Some((p, r)) = res? {
            report.injective = false;
            report.witness = Some((p, q.clone(), r));
            return Ok(report);
        }
    }
    let regrets: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|(p, q)| distribution_regret(market, p, q).map(|r| r.value()))
        .collect();
    for ((p, q), r) in pairs.iter().zip(regrets) {
        let r = r?;
        let sep = p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if r <= ZERO_REGRET && sep > MIN_SEPARATION {
            report.injective = false;
            report.witness = Some((p.clone(), q.clone(), r));
            return Ok(report);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct Crosscheck {
    pub agree: bool,
    pub verdict: ProportionalityVerdict,
    pub kelly_odds: Option<Odds>,
}

/// Runs the proportionality test and the structural Kelly test on the
/// market with duplicate outcomes merged, and reports whether they agree.
pub fn characterization_crosscheck(market: &Market, seed: u64) -> Result<Crosscheck> {
    let (deduped, _) = market.dedup_outcomes();
    let verdict = proportionality_test(&deduped, DEFAULT_SAMPLES, seed)?;
    let kelly_odds = is_kelly_market(&deduped)?;
    if verdict.degenerate {
        return Err(Error::Degenerate("a single distinct outcome".into()));
    }
    Ok(Crosscheck {
        agree: verdict.proportional == kelly_odds.is_some(),
        verdict,
        kelly_odds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(rows: &[&[f64]]) -> Market {
        Market::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn kelly_market_is_proportional_with_unit_constant() {
        let v = proportionality_test(&market(&[&[2.0, 0.0], &[0.0, 3.0]]), 64, 7).unwrap();
        assert!(v.proportional);
        assert!((v.constant_c.unwrap() - 1.0).abs() < 1e-8);
        assert!(v.counterexample.is_none());
    }

    #[test]
    fn double_or_nothing_is_not_proportional() {
        let v = proportionality_test(&market(&[&[1.0, 2.0], &[1.0, 0.0]]), 64, 7).unwrap();
        assert!(!v.proportional);
        let cx = v.counterexample.unwrap();
        assert!(cx.divergence > 0.0);
    }

    #[test]
    fn single_outcome_is_degenerate() {
        let v = proportionality_test(&market(&[&[1.0, 2.0]]), 16, 0).unwrap();
        assert!(v.degenerate && !v.proportional);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let m = market(&[&[1.0, 2.0, 0.5], &[1.0, 0.0, 1.5], &[1.0, 0.5, 0.5]]);
        let a = proportionality_test(&m, 32, 11).unwrap();
        let b = proportionality_test(&m, 32, 11).unwrap();
        assert_eq!(a.proportional, b.proportional);
        assert_eq!(a.samples_tested, b.samples_tested);
        let (ca, cb) = (a.counterexample.unwrap(), b.counterexample.unwrap());
        assert_eq!(ca.p.probs(), cb.p.probs());
        assert_eq!(ca.regret.to_bits(), cb.regret.to_bits());
    }

    #[test]
    fn injectivity_examples() {
        let kelly = market(&[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 4.0]]);
        let r = injectivity_test(&kelly, 32, 3).unwrap();
        assert!(r.injective && r.equivalence_applies);

        let safe = market(&[&[1.0, 0.5], &[1.0, 0.9]]);
        let r = injectivity_test(&safe, 32, 3).unwrap();
        assert!(!r.injective);
        let (p, q, regret) = r.witness.unwrap();
        assert!(regret <= 1e-9);
        assert!(p.probs().iter().zip(q.probs()).any(|(a, b)| (a - b).abs() > 1e-6));
        assert!(!r.equivalence_applies);

        let don = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let r = injectivity_test(&don, 32, 3).unwrap();
        assert!(!r.injective);
    }

    #[test]
    fn crosscheck_prunes_dominated_extra_asset() {
        let m = market(&[&[2.0, 0.0, 0.1], &[0.0, 3.0, 0.1]]);
        let c = characterization_crosscheck(&m, 5).unwrap();
        assert!(c.agree && c.verdict.proportional && c.kelly_odds.is_some());
        let m = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let c = characterization_crosscheck(&m, 5).unwrap();
        assert!(c.agree && !c.verdict.proportional);
    }

    #[test]
    fn sampled_pairs_are_distributions() {
        for (p, q) in sample_pairs(4, 40, 9) {
            assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q.probs().iter().all(|&v| v > 0.0));
        }
    }
}
