//! Minimax regret over a finite family of distributions.
//!
//! `C = min_b max_i (F(p_i) − W(b, p_i))` is a convex program. It is solved
//! in epigraph form, minimising `s` subject to `W(b, p_i) ≥ F(p_i) − s`,
//! with a log-barrier interior-point method. The barrier multipliers of the
//! family constraints converge to the worst-case mixture `t`, and
//! `Σ_i t_i F(p_i) − F(Σ_i t_i p_i)` is a lower bound on `C`, so the two
//! sides give a certified duality gap.

use nalgebra::{DMatrix, DVector};

use crate::divergence::action_regret;
use crate::error::{Error, Result};
use crate::logopt::solve;
use crate::market::{Distribution, Market, Portfolio};

/// Maximum Newton steps summed over all barrier stages.
const MAX_NEWTON: usize = 20_000;
/// Newton steps per barrier stage; warm starts normally need far fewer.
const STAGE_NEWTON: usize = 100;
/// Stop increasing the barrier weight once `(n + k) / τ` falls below this.
const BARRIER_GAP: f64 = 1e-11;
const DECREMENT_TOL: f64 = 1e-10;
const CHECK_TOL: f64 = 1e-8;
const SADDLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MinimaxReport {
    /// `C = min_b max_i regret(p_i, b)`.
    pub value: f64,
    pub robust_portfolio: Portfolio,
    /// Weights `t` over the family.
    pub worst_mixture: Vec<f64>,
    /// `Σ_i t_i p_i`.
    pub barycenter: Distribution,
    /// Upper value minus lower value, clamped at zero.
    pub duality_gap: f64,
}

struct Family {
    x: DMatrix<f64>,
    probs: Vec<Vec<f64>>,
    best: Vec<f64>,
}

impl Family {
    fn new(market: &Market, family: &[Distribution]) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidDistribution("empty family".into()));
        }
        let mut best = Vec::with_capacity(family.len());
        for p in family {
            let f = solve(market, p, None)?.growth.value();
            if !f.is_finite() {
                return Err(Error::NoFiniteGrowth);
            }
            best.push(f);
        }
        Ok(Self {
            x: market.matrix().clone(),
            probs: family.iter().map(|p| p.probs().to_vec()).collect(),
            best,
        })
    }

    fn len(&self) -> usize {
        self.probs.len()
    }

    /// Growth rates `W(b, p_i)`; `-∞` where some payoff on the support vanishes.
    fn growths(&self, b: &DVector<f64>) -> Vec<f64> {
        let y = &self.x * b;
        self.probs
            .iter()
            .map(|p| {
                let mut acc = 0.0;
                for (j, &pj) in p.iter().enumerate() {
                    if pj > 0.0 {
                        if y[j] <= 0.0 {
                            return f64::NEG_INFINITY;
                        }
                        acc += pj * y[j].ln();
                    }
                }
                acc
            })
            .collect()
    }

    fn regrets(&self, b: &DVector<f64>) -> Vec<f64> {
        self.growths(b)
            .iter()
            .zip(&self.best)
            .map(|(w, f)| (f - w).max(0.0))
            .collect()
    }

    /// Barrier objective `τ s − Σ ln h_i − Σ ln b_l` with `h_i = s − F_i + W_i`.
    fn barrier(&self, tau: f64, b: &DVector<f64>, s: f64) -> Option<f64> {
        if b.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let mut phi = tau * s;
        for (w, f) in self.growths(b).iter().zip(&self.best) {
            let h = s - f + w;
            if !(h > 0.0) {
                return None;
            }
            phi -= h.ln();
        }
        Some(phi - b.iter().map(|v| v.ln()).sum::<f64>())
    }

    /// Newton direction for the barrier objective under `Σ b = 1`, and the
    /// directional derivative along it.
    fn newton_step(&self, tau: f64, b: &DVector<f64>, s: f64) -> Option<(DVector<f64>, f64, f64)> {
        let k = b.len();
        let m = self.x.nrows();
        let y = &self.x * b;
        let growths = self.growths(b);
        let mut grad = DVector::zeros(k + 1);
        let mut hess = DMatrix::zeros(k + 1, k + 1);
        for (i, p) in self.probs.iter().enumerate() {
            let h = s - self.best[i] + growths[i];
            let mut gw = DVector::zeros(k);
            let mut curv = DMatrix::zeros(k, k);
            for j in 0..m {
                if p[j] == 0.0 {
                    continue;
                }
                let row = self.x.row(j).transpose();
                gw.axpy(p[j] / y[j], &row, 1.0);
                curv.ger(p[j] / (y[j] * y[j]), &row, &row, 1.0);
            }
            let mut dh = DVector::zeros(k + 1);
            dh.rows_mut(0, k).copy_from(&gw);
            dh[k] = 1.0;
            grad.axpy(-1.0 / h, &dh, 1.0);
            hess.ger(1.0 / (h * h), &dh, &dh, 1.0);
            let mut block = hess.view_mut((0, 0), (k, k));
            block += curv / h;
        }
        for l in 0..k {
            grad[l] -= 1.0 / b[l];
            hess[(l, l)] += 1.0 / (b[l] * b[l]);
        }
        grad[k] += tau;

        let n = k + 2;
        let mut kkt = DMatrix::zeros(n, n);
        kkt.view_mut((0, 0), (k + 1, k + 1)).copy_from(&hess);
        for l in 0..k {
            kkt[(l, k + 1)] = 1.0;
            kkt[(k + 1, l)] = 1.0;
        }
        let mut rhs = DVector::zeros(n);
        rhs.rows_mut(0, k + 1).copy_from(&(-&grad));
        // Symmetric diagonal scaling; the barrier terms make the raw system
        // badly conditioned near the boundary.
        let scale = DVector::from_fn(n, |i, _| if i <= k { 1.0 / kkt[(i, i)].sqrt() } else { 1.0 });
        for r in 0..n {
            for c in 0..n {
                kkt[(r, c)] *= scale[r] * scale[c];
            }
            rhs[r] *= scale[r];
        }
        let sol = kkt.lu().solve(&rhs)?.component_mul(&scale);
        let db = sol.rows(0, k).into_owned();
        let ds = sol[k];
        let slope = grad.rows(0, k).dot(&db) + grad[k] * ds;
        Some((db, ds, slope))
    }
}

/// Minimax regret of `family` together with the robust portfolio and the
/// worst-case mixture.
pub fn minimax_regret(market: &Market, family: &[Distribution]) -> Result<MinimaxReport> {
    for p in family {
        market.check_distribution(p)?;
    }
    let fam = Family::new(market, family)?;
    let k = market.assets();
    let n = fam.len();

    let mut b = DVector::from_element(k, 1.0 / k as f64);
    let mut s = fam.regrets(&b).iter().cloned().fold(0.0, f64::max) + 1.0;
    let mut tau = 1.0;
    let mut steps = 0;
    loop {
        // Centering.
        for _ in 0..STAGE_NEWTON {
            steps += 1;
            if steps > MAX_NEWTON {
                return Err(Error::NoConvergence { iterations: MAX_NEWTON });
            }
            let Some((db, ds, slope)) = fam.newton_step(tau, &b, s) else {
                break;
            };
            // Half the squared Newton decrement bounds the suboptimality
            // within the stage.
            if -slope / 2.0 < DECREMENT_TOL {
                break;
            }
            let phi0 = fam.barrier(tau, &b, s).expect("iterate stays interior");
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-14 {
                let nb = &b + &db * t;
                let ns = s + ds * t;
                if nb == b && ns == s {
                    break;
                }
                if let Some(phi) = fam.barrier(tau, &nb, ns) {
                    if phi <= phi0 + 0.25 * t * slope {
                        b = nb;
                        s = ns;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if (n + k) as f64 / tau < BARRIER_GAP {
            break;
        }
        tau *= 10.0;
    }

    let growths = fam.growths(&b);
    let mut t: Vec<f64> = growths
        .iter()
        .zip(&fam.best)
        .map(|(w, f)| 1.0 / (tau * (s - f + w)))
        .collect();
    let total: f64 = t.iter().sum();
    t.iter_mut().for_each(|v| *v /= total);

    let robust_portfolio = Portfolio::from_raw(b.iter().copied().collect());
    let bv = DVector::from_column_slice(robust_portfolio.weights());
    let upper = fam.regrets(&bv).into_iter().fold(0.0, f64::max);
    let parts: Vec<(f64, &Distribution)> = t.iter().copied().zip(family).collect();
    let barycenter = Distribution::mixture(&parts)?;
    let lower = weak_duality_bound(market, &fam.best, &t, &barycenter)?;
    Ok(MinimaxReport {
        value: upper,
        robust_portfolio,
        worst_mixture: t,
        barycenter,
        duality_gap: (upper - lower).max(0.0),
    })
}

/// `min_b Σ_i t_i regret(p_i, b) = Σ_i t_i F(p_i) − F(Σ_i t_i p_i)`.
fn weak_duality_bound(market: &Market, best: &[f64], t: &[f64], barycenter: &Distribution) -> Result<f64> {
    let mixed: f64 = t.iter().zip(best).map(|(ti, f)| ti * f).sum();
    Ok((mixed - solve(market, barycenter, None)?.growth.value()).max(0.0))
}

/// Lower bounds on the minimax value derived from a mixture `t`.
#[derive(Debug, Clone)]
pub struct LowerBoundCheck {
    pub value: f64,
    /// `min_b Σ t_i regret(p_i, b)`. This is the whole bound when the second
    /// term is evaluated at the optimal portfolio of the barycenter, where it
    /// vanishes.
    pub bound: f64,
    pub holds: bool,
    /// `bound + regret(p̄, a)` with `a` the robust portfolio.
    pub robust_bound: f64,
    pub robust_holds: bool,
}

pub fn lower_bound_check(market: &Market, family: &[Distribution], t: &[f64]) -> Result<LowerBoundCheck> {
    if t.len() != family.len() {
        return Err(Error::DimensionMismatch {
            what: "mixture",
            expected: family.len(),
            found: t.len(),
        });
    }
    let t = Distribution::new(t.to_vec())?;
    let report = minimax_regret(market, family)?;
    let fam = Family::new(market, family)?;
    let parts: Vec<(f64, &Distribution)> = t.probs().iter().copied().zip(family).collect();
    let barycenter = Distribution::mixture(&parts)?;
    let bound = weak_duality_bound(market, &fam.best, t.probs(), &barycenter)?;
    let extra = action_regret(market, &barycenter, &report.robust_portfolio)?.value();
    let robust_bound = bound + extra;
    Ok(LowerBoundCheck {
        value: report.value,
        bound,
        holds: bound <= report.value + CHECK_TOL,
        robust_bound,
        robust_holds: robust_bound <= report.value + CHECK_TOL,
    })
}

/// Compares the worst-case regret of `b` with `C + regret(p̄*, b)`, where
/// `p̄*` is the barycenter of the worst-case mixture.
#[derive(Debug, Clone)]
pub struct SaddleCheck {
    pub sup_regret: f64,
    pub value: f64,
    pub barycenter_regret: f64,
    pub holds: bool,
}

pub fn saddle_check(market: &Market, family: &[Distribution], b: &Portfolio) -> Result<SaddleCheck> {
    let report = minimax_regret(market, family)?;
    let mut sup_regret: f64 = 0.0;
    for p in family {
        sup_regret = sup_regret.max(action_regret(market, p, b)?.value());
    }
    let barycenter_regret = action_regret(market, &report.barycenter, b)?.value();
    Ok(SaddleCheck {
        sup_regret,
        value: report.value,
        barycenter_regret,
        holds: sup_regret >= report.value + barycenter_regret - SADDLE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kelly(m: usize) -> Market {
        Market::new(
            (0..m)
                .map(|j| (0..m).map(|i| if i == j { m as f64 } else { 0.0 }).collect())
                .collect(),
        )
        .unwrap()
    }

    fn point_masses(m: usize) -> Vec<Distribution> {
        (0..m).map(|j| Distribution::point_mass(m, j)).collect()
    }

    #[test]
    fn singleton_family_has_zero_value() {
        let m = Market::new(vec![vec![1.0, 2.0], vec![1.0, 0.0]]).unwrap();
        let p = Distribution::new(vec![0.75, 0.25]).unwrap();
        let r = minimax_regret(&m, &[p.clone()]).unwrap();
        assert!(r.value < 1e-9);
        assert!((r.robust_portfolio.weights()[1] - 0.5).abs() < 1e-6);
        assert!(r.duality_gap < 1e-9);
    }

    #[test]
    fn point_masses_in_kelly_markets() {
        for m in 2..=4 {
            let r = minimax_regret(&kelly(m), &point_masses(m)).unwrap();
            assert!((r.value - (m as f64).ln()).abs() < 1e-6, "m = {m}: {}", r.value);
            for (w, t) in r.robust_portfolio.weights().iter().zip(&r.worst_mixture) {
                assert!((w - 1.0 / m as f64).abs() < 1e-6);
                assert!((t - 1.0 / m as f64).abs() < 1e-6);
            }
            assert!(r.duality_gap <= 1e-6);
        }
    }

    #[test]
    fn barycenter_matches_mixture() {
        let fam = vec![
            Distribution::new(vec![0.9, 0.1]).unwrap(),
            Distribution::new(vec![0.2, 0.8]).unwrap(),
        ];
        let m = Market::new(vec![vec![1.0, 2.0, 0.0], vec![1.0, 0.0, 3.0]]).unwrap();
        let r = minimax_regret(&m, &fam).unwrap();
        for j in 0..2 {
            let direct = r.worst_mixture[0] * fam[0].probs()[j] + r.worst_mixture[1] * fam[1].probs()[j];
            assert!((direct - r.barycenter.probs()[j]).abs() < 1e-12);
        }
        assert!(r.duality_gap <= 1e-6);
    }

    #[test]
    fn lower_bound_examples() {
        let fam = point_masses(2);
        let c = lower_bound_check(&kelly(2), &fam, &[0.5, 0.5]).unwrap();
        assert!((c.bound - 2f64.ln()).abs() < 1e-9);
        assert!(c.holds && c.robust_holds);
        let c = lower_bound_check(&kelly(2), &fam, &[1.0, 0.0]).unwrap();
        assert!(c.bound.abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn saddle_examples() {
        let fam = point_masses(2);
        let s = saddle_check(&kelly(2), &fam, &Portfolio::uniform(2)).unwrap();
        assert!((s.sup_regret - s.value).abs() < 1e-6);
        assert!(s.barycenter_regret < 1e-6);
        assert!(s.holds);

        let b = Portfolio::new(vec![0.9, 0.1]).unwrap();
        let s = saddle_check(&kelly(2), &fam, &b).unwrap();
        assert!((s.sup_regret - 10f64.ln()).abs() < 1e-12);
        let d = 0.5 * (0.5f64 / 0.9).ln() + 0.5 * (0.5f64 / 0.1).ln();
        assert!((s.barycenter_regret - d).abs() < 1e-6);
        assert!(s.holds);
    }
}
