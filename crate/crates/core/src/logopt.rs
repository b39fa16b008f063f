//! Growth-rate maximisation over the simplex or a polytope of portfolios.
//!
//! The unconstrained solver runs the multiplicative update
//! `b_i ← b_i · E_p[X_i / ⟨X, b⟩]` from the uniform portfolio and periodically
//! tries to finish with an active-set Newton iteration on the current face.
//! The result is certified by the stationarity conditions
//! `E_p[X_i / ⟨X, b⟩] ≤ 1`, with equality on `supp(b)`.
//!
//! Constrained problems are reduced to unconstrained ones: the feasible
//! polytope is replaced by its vertices, each vertex becomes a synthetic
//! asset, and the solver runs on mixtures of vertices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{polytope_vertices, solve_least_squares};
use crate::market::{expected_log, growth_rate, Distribution, GrowthRate, Market, Portfolio};

/// Stationarity residual below which an asset counts as active (part of the
/// optimal face).
pub const KKT_TOL: f64 = 1e-8;

/// Iteration cap of the multiplicative update.
pub const MAX_ITERATIONS: usize = 100_000;

const GROWTH_STEP_TOL: f64 = 1e-12;
const MU_KKT_TOL: f64 = 1e-9;
const POLISH_ACCEPT: f64 = 1e-10;
const VERTEX_TOL: f64 = 1e-10;

/// Whether the maximiser is a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    NonUnique,
    Unknown,
}

/// Optimal portfolio with diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub portfolio: Portfolio,
    pub growth: GrowthRate,
    /// Stationarity residual. For constrained solves this is measured in the
    /// coordinates of the vertex mixture, where it certifies optimality over
    /// the polytope.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub unique: Uniqueness,
}

/// `⟨coeffs, b⟩ ≤ bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<f64>, bound: f64) -> Self {
        Self { coeffs, bound }
    }
}

/// Linear inequalities on portfolio weights, intersected with the simplex.
#[derive(Debug, Clone)]
pub struct PortfolioConstraints {
    assets: usize,
    constraints: Vec<LinearConstraint>,
    vertices: Vec<Vec<f64>>,
}

impl PortfolioConstraints {
    /// Validates the constraints and enumerates the vertices of the feasible
    /// region. Fails when the region is empty.
    pub fn new(assets: usize, constraints: Vec<LinearConstraint>) -> Result<Self> {
        if assets == 0 {
            return Err(Error::InfeasibleConstraints("no assets".into()));
        }
        for c in &constraints {
            if c.coeffs.len() != assets {
                return Err(Error::DimensionMismatch {
                    what: "constraint coefficients",
                    expected: assets,
                    found: c.coeffs.len(),
                });
            }
            if !c.bound.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::InfeasibleConstraints("non-finite coefficient".into()));
            }
        }
        let eq_a = DMatrix::from_element(1, assets, 1.0);
        let eq_b = DVector::from_element(1, 1.0);
        let rows = assets + constraints.len();
        let mut g = DMatrix::zeros(rows, assets);
        let mut h = DVector::zeros(rows);
        for i in 0..assets {
            g[(i, i)] = -1.0;
        }
        for (r, c) in constraints.iter().enumerate() {
            for i in 0..assets {
                g[(assets + r, i)] = c.coeffs[i];
            }
            h[assets + r] = c.bound;
        }
        let vertices: Vec<Vec<f64>> = polytope_vertices(&eq_a, &eq_b, &g, &h, VERTEX_TOL)?
            .into_iter()
            .map(|v| clean_simplex_point(v.iter().copied().collect()))
            .collect();
        if vertices.is_empty() {
            return Err(Error::InfeasibleConstraints(
                "no portfolio satisfies every constraint".into(),
            ));
        }
        Ok(Self {
            assets,
            constraints,
            vertices,
        })
    }

    /// The unconstrained simplex.
    pub fn simplex(assets: usize) -> Self {
        Self::new(assets, Vec::new()).expect("the simplex is nonempty")
    }

    pub fn assets(&self) -> usize {
        self.assets
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// Extreme points of the feasible region.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn contains(&self, weights: &[f64], tol: f64) -> bool {
        weights.len() == self.assets
            && weights.iter().all(|&w| w >= -tol)
            && (weights.iter().sum::<f64>() - 1.0).abs() <= tol
            && self.constraints.iter().all(|c| {
                c.coeffs.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() <= c.bound + tol
            })
    }
}

/// Set of maximisers of `W(·, p)`.
#[derive(Debug, Clone)]
pub struct OptimalFace {
    /// Assets that may carry weight in some optimal portfolio.
    pub support: Vec<usize>,
    /// True when the optimal portfolio is unique.
    pub unique: bool,
    /// Extreme points of the optimal set.
    pub vertices: Vec<Portfolio>,
}

fn clean_simplex_point(mut v: Vec<f64>) -> Vec<f64> {
    v.iter_mut().for_each(|x| {
        if *x < 0.0 {
            *x = 0.0
        }
    });
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Rows of `x` on the support of `p`, with the matching probabilities.
pub(crate) fn restrict_to_support(x: &DMatrix<f64>, p: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
    let rows: Vec<usize> = (0..p.len()).filter(|&j| p[j] > 0.0).collect();
    let xr = DMatrix::from_fn(rows.len(), x.ncols(), |r, i| x[(rows[r], i)]);
    let pr = rows.iter().map(|&j| p[j]).collect();
    (xr, pr)
}

fn payoffs(x: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    (0..x.nrows())
        .map(|j| x.row(j).iter().zip(b).map(|(a, w)| a * w).sum())
        .collect()
}

/// Payoffs `y = X b` and gradient `g_i = Σ_j p_j X_ji / y_j`.
fn gradient(x: &DMatrix<f64>, p: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let y = payoffs(x, b);
    let g = (0..x.ncols())
        .map(|i| {
            (0..x.nrows())
                .map(|j| if p[j] > 0.0 { p[j] * x[(j, i)] / y[j] } else { 0.0 })
                .sum()
        })
        .collect();
    (y, g)
}

/// Stationarity residual of `b`; `None` when `W(b, p) = -∞`.
pub(crate) fn stationarity_residual(x: &DMatrix<f64>, p: &[f64], b: &[f64]) -> Option<f64> {
    let (y, g) = gradient(x, p, b);
    if y.iter().zip(p).any(|(&yj, &pj)| pj > 0.0 && yj <= 0.0) {
        return None;
    }
    let mut r: f64 = 0.0;
    for (i, &gi) in g.iter().enumerate() {
        r = r.max(gi - 1.0);
        if b[i] > 0.0 {
            r = r.max((gi - 1.0).abs());
        }
    }
    Some(r)
}

fn should_polish(iter: usize) -> bool {
    matches!(iter, 3 | 10 | 30) || iter % 50 == 0
}

/// Maximises `Σ_j p_j ln (X b)_j` over the simplex. Every `p_j` must be
/// positive and every row of `x` must have a positive entry.
pub(crate) fn maximize(x: &DMatrix<f64>, p: &[f64]) -> Result<(Vec<f64>, usize)> {
    let n = x.ncols();
    let allowed: Vec<bool> = (0..n).map(|i| x.column(i).iter().any(|&v| v > 0.0)).collect();
    let count = allowed.iter().filter(|&&a| a).count();
    if count == 0 || (0..x.nrows()).any(|j| x.row(j).iter().all(|&v| v <= 0.0)) {
        return Err(Error::NoFiniteGrowth);
    }
    let mut b: Vec<f64> = allowed
        .iter()
        .map(|&a| if a { 1.0 / count as f64 } else { 0.0 })
        .collect();
    let mut prev = expected_log(p, &payoffs(x, &b));

    for iter in 1..=MAX_ITERATIONS {
        let (_, g) = gradient(x, p, &b);
        b.iter_mut().zip(&g).for_each(|(w, gi)| *w *= gi);
        let s: f64 = b.iter().sum();
        b.iter_mut().for_each(|w| *w /= s);
        let w = expected_log(p, &payoffs(x, &b));

        if should_polish(iter) {
            if let Some(candidate) = polish(x, p, &b, &allowed) {
                let ok = stationarity_residual(x, p, &candidate).is_some_and(|r| r <= POLISH_ACCEPT)
                    && expected_log(p, &payoffs(x, &candidate)) >= w - 1e-13;
                if ok {
                    return Ok((candidate, iter));
                }
            }
        }
        if (w - prev).abs() < GROWTH_STEP_TOL {
            if stationarity_residual(x, p, &b).is_some_and(|r| r < MU_KKT_TOL) {
                return Ok((b, iter));
            }
            // Weights decaying towards an optimal boundary point never
            // satisfy the equality conditions; test the point with them removed.
            let cleaned = clean_simplex_point(b.iter().map(|&v| if v < 1e-12 { 0.0 } else { v }).collect());
            if stationarity_residual(x, p, &cleaned).is_some_and(|r| r < MU_KKT_TOL) {
                return Ok((cleaned, iter));
            }
        }
        prev = w;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Active-set Newton refinement from a multiplicative-update iterate.
/// Returns a point with exact zeros off the active set, or `None` if the
/// iteration stalls.
fn polish(x: &DMatrix<f64>, p: &[f64], start: &[f64], allowed: &[bool]) -> Option<Vec<f64>> {
    let n = x.ncols();
    let top = start.iter().cloned().fold(0.0, f64::max);
    let mut active: Vec<bool> = start.iter().map(|&v| v > 1e-3 * top).collect();
    let mut b: Vec<f64> = start
        .iter()
        .zip(&active)
        .map(|(&v, &a)| if a { v } else { 0.0 })
        .collect();
    let s: f64 = b.iter().sum();
    b.iter_mut().for_each(|v| *v /= s);

    for _ in 0..(100 + 10 * n) {
        let (y, g) = gradient(x, p, &b);
        if y.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let a = idx.len();
        let mut kkt = DMatrix::zeros(a + 1, a + 1);
        let mut rhs = DVector::zeros(a + 1);
        for (r, &i) in idx.iter().enumerate() {
            for (c, &l) in idx.iter().enumerate().skip(r) {
                let h: f64 = (0..x.nrows())
                    .map(|j| p[j] * x[(j, i)] * x[(j, l)] / (y[j] * y[j]))
                    .sum();
                kkt[(r, c)] = h;
                kkt[(c, r)] = h;
            }
            kkt[(r, a)] = 1.0;
            kkt[(a, r)] = 1.0;
            rhs[r] = g[i];
        }
        let sol = solve_least_squares(&kkt, &rhs);
        let d: Vec<f64> = sol.iter().take(a).copied().collect();
        let slope: f64 = idx.iter().zip(&d).map(|(&i, di)| g[i] * di).sum();

        let mut converged = !(slope > 1e-20);
        if !converged {
            let mut tmax = f64::INFINITY;
            let mut blocking = None;
            for (r, &i) in idx.iter().enumerate() {
                if d[r] < 0.0 {
                    let t = b[i] / -d[r];
                    if t < tmax {
                        tmax = t;
                        blocking = Some(i);
                    }
                }
            }
            let w0 = expected_log(p, &y);
            let mut t = tmax.min(1.0);
            loop {
                let mut cand = b.clone();
                for (r, &i) in idx.iter().enumerate() {
                    cand[i] += t * d[r];
                }
                let hit = (t == tmax).then_some(blocking).flatten();
                if let Some(i) = hit {
                    cand[i] = 0.0;
                }
                if cand == b {
                    // Step below round-off: nothing left to gain on this face.
                    converged = true;
                    break;
                }
                let w = expected_log(p, &payoffs(x, &cand));
                if w >= w0 + 1e-4 * t * slope {
                    b = cand;
                    if let Some(i) = hit {
                        active[i] = false;
                    }
                    break;
                }
                t *= 0.5;
                if t < 1e-14 {
                    converged = true;
                    break;
                }
            }
        }
        if converged {
            let entering = (0..n)
                .filter(|&i| !active[i] && allowed[i] && g[i] > 1.0 + 1e-12)
                .max_by(|&i, &l| g[i].total_cmp(&g[l]));
            match entering {
                Some(i) => active[i] = true,
                None => {
                    let s: f64 = b.iter().sum();
                    return Some(b.into_iter().map(|v| v.max(0.0) / s).collect());
                }
            }
        }
    }
    None
}

/// Extreme points of the optimal face through the maximiser `b`, plus the
/// active asset set.
pub(crate) fn face_vertices(
    x: &DMatrix<f64>,
    p: &[f64],
    b: &[f64],
) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let n = x.ncols();
    let (y, g) = gradient(x, p, b);
    let active: Vec<usize> = (0..n)
        .filter(|&i| b[i] > 0.0 || (x.column(i).iter().any(|&v| v > 0.0) && g[i] >= 1.0 - KKT_TOL))
        .collect();
    let a = active.len();
    let m = x.nrows();
    let mut eq_a = DMatrix::zeros(m + 1, a);
    let mut eq_b = DVector::zeros(m + 1);
    for j in 0..m {
        for (c, &i) in active.iter().enumerate() {
            eq_a[(j, c)] = x[(j, i)];
        }
        eq_b[j] = y[j];
    }
    for c in 0..a {
        eq_a[(m, c)] = 1.0;
    }
    eq_b[m] = 1.0;
    let g_ineq = -DMatrix::identity(a, a);
    let h_ineq = DVector::zeros(a);
    let local = polytope_vertices(&eq_a, &eq_b, &g_ineq, &h_ineq, 1e-9)?;
    let mut vertices: Vec<Vec<f64>> = local
        .into_iter()
        .map(|v| {
            let mut full = vec![0.0; n];
            for (c, &i) in active.iter().enumerate() {
                full[i] = v[c];
            }
            clean_simplex_point(full)
        })
        .collect();
    if vertices.is_empty() {
        vertices.push(b.to_vec());
    }
    Ok((active, vertices))
}

fn dedup_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in points {
        if !out
            .iter()
            .any(|u| u.iter().zip(&v).all(|(a, b)| (a - b).abs() <= 1e-9))
        {
            out.push(v);
        }
    }
    out
}

/// Largest growth rate over the convex hull of `vertices` (weights over the
/// market's assets). Returns `-∞` when every hull point has `W = -∞`.
pub(crate) fn best_growth_on_hull(
    market: &Market,
    p: &Distribution,
    vertices: &[Vec<f64>],
) -> Result<(f64, Vec<f64>)> {
    if let [v] = vertices {
        let w = expected_log(p.probs(), &payoffs(market.matrix(), v));
        return Ok((w, v.clone()));
    }
    let k = market.assets();
    let v = DMatrix::from_fn(k, vertices.len(), |i, c| vertices[c][i]);
    let y = market.matrix() * &v;
    let (yr, pr) = restrict_to_support(&y, p.probs());
    match maximize(&yr, &pr) {
        Ok((lam, _)) => {
            let b: Vec<f64> = clean_simplex_point((&v * DVector::from_vec(lam)).iter().copied().collect());
            let w = expected_log(p.probs(), &payoffs(market.matrix(), &b));
            Ok((w, b))
        }
        Err(Error::NoFiniteGrowth) => Ok((f64::NEG_INFINITY, vertices[0].clone())),
        Err(e) => Err(e),
    }
}

/// Maximises `W(b, p)` over the simplex, or over a polytope when
/// `constraints` is given.
pub fn solve(
    market: &Market,
    p: &Distribution,
    constraints: Option<&PortfolioConstraints>,
) -> Result<SolveReport> {
    market.check_distribution(p)?;
    let (xr, pr) = restrict_to_support(market.matrix(), p.probs());
    match constraints {
        None => {
            let (b, iterations) = maximize(&xr, &pr)?;
            let kkt_residual = stationarity_residual(&xr, &pr, &b).unwrap_or(f64::INFINITY);
            let unique = match face_vertices(&xr, &pr, &b) {
                Ok((_, v)) if v.len() == 1 => Uniqueness::Unique,
                Ok(_) => Uniqueness::NonUnique,
                Err(_) => Uniqueness::Unknown,
            };
            let portfolio = Portfolio::from_raw(b);
            let growth = growth_rate(market, &portfolio, p)?;
            Ok(SolveReport {
                portfolio,
                growth,
                kkt_residual,
                iterations,
                unique,
            })
        }
        Some(c) => {
            if c.assets() != market.assets() {
                return Err(Error::DimensionMismatch {
                    what: "constraints",
                    expected: market.assets(),
                    found: c.assets(),
                });
            }
            let verts = c.vertices();
            let v = DMatrix::from_fn(market.assets(), verts.len(), |i, col| verts[col][i]);
            let yr = &xr * &v;
            let (lam, iterations) = maximize(&yr, &pr)?;
            let kkt_residual = stationarity_residual(&yr, &pr, &lam).unwrap_or(f64::INFINITY);
            let to_weights = |l: &[f64]| -> Vec<f64> {
                clean_simplex_point((&v * DVector::from_column_slice(l)).iter().copied().collect())
            };
            let unique = match face_vertices(&yr, &pr, &lam) {
                Ok((_, face)) => {
                    let mapped = dedup_points(face.iter().map(|l| to_weights(l)).collect());
                    if mapped.len() == 1 {
                        Uniqueness::Unique
                    } else {
                        Uniqueness::NonUnique
                    }
                }
                Err(_) => Uniqueness::Unknown,
            };
            let portfolio = Portfolio::from_raw(to_weights(&lam));
            let growth = growth_rate(market, &portfolio, p)?;
            Ok(SolveReport {
                portfolio,
                growth,
                kkt_residual,
                iterations,
                unique,
            })
        }
    }
}

/// `max_i max(E_p[X_i/⟨X,b⟩] − 1, 0)` combined with
/// `max_{i ∈ supp b} |E_p[X_i/⟨X,b⟩] − 1|`; zero exactly at log-optimal `b`.
pub fn kkt_residual(market: &Market, p: &Distribution, b: &Portfolio) -> Result<f64> {
    market.check_dims(b, p)?;
    stationarity_residual(market.matrix(), p.probs(), b.weights()).ok_or(Error::PortfolioInfeasible)
}

/// Describes every maximiser of `W(·, p)` over the simplex.
pub fn optimal_face(market: &Market, p: &Distribution) -> Result<OptimalFace> {
    let report = solve(market, p, None)?;
    let (xr, pr) = restrict_to_support(market.matrix(), p.probs());
    let (support, vertices) = face_vertices(&xr, &pr, report.portfolio.weights())?;
    Ok(OptimalFace {
        support,
        unique: vertices.len() == 1,
        vertices: vertices.into_iter().map(Portfolio::from_raw).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(rows: &[&[f64]]) -> Market {
        Market::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn kelly_market_bets_proportionally() {
        let m = market(&[&[2.0, 0.0], &[0.0, 2.0]]);
        let r = solve(&m, &dist(&[0.75, 0.25]), None).unwrap();
        assert!((r.portfolio.weights()[0] - 0.75).abs() < 1e-12);
        assert_eq!(r.unique, Uniqueness::Unique);
        assert!(r.kkt_residual < 1e-12);
    }

    #[test]
    fn double_or_nothing_uses_kelly_fraction() {
        let m = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let r = solve(&m, &dist(&[0.75, 0.25]), None).unwrap();
        assert!((r.portfolio.weights()[1] - 0.5).abs() < 1e-10);
        let expected = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
        assert!((r.growth.value() - expected).abs() < 1e-12);
    }

    #[test]
    fn unfavourable_bet_is_avoided_exactly() {
        let m = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let r = solve(&m, &dist(&[0.4, 0.6]), None).unwrap();
        assert_eq!(r.portfolio.weights(), &[1.0, 0.0]);
        assert!(r.kkt_residual < 1e-12);
    }

    #[test]
    fn point_mass_optimum_lives_on_row_support() {
        let m = market(&[&[1.0, 2.0, 0.0], &[1.0, 0.0, 3.0]]);
        let r = solve(&m, &Distribution::point_mass(2, 0), None).unwrap();
        let x = m.row(0);
        for i in r.portfolio.support() {
            assert!(x[i] > 0.0);
        }
        assert!((r.growth.value() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn kkt_residual_examples() {
        let m = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let p = dist(&[0.75, 0.25]);
        let r = kkt_residual(&m, &p, &Portfolio::uniform(2)).unwrap();
        assert!(r.abs() < 1e-15);
        let r = kkt_residual(&m, &p, &Portfolio::basis(2, 0)).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        assert!(matches!(
            kkt_residual(&m, &p, &Portfolio::basis(2, 1)),
            Err(Error::PortfolioInfeasible)
        ));
        let kelly = market(&[&[2.0, 0.0], &[0.0, 2.0]]);
        let b = Portfolio::new(vec![0.75, 0.25]).unwrap();
        assert!(kkt_residual(&kelly, &p, &b).unwrap() < 1e-15);
    }

    #[test]
    fn identical_columns_give_non_unique_face() {
        let m = market(&[&[1.5, 1.5, 0.5], &[0.5, 0.5, 1.5]]);
        let face = optimal_face(&m, &dist(&[0.6, 0.4])).unwrap();
        assert!(!face.unique);
        assert!(face.support.contains(&0) && face.support.contains(&1));
        let r = solve(&m, &dist(&[0.6, 0.4]), None).unwrap();
        assert_eq!(r.unique, Uniqueness::NonUnique);
    }

    #[test]
    fn all_ones_market_every_portfolio_optimal() {
        let m = market(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let face = optimal_face(&m, &dist(&[0.3, 0.7])).unwrap();
        assert!(!face.unique);
        assert_eq!(face.vertices.len(), 2);
    }

    #[test]
    fn kelly_face_is_a_point() {
        let m = market(&[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 4.0]]);
        let face = optimal_face(&m, &dist(&[0.2, 0.3, 0.5])).unwrap();
        assert!(face.unique);
        assert_eq!(face.support, vec![0, 1, 2]);
    }

    #[test]
    fn constrained_solve_respects_cap() {
        let m = market(&[&[2.0, 0.0], &[0.0, 2.0]]);
        let c = PortfolioConstraints::new(2, vec![LinearConstraint::new(vec![1.0, 0.0], 0.3)]).unwrap();
        let r = solve(&m, &dist(&[0.5, 0.5]), Some(&c)).unwrap();
        assert!((r.portfolio.weights()[0] - 0.3).abs() < 1e-10);
        assert!(c.contains(r.portfolio.weights(), 1e-12));
        assert!(r.kkt_residual < 1e-9);
    }

    #[test]
    fn infeasible_constraints_rejected() {
        let c = PortfolioConstraints::new(
            2,
            vec![
                LinearConstraint::new(vec![1.0, 0.0], 0.2),
                LinearConstraint::new(vec![0.0, 1.0], 0.2),
            ],
        );
        assert!(matches!(c, Err(Error::InfeasibleConstraints(_))));
    }

    #[test]
    fn zero_probability_outcomes_are_ignored() {
        let m = market(&[&[1.0, 2.0], &[1.0, 0.0]]);
        let r = solve(&m, &dist(&[1.0, 0.0]), None).unwrap();
        assert_eq!(r.portfolio.weights(), &[0.0, 1.0]);
    }
}
