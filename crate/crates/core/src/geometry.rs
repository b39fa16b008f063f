//! Small dense linear-algebra and polytope utilities shared by the solvers.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for rank decisions.
const RANK_TOL: f64 = 1e-9;

/// Hard cap on active-set combinations tried during vertex enumeration.
const MAX_COMBINATIONS: usize = 2_000_000;

/// Particular solution and null-space basis of `A x = b`.
pub(crate) struct AffineHull {
    pub origin: DVector<f64>,
    pub basis: DMatrix<f64>,
    pub residual: f64,
}

/// Least-squares particular solution plus an orthonormal null-space basis.
pub(crate) fn affine_hull(a: &DMatrix<f64>, b: &DVector<f64>) -> AffineHull {
    let (r, n) = a.shape();
    // Pad to a square matrix so the SVD returns a full right basis.
    let rows = r.max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (r, n)).copy_from(a);
    let mut rhs = DVector::zeros(rows);
    rhs.rows_mut(0, r).copy_from(b);

    let svd = padded.svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = RANK_TOL * smax.max(1.0);

    let mut origin = DVector::zeros(n);
    let mut null_cols = Vec::new();
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        let v = v_t.row(idx).transpose();
        if s > cutoff {
            let coeff = u.column(idx).dot(&rhs) / s;
            origin += v * coeff;
        } else {
            null_cols.push(v);
        }
    }
    let basis = if null_cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&null_cols)
    };
    let residual = (a * &origin - b).amax();
    AffineHull {
        origin,
        basis,
        residual,
    }
}

/// Vertices of the bounded polytope `{x : A x = b, G x ≤ h}`.
///
/// Enumerates every choice of `d` tight inequalities (with `d` the dimension
/// of the affine hull of the equalities), keeps the feasible solutions and
/// drops duplicates. Suitable for the small dimensions used here.
pub(crate) fn polytope_vertices(
    eq_a: &DMatrix<f64>,
    eq_b: &DVector<f64>,
    ineq_g: &DMatrix<f64>,
    ineq_h: &DVector<f64>,
    tol: f64,
) -> Result<Vec<DVector<f64>>> {
    let hull = affine_hull(eq_a, eq_b);
    let scale = eq_b.amax().max(1.0);
    if hull.residual > 1e-7 * scale {
        return Ok(Vec::new());
    }
    let d = hull.basis.ncols();
    // G (x0 + N z) ≤ h  →  (G N) z ≤ h − G x0
    let gz = ineq_g * &hull.basis;
    let hz = ineq_h - ineq_g * &hull.origin;
    let rows = gz.nrows();

    let feasible = |z: &DVector<f64>| -> bool {
        (0..rows).all(|r| gz.row(r).transpose().dot(z) <= hz[r] + tol)
    };

    if d == 0 {
        let z = DVector::zeros(0);
        return Ok(if feasible(&z) { vec![hull.origin] } else { Vec::new() });
    }
    if rows < d {
        return Err(Error::InfeasibleConstraints(
            "polytope is unbounded: fewer inequalities than free dimensions".into(),
        ));
    }
    if binomial(rows, d) > MAX_COMBINATIONS {
        return Err(Error::InfeasibleConstraints(format!(
            "too many constraint combinations to enumerate ({rows} choose {d})"
        )));
    }

    let mut vertices: Vec<DVector<f64>> = Vec::new();
    let mut combo: Vec<usize> = (0..d).collect();
    loop {
        let sub = DMatrix::from_fn(d, d, |r, c| gz[(combo[r], c)]);
        let rhs = DVector::from_fn(d, |r, _| hz[combo[r]]);
        if let Some(z) = solve_square(&sub, &rhs) {
            if feasible(&z) {
                let x = &hull.origin + &hull.basis * z;
                if !vertices.iter().any(|v| (v - &x).amax() <= 1e-9) {
                    vertices.push(x);
                }
            }
        }
        if !next_combination(&mut combo, rows) {
            break;
        }
    }
    Ok(vertices)
}

/// Solves a square system, returning `None` when it is (numerically) singular.
pub(crate) fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Some(DVector::zeros(0));
    }
    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= 1e-11 * smax {
        return None;
    }
    a.clone().lu().solve(b)
}

/// Least-squares solve through the pseudo-inverse; tolerant of singular systems.
pub(crate) fn solve_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = (1e-13 * smax).max(f64::MIN_POSITIVE);
    svd.solve(b, eps).expect("u and v_t were requested")
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let d = combo.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if combo[i] < n - d + i {
            combo[i] += 1;
            for j in i + 1..d {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Linear program over `x ∈ [lo, hi]^n` with `≤`, `≥` and `=` rows.
pub(crate) struct LinearProgram {
    problem: Problem,
    vars: Vec<minilp::Variable>,
}

pub(crate) enum Sense {
    Le,
    Ge,
    Eq,
}

impl LinearProgram {
    pub fn maximize(objective: &[f64], bounds: &[(f64, f64)]) -> Self {
        Self::build(OptimizationDirection::Maximize, objective, bounds)
    }

    pub fn minimize(objective: &[f64], bounds: &[(f64, f64)]) -> Self {
        Self::build(OptimizationDirection::Minimize, objective, bounds)
    }

    fn build(dir: OptimizationDirection, objective: &[f64], bounds: &[(f64, f64)]) -> Self {
        let mut problem = Problem::new(dir);
        let vars = objective
            .iter()
            .zip(bounds)
            .map(|(&c, &b)| problem.add_var(c, b))
            .collect();
        Self { problem, vars }
    }

    pub fn constraint(&mut self, coeffs: &[f64], sense: Sense, rhs: f64) {
        let terms: Vec<(minilp::Variable, f64)> = self
            .vars
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0.0)
            .map(|(&v, &c)| (v, c))
            .collect();
        let op = match sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        self.problem.add_constraint(terms.as_slice(), op, rhs);
    }

    /// Optimal point, or `None` when infeasible.
    pub fn solve(&self) -> Result<Option<Vec<f64>>> {
        match self.problem.solve() {
            Ok(sol) => Ok(Some(self.vars.iter().map(|&v| *sol.var_value(v)).collect())),
            Err(minilp::Error::Infeasible) => Ok(None),
            Err(e) => Err(Error::LinearProgram(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_constraints(k: usize) -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>, DVector<f64>) {
        let a = DMatrix::from_element(1, k, 1.0);
        let b = DVector::from_element(1, 1.0);
        let g = -DMatrix::identity(k, k);
        let h = DVector::zeros(k);
        (a, b, g, h)
    }

    #[test]
    fn simplex_vertices_are_basis_vectors() {
        let (a, b, g, h) = simplex_constraints(3);
        let v = polytope_vertices(&a, &b, &g, &h, 1e-12).unwrap();
        assert_eq!(v.len(), 3);
        for x in &v {
            assert!((x.sum() - 1.0).abs() < 1e-12);
            assert!((x.max() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cut_simplex() {
        // {q ∈ Δ2 : q1 ≤ 0.3} has vertices (0,1) and (0.3,0.7)
        let (a, b, g0, h0) = simplex_constraints(2);
        let g = DMatrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 0.0]);
        let h = DVector::from_vec(vec![0.0, 0.0, 0.3]);
        let _ = (g0, h0);
        let mut v = polytope_vertices(&a, &b, &g, &h, 1e-12).unwrap();
        v.sort_by(|x, y| x[0].partial_cmp(&y[0]).unwrap());
        assert_eq!(v.len(), 2);
        assert!((v[0][0] - 0.0).abs() < 1e-12 && (v[1][0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn empty_polytope_has_no_vertices() {
        let (a, b, _, _) = simplex_constraints(2);
        let g = DMatrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 1.0]);
        let h = DVector::from_vec(vec![0.0, 0.0, 0.5]);
        assert!(polytope_vertices(&a, &b, &g, &h, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn null_space_of_duplicate_columns() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let hull = affine_hull(&a, &DVector::from_vec(vec![1.0, 1.0]));
        assert_eq!(hull.basis.ncols(), 1);
        assert!(hull.residual < 1e-14);
    }

    #[test]
    fn lp_roundtrip() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6, x, y ≥ 0 → (1.6, 1.2)
        let mut lp = LinearProgram::maximize(&[1.0, 1.0], &[(0.0, f64::INFINITY); 2]);
        lp.constraint(&[1.0, 2.0], Sense::Le, 4.0);
        lp.constraint(&[3.0, 1.0], Sense::Le, 6.0);
        let x = lp.solve().unwrap().unwrap();
        assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn combinations_cover_all_subsets() {
        let mut c = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut c, 5) {
            n += 1;
        }
        assert_eq!(n, binomial(5, 2));
    }
}
