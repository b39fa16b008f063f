//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls the solvers under test.

#![allow(dead_code)]

use kelly_core::{Distribution, Market};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `Σ p_j ln ⟨X_j, b⟩` evaluated directly from nested vectors.
pub fn growth(rows: &[Vec<f64>], b: &[f64], p: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (row, &pj) in rows.iter().zip(p) {
        if pj == 0.0 {
            continue;
        }
        let y: f64 = row.iter().zip(b).map(|(x, w)| x * w).sum();
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += pj * y.ln();
    }
    acc
}

pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pj, _)| **pj > 0.0)
        .map(|(pj, qj)| if *qj == 0.0 { f64::INFINITY } else { pj * (pj / qj).ln() })
        .sum()
}

fn simplex_grid(k: usize, n: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() == k - 1 {
        let used: usize = cur.iter().sum();
        let mut v = cur.clone();
        v.push(n - used);
        out.push(v);
        return;
    }
    let used: usize = cur.iter().sum();
    for i in 0..=(n - used) {
        cur.push(i);
        simplex_grid(k, n, out, cur);
        cur.pop();
    }
}

/// Brute-force `max_b W(b, p)` for `k ≤ 3`: a simplex grid of spacing
/// `1/n`, then three rounds of local grids around the incumbent, each ten
/// times finer.
pub fn grid_max_growth(rows: &[Vec<f64>], p: &[f64]) -> f64 {
    let k = rows[0].len();
    assert!(k <= 3, "grid oracle is meant for k ≤ 3");
    let n = 300;
    let mut pts = Vec::new();
    simplex_grid(k, n, &mut pts, &mut Vec::new());
    let mut best_b: Vec<f64> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for pt in pts {
        let b: Vec<f64> = pt.iter().map(|&c| c as f64 / n as f64).collect();
        let w = growth(rows, &b, p);
        if w > best {
            best = w;
            best_b = b;
        }
    }
    let mut h = 1.0 / n as f64;
    for _ in 0..3 {
        let fine = h / 10.0;
        let center = best_b.clone();
        let steps = 20i32;
        let offsets: Vec<Vec<i32>> = match k {
            1 => vec![vec![]],
            2 => (-steps..=steps).map(|a| vec![a]).collect(),
            _ => (-steps..=steps)
                .flat_map(|a| (-steps..=steps).map(move |c| vec![a, c]))
                .collect(),
        };
        for off in offsets {
            let mut b = center.clone();
            for (i, o) in off.iter().enumerate() {
                b[i] += *o as f64 * fine;
            }
            let head: f64 = b[..k - 1].iter().sum();
            b[k - 1] = 1.0 - head;
            if b.iter().any(|&v| v < 0.0) {
                continue;
            }
            let w = growth(rows, &b, p);
            if w > best {
                best = w;
                best_b = b;
            }
        }
        h = fine;
    }
    best
}

/// One-dimensional grid search of `W((1−x) e_1 + x e_2, p)` over `x ∈ [0, 1]`.
pub fn scalar_grid_max(rows: &[Vec<f64>], p: &[f64]) -> (f64, f64) {
    assert_eq!(rows[0].len(), 2);
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..6 {
        let n = 1000;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let w = growth(rows, &[1.0 - x, x], p);
            if w > best.0 {
                best = (w, x);
            }
        }
        let span = (hi - lo) / n as f64;
        lo = (best.1 - 2.0 * span).max(0.0);
        hi = (best.1 + 2.0 * span).min(1.0);
    }
    best
}

pub fn dirichlet(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Dirichlet draw restricted to a random nonempty subset of outcomes.
pub fn sparse_dirichlet(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut support: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.7)).collect();
    if support.is_empty() {
        support.push(rng.gen_range(0..m));
    }
    let w = dirichlet(rng, support.len());
    let mut v = vec![0.0; m];
    for (&j, x) in support.iter().zip(w) {
        v[j] = x;
    }
    v
}

pub fn dist(v: Vec<f64>) -> Distribution {
    Distribution::normalized(v, 1e-9).unwrap()
}

/// `diag(odds)` with odds drawn from `[lo, hi]`.
pub fn kelly_rows(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let odds: Vec<f64> = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
    let rows = (0..m)
        .map(|j| (0..m).map(|i| if i == j { odds[j] } else { 0.0 }).collect())
        .collect();
    (rows, odds)
}

/// Random nonnegative matrix with sparse zeros and no empty row or column.
pub fn random_rows(rng: &mut ChaCha8Rng, m: usize, k: usize, zero_prob: f64) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..k)
                .map(|_| if rng.gen_bool(zero_prob) { 0.0 } else { rng.gen_range(0.05..3.0) })
                .collect()
        })
        .collect();
    for row in rows.iter_mut() {
        if row.iter().all(|&v| v == 0.0) {
            let i = rng.gen_range(0..k);
            row[i] = rng.gen_range(0.05..3.0);
        }
    }
    for i in 0..k {
        if rows.iter().all(|r| r[i] == 0.0) {
            let j = rng.gen_range(0..m);
            rows[j][i] = rng.gen_range(0.05..3.0);
        }
    }
    rows
}

pub fn market(rows: &[Vec<f64>]) -> Market {
    Market::new(rows.to_vec()).unwrap()
}

/// Shuffles outcome rows and asset columns.
pub fn permute(rng: &mut ChaCha8Rng, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rows.len();
    let k = rows[0].len();
    let mut ro: Vec<usize> = (0..m).collect();
    let mut co: Vec<usize> = (0..k).collect();
    ro.shuffle(rng);
    co.shuffle(rng);
    ro.iter().map(|&j| co.iter().map(|&i| rows[j][i]).collect()).collect()
}

/// Appends an asset strictly dominated by a mixture of existing ones.
pub fn with_dominated_asset(rng: &mut ChaCha8Rng, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = rows[0].len();
    let w = dirichlet(rng, k);
    let shrink = rng.gen_range(0.3..0.95);
    rows.iter()
        .map(|r| {
            let mix: f64 = r.iter().zip(&w).map(|(x, wi)| x * wi).sum();
            let mut out = r.clone();
            out.push(shrink * mix);
            out
        })
        .collect()
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
