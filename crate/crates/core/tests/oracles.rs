mod common;

use common::*;
use kelly_core::{
    action_regret, empirical_distribution, growth_rate, solve, wealth_trajectory, Distribution, Market, Portfolio,
};

#[test]
fn two_asset_optimum_matches_scalar_search() {
    let mut r = rng(11);
    for _ in 0..40 {
        let x = random_rows(&mut r, 3, 2, 0.2);
        let p = dirichlet(&mut r, 3);
        let (best, at) = scalar_grid_max(&x, &p);
        let rep = solve(&market(&x), &dist(p), None).unwrap();
        assert!((rep.growth.value() - best).abs() < 1e-9, "{} vs {best}", rep.growth.value());
        if rep.unique == kelly_core::Uniqueness::Unique {
            assert!((rep.portfolio.weights()[1] - at).abs() < 1e-5);
        }
    }
}

#[test]
fn three_asset_optimum_matches_grid() {
    let mut r = rng(12);
    for _ in 0..10 {
        let x = random_rows(&mut r, 4, 3, 0.1);
        let p = dirichlet(&mut r, 4);
        let best = grid_max_growth(&x, &p);
        let rep = solve(&market(&x), &dist(p), None).unwrap();
        assert!(rep.growth.value() >= best - 1e-12);
        assert!(rep.growth.value() - best < 1e-6);
    }
}

#[test]
fn wealth_is_exponential_of_empirical_growth() {
    let mk = Market::new(vec![vec![1.0, 3.0, 0.5], vec![1.0, 0.5, 2.0], vec![1.0, 1.2, 1.1]]).unwrap();
    let b = Portfolio::new(vec![0.2, 0.5, 0.3]).unwrap();
    let seq = [0, 1, 1, 2, 0, 2, 2, 1, 0, 0, 1];
    let wealth = wealth_trajectory(&mk, &b, &seq).unwrap();
    let emp = empirical_distribution(&seq, 3).unwrap();
    let w = growth_rate(&mk, &b, &emp).unwrap().value();
    let last = *wealth.last().unwrap();
    assert!((last.ln() - seq.len() as f64 * w).abs() < 1e-12);
}

#[test]
fn action_regret_matches_direct_evaluation() {
    let x = vec![vec![2.0, 0.5], vec![0.5, 2.0], vec![1.0, 1.0]];
    let p = vec![0.5, 0.2, 0.3];
    let (best, _) = scalar_grid_max(&x, &p);
    let b = [0.7, 0.3];
    let direct = best - growth(&x, &b, &p);
    let got = action_regret(&market(&x), &Distribution::new(p).unwrap(), &Portfolio::new(b.to_vec()).unwrap())
        .unwrap()
        .value();
    assert!((got - direct).abs() < 1e-9);
}
