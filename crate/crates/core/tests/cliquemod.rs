mod common;

use common::*;
use pohpath::cliquemod::*;
use pohpath::oracle::solve_exact;
use pohpath::{validate_solution, Instance, Variant};
use rand::Rng;

#[test]
fn matches_oracle_on_random_modules() {
    let mut r = rng(21);
    let mut feasible = 0;
    for _ in 0..500 {
        let c = r.gen_range(3..=6);
        let w = r.gen_range(0..=3);
        let (g, ws) = clique_plus(&mut r, c, w);
        let pairs = random_constraints(&mut r, &g, c + w);
        let inst = instance(g, &pairs);
        let fast = solve_clique_module(&inst, &ws).unwrap();
        let truth = solve_exact(&inst).unwrap();
        assert_eq!(fast.is_some(), truth.is_some(), "{inst:?}");
        if let Some(sol) = fast {
            assert!(validate_solution(&inst, &sol.order).is_valid());
            feasible += 1;
        }
    }
    assert!(feasible >= 50, "only {feasible} feasible");
}

#[test]
fn cycle_variant_matches_oracle() {
    let mut r = rng(22);
    for _ in 0..100 {
        let (g, ws) = clique_plus(&mut r, 3, 2);
        let pairs = random_constraints(&mut r, &g, 2);
        let inst = instance(g, &pairs).with_variant(Variant::Cycle);
        let fast = solve_clique_module(&inst, &ws).unwrap();
        assert_eq!(fast.is_some(), solve_exact(&inst).unwrap().is_some());
    }
}

#[test]
fn triangle_with_pendant_feasible() {
    let g = graph(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
    let inst = Instance::new(g, &[]).unwrap();
    assert!(solve_exact(&inst).unwrap().is_some());
    assert!(solve_clique_module(&inst, &[0, 3]).unwrap().is_some());
}
