mod common;

use common::*;
use pathwidth_core::decomposition::validate;
use pathwidth_core::oracle::vs_dp;
use pathwidth_core::pipeline::{approx_decomposition, ApproxError, Branch};
use pathwidth_core::{solve, SolveConfig};
use proptest::prelude::*;

fn tiny(base_size: usize) -> SolveConfig {
    SolveConfig { base_size, ..SolveConfig::default() }
}

#[test]
fn catalog_through_the_recursion() {
    for n in 0..=5usize {
        let pairs = n * n.saturating_sub(1) / 2;
        for mask in 0..1u64 << pairs {
            let g = graph_from_mask(n, mask);
            let s = solve(&g, &tiny(2)).unwrap();
            assert_eq!(s.width, vs_dp(&g).unwrap(), "n {n} mask {mask}");
            assert_eq!(validate(&s.witness, &g), Ok(()));
            assert_eq!(s.witness.width(), s.width);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solve_is_exact(g in arb_graph(10), base in 2usize..=6) {
        let s = solve(&g, &tiny(base)).unwrap();
        prop_assert_eq!(s.width, vs_dp(&g).unwrap());
        prop_assert_eq!(validate(&s.witness, &g), Ok(()));
        prop_assert_eq!(s.witness.width(), s.width);
        // no level outgrows the input; lifted widths stay within 2k + 1
        for level in &s.trace.levels {
            prop_assert!(level.n <= g.vertex_count());
            if let Some(w) = level.approx_width {
                prop_assert!(w <= 2 * level.k as i32 + 1);
            }
        }
    }

    #[test]
    fn approximation_contract(g in arb_graph(12), k in 0usize..5) {
        let pw = vs_dp(&g).unwrap();
        match approx_decomposition(&g, k, &tiny(3)) {
            Ok(p) => {
                prop_assert_eq!(validate(&p, &g), Ok(()));
                prop_assert!(p.width() <= 2 * k as i32 + 1);
            }
            // a refusal is only allowed when the answer really is no
            Err(ApproxError::Infeasible) => prop_assert!(pw > k as i32),
            Err(ApproxError::Capability { .. }) => {}
        }
    }
}

#[test]
fn recursion_depth_is_logarithmic() {
    let g = pathwidth_core::generate::decorated(400);
    let s = solve(&g, &SolveConfig::default()).unwrap();
    assert_eq!(s.width, 2);
    // each level keeps at most 7/8 of its parent
    let bound = ((400f64).ln() / (8f64 / 7.0).ln()).ceil() as usize + 1;
    assert!(s.trace.max_depth() <= bound, "depth {}", s.trace.max_depth());
    assert!(s.trace.levels.iter().any(|l| matches!(l.branch, Branch::Matching { .. } | Branch::Simplicial { .. })));
}
