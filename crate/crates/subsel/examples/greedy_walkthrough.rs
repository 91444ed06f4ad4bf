//! Walk the greedy descent step by step on a small frame, showing every
//! candidate's decision root, and compare the outcome with the brute-force
//! optimum.
//!
//! ```bash
//! cargo run -p subsel --example greedy_walkthrough
//! ```

use subsel::expected::{conditional_poly, SelectionState};
use subsel::linalg::random_isotropic_frame;
use subsel::selector::DEFAULT_EPSILON;
use subsel::{select_brute_force, select_interlacing, TargetMatrix};

fn main() -> subsel::Result<()> {
    let (n, m, k) = (3, 7, 3);
    let frame = random_isotropic_frame(n, m, 11)?;
    let a = TargetMatrix::new(frame.matrix().clone())?;

    let mut state = SelectionState::new(&frame, k)?;
    let root_poly = conditional_poly(&state)?;
    let parent_root = root_poly.real_roots()?.kth_largest(k).unwrap();
    println!("root node f_∅ (monic): {root_poly}");
    println!("decision root r_{k}(f_∅) = {parent_root:.10}\n");

    for step in 0..k {
        println!("step {step} candidates:");
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if state.chosen().contains(i) {
                continue;
            }
            let child = state.with_column(i)?;
            let poly = conditional_poly(&child)?;
            let roots = poly.real_roots()?;
            let root = roots.kth_largest(k).unwrap();
            let marker = if best.is_none_or(|(_, b)| root > b) {
                best = Some((i, root));
                " <- best so far"
            } else {
                ""
            };
            println!("  column {i}: r_{k} = {root:.10}{marker}");
        }
        let (winner, root) = best.unwrap();
        state = state.with_column(winner)?;
        println!("  -> take column {winner} (root {root:.10})\n");
    }

    let greedy = select_interlacing(&a, k, DEFAULT_EPSILON)?;
    let brute = select_brute_force(&a, k)?;
    println!(
        "greedy subset : {:?}  sigma_min^2 = {:.10}",
        greedy.subset.indices(),
        greedy.sigma_min_sq
    );
    println!(
        "optimum subset: {:?}  sigma_min^2 = {:.10}",
        brute.subset.indices(),
        brute.sigma_min_sq
    );
    println!(
        "root certificate (lower bound on both): {:.10}",
        greedy.root_certificate
    );
    assert!(brute.sigma_min_sq >= greedy.sigma_min_sq - 1e-12);
    assert!(greedy.sigma_min_sq >= greedy.root_certificate - 1e-9);
    Ok(())
}
