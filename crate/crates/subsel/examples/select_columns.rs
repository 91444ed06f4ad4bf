//! Select k columns of a random matrix and check both certificates.
//!
//! ```bash
//! cargo run -p subsel --example select_columns
//! ```

use subsel::bounds::main_bound;
use subsel::linalg::random_gaussian;
use subsel::selector::DEFAULT_EPSILON;
use subsel::{select_interlacing, verify_certificate, TargetMatrix};

fn main() -> subsel::Result<()> {
    let (n, m, k) = (4, 12, 5);
    let a = TargetMatrix::new(random_gaussian(n, m, 7))?;
    println!(
        "target: {n}x{m} Gaussian, rank {}, selecting k = {k}",
        a.rank()
    );

    let result = select_interlacing(&a, k, DEFAULT_EPSILON)?;
    println!("chosen subset      : {:?}", result.subset.indices());
    println!("sigma_min(A_S)^2   : {:.12}", result.sigma_min_sq);

    let sigma_a_sq = a.sigma_min_positive().powi(2);
    println!("sigma_min(A)^2     : {sigma_a_sq:.12}");
    println!(
        "achieved ratio     : {:.12}",
        result.sigma_min_sq / sigma_a_sq
    );
    println!(
        "root certificate   : {:.12}  (root of the tree's root node)",
        result.root_certificate
    );
    println!(
        "closed-form factor : {:.12}  (bound certificate / sigma_min(A)^2)",
        main_bound(m, a.rank(), k)?
    );

    println!("\ngreedy trace (step, column, winning root):");
    for (step, s) in result.trace.iter().enumerate() {
        println!("  {step:>2}  column {:>2}  root {:.12}", s.index, s.root);
    }

    let verdict = verify_certificate(&a, &result)?;
    println!("\n{verdict}");
    assert!(verdict.pass());
    Ok(())
}
