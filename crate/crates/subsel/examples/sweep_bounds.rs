//! Emit a bound-comparison grid as CSV, ready for external plotting.
//!
//! ```bash
//! cargo run -p subsel --example sweep_bounds > bounds.csv
//! ```

use subsel::bounds::compare_report;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn main() -> subsel::Result<()> {
    println!("m,n,k,alpha,main_bound,explicit_bound,hong_pan,greedy,xu21,spielman17");
    let n = 4;
    for m in (n + 1)..=30 {
        for k in 1..m {
            let r = compare_report(m, n, k)?;
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.m,
                r.n,
                r.k,
                r.alpha,
                r.main_bound,
                opt(r.explicit_bound),
                opt(r.baselines.hong_pan),
                opt(r.baselines.greedy),
                opt(r.baselines.xu21),
                opt(r.baselines.spielman17),
            );
        }
    }
    Ok(())
}
