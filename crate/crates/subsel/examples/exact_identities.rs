//! Exercise the exact-rational layer: the derivative interchange identity
//! and the reciprocal-root sums of the deflated root polynomial.
//!
//! ```bash
//! cargo run -p subsel --example exact_identities
//! ```

use subsel::expected::{g_empty, knh_identity_check, FamilyParams};

fn main() -> subsel::Result<()> {
    // ∂ₓᵏ(x−1)^{m−n}xⁿ = (m−n)!/(m−k)! · x^{−(k−n)} · ∂ₓⁿ(x−1)^{m−k}xᵏ,
    // exhaustively for m <= 10, exactly over the rationals.
    let mut checked = 0;
    for m in 1..=10 {
        for n in 1..=m {
            for k in n..=m {
                assert!(knh_identity_check(m, n, k)?);
                checked += 1;
            }
        }
    }
    println!("derivative interchange identity: {checked} cases, all exact");

    // Reciprocal-root sums of g_∅ against their closed forms. The sums are
    // read off the coefficients (Vieta), so this is exact arithmetic too.
    println!(
        "\n(m, n, k)   sum 1/root        k(m-k+1)/(n-k+1)   sum 1/(1-root)   k(m-k+1)/(m-n-k+1)"
    );
    for (m, n, k) in [(6, 3, 2), (10, 4, 3), (12, 5, 4), (16, 8, 8)] {
        let g = g_empty(FamilyParams::new(m, n, k)?)?;
        let g_f = g.to_float();
        let sum_inv = -g_f.coeff(1) / g_f.coeff(0);
        let refl = g_f.reflect();
        let sum_inv_comp = -refl.coeff(1) / refl.coeff(0);
        let expect_inv = (k * (m - k + 1)) as f64 / (n - k + 1) as f64;
        let expect_comp = (k * (m - k + 1)) as f64 / (m - n - k + 1) as f64;
        println!(
            "({m:>2},{n:>2},{k:>2})   {sum_inv:<16.10} {expect_inv:<18.10} {sum_inv_comp:<16.10} {expect_comp:<18.10}"
        );
        assert!((sum_inv - expect_inv).abs() < 1e-9 * expect_inv);
        assert!((sum_inv_comp - expect_comp).abs() < 1e-9 * expect_comp);
    }
    Ok(())
}
