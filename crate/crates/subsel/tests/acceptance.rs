//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use subsel::bounds::{alpha, g1, g2, main_bound, AlphaBranch};
use subsel::expected::{
    brute_force_average, brute_force_average_rational, conditional_poly_rational, f_empty,
    f_empty_float, g_empty, knh_identity_check, FamilyParams,
};
use subsel::linalg::{
    random_gaussian, random_isotropic_frame, random_rational_skew, rational_isotropic_frame,
    RationalFrame, SubsetIndex, TargetMatrix,
};
use subsel::poly::Poly;
use subsel::rational::binomial_capped;
use subsel::selector::{select_brute_force, select_interlacing};

const EPSILON: f64 = 1e-10;
const SLACK: f64 = 1e-9;

fn report(criterion: &str, start: Instant) {
    println!(
        "criterion {criterion}: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

fn itertools_combinations(m: usize, t: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..m).combinations(t).collect()
}

/// Criterion 1: the derivative interchange identity holds exactly for all
/// 1 <= n <= k <= m <= 12 under rational arithmetic.
#[test]
fn criterion_01_knh_identity_exhaustive() {
    let start = Instant::now();
    let mut checked = 0usize;
    for m in 1..=12 {
        for n in 1..=m {
            for k in n..=m {
                assert!(
                    knh_identity_check(m, n, k).unwrap(),
                    "identity failed at (m,n,k)=({m},{n},{k})"
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 364);
    report("01 knh-identity", start);
}

/// Criterion 2: the closed-form root node agrees with the brute-force
/// average: coefficient-wise within 1e-8 on 10 random float frames
/// (n <= 3, m <= 8, all k), exactly on 3 rational Cayley frames (m <= 6).
#[test]
fn criterion_02_root_node_formula() {
    let start = Instant::now();
    let shapes: [(usize, usize); 10] = [
        (1, 4),
        (2, 5),
        (2, 6),
        (3, 6),
        (3, 7),
        (3, 8),
        (2, 8),
        (3, 5),
        (1, 8),
        (2, 7),
    ];
    for (i, &(n, m)) in shapes.iter().enumerate() {
        let frame = random_isotropic_frame(n, m, 100 + i as u64).unwrap();
        for k in 1..=m {
            let brute = brute_force_average(&frame, k, &SubsetIndex::empty()).unwrap();
            let formula = f_empty_float(FamilyParams::new(m, n, k).unwrap()).unwrap();
            for c in 0..=n {
                let diff = (brute.coeff(c) - formula.coeff(c)).abs();
                assert!(
                    diff <= 1e-8,
                    "frame (n={n}, m={m}), k={k}: coefficient {c} differs by {diff:.3e}"
                );
            }
        }
    }
    for (i, (n, m)) in [(2usize, 4usize), (3, 5), (3, 6)].into_iter().enumerate() {
        let skew = random_rational_skew(m, 3, 5, 200 + i as u64);
        let frame = rational_isotropic_frame(&skew, n).unwrap();
        for k in 1..=m {
            let brute = brute_force_average_rational(&frame, k, &SubsetIndex::empty()).unwrap();
            let formula = f_empty(FamilyParams::new(m, n, k).unwrap()).unwrap();
            assert_eq!(
                brute, formula,
                "exact frame (n={n}, m={m}), k={k}: brute average != f_empty"
            );
        }
    }
    report("02 root-node-formula", start);
}

/// Criterion 3: on exact rational frames with m <= 6, the conditional
/// polynomial recipe equals the brute-force average identically for every
/// (k, chosen) with #chosen <= k.
#[test]
fn criterion_03_conditional_oracle() {
    let start = Instant::now();
    let frames: Vec<RationalFrame> = vec![
        rational_isotropic_frame(&random_rational_skew(4, 2, 3, 301), 2).unwrap(),
        rational_isotropic_frame(&random_rational_skew(5, 3, 5, 302), 2).unwrap(),
        rational_isotropic_frame(&random_rational_skew(6, 2, 5, 303), 3).unwrap(),
    ];
    let mut nodes = 0usize;
    for frame in &frames {
        let m = frame.count();
        for k in 1..=m {
            for t in 0..=k {
                for chosen_vec in itertools_combinations(m, t) {
                    let chosen = SubsetIndex::new(chosen_vec).unwrap();
                    let cond = conditional_poly_rational(frame, k, &chosen).unwrap();
                    let brute = brute_force_average_rational(frame, k, &chosen)
                        .unwrap()
                        .monic();
                    assert_eq!(
                        cond,
                        brute,
                        "node (m={m}, k={k}, chosen={:?}) disagrees with the oracle",
                        chosen.indices()
                    );
                    nodes += 1;
                }
            }
        }
    }
    assert_eq!(nodes, 413, "oracle node count over the three frames");
    report("03 conditional-oracle", start);
}

/// Shared instance list for criteria 4 and 5: 200 random targets with
/// n in [2,5] and m in [n+1, 12].
fn guarantee_instances() -> Vec<(TargetMatrix, usize, usize)> {
    let mut out = Vec::with_capacity(200);
    let mut seed = 0u64;
    'outer: loop {
        for n in 2..=5usize {
            for m in (n + 1)..=12usize {
                if out.len() == 200 {
                    break 'outer;
                }
                let a = TargetMatrix::new(random_gaussian(n, m, 40_000 + seed)).unwrap();
                assert_eq!(a.rank(), n, "random Gaussian instance lost rank");
                out.push((a, n, m));
                seed += 1;
            }
        }
    }
    out
}

/// Criterion 4: the selection guarantee holds on 200 random instances for
/// every k in [1, m-1]: σ_min(A_S)² >= (1−kε)·bound·σ_min(A)² − 1e-9, and
/// the tighter root certificate σ_min(A_S)²/σ_min(A)² >= root − 1e-9.
#[test]
fn criterion_04_main_guarantee() {
    let start = Instant::now();
    let mut runs = 0usize;
    for (a, n, m) in guarantee_instances() {
        let sigma_a_sq = a.sigma_min_positive().powi(2);
        for k in 1..m {
            let sel = select_interlacing(&a, k, EPSILON).unwrap();
            let bound = main_bound(m, n, k).unwrap();
            let rhs = (1.0 - k as f64 * EPSILON) * bound * sigma_a_sq - SLACK;
            assert!(
                sel.sigma_min_sq >= rhs,
                "(n={n}, m={m}, k={k}): sigma^2 {} < guarantee {rhs}",
                sel.sigma_min_sq
            );
            let ratio = sel.sigma_min_sq / sigma_a_sq;
            assert!(
                ratio >= sel.root_certificate - SLACK,
                "(n={n}, m={m}, k={k}): ratio {ratio} < root certificate {}",
                sel.root_certificate
            );
            runs += 1;
        }
    }
    println!("  ({runs} selection runs)");
    report("04 main-guarantee", start);
}

/// Criterion 5: where C(m,k) <= 800, the brute-force optimum sandwiches the
/// greedy output: optimum >= greedy >= root·σ_min(A)², all within 1e-9.
#[test]
fn criterion_05_sandwich_vs_optimum() {
    let start = Instant::now();
    let mut runs = 0usize;
    for (a, n, m) in guarantee_instances() {
        let sigma_a_sq = a.sigma_min_positive().powi(2);
        for k in 1..m {
            if binomial_capped(m, k, 800).is_none() {
                continue;
            }
            let sel = select_interlacing(&a, k, EPSILON).unwrap();
            let brute = select_brute_force(&a, k).unwrap();
            assert!(
                brute.sigma_min_sq >= sel.sigma_min_sq - SLACK,
                "(n={n}, m={m}, k={k}): brute {} < greedy {}",
                brute.sigma_min_sq,
                sel.sigma_min_sq
            );
            assert!(
                sel.sigma_min_sq >= sel.root_certificate * sigma_a_sq - SLACK,
                "(n={n}, m={m}, k={k}): greedy {} < root bound {}",
                sel.sigma_min_sq,
                sel.root_certificate * sigma_a_sq
            );
            runs += 1;
        }
    }
    println!("  ({runs} sandwich comparisons)");
    report("05 sandwich-vs-optimum", start);
}

/// Criterion 6: the extreme roots of g_∅ and f_∅ dominate their closed-form
/// bounds with slack 1e-9 across the full m <= 16 grids.
#[test]
fn criterion_06_root_bounds() {
    use subsel::poly::{DeflateBase, RationalPoly};
    let start = Instant::now();
    // The family polynomials carry the exact factor (x-1)^{k+n-m} when
    // m < n+k; deflate it rationally, then read the smallest root of the
    // strictly-interior core.
    let smallest_interior = |p: &RationalPoly, m: usize, n: usize, k: usize| -> f64 {
        let ones = (k + n).saturating_sub(m);
        let core = p.deflate_power(DeflateBase::XMinusOne, ones).unwrap();
        core.real_roots().unwrap().smallest().unwrap_or(1.0)
    };
    // smallest root of g_∅ for 2 <= k <= n < m <= 16
    for m in 3..=16usize {
        for n in 2..m {
            for k in 2..=n {
                let g = g_empty(FamilyParams::new(m, n, k).unwrap()).unwrap();
                let smallest = smallest_interior(&g, m, n, k);
                let bound = main_bound(m, n, k).unwrap();
                assert!(
                    smallest >= bound - SLACK,
                    "g_empty(m={m}, n={n}, k={k}): root {smallest} < bound {bound}"
                );
            }
        }
    }
    // smallest root of f_∅ for n <= k <= m-1, m <= 16
    for m in 2..=16usize {
        for n in 1..m {
            for k in n..m {
                let f = f_empty(FamilyParams::new(m, n, k).unwrap()).unwrap();
                let smallest = smallest_interior(&f, m, n, k);
                let bound = main_bound(m, n, k).unwrap();
                assert!(
                    smallest >= bound - SLACK,
                    "f_empty(m={m}, n={n}, k={k}): root {smallest} < bound {bound}"
                );
            }
        }
    }
    report("06 root-bounds", start);
}

/// Criterion 7: the explicit quadratic/cubic roots match their polynomials
/// to 1e-12 for m in [4, 60], and g1(m,2) reproduces the printed closed form.
#[test]
fn criterion_07_explicit_roots() {
    let start = Instant::now();
    for m in 4..=60usize {
        let mf = m as f64;
        let quad = Poly::from_coeffs(vec![2.0, -4.0 * (mf - 1.0), mf * (mf - 1.0)]);
        let smaller = quad.real_roots().unwrap().smallest().unwrap();
        assert!(
            (g1(mf, 2.0).unwrap() - smaller).abs() <= 1e-12,
            "g1 at m={m}"
        );

        let cubic = Poly::from_coeffs(vec![
            -6.0,
            18.0 * (mf - 2.0),
            -9.0 * (mf - 1.0) * (mf - 2.0),
            mf * (mf - 1.0) * (mf - 2.0),
        ]);
        let smallest = cubic.real_roots().unwrap().smallest().unwrap();
        assert!(
            (g2(mf, 3.0).unwrap() - smallest).abs() <= 1e-12,
            "g2 at m={m}"
        );

        let hong_pan_n2 = (2.0 - 2.0f64.sqrt() * ((mf - 2.0) / (mf - 1.0)).sqrt()) / mf;
        assert!(
            (g1(mf, 2.0).unwrap() - hong_pan_n2).abs() <= 1e-12,
            "g1 vs closed form at m={m}"
        );
    }
    report("07 explicit-roots", start);
}

/// Criterion 8: dominance over the baselines on the m <= 60 grid, with zero
/// violations. The greedy and xu21 comparisons require α < 1, i.e. k <= m-2
/// (at m = k+1 the bounds coincide exactly).
#[test]
fn criterion_08_dominance_claims() {
    let start = Instant::now();
    let mut checks = 0usize;
    for m in 2..=60usize {
        for n in 1..m {
            // main > hong_pan at k = n, n >= 2, m >= n+2
            if n >= 2 && m >= n + 2 {
                let main = main_bound(m, n, n).unwrap();
                let hong_pan = 1.0 / ((n * (m - n)) as f64 + 1.0);
                assert!(main > hong_pan, "hong_pan at (m={m}, n={n})");
                checks += 1;
            }
            for k in 1..m {
                let main = main_bound(m, n, k).unwrap();
                let (mf, nf, kf) = (m as f64, n as f64, k as f64);
                // main > greedy whenever alpha < 1: n >= 2, n <= k <= m-2
                if n >= 2 && k >= n && k + 2 <= m {
                    let greedy = (kf - nf + 1.0) / (nf * (mf - kf) + kf - nf + 1.0);
                    assert!(main > greedy, "greedy at (m={m}, n={n}, k={k})");
                    checks += 1;
                }
                // main > xu21 for k in [n, n+3], k <= m-2
                if k >= n && k <= n + 3 && k + 2 <= m {
                    let xu21 = (((kf + 1.0) * (mf - nf)).sqrt() - (nf * (mf - kf - 1.0)).sqrt())
                        .powi(2)
                        / (mf * mf);
                    assert!(main > xu21, "xu21 at (m={m}, n={n}, k={k})");
                    checks += 1;
                }
                // main > spielman17 for k in [max(1, n-4), n-1]
                if k < n && k + 4 >= n {
                    let spielman = (1.0 - (kf / nf).sqrt()).powi(2) * nf / mf;
                    assert!(main > spielman, "spielman17 at (m={m}, n={n}, k={k})");
                    checks += 1;
                }
            }
        }
    }
    println!("  ({checks} dominance checks)");
    report("08 dominance-claims", start);
}

/// Criterion 9: α lies in (0,1] on the whole m <= 60 grid; for n >= 2 it is
/// 1 exactly when k = 1 or m = n+1 or m = k+1 (for n = 1 it is identically
/// 1); and for k = n the large-m expansion 1 − 1/n² holds to 10/n³.
#[test]
fn criterion_09_alpha_sanity() {
    let start = Instant::now();
    for m in 2..=60usize {
        for n in 1..m {
            for k in 1..m {
                let (a, _) = alpha(m, n, k).unwrap();
                assert!(a > 0.0 && a <= 1.0, "alpha {a} at (m={m}, n={n}, k={k})");
                if n == 1 {
                    assert_eq!(a, 1.0, "n=1 must give alpha 1 at (m={m}, k={k})");
                } else {
                    let boundary = k == 1 || m == n + 1 || m == k + 1;
                    assert_eq!(
                        a == 1.0,
                        boundary,
                        "alpha = {a} vs boundary {boundary} at (m={m}, n={n}, k={k})"
                    );
                }
            }
        }
    }
    // large-m expansion at k = n, checked far inside the m >= 2n branch
    for n in 10..=40usize {
        let m = n * n;
        let (a, branch) = alpha(m, n, n).unwrap();
        assert_eq!(branch, AlphaBranch::H1Nk);
        let nf = n as f64;
        let diff = (a - (1.0 - 1.0 / (nf * nf))).abs();
        assert!(
            diff <= 10.0 / (nf * nf * nf),
            "expansion at n={n}: |alpha - (1 - 1/n^2)| = {diff:.3e}"
        );
    }
    report("09 alpha-sanity", start);
}

/// Criterion 10: the reciprocal-root sums of g_∅ match both closed forms to
/// 1e-9 relative for m >= n+k, k <= n, m <= 16.
#[test]
fn criterion_10_vieta_sums() {
    let start = Instant::now();
    for m in 2..=16usize {
        for n in 1..m {
            for k in 1..=n {
                if m < n + k {
                    continue;
                }
                let g = g_empty(FamilyParams::new(m, n, k).unwrap()).unwrap();
                let roots = g.real_roots().unwrap();
                let sum_inv: f64 = roots.roots().iter().map(|r| 1.0 / r).sum();
                let sum_inv_comp: f64 = roots.roots().iter().map(|r| 1.0 / (1.0 - r)).sum();
                let expect_inv = (k * (m - k + 1)) as f64 / (n - k + 1) as f64;
                let expect_comp = (k * (m - k + 1)) as f64 / (m - n - k + 1) as f64;
                assert!(
                    (sum_inv - expect_inv).abs() <= 1e-9 * expect_inv,
                    "(m={m}, n={n}, k={k}): sum 1/λ = {sum_inv} vs {expect_inv}"
                );
                assert!(
                    (sum_inv_comp - expect_comp).abs() <= 1e-9 * expect_comp,
                    "(m={m}, n={n}, k={k}): sum 1/(1-λ) = {sum_inv_comp} vs {expect_comp}"
                );
            }
        }
    }
    report("10 vieta-sums", start);
}

/// Criterion 11: the CLI round trip select → verify exits 0 on 20 random
/// instances, and a tampered report exits 1.
#[test]
fn criterion_11_cli_round_trip() {
    use std::process::Command;
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_subsel");
    let dir = tempfile::tempdir().unwrap();
    for i in 0..20u64 {
        let n = 2 + (i as usize % 3);
        let m = n + 2 + (i as usize % 5);
        let k = 1 + (i as usize % n.min(m - 1));
        let a = random_gaussian(n, m, 70_000 + i);
        let matrix_path = dir.path().join(format!("matrix_{i}.csv"));
        let mut csv = String::new();
        for r in 0..n {
            let row: Vec<String> = (0..m).map(|c| format!("{}", a[(r, c)])).collect();
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        std::fs::write(&matrix_path, csv).unwrap();

        let out = Command::new(bin)
            .args(["select", "--input"])
            .arg(&matrix_path)
            .args(["--k", &k.to_string()])
            .output()
            .unwrap();
        assert!(out.status.success(), "select failed: {:?}", out);
        let report_path = dir.path().join(format!("report_{i}.json"));
        std::fs::write(&report_path, &out.stdout).unwrap();

        let verify = Command::new(bin)
            .args(["verify", "--input"])
            .arg(&matrix_path)
            .args(["--report"])
            .arg(&report_path)
            .output()
            .unwrap();
        assert_eq!(
            verify.status.code(),
            Some(0),
            "verify failed on instance {i}: {}",
            String::from_utf8_lossy(&verify.stdout)
        );

        // tamper with the subset: rotate in a column the selection skipped
        let text = std::fs::read_to_string(&report_path).unwrap();
        let mut parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let subset: Vec<usize> = parsed["subset"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap() as usize)
            .collect();
        let unused = (0..m).find(|c| !subset.contains(c)).unwrap();
        let mut tampered = subset.clone();
        tampered[0] = unused;
        tampered.sort_unstable();
        parsed["subset"] = serde_json::json!(tampered);
        let tampered_path = dir.path().join(format!("tampered_{i}.json"));
        std::fs::write(&tampered_path, serde_json::to_string(&parsed).unwrap()).unwrap();
        let verify_bad = Command::new(bin)
            .args(["verify", "--input"])
            .arg(&matrix_path)
            .args(["--report"])
            .arg(&tampered_path)
            .output()
            .unwrap();
        assert_eq!(
            verify_bad.status.code(),
            Some(1),
            "tampered report must exit 1 on instance {i}: {}",
            String::from_utf8_lossy(&verify_bad.stdout)
        );
    }
    report("11 cli-round-trip", start);
}
