//! Build exactly isotropic frames from rational skew-symmetric matrices and
//! cross-check the two characteristic-polynomial backends on them.
//!
//! ```bash
//! cargo run -p subsel --example cayley_frames
//! ```

use subsel::linalg::{random_rational_skew, rational_isotropic_frame, SubsetIndex};
use subsel::poly::{charpoly_gram_f64, charpoly_gram_rational};
use subsel::rational::RatMat;

fn main() -> subsel::Result<()> {
    // The Cayley transform (I−S)(I+S)⁻¹ of a skew-symmetric S is orthogonal;
    // over the rationals it is exactly orthogonal, so its first n rows form
    // a frame with YYᵀ = I_n with zero residual.
    let skew = random_rational_skew(6, 3, 5, 42);
    let frame = rational_isotropic_frame(&skew, 3)?;
    let gram = frame.matrix().mul(&frame.matrix().transpose());
    assert_eq!(gram, RatMat::identity(3));
    println!("6-column rational frame in R^3: YYᵀ = I exactly");
    for i in 0..3 {
        let row: Vec<String> = (0..6).map(|j| frame.matrix()[(i, j)].to_string()).collect();
        println!("  [{}]", row.join(", "));
    }

    // Same Gram matrix, both backends: exact Faddeev–LeVerrier versus
    // eigenvalue expansion in floats.
    let s = SubsetIndex::new(vec![0, 2, 4])?;
    let exact = charpoly_gram_rational(&frame.gram_of(&s)?)?;
    let float = charpoly_gram_f64(&frame.to_frame().gram_of(&s)?)?;
    println!("\ncharpoly of Y_S Y_Sᵀ for S = {{0, 2, 4}}:");
    println!("  exact : {exact}");
    println!("  float : {float}");
    let exact_f = exact.to_float();
    let max_diff = (0..=3)
        .map(|i| (exact_f.coeff(i) - float.coeff(i)).abs())
        .fold(0.0f64, f64::max);
    println!("  max coefficient difference: {max_diff:.3e}");
    assert!(max_diff < 1e-10);
    Ok(())
}
