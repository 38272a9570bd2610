//! Truncated signatures of piecewise-linear paths and Chen's identity.

use logsig::path::{line, square_loop, PiecewisePath};
use logsig::signature::signature;

fn main() -> logsig::Result<()> {
    let sq = signature(&square_loop(), 3)?;
    println!("square: S^(12) = {}, S^(21) = {}", sq.coeff(&[0, 1]).re, sq.coeff(&[1, 0]).re);

    let a = line(&[1.0, 0.5])?;
    let b = PiecewisePath::planar(&[(0.0, 0.0), (-0.3, 0.8), (0.2, 1.0)])?;
    let joined = a.concat(&b, true)?;
    let chen = signature(&a, 5)?.mul(&signature(&b, 5)?)?;
    println!("Chen: |S(a ⊔ b) - S(a) S(b)| = {:.1e}", signature(&joined, 5)?.max_abs_diff(&chen)?);

    let s = signature(&joined, 5)?;
    let back = signature(&joined.reverse(), 5)?;
    println!("reversal: |S(←p) - S(p)^-1| = {:.1e}", back.max_abs_diff(&s.inv()?)?);
    println!("group-like residual: {:.1e}", s.is_group_like(1e-10)?.1);

    let v = joined.total_variation();
    for n in 1..=5 {
        let bound = v.powi(n) / (1..=n).product::<i32>() as f64;
        println!("level {n}: norm {:.4e} <= {:.4e}", s.level_norm(n as usize), bound);
    }
    Ok(())
}
