//! The Baker–Campbell–Hausdorff series and its split into Hausdorff terms
//! graded by degree in the first argument.

use logsig::free_lie::{bch, bernoulli, hausdorff_hn};
use logsig::tensor::index_word;
use logsig::GradedTensor;

fn main() -> logsig::Result<()> {
    let v = GradedTensor::letter(2, 6, 0)?;
    let w = GradedTensor::letter(2, 6, 1)?;
    let b = bch(&v, &w)?;
    let mut sum = GradedTensor::zeros(2, 6)?;
    for n in 0..=6 {
        let h = hausdorff_hn(n, &v, &w)?;
        println!("H_{n}: {} nonzero coefficients", h.levels().iter().flatten().filter(|c| c.norm() > 1e-15).count());
        sum = sum.add(&h)?;
    }
    println!("|sum H_n - bch| = {:.1e}", sum.max_abs_diff(&b)?);

    println!("degree 3 of log(e^v e^w):");
    for (idx, c) in b.level(3).iter().enumerate() {
        if c.norm() > 1e-15 {
            let word: String = index_word(2, 3, idx).iter().map(|&a| if a == 0 { 'v' } else { 'w' }).collect();
            println!("  {word}: {:+.6}", c.re);
        }
    }
    let bs: Vec<String> = (0..=8).map(|m| format!("{:.4}", bernoulli(m).unwrap_or(f64::NAN))).collect();
    println!("B_0..B_8 = {}", bs.join(", "));
    Ok(())
}
