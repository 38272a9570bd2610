//! Word expansions of nested brackets, the consecutive-sum shuffle
//! identity, the vector Hausdorff recursion and the neo-classical
//! inequality.

use logsig::free_lie::{
    chen_strichartz_coeff, consecutive_shuffle_rhs, consecutive_shuffle_sum, hn_vector_direct,
    hn_vector_recursive, liemon_expand, neo_classical_sides, right_nested_bracket, Permutation,
};
use logsig::C64;

fn main() -> logsig::Result<()> {
    let word = [0, 2, 1, 0];
    let same = liemon_expand(3, &word)? == right_nested_bracket(3, &word)?;
    println!("nested bracket of {word:?} matches its word expansion: {same}");

    let c = [C64::new(1.0, 0.5), C64::new(-0.3, 1.2), C64::new(0.7, -0.4), C64::new(0.2, 0.9)];
    for s in 0..c.len() {
        let lhs = consecutive_shuffle_sum(&c, s)?;
        let rhs = consecutive_shuffle_rhs(&c, s)?;
        println!("s = {s}: shuffle sum {lhs:.6}, product {rhs:.6}");
    }

    let (_, a) = hn_vector_direct(&[1, 2], 5)?;
    let (_, b) = hn_vector_recursive(&[1, 2], 5)?;
    println!("H_(1,2): direct vs recursive |Δ| = {:.1e}", a.max_abs_diff(&b)?);

    for sigma in Permutation::all(3) {
        println!("{:?}: weight {:+.5}", sigma.images(), chen_strichartz_coeff(&sigma));
    }

    for p in [1.0, 2.0, 3.0] {
        let (lhs, rhs) = neo_classical_sides(p, 12);
        println!("p = {p}, m = 12: {lhs:.4e} <= {rhs:.4e}");
    }
    Ok(())
}
