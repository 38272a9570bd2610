//! How often a Brownian sample fails the first line-integral identity.

use logsig::identity::brownian_lineint_study;
use logsig::path::brownian_sample;
use logsig::signature::{log_signature, roc_profile};

fn main() -> logsig::Result<()> {
    for threshold in [1e-3, 1e-2, 1e-1] {
        let s = brownian_lineint_study(200, 1024, 0, threshold)?;
        println!("threshold {threshold:.0e}: {}/{} exceed, certified {}", s.exceeding, s.samples, s.certified);
    }
    let p = brownian_sample(256, 5, 2)?;
    let profile = roc_profile(&log_signature(&p, 12)?)?;
    println!("one sample at depth 12: slope {:+.3}, {:?}", profile.slope, profile.verdict);
    Ok(())
}
