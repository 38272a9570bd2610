//! Log-signatures and the tail heuristic for the radius of convergence.

use logsig::path::{figure_eight, line, line_conjugate, square_loop};
use logsig::signature::{log_signature, roc_profile};

fn main() -> logsig::Result<()> {
    for p in [line(&[1.0, 1.0])?, square_loop(), figure_eight(), line_conjugate()] {
        let l = log_signature(&p, 12)?;
        let (lie, res) = l.dynkin_is_lie(1e-10);
        let profile = roc_profile(&l)?;
        println!(
            "{:>15}: Lie {lie} ({res:.0e}), slope {:+.3}, verdict {:?}",
            p.name().unwrap_or("?"),
            profile.slope,
            profile.verdict
        );
        let roots: Vec<String> = profile.roots.iter().map(|r| format!("{r:.3}")).collect();
        println!("{:>15}  |π_n L|^(1/n) = [{}]", "", roots.join(", "));
    }
    Ok(())
}
