//! Residual batteries that can certify a finite radius of convergence.

use logsig::identity::{run_battery, Battery, BatteryOptions};
use logsig::path::{figure_eight, line, line_conjugate, random_normalized};

fn main() -> logsig::Result<()> {
    let opts = BatteryOptions::default();
    let paths = [figure_eight(), line(&[1.0, 1.0])?, line_conjugate(), random_normalized(3, 1)?];
    for p in &paths {
        for battery in [Battery::Lineint, Battery::Doubint, Battery::Iterint, Battery::Genform] {
            let r = run_battery(p, battery, &opts)?;
            println!(
                "{:>18} {:>8}: {:?}, {} rows, max residual {:.2e}",
                r.path,
                r.battery,
                r.verdict,
                r.rows.len(),
                r.max_residual()
            );
        }
    }
    Ok(())
}
