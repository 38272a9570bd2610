//! Closed-form exponential line and iterated integrals.

use std::f64::consts::PI;

use logsig::exp_integrals::{exp_line_integral, iterated_exp_integral, pq_double_integral, s_m_route_a, s_m_route_b};
use logsig::path::{figure_eight, line, random_normalized};
use logsig::C64;

fn main() -> logsig::Result<()> {
    let f8 = figure_eight();
    let i = C64::new(0.0, 2.0 * PI);
    println!("figure eight: ∫ e^(2πix) dy = {:.2e}", exp_line_integral(&f8, i)?.norm());
    println!("figure eight: pq(1, 2) = {:.8}", pq_double_integral(&f8, 1, 2)?);
    println!("-i/(2π²)               = {:.8}", C64::new(0.0, -1.0 / (2.0 * PI * PI)));

    let diag = line(&[1.0, 1.0])?;
    println!("line (t,t): ∫∫ e^(2πi(x_s + 2x_t)) = {:.2e}", iterated_exp_integral(&diag, &[i, i * 2.0])?.norm());

    let p = random_normalized(4, 7)?;
    let rates = [C64::new(0.4, 1.0), C64::new(-1.0, 0.3), C64::new(0.2, -2.0)];
    let a = s_m_route_a(&p, &rates)?;
    let b = s_m_route_b(&p, &rates)?;
    println!("S_3 by log-signature {a:.10}, by permutation weights {b:.10}");
    Ok(())
}
