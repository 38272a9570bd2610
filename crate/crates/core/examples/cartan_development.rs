//! Developing log-signatures into sl_{m+1}(C) through a Cartan element and
//! the superdiagonal nilpotent.

use std::f64::consts::PI;

use logsig::cartan::{
    cartan_element, commutator, d12_closed_form_residuals, develop_2d_identity_residual, dm_dev_coeff_residual,
    fdk_residual, matrix_unit, max_norm,
};
use logsig::path::{figure_eight, line_conjugate, random_normalized};
use logsig::C64;

fn main() -> logsig::Result<()> {
    let rates = [C64::new(0.6, 0.3), C64::new(-0.4, 0.8), C64::new(0.5, -0.7)];
    let a = cartan_element(&rates)?;
    let e13 = matrix_unit(4, 1, 3);
    let root = max_norm(&(commutator(&a, &e13) - &e13 * (rates[0] + rates[1])));
    println!("[A, E_13] = (a_1 + a_2) E_13 up to {root:.1e}");

    for n in [12, 16, 20] {
        let r = develop_2d_identity_residual(&line_conjugate(), C64::new(0.0, 2.0 * PI), C64::new(1.0, 0.0), n)?;
        println!("2D identity on the conjugated line, N = {n}: residual {:.1e}, tail {:.1e}", r.residual, r.tail);
    }

    let p = random_normalized(3, 29)?;
    for k in 1..=3 {
        let r = fdk_residual(&p, &rates, k, 14)?;
        println!("F(D_{k} L~) vs S_{k}: {:.1e}", r.residual);
    }
    let r = dm_dev_coeff_residual(&figure_eight(), &rates, &[0, 1], 14)?;
    println!("figure eight, word (1,2): {:.1e}", r.residual);
    let (d1, d2) = d12_closed_form_residuals(&figure_eight(), [rates[0], rates[1]], 14)?;
    println!("D_1/D_2 closed forms: {d1:.1e} {d2:.1e}");
    Ok(())
}
