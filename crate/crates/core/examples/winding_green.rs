//! Winding numbers, winding fields and Green's theorem for
//! self-intersecting loops.

use logsig::path::{figure_eight, square_loop, PiecewisePath};
use logsig::winding::{green_residual, winding_field, winding_number, windapp_diagnostic, Bump, GridSpec};

fn main() -> logsig::Result<()> {
    // a loop that goes round the origin twice
    let pts: Vec<(f64, f64)> = (0..=128)
        .map(|k| {
            let t = 4.0 * std::f64::consts::PI * k as f64 / 128.0;
            ((1.0 + 0.2 * t.cos()) * t.cos(), (1.0 + 0.2 * t.cos()) * t.sin())
        })
        .collect();
    let double = PiecewisePath::planar(&pts)?;
    println!("double loop around the origin: {}", winding_number(&double, (0.0, 0.0))?);

    let spec = GridSpec::around(&figure_eight(), 0.1, 24, 12)?;
    let field = winding_field(&figure_eight().tilde()?, spec)?;
    println!("closed figure eight: {} masked cells, others all zero: {}", field.masked_count(), field.unmasked().all(|v| v == 0));

    let f = Bump { amplitude: 1.0, center: (0.9, 0.5), width: 0.1 };
    let g = Bump { amplitude: -0.7, center: (0.5, 0.9), width: 0.1 };
    for n in [100, 200, 400] {
        let r = green_residual(&square_loop(), f, g, n)?;
        println!("Green, {n}x{n}: area {:.6}, line {:.6}, residual {:.1e}", r.area, r.line, r.residual);
    }

    let p = PiecewisePath::planar(&[(0.0, 0.0), (0.2, 0.6), (0.8, 0.6), (1.0, 0.0)])?;
    if let Some(rows) = windapp_diagnostic(&p, &[(0.5, 0.3), (0.1, 0.1)], 400)? {
        for r in rows {
            println!("({}, {}): η = {}, row mean {:.3}, gap {:.3}", r.x, r.y, r.winding, r.row_mean, r.residual);
        }
    }
    Ok(())
}
