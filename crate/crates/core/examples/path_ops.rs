//! Path builders and operations: sub-paths, normalisation, closing chords,
//! conjugation.

use logsig::path::{brownian_sample, conjugated_line, PathTime, PiecewisePath};

fn main() -> logsig::Result<()> {
    let p = brownian_sample(6, 42, 2)?;
    println!("brownian: {} vertices, total variation {:.4}", p.vertices().len(), p.total_variation());

    let sub = p.sub_path(PathTime::new(1, 0.25), PathTime::new(4, 0.5))?;
    println!("sub-path from {:?} to {:?}", sub.first(), sub.last());

    let n = p.normalize(PathTime::new(1, 0.25), PathTime::new(4, 0.5))?;
    println!("normalised: starts {:?}, ends {:?}, normalised {}", n.first(), n.last(), n.is_normalized());

    let t = n.tilde()?;
    println!("closed by its chord: {} vertices, closed {}", t.vertices().len(), t.is_closed());

    let alpha = PiecewisePath::planar(&[(0.0, 0.0), (0.3, 0.7), (-0.2, 1.0)])?;
    let c = conjugated_line(&alpha)?;
    println!("{}: {:?}", c.name().unwrap_or("?"), c.vertices());
    Ok(())
}
