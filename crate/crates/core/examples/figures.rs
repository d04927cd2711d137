//! Writes the eigenvalue-versus-coupling panel data for both models.

use std::path::PathBuf;

fn main() -> ptbox::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("figures"), PathBuf::from);
    for path in ptbox::figures::write_figures(&dir)? {
        println!("{}", path.display());
    }
    Ok(())
}
