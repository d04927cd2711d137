//! Closed-form position matrix elements of the box eigenfunctions, checked
//! against Gauss-Legendre quadrature.

use std::f64::consts::PI;

use ptbox::matelem::{closed_form, quadrature_oracle, x_element};

fn main() {
    println!("{:>2} {:>2} {:>2} {:>22} {:>22} {:>9}", "p", "k", "m", "closed form", "quadrature", "diff");
    for p in 0..=2 {
        for (k, m) in [(1, 1), (1, 2), (1, 3), (2, 5), (4, 4)] {
            let cf = closed_form(p, k, m).unwrap();
            let q = quadrature_oracle(p, k, m);
            println!("{p:>2} {k:>2} {m:>2} {cf:>22.16} {q:>22.16} {:>9.1e}", (cf - q).abs());
        }
    }
    let x12 = x_element(1, 2);
    println!("\n<1|x|2>^2 = {:.16}", x12 * x12);
    println!("1024/(81 pi^4) = {:.16}", 1024.0 / (81.0 * PI.powi(4)));
}
