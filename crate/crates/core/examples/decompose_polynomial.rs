//! Decompose Z_2 under an integer polynomial up to a level budget.
//!
//! cargo run --example decompose_polynomial -- "x^2 + x" 8

use z2dyn::report::{render_text, DecompositionReport, Payload};
use z2dyn::{decompose, parse_poly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let poly = parse_poly(&args.next().unwrap_or_else(|| "x^2".into()))?;
    let level: u32 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(8);
    let decomposition = decompose(&poly, level)?;
    assert!(decomposition.is_tiling());
    let payload = Payload::Decomposition(DecompositionReport { polynomial: poly.to_string(), decomposition });
    print!("{}", render_text(&payload));
    Ok(())
}
