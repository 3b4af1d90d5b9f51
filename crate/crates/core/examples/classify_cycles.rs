//! Enumerate cycles of a polynomial modulo 2^n, classify them and show their lifts.
//!
//! cargo run --example classify_cycles -- "x^2 + 1" 4

use z2dyn::dynamics::{classify, cycles_at_level, lifts, PolyMap};
use z2dyn::parse_poly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let poly = args.next().unwrap_or_else(|| "4*x^3 - 3*x".into());
    let level: u32 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(3);
    let map = PolyMap::new(parse_poly(&poly)?);
    for cycle in cycles_at_level(&map, level)? {
        let class = classify(&map, &cycle)?;
        let children: Vec<String> = lifts(&map, &cycle)?.iter().map(|c| c.to_string()).collect();
        println!("{cycle}  {}  a = {} mod 4  ->  {}", class.behavior, class.a_mod4, children.join(" "));
    }
    Ok(())
}
