//! Brute-force certificates: minimality on a union of balls and basin attraction.
//!
//! cargo run --example oracles

use z2dyn::decomposition::{basin_oracle, minimality_oracle, Ball};
use z2dyn::chebyshev_recurrence;

fn main() -> z2dyn::Result<()> {
    let t3 = chebyshev_recurrence(3);
    let t4 = chebyshev_recurrence(4);
    let cases = [
        ("T_3 on 2 + 8Z_2", vec![Ball::around(2, 3)?]),
        ("T_3 on 2 + 16Z_2", vec![Ball::around(2, 4)?]),
        ("T_3 on -3 + 32Z_2", vec![Ball::around(-3, 5)?]),
    ];
    for (name, balls) in cases {
        println!("{name}: minimal up to 2^10 = {}", minimality_oracle(&t3, &balls, 10)?);
    }
    let attracted = basin_oracle(&t4, &[Ball::whole()], &[Ball::around(1, 10)?], 10)?;
    println!("T_4: every point of Z_2 falls into 1 + 2^10 Z_2 = {attracted}");
    Ok(())
}
