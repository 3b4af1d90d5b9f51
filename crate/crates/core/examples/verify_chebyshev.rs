//! Compare the computed decomposition of T_m with the closed-form prediction.
//!
//! cargo run --release --example verify_chebyshev -- 12

use z2dyn::chebyshev::{theorem_prediction, Prediction};
use z2dyn::verify_theorem;

fn main() -> z2dyn::Result<()> {
    let budget: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    for m in 2..=17u64 {
        let v = verify_theorem(m, budget)?;
        let detail = match theorem_prediction(m, budget)? {
            Prediction::Odd(p) => format!("s = {}, {} components, {} pending", p.s.s, p.components.len(), p.pending.len()),
            Prediction::Even(_) => "single basin".to_string(),
        };
        println!("T_{m:<2} {}  {detail}", if v.pass { "PASS" } else { "FAIL" });
        for f in &v.failures {
            println!("      {f}");
        }
    }
    Ok(())
}
