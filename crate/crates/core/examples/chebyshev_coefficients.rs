//! Print T_m, its 2-adic coefficient valuations and the valuation lemma verdict.
//!
//! cargo run --example chebyshev_coefficients -- 21

use z2dyn::{chebyshev_closed_form, chebyshev_recurrence, lemma31_check, s_of_m, v2};

fn main() -> z2dyn::Result<()> {
    let m: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(9);
    let t = chebyshev_recurrence(m);
    assert_eq!(t, chebyshev_closed_form(m)?);
    println!("T_{m} = {t}");
    for (k, c) in t.coeffs().iter().enumerate().filter(|(_, c)| c.bits() > 0) {
        println!("  c_{k:<3} v2 = {:<4} {c}", v2(c));
    }
    if m % 2 == 1 && m >= 3 {
        let s = s_of_m(m)?;
        let r = lemma31_check(m)?;
        println!("s = {} (m = {} * 2^s {} 1)", s.s, s.q, if s.sign > 0 { "+" } else { "-" });
        println!("lemma: {}", if r.pass { "holds" } else { "fails" });
    }
    Ok(())
}
