//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use z2dyn::chebyshev::{displacement_valuation, s_of_m, theorem_prediction, Prediction};
use z2dyn::decomposition::{basin_oracle, decompose, is_tiling, minimality_oracle, Ball, ComponentStatus};
use z2dyn::dynamics::{classify, cycles_at_level, lifts, linearization_holds, Behavior, PolyMap};
use z2dyn::{chebyshev_recurrence, lemma31_check, parse_poly, verify_theorem, IntPolynomial, Valuation};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Odd m covering s = 2, 3, 4, 5: verify at level 12 must PASS with exact
/// ball-set equality; verify re-certifies every component by brute force.
fn ac1_odd_theorem() -> Check {
    let mut matched = 0;
    for m in [3u64, 5, 7, 9, 15, 17, 31, 33] {
        let start = Instant::now();
        let v = verify_theorem(m, 12).map_err(|e| format!("m = {m}: {e}"))?;
        ensure(v.pass, || format!("m = {m}: {:?}", v.failures))?;
        ensure(v.missing.is_empty() && v.extra.is_empty(), || format!("m = {m}: set mismatch"))?;
        ensure(start.elapsed().as_secs() < 60, || format!("m = {m} took {:?}", start.elapsed()))?;
        matched += v.matched.len();
    }
    Ok(format!("8 values of m, {matched} components matched and re-certified"))
}

fn ac2_even_basin() -> Check {
    let attractor = [Ball::around(1, 12).unwrap()];
    for m in (2u64..=20).step_by(2) {
        let t = chebyshev_recurrence(m);
        let ok = basin_oracle(&t, &[Ball::whole()], &attractor, 12).map_err(|e| e.to_string())?;
        ensure(ok, || format!("basin oracle rejects T_{m}"))?;
        let d = decompose(&t, 12).map_err(|e| e.to_string())?;
        ensure(d.basins.len() == 1, || format!("T_{m}: {} basins", d.basins.len()))?;
        ensure(d.basins[0].attractor_orbit == attractor, || format!("T_{m}: wrong attractor"))?;
        ensure(
            d.components.is_empty() && d.unresolved.is_empty() && d.periodic_localizations.is_empty(),
            || format!("T_{m}: parts outside the basin"),
        )?;
        ensure(verify_theorem(m, 12).map_err(|e| e.to_string())?.pass, || format!("T_{m}: verdict FAIL"))?;
    }
    Ok("m = 2, 4, ..., 20".into())
}

fn ac3_lemma() -> Check {
    let mut max_bits = 0;
    for m in (3u64..=101).step_by(2) {
        let r = lemma31_check(m).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("m = {m}: valuations {:?}", r.valuations))?;
        max_bits = max_bits.max(chebyshev_recurrence(m).coeffs().iter().map(|c| c.bits()).max().unwrap_or(0));
    }
    Ok(format!("odd m in 3..=101, coefficients up to {max_bits} bits"))
}

fn ac4_valuation_identities() -> Check {
    let mut rng = StdRng::seed_from_u64(0x2ad1c);
    let mut samples = 0;
    for m in [3u64, 7, 9] {
        let t = chebyshev_recurrence(m);
        let s = s_of_m(m).unwrap().s as u64;
        for _ in 0..100 {
            let n: u32 = rng.gen_range(1..=8);
            let t_val: i64 = rng.gen_range(-(1i64 << 40)..(1i64 << 40));
            let x0 = (BigInt::from(1) << n) * (1 + 2 * BigInt::from(t_val));
            let v = displacement_valuation(&t, &x0);
            ensure(v == Valuation::Finite(n as u64 + s), || format!("m = {m}, x0 = {x0}: v2 = {v}"))?;

            let n: u32 = rng.gen_range(2..=8);
            let t_odd: i64 = rng.gen_range(-(1i64 << 40)..(1i64 << 40)) | 1;
            for sign in [1i64, -1] {
                let x0 = BigInt::from(sign) + (BigInt::from(1) << n) * t_odd;
                let v = displacement_valuation(&t, &x0);
                ensure(v == Valuation::Finite(n as u64 + s + 1), || format!("m = {m}, x0 = {x0}: v2 = {v}"))?;
            }
            samples += 3;
        }
    }
    Ok(format!("{samples} samples"))
}

fn structural_corpus() -> Vec<(String, IntPolynomial)> {
    ["4*x^3 - 3*x", "16*x^5 - 20*x^3 + 5*x", "64*x^7 - 112*x^5 + 56*x^3 - 7*x", "x^2", "x^2 + 1", "x^2 + x", "4*x^3 - 3*x + 8"]
        .iter()
        .map(|s| (s.to_string(), parse_poly(s).unwrap()))
        .collect()
}

fn ac5_structural_laws() -> Check {
    let mut cycles_checked = 0;
    for (name, f) in structural_corpus() {
        let map = PolyMap::new(f);
        for n in 1..=10 {
            for c in cycles_at_level(&map, n).map_err(|e| e.to_string())? {
                let class = classify(&map, &c).map_err(|e| format!("{name}: {e}"))?;
                // lifts() itself enforces the count and length law
                let lifted = lifts(&map, &c).map_err(|e| format!("{name}: {e}"))?;
                let (count, factor) = class.behavior.lift_shape();
                ensure(lifted.len() == count && lifted.iter().all(|l| l.len() == factor * c.len()), || {
                    format!("{name}: lift law fails at {c}")
                })?;
                if class.behavior == Behavior::GrowsTails {
                    let next = classify(&map, &lifted[0]).map_err(|e| e.to_string())?;
                    ensure(next.behavior == Behavior::GrowsTails, || format!("{name}: tails not inherited at {c}"))?;
                }
                if class.behavior == Behavior::StronglyGrows && n >= 2 {
                    let next = classify(&map, &lifted[0]).map_err(|e| e.to_string())?;
                    ensure(next.behavior == Behavior::StronglyGrows, || {
                        format!("{name}: strong growth not inherited at {c}")
                    })?;
                }
                let lin = linearization_holds(&map, &c).map_err(|e| e.to_string())?;
                ensure(lin, || format!("{name}: linearization fails at {c}"))?;
                cycles_checked += 1;
            }
        }
    }
    Ok(format!("{cycles_checked} cycles over 7 polynomials, levels 1..=10"))
}

fn oracle_corpus() -> Vec<IntPolynomial> {
    let mut corpus: Vec<IntPolynomial> = (3u64..=33).step_by(2).map(chebyshev_recurrence).collect();
    for s in ["x^2", "x^2 + 1", "4*x^3 - 3*x + 8", "4*x^3 - 3*x + 16*x^2", "4*x^3 - 5*x"] {
        corpus.push(parse_poly(s).unwrap());
    }
    corpus
}

const ORACLE_LEVEL: u32 = 12;

fn ac6_oracle_cross_validation() -> Check {
    let mut certified = 0;
    for f in oracle_corpus() {
        let d = decompose(&f, ORACLE_LEVEL).map_err(|e| format!("{f}: {e}"))?;
        for c in d.components.iter().filter(|c| c.status == ComponentStatus::ProvenStrongGrowth) {
            let ok = minimality_oracle(&f, &c.balls, ORACLE_LEVEL).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{f}: oracle rejects {:?}", c.balls))?;
            certified += 1;
        }
    }
    let mut basins = 0;
    for m in (2u64..=20).step_by(2) {
        let t = chebyshev_recurrence(m);
        let d = decompose(&t, ORACLE_LEVEL).map_err(|e| e.to_string())?;
        for b in &d.basins {
            let ok = basin_oracle(&t, &b.region, &b.attractor_orbit, ORACLE_LEVEL).map_err(|e| e.to_string())?;
            ensure(ok, || format!("T_{m}: basin oracle rejects {:?}", b.region))?;
            basins += 1;
        }
    }
    Ok(format!("{certified} proven components and {basins} basins certified"))
}

fn ac7_tiling() -> Check {
    let mut decompositions = 0;
    let mut predictions = 0;
    let mut polys = oracle_corpus();
    polys.extend((2u64..=20).step_by(2).map(chebyshev_recurrence));
    for (_, f) in structural_corpus() {
        polys.push(f);
    }
    for f in &polys {
        for level in [2, 5, 8, 12] {
            let d = decompose(f, level).map_err(|e| format!("{f}: {e}"))?;
            ensure(d.is_tiling(), || format!("{f} at level {level} does not tile"))?;
            decompositions += 1;
        }
    }
    for m in (3u64..=33).step_by(2) {
        let s = s_of_m(m).unwrap().s;
        for budget in s + 2..=24 {
            let Ok(Prediction::Odd(p)) = theorem_prediction(m, budget) else {
                return Err(format!("no prediction for m = {m}"));
            };
            ensure(is_tiling(&p.all_balls()), || format!("prediction m = {m}, budget {budget}"))?;
            predictions += 1;
        }
    }
    Ok(format!("{decompositions} decompositions, {predictions} predictions"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("AC1", "odd-m decomposition equals prediction at level 12", ac1_odd_theorem),
        ("AC2", "even-m single basin attracted to 1", ac2_even_basin),
        ("AC3", "coefficient valuations for odd m <= 101", ac3_lemma),
        ("AC4", "displacement valuation identities", ac4_valuation_identities),
        ("AC5", "lift laws, persistence, linearization", ac5_structural_laws),
        ("AC6", "oracle cross-validation", ac6_oracle_cross_validation),
        ("AC7", "exact tiling of decompositions and predictions", ac7_tiling),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({:.2?})", start.elapsed()),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
