//! Chebyshev layer: the parameter `s(m)`, coefficient valuations, the
//! closed-form decomposition of `T_m` on `Z_2`, and a comparator between
//! that prediction and the lift-tree engine.
//!
//! For odd `m >= 3` write `m = 2^s q ± 1` with `q` odd and `s >= 2`. The
//! minimal components of `T_m` are the balls
//!
//! ```text
//! E1(n, i) =      2^n (1 + 2i) + 2^(n+s)   Z_2    n >= 1, 0 <= i < 2^(s-1)
//! E2(n, i) =  1 + 2^n (1 + 2i) + 2^(n+s+1) Z_2    n >= 2, 0 <= i < 2^s
//! E3(n, i) = -1 + 2^n (1 + 2i) + 2^(n+s+1) Z_2    n >= 2, 0 <= i < 2^s
//! ```
//!
//! and `0, 1, -1` are the only periodic points. For even `m` every point is
//! attracted to the fixed point `1`.

use serde::{Deserialize, Serialize};

use crate::decomposition::{
    basin_oracle, coalesce, decompose, is_tiling, minimality_oracle, Ball, ComponentStatus, Decomposition,
};
use crate::error::{Error, Result};
use crate::padic::{v2, ExactInt, Valuation, MAX_LEVEL};
use crate::poly::{chebyshev_recurrence, IntPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SParameter {
    pub m: u64,
    pub s: u32,
    pub q: u64,
    /// `+1` for `m = 2^s q + 1`, `-1` for `m = 2^s q - 1`.
    pub sign: i8,
}

pub fn s_of_m(m: u64) -> Result<SParameter> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidIndex { m, reason: "s(m) needs odd m >= 3" });
    }
    let up = (m + 1).trailing_zeros();
    let down = (m - 1).trailing_zeros();
    // exactly one of m - 1, m + 1 is divisible by 4
    let (s, sign, base) = if up > down { (up, -1i8, m + 1) } else { (down, 1i8, m - 1) };
    Ok(SParameter { m, s, q: base >> s, sign })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma31Report {
    pub m: u64,
    pub s: u32,
    /// `v2(c_1), v2(c_3), ..., v2(c_m)` for the odd-degree coefficients.
    pub valuations: Vec<Valuation>,
    pub c1_odd: bool,
    pub c3_exact: bool,
    pub higher_bounded: bool,
    pub pass: bool,
}

/// Checks `v2(c_3) = s`, `v2(c_{2i+1}) >= s + 1` for `i >= 2`, and that
/// `c_1` is odd, on the exact coefficients of `T_m`.
pub fn lemma31_check(m: u64) -> Result<Lemma31Report> {
    let sp = s_of_m(m)?;
    let t = chebyshev_recurrence(m);
    let valuations: Vec<Valuation> = (0..=m / 2).map(|i| v2(&t.coeff(2 * i as usize + 1))).collect();
    let s = sp.s as u64;
    let c1_odd = valuations[0] == Valuation::Finite(0);
    let c3_exact = valuations[1] == Valuation::Finite(s);
    let higher_bounded = valuations[2..].iter().all(|&v| v >= Valuation::Finite(s + 1));
    Ok(Lemma31Report {
        m,
        s: sp.s,
        valuations,
        c1_odd,
        c3_exact,
        higher_bounded,
        pass: c1_odd && c3_exact && higher_bounded,
    })
}

/// `v2(f(x) - x)`.
pub fn displacement_valuation(f: &IntPolynomial, x: &ExactInt) -> Valuation {
    v2(&(f.eval(x) - x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    E1,
    E2,
    E3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PredictedComponent {
    pub family: Family,
    pub n: u32,
    pub i: u64,
    pub ball: Ball,
}

/// `(family, n, i, center, level)` per component, `(signed center, level)` per pending ball.
pub type PredictionShape = (Vec<(Family, u32, u64, u64, u32)>, Vec<(i128, u32)>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremPrediction {
    pub s: SParameter,
    pub budget: u32,
    pub fixed_points: [i64; 3],
    pub components: Vec<PredictedComponent>,
    /// Balls around `0`, `1`, `-1` holding the components beyond the budget.
    pub pending: Vec<Ball>,
}

impl TheoremPrediction {
    pub fn component_balls(&self) -> Vec<Ball> {
        self.components.iter().map(|c| c.ball).collect()
    }

    /// Components and pending balls together.
    pub fn all_balls(&self) -> Vec<Ball> {
        let mut out = self.component_balls();
        out.extend(self.pending.iter().copied());
        out
    }

    /// Budget-independent shape: `(family, n, i)` triples and pending levels
    /// relative to the budget. Equal for any two `m` with the same `s`.
    pub fn shape(&self) -> PredictionShape {
        let comps = self
            .components
            .iter()
            .map(|c| (c.family, c.n, c.i, c.ball.center(), c.ball.level()))
            .collect();
        let pending = self.pending.iter().map(|b| (b.signed_center(), b.level())).collect();
        (comps, pending)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenPrediction {
    pub m: u64,
    pub region: Ball,
    pub attractor: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prediction {
    Odd(TheoremPrediction),
    Even(EvenPrediction),
}

/// Materializes the explicit decomposition of `T_m` up to `budget`.
///
/// A family member is kept iff its ball level is at most `budget`; what is
/// left of `2Z_2` and `±1 + 4Z_2` becomes the pending balls `2^a Z_2` and
/// `±1 + 2^b Z_2` with `a = budget - s + 1`, `b = budget - s`.
pub fn theorem_prediction(m: u64, budget: u32) -> Result<Prediction> {
    if m < 2 {
        return Err(Error::InvalidIndex { m, reason: "need m >= 2" });
    }
    if m % 2 == 0 {
        return Ok(Prediction::Even(EvenPrediction { m, region: Ball::whole(), attractor: 1 }));
    }
    let sp = s_of_m(m)?;
    let s = sp.s;
    if budget < s + 2 {
        return Err(Error::BudgetTooSmall { budget, required: s + 2 });
    }
    if budget > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { level: budget, min: s + 2, max: MAX_LEVEL });
    }
    let mut components = Vec::new();
    for n in 1..=budget - s {
        for i in 0..1u64 << (s - 1) {
            let center = (1u64 << n) * (1 + 2 * i);
            components.push(PredictedComponent { family: Family::E1, n, i, ball: Ball::new(center, n + s)? });
        }
    }
    for n in 2..budget - s {
        for i in 0..1u64 << s {
            let offset = ((1u64 << n) * (1 + 2 * i)) as i64;
            let level = n + s + 1;
            components.push(PredictedComponent { family: Family::E2, n, i, ball: Ball::around(1 + offset, level)? });
            components.push(PredictedComponent { family: Family::E3, n, i, ball: Ball::around(-1 + offset, level)? });
        }
    }
    components.sort_by_key(|c| c.ball);
    let a = budget - s + 1;
    let b = budget - s;
    let mut pending = vec![Ball::around(0, a)?, Ball::around(1, b)?, Ball::around(-1, b)?];
    pending.sort();
    Ok(Prediction::Odd(TheoremPrediction { s: sp, budget, fixed_points: [0, 1, -1], components, pending }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    OddMinimalComponents,
    EvenAttractingBasin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub m: u64,
    pub budget: u32,
    pub kind: VerdictKind,
    pub s: Option<SParameter>,
    pub pass: bool,
    /// Ball sets of components found in both prediction and computation.
    pub matched: Vec<Vec<Ball>>,
    pub missing: Vec<Vec<Ball>>,
    pub extra: Vec<Vec<Ball>>,
    /// Human-readable reasons for a FAIL; empty on PASS.
    pub failures: Vec<String>,
}

/// Runs the engine on `T_m` and compares it with [`theorem_prediction`].
pub fn verify_theorem(m: u64, budget: u32) -> Result<Verdict> {
    let t = chebyshev_recurrence(m);
    let prediction = theorem_prediction(m, budget)?;
    let computed = decompose(&t, budget)?;
    match prediction {
        Prediction::Odd(p) => verify_odd(&t, &p, &computed),
        Prediction::Even(p) => verify_even(&t, &p, &computed),
    }
}

fn verify_odd(t: &IntPolynomial, p: &TheoremPrediction, d: &Decomposition) -> Result<Verdict> {
    let budget = p.budget;
    let mut failures = Vec::new();

    for x in p.fixed_points {
        let x = ExactInt::from(x);
        if t.eval(&x) != x {
            failures.push(format!("{x} is not an exact fixed point"));
        }
    }
    let expected_localizations = {
        let mut v = vec![Ball::around(0, budget)?, Ball::around(1, budget)?, Ball::around(-1, budget)?];
        v.sort();
        v
    };
    if d.periodic_localizations != expected_localizations {
        failures.push(format!("periodic localizations {:?} differ from 0, 1, -1", d.periodic_localizations));
    }
    if !d.basins.is_empty() {
        failures.push(format!("{} unexpected basin(s)", d.basins.len()));
    }

    let predicted: Vec<Vec<Ball>> = p.components.iter().map(|c| vec![c.ball]).collect();
    let mut matched = Vec::new();
    let mut extra = Vec::new();
    for c in &d.components {
        if c.status != ComponentStatus::ProvenStrongGrowth {
            failures.push(format!("component {:?} is not proven", c.balls));
        }
        if predicted.contains(&c.balls) {
            matched.push(c.balls.clone());
        } else {
            extra.push(c.balls.clone());
        }
    }
    let missing: Vec<Vec<Ball>> = predicted.iter().filter(|b| !matched.contains(b)).cloned().collect();
    if !missing.is_empty() {
        failures.push(format!("{} predicted component(s) missing", missing.len()));
    }
    if !extra.is_empty() {
        failures.push(format!("{} computed component(s) not predicted", extra.len()));
    }

    let mut residual = d.periodic_localizations.clone();
    residual.extend(d.unresolved.iter().copied());
    if coalesce(&residual) != coalesce(&p.pending) {
        failures.push("budget residue differs from the pending balls".to_string());
    }
    if !is_tiling(&p.all_balls()) {
        failures.push("prediction does not tile Z_2".to_string());
    }

    for balls in &matched {
        if !minimality_oracle(t, balls, budget)? {
            failures.push(format!("minimality oracle rejects {balls:?}"));
        }
    }

    Ok(Verdict {
        m: p.s.m,
        budget,
        kind: VerdictKind::OddMinimalComponents,
        s: Some(p.s),
        pass: failures.is_empty(),
        matched,
        missing,
        extra,
        failures,
    })
}

fn verify_even(t: &IntPolynomial, p: &EvenPrediction, d: &Decomposition) -> Result<Verdict> {
    let budget = d.max_level;
    let mut failures = Vec::new();
    let one = ExactInt::from(1);
    if t.eval(&one) != one {
        failures.push("1 is not a fixed point".to_string());
    }
    let attractor = Ball::around(p.attractor, budget)?;
    match d.basins.as_slice() {
        [basin] => {
            if coalesce(&basin.region) != vec![p.region] {
                failures.push("basin region is not all of Z_2".to_string());
            }
            if basin.attractor_orbit != vec![attractor] || basin.period != 1 {
                failures.push(format!("basin attractor {:?} is not {attractor}", basin.attractor_orbit));
            }
            if !basin_oracle(t, &basin.region, &basin.attractor_orbit, budget)? {
                failures.push("basin oracle rejects the basin".to_string());
            }
        }
        other => failures.push(format!("expected one basin, found {}", other.len())),
    }
    if !d.components.is_empty() || !d.unresolved.is_empty() || !d.periodic_localizations.is_empty() {
        failures.push("decomposition has parts outside the basin".to_string());
    }
    Ok(Verdict {
        m: p.m,
        budget,
        kind: VerdictKind::EvenAttractingBasin,
        s: None,
        pass: failures.is_empty(),
        matched: Vec::new(),
        missing: Vec::new(),
        extra: Vec::new(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(c: i64, l: u32) -> Ball {
        Ball::around(c, l).unwrap()
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_of_m(3).unwrap(), SParameter { m: 3, s: 2, q: 1, sign: -1 });
        assert_eq!(s_of_m(7).unwrap(), SParameter { m: 7, s: 3, q: 1, sign: -1 });
        assert_eq!(s_of_m(9).unwrap(), SParameter { m: 9, s: 3, q: 1, sign: 1 });
        assert_eq!(s_of_m(5).unwrap(), SParameter { m: 5, s: 2, q: 1, sign: 1 });
        assert_eq!(s_of_m(23).unwrap(), SParameter { m: 23, s: 3, q: 3, sign: -1 });
        assert!(s_of_m(4).is_err());
        assert!(s_of_m(1).is_err());
    }

    #[test]
    fn s_matches_definition() {
        for m in (3..2000u64).step_by(2) {
            let brute = (2..40).filter(|&n| (m + 1) % (1 << n) == 0 || (m - 1) % (1 << n) == 0).max().unwrap();
            let sp = s_of_m(m).unwrap();
            assert_eq!(sp.s, brute);
            assert_eq!((sp.q << sp.s) as i64 + sp.sign as i64, m as i64);
            assert_eq!(sp.q % 2, 1);
        }
    }

    #[test]
    fn lemma31_examples() {
        let fin = Valuation::Finite;
        let r = lemma31_check(5).unwrap();
        assert_eq!(r.valuations, vec![fin(0), fin(2), fin(4)]);
        assert!(r.pass);
        let r = lemma31_check(7).unwrap();
        assert_eq!(r.valuations, vec![fin(0), fin(3), fin(4), fin(6)]);
        assert!(r.pass);
        let r = lemma31_check(3).unwrap();
        assert_eq!(r.valuations, vec![fin(0), fin(2)]);
        assert!(r.pass && r.higher_bounded);
        assert!(lemma31_check(6).is_err());
    }

    #[test]
    fn prediction_m3_budget5() {
        let Prediction::Odd(p) = theorem_prediction(3, 5).unwrap() else { panic!() };
        let mut expected = vec![b(2, 3), b(6, 3), b(4, 4), b(12, 4), b(8, 5), b(24, 5)];
        for i in 0..4 {
            expected.push(b(1 + 4 * (1 + 2 * i), 5));
            expected.push(b(-1 + 4 * (1 + 2 * i), 5));
        }
        expected.sort();
        assert_eq!(p.component_balls(), expected);
        assert_eq!(p.pending, vec![b(1, 3), b(-1, 3), b(0, 4)]);
        assert!(is_tiling(&p.all_balls()));
    }

    #[test]
    fn prediction_m7_budget5() {
        let Prediction::Odd(p) = theorem_prediction(7, 5).unwrap() else { panic!() };
        let e1_level4: Vec<Ball> = p.component_balls().into_iter().filter(|b| b.level() == 4).collect();
        assert_eq!(e1_level4, vec![b(2, 4), b(6, 4), b(10, 4), b(14, 4)]);
        assert!(p.components.iter().all(|c| c.family == Family::E1));
        assert!(p.pending.contains(&b(1, 2)) && p.pending.contains(&b(-1, 2)));
    }

    #[test]
    fn prediction_edge_cases() {
        assert!(matches!(theorem_prediction(4, 3).unwrap(), Prediction::Even(_)));
        assert!(matches!(theorem_prediction(7, 4), Err(Error::BudgetTooSmall { .. })));
        assert!(theorem_prediction(1, 10).is_err());
    }

    #[test]
    fn prediction_tiles_at_every_budget() {
        for m in [3u64, 5, 7, 9, 15, 17, 31, 33] {
            let s = s_of_m(m).unwrap().s;
            for budget in s + 2..=20 {
                let Prediction::Odd(p) = theorem_prediction(m, budget).unwrap() else { panic!() };
                assert!(is_tiling(&p.all_balls()), "m = {m}, budget = {budget}");
            }
        }
    }

    #[test]
    fn verify_small_cases() {
        let v = verify_theorem(3, 8).unwrap();
        assert!(v.pass, "{:?}", v.failures);
        // E1: 2 per n for n = 1..=6, E2 and E3: 4 each for n = 2..=5
        assert_eq!(v.matched.len(), 12 + 32);
        assert!(verify_theorem(2, 8).unwrap().pass);
        let v = verify_theorem(9, 10).unwrap();
        assert!(v.pass, "{:?}", v.failures);
        assert_eq!(v.s.unwrap().s, 3);
    }

    #[test]
    fn verify_reports_failures_for_wrong_polynomial() {
        // T_3 + 8 agrees with T_3 mod 8 but moves the fixed point 0
        let f = &chebyshev_recurrence(3) + &IntPolynomial::from_i64s(&[8]);
        let Prediction::Odd(p) = theorem_prediction(3, 8).unwrap() else { panic!() };
        let d = decompose(&f, 8).unwrap();
        let v = verify_odd(&f, &p, &d).unwrap();
        assert!(!v.pass);
        assert!(!v.failures.is_empty());
    }
}
