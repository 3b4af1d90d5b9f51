//! Induced maps `f_n` on `Z/2^n Z`, their cycles, and the lift calculus.
//!
//! A cycle `σ = (x_1, ..., x_k)` of `f_n` is classified from two numbers
//! computed along its orbit: the multiplier `a_n = (f^k)'(x_1)` and the
//! normalised displacement `b_n = (f^k(x_1) - x_1) / 2^n`. With `p = 2`:
//!
//! | `a_n mod 4` | `b_n mod 2` | behavior         | lifts at level `n+1`   |
//! |-------------|-------------|------------------|------------------------|
//! | 0 or 2      | -           | grows tails      | one `k`-cycle          |
//! | 1 / 3       | 1           | strongly/weakly grows  | one `2k`-cycle   |
//! | 1 / 3       | 0           | strongly/weakly splits | two `k`-cycles   |

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{mask, Residue, MAX_LEVEL};
use crate::poly::{IntPolynomial, ReducedPoly};

/// Highest level at which the full residue ring is enumerated by default.
pub const DEFAULT_ENUMERATION_LIMIT: u32 = 24;

/// A polynomial prepared for repeated evaluation on residues: the exact
/// polynomial plus word-reduced copies of it and of its derivative.
#[derive(Debug, Clone)]
pub struct PolyMap {
    poly: IntPolynomial,
    f: ReducedPoly,
    df: ReducedPoly,
}

impl PolyMap {
    pub fn new(poly: IntPolynomial) -> PolyMap {
        let f = ReducedPoly::new(&poly);
        let df = ReducedPoly::new(&poly.derivative());
        PolyMap { poly, f, df }
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    /// `f_level(x)`.
    #[inline]
    pub fn apply(&self, x: u64, level: u32) -> u64 {
        self.f.eval_at(x, level)
    }

    /// `f'(x) mod 2^level`.
    #[inline]
    pub fn apply_derivative(&self, x: u64, level: u32) -> u64 {
        self.df.eval_at(x, level)
    }

    /// `f^k(x) mod 2^level`.
    pub fn iterate(&self, mut x: u64, k: usize, level: u32) -> u64 {
        x &= mask(level);
        for _ in 0..k {
            x = self.apply(x, level);
        }
        x
    }
}

impl From<IntPolynomial> for PolyMap {
    fn from(poly: IntPolynomial) -> PolyMap {
        PolyMap::new(poly)
    }
}

/// A cycle of `f_n`, stored in canonical rotation (smallest point first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    level: u32,
    points: Vec<u64>,
}

impl Cycle {
    /// Verifies that `points` is an orbit of `f_level` closing on itself,
    /// with pairwise distinct points, and rotates it to canonical form.
    pub fn new(map: &PolyMap, level: u32, points: Vec<u64>) -> Result<Cycle> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::LevelOutOfRange { level, min: 1, max: MAX_LEVEL });
        }
        if points.is_empty() || points.iter().any(|&p| p & !mask(level) != 0) {
            return Err(Error::NotACycle { level });
        }
        let k = points.len();
        for i in 0..k {
            if map.apply(points[i], level) != points[(i + 1) % k] {
                return Err(Error::NotACycle { level });
            }
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::NotACycle { level });
        }
        Ok(Cycle::canonical(level, points))
    }

    fn canonical(level: u32, mut points: Vec<u64>) -> Cycle {
        let start = points
            .iter()
            .enumerate()
            .min_by_key(|&(_, p)| *p)
            .map(|(i, _)| i)
            .unwrap_or(0);
        points.rotate_left(start);
        Cycle { level, points }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point values in orbit order, starting from the smallest.
    pub fn values(&self) -> &[u64] {
        &self.points
    }

    pub fn residues(&self) -> impl Iterator<Item = Residue> + '_ {
        self.points.iter().map(move |&p| Residue::from_word(p, self.level))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ") mod 2^{}", self.level)
    }
}

/// Lift behavior of a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Behavior {
    StronglyGrows,
    WeaklyGrows,
    StronglySplits,
    WeaklySplits,
    GrowsTails,
}

impl Behavior {
    pub fn grows(self) -> bool {
        matches!(self, Behavior::StronglyGrows | Behavior::WeaklyGrows)
    }

    pub fn splits(self) -> bool {
        matches!(self, Behavior::StronglySplits | Behavior::WeaklySplits)
    }

    pub fn grows_tails(self) -> bool {
        self == Behavior::GrowsTails
    }

    /// Number of lifts and the factor by which their length exceeds `k`.
    pub fn lift_shape(self) -> (usize, usize) {
        match self {
            Behavior::StronglyGrows | Behavior::WeaklyGrows => (1, 2),
            Behavior::StronglySplits | Behavior::WeaklySplits => (2, 1),
            Behavior::GrowsTails => (1, 1),
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Behavior::StronglyGrows => "StronglyGrows",
            Behavior::WeaklyGrows => "WeaklyGrows",
            Behavior::StronglySplits => "StronglySplits",
            Behavior::WeaklySplits => "WeaklySplits",
            Behavior::GrowsTails => "GrowsTails",
        };
        f.write_str(s)
    }
}

/// Behavior tag with its witnesses. `b_mod2` is `None` when `a` is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleClass {
    pub behavior: Behavior,
    pub a_mod4: u8,
    pub b_mod2: Option<u8>,
}

impl CycleClass {
    pub fn from_witnesses(a_mod4: u8, b_mod2: Option<u8>) -> CycleClass {
        let behavior = match (a_mod4 & 3, b_mod2) {
            (0 | 2, _) => Behavior::GrowsTails,
            (1, Some(1)) => Behavior::StronglyGrows,
            (3, Some(1)) => Behavior::WeaklyGrows,
            (1, _) => Behavior::StronglySplits,
            _ => Behavior::WeaklySplits,
        };
        CycleClass {
            behavior,
            a_mod4: a_mod4 & 3,
            b_mod2: if a_mod4 & 1 == 1 { b_mod2 } else { None },
        }
    }
}

/// All cycles of `f_n` on `Z/2^n Z`, sorted by their smallest point.
pub fn cycles_at_level(map: &PolyMap, level: u32) -> Result<Vec<Cycle>> {
    cycles_at_level_with_limit(map, level, DEFAULT_ENUMERATION_LIMIT)
}

pub fn cycles_at_level_with_limit(map: &PolyMap, level: u32, limit: u32) -> Result<Vec<Cycle>> {
    if level == 0 {
        return Err(Error::LevelOutOfRange { level, min: 1, max: MAX_LEVEL });
    }
    if level > limit.min(32) {
        return Err(Error::BudgetExceeded { level, limit: limit.min(32) });
    }
    let size = 1usize << level;
    // 0 = unvisited, otherwise the id of the walk that first reached the node
    let mut mark = vec![0u32; size];
    let mut cycles = Vec::new();
    for start in 0..size {
        if mark[start] != 0 {
            continue;
        }
        let walk = start as u32 + 1;
        let mut x = start;
        while mark[x] == 0 {
            mark[x] = walk;
            x = map.apply(x as u64, level) as usize;
        }
        if mark[x] == walk {
            // x lies on a new cycle
            let mut points = vec![x as u64];
            let mut y = map.apply(x as u64, level);
            while y != x as u64 {
                points.push(y);
                y = map.apply(y, level);
            }
            cycles.push(Cycle::canonical(level, points));
        }
    }
    cycles.sort();
    Ok(cycles)
}

/// `(f^k)'(x)` along the orbit of the point at `index`, taking that point's
/// representative in `[0, 2^n)` as an integer and working mod `2^level`.
pub fn multiplier_at(map: &PolyMap, cycle: &Cycle, index: usize, level: u32) -> u64 {
    let mut x = cycle.points[index];
    let mut product = 1u64;
    for _ in 0..cycle.len() {
        product = product.wrapping_mul(map.apply_derivative(x, level));
        x = map.apply(x, level);
    }
    product & mask(level)
}

/// `a_n mod 4`, evaluated at `x_1` with its orbit lifted to level `max(n, 2) + 2`.
pub fn a_n(map: &PolyMap, cycle: &Cycle) -> u8 {
    let level = (cycle.level.max(2) + 2).min(MAX_LEVEL);
    (multiplier_at(map, cycle, 0, level) & 3) as u8
}

/// `b_n mod 2` at `x_1`, from `f^k(x_1)` at level `n+1`.
pub fn b_n(map: &PolyMap, cycle: &Cycle) -> Result<u8> {
    if a_n(map, cycle) & 1 == 0 {
        return Err(Error::EvenMultiplier);
    }
    b_n_unchecked(map, cycle)
}

fn b_n_unchecked(map: &PolyMap, cycle: &Cycle) -> Result<u8> {
    let n = cycle.level;
    if n + 1 > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { level: n + 1, min: 1, max: MAX_LEVEL });
    }
    let x = cycle.points[0];
    let displacement = map.iterate(x, cycle.len(), n + 1).wrapping_sub(x) & mask(n + 1);
    if displacement & mask(n) != 0 {
        return Err(Error::Inconsistent(format!("{cycle} is not fixed by f^k mod 2^{n}")));
    }
    Ok((displacement >> n) as u8)
}

/// Behavior of a cycle per the table in the module docs.
///
/// Also checks that `a_n mod 2` does not depend on the representative:
/// the parity of the lifted-orbit product must match the parities of `f'`
/// taken at the cycle's own points.
pub fn classify(map: &PolyMap, cycle: &Cycle) -> Result<CycleClass> {
    let a = a_n(map, cycle);
    let parity_at_points = cycle.points.iter().all(|&x| map.apply_derivative(x, 1) == 1);
    if parity_at_points != (a & 1 == 1) {
        return Err(Error::Inconsistent(format!("a_n mod 2 is not constant on {cycle}")));
    }
    let b = if a & 1 == 1 { Some(b_n_unchecked(map, cycle)?) } else { None };
    Ok(CycleClass::from_witnesses(a, b))
}

/// The cycles of `f_{n+1}` inside the children of `cycle`'s points, checked
/// against the classification.
pub fn lifts(map: &PolyMap, cycle: &Cycle) -> Result<Vec<Cycle>> {
    let class = classify(map, cycle)?;
    lifts_with_class(map, cycle, class)
}

pub(crate) fn lifts_with_class(map: &PolyMap, cycle: &Cycle, class: CycleClass) -> Result<Vec<Cycle>> {
    let level = cycle.level + 1;
    if level > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { level, min: 1, max: MAX_LEVEL });
    }
    let k = cycle.len();
    let high = 1u64 << cycle.level;
    let mut nodes: Vec<u64> = cycle.points.iter().flat_map(|&p| [p, p | high]).collect();
    nodes.sort_unstable();
    let index: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut next = Vec::with_capacity(nodes.len());
    for &v in &nodes {
        let image = map.apply(v, level);
        match index.get(&image) {
            Some(&j) => next.push(j),
            None => {
                return Err(Error::Inconsistent(format!(
                    "f_{level} leaves the children of {cycle}"
                )))
            }
        }
    }

    let mut mark = vec![0usize; nodes.len()];
    let mut found = Vec::new();
    for start in 0..nodes.len() {
        if mark[start] != 0 {
            continue;
        }
        let walk = start + 1;
        let mut i = start;
        while mark[i] == 0 {
            mark[i] = walk;
            i = next[i];
        }
        if mark[i] == walk {
            let mut points = vec![nodes[i]];
            let mut j = next[i];
            while j != i {
                points.push(nodes[j]);
                j = next[j];
            }
            found.push(Cycle::canonical(level, points));
        }
    }
    found.sort();

    let (count, factor) = class.behavior.lift_shape();
    if found.len() != count || found.iter().any(|c| c.len() != factor * k) {
        return Err(Error::Inconsistent(format!(
            "{cycle} classified {} but lifts have lengths {:?}",
            class.behavior,
            found.iter().map(Cycle::len).collect::<Vec<_>>()
        )));
    }
    Ok(found)
}

/// Full linearization coefficients `(a_n mod 2^n, b_n mod 2^n)` at `x_1`,
/// computed at level `2n`.
pub fn linearization(map: &PolyMap, cycle: &Cycle) -> Result<(u64, u64)> {
    let n = cycle.level;
    let level = 2 * n;
    if level > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { level, min: 1, max: MAX_LEVEL });
    }
    let x = cycle.points[0];
    let a = multiplier_at(map, cycle, 0, level) & mask(n);
    let displacement = map.iterate(x, cycle.len(), level).wrapping_sub(x) & mask(level);
    if displacement & mask(n) != 0 {
        return Err(Error::Inconsistent(format!("{cycle} is not fixed by f^k mod 2^{n}")));
    }
    Ok((a, displacement >> n))
}

/// Checks `g(x + 2^n t) ≡ x + 2^n (b_n + a_n t) (mod 2^{2n})` for `t ∈ {0, 1}`,
/// where `g = f^k` and `x = x_1`.
pub fn linearization_holds(map: &PolyMap, cycle: &Cycle) -> Result<bool> {
    let n = cycle.level;
    let level = 2 * n;
    let (a, b) = linearization(map, cycle)?;
    let x = cycle.points[0];
    Ok((0..2u64).all(|t| {
        let lhs = map.iterate(x + (t << n), cycle.len(), level);
        let rhs = x.wrapping_add((b.wrapping_add(a.wrapping_mul(t))) << n) & mask(level);
        lhs == rhs
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev_recurrence;

    fn cheb(m: u64) -> PolyMap {
        PolyMap::new(chebyshev_recurrence(m))
    }

    fn cycle(map: &PolyMap, level: u32, pts: &[u64]) -> Cycle {
        Cycle::new(map, level, pts.to_vec()).unwrap()
    }

    #[test]
    fn t3_level_one_cycles() {
        let t3 = cheb(3);
        let cycles = cycles_at_level(&t3, 1).unwrap();
        assert_eq!(cycles, vec![cycle(&t3, 1, &[0]), cycle(&t3, 1, &[1])]);
    }

    #[test]
    fn t3_level_three_fixes_everything() {
        let t3 = cheb(3);
        let cycles = cycles_at_level(&t3, 3).unwrap();
        assert_eq!(cycles.len(), 8);
        assert!(cycles.iter().all(|c| c.len() == 1));
        assert!(cycles.contains(&cycle(&t3, 3, &[2])));
    }

    #[test]
    fn t2_level_one() {
        let t2 = cheb(2);
        assert_eq!(t2.apply(0, 1), 1);
        assert_eq!(cycles_at_level(&t2, 1).unwrap(), vec![cycle(&t2, 1, &[1])]);
    }

    #[test]
    fn enumeration_budget() {
        let t3 = cheb(3);
        assert_eq!(
            cycles_at_level_with_limit(&t3, 11, 10),
            Err(Error::BudgetExceeded { level: 11, limit: 10 })
        );
        assert!(cycles_at_level(&t3, 0).is_err());
    }

    #[test]
    fn cycle_construction_checks() {
        let t3 = cheb(3);
        assert_eq!(Cycle::new(&t3, 4, vec![10, 2]).unwrap().values(), &[2, 10]);
        assert!(Cycle::new(&t3, 4, vec![2]).is_err());
        assert!(Cycle::new(&t3, 3, vec![2, 2]).is_err());
        assert!(Cycle::new(&t3, 3, vec![]).is_err());
        assert!(Cycle::new(&t3, 3, vec![9]).is_err());
    }

    #[test]
    fn a_n_examples() {
        let t3 = cheb(3);
        assert_eq!(a_n(&t3, &cycle(&t3, 2, &[1])), 1);
        let t2 = cheb(2);
        assert_eq!(a_n(&t2, &cycle(&t2, 1, &[1])) % 2, 0);
        let f = PolyMap::new(IntPolynomial::from_i64s(&[0, 1, 2]));
        assert_eq!(a_n(&f, &cycle(&f, 1, &[0])), 1);
    }

    #[test]
    fn b_n_examples() {
        let t3 = cheb(3);
        for n in 1..=12 {
            assert_eq!(b_n(&t3, &cycle(&t3, n, &[0])).unwrap(), 0);
        }
        assert_eq!(b_n(&t3, &cycle(&t3, 3, &[2])).unwrap(), 1);
        assert_eq!(b_n(&t3, &cycle(&t3, 3, &[5])).unwrap(), 0);
        let t2 = cheb(2);
        assert_eq!(b_n(&t2, &cycle(&t2, 1, &[1])), Err(Error::EvenMultiplier));
    }

    #[test]
    fn classify_examples() {
        let t3 = cheb(3);
        let c = classify(&t3, &cycle(&t3, 3, &[2])).unwrap();
        assert_eq!(c, CycleClass { behavior: Behavior::StronglyGrows, a_mod4: 1, b_mod2: Some(1) });
        assert_eq!(classify(&t3, &cycle(&t3, 1, &[0])).unwrap().behavior, Behavior::StronglySplits);
        let t2 = cheb(2);
        let c = classify(&t2, &cycle(&t2, 1, &[1])).unwrap();
        assert_eq!(c.behavior, Behavior::GrowsTails);
        assert_eq!(c.b_mod2, None);
    }

    #[test]
    fn witness_table() {
        use Behavior::*;
        assert_eq!(CycleClass::from_witnesses(0, None).behavior, GrowsTails);
        assert_eq!(CycleClass::from_witnesses(2, Some(1)).behavior, GrowsTails);
        assert_eq!(CycleClass::from_witnesses(1, Some(1)).behavior, StronglyGrows);
        assert_eq!(CycleClass::from_witnesses(3, Some(1)).behavior, WeaklyGrows);
        assert_eq!(CycleClass::from_witnesses(1, Some(0)).behavior, StronglySplits);
        assert_eq!(CycleClass::from_witnesses(3, Some(0)).behavior, WeaklySplits);
    }

    #[test]
    fn weak_behaviors_occur() {
        // -x + 2x^2 has f'(0) = -1, a weak multiplier at the fixed point 0
        let f = PolyMap::new(IntPolynomial::from_i64s(&[0, -1, 2]));
        let c = classify(&f, &cycle(&f, 2, &[0])).unwrap();
        assert_eq!(c.a_mod4, 3);
        assert!(matches!(c.behavior, Behavior::WeaklySplits | Behavior::WeaklyGrows));
        assert_eq!(lifts(&f, &cycle(&f, 2, &[0])).unwrap().len(), c.behavior.lift_shape().0);
    }

    #[test]
    fn lifts_examples() {
        let t3 = cheb(3);
        assert_eq!(lifts(&t3, &cycle(&t3, 3, &[2])).unwrap(), vec![cycle(&t3, 4, &[2, 10])]);
        assert_eq!(
            lifts(&t3, &cycle(&t3, 1, &[0])).unwrap(),
            vec![cycle(&t3, 2, &[0]), cycle(&t3, 2, &[2])]
        );
        let t2 = cheb(2);
        let l = lifts(&t2, &cycle(&t2, 1, &[1])).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].len(), 1);
        assert_eq!(classify(&t2, &l[0]).unwrap().behavior, Behavior::GrowsTails);
    }

    #[test]
    fn linearization_t3() {
        let t3 = cheb(3);
        for c in cycles_at_level(&t3, 6).unwrap() {
            assert!(linearization_holds(&t3, &c).unwrap(), "{c}");
        }
        // T_3'(2) = 45, (T_3(2) - 2) / 8 = 3, reduced mod 8
        assert_eq!(linearization(&t3, &cycle(&t3, 3, &[2])).unwrap(), (45 % 8, 3));
    }
}
