//! Minimal decomposition `Z_2 = P ⊔ M ⊔ B` explored through the lift tree,
//! plus the brute-force oracles used to certify its output.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{classify, cycles_at_level, lifts_with_class, Behavior, Cycle, PolyMap, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::padic::{mask, Residue, MAX_LEVEL};
use crate::poly::IntPolynomial;

/// The clopen ball `center + 2^level Z_2`. Level 0 is all of `Z_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    // field order gives the canonical (level, center) ordering
    level: u32,
    center: u64,
}

impl Ball {
    pub fn new(center: u64, level: u32) -> Result<Ball> {
        if level > MAX_LEVEL {
            return Err(Error::LevelOutOfRange { level, min: 0, max: MAX_LEVEL });
        }
        if center & !mask(level) != 0 && level < 64 {
            return Err(Error::InvalidBall(format!("center {center} is not below 2^{level}")));
        }
        Ok(Ball { level, center: if level == 0 { 0 } else { center } })
    }

    /// Ball around a signed integer, e.g. `Ball::around(-1, 5)` is `31 + 2^5 Z_2`.
    pub fn around(center: i64, level: u32) -> Result<Ball> {
        Ball::new(if level == 0 { 0 } else { center as u64 & mask(level) }, level)
    }

    pub fn whole() -> Ball {
        Ball { level: 0, center: 0 }
    }

    pub fn from_residue(r: Residue) -> Ball {
        Ball { level: r.level(), center: r.value() }
    }

    pub fn center(&self) -> u64 {
        self.center
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Center in `(-2^(L-1), 2^(L-1)]`.
    pub fn signed_center(&self) -> i128 {
        if self.level == 0 {
            return 0;
        }
        Residue::from_word(self.center, self.level).signed()
    }

    /// `true` iff `other ⊆ self`.
    pub fn contains(&self, other: &Ball) -> bool {
        other.level >= self.level && other.center & mask(self.level) == self.center
    }

    pub fn contains_value(&self, x: u64) -> bool {
        x & mask(self.level) == self.center
    }

    pub fn disjoint(&self, other: &Ball) -> bool {
        !self.contains(other) && !other.contains(self)
    }

    pub fn children(&self) -> Result<(Ball, Ball)> {
        if self.level >= MAX_LEVEL {
            return Err(Error::LevelOutOfRange { level: self.level + 1, min: 0, max: MAX_LEVEL });
        }
        let level = self.level + 1;
        Ok((Ball { level, center: self.center }, Ball { level, center: self.center | (1 << self.level) }))
    }

    fn parent(&self) -> Option<Ball> {
        (self.level > 0).then(|| Ball { level: self.level - 1, center: self.center & mask(self.level - 1) })
    }

    pub fn measure(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.level)
    }

    /// Residues at `level >= self.level` lying in the ball.
    pub fn residues_at(&self, level: u32) -> impl Iterator<Item = u64> + '_ {
        let extra = level.saturating_sub(self.level);
        let base = self.center;
        let shift = self.level;
        (0..1u64 << extra).map(move |j| base | (j << shift))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + 2^{}*Z2", self.center, self.level)
    }
}

impl Ball {
    /// Short signed form of the center, when it is negative and `|c| <= 2`.
    pub fn alias(&self) -> Option<i128> {
        let s = self.signed_center();
        (-2..0).contains(&s).then_some(s)
    }
}

#[derive(Serialize, Deserialize)]
struct BallRepr {
    center: String,
    level: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alias: Option<String>,
}

impl Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallRepr {
            center: self.center.to_string(),
            level: self.level,
            alias: self.alias().map(|a| a.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ball {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Ball, D::Error> {
        use serde::de::Error as _;
        let repr = BallRepr::deserialize(d)?;
        let center: u64 = repr.center.parse().map_err(D::Error::custom)?;
        Ball::new(center, repr.level).map_err(D::Error::custom)
    }
}

/// Sum of measures, in exact rationals.
pub fn measure(balls: &[Ball]) -> BigRational {
    balls.iter().map(Ball::measure).fold(BigRational::zero(), |a, b| a + b)
}

/// No ball contains (or equals) another.
pub fn pairwise_disjoint(balls: &[Ball]) -> bool {
    let set: HashSet<Ball> = balls.iter().copied().collect();
    if set.len() != balls.len() {
        return false;
    }
    balls.iter().all(|b| {
        let mut cur = b.parent();
        while let Some(p) = cur {
            if set.contains(&p) {
                return false;
            }
            cur = p.parent();
        }
        true
    })
}

/// Disjoint with total measure one.
pub fn is_tiling(balls: &[Ball]) -> bool {
    pairwise_disjoint(balls) && measure(balls).is_one()
}

/// Coarsest ball list covering the same set as the (disjoint) input:
/// sibling pairs are merged into their parent until none remain.
pub fn coalesce(balls: &[Ball]) -> Vec<Ball> {
    let mut set: BTreeSet<Ball> = balls.iter().copied().collect();
    let max_level = set.iter().map(|b| b.level).max().unwrap_or(0);
    for level in (1..=max_level).rev() {
        let at_level: Vec<Ball> = set.iter().filter(|b| b.level == level).copied().collect();
        for b in at_level {
            let sibling = Ball { level, center: b.center ^ (1 << (level - 1)) };
            if set.contains(&b) && set.contains(&sibling) {
                set.remove(&b);
                set.remove(&sibling);
                set.insert(b.parent().expect("level > 0"));
            }
        }
    }
    set.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentStatus {
    /// Certified by strong growth at level >= 2.
    ProvenStrongGrowth,
    /// A growth chain that stayed a single cycle up to the budget, with no
    /// strong growth seen at level >= 2.
    VerifiedToBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinimalComponent {
    pub balls: Vec<Ball>,
    pub cycle_length: usize,
    pub status: ComponentStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Basin {
    pub region: Vec<Ball>,
    /// The attracting orbit localised at the budget level, in orbit order.
    pub attractor_orbit: Vec<Ball>,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub max_level: u32,
    pub periodic_localizations: Vec<Ball>,
    pub components: Vec<MinimalComponent>,
    pub basins: Vec<Basin>,
    pub unresolved: Vec<Ball>,
}

impl Decomposition {
    /// Every ball of the partition; attractor balls are not included since
    /// they lie inside basin regions.
    pub fn all_balls(&self) -> Vec<Ball> {
        let mut out = self.periodic_localizations.clone();
        out.extend(self.components.iter().flat_map(|c| c.balls.iter().copied()));
        out.extend(self.basins.iter().flat_map(|b| b.region.iter().copied()));
        out.extend(self.unresolved.iter().copied());
        out
    }

    pub fn is_tiling(&self) -> bool {
        is_tiling(&self.all_balls())
    }
}

fn cycle_balls(cycle: &Cycle) -> Vec<Ball> {
    let mut balls: Vec<Ball> = cycle.residues().map(Ball::from_residue).collect();
    balls.sort();
    balls
}

fn orbit_balls(cycle: &Cycle) -> Vec<Ball> {
    cycle.residues().map(Ball::from_residue).collect()
}

/// `true` iff the signed representatives of the cycle form an exact
/// periodic orbit of `f` over `Z`.
fn is_exact_orbit(poly: &IntPolynomial, cycle: &Cycle) -> bool {
    let reps: Vec<BigInt> = cycle.residues().map(|r| BigInt::from(r.signed())).collect();
    let k = reps.len();
    (0..k).all(|i| poly.eval(&reps[i]) == reps[(i + 1) % k])
}

struct Node {
    cycle: Cycle,
    // earliest ancestor such that every step from it down to `cycle` grew
    chain_start: Option<Cycle>,
}

/// Explores the lift tree of `f` from level 1 up to `max_level`.
///
/// Branches end when a cycle grows tails (the whole `X_σ` is a basin), when
/// it strongly grows at level >= 2 (a minimal component), or at the budget.
/// Components are reported over the balls of the top of their growth chain.
pub fn decompose(f: &IntPolynomial, max_level: u32) -> Result<Decomposition> {
    decompose_with_limit(f, max_level, DEFAULT_ENUMERATION_LIMIT)
}

pub fn decompose_with_limit(f: &IntPolynomial, max_level: u32, limit: u32) -> Result<Decomposition> {
    let degree = f.degree().map_or(-1, |d| d as i64);
    if degree < 2 {
        return Err(Error::DegreeTooLow { degree, required: 2 });
    }
    if max_level < 2 {
        return Err(Error::BudgetTooSmall { budget: max_level, required: 2 });
    }
    if max_level > limit.min(MAX_LEVEL - 2) {
        return Err(Error::BudgetExceeded { level: max_level, limit: limit.min(MAX_LEVEL - 2) });
    }
    let map = PolyMap::new(f.clone());

    let mut out = Decomposition {
        max_level,
        periodic_localizations: Vec::new(),
        components: Vec::new(),
        basins: Vec::new(),
        unresolved: Vec::new(),
    };
    // level-1 tails cycles -> basin index, so transients can join them
    let mut level_one_basins: HashMap<Cycle, usize> = HashMap::new();

    let roots = cycles_at_level(&map, 1)?;
    let mut stack: Vec<Node> = roots
        .iter()
        .rev()
        .map(|c| Node { cycle: c.clone(), chain_start: None })
        .collect();

    while let Some(Node { cycle, chain_start }) = stack.pop() {
        let n = cycle.level();
        let class = classify(&map, &cycle)?;
        match class.behavior {
            Behavior::GrowsTails => {
                let mut attractor = cycle.clone();
                while attractor.level() < max_level {
                    let class = classify(&map, &attractor)?;
                    let mut next = lifts_with_class(&map, &attractor, class)?;
                    attractor = next.pop().expect("one lift");
                }
                if n == 1 {
                    level_one_basins.insert(cycle.clone(), out.basins.len());
                }
                out.basins.push(Basin {
                    region: cycle_balls(&cycle),
                    attractor_orbit: orbit_balls(&attractor),
                    period: cycle.len(),
                });
            }
            Behavior::StronglyGrows if n >= 2 => {
                let top = chain_start.as_ref().unwrap_or(&cycle);
                out.components.push(MinimalComponent {
                    balls: cycle_balls(top),
                    cycle_length: top.len(),
                    status: ComponentStatus::ProvenStrongGrowth,
                });
            }
            Behavior::StronglyGrows | Behavior::WeaklyGrows => {
                if n == max_level {
                    let top = chain_start.as_ref().unwrap_or(&cycle);
                    out.components.push(MinimalComponent {
                        balls: cycle_balls(top),
                        cycle_length: top.len(),
                        status: ComponentStatus::VerifiedToBudget,
                    });
                } else {
                    let mut next = lifts_with_class(&map, &cycle, class)?;
                    let lift = next.pop().expect("one lift");
                    let chain_start = chain_start.or(Some(cycle));
                    stack.push(Node { cycle: lift, chain_start });
                }
            }
            Behavior::StronglySplits | Behavior::WeaklySplits => {
                if n == max_level {
                    let target = if is_exact_orbit(f, &cycle) {
                        &mut out.periodic_localizations
                    } else {
                        &mut out.unresolved
                    };
                    target.extend(cycle_balls(&cycle));
                } else {
                    for lift in lifts_with_class(&map, &cycle, class)?.into_iter().rev() {
                        stack.push(Node { cycle: lift, chain_start: None });
                    }
                }
            }
        }
    }

    // Level-1 residues off every cycle flow into some root cycle.
    let on_cycle: HashSet<u64> = roots.iter().flat_map(|c| c.values().iter().copied()).collect();
    for x in 0..2u64 {
        if on_cycle.contains(&x) {
            continue;
        }
        let mut y = map.apply(x, 1);
        while !on_cycle.contains(&y) {
            y = map.apply(y, 1);
        }
        let root = roots.iter().find(|c| c.values().contains(&y)).expect("cycle point");
        let ball = Ball { level: 1, center: x };
        match level_one_basins.get(root) {
            Some(&i) => {
                out.basins[i].region.push(ball);
                out.basins[i].region.sort();
            }
            None => out.unresolved.push(ball),
        }
    }

    out.periodic_localizations.sort();
    out.unresolved.sort();
    out.components.sort();
    out.basins.sort();
    if !out.is_tiling() {
        return Err(Error::Inconsistent(format!(
            "decomposition does not tile Z_2 (measure {})",
            measure(&out.all_balls())
        )));
    }
    Ok(out)
}

fn common_level(balls: &[Ball]) -> Result<u32> {
    let first = balls.first().ok_or_else(|| Error::InvalidBall("empty ball set".into()))?;
    if balls.iter().any(|b| b.level != first.level) {
        return Err(Error::InvalidBall("balls must share one level".into()));
    }
    Ok(first.level)
}

/// Brute-force minimality certificate: for every `n` from the balls' level
/// to `check_level`, `f_n` restricted to the level-`n` residues of `E` must
/// be one cycle through all of them.
pub fn minimality_oracle(f: &IntPolynomial, balls: &[Ball], check_level: u32) -> Result<bool> {
    minimality_oracle_on(&PolyMap::new(f.clone()), balls, check_level)
}

pub fn minimality_oracle_on(map: &PolyMap, balls: &[Ball], check_level: u32) -> Result<bool> {
    let level = common_level(balls)?;
    if level > check_level {
        return Err(Error::InvalidBall(format!("ball level {level} exceeds check level {check_level}")));
    }
    if check_level > DEFAULT_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded { level: check_level, limit: DEFAULT_ENUMERATION_LIMIT });
    }
    if !pairwise_disjoint(balls) {
        return Err(Error::InvalidBall("balls overlap".into()));
    }
    for n in level.max(1)..=check_level {
        let set: HashSet<u64> = balls.iter().flat_map(|b| b.residues_at(n)).collect();
        let start = *set.iter().min().expect("non-empty");
        let mut x = start;
        for step in 1..=set.len() {
            x = map.apply(x, n);
            if !set.contains(&x) {
                return Ok(false);
            }
            if x == start && step != set.len() {
                return Ok(false);
            }
        }
        if x != start {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Brute-force basin certificate at one level: every residue of `region`
/// must end up in a cycle of `f_level` lying entirely inside the residues of
/// `attractor`.
pub fn basin_oracle(f: &IntPolynomial, region: &[Ball], attractor: &[Ball], level: u32) -> Result<bool> {
    basin_oracle_on(&PolyMap::new(f.clone()), region, attractor, level)
}

pub fn basin_oracle_on(map: &PolyMap, region: &[Ball], attractor: &[Ball], level: u32) -> Result<bool> {
    if level == 0 || level > DEFAULT_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded { level, limit: DEFAULT_ENUMERATION_LIMIT });
    }
    if region.iter().chain(attractor).any(|b| b.level > level) {
        return Err(Error::InvalidBall(format!("ball finer than level {level}")));
    }
    if !attractor.iter().all(|a| region.iter().any(|r| r.contains(a))) {
        return Err(Error::InvalidBall("attractor is not inside the region".into()));
    }

    const UNKNOWN: u8 = 0;
    const GOOD: u8 = 1;
    const BAD: u8 = 2;
    const ON_PATH: u8 = 3;
    let size = 1usize << level;
    let mut in_attractor = vec![false; size];
    for a in attractor {
        for x in a.residues_at(level) {
            in_attractor[x as usize] = true;
        }
    }
    let mut state = vec![UNKNOWN; size];
    let mut path = Vec::new();
    for r in region {
        for start in r.residues_at(level) {
            path.clear();
            let mut x = start as usize;
            while state[x] == UNKNOWN {
                state[x] = ON_PATH;
                path.push(x);
                x = map.apply(x as u64, level) as usize;
            }
            let verdict = if state[x] == ON_PATH {
                let pos = path.iter().position(|&p| p == x).expect("on path");
                if path[pos..].iter().all(|&p| in_attractor[p]) {
                    GOOD
                } else {
                    BAD
                }
            } else {
                state[x]
            };
            for &p in &path {
                state[p] = verdict;
            }
            if state[start as usize] == BAD {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
