//! Versioned report documents and their text rendering.
//!
//! JSON layout (schema `"1"`):
//!
//! ```json
//! {"schema_version": "1",
//!  "command": {"name": "verify", "args": {"m": "3", "max_level": "8"}},
//!  "payload": {"kind": "verdict", "data": { ... }}}
//! ```
//!
//! Balls are `{"center": "<decimal>", "level": L}` with an optional short
//! signed `"alias"`; integers that can exceed 64 bits are decimal strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{Lemma31Report, Verdict};
use crate::decomposition::{Ball, ComponentStatus, Decomposition};
use crate::dynamics::CycleClass;
use crate::padic::Valuation;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: CommandEcho,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Decomposition(DecompositionReport),
    Verdict(Verdict),
    Coefficients(CoefficientReport),
    Classification(ClassificationReport),
    Minimality(MinimalityReport),
    Error(ErrorReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub polynomial: String,
    pub decomposition: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub m: u64,
    /// `c_0 .. c_m` as decimal strings.
    pub coefficients: Vec<String>,
    /// Valuations of the odd-degree coefficients when `m` is odd, of all
    /// coefficients otherwise.
    pub valuations: Vec<Valuation>,
    pub lemma: Option<Lemma31Report>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedCycle {
    pub points: Vec<String>,
    pub length: usize,
    pub class: CycleClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub polynomial: String,
    pub level: u32,
    pub cycles: Vec<ClassifiedCycle>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub polynomial: String,
    pub balls: Vec<Ball>,
    pub check_level: u32,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}

impl ReportDocument {
    pub fn new(name: &str, args: BTreeMap<String, String>, payload: Payload) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: CommandEcho { name: name.to_string(), args },
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<ReportDocument> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        render_text(&self.payload)
    }
}

/// `c + 2^L*Z2`, followed by `(= -1 + 2^L*Z2)` when the ball has a short signed alias.
pub fn ball_text(b: &Ball) -> String {
    match b.alias() {
        Some(a) => format!("{b} (= {a} + 2^{}*Z2)", b.level()),
        None => b.to_string(),
    }
}

fn ball_list(balls: &[Ball]) -> String {
    balls.iter().map(ball_text).collect::<Vec<_>>().join(", ")
}

pub fn render_text(payload: &Payload) -> String {
    let mut out = String::new();
    match payload {
        Payload::Decomposition(r) => {
            let d = &r.decomposition;
            let _ = writeln!(out, "decomposition of {} to level {}", r.polynomial, d.max_level);
            let _ = writeln!(out, "periodic localizations ({}):", d.periodic_localizations.len());
            for b in &d.periodic_localizations {
                let _ = writeln!(out, "  {}", ball_text(b));
            }
            let _ = writeln!(out, "minimal components ({}):", d.components.len());
            for c in &d.components {
                let status = match c.status {
                    ComponentStatus::ProvenStrongGrowth => "proven",
                    ComponentStatus::VerifiedToBudget => "verified to budget",
                };
                let _ = writeln!(out, "  [{status}, cycle length {}] {}", c.cycle_length, ball_list(&c.balls));
            }
            let _ = writeln!(out, "basins ({}):", d.basins.len());
            for b in &d.basins {
                let _ = writeln!(
                    out,
                    "  period {}, attractor {{{}}}, region {}",
                    b.period,
                    ball_list(&b.attractor_orbit),
                    ball_list(&b.region)
                );
            }
            let _ = writeln!(out, "unresolved ({}):", d.unresolved.len());
            for b in &d.unresolved {
                let _ = writeln!(out, "  {}", ball_text(b));
            }
        }
        Payload::Verdict(v) => {
            let s = v.s.map(|s| format!(", s = {}", s.s)).unwrap_or_default();
            let _ = writeln!(
                out,
                "T_{} to level {}{s}: {}",
                v.m,
                v.budget,
                if v.pass { "PASS" } else { "FAIL" }
            );
            let _ = writeln!(
                out,
                "matched {}, missing {}, extra {}",
                v.matched.len(),
                v.missing.len(),
                v.extra.len()
            );
            for balls in &v.missing {
                let _ = writeln!(out, "  missing: {}", ball_list(balls));
            }
            for balls in &v.extra {
                let _ = writeln!(out, "  extra: {}", ball_list(balls));
            }
            for f in &v.failures {
                let _ = writeln!(out, "  failure: {f}");
            }
        }
        Payload::Coefficients(r) => {
            let _ = writeln!(out, "T_{} coefficients (c_0 .. c_{}):", r.m, r.m);
            for (i, c) in r.coefficients.iter().enumerate() {
                if c != "0" {
                    let _ = writeln!(out, "  c_{i} = {c}");
                }
            }
            let vals: Vec<String> = r.valuations.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "v2: [{}]", vals.join(", "));
            if let Some(l) = &r.lemma {
                let _ = writeln!(out, "valuation lemma (s = {}): {}", l.s, if l.pass { "PASS" } else { "FAIL" });
            }
        }
        Payload::Classification(r) => {
            let _ = writeln!(out, "cycles of {} at level {}:", r.polynomial, r.level);
            for c in &r.cycles {
                let b = c.class.b_mod2.map_or("-".to_string(), |b| b.to_string());
                let _ = writeln!(
                    out,
                    "  ({}): {} (a mod 4 = {}, b mod 2 = {b})",
                    c.points.join(", "),
                    c.class.behavior,
                    c.class.a_mod4
                );
            }
        }
        Payload::Minimality(r) => {
            let _ = writeln!(
                out,
                "{} on {} up to level {}: {}",
                r.polynomial,
                ball_list(&r.balls),
                r.check_level,
                if r.minimal { "minimal" } else { "not minimal" }
            );
        }
        Payload::Error(e) => {
            let _ = writeln!(out, "error [{}]: {}", e.code, e.message);
        }
    }
    out
}
