//! Build a versioned JSON report and read it back.
//!
//! cargo run --example json_report

use std::collections::BTreeMap;

use z2dyn::report::{Payload, ReportDocument};
use z2dyn::verify_theorem;

fn main() -> z2dyn::Result<()> {
    let verdict = verify_theorem(7, 8)?;
    let args = BTreeMap::from([("m".to_string(), "7".to_string()), ("max_level".to_string(), "8".to_string())]);
    let doc = ReportDocument::new("verify", args, Payload::Verdict(verdict));
    let json = doc.to_json();
    println!("{json}");
    let back = ReportDocument::from_json(&json).expect("report parses");
    assert_eq!(back, doc);
    eprint!("{}", back.to_text());
    Ok(())
}
