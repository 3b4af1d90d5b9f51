//! Exact-arithmetic engine for polynomial dynamics on the 2-adic integers.
//!
//! The crate computes minimal decompositions `Z_2 = P ⊔ M ⊔ B` of integer
//! polynomials by lifting cycles of the induced maps on `Z/2^n Z`, and
//! checks them against the explicit decomposition of the Chebyshev
//! polynomials `T_m`.
//!
//! ```
//! use z2dyn::chebyshev::verify_theorem;
//!
//! let verdict = verify_theorem(3, 8).unwrap();
//! assert!(verdict.pass);
//! ```

pub mod chebyshev;
pub mod cli;
pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod padic;
pub mod parse;
pub mod poly;
pub mod report;

pub use chebyshev::{lemma31_check, s_of_m, theorem_prediction, verify_theorem};
pub use decomposition::{basin_oracle, decompose, minimality_oracle, Ball, Decomposition};
pub use dynamics::{classify, cycles_at_level, lifts, Cycle, CycleClass, PolyMap};
pub use error::{Error, Result};
pub use padic::{v2, ExactInt, Residue, Valuation};
pub use parse::parse_poly;
pub use poly::{chebyshev_closed_form, chebyshev_recurrence, IntPolynomial};
