//! Exact computation with degenerate Newton maps.
//!
//! The crate turns root divisors and Puiseux-parametrized families of
//! Newton maps into certified answers about the boundary of their moduli
//! space: GIT (semi)stability verdicts, normal forms and conjugacy
//! classes, symbolic iterates, truncated maximal measures with conformal
//! barycenters, and Berkovich trees of spheres with their semistable
//! reduction loci.
//!
//! Everything on the algebraic side runs over the Gaussian rationals with
//! no rounding; floating point enters only where it must (preimage trees
//! of measures, the barycenter iteration), always with exact masses and
//! certified tail bounds on the side.
//!
//! # Quick start
//!
//! Classify the boundary map where two of three roots collide:
//!
//! ```
//! use newton_moduli::{classify_newton, NewtonMap, P1Point, RootDivisor, VerdictKind};
//!
//! let divisor = RootDivisor::new(vec![
//!     (P1Point::from_int(0), 2),
//!     (P1Point::Infinity, 1),
//! ])?;
//! let n = NewtonMap::from_divisor(divisor)?;
//! assert_eq!(classify_newton(&n).kind, VerdictKind::StrictlySemistable);
//! assert_eq!(n.pair().to_string(), "[X^2*Y : 2*X*Y^2]");
//! # Ok::<(), newton_moduli::Error>(())
//! ```
//!
//! Compute the semistable-reduction locus of a Puiseux family:
//!
//! ```
//! use newton_moduli::berkovich::{semistable_locus, SemistableLocus};
//! use newton_moduli::parse::parse_series;
//!
//! let roots: Vec<_> = ["0", "1", "t^(-1)", "2*t^(-1)"]
//!     .iter()
//!     .map(|r| parse_series(r, None))
//!     .collect::<Result<_, _>>()?;
//! let report = semistable_locus(&roots)?;
//! match report.locus {
//!     SemistableLocus::UniqueStableVertex(v) => {
//!         assert_eq!(report.tree.vertex(v).label(), "xi(0, -1)");
//!     }
//!     _ => unreachable!("this family has a unique stable vertex"),
//! }
//! # Ok::<(), newton_moduli::Error>(())
//! ```

pub mod berkovich;
pub mod error;
pub mod form;
pub mod iterate;
pub mod measure;
pub mod moduli;
pub mod newton;
mod numeric;
pub mod parse;
mod poly;
pub mod projective;
pub mod puiseux;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use form::{poly_gcd, roots_of_form, FormRoots, HomogeneousForm};
pub use newton::{MarkedNewtonMap, NewtonMap, RootDivisor};
pub use projective::{HomogeneousPair, MoebiusMap, P1Point};
pub use scalar::ExactScalar;
pub use stability::{
    classify_newton, classify_pair, is_indeterminate, ops_limit, strictly_semistable_normal_form,
    OneParamWeight, StabilityVerdict, VerdictKind,
};
