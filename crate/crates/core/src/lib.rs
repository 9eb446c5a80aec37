//! Exact computations around the `R_λ` basis, Hall-Littlewood identities and
//! u-averages of finite abelian p-groups.
//!
//! Everything is exact: integers are arbitrary precision, rational functions
//! in `q` are kept reduced, and infinite products are expanded as truncated
//! series in `z` only where the truncation is sound.

pub mod algebra;
pub mod error;
pub mod group;
pub mod hall_littlewood;
pub mod identities;
pub mod moments;
pub mod partition;
pub mod rbasis;

pub use algebra::{MPoly, Param, Rational, UniRat, ZSeries};
pub use error::{Error, Result};
pub use group::{GroupBounds, PGroup};
pub use hall_littlewood::{hl_p, HLValue};
pub use identities::{run_suite, verify, IdentityCase, IdentityId, Manifest, Strategy, VerificationReport};
pub use moments::{Flavor, MomentQuery};
pub use partition::{parse_partition, Partition};
pub use rbasis::{c_coeff, rlambda_expand, rlambda_poly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
