//! 3-designs from APN and oval power functions over GF(2^n).
//!
//! The crate builds base blocks from power functions, develops them into
//! orbit designs under the affine group `x -> ax + b`, verifies design
//! properties directly and through spectral criteria, and studies the binary
//! codes spanned by the blocks.
//!
//! ```
//! use apndesigns::{affine, blocks, designs, FieldCtx};
//!
//! let ctx = FieldCtx::new(5).unwrap();
//! let base = blocks::kasami_block(&ctx, 1).unwrap();
//! let design = affine::orbit(&base);
//! assert_eq!(design.stab_order(), 1);
//! let params = designs::verify_t_design(&design, 3).unwrap().params().unwrap();
//! assert_eq!((params.v, params.k, params.lambda), (32, 16, 112));
//! ```

pub mod affine;
pub mod bits;
pub mod blocks;
pub mod boolfn;
pub mod codes;
pub mod designs;
pub mod equations;
pub mod error;
pub mod gf2n;

/// Version tag written into every JSON document this crate produces.
pub const SCHEMA_VERSION: &str = "1";

pub use affine::{AffineMap, OrbitDesign};
pub use bits::BitSet;
pub use blocks::{Block, CatalogEntry, Construction, Family, LabeledBlock};
pub use boolfn::{BooleanFn, WalshSpectrum};
pub use codes::{BinaryCode, MinDistance, WeightEnumerator};
pub use designs::iso::{Classification, IsoOutcome};
pub use designs::{CriterionReport, DesignParams, TDesignOutcome};
pub use equations::conjecture::{ConjectureId, ConjectureResult, Verdict};
pub use equations::CubicCoeffs;
pub use error::{Error, Result};
pub use gf2n::{Exponent, FieldCtx, FieldElem};
