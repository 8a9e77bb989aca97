//! Exact computations around Noether-Lefschetz loci on moduli of
//! quasi-polarized K3 surfaces.
//!
//! * [`lattice`], [`discriminant`], [`snf`]: even lattices, Smith forms and
//!   discriminant forms.
//! * [`orbit`]: Eichler-criterion orbit classification and component counts
//!   of the nodal, binodal and cuspidal loci.
//! * [`divisor`]: NL divisor keys, the triangular relation and its
//!   coefficients.
//! * [`chern`]: enumerative cusp/binode counts for nets of curves and the
//!   unigonal family.
//! * [`siegel`]: truncated genus-2 Fourier expansions, the Igusa cusp form
//!   product, Eisenstein products, and weight-10 fits.
//! * [`verify`]: the full reproduction checklist used by `k3nl verify`.

pub mod chern;
pub mod cli;
pub mod discriminant;
pub mod divisor;
pub mod lattice;
pub mod matrix;
pub mod orbit;
pub mod par;
pub mod siegel;
pub mod snf;
pub mod verify;

pub use par::Strategy;
