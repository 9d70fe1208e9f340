//! Exact Frobenius and motivic invariants of powers of ordinary CM elliptic
//! curves over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: big-integer polynomials, composed products, truncated series.
//! - [`gf`]: small finite fields `F_{p^e}` for brute-force point counting.
//! - [`curves`]: elliptic and abstract curves, point counts, zeta numerators.
//! - [`quadfield`]: imaginary quadratic fields and Weil numbers.
//! - [`motive`]: symbolic Chow–Künneth summands, characteristic polynomials,
//!   zeta assembly and decomposition matching.
//! - [`ranks`]: Tate-class dimensions, Picard numbers and L-function ranks of
//!   constant families over function fields.

pub mod algebra;
pub mod curves;
pub mod gf;
pub mod motive;
pub mod quadfield;
pub mod ranks;
