//! Exact-arithmetic toolkit for the Higman-Thompson groups `F_n <= T_n <= V_n`.
//!
//! The crate has five layers, each usable on its own:
//!
//! * [`numerics`]: arbitrary-precision rationals ([`NRational`]) and points on
//!   the circle `R/Z` ([`CirclePoint`]). No floating point anywhere.
//! * [`cantor`]: elements of `V_n` as prefix-replacement bijections of the
//!   n-ary Cantor set, with canonical forms, composition, and membership
//!   classification into `F_n`, `T_n \ F_n`, `V_n \ T_n`.
//! * [`circle`]: the circle model of `T_n` as piecewise-linear homeomorphisms
//!   with n-adic breakpoints and power-of-n slopes, exact fixed-point solving,
//!   and arc combinatorics.
//! * [`pingpong`]: a two-generator system `a, b` in `T_n` together with four
//!   marked arcs, and an exact certificate checker for the contracting
//!   ping-pong hypotheses.
//! * [`freecert`]: reduced-word enumeration over `a, b` and exhaustive
//!   certificates: no short word is the identity, every cyclically reduced
//!   word has exactly one attracting and one repelling fixed point, and
//!   bounded stabilizer/centralizer probes.

pub mod cantor;
pub mod circle;
pub mod freecert;
pub mod numerics;
pub mod pingpong;

pub use cantor::{make_element, CantorPoint, MembershipClass, Order, Prefix, VElement};
pub use circle::{
    from_circle_map, to_circle_map, Arc, ContractionCertificate, FixedInterval, FixedPointKind,
    FixedPointReport, PLCircleMap,
};
pub use freecert::{
    attracting_census, centralizer_probe, discontinuity_stabilizer_check, enumerate_reduced,
    evaluate_word, free_certificate, free_certificate_unchecked, stabilizer_probe,
    SampleStructure, Word,
};
pub use numerics::{CirclePoint, NRational};
pub use pingpong::{build_system, verify_pingpong, Letter, PingPongCertificate, PingPongSystem};
