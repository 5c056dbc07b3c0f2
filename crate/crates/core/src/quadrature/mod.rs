//! Quadrature on the disc, the bidisc and the circle.

mod bidisc;
mod disc;
mod gauss;
mod grid;
mod patch;
mod radial;
mod sum;

pub use bidisc::{
    default_a_grid, integrate_bidisc, integrate_mu, integrate_mu_a, mu_a_sums, mu_sums, refined_a_grid, BidiscRule,
    DiagonalPolicy, MoebiusPoint, MuASums, PairNode, PartnerFn, DEFAULT_BIDISC_ANGULAR, DEFAULT_BIDISC_RADIAL,
};
pub use disc::{
    integrate_circle, integrate_disc, integrate_stolz, make_disc_rule, stolz_contains, DiscNode, DiscRule, StolzRegion,
    DEFAULT_ANGULAR, DEFAULT_GRADING, DEFAULT_ORIGIN_GRADING, DEFAULT_RADIAL,
};
pub use gauss::{gauss_legendre, gauss_legendre_unit};
pub use grid::{BidiscGrid, GridConfig};
pub use patch::PatchConfig;
pub use radial::RadialMap;
pub use sum::{compensated_sum, CompensatedSum};
