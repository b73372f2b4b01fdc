//! HOMFLYPT polynomials of braid closures, cables and fusions, and μ from them.

mod laurent;
mod pd;
mod skein;

pub use laurent::{log_deriv, LaurentPoly1, LaurentPoly2};
pub use pd::{
    braid_closure, cable_braid, fused_closure, permutation_braid, restrict_braid, ArcIndex,
    Crossing, PdDiagram, SIGMA_SIGN,
};
pub use skein::{canonical_key, homfly, Heuristic, SkeinEngine, DEFAULT_CACHE_LIMIT};
mod mu;
pub use mu::{
    cable, fuse_closure, longitude_degree, mu_via_homflypt, mu_via_homflypt_with, p0, CablePattern, FusionTerm,
    HomflyMu,
};
