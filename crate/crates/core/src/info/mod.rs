//! Information-theoretic distances to the Gaussian for one-dimensional and
//! product densities.

pub mod density;
pub mod metrics;

pub use density::{silverman_bandwidth, Bandwidth, DensityModel, ProductDensityModel, Support};
pub use metrics::{
    de_bruijn_gap, entropy, fisher_information, inequality_suite, multivariate_trace_bound,
    relative_entropy, standardized_fisher, sup_distance, total_variation, DeBruijn, Divergence,
    InequalityCheck, InequalityReport, TraceBoundReport,
};
