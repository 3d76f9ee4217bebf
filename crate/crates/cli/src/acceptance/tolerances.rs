//! Pinned thresholds for the acceptance suite. Every criterion reads its
//! tolerances from here; nothing is tuned at the call sites.

/// Corpus seed shared by all corpus-based criteria.
pub const CORPUS_SEED: u64 = 42;

/// Corpus size shared by all corpus-based criteria.
pub const CORPUS_SIZE: usize = 200;

/// Canonical family depth for the interchange check.
pub const INTERCHANGE_DEPTH: u32 = 5;

/// Canonical family depth for the operator-identity and ratio check.
pub const OPERATOR_DEPTH: u32 = 6;

/// Required ratio of the depth-6 family norm to the sliding norm.
pub const FAMILY_RATIO_FLOOR: f64 = 0.98;

/// Relative slack for comparing the family and sliding routes: the two
/// compute the same real number through different floating-point expressions
/// (complex accumulation against per-component absolute sums), so equality
/// holds only up to a last-bit difference.
pub const ROUTE_ULP_SLACK: f64 = 1e-12;

/// Window-equivalence constant for U = (0,1) against (0,2).
pub const EQUIVALENCE_N: u32 = 3;

/// Upper bound for `n * defect(mu_n, leb01, hat)`: the hat's Lipschitz constant.
pub const EX1_DEFECT_SLOPE: f64 = 1.0;

/// Epsilon for the equi-Bohr cross-check on the perturbed comb.
pub const CHAR_NAP_EPSILON: f64 = 0.05;

/// Family depth for the equi-Bohr cross-check.
pub const CHAR_NAP_DEPTH: u32 = 5;

/// Allowed symmetric difference between the norm-route and equi-Bohr-route
/// period sets, as a fraction of the scan grid.
pub const CHAR_NAP_SLACK: f64 = 0.02;

/// Epsilons for the Stepanov/norm structural identity.
pub const STEPANOV_EPSILONS: [f64; 3] = [0.05, 0.1, 0.2];

/// Covering-radius ceiling at the largest Stepanov epsilon.
pub const STEPANOV_RADIUS_CAP: f64 = 10.0;

/// Truncation level of the dyadic composite.
pub const COMPOSITE_LEVEL: u32 = 10;

/// Epsilon for the composite almost-period and failure-witness checks.
pub const COMPOSITE_EPSILON: f64 = 0.1;

/// Epsilon for the component stability check on the convolved comb.
pub const CPS_EPSILON: f64 = 0.2;

/// Bragg peak intensity band for the unit comb.
pub const COMB_PEAK_BAND: (f64, f64) = (0.95, 1.05);

/// Minimum pure-point mass fraction for the unit-comb spectrum.
pub const COMB_PP_FRACTION: f64 = 0.95;

/// Frequency grid step of the diffraction pipeline.
pub const FREQ_STEP: f64 = 1e-3;

/// Eberlein comb coefficient band at lag zero.
pub const EBERLEIN_BAND: (f64, f64) = (0.98, 1.02);

/// Runtime budgets in seconds, per criterion, from the acceptance contract.
pub const RUNTIME_C1: f64 = 10.0;
pub const RUNTIME_C2: f64 = 60.0;
pub const RUNTIME_C5: f64 = 5.0;
pub const RUNTIME_C6: f64 = 120.0;
pub const RUNTIME_C8: f64 = 180.0;
pub const RUNTIME_C10: f64 = 60.0;
