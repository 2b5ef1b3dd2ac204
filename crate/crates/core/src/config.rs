/// Knobs shared by the sampling- and degree-bounded procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Number of random points of `Y` to probe.
    pub samples: usize,
    /// Largest degree used in Hilbert-function and emptiness certificates.
    pub degree_bound: u32,
    pub kmin: i64,
    pub kmax: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            samples: 12,
            degree_bound: crate::variety::DEFAULT_DEGREE_BOUND,
            kmin: -3,
            kmax: 3,
        }
    }
}
