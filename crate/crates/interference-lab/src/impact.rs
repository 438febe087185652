use serde::{Deserialize, Serialize};

/// How an interference family loads the DAFT bins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImpactClass {
    /// Every bin sees the same statistics.
    Stationary,
    /// Energy collapses onto one bin (sweep with slope matched to the chirp).
    NonStationary,
}
