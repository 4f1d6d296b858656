//! Numerical tolerances shared by the floating-point backend.
//!
//! The comparison tolerance `eps` and the root-identification radius `delta`
//! are read by [`FloatComplex`](crate::FloatComplex) equality and by the
//! float gcd. They are process-wide configuration: set them once at start-up
//! with [`Tolerances::install`] before any computation runs.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

pub const DEFAULT_EPS: f64 = 1e-9;
pub const DEFAULT_DELTA: f64 = 1e-6;
pub const DEFAULT_POLE: f64 = 1e-8;
pub const DEFAULT_PSD: f64 = 1e-8;
pub const DEFAULT_RANK: f64 = 1e-10;

static EPS_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9
static DELTA_BITS: AtomicU64 = AtomicU64::new(0x3EB0_C6F7_A0B5_ED8D); // 1e-6
static POLE_BITS: AtomicU64 = AtomicU64::new(0x3E45_798E_E230_8C3A); // 1e-8
static PSD_BITS: AtomicU64 = AtomicU64::new(0x3E45_798E_E230_8C3A); // 1e-8
static RANK_BITS: AtomicU64 = AtomicU64::new(0x3DDB_7CDF_D9D7_BDBB); // 1e-10

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative comparison tolerance for floating scalars.
    pub eps: f64,
    /// Radius within which two roots are identified.
    pub delta: f64,
    /// Largest imaginary part accepted for a "real" pole.
    pub pole: f64,
    /// Most negative eigenvalue accepted for a "positive semidefinite" residue.
    pub psd: f64,
    /// Relative threshold below which singular values count as zero.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps: DEFAULT_EPS,
            delta: DEFAULT_DELTA,
            pole: DEFAULT_POLE,
            psd: DEFAULT_PSD,
            rank: DEFAULT_RANK,
        }
    }
}

impl Tolerances {
    /// The tolerances currently installed.
    pub fn current() -> Self {
        Tolerances {
            eps: float_eps(),
            delta: float_delta(),
            pole: pole_tol(),
            psd: psd_tol(),
            rank: rank_tol(),
        }
    }

    /// Installs these tolerances process-wide.
    pub fn install(&self) {
        assert!(self.validate(), "tolerances must be positive");
        EPS_BITS.store(self.eps.to_bits(), Ordering::Relaxed);
        DELTA_BITS.store(self.delta.to_bits(), Ordering::Relaxed);
        POLE_BITS.store(self.pole.to_bits(), Ordering::Relaxed);
        PSD_BITS.store(self.psd.to_bits(), Ordering::Relaxed);
        RANK_BITS.store(self.rank.to_bits(), Ordering::Relaxed);
    }

    pub fn validate(&self) -> bool {
        [self.eps, self.delta, self.pole, self.psd, self.rank]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}

pub fn float_eps() -> f64 {
    f64::from_bits(EPS_BITS.load(Ordering::Relaxed))
}

pub fn float_delta() -> f64 {
    f64::from_bits(DELTA_BITS.load(Ordering::Relaxed))
}

pub fn pole_tol() -> f64 {
    f64::from_bits(POLE_BITS.load(Ordering::Relaxed))
}

pub fn psd_tol() -> f64 {
    f64::from_bits(PSD_BITS.load(Ordering::Relaxed))
}

pub fn rank_tol() -> f64 {
    f64::from_bits(RANK_BITS.load(Ordering::Relaxed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_match_constants() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_EPS);
        assert_eq!(f64::from_bits(0x3EB0_C6F7_A0B5_ED8D), DEFAULT_DELTA);
        assert_eq!(f64::from_bits(0x3E45_798E_E230_8C3A), DEFAULT_POLE);
        assert_eq!(f64::from_bits(0x3DDB_7CDF_D9D7_BDBB), DEFAULT_RANK);
    }
}
