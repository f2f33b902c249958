//! Second moments of ||P~||^2 - 1 over weights (sigma_K^2) and over indices
//! (sigma_M^2), each by a direct route and a transformed route.

pub mod counting;
pub mod oscillatory;
pub mod scaling;
pub mod sigma_k;
pub mod sigma_m;
pub mod sums;

pub use counting::{n_chi, n_chi_brute, n_chi_structured, v_count, CountMethod, DualCounts, NCountValue};
pub use oscillatory::{
    osc_integral_index, osc_integral_pm, parity_weighted_bessel_residual, OscValue,
};
pub use scaling::{scaling_report, ScalingReport, ScalingRow};
pub use sigma_k::{sigma_k, sigma_k_direct, sigma_k_transformed};
pub use sigma_m::{sigma_m, sigma_m_direct, sigma_m_transformed};
pub use sums::{s1_sum, s2_sum, t_sigma_sum};

/// Which moment a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentFamily {
    /// sigma_K^2: average over weights k near K at fixed index m
    Weight,
    /// sigma_M^2: average over indices m near M at fixed weight k
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Transformed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermLabel {
    Weight(u32),
    Index(u64),
    Pair(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTerm {
    pub label: TermLabel,
    pub contribution: f64,
}

/// One route's value of a moment.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSide {
    pub value: f64,
    /// rigorous tails plus measured quadrature error
    pub certified_error: f64,
    /// the exp(-K/2) or exp(-k) remainder of the transform, whose constant is
    /// not known; kept out of certified_error
    pub heuristic_error: f64,
    /// imaginary part left over after the final real projection
    pub imag_residue: f64,
    pub terms: Vec<MomentTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub family: MomentFamily,
    /// K or M
    pub scale: u64,
    /// m (weight family) or k (index family)
    pub fixed: u64,
    pub q: u64,
    pub chi_id: String,
    pub direct: Option<MomentSide>,
    pub transformed: Option<MomentSide>,
}

impl MomentReport {
    pub fn direct_value(&self) -> Option<f64> {
        self.direct.as_ref().map(|s| s.value)
    }

    pub fn transformed_value(&self) -> Option<f64> {
        self.transformed.as_ref().map(|s| s.value)
    }

    pub fn discrepancy(&self) -> Option<f64> {
        Some(self.direct_value()? - self.transformed_value()?)
    }

    pub fn certified_error(&self) -> f64 {
        let d = self.direct.as_ref().map_or(0.0, |s| s.certified_error);
        let t = self.transformed.as_ref().map_or(0.0, |s| s.certified_error);
        d + t
    }

    /// max(1e-5, 10 exp(-K/2)) for the weight family, max(1e-5, 10 exp(-k))
    /// for the index family.
    pub fn cross_tolerance(&self) -> f64 {
        cross_tolerance(self.family, self.scale, self.fixed)
    }

    pub fn agrees(&self) -> Option<bool> {
        Some(self.discrepancy()?.abs() <= self.certified_error() + self.cross_tolerance())
    }
}

pub fn cross_tolerance(family: MomentFamily, scale: u64, fixed: u64) -> f64 {
    let exponent = match family {
        MomentFamily::Weight => -(scale as f64) / 2.0,
        MomentFamily::Index => -(fixed as f64),
    };
    1e-5f64.max(10.0 * exponent.exp())
}

// ordered compensated sum of per-term contributions
fn total(terms: &[MomentTerm]) -> f64 {
    crate::summation::compensated_sum(terms.iter().map(|t| t.contribution))
}
