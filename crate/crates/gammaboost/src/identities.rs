//! Residual report over the decomposition identities.
//!
//! Everything here is recomputed independently from the per-round `z`,
//! `z_pos`, `z_neg`, `r`, and error fields, so a corrupted record or a
//! drifting engine shows up as a residual rather than being masked by
//! the values the engine itself stored.

use serde::Serialize;

use crate::boost::{compute_alpha, RoundRecord, WeightInit};
use crate::error::{Error, Result};

/// Residual ceiling for a healthy training run.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Maximum absolute residuals over all round prefixes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityReport {
    /// gamma * P_t+ + (1 - gamma) * P_t- versus P_t.
    pub p_decomposition: f64,
    /// The recorded bound versus the product of the recorded z factors.
    pub bound_vs_z_product: f64,
    /// The recorded bound versus the product of sqrt(1 - r^2) factors.
    pub bound_vs_r_product: f64,
    /// The class-conditional error reconstruction versus the recorded
    /// global weighted error.
    pub eps_reconstruction: f64,
    /// Alpha recomputed through the class-conditional route versus the
    /// recorded alpha.
    pub alpha_reconstruction: f64,
}

impl IdentityReport {
    pub fn residuals(&self) -> [(&'static str, f64); 5] {
        [
            ("p_decomposition", self.p_decomposition),
            ("bound_vs_z_product", self.bound_vs_z_product),
            ("bound_vs_r_product", self.bound_vs_r_product),
            ("eps_reconstruction", self.eps_reconstruction),
            ("alpha_reconstruction", self.alpha_reconstruction),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals()
            .iter()
            .map(|(_, v)| *v)
            .fold(0.0, f64::max)
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.max_residual() <= tolerance
    }
}

/// Verify a training run's records against the decomposition identities.
pub fn verify_identities(records: &[RoundRecord], init: &WeightInit) -> Result<IdentityReport> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let gamma = init.gamma();
    let mut p_pos = 1.0f64;
    let mut p_neg = 1.0f64;
    let mut p_global = 1.0f64;
    let mut r_product = 1.0f64;

    let mut report = IdentityReport {
        p_decomposition: 0.0,
        bound_vs_z_product: 0.0,
        bound_vs_r_product: 0.0,
        eps_reconstruction: 0.0,
        alpha_reconstruction: 0.0,
    };

    for rec in records {
        // Before-round products feed the per-round reconstructions.
        let denom = gamma * p_pos + (1.0 - gamma) * p_neg;
        let eps_rec = (gamma * p_pos * rec.eps_pos + (1.0 - gamma) * p_neg * rec.eps_neg) / denom;
        report.eps_reconstruction = report.eps_reconstruction.max((eps_rec - rec.eps).abs());
        let alpha_rec = compute_alpha(eps_rec.clamp(0.0, 1.0))?;
        report.alpha_reconstruction = report
            .alpha_reconstruction
            .max((alpha_rec - rec.alpha).abs());

        p_pos *= rec.z_pos;
        p_neg *= rec.z_neg;
        p_global *= rec.z;
        r_product *= (1.0 - rec.r * rec.r).sqrt();

        let combined = gamma * p_pos + (1.0 - gamma) * p_neg;
        report.p_decomposition = report.p_decomposition.max((combined - p_global).abs());
        report.bound_vs_z_product = report.bound_vs_z_product.max((p_global - rec.bound).abs());
        report.bound_vs_r_product = report.bound_vs_r_product.max((r_product - rec.bound).abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::{train, StopPolicy};
    use crate::dataset::{Dataset, Label, LabeledSample};

    fn interleaved() -> Dataset {
        let xs: Vec<LabeledSample> = (0..12)
            .map(|i| {
                let label = if i < 6 { Label::Positive } else { Label::Negative };
                // Interleave the classes so no single stump is perfect.
                let x = if i < 6 { i as f64 } else { (i - 6) as f64 + 0.5 };
                LabeledSample::new(vec![x, (i as f64 * 7.0) % 3.0], label)
            })
            .collect();
        Dataset::new(xs).unwrap()
    }

    #[test]
    fn healthy_run_has_tiny_residuals() {
        let ds = interleaved();
        let init = WeightInit::uniform(0.7, ds.m(), ds.num_negatives()).unwrap();
        let (_, records) = train(&ds, &init, 20, StopPolicy::FixedRounds).unwrap();
        let report = verify_identities(&records, &init).unwrap();
        assert!(
            report.within(IDENTITY_TOLERANCE),
            "residuals: {:?}",
            report.residuals()
        );
    }

    #[test]
    fn corrupted_z_is_flagged() {
        let ds = interleaved();
        let init = WeightInit::uniform(0.7, ds.m(), ds.num_negatives()).unwrap();
        let (_, mut records) = train(&ds, &init, 10, StopPolicy::FixedRounds).unwrap();
        records[4].z *= 1.0 + 1e-6;
        let report = verify_identities(&records, &init).unwrap();
        assert!(report.bound_vs_z_product > IDENTITY_TOLERANCE);
        assert!(!report.within(IDENTITY_TOLERANCE));
    }

    #[test]
    fn empty_records_rejected() {
        let init = WeightInit::uniform(0.5, 1, 1).unwrap();
        assert!(matches!(
            verify_identities(&[], &init),
            Err(Error::EmptyRecords)
        ));
    }
}
