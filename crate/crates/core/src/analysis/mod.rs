//! Workflows that combine the compatibility solver with the invariant
//! classification.

mod audit;
mod sw;
mod ttw;

pub use audit::{invariance_audit, AuditReport, AUDIT_THRESHOLDS};
pub use sw::{characterize_sw, degeneracy_study, offset_case, DegeneracyRow, SwReport, SwStatus};
pub use ttw::{
    cartesian_angle_check, default_scan_set, is_special_k, ttw_scan, TtwScanRow, Verdict,
    REDUCED_K, SPECIAL_K,
};
