//! Frame roles and the discharging procedures.

pub mod audit;
pub mod engine;
pub mod roles;

pub use audit::{audit_rule_arithmetic, AuditItem, AuditReport};
pub use engine::{
    alpha, certify_bound, four_frame_gift, run_discharging, run_discharging_with, Certificate, ChargeLedger,
    DischargeReport, Mode, Options, RuleId, Transfer,
};
pub use roles::{
    classify, classify_with, co_benefactors, orientation, position_class, Anomaly, Classification, DischargeError, FrameCounts,
    FrameRole, PositionClass, PovertyReading, RoleKind,
};
