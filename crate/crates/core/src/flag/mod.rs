//! Plain flag algebra on 4-vertex flags over the two 2-vertex types.

pub mod basis;
pub mod certificate;
pub mod psd;
pub mod sdpa;

pub use basis::{build_basis, Flag, FlagBasis, FlagType};
pub use certificate::{verify_certificate, CertificateBlock, SdpCertificate, Verdict};
pub use psd::is_psd;
pub use sdpa::{build_sdpa, export_sdp, SdpaProblem};
