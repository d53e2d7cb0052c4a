#![no_main]
//! Untrusted asdim certificates checked against a fixed path.

use libfuzzer_sys::fuzz_target;
use scwol_core::coarse::asdim::{check_certificate, AsdimCertificate};
use scwol_core::metric::FiniteMetricSpace;

fuzz_target!(|data: &[u8]| {
    let Ok(cert) = serde_json::from_slice::<AsdimCertificate>(data) else { return };
    let x = FiniteMetricSpace::path(12);
    let _ = check_certificate(&x, &cert, Some(1));
});
