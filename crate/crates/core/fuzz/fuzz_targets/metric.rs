#![no_main]
//! Metric JSON: matrix and graph forms, then the accessors used by the searches.

use libfuzzer_sys::fuzz_target;
use scwol_core::metric::FiniteMetricSpace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(x) = FiniteMetricSpace::from_json(text) else { return };
    let _ = x.diameter();
    if !x.is_empty() {
        let _ = x.ball(0, 1);
    }
    let back = FiniteMetricSpace::from_json(&x.to_json()).expect("output parses");
    assert_eq!(back.rows(), x.rows());
});
