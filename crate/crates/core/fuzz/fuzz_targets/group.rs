#![no_main]
//! Group shorthands such as `Z2xZ4` or `S3`.

use libfuzzer_sys::fuzz_target;
use scwol_core::group::FiniteGroup;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = FiniteGroup::parse(text) {
        for x in g.elements() {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
    }
});
