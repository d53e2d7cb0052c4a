#![no_main]
//! Word syntax over fixed presentations, followed by reduction with a small budget.

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use scwol_core::fixtures;
use scwol_core::words::Pi1Presentation;

fn presentations() -> &'static [Pi1Presentation] {
    static CELL: OnceLock<Vec<Pi1Presentation>> = OnceLock::new();
    CELL.get_or_init(|| {
        ["z2_z3", "s3_twist", "simplex_z2_z4_z8"]
            .iter()
            .map(|name| {
                let project = fixtures::load(name).expect("fixture loads");
                let c = project.complex_of_groups().expect("fixture has groups");
                let base = project.base_vertex(&c).expect("fixture has a base");
                Pi1Presentation::new(c, base).expect("fixture is connected")
            })
            .collect()
    })
}

fuzz_target!(|data: &[u8]| {
    let Some((&which, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let p = &presentations()[which as usize % 3];
    if let Ok(w) = p.parse_loop(text) {
        let r = p.reduce(&w, 500);
        let _ = p.collapse(&r.word);
    }
});
