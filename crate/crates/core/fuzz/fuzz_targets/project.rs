#![no_main]
//! Project files: TOML parsing, validation and, for valid projects, a small development.

use libfuzzer_sys::fuzz_target;
use scwol_core::development::develop_ball;
use scwol_core::project::Project;
use scwol_core::words::Pi1Presentation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(project) = Project::load(text) else { return };
    if !project.validate().is_valid() {
        return;
    }
    let _ = project.induced();
    let Ok(c) = project.complex_of_groups() else { return };
    let Ok(base) = project.base_vertex(&c) else { return };
    let Ok(p) = Pi1Presentation::new(c, base) else { return };
    let _ = develop_ball(&p, 1, 200);
});
