#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = cgci::io::parse_config(text) {
            // Resolving a parsed definition must return structured errors,
            // never panic or allocate unbounded memory.
            let _ = cfg.build_system();
        }
    }
});
