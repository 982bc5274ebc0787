#![no_main]

use libfuzzer_sys::fuzz_target;
use yamabe_cli::scene::parse_scene;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(scene) = parse_scene(text) {
        // Validation only builds the immersion and the lattice.
        let _ = scene.prepare();
    }
});
