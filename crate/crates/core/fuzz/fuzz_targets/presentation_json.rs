#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::json::{parse_presentation, presentation_to_string};

fuzz_target!(|data: &str| {
    // Anything accepted must serialize canonically and read back unchanged.
    if let Ok(p) = parse_presentation(data) {
        let text = presentation_to_string(&p);
        let again = parse_presentation(&text).expect("canonical output parses");
        assert_eq!(presentation_to_string(&again), text);
        let _ = p.check();
    }
});
