#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::golden::{parse_series, SeriesOptions};

fuzz_target!(|data: &str| {
    for (p, t_modulus, x_as_s) in [(7, 1, false), (7, 8, false), (11, 133, true)] {
        if let Ok(s) = parse_series(data, SeriesOptions { p, t_modulus, x_as_s }) {
            assert!(s.terms.keys().all(|&(_, t)| t < t_modulus));
            assert!(s.terms.values().all(|&c| c != 0));
        }
    }
});
