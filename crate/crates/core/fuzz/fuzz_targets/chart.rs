#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::golden::{expand_chart, parse_chart};

fuzz_target!(|data: &str| {
    if let Ok(chart) = parse_chart(data) {
        if let Ok(expanded) = expand_chart(&chart, 7, 96) {
            let _ = expanded.degree_counts();
            let _ = expanded.traces(1);
        }
    }
});
