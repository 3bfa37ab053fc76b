#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::golden::{parse_module_table, parse_rank_table, parse_series_table};

fuzz_target!(|data: &str| {
    if let Ok((_, counts)) = parse_module_table(data) {
        let _ = counts.dimension();
    }
    let _ = parse_rank_table(data);
    let _ = parse_series_table(data);
});
