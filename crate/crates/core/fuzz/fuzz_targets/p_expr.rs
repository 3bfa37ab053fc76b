#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::golden::eval_p_expr;

fuzz_target!(|data: &str| {
    for p in [5, 7, 11] {
        let _ = eval_p_expr(data, p);
    }
});
