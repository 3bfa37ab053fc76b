#![no_main]

use libfuzzer_sys::fuzz_target;
use stabmod_core::cobar::{TruncatedCoalgebra, Variant};

fuzz_target!(|data: &str| {
    for variant in [Variant::Graded, Variant::Ungraded] {
        let coalgebra = TruncatedCoalgebra::new(7, variant, 4).expect("valid coalgebra");
        // Accepted cochains print in a form that parses back to themselves.
        if let Ok(c) = coalgebra.parse_cochain(data) {
            let text = coalgebra.format_cochain(&c);
            let again = coalgebra.parse_cochain(&text).expect("formatted cochain parses");
            assert_eq!(again.terms, c.terms);
            let _ = coalgebra.cobar_d(&c);
        }
    }
});
