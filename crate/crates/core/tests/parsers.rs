//! Parser robustness: the checked-in fuzz corpus replayed with the fuzz
//! targets' invariants, plus arbitrary input that must never panic.

use std::path::PathBuf;

use proptest::prelude::*;
use stabmod_core::cobar::{TruncatedCoalgebra, Variant};
use stabmod_core::golden::{
    eval_p_expr, expand_chart, parse_chart, parse_module_table, parse_rank_table, parse_series, parse_series_table,
    SeriesOptions,
};
use stabmod_core::json::{parse_presentation, presentation_to_string};

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

fn presentation(data: &str) -> bool {
    match parse_presentation(data) {
        Ok(p) => {
            let text = presentation_to_string(&p);
            let again = parse_presentation(&text).expect("canonical output parses");
            assert_eq!(presentation_to_string(&again), text);
            true
        }
        Err(_) => false,
    }
}

fn series(data: &str) -> bool {
    let mut any = false;
    for (p, t_modulus, x_as_s) in [(7, 1, false), (7, 8, false), (11, 133, true)] {
        if let Ok(s) = parse_series(data, SeriesOptions { p, t_modulus, x_as_s }) {
            assert!(s.terms.keys().all(|&(_, t)| t < t_modulus));
            any = true;
        }
    }
    any
}

fn chart(data: &str) -> bool {
    match parse_chart(data) {
        Ok(c) => expand_chart(&c, 7, 96).is_ok(),
        Err(_) => false,
    }
}

fn tables(data: &str) -> bool {
    parse_module_table(data).is_ok() | parse_rank_table(data).is_ok() | parse_series_table(data).is_ok()
}

fn p_expr(data: &str) -> bool {
    [5, 7, 11].iter().all(|&p| eval_p_expr(data, p).is_ok())
}

fn cochain(data: &str) -> bool {
    let mut any = false;
    for variant in [Variant::Graded, Variant::Ungraded] {
        let coalgebra = TruncatedCoalgebra::new(7, variant, 4).unwrap();
        if let Ok(c) = coalgebra.parse_cochain(data) {
            let text = coalgebra.format_cochain(&c);
            let again = coalgebra.parse_cochain(&text).expect("formatted cochain parses");
            assert_eq!(again.terms, c.terms, "{data:?} printed as {text:?}");
            any = true;
        }
    }
    any
}

#[test]
fn corpus_seeds_are_accepted() {
    type Check = fn(&str) -> bool;
    let targets: [(&str, Check); 6] = [
        ("presentation_json", presentation),
        ("series", series),
        ("chart", chart),
        ("tables", tables),
        ("p_expr", p_expr),
        ("cochain", cochain),
    ];
    for (target, check) in targets {
        for (path, text) in corpus(target) {
            assert!(check(&text), "seed {} is rejected", path.display());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_text_never_panics(data in ".{0,64}") {
        presentation(&data);
        series(&data);
        chart(&data);
        tables(&data);
        p_expr(&data);
        cochain(&data);
    }

    #[test]
    fn grammar_shaped_text_never_panics(data in "[ tsp0-9()^+*/|,\\-]{0,40}") {
        series(&data);
        p_expr(&data);
        cochain(&data);
    }

    #[test]
    fn json_shaped_text_never_panics(data in "[{}\\[\\]\":,a-z0-9 ]{0,80}") {
        presentation(&data);
    }
}
