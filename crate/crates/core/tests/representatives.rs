//! Explicit cocycle representatives for H(E(4,4,0)) at p = 7: the twenty
//! classes of the exterior-free part times {1, ζ2, ζ4, ζ2ζ4} are cocycles
//! forming a basis, and products with h10, h11 satisfy the expected
//! relations in cohomology. Throughout, `η_i = h(i,0) − h(i,1)`, so that
//! `dη2 = 2 h10 h11` and `dη4 = 2 e40`.

use stabmod_core::catalog::{build_e, RavenelScheme};
use stabmod_core::cohomology::{cohomology, CohomologyResult};
use stabmod_core::dga::{DgaPresentation, Element};
use stabmod_core::field::PrimeField;
use stabmod_core::linalg::SparseMatrix;

struct Words {
    a: DgaPresentation,
    f: PrimeField,
}

impl Words {
    fn gen(&self, name: &str) -> Element {
        Element::generator(self.a.generator_index(name).unwrap_or_else(|| panic!("no generator {name}")))
    }

    /// `hIJ`, `etaI = h(I,0) − h(I,1)`, `zetaI = h(I,0) + h(I,1)` and
    /// `e40 = h10 h31 − h11 h30`.
    fn letter(&self, w: &str) -> Element {
        let f = self.f;
        if let Some(i) = w.strip_prefix("eta") {
            self.gen(&format!("h({i},0)")).sub(f, &self.gen(&format!("h({i},1)")))
        } else if let Some(i) = w.strip_prefix("zeta") {
            self.gen(&format!("h({i},0)")).add(f, &self.gen(&format!("h({i},1)")))
        } else if w == "e40" {
            self.word("h10 h31").sub(f, &self.word("h11 h30"))
        } else if let Some(ij) = w.strip_prefix('h') {
            let (i, j) = ij.split_at(1);
            self.gen(&format!("h({i},{j})"))
        } else {
            panic!("unknown letter {w}")
        }
    }

    fn word(&self, w: &str) -> Element {
        w.split_whitespace().fold(Element::one(), |acc, l| self.a.multiply(&acc, &self.letter(l)))
    }

    /// `Σ c·word` with rational coefficients `num/den`.
    fn sum(&self, terms: &[(i64, i64, &str)]) -> Element {
        terms.iter().fold(Element::zero(), |acc, &(num, den, w)| {
            let c = self.f.ratio(num, den).unwrap();
            acc.add(self.f, &self.word(w).scale(self.f, c))
        })
    }
}

const CLASSES: [&[(i64, i64, &str)]; 20] = [
    &[(1, 1, "")],
    &[(1, 1, "h10")],
    &[(1, 1, "h11")],
    &[(1, 1, "h10 h30")],
    &[(1, 1, "h11 h31")],
    &[(1, 1, "h10 eta4"), (-1, 1, "eta2 h30")],
    &[(1, 1, "h11 eta4"), (-1, 1, "eta2 h31")],
    &[(1, 1, "eta2 e40")],
    &[(1, 1, "h10 eta2 h30")],
    &[(1, 1, "h11 eta2 h31")],
    &[(1, 1, "h10 h30 eta4")],
    &[(1, 1, "h11 h31 eta4")],
    &[(1, 1, "eta4 e40"), (2, 1, "eta2 h30 h31")],
    &[(1, 1, "h10 eta2 h30 h31")],
    &[(1, 1, "h11 eta2 h30 h31")],
    &[(1, 1, "h10 eta2 h30 eta4")],
    &[(1, 1, "h11 eta2 h31 eta4")],
    &[(1, 1, "h10 eta2 h30 h31 eta4")],
    &[(1, 1, "h11 eta2 h30 h31 eta4")],
    &[(1, 1, "h10 h11 eta2 h30 h31 eta4")],
];

fn setup() -> (Words, CohomologyResult) {
    let a = build_e(4, 4, 0, 7, RavenelScheme::D2n).unwrap();
    let r = cohomology(&a).unwrap();
    let f = a.field();
    (Words { a, f }, r)
}

fn coordinates(r: &CohomologyResult, x: &Element) -> Vec<i64> {
    let mut v = vec![0; r.total_rank()];
    for (i, c) in r.decompose(x).unwrap() {
        v[i] = c as i64;
    }
    v
}

#[test]
fn displayed_basis_is_a_basis() {
    let (w, r) = setup();
    let mut rows = Vec::new();
    for class in CLASSES {
        let x = w.sum(class);
        for z in ["", "zeta2", "zeta4", "zeta2 zeta4"] {
            let y = w.a.multiply(&x, &w.word(z));
            assert!(w.a.differential(&y).is_zero(), "{class:?}·{z} is not a cocycle");
            rows.push(coordinates(&r, &y));
        }
    }
    assert_eq!(rows.len(), 80);
    let m = SparseMatrix::from_dense(w.f, &rows).unwrap();
    assert_eq!(stabmod_core::linalg::rank(&m), 80);
}

#[test]
fn uncorrected_classes_are_not_cocycles() {
    let (w, _) = setup();
    for word in ["h10 eta4", "h11 eta4", "eta4 e40"] {
        assert!(!w.a.differential(&w.word(word)).is_zero(), "{word}");
    }
}

/// The scalar `k` with `a = k·b` for nonzero coordinate vectors.
fn proportion(a: &[i64], b: &[i64]) -> Option<i64> {
    let i = b.iter().position(|&c| c != 0)?;
    let k = (1..7).find(|&k| (b[i] * k) % 7 == a[i])?;
    a.iter().zip(b).all(|(&x, &y)| x == (y * k) % 7).then_some(k)
}

#[test]
fn products_with_h10_and_h11() {
    let (w, r) = setup();
    let class = |terms: &[(i64, i64, &str)]| coordinates(&r, &w.sum(terms));
    let times = |terms: &[(i64, i64, &str)], h: &str| coordinates(&r, &w.a.multiply(&w.sum(terms), &w.word(h)));
    let cases: [(usize, &str, &str); 8] = [
        (5, "h10", "h10 eta2 h30"),
        (6, "h11", "h11 eta2 h31"),
        (5, "h11", "eta2 e40"),
        (6, "h10", "eta2 e40"),
        (10, "h11", "h10 eta2 h30 h31"),
        (11, "h10", "h11 eta2 h30 h31"),
        (12, "h10", "h10 eta2 h30 h31"),
        (12, "h11", "h11 eta2 h30 h31"),
    ];
    let got: Vec<Option<i64>> =
        cases.iter().map(|&(i, h, target)| proportion(&times(CLASSES[i], h), &class(&[(1, 1, target)]))).collect();
    // Mod 7: −1, −1, 2, −2, −1, 1, −3, −3. Under η_i = h(i,0) − h(i,1)
    // these are the displayed relations with η2e40 rescaled by 1/2 and the
    // corrected η4e40 class by 1/2.
    assert_eq!(got, [6, 6, 2, 5, 6, 1, 4, 4].map(Some));
}

#[test]
fn correction_coefficient_is_unique() {
    let (w, _) = setup();
    let c: Vec<i64> =
        (0..7).filter(|&c| w.a.differential(&w.sum(&[(1, 1, "eta4 e40"), (c, 1, "eta2 h30 h31")])).is_zero()).collect();
    assert_eq!(c, [2]);
}
