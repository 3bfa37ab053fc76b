//! Constructors for the named algebras: the Koszul complexes `K(n, m)`,
//! the ideal `I(n, m)`, the family `E(n, m, ℓ)` (with `E(n, m, m)` the
//! associated graded of `K(n, m)` for the `I`-adic filtration), plus the
//! Ravenel numbers that weight their generators.
//!
//! Generators are named `h(i,j)` and `w(i,j)`, ordered h before w and then
//! lexicographically by `(i, j)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dga::{DgaPresentation, Element, GeneratorSpec, MultiDegree, SignedGenerator};
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Ravenel's numbers: `d(n, i) = 0` for `i ≤ 0`, else `max(i, p·d(n, i−n))`.
pub fn ravenel_number(n: u32, i: i64, p: u64) -> u64 {
    if i <= 0 {
        return 0;
    }
    let i_u = i as u64;
    i_u.max(p.saturating_mul(ravenel_number(n, i - n as i64, p)))
}

pub fn h_name(i: u32, j: u32) -> String {
    format!("h({i},{j})")
}

pub fn w_name(i: u32, j: u32) -> String {
    format!("w({i},{j})")
}

/// `2(p^i − 1)p^j mod modulus` without overflow.
fn internal_degree(p: u64, i: u32, j: u32, modulus: u64) -> u64 {
    let m = modulus as u128;
    let pm = p as u128;
    let pow = |e: u32| (0..e).fold(1u128 % m, |acc, _| acc * pm % m);
    let a = 2 * ((pow(i) + m - 1) % m) % m;
    (a * pow(j) % m) as u64
}

fn modulus_for(p: u64, n: u32) -> Result<u64> {
    p.checked_pow(n)
        .and_then(|x| x.checked_sub(1))
        .and_then(|x| x.checked_mul(2))
        .filter(|&x| x > 0)
        .ok_or_else(|| Error::InvalidRequest(format!("internal modulus 2({p}^{n}-1) overflows")))
}

/// The Koszul complex `K(n, m)`: exterior on `h(i,j)`, `1 ≤ i ≤ m`,
/// `0 ≤ j < n`, with `d h(i,j) = Σ_{k=1}^{i-1} h(k,j) h(i−k,j+k)`
/// (second index mod n) and `σ h(i,j) = h(i,j+1)`.
pub fn build_k(n: u32, m: u32, p: u64) -> Result<DgaPresentation> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidRequest("n and m must be positive".into()));
    }
    let field = PrimeField::new(p)?;
    let modulus = modulus_for(p, n)?;
    let count = (n * m) as usize;
    if count > crate::dga::MAX_GENERATORS {
        return Err(Error::InvalidRequest(format!("K({n},{m}) needs {count} generators")));
    }
    let idx = |i: u32, j: u32| ((i - 1) * n + j % n) as usize;
    let mut gens = Vec::with_capacity(count);
    let mut diffs = Vec::with_capacity(count);
    for i in 1..=m {
        for j in 0..n {
            gens.push(GeneratorSpec {
                name: h_name(i, j),
                degree: MultiDegree::new(1, ravenel_number(n, i as i64, p), internal_degree(p, i, j, modulus), 0),
                action_image: Some(SignedGenerator { index: idx(i, j + 1), negate: false }),
            });
            let mut d = Element::zero();
            for k in 1..i {
                let a = Element::generator(idx(k, j));
                let b = Element::generator(idx(i - k, j + k));
                d = d.add(field, &a.mul(field, &b));
            }
            diffs.push(d);
        }
    }
    DgaPresentation::new(field, modulus, n, gens, diffs)
}

/// Generators `h(i,j) − h(i,j+n/2)`, `0 ≤ j < n/2`, of the ideal `I(n, m)`
/// inside [`build_k`]`(n, m, p)`. The remaining generators listed with
/// `j ≥ n/2` are negatives of these and are omitted.
pub fn ideal_i(n: u32, m: u32, p: u64) -> Result<Vec<Element>> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidRequest(format!("the ideal I(n, m) needs even n, got {n}")));
    }
    let field = PrimeField::new(p)?;
    let idx = |i: u32, j: u32| ((i - 1) * n + j % n) as usize;
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 0..n / 2 {
            let a = Element::generator(idx(i, j));
            let b = Element::generator(idx(i, j + n / 2));
            out.push(a.sub(field, &b));
        }
    }
    Ok(out)
}

/// Which Ravenel numbers weight the generators of the E family.
///
/// `E(n, m, ℓ)` models height `n/2` data doubled to height `n`. `Dn` uses
/// `d(n/2, i)`: it matches how cohomology tables at the lower height are
/// usually labelled but is only a filtration for large `i`. `D2n` uses
/// `d(n, i)`, a genuine grading whenever `m ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum RavenelScheme {
    #[serde(rename = "d_n")]
    Dn,
    #[default]
    #[serde(rename = "d_2n")]
    D2n,
}

impl FromStr for RavenelScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d_n" | "dn" => Ok(Self::Dn),
            "d_2n" | "d2n" => Ok(Self::D2n),
            _ => Err(Error::InvalidRequest(format!("unknown ravenel scheme {s:?} (expected d_n or d_2n)"))),
        }
    }
}

impl fmt::Display for RavenelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dn => "d_n",
            Self::D2n => "d_2n",
        })
    }
}

/// `E(n, m, ℓ)`: exterior on `h(i,j)` (`i ≤ m`) and `w(i,j)` (`i ≤ ℓ`),
/// `0 ≤ j < n/2`, internal degrees mod `2(p^{n/2} − 1)`.
///
/// Second indices are read mod `n/2` with `w(i, j + n/2) = −w(i, j)`, and
/// `d w(i,j) = Σ_k (w(k,j) h(i−k,j+k) + h(k,j) w(i−k,j+k))`. The `w`
/// generators carry arithmetic degree 1.
pub fn build_e(n: u32, m: u32, level: u32, p: u64, scheme: RavenelScheme) -> Result<DgaPresentation> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidRequest(format!("E(n, m, l) needs even positive n, got {n}")));
    }
    if m == 0 || level > m {
        return Err(Error::InvalidRequest(format!("E({n},{m},{level}) needs m ≥ 1 and 0 ≤ l ≤ m")));
    }
    let field = PrimeField::new(p)?;
    let half = n / 2;
    let modulus = modulus_for(p, half)?;
    let count = (half * (m + level)) as usize;
    if count > crate::dga::MAX_GENERATORS {
        return Err(Error::InvalidRequest(format!("E({n},{m},{level}) needs {count} generators")));
    }
    let rav_n = match scheme {
        RavenelScheme::Dn => half,
        RavenelScheme::D2n => n,
    };
    let h_idx = |i: u32, j: u32| ((i - 1) * half + j % half) as usize;
    let w_base = (m * half) as usize;
    // Index and sign of w(i, j) for any j ≥ 0.
    let w_idx = |i: u32, j: u32| (w_base + ((i - 1) * half + j % half) as usize, (j / half) % 2 == 1);
    let mut gens = Vec::with_capacity(count);
    let mut diffs = Vec::with_capacity(count);
    for i in 1..=m {
        for j in 0..half {
            gens.push(GeneratorSpec {
                name: h_name(i, j),
                degree: MultiDegree::new(1, ravenel_number(rav_n, i as i64, p), internal_degree(p, i, j, modulus), 0),
                action_image: Some(SignedGenerator { index: h_idx(i, j + 1), negate: false }),
            });
            let mut d = Element::zero();
            for k in 1..i {
                let a = Element::generator(h_idx(k, j));
                let b = Element::generator(h_idx(i - k, j + k));
                d = d.add(field, &a.mul(field, &b));
            }
            diffs.push(d);
        }
    }
    let signed_w = |i: u32, j: u32| {
        let (k, neg) = w_idx(i, j);
        let g = Element::generator(k);
        if neg {
            g.scale(field, field.neg(1))
        } else {
            g
        }
    };
    for i in 1..=level {
        for j in 0..half {
            let (image, negate) = w_idx(i, j + 1);
            gens.push(GeneratorSpec {
                name: w_name(i, j),
                degree: MultiDegree::new(1, ravenel_number(rav_n, i as i64, p), internal_degree(p, i, j, modulus), 1),
                action_image: Some(SignedGenerator { index: image, negate }),
            });
            let mut d = Element::zero();
            for k in 1..i {
                let t1 = signed_w(k, j).mul(field, &Element::generator(h_idx(i - k, j + k)));
                let t2 = Element::generator(h_idx(k, j)).mul(field, &signed_w(i - k, j + k));
                d = d.add(field, &t1).add(field, &t2);
            }
            diffs.push(d);
        }
    }
    DgaPresentation::new(field, modulus, n, gens, diffs)
}

/// `E(n, m, m)`, the associated graded of `K(n, m)` for the `I`-adic
/// filtration, built directly.
pub fn build_e0k(n: u32, m: u32, p: u64, scheme: RavenelScheme) -> Result<DgaPresentation> {
    build_e(n, m, m, p, scheme)
}

/// The associated graded of `K(n, m)` for the `I`-adic filtration,
/// computed generically and renamed to match [`build_e0k`]: residues of
/// `h(i,j)` keep their names, the class of `h(i,j) − h(i,j+n/2)` becomes
/// `w(i,j)`. Internal degrees are reduced mod `2(p^{n/2} − 1)`.
pub fn e0k_via_associated_graded(n: u32, m: u32, p: u64) -> Result<DgaPresentation> {
    let k = build_k(n, m, p)?;
    let ideal = ideal_i(n, m, p)?;
    let modulus = modulus_for(p, n / 2)?;
    let graded = k.associated_graded_mod(&ideal, modulus)?;
    rename_ideal_classes(&graded)
}

fn rename_ideal_classes(p: &DgaPresentation) -> Result<DgaPresentation> {
    let rename = |name: &str| -> String {
        // "[h(i,j) - h(i,j')]" → "w(i,j)"
        if let Some(inner) = name.strip_prefix("[h(") {
            if let Some((ij, _)) = inner.split_once(')') {
                return format!("w({ij})");
            }
        }
        name.to_string()
    };
    let mut json = crate::json::to_json(p);
    for g in &mut json.generators {
        g.name = rename(&g.name);
        if let Some(s) = &mut g.sigma {
            s.name = rename(&s.name);
        }
    }
    json.differential = json
        .differential
        .into_iter()
        .map(|(k, terms)| {
            let terms = terms
                .into_iter()
                .map(|mut t| {
                    t.monomial = t.monomial.iter().map(|x| rename(x)).collect();
                    t
                })
                .collect();
            (rename(&k), terms)
        })
        .collect();
    crate::json::from_json(&json)
}

/// `(⌊np/(p−1)⌋, ⌊2np/(p−1)⌋)`: how many `h` indices are needed before and
/// after doubling the height.
pub fn strategy_parameters(n: u32, p: u64) -> Result<(u32, u32)> {
    if p <= n as u64 + 1 {
        return Err(Error::InvalidRequest(format!("strategy parameters need p > n + 1 (n = {n}, p = {p})")));
    }
    let np = n as u64 * p;
    Ok(((np / (p - 1)) as u32, (2 * np / (p - 1)) as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    K,
    E0K,
    E,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "k" => Ok(Self::K),
            "E0K" | "e0k" => Ok(Self::E0K),
            "E" | "e" => Ok(Self::E),
            _ => Err(Error::InvalidRequest(format!("unknown family {s:?} (expected K, E0K or E)"))),
        }
    }
}

/// A validated request for a catalog algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRequest {
    pub family: Family,
    pub n: u32,
    pub m: u32,
    pub level: u32,
    pub prime: u64,
    pub ravenel_scheme: RavenelScheme,
}

impl CatalogRequest {
    /// Builds the algebra. Primes up to 3 are refused; primes up to `2n+1`
    /// only produce a warning, returned alongside the presentation.
    pub fn build(&self) -> Result<(DgaPresentation, Vec<String>)> {
        if !crate::field::is_prime(self.prime) || self.prime <= 3 {
            return Err(Error::InvalidRequest(format!("prime must be a prime > 3, got {}", self.prime)));
        }
        let mut warnings = Vec::new();
        if self.prime <= 2 * self.n as u64 + 1 {
            warnings.push(format!(
                "p = {} ≤ 2n+1 = {}: the collapse arguments relating these algebras to group cohomology do not apply",
                self.prime,
                2 * self.n + 1
            ));
        }
        let p = match self.family {
            Family::K => build_k(self.n, self.m, self.prime)?,
            Family::E0K => build_e0k(self.n, self.m, self.prime, self.ravenel_scheme)?,
            Family::E => build_e(self.n, self.m, self.level, self.prime, self.ravenel_scheme)?,
        };
        Ok((p, warnings))
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::K => format!("K({},{})", self.n, self.m),
            Family::E0K => format!("E0K({},{})", self.n, self.m),
            Family::E => format!("E({},{},{})", self.n, self.m, self.level),
        }
    }
}
