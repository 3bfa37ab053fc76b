//! Checks shared by the property suites and the acceptance target. Each
//! returns `Err` with a description of the first violation.

#![allow(dead_code)]

use std::collections::BTreeMap;

use stabmod_core::catalog::{build_e, build_k, RavenelScheme};
use stabmod_core::cohomology::{cohomology_with, CohomologyOptions};
use stabmod_core::dga::{DgaPresentation, Element, Mask};
use stabmod_core::field::PrimeField;
use stabmod_core::json;
use stabmod_core::linalg::{self, SparseMatrix};

pub type Check = Result<(), String>;

/// Every catalog algebra at `p`: `K(n, m)` for `m ≤ n ≤ 4` and all
/// `E(4, m, level)` under both Ravenel schemes.
pub fn catalog(p: u64) -> Vec<(String, DgaPresentation)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for m in 1..=n {
            out.push((format!("K({n},{m})"), build_k(n, m, p).unwrap()));
        }
    }
    for m in 1..=4 {
        for level in 0..=m {
            for scheme in [RavenelScheme::Dn, RavenelScheme::D2n] {
                out.push((format!("E(4,{m},{level}) {scheme:?}"), build_e(4, m, level, p, scheme).unwrap()));
            }
        }
    }
    out
}

/// Catalog algebras with at most `max_gens` generators.
pub fn small_catalog(p: u64, max_gens: usize) -> Vec<(String, DgaPresentation)> {
    catalog(p).into_iter().filter(|(_, a)| a.num_generators() <= max_gens).collect()
}

/// `d(d(x)) = 0` for the monomial with support `mask`.
pub fn d_squared_vanishes(a: &DgaPresentation, mask: Mask) -> Check {
    let m = mask & a.full_mask();
    let x = Element::monomial(m, 1);
    let dd = a.differential(&a.differential(&x));
    if dd.is_zero() {
        Ok(())
    } else {
        Err(format!("d^2 of {} is {}", a.format_element(&x), a.format_element(&dd)))
    }
}

/// `d(σx) = σ(dx)` for the monomial with support `mask`.
pub fn sigma_commutes_with_d(a: &DgaPresentation, mask: Mask) -> Check {
    let m = mask & a.full_mask();
    let x = Element::monomial(m, 1);
    let lhs = a.differential(&a.apply_action(&x));
    let rhs = a.apply_action(&a.differential(&x));
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!(
            "d(σ{0}) = {1} but σ(d{0}) = {2}",
            a.format_element(&x),
            a.format_element(&lhs),
            a.format_element(&rhs)
        ))
    }
}

/// Euler characteristics of cochains and cohomology agree per degree, and
/// the one-variable series is palindromic.
pub fn euler_and_palindrome(a: &DgaPresentation, opts: &CohomologyOptions) -> Check {
    let r = cohomology_with(a, opts).map_err(|e| e.to_string())?;
    if !r.euler_characteristics_match() {
        return Err("Euler characteristics differ".into());
    }
    let s = r.one_var();
    let mut rev = s.clone();
    rev.reverse();
    if s != rev {
        return Err(format!("series {s:?} is not palindromic"));
    }
    Ok(())
}

/// Dimensions per degree do not depend on the order of the generators.
pub fn permutation_invariant(a: &DgaPresentation, rotate: usize) -> Check {
    let mut raw = json::to_json(a);
    let k = rotate % raw.generators.len().max(1);
    raw.generators.rotate_left(k);
    raw.generators.reverse();
    let b = json::from_json(&raw).map_err(|e| e.to_string())?;
    let opts = CohomologyOptions::default();
    let da = cohomology_with(a, &opts).map_err(|e| e.to_string())?.dims();
    let db = cohomology_with(&b, &opts).map_err(|e| e.to_string())?.dims();
    if da == db {
        Ok(())
    } else {
        Err("dimensions changed under a generator permutation".into())
    }
}

/// Cohomology dimensions do not depend on the dense/sparse threshold.
pub fn threshold_invariant(a: &DgaPresentation) -> Check {
    let dims =
        |t| cohomology_with(a, &CohomologyOptions { dense_threshold: t }).map(|r| r.dims()).map_err(|e| e.to_string());
    if dims(0)? == dims(usize::MAX)? {
        Ok(())
    } else {
        Err("dense and sparse elimination disagree".into())
    }
}

fn mat_vec(field: PrimeField, rows: &[Vec<i64>], v: &[u32]) -> Vec<u32> {
    rows.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &x)| field.add(acc, field.mul(field.from_i64(a), x))))
        .collect()
}

/// rank + nullity = columns, kernel vectors are killed and independent,
/// and the rank agrees with the transpose's and across thresholds.
pub fn rank_nullity(p: u64, rows: &[Vec<i64>]) -> Check {
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let m = SparseMatrix::from_dense(field, rows).map_err(|e| e.to_string())?;
    let cols = m.ncols();
    let rank = linalg::rank(&m);
    let kernel = linalg::kernel_basis(&m);
    if rank + kernel.len() != cols {
        return Err(format!("rank {rank} + nullity {} != {cols}", kernel.len()));
    }
    for v in &kernel {
        if mat_vec(field, rows, v).iter().any(|&x| x != 0) {
            return Err("kernel vector not in kernel".into());
        }
    }
    let as_rows: Vec<Vec<i64>> = kernel.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
    if !as_rows.is_empty() {
        let k = SparseMatrix::from_dense(field, &as_rows).map_err(|e| e.to_string())?;
        if linalg::rank(&k) != kernel.len() {
            return Err("kernel basis is dependent".into());
        }
    }
    if linalg::rank(&m.transpose()) != rank {
        return Err("row rank differs from column rank".into());
    }
    if linalg::rank_with_threshold(&m, 0) != rank || linalg::rank_with_threshold(&m, usize::MAX) != rank {
        return Err("rank depends on the elimination threshold".into());
    }
    Ok(())
}

/// Byte-identical CLI output for several `--jobs` values.
pub fn jobs_deterministic(args: &[&str]) -> Check {
    let run = |jobs: &str| {
        std::process::Command::new(env!("CARGO_BIN_EXE_stabmod"))
            .args(["--jobs", jobs])
            .args(args)
            .env_remove("STABMOD_JOBS")
            .output()
            .map_err(|e| e.to_string())
    };
    let reference = run("1")?;
    for jobs in ["2", "4", "8"] {
        let out = run(jobs)?;
        if out.stdout != reference.stdout || out.status.code() != reference.status.code() {
            return Err(format!("output of {args:?} differs between --jobs 1 and --jobs {jobs}"));
        }
    }
    Ok(())
}

/// Multiset `(s, t mod modulus) → count` of the product of the given
/// factors, each a list of `(s, t)` monomials with coefficient 1.
pub fn expand_product(factors: &[Vec<(u32, u64)>], modulus: u64) -> BTreeMap<(u32, u64), i64> {
    let mut acc: BTreeMap<(u32, u64), i64> = BTreeMap::from([((0, 0), 1)]);
    for f in factors {
        let mut next = BTreeMap::new();
        for (&(s, t), &c) in &acc {
            for &(s2, t2) in f {
                *next.entry((s + s2, (t + t2) % modulus)).or_insert(0) += c;
            }
        }
        acc = next;
    }
    acc
}
