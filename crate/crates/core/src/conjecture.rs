//! The formal power series `A(t) = Σ_n a_n tⁿ/n!` defined by
//! `A(t) = Σ_{n≥0} (tⁿ/n!) Π_{k=1}^{n} A(kt)`, solved exactly, and the
//! ranks `2ⁿ a_n` it predicts.
//!
//! The `t^N` coefficient of the right side only involves coefficients of
//! `A` below `N` (the `n = 0` summand is the constant 1), so the equation
//! determines `A` one coefficient at a time.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// `Σ c_n tⁿ` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub coeffs: Vec<BigRational>,
}

impl RationalSeries {
    fn one(order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = BigRational::one();
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `A(kt)`: coefficient `m` scaled by `k^m`.
    fn scaled(&self, k: u64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        let mut pow = BigRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &pow;
                pow *= &k;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Product truncated to the shorter order.
    fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| (0..=i).map(|j| &self.coeffs[j] * &other.coeffs[i - j]).sum()).collect();
        Self { coeffs }
    }

    fn truncated(&self, order: usize) -> Self {
        Self { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// The right side `Σ_n (tⁿ/n!) Π_{k=1}^{n} A(kt)` through `t^order`.
pub fn right_side(a: &RationalSeries, order: usize) -> RationalSeries {
    let a = a.truncated(order);
    let mut out = RationalSeries { coeffs: vec![BigRational::zero(); order + 1] };
    let mut product = RationalSeries::one(order);
    for n in 0..=order {
        if n > 0 {
            product = product.mul(&a.scaled(n as u64));
        }
        let inv = BigRational::new(BigInt::one(), factorial(n));
        for m in 0..=order - n {
            out.coeffs[n + m] += &product.coeffs[m] * &inv;
        }
    }
    out
}

/// `A(t)` through `t^order`.
pub fn solve_series(order: usize) -> RationalSeries {
    let mut a = RationalSeries { coeffs: vec![BigRational::one()] };
    for n in 1..=order {
        // Pad with a zero: the t^n coefficient of the right side does not
        // depend on it.
        a.coeffs.push(BigRational::zero());
        let c = right_side(&a, n).coeffs[n].clone();
        a.coeffs[n] = c;
    }
    a
}

/// `a_0, …, a_order`, where `a_n = n!·c_n`. A non-integral value is an
/// arithmetic fault.
pub fn solve_functional_equation(order: usize) -> Result<Vec<BigInt>> {
    solve_series(order)
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let a = c * BigRational::from_integer(factorial(n));
            if a.is_integer() {
                Ok(a.to_integer())
            } else {
                Err(Error::Arithmetic(format!("a_{n} = {a} is not an integer")))
            }
        })
        .collect()
}

/// `2ⁿ a_n`.
pub fn conjectured_rank(n: usize) -> Result<BigInt> {
    let a = solve_functional_equation(n)?;
    Ok(BigInt::from(2u32).pow(n as u32) * &a[n])
}

/// One row `(n, 2ⁿ a_n, a_n)`; integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub rank: String,
    pub a: String,
}

pub fn conjecture_table(order: usize) -> Result<Vec<ConjectureRow>> {
    let a = solve_functional_equation(order)?;
    Ok(a.iter()
        .enumerate()
        .map(|(n, x)| ConjectureRow { n, rank: (BigInt::from(2u32).pow(n as u32) * x).to_string(), a: x.to_string() })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let a: Vec<String> = solve_functional_equation(8).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(a, ["1", "1", "3", "19", "215", "4016", "119092", "5503205", "393154477"]);
        assert_eq!(conjectured_rank(0).unwrap(), BigInt::from(1));
        assert_eq!(conjectured_rank(4).unwrap(), BigInt::from(3440));
        assert_eq!(conjectured_rank(6).unwrap(), BigInt::from(7621888));
    }

    #[test]
    fn resubstitution_is_exact() {
        let a = solve_series(DEFAULT_ORDER);
        assert_eq!(right_side(&a, DEFAULT_ORDER), a);
        let a = solve_functional_equation(DEFAULT_ORDER).unwrap();
        assert!(a.iter().all(|x| *x > BigInt::zero()));
    }

    #[test]
    fn table_against_golden() {
        let golden = crate::golden::parse_rank_table(crate::golden::CONJECTURE_TABLE).unwrap();
        let table = conjecture_table(8).unwrap();
        assert_eq!(golden.len(), table.len());
        for ((n, rank, a), row) in golden.iter().zip(&table) {
            assert_eq!((*n as usize, rank.to_string(), a.to_string()), (row.n, row.rank.clone(), row.a.clone()));
        }
    }
}
