//! Exact falling factorials and binomial coefficients.

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}({n}, {k}) is undefined: need 0 <= k <= n")]
pub struct ArithError {
    pub what: &'static str,
    pub n: u64,
    pub k: u64,
}

/// `n! / (n - k)!`, the number of ordered `k`-arrangements of `n` items.
pub fn perm(n: u64, k: u64) -> Result<BigUint, ArithError> {
    if k > n {
        return Err(ArithError { what: "P", n, k });
    }
    Ok(((n - k + 1)..=n).fold(BigUint::one(), |acc, f| acc * f))
}

/// `n choose k`.
pub fn binom(n: u64, k: u64) -> Result<BigUint, ArithError> {
    if k > n {
        return Err(ArithError { what: "C", n, k });
    }
    let k = k.min(n - k);
    // acc * (n - k + i) / i stays integral at every step.
    Ok((1..=k).fold(BigUint::one(), |acc, i| acc * (n - k + i) / i))
}

/// `n!`.
pub fn factorial(n: u64) -> BigUint {
    perm(n, n).expect("k = n is always in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn examples() {
        assert_eq!(perm(5, 4).unwrap(), BigUint::from(120u32));
        assert_eq!(perm(9, 0).unwrap(), BigUint::one());
        assert_eq!(perm(0, 0).unwrap(), BigUint::one());
        let descending: BigUint = (14u32..=23).map(BigUint::from).product();
        assert_eq!(perm(23, 10).unwrap(), descending);
        assert_eq!(perm(23, 10).unwrap(), factorial(23) / factorial(13));

        assert_eq!(binom(5, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(binom(17, 17).unwrap(), BigUint::one());
        let pairs = (0..11).flat_map(|a| (a + 1..11).map(move |b| (a, b))).count();
        assert_eq!(binom(11, 2).unwrap(), BigUint::from(pairs));
    }

    #[test]
    fn domain_errors() {
        assert!(perm(3, 4).is_err());
        assert!(binom(3, 4).is_err());
    }

    #[test]
    fn agrees_with_factorial_ratios_up_to_20() {
        for n in 0..=20u64 {
            for k in 0..=n {
                let p = naive_factorial(n) / naive_factorial(n - k);
                let c = p / naive_factorial(k);
                assert_eq!(perm(n, k).unwrap(), BigUint::from(p));
                assert_eq!(binom(n, k).unwrap(), BigUint::from(c));
            }
        }
    }

    #[test]
    fn recurrences_up_to_200() {
        for n in 1..=200u64 {
            assert_eq!(binom(n, 0).unwrap(), BigUint::one());
            for k in 1..=n {
                let pascal = binom(n - 1, k - 1).unwrap()
                    + if k < n { binom(n - 1, k).unwrap() } else { BigUint::default() };
                assert_eq!(binom(n, k).unwrap(), pascal, "C({n},{k})");
                assert_eq!(perm(n, k).unwrap(), perm(n - 1, k - 1).unwrap() * n);
                assert_eq!(perm(n, k).unwrap(), binom(n, k).unwrap() * factorial(k));
            }
        }
    }
}
