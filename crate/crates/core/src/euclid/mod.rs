//! The Euclid instance: `f(n, m) = 1` iff every prime factor of `n! + 1` is
//! below `m`. Since no `d` in `2..=n` divides `n! + 1`, the diagonal
//! `f(n, n)` is always 0, which yields a prime beyond any bound.

mod factor;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

pub use factor::{factorize, primality, FactorConfig, Factorization, PrimeFactor, Primality, SIEVE_LIMIT};

use factor::{strip_primes_below, to_u64};

/// Largest `n` for which `n! + 1` is built.
pub const MAX_N: u32 = 64;
/// Largest bound accepted by [`prime_beyond`].
pub const MAX_BEYOND: u32 = 30;
/// Largest table size for [`euclid_schema_demo`].
pub const MAX_DEMO: u32 = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EuclidError {
    #[error("{what} = {got} is over the limit {limit}")]
    TooLarge { what: &'static str, got: u64, limit: u64 },
    #[error("value must be at least 2")]
    TooSmall,
    #[error("factor search gave up on {0}")]
    Unresolved(String),
}

fn cap(what: &'static str, got: u32, limit: u32) -> Result<(), EuclidError> {
    if got > limit {
        return Err(EuclidError::TooLarge {
            what,
            got: got.into(),
            limit: limit.into(),
        });
    }
    Ok(())
}

pub fn factorial_plus_one(n: u32) -> Result<BigUint, EuclidError> {
    cap("n", n, MAX_N)?;
    Ok((1..=n).fold(BigUint::one(), |acc, k| acc * k) + 1u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LeastFactor {
    Found {
        #[serde(serialize_with = "crate::report::ser_decimal")]
        prime: BigUint,
        proven: bool,
    },
    Unresolved,
}

impl LeastFactor {
    pub fn prime(&self) -> Option<&BigUint> {
        match self {
            LeastFactor::Found { prime, .. } => Some(prime),
            LeastFactor::Unresolved => None,
        }
    }
}

/// Trial division below `cfg.trial_bound`; if that finds nothing, a full
/// factor search of what is left.
pub fn least_prime_factor(v: &BigUint, cfg: FactorConfig) -> Result<LeastFactor, EuclidError> {
    if *v < BigUint::from(2u32) {
        return Err(EuclidError::TooSmall);
    }
    if let Some(p) = factor::first_small_factor(v, cfg.trial_bound) {
        return Ok(LeastFactor::Found {
            prime: BigUint::from(p),
            proven: true,
        });
    }
    let f = factorize(v, cfg);
    Ok(match f.least() {
        Some(p) => LeastFactor::Found {
            prime: p.prime.clone(),
            proven: p.proven,
        },
        None => LeastFactor::Unresolved,
    })
}

/// A bit of `f`, or a marker that the factor search did not settle it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bit {
    Zero,
    One,
    Unresolved,
}

impl Bit {
    pub fn as_u8(self) -> Option<u8> {
        match self {
            Bit::Zero => Some(0),
            Bit::One => Some(1),
            Bit::Unresolved => None,
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

/// 1 iff every prime factor of `n! + 1` is `< m`.
///
/// For `m <= SIEVE_LIMIT` this is exact: divide out every prime below `m`
/// and see whether anything is left. Larger `m` go through [`factorize`].
pub fn euclid_f(n: u32, m: u64, cfg: FactorConfig) -> Result<Bit, EuclidError> {
    let v = factorial_plus_one(n)?;
    if m <= u64::from(SIEVE_LIMIT) {
        return Ok(Bit::from_bool(strip_primes_below(&v, m as u32).is_one()));
    }
    let f = factorize(&v, cfg);
    let m = BigUint::from(m);
    if f.primes.iter().any(|p| p.prime >= m) {
        return Ok(Bit::Zero);
    }
    let mut all_small = true;
    for c in &f.unresolved {
        if *c >= &m * &m {
            // c has a prime factor at least sqrt(c)
            return Ok(Bit::Zero);
        }
        all_small &= *c < m;
    }
    Ok(if all_small { Bit::One } else { Bit::Unresolved })
}

/// The least prime factor of `p! + 1`, which is a prime above `p`.
pub fn prime_beyond(p: u32, cfg: FactorConfig) -> Result<BigUint, EuclidError> {
    cap("p", p, MAX_BEYOND)?;
    let v = factorial_plus_one(p)?;
    match least_prime_factor(&v, cfg)? {
        LeastFactor::Found { prime, .. } => Ok(prime),
        LeastFactor::Unresolved => Err(EuclidError::Unresolved(v.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorWitness {
    pub n: u32,
    #[serde(serialize_with = "crate::report::ser_decimal")]
    pub value: BigUint,
    pub least_prime_factor: LeastFactor,
    pub fully_factored: bool,
    /// Prime factors with multiplicity, ascending; empty unless fully factored.
    #[serde(serialize_with = "crate::report::ser_decimal_vec")]
    pub factors: Vec<BigUint>,
}

impl FactorWitness {
    pub fn new(n: u32, cfg: FactorConfig) -> Result<Self, EuclidError> {
        let value = factorial_plus_one(n)?;
        let f = factorize(&value, cfg);
        let least_prime_factor = match f.least() {
            Some(p) => LeastFactor::Found {
                prime: p.prime.clone(),
                proven: p.proven,
            },
            None => LeastFactor::Unresolved,
        };
        let factors = if f.is_complete() {
            f.primes
                .iter()
                .flat_map(|p| std::iter::repeat_n(p.prime.clone(), p.multiplicity as usize))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            n,
            value,
            least_prime_factor,
            fully_factored: f.is_complete(),
            factors,
        })
    }
}

/// Both readings of the Euclid table on `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidDemo {
    pub n_max: u32,
    /// `membership[x][n]`: `x ∈ F(n)`, i.e. `n >=` every prime factor of
    /// `x! + 1` (non-strict reading), computed as `f(x, n + 1)`.
    pub membership: Vec<Vec<Option<bool>>>,
    /// `strict[x][m] = f(x, m)`: every prime factor of `x! + 1` is `< m`.
    pub strict: Vec<Vec<Option<u8>>>,
    /// `{n | n ∉ F(n)}` within range.
    pub anti_diagonal: Vec<u32>,
    pub anti_diagonal_is_everything: bool,
    /// `g(n) = 1 - f(n, n)`.
    pub diagonal_g: Vec<Option<u8>>,
    pub unresolved: Vec<(u32, u64)>,
}

pub fn euclid_schema_demo(n_max: u32, cfg: FactorConfig) -> Result<EuclidDemo, EuclidError> {
    cap("n_max", n_max, MAX_DEMO)?;
    let mut unresolved = Vec::new();
    let mut strict: Vec<Vec<Option<u8>>> = Vec::new();
    let mut membership: Vec<Vec<Option<bool>>> = Vec::new();
    for x in 0..=n_max {
        let mut row = Vec::new();
        for m in 0..=u64::from(n_max) + 1 {
            let bit = euclid_f(x, m, cfg)?;
            if bit == Bit::Unresolved {
                unresolved.push((x, m));
            }
            row.push(bit.as_u8());
        }
        membership.push(row[1..].iter().map(|b| b.map(|b| b == 1)).collect());
        row.pop();
        strict.push(row);
    }
    let anti_diagonal: Vec<u32> = (0..=n_max)
        .filter(|&n| membership[n as usize][n as usize] == Some(false))
        .collect();
    let diagonal_g = (0..=n_max as usize)
        .map(|n| strict[n][n].map(|b| 1 - b))
        .collect();
    Ok(EuclidDemo {
        n_max,
        anti_diagonal_is_everything: anti_diagonal.len() == n_max as usize + 1,
        anti_diagonal,
        membership,
        strict,
        diagonal_g,
        unresolved,
    })
}

/// Smallest `m` with `f(n, m) = 1`: the largest prime factor plus one.
pub fn threshold(n: u32, cfg: FactorConfig) -> Result<Option<u64>, EuclidError> {
    let w = FactorWitness::new(n, cfg)?;
    Ok(w.factors.last().and_then(to_u64).map(|p| p + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> FactorConfig {
        FactorConfig::default()
    }

    /// Least prime factor by plain trial division.
    fn lpf_oracle(v: u128) -> u128 {
        if v.is_multiple_of(2) {
            return 2;
        }
        let mut d = 3;
        while d * d <= v {
            if v.is_multiple_of(d) {
                return d;
            }
            d += 2;
        }
        v
    }

    fn fact1(n: u32) -> u128 {
        (1..=n as u128).product::<u128>() + 1
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial_plus_one(4).unwrap(), BigUint::from(25u32));
        assert_eq!(factorial_plus_one(0).unwrap(), BigUint::from(2u32));
        assert_eq!(factorial_plus_one(3).unwrap(), BigUint::from(7u32));
        assert_eq!(factorial_plus_one(20).unwrap(), BigUint::from(fact1(20)));
        assert!(factorial_plus_one(65).is_err());
    }

    #[test]
    fn least_factors() {
        let lpf = |v: u32| {
            least_prime_factor(&BigUint::from(v), cfg())
                .unwrap()
                .prime()
                .cloned()
                .unwrap()
        };
        assert_eq!(lpf(25), BigUint::from(5u32));
        assert_eq!(lpf(7), BigUint::from(7u32));
        assert_eq!(lpf(121), BigUint::from(11u32));
        assert!(least_prime_factor(&BigUint::one(), cfg()).is_err());
        for n in 0..=20 {
            let v = factorial_plus_one(n).unwrap();
            let got = least_prime_factor(&v, cfg()).unwrap();
            assert_eq!(got.prime().cloned(), Some(BigUint::from(lpf_oracle(fact1(n)))), "n = {n}");
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(euclid_f(4, 9, cfg()).unwrap(), Bit::One);
        for m in 0..=5 {
            assert_eq!(euclid_f(4, m, cfg()).unwrap(), Bit::Zero);
        }
        for m in 6..40 {
            assert_eq!(euclid_f(4, m, cfg()).unwrap(), Bit::One);
        }
        assert_eq!(euclid_f(3, 8, cfg()).unwrap(), Bit::One);
        for n in 0..=25 {
            assert_eq!(euclid_f(n, n.into(), cfg()).unwrap(), Bit::Zero);
        }
    }

    #[test]
    fn f_above_the_sieve() {
        // 20!+1 = 20639383 * 117876683047
        assert_eq!(euclid_f(20, 117876683047, cfg()).unwrap(), Bit::Zero);
        assert_eq!(euclid_f(20, 117876683048, cfg()).unwrap(), Bit::One);
        assert_eq!(threshold(20, cfg()).unwrap(), Some(117876683048));
        let starved = FactorConfig {
            trial_bound: 100,
            rho_budget: 1,
        };
        assert_eq!(euclid_f(20, 2_000_000, starved).unwrap(), Bit::Zero);
        assert_eq!(euclid_f(20, 10_000_000_000_000_000_000, starved).unwrap(), Bit::One);
        assert_eq!(euclid_f(20, 10_000_000_000, starved).unwrap(), Bit::Unresolved);
    }

    #[test]
    fn step_shape() {
        for n in [0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 12] {
            let t = threshold(n, cfg()).unwrap().unwrap();
            for m in [0, 1, t - 1, t, t + 1, 2 * t] {
                let want = if m >= t { Bit::One } else { Bit::Zero };
                assert_eq!(euclid_f(n, m, cfg()).unwrap(), want, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn primes_beyond() {
        assert_eq!(prime_beyond(4, cfg()).unwrap(), BigUint::from(5u32));
        assert_eq!(prime_beyond(5, cfg()).unwrap(), BigUint::from(11u32));
        assert_eq!(prime_beyond(1, cfg()).unwrap(), BigUint::from(2u32));
        assert_eq!(prime_beyond(25, cfg()).unwrap(), BigUint::from(401u32));
        assert_eq!(prime_beyond(29, cfg()).unwrap(), BigUint::from(14557u32));
        assert_eq!(prime_beyond(30, cfg()).unwrap(), BigUint::from(31u32));
        // 27!+1 is prime
        assert_eq!(prime_beyond(27, cfg()).unwrap(), factorial_plus_one(27).unwrap());
        assert!(prime_beyond(31, cfg()).is_err());
    }

    #[test]
    fn no_small_divisors() {
        for n in 0..=64u32 {
            let v = factorial_plus_one(n).unwrap();
            for d in 2..=n {
                assert_ne!(&v % d, BigUint::ZERO, "{d} divides {n}!+1");
            }
        }
    }

    #[test]
    fn witnesses() {
        let w = FactorWitness::new(30, cfg()).unwrap();
        assert!(w.fully_factored);
        let got: Vec<String> = w.factors.iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["31", "12421", "82561", "1080941", "7719068319927551"]);
        assert_eq!(w.factors.iter().product::<BigUint>(), w.value);
        let w = FactorWitness::new(5, cfg()).unwrap();
        assert_eq!(w.factors, vec![BigUint::from(11u32); 2]);
    }

    #[test]
    fn demo() {
        let d = euclid_schema_demo(10, cfg()).unwrap();
        assert_eq!(d.anti_diagonal, (0..=10).collect::<Vec<_>>());
        assert!(d.anti_diagonal_is_everything);
        assert!(d.diagonal_g.iter().all(|&g| g == Some(1)));
        assert!(d.unresolved.is_empty());
        for n in 0..=10 {
            assert_eq!(d.membership[4][n], Some(n >= 5));
            assert_eq!(d.membership[0][n], Some(n >= 2));
        }
        assert!(euclid_schema_demo(26, cfg()).is_err());
    }
}
