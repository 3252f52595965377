//! Primality and factor search for the numbers `n! + 1`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Bound of the shared prime sieve.
pub const SIEVE_LIMIT: u32 = 1 << 20;

/// Miller-Rabin bases that decide primality for every n < 2^64.
const DETERMINISTIC_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Extra random bases above 2^64; each lets a composite through with
/// probability at most 1/4.
const EXTRA_ROUNDS: usize = 24;

pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::new();
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                for j in (i * i..n).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        out
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven prime.
    Prime,
    /// Passed every Miller-Rabin round but is beyond the deterministic range.
    ProbablePrime,
}

fn mr_round(n: &BigUint, d: &BigUint, s: u32, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let mut x = base.modpow(d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

pub fn primality(n: &BigUint) -> Primality {
    let two = BigUint::from(2u32);
    if *n < two {
        return Primality::Composite;
    }
    for &p in &DETERMINISTIC_BASES {
        if *n == BigUint::from(p) {
            return Primality::Prime;
        }
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().expect("n - 1 is nonzero") as u32;
    let d = &n1 >> s;
    if !DETERMINISTIC_BASES
        .iter()
        .all(|&b| mr_round(n, &d, s, &BigUint::from(b)))
    {
        return Primality::Composite;
    }
    if n.bits() <= 64 {
        return Primality::Prime;
    }
    // seeded from n so the verdict is reproducible
    let mut rng = ChaCha8Rng::seed_from_u64(n.iter_u64_digits().fold(0, |a, x| a ^ x.rotate_left(17)));
    let span = n - 3u32;
    for _ in 0..EXTRA_ROUNDS {
        let b = BigUint::from(rng.gen::<u128>()) % &span + &two;
        if !mr_round(n, &d, s, &b) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

/// Brent's variant of Pollard's rho. Returns a nontrivial factor of the
/// composite `n`, or `None` once `budget` iterations are spent.
fn rho(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut x;
        let mut ys;
        let mut g;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            loop {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
                g = q.gcd(n);
                k += steps;
                if k >= r || g != one {
                    break;
                }
            }
            r *= 2;
            if g != one {
                break;
            }
        }
        if g == *n {
            // the batch overshot; redo it one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    unreachable!()
}

/// Limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorConfig {
    /// Every prime below this is tried by division (at most [`SIEVE_LIMIT`]).
    pub trial_bound: u32,
    /// Total rho iterations before giving up.
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            trial_bound: 1 << 16,
            rho_budget: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFactor {
    #[serde(serialize_with = "crate::report::ser_decimal")]
    pub prime: BigUint,
    pub multiplicity: u32,
    pub proven: bool,
}

/// Primes found, ascending, plus composite parts that could not be split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub primes: Vec<PrimeFactor>,
    #[serde(serialize_with = "crate::report::ser_decimal_vec")]
    pub unresolved: Vec<BigUint>,
    pub trial_bound: u32,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// The least prime factor, when the search pins it down: either some
    /// prime below the trial bound was found, or nothing is left unsplit.
    pub fn least(&self) -> Option<&PrimeFactor> {
        let first = self.primes.first()?;
        (self.is_complete() || first.prime < BigUint::from(self.trial_bound)).then_some(first)
    }
}

pub fn factorize(v: &BigUint, cfg: FactorConfig) -> Factorization {
    let bound = cfg.trial_bound.min(SIEVE_LIMIT);
    let mut found: Vec<(BigUint, bool)> = Vec::new();
    let mut rest = v.clone();
    for &p in small_primes().iter().take_while(|&&p| p < bound) {
        if rest.is_one() {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            found.push((BigUint::from(p), true));
        }
    }
    let mut unresolved = Vec::new();
    let mut budget = cfg.rho_budget;
    let mut stack = if rest.is_one() || rest.is_zero() { vec![] } else { vec![rest] };
    while let Some(c) = stack.pop() {
        match primality(&c) {
            Primality::Prime => found.push((c, true)),
            Primality::ProbablePrime => found.push((c, false)),
            Primality::Composite => match rho(&c, &mut budget) {
                Some(d) => {
                    stack.push(&c / &d);
                    stack.push(d);
                }
                None => unresolved.push(c),
            },
        }
    }
    found.sort();
    unresolved.sort();
    let mut primes: Vec<PrimeFactor> = Vec::new();
    for (p, proven) in found {
        match primes.last_mut() {
            Some(last) if last.prime == p => last.multiplicity += 1,
            _ => primes.push(PrimeFactor {
                prime: p,
                multiplicity: 1,
                proven,
            }),
        }
    }
    Factorization {
        primes,
        unresolved,
        trial_bound: bound,
    }
}

/// The smallest prime below `bound` dividing `v`.
pub(crate) fn first_small_factor(v: &BigUint, bound: u32) -> Option<u32> {
    small_primes()
        .iter()
        .take_while(|&&p| p < bound.min(SIEVE_LIMIT))
        .find(|&&p| (v % p).is_zero())
        .copied()
}

/// Divides out every prime below `m` (`m <= SIEVE_LIMIT`) and returns the
/// cofactor.
pub(crate) fn strip_primes_below(v: &BigUint, m: u32) -> BigUint {
    let mut rest = v.clone();
    for &p in small_primes().iter().take_while(|&&p| p < m) {
        while !rest.is_zero() && (&rest % p).is_zero() {
            rest /= p;
        }
    }
    rest
}

pub(crate) fn to_u64(v: &BigUint) -> Option<u64> {
    v.to_u64()
}
