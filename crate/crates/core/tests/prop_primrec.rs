use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use workbench::primrec::{self, EvalBudget, GodelCode, Outcome, PrTerm};

fn term(seed: u64, arity: usize, depth: usize) -> PrTerm {
    primrec::random_term(&mut ChaCha8Rng::seed_from_u64(seed), arity, depth)
}

fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Code by direct multiplication, or `None` once an exponent passes 2000.
fn oracle_code(t: &PrTerm) -> Option<BigUint> {
    let pw = |p: u64, e: &BigUint| e.to_u32().filter(|&e| e <= 2000).map(|e| BigUint::from(p).pow(e));
    match t {
        PrTerm::Zero => Some(1u32.into()),
        PrTerm::Succ => Some(2u32.into()),
        PrTerm::Proj(p) => Some(BigUint::from(2u32).pow(p.index() as u32) * BigUint::from(3u32).pow(p.arity() as u32)),
        PrTerm::PrimRec(g, h) => Some(pw(3, &oracle_code(g)?)? * pw(5, &oracle_code(h)?)?),
        PrTerm::Comp(f, args) => {
            let mut v = pw(5, &oracle_code(f)?)?;
            for (a, p) in args.iter().zip(primes().skip(3)) {
                v *= pw(p, &oracle_code(a)?)?;
            }
            Some(v)
        }
    }
}

/// Recursion unfolded from the top, with a shared fuel counter.
fn oracle_eval(t: &PrTerm, args: &[u64], fuel: &mut u64) -> Option<u64> {
    *fuel = fuel.checked_sub(1)?;
    match t {
        PrTerm::Zero => Some(0),
        PrTerm::Succ => args[0].checked_add(1),
        PrTerm::Proj(p) => Some(args[p.index() - 1]),
        PrTerm::Comp(f, gs) => {
            let inner: Option<Vec<u64>> = gs.iter().map(|g| oracle_eval(g, args, fuel)).collect();
            oracle_eval(f, &inner?, fuel)
        }
        PrTerm::PrimRec(g, h) => {
            let (&y, xs) = args.split_last()?;
            if y == 0 {
                return oracle_eval(g, xs, fuel);
            }
            let mut prev = xs.to_vec();
            prev.push(y - 1);
            let acc = oracle_eval(t, &prev, fuel)?;
            let mut frame = vec![acc];
            frame.extend_from_slice(xs);
            frame.push(y - 1);
            oracle_eval(h, &frame, fuel)
        }
    }
}

proptest! {
    #[test]
    fn print_parse_round_trip(seed: u64, arity in 1usize..=3, depth in 0usize..=4) {
        let t = term(seed, arity, depth);
        prop_assert!(t.is_valid());
        prop_assert_eq!(t.arity(), Some(arity));
        prop_assert_eq!(t.to_string().parse::<PrTerm>().unwrap(), t);
    }

    #[test]
    fn code_round_trip(seed: u64, arity in 1usize..=3, depth in 0usize..=4) {
        let t = term(seed, arity, depth);
        let c = primrec::encode(&t);
        prop_assert!(primrec::is_code(&c));
        prop_assert_eq!(primrec::decode(&c), t);
    }

    #[test]
    fn code_matches_direct_product(seed: u64, arity in 1usize..=2, depth in 0usize..=2) {
        let t = term(seed, arity, depth);
        if let (Some(want), Some(got)) = (oracle_code(&t), primrec::encode(&t).to_biguint()) {
            prop_assert_eq!(got, &want);
        }
    }

    #[test]
    fn decode_is_total(n in 0u64..100_000) {
        let t = primrec::decode(&GodelCode::from(n));
        prop_assert!(t.is_valid());
        if primrec::is_code(&GodelCode::from(n)) {
            prop_assert_eq!(primrec::encode(&t), GodelCode::from(n));
        } else {
            prop_assert_eq!(t, PrTerm::Zero);
        }
    }

    #[test]
    fn eval_matches_unfolded_recursion(seed: u64, arity in 1usize..=3, depth in 0usize..=3, args in prop::collection::vec(0u64..5, 3)) {
        let t = term(seed, arity, depth);
        let args = &args[..arity];
        let lib = primrec::eval(&t, args, EvalBudget::new(20_000).unwrap());
        if let Ok(Outcome::Value(v)) = lib {
            let mut fuel = 1_000_000;
            if let Some(o) = oracle_eval(&t, args, &mut fuel) {
                prop_assert_eq!(v, o);
            }
        }
    }
}
