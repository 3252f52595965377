use rand::Rng;

use super::term::PrTerm;

/// Largest arity [`random_term`] produces.
pub const RANDOM_MAX_ARITY: usize = 3;

/// A random arity-valid term of arity `arity` (in `1..=3`) and depth at
/// most `depth`. Composition takes one to three inner functions.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, arity: usize, depth: usize) -> PrTerm {
    assert!((1..=RANDOM_MAX_ARITY).contains(&arity), "arity must be in 1..=3");
    let leaf = |rng: &mut R| {
        if arity == 1 {
            match rng.gen_range(0..3) {
                0 => PrTerm::Zero,
                1 => PrTerm::Succ,
                _ => PrTerm::proj(1, 1).expect("valid projection"),
            }
        } else {
            PrTerm::proj(rng.gen_range(1..=arity), arity).expect("valid projection")
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        return leaf(rng);
    }
    // recursion needs g of arity n-1 >= 1 and h of arity n+1 <= 3
    if arity == 2 && rng.gen_bool(0.4) {
        return PrTerm::rec(random_term(rng, 1, depth - 1), random_term(rng, 3, depth - 1));
    }
    let k = rng.gen_range(1..=RANDOM_MAX_ARITY);
    let f = random_term(rng, k, depth - 1);
    let args = (0..k).map(|_| random_term(rng, arity, depth - 1)).collect();
    PrTerm::comp(f, args)
}
