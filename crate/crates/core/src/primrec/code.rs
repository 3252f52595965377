//! Gödel codes of primitive recursive terms.
//!
//! ```text
//! #z = 1    #s = 2    #p_i^n = 2^i · 3^n
//! #comp(f; f_1..f_k) = 5^#f · 7^#f_1 · ... · P(k+2)^#f_k
//! #prim.rec(g, h)    = 3^#g · 5^#h
//! ```
//!
//! where `P(j)` is the `j`-th prime counting from `P(0) = 2`. Codes of even
//! modest terms have exponents that are themselves huge codes, so a
//! [`GodelCode`] is kept in one of two canonical forms: the plain integer
//! when it has at most [`MATERIALIZE_BITS`] bits, otherwise its complete
//! prime factorisation with exponents that are again codes. Both forms are
//! exact and equality is numeric equality.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::term::{PrTerm, Projection};
use super::PrimrecError;

/// Codes up to this many bits are stored as plain integers.
pub const MATERIALIZE_BITS: u64 = 4096;

/// Large integers handed to [`GodelCode::try_from_biguint`] must factor over
/// primes below this bound.
pub const SMOOTH_BOUND: u64 = 1 << 16;

fn prime_table() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMOOTH_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u64);
                for j in (i * i..n).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

/// `P(j)`, the `j`-th prime with `P(0) = 2`.
pub fn nth_prime(j: usize) -> u64 {
    let table = prime_table();
    if let Some(&p) = table.get(j) {
        return p;
    }
    // beyond the table: continue by trial division
    let mut count = table.len() - 1;
    let mut candidate = *table.last().unwrap();
    while count < j {
        candidate += 2;
        if is_small_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_index(p: u64) -> Option<usize> {
    prime_table().binary_search(&p).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Value(BigUint),
    /// Complete factorisation; primes strictly increasing, exponents >= 1.
    Factored(Vec<(u64, GodelCode)>),
}

/// A natural number used as a code. See the module docs for its two forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GodelCode(Repr);

impl GodelCode {
    pub fn zero() -> Self {
        GodelCode(Repr::Value(BigUint::zero()))
    }

    pub fn one() -> Self {
        GodelCode(Repr::Value(BigUint::one()))
    }

    /// Wraps an integer. Integers wider than [`MATERIALIZE_BITS`] are
    /// factored over primes below [`SMOOTH_BOUND`]; if that leaves a
    /// cofactor the value cannot be put in canonical form and is rejected.
    /// No such integer is the code of a term with fewer than 6540 composition
    /// arguments.
    pub fn try_from_biguint(v: BigUint) -> Result<Self, PrimrecError> {
        if v.bits() <= MATERIALIZE_BITS {
            return Ok(GodelCode(Repr::Value(v)));
        }
        let mut rest = v;
        let mut factors = Vec::new();
        for &p in prime_table() {
            let e = strip_factor(&mut rest, p);
            if e > 0 {
                factors.push((p, GodelCode::from(e)));
            }
            if rest.is_one() {
                return Ok(GodelCode(Repr::Factored(factors)));
            }
        }
        Err(PrimrecError::Unfactorable)
    }

    /// The integer value, if it is stored in materialised form.
    pub fn to_biguint(&self) -> Option<&BigUint> {
        match &self.0 {
            Repr::Value(v) => Some(v),
            Repr::Factored(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_biguint().and_then(ToPrimitive::to_u64)
    }

    fn to_usize(&self) -> Option<usize> {
        self.to_biguint().and_then(ToPrimitive::to_usize)
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.0, Repr::Value(_))
    }

    /// `Π p^e` over distinct primes `p` (increasing) and exponents `e >= 1`,
    /// normalised to canonical form.
    fn power_product(factors: Vec<(u64, GodelCode)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        let mut lower_bits = BigUint::zero();
        let mut huge = false;
        for (p, e) in &factors {
            match &e.0 {
                Repr::Factored(_) => huge = true,
                Repr::Value(v) => lower_bits += v * BigUint::from(63 - p.leading_zeros() as u64),
            }
        }
        if huge || lower_bits > BigUint::from(MATERIALIZE_BITS) {
            return GodelCode(Repr::Factored(factors));
        }
        let mut value = BigUint::one();
        for (p, e) in &factors {
            // every exponent is at most MATERIALIZE_BITS here
            let e = e.to_u64().expect("exponent bounded by lower_bits") as u32;
            value *= BigUint::from(*p).pow(e);
        }
        if value.bits() <= MATERIALIZE_BITS {
            GodelCode(Repr::Value(value))
        } else {
            GodelCode(Repr::Factored(factors))
        }
    }

    /// If the code is `P(s)^e_0 · P(s+1)^e_1 · ... · P(s+k)^e_k` with every
    /// `e_j >= 1` and a start `s` of 0, 1 or 2 (primes 2, 3, 5), returns
    /// `(s, [e_0, ..., e_k])`. Every code of a compound term has this shape.
    fn prime_run(&self) -> Option<(usize, Vec<GodelCode>)> {
        match &self.0 {
            Repr::Value(v) => {
                if v.is_zero() || v.is_one() {
                    return None;
                }
                let start = (0..3).find(|&j| v.is_multiple_of(&BigUint::from(nth_prime(j))))?;
                let mut rest = v.clone();
                let mut exps = Vec::new();
                let mut j = start;
                loop {
                    let e = strip_factor(&mut rest, nth_prime(j));
                    if e == 0 {
                        break;
                    }
                    exps.push(GodelCode::from(e));
                    j += 1;
                }
                rest.is_one().then_some((start, exps))
            }
            Repr::Factored(factors) => {
                let start = prime_index(factors[0].0)?;
                if start > 2 {
                    return None;
                }
                let contiguous = factors
                    .iter()
                    .enumerate()
                    .all(|(k, (p, _))| nth_prime(start + k) == *p);
                contiguous.then(|| (start, factors.iter().map(|(_, e)| e.clone()).collect()))
            }
        }
    }
}

/// Divides out every factor `p`, returning the multiplicity.
fn strip_factor(n: &mut BigUint, p: u64) -> u64 {
    let p = BigUint::from(p);
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

impl From<u64> for GodelCode {
    fn from(v: u64) -> Self {
        GodelCode(Repr::Value(BigUint::from(v)))
    }
}

impl PartialEq<u64> for GodelCode {
    fn eq(&self, other: &u64) -> bool {
        self.to_u64() == Some(*other)
    }
}

/// Plain decimal when materialised, otherwise a product such as
/// `3^6 * 5^(5^2 * 7^54)`.
impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Value(v) => write!(f, "{v}"),
            Repr::Factored(factors) => {
                for (k, (p, e)) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" * ")?;
                    }
                    match &e.0 {
                        Repr::Value(v) => write!(f, "{p}^{v}")?,
                        Repr::Factored(_) => write!(f, "{p}^({e})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GodelCode {
    type Err = PrimrecError;

    /// Accepts a decimal integer or the product form printed by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = CodeParser { src: s.as_bytes(), pos: 0 };
        let code = p.product()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(code)
    }
}

struct CodeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl CodeParser<'_> {
    fn error(&self, msg: &str) -> PrimrecError {
        PrimrecError::CodeSyntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn decimal(&mut self) -> Result<BigUint, PrimrecError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a decimal number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn atom(&mut self) -> Result<GodelCode, PrimrecError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.product()?;
            if self.peek() != Some(b')') {
                return Err(self.error("expected `)`"));
            }
            self.pos += 1;
            Ok(inner)
        } else {
            GodelCode::try_from_biguint(self.decimal()?)
        }
    }

    fn product(&mut self) -> Result<GodelCode, PrimrecError> {
        let mut terms = vec![self.power()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            terms.push(self.power()?);
        }
        if terms.len() == 1 && terms[0].1.is_none() {
            return Ok(terms.pop().unwrap().0);
        }
        // a genuine product: every factor is `prime` or `prime^code`
        let mut factors = Vec::with_capacity(terms.len());
        for (base, exp) in terms {
            let p = base
                .to_u64()
                .filter(|&p| is_small_prime(p))
                .ok_or_else(|| self.error("product factors must be prime powers"))?;
            let e = exp.unwrap_or_else(GodelCode::one);
            if e == 0 {
                continue;
            }
            factors.push((p, e));
        }
        factors.sort_by_key(|(p, _)| *p);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(self.error("repeated prime in product"));
        }
        Ok(GodelCode::power_product(factors))
    }

    fn power(&mut self) -> Result<(GodelCode, Option<GodelCode>), PrimrecError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.atom()?;
            Ok((base, Some(exp)))
        } else {
            Ok((base, None))
        }
    }
}

/// Gödel code of a term. Total; the result may be astronomically large.
pub fn encode(t: &PrTerm) -> GodelCode {
    match t {
        PrTerm::Zero => GodelCode::from(1),
        PrTerm::Succ => GodelCode::from(2),
        PrTerm::Proj(p) => GodelCode::power_product(vec![
            (2, GodelCode::from(p.index() as u64)),
            (3, GodelCode::from(p.arity() as u64)),
        ]),
        PrTerm::Comp(f, args) => {
            let mut factors = vec![(5, encode(f))];
            factors.extend(args.iter().enumerate().map(|(j, a)| (nth_prime(j + 3), encode(a))));
            GodelCode::power_product(factors)
        }
        PrTerm::PrimRec(g, h) => GodelCode::power_product(vec![(3, encode(g)), (5, encode(h))]),
    }
}

/// Decodes a code, falling back to [`PrTerm::Zero`] for anything that is not
/// the code of an arity-valid term. Sub-codes are decoded strictly: one bad
/// sub-code makes the whole code a non-code.
pub fn decode(n: &GodelCode) -> PrTerm {
    match decode_strict(n) {
        Some(t) if t.is_valid() => t,
        _ => PrTerm::Zero,
    }
}

/// Structural decoding without the fallback or the arity check.
pub fn decode_strict(n: &GodelCode) -> Option<PrTerm> {
    if *n == 1 {
        return Some(PrTerm::Zero);
    }
    if *n == 2 {
        return Some(PrTerm::Succ);
    }
    let (start, exps) = n.prime_run()?;
    match (start, exps.as_slice()) {
        // 2^i · 3^n
        (0, [i, arity]) => {
            let p = Projection::new(i.to_usize()?, arity.to_usize()?).ok()?;
            Some(PrTerm::Proj(p))
        }
        // 3^#g · 5^#h
        (1, [g, h]) => Some(PrTerm::rec(decode_strict(g)?, decode_strict(h)?)),
        // 5^#f · 7^#f_1 · ...
        (2, [f, args @ ..]) if !args.is_empty() => {
            let args = args.iter().map(decode_strict).collect::<Option<Vec<_>>>()?;
            Some(PrTerm::comp(decode_strict(f)?, args))
        }
        _ => None,
    }
}

/// Whether `n` is the code of an arity-valid term.
pub fn is_code(n: &GodelCode) -> bool {
    decode_strict(n).is_some_and(|t| t.is_valid())
}
