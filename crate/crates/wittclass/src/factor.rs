//! Integer factorization and primality utilities.
//!
//! Everything here is exact and deterministic for the sizes this crate
//! produces (entries of sampled matrices and their norms). Factorization is
//! trial division over a fixed small-prime table, then Miller–Rabin plus
//! Pollard's rho (Brent variant) on whatever cofactor remains. The
//! [`FactorBudget`] cap exists so callers that merely *prefer* a complete
//! factorization (the local-symbol route of Witt equality) can fall back to
//! something else instead of stalling.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Primes below 10^4, computed once.
fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let bound = 10_000usize;
        let mut sieve = vec![true; bound];
        let mut out = Vec::new();
        for n in 2..bound {
            if sieve[n] {
                out.push(n as u64);
                let mut m = n * n;
                while m < bound {
                    sieve[m] = false;
                    m += n;
                }
            }
        }
        out
    })
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    // Schoolbook 64-bit split; m < 2^127 here and inputs are reduced.
    if let (Some(sa), Some(sb), Some(sm)) = (a.to_u64(), b.to_u64(), m.to_u64()) {
        return ((sa as u128 * sb as u128) % sm as u128) as u128;
    }
    let mut result = 0u128;
    let mut base = a % m;
    let mut exp = b;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result + base) % m;
        }
        base = (base << 1) % m;
        exp >>= 1;
    }
    result
}

fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u128(acc, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    acc
}

fn miller_rabin_u128(n: u128, a: u128) -> bool {
    // Returns true if n passes the base-a test.
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for `n < 3.3·10^24`; the same base set is used
/// (probabilistically, with overwhelming margin) above that.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
        .iter()
        .all(|&a| miller_rabin_u128(n, a))
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

pub fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u128() {
        return is_prime_u128(small);
    }
    // Miller–Rabin with the fixed base set on BigUint arithmetic.
    let one = BigUint::one();
    let two = &one + &one;
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho on u128. Returns a nontrivial factor of
/// composite odd `n`, or `None` if the iteration budget runs out.
fn rho_u128(n: u128, max_iters: u64) -> Option<u128> {
    debug_assert!(n > 3 && !is_prime_u128(n));
    let mut c = 1u128;
    let mut spent = 0u64;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
            spent += 1;
            if spent > max_iters {
                return None;
            }
        }
        if d != n {
            return Some(d);
        }
        c += 1; // rare cycle degenerate; retry with a new constant
        if c > 20 {
            return None;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Iteration caps for [`factor_biguint`]. The defaults are generous for
/// the entry sizes produced by the bounded samplers in this crate.
#[derive(Debug, Clone)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 4_000_000,
        }
    }
}

/// Complete factorization of a positive integer into `(prime, exponent)`
/// pairs sorted by prime, or `None` if the budget is exhausted first.
pub fn factor_biguint(n: &BigUint, budget: &FactorBudget) -> Option<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return None;
    }
    if let Some(small) = n.to_u64() {
        return Some(
            factor_u64_cached(small)
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
        );
    }
    let mut factors: HashMap<BigUint, u32> = HashMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            *factors.entry(bp.clone()).or_insert(0) += 1;
        }
        if rest.is_one() {
            break;
        }
    }
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime_biguint(&m) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        // Perfect powers split for free.
        if let Some(root) = exact_sqrt(&m) {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        let small = m.to_u128()?; // beyond u128: give up (never hit at desk scale)
        let d = rho_u128(small, budget.rho_iterations)?;
        stack.push(BigUint::from(d));
        stack.push(BigUint::from(small / d));
    }
    let mut out: Vec<(BigUint, u32)> = factors.into_iter().collect();
    out.sort();
    Some(out)
}

/// Complete factorization of `n > 0` as `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64 requires a positive integer");
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n as u128;
    for &p in small_primes() {
        if (p as u128) * (p as u128) > rest {
            break;
        }
        let mut e = 0;
        while rest % p as u128 == 0 {
            rest /= p as u128;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_prime_u128(m) {
            match factors.iter_mut().find(|(p, _)| *p as u128 == m) {
                Some((_, e)) => *e += 1,
                None => factors.push((m as u64, 1)),
            }
            continue;
        }
        let d = rho_u128(m, u64::MAX).expect("rho on u64-range composites terminates");
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    factors
}

thread_local! {
    static U64_FACTOR_CACHE: RefCell<HashMap<u64, Vec<(u64, u32)>>> =
        RefCell::new(HashMap::new());
}

/// Cached [`factor_u64`]; the campaigns factor the same small matrix
/// entries over and over.
pub fn factor_u64_cached(n: u64) -> Vec<(u64, u32)> {
    U64_FACTOR_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().get(&n) {
            return hit.clone();
        }
        let computed = factor_u64(n);
        cache.borrow_mut().insert(n, computed.clone());
        computed
    })
}

/// `sqrt(n)` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero is undefined");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

/// `true` when the integer is squarefree (sign ignored; 0 is not).
pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_cases() {
        let primes = [2u64, 3, 5, 7, 11, 97, 7919, 2_147_483_647];
        for p in primes {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        for c in [1u64, 4, 9, 91, 561, 1105, 2047, 25326001] {
            assert!(!is_prime_u64(c), "{c} is composite (or 1)");
        }
    }

    #[test]
    fn factor_roundtrip() {
        for n in [2u64, 12, 360, 1_000_003, 600_851_475_143, u32::MAX as u64] {
            let fs = factor_u64(n);
            let back: u64 = fs.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            for &(p, _) in &fs {
                assert!(is_prime_u64(p));
            }
        }
    }

    #[test]
    fn factor_biguint_semiprime() {
        // Two 11-digit primes.
        let a = BigUint::from(10_000_000_019u64);
        let b = BigUint::from(10_000_000_033u64);
        let n = &a * &b;
        let fs = factor_biguint(&n, &FactorBudget::default()).expect("within budget");
        assert_eq!(fs, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn valuation_and_squarefree() {
        assert_eq!(int_valuation(&BigInt::from(75), 5), 2);
        assert_eq!(int_valuation(&BigInt::from(-32), 2), 5);
        assert_eq!(int_valuation(&BigInt::from(7), 5), 0);
        assert!(is_squarefree(-30));
        assert!(!is_squarefree(75));
        assert!(!is_squarefree(0));
    }
}
