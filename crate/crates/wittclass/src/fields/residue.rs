//! Modular arithmetic helpers and residue maps at inert primes.
//!
//! The interesting map here sends a `v = 0` element of `Q(sqrt d)` to the
//! residue field `F_{p^2}` at an odd inert prime `p`. The residue field is
//! presented so that the image of `√d` is explicit:
//!
//! * `d ≡ 1 mod 4`: modulus is the minimal polynomial of `(−1+√d)/2`,
//!   i.e. `x² + x + (1−d)/4 mod p`, and `√d ↦ 1 + 2x`. For `d = −3` this
//!   yields `x² + x + 1` with `(−1+√−3)/2 ↦ x`.
//! * otherwise: modulus `x² − d mod p` and `√d ↦ x`.
//!
//! Either modulus is irreducible mod `p` exactly because `p` is inert
//! (its discriminant is `d` up to squares).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::factor;

use super::{FieldDescriptor, FieldElement, FieldError, Value};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` for coprime inputs.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some((((t % m as i128) + m as i128) % m as i128) as u64)
}

/// Legendre symbol `(a|p)` for odd prime `p`: 0, 1, or −1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        0
    } else if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic non-residue mod `p`.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&c| legendre(c, p) == -1)
        .expect("odd prime fields have non-residues")
}

/// Square root mod an odd prime (Tonelli–Shanks); `None` for non-residues.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Write p − 1 = 2^s · q with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = smallest_nonresidue(p);
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// `d` reduced into `[0, p)`.
pub fn reduce_signed(d: i64, p: u64) -> u64 {
    let p_i = p as i128;
    (((d as i128 % p_i) + p_i) % p_i) as u64
}

/// Whether an odd prime `p` is inert in `Q(sqrt d)`.
pub fn is_inert(d: i64, p: u64) -> bool {
    p != 2 && factor::is_prime_u64(p) && legendre(reduce_signed(d, p), p) == -1
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(r: &BigRational, p: u64) -> i64 {
    assert!(!r.is_zero(), "valuation of zero is undefined");
    factor::int_valuation(r.numer(), p) as i64 - factor::int_valuation(r.denom(), p) as i64
}

/// Residue of a rational with nonnegative p-valuation: numerator times the
/// inverse of the denominator mod `p`.
pub fn rational_mod_p(r: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = ((r.numer() % &pb) + &pb) % &pb;
    let den = ((r.denom() % &pb) + &pb) % &pb;
    let num = num.to_u64().expect("reduced below p");
    let den = den.to_u64().expect("reduced below p");
    let dinv = inv_mod(den, p).expect("denominator prime to p");
    mul_mod(num, dinv, p)
}

/// Valuation of a nonzero element of `Q` or `Q(sqrt d)` at an odd inert
/// prime: `min` of the coordinate valuations, equivalently half the
/// valuation of the norm.
pub fn valuation_at_inert_prime(x: &FieldElement, p: u64) -> Result<i64, FieldError> {
    if x.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    match (x.field(), x.value()) {
        (FieldDescriptor::Rational, Value::Rational(r)) => Ok(rational_valuation(r, p)),
        (FieldDescriptor::Quadratic { d }, Value::Quadratic(a, b)) => {
            if !is_inert(*d, p) {
                return Err(FieldError::NotInert { p });
            }
            let va = if a.is_zero() {
                None
            } else {
                Some(rational_valuation(a, p))
            };
            let vb = if b.is_zero() {
                None
            } else {
                Some(rational_valuation(b, p))
            };
            Ok(match (va, vb) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (None, None) => unreachable!("element is nonzero"),
            })
        }
        _ => Err(FieldError::WrongField),
    }
}

/// The residue field `F_{p^2}` of `Q(sqrt d)` at an odd inert prime,
/// together with the image of `√d` as coordinates `(c0, c1)`.
pub fn residue_field(
    k: &FieldDescriptor,
    p: u64,
) -> Result<(FieldDescriptor, (u64, u64)), FieldError> {
    let d = k
        .quadratic_d()
        .ok_or(FieldError::WrongField)?;
    if !is_inert(d, p) {
        return Err(FieldError::NotInert { p });
    }
    if d.rem_euclid(4) == 1 {
        // Minimal polynomial of (−1+√d)/2 is x² + x + (1−d)/4.
        let c0 = reduce_signed((1 - d) / 4, p);
        let field = FieldDescriptor::prime_square_with_modulus(p, 1, c0)?;
        Ok((field, (1, 2 % p)))
    } else {
        let field = FieldDescriptor::prime_square_with_modulus(p, 0, reduce_signed(-d, p))?;
        Ok((field, (0, 1)))
    }
}

/// Reduces a valuation-zero element of `Q(sqrt d)` (or of `Q`) into the
/// residue field at an odd inert prime.
pub fn reduce_at_inert_prime(x: &FieldElement, p: u64) -> Result<FieldElement, FieldError> {
    let v = valuation_at_inert_prime(x, p)?;
    if v != 0 {
        return Err(FieldError::NonzeroValuation { v });
    }
    match (x.field(), x.value()) {
        (FieldDescriptor::Rational, Value::Rational(r)) => {
            let k = FieldDescriptor::prime(p)?;
            k.finite(rational_mod_p(r, p))
        }
        (FieldDescriptor::Quadratic { .. }, Value::Quadratic(a, b)) => {
            let (k, (r0, r1)) = residue_field(x.field(), p)?;
            let abar = k.finite2(rational_mod_p(a, p), 0)?;
            let bbar = k.finite2(rational_mod_p(b, p), 0)?;
            let root = k.finite2(r0, r1)?;
            abar.add(&bbar.mul(&root)?)
        }
        _ => Err(FieldError::WrongField),
    }
}

/// Order of a nonzero element of a finite field in its multiplicative
/// group.
pub fn mult_order(x: &FieldElement) -> Result<u64, FieldError> {
    if x.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    let q = x.field().order().ok_or(FieldError::NotFinite)?;
    let group = q - 1;
    let mut order = group;
    for (prime, _) in factor::factor_u64(group) {
        while order % prime == 0
            && x.pow((order / prime) as i64)
                .expect("positive power")
                .is_one()
        {
            order /= prime;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ratio;

    fn qm3() -> FieldDescriptor {
        FieldDescriptor::quadratic(-3).unwrap()
    }

    fn eps() -> FieldElement {
        qm3()
            .quadratic_element(ratio(-1, 2), ratio(1, 2))
            .unwrap()
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(2, 5), Some(3));
        assert_eq!(inv_mod(10, 5), None);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(10, 5), 0);
        assert_eq!(smallest_nonresidue(5), 2);
        let r = sqrt_mod_p(2, 7).unwrap();
        assert_eq!(mul_mod(r, r, 7), 2);
        assert_eq!(sqrt_mod_p(3, 7), None);
        // p ≡ 1 mod 4 branch of Tonelli–Shanks
        let r = sqrt_mod_p(2, 17).unwrap();
        assert_eq!(mul_mod(r, r, 17), 2);
    }

    #[test]
    fn inertness() {
        // −3 is a non-residue mod 5 (5 ≡ 2 mod 3), so 5 is inert in Q(√−3).
        assert!(is_inert(-3, 5));
        // 7 ≡ 1 mod 3 splits, 3 ramifies, 2 is excluded.
        assert!(!is_inert(-3, 7));
        assert!(!is_inert(-3, 3));
        assert!(!is_inert(-3, 2));
    }

    #[test]
    fn valuations() {
        let k = qm3();
        // 10 + 5ε = 15/2 + (5/2)√−3 has norm 75, so valuation 1 at 5.
        let x = k
            .from_int(10)
            .add(&k.from_int(5).mul(&eps()).unwrap())
            .unwrap();
        assert_eq!(valuation_at_inert_prime(&x, 5).unwrap(), 1);
        // 2 + ε has norm 3: valuation 0 at 5.
        let y = k.from_int(2).add(&eps()).unwrap();
        assert_eq!(valuation_at_inert_prime(&y, 5).unwrap(), 0);
        assert_eq!(
            valuation_at_inert_prime(&k.from_rational(ratio(1, 25)).unwrap(), 5).unwrap(),
            -2
        );
        assert!(matches!(
            valuation_at_inert_prime(&k.one(), 7),
            Err(FieldError::NotInert { p: 7 })
        ));
    }

    #[test]
    fn residue_field_presentation() {
        // At the inert prime 5 of Q(√−3) the residue field is
        // F_5[x]/(x²+x+1) and ε maps to x.
        let (f, root) = residue_field(&qm3(), 5).unwrap();
        assert_eq!(f, FieldDescriptor::prime_square_with_modulus(5, 1, 1).unwrap());
        assert_eq!(root, (1, 2));
        let ebar = reduce_at_inert_prime(&eps(), 5).unwrap();
        assert_eq!(ebar, f.finite2(0, 1).unwrap());
        // 2 + ε ↦ 2 + x.
        let y = qm3().from_int(2).add(&eps()).unwrap();
        assert_eq!(reduce_at_inert_prime(&y, 5).unwrap(), f.finite2(2, 1).unwrap());
    }

    #[test]
    fn residue_of_rationals() {
        let q = FieldDescriptor::rational();
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(
            reduce_at_inert_prime(&q.from_int(7), 5).unwrap(),
            f5.finite(2).unwrap()
        );
        // 1/6 ≡ 1 mod 5.
        assert_eq!(
            reduce_at_inert_prime(&q.from_rational(ratio(1, 6)).unwrap(), 5).unwrap(),
            f5.finite(1).unwrap()
        );
        assert!(matches!(
            reduce_at_inert_prime(&q.from_rational(ratio(1, 5)).unwrap(), 5),
            Err(FieldError::NonzeroValuation { v: -1 })
        ));
    }

    #[test]
    fn orders() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(mult_order(&f5.from_int(2)).unwrap(), 4);
        assert_eq!(mult_order(&f5.from_int(4)).unwrap(), 2);
        assert_eq!(mult_order(&f5.one()).unwrap(), 1);
        // −(2+ε) reduced at 5 generates F_25^*: order 24.
        let y = qm3().from_int(2).add(&eps()).unwrap().neg();
        let ybar = reduce_at_inert_prime(&y, 5).unwrap();
        assert_eq!(mult_order(&ybar).unwrap(), 24);
        assert!(matches!(
            mult_order(&FieldDescriptor::rational().one()),
            Err(FieldError::NotFinite)
        ));
    }
}
