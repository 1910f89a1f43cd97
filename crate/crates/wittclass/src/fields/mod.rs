//! Field descriptors and exact field elements.
//!
//! Four families are supported:
//!
//! * `Q` — arbitrary-precision rationals;
//! * `Q(sqrt d)` — quadratic extensions for squarefree `d ∉ {0, 1}`,
//!   elements stored as a rational pair `a + b·√d`;
//! * `F_p` — odd prime fields, elements as canonical representatives in
//!   `[0, p)`;
//! * `F_{p^2}` — presented as `F_p[x]/(x² + c₁x + c₀)` for an irreducible
//!   modulus, elements as coordinate pairs.
//!
//! Elements are tagged by their descriptor. Arithmetic between different
//! fields is an error, never a coercion; division by zero is an error. All
//! representations are canonical, so derived equality is field equality.

pub mod predicates;
pub mod residue;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor;
use residue::{inv_mod, legendre, mul_mod, smallest_nonresidue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: {lhs} vs {rhs}")]
    Mismatch { lhs: String, rhs: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("nonzero element required")]
    ZeroArgument,
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("prime {p} is not an odd inert prime for this field")]
    NotInert { p: u64 },
    #[error("element has valuation {v} at the given prime, expected 0")]
    NonzeroValuation { v: i64 },
    #[error("operation requires a finite field")]
    NotFinite,
    #[error("element does not lie in the requested field")]
    WrongField,
}

/// One of the supported exact fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    /// The rational numbers.
    Rational,
    /// `Q(sqrt d)`, `d` squarefree and not 0 or 1.
    Quadratic { d: i64 },
    /// `F_p`, `p` an odd prime.
    Prime { p: u64 },
    /// `F_{p^2} = F_p[x]/(x² + c1·x + c0)`.
    PrimeSquare { p: u64, c1: u64, c0: u64 },
}

impl FieldDescriptor {
    pub fn rational() -> Self {
        FieldDescriptor::Rational
    }

    /// `Q(sqrt d)`; rejects non-squarefree `d` and `d ∈ {0, 1}`.
    pub fn quadratic(d: i64) -> Result<Self, FieldError> {
        if d == 0 || d == 1 {
            return Err(FieldError::InvalidDescriptor(format!(
                "quadratic parameter {d} must not be 0 or 1"
            )));
        }
        if !factor::is_squarefree(d) {
            return Err(FieldError::InvalidDescriptor(format!(
                "quadratic parameter {d} is not squarefree"
            )));
        }
        Ok(FieldDescriptor::Quadratic { d })
    }

    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !factor::is_prime_u64(p) {
            return Err(FieldError::InvalidDescriptor(format!(
                "{p} is not an odd prime"
            )));
        }
        Ok(FieldDescriptor::Prime { p })
    }

    /// `F_{p^2}` with the default modulus `x² − c`, `c` the smallest
    /// positive non-residue mod `p`.
    pub fn prime_square(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !factor::is_prime_u64(p) {
            return Err(FieldError::InvalidDescriptor(format!(
                "{p} is not an odd prime"
            )));
        }
        let c = smallest_nonresidue(p);
        FieldDescriptor::prime_square_with_modulus(p, 0, p - c)
    }

    /// `F_{p^2}` with an explicit irreducible modulus `x² + c1·x + c0`.
    pub fn prime_square_with_modulus(p: u64, c1: u64, c0: u64) -> Result<Self, FieldError> {
        if p == 2 || !factor::is_prime_u64(p) {
            return Err(FieldError::InvalidDescriptor(format!(
                "{p} is not an odd prime"
            )));
        }
        let (c1, c0) = (c1 % p, c0 % p);
        // Irreducible over F_p iff the discriminant c1² − 4c0 is a non-residue.
        let disc = (mul_mod(c1, c1, p) + p - mul_mod(4 % p, c0, p)) % p;
        if legendre(disc, p) != -1 {
            return Err(FieldError::InvalidDescriptor(format!(
                "x^2 + {c1}x + {c0} is reducible mod {p}"
            )));
        }
        Ok(FieldDescriptor::PrimeSquare { p, c1, c0 })
    }

    /// Number of elements for finite fields, `None` otherwise.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Prime { p } => Some(*p),
            FieldDescriptor::PrimeSquare { p, .. } => Some(p * p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Grammar name: `Q`, `Q(sqrt,D)`, `Fp(P)`, `Fp2(P)` or
    /// `Fp2(P;C1,C0)` for a non-default modulus.
    pub fn name(&self) -> String {
        match self {
            FieldDescriptor::Rational => "Q".into(),
            FieldDescriptor::Quadratic { d } => format!("Q(sqrt,{d})"),
            FieldDescriptor::Prime { p } => format!("Fp({p})"),
            FieldDescriptor::PrimeSquare { p, c1, c0 } => {
                let default_c0 = p - smallest_nonresidue(*p);
                if *c1 == 0 && *c0 == default_c0 {
                    format!("Fp2({p})")
                } else {
                    format!("Fp2({p};{c1},{c0})")
                }
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Embeds a small integer.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let value = match self {
            FieldDescriptor::Rational => Value::Rational(BigRational::from_integer(n.into())),
            FieldDescriptor::Quadratic { .. } => Value::Quadratic(
                BigRational::from_integer(n.into()),
                BigRational::zero(),
            ),
            FieldDescriptor::Prime { p } => Value::Finite(reduce_int(n, *p)),
            FieldDescriptor::PrimeSquare { p, .. } => Value::Finite2(reduce_int(n, *p), 0),
        };
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    /// Embeds a rational; valid over `Q` and `Q(sqrt d)`.
    pub fn from_rational(&self, r: BigRational) -> Result<FieldElement, FieldError> {
        let value = match self {
            FieldDescriptor::Rational => Value::Rational(r),
            FieldDescriptor::Quadratic { .. } => Value::Quadratic(r, BigRational::zero()),
            _ => return Err(FieldError::WrongField),
        };
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    /// `a + b·√d` over a quadratic field.
    pub fn quadratic_element(
        &self,
        a: BigRational,
        b: BigRational,
    ) -> Result<FieldElement, FieldError> {
        match self {
            FieldDescriptor::Quadratic { .. } => Ok(FieldElement {
                field: self.clone(),
                value: Value::Quadratic(a, b),
            }),
            _ => Err(FieldError::WrongField),
        }
    }

    /// The adjoined square root `√d` of a quadratic field.
    pub fn surd(&self) -> Result<FieldElement, FieldError> {
        self.quadratic_element(BigRational::zero(), BigRational::one())
    }

    /// Canonical representative of `n` in `F_p`.
    pub fn finite(&self, n: u64) -> Result<FieldElement, FieldError> {
        match self {
            FieldDescriptor::Prime { p } => Ok(FieldElement {
                field: self.clone(),
                value: Value::Finite(n % p),
            }),
            FieldDescriptor::PrimeSquare { p, .. } => Ok(FieldElement {
                field: self.clone(),
                value: Value::Finite2(n % p, 0),
            }),
            _ => Err(FieldError::WrongField),
        }
    }

    /// `c0 + c1·x` in `F_{p^2}`.
    pub fn finite2(&self, c0: u64, c1: u64) -> Result<FieldElement, FieldError> {
        match self {
            FieldDescriptor::PrimeSquare { p, .. } => Ok(FieldElement {
                field: self.clone(),
                value: Value::Finite2(c0 % p, c1 % p),
            }),
            _ => Err(FieldError::WrongField),
        }
    }

    /// The quadratic parameter `d`, if this is `Q(sqrt d)`.
    pub fn quadratic_d(&self) -> Option<i64> {
        match self {
            FieldDescriptor::Quadratic { d } => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn reduce_int(n: i64, p: u64) -> u64 {
    let p_i = p as i128;
    (((n as i128 % p_i) + p_i) % p_i) as u64
}

/// Raw element data; the meaning of each variant depends on the field tag
/// carried by [`FieldElement`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Rational(BigRational),
    /// `a + b·√d`.
    Quadratic(BigRational, BigRational),
    Finite(u64),
    /// `c0 + c1·x`.
    Finite2(u64, u64),
}

/// An exact element of one of the supported fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldDescriptor,
    value: Value,
}

impl FieldElement {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub(crate) fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Quadratic(a, b) => a.is_zero() && b.is_zero(),
            Value::Finite(n) => *n == 0,
            Value::Finite2(c0, c1) => *c0 == 0 && *c1 == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_one(),
            Value::Quadratic(a, b) => a.is_one() && b.is_zero(),
            Value::Finite(n) => *n == 1,
            Value::Finite2(c0, c1) => *c0 == 1 && *c1 == 0,
        }
    }

    /// Rational value, for elements of `Q` or rational elements of
    /// `Q(sqrt d)`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Quadratic(a, b) if b.is_zero() => Some(a),
            _ => None,
        }
    }

    /// Coordinates `(a, b)` of `a + b·√d`.
    pub fn quadratic_parts(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.value {
            Value::Quadratic(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Canonical representative for `F_p` elements.
    pub fn finite_rep(&self) -> Option<u64> {
        match &self.value {
            Value::Finite(n) => Some(*n),
            _ => None,
        }
    }

    /// Coordinates `(c0, c1)` for `F_{p^2}` elements.
    pub fn finite2_rep(&self) -> Option<(u64, u64)> {
        match &self.value {
            Value::Finite2(c0, c1) => Some((*c0, *c1)),
            _ => None,
        }
    }

    fn ensure_same(&self, rhs: &FieldElement) -> Result<(), FieldError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch {
                lhs: self.field.name(),
                rhs: rhs.field.name(),
            })
        }
    }

    pub fn add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure_same(rhs)?;
        let value = match (&self.value, &rhs.value) {
            (Value::Rational(x), Value::Rational(y)) => Value::Rational(x + y),
            (Value::Quadratic(a, b), Value::Quadratic(c, d)) => Value::Quadratic(a + c, b + d),
            (Value::Finite(x), Value::Finite(y)) => {
                let p = self.modulus();
                Value::Finite((x + y) % p)
            }
            (Value::Finite2(a, b), Value::Finite2(c, d)) => {
                let p = self.modulus();
                Value::Finite2((a + c) % p, (b + d) % p)
            }
            _ => unreachable!("value variant always matches field tag"),
        };
        Ok(self.with_value(value))
    }

    pub fn sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FieldElement {
        let value = match &self.value {
            Value::Rational(r) => Value::Rational(-r),
            Value::Quadratic(a, b) => Value::Quadratic(-a, -b),
            Value::Finite(n) => {
                let p = self.modulus();
                Value::Finite(if *n == 0 { 0 } else { p - n })
            }
            Value::Finite2(c0, c1) => {
                let p = self.modulus();
                let neg = |n: u64| if n == 0 { 0 } else { p - n };
                Value::Finite2(neg(*c0), neg(*c1))
            }
        };
        self.with_value(value)
    }

    pub fn mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure_same(rhs)?;
        let value = match (&self.value, &rhs.value) {
            (Value::Rational(x), Value::Rational(y)) => Value::Rational(x * y),
            (Value::Quadratic(a, b), Value::Quadratic(c, d)) => {
                let dd = BigRational::from_integer(self.quad_d().into());
                // (a + b√d)(c + d'√d) = (ac + bd'd) + (ad' + bc)√d
                Value::Quadratic(a * c + b * d * &dd, a * d + b * c)
            }
            (Value::Finite(x), Value::Finite(y)) => Value::Finite(mul_mod(*x, *y, self.modulus())),
            (Value::Finite2(a, b), Value::Finite2(c, d)) => {
                let p = self.modulus();
                let (m1, m0) = self.fp2_modulus();
                // x² = −m1·x − m0
                let ac = mul_mod(*a, *c, p);
                let bd = mul_mod(*b, *d, p);
                let cross = (mul_mod(*a, *d, p) + mul_mod(*b, *c, p)) % p;
                let c0 = (ac + p - mul_mod(m0, bd, p)) % p;
                let c1 = (cross + p - mul_mod(m1, bd, p)) % p;
                Value::Finite2(c0, c1)
            }
            _ => unreachable!("value variant always matches field tag"),
        };
        Ok(self.with_value(value))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(r) => Value::Rational(r.recip()),
            Value::Quadratic(a, b) => {
                let dd = BigRational::from_integer(self.quad_d().into());
                // 1/(a + b√d) = (a − b√d)/(a² − d b²); the norm is nonzero
                // because d is not a rational square.
                let n = a * a - &dd * b * b;
                Value::Quadratic(a / &n, -(b / &n))
            }
            Value::Finite(n) => {
                let p = self.modulus();
                Value::Finite(inv_mod(*n, p).expect("nonzero element of a prime field"))
            }
            Value::Finite2(c0, c1) => {
                let p = self.modulus();
                let (m1, m0) = self.fp2_modulus();
                // Conjugate over F_p is c0 − c1·m1 − c1·x; the norm
                // c0² − c0·c1·m1 + c1²·m0 lies in F_p and is nonzero.
                let norm = (mul_mod(*c0, *c0, p) + mul_mod(mul_mod(*c1, *c1, p), m0, p) + p
                    - mul_mod(mul_mod(*c0, *c1, p), m1, p))
                    % p;
                let ninv = inv_mod(norm, p).expect("norm of a nonzero element is nonzero");
                let conj0 = (c0 + p - mul_mod(*c1, m1, p)) % p;
                let conj1 = p - c1;
                Value::Finite2(mul_mod(conj0, ninv, p), mul_mod(conj1 % p, ninv, p))
            }
        };
        Ok(self.with_value(value))
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.mul(&rhs.inv()?)
    }

    /// Integer power; negative exponents invert (erroring on zero).
    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// The square `x·x`.
    pub fn square(&self) -> FieldElement {
        self.mul(self).expect("same field")
    }

    fn with_value(&self, value: Value) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    fn modulus(&self) -> u64 {
        match &self.field {
            FieldDescriptor::Prime { p } | FieldDescriptor::PrimeSquare { p, .. } => *p,
            _ => unreachable!("modulus requested for an infinite field"),
        }
    }

    fn quad_d(&self) -> i64 {
        match &self.field {
            FieldDescriptor::Quadratic { d } => *d,
            _ => unreachable!("quadratic parameter requested for a non-quadratic field"),
        }
    }

    fn fp2_modulus(&self) -> (u64, u64) {
        match &self.field {
            FieldDescriptor::PrimeSquare { c1, c0, .. } => (*c1, *c0),
            _ => unreachable!("modulus polynomial requested for a non-Fp2 field"),
        }
    }

    /// Total order used for canonical sorting of coefficients; agrees with
    /// the natural order on `Q` and is lexicographic on coordinates
    /// elsewhere. Only meaningful within a single field.
    pub fn sort_cmp(&self, rhs: &FieldElement) -> Ordering {
        match (&self.value, &rhs.value) {
            (Value::Rational(x), Value::Rational(y)) => x.cmp(y),
            (Value::Quadratic(a, b), Value::Quadratic(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Value::Finite(x), Value::Finite(y)) => x.cmp(y),
            (Value::Finite2(a, b), Value::Finite2(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            _ => Ordering::Equal,
        }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElement {
    /// Renders in the element grammar: rationals as `n` or `n/m`,
    /// quadratic elements as `a+b*r` with `r` the adjoined `√d`, finite
    /// elements as representatives, `F_{p^2}` elements as `c0+c1*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => fmt_rational(r, f),
            Value::Quadratic(a, b) => {
                if b.is_zero() {
                    return fmt_rational(a, f);
                }
                if !a.is_zero() {
                    fmt_rational(a, f)?;
                    if b.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if b.is_one() {
                    write!(f, "r")
                } else if *b == -BigRational::one() {
                    write!(f, "-r")
                } else {
                    fmt_rational(b, f)?;
                    write!(f, "*r")
                }
            }
            Value::Finite(n) => write!(f, "{n}"),
            Value::Finite2(c0, c1) => {
                if *c1 == 0 {
                    return write!(f, "{c0}");
                }
                if *c0 != 0 {
                    write!(f, "{c0}+")?;
                }
                if *c1 == 1 {
                    write!(f, "t")
                } else {
                    write!(f, "{c1}*t")
                }
            }
        }
    }
}

/// `BigRational` from an integer pair, for test and builder ergonomics.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
