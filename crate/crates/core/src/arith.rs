//! Exact number-theoretic primitives: Kronecker and Hilbert symbols,
//! discriminants, square divisors, square roots modulo `4D`, and class
//! numbers of imaginary quadratic orders via reduced binary quadratic forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// True iff `v` is congruent to 0 or 1 modulo 4.
pub fn is_discriminant(v: &BigInt) -> bool {
    let r = v.mod_floor(&BigInt::from(4));
    r.is_zero() || r.is_one()
}

/// An integer congruent to 0 or 1 mod 4.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Discriminant(#[serde(with = "crate::int_serde")] BigInt);

impl Discriminant {
    pub fn new(value: BigInt) -> Result<Self> {
        if is_discriminant(&value) {
            Ok(Discriminant(value))
        } else {
            Err(Error::NotADiscriminant(value))
        }
    }

    /// A discriminant of an imaginary quadratic order.
    pub fn negative(value: BigInt) -> Result<Self> {
        if !value.is_negative() {
            return Err(Error::NonNegativeDiscriminant(value));
        }
        Self::new(value)
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn into_inner(self) -> BigInt {
        self.0
    }
}

impl From<Discriminant> for BigInt {
    fn from(d: Discriminant) -> BigInt {
        d.0
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The form `a x² + b xy + c y²`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    #[serde(with = "crate::int_serde")]
    pub a: BigInt,
    #[serde(with = "crate::int_serde")]
    pub b: BigInt,
    #[serde(with = "crate::int_serde")]
    pub c: BigInt,
}

impl BinaryQuadraticForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        BinaryQuadraticForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if !self.a.is_positive() || abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigInt) -> i8 {
    debug_assert!(n.is_positive() && n.is_odd());
    let eight = BigInt::from(8);
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % &eight).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let three = BigInt::from(3);
        if &a % 4u8 == three && &n % 4u8 == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)`, the extension of the Jacobi symbol to all
/// nonzero `n`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let mut t = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            t = -t;
        }
    }
    let twos = n.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return Ok(0);
        }
        let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if twos % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        n >>= twos;
    }
    Ok(t * jacobi(a, &n))
}

pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    if let Some(m) = n.to_u64() {
        if m < 4 {
            return true;
        }
        if m % 2 == 0 {
            return false;
        }
        let mut q = 3u64;
        while q * q <= m {
            if m % q == 0 {
                return false;
            }
            q += 2;
        }
        return true;
    }
    matches!(factorize(n).as_slice(), [(_, 1)])
}

/// Prime factorisation of `|n|` by trial division, ascending primes.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut q = BigInt::from(2);
    while &q * &q <= m {
        if m.is_multiple_of(&q) {
            let mut e = 0;
            while m.is_multiple_of(&q) {
                m /= &q;
                e += 1;
            }
            out.push((q.clone(), e));
        }
        q += if q == BigInt::from(2) { 1 } else { 2 };
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero() && factorize(n).iter().all(|(_, e)| *e == 1)
}

/// A place of the rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(BigInt),
    Infinity,
}

impl Place {
    pub fn prime(p: impl Into<BigInt>) -> Result<Place> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => p.fmt(f),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// `n·d` lies in the same square class as `n/d`.
fn square_class_rep(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    while u.is_multiple_of(p) {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Hilbert symbol `(a, b)_v`: 1 iff `z² = a x² + b y²` has a nontrivial
/// solution over the completion at `v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let a = square_class_rep(a);
    let b = square_class_rep(b);
    let p = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            });
        }
        Place::Prime(p) => p,
    };
    let (alpha, u) = split_valuation(&a, p);
    let (beta, v) = split_valuation(&b, p);
    if p == &BigInt::from(2) {
        let eps = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(4)).to_u32().unwrap();
            (r - 1) / 2
        };
        let omega = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
            u32::from(r == 3 || r == 5)
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let half = ((p - 1u8) / 2u8).mod_floor(&BigInt::from(2));
    let mut t: i8 = if (alpha * beta) % 2 == 1 && half.is_one() {
        -1
    } else {
        1
    };
    if beta % 2 == 1 {
        t *= kronecker_symbol(&u, p)?;
    }
    if alpha % 2 == 1 {
        t *= kronecker_symbol(&v, p)?;
    }
    Ok(t)
}

/// Integer convenience wrapper around [`hilbert_symbol`].
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, place: &Place) -> Result<i8> {
    hilbert_symbol(
        &BigRational::from_integer(a.clone()),
        &BigRational::from_integer(b.clone()),
        place,
    )
}

/// Reduced primitive forms of a negative discriminant, one per class of
/// `Pic(O_Δ)`, sorted lexicographically by `(a, b, c)`.
pub fn reduced_forms(disc: &Discriminant) -> Result<Vec<BinaryQuadraticForm>> {
    let delta = disc.value();
    if !delta.is_negative() {
        return Err(Error::NonNegativeDiscriminant(delta.clone()));
    }
    let abs = -delta;
    let four = BigInt::from(4);
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while BigInt::from(3) * &a * &a <= abs {
        let mut b = -&a + 1u8;
        while b <= a {
            let num = &b * &b - delta;
            let den = &four * &a;
            if num.is_multiple_of(&den) {
                let f = BinaryQuadraticForm {
                    a: a.clone(),
                    b: b.clone(),
                    c: num / den,
                };
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 1u8;
        }
        a += 1u8;
    }
    out.sort();
    Ok(out)
}

/// The class number `h_Δ` of the imaginary quadratic order of discriminant Δ.
pub fn class_number(disc: &Discriminant) -> Result<usize> {
    Ok(reduced_forms(disc)?.len())
}

/// All `d ≥ 1` with `d² | Δ`, ascending.
pub fn square_divisors(delta: &BigInt) -> Result<Vec<BigInt>> {
    if delta.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let abs = delta.abs();
    let mut out = Vec::new();
    let limit = abs.sqrt();
    let mut d = BigInt::one();
    while d <= limit {
        if abs.is_multiple_of(&(&d * &d)) {
            out.push(d.clone());
        }
        d += 1u8;
    }
    Ok(out)
}

/// All residues `μ ∈ [0, 2D)` with `μ² ≡ c (mod 4D)`, ascending.
pub fn sqrt_residues(c: &BigInt, d: &BigInt) -> Result<Vec<BigInt>> {
    if !d.is_positive() {
        return Err(Error::ZeroModulus);
    }
    let modulus = BigInt::from(4) * d;
    let bound = BigInt::from(2) * d;
    let target = c.mod_floor(&modulus);
    let mut out = Vec::new();
    let mut mu = BigInt::zero();
    while mu < bound {
        if (&mu * &mu).mod_floor(&modulus) == target {
            out.push(mu.clone());
        }
        mu += 1u8;
    }
    Ok(out)
}
