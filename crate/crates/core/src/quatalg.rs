//! Exact arithmetic in Hashimoto's model `B = Q⟨i, j⟩`, `i² = −D`, `j² = p`,
//! `ij = −ji`, together with the Eichler order basis, the symplectic pairing,
//! the Rosati involution and the Néron–Severi / Humbert lattice Gram matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::Result;

/// The datum `(D₀, N, D, p, a, b, k)` with `D = D₀N` and `a²D + 1 = bp`.
///
/// Construct through [`HashimotoModel::new`] (or [`crate::model::validate_model`])
/// so that every invariant has been checked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HashimotoModel {
    #[serde(with = "crate::int_serde")]
    pub d0: BigInt,
    #[serde(with = "crate::int_serde")]
    pub n_level: BigInt,
    #[serde(with = "crate::int_serde")]
    pub d: BigInt,
    #[serde(with = "crate::int_serde")]
    pub p: BigInt,
    #[serde(with = "crate::int_serde")]
    pub a: BigInt,
    #[serde(with = "crate::int_serde")]
    pub b: BigInt,
    #[serde(with = "crate::int_serde")]
    pub k: BigInt,
}

impl HashimotoModel {
    /// Validated model with the default level parameter `k`.
    pub fn new(
        d0: impl Into<BigInt>,
        n_level: impl Into<BigInt>,
        p: impl Into<BigInt>,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
    ) -> Result<Self> {
        let n_level = n_level.into();
        let k = crate::model::default_k(&n_level);
        Self::with_k(d0, n_level, p, a, b, k)
    }

    pub fn with_k(
        d0: impl Into<BigInt>,
        n_level: impl Into<BigInt>,
        p: impl Into<BigInt>,
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        k: impl Into<BigInt>,
    ) -> Result<Self> {
        let (d0, n_level) = (d0.into(), n_level.into());
        let model = HashimotoModel {
            d: &d0 * &n_level,
            d0,
            n_level,
            p: p.into(),
            a: a.into(),
            b: b.into(),
            k: k.into(),
        };
        crate::model::check_model(&model)?;
        Ok(model)
    }

    /// `a·D`, which appears throughout the intersection matrices.
    pub fn ad(&self) -> BigInt {
        &self.a * &self.d
    }

    pub fn algebra(&self) -> QuaternionAlgebra {
        QuaternionAlgebra {
            d: self.d.clone(),
            p: self.p.clone(),
        }
    }
}

impl fmt::Display for HashimotoModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D0={} N={} D={} (p,a,b)=({},{},{}) k={}",
            self.d0, self.n_level, self.d, self.p, self.a, self.b, self.k
        )
    }
}

/// `x0 + x1·i + x2·j + x3·ij` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternionElement {
    pub x0: BigRational,
    pub x1: BigRational,
    pub x2: BigRational,
    pub x3: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QuaternionElement {
    pub fn new(x0: BigRational, x1: BigRational, x2: BigRational, x3: BigRational) -> Self {
        QuaternionElement { x0, x1, x2, x3 }
    }

    pub fn from_ints(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Self::new(rat(x0), rat(x1), rat(x2), rat(x3))
    }

    pub fn scalar(c: BigRational) -> Self {
        Self::new(
            c,
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn ij() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.x0, &self.x1, &self.x2, &self.x3]
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.x0 * c, &self.x1 * c, &self.x2 * c, &self.x3 * c)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.x0.clone(), -&self.x1, -&self.x2, -&self.x3)
    }

    pub fn reduced_trace(&self) -> BigRational {
        &self.x0 * rat(2)
    }

    pub fn is_scalar(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero() && self.x3.is_zero()
    }
}

impl Add for &QuaternionElement {
    type Output = QuaternionElement;
    fn add(self, o: &QuaternionElement) -> QuaternionElement {
        QuaternionElement::new(
            &self.x0 + &o.x0,
            &self.x1 + &o.x1,
            &self.x2 + &o.x2,
            &self.x3 + &o.x3,
        )
    }
}

impl Sub for &QuaternionElement {
    type Output = QuaternionElement;
    fn sub(self, o: &QuaternionElement) -> QuaternionElement {
        QuaternionElement::new(
            &self.x0 - &o.x0,
            &self.x1 - &o.x1,
            &self.x2 - &o.x2,
            &self.x3 - &o.x3,
        )
    }
}

impl Neg for &QuaternionElement {
    type Output = QuaternionElement;
    fn neg(self) -> QuaternionElement {
        QuaternionElement::new(-&self.x0, -&self.x1, -&self.x2, -&self.x3)
    }
}

impl fmt::Display for QuaternionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i + {}j + {}ij",
            self.x0, self.x1, self.x2, self.x3
        )
    }
}

/// The algebra with `i² = −D`, `j² = p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub d: BigInt,
    pub p: BigInt,
}

impl QuaternionAlgebra {
    pub fn new(d: impl Into<BigInt>, p: impl Into<BigInt>) -> Self {
        QuaternionAlgebra {
            d: d.into(),
            p: p.into(),
        }
    }

    pub fn mul(&self, x: &QuaternionElement, y: &QuaternionElement) -> QuaternionElement {
        let d = rat(self.d.clone());
        let p = rat(self.p.clone());
        let dp = &d * &p;
        let [a0, a1, a2, a3] = x.coords();
        let [b0, b1, b2, b3] = y.coords();
        // i·ij = −D j, ij·i = D j, j·ij = −p i, ij·j = p i, (ij)² = Dp
        QuaternionElement::new(
            a0 * b0 - &d * a1 * b1 + &p * a2 * b2 + &dp * a3 * b3,
            a0 * b1 + a1 * b0 - &p * a2 * b3 + &p * a3 * b2,
            a0 * b2 + a2 * b0 - &d * a1 * b3 + &d * a3 * b1,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        )
    }

    /// `x · conj(x)`, a scalar.
    pub fn reduced_norm(&self, x: &QuaternionElement) -> BigRational {
        let d = rat(self.d.clone());
        let p = rat(self.p.clone());
        &x.x0 * &x.x0 + &d * &x.x1 * &x.x1 - &p * &x.x2 * &x.x2 - &d * &p * &x.x3 * &x.x3
    }

    pub fn inverse(&self, x: &QuaternionElement) -> Option<QuaternionElement> {
        let n = self.reduced_norm(x);
        if n.is_zero() {
            return None;
        }
        Some(x.conjugate().scale(&n.recip()))
    }

    /// `E(x, y) = tr(x · conj(y) · i⁻¹)`.
    pub fn pairing(&self, x: &QuaternionElement, y: &QuaternionElement) -> BigRational {
        let i_inv = self.inverse(&QuaternionElement::i()).expect("D > 0");
        self.mul(&self.mul(x, &y.conjugate()), &i_inv)
            .reduced_trace()
    }

    /// The Rosati involution `x ↦ i⁻¹ · conj(x) · i`.
    pub fn rosati(&self, x: &QuaternionElement) -> QuaternionElement {
        let i = QuaternionElement::i();
        let i_inv = self.inverse(&i).expect("D > 0");
        self.mul(&self.mul(&i_inv, &x.conjugate()), &i)
    }

    /// Coordinates of `x` in a basis of `B`, or `None` if the vectors are
    /// linearly dependent.
    pub fn coordinates(
        &self,
        basis: &[QuaternionElement; 4],
        x: &QuaternionElement,
    ) -> Option<[BigRational; 4]> {
        // Augmented matrix with the basis vectors as columns.
        let mut m: Vec<Vec<BigRational>> = (0..4)
            .map(|row| {
                let mut r: Vec<BigRational> =
                    basis.iter().map(|e| e.coords()[row].clone()).collect();
                r.push(x.coords()[row].clone());
                r
            })
            .collect();
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        Some([
            m[0][4].clone(),
            m[1][4].clone(),
            m[2][4].clone(),
            m[3][4].clone(),
        ])
    }
}

pub fn quat_mul(
    x: &QuaternionElement,
    y: &QuaternionElement,
    model: &HashimotoModel,
) -> QuaternionElement {
    model.algebra().mul(x, y)
}

pub fn reduced_trace(x: &QuaternionElement) -> BigRational {
    x.reduced_trace()
}

pub fn reduced_norm(x: &QuaternionElement, model: &HashimotoModel) -> BigRational {
    model.algebra().reduced_norm(x)
}

pub fn conjugate(x: &QuaternionElement) -> QuaternionElement {
    x.conjugate()
}

/// `e₁ = 1, e₂ = (1+j)/2, e₃ = (aDj + ij)/p, e₄ = (i + ij)/2`.
pub fn eichler_basis(model: &HashimotoModel) -> [QuaternionElement; 4] {
    let half = BigRational::new(1.into(), 2.into());
    let zero = BigRational::zero;
    let p = &model.p;
    [
        QuaternionElement::one(),
        QuaternionElement::new(half.clone(), zero(), half.clone(), zero()),
        QuaternionElement::new(
            zero(),
            zero(),
            BigRational::new(model.ad(), p.clone()),
            BigRational::new(BigInt::one(), p.clone()),
        ),
        QuaternionElement::new(zero(), half.clone(), zero(), half),
    ]
}

/// Symplectic basis `η₁ = e₄ − ((p−1)/2)·e₃`, `η₂ = −aD·e₁ − e₃`, `η₃ = e₁`,
/// `η₄ = e₂` with `E(η₁, η₃) = E(η₂, η₄) = 1` and all other pairings of
/// distinct basis vectors zero up to skew-symmetry.
pub fn symplectic_basis(model: &HashimotoModel) -> [QuaternionElement; 4] {
    let [e1, e2, e3, e4] = eichler_basis(model);
    let half_pm1 = rat((&model.p - 1u8) / 2u8);
    let eta1 = &e4 - &e3.scale(&half_pm1);
    let eta2 = &(-&e1.scale(&rat(model.ad()))) - &e3;
    [eta1, eta2, e1, e2]
}

pub fn pairing_e(
    x: &QuaternionElement,
    y: &QuaternionElement,
    model: &HashimotoModel,
) -> BigRational {
    model.algebra().pairing(x, y)
}

pub fn rosati(x: &QuaternionElement, model: &HashimotoModel) -> QuaternionElement {
    model.algebra().rosati(x)
}

pub type Matrix3 = [[BigInt; 3]; 3];
pub type Matrix2 = [[BigInt; 2]; 2];

/// Intersection matrix of `e₁, e₂, e₃` on the generic Néron–Severi group.
pub fn ns_intersection_matrix(model: &HashimotoModel) -> Matrix3 {
    let z = BigInt::from;
    let ad = model.ad();
    [
        [z(2), z(1), z(0)],
        [z(1), (BigInt::one() - &model.p) / 2u8, ad.clone()],
        [z(0), ad, BigInt::from(2) * &model.b * &model.d],
    ]
}

/// Humbert-norm Gram matrix of `ē₂, ē₃`: `[[p, 2aD], [2aD, 4bD]]`.
pub fn humbert_gram(model: &HashimotoModel) -> Matrix2 {
    let two_ad = BigInt::from(2) * model.ad();
    [
        [model.p.clone(), two_ad.clone()],
        [two_ad, BigInt::from(4) * &model.b * &model.d],
    ]
}

pub fn det2(m: &Matrix2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn det3(m: &Matrix3) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// `ατ₁ + βτ₂ + γτ₃ + δ(τ₂² − τ₁τ₃) + ε = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingularRelation {
    #[serde(with = "crate::int_serde")]
    pub alpha: BigInt,
    #[serde(with = "crate::int_serde")]
    pub beta: BigInt,
    #[serde(with = "crate::int_serde")]
    pub gamma: BigInt,
    #[serde(with = "crate::int_serde")]
    pub delta: BigInt,
    #[serde(with = "crate::int_serde")]
    pub epsilon: BigInt,
}

impl SingularRelation {
    pub fn new(
        alpha: impl Into<BigInt>,
        beta: impl Into<BigInt>,
        gamma: impl Into<BigInt>,
        delta: impl Into<BigInt>,
        epsilon: impl Into<BigInt>,
    ) -> Self {
        SingularRelation {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
            delta: delta.into(),
            epsilon: epsilon.into(),
        }
    }

    /// gcd of the five entries (0 for the zero relation).
    pub fn content(&self) -> BigInt {
        [&self.beta, &self.gamma, &self.delta, &self.epsilon]
            .into_iter()
            .fold(self.alpha.abs(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }
}

impl fmt::Display for SingularRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.alpha, self.beta, self.gamma, self.delta, self.epsilon
        )
    }
}

/// `H(v) = β² − 4αγ − 4δε`.
pub fn humbert_invariant(v: &SingularRelation) -> BigInt {
    let four = BigInt::from(4);
    &v.beta * &v.beta - &four * &v.alpha * &v.gamma - &four * &v.delta * &v.epsilon
}

/// `(b₁ + b₄)² − 4(b₁b₄ − b₃b₂ − a·dd)` for the skew matrix
/// `[[A, B], [−Bᵗ, D]]` with `A = [[0, a], [−a, 0]]`, `B = [[b₁, b₂], [b₃, b₄]]`
/// and `D = [[0, dd], [−dd, 0]]`.
pub fn humbert_invariant_matrix(
    a: &BigInt,
    b1: &BigInt,
    b2: &BigInt,
    b3: &BigInt,
    b4: &BigInt,
    dd: &BigInt,
) -> BigInt {
    let s = b1 + b4;
    &s * &s - BigInt::from(4) * (b1 * b4 - b3 * b2 - a * dd)
}

/// The 5-tuple `(b₂, b₄ − b₁, −b₃, −a, dd)` of a skew-matrix relation.
pub fn matrix_to_tuple(
    a: &BigInt,
    b1: &BigInt,
    b2: &BigInt,
    b3: &BigInt,
    b4: &BigInt,
    dd: &BigInt,
) -> SingularRelation {
    SingularRelation {
        alpha: b2.clone(),
        beta: b4 - b1,
        gamma: -b3,
        delta: -a,
        epsilon: dd.clone(),
    }
}
