//! Discriminants, orientations and CM-cycle coordinates attached to the
//! pairs `(r, s)`, plus the class-group bookkeeping behind Heegner cycles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{
    class_number, prime_divisors, reduced_forms, sqrt_residues, BinaryQuadraticForm, Discriminant,
};
use crate::error::{Error, Result};
use crate::quatalg::{det3, HashimotoModel, Matrix3};

/// An admissible `(r, s)` at degree `n`, with `s₁` and `Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RSTuple {
    #[serde(with = "crate::int_serde")]
    pub r: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s: BigInt,
    #[serde(with = "crate::int_serde")]
    pub n: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s1: BigInt,
    pub delta: Discriminant,
}

impl RSTuple {
    /// `r > 0`, or `r = 0` and `s > 0`.
    pub fn is_canonical(&self) -> bool {
        self.r.is_positive() || (self.r.is_zero() && self.s.is_positive())
    }
}

impl fmt::Display for RSTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.delta.value())
    }
}

/// `p(s/2)² − aDrs + bDr² − Dn²` with no parity checks.
pub fn delta_raw(model: &HashimotoModel, n: &BigInt, r: &BigInt, s: &BigInt) -> BigInt {
    let ps2 = &model.p * s * s;
    let cross = BigInt::from(4) * model.ad() * r * s;
    let rr = BigInt::from(4) * &model.b * &model.d * r * r;
    let nn = BigInt::from(4) * &model.d * n * n;
    (ps2 - cross + rr - nn) / 4
}

fn check_parity(model: &HashimotoModel, n: &BigInt, r: &BigInt, s: &BigInt) -> Result<()> {
    if s.is_odd() {
        return Err(Error::Parity(format!("s = {s} must be even")));
    }
    let four = BigInt::from(4);
    if !(n * n * &model.p - r * r).is_multiple_of(&four) {
        return Err(Error::Parity(format!(
            "r² ≡ n²p (mod 4) fails for r = {r}, n = {n}, p = {}",
            model.p
        )));
    }
    Ok(())
}

/// `Δ = (ps² − 4aDrs + 4bDr² − 4Dn²)/4`.
pub fn delta(model: &HashimotoModel, n: &BigInt, r: &BigInt, s: &BigInt) -> Result<Discriminant> {
    check_parity(model, n, r, s)?;
    Discriminant::new(delta_raw(model, n, r, s))
}

/// `s₁ = p(s/2) − aDr`.
pub fn s1_of(model: &HashimotoModel, r: &BigInt, s: &BigInt) -> Result<BigInt> {
    if s.is_odd() {
        return Err(Error::Parity(format!("s = {s} must be even")));
    }
    Ok(&model.p * (s / 2) - model.ad() * r)
}

/// A CM cycle `d_τ Z_τ` in the basis `ē₂, ē₃, ē₄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMVector {
    #[serde(with = "crate::int_serde")]
    pub c2: BigInt,
    #[serde(with = "crate::int_serde")]
    pub c3: BigInt,
    #[serde(with = "crate::int_serde")]
    pub c4: BigInt,
}

impl CMVector {
    pub fn as_array(&self) -> [BigInt; 3] {
        [self.c2.clone(), self.c3.clone(), self.c4.clone()]
    }
}

/// `(aDs − 2bDr, (2aDr − ps)/2, 2D)`.
///
/// The first coordinate is what orthogonality to `ē₂` and `ē₃` forces; halving
/// it as well breaks orthogonality.
pub fn cm_vector(model: &HashimotoModel, r: &BigInt, s: &BigInt) -> Result<CMVector> {
    if s.is_odd() {
        return Err(Error::Parity(format!("s = {s} must be even")));
    }
    let ad = model.ad();
    let two = BigInt::from(2);
    Ok(CMVector {
        c2: &ad * s - &two * &model.b * &model.d * r,
        c3: &ad * r - &model.p * (s / 2),
        c4: two * &model.d,
    })
}

/// Gram matrix of `ē₂, ē₃, ē₄` where `ē₄` is the degree-`n` elliptic class:
/// `[[p, 2aD, r], [2aD, 4bD, s], [r, s, n²]]`.
pub fn extended_gram(model: &HashimotoModel, r: &BigInt, s: &BigInt, n: &BigInt) -> Matrix3 {
    let two_ad = BigInt::from(2) * model.ad();
    [
        [model.p.clone(), two_ad.clone(), r.clone()],
        [two_ad, BigInt::from(4) * &model.b * &model.d, s.clone()],
        [r.clone(), s.clone(), n * n],
    ]
}

/// `Gv` for a Gram matrix `G`.
pub fn gram_apply(g: &Matrix3, v: &[BigInt; 3]) -> [BigInt; 3] {
    let row = |i: usize| &g[i][0] * &v[0] + &g[i][1] * &v[1] + &g[i][2] * &v[2];
    [row(0), row(1), row(2)]
}

/// Determinant of the Gram matrix of `(ē₂, ē₃, d_τ Z_τ)`.
pub fn cm_gram_determinant(
    model: &HashimotoModel,
    r: &BigInt,
    s: &BigInt,
    n: &BigInt,
) -> Result<BigInt> {
    let g = extended_gram(model, r, s, n);
    let v = cm_vector(model, r, s)?.as_array();
    let gv = gram_apply(&g, &v);
    let vv = &v[0] * &gv[0] + &v[1] * &gv[1] + &v[2] * &gv[2];
    let m: Matrix3 = [
        [g[0][0].clone(), g[0][1].clone(), gv[0].clone()],
        [g[1][0].clone(), g[1][1].clone(), gv[1].clone()],
        [gv[0].clone(), gv[1].clone(), vv],
    ];
    Ok(det3(&m))
}

/// `P(s, r) = ps² − 4aDrs + 4bDr²`.
pub fn binary_form_p(model: &HashimotoModel, r: &BigInt, s: &BigInt) -> BigInt {
    &model.p * s * s - BigInt::from(4) * model.ad() * r * s
        + BigInt::from(4) * &model.b * &model.d * r * r
}

/// The closed form `4D²(4Dn² − P(s, r))` that [`cm_gram_determinant`] must equal.
pub fn cm_gram_determinant_expected(
    model: &HashimotoModel,
    r: &BigInt,
    s: &BigInt,
    n: &BigInt,
) -> BigInt {
    let d = &model.d;
    BigInt::from(4) * d * d * (BigInt::from(4) * d * n * n - binary_form_p(model, r, s))
}

/// `(Z_τ, Z_τ) = −4DΔ`.
pub fn humbert_norm_cm(d: &BigInt, delta: &BigInt) -> BigInt {
    -BigInt::from(4) * d * delta
}

fn check_degree(model: &HashimotoModel, n: &BigInt) -> Result<()> {
    let two_k = BigInt::from(2) * &model.k;
    if !n.is_positive() || !n.gcd(&two_k).is_one() {
        return Err(Error::DegreeNotCoprime {
            n: n.clone(),
            two_k,
        });
    }
    Ok(())
}

/// Every `(r, s)` with `(n²p − r²)/4` and `(4bDn² − s²)/4` nonnegative
/// integers and `gcd(r, s, n) = 1`, both signs, before any condition on Δ.
fn admissible_pairs(model: &HashimotoModel, n: &BigInt) -> Vec<(BigInt, BigInt)> {
    let four = BigInt::from(4);
    let np = n * n * &model.p;
    let ns = &four * &model.b * &model.d * n * n;
    let r_max = np.sqrt();
    let s_max = ns.sqrt();
    let mut out = Vec::new();
    let mut r = -r_max.clone();
    while r <= r_max {
        if (&np - &r * &r).is_multiple_of(&four) {
            let mut s = -s_max.clone();
            if s.is_odd() {
                s += 1;
            }
            while s <= s_max {
                if r.gcd(&s).gcd(n).is_one() {
                    out.push((r.clone(), s.clone()));
                }
                s += 2;
            }
        }
        r += 1;
    }
    out
}

/// The canonical (`r > 0`, or `r = 0` and `s > 0`) pairs satisfying the
/// integrality and coprimality conditions, whatever the sign of Δ.
pub fn candidate_pairs(model: &HashimotoModel, n: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    check_degree(model, n)?;
    let mut out: Vec<_> = admissible_pairs(model, n)
        .into_iter()
        .filter(|(r, s)| r.is_positive() || (r.is_zero() && s.is_positive()))
        .collect();
    out.sort();
    Ok(out)
}

/// All admissible `(r, s)` giving a negative discriminant, ordered by
/// `(Δ, r, s)`.
pub fn enumerate_rs(model: &HashimotoModel, n: &BigInt) -> Result<Vec<RSTuple>> {
    check_degree(model, n)?;
    let mut out = Vec::new();
    for (r, s) in admissible_pairs(model, n) {
        let dv = delta_raw(model, n, &r, &s);
        if !dv.is_negative() {
            continue;
        }
        let Ok(delta) = Discriminant::negative(dv) else {
            continue;
        };
        let s1 = s1_of(model, &r, &s)?;
        out.push(RSTuple {
            r,
            s,
            n: n.clone(),
            s1,
            delta,
        });
    }
    out.sort_by(|x, y| (x.delta.value(), &x.r, &x.s).cmp(&(y.delta.value(), &y.r, &y.s)));
    Ok(out)
}

/// Residues `μ mod 2D` with `μ² ≡ mΔ (mod 4D)`; `m` defaults to `p`.
pub fn orientations(
    model: &HashimotoModel,
    delta: &Discriminant,
    m: Option<&BigInt>,
) -> Result<Vec<BigInt>> {
    let m = m.unwrap_or(&model.p);
    sqrt_residues(&(m * delta.value()), &model.d)
}

/// Whether `μ² ≡ mΔ (mod 4D)`.
pub fn is_orientation(model: &HashimotoModel, delta: &BigInt, mu: &BigInt) -> bool {
    let modulus = BigInt::from(4) * &model.d;
    (mu * mu - &model.p * delta).is_multiple_of(&modulus)
}

/// The two configurations a CM point can sit in; the Fricke involution
/// swaps them and negates the orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigTag {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub form: BinaryQuadraticForm,
    pub tag: ConfigTag,
    /// +1 for orientation `μ`, −1 for `−μ`.
    pub orientation_sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportExpansion {
    pub disc: Discriminant,
    pub class_number: usize,
    /// `2ᵗ·h_Δ`, `t` the number of primes dividing `D`.
    #[serde(with = "crate::int_serde")]
    pub oriented_points: BigInt,
    pub entries: Vec<SupportEntry>,
}

/// Formal support of `Z_{Δ,[L],μ,−μ}`: each reduced form once under tag I
/// (orientation `μ`) and once under tag II (orientation `−μ`).
pub fn expand_support(delta: &Discriminant, d: &BigInt) -> Result<SupportExpansion> {
    if !delta.value().is_negative() {
        return Err(Error::NonNegativeDiscriminant(delta.value().clone()));
    }
    let forms = reduced_forms(delta)?;
    let h = class_number(delta)?;
    let t = prime_divisors(d).len();
    let mut entries = Vec::with_capacity(2 * forms.len());
    for (tag, sign) in [(ConfigTag::I, 1), (ConfigTag::II, -1)] {
        for f in &forms {
            entries.push(SupportEntry {
                form: f.clone(),
                tag,
                orientation_sign: sign,
            });
        }
    }
    Ok(SupportExpansion {
        disc: delta.clone(),
        class_number: h,
        oriented_points: (BigInt::one() << t) * BigInt::from(h),
        entries,
    })
}
