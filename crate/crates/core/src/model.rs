//! Hashimoto model search and validation, the singular relations satisfied by
//! the Shimura curve, the embedding `Ψ(τ)` into the Siegel upper half space
//! (used only as a numerical checker), and the `(r, s, s₁)` extraction from a
//! singular relation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{hilbert_symbol_int, is_prime, is_squarefree, prime_divisors, Place};
use crate::error::{Error, Result};
use crate::heegner;
use crate::quatalg::{HashimotoModel, SingularRelation};

/// Smallest odd `k ≥ 3` coprime to `2N`.
pub fn default_k(n_level: &BigInt) -> BigInt {
    let mut k = BigInt::from(3);
    while !k.gcd(n_level).is_one() {
        k += 2u8;
    }
    k
}

/// Outcome of [`validate_model`]; `diagnostic` names the first failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostic: Option<String>,
}

/// Squarefree with an even number of prime factors, or 1.
pub fn is_indefinite_discriminant(d0: &BigInt) -> bool {
    d0.is_one()
        || (d0.is_positive() && is_squarefree(d0) && prime_divisors(d0).len().is_multiple_of(2))
}

pub(crate) fn check_model(m: &HashimotoModel) -> Result<()> {
    match first_failure(m) {
        None => Ok(()),
        Some(msg) => Err(Error::InvalidModel(msg)),
    }
}

fn first_failure(m: &HashimotoModel) -> Option<String> {
    if !m.d0.is_positive() || !m.n_level.is_positive() {
        return Some("D0 and N must be positive".into());
    }
    if !is_indefinite_discriminant(&m.d0) {
        return Some(format!(
            "D0 = {} is not 1 or a squarefree product of an even number of primes",
            m.d0
        ));
    }
    if !m.d0.gcd(&m.n_level).is_one() {
        return Some(format!("gcd(D0, N) = gcd({}, {}) != 1", m.d0, m.n_level));
    }
    if m.d != &m.d0 * &m.n_level {
        return Some(format!("D = {} != D0*N", m.d));
    }
    if !is_prime(&m.p) {
        return Some(format!("p = {} is not prime", m.p));
    }
    if (BigInt::from(2) * &m.d).is_multiple_of(&m.p) {
        return Some(format!(
            "p = {} divides 2D = {}",
            m.p,
            BigInt::from(2) * &m.d
        ));
    }
    if m.a.is_negative() || !m.b.is_positive() {
        return Some("a must be nonnegative and b positive".into());
    }
    let lhs = &m.a * &m.a * &m.d + 1u8;
    let rhs = &m.b * &m.p;
    if lhs != rhs {
        return Some(format!("a^2 D + 1 = {lhs} != b p = {rhs}"));
    }
    if let Some(msg) = hilbert_failure(&m.d0, &m.d, &m.p) {
        return Some(msg);
    }
    if !m.k.is_positive() || m.k.is_even() || !m.k.gcd(&m.n_level).is_one() {
        return Some(format!("k = {} must be odd and coprime to 2N", m.k));
    }
    None
}

/// `(−D, p)_ℓ = −1` exactly for `ℓ | D₀`, checked at `ℓ | 2Dp` and infinity.
fn hilbert_failure(d0: &BigInt, d: &BigInt, p: &BigInt) -> Option<String> {
    let minus_d = -d;
    let mut places: Vec<BigInt> = prime_divisors(&(BigInt::from(2) * d * p));
    places.sort();
    for ell in places {
        let expect = if d0.is_multiple_of(&ell) { -1 } else { 1 };
        let got = hilbert_symbol_int(&minus_d, p, &Place::Prime(ell.clone())).ok()?;
        if got != expect {
            return Some(format!(
                "Hilbert symbol (-D, p)_{ell} = {got}, expected {expect}"
            ));
        }
    }
    if hilbert_symbol_int(&minus_d, p, &Place::Infinity).ok()? != 1 {
        return Some("Hilbert symbol (-D, p) at infinity is -1".into());
    }
    None
}

pub fn validate_model(
    d0: impl Into<BigInt>,
    n_level: impl Into<BigInt>,
    p: impl Into<BigInt>,
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
) -> Validation {
    match HashimotoModel::new(d0, n_level, p, a, b) {
        Ok(_) => Validation {
            valid: true,
            diagnostic: None,
        },
        Err(Error::InvalidModel(msg)) => Validation {
            valid: false,
            diagnostic: Some(msg),
        },
        Err(e) => Validation {
            valid: false,
            diagnostic: Some(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSearchParams {
    #[serde(with = "crate::int_serde")]
    pub d0: BigInt,
    #[serde(with = "crate::int_serde")]
    pub n_level: BigInt,
    #[serde(with = "crate::int_serde")]
    pub p_bound: BigInt,
    /// Every admissible prime up to the bound rather than the first one.
    pub require_all: bool,
    /// Every `a ∈ [0, p)` with `a²D ≡ −1 (mod p)` rather than the smallest.
    pub all_residues: bool,
}

impl ModelSearchParams {
    pub fn new(
        d0: impl Into<BigInt>,
        n_level: impl Into<BigInt>,
        p_bound: impl Into<BigInt>,
    ) -> Self {
        ModelSearchParams {
            d0: d0.into(),
            n_level: n_level.into(),
            p_bound: p_bound.into(),
            require_all: false,
            all_residues: false,
        }
    }

    pub fn all(mut self) -> Self {
        self.require_all = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.d0.is_positive() || !self.n_level.is_positive() || !self.p_bound.is_positive() {
            return Err(Error::InvalidParams(
                "d0, level and p-bound must be positive".into(),
            ));
        }
        if !is_indefinite_discriminant(&self.d0) {
            return Err(Error::InvalidParams(format!(
                "d0 = {} must be 1 or squarefree with an even number of prime factors",
                self.d0
            )));
        }
        if !self.d0.gcd(&self.n_level).is_one() {
            return Err(Error::InvalidParams(format!(
                "gcd(d0, level) = gcd({}, {}) != 1",
                self.d0, self.n_level
            )));
        }
        Ok(())
    }
}

/// Hashimoto models with `p ≤ p_bound`, ascending in `p` then `a`.
pub fn find_models(params: &ModelSearchParams) -> Result<Vec<HashimotoModel>> {
    params.validate()?;
    let d = &params.d0 * &params.n_level;
    let k = default_k(&params.n_level);
    let mut out = Vec::new();
    let mut p = BigInt::from(3);
    while p <= params.p_bound {
        if is_prime(&p)
            && !(BigInt::from(2) * &d).is_multiple_of(&p)
            && hilbert_failure(&params.d0, &d, &p).is_none()
        {
            let target = (&p - 1u8).mod_floor(&p);
            let mut a = BigInt::zero();
            let mut found = false;
            while a < p {
                if (&a * &a * &d).mod_floor(&p) == target {
                    let b = (&a * &a * &d + 1u8) / &p;
                    out.push(HashimotoModel::with_k(
                        params.d0.clone(),
                        params.n_level.clone(),
                        p.clone(),
                        a.clone(),
                        b,
                        k.clone(),
                    )?);
                    found = true;
                    if !params.all_residues {
                        break;
                    }
                }
                a += 1u8;
            }
            if found && !params.require_all {
                break;
            }
        }
        p += 2u8;
    }
    Ok(out)
}

/// `v₁ = (1, 1, −(p−1)/4, 0, 0)` and `v₂ = (0, 2aD, 0, 1, (a²D − b)D)`.
pub fn curve_singular_relations(
    model: &HashimotoModel,
) -> Result<(SingularRelation, SingularRelation)> {
    let four = BigInt::from(4);
    if !(&model.p - 1u8).is_multiple_of(&four) {
        return Err(Error::PrimeNotOneModFour(model.p.clone()));
    }
    let v1 = SingularRelation::new(1, 1, -((&model.p - 1u8) / &four), 0, 0);
    let v2 = SingularRelation::new(
        0,
        BigInt::from(2) * model.ad(),
        0,
        1,
        (&model.a * &model.a * &model.d - &model.b) * &model.d,
    );
    Ok((v1, v2))
}

/// Default relative tolerance of the `Ψ(τ)` residual check.
pub const PSI_TOLERANCE: f64 = 1e-9;

/// Symmetric period matrix `[[τ₁, τ₂], [τ₂, τ₃]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodMatrix {
    pub tau1: Complex64,
    pub tau2: Complex64,
    pub tau2_lower: Complex64,
    pub tau3: Complex64,
}

/// `Ψ(τ) = 1/(pτ) · [[−κ̄² + ((p−1)aD/2)τ + Dκ²τ², κ̄ − (p−1)aDτ − Dκτ²],
/// [same, −1 − 2aDτ + Dτ²]]` with `κ = (1+√p)/2`, `κ̄ = (1−√p)/2`.
pub fn psi_embed(model: &HashimotoModel, tau: Complex64) -> Result<PeriodMatrix> {
    if tau.im <= 0.0 {
        return Err(Error::TauOutsideUpperHalfPlane);
    }
    let p = model.p.to_f64().unwrap();
    let d = model.d.to_f64().unwrap();
    let ad = model.ad().to_f64().unwrap();
    let sp = p.sqrt();
    let kappa = (1.0 + sp) / 2.0;
    let kappa_bar = (1.0 - sp) / 2.0;
    let pre = (tau * p).inv();
    let t2 = tau * tau;
    let off = pre * (kappa_bar - tau * ((p - 1.0) * ad) - t2 * (d * kappa));
    Ok(PeriodMatrix {
        tau1: pre
            * (-kappa_bar * kappa_bar + tau * ((p - 1.0) * ad / 2.0) + t2 * (d * kappa * kappa)),
        tau2: off,
        tau2_lower: off,
        tau3: pre * (-1.0 - tau * (2.0 * ad) + t2 * d),
    })
}

/// `|v(τ)| / Σ|terms|`, the relative residual of a singular relation.
pub fn relative_residual(v: &SingularRelation, m: &PeriodMatrix) -> f64 {
    let c = |x: &BigInt| x.to_f64().unwrap();
    let terms = [
        m.tau1 * c(&v.alpha),
        m.tau2 * c(&v.beta),
        m.tau3 * c(&v.gamma),
        (m.tau2 * m.tau2 - m.tau1 * m.tau3) * c(&v.delta),
        Complex64::new(c(&v.epsilon), 0.0),
    ];
    let sum: Complex64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    if scale == 0.0 {
        0.0
    } else {
        sum.norm() / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiCheck {
    pub tau: Complex64,
    pub residuals: [f64; 2],
    pub tolerance: f64,
    pub passed: bool,
}

/// Evaluates `Ψ(τ)` and checks both curve singular relations against it.
pub fn check_psi(model: &HashimotoModel, tau: Complex64, tolerance: f64) -> Result<PsiCheck> {
    let (v1, v2) = curve_singular_relations(model)?;
    let m = psi_embed(model, tau)?;
    let residuals = [relative_residual(&v1, &m), relative_residual(&v2, &m)];
    Ok(PsiCheck {
        tau,
        residuals,
        tolerance,
        passed: residuals.iter().all(|r| *r < tolerance),
    })
}

/// `r`, `s`, `s₁` read off a singular relation, plus the discriminant
/// `p(s/2)² − aDrs + bDr² − Dn²` they determine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsTriple {
    #[serde(with = "crate::int_serde")]
    pub r: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s1: BigInt,
    #[serde(with = "crate::int_serde")]
    pub delta: BigInt,
}

/// `r = β − 2γ − ((1−p)/2)α`, `s = 2aDβ − 2ε − 2Dδ(a²D − b)`,
/// `s₁ = p(s/2) − aDr`.
pub fn rs_from_relation(model: &HashimotoModel, v: &SingularRelation, n: &BigInt) -> RsTriple {
    let two = BigInt::from(2);
    let half_1mp = (BigInt::one() - &model.p) / 2u8;
    let r = &v.beta - &two * &v.gamma - half_1mp * &v.alpha;
    let s = &two * model.ad() * &v.beta
        - &two * &v.epsilon
        - &two * &model.d * &v.delta * (&model.a * &model.a * &model.d - &model.b);
    let s1 = heegner::s1_of(model, &r, &s).expect("s is even by construction");
    let delta = heegner::delta_raw(model, n, &r, &s);
    RsTriple { r, s, s1, delta }
}
