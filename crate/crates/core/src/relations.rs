//! Assembly and audit of the formal relation
//! `Σ_[L] ε_{P,Q}([L]) Σ_{r,s} Σ_{d²|Δ} d·Z_{Δ/d², [L], s₁/d, −s₁/d} ≡ 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{is_discriminant, square_divisors, Discriminant};
use crate::error::{Error, Result};
use crate::heegner::{delta_raw, enumerate_rs, is_orientation, s1_of, RSTuple};
use crate::quatalg::HashimotoModel;
use crate::thetasign::{
    configuration_table, epsilon_sign, even_characteristics, Calibration, ThetaCharacteristic,
};

pub const TOOL_VERSION: &str = concat!("heegner-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(with = "crate::int_serde")]
    pub r: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s: BigInt,
    #[serde(with = "crate::int_serde")]
    pub d: BigInt,
}

/// `coefficient · Z_{disc, [level_class], mu, −mu}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationTerm {
    #[serde(with = "crate::int_serde")]
    pub coefficient: BigInt,
    pub disc: Discriminant,
    pub level_class: ThetaCharacteristic,
    #[serde(with = "crate::int_serde")]
    pub mu: BigInt,
    pub provenance: Provenance,
}

impl fmt::Display for RelationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coefficient.is_negative() {
            "-"
        } else {
            "+"
        };
        write!(
            f,
            "{}{} · Z_{{{},[{}],{},{}}}",
            sign,
            self.coefficient.abs(),
            self.disc,
            self.level_class,
            self.mu,
            -&self.mu
        )
    }
}

/// A square divisor `d > 1` whose quotient `Δ/d²` is a discriminant but for
/// which `s₁/d` is not an integer orientation of `Δ/d²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedDivisor {
    #[serde(with = "crate::int_serde")]
    pub r: BigInt,
    #[serde(with = "crate::int_serde")]
    pub s: BigInt,
    #[serde(with = "crate::int_serde")]
    pub d: BigInt,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub model: HashimotoModel,
    #[serde(with = "crate::int_serde")]
    pub n: BigInt,
    #[serde(rename = "P")]
    pub p: ThetaCharacteristic,
    #[serde(rename = "Q")]
    pub q: ThetaCharacteristic,
    pub terms: Vec<RelationTerm>,
    pub skipped_classes: Vec<ThetaCharacteristic>,
    pub dropped_divisors: Vec<DroppedDivisor>,
    pub calibration: Calibration,
    pub tool_version: String,
    pub empty: bool,
    pub warnings: Vec<String>,
}

impl RelationReport {
    /// One term per line in the `coefficient · Z_{…}` notation, followed by
    /// `≡ 0`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out.push_str(if self.empty {
            "0 ≡ 0 (empty relation)\n"
        } else {
            "≡ 0\n"
        });
        out
    }
}

/// Canonical `(r, s, Δ)` lists for the known models at degree 1, keyed by
/// `(D₀, N, p, a, b)`.
type ModelKey = (i64, i64, i64, i64, i64);
type Tuples = &'static [(i64, i64, i64)];

const REFERENCE_TUPLES: &[(ModelKey, Tuples)] = &[
    ((6, 1, 5, 2, 5), &[(1, 4, -4), (1, 6, -3)]),
    (
        (26, 1, 5, 2, 21),
        &[(1, 18, -11), (1, 20, -20), (1, 22, -19)],
    ),
    (
        (26, 1, 149, 19, 63),
        &[(1, 6, -11), (3, 20, -24), (7, 46, -11), (9, 60, -8)],
    ),
];

/// The reference canonical tuples for `model` at degree `n`, if any.
pub fn reference_tuples(
    model: &HashimotoModel,
    n: &BigInt,
) -> Option<Vec<(BigInt, BigInt, BigInt)>> {
    if !n.is_one() {
        return None;
    }
    let key = [&model.d0, &model.n_level, &model.p, &model.a, &model.b];
    REFERENCE_TUPLES
        .iter()
        .find_map(|((d0, nl, p, a, b), list)| {
            let want = [d0, nl, p, a, b].map(|v| BigInt::from(*v));
            (key.iter().zip(want.iter()).all(|(x, y)| *x == y)).then(|| {
                list.iter()
                    .map(|(r, s, d)| (BigInt::from(*r), BigInt::from(*s), BigInt::from(*d)))
                    .collect()
            })
        })
}

/// Warnings for canonical tuples outside, or reference tuples missing from,
/// the reference list of a known model.
pub fn reference_warnings(
    model: &HashimotoModel,
    n: &BigInt,
    canonical: &[(BigInt, BigInt, BigInt)],
) -> Vec<String> {
    let Some(reference) = reference_tuples(model, n) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for t in canonical {
        if !reference.contains(t) {
            out.push(format!(
                "tuple ({},{},{}) not among the reference tuples for this model",
                t.0, t.1, t.2
            ));
        }
    }
    for t in &reference {
        if !canonical.contains(t) {
            out.push(format!(
                "reference tuple ({},{},{}) was not produced",
                t.0, t.1, t.2
            ));
        }
    }
    out
}

/// Canonical representatives (`r > 0`, or `r = 0` and `s > 0`) of the
/// enumerated tuples, as `(r, s, Δ)` sorted by `(r, s)`.
pub fn summarize_discs(
    model: &HashimotoModel,
    n: &BigInt,
) -> Result<Vec<(BigInt, BigInt, BigInt)>> {
    let mut out: Vec<_> = enumerate_rs(model, n)?
        .into_iter()
        .filter(RSTuple::is_canonical)
        .map(|t| (t.r, t.s, t.delta.into_inner()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

enum DivisorOutcome {
    Emit { disc: BigInt, mu: BigInt },
    Drop(String),
    NotDiscriminant,
}

fn divisor_outcome(model: &HashimotoModel, t: &RSTuple, d: &BigInt) -> DivisorOutcome {
    let d2 = d * d;
    let disc = t.delta.value() / &d2;
    if !is_discriminant(&disc) {
        return DivisorOutcome::NotDiscriminant;
    }
    if !t.s1.is_multiple_of(d) {
        return DivisorOutcome::Drop(format!("d = {d} does not divide s1 = {}", t.s1));
    }
    let mu = &t.s1 / d;
    if !is_orientation(model, &disc, &mu) {
        return DivisorOutcome::Drop(format!(
            "mu = s1/d = {mu} is not an orientation of disc {disc} (mu² ≢ p·disc mod 4D)"
        ));
    }
    DivisorOutcome::Emit { disc, mu }
}

/// Builds the relation for `model`, degree `n` and the torsion pair `(P, Q)`.
///
/// Square divisors `d > 1` are kept only when `Δ/d²` is a discriminant and
/// `s₁/d` is an integer orientation of it; the remaining ones are listed in
/// `dropped_divisors` with a warning.
pub fn build_relation(
    model: &HashimotoModel,
    n: &BigInt,
    p: &ThetaCharacteristic,
    q: &ThetaCharacteristic,
    calibration: &Calibration,
) -> Result<RelationReport> {
    if p == q {
        return Err(Error::SameTorsionPoints);
    }
    calibration.index_of(p)?;
    calibration.index_of(q)?;
    let tuples = enumerate_rs(model, n)?;

    let mut labels = Vec::new();
    let mut dropped = Vec::new();
    for t in &tuples {
        for d in square_divisors(t.delta.value())? {
            match divisor_outcome(model, t, &d) {
                DivisorOutcome::Emit { disc, mu } => labels.push((disc, mu, t, d)),
                DivisorOutcome::Drop(reason) => dropped.push(DroppedDivisor {
                    r: t.r.clone(),
                    s: t.s.clone(),
                    d,
                    reason,
                }),
                DivisorOutcome::NotDiscriminant => {}
            }
        }
    }

    let mut terms = Vec::new();
    let mut skipped = Vec::new();
    for l in even_characteristics() {
        let eps = epsilon_sign(p, q, &l, calibration)?;
        if eps == 0 {
            skipped.push(l);
            continue;
        }
        let mut block: Vec<RelationTerm> = labels
            .iter()
            .map(|(disc, mu, t, d)| RelationTerm {
                coefficient: BigInt::from(eps) * d,
                disc: Discriminant::new(disc.clone()).expect("checked above"),
                level_class: l,
                mu: mu.clone(),
                provenance: Provenance {
                    r: t.r.clone(),
                    s: t.s.clone(),
                    d: d.clone(),
                },
            })
            .collect();
        // −3 before −4, +μ before −μ.
        block.sort_by(|x, y| {
            (
                y.disc.value(),
                &y.mu,
                &x.provenance.r,
                &x.provenance.s,
                &x.provenance.d,
            )
                .cmp(&(
                    x.disc.value(),
                    &x.mu,
                    &y.provenance.r,
                    &y.provenance.s,
                    &y.provenance.d,
                ))
        });
        terms.extend(block);
    }

    let canonical: Vec<_> = tuples
        .iter()
        .filter(|t| t.is_canonical())
        .map(|t| (t.r.clone(), t.s.clone(), t.delta.value().clone()))
        .collect();
    let mut canonical = canonical;
    canonical.sort();
    let mut warnings = reference_warnings(model, n, &canonical);
    for dd in &dropped {
        warnings.push(format!(
            "dropped d = {} for (r,s) = ({},{}): {}",
            dd.d, dd.r, dd.s, dd.reason
        ));
    }
    let empty = terms.is_empty();
    if empty {
        warnings.push("empty relation".to_string());
    }

    Ok(RelationReport {
        model: model.clone(),
        n: n.clone(),
        p: *p,
        q: *q,
        terms,
        skipped_classes: skipped,
        dropped_divisors: dropped,
        calibration: calibration.clone(),
        tool_version: TOOL_VERSION.to_string(),
        empty,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub checks: Vec<CheckResult>,
}

impl RelationCheck {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, failures: Vec<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: failures.is_empty(),
        failures,
    }
}

/// Re-derives every term invariant of `report`; failures are returned as data.
pub fn check_relation(report: &RelationReport) -> RelationCheck {
    let model = &report.model;
    let mut orientation = Vec::new();
    let mut discs = Vec::new();
    let mut signs = Vec::new();
    let mut provenance = Vec::new();
    let mut ordering = Vec::new();

    let rows: Vec<_> = configuration_table()
        .into_iter()
        .map(|r| r.even_char)
        .collect();
    let mut last_row = 0;
    for (i, t) in report.terms.iter().enumerate() {
        let dv = t.disc.value();
        if !is_orientation(model, dv, &t.mu) {
            orientation.push(format!("term {i}: mu = {} fails mu² ≡ p·{dv} mod 4D", t.mu));
        }
        if !dv.is_negative() || !is_discriminant(dv) {
            discs.push(format!("term {i}: {dv} is not a negative discriminant"));
        }
        let d = &t.provenance.d;
        match epsilon_sign(&report.p, &report.q, &t.level_class, &report.calibration) {
            Ok(eps) if eps != 0 && t.coefficient == BigInt::from(eps) * d && d.is_positive() => {}
            Ok(eps) => signs.push(format!(
                "term {i}: coefficient {} but ε·d = {}",
                t.coefficient,
                BigInt::from(eps) * d
            )),
            Err(e) => signs.push(format!("term {i}: {e}")),
        }
        let (r, s) = (&t.provenance.r, &t.provenance.s);
        let raw = delta_raw(model, &report.n, r, s);
        let ok =
            !d.is_zero() && s1_of(model, r, s).is_ok_and(|s1| s1 == &t.mu * d) && raw == dv * d * d;
        if !ok {
            provenance.push(format!(
                "term {i}: (r,s,d) = ({r},{s},{d}) does not reproduce (disc, mu)"
            ));
        }
        match rows.iter().position(|c| *c == t.level_class) {
            Some(pos) if pos >= last_row => last_row = pos,
            _ => ordering.push(format!(
                "term {i}: level class {} out of order",
                t.level_class
            )),
        }
    }

    // Within each class, (disc, μ) and (disc, −μ) occur equally often with
    // equal coefficients.
    let mut twins = Vec::new();
    let mut counts: BTreeMap<(ThetaCharacteristic, BigInt, BigInt, BigInt), i64> = BTreeMap::new();
    for t in &report.terms {
        let key = (
            t.level_class,
            t.disc.value().clone(),
            t.mu.clone(),
            t.coefficient.clone(),
        );
        *counts.entry(key).or_default() += 1;
    }
    for ((l, disc, mu, c), k) in &counts {
        let twin = (*l, disc.clone(), -mu, c.clone());
        if counts.get(&twin) != Some(k) {
            twins.push(format!(
                "class {l}: ({disc},{mu}) has no matching ({disc},{})",
                -mu
            ));
        }
    }

    let zero: Vec<_> = report
        .terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.coefficient.is_zero())
        .map(|(i, _)| format!("term {i} has coefficient 0"))
        .collect();
    let empty = if report.empty == report.terms.is_empty() {
        Vec::new()
    } else {
        vec!["empty flag disagrees with term list".to_string()]
    };

    RelationCheck {
        checks: vec![
            check("orientation_congruence", orientation),
            check("discriminant_validity", discs),
            check("sign_consistency", signs),
            check("provenance", provenance),
            check("twin_pairing", twins),
            check("nonzero_coefficients", zero),
            check("class_ordering", ordering),
            check("empty_flag", empty),
        ],
    }
}
