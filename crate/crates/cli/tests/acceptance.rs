//! Acceptance suite: one PASS/FAIL line per criterion, then a single assert.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use heegner_core::arith::{
    class_number, hilbert_symbol, is_discriminant, prime_divisors, Discriminant, Place,
};
use heegner_core::heegner::{
    candidate_pairs, cm_gram_determinant, cm_gram_determinant_expected, cm_vector, delta_raw,
    enumerate_rs, extended_gram, gram_apply, is_orientation, s1_of,
};
use heegner_core::model::{
    check_psi, find_models, validate_model, ModelSearchParams, PSI_TOLERANCE,
};
use heegner_core::quatalg::{det2, humbert_gram, pairing_e, symplectic_basis};
use heegner_core::relations::{build_relation, summarize_discs};
use heegner_core::thetasign::{
    configuration_table, epsilon_sign, even_characteristics, ramification_points, Calibration,
};
use heegner_core::HashimotoModel;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Runtime ceilings.
const RELATION_LIMIT: Duration = Duration::from_secs(1);
const ENUMERATION_LIMIT: Duration = Duration::from_secs(1);
const CLASS_NUMBER_LIMIT: Duration = Duration::from_secs(10);
/// Ψ(τ) residual tolerance (relative).
const PSI_TOL: f64 = 1e-9;

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        let detail = detail.into();
        println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
        self.lines.push((name.to_string(), passed, detail));
    }
}

fn z(v: i64) -> BigInt {
    BigInt::from(v)
}

fn reference_models() -> [HashimotoModel; 3] {
    [
        HashimotoModel::new(6, 1, 5, 2, 5).unwrap(),
        HashimotoModel::new(26, 1, 5, 2, 21).unwrap(),
        HashimotoModel::new(26, 1, 149, 19, 63).unwrap(),
    ]
}

fn criterion_1(rep: &mut Report) {
    let args = [
        "relation", "--d0", "6", "--level", "1", "--p", "5", "--a", "2", "--b", "5", "--deg", "1",
        "--P", "0000", "--Q", "1000",
    ];
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_heegner"))
        .args(args)
        .env_remove("HEEGNER_FIXTURE_DIR")
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout).unwrap();

    let mut got = BTreeSet::new();
    let mut lines = 0;
    for line in text
        .lines()
        .filter(|l| l.starts_with('+') || l.starts_with('-'))
    {
        lines += 1;
        // "+1 · Z_{-3,[1000],3,-3}"
        let (coef, label) = line.split_once(" · Z_{").unwrap();
        let parts: Vec<&str> = label.trim_end_matches('}').split(',').collect();
        got.insert((
            coef.to_string(),
            parts[0].to_string(),
            parts[1].trim_matches(|c| c == '[' || c == ']').to_string(),
            parts[2].to_string(),
            parts[3].to_string(),
        ));
    }
    let mut want = BTreeSet::new();
    for (coef, classes) in [
        ("+1", ["1000", "0110", "0011"]),
        ("-1", ["1111", "0100", "0010"]),
    ] {
        for class in classes {
            for (disc, mu) in [("-3", "3"), ("-3", "-3"), ("-4", "2"), ("-4", "-2")] {
                let neg = if let Some(stripped) = mu.strip_prefix('-') {
                    stripped.to_string()
                } else {
                    format!("-{mu}")
                };
                want.insert((
                    coef.to_string(),
                    disc.to_string(),
                    class.to_string(),
                    mu.to_string(),
                    neg,
                ));
            }
        }
    }
    // all d = 1: confirm through the library report as well
    let m = &reference_models()[0];
    let report = build_relation(
        m,
        &z(1),
        &"0000".parse().unwrap(),
        &"1000".parse().unwrap(),
        &Calibration::builtin(),
    )
    .unwrap();
    let all_d1 = report.terms.iter().all(|t| t.provenance.d == z(1));
    let ok =
        out.status.success() && lines == 24 && got == want && all_d1 && elapsed < RELATION_LIMIT;
    rep.record(
        "criterion 1 ((6,1,5,2,5) relation, 24 terms)",
        ok,
        format!("{lines} terms, exact match {}, all d = 1 {all_d1}, {elapsed:?} (limit {RELATION_LIMIT:?})", got == want),
    );
}

fn criterion_2(rep: &mut Report) {
    let m = &reference_models()[0];
    let scan: Vec<(BigInt, BigInt)> = (0..=5).map(|i| (z(1), z(2 * i))).collect();
    let candidates = candidate_pairs(m, &z(1)).unwrap();
    let scan_ok = scan.iter().all(|p| candidates.contains(p));
    let summary = summarize_discs(m, &z(1)).unwrap();
    let want = vec![(z(1), z(4), z(-4)), (z(1), z(6), z(-3))];
    let in_scan = summary
        .iter()
        .all(|(r, s, _)| scan.contains(&(r.clone(), s.clone())));
    rep.record(
        "criterion 2 ((6,1,5,2,5) enumeration)",
        summary == want && scan_ok && in_scan,
        format!(
            "canonical tuples {:?}",
            summary
                .iter()
                .map(|(r, s, d)| format!("({r},{s},{d})"))
                .collect::<Vec<_>>()
        ),
    );
}

fn criterion_3(rep: &mut Report) {
    let [_, m1, m2] = reference_models();
    type Expected<'a> = (&'a HashimotoModel, &'a [(i64, i64, i64)]);
    let checks: [Expected; 2] = [
        (&m1, &[(1, 18, -11), (1, 20, -20), (1, 22, -19)]),
        (&m2, &[(1, 6, -11), (3, 20, -24), (7, 46, -11), (9, 60, -8)]),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (m, want) in checks {
        let start = Instant::now();
        let got = summarize_discs(m, &z(1)).unwrap();
        let elapsed = start.elapsed();
        let included = want
            .iter()
            .all(|(r, s, d)| got.contains(&(z(*r), z(*s), z(*d))));
        ok &= included && elapsed < ENUMERATION_LIMIT;
        details.push(format!(
            "p={} includes all {} ({elapsed:?})",
            m.p,
            want.len()
        ));
    }
    let report = build_relation(
        &m1,
        &z(1),
        &"0000".parse().unwrap(),
        &"1000".parse().unwrap(),
        &Calibration::builtin(),
    )
    .unwrap();
    let surplus_emitted = report
        .terms
        .iter()
        .any(|t| t.provenance.r == z(1) && t.provenance.s == z(24));
    let warned = report
        .warnings
        .iter()
        .any(|w| w == "tuple (1,24,-8) not among the reference tuples for this model");
    ok &= surplus_emitted && warned;
    details.push(format!(
        "surplus (1,24,-8) emitted {surplus_emitted}, warned {warned}"
    ));
    rep.record("criterion 3 (D0=26 tuples)", ok, details.join("; "));
}

fn criterion_4(rep: &mut Report) {
    let mut ok = true;
    let mut details = Vec::new();
    for (d0, p, a, b) in [(6, 5, 2, 5), (26, 5, 2, 21), (26, 149, 19, 63)] {
        let v = validate_model(d0, 1, p, a, b);
        let identity = a * a * d0 + 1 == b * p;
        // Hilbert (−D, p) is −1 exactly at primes dividing D₀
        let (nd, pp) = (
            BigRational::from_integer(z(-d0)),
            BigRational::from_integer(z(p)),
        );
        let mut pattern = true;
        for l in prime_divisors(&z(2 * d0 * p)) {
            let h = hilbert_symbol(&nd, &pp, &Place::prime(l.clone()).unwrap()).unwrap();
            pattern &= (h == -1) == (z(d0) % &l == z(0));
        }
        pattern &= hilbert_symbol(&nd, &pp, &Place::Infinity).unwrap() == 1;
        ok &= v.valid && identity && pattern;
        details.push(format!(
            "({p},{a},{b}) valid={} a²D+1=bp {identity} pattern {pattern}",
            v.valid
        ));
    }
    rep.record("criterion 4 (model validation)", ok, details.join("; "));
}

/// Textbook reduction, independent of the library.
fn reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * k * a;
            c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            b = nb;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

fn oracle_class_number(delta: i64) -> usize {
    let gcd = |mut x: i64, mut y: i64| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x.abs()
    };
    let mut seen = BTreeSet::new();
    for a in 1..=-delta {
        let start = if (delta & 1) == 0 {
            -a + (a & 1)
        } else {
            -a + 1 - (a & 1)
        };
        let mut b = start;
        while b <= a {
            let num = b * b - delta;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if gcd(gcd(a, b), c) == 1 {
                    seen.insert(reduce(a, b, c));
                }
            }
            b += 2;
        }
    }
    seen.len()
}

fn criterion_5(rep: &mut Report) {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut sub = Vec::new();

    // Hilbert product formula
    let mut bad = 0;
    let pairs = 250;
    for _ in 0..pairs {
        let mut q = || {
            let n: i64 = loop {
                let v = rng.gen_range(-1000..=1000);
                if v != 0 {
                    break v;
                }
            };
            BigRational::new(n.into(), rng.gen_range(1..=1000i64).into())
        };
        let (a, b) = (q(), q());
        let prod = z(2) * a.numer() * a.denom() * b.numer() * b.denom();
        let mut product = hilbert_symbol(&a, &b, &Place::Infinity).unwrap() as i32;
        for p in prime_divisors(&prod) {
            product *= hilbert_symbol(&a, &b, &Place::prime(p).unwrap()).unwrap() as i32;
        }
        bad += (product != 1) as usize;
    }
    sub.push((
        "Hilbert product formula",
        bad == 0,
        format!("{pairs} pairs, {bad} failures"),
    ));

    // class numbers vs reduction oracle
    let start = Instant::now();
    let ours: Vec<(i64, usize)> = (-2000i64..0)
        .filter(|d| is_discriminant(&z(*d)))
        .map(|d| (d, class_number(&Discriminant::new(z(d)).unwrap()).unwrap()))
        .collect();
    let elapsed = start.elapsed();
    let mismatches = ours
        .iter()
        .filter(|(d, h)| oracle_class_number(*d) != *h)
        .count();
    sub.push((
        "class numbers vs oracle",
        mismatches == 0 && elapsed < CLASS_NUMBER_LIMIT,
        format!(
            "{} discriminants, {mismatches} mismatches, {elapsed:?} (limit {CLASS_NUMBER_LIMIT:?})",
            ours.len()
        ),
    ));

    // Humbert Gram determinant and symplectic η-Gram on ≥ 20 models
    let mut models = Vec::new();
    for (d0, n) in [
        (6, 1),
        (10, 1),
        (14, 1),
        (15, 1),
        (21, 1),
        (22, 1),
        (26, 1),
        (6, 5),
        (10, 3),
        (15, 2),
    ] {
        models.extend(
            find_models(&ModelSearchParams::new(d0, n, 150).all())
                .unwrap()
                .into_iter()
                .take(3),
        );
    }
    let mut lattice_ok = true;
    for m in &models {
        lattice_ok &= det2(&humbert_gram(m)) == z(4) * &m.d;
        let eta = symplectic_basis(m);
        for (r, x) in eta.iter().enumerate() {
            for (c, y) in eta.iter().enumerate() {
                let want = match (r, c) {
                    (0, 2) | (1, 3) => 1,
                    (2, 0) | (3, 1) => -1,
                    _ => 0,
                };
                lattice_ok &= pairing_e(x, y, m) == BigRational::from_integer(z(want));
            }
        }
    }
    sub.push((
        "det Humbert Gram = 4D, symplectic η",
        lattice_ok && models.len() >= 20,
        format!("{} models", models.len()),
    ));

    // s₁ identity
    let pm = reference_models();
    let identity = |m: &HashimotoModel, r: &BigInt, s: &BigInt, n: &BigInt| {
        let s1 = s1_of(m, r, s).unwrap();
        &s1 * &s1 - &m.d * (n * n * &m.p - r * r) == &m.p * delta_raw(m, n, r, s)
    };
    let mut bad = 0;
    for _ in 0..500 {
        let m = &pm[rng.gen_range(0..3)];
        let r = z(rng.gen_range(-1000..=1000));
        let s = z(2 * rng.gen_range(-1000..=1000i64));
        let n = z(rng.gen_range(1..=99));
        bad += (!identity(m, &r, &s, &n)) as usize;
    }
    let mut enumerated = 0;
    for m in &pm {
        for t in enumerate_rs(m, &z(1)).unwrap() {
            enumerated += 1;
            bad += (!identity(m, &t.r, &t.s, &t.n)) as usize;
        }
    }
    sub.push((
        "s₁² − D(n²p − r²) = pΔ",
        bad == 0,
        format!("500 random + {enumerated} enumerated, {bad} failures"),
    ));

    // CM-vector orthogonality and the determinant identity
    let mut bad = 0;
    for m in &pm {
        for t in enumerate_rs(m, &z(1)).unwrap() {
            let v = cm_vector(m, &t.r, &t.s).unwrap().as_array();
            let gv = gram_apply(&extended_gram(m, &t.r, &t.s, &t.n), &v);
            let orth = gv[0] == z(0) && gv[1] == z(0);
            let det = cm_gram_determinant(m, &t.r, &t.s, &t.n).unwrap()
                == cm_gram_determinant_expected(m, &t.r, &t.s, &t.n);
            bad += (!(orth && det)) as usize;
        }
    }
    sub.push((
        "CM orthogonality and 4D²(4D − P)",
        bad == 0,
        format!("{bad} failures"),
    ));

    // sign-table combinatorics
    let table = configuration_table();
    let mut evens: Vec<_> = table.iter().map(|r| r.even_char).collect();
    evens.sort();
    evens.dedup();
    let partitions = table.iter().all(|r| {
        let mut all: Vec<u8> = r
            .triple_first
            .iter()
            .chain(&r.triple_second)
            .copied()
            .collect();
        all.sort();
        all == [1, 2, 3, 4, 5, 6]
    });
    let mut cooccur = true;
    for i in 1..=6u8 {
        for j in i + 1..=6 {
            cooccur &= table.iter().filter(|r| r.side(i) == r.side(j)).count() == 4;
        }
    }
    sub.push((
        "configuration table",
        evens.len() == 10 && evens.iter().all(|e| e.is_even()) && partitions && cooccur,
        format!(
            "{} distinct even classes, partitions {partitions}, pair co-occurrence 4 {cooccur}",
            evens.len()
        ),
    ));

    // antisymmetry and the global flip
    let cal = Calibration::builtin();
    let pts = ramification_points();
    let mut anti = true;
    let mut flip = true;
    for p in &pts {
        for q in pts.iter().filter(|q| *q != p) {
            for l in even_characteristics() {
                anti &=
                    epsilon_sign(p, q, &l, &cal).unwrap() == -epsilon_sign(q, p, &l, &cal).unwrap();
            }
            for m in &pm {
                let a = build_relation(m, &z(1), p, q, &cal).unwrap();
                let b = build_relation(m, &z(1), q, p, &cal).unwrap();
                flip &= a.terms.len() == b.terms.len()
                    && a.terms.iter().zip(&b.terms).all(|(x, y)| {
                        x.coefficient == -y.coefficient.clone()
                            && x.disc == y.disc
                            && x.mu == y.mu
                            && x.level_class == y.level_class
                    });
            }
        }
    }
    sub.push((
        "ε antisymmetry and P↔Q flip",
        anti && flip,
        format!("antisymmetric {anti}, flip {flip}"),
    ));

    // orientation membership
    let mut bad = 0;
    let mut count = 0;
    for m in &pm {
        for n in [1, 5, 7] {
            for t in build_relation(m, &z(n), &pts[0], &pts[1], &cal)
                .unwrap()
                .terms
            {
                count += 1;
                bad += (!is_orientation(m, t.disc.value(), &t.mu)) as usize;
            }
        }
    }
    sub.push((
        "μ² ≡ p·disc (mod 4D)",
        bad == 0,
        format!("{count} terms, {bad} failures"),
    ));

    // Ψ(τ) grid
    assert_eq!(PSI_TOL, PSI_TOLERANCE);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for m in &pm[..2] {
        for x in [-1.5, -0.4, 0.0, 0.3, 1.2] {
            for y in [0.2, 0.7, 1.0, 2.5] {
                let chk = check_psi(m, Complex64::new(x, y), PSI_TOL).unwrap();
                worst = worst.max(chk.residuals[0]).max(chk.residuals[1]);
                points += 1;
            }
        }
    }
    sub.push((
        "Ψ(τ) residuals",
        worst < PSI_TOL,
        format!("{points} points, worst {worst:.2e} (tol {PSI_TOL:e})"),
    ));

    let all = sub.iter().all(|(_, ok, _)| *ok);
    for (name, ok, detail) in &sub {
        println!("  {} {name}: {detail}", if *ok { "ok  " } else { "FAIL" });
    }
    rep.record(
        "criterion 5 (property suite)",
        all,
        format!(
            "{} of {} sub-checks pass",
            sub.iter().filter(|s| s.1).count(),
            sub.len()
        ),
    );
}

#[test]
fn acceptance() {
    let mut rep = Report { lines: Vec::new() };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    let failed: Vec<_> = rep
        .lines
        .iter()
        .filter(|l| !l.1)
        .map(|l| l.0.clone())
        .collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
