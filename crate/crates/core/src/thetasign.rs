//! Genus-2 theta characteristics over `F₂`: parity, the six ramification
//! points, the ten (3,3) configurations indexed by even characteristics,
//! and the sign function `ε_{P,Q}` read off those configurations.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `[(ε₁, ε₂), (ε′₁, ε′₂)]`, written `abcd` for `[(a,b),(c,d)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaCharacteristic {
    pub eps: [u8; 2],
    pub eps_prime: [u8; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl ThetaCharacteristic {
    pub const fn new(a: u8, b: u8, c: u8, d: u8) -> Self {
        ThetaCharacteristic {
            eps: [a, b],
            eps_prime: [c, d],
        }
    }

    /// All sixteen characteristics in lexicographic order.
    pub fn all() -> Vec<Self> {
        (0u8..16)
            .map(|v| Self::new(v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1))
            .collect()
    }

    /// `ε₁ε′₁ + ε₂ε′₂ mod 2`.
    pub fn parity(&self) -> Parity {
        if (self.eps[0] * self.eps_prime[0] + self.eps[1] * self.eps_prime[1]).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Componentwise sum over `F₂`.
    pub fn translate(&self, by: &Self) -> Self {
        Self::new(
            self.eps[0] ^ by.eps[0],
            self.eps[1] ^ by.eps[1],
            self.eps_prime[0] ^ by.eps_prime[0],
            self.eps_prime[1] ^ by.eps_prime[1],
        )
    }

    /// `[(a,b),(c,d)]`.
    pub fn long_form(&self) -> String {
        format!(
            "[({},{}),({},{})]",
            self.eps[0], self.eps[1], self.eps_prime[0], self.eps_prime[1]
        )
    }
}

impl fmt::Display for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}{}",
            self.eps[0], self.eps[1], self.eps_prime[0], self.eps_prime[1]
        )
    }
}

impl FromStr for ThetaCharacteristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '[' | ']' | '(' | ')' | ',' | ' '))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidCharacteristic(s.to_string())),
            })
            .collect::<Result<_>>()?;
        match bits.as_slice() {
            [a, b, c, d] => Ok(Self::new(*a, *b, *c, *d)),
            _ => Err(Error::InvalidCharacteristic(s.to_string())),
        }
    }
}

impl Serialize for ThetaCharacteristic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ThetaCharacteristic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn parity(c: &ThetaCharacteristic) -> Parity {
    c.parity()
}

const RAMIFICATION_POINTS: [ThetaCharacteristic; 6] = [
    ThetaCharacteristic::new(0, 0, 0, 0),
    ThetaCharacteristic::new(1, 0, 0, 0),
    ThetaCharacteristic::new(1, 0, 1, 1),
    ThetaCharacteristic::new(1, 1, 1, 1),
    ThetaCharacteristic::new(1, 1, 1, 0),
    ThetaCharacteristic::new(0, 0, 1, 0),
];

/// The two-torsion points `P₁, …, P₆` cut out on the curve by
/// `Θ[(0,1),(0,1)]`, in order.
pub fn ramification_points() -> [ThetaCharacteristic; 6] {
    RAMIFICATION_POINTS
}

/// Igusa's numbering of the six odd characteristics.
///
/// The fifth entry is `[(1,1),(0,1)]`; `[(1,1),(0,0)]` is even and so cannot
/// belong to this list.
pub fn igusa_odd_characteristics() -> [ThetaCharacteristic; 6] {
    [
        ThetaCharacteristic::new(0, 1, 0, 1),
        ThetaCharacteristic::new(0, 1, 1, 1),
        ThetaCharacteristic::new(1, 0, 1, 0),
        ThetaCharacteristic::new(1, 0, 1, 1),
        ThetaCharacteristic::new(1, 1, 0, 1),
        ThetaCharacteristic::new(1, 1, 1, 0),
    ]
}

/// One (3,3) configuration: the split of the six Igusa indices into the
/// points on the first and the second elliptic component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationRow {
    pub label: &'static str,
    /// Element of `A₆` carrying row I to this row; documentation only.
    pub g: &'static str,
    pub even_char: ThetaCharacteristic,
    pub triple_first: [u8; 3],
    pub triple_second: [u8; 3],
}

impl ConfigurationRow {
    /// 1 if `index` is in the first triple, 2 if in the second.
    pub fn side(&self, index: u8) -> Option<u8> {
        if self.triple_first.contains(&index) {
            Some(1)
        } else if self.triple_second.contains(&index) {
            Some(2)
        } else {
            None
        }
    }
}

const fn row(
    label: &'static str,
    g: &'static str,
    first: [u8; 3],
    second: [u8; 3],
    bits: [u8; 4],
) -> ConfigurationRow {
    ConfigurationRow {
        label,
        g,
        even_char: ThetaCharacteristic::new(bits[0], bits[1], bits[2], bits[3]),
        triple_first: first,
        triple_second: second,
    }
}

const CONFIGURATIONS: [ConfigurationRow; 10] = [
    row("I", "e", [3, 4, 6], [1, 2, 5], [1, 1, 1, 1]),
    row("II", "(14)(26)", [1, 2, 3], [4, 5, 6], [1, 0, 0, 0]),
    row("III", "(56)(12)", [3, 4, 5], [1, 2, 6], [1, 1, 0, 0]),
    row("IV", "(26)(34)", [1, 2, 4], [3, 5, 6], [0, 1, 1, 0]),
    row("V", "(13)(56)", [1, 4, 5], [2, 3, 6], [0, 0, 1, 1]),
    row("VI", "(13)(45)", [1, 5, 6], [2, 3, 4], [1, 0, 0, 1]),
    row("VII", "(24)(56)", [2, 3, 5], [1, 4, 6], [0, 0, 0, 0]),
    row("VIII", "(23)(34)", [2, 4, 6], [1, 3, 5], [0, 0, 1, 0]),
    row("IX", "(23)(45)", [2, 5, 6], [1, 3, 4], [0, 1, 0, 0]),
    row("X", "(14)(46)", [1, 3, 6], [2, 4, 5], [0, 0, 0, 1]),
];

/// The ten configurations, rows I–X.
pub fn configuration_table() -> Vec<ConfigurationRow> {
    CONFIGURATIONS.to_vec()
}

/// The even characteristics in configuration-table order.
pub fn even_characteristics() -> Vec<ThetaCharacteristic> {
    CONFIGURATIONS.iter().map(|r| r.even_char).collect()
}

pub fn configuration_for(l: &ThetaCharacteristic) -> Result<&'static ConfigurationRow> {
    CONFIGURATIONS
        .iter()
        .find(|r| r.even_char == *l)
        .ok_or_else(|| Error::OddLevelClass(l.to_string()))
}

/// A bijection from ramification points to Igusa indices `1..=6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calibration {
    entries: Vec<(ThetaCharacteristic, u8)>,
}

#[derive(Serialize, Deserialize)]
struct CalibrationEntry {
    ram: ThetaCharacteristic,
    index: u8,
}

const BUILTIN_CALIBRATION: &str = include_str!("../fixtures/ram_to_igusa.txt");

/// File name of the calibration fixture inside a fixture directory.
pub const CALIBRATION_FILE: &str = "ram_to_igusa.txt";

impl Calibration {
    /// The fixture shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CALIBRATION).expect("shipped fixture is valid")
    }

    pub fn from_entries(entries: Vec<(ThetaCharacteristic, u8)>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(6);
        for point in RAMIFICATION_POINTS {
            let found: Vec<_> = entries.iter().filter(|(c, _)| *c == point).collect();
            match found.as_slice() {
                [(_, idx)] => sorted.push((point, *idx)),
                [] => {
                    return Err(Error::Calibration(format!("no entry for {point}")));
                }
                _ => {
                    return Err(Error::Calibration(format!("duplicate entry for {point}")));
                }
            }
        }
        if entries.len() != 6 {
            let stray = entries
                .iter()
                .find(|(c, _)| !RAMIFICATION_POINTS.contains(c))
                .map(|(c, _)| c.to_string())
                .unwrap_or_default();
            return Err(Error::NotRamificationPoint(stray));
        }
        let mut seen = [false; 6];
        for (_, idx) in &sorted {
            if !(1..=6).contains(idx) || seen[(*idx - 1) as usize] {
                return Err(Error::Calibration(format!(
                    "indices must be a permutation of 1..6, saw {idx} twice or out of range"
                )));
            }
            seen[(*idx - 1) as usize] = true;
        }
        Ok(Calibration { entries: sorted })
    }

    /// Parses lines of the form `abcd -> n`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Calibration(format!("line {}: missing '->'", lineno + 1)))?;
            let ch: ThetaCharacteristic = lhs.trim().parse()?;
            let idx: u8 = rhs
                .trim()
                .parse()
                .map_err(|_| Error::Calibration(format!("line {}: bad index", lineno + 1)))?;
            entries.push((ch, idx));
        }
        Self::from_entries(entries)
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(c, i)| format!("{c} -> {i}\n"))
            .collect()
    }

    pub fn entries(&self) -> &[(ThetaCharacteristic, u8)] {
        &self.entries
    }

    pub fn index_of(&self, point: &ThetaCharacteristic) -> Result<u8> {
        self.entries
            .iter()
            .find(|(c, _)| c == point)
            .map(|(_, i)| *i)
            .ok_or_else(|| Error::NotRamificationPoint(point.to_string()))
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Serialize for Calibration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<CalibrationEntry> = self
            .entries
            .iter()
            .map(|(ram, index)| CalibrationEntry {
                ram: *ram,
                index: *index,
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Calibration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<CalibrationEntry>::deserialize(d)?;
        Calibration::from_entries(list.into_iter().map(|e| (e.ram, e.index)).collect())
            .map_err(serde::de::Error::custom)
    }
}

pub fn ram_to_igusa_index(point: &ThetaCharacteristic, calibration: &Calibration) -> Result<u8> {
    calibration.index_of(point)
}

/// `ε_{P,Q}([L])`: 0 when `P` and `Q` land in the same triple of the
/// configuration for `L`, +1 when `P` is in the first triple and `Q` in the
/// second, −1 otherwise.
pub fn epsilon_sign(
    p: &ThetaCharacteristic,
    q: &ThetaCharacteristic,
    l: &ThetaCharacteristic,
    calibration: &Calibration,
) -> Result<i8> {
    if p == q {
        return Err(Error::SameTorsionPoints);
    }
    let i = calibration.index_of(p)?;
    let j = calibration.index_of(q)?;
    if !l.is_even() {
        return Err(Error::OddLevelClass(l.to_string()));
    }
    let row = configuration_for(l)?;
    Ok(match (row.side(i), row.side(j)) {
        (Some(1), Some(2)) => 1,
        (Some(2), Some(1)) => -1,
        _ => 0,
    })
}

/// `(L, ε_{P,Q}(L))` over the even characteristics, in table order.
pub fn sign_vector(
    p: &ThetaCharacteristic,
    q: &ThetaCharacteristic,
    calibration: &Calibration,
) -> Result<Vec<(ThetaCharacteristic, i8)>> {
    even_characteristics()
        .into_iter()
        .map(|l| epsilon_sign(p, q, &l, calibration).map(|e| (l, e)))
        .collect()
}
