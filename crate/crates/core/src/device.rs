//! Device vocabulary: detector settings, dial angles, flash colors, and
//! ordered setting pairs with the case (a)/(b) partition.
//!
//! Each detector dial has three positions (1, 2, 3) mapping to coplanar
//! measurement directions at 0°, 120°, and −120°. A trial is labelled
//! case (a) when both dials agree and case (b) when they differ.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A detector dial position, 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Setting(u8);

impl Setting {
    pub const S1: Setting = Setting(1);
    pub const S2: Setting = Setting(2);
    pub const S3: Setting = Setting(3);

    /// All three settings in dial order.
    pub const ALL: [Setting; 3] = [Self::S1, Self::S2, Self::S3];

    pub fn new(value: u8) -> Result<Self> {
        if (1..=3).contains(&value) {
            Ok(Setting(value))
        } else {
            Err(Error::InvalidSetting(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Absolute dial angle: setting 1 → 0°, 2 → 120°, 3 → −120°.
    pub fn angle(self) -> Angle {
        match self.0 {
            1 => Angle::new(0),
            2 => Angle::new(120),
            _ => Angle::new(-120),
        }
    }
}

impl TryFrom<u8> for Setting {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        Setting::new(v)
    }
}

impl From<Setting> for u8 {
    fn from(s: Setting) -> u8 {
        s.0
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An angle in whole degrees.
///
/// Angles are kept as exact integers so that the relative angle between two
/// dials is computed without floating-point drift. `relative_to` folds the
/// difference into [0°, 180°], identifying θ with 360° − θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Angle {
    degrees: i32,
}

impl Angle {
    pub fn new(degrees: i32) -> Self {
        Angle { degrees }
    }

    pub fn degrees(self) -> i32 {
        self.degrees
    }

    pub fn radians(self) -> f64 {
        f64::from(self.degrees).to_radians()
    }

    /// Relative angle to `other`, normalized into [0°, 180°].
    pub fn relative_to(self, other: Angle) -> Angle {
        let d = (self.degrees - other.degrees).rem_euclid(360);
        Angle::new(if d > 180 { 360 - d } else { d })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees)
    }
}

/// Relative angle between two detector settings, normalized to [0°, 180°].
///
/// Total and symmetric: 0° when the settings agree, 120° for every
/// mixed pair.
pub fn settings_to_theta(a: Setting, b: Setting) -> Angle {
    a.angle().relative_to(b.angle())
}

/// A detector flash color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    R,
    G,
}

impl Color {
    pub const fn mirror(self) -> Color {
        match self {
            Color::R => Color::G,
            Color::G => Color::R,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::R => write!(f, "R"),
            Color::G => write!(f, "G"),
        }
    }
}

impl FromStr for Color {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Color::R),
            "G" => Ok(Color::G),
            other => Err(Error::ParseColor(other.to_string())),
        }
    }
}

/// Case label for a setting pair: equal dials (a) or mixed dials (b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::A => write!(f, "a"),
            CaseLabel::B => write!(f, "b"),
        }
    }
}

/// An ordered pair of detector settings (Alice's dial, Bob's dial).
///
/// The nine pairs carry a fixed 1-based index in the order
/// 11, 12, 13, 21, 22, 23, 31, 32, 33.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SettingPair {
    alice: Setting,
    bob: Setting,
}

impl SettingPair {
    pub fn new(alice: Setting, bob: Setting) -> Self {
        SettingPair { alice, bob }
    }

    /// All nine pairs in index order.
    pub fn all() -> [SettingPair; 9] {
        let mut pairs = [SettingPair::new(Setting::S1, Setting::S1); 9];
        let mut k = 0;
        for a in Setting::ALL {
            for b in Setting::ALL {
                pairs[k] = SettingPair::new(a, b);
                k += 1;
            }
        }
        pairs
    }

    /// The six case (b) pairs in index order.
    pub fn case_b() -> [SettingPair; 6] {
        let mut out = [SettingPair::new(Setting::S1, Setting::S2); 6];
        let mut k = 0;
        for p in Self::all() {
            if p.case() == CaseLabel::B {
                out[k] = p;
                k += 1;
            }
        }
        out
    }

    pub fn alice(self) -> Setting {
        self.alice
    }

    pub fn bob(self) -> Setting {
        self.bob
    }

    /// 1-based index in the fixed pair order.
    pub fn index(self) -> usize {
        (usize::from(self.alice.value()) - 1) * 3 + usize::from(self.bob.value())
    }

    /// 0-based index, for array storage.
    pub fn slot(self) -> usize {
        self.index() - 1
    }

    pub fn from_index(index: usize) -> Result<Self> {
        if !(1..=9).contains(&index) {
            return Err(Error::InvalidPairIndex(index));
        }
        let a = ((index - 1) / 3 + 1) as u8;
        let b = ((index - 1) % 3 + 1) as u8;
        Ok(SettingPair::new(Setting::new(a)?, Setting::new(b)?))
    }

    /// Case (a) iff both dials agree.
    pub fn case(self) -> CaseLabel {
        if self.alice == self.bob {
            CaseLabel::A
        } else {
            CaseLabel::B
        }
    }

    /// Relative angle between the two dials.
    pub fn theta(self) -> Angle {
        settings_to_theta(self.alice, self.bob)
    }

    /// The pair with Alice's and Bob's dials swapped.
    pub fn transposed(self) -> SettingPair {
        SettingPair::new(self.bob, self.alice)
    }
}

/// Case label of a pair; `a` iff the dials agree.
pub fn classify(pair: SettingPair) -> CaseLabel {
    pair.case()
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alice, self.bob)
    }
}

impl FromStr for SettingPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 || !bytes[0].is_ascii_digit() || !bytes[1].is_ascii_digit() {
            return Err(Error::ParsePair(s.to_string()));
        }
        let a = Setting::new(bytes[0] - b'0').map_err(|_| Error::ParsePair(s.to_string()))?;
        let b = Setting::new(bytes[1] - b'0').map_err(|_| Error::ParsePair(s.to_string()))?;
        Ok(SettingPair::new(a, b))
    }
}

impl TryFrom<String> for SettingPair {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SettingPair> for String {
    fn from(p: SettingPair) -> String {
        p.to_string()
    }
}
