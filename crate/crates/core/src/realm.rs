//! G9 vectors, the realm matrix R9-4, and its functional relations.
//!
//! A G9 vector records an instruction set's response at all nine ordered
//! setting pairs: −1 where the two detectors flash the same color, +1 where
//! they differ. A set and its mirror produce the same G9 vector, so the
//! eight sets collapse to four distinct columns — the realm matrix R9-4.
//! A pair of case (b) rows whose four column restrictions are all distinct
//! determines every other row; twelve of the fifteen case (b) row pairs
//! qualify, the three transposed pairs (12/21, 13/31, 23/32) being the
//! exceptions because their rows are identical.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::device::{CaseLabel, SettingPair};
use crate::error::{Error, Result};
use crate::instructions::InstructionSet;
use crate::ratio::{rational, Rational};

/// A ±1 record over the nine setting pairs; −1 marks matching colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct G9Vector {
    entries: [i8; 9],
}

impl G9Vector {
    pub fn new(entries: [i8; 9]) -> Result<Self> {
        for e in entries {
            if e != -1 && e != 1 {
                return Err(Error::InvalidDomainValue(e));
            }
        }
        Ok(G9Vector { entries })
    }

    pub fn entries(&self) -> [i8; 9] {
        self.entries
    }

    /// Entry at a setting pair (−1 = same color).
    pub fn at(&self, pair: SettingPair) -> i8 {
        self.entries[pair.slot()]
    }

    /// Entry by 1-based row index.
    pub fn at_row(&self, row: usize) -> Result<i8> {
        if !(1..=9).contains(&row) {
            return Err(Error::InvalidPairIndex(row));
        }
        Ok(self.entries[row - 1])
    }

    /// Same-color fraction vector: −1 entries map to 1, +1 entries to 0.
    pub fn fraction_vector(&self) -> [Rational; 9] {
        self.entries
            .map(|e| if e == -1 { rational(1, 1) } else { rational(0, 1) })
    }
}

impl fmt::Display for G9Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| if *e == -1 { "-1".into() } else { "+1".to_string() })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The ±1 response of `s` at every setting pair: −1 exactly where the set
/// assigns the same color to both dials.
pub fn g9_vector(s: InstructionSet) -> G9Vector {
    let mut entries = [1i8; 9];
    for (slot, pair) in entries.iter_mut().zip(SettingPair::all()) {
        *slot = if s.agrees_at(pair) { -1 } else { 1 };
    }
    G9Vector { entries }
}

/// Label of one of the four distinct G9 columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum G9Label {
    G1,
    G2,
    G3,
    G4,
}

impl G9Label {
    pub const ALL: [G9Label; 4] = [G9Label::G1, G9Label::G2, G9Label::G3, G9Label::G4];

    /// 0-based column index.
    pub fn slot(self) -> usize {
        match self {
            G9Label::G1 => 0,
            G9Label::G2 => 1,
            G9Label::G3 => 2,
            G9Label::G4 => 3,
        }
    }

    /// The canonical column: G9-1 from RRR/GGG, G9-2 from GGR/RRG,
    /// G9-3 from GRG/RGR, G9-4 from GRR/RGG.
    pub fn vector(self) -> G9Vector {
        let entries = match self {
            G9Label::G1 => [-1, -1, -1, -1, -1, -1, -1, -1, -1],
            G9Label::G2 => [-1, -1, 1, -1, -1, 1, 1, 1, -1],
            G9Label::G3 => [-1, 1, -1, 1, -1, 1, -1, 1, -1],
            G9Label::G4 => [-1, 1, 1, 1, -1, -1, 1, -1, -1],
        };
        G9Vector { entries }
    }

    /// The mirror pair of instruction sets producing this column.
    pub fn sources(self) -> (InstructionSet, InstructionSet) {
        let set = |name: &str| name.parse::<InstructionSet>().expect("valid set literal");
        match self {
            G9Label::G1 => (set("GGG"), set("RRR")),
            G9Label::G2 => (set("GGR"), set("RRG")),
            G9Label::G3 => (set("GRG"), set("RGR")),
            G9Label::G4 => (set("GRR"), set("RGG")),
        }
    }
}

impl fmt::Display for G9Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G9-{}", self.slot() + 1)
    }
}

/// One column of the realm matrix, with its producing mirror pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct G9Column {
    pub label: G9Label,
    pub vector: G9Vector,
    pub sources: (InstructionSet, InstructionSet),
}

/// The realm matrix R9-4: nine setting-pair rows by four distinct
/// G9 columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealmMatrix {
    columns: [G9Column; 4],
}

impl RealmMatrix {
    pub fn columns(&self) -> &[G9Column; 4] {
        &self.columns
    }

    pub fn column(&self, label: G9Label) -> &G9Column {
        &self.columns[label.slot()]
    }

    /// The column whose vector equals `v`, if any.
    pub fn classify(&self, v: &G9Vector) -> Option<G9Label> {
        self.columns
            .iter()
            .find(|c| c.vector == *v)
            .map(|c| c.label)
    }

    /// Row of four entries at a 1-based row index.
    pub fn row(&self, row: usize) -> Result<[i8; 4]> {
        let mut out = [0i8; 4];
        for (slot, col) in out.iter_mut().zip(&self.columns) {
            *slot = col.vector.at_row(row)?;
        }
        Ok(out)
    }

    /// Table layout: one row per column label, one field per setting pair.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("column,sets");
        for p in SettingPair::all() {
            out.push_str(&format!(",{p}"));
        }
        out.push('\n');
        for col in &self.columns {
            out.push_str(&format!("{},{} {}", col.label, col.sources.0, col.sources.1));
            for e in col.vector.entries() {
                out.push_str(&format!(",{:+}", e));
            }
            out.push('\n');
        }
        out
    }
}

/// Collapse the eight instruction sets to the four distinct G9 columns.
///
/// Verifies while building that each mirror pair produces one column and
/// that the four columns are pairwise distinct.
pub fn build_realm_matrix() -> RealmMatrix {
    let columns = G9Label::ALL.map(|label| {
        let (a, b) = label.sources();
        let vector = g9_vector(a);
        assert_eq!(vector, g9_vector(b), "mirror sets must share a G9 vector");
        assert_eq!(vector, label.vector(), "canonical column mismatch");
        G9Column { label, vector, sources: (a, b) }
    });
    for i in 0..4 {
        for j in (i + 1)..4 {
            assert_ne!(columns[i].vector, columns[j].vector, "columns must be distinct");
        }
    }
    RealmMatrix { columns }
}

/// A qualifying pair of case (b) rows together with the induced map from
/// domain value pairs to columns.
///
/// Named by the digraph of its 1-based row indices ("23" = rows 2 and 3,
/// i.e. setting pairs 12 and 13).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalRelation {
    domain_rows: (usize, usize),
    /// Column label for each domain value pair, indexed by
    /// (a == +1) * 2 + (b == +1).
    lookup: [G9Label; 4],
}

impl FunctionalRelation {
    /// Digraph label, e.g. "23".
    pub fn label(&self) -> String {
        format!("{}{}", self.domain_rows.0, self.domain_rows.1)
    }

    /// 1-based row indices of the domain.
    pub fn domain_rows(&self) -> (usize, usize) {
        self.domain_rows
    }

    /// The domain rows as setting pairs, e.g. rows (2,3) → pairs 12 and 13.
    pub fn domain_pairs(&self) -> (SettingPair, SettingPair) {
        (
            SettingPair::from_index(self.domain_rows.0).expect("valid row"),
            SettingPair::from_index(self.domain_rows.1).expect("valid row"),
        )
    }

    /// Readable name by setting pairs, e.g. "12&13".
    pub fn pair_name(&self) -> String {
        let (a, b) = self.domain_pairs();
        format!("{a}&{b}")
    }

    /// The 1-based codomain rows (the other seven).
    pub fn codomain_rows(&self) -> Vec<usize> {
        (1..=9)
            .filter(|r| *r != self.domain_rows.0 && *r != self.domain_rows.1)
            .collect()
    }

    fn lookup_slot(a: i8, b: i8) -> Result<usize> {
        let bit = |v: i8| match v {
            -1 => Ok(0),
            1 => Ok(1),
            other => Err(Error::InvalidDomainValue(other)),
        };
        Ok(bit(a)? * 2 + bit(b)?)
    }

    /// Column label determined by the domain values `(a, b)`.
    ///
    /// Total on the four ±1 pairs; any other value is rejected.
    pub fn apply(&self, a: i8, b: i8) -> Result<G9Label> {
        Ok(self.lookup[Self::lookup_slot(a, b)?])
    }

    /// Full column determined by the domain values.
    pub fn apply_vector(&self, a: i8, b: i8) -> Result<G9Vector> {
        Ok(self.apply(a, b)?.vector())
    }

    /// Probability of each column when the two domain values are drawn
    /// independently with P(−1) = `p_minus`.
    pub fn column_probabilities(&self, p_minus: Rational) -> [(G9Label, Rational); 4] {
        let p = p_minus;
        let q = rational(1, 1) - p;
        let prob = |v: i8| if v == -1 { p } else { q };
        let mut out = [(G9Label::G1, rational(0, 1)); 4];
        for (slot, label) in out.iter_mut().zip(G9Label::ALL) {
            let col = label.vector();
            let a = col.at_row(self.domain_rows.0).expect("valid row");
            let b = col.at_row(self.domain_rows.1).expect("valid row");
            *slot = (label, prob(a) * prob(b));
        }
        out
    }
}

/// Would rows `(r1, r2)` qualify as a relation domain? True iff the four
/// column restrictions are pairwise distinct.
pub fn rows_qualify(m: &RealmMatrix, r1: usize, r2: usize) -> Result<bool> {
    let row1 = m.row(r1)?;
    let row2 = m.row(r2)?;
    let restrictions: Vec<(i8, i8)> = row1.iter().zip(&row2).map(|(a, b)| (*a, *b)).collect();
    let distinct = restrictions
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    Ok(distinct == 4)
}

/// Enumerate the twelve functional relations of the realm matrix, in
/// ascending label order.
///
/// All fifteen unordered pairs of case (b) rows are examined; the three
/// transposed pairs (rows 2/4, 3/7, 6/8) fail because transposed setting
/// pairs carry identical rows.
pub fn enumerate_functional_relations(m: &RealmMatrix) -> Vec<FunctionalRelation> {
    let case_b_rows: Vec<usize> = SettingPair::all()
        .iter()
        .filter(|p| p.case() == CaseLabel::B)
        .map(|p| p.index())
        .collect();
    let mut relations = Vec::new();
    for (i, &r1) in case_b_rows.iter().enumerate() {
        for &r2 in &case_b_rows[i + 1..] {
            if !rows_qualify(m, r1, r2).expect("valid rows") {
                continue;
            }
            let mut lookup = [G9Label::G1; 4];
            for label in G9Label::ALL {
                let col = m.column(label).vector;
                let a = col.at_row(r1).expect("valid row");
                let b = col.at_row(r2).expect("valid row");
                let slot = FunctionalRelation::lookup_slot(a, b).expect("entries are ±1");
                lookup[slot] = label;
            }
            relations.push(FunctionalRelation { domain_rows: (r1, r2), lookup });
        }
    }
    relations
}

/// Find a relation by its digraph label.
pub fn relation_by_label(m: &RealmMatrix, label: &str) -> Result<FunctionalRelation> {
    enumerate_functional_relations(m)
        .into_iter()
        .find(|r| r.label() == label)
        .ok_or_else(|| Error::UnknownRelation(label.to_string()))
}
