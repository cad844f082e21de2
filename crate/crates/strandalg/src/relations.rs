//! Zero-relation sets and the special-pair / biserial checks.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::quiver::{compose, subpath_occurrences, ArrowId, Path, Quiver, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("zero-relations must be non-trivial paths")]
    TrivialRelation,
    #[error("relation uses an arrow not in the quiver")]
    ForeignArrow,
    #[error("relation word is not consecutive")]
    NotConsecutive,
}

/// A finite set of zero-relations (paths) over a fixed quiver.
///
/// Admissibility queries are served from an index keyed by (right arrow,
/// length); `is_admissible_naive` keeps the unindexed scan as an oracle.
#[derive(Clone, Debug)]
pub struct ZSet {
    relations: BTreeSet<Path>,
    /// (right arrow, length) -> relations, for the windowed subpath scan.
    index: HashMap<(ArrowId, usize), Vec<Path>>,
    lengths: BTreeSet<usize>,
    min_len: Option<usize>,
    max_len: usize,
}

impl ZSet {
    pub fn new(quiver: &Quiver, relations: Vec<Path>) -> Result<Self, RelationError> {
        let mut set = BTreeSet::new();
        for r in relations {
            if r.is_trivial() {
                return Err(RelationError::TrivialRelation);
            }
            for a in r.arrows() {
                if a.0 as usize >= quiver.arrow_count() {
                    return Err(RelationError::ForeignArrow);
                }
            }
            for i in 0..r.arrows().len() - 1 {
                if quiver.head(r.arrows()[i]) != quiver.tail(r.arrows()[i + 1]) {
                    return Err(RelationError::NotConsecutive);
                }
            }
            set.insert(r);
        }
        let mut index: HashMap<(ArrowId, usize), Vec<Path>> = HashMap::new();
        let mut lengths = BTreeSet::new();
        for r in &set {
            let right = r.right_arrow().expect("relations are non-trivial");
            index.entry((right, r.len())).or_default().push(r.clone());
            lengths.insert(r.len());
        }
        let min_len = set.iter().map(Path::len).min();
        let max_len = set.iter().map(Path::len).max().unwrap_or(0);
        Ok(ZSet {
            relations: set,
            index,
            lengths,
            min_len,
            max_len,
        })
    }

    pub fn empty() -> Self {
        ZSet {
            relations: BTreeSet::new(),
            index: HashMap::new(),
            lengths: BTreeSet::new(),
            min_len: None,
            max_len: 0,
        }
    }

    pub fn relations(&self) -> impl Iterator<Item = &Path> {
        self.relations.iter()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.relations.contains(p)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn min_len(&self) -> Option<usize> {
        self.min_len
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// The first relation occurring as a subpath of `p`, if any.
    pub fn first_violation(&self, p: &Path) -> Option<&Path> {
        let w = p.arrows();
        for (i, a) in w.iter().enumerate() {
            for len in self.lengths.range(..=w.len() - i) {
                if let Some(cands) = self.index.get(&(*a, *len)) {
                    for z in cands {
                        if &w[i..i + len] == z.arrows() {
                            return Some(z);
                        }
                    }
                }
            }
        }
        None
    }

    /// Whether no relation is a subpath of `p`.
    pub fn is_admissible(&self, p: &Path) -> bool {
        self.first_violation(p).is_none()
    }

    /// Unindexed admissibility scan, kept as an oracle for the indexed path.
    pub fn is_admissible_naive(&self, quiver: &Quiver, p: &Path) -> bool {
        self.relations
            .iter()
            .all(|z| subpath_occurrences(quiver, z, p).is_empty())
    }

    /// Whether prepending arrow `a` to the admissible word `w` keeps it
    /// admissible; only windows touching `a` are scanned.
    pub fn left_extension_admissible(&self, a: ArrowId, w: &[ArrowId]) -> bool {
        for len in self.lengths.iter().copied() {
            if len > w.len() + 1 {
                continue;
            }
            // the window of this length whose left arrow is `a`
            let start = w.len() + 1 - len;
            let right = if start < w.len() { w[start] } else { a };
            if let Some(cands) = self.index.get(&(right, len)) {
                for z in cands {
                    let zw = z.arrows();
                    if zw[len - 1] == a && zw[..len - 1] == w[start..] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether appending arrow `a` on the right (to act first) keeps the
    /// admissible word `w` admissible.
    pub fn right_extension_admissible(&self, w: &[ArrowId], a: ArrowId) -> bool {
        for len in self.lengths.iter().copied() {
            if len > w.len() + 1 {
                continue;
            }
            if let Some(cands) = self.index.get(&(a, len)) {
                for z in cands {
                    let zw = z.arrows();
                    if zw[0] == a && zw[1..] == w[..len - 1] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Which half of the special-pair condition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCondition {
    /// Two arrows extend the same arrow on the left outside Z.
    LeftExtensions,
    /// Two arrows extend the same arrow on the right outside Z.
    RightExtensions,
}

/// A violating triple: `a != a_prime` both compose with `b` outside Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialWitness {
    pub condition: SpecialCondition,
    pub a: ArrowId,
    pub a_prime: ArrowId,
    pub b: ArrowId,
}

impl SpecialWitness {
    pub fn render(&self, quiver: &Quiver) -> String {
        let (a, ap, b) = (
            quiver.arrow_name(self.a),
            quiver.arrow_name(self.a_prime),
            quiver.arrow_name(self.b),
        );
        match self.condition {
            SpecialCondition::LeftExtensions => {
                format!("arrows {a} and {ap} both extend {b} on the left outside Z")
            }
            SpecialCondition::RightExtensions => {
                format!("arrows {a} and {ap} both extend {b} on the right outside Z")
            }
        }
    }
}

/// The quiver, relations and cached special-pair verdict.
#[derive(Clone, Debug)]
pub struct SpecialPairData {
    pub special: bool,
    pub witnesses: Vec<SpecialWitness>,
}

/// Checks both halves of the special-pair condition by brute force over
/// arrow pairs. Membership `ab ∉ Z` is literal set membership.
pub fn check_special_pair(quiver: &Quiver, z: &ZSet) -> SpecialPairData {
    let mut witnesses = Vec::new();
    for b in quiver.arrows() {
        // left extensions: arrows a with t(a) = h(b), ab ∉ Z
        let mut outside = Vec::new();
        for a in quiver.arrows_from(quiver.head(b)) {
            let ab = compose(quiver, &Path::arrow(*a), &Path::arrow(b), )
                .expect("endpoints match by construction");
            if !z.contains(&ab) {
                outside.push(*a);
            }
        }
        if outside.len() > 1 {
            witnesses.push(SpecialWitness {
                condition: SpecialCondition::LeftExtensions,
                a: outside[0],
                a_prime: outside[1],
                b,
            });
        }
        // right extensions: arrows c with h(c) = t(b), bc ∉ Z
        let mut outside = Vec::new();
        for c in quiver.arrows_into(quiver.tail(b)) {
            let bc = compose(quiver, &Path::arrow(b), &Path::arrow(*c))
                .expect("endpoints match by construction");
            if !z.contains(&bc) {
                outside.push(*c);
            }
        }
        if outside.len() > 1 {
            witnesses.push(SpecialWitness {
                condition: SpecialCondition::RightExtensions,
                a: outside[0],
                a_prime: outside[1],
                b,
            });
        }
    }
    SpecialPairData {
        special: witnesses.is_empty(),
        witnesses,
    }
}

/// Every vertex heads at most 2 arrows and tails at most 2 arrows.
pub fn check_biserial(quiver: &Quiver) -> Result<(), VertexId> {
    for v in quiver.vertices() {
        if quiver.arrows_into(v).len() > 2 || quiver.arrows_from(v).len() > 2 {
            return Err(v);
        }
    }
    Ok(())
}
