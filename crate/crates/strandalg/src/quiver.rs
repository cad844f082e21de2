//! Finite quivers and their paths.
//!
//! A quiver is a finite directed multigraph with named vertices and arrows.
//! Paths are either trivial (a vertex idempotent) or words of consecutive
//! arrows, stored in application order: the arrow at index 0 acts first, so
//! the printed form `a*y*x` means "x, then y, then a".

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Dense index of a vertex in its quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u32);

/// Dense index of an arrow in its quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArrowId(pub u32);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows are not consecutive at position {position}")]
    NotConsecutive { position: usize },
    #[error("cannot compose: tail of left factor is {left_tail} but head of right factor is {right_head}")]
    NotComposable { left_tail: String, right_head: String },
    #[error("expected a cycle, got a path from {tail} to {head}")]
    NotACycle { tail: String, head: String },
    #[error("operation is defined for non-trivial paths only")]
    TrivialPath,
    #[error("empty arrow word")]
    EmptyWord,
}

/// A finite quiver with interned vertex and arrow names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrow_names: Vec<String>,
    /// (tail, head) per arrow.
    ends: Vec<(VertexId, VertexId)>,
    out_arrows: Vec<Vec<ArrowId>>,
    in_arrows: Vec<Vec<ArrowId>>,
}

impl Quiver {
    pub fn new() -> Self {
        Quiver::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, QuiverError> {
        let name = name.into();
        if self.vertex_names.contains(&name) {
            return Err(QuiverError::DuplicateVertex(name));
        }
        let id = VertexId(self.vertex_names.len() as u32);
        self.vertex_names.push(name);
        self.out_arrows.push(Vec::new());
        self.in_arrows.push(Vec::new());
        Ok(id)
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        tail: VertexId,
        head: VertexId,
    ) -> Result<ArrowId, QuiverError> {
        let name = name.into();
        if self.arrow_names.contains(&name) {
            return Err(QuiverError::DuplicateArrow(name));
        }
        let id = ArrowId(self.arrow_names.len() as u32);
        self.arrow_names.push(name);
        self.ends.push((tail, head));
        self.out_arrows[tail.0 as usize].push(id);
        self.in_arrows[head.0 as usize].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrow_names.len() as u32).map(ArrowId)
    }

    pub fn tail(&self, a: ArrowId) -> VertexId {
        self.ends[a.0 as usize].0
    }

    pub fn head(&self, a: ArrowId) -> VertexId {
        self.ends[a.0 as usize].1
    }

    /// Arrows with the given tail.
    pub fn arrows_from(&self, v: VertexId) -> &[ArrowId] {
        &self.out_arrows[v.0 as usize]
    }

    /// Arrows with the given head.
    pub fn arrows_into(&self, v: VertexId) -> &[ArrowId] {
        &self.in_arrows[v.0 as usize]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrow_names[a.0 as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_names
            .iter()
            .position(|n| n == name)
            .map(|i| ArrowId(i as u32))
    }
}

/// A path in a quiver: a vertex idempotent or a non-empty consecutive word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    /// The trivial path `e_v`.
    Trivial(VertexId),
    /// Arrows in application order (index 0 acts first).
    Word(Vec<ArrowId>),
}

#[allow(clippy::len_without_is_empty)]
impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path::Trivial(v)
    }

    /// Builds a path from arrows in application order, checking consecutiveness.
    pub fn from_arrows(quiver: &Quiver, arrows: Vec<ArrowId>) -> Result<Self, QuiverError> {
        if arrows.is_empty() {
            return Err(QuiverError::EmptyWord);
        }
        for i in 0..arrows.len() - 1 {
            if quiver.head(arrows[i]) != quiver.tail(arrows[i + 1]) {
                return Err(QuiverError::NotConsecutive { position: i });
            }
        }
        Ok(Path::Word(arrows))
    }

    pub fn arrow(a: ArrowId) -> Self {
        Path::Word(vec![a])
    }

    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Word(w) => w.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    /// Arrows in application order; empty for trivial paths.
    pub fn arrows(&self) -> &[ArrowId] {
        match self {
            Path::Trivial(_) => &[],
            Path::Word(w) => w,
        }
    }

    pub fn tail(&self, quiver: &Quiver) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Word(w) => quiver.tail(w[0]),
        }
    }

    pub fn head(&self, quiver: &Quiver) -> VertexId {
        match self {
            Path::Trivial(v) => *v,
            Path::Word(w) => quiver.head(*w.last().unwrap()),
        }
    }

    pub fn is_cycle(&self, quiver: &Quiver) -> bool {
        !self.is_trivial() && self.head(quiver) == self.tail(quiver)
    }

    /// The unique length-1 right subpath of a non-trivial path.
    pub fn right_arrow(&self) -> Option<ArrowId> {
        self.arrows().first().copied()
    }

    /// The unique length-1 left subpath of a non-trivial path.
    pub fn left_arrow(&self) -> Option<ArrowId> {
        self.arrows().last().copied()
    }

    pub fn has_distinct_arrows(&self) -> bool {
        let w = self.arrows();
        let set: BTreeSet<_> = w.iter().collect();
        set.len() == w.len()
    }

    /// Renders the word with `*` separators, left arrow first, e.g. `a*y*x`;
    /// trivial paths render as `e(<vertex>)`.
    pub fn render(&self, quiver: &Quiver) -> String {
        match self {
            Path::Trivial(v) => format!("e({})", quiver.vertex_name(*v)),
            Path::Word(w) => {
                let names: Vec<&str> = w.iter().rev().map(|a| quiver.arrow_name(*a)).collect();
                names.join("*")
            }
        }
    }
}

// Paths are ordered by length first so that maps keyed by `Path` iterate from
// short to long, which the rewriting engine relies on.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Path::Trivial(v), Path::Trivial(w)) => v.cmp(w),
            (Path::Trivial(_), Path::Word(_)) => std::cmp::Ordering::Less,
            (Path::Word(_), Path::Trivial(_)) => std::cmp::Ordering::Greater,
            (Path::Word(a), Path::Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A non-trivial path with equal head and tail, together with its incidence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    path: Path,
    incidence: VertexId,
}

#[allow(clippy::len_without_is_empty)]
impl Cycle {
    pub fn new(quiver: &Quiver, path: Path) -> Result<Self, QuiverError> {
        if path.is_trivial() {
            return Err(QuiverError::TrivialPath);
        }
        let (t, h) = (path.tail(quiver), path.head(quiver));
        if t != h {
            return Err(QuiverError::NotACycle {
                tail: quiver.vertex_name(t).to_string(),
                head: quiver.vertex_name(h).to_string(),
            });
        }
        Ok(Cycle { path, incidence: t })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn incidence(&self) -> VertexId {
        self.incidence
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        self.path.arrows()
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        self.path.render(quiver)
    }

    /// The k-th power of the cycle.
    pub fn power(&self, k: usize) -> Path {
        let w = self.path.arrows();
        let mut arrows = Vec::with_capacity(w.len() * k);
        for _ in 0..k {
            arrows.extend_from_slice(w);
        }
        if arrows.is_empty() {
            Path::Trivial(self.incidence)
        } else {
            Path::Word(arrows)
        }
    }
}

/// Composes `p` after `q` (`q` acts first).
pub fn compose(quiver: &Quiver, p: &Path, q: &Path) -> Result<Path, QuiverError> {
    if p.tail(quiver) != q.head(quiver) {
        return Err(QuiverError::NotComposable {
            left_tail: quiver.vertex_name(p.tail(quiver)).to_string(),
            right_head: quiver.vertex_name(q.head(quiver)).to_string(),
        });
    }
    Ok(match (p, q) {
        (Path::Trivial(_), _) => q.clone(),
        (_, Path::Trivial(_)) => p.clone(),
        (Path::Word(a), Path::Word(b)) => {
            let mut arrows = b.clone();
            arrows.extend_from_slice(a);
            Path::Word(arrows)
        }
    })
}

/// All factorizations `p = q·z·r`, reported as offsets of `z` from the right
/// end of `p` (offset counts arrows applied before `z`).
pub fn subpath_occurrences(quiver: &Quiver, z: &Path, p: &Path) -> Vec<usize> {
    match z {
        Path::Trivial(v) => {
            // e_v occurs wherever p passes through v.
            let mut occ = Vec::new();
            let w = p.arrows();
            if p.tail(quiver) == *v {
                occ.push(0);
            }
            for (i, a) in w.iter().enumerate() {
                if quiver.head(*a) == *v {
                    occ.push(i + 1);
                }
            }
            occ
        }
        Path::Word(zw) => {
            let pw = p.arrows();
            if zw.len() > pw.len() {
                return Vec::new();
            }
            (0..=pw.len() - zw.len())
                .filter(|&i| &pw[i..i + zw.len()] == zw.as_slice())
                .collect()
        }
    }
}

/// Whether `z` occurs as a subpath of `p`.
pub fn is_subpath(quiver: &Quiver, z: &Path, p: &Path) -> bool {
    !subpath_occurrences(quiver, z, p).is_empty()
}

/// The rotation set of a cycle; its size divides the cycle length.
pub fn rotations(quiver: &Quiver, c: &Cycle) -> BTreeSet<Cycle> {
    let w = c.arrows();
    let mut out = BTreeSet::new();
    for i in 0..w.len() {
        let mut rotated = Vec::with_capacity(w.len());
        rotated.extend_from_slice(&w[i..]);
        rotated.extend_from_slice(&w[..i]);
        let path = Path::Word(rotated);
        out.insert(Cycle::new(quiver, path).expect("rotation of a cycle is a cycle"));
    }
    out
}

/// The vertex set `V(p)` traversed by a non-trivial path.
pub fn traversed_vertices(quiver: &Quiver, p: &Path) -> Result<BTreeSet<VertexId>, QuiverError> {
    if p.is_trivial() {
        return Err(QuiverError::TrivialPath);
    }
    let mut set = BTreeSet::new();
    set.insert(p.tail(quiver));
    for a in p.arrows() {
        set.insert(quiver.head(*a));
    }
    Ok(set)
}

/// If `c = d^k` for a shorter cycle `d` and maximal `k >= 2`, returns `(d, k)`.
pub fn proper_power_root(quiver: &Quiver, c: &Cycle) -> Option<(Cycle, usize)> {
    let w = c.arrows();
    let n = w.len();
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let root = &w[..d];
        if w.chunks(d).all(|chunk| chunk == root) {
            let cycle = Cycle::new(quiver, Path::Word(root.to_vec()))
                .expect("periodic prefix of a cycle closes up");
            return Some((cycle, n / d));
        }
    }
    None
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}
