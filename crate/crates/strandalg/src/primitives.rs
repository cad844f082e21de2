//! Z-primitive cycles and the primitive-nerve partition.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::quiver::{rotations, traversed_vertices, ArrowId, Cycle, Path, Quiver, VertexId};
use crate::relations::{check_special_pair, SpecialWitness, ZSet};

#[derive(Debug, Error)]
pub enum PrimitivesError {
    #[error("the pair is not special ({0}); run the special-pair check for witnesses")]
    NotSpecial(String),
}

/// The set of Z-primitive cycles of a special pair, indexed by incidence.
#[derive(Clone, Debug)]
pub struct PrimitiveCycleSet {
    cycles: BTreeSet<Cycle>,
    by_vertex: BTreeMap<VertexId, Vec<Cycle>>,
    rotation_classes: Vec<BTreeSet<Cycle>>,
}

impl PrimitiveCycleSet {
    pub fn cycles(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter()
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn contains(&self, c: &Cycle) -> bool {
        self.cycles.contains(c)
    }

    /// The cycles incident at `v`.
    pub fn at_vertex(&self, v: VertexId) -> &[Cycle] {
        self.by_vertex.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rotation_classes(&self) -> &[BTreeSet<Cycle>] {
        &self.rotation_classes
    }

    pub fn max_len(&self) -> usize {
        self.cycles.iter().map(Cycle::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> Option<usize> {
        self.cycles.iter().map(Cycle::len).min()
    }
}

/// Whether every power of `c` is Z-admissible, decided on the single power
/// `c^M` with `M = ceil(Lmax/|c|) + 1`: a relation of length `l` embeds in
/// some power iff it embeds in a window of that size.
pub fn power_admissible(z: &ZSet, c: &Cycle) -> bool {
    let m = z.max_len().div_ceil(c.len()) + 1;
    z.is_admissible(&c.power(m))
}

/// Enumerates the Z-primitive cycles of a special pair by depth-first walk
/// over arrow-distinct admissible words (primitive cycles have distinct
/// arrows, so length is bounded by the arrow count).
pub fn enumerate_primitive_cycles(
    quiver: &Quiver,
    z: &ZSet,
) -> Result<PrimitiveCycleSet, PrimitivesError> {
    let verdict = check_special_pair(quiver, z);
    if !verdict.special {
        let witness = verdict
            .witnesses
            .first()
            .map(|w: &SpecialWitness| w.render(quiver))
            .unwrap_or_default();
        return Err(PrimitivesError::NotSpecial(witness));
    }

    let mut cycles = BTreeSet::new();
    let mut used = vec![false; quiver.arrow_count()];
    for v in quiver.vertices() {
        let mut word: Vec<ArrowId> = Vec::new();
        dfs(quiver, z, v, &mut word, &mut used, &mut cycles);
    }

    let mut by_vertex: BTreeMap<VertexId, Vec<Cycle>> = BTreeMap::new();
    for c in &cycles {
        by_vertex.entry(c.incidence()).or_default().push(c.clone());
    }

    let mut rotation_classes: Vec<BTreeSet<Cycle>> = Vec::new();
    let mut seen: BTreeSet<Cycle> = BTreeSet::new();
    for c in &cycles {
        if seen.contains(c) {
            continue;
        }
        let class = rotations(quiver, c);
        seen.extend(class.iter().cloned());
        rotation_classes.push(class);
    }

    Ok(PrimitiveCycleSet {
        cycles,
        by_vertex,
        rotation_classes,
    })
}

fn dfs(
    quiver: &Quiver,
    z: &ZSet,
    start: VertexId,
    word: &mut Vec<ArrowId>,
    used: &mut [bool],
    cycles: &mut BTreeSet<Cycle>,
) {
    let at = if let Some(last) = word.last() {
        quiver.head(*last)
    } else {
        start
    };
    if !word.is_empty() && at == start {
        let cycle = Cycle::new(quiver, Path::Word(word.clone())).expect("closed word");
        // arrow-distinct cycles are never proper powers
        if power_admissible(z, &cycle) {
            cycles.insert(cycle);
        }
        // keep walking: a longer arrow-distinct cycle may close here again
    }
    for a in quiver.arrows_from(at) {
        if used[a.0 as usize] {
            continue;
        }
        if !z.left_extension_admissible(*a, word) {
            continue;
        }
        used[a.0 as usize] = true;
        word.push(*a);
        dfs(quiver, z, start, word, used, cycles);
        word.pop();
        used[a.0 as usize] = false;
    }
}

/// The primitive vertices split into nerve components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NervePartition {
    /// Blocks ordered by least vertex id; each block sorted.
    blocks: Vec<BTreeSet<VertexId>>,
    block_of: BTreeMap<VertexId, usize>,
}

impl NervePartition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BTreeSet<VertexId>] {
        &self.blocks
    }

    /// 1-based block index of a primitive vertex.
    pub fn block_of(&self, v: VertexId) -> Option<usize> {
        self.block_of.get(&v).copied().map(|i| i + 1)
    }

    pub fn primitive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.block_of.keys().copied()
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, block)| {
                let names: Vec<&str> =
                    block.iter().map(|v| quiver.vertex_name(*v)).collect();
                format!("V[{}]={{{}}}", i + 1, names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Connected components of the nerve of the traversed-vertex sets, via
/// union-find seeded with V(c) x V(c) for each primitive cycle.
pub fn nerve_partition(quiver: &Quiver, pcs: &PrimitiveCycleSet) -> NervePartition {
    let mut uf = UnionFind::new(quiver.vertex_count());
    let mut primitive: BTreeSet<VertexId> = BTreeSet::new();
    for c in pcs.cycles() {
        let vs = traversed_vertices(quiver, c.path()).expect("cycles are non-trivial");
        let mut iter = vs.iter();
        if let Some(first) = iter.next() {
            primitive.insert(*first);
            for v in iter {
                primitive.insert(*v);
                uf.union(first.0 as usize, v.0 as usize);
            }
        }
    }

    let mut roots: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for v in &primitive {
        roots.entry(uf.find(v.0 as usize)).or_default().insert(*v);
    }
    // deterministic order: ascending least vertex id
    let mut blocks: Vec<BTreeSet<VertexId>> = roots.into_values().collect();
    blocks.sort_by_key(|b| *b.iter().next().expect("blocks are non-empty"));

    let mut block_of = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        for v in block {
            block_of.insert(*v, i);
        }
    }
    NervePartition { blocks, block_of }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (mut xr, mut yr) = (self.find(x), self.find(y));
        if xr == yr {
            return;
        }
        if self.size[xr] < self.size[yr] {
            std::mem::swap(&mut xr, &mut yr);
        }
        self.parent[yr] = xr;
        self.size[xr] += self.size[yr];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{intro_pair, mathieu_pair, running_pair, word};
    use crate::quiver::Cycle;

    fn rendered(quiver: &Quiver, pcs: &PrimitiveCycleSet) -> BTreeSet<String> {
        pcs.cycles().map(|c| c.render(quiver)).collect()
    }

    fn as_set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn power_admissibility_on_intro_loops() {
        let (q, z) = intro_pair(3);
        let c = Cycle::new(&q, word(&q, &["c"])).unwrap();
        assert!(!power_admissible(&z, &c)); // c^3 is a relation

        let b = Cycle::new(&q, word(&q, &["b"])).unwrap();
        assert!(power_admissible(&z, &b));
    }

    #[test]
    fn power_admissibility_on_running_loop() {
        let (q, z) = running_pair();
        let zz = Cycle::new(&q, word(&q, &["z"])).unwrap();
        assert!(!power_admissible(&z, &zz)); // z^2 is a relation
        let x = Cycle::new(&q, word(&q, &["x"])).unwrap();
        assert!(power_admissible(&z, &x));
    }

    #[test]
    fn intro_primitive_cycles() {
        let (q, z) = intro_pair(3);
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        assert_eq!(
            rendered(&q, &pcs),
            as_set(&["a*y*x", "y*x*a", "x*a*y", "w*z", "z*w", "b"])
        );
    }

    #[test]
    fn running_primitive_cycles() {
        let (q, z) = running_pair();
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        assert_eq!(
            rendered(&q, &pcs),
            as_set(&[
                "x", "a5*b1", "b1*a5", "b2*a2", "a2*b2", "z*b3*a1", "a1*z*b3", "b3*a1*z"
            ])
        );
    }

    #[test]
    fn mathieu_primitive_cycles() {
        let (q, z) = mathieu_pair();
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        assert_eq!(
            rendered(&q, &pcs),
            as_set(&[
                "a", "c*b", "j*h*f*d", "b*c", "e", "d*j*h*f", "g", "f*d*j*h", "i", "h*f*d*j"
            ])
        );
    }

    #[test]
    fn cycles_at_vertices_of_intro() {
        let (q, z) = intro_pair(3);
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        let at = |name: &str| -> BTreeSet<String> {
            pcs.at_vertex(q.vertex_by_name(name).unwrap())
                .iter()
                .map(|c| c.render(&q))
                .collect()
        };
        assert_eq!(at("2"), as_set(&["x*a*y", "z*w"]));
        assert_eq!(at("5"), as_set(&[]));
        assert_eq!(at("4"), as_set(&["b"]));
    }

    #[test]
    fn refuses_non_special_input() {
        let mut q = Quiver::new();
        let v0 = q.add_vertex("0").unwrap();
        let v1 = q.add_vertex("1").unwrap();
        q.add_arrow("a", v0, v1).unwrap();
        q.add_arrow("a'", v0, v1).unwrap();
        q.add_arrow("b", v1, v0).unwrap();
        let z = ZSet::empty();
        assert!(matches!(
            enumerate_primitive_cycles(&q, &z),
            Err(PrimitivesError::NotSpecial(_))
        ));
    }

    #[test]
    fn nerve_partition_of_intro() {
        let (q, z) = intro_pair(3);
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        let partition = nerve_partition(&q, &pcs);
        assert_eq!(partition.render(&q), "V[1]={1,2,3} V[2]={4}");
        assert_eq!(partition.block_of(q.vertex_by_name("4").unwrap()), Some(2));
        assert_eq!(partition.block_of(q.vertex_by_name("5").unwrap()), None);
    }

    #[test]
    fn nerve_partition_of_running() {
        let (q, z) = running_pair();
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        let partition = nerve_partition(&q, &pcs);
        assert_eq!(partition.render(&q), "V[1]={1,2} V[2]={4,5,6}");
    }

    #[test]
    fn nerve_partition_with_no_cycles_is_empty() {
        // two vertices, one arrow: no cycles at all
        let mut q = Quiver::new();
        let v0 = q.add_vertex("0").unwrap();
        let v1 = q.add_vertex("1").unwrap();
        q.add_arrow("a", v0, v1).unwrap();
        let z = ZSet::empty();
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        assert!(pcs.is_empty());
        let partition = nerve_partition(&q, &pcs);
        assert_eq!(partition.block_count(), 0);
    }

    #[test]
    fn per_vertex_bound_and_rotation_closure() {
        for (q, z) in [intro_pair(3), running_pair(), mathieu_pair()] {
            let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
            for v in q.vertices() {
                let bound = q.arrows_into(v).len().min(q.arrows_from(v).len());
                assert!(pcs.at_vertex(v).len() <= bound);
            }
            for c in pcs.cycles() {
                assert!(c.path().has_distinct_arrows());
                for r in rotations(&q, c) {
                    assert!(pcs.contains(&r));
                }
            }
        }
    }

    #[test]
    fn rotation_classes_partition_the_cycle_set() {
        for (q, z) in [intro_pair(3), running_pair(), mathieu_pair()] {
            let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
            let mut covered = BTreeSet::new();
            for class in pcs.rotation_classes() {
                let member = class.iter().next().unwrap();
                assert_eq!(&rotations(&q, member), class);
                for c in class {
                    assert!(covered.insert(c.clone()), "classes are disjoint");
                }
            }
            assert_eq!(covered.len(), pcs.len());
        }
    }

    #[test]
    fn empty_quiver_yields_empty_outputs() {
        let q = Quiver::new();
        let z = ZSet::empty();
        let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
        assert!(pcs.is_empty());
        assert_eq!(nerve_partition(&q, &pcs).block_count(), 0);
        assert!(crate::enumerate::admissible_paths(&q, &z, 5).is_empty());
    }

    #[test]
    fn shared_arrows_force_rotation_classes() {
        for (q, z) in [intro_pair(3), running_pair(), mathieu_pair()] {
            let pcs = enumerate_primitive_cycles(&q, &z).unwrap();
            let all: Vec<_> = pcs.cycles().cloned().collect();
            for c in &all {
                for d in &all {
                    if c == d {
                        continue;
                    }
                    let share = c.arrows().iter().any(|a| d.arrows().contains(a));
                    if share {
                        assert!(rotations(&q, c).contains(d));
                    }
                }
            }
            // distinct cycles at a vertex have distinct left and right arrows
            for v in q.vertices() {
                let at = pcs.at_vertex(v);
                for (i, c) in at.iter().enumerate() {
                    for d in &at[i + 1..] {
                        assert_ne!(c.path().left_arrow(), d.path().left_arrow());
                        assert_ne!(c.path().right_arrow(), d.path().right_arrow());
                    }
                }
            }
        }
    }
}
