//! Path-algebra arithmetic over a truncated coefficient model, the ideal
//! presentation of the string-algebra construction, and normal forms.
//!
//! The ideal is generated by the zero-relations, by `s_i*e_v - sigma_v` for
//! primitive vertices `v` in block `i`, and by `s_i*e_v` for vertices outside
//! block `i`. Reduction rewrites to a fixpoint:
//!
//! * terms whose path factors through Z are dropped;
//! * an `s_i`-divisible coefficient at a head in block `i` is absorbed by
//!   left-multiplying with the cycle sum at that head (paths get longer, so
//!   the length cap bounds the recursion);
//! * `s_j`-divisible parts at heads outside block `j` are dropped.
//!
//! Normal forms are supported on Z-admissible paths of length below the cap
//! with residue-field coefficients.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::coeff::{Coefficient, CoefficientModel};
use crate::primitives::{NervePartition, PrimitiveCycleSet};
use crate::quiver::{compose, Cycle, Path, Quiver, VertexId};
use crate::relations::ZSet;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("model dimension {model} does not match the {blocks} nerve blocks")]
    DimensionMismatch { model: usize, blocks: usize },
    #[error("transport requires t(p) = v = h(q)")]
    TransportEndpoints,
    #[error("transport requires Z-admissible p and q")]
    TransportInadmissible,
    #[error("generator index {0} is out of range")]
    GeneratorIndex(usize),
}

/// Default path-length cap: comfortably above the bounded-below constant on
/// desk-scale inputs.
pub fn default_len_cap(quiver: &Quiver, z: &ZSet) -> usize {
    2 * (quiver.arrow_count() + z.max_len())
}

/// An element of the truncated path algebra: finitely many paths with
/// coefficients in the model, paths of length >= the cap truncated away.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, Coefficient>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Coefficient)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coefficient(&self, p: &Path) -> Option<&Coefficient> {
        self.terms.get(p)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// One `s_i*e_v - sigma_v` generator.
#[derive(Clone, Debug)]
pub struct VGenerator {
    /// 1-based index into the model's generator list.
    pub s_index: usize,
    pub vertex: VertexId,
    pub sigma: Vec<Cycle>,
}

/// One `s_i*e_v` generator for `v` outside block `i`.
#[derive(Clone, Debug)]
pub struct NotVGenerator {
    pub s_index: usize,
    pub vertex: VertexId,
}

/// The generator list of the construction, plus the lookups that drive the
/// rewriting engine.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    zset: ZSet,
    v_generators: Vec<VGenerator>,
    notv_generators: Vec<NotVGenerator>,
    absorb: BTreeMap<VertexId, (usize, Vec<Path>)>,
    drops: BTreeMap<VertexId, Vec<usize>>,
}

impl IdealPresentation {
    /// The monomial part alone; reduction modulo this presentation only drops
    /// inadmissible paths.
    pub fn z_only(zset: ZSet) -> Self {
        IdealPresentation {
            zset,
            v_generators: Vec::new(),
            notv_generators: Vec::new(),
            absorb: BTreeMap::new(),
            drops: BTreeMap::new(),
        }
    }

    pub fn zset(&self) -> &ZSet {
        &self.zset
    }

    pub fn v_generators(&self) -> &[VGenerator] {
        &self.v_generators
    }

    pub fn notv_generators(&self) -> &[NotVGenerator] {
        &self.notv_generators
    }

    fn absorption_at(&self, v: VertexId) -> Option<&(usize, Vec<Path>)> {
        self.absorb.get(&v)
    }

    fn dropped_at(&self, v: VertexId) -> &[usize] {
        self.drops.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Stable JSON rendering with sorted path strings.
    pub fn to_json(&self, quiver: &Quiver, model: &CoefficientModel, len_cap: usize) -> serde_json::Value {
        let mut relations: Vec<String> =
            self.zset.relations().map(|p| p.render(quiver)).collect();
        relations.sort();
        let v_gens: Vec<_> = self
            .v_generators
            .iter()
            .map(|g| {
                let mut sigma: Vec<String> =
                    g.sigma.iter().map(|c| c.render(quiver)).collect();
                sigma.sort();
                json!({
                    "s": model.var_names()[g.s_index - 1],
                    "vertex": quiver.vertex_name(g.vertex),
                    "sigma": sigma,
                })
            })
            .collect();
        let notv: Vec<_> = self
            .notv_generators
            .iter()
            .map(|g| {
                json!({
                    "s": model.var_names()[g.s_index - 1],
                    "vertex": quiver.vertex_name(g.vertex),
                })
            })
            .collect();
        json!({
            "relations": relations,
            "v_generators": v_gens,
            "notv_generators": notv,
            "caps": { "L": len_cap, "D": model.deg_cap() },
        })
    }
}

/// Quiver, coefficient model and length cap shared by element operations.
#[derive(Clone, Debug)]
pub struct AlgebraContext {
    pub quiver: Quiver,
    pub model: CoefficientModel,
    pub len_cap: usize,
}

impl AlgebraContext {
    pub fn new(quiver: Quiver, model: CoefficientModel, len_cap: usize) -> Self {
        AlgebraContext { quiver, model, len_cap }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn idempotent(&self, v: VertexId) -> AlgebraElement {
        self.path_element(Path::trivial(v))
    }

    pub fn path_element(&self, p: Path) -> AlgebraElement {
        self.with_coefficient(self.model.one(), p)
    }

    pub fn with_coefficient(&self, c: Coefficient, p: Path) -> AlgebraElement {
        let mut el = AlgebraElement::default();
        if !c.is_zero() && p.len() < self.len_cap {
            el.terms.insert(p, c);
        }
        el
    }

    fn add_term(&self, into: &mut BTreeMap<Path, Coefficient>, p: Path, c: &Coefficient) {
        if c.is_zero() || p.len() >= self.len_cap {
            return;
        }
        let merged = match into.get(&p) {
            Some(existing) => self.model.add(existing, c),
            None => c.clone(),
        };
        if merged.is_zero() {
            into.remove(&p);
        } else {
            into.insert(p, merged);
        }
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut terms = x.terms.clone();
        for (p, c) in &y.terms {
            self.add_term(&mut terms, p.clone(), c);
        }
        AlgebraElement { terms }
    }

    pub fn neg(&self, x: &AlgebraElement) -> AlgebraElement {
        let terms = x
            .terms
            .iter()
            .map(|(p, c)| (p.clone(), self.model.neg(c)))
            .collect();
        AlgebraElement { terms }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, c: &Coefficient, x: &AlgebraElement) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (p, existing) in &x.terms {
            self.add_term(&mut terms, p.clone(), &self.model.mul(c, existing));
        }
        AlgebraElement { terms }
    }

    /// Bilinear extension of path composition; non-composable pairs
    /// contribute nothing, paths at or above the cap are truncated away.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (px, cx) in &x.terms {
            for (py, cy) in &y.terms {
                if px.tail(&self.quiver) != py.head(&self.quiver) {
                    continue;
                }
                if px.len() + py.len() >= self.len_cap {
                    continue;
                }
                let path = compose(&self.quiver, px, py).expect("endpoints checked");
                self.add_term(&mut terms, path, &self.model.mul(cx, cy));
            }
        }
        AlgebraElement { terms }
    }

    /// The sum of the primitive cycles at `v`; zero when there are none.
    pub fn sigma(&self, v: VertexId, pcs: &PrimitiveCycleSet) -> AlgebraElement {
        let mut el = self.zero();
        for c in pcs.at_vertex(v) {
            el = self.add(&el, &self.path_element(c.path().clone()));
        }
        el
    }

    /// Assembles the generator list of the construction. The model dimension
    /// must match the number of nerve blocks (any dimension is accepted when
    /// there are no primitive cycles at all: every generator lands in the
    /// `s_i*e_v` family).
    pub fn ideal_generators(
        &self,
        zset: &ZSet,
        pcs: &PrimitiveCycleSet,
        partition: &NervePartition,
    ) -> Result<IdealPresentation, AlgebraError> {
        let n = self.model.dimension();
        let blocks = partition.block_count();
        if blocks > 0 && n != blocks {
            return Err(AlgebraError::DimensionMismatch { model: n, blocks });
        }

        let mut v_generators = Vec::new();
        let mut absorb = BTreeMap::new();
        for (idx, block) in partition.blocks().iter().enumerate() {
            let s_index = idx + 1;
            for v in block {
                let sigma: Vec<Cycle> = pcs.at_vertex(*v).to_vec();
                absorb.insert(
                    *v,
                    (s_index, sigma.iter().map(|c| c.path().clone()).collect()),
                );
                v_generators.push(VGenerator {
                    s_index,
                    vertex: *v,
                    sigma,
                });
            }
        }

        let mut notv_generators = Vec::new();
        let mut drops: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for s_index in 1..=n {
            for v in self.quiver.vertices() {
                let in_block = partition.block_of(v) == Some(s_index);
                if !in_block {
                    notv_generators.push(NotVGenerator { s_index, vertex: v });
                    drops.entry(v).or_default().push(s_index);
                }
            }
        }

        Ok(IdealPresentation {
            zset: zset.clone(),
            v_generators,
            notv_generators,
            absorb,
            drops,
        })
    }

    /// The generators as elements, for soundness checks.
    pub fn generator_elements(&self, ideal: &IdealPresentation) -> Vec<AlgebraElement> {
        let mut out = Vec::new();
        for z in ideal.zset.relations() {
            out.push(self.path_element(z.clone()));
        }
        for g in &ideal.v_generators {
            let mut el = self.with_coefficient(
                self.model.s_power(g.s_index, 1),
                Path::trivial(g.vertex),
            );
            for c in &g.sigma {
                el = self.sub(&el, &self.path_element(c.path().clone()));
            }
            out.push(el);
        }
        for g in &ideal.notv_generators {
            out.push(self.with_coefficient(
                self.model.s_power(g.s_index, 1),
                Path::trivial(g.vertex),
            ));
        }
        out
    }

    /// Normal form modulo the presentation at the context caps.
    pub fn reduce(&self, x: &AlgebraElement, ideal: &IdealPresentation) -> AlgebraElement {
        self.reduce_oriented(x, ideal, Orientation::Head)
    }

    /// Normal form computed with tail-side absorption; agrees with `reduce`
    /// and is kept as an independent route for cross-checks.
    pub fn reduce_tail_oriented(
        &self,
        x: &AlgebraElement,
        ideal: &IdealPresentation,
    ) -> AlgebraElement {
        self.reduce_oriented(x, ideal, Orientation::Tail)
    }

    fn reduce_oriented(
        &self,
        x: &AlgebraElement,
        ideal: &IdealPresentation,
        orientation: Orientation,
    ) -> AlgebraElement {
        let mut pending: BTreeMap<Path, Coefficient> = BTreeMap::new();
        for (p, c) in &x.terms {
            if p.len() < self.len_cap && ideal.zset.is_admissible(p) {
                self.add_term(&mut pending, p.clone(), c);
            }
        }
        let mut out: BTreeMap<Path, Coefficient> = BTreeMap::new();
        // shortest first; absorbed terms are strictly longer than their source
        while let Some((q, coeff)) = pending.pop_first() {
            let anchor = match orientation {
                Orientation::Head => q.head(&self.quiver),
                Orientation::Tail => q.tail(&self.quiver),
            };
            let mut coeff = coeff;
            for j in ideal.dropped_at(anchor) {
                coeff = self.model.drop_divisible(&coeff, *j);
                if coeff.is_zero() {
                    break;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            match ideal.absorption_at(anchor) {
                Some((i, sigma)) => {
                    let (kept, quot) = self.model.split_var(&coeff, *i);
                    self.add_term(&mut out, q.clone(), &kept);
                    if !quot.is_zero() {
                        for c in sigma {
                            let longer = match orientation {
                                Orientation::Head => compose(&self.quiver, c, &q),
                                Orientation::Tail => compose(&self.quiver, &q, c),
                            }
                            .expect("cycle incidence matches the anchor");
                            if longer.len() < self.len_cap && ideal.zset.is_admissible(&longer) {
                                self.add_term(&mut pending, longer, &quot);
                            }
                        }
                    }
                }
                None => {
                    self.add_term(&mut out, q.clone(), &coeff);
                }
            }
        }
        AlgebraElement { terms: out }
    }

    /// Membership in the ideal plus the cap tails: true iff the normal form
    /// vanishes.
    pub fn ideal_membership(&self, x: &AlgebraElement, ideal: &IdealPresentation) -> bool {
        self.reduce(x, ideal).is_zero()
    }

    /// Checks the one-sided transport identity: multiplying `s*e_v - sigma_v`
    /// by admissible paths on either side agrees modulo the monomial ideal.
    /// Returns the common normal form of the middle expression.
    pub fn one_sided_transport(
        &self,
        zset: &ZSet,
        pcs: &PrimitiveCycleSet,
        s_index: usize,
        v: VertexId,
        p: &Path,
        q: &Path,
    ) -> Result<AlgebraElement, AlgebraError> {
        if s_index == 0 || s_index > self.model.dimension() {
            return Err(AlgebraError::GeneratorIndex(s_index));
        }
        if p.tail(&self.quiver) != v || q.head(&self.quiver) != v {
            return Err(AlgebraError::TransportEndpoints);
        }
        if !zset.is_admissible(p) || !zset.is_admissible(q) {
            return Err(AlgebraError::TransportInadmissible);
        }
        let zonly = IdealPresentation::z_only(zset.clone());
        let s = self.model.s_power(s_index, 1);
        let pq = self.multiply(&self.path_element(p.clone()), &self.path_element(q.clone()));

        let pivot = |vertex: VertexId| -> AlgebraElement {
            self.sub(
                &self.with_coefficient(s.clone(), Path::trivial(vertex)),
                &self.sigma(vertex, pcs),
            )
        };

        let left = self.multiply(&pivot(p.head(&self.quiver)), &pq);
        let middle = self.multiply(
            &self.multiply(&self.path_element(p.clone()), &pivot(v)),
            &self.path_element(q.clone()),
        );
        let right = self.multiply(&pq, &pivot(q.tail(&self.quiver)));

        let left = self.reduce(&left, &zonly);
        let middle = self.reduce(&middle, &zonly);
        let right = self.reduce(&right, &zonly);
        debug_assert_eq!(left, middle);
        debug_assert_eq!(middle, right);
        if left != middle || middle != right {
            return Err(AlgebraError::TransportEndpoints);
        }
        Ok(middle)
    }

    /// True when every coefficient is a residue constant on an admissible
    /// path: the shape `reduce` guarantees for the full presentation.
    pub fn is_normal_form(&self, x: &AlgebraElement, ideal: &IdealPresentation) -> bool {
        x.terms.iter().all(|(p, c)| {
            ideal.zset.is_admissible(p)
                && p.len() < self.len_cap
                && self.model.is_residue_constant(c)
        })
    }

    pub fn render(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (p, c) in &x.terms {
            let coeff = self.model.render(c);
            let path = p.render(&self.quiver);
            if coeff == "1" {
                parts.push(path);
            } else if coeff.contains(" + ") {
                parts.push(format!("({coeff})*{path}"));
            } else {
                parts.push(format!("{coeff}*{path}"));
            }
        }
        parts.join(" + ")
    }

    pub fn to_json(&self, x: &AlgebraElement) -> serde_json::Value {
        let terms: Vec<_> = x
            .terms
            .iter()
            .map(|(p, c)| {
                json!({
                    "path": p.render(&self.quiver),
                    "coefficient": self.model.render(c),
                })
            })
            .collect();
        json!({
            "terms": terms,
            "caps": { "L": self.len_cap, "D": self.model.deg_cap() },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
enum Orientation {
    Head,
    Tail,
}
