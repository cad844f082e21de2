//! Peirce-decomposition reports: per-vertex-pair bases of the quotient and
//! the action of the maximal-ideal generators on them.

use serde_json::json;

use crate::algebra::{AlgebraContext, IdealPresentation};
use crate::enumerate::admissible_paths_by_length;
use crate::primitives::PrimitiveCycleSet;
use crate::quiver::{Path, VertexId};

/// How a generator moves one basis path to another: `s` times the source
/// basis element equals the target basis element in the quotient.
#[derive(Clone, Debug)]
pub struct SAction {
    pub s_index: usize,
    pub from_idx: usize,
    pub to_idx: usize,
}

/// The component between an ordered pair of vertices: admissible paths from
/// `from` to `to` below the length cap, plus the generator action.
#[derive(Clone, Debug)]
pub struct PeirceBlock {
    pub from: VertexId,
    pub to: VertexId,
    pub basis: Vec<Path>,
    pub s_action: Vec<SAction>,
}

/// A human-readable shape of a diagonal component spanned by the powers of a
/// single cycle.
#[derive(Clone, Debug)]
pub struct LocalRingNote {
    pub vertex: VertexId,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct PeirceReport {
    pub pairs: Vec<PeirceBlock>,
    pub local_rings: Vec<LocalRingNote>,
    pub caps: (usize, usize),
}

/// Tabulates the basis and generator action of every component. Presumes the
/// input has already been verified as a string algebra; the data is still
/// well defined otherwise, just less meaningful.
pub fn peirce_report(
    ctx: &AlgebraContext,
    ideal: &IdealPresentation,
    pcs: &PrimitiveCycleSet,
) -> PeirceReport {
    let quiver = &ctx.quiver;
    let all: Vec<Path> =
        admissible_paths_by_length(quiver, ideal.zset(), ctx.len_cap.saturating_sub(1))
            .into_iter()
            .flatten()
            .collect();
    let blocks: std::collections::BTreeMap<VertexId, usize> = ideal
        .v_generators()
        .iter()
        .map(|g| (g.vertex, g.s_index))
        .collect();

    let mut pairs = Vec::new();
    for from in quiver.vertices() {
        for to in quiver.vertices() {
            let basis: Vec<Path> = all
                .iter()
                .filter(|p| p.tail(quiver) == from && p.head(quiver) == to)
                .cloned()
                .collect();
            let mut s_action = Vec::new();
            for (from_idx, q) in basis.iter().enumerate() {
                // s_i * q = sigma_to * q collapses to at most one basis path
                let Some(i) = blocks.get(&to) else { continue };
                for c in pcs.at_vertex(to) {
                    if q.len() + c.len() >= ctx.len_cap {
                        continue;
                    }
                    let longer = crate::quiver::compose(quiver, c.path(), q)
                        .expect("cycle sits at the head");
                    if ideal.zset().is_admissible(&longer) {
                        if let Some(to_idx) = basis.iter().position(|b| b == &longer) {
                            s_action.push(SAction {
                                s_index: *i,
                                from_idx,
                                to_idx,
                            });
                        }
                    }
                }
            }
            pairs.push(PeirceBlock {
                from,
                to,
                basis,
                s_action,
            });
        }
    }

    let mut local_rings = Vec::new();
    for v in quiver.vertices() {
        let block = pairs
            .iter()
            .find(|b| b.from == v && b.to == v)
            .expect("every diagonal pair is tabulated");
        let non_trivial: Vec<&Path> = block.basis.iter().filter(|p| !p.is_trivial()).collect();
        let Some(shortest) = non_trivial.first() else {
            local_rings.push(LocalRingNote {
                vertex: v,
                description: "k (no cycles)".to_string(),
            });
            continue;
        };
        let c = shortest.arrows();
        let all_powers = non_trivial.iter().all(|p| {
            p.len() % c.len() == 0
                && p.arrows().chunks(c.len()).all(|chunk| chunk == c)
        });
        if !all_powers {
            local_rings.push(LocalRingNote {
                vertex: v,
                description: "multiple cycle families".to_string(),
            });
            continue;
        }
        let name = shortest.render(quiver);
        let top_power = non_trivial.len();
        match blocks.get(&v) {
            Some(i) if !block.s_action.is_empty() => {
                local_rings.push(LocalRingNote {
                    vertex: v,
                    description: format!(
                        "k[[{name}]] with {} acting as multiplication by {name} (truncated at the cap)",
                        ctx.model.var_names()[*i - 1]
                    ),
                });
            }
            _ => {
                local_rings.push(LocalRingNote {
                    vertex: v,
                    description: format!(
                        "k[{name}]/({name}^{}) with every generator acting as 0",
                        top_power + 1
                    ),
                });
            }
        }
    }

    PeirceReport {
        pairs,
        local_rings,
        caps: (ctx.len_cap, ctx.model.deg_cap()),
    }
}

impl PeirceReport {
    pub fn to_json(&self, ctx: &AlgebraContext) -> serde_json::Value {
        let quiver = &ctx.quiver;
        let pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|b| {
                let basis: Vec<String> = b.basis.iter().map(|p| p.render(quiver)).collect();
                let actions: Vec<_> = b
                    .s_action
                    .iter()
                    .map(|a| {
                        json!({
                            "s": ctx.model.var_names()[a.s_index - 1],
                            "from_basis_idx": a.from_idx,
                            "to_basis_idx": a.to_idx,
                        })
                    })
                    .collect();
                json!({
                    "from": quiver.vertex_name(b.from),
                    "to": quiver.vertex_name(b.to),
                    "basis": basis,
                    "s_action": actions,
                })
            })
            .collect();
        let rings: Vec<_> = self
            .local_rings
            .iter()
            .map(|n| {
                json!({
                    "vertex": quiver.vertex_name(n.vertex),
                    "description": n.description,
                })
            })
            .collect();
        json!({
            "pairs": pairs,
            "local_rings": rings,
            "caps": { "L": self.caps.0, "D": self.caps.1 },
        })
    }

    pub fn render(&self, ctx: &AlgebraContext) -> String {
        let quiver = &ctx.quiver;
        let mut out = Vec::new();
        for b in &self.pairs {
            if b.basis.is_empty() {
                continue;
            }
            let basis: Vec<String> = b.basis.iter().map(|p| p.render(quiver)).collect();
            out.push(format!(
                "e({}) A e({}): {}",
                quiver.vertex_name(b.to),
                quiver.vertex_name(b.from),
                basis.join(", ")
            ));
            for a in &b.s_action {
                out.push(format!(
                    "  {} . {} = {}",
                    ctx.model.var_names()[a.s_index - 1],
                    basis[a.from_idx],
                    basis[a.to_idx]
                ));
            }
        }
        for n in &self.local_rings {
            out.push(format!(
                "local ring at {}: {}",
                quiver.vertex_name(n.vertex),
                n.description
            ));
        }
        out.push(format!("caps: L={} D={}", self.caps.0, self.caps.1));
        out.join("\n")
    }
}
