//! Enumeration of Z-admissible paths.
//!
//! Over a special pair each arrow has at most one admissible extension on
//! either side, so these walks stay linear in practice even though nothing
//! here assumes specialness.

use crate::quiver::{Path, Quiver};
use crate::relations::ZSet;

/// All Z-admissible paths of length `0..=max_len`, grouped by length.
/// Index 0 holds the trivial paths.
pub fn admissible_paths_by_length(quiver: &Quiver, z: &ZSet, max_len: usize) -> Vec<Vec<Path>> {
    let mut by_len: Vec<Vec<Path>> = Vec::with_capacity(max_len + 1);
    by_len.push(quiver.vertices().map(Path::trivial).collect());
    if max_len == 0 {
        return by_len;
    }
    let arrows: Vec<Path> = quiver
        .arrows()
        .map(Path::arrow)
        .filter(|p| z.is_admissible(p))
        .collect();
    by_len.push(arrows);
    for len in 2..=max_len {
        let mut level = Vec::new();
        for p in &by_len[len - 1] {
            let head = p.head(quiver);
            for a in quiver.arrows_from(head) {
                if z.left_extension_admissible(*a, p.arrows()) {
                    let mut w = p.arrows().to_vec();
                    w.push(*a);
                    level.push(Path::Word(w));
                }
            }
        }
        if level.is_empty() {
            break;
        }
        by_len.push(level);
    }
    by_len
}

/// All Z-admissible paths of length at most `max_len`, shortest first.
pub fn admissible_paths(quiver: &Quiver, z: &ZSet, max_len: usize) -> Vec<Path> {
    admissible_paths_by_length(quiver, z, max_len)
        .into_iter()
        .flatten()
        .collect()
}

/// Count of Z-admissible paths of length strictly less than `d`.
pub fn admissible_path_count_below(quiver: &Quiver, z: &ZSet, d: usize) -> usize {
    if d == 0 {
        return 0;
    }
    admissible_paths_by_length(quiver, z, d - 1)
        .iter()
        .map(Vec::len)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::intro_pair;

    #[test]
    fn counts_start_with_vertices_and_arrows() {
        let (q, z) = intro_pair(3);
        let by_len = admissible_paths_by_length(&q, &z, 2);
        assert_eq!(by_len[0].len(), 5);
        assert_eq!(by_len[1].len(), 9); // all arrows admissible: min relation length is 2
        assert_eq!(admissible_path_count_below(&q, &z, 1), 5);
        assert_eq!(admissible_path_count_below(&q, &z, 2), 14);
    }

    #[test]
    fn every_enumerated_path_is_admissible() {
        let (q, z) = intro_pair(3);
        for p in admissible_paths(&q, &z, 10) {
            assert!(z.is_admissible_naive(&q, &p), "{}", p.render(&q));
        }
    }
}
