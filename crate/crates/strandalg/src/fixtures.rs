//! In-memory copies of the fixture quivers used across unit tests.
//! The `.qz` files under `fixtures/` are the on-disk versions of the same
//! data; the CLI tests parse those.

use crate::quiver::{ArrowId, Path, Quiver};
use crate::relations::ZSet;

pub(crate) fn word(q: &Quiver, names: &[&str]) -> Path {
    let arrows: Vec<ArrowId> = names
        .iter()
        .rev()
        .map(|n| q.arrow_by_name(n).unwrap_or_else(|| panic!("arrow {n}")))
        .collect();
    Path::from_arrows(q, arrows).unwrap()
}

fn relation_set(q: &Quiver, words: &[&[&str]]) -> ZSet {
    ZSet::new(q, words.iter().map(|w| word(q, w)).collect()).unwrap()
}

/// Two-block example: loop a at 1, x: 1->2, y: 2->1, w: 2->3, z: 3->2,
/// f: 4->3, loop b at 4, g: 5->4, loop c at 5;
/// Z = {a^2, xy, wx, yz, zf, fb, bg, gc, c^l}.
pub(crate) fn intro_pair(l: usize) -> (Quiver, ZSet) {
    let mut q = Quiver::new();
    let v: Vec<_> = (1..=5).map(|i| q.add_vertex(i.to_string()).unwrap()).collect();
    q.add_arrow("a", v[0], v[0]).unwrap();
    q.add_arrow("x", v[0], v[1]).unwrap();
    q.add_arrow("y", v[1], v[0]).unwrap();
    q.add_arrow("w", v[1], v[2]).unwrap();
    q.add_arrow("z", v[2], v[1]).unwrap();
    q.add_arrow("f", v[3], v[2]).unwrap();
    q.add_arrow("b", v[3], v[3]).unwrap();
    q.add_arrow("g", v[4], v[3]).unwrap();
    q.add_arrow("c", v[4], v[4]).unwrap();

    let c = q.arrow_by_name("c").unwrap();
    let mut relations = vec![
        word(&q, &["a", "a"]),
        word(&q, &["x", "y"]),
        word(&q, &["w", "x"]),
        word(&q, &["y", "z"]),
        word(&q, &["z", "f"]),
        word(&q, &["f", "b"]),
        word(&q, &["b", "g"]),
        word(&q, &["g", "c"]),
    ];
    relations.push(Path::Word(vec![c; l]));
    let z = ZSet::new(&q, relations).unwrap();
    (q, z)
}

/// Six-vertex running example: loop x at 1, b1: 1->2, a5: 2->1, loop y at 3,
/// a4: 3->2, a3: 4->3, b2: 4->5, a2: 5->4, b3: 5->6, loop z at 6, a1: 6->5;
/// Z = {a(i+1)ai} ∪ {b1x, xa5, a4y, y^4, ya3, b3b2, a1b3, z^2}.
pub(crate) fn running_pair() -> (Quiver, ZSet) {
    let mut q = Quiver::new();
    let v: Vec<_> = (1..=6).map(|i| q.add_vertex(i.to_string()).unwrap()).collect();
    q.add_arrow("x", v[0], v[0]).unwrap();
    q.add_arrow("b1", v[0], v[1]).unwrap();
    q.add_arrow("a5", v[1], v[0]).unwrap();
    q.add_arrow("y", v[2], v[2]).unwrap();
    q.add_arrow("a4", v[2], v[1]).unwrap();
    q.add_arrow("a3", v[3], v[2]).unwrap();
    q.add_arrow("b2", v[3], v[4]).unwrap();
    q.add_arrow("a2", v[4], v[3]).unwrap();
    q.add_arrow("b3", v[4], v[5]).unwrap();
    q.add_arrow("z", v[5], v[5]).unwrap();
    q.add_arrow("a1", v[5], v[4]).unwrap();

    let z = relation_set(
        &q,
        &[
            &["a2", "a1"],
            &["a3", "a2"],
            &["a4", "a3"],
            &["a5", "a4"],
            &["b1", "x"],
            &["x", "a5"],
            &["a4", "y"],
            &["y", "y", "y", "y"],
            &["y", "a3"],
            &["b3", "b2"],
            &["a1", "b3"],
            &["z", "z"],
        ],
    );
    (q, z)
}

/// Five-vertex one-block example: loop a at 1, b: 1->2, c: 2->1, d: 2->3,
/// loop e at 3, f: 3->4, loop g at 4, h: 4->5, loop i at 5, j: 5->2;
/// Z = {ac, ba, db, ed, fe, gf, hg, ih, ji, cj}. The relation cj is needed
/// for the pair to be special: dj stays admissible because the 4-cycle
/// through 2,3,4,5 is primitive, so c cannot also continue j.
pub(crate) fn mathieu_pair() -> (Quiver, ZSet) {
    let mut q = Quiver::new();
    let v: Vec<_> = (1..=5).map(|i| q.add_vertex(i.to_string()).unwrap()).collect();
    q.add_arrow("a", v[0], v[0]).unwrap();
    q.add_arrow("b", v[0], v[1]).unwrap();
    q.add_arrow("c", v[1], v[0]).unwrap();
    q.add_arrow("d", v[1], v[2]).unwrap();
    q.add_arrow("e", v[2], v[2]).unwrap();
    q.add_arrow("f", v[2], v[3]).unwrap();
    q.add_arrow("g", v[3], v[3]).unwrap();
    q.add_arrow("h", v[3], v[4]).unwrap();
    q.add_arrow("i", v[4], v[4]).unwrap();
    q.add_arrow("j", v[4], v[1]).unwrap();

    let z = relation_set(
        &q,
        &[
            &["a", "c"],
            &["b", "a"],
            &["d", "b"],
            &["e", "d"],
            &["f", "e"],
            &["g", "f"],
            &["h", "g"],
            &["i", "h"],
            &["j", "i"],
            &["c", "j"],
        ],
    );
    (q, z)
}

/// Single-block row examples over a one-dimensional ring, numbered 1..=5.
pub(crate) fn dvr_pair(row: usize) -> (Quiver, ZSet) {
    match row {
        1 => {
            // loop a at 1, b: 1->2, c: 2->1; Z = {bc, a^2}
            let mut q = Quiver::new();
            let v1 = q.add_vertex("1").unwrap();
            let v2 = q.add_vertex("2").unwrap();
            q.add_arrow("a", v1, v1).unwrap();
            q.add_arrow("b", v1, v2).unwrap();
            q.add_arrow("c", v2, v1).unwrap();
            let z = relation_set(&q, &[&["b", "c"], &["a", "a"]]);
            (q, z)
        }
        2 => {
            // loops a, b at 1; Z = {ab, ba}
            let mut q = Quiver::new();
            let v1 = q.add_vertex("1").unwrap();
            q.add_arrow("a", v1, v1).unwrap();
            q.add_arrow("b", v1, v1).unwrap();
            let z = relation_set(&q, &[&["a", "b"], &["b", "a"]]);
            (q, z)
        }
        3 => {
            // loops a, b at 1; Z = {a^2, b^2}
            let mut q = Quiver::new();
            let v1 = q.add_vertex("1").unwrap();
            q.add_arrow("a", v1, v1).unwrap();
            q.add_arrow("b", v1, v1).unwrap();
            let z = relation_set(&q, &[&["a", "a"], &["b", "b"]]);
            (q, z)
        }
        4 => {
            // a, b: 1->2, c, d: 2->1; Z = {ad, da, bc, cb}
            let mut q = Quiver::new();
            let v1 = q.add_vertex("1").unwrap();
            let v2 = q.add_vertex("2").unwrap();
            q.add_arrow("a", v1, v2).unwrap();
            q.add_arrow("b", v1, v2).unwrap();
            q.add_arrow("c", v2, v1).unwrap();
            q.add_arrow("d", v2, v1).unwrap();
            let z = relation_set(&q, &[&["a", "d"], &["d", "a"], &["b", "c"], &["c", "b"]]);
            (q, z)
        }
        5 => {
            // loop a at 1, b: 1->2, c: 2->1, loop d at 2; Z = {ac, ba, db, cd}
            let mut q = Quiver::new();
            let v1 = q.add_vertex("1").unwrap();
            let v2 = q.add_vertex("2").unwrap();
            q.add_arrow("a", v1, v1).unwrap();
            q.add_arrow("b", v1, v2).unwrap();
            q.add_arrow("c", v2, v1).unwrap();
            q.add_arrow("d", v2, v2).unwrap();
            let z = relation_set(&q, &[&["a", "c"], &["b", "a"], &["d", "b"], &["c", "d"]]);
            (q, z)
        }
        _ => panic!("rows are 1..=5"),
    }
}
