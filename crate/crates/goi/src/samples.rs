//! Small fixed graphs used by the tests, the acceptance suite and the CLI.

use std::collections::BTreeMap;

use crate::scalar::rat;
use crate::thick::{atom, Dial, Sliced, ThickGraph};

fn s(x: impl ToString) -> String {
    x.to_string()
}

fn d(x: &[&str]) -> Dial {
    x.iter().map(|a| a.to_string()).collect()
}

/// Both directions of an edge.
fn pair(g: ThickGraph, id: &str, a: (&str, Dial), b: (&str, Dial)) -> ThickGraph {
    let one = rat(1, 1);
    g.edge(&format!("{id}+"), a.clone(), b.clone(), one.clone()).edge(&format!("{id}-"), b, a, one)
}

fn lp(g: ThickGraph, id: &str, v: (&str, Dial)) -> ThickGraph {
    g.edge(id, v.clone(), v, rat(1, 1))
}

fn two() -> Vec<Dial> {
    vec![atom("1"), atom("2")]
}

/// Carrier `{1,2}`, dialect `{1,2}`.
pub fn thick_g() -> ThickGraph {
    let g = ThickGraph::new([s(1), s(2)], two());
    let g = pair(g, "a", ("1", atom("1")), ("1", atom("2")));
    let g = pair(g, "b", ("1", atom("2")), ("2", atom("2")));
    pair(g, "c", ("1", atom("1")), ("2", atom("1")))
}

/// Carrier `{2,3}`, dialect `{1,2}`.
pub fn thick_h() -> ThickGraph {
    let h = ThickGraph::new([s(2), s(3)], two());
    let h = pair(h, "x", ("2", atom("2")), ("3", atom("1")));
    let h = lp(h, "y", ("2", atom("1")));
    lp(h, "z", ("3", atom("2")))
}

/// The execution of [`thick_g`] and [`thick_h`], dialect pairs `(d_G, d_H)`.
pub fn thick_gh() -> ThickGraph {
    let dial = vec![d(&["1", "1"]), d(&["2", "1"]), d(&["1", "2"]), d(&["2", "2"])];
    let g = ThickGraph::new([s(1), s(3)], dial);
    let g = pair(g, "p", ("1", d(&["1", "1"])), ("1", d(&["2", "1"])));
    let g = lp(g, "q", ("1", d(&["2", "1"])));
    let g = lp(g, "r", ("1", d(&["1", "1"])));
    let g = pair(g, "s", ("1", d(&["1", "2"])), ("1", d(&["2", "2"])));
    let g = pair(g, "t", ("1", d(&["2", "2"])), ("3", d(&["2", "1"])));
    let g = pair(g, "u", ("1", d(&["1", "2"])), ("3", d(&["1", "1"])));
    let g = lp(g, "v", ("3", d(&["1", "2"])));
    lp(g, "w", ("3", d(&["2", "2"])))
}

pub fn bijection(pairs: &[(i64, i64)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (s(a), s(b))).collect()
}

/// `φ = x + 2` and `ψ = x + 4` on `{1,2}`.
pub fn ctr_maps() -> (BTreeMap<String, String>, BTreeMap<String, String>) {
    (bijection(&[(1, 3), (2, 4)]), bijection(&[(1, 5), (2, 6)]))
}

/// `1 ↔ 2` with one dialect element.
pub fn ctr_a() -> ThickGraph {
    pair(ThickGraph::new([s(1), s(2)], vec![atom("1")]), "a", ("1", atom("1")), ("2", atom("1")))
}

/// `1₁ ↔ 2₁` with loops at `1₂` and `2₂`.
pub fn ctr_b() -> ThickGraph {
    let b = pair(ThickGraph::new([s(1), s(2)], two()), "b", ("1", atom("1")), ("2", atom("1")));
    let b = lp(b, "l1", ("1", atom("2")));
    lp(b, "l2", ("2", atom("2")))
}

/// Expected execution of the contraction with [`ctr_a`]; dialect pairs
/// `(d_Ctr, d_A)`.
pub fn ctr_a_result() -> ThickGraph {
    let g = ThickGraph::new([s(3), s(4), s(5), s(6)], vec![d(&["1", "1"]), d(&["2", "1"])]);
    let g = pair(g, "p", ("3", d(&["1", "1"])), ("4", d(&["1", "1"])));
    pair(g, "q", ("5", d(&["1", "1"])), ("6", d(&["1", "1"])))
}

/// Expected execution of the contraction with [`ctr_b`].
pub fn ctr_b_result() -> ThickGraph {
    let dial = vec![d(&["1", "1"]), d(&["2", "1"]), d(&["1", "2"]), d(&["2", "2"])];
    let mut g = ThickGraph::new([s(3), s(4), s(5), s(6)], dial);
    g = pair(g, "p", ("3", d(&["1", "1"])), ("4", d(&["1", "1"])));
    g = pair(g, "q", ("5", d(&["1", "1"])), ("6", d(&["1", "1"])));
    for v in ["3", "4", "5", "6"] {
        g = lp(g, &format!("l{v}"), (v, d(&["1", "2"])));
    }
    g
}

/// Expected `φ(B) ⊗ ψ(B)`, dialect pairs `(d_φ, d_ψ)`.
pub fn ctr_b_target() -> ThickGraph {
    let dial = vec![d(&["1", "1"]), d(&["2", "1"]), d(&["1", "2"]), d(&["2", "2"])];
    let mut g = ThickGraph::new([s(3), s(4), s(5), s(6)], dial);
    for (a, b) in [("1", "1"), ("1", "2")] {
        g = pair(g, &format!("p{a}{b}"), ("3", d(&[a, b])), ("4", d(&[a, b])));
    }
    for (a, b) in [("1", "1"), ("2", "1")] {
        g = pair(g, &format!("q{a}{b}"), ("5", d(&[a, b])), ("6", d(&[a, b])));
    }
    for (a, b) in [("2", "1"), ("2", "2")] {
        for v in ["3", "4"] {
            g = lp(g, &format!("l{v}{a}{b}"), (v, d(&[a, b])));
        }
    }
    for (a, b) in [("1", "2"), ("2", "2")] {
        for v in ["5", "6"] {
            g = lp(g, &format!("l{v}{a}{b}"), (v, d(&[a, b])));
        }
    }
    g
}

/// `3 ↔ 5` in a single slice: pairs against the contraction of a two-slice
/// graph differently than against the target.
pub fn ctr_witness() -> ThickGraph {
    pair(ThickGraph::new([s(3), s(4), s(5), s(6)], vec![atom("1")]), "h", ("3", atom("1")), ("5", atom("1")))
}

fn fg(edges: [(&str, &str); 2]) -> ThickGraph {
    let mut g = ThickGraph::new([s(1), s(2)], vec![atom("1")]);
    for ((a, b), id) in edges.iter().zip(["f", "g"]) {
        g = g.edge(id, (a, atom("1")), (b, atom("1")), rat(1, 1));
    }
    g
}

/// `f: 1 → 2`, `g: 2 → 2`.
pub fn f_a() -> ThickGraph {
    fg([("1", "2"), ("2", "2")])
}

/// `f: 1 → 2`, `g: 1 → 1`.
pub fn f_b() -> ThickGraph {
    fg([("1", "2"), ("1", "1")])
}

/// `F_a` and `F_b` side by side in a two-element dialect.
pub fn f_c() -> ThickGraph {
    let mut g = ThickGraph::new([s(1), s(2)], vec![atom("a"), atom("b")]);
    for (tag, src) in [("a", f_a()), ("b", f_b())] {
        for e in &src.graph.edges {
            g = g.edge(&format!("{}{tag}", e.id), (&e.src.0, atom(tag)), (&e.dst.0, atom(tag)), e.weight.clone());
        }
    }
    g
}

/// `G₁ = F_c` and `G₂ = ½F_a + ½F_b`.
pub fn universal_pair() -> (Sliced, Sliced) {
    let half = rat(1, 2);
    (Sliced::single(f_c()), Sliced { slices: vec![(half.clone(), f_a()), (half, f_b())] })
}
