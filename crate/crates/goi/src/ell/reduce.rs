//! One step of cut elimination on checked proofs.
//!
//! Rewrites: a cut against an axiom becomes the other premise with the
//! cut location renamed; a cut between `⊗` and `⅋` introducing the cut
//! formula becomes two cuts on the components; a polarized cut between
//! `1_d` and `1_g` or `weak` on `1` becomes the premise of the latter.

use super::formula::{Formula, Loc};
use super::proof::{Derivation, Proof, Rule};

fn rename(p: &Proof, name: u32, from: i64, to: i64) -> Proof {
    p.map_locs(&mut |n, l| if n == name && l == Loc::At(from) { Loc::At(to) } else { l })
}

fn ax_locs(d: &Derivation) -> Option<(u32, i64, i64)> {
    match &d.rule {
        Rule::Ax { name, locs: [Loc::At(a), Loc::At(b)] } => Some((*name, *a, *b)),
        _ => None,
    }
}

fn cut(left: usize, right: usize, a: Proof, b: Proof) -> Proof {
    Proof::new(Rule::Cut { left, right }, vec![a, b])
}

fn step(d: &Derivation) -> Option<Proof> {
    let (p1, p2) = match d.premises.as_slice() {
        [a, b] => (a, b),
        _ => return None,
    };
    let last = |x: &Derivation| x.seq.gamma.len().checked_sub(1);
    match &d.rule {
        Rule::Cut { left, right } => {
            if let Some((n, a, b)) = ax_locs(p1) {
                // ⊢ X(a)^⊥, X(b) against the dual of the chosen one
                return Some(if *left == 1 { rename(&p2.proof(), n, b, a) } else { rename(&p2.proof(), n, a, b) });
            }
            if let Some((n, a, b)) = ax_locs(p2) {
                return Some(if *right == 0 { rename(&p1.proof(), n, a, b) } else { rename(&p1.proof(), n, b, a) });
            }
            match (&p1.rule, &p2.rule) {
                (Rule::Tensor { left: k1, right: k2 }, Rule::Par { left: a, right: b }) if Some(*left) == last(p1) && Some(*right) == last(p2) => {
                    let (q1, q2) = (p1.premises[0].proof(), p1.premises[1].proof());
                    let r = p2.premises[0].proof();
                    let inner = cut(*k2, *b, q2, r);
                    let base = p1.premises[1].seq.gamma.len() - 1;
                    let pos = base + if a < b { *a } else { a - 1 };
                    Some(cut(*k1, pos, q1, inner))
                }
                (Rule::Par { left: a, right: b }, Rule::Tensor { left: k1, right: k2 }) if Some(*left) == last(p1) && Some(*right) == last(p2) => {
                    let r = p1.premises[0].proof();
                    let (q1, q2) = (p2.premises[0].proof(), p2.premises[1].proof());
                    let inner = cut(*a, *k1, r, q1);
                    let pos = if b < a { *b } else { b - 1 };
                    Some(cut(pos, *k2, inner, q2))
                }
                _ => None,
            }
        }
        Rule::CutPol { k } => {
            let principal = p2.seq.delta.len().checked_sub(1) == Some(*k);
            match (&p1.rule, &p2.rule) {
                (Rule::OneR, Rule::OneL) if principal => Some(p2.premises[0].proof()),
                (Rule::OneR, Rule::Weak { f: Formula::One }) if principal => Some(p2.premises[0].proof()),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Rewrites the first redex in pre-order, if any.
pub fn reduce_once(d: &Derivation) -> Option<Proof> {
    if let Some(p) = step(d) {
        return Some(p);
    }
    for (i, sub) in d.premises.iter().enumerate() {
        if let Some(q) = reduce_once(sub) {
            let mut premises: Vec<Proof> = d.premises.iter().map(|x| x.proof()).collect();
            premises[i] = q;
            return Some(Proof::new(d.rule.clone(), premises));
        }
    }
    None
}
