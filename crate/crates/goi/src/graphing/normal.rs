//! Almost-everywhere normal form.
//!
//! For every source unit interval and dialect slice, the edges are laid out
//! as a decision tree over digit positions. A leaf holds the multiset of
//! actions defined on its whole region. Two siblings are merged whenever
//! their actions are the two halves of common actions, so any refinement of
//! a graphing yields the same tree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;

use super::{GEdge, Graphing};
use crate::dyadic::{BitMap, Branch, Cell, CellSet, Pos, PosMap, Space, Src};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
struct Act<W> {
    weight: W,
    dst_dial: u32,
    base: i64,
    out: Vec<PosMap>,
}

fn cmp_act<W: Scalar>(a: &Act<W>, b: &Act<W>) -> Ordering {
    a.weight
        .total_cmp(&b.weight)
        .then(a.dst_dial.cmp(&b.dst_dial))
        .then(a.base.cmp(&b.base))
        .then_with(|| a.out.cmp(&b.out))
}

#[derive(Clone, Debug, PartialEq)]
enum Tree<W> {
    Leaf(Vec<Act<W>>),
    Split(Pos, Box<Tree<W>>, Box<Tree<W>>),
}

/// Canonical representative of the a.e. class of a graphing.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<W> {
    pub carrier: CellSet,
    pub dialect: u32,
    roots: BTreeMap<(i64, u32), Tree<W>>,
}

fn sorted<W: Scalar>(mut v: Vec<Act<W>>) -> Vec<Act<W>> {
    v.sort_by(cmp_act);
    v
}

fn subst_act<W: Scalar>(a: &Act<W>, v: Pos, bit: bool) -> Result<Act<W>> {
    let fixed = |p: Pos| (p == v).then_some(bit);
    let out = a.out.iter().map(|pm| pm.substitute(&fixed, &[v])).collect::<Result<_>>()?;
    Ok(Act { out, ..a.clone() })
}

fn merge_pm(p0: &PosMap, p1: &PosMap, v: Pos) -> Option<PosMap> {
    let t = p0.threshold().max(p1.threshold());
    let m = p0.period().lcm(&p1.period());
    let pick = |q: u32| -> Option<Src> {
        let (s0, s1) = (p0.eval(q), p1.eval(q));
        match (s0, s1) {
            _ if s0 == s1 => Some(s0),
            (Src::Const(false), Src::Const(true)) => Some(Src::In(v.0, v.1)),
            _ => None,
        }
    };
    for q in 1..=t + 2 * m {
        pick(q)?;
    }
    PosMap::from_fn(t, m, |q| pick(q).unwrap()).ok()
}

fn merge_act<W: Scalar>(a: &Act<W>, b: &Act<W>, v: Pos) -> Option<Act<W>> {
    if a.weight != b.weight || a.dst_dial != b.dst_dial || a.base != b.base {
        return None;
    }
    let out = a.out.iter().zip(&b.out).map(|(x, y)| merge_pm(x, y, v)).collect::<Option<Vec<_>>>()?;
    Some(Act { out, ..a.clone() })
}

fn merge_leaves<W: Scalar>(a: &[Act<W>], b: &[Act<W>], v: Pos) -> Option<Vec<Act<W>>> {
    if a.len() != b.len() {
        return None;
    }
    fn go<W: Scalar>(a: &[Act<W>], b: &[Act<W>], used: &mut Vec<bool>, v: Pos, acc: &mut Vec<Act<W>>) -> bool {
        let Some(x) = a.first() else {
            return true;
        };
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            if let Some(m) = merge_act(x, &b[j], v) {
                used[j] = true;
                acc.push(m);
                if go(&a[1..], b, used, v, acc) {
                    return true;
                }
                acc.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(a, b, &mut vec![false; b.len()], v, &mut acc).then(|| sorted(acc))
}

fn top<W>(t: &Tree<W>) -> Option<Pos> {
    match t {
        Tree::Split(p, ..) => Some(*p),
        Tree::Leaf(_) => None,
    }
}

fn restrict<W: Scalar>(t: &Tree<W>, w: Pos, bit: bool) -> Result<Tree<W>> {
    match t {
        Tree::Leaf(acts) => Ok(Tree::Leaf(sorted(acts.iter().map(|a| subst_act(a, w, bit)).collect::<Result<_>>()?))),
        Tree::Split(u, a, b) if *u == w => Ok(if bit { (**b).clone() } else { (**a).clone() }),
        Tree::Split(u, a, b) => mk(*u, restrict(a, w, bit)?, restrict(b, w, bit)?),
    }
}

fn unify<W: Scalar>(t0: &Tree<W>, t1: &Tree<W>, v: Pos) -> Result<Option<Tree<W>>> {
    if let (Tree::Leaf(a), Tree::Leaf(b)) = (t0, t1) {
        return Ok(merge_leaves(a, b, v).map(Tree::Leaf));
    }
    let w = [top(t0), top(t1)].into_iter().flatten().min().unwrap();
    let (a0, b0) = (restrict(t0, w, false)?, restrict(t0, w, true)?);
    let (a1, b1) = (restrict(t1, w, false)?, restrict(t1, w, true)?);
    let Some(r0) = unify(&a0, &a1, v)? else {
        return Ok(None);
    };
    let Some(r1) = unify(&b0, &b1, v)? else {
        return Ok(None);
    };
    mk(w, r0, r1).map(Some)
}

fn mk<W: Scalar>(v: Pos, t0: Tree<W>, t1: Tree<W>) -> Result<Tree<W>> {
    Ok(match unify(&t0, &t1, v)? {
        Some(t) => t,
        None => Tree::Split(v, Box::new(t0), Box::new(t1)),
    })
}

fn build<W: Scalar>(region: &Cell, acts: &[(Cell, Act<W>)]) -> Result<Tree<W>> {
    let live: Vec<&(Cell, Act<W>)> = acts.iter().filter(|(g, _)| g.intersect(region).is_some()).collect();
    if live.iter().all(|(g, _)| g.contains(region)) {
        let mut leaf = Vec::new();
        for (_, a) in live {
            let b = Branch::new(region.clone(), a.base, a.out.clone())?;
            leaf.push(Act { out: b.out, ..a.clone() });
        }
        return Ok(Tree::Leaf(sorted(leaf)));
    }
    let v = live
        .iter()
        .flat_map(|(g, _)| g.bits.keys().filter(|k| !region.bits.contains_key(k)))
        .min()
        .copied()
        .unwrap();
    let t0 = build(&region.clone().with(v.0, v.1, false), acts)?;
    let t1 = build(&region.clone().with(v.0, v.1, true), acts)?;
    mk(v, t0, t1)
}

/// Branches grouped by source interval and dialect.
type Groups<W> = BTreeMap<(i64, u32), Vec<(Cell, Act<W>)>>;

impl<W: Scalar> NormalForm<W> {
    pub fn of(g: &Graphing<W>) -> Result<NormalForm<W>> {
        let mut groups: Groups<W> = BTreeMap::new();
        for e in &g.edges {
            for b in &e.map.branches {
                let act = Act { weight: e.weight.clone(), dst_dial: e.dst_dial, base: b.base, out: b.out.clone() };
                groups.entry((b.guard.base, e.src_dial)).or_default().push((b.guard.clone(), act));
            }
        }
        let mut roots = BTreeMap::new();
        for (key, acts) in groups {
            let t = build(&Cell::line(key.0), &acts)?;
            if t != Tree::Leaf(Vec::new()) {
                roots.insert(key, t);
            }
        }
        Ok(NormalForm { carrier: g.carrier.clone(), dialect: g.dialect, roots })
    }

    pub fn to_graphing(&self) -> Result<Graphing<W>> {
        fn walk<W: Scalar>(t: &Tree<W>, region: Cell, dial: u32, out: &mut Vec<GEdge<W>>) -> Result<()> {
            match t {
                Tree::Leaf(acts) => {
                    for a in acts {
                        let br = Branch::new(region.clone(), a.base, a.out.clone())?;
                        out.push(GEdge {
                            id: format!("n{}", out.len()),
                            weight: a.weight.clone(),
                            src_dial: dial,
                            dst_dial: a.dst_dial,
                            map: BitMap::new(Space::Line, Space::Line, vec![br])?,
                        });
                    }
                    Ok(())
                }
                Tree::Split(v, a, b) => {
                    walk(a, region.clone().with(v.0, v.1, false), dial, out)?;
                    walk(b, region.with(v.0, v.1, true), dial, out)
                }
            }
        }
        let mut edges = Vec::new();
        for (&(base, dial), t) in &self.roots {
            walk(t, Cell::line(base), dial, &mut edges)?;
        }
        Ok(Graphing { carrier: self.carrier.clone(), dialect: self.dialect, edges })
    }
}

/// Canonical representative: a.e.-equal graphings normalize to equal values.
pub fn normalize_ae<W: Scalar>(g: &Graphing<W>) -> Result<Graphing<W>> {
    NormalForm::of(g)?.to_graphing()
}
