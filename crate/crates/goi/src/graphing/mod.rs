//! Thick graphings on the real line: weighted families of partial dyadic
//! maps between dialect slices of a carrier.

mod embed;
mod normal;

use std::collections::BTreeMap;

pub use embed::{embed_dialect, embed_dialect_with, omega_carrier, omega_conjugate, DialectCode};
pub use normal::{normalize_ae, NormalForm};

use crate::dyadic::{BitMap, Branch, CellSet, Space};
use crate::error::{Error, Result};
use crate::graph::{is_primitive, least_rotation, Side, Step};
use crate::scalar::{Ext, Quantifier, Rational, Scalar};
use crate::thick::Lift;

/// Default bound on path-extension rounds.
pub const DEFAULT_FUEL: usize = 10_000;

/// An edge from dialect slice `src_dial` to slice `dst_dial`, realized by
/// `map` on the line. Its source is the domain of `map`.
#[derive(Clone, Debug, PartialEq)]
pub struct GEdge<W = Rational> {
    pub id: String,
    pub weight: W,
    pub src_dial: u32,
    pub dst_dial: u32,
    pub map: BitMap,
}

impl<W: Scalar> GEdge<W> {
    pub fn source(&self) -> CellSet {
        self.map.domain()
    }

    pub fn target(&self) -> CellSet {
        self.map.codomain()
    }

    pub fn inverse(&self) -> Result<GEdge<W>> {
        Ok(GEdge {
            id: format!("{}~", self.id),
            weight: self.weight.clone(),
            src_dial: self.dst_dial,
            dst_dial: self.src_dial,
            map: self.map.inverse()?,
        })
    }
}

/// A graphing with carrier `carrier × {0..dialect}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graphing<W = Rational> {
    pub carrier: CellSet,
    pub dialect: u32,
    pub edges: Vec<GEdge<W>>,
}

/// Translation by `k` on the cells of `dom`.
pub fn shift(dom: &CellSet, k: i64) -> BitMap {
    let mut m = BitMap::identity(dom);
    for b in &mut m.branches {
        b.base += k;
    }
    m
}

impl<W: Scalar> Graphing<W> {
    pub fn new(carrier: CellSet, dialect: u32) -> Self {
        Graphing { carrier, dialect, edges: Vec::new() }
    }

    pub fn empty() -> Self {
        Graphing::new(CellSet::empty(Space::Line), 1)
    }

    pub fn edge(mut self, id: impl Into<String>, weight: W, dials: (u32, u32), map: BitMap) -> Self {
        self.edges.push(GEdge { id: id.into(), weight, src_dial: dials.0, dst_dial: dials.1, map });
        self
    }

    /// An edge translating `dom` by `k`, within one dialect slice.
    pub fn translation(self, id: impl Into<String>, weight: W, dom: &CellSet, k: i64) -> Self {
        self.edge(id, weight, (0, 0), shift(dom, k))
    }

    pub fn validate(&self) -> Result<()> {
        if self.carrier.space != Space::Line || self.dialect == 0 {
            return Err(Error::Precondition("graphings live on the line with a nonempty dialect".into()));
        }
        for e in &self.edges {
            if e.map.from != Space::Line || e.map.to != Space::Line {
                return Err(Error::Precondition(format!("edge {} does not act on the line", e.id)));
            }
            if e.src_dial >= self.dialect || e.dst_dial >= self.dialect {
                return Err(Error::Precondition(format!("edge {} leaves the dialect", e.id)));
            }
            if !(e.weight > W::zero() && e.weight <= W::one()) {
                return Err(Error::Precondition(format!("edge {} has weight outside ]0,1]", e.id)));
            }
            if !e.source().is_subset(&self.carrier) || !e.target().is_subset(&self.carrier) {
                return Err(Error::Carrier(format!("edge {} leaves the carrier {}", e.id, self.carrier)));
            }
            if !e.map.is_injective() {
                return Err(Error::Precondition(format!("edge {} is not injective", e.id)));
            }
        }
        Ok(())
    }

    /// Sources of all edges pairwise disjoint, so every point has at most
    /// one continuation.
    pub fn is_deterministic(&self) -> bool {
        let mut seen: BTreeMap<u32, CellSet> = BTreeMap::new();
        for e in &self.edges {
            let s = e.source();
            let acc = seen.entry(e.src_dial).or_insert_with(|| CellSet::empty(Space::Line));
            if !acc.is_disjoint(&s) {
                return false;
            }
            *acc = acc.union(&s).unwrap();
        }
        true
    }

    /// Same edges on the product with a dialect of size `e`: `d ↦ d + n·j`
    /// for `Dagger`, `d ↦ j + e·d` for `Ddagger`.
    pub fn lift(&self, e: u32, side: Lift) -> Graphing<W> {
        let n = self.dialect;
        let idx = |d: u32, j: u32| match side {
            Lift::Dagger => d + n * j,
            Lift::Ddagger => j + e * d,
        };
        let mut out = Graphing::new(self.carrier.clone(), n * e);
        for j in 0..e {
            for ed in &self.edges {
                out.edges.push(GEdge {
                    id: if e == 1 { ed.id.clone() } else { format!("{}@{j}", ed.id) },
                    weight: ed.weight.clone(),
                    src_dial: idx(ed.src_dial, j),
                    dst_dial: idx(ed.dst_dial, j),
                    map: ed.map.clone(),
                });
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Graphing<W>> {
        let edges = self.edges.iter().map(GEdge::inverse).collect::<Result<_>>()?;
        Ok(Graphing { carrier: self.carrier.clone(), dialect: self.dialect, edges })
    }

    /// Disjoint union of edge families over the union of carriers; dialects
    /// must agree.
    pub fn union(&self, other: &Graphing<W>) -> Result<Graphing<W>> {
        if self.dialect != other.dialect {
            return Err(Error::Precondition("union of graphings with different dialects".into()));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        Ok(Graphing { carrier: self.carrier.union(&other.carrier)?, dialect: self.dialect, edges })
    }

    pub fn scale(&self, k: &W) -> Graphing<W> {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = e.weight.clone() * k.clone();
        }
        g
    }

    /// Push every cell and map forward by an integer translation.
    pub fn translate(&self, k: i64) -> Graphing<W> {
        let mut g = self.clone();
        g.carrier = g.carrier.shift(k);
        for e in &mut g.edges {
            for b in &mut e.map.branches {
                b.guard.base += k;
                b.base += k;
            }
        }
        g
    }

    pub fn with_carrier(mut self, carrier: CellSet) -> Self {
        self.carrier = carrier;
        self
    }
}

#[derive(Clone)]
struct Item<W> {
    steps: Vec<Step>,
    weight: W,
    src_dial: u32,
    cur_dial: u32,
    br: Branch,
    /// Inverses of earlier composites, with the side and dialect reached.
    hist: Vec<(Side, u32, Branch)>,
}

fn pieces(b: &Branch, region: &CellSet) -> Vec<Branch> {
    region
        .cells()
        .iter()
        .filter_map(|c| b.preimage_cell(c))
        .map(|g| Branch { guard: g, base: b.base, out: b.out.clone() })
        .collect()
}

fn restrict(b: &Branch, dom: &CellSet) -> Result<Vec<Branch>> {
    dom.cells()
        .iter()
        .filter_map(|c| b.guard.intersect(c))
        .map(|g| Branch::new(g, b.base, b.out.clone()))
        .collect()
}

fn both<'a, W>(f: &'a Graphing<W>, g: &'a Graphing<W>) -> impl Fn(Side) -> &'a Graphing<W> {
    move |s| if s == Side::Left { f } else { g }
}

struct Walker<'a, W> {
    f: &'a Graphing<W>,
    g: &'a Graphing<W>,
    inter: CellSet,
    /// Both graphings deterministic: a point's future depends only on its
    /// position, dialect and the side to move.
    prune: bool,
}

impl<'a, W: Scalar> Walker<'a, W> {
    fn new(f: &'a Graphing<W>, g: &'a Graphing<W>) -> Result<Self> {
        if f.dialect != g.dialect {
            return Err(Error::Precondition("interaction needs a shared dialect".into()));
        }
        let inter = f.carrier.intersect(&g.carrier)?;
        Ok(Walker { f, g, inter, prune: f.is_deterministic() && g.is_deterministic() })
    }

    fn side(&self, s: Side) -> &'a Graphing<W> {
        both(self.f, self.g)(s)
    }

    fn starts(&self, s: Side, dom: &CellSet) -> Result<Vec<Item<W>>> {
        let mut out = Vec::new();
        for (i, e) in self.side(s).edges.iter().enumerate() {
            for b in &e.map.branches {
                for r in restrict(b, dom)? {
                    out.push(Item {
                        steps: vec![(s, i)],
                        weight: e.weight.clone(),
                        src_dial: e.src_dial,
                        cur_dial: e.dst_dial,
                        br: r,
                        hist: Vec::new(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Remove the points that revisit an earlier state: with deterministic
    /// graphings they loop forever.
    fn drop_loops(&self, it: Item<W>) -> Result<Vec<Item<W>>> {
        if !self.prune {
            return Ok(vec![it]);
        }
        let last = it.steps.last().unwrap().0;
        let mut looping = CellSet::empty(Space::Line);
        for (s, d, inv) in &it.hist {
            if *s != last || *d != it.cur_dial {
                continue;
            }
            if let Some(c) = inv.after(&it.br)? {
                looping = looping.union(&c.fixed_support()?)?;
            }
        }
        let mut it = it;
        let inv = it.br.inverse()?;
        it.hist.push((last, it.cur_dial, inv));
        if looping.is_empty() {
            return Ok(vec![it]);
        }
        let rest = CellSet::cell(it.br.guard.clone()).difference(&looping)?;
        Ok(restrict(&it.br, &rest)?.into_iter().map(|br| Item { br, ..it.clone() }).collect())
    }

    /// Continue `it`, restricted to `br`, with every matching edge of the
    /// other side.
    fn extend(&self, it: &Item<W>, br: &Branch, next: &mut Vec<Item<W>>) -> Result<()> {
        let other = it.steps.last().unwrap().0.other();
        for b in pieces(br, &self.inter) {
            for (j, e) in self.side(other).edges.iter().enumerate() {
                if e.src_dial != it.cur_dial {
                    continue;
                }
                for eb in &e.map.branches {
                    if let Some(c) = eb.after(&b)? {
                        let mut steps = it.steps.clone();
                        steps.push((other, j));
                        let item = Item {
                            steps,
                            weight: it.weight.clone() * e.weight.clone(),
                            src_dial: it.src_dial,
                            cur_dial: e.dst_dial,
                            br: c,
                            hist: it.hist.clone(),
                        };
                        next.extend(self.drop_loops(item)?);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Execution of two graphings on the same dialect.
pub fn execute_same<W: Scalar>(f: &Graphing<W>, g: &Graphing<W>, fuel: usize) -> Result<Graphing<W>> {
    let wk = Walker::new(f, g)?;
    let only = |s: Side| wk.side(s).carrier.difference(&wk.side(s.other()).carrier);
    let mut frontier = Vec::new();
    for s in [Side::Left, Side::Right] {
        for it in wk.starts(s, &only(s)?)? {
            frontier.extend(wk.drop_loops(it)?);
        }
    }
    let mut done: BTreeMap<Vec<Step>, (W, u32, u32, Vec<Branch>)> = BTreeMap::new();
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        if rounds > fuel {
            return Err(Error::Fuel { what: "execution rounds", bound: fuel });
        }
        let mut next = Vec::new();
        for it in frontier {
            let last = it.steps.last().unwrap().0;
            for b in pieces(&it.br, &only(last)?) {
                let slot = done
                    .entry(it.steps.clone())
                    .or_insert_with(|| (it.weight.clone(), it.src_dial, it.cur_dial, Vec::new()));
                slot.3.push(Branch::new(b.guard, b.base, b.out)?);
            }
            wk.extend(&it, &it.br, &mut next)?;
        }
        frontier = next;
    }
    let carrier = f.carrier.union(&g.carrier)?.difference(&wk.inter)?;
    let mut out = Graphing::new(carrier, f.dialect);
    for (steps, (w, sd, dd, mut brs)) in done {
        brs.sort();
        let id: Vec<&str> = steps.iter().map(|&(s, i)| wk.side(s).edges[i].id.as_str()).collect();
        out.edges.push(GEdge {
            id: id.join("·"),
            weight: w,
            src_dial: sd,
            dst_dial: dd,
            map: BitMap::new(Space::Line, Space::Line, brs)?,
        });
    }
    Ok(out)
}

/// `F ⊡ G`, computed on the product dialect `D^F × D^G`.
pub fn execute<W: Scalar>(f: &Graphing<W>, g: &Graphing<W>, fuel: usize) -> Result<Graphing<W>> {
    execute_same(&f.lift(g.dialect, Lift::Dagger), &g.lift(f.dialect, Lift::Ddagger), fuel)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GCircuit<W> {
    /// Least rotation, starting with an edge of the left graphing.
    pub steps: Vec<Step>,
    pub weight: W,
    pub dial: u32,
    /// Points of the first edge's source that the cycle maps to themselves.
    pub support: CellSet,
}

/// Walk alternating cycles; `visit` returns `true` to stop early.
fn walk<W: Scalar>(
    f: &Graphing<W>,
    g: &Graphing<W>,
    fuel: usize,
    visit: &mut dyn FnMut(GCircuit<W>) -> bool,
) -> Result<()> {
    let wk = Walker::new(f, g)?;
    let mut frontier = Vec::new();
    for it in wk.starts(Side::Left, &wk.inter)? {
        frontier.extend(wk.drop_loops(it)?);
    }
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        if rounds > fuel {
            return Err(Error::Fuel { what: "circuit search rounds", bound: fuel });
        }
        let mut next = Vec::new();
        for it in frontier {
            let last = it.steps.last().unwrap().0;
            let mut live = vec![it.br.clone()];
            if last == Side::Right && it.cur_dial == it.src_dial {
                let fix = it.br.fixed_support()?;
                if !fix.is_empty() {
                    if least_rotation(&it.steps, |s| *s) == 0 && is_primitive(&it.steps) {
                        let c = GCircuit {
                            steps: it.steps.clone(),
                            weight: it.weight.clone(),
                            dial: it.src_dial,
                            support: fix.clone(),
                        };
                        if visit(c) {
                            return Ok(());
                        }
                    }
                    if wk.prune {
                        live = restrict(&it.br, &CellSet::cell(it.br.guard.clone()).difference(&fix)?)?;
                    }
                }
            }
            for br in live {
                wk.extend(&it, &br, &mut next)?;
            }
        }
        frontier = next;
    }
    Ok(())
}

/// Primitive alternating cycles of positive-measure support, merged per
/// edge sequence.
pub fn circuits_same<W: Scalar>(f: &Graphing<W>, g: &Graphing<W>, fuel: usize) -> Result<Vec<GCircuit<W>>> {
    let mut found: BTreeMap<(Vec<Step>, u32), GCircuit<W>> = BTreeMap::new();
    walk(f, g, fuel, &mut |c| {
        match found.get_mut(&(c.steps.clone(), c.dial)) {
            Some(old) => old.support = old.support.union(&c.support).unwrap(),
            None => {
                found.insert((c.steps.clone(), c.dial), c);
            }
        }
        false
    })?;
    Ok(found.into_values().collect())
}

pub fn circuits<W: Scalar>(f: &Graphing<W>, g: &Graphing<W>, fuel: usize) -> Result<Vec<GCircuit<W>>> {
    circuits_same(&f.lift(g.dialect, Lift::Dagger), &g.lift(f.dialect, Lift::Ddagger), fuel)
}

/// `⟦F,G⟧ = 1/(n_F·n_G) · Σ λ(support)·m(weight)` over the circuits.
pub fn measure<W: Scalar>(f: &Graphing<W>, g: &Graphing<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Ext<W>> {
    let fl = f.lift(g.dialect, Lift::Dagger);
    let gl = g.lift(f.dialect, Lift::Ddagger);
    let mut total = Ext::zero();
    walk(&fl, &gl, fuel, &mut |c| {
        let lam = W::from_rational(&c.support.measure());
        total = total.clone() + m.eval(&c.weight).scale(&lam);
        total.is_inf()
    })?;
    Ok(total.scale(&W::from_ratio(1, (f.dialect * g.dialect) as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Axis;
    use crate::scalar::{rat, Odds};

    fn unit(b: i64) -> CellSet {
        CellSet::intervals([b])
    }

    #[test]
    fn translations_compose() {
        let f = Graphing::new(CellSet::intervals([0, 2]), 1).translation("f", rat(1, 1), &unit(0), 2);
        let g = Graphing::new(CellSet::intervals([2, 5]), 1).translation("g", rat(1, 1), &unit(2), 3);
        let h = execute(&f, &g, DEFAULT_FUEL).unwrap();
        assert_eq!(h.edges.len(), 1);
        assert_eq!(h.edges[0].source(), unit(0));
        assert_eq!(h.edges[0].target(), unit(5));
        assert_eq!(h.carrier, CellSet::intervals([0, 5]));
    }

    #[test]
    fn identity_cycle_is_infinite() {
        let f = Graphing::new(CellSet::intervals([0, 2]), 1).translation("f", rat(1, 1), &unit(0), 2);
        let g = f.inverse().unwrap();
        let cs = circuits(&f, &g, DEFAULT_FUEL).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support.measure(), rat(1, 1));
        assert!(measure(&f, &g, &Odds, DEFAULT_FUEL).unwrap().is_inf());
        let far = Graphing::new(unit(9), 1);
        assert!(measure(&f, &far, &Odds, DEFAULT_FUEL).unwrap().is_zero());
    }

    #[test]
    fn half_overlap_support() {
        let f = Graphing::new(CellSet::intervals([0, 2]), 1).translation("f", rat(1, 2), &unit(0), 2);
        let half = CellSet::parse("[2; x:1=0]").unwrap();
        let g = Graphing::new(CellSet::intervals([0, 2]), 1).translation("g", rat(1, 1), &half, -2);
        let cs = circuits(&f, &g, DEFAULT_FUEL).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support.measure(), rat(1, 2));
        // weight 1/2, support 1/2, m(1/2) = 1
        assert_eq!(measure(&f, &g, &Odds, DEFAULT_FUEL).unwrap(), Ext::Fin(rat(1, 2)));
    }

    #[test]
    fn tau_cycle_support() {
        let tau = crate::dyadic::Gen::TauHat(Axis::X).on(Space::Line, &[0]).unwrap();
        let f = Graphing::new(unit(0), 1).edge("t", rat(1, 2), (0, 0), tau);
        let g = Graphing::new(unit(0), 1).edge("id", rat(1, 1), (0, 0), BitMap::identity(&unit(0)));
        // fixed points of the track swap have measure zero; its square is
        // the identity but that cycle is not primitive
        assert!(circuits(&f, &g, 50).unwrap().is_empty());
    }
}
