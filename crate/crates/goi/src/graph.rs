//! Finite weighted directed graphs, alternating paths, execution and
//! 1-circuits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::scalar::{Ext, Quantifier, Rational, Scalar};

/// Default bound on the number of enumerated paths.
pub const DEFAULT_PATH_FUEL: usize = 1_000_000;

pub trait Vertex: Clone + Ord + Debug + Send + Sync + 'static {}
impl<T: Clone + Ord + Debug + Send + Sync + 'static> Vertex for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<W = Rational, V = String> {
    pub id: String,
    pub src: V,
    pub dst: V,
    pub weight: W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph<W = Rational, V = String> {
    pub vertices: BTreeSet<V>,
    pub edges: Vec<Edge<W, V>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// An edge of one of the two graphs taking part in an interaction.
pub type Step = (Side, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Path<W, V> {
    pub steps: Vec<Step>,
    pub src: V,
    pub dst: V,
    pub weight: W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<W> {
    /// Least rotation of the cycle.
    pub steps: Vec<Step>,
    pub weight: W,
}

impl<W: Scalar, V: Vertex> Graph<W, V> {
    pub fn new(vertices: impl IntoIterator<Item = V>) -> Self {
        Graph { vertices: vertices.into_iter().collect(), edges: Vec::new() }
    }

    pub fn empty() -> Self {
        Graph { vertices: BTreeSet::new(), edges: Vec::new() }
    }

    pub fn edge(mut self, id: impl Into<String>, src: V, dst: V, weight: W) -> Self {
        self.add_edge(id, src, dst, weight);
        self
    }

    pub fn add_edge(&mut self, id: impl Into<String>, src: V, dst: V, weight: W) {
        self.edges.push(Edge { id: id.into(), src, dst, weight });
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for e in &self.edges {
            if !self.vertices.contains(&e.src) || !self.vertices.contains(&e.dst) {
                return Err(Error::Precondition(format!("edge {} leaves the vertex set", e.id)));
            }
            if !ids.insert(&e.id) {
                return Err(Error::Precondition(format!("duplicate edge id {}", e.id)));
            }
        }
        Ok(())
    }

    /// Edge list sorted by endpoints and weight, ids dropped. Two graphs are
    /// equal up to renaming iff their canonical forms coincide.
    pub fn canonical(&self) -> (Vec<V>, Vec<(V, V, String)>) {
        let mut es: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.src.clone(), e.dst.clone(), e.weight.to_text()))
            .collect();
        es.sort();
        (self.vertices.iter().cloned().collect(), es)
    }

    pub fn same_up_to_renaming(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn map_vertices<U: Vertex>(&self, f: impl Fn(&V) -> U) -> Graph<W, U> {
        Graph {
            vertices: self.vertices.iter().map(&f).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { id: e.id.clone(), src: f(&e.src), dst: f(&e.dst), weight: e.weight.clone() })
                .collect(),
        }
    }
}

/// The two graphs of an interaction, addressed by [`Side`].
struct Pair<'a, W, V> {
    f: &'a Graph<W, V>,
    g: &'a Graph<W, V>,
}

impl<'a, W: Scalar, V: Vertex> Pair<'a, W, V> {
    fn edge(&self, (side, i): Step) -> &'a Edge<W, V> {
        match side {
            Side::Left => &self.f.edges[i],
            Side::Right => &self.g.edges[i],
        }
    }

    fn nodes(&self) -> Vec<Step> {
        (0..self.f.edges.len())
            .map(|i| (Side::Left, i))
            .chain((0..self.g.edges.len()).map(|i| (Side::Right, i)))
            .collect()
    }

    /// Successors in the alternating line graph.
    fn next(&self, s: Step) -> Vec<Step> {
        let t = &self.edge(s).dst;
        let other = match s.0 {
            Side::Left => self.g,
            Side::Right => self.f,
        };
        other
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| &e.src == t)
            .map(|(i, _)| (s.0.other(), i))
            .collect()
    }

    fn key(&self, s: Step) -> (Side, &'a str) {
        (s.0, self.edge(s).id.as_str())
    }

    fn weight(&self, steps: &[Step]) -> W {
        steps.iter().fold(W::one(), |w, &s| w * self.edge(s).weight.clone())
    }
}

/// Reachability over the alternating line graph.
fn closure(start: &[Step], succ: &dyn Fn(Step) -> Vec<Step>) -> BTreeSet<Step> {
    let mut seen: BTreeSet<Step> = start.iter().copied().collect();
    let mut stack: Vec<Step> = start.to_vec();
    while let Some(s) = stack.pop() {
        for n in succ(s) {
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen
}

fn has_cycle(nodes: &BTreeSet<Step>, succ: &dyn Fn(Step) -> Vec<Step>) -> bool {
    // Kahn's algorithm on the induced subgraph.
    let mut indeg: BTreeMap<Step, usize> = nodes.iter().map(|&n| (n, 0)).collect();
    for &n in nodes {
        for m in succ(n) {
            if let Some(d) = indeg.get_mut(&m) {
                *d += 1;
            }
        }
    }
    let mut queue: Vec<Step> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
    let mut removed = 0;
    while let Some(n) = queue.pop() {
        removed += 1;
        for m in succ(n) {
            if let Some(d) = indeg.get_mut(&m) {
                *d -= 1;
                if *d == 0 {
                    queue.push(m);
                }
            }
        }
    }
    removed < nodes.len()
}

/// All alternating paths between `f` and `g` with source and target in `v`.
pub fn alternating_paths<W: Scalar, V: Vertex>(
    f: &Graph<W, V>,
    g: &Graph<W, V>,
    v: &BTreeSet<V>,
    fuel: usize,
) -> Result<Vec<Path<W, V>>> {
    let pair = Pair { f, g };
    let nodes = pair.nodes();
    let starts: Vec<Step> = nodes.iter().copied().filter(|&s| v.contains(&pair.edge(s).src)).collect();
    let ends: Vec<Step> = nodes.iter().copied().filter(|&s| v.contains(&pair.edge(s).dst)).collect();

    let fwd = closure(&starts, &|s| pair.next(s));
    let preds = |s: Step| -> Vec<Step> {
        nodes.iter().copied().filter(|&p| pair.next(p).contains(&s)).collect()
    };
    let bwd = closure(&ends, &preds);
    let useful: BTreeSet<Step> = fwd.intersection(&bwd).copied().collect();
    let succ = |s: Step| -> Vec<Step> { pair.next(s).into_iter().filter(|n| useful.contains(n)).collect() };
    if has_cycle(&useful, &succ) {
        return Err(Error::Infinite("alternating paths: a cycle lies between two endpoints".into()));
    }

    let mut out = Vec::new();
    let mut stack: Vec<Vec<Step>> = starts.iter().filter(|s| useful.contains(s)).map(|&s| vec![s]).collect();
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if v.contains(&pair.edge(last).dst) {
            if out.len() >= fuel {
                return Err(Error::Fuel { what: "alternating paths", bound: fuel });
            }
            out.push(Path {
                src: pair.edge(p[0]).src.clone(),
                dst: pair.edge(last).dst.clone(),
                weight: pair.weight(&p),
                steps: p.clone(),
            });
        }
        for n in succ(last) {
            let mut q = p.clone();
            q.push(n);
            stack.push(q);
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.steps.iter().map(|&s| pair.key(s)).collect();
        let kb: Vec<_> = b.steps.iter().map(|&s| pair.key(s)).collect();
        ka.cmp(&kb)
    });
    Ok(out)
}

fn path_id<W, V>(f: &Graph<W, V>, g: &Graph<W, V>, steps: &[Step]) -> String {
    steps
        .iter()
        .map(|&(side, i)| match side {
            Side::Left => f.edges[i].id.clone(),
            Side::Right => g.edges[i].id.clone(),
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// The execution `f ⊡ g`.
pub fn execute<W: Scalar, V: Vertex>(f: &Graph<W, V>, g: &Graph<W, V>, fuel: usize) -> Result<Graph<W, V>> {
    let delta: BTreeSet<V> = f.vertices.symmetric_difference(&g.vertices).cloned().collect();
    let paths = alternating_paths(f, g, &delta, fuel)?;
    let mut out = Graph { vertices: delta, edges: Vec::with_capacity(paths.len()) };
    let mut used = BTreeSet::new();
    for p in paths {
        let base = path_id(f, g, &p.steps);
        let mut id = base.clone();
        let mut k = 1;
        while !used.insert(id.clone()) {
            k += 1;
            id = format!("{base}#{k}");
        }
        out.edges.push(Edge { id, src: p.src, dst: p.dst, weight: p.weight });
    }
    Ok(out)
}

/// Disjoint union of two graphs; edge ids are tagged by side when they clash.
pub fn union<W: Scalar, V: Vertex>(f: &Graph<W, V>, g: &Graph<W, V>) -> Graph<W, V> {
    let mut out = f.clone();
    out.vertices.extend(g.vertices.iter().cloned());
    let ids: BTreeSet<String> = f.edges.iter().map(|e| e.id.clone()).collect();
    for e in &g.edges {
        let mut e = e.clone();
        if ids.contains(&e.id) {
            e.id = format!("{}'", e.id);
        }
        out.edges.push(e);
    }
    out
}

/// Whether `w` is not a proper power of a shorter word.
pub fn is_primitive<T: PartialEq>(w: &[T]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
}

/// Index of the lexicographically least rotation under `key`.
pub fn least_rotation<T, K: Ord>(w: &[T], key: impl Fn(&T) -> K) -> usize {
    let n = w.len();
    (0..n)
        .min_by(|&a, &b| {
            for i in 0..n {
                let c = key(&w[(a + i) % n]).cmp(&key(&w[(b + i) % n]));
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
        .unwrap_or(0)
}

fn canonical_cycle<W: Scalar, V: Vertex>(pair: &Pair<'_, W, V>, cyc: &[Step]) -> Vec<Step> {
    let r = least_rotation(cyc, |&s| pair.key(s));
    cyc[r..].iter().chain(cyc[..r].iter()).copied().collect()
}

/// Tarjan's strongly connected components.
fn sccs(nodes: &[Step], succ: &dyn Fn(Step) -> Vec<Step>) -> Vec<Vec<Step>> {
    struct St<'a> {
        succ: &'a dyn Fn(Step) -> Vec<Step>,
        index: BTreeMap<Step, usize>,
        low: BTreeMap<Step, usize>,
        on: BTreeSet<Step>,
        stack: Vec<Step>,
        next: usize,
        out: Vec<Vec<Step>>,
    }
    fn visit(st: &mut St<'_>, v: Step) {
        st.index.insert(v, st.next);
        st.low.insert(v, st.next);
        st.next += 1;
        st.stack.push(v);
        st.on.insert(v);
        for w in (st.succ)(v) {
            if !st.index.contains_key(&w) {
                visit(st, w);
                let lw = st.low[&w];
                let lv = st.low.get_mut(&v).unwrap();
                *lv = (*lv).min(lw);
            } else if st.on.contains(&w) {
                let iw = st.index[&w];
                let lv = st.low.get_mut(&v).unwrap();
                *lv = (*lv).min(iw);
            }
        }
        if st.low[&v] == st.index[&v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on.remove(&w);
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.out.push(comp);
        }
    }
    let mut st = St {
        succ,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        on: BTreeSet::new(),
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for &n in nodes {
        if !st.index.contains_key(&n) {
            visit(&mut st, n);
        }
    }
    st.out
}

/// All 1-circuits between `f` and `g`.
///
/// The set is finite exactly when every strongly connected component of the
/// alternating line graph is a single simple cycle; otherwise an
/// [`Error::Infinite`] is returned. See [`one_circuits_bounded`].
pub fn one_circuits<W: Scalar, V: Vertex>(f: &Graph<W, V>, g: &Graph<W, V>) -> Result<Vec<Circuit<W>>> {
    let pair = Pair { f, g };
    let nodes = pair.nodes();
    let mut out = Vec::new();
    for comp in sccs(&nodes, &|s| pair.next(s)) {
        let set: BTreeSet<Step> = comp.iter().copied().collect();
        let inner = |s: Step| -> Vec<Step> { pair.next(s).into_iter().filter(|n| set.contains(n)).collect() };
        let arcs: usize = comp.iter().map(|&s| inner(s).len()).sum();
        if arcs == 0 {
            continue;
        }
        if arcs != comp.len() {
            return Err(Error::Infinite("1-circuits: two cycles share an edge".into()));
        }
        let start = *comp.iter().min().unwrap();
        let mut cyc = vec![start];
        let mut cur = inner(start)[0];
        while cur != start {
            cyc.push(cur);
            cur = inner(cur)[0];
        }
        let steps = canonical_cycle(&pair, &cyc);
        out.push(Circuit { weight: pair.weight(&steps), steps });
    }
    sort_circuits(&pair, &mut out);
    Ok(out)
}

fn sort_circuits<W: Scalar, V: Vertex>(pair: &Pair<'_, W, V>, cs: &mut [Circuit<W>]) {
    cs.sort_by(|a, b| {
        let ka: Vec<_> = a.steps.iter().map(|&s| pair.key(s)).collect();
        let kb: Vec<_> = b.steps.iter().map(|&s| pair.key(s)).collect();
        ka.cmp(&kb)
    });
}

/// 1-circuits of length at most `max_len`, enumerated by brute force.
pub fn one_circuits_bounded<W: Scalar, V: Vertex>(
    f: &Graph<W, V>,
    g: &Graph<W, V>,
    max_len: usize,
) -> Vec<Circuit<W>> {
    let pair = Pair { f, g };
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Step>> = pair.nodes().into_iter().map(|s| vec![s]).collect();
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        let nexts = pair.next(last);
        if nexts.contains(&p[0]) && is_primitive(&p) && canonical_cycle(&pair, &p) == p {
            out.push(Circuit { weight: pair.weight(&p), steps: p.clone() });
        }
        if p.len() < max_len {
            for n in nexts {
                let mut q = p.clone();
                q.push(n);
                stack.push(q);
            }
        }
    }
    sort_circuits(&pair, &mut out);
    out
}

/// `Σ m(ω(π))` over the 1-circuits of `f` and `g`.
pub fn measure<W: Scalar, V: Vertex>(f: &Graph<W, V>, g: &Graph<W, V>, m: &dyn Quantifier<W>) -> Result<Ext<W>> {
    Ok(one_circuits(f, g)?.iter().map(|c| m.eval(&c.weight)).sum())
}
