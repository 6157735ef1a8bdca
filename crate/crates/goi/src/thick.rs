//! Thick graphs (graphs over `S × D`) and their formal sums.
//!
//! Dialect elements are tuples of atoms. The product of two dialects
//! concatenates tuples, so `(D × E) × F` and `D × (E × F)` coincide.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{self, Edge, Graph};
use crate::scalar::{Ext, Quantifier, Rational, Scalar};

pub type Dial = Vec<String>;
pub type TVertex = (String, Dial);

pub fn atom(s: &str) -> Dial {
    vec![s.to_string()]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThickGraph<W = Rational> {
    pub carrier: BTreeSet<String>,
    pub dialect: Vec<Dial>,
    pub graph: Graph<W, TVertex>,
}

impl<W: Scalar> ThickGraph<W> {
    pub fn new(carrier: impl IntoIterator<Item = String>, dialect: Vec<Dial>) -> Self {
        let carrier: BTreeSet<String> = carrier.into_iter().collect();
        let mut graph = Graph::empty();
        for s in &carrier {
            for d in &dialect {
                graph.vertices.insert((s.clone(), d.clone()));
            }
        }
        ThickGraph { carrier, dialect, graph }
    }

    /// Thick graph with a single-atom dialect `{"1"}`.
    pub fn plain(carrier: impl IntoIterator<Item = String>) -> Self {
        Self::new(carrier, vec![atom("1")])
    }

    pub fn edge(mut self, id: &str, src: (&str, Dial), dst: (&str, Dial), w: W) -> Self {
        self.graph.add_edge(id, (src.0.to_string(), src.1), (dst.0.to_string(), dst.1), w);
        self
    }

    pub fn n(&self) -> usize {
        self.dialect.len()
    }

    pub fn validate(&self) -> Result<()> {
        let ds: BTreeSet<&Dial> = self.dialect.iter().collect();
        if ds.len() != self.dialect.len() || ds.is_empty() {
            return Err(Error::Precondition("dialect must be a nonempty set".into()));
        }
        self.graph.validate()
    }

    /// Re-index the dialect along a bijection.
    pub fn variant(&self, phi: &BTreeMap<Dial, Dial>) -> Result<Self> {
        let image: BTreeSet<&Dial> = self.dialect.iter().filter_map(|d| phi.get(d)).collect();
        if image.len() != self.dialect.len() || phi.len() != self.dialect.len() {
            return Err(Error::Precondition("variant map is not a bijection of the dialect".into()));
        }
        Ok(ThickGraph {
            carrier: self.carrier.clone(),
            dialect: self.dialect.iter().map(|d| phi[d].clone()).collect(),
            graph: self.graph.map_vertices(|(s, d)| (s.clone(), phi[d].clone())),
        })
    }

    /// `G^{†E}` (dialect `D × E`) or `G^{‡E}` (dialect `E × D`); edges act as
    /// the identity on the `E` coordinate.
    pub fn lift(&self, e: &[Dial], side: Lift) -> Self {
        let join = |d: &Dial, x: &Dial| -> Dial {
            match side {
                Lift::Dagger => d.iter().chain(x).cloned().collect(),
                Lift::Ddagger => x.iter().chain(d).cloned().collect(),
            }
        };
        let mut dialect = Vec::new();
        match side {
            Lift::Dagger => {
                for x in e {
                    for d in &self.dialect {
                        dialect.push(join(d, x));
                    }
                }
            }
            Lift::Ddagger => {
                for d in &self.dialect {
                    for x in e {
                        dialect.push(join(d, x));
                    }
                }
            }
        }
        let mut out = ThickGraph::new(self.carrier.iter().cloned(), dialect);
        for x in e {
            for ed in &self.graph.edges {
                out.graph.edges.push(Edge {
                    id: format!("{}@{}", ed.id, x.join(",")),
                    src: (ed.src.0.clone(), join(&ed.src.1, x)),
                    dst: (ed.dst.0.clone(), join(&ed.dst.1, x)),
                    weight: ed.weight.clone(),
                });
            }
        }
        out
    }

    /// Sub-graph living in a single dialect layer, when no edge leaves it.
    pub fn slice(&self, d: &Dial) -> Graph<W, String> {
        let mut g = Graph::new(self.carrier.iter().cloned());
        for e in &self.graph.edges {
            if &e.src.1 == d && &e.dst.1 == d {
                g.add_edge(e.id.clone(), e.src.0.clone(), e.dst.0.clone(), e.weight.clone());
            }
        }
        g
    }

    /// Edges as `(src, src-dialect, dst, dst-dialect, weight)`, sorted.
    pub fn canonical(&self) -> Vec<(String, Dial, String, Dial, String)> {
        let mut v: Vec<_> = self
            .graph
            .edges
            .iter()
            .map(|e| (e.src.0.clone(), e.src.1.clone(), e.dst.0.clone(), e.dst.1.clone(), e.weight.to_text()))
            .collect();
        v.sort();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lift {
    Dagger,
    Ddagger,
}

/// `F ⊡ G` on carrier `S^F Δ S^G` and dialect `D^F × D^G`.
pub fn execute_thick<W: Scalar>(f: &ThickGraph<W>, g: &ThickGraph<W>, fuel: usize) -> Result<ThickGraph<W>> {
    let fl = f.lift(&g.dialect, Lift::Dagger);
    let gl = g.lift(&f.dialect, Lift::Ddagger);
    let graph = graph::execute(&fl.graph, &gl.graph, fuel)?;
    let carrier: BTreeSet<String> = f.carrier.symmetric_difference(&g.carrier).cloned().collect();
    Ok(ThickGraph { carrier, dialect: fl.dialect, graph })
}

/// Circuit sum `Σ m(ω(π))` over the lifted pair, without normalisation.
pub fn measure_thick_raw<W: Scalar>(f: &ThickGraph<W>, g: &ThickGraph<W>, m: &dyn Quantifier<W>) -> Result<Ext<W>> {
    let fl = f.lift(&g.dialect, Lift::Dagger);
    let gl = g.lift(&f.dialect, Lift::Ddagger);
    graph::measure(&fl.graph, &gl.graph, m)
}

/// `⟦F,G⟧ = (1 / n^F n^G) Σ m(ω(π))`.
pub fn measure_thick<W: Scalar>(f: &ThickGraph<W>, g: &ThickGraph<W>, m: &dyn Quantifier<W>) -> Result<Ext<W>> {
    let n = W::from_ratio(1, (f.n() * g.n()) as i64);
    Ok(measure_thick_raw(f, g, m)?.scale(&n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Normalized,
    Unnormalized,
}

/// A formal sum `Σ α_i F_i` of thick graphs on a common carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct Sliced<W = Rational> {
    pub slices: Vec<(W, ThickGraph<W>)>,
}

impl<W: Scalar> Sliced<W> {
    pub fn single(g: ThickGraph<W>) -> Self {
        Sliced { slices: vec![(W::one(), g)] }
    }

    pub fn unit(&self) -> W {
        self.slices.iter().fold(W::zero(), |a, (c, _)| a + c.clone())
    }

    pub fn carrier(&self) -> BTreeSet<String> {
        self.slices.first().map(|(_, g)| g.carrier.clone()).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.carrier();
        for (_, g) in &self.slices {
            g.validate()?;
            if g.carrier != c {
                return Err(Error::Carrier("slices must share their carrier".into()));
            }
        }
        Ok(())
    }

    pub fn plus(mut self, coeff: W, g: ThickGraph<W>) -> Self {
        self.slices.push((coeff, g));
        self
    }
}

pub fn execute_sliced<W: Scalar>(f: &Sliced<W>, g: &Sliced<W>, fuel: usize) -> Result<Sliced<W>> {
    let mut slices = Vec::new();
    for (a, fi) in &f.slices {
        for (b, gj) in &g.slices {
            slices.push((a.clone() * b.clone(), execute_thick(fi, gj, fuel)?));
        }
    }
    Ok(Sliced { slices })
}

/// Bilinear measurement of two formal sums.
pub fn measure_sliced<W: Scalar>(
    f: &Sliced<W>,
    g: &Sliced<W>,
    m: &dyn Quantifier<W>,
    conv: Convention,
) -> Result<Ext<W>> {
    let mut total = Ext::zero();
    for (a, fi) in &f.slices {
        for (b, gj) in &g.slices {
            let v = match conv {
                Convention::Normalized => measure_thick(fi, gj, m)?,
                Convention::Unnormalized => measure_thick_raw(fi, gj, m)?,
            };
            total = total + v.scale(&(a.clone() * b.clone()));
        }
    }
    Ok(total)
}

/// Merge `Σ α_i F_i` into a single thick graph over the disjoint union of the
/// dialects, when `α_i = α · n^{F_i} / n^F`. Returns `α` and the graph.
pub fn flatten_sliced<W: Scalar>(f: &Sliced<W>) -> Result<(W, ThickGraph<W>)> {
    f.validate()?;
    let total: usize = f.slices.iter().map(|(_, g)| g.n()).sum();
    if f.slices.is_empty() {
        return Err(Error::Precondition("no slices to flatten".into()));
    }
    let (a0, g0) = &f.slices[0];
    let alpha = a0.clone() * W::from_ratio(total as i64, g0.n() as i64);
    for (a, g) in &f.slices {
        if *a != alpha.clone() * W::from_ratio(g.n() as i64, total as i64) {
            return Err(Error::Precondition("coefficients are not proportional to dialect sizes".into()));
        }
    }
    let tag = |i: usize, d: &Dial| -> Dial {
        let mut t = vec![format!("#{i}")];
        t.extend(d.iter().cloned());
        t
    };
    let mut dialect = Vec::new();
    for (i, (_, g)) in f.slices.iter().enumerate() {
        dialect.extend(g.dialect.iter().map(|d| tag(i, d)));
    }
    let mut out = ThickGraph::new(f.carrier(), dialect);
    for (i, (_, g)) in f.slices.iter().enumerate() {
        for e in &g.graph.edges {
            out.graph.edges.push(Edge {
                id: format!("{}#{i}", e.id),
                src: (e.src.0.clone(), tag(i, &e.src.1)),
                dst: (e.dst.0.clone(), tag(i, &e.dst.1)),
                weight: e.weight.clone(),
            });
        }
    }
    Ok((alpha, out))
}

/// Equal measurement against every supplied test.
pub fn universal_equiv<W: Scalar>(
    f: &Sliced<W>,
    g: &Sliced<W>,
    tests: &[Sliced<W>],
    m: &dyn Quantifier<W>,
) -> Result<bool> {
    if f.carrier() != g.carrier() {
        return Err(Error::Carrier("universal equivalence compares graphs on one carrier".into()));
    }
    for h in tests {
        if measure_sliced(f, h, m, Convention::Normalized)? != measure_sliced(g, h, m, Convention::Normalized)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The contraction graph `Ctr^φ_ψ`: `φ`-legs stay in slice 1, `ψ`-legs move
/// between slice 2 of `V^A` and slice 1 of `W₂`.
pub fn contraction_graph<W: Scalar>(
    phi: &BTreeMap<String, String>,
    psi: &BTreeMap<String, String>,
) -> Result<ThickGraph<W>> {
    let va: BTreeSet<&String> = phi.keys().collect();
    let w1: BTreeSet<&String> = phi.values().collect();
    let w2: BTreeSet<&String> = psi.values().collect();
    if psi.keys().collect::<BTreeSet<_>>() != va || w1.len() != va.len() || w2.len() != va.len() {
        return Err(Error::Precondition("φ and ψ must be bijections out of the same set".into()));
    }
    if !va.is_disjoint(&w1) || !va.is_disjoint(&w2) || !w1.is_disjoint(&w2) {
        return Err(Error::Precondition("V^A, W₁ and W₂ must be pairwise disjoint".into()));
    }
    let carrier = va.iter().chain(&w1).chain(&w2).map(|s| (*s).clone());
    let mut g = ThickGraph::new(carrier, vec![atom("1"), atom("2")]);
    let one = W::one();
    for v in phi.keys() {
        let (p, q) = (phi[v].as_str(), psi[v].as_str());
        g = g
            .edge(&format!("{v}.1.o"), (p, atom("1")), (v, atom("1")), one.clone())
            .edge(&format!("{v}.1.i"), (v, atom("1")), (p, atom("1")), one.clone())
            .edge(&format!("{v}.2.o"), (q, atom("1")), (v, atom("2")), one.clone())
            .edge(&format!("{v}.2.i"), (v, atom("2")), (q, atom("1")), one.clone());
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DEFAULT_PATH_FUEL;
    use crate::scalar::{rat, Odds};

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn singleton_lift_is_a_variant() {
        let g: ThickGraph = ThickGraph::plain([s("1"), s("2")]).edge("e", ("1", atom("1")), ("2", atom("1")), rat(1, 2));
        let l = g.lift(&[atom("x")], Lift::Dagger);
        assert_eq!(l.n(), 1);
        assert_eq!(l.graph.edges.len(), 1);
        assert_eq!(l.graph.edges[0].src.1, vec![s("1"), s("x")]);
    }

    #[test]
    fn dagger_makes_disjoint_copies() {
        let g: ThickGraph = ThickGraph::plain([s("1"), s("2")]).edge("e", ("1", atom("1")), ("2", atom("1")), rat(1, 1));
        let l = g.lift(&[atom("a"), atom("b"), atom("c")], Lift::Dagger);
        assert_eq!(l.n(), 3);
        assert_eq!(l.graph.edges.len(), 3);
    }

    #[test]
    fn variant_involution() {
        let g: ThickGraph = ThickGraph::new([s("1")], vec![atom("1"), atom("2")])
            .edge("e", ("1", atom("1")), ("1", atom("2")), rat(1, 3));
        let swap: BTreeMap<Dial, Dial> = [(atom("1"), atom("2")), (atom("2"), atom("1"))].into_iter().collect();
        assert_eq!(g.variant(&swap).unwrap().variant(&swap).unwrap(), g);
        let bad: BTreeMap<Dial, Dial> = [(atom("1"), atom("2")), (atom("2"), atom("2"))].into_iter().collect();
        assert!(g.variant(&bad).is_err());
    }

    #[test]
    fn measure_normalisation() {
        // Dialects of size 2 on both sides and one circuit per copy.
        let f: ThickGraph = ThickGraph::new([s("1"), s("2")], vec![atom("1"), atom("2")])
            .edge("a", ("1", atom("1")), ("2", atom("1")), rat(1, 2))
            .edge("b", ("1", atom("2")), ("2", atom("2")), rat(1, 2));
        let g: ThickGraph = ThickGraph::new([s("1"), s("2")], vec![atom("1"), atom("2")])
            .edge("c", ("2", atom("1")), ("1", atom("1")), rat(1, 1))
            .edge("d", ("2", atom("2")), ("1", atom("2")), rat(1, 1));
        // Four circuits, each weight 1/2 so m = 1: total 4 / 4.
        assert_eq!(measure_thick(&f, &g, &Odds).unwrap(), Ext::Fin(rat(1, 1)));
    }

    #[test]
    fn contraction_rejects_overlap() {
        let phi: BTreeMap<String, String> = [(s("1"), s("2"))].into_iter().collect();
        let psi: BTreeMap<String, String> = [(s("1"), s("3"))].into_iter().collect();
        assert!(contraction_graph::<Rational>(&phi, &psi).is_ok());
        let psi: BTreeMap<String, String> = [(s("1"), s("2"))].into_iter().collect();
        assert!(contraction_graph::<Rational>(&phi, &psi).is_err());
    }

    #[test]
    fn flatten_checks_proportionality() {
        let a: ThickGraph = ThickGraph::plain([s("1")]);
        let f = Sliced { slices: vec![(rat(1, 2), a.clone()), (rat(1, 3), a)] };
        assert!(flatten_sliced(&f).is_err());
    }

    #[test]
    fn execute_with_empty_is_a_lift() {
        let g: ThickGraph = ThickGraph::new([s("1"), s("2")], vec![atom("1"), atom("2")])
            .edge("e", ("1", atom("1")), ("2", atom("2")), rat(1, 2));
        let e: ThickGraph = ThickGraph::new(Vec::<String>::new(), vec![atom("z")]);
        let r = execute_thick(&g, &e, DEFAULT_PATH_FUEL).unwrap();
        assert_eq!(r.canonical(), g.lift(&[atom("z")], Lift::Dagger).canonical());
    }
}
