//! Projects: a wager together with a formal sum of graphings on a common
//! carrier.

use crate::dyadic::{binary, write_prefix, Axis, BitMap, CellSet, Gen, Space};
use crate::error::{Error, Result};
use crate::graphing::{embed_dialect, execute, measure, omega_carrier, omega_conjugate, shift, Graphing, NormalForm};
use crate::scalar::{Ext, Quantifier, Rational, Scalar};
use crate::thick::Lift;

#[derive(Clone, Debug, PartialEq)]
pub struct Project<W = Rational> {
    pub wager: Ext<W>,
    pub carrier: CellSet,
    pub slices: Vec<(W, Graphing<W>)>,
}

/// Grade returned by [`Project::success`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Success {
    No,
    /// Wager zero and every slice a disjoint union of transpositions, but
    /// not balanced.
    Weak,
    Strict,
}

impl std::fmt::Display for Success {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Success::No => "no",
            Success::Weak => "weak",
            Success::Strict => "strict",
        })
    }
}

fn disjoint_bases(sets: &[&CellSet]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !a.is_disjoint(b) {
                return Err(Error::Carrier(format!("{a} and {b} overlap")));
            }
        }
    }
    Ok(())
}

/// Weight-1 edges with pairwise disjoint sources, each moving its source off
/// itself, and the whole family equal to its inverse almost everywhere.
pub fn is_transpositions<W: Scalar>(g: &Graphing<W>) -> Result<bool> {
    if g.edges.iter().any(|e| !e.weight.is_one()) || !g.is_deterministic() {
        return Ok(false);
    }
    for e in &g.edges {
        if e.src_dial == e.dst_dial && !e.source().is_disjoint(&e.target()) {
            return Ok(false);
        }
    }
    Ok(NormalForm::of(g)? == NormalForm::of(&g.inverse()?)?)
}

impl<W: Scalar> Project<W> {
    /// Single slice with coefficient 1 and wager 0.
    pub fn balanced(g: Graphing<W>) -> Self {
        Project { wager: Ext::zero(), carrier: g.carrier.clone(), slices: vec![(W::one(), g)] }
    }

    /// `0_V`: wager 0 and the empty graphing.
    pub fn zero(v: &CellSet) -> Self {
        Project::balanced(Graphing::new(v.clone(), 1))
    }

    /// `Dai_λ`: wager `λ` and the empty graphing.
    pub fn daemon(lambda: W, v: &CellSet) -> Self {
        Project { wager: Ext::Fin(lambda), ..Project::zero(v) }
    }

    /// The fax translating `v` by `k`, with its inverse.
    pub fn fax(v: &CellSet, k: i64) -> Result<Self> {
        let to = v.shift(k);
        disjoint_bases(&[v, &to])?;
        let g = Graphing::new(v.union(&to)?, 1)
            .edge("fax", W::one(), (0, 0), shift(v, k))
            .edge("fax~", W::one(), (0, 0), shift(&to, -k));
        Ok(Project::balanced(g))
    }

    /// Maps `2^δ` unit intervals onto the cells of the unit interval at
    /// `to` whose first `δ` digits spell the source index. Both directions
    /// carry weight `2^{-δ}`.
    pub fn inflating_fax(from: &[i64], to: i64) -> Result<Self> {
        let n = from.len() as u32;
        if !n.is_power_of_two() {
            return Err(Error::Precondition(format!("{n} source intervals is not a power of two")));
        }
        let src = CellSet::intervals(from.iter().copied());
        let dst = CellSet::intervals([to]);
        disjoint_bases(&[&src, &dst])?;
        let d = n.trailing_zeros();
        let w = W::from_ratio(1, 1 << d);
        let mut g = Graphing::new(src.union(&dst)?, 1);
        for (i, b) in from.iter().enumerate() {
            let m = BitMap::new(Space::Line, Space::Line, vec![write_prefix(*b, to, &binary(i as u32, d))?])?;
            let inv = m.inverse()?;
            g = g.edge(format!("inf{i}"), w.clone(), (0, 0), m).edge(format!("inf{i}~"), w.clone(), (0, 0), inv);
        }
        Ok(Project::balanced(g))
    }

    pub fn validate(&self) -> Result<()> {
        for (_, g) in &self.slices {
            g.validate()?;
            if g.carrier != self.carrier {
                return Err(Error::Carrier(format!("slice carrier {} differs from {}", g.carrier, self.carrier)));
            }
        }
        Ok(())
    }

    /// `1_A = Σ α_i`.
    pub fn unit(&self) -> W {
        self.slices.iter().fold(W::zero(), |a, (c, _)| a + c.clone())
    }

    pub fn wager_free(&self) -> bool {
        self.wager.is_zero()
    }

    pub fn is_balanced(&self) -> bool {
        self.wager_free() && self.slices.len() == 1 && self.slices[0].0.is_one()
    }

    pub fn success(&self) -> Result<Success> {
        if !self.wager_free() || self.slices.is_empty() {
            return Ok(Success::No);
        }
        for (c, g) in &self.slices {
            if *c <= W::zero() || !is_transpositions(g)? {
                return Ok(Success::No);
            }
        }
        Ok(if self.is_balanced() { Success::Strict } else { Success::Weak })
    }

    /// `a ↑ V`: same graphings on a larger carrier.
    pub fn extend(&self, v: &CellSet) -> Result<Self> {
        if !self.carrier.is_subset(v) {
            return Err(Error::Carrier(format!("{} does not contain {}", v, self.carrier)));
        }
        let slices = self.slices.iter().map(|(c, g)| (c.clone(), g.clone().with_carrier(v.clone()))).collect();
        Ok(Project { wager: self.wager.clone(), carrier: v.clone(), slices })
    }

    /// Formal sum: wagers add, slice lists concatenate.
    pub fn sum(&self, other: &Project<W>) -> Result<Self> {
        if self.carrier != other.carrier {
            return Err(Error::Carrier("sum of projects on different carriers".into()));
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        Ok(Project { wager: self.wager.clone() + other.wager.clone(), carrier: self.carrier.clone(), slices })
    }

    /// `λ·a`: wager and coefficients scaled.
    pub fn scale(&self, k: &W) -> Self {
        let slices = self.slices.iter().map(|(c, g)| (c.clone() * k.clone(), g.clone())).collect();
        Project { wager: self.wager.scale(k), carrier: self.carrier.clone(), slices }
    }

    /// Delocation by an integer translation.
    pub fn translate(&self, k: i64) -> Self {
        let slices = self.slices.iter().map(|(c, g)| (c.clone(), g.translate(k))).collect();
        Project { wager: self.wager.clone(), carrier: self.carrier.shift(k), slices }
    }

    /// `!a`: the dialect folded into the `[0,1)` factor.
    pub fn bang(&self) -> Result<Self> {
        if !self.is_balanced() {
            return Err(Error::Precondition("! needs a balanced project".into()));
        }
        let g = embed_dialect(&self.slices[0].1)?;
        let carrier = omega_carrier(&self.carrier)?;
        Ok(Project::balanced(g.with_carrier(carrier)))
    }
}

fn cross<W: Scalar>(a: &Project<W>, b: &Project<W>) -> Ext<W> {
    a.wager.scale(&b.unit()) + b.wager.scale(&a.unit())
}

/// `⟨a,b⟩ = a·1_B + b·1_A + Σ α_i β_j ⟦A_i,B_j⟧`.
pub fn pairing<W: Scalar>(a: &Project<W>, b: &Project<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Ext<W>> {
    if a.carrier != b.carrier {
        return Err(Error::Carrier(format!("pairing {} against {}", a.carrier, b.carrier)));
    }
    interaction(a, b, m, fuel)
}

fn interaction<W: Scalar>(a: &Project<W>, b: &Project<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Ext<W>> {
    let mut total = cross(a, b);
    for (x, ai) in &a.slices {
        for (y, bj) in &b.slices {
            let c = x.clone() * y.clone();
            if c.is_zero() {
                continue;
            }
            total = total + measure(ai, bj, m, fuel)?.scale(&c);
            if total.is_inf() {
                return Ok(total);
            }
        }
    }
    Ok(total)
}

pub fn orthogonal<W: Scalar>(a: &Project<W>, b: &Project<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<bool> {
    let v = pairing(a, b, m, fuel)?;
    Ok(!v.is_inf() && !v.is_zero())
}

/// `a ⊡ b`, on the symmetric difference of the carriers.
pub fn execute_project<W: Scalar>(a: &Project<W>, b: &Project<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Project<W>> {
    let carrier = a.carrier.union(&b.carrier)?.difference(&a.carrier.intersect(&b.carrier)?)?;
    let mut slices = Vec::new();
    for (x, ai) in &a.slices {
        for (y, bj) in &b.slices {
            let g = execute(ai, bj, fuel)?.with_carrier(carrier.clone());
            slices.push((x.clone() * y.clone(), g));
        }
    }
    Ok(Project { wager: interaction(a, b, m, fuel)?, carrier, slices })
}

/// `a ⊗ b` on disjoint carriers: slices are the pairwise unions over the
/// product dialect.
pub fn tensor<W: Scalar>(a: &Project<W>, b: &Project<W>) -> Result<Project<W>> {
    if !a.carrier.is_disjoint(&b.carrier) {
        return Err(Error::Carrier(format!("tensor of overlapping carriers {} and {}", a.carrier, b.carrier)));
    }
    let mut slices = Vec::new();
    for (x, ai) in &a.slices {
        for (y, bj) in &b.slices {
            let g = ai.lift(bj.dialect, Lift::Dagger).union(&bj.lift(ai.dialect, Lift::Ddagger))?;
            slices.push((x.clone() * y.clone(), g));
        }
    }
    Ok(Project { wager: cross(a, b), carrier: a.carrier.union(&b.carrier)?, slices })
}

/// `prom`: between `A` and `A + k_phi` the track swap, between `B` and
/// `B + k_psi` the track merge, both conjugated by the interleaving.
pub fn promotion_project<W: Scalar>(a: &[i64], k_phi: i64, b: &[i64], k_psi: i64) -> Result<Project<W>> {
    let va = CellSet::intervals(a.iter().copied());
    let vb = CellSet::intervals(b.iter().copied());
    let (pa, pb) = (va.shift(k_phi), vb.shift(k_psi));
    disjoint_bases(&[&va, &vb, &pa, &pb])?;
    let t = omega_conjugate(a, k_phi, &[Gen::TauHat(Axis::Y)])?;
    let p = omega_conjugate(b, k_psi, &[Gen::ThetaHat(Axis::Y)])?;
    let carrier = va.union(&vb)?.union(&pa)?.union(&pb)?;
    let mut g = Graphing::new(carrier, 1);
    for (id, map) in [("T", t), ("P", p)] {
        let inv = map.inverse()?;
        g = g.edge(id, W::one(), (0, 0), map).edge(format!("{id}~"), W::one(), (0, 0), inv);
    }
    Ok(Project::balanced(g))
}

/// Unit interval `b` sent to unit interval `c` for every pair `(b, c)`.
pub fn relocation(pairs: &[(i64, i64)]) -> Result<BitMap> {
    let mut brs = Vec::new();
    for &(b, c) in pairs {
        brs.extend(shift(&CellSet::intervals([b]), c - b).branches);
    }
    BitMap::new(Space::Line, Space::Line, brs)
}

/// `Ctr^φ_ψ` on unit intervals: `φ = x + k_phi` stays in slice 0, `ψ = x +
/// k_psi` connects slice 1 of `V^A` with slice 0 of its image.
pub fn contraction_project<W: Scalar>(a: &[i64], k_phi: i64, k_psi: i64) -> Result<Project<W>> {
    let w1: Vec<i64> = a.iter().map(|b| b + k_phi).collect();
    let w2: Vec<i64> = a.iter().map(|b| b + k_psi).collect();
    contraction_project_on(a, &w1, &w2)
}

/// `Ctr^φ_ψ` with `φ` and `ψ` given interval by interval: `v[i]` is sent to
/// `w1[i]` and to `w2[i]`.
pub fn contraction_project_on<W: Scalar>(v: &[i64], w1: &[i64], w2: &[i64]) -> Result<Project<W>> {
    if v.len() != w1.len() || v.len() != w2.len() {
        return Err(Error::Precondition("contraction needs one image per interval".into()));
    }
    let sets = [v, w1, w2].map(|b| CellSet::intervals(b.iter().copied()));
    disjoint_bases(&[&sets[0], &sets[1], &sets[2]])?;
    let pairs = |from: &[i64], to: &[i64]| -> Vec<(i64, i64)> { from.iter().copied().zip(to.iter().copied()).collect() };
    let one = W::one();
    let g = Graphing::new(sets[0].union(&sets[1])?.union(&sets[2])?, 2)
        .edge("phi", one.clone(), (0, 0), relocation(&pairs(w1, v))?)
        .edge("phi~", one.clone(), (0, 0), relocation(&pairs(v, w1))?)
        .edge("psi", one.clone(), (0, 1), relocation(&pairs(w2, v))?)
        .edge("psi~", one, (1, 0), relocation(&pairs(v, w2))?);
    Ok(Project::balanced(g))
}

/// Finite stand-in for a conduct: generators and the tests they pass.
#[derive(Clone, Debug, PartialEq)]
pub struct TestBundle<W = Rational> {
    pub generators: Vec<Project<W>>,
    pub tests: Vec<Project<W>>,
}

impl<W: Scalar> TestBundle<W> {
    /// Every generator orthogonal to every test.
    pub fn validate(&self, m: &dyn Quantifier<W>, fuel: usize) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            for (j, t) in self.tests.iter().enumerate() {
                if !orthogonal(g, t, m, fuel)? {
                    return Err(Error::Precondition(format!("generator {i} is not orthogonal to test {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn translate(&self, k: i64) -> Self {
        TestBundle {
            generators: self.generators.iter().map(|p| p.translate(k)).collect(),
            tests: self.tests.iter().map(|p| p.translate(k)).collect(),
        }
    }
}
