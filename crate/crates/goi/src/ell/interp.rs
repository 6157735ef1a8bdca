//! Proofs as projects, and the finite soundness harness.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::formula::{base, Formula, Loc};
use super::proof::{check, witness_sites, Derivation, Proof, Rule, Sequent};
use crate::dyadic::{Axis, BitMap, Branch, Cell, CellSet, PosMap, Space, Src};
use crate::error::{Error, Result};
use crate::graphing::Graphing;
use crate::project::{contraction_project_on, execute_project, pairing, promotion_project, tensor, Project, Success, TestBundle};
use crate::scalar::{Ext, Quantifier, Rational, Scalar};

/// A finite stand-in for the behavior of every variable name, on `[0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis<W = Rational> {
    pub bundles: BTreeMap<u32, TestBundle<W>>,
    /// Used for names absent from `bundles`.
    pub fallback: Option<TestBundle<W>>,
}

impl<W: Scalar> Basis<W> {
    /// [`standard_bundle`] for every name.
    pub fn standard() -> Self {
        Basis { bundles: BTreeMap::new(), fallback: Some(standard_bundle()) }
    }

    pub fn get(&self, name: u32) -> Result<&TestBundle<W>> {
        self.bundles
            .get(&name)
            .or(self.fallback.as_ref())
            .ok_or_else(|| Error::Precondition(format!("the basis has no bundle for X{name}")))
    }
}

/// Rewrites digit `p` from `from` to its complement on the unit interval
/// at `base`.
pub fn flip(base: i64, p: u32, from: bool) -> Result<BitMap> {
    flip_on(base, &[(p, from)], p)
}

/// Complements digit `p` on the cell of the unit interval at `base` fixed
/// by `guard`, which must fix `p`.
pub fn flip_on(base: i64, guard: &[(u32, bool)], p: u32) -> Result<BitMap> {
    let mut cell = Cell::line(base);
    for &(q, b) in guard {
        cell = cell.with(Axis::X, q, b);
    }
    let from = *cell.bits.get(&(Axis::X, p)).ok_or_else(|| Error::Precondition(format!("digit {p} is not fixed by the guard")))?;
    let out = PosMap::from_fn(p, 1, |q| if q == p { Src::Const(!from) } else { Src::In(Axis::X, q) })?;
    BitMap::new(Space::Line, Space::Line, vec![Branch::new(cell, base, vec![out])?])
}

/// Guard, flipped digit, and weight as numerator and denominator.
type FlipEdge<'a> = (&'a [(u32, bool)], u32, i64, i64);

/// Two deterministic wager-free generators and two tests on `[0,1)`,
/// every pair with a finite nonzero pairing under [`crate::Odds`].
pub fn standard_bundle<W: Scalar>() -> TestBundle<W> {
    let unit = CellSet::intervals([0]);
    let g = |edges: &[FlipEdge]| {
        let mut g = Graphing::new(unit.clone(), 1);
        for (n, &(guard, p, a, b)) in edges.iter().enumerate() {
            g = g.edge(format!("e{n}"), W::from_ratio(a, b), (0, 0), flip_on(0, guard, p).expect("digit flip"));
        }
        Project::balanced(g)
    };
    TestBundle {
        generators: vec![g(&[(&[(1, false)], 1, 1, 2)]), g(&[(&[(1, false)], 1, 1, 3), (&[(1, true), (2, false)], 2, 1, 2)])],
        tests: vec![g(&[(&[(1, true)], 1, 1, 1)]), g(&[(&[(1, true), (2, false)], 1, 1, 2), (&[(1, true), (2, true)], 2, 1, 2)])],
    }
}

fn names(d: &Derivation, out: &mut BTreeSet<u32>) {
    for f in d.seq.formulas() {
        out.extend(f.literals().iter().map(|l| l.name));
    }
    for p in &d.premises {
        names(p, out);
    }
}

/// The project of a checked, localized proof, on the location of its
/// conclusion.
pub fn interpret<W: Scalar>(d: &Derivation, basis: &Basis<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Project<W>> {
    let mut ns = BTreeSet::new();
    names(d, &mut ns);
    for n in ns {
        basis.get(n)?;
    }
    interp(d, m, fuel)
}

fn zero<W: Scalar>(f: &Formula) -> Result<Project<W>> {
    Ok(Project::zero(&f.location()?))
}

fn located(l: Loc) -> Result<i64> {
    match l {
        Loc::At(j) => Ok(j),
        Loc::Occ(_) => Err(Error::Precondition("interpretation needs a localized proof".into())),
    }
}

fn interp<W: Scalar>(d: &Derivation, m: &dyn Quantifier<W>, fuel: usize) -> Result<Project<W>> {
    let sub = |i: usize| interp(&d.premises[i], m, fuel);
    let prem = |i: usize| &d.premises[i].seq;
    match &d.rule {
        Rule::Ax { name, locs } => {
            let (a, b) = (base(*name, located(locs[0])?)?, base(*name, located(locs[1])?)?);
            Project::fax(&CellSet::intervals([a]), b - a)
        }
        Rule::Cut { .. } | Rule::CutPol { .. } => execute_project(&sub(0)?, &sub(1)?, m, fuel),
        Rule::Tensor { .. } | Rule::TensorR | Rule::ParL { .. } | Rule::TensorMix { .. } => tensor(&sub(0)?, &sub(1)?),
        Rule::Par { .. } | Rule::TensorL { .. } | Rule::ParR { .. } | Rule::ParMix { .. } | Rule::OneL | Rule::Forall { .. } => sub(0),
        Rule::OneR => Ok(Project::zero(&CellSet::empty(Space::Line))),
        Rule::Top { .. } => Ok(Project::zero(&d.seq.location()?)),
        Rule::Weak { f } => tensor(&sub(0)?, &zero(f)?),
        Rule::Plus { other, .. } => tensor(&sub(0)?, &zero(other)?),
        Rule::With { .. } => {
            let (b1, b2) = match d.seq.gamma.last() {
                Some(Formula::With(x, y)) => (x, y),
                _ => return Err(Error::Precondition("& conclusion lost its principal formula".into())),
            };
            tensor(&sub(0)?, &zero(b2)?)?.sum(&tensor(&sub(1)?, &zero(b1)?)?)
        }
        Rule::Exists { k, f } => {
            let (x, c) = match f {
                Formula::Exists(x, c) => (*x, c),
                _ => return Err(Error::Precondition("∃ without an existential".into())),
            };
            let p = &prem(0).gamma[*k];
            let mut faxes: Project<W> = Project::zero(&CellSet::empty(Space::Line));
            for (w, name, loc) in witness_sites(c, x, p) {
                let to = base(name, located(loc)?)?;
                let from = w.bases()?;
                if from == [to] {
                    continue;
                }
                faxes = tensor(&faxes, &Project::inflating_fax(&from, to)?)?;
            }
            execute_project(&sub(0)?, &faxes, m, fuel)
        }
        Rule::Oc { k } => {
            let s = prem(0);
            let mut regions = Vec::new();
            for f in s.delta.iter().chain(s.gamma.iter().enumerate().filter(|(i, _)| i != k).map(|(_, f)| f)) {
                regions.push(f.bases()?);
            }
            regions.push(s.gamma[*k].bases()?);
            promote(&sub(0)?, &regions, m, fuel)
        }
        Rule::OcPol => {
            let s = prem(0);
            let regions = s.formulas().map(|f| f.bases()).collect::<Result<Vec<_>>>()?;
            promote(&sub(0)?, &regions, m, fuel)
        }
        Rule::Ctr { left, right, .. } => {
            let s = prem(0);
            let target = d.seq.delta.last().ok_or_else(|| Error::Precondition("ctr conclusion lost its formula".into()))?;
            let ctr = contraction_project_on(&target.bases()?, &s.delta[*left].bases()?, &s.delta[*right].bases()?)?;
            execute_project(&ctr, &sub(0)?, m, fuel)
        }
    }
}

fn fax_or_zero<W: Scalar>(bases: &[i64], k: i64) -> Result<Project<W>> {
    let v = CellSet::intervals(bases.iter().copied());
    if bases.is_empty() {
        Ok(Project::zero(&v))
    } else {
        Project::fax(&v, k)
    }
}

/// `!p` followed by one functorial promotion per formula but the last:
/// the `t`-th turns region `t` into an input against the remaining ones.
/// Each promotion is executed against a delocated copy and moved back by
/// faxes.
fn promote<W: Scalar>(p: &Project<W>, regions: &[Vec<i64>], m: &dyn Quantifier<W>, fuel: usize) -> Result<Project<W>> {
    let mut q = p.bang()?;
    let all: Vec<i64> = regions.concat();
    let (lo, hi) = match (all.iter().min(), all.iter().max()) {
        (Some(lo), Some(hi)) => (*lo, *hi + 1),
        _ => return Ok(q),
    };
    let k = hi - lo;
    for t in 0..regions.len().saturating_sub(1) {
        let a = &regions[t];
        let b: Vec<i64> = regions[t + 1..].concat();
        let prom = promotion_project::<W>(a, k, &b, 2 * k)?;
        let moved = execute_project(&prom, &q, m, fuel)?;
        let pa: Vec<i64> = a.iter().map(|x| x + k).collect();
        let pb: Vec<i64> = b.iter().map(|x| x + 2 * k).collect();
        let back = tensor(&fax_or_zero(&pa, -k)?, &fax_or_zero(&pb, -2 * k)?)?;
        q = execute_project(&moved, &back, m, fuel)?;
    }
    Ok(q)
}

/// Test projects on the location of `seq`: for every variable occurrence a
/// member of the dual of its behavior (promoted under an exponential),
/// combined by tensor. At most `cap` combinations, in mixed-radix order.
/// Empty when the dual of the sequent involves `0`, which has no members.
pub fn battery<W: Scalar>(seq: &Sequent, basis: &Basis<W>, cap: usize) -> Result<Vec<Project<W>>> {
    if seq.delta.iter().any(|f| f.mentions(&Formula::Zero)) || seq.gamma.iter().chain(seq.theta.iter()).any(|f| f.mentions(&Formula::Top)) {
        return Ok(Vec::new());
    }
    let mut slots: Vec<Vec<Project<W>>> = Vec::new();
    let sides = seq.delta.iter().map(|f| (f, true)).chain(seq.gamma.iter().chain(seq.theta.iter()).map(|f| (f, false)));
    for (f, left) in sides {
        for l in f.literals() {
            let bundle = basis.get(l.name)?;
            let pool = if l.neg != left { &bundle.generators } else { &bundle.tests };
            let at = base(l.name, located(l.loc)?)?;
            let mut cands = Vec::new();
            for p in pool {
                let p = p.translate(at);
                cands.push(if l.exponential && p.is_balanced() { p.bang()? } else { p });
            }
            if cands.is_empty() {
                return Err(Error::Precondition(format!("empty bundle for X{}", l.name)));
            }
            slots.push(cands);
        }
    }
    let total = slots.iter().fold(1usize, |n, s| n.saturating_mul(s.len()));
    let mut out = Vec::new();
    for c in 0..total.min(cap.max(1)) {
        let mut t = Project::zero(&CellSet::empty(Space::Line));
        let mut r = c;
        for s in &slots {
            t = tensor(&t, &s[r % s.len()])?;
            r /= s.len();
        }
        out.push(t);
    }
    Ok(out)
}

/// Strictly successful projects on a union of unit intervals: digit flips
/// at positions 1 and 2 of every interval.
pub fn opponents<W: Scalar>(carrier: &CellSet) -> Result<Vec<Project<W>>> {
    let bases = carrier.bases();
    if bases.is_empty() {
        return Ok(vec![Project::zero(carrier)]);
    }
    let mut out = Vec::new();
    for p in [1, 2] {
        let mut g = Graphing::new(carrier.clone(), 1);
        for b in &bases {
            g = g.edge(format!("f{b}"), W::one(), (0, 0), flip(*b, p, false)?).edge(format!("f{b}~"), W::one(), (0, 0), flip(*b, p, true)?);
        }
        out.push(Project::balanced(g));
    }
    Ok(out)
}

/// Outcome of [`verify_soundness`].
#[derive(Clone, Debug, PartialEq)]
pub struct Report<W = Rational> {
    pub conclusion: String,
    pub rules: Vec<String>,
    pub success: Success,
    /// The proof uses `&`, whose interpretation is a sum of slices and can
    /// only be weakly successful.
    pub additive: bool,
    pub pairings: Vec<Ext<W>>,
    pub consistency: Vec<Ext<W>>,
}

impl<W: Scalar> Report<W> {
    /// Successful, and orthogonal to every test of the battery.
    pub fn sound(&self) -> bool {
        let graded = self.success == Success::Strict || (self.additive && self.success == Success::Weak);
        graded && self.pairings.iter().all(|v| !v.is_zero() && !v.is_inf())
    }

    /// Every pairing with a successful opponent is 0 or ∞.
    pub fn consistent(&self) -> bool {
        self.consistency.iter().all(|v| v.is_zero() || v.is_inf())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conclusion": self.conclusion,
            "rules": self.rules,
            "success": self.success.to_string(),
            "additive": self.additive,
            "sound": self.sound(),
            "pairings": self.pairings.iter().map(|v| v.to_text()).collect::<Vec<_>>(),
            "consistency": self.consistency.iter().map(|v| v.to_text()).collect::<Vec<_>>(),
        })
    }
}

pub const BATTERY_CAP: usize = 16;

fn rejected(diags: Vec<super::Diagnostic>) -> Error {
    Error::Proof(diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))
}

/// Checks, interprets, grades success, and pairs the interpretation with
/// the battery of its conclusion and with the opponents on its carrier.
pub fn verify_soundness<W: Scalar>(p: &Proof, basis: &Basis<W>, m: &dyn Quantifier<W>, fuel: usize) -> Result<Report<W>> {
    let d = check(p).map_err(rejected)?;
    let a = interpret(&d, basis, m, fuel)?;
    let mut pairings = Vec::new();
    for t in battery(&d.seq, basis, BATTERY_CAP)? {
        pairings.push(pairing(&a, &t, m, fuel)?);
    }
    let mut consistency = Vec::new();
    let mut opp = opponents(&a.carrier)?;
    if a.success()? == Success::Strict {
        opp.push(a.clone());
    }
    for o in opp {
        consistency.push(pairing(&a, &o, m, fuel)?);
    }
    let mut rules: Vec<String> = p.rules().iter().map(|s| s.to_string()).collect();
    rules.sort();
    rules.dedup();
    Ok(Report {
        conclusion: d.seq.to_string(),
        additive: rules.iter().any(|r| r == "&"),
        rules,
        success: a.success()?,
        pairings,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ell::proof::parse_proof;
    use crate::scalar::{rat, Odds};

    fn run(src: &str) -> (Derivation, Project) {
        let d = check(&parse_proof(src).unwrap()).unwrap();
        let a = interpret(&d, &Basis::standard(), &Odds, 1000).unwrap();
        (d, a)
    }

    #[test]
    fn standard_bundle_is_orthogonal() {
        standard_bundle::<Rational>().validate(&Odds, crate::graphing::DEFAULT_FUEL).unwrap();
    }

    #[test]
    fn axiom_is_a_fax() {
        let (d, a) = run("(ax 0 0 1)");
        assert_eq!(d.seq.to_string(), "⊢ X0(0)^⊥, X0(1);");
        assert_eq!(a, Project::fax(&CellSet::intervals([1]), 2).unwrap());
        assert_eq!(a.success().unwrap(), Success::Strict);
    }

    #[test]
    fn cut_of_two_axioms_composes_the_translations() {
        let (_, a) = run("(cut 1 0 (ax 0 0 1) (ax 0 1 2))");
        assert_eq!(a.carrier, CellSet::intervals([1, 5]));
        let g = &a.slices[0].1;
        assert_eq!(g.edges.len(), 2);
        let e = g.edges.iter().find(|e| e.source() == CellSet::intervals([1])).unwrap();
        assert_eq!(e.target(), CellSet::intervals([5]));
        assert_eq!(a.wager, Ext::zero());
    }

    #[test]
    fn bang_of_an_axiom_is_strict() {
        let (d, a) = run("(oc 1 (ax 0))");
        assert_eq!(d.seq.to_string(), "!X0(0) ⊢ ; !X0(1)");
        assert!(a.is_balanced());
        assert_eq!(a.success().unwrap(), Success::Strict);
    }

    #[test]
    fn opponents_are_strict() {
        for o in opponents::<Rational>(&CellSet::intervals([1, 3, 6])).unwrap() {
            assert_eq!(o.success().unwrap(), Success::Strict);
        }
        let _ = rat(1, 1);
    }
}
