//! Proof trees, their rule schemas and localization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use lexpr::datum::Ref;

use super::formula::{at, formula_from, int, items, name, Formula, Kind, Loc};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `⊢ X_i(j)^⊥, X_i(j')`.
    Ax { name: u32, locs: [Loc; 2] },
    Cut { left: usize, right: usize },
    CutPol { k: usize },
    Tensor { left: usize, right: usize },
    Par { left: usize, right: usize },
    TensorL { left: usize, right: usize },
    TensorR,
    ParR { k: usize },
    ParL { k: usize },
    ParMix { neg: usize, pos: usize },
    TensorMix { k: usize },
    OneR,
    OneL,
    /// `⊕_1` when `first`, with `other` the formula added on the other side.
    Plus { first: bool, k: usize, other: Formula },
    With { left: usize, right: usize },
    Top { delta: Vec<Formula>, gamma: Vec<Formula>, theta: Option<Formula> },
    Oc { k: usize },
    OcPol,
    Ctr { left: usize, right: usize, target: Option<Formula> },
    Weak { f: Formula },
    Forall { k: usize, name: u32 },
    Exists { k: usize, f: Formula },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Ax { .. } => "ax",
            Rule::Cut { .. } => "cut",
            Rule::CutPol { .. } => "cut_pol",
            Rule::Tensor { .. } => "⊗",
            Rule::Par { .. } => "⅋",
            Rule::TensorL { .. } => "⊗pol_g",
            Rule::TensorR => "⊗pol_d",
            Rule::ParR { .. } => "⅋pol_d",
            Rule::ParL { .. } => "⅋pol_g",
            Rule::ParMix { .. } => "⅋mix",
            Rule::TensorMix { .. } => "⊗mix",
            Rule::OneR => "1_d",
            Rule::OneL => "1_g",
            Rule::Plus { first: true, .. } => "⊕1",
            Rule::Plus { first: false, .. } => "⊕2",
            Rule::With { .. } => "&",
            Rule::Top { .. } => "⊤",
            Rule::Oc { .. } => "!",
            Rule::OcPol => "!pol",
            Rule::Ctr { .. } => "ctr",
            Rule::Weak { .. } => "weak",
            Rule::Forall { .. } => "∀",
            Rule::Exists { .. } => "∃",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Rule::Ax { .. } | Rule::OneR | Rule::Top { .. } => 0,
            Rule::Cut { .. } | Rule::CutPol { .. } | Rule::Tensor { .. } | Rule::TensorR | Rule::ParL { .. } | Rule::TensorMix { .. } | Rule::With { .. } => 2,
            _ => 1,
        }
    }

    fn formulas_mut(&mut self) -> Vec<&mut Formula> {
        match self {
            Rule::Plus { other, .. } => vec![other],
            Rule::Top { delta, gamma, theta } => delta.iter_mut().chain(gamma.iter_mut()).chain(theta.iter_mut()).collect(),
            Rule::Ctr { target, .. } => target.iter_mut().collect(),
            Rule::Weak { f } | Rule::Exists { f, .. } => vec![f],
            _ => vec![],
        }
    }

    fn formulas(&self) -> Vec<&Formula> {
        match self {
            Rule::Plus { other, .. } => vec![other],
            Rule::Top { delta, gamma, theta } => delta.iter().chain(gamma.iter()).chain(theta.iter()).collect(),
            Rule::Ctr { target, .. } => target.iter().collect(),
            Rule::Weak { f } | Rule::Exists { f, .. } => vec![f],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub rule: Rule,
    pub premises: Vec<Proof>,
    /// `line:column` of the node in its source, when parsed.
    pub pos: Option<String>,
}

impl Proof {
    pub fn new(rule: Rule, premises: Vec<Proof>) -> Proof {
        Proof { rule, premises, pos: None }
    }

    /// Every rule tag used, with multiplicity.
    pub fn rules(&self) -> Vec<&'static str> {
        let mut out = vec![self.rule.tag()];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn has_cut(&self) -> bool {
        self.rules().iter().any(|t| *t == "cut" || *t == "cut_pol")
    }

    fn locs(&self, out: &mut Vec<(u32, Loc)>) {
        if let Rule::Ax { name, locs } = &self.rule {
            out.push((*name, locs[0]));
            out.push((*name, locs[1]));
        }
        for f in self.rule.formulas() {
            out.extend(f.literals().into_iter().map(|l| (l.name, l.loc)));
        }
        for p in &self.premises {
            p.locs(out);
        }
    }

    pub fn map_locs(&self, f: &mut dyn FnMut(u32, Loc) -> Loc) -> Proof {
        let mut rule = self.rule.clone();
        if let Rule::Ax { name, locs } = &mut rule {
            *locs = [f(*name, locs[0]), f(*name, locs[1])];
        }
        for g in rule.formulas_mut() {
            *g = g.map_locs(f);
        }
        Proof { rule, premises: self.premises.iter().map(|p| p.map_locs(f)).collect(), pos: self.pos.clone() }
    }

    pub fn is_localized(&self) -> bool {
        let mut v = Vec::new();
        self.locs(&mut v);
        v.iter().all(|(_, l)| matches!(l, Loc::At(_)))
    }

    pub fn to_sexp(&self) -> String {
        let fs = |v: &[Formula]| v.iter().map(|f| format!(" {}", f.to_sexp())).collect::<String>();
        let head = match &self.rule {
            Rule::Ax { name, locs } => match locs {
                [Loc::At(a), Loc::At(b)] => format!("ax {name} {a} {b}"),
                _ => format!("ax {name}"),
            },
            Rule::Cut { left, right } => format!("cut {left} {right}"),
            Rule::CutPol { k } => format!("cut-pol {k}"),
            Rule::Tensor { left, right } => format!("tensor {left} {right}"),
            Rule::Par { left, right } => format!("par {left} {right}"),
            Rule::TensorL { left, right } => format!("tensor-l {left} {right}"),
            Rule::TensorR => "tensor-r".into(),
            Rule::ParR { k } => format!("par-r {k}"),
            Rule::ParL { k } => format!("par-l {k}"),
            Rule::ParMix { neg, pos } => format!("par-mix {neg} {pos}"),
            Rule::TensorMix { k } => format!("tensor-mix {k}"),
            Rule::OneR => "one-r".into(),
            Rule::OneL => "one-l".into(),
            Rule::Plus { first, k, other } => format!("plus{} {k} {}", if *first { 1 } else { 2 }, other.to_sexp()),
            Rule::With { left, right } => format!("with {left} {right}"),
            Rule::Top { delta, gamma, theta } => {
                let th = theta.as_ref().map(|t| format!(" {}", t.to_sexp())).unwrap_or_default();
                format!("top (delta{}) (gamma{}) (theta{th})", fs(delta), fs(gamma))
            }
            Rule::Oc { k } => format!("oc {k}"),
            Rule::OcPol => "oc-pol".into(),
            Rule::Ctr { left, right, target } => match target {
                Some(t) => format!("ctr {left} {right} {}", t.to_sexp()),
                None => format!("ctr {left} {right}"),
            },
            Rule::Weak { f } => format!("weak {}", f.to_sexp()),
            Rule::Forall { k, name } => format!("forall {k} {name}"),
            Rule::Exists { k, f } => format!("exists {k} {}", f.to_sexp()),
        };
        let subs: String = self.premises.iter().map(|p| format!(" {}", p.to_sexp())).collect();
        format!("({head}{subs})")
    }
}

fn index(r: &Ref<'_>) -> Result<usize> {
    usize::try_from(int(r)?).map_err(|_| Error::Parse(format!("{}: formula indices are nonnegative", at(r))))
}

fn proof_from(r: &Ref<'_>, fresh: &mut usize) -> Result<Proof> {
    let (tag, args) = items(r)?;
    let pos = at(r);
    let bad = |what: &str| Error::Parse(format!("{pos}: {tag} {what}"));
    // leading parameters, then the premises
    let (rule, rest): (Rule, &[Ref<'_>]) = match tag.as_str() {
        "ax" => match args.len() {
            1 => {
                let n = name(&args[0])?;
                *fresh += 2;
                (Rule::Ax { name: n, locs: [Loc::Occ(*fresh - 2), Loc::Occ(*fresh - 1)] }, &[])
            }
            3 => (Rule::Ax { name: name(&args[0])?, locs: [Loc::At(int(&args[1])?), Loc::At(int(&args[2])?)] }, &[]),
            _ => return Err(bad("takes a name, and optionally two indices")),
        },
        "one-r" => (Rule::OneR, &args[..]),
        "tensor-r" => (Rule::TensorR, &args[..]),
        "one-l" => (Rule::OneL, &args[..]),
        "oc-pol" => (Rule::OcPol, &args[..]),
        "cut-pol" | "par-r" | "par-l" | "tensor-mix" | "oc" => {
            let k = index(args.first().ok_or_else(|| bad("needs an index"))?)?;
            let rule = match tag.as_str() {
                "cut-pol" => Rule::CutPol { k },
                "par-r" => Rule::ParR { k },
                "par-l" => Rule::ParL { k },
                "tensor-mix" => Rule::TensorMix { k },
                _ => Rule::Oc { k },
            };
            (rule, &args[1..])
        }
        "cut" | "tensor" | "par" | "tensor-l" | "par-mix" | "with" | "ctr" => {
            if args.len() < 2 {
                return Err(bad("needs two indices"));
            }
            let (left, right) = (index(&args[0])?, index(&args[1])?);
            match tag.as_str() {
                "cut" => (Rule::Cut { left, right }, &args[2..]),
                "tensor" => (Rule::Tensor { left, right }, &args[2..]),
                "par" => (Rule::Par { left, right }, &args[2..]),
                "tensor-l" => (Rule::TensorL { left, right }, &args[2..]),
                "par-mix" => (Rule::ParMix { neg: left, pos: right }, &args[2..]),
                "with" => (Rule::With { left, right }, &args[2..]),
                _ => {
                    // an optional conclusion formula precedes the premise
                    if args.len() == 4 {
                        (Rule::Ctr { left, right, target: Some(formula_from(&args[2], fresh)?) }, &args[3..])
                    } else {
                        (Rule::Ctr { left, right, target: None }, &args[2..])
                    }
                }
            }
        }
        "plus1" | "plus2" | "exists" => {
            if args.len() < 2 {
                return Err(bad("needs an index and a formula"));
            }
            let k = index(&args[0])?;
            let f = formula_from(&args[1], fresh)?;
            match tag.as_str() {
                "exists" => (Rule::Exists { k, f }, &args[2..]),
                t => (Rule::Plus { first: t == "plus1", k, other: f }, &args[2..]),
            }
        }
        "forall" => {
            if args.len() < 2 {
                return Err(bad("needs an index and a variable name"));
            }
            (Rule::Forall { k: index(&args[0])?, name: name(&args[1])? }, &args[2..])
        }
        "weak" => {
            let f = formula_from(args.first().ok_or_else(|| bad("needs a formula"))?, fresh)?;
            (Rule::Weak { f }, &args[1..])
        }
        "top" => {
            let mut ctx: BTreeMap<String, Vec<Formula>> = BTreeMap::new();
            for a in &args {
                let (part, fs) = items(a)?;
                if !["delta", "gamma", "theta"].contains(&part.as_str()) {
                    return Err(Error::Parse(format!("{}: expected delta, gamma or theta", at(a))));
                }
                let parsed = fs.iter().map(|f| formula_from(f, fresh)).collect::<Result<Vec<_>>>()?;
                ctx.insert(part, parsed);
            }
            let theta = ctx.remove("theta").unwrap_or_default();
            if theta.len() > 1 {
                return Err(bad("has at most one formula in theta"));
            }
            let rule = Rule::Top {
                delta: ctx.remove("delta").unwrap_or_default(),
                gamma: ctx.remove("gamma").unwrap_or_default(),
                theta: theta.into_iter().next(),
            };
            (rule, &[])
        }
        _ => return Err(Error::Parse(format!("{pos}: unknown rule {tag}"))),
    };
    if rest.len() != rule.arity() {
        return Err(Error::Parse(format!("{pos}: {tag} takes {} premise(s), found {}", rule.arity(), rest.len())));
    }
    let premises = rest.iter().map(|p| proof_from(p, fresh)).collect::<Result<Vec<_>>>()?;
    Ok(Proof { rule, premises, pos: Some(pos) })
}

/// Reads a proof. Variables and axioms written without indices receive
/// placeholders, resolved by [`localize`].
pub fn parse_proof(text: &str) -> Result<Proof> {
    let d = lexpr::datum::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    proof_from(&d.as_ref(), &mut 0)
}

/// `Δ ⊢ Γ; Θ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Sequent {
    pub delta: Vec<Formula>,
    pub gamma: Vec<Formula>,
    pub theta: Option<Formula>,
}

impl Sequent {
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.delta.iter().chain(self.gamma.iter()).chain(self.theta.iter())
    }

    pub fn len(&self) -> usize {
        self.formulas().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bases(&self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        for f in self.formulas() {
            out.extend(f.bases()?);
        }
        Ok(out)
    }

    pub fn location(&self) -> Result<crate::dyadic::CellSet> {
        Ok(crate::dyadic::CellSet::intervals(self.bases()?))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Formula]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if !self.delta.is_empty() {
            write!(f, "{} ", list(&self.delta))?;
        }
        write!(f, "⊢ {};", list(&self.gamma))?;
        if let Some(t) = &self.theta {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// Node address: `root`, then child indices.
    pub path: String,
    pub pos: Option<String>,
    pub rule: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.pos {
            write!(f, "{p}: ")?;
        }
        write!(f, "{}: rule \"{}\": {}", self.path, self.rule, self.message)
    }
}

/// A checked proof: every node carries its conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub seq: Sequent,
    pub premises: Vec<Derivation>,
    pub path: String,
}

impl Derivation {
    pub fn proof(&self) -> Proof {
        Proof::new(self.rule.clone(), self.premises.iter().map(|d| d.proof()).collect())
    }

    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }
}

/// How formulas are compared while instantiating schemas.
trait Matcher {
    fn same(&mut self, a: &Formula, b: &Formula) -> bool;
    /// A copy with new placeholders, when placeholders are allowed.
    fn fresh(&mut self, f: &Formula) -> Option<Formula>;
    /// Locations must be resolved and pairwise disjoint.
    fn located(&self) -> bool;
}

struct Exact;

impl Matcher for Exact {
    fn same(&mut self, a: &Formula, b: &Formula) -> bool {
        a == b
    }
    fn fresh(&mut self, _: &Formula) -> Option<Formula> {
        None
    }
    fn located(&self) -> bool {
        true
    }
}

/// Union-find over locations: schemas that identify two formulas merge
/// the locations of their variables.
struct Unifier {
    parent: BTreeMap<Loc, Loc>,
    next: usize,
}

impl Unifier {
    fn find(&mut self, l: Loc) -> Loc {
        let p = *self.parent.get(&l).unwrap_or(&l);
        if p == l {
            return l;
        }
        let r = self.find(p);
        self.parent.insert(l, r);
        r
    }

    fn union(&mut self, a: Loc, b: Loc) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return true;
        }
        let (root, child) = match (ra, rb) {
            (Loc::At(_), Loc::At(_)) => return false,
            (Loc::At(_), _) => (ra, rb),
            (_, Loc::At(_)) => (rb, ra),
            _ => (ra.min(rb), ra.max(rb)),
        };
        self.parent.insert(child, root);
        true
    }

    fn unify(&mut self, a: &Formula, b: &Formula) -> bool {
        use Formula::*;
        match (a, b) {
            (Var { name: x, loc: l, neg: p }, Var { name: y, loc: m, neg: q }) => x == y && p == q && self.union(*l, *m),
            (Zero, Zero) | (Top, Top) | (One, One) | (Bot, Bot) => true,
            (Tensor(a, c), Tensor(x, y)) | (Par(a, c), Par(x, y)) | (Plus(a, c), Plus(x, y)) | (With(a, c), With(x, y)) => {
                self.unify(a, x) && self.unify(c, y)
            }
            (Oc(a), Oc(x)) | (Wn(a), Wn(x)) => self.unify(a, x),
            (Forall(v, a), Forall(w, x)) | (Exists(v, a), Exists(w, x)) => v == w && self.unify(a, x),
            _ => false,
        }
    }
}

impl Matcher for Unifier {
    fn same(&mut self, a: &Formula, b: &Formula) -> bool {
        self.unify(a, b)
    }
    fn fresh(&mut self, f: &Formula) -> Option<Formula> {
        Some(f.map_locs(&mut |_, _| {
            self.next += 1;
            Loc::Occ(self.next - 1)
        }))
    }
    fn located(&self) -> bool {
        false
    }
}

struct Ctx<'a> {
    m: &'a mut dyn Matcher,
    diags: Vec<Diagnostic>,
}

fn pick(v: &[Formula], k: usize) -> Option<(Formula, Vec<Formula>)> {
    if k >= v.len() {
        return None;
    }
    let mut rest = v.to_vec();
    let f = rest.remove(k);
    Some((f, rest))
}

fn pick2(v: &[Formula], i: usize, j: usize) -> Option<(Formula, Formula, Vec<Formula>)> {
    if i == j || i >= v.len() || j >= v.len() {
        return None;
    }
    let rest = v.iter().enumerate().filter(|(n, _)| *n != i && *n != j).map(|(_, f)| f.clone()).collect();
    Some((v[i].clone(), v[j].clone(), rest))
}

fn cat(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    a.iter().chain(b).cloned().collect()
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

/// Whether `p` is `c` with every free `X_x` replaced by one witness shape
/// (and `X_x^⊥` by its dual). Parts outside the substitution go through
/// the matcher.
fn instance(m: &mut dyn Matcher, c: &Formula, x: u32, p: &Formula, w: &mut Option<Formula>) -> bool {
    use Formula::*;
    match (c, p) {
        (Var { name, neg, .. }, _) if *name == x => {
            let found = if *neg { p.dual() } else { p.clone() };
            match w {
                Some(s) => s.same_shape(&found),
                None => {
                    let ok = found.kind().map(|k| k == Kind::B).unwrap_or(false);
                    *w = Some(found);
                    ok
                }
            }
        }
        (Forall(v, _), _) | (Exists(v, _), _) if *v == x => m.same(c, p),
        (Var { .. }, _) | (Zero, _) | (Top, _) | (One, _) | (Bot, _) => m.same(c, p),
        (Tensor(a, b), Tensor(y, z)) | (Par(a, b), Par(y, z)) | (Plus(a, b), Plus(y, z)) | (With(a, b), With(y, z)) => {
            instance(m, a, x, y, w) && instance(m, b, x, z, w)
        }
        (Oc(a), Oc(y)) | (Wn(a), Wn(y)) => instance(m, a, x, y, w),
        (Forall(v, a), Forall(u, y)) | (Exists(v, a), Exists(u, y)) => v == u && instance(m, a, x, y, w),
        _ => false,
    }
}

/// The subformulas of `p` standing for the free occurrences of `X_x` in
/// `c`, each with the location of that occurrence.
pub fn witness_sites(c: &Formula, x: u32, p: &Formula) -> Vec<(Formula, u32, Loc)> {
    use Formula::*;
    match (c, p) {
        (Var { name, loc, .. }, _) if *name == x => vec![(p.clone(), *name, *loc)],
        (Forall(v, _), _) | (Exists(v, _), _) if *v == x => vec![],
        (Tensor(a, b), Tensor(y, z)) | (Par(a, b), Par(y, z)) | (Plus(a, b), Plus(y, z)) | (With(a, b), With(y, z)) => {
            let mut out = witness_sites(a, x, y);
            out.extend(witness_sites(b, x, z));
            out
        }
        (Oc(a), Oc(y)) | (Wn(a), Wn(y)) | (Forall(_, a), Forall(_, y)) | (Exists(_, a), Exists(_, y)) => witness_sites(a, x, y),
        _ => vec![],
    }
}

impl Ctx<'_> {
    fn fail(&mut self, path: &str, pos: &Option<String>, rule: &str, message: String) -> Option<Derivation> {
        self.diags.push(Diagnostic { path: path.into(), pos: pos.clone(), rule: rule.into(), message });
        None
    }

    fn derive(&mut self, p: &Proof, path: &str) -> Option<Derivation> {
        let mut subs = Vec::new();
        let mut ok = true;
        for (i, q) in p.premises.iter().enumerate() {
            match self.derive(q, &format!("{path}.{i}")) {
                Some(d) => subs.push(d),
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        let tag = p.rule.tag();
        let mut rule = p.rule.clone();
        let seq = match self.conclude(&mut rule, &subs) {
            Ok(s) => s,
            Err((label, msg)) => return self.fail(path, &p.pos, label.unwrap_or(tag), msg),
        };
        if let Err(msg) = self.well_formed(&seq) {
            return self.fail(path, &p.pos, tag, msg);
        }
        Some(Derivation { rule, seq, premises: subs, path: path.into() })
    }

    fn well_formed(&self, s: &Sequent) -> std::result::Result<(), String> {
        for f in s.delta.iter().chain(s.theta.iter()) {
            if f.kind().map_err(|e| e.to_string())? != Kind::N {
                return Err(format!("{f} on the negative side is not negative"));
            }
        }
        for f in &s.gamma {
            if f.kind().map_err(|e| e.to_string())? != Kind::B {
                return Err(format!("{f} among the behaviors is not a behavior"));
            }
        }
        if self.m.located() {
            let mut seen = BTreeSet::new();
            for f in s.formulas() {
                for l in f.literals() {
                    match l.loc {
                        Loc::Occ(_) => return Err(format!("{f} is not localized")),
                        Loc::At(j) => {
                            if !seen.insert((l.name, j)) {
                                return Err(format!("location collision: X{}({j}) occurs twice in {s}", l.name));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::type_complexity)]
    fn conclude(&mut self, rule: &mut Rule, subs: &[Derivation]) -> std::result::Result<Sequent, (Option<&'static str>, String)> {
        let err = |m: String| Err((None, m));
        let range = |k: usize, v: &[Formula], side: &str| (None, format!("index {k} out of range for {side} of length {}", v.len()));
        let s = |i: usize| &subs[i].seq;
        match rule {
            Rule::Ax { name, locs } => Ok(Sequent {
                gamma: vec![Formula::Var { name: *name, loc: locs[0], neg: true }, Formula::Var { name: *name, loc: locs[1], neg: false }],
                ..Sequent::default()
            }),
            Rule::Cut { left, right } => {
                let (a, b) = (s(0), s(1));
                if b.theta.is_some() {
                    return err("the right premise must have an empty Θ".into());
                }
                let (f, g1) = pick(&a.gamma, *left).ok_or_else(|| range(*left, &a.gamma, "Γ"))?;
                let (h, g2) = pick(&b.gamma, *right).ok_or_else(|| range(*right, &b.gamma, "Γ"))?;
                if !self.m.same(&f.dual(), &h) {
                    return err(format!("{h} is not the dual of {f}"));
                }
                Ok(Sequent { delta: cat(&a.delta, &b.delta), gamma: cat(&g1, &g2), theta: a.theta.clone() })
            }
            Rule::CutPol { k } => {
                let (a, b) = (s(0), s(1));
                let n = a.theta.clone().ok_or((None, "the left premise has no formula in Θ".into()))?;
                let (h, d2) = pick(&b.delta, *k).ok_or_else(|| range(*k, &b.delta, "Δ"))?;
                if !self.m.same(&n, &h) {
                    return err(format!("{h} differs from {n}"));
                }
                Ok(Sequent { delta: cat(&a.delta, &d2), gamma: cat(&a.gamma, &b.gamma), theta: b.theta.clone() })
            }
            Rule::Tensor { left, right } => {
                let (a, b) = (s(0), s(1));
                if b.theta.is_some() {
                    return err("the right premise must have an empty Θ".into());
                }
                let (f, g1) = pick(&a.gamma, *left).ok_or_else(|| range(*left, &a.gamma, "Γ"))?;
                let (h, g2) = pick(&b.gamma, *right).ok_or_else(|| range(*right, &b.gamma, "Γ"))?;
                let mut gamma = cat(&g1, &g2);
                gamma.push(Formula::Tensor(bx(f), bx(h)));
                Ok(Sequent { delta: cat(&a.delta, &b.delta), gamma, theta: a.theta.clone() })
            }
            Rule::Par { left, right } => {
                let a = s(0);
                let (f, h, mut gamma) = pick2(&a.gamma, *left, *right).ok_or((None, "needs two distinct indices into Γ".into()))?;
                gamma.push(Formula::Par(bx(f), bx(h)));
                Ok(Sequent { gamma, ..a.clone() })
            }
            Rule::TensorL { left, right } => {
                let a = s(0);
                let (f, h, mut delta) = pick2(&a.delta, *left, *right).ok_or((None, "needs two distinct indices into Δ".into()))?;
                delta.push(Formula::Tensor(bx(f), bx(h)));
                Ok(Sequent { delta, ..a.clone() })
            }
            Rule::TensorR => {
                let (a, b) = (s(0), s(1));
                match (&a.theta, &b.theta) {
                    (Some(n1), Some(n2)) => Ok(Sequent {
                        delta: cat(&a.delta, &b.delta),
                        gamma: cat(&a.gamma, &b.gamma),
                        theta: Some(Formula::Tensor(bx(n1.clone()), bx(n2.clone()))),
                    }),
                    _ => err("both premises need a formula in Θ".into()),
                }
            }
            Rule::ParR { k } => {
                let a = s(0);
                let (q, delta) = pick(&a.delta, *k).ok_or_else(|| range(*k, &a.delta, "Δ"))?;
                let n = a.theta.clone().ok_or((None, "the premise has no formula in Θ".into()))?;
                let pp = q.dual();
                if pp.kind().ok() != Some(Kind::P) {
                    return err(format!("{q} is not the dual of a positive formula"));
                }
                Ok(Sequent { delta, gamma: a.gamma.clone(), theta: Some(Formula::Par(bx(pp), bx(n))) })
            }
            Rule::ParL { k } => {
                let (a, b) = (s(0), s(1));
                let q = a.theta.clone().ok_or((None, "the left premise has no formula in Θ".into()))?;
                let pp = q.dual();
                if pp.kind().ok() != Some(Kind::P) {
                    return err(format!("{q} is not the dual of a positive formula"));
                }
                let (n, d2) = pick(&b.delta, *k).ok_or_else(|| range(*k, &b.delta, "Δ"))?;
                let mut delta = cat(&a.delta, &d2);
                delta.push(Formula::Par(bx(pp), bx(n)));
                Ok(Sequent { delta, gamma: cat(&a.gamma, &b.gamma), theta: b.theta.clone() })
            }
            Rule::ParMix { neg, pos } => {
                let a = s(0);
                let (q, delta) = pick(&a.delta, *neg).ok_or_else(|| range(*neg, &a.delta, "Δ"))?;
                let pp = q.dual();
                if pp.kind().ok() != Some(Kind::P) {
                    return err(format!("{q} is not the dual of a positive formula"));
                }
                let (b, mut gamma) = pick(&a.gamma, *pos).ok_or_else(|| range(*pos, &a.gamma, "Γ"))?;
                gamma.push(Formula::Par(bx(pp), bx(b)));
                Ok(Sequent { delta, gamma, theta: a.theta.clone() })
            }
            Rule::TensorMix { k } => {
                let (a, b) = (s(0), s(1));
                let n = a.theta.clone().ok_or((None, "the left premise has no formula in Θ".into()))?;
                let (f, g2) = pick(&b.gamma, *k).ok_or_else(|| range(*k, &b.gamma, "Γ"))?;
                let mut gamma = cat(&a.gamma, &g2);
                gamma.push(Formula::Tensor(bx(n), bx(f)));
                Ok(Sequent { delta: cat(&a.delta, &b.delta), gamma, theta: b.theta.clone() })
            }
            Rule::OneR => Ok(Sequent { theta: Some(Formula::One), ..Sequent::default() }),
            Rule::OneL => {
                let mut a = s(0).clone();
                a.delta.push(Formula::One);
                Ok(a)
            }
            Rule::Plus { first, k, other } => {
                let a = s(0);
                let (f, mut gamma) = pick(&a.gamma, *k).ok_or_else(|| range(*k, &a.gamma, "Γ"))?;
                let (l, r) = if *first { (f, other.clone()) } else { (other.clone(), f) };
                gamma.push(Formula::Plus(bx(l), bx(r)));
                Ok(Sequent { gamma, ..a.clone() })
            }
            Rule::With { left, right } => {
                let (a, b) = (s(0), s(1));
                let (f, g1) = pick(&a.gamma, *left).ok_or_else(|| range(*left, &a.gamma, "Γ"))?;
                let (h, g2) = pick(&b.gamma, *right).ok_or_else(|| range(*right, &b.gamma, "Γ"))?;
                let same_ctx = a.delta.len() == b.delta.len()
                    && g1.len() == g2.len()
                    && a.theta.is_some() == b.theta.is_some()
                    && a.delta.iter().zip(&b.delta).chain(g1.iter().zip(&g2)).chain(a.theta.iter().zip(&b.theta)).all(|(x, y)| self.m.same(x, y));
                if !same_ctx {
                    return err(format!("the premises {a} and {b} have different contexts"));
                }
                let mut gamma = g1;
                gamma.push(Formula::With(bx(f), bx(h)));
                Ok(Sequent { delta: a.delta.clone(), gamma, theta: a.theta.clone() })
            }
            Rule::Top { delta, gamma, theta } => {
                let mut gamma = gamma.clone();
                gamma.push(Formula::Top);
                Ok(Sequent { delta: delta.clone(), gamma, theta: theta.clone() })
            }
            Rule::Oc { k } => {
                let a = s(0);
                if a.theta.is_some() {
                    return err("the premise must have an empty Θ".into());
                }
                let (b, g) = pick(&a.gamma, *k).ok_or_else(|| range(*k, &a.gamma, "Γ"))?;
                let mut delta: Vec<Formula> = a.delta.iter().map(|n| Formula::Oc(bx(n.clone()))).collect();
                delta.extend(g.iter().map(|c| Formula::Oc(bx(c.dual()))));
                Ok(Sequent { delta, gamma: vec![], theta: Some(Formula::Oc(bx(b))) })
            }
            Rule::OcPol => {
                let a = s(0);
                let n = a.theta.clone().ok_or((None, "the premise has no formula in Θ".into()))?;
                let mut delta: Vec<Formula> = a.delta.iter().map(|n| Formula::Oc(bx(n.clone()))).collect();
                delta.extend(a.gamma.iter().map(|c| Formula::Oc(bx(c.dual()))));
                Ok(Sequent { delta, gamma: vec![], theta: Some(Formula::Oc(bx(n))) })
            }
            Rule::Ctr { left, right, target } => {
                let a = s(0);
                let (f, h, mut delta) = pick2(&a.delta, *left, *right).ok_or((None, "needs two distinct indices into Δ".into()))?;
                let inner = match &f {
                    Formula::Oc(b) => b,
                    _ => return err(format!("{f} is not of the form !B")),
                };
                if inner.kind().ok() != Some(Kind::B) {
                    return Err((Some("ctr (B Behavior)"), format!("{f} contracts a formula of kind {} rather than a behavior", inner.kind().map(|k| k.to_string()).unwrap_or_default())));
                }
                if !f.same_shape(&h) {
                    return err(format!("{f} and {h} are not copies of one formula"));
                }
                let t = match target {
                    Some(t) => t.clone(),
                    None => match self.m.fresh(&f) {
                        Some(t) => {
                            *target = Some(t.clone());
                            t
                        }
                        None => return err("a localized contraction names its conclusion formula".into()),
                    },
                };
                if !t.same_shape(&f) {
                    return err(format!("the conclusion {t} is not a copy of {f}"));
                }
                delta.push(t);
                Ok(Sequent { delta, ..a.clone() })
            }
            Rule::Weak { f } => {
                let mut a = s(0).clone();
                a.delta.push(f.clone());
                Ok(a)
            }
            Rule::Forall { k, name } => {
                let a = s(0);
                let (c, mut gamma) = pick(&a.gamma, *k).ok_or_else(|| range(*k, &a.gamma, "Γ"))?;
                if a.delta.iter().chain(&gamma).chain(a.theta.iter()).any(|f| f.free_vars().contains(name)) {
                    return Err((Some("∀ (X ∉ FV)"), format!("X{name} is free in the context of {a}")));
                }
                gamma.push(Formula::Forall(*name, bx(c)));
                Ok(Sequent { gamma, ..a.clone() })
            }
            Rule::Exists { k, f } => {
                let a = s(0);
                let (p, mut gamma) = pick(&a.gamma, *k).ok_or_else(|| range(*k, &a.gamma, "Γ"))?;
                let (x, c) = match &*f {
                    Formula::Exists(x, c) => (*x, c.clone()),
                    _ => return err(format!("{f} is not existential")),
                };
                let mut w = None;
                if !instance(self.m, &c, x, &p, &mut w) {
                    return err(format!("{p} is not an instance of {f}"));
                }
                gamma.push(f.clone());
                Ok(Sequent { gamma, ..a.clone() })
            }
        }
    }
}

/// Start of the indices handed out by [`localize`], per variable name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Enumeration {
    pub start: i64,
}

fn max_occ(p: &Proof) -> usize {
    let mut v = Vec::new();
    p.locs(&mut v);
    v.iter()
        .filter_map(|(_, l)| match l {
            Loc::Occ(n) => Some(n + 1),
            Loc::At(_) => None,
        })
        .max()
        .unwrap_or(0)
}

/// Resolves placeholders. Occurrences identified by a rule (the two sides
/// of a cut, the contexts of `&`) share a location; the remaining classes
/// get indices in depth-first left-to-right order of first appearance.
pub fn localize(p: &Proof, e: &Enumeration) -> std::result::Result<Proof, Vec<Diagnostic>> {
    let mut u = Unifier { parent: BTreeMap::new(), next: max_occ(p) };
    let d = {
        let mut cx = Ctx { m: &mut u, diags: Vec::new() };
        match cx.derive(p, "root") {
            Some(d) if cx.diags.is_empty() => d,
            _ => return Err(cx.diags),
        }
    };
    let mut with_targets = d.proof();
    restore_pos(&mut with_targets, p);
    let mut order = Vec::new();
    with_targets.locs(&mut order);
    let mut used: BTreeMap<u32, BTreeSet<i64>> = BTreeMap::new();
    for (n, l) in &order {
        if let Loc::At(j) = l {
            used.entry(*n).or_default().insert(*j);
        }
    }
    let mut assigned: BTreeMap<Loc, i64> = BTreeMap::new();
    let mut next: BTreeMap<u32, i64> = BTreeMap::new();
    for (n, l) in &order {
        let root = u.find(*l);
        if let Loc::At(_) = root {
            continue;
        }
        if assigned.contains_key(&root) {
            continue;
        }
        let taken = used.entry(*n).or_default();
        let j = next.entry(*n).or_insert(e.start);
        while taken.contains(j) {
            *j += 1;
        }
        assigned.insert(root, *j);
        taken.insert(*j);
    }
    Ok(with_targets.map_locs(&mut |_, l| match u.find(l) {
        Loc::At(j) => Loc::At(j),
        r => Loc::At(assigned[&r]),
    }))
}

fn restore_pos(p: &mut Proof, src: &Proof) {
    p.pos = src.pos.clone();
    for (a, b) in p.premises.iter_mut().zip(&src.premises) {
        restore_pos(a, b);
    }
}

/// Validates every node against its schema, localizing first with the
/// default enumeration when placeholders remain.
pub fn check(p: &Proof) -> std::result::Result<Derivation, Vec<Diagnostic>> {
    let owned;
    let p = if p.is_localized() {
        p
    } else {
        owned = localize(p, &Enumeration::default())?;
        &owned
    };
    let mut m = Exact;
    let mut cx = Ctx { m: &mut m, diags: Vec::new() };
    match cx.derive(p, "root") {
        Some(d) if cx.diags.is_empty() => Ok(d),
        _ => Err(cx.diags),
    }
}

pub fn check_proof(p: &Proof) -> Vec<Diagnostic> {
    check(p).err().unwrap_or_default()
}
