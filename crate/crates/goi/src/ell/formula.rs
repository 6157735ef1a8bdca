//! Polarized formulas, their polarity kinds and locations.

use std::collections::BTreeSet;
use std::fmt;

use lexpr::datum::Ref;

use crate::dyadic::CellSet;
use crate::error::{Error, Result};

/// Where an occurrence of a variable sits: a fixed index `j`, or a
/// placeholder waiting for the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Loc {
    At(i64),
    Occ(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `X_i(j)`, or `X_i(j)^⊥` when `neg`.
    Var { name: u32, loc: Loc, neg: bool },
    Zero,
    Top,
    One,
    Bot,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Oc(Box<Formula>),
    Wn(Box<Formula>),
    Forall(u32, Box<Formula>),
    Exists(u32, Box<Formula>),
}

/// Behaviors, negative and positive formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    B,
    N,
    P,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::B => "B",
            Kind::N => "N",
            Kind::P => "P",
        })
    }
}

/// One variable occurrence, in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub name: u32,
    pub loc: Loc,
    pub neg: bool,
    /// Under at least one `!` or `?`.
    pub exponential: bool,
}

/// Left end of `♯X_i(j)`: `2^i(2j+1)`.
pub fn base(name: u32, j: i64) -> Result<i64> {
    if name > 40 {
        return Err(Error::Precondition(format!("variable name {name} is too large to locate")));
    }
    (2 * j + 1).checked_mul(1i64 << name).ok_or_else(|| Error::Precondition(format!("location of X{name}({j}) overflows")))
}

fn b(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn var(name: u32, j: i64) -> Formula {
        Formula::Var { name, loc: Loc::At(j), neg: false }
    }

    pub fn nvar(name: u32, j: i64) -> Formula {
        Formula::Var { name, loc: Loc::At(j), neg: true }
    }

    pub fn dual(&self) -> Formula {
        use Formula::*;
        match self {
            Var { name, loc, neg } => Var { name: *name, loc: *loc, neg: !neg },
            Zero => Top,
            Top => Zero,
            One => Bot,
            Bot => One,
            Tensor(a, c) => Par(b(a.dual()), b(c.dual())),
            Par(a, c) => Tensor(b(a.dual()), b(c.dual())),
            Plus(a, c) => With(b(a.dual()), b(c.dual())),
            With(a, c) => Plus(b(a.dual()), b(c.dual())),
            Oc(a) => Wn(b(a.dual())),
            Wn(a) => Oc(b(a.dual())),
            Forall(x, a) => Exists(*x, b(a.dual())),
            Exists(x, a) => Forall(*x, b(a.dual())),
        }
    }

    /// The production of the grammar the formula belongs to.
    pub fn kind(&self) -> Result<Kind> {
        use Formula::*;
        use Kind::*;
        let bad = |what: &str, k: &[Kind]| {
            let ks: Vec<String> = k.iter().map(|k| k.to_string()).collect();
            Err(Error::Parse(format!("polarity error: no production {} in {self}", ks.join(what))))
        };
        match self {
            Var { .. } | Zero | Top => Ok(B),
            One => Ok(N),
            Bot => Ok(P),
            Tensor(x, y) => match (x.kind()?, y.kind()?) {
                (B, B) | (B, N) | (N, B) => Ok(B),
                (N, N) => Ok(N),
                (N, P) | (P, N) => Ok(P),
                (p, q) => bad(" ⊗ ", &[p, q]),
            },
            Par(x, y) => match (x.kind()?, y.kind()?) {
                (B, B) | (B, P) | (P, B) => Ok(B),
                (P, P) => Ok(P),
                (P, N) | (N, P) => Ok(N),
                (p, q) => bad(" ⅋ ", &[p, q]),
            },
            Plus(x, y) | With(x, y) => {
                let (p, q) = (x.kind()?, y.kind()?);
                if p == q {
                    Ok(p)
                } else {
                    bad(if matches!(self, Plus(..)) { " ⊕ " } else { " & " }, &[p, q])
                }
            }
            Oc(x) => match x.kind()? {
                B | N => Ok(N),
                P => Err(Error::Parse(format!("polarity error: no production !P in {self}"))),
            },
            Wn(x) => match x.kind()? {
                B | P => Ok(P),
                N => Err(Error::Parse(format!("polarity error: no production ?N in {self}"))),
            },
            Forall(_, x) | Exists(_, x) => match x.kind()? {
                B => Ok(B),
                k => Err(Error::Parse(format!("polarity error: quantifier over a {k} formula in {self}"))),
            },
        }
    }

    /// Whether `unit` occurs anywhere in the formula.
    pub fn mentions(&self, unit: &Formula) -> bool {
        use Formula::*;
        match self {
            Tensor(x, y) | Par(x, y) | Plus(x, y) | With(x, y) => x.mentions(unit) || y.mentions(unit),
            Oc(x) | Wn(x) | Forall(_, x) | Exists(_, x) => x.mentions(unit),
            f => f == unit,
        }
    }

    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        self.collect(false, &mut out);
        out
    }

    fn collect(&self, exp: bool, out: &mut Vec<Literal>) {
        use Formula::*;
        match self {
            Var { name, loc, neg } => out.push(Literal { name: *name, loc: *loc, neg: *neg, exponential: exp }),
            Zero | Top | One | Bot => {}
            Tensor(x, y) | Par(x, y) | Plus(x, y) | With(x, y) => {
                x.collect(exp, out);
                y.collect(exp, out);
            }
            Oc(x) | Wn(x) => x.collect(true, out),
            Forall(_, x) | Exists(_, x) => x.collect(exp, out),
        }
    }

    /// Left ends of the unit intervals making up the location, in literal
    /// order. The location of `!A` and `?A` is `Ω(♯A × [0,1))`, which is
    /// `♯A` again since `♯A` is a union of unit intervals.
    pub fn bases(&self) -> Result<Vec<i64>> {
        self.literals()
            .iter()
            .map(|l| match l.loc {
                Loc::At(j) => base(l.name, j),
                Loc::Occ(_) => Err(Error::Precondition(format!("{self} is not localized"))),
            })
            .collect()
    }

    pub fn location(&self) -> Result<CellSet> {
        Ok(CellSet::intervals(self.bases()?))
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        use Formula::*;
        match self {
            Var { name, .. } => BTreeSet::from([*name]),
            Zero | Top | One | Bot => BTreeSet::new(),
            Tensor(x, y) | Par(x, y) | Plus(x, y) | With(x, y) => {
                let mut s = x.free_vars();
                s.extend(y.free_vars());
                s
            }
            Oc(x) | Wn(x) => x.free_vars(),
            Forall(v, x) | Exists(v, x) => {
                let mut s = x.free_vars();
                s.remove(v);
                s
            }
        }
    }

    /// Equal up to the locations of variables.
    pub fn same_shape(&self, other: &Formula) -> bool {
        use Formula::*;
        match (self, other) {
            (Var { name: a, neg: p, .. }, Var { name: c, neg: q, .. }) => a == c && p == q,
            (Zero, Zero) | (Top, Top) | (One, One) | (Bot, Bot) => true,
            (Tensor(a, c), Tensor(x, y)) | (Par(a, c), Par(x, y)) | (Plus(a, c), Plus(x, y)) | (With(a, c), With(x, y)) => {
                a.same_shape(x) && c.same_shape(y)
            }
            (Oc(a), Oc(x)) | (Wn(a), Wn(x)) => a.same_shape(x),
            (Forall(v, a), Forall(w, x)) | (Exists(v, a), Exists(w, x)) => v == w && a.same_shape(x),
            _ => false,
        }
    }

    pub fn map_locs(&self, f: &mut dyn FnMut(u32, Loc) -> Loc) -> Formula {
        use Formula::*;
        match self {
            Var { name, loc, neg } => Var { name: *name, loc: f(*name, *loc), neg: *neg },
            Zero => Zero,
            Top => Top,
            One => One,
            Bot => Bot,
            Tensor(x, y) => Tensor(b(x.map_locs(f)), b(y.map_locs(f))),
            Par(x, y) => Par(b(x.map_locs(f)), b(y.map_locs(f))),
            Plus(x, y) => Plus(b(x.map_locs(f)), b(y.map_locs(f))),
            With(x, y) => With(b(x.map_locs(f)), b(y.map_locs(f))),
            Oc(x) => Oc(b(x.map_locs(f))),
            Wn(x) => Wn(b(x.map_locs(f))),
            Forall(v, x) => Forall(*v, b(x.map_locs(f))),
            Exists(v, x) => Exists(*v, b(x.map_locs(f))),
        }
    }

    pub fn is_localized(&self) -> bool {
        self.literals().iter().all(|l| matches!(l.loc, Loc::At(_)))
    }

    /// S-expression form, the one read by [`parse_formula`].
    pub fn to_sexp(&self) -> String {
        use Formula::*;
        let two = |tag: &str, x: &Formula, y: &Formula| format!("({tag} {} {})", x.to_sexp(), y.to_sexp());
        match self {
            Var { name, loc, neg } => {
                let tag = if *neg { "nvar" } else { "var" };
                match loc {
                    Loc::At(j) => format!("({tag} {name} {j})"),
                    Loc::Occ(_) => format!("({tag} {name})"),
                }
            }
            Zero => "zero".into(),
            Top => "top".into(),
            One => "one".into(),
            Bot => "bot".into(),
            Tensor(x, y) => two("tensor", x, y),
            Par(x, y) => two("par", x, y),
            Plus(x, y) => two("plus", x, y),
            With(x, y) => two("with", x, y),
            Oc(x) => format!("(oc {})", x.to_sexp()),
            Wn(x) => format!("(wn {})", x.to_sexp()),
            Forall(v, x) => format!("(forall {v} {})", x.to_sexp()),
            Exists(v, x) => format!("(exists {v} {})", x.to_sexp()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Var { name, loc, neg } => {
                match loc {
                    Loc::At(j) => write!(f, "X{name}({j})")?,
                    Loc::Occ(_) => write!(f, "X{name}")?,
                }
                if *neg {
                    write!(f, "^⊥")?;
                }
                Ok(())
            }
            Zero => write!(f, "0"),
            Top => write!(f, "⊤"),
            One => write!(f, "1"),
            Bot => write!(f, "⊥"),
            Tensor(x, y) => write!(f, "({x} ⊗ {y})"),
            Par(x, y) => write!(f, "({x} ⅋ {y})"),
            Plus(x, y) => write!(f, "({x} ⊕ {y})"),
            With(x, y) => write!(f, "({x} & {y})"),
            Oc(x) => write!(f, "!{x}"),
            Wn(x) => write!(f, "?{x}"),
            Forall(v, x) => write!(f, "∀X{v} {x}"),
            Exists(v, x) => write!(f, "∃X{v} {x}"),
        }
    }
}

pub(crate) fn at(r: &Ref<'_>) -> String {
    let p = r.span().start();
    format!("{}:{}", p.line(), p.column() + 1)
}

pub(crate) fn items<'a>(r: &Ref<'a>) -> Result<(String, Vec<Ref<'a>>)> {
    let err = || Error::Parse(format!("{}: expected a list headed by a symbol", at(r)));
    let mut it = r.list_iter().ok_or_else(err)?;
    let head = it.next().ok_or_else(err)?;
    let tag = head.value().as_symbol().ok_or_else(err)?.to_string();
    Ok((tag, it.collect()))
}

pub(crate) fn int(r: &Ref<'_>) -> Result<i64> {
    r.value().as_i64().ok_or_else(|| Error::Parse(format!("{}: expected an integer", at(r))))
}

pub(crate) fn name(r: &Ref<'_>) -> Result<u32> {
    u32::try_from(int(r)?).map_err(|_| Error::Parse(format!("{}: variable names are nonnegative", at(r))))
}

/// Reads a formula. Variables written without an index get a fresh
/// placeholder numbered from `fresh`.
pub(crate) fn formula_from(r: &Ref<'_>, fresh: &mut usize) -> Result<Formula> {
    use Formula::*;
    if let Some(s) = r.value().as_symbol() {
        return match s {
            "zero" => Ok(Zero),
            "top" => Ok(Top),
            "one" => Ok(One),
            "bot" => Ok(Bot),
            _ => Err(Error::Parse(format!("{}: unknown constant {s}", at(r)))),
        };
    }
    let (tag, args) = items(r)?;
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!("{}: {tag} takes {n} arguments", at(r))))
        }
    };
    let f = match tag.as_str() {
        "var" | "nvar" => {
            let neg = tag == "nvar";
            let loc = match args.len() {
                1 => {
                    *fresh += 1;
                    Loc::Occ(*fresh - 1)
                }
                2 => Loc::At(int(&args[1])?),
                _ => return Err(Error::Parse(format!("{}: {tag} takes a name and an optional index", at(r)))),
            };
            Var { name: name(&args[0])?, loc, neg }
        }
        "tensor" | "par" | "plus" | "with" => {
            arity(2)?;
            let (x, y) = (b(formula_from(&args[0], fresh)?), b(formula_from(&args[1], fresh)?));
            match tag.as_str() {
                "tensor" => Tensor(x, y),
                "par" => Par(x, y),
                "plus" => Plus(x, y),
                _ => With(x, y),
            }
        }
        "oc" | "wn" => {
            arity(1)?;
            let x = b(formula_from(&args[0], fresh)?);
            if tag == "oc" {
                Oc(x)
            } else {
                Wn(x)
            }
        }
        "forall" | "exists" => {
            arity(2)?;
            let (v, x) = (name(&args[0])?, b(formula_from(&args[1], fresh)?));
            if tag == "forall" {
                Forall(v, x)
            } else {
                Exists(v, x)
            }
        }
        _ => return Err(Error::Parse(format!("{}: unknown connective {tag}", at(r)))),
    };
    f.kind().map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", at(r))),
        e => e,
    })?;
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let d = lexpr::datum::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    formula_from(&d.as_ref(), &mut 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_follow_the_grammar() {
        assert_eq!(parse_formula("(oc (var 0 0))").unwrap().kind().unwrap(), Kind::N);
        assert_eq!(parse_formula("(tensor (oc (var 0 0)) (wn (var 1 0)))").unwrap().kind().unwrap(), Kind::P);
        assert_eq!(parse_formula("(par (var 0 0) (wn (var 1 0)))").unwrap().kind().unwrap(), Kind::B);
        let e = parse_formula("(with (oc (var 0 0)) (var 1 0))").unwrap_err().to_string();
        assert!(e.contains("N & B"), "{e}");
        assert!(parse_formula("(oc (wn (var 0 0)))").is_err());
        assert!(parse_formula("(forall 0 one)").is_err());
    }

    #[test]
    fn duality_swaps_polarity() {
        for s in ["(oc (var 0 0))", "(tensor (oc (var 0 0)) (wn (var 1 0)))", "(with (var 0 0) (nvar 1 2))", "(par one (wn top))"] {
            let f = parse_formula(s).unwrap();
            let (k, d) = (f.kind().unwrap(), f.dual().kind().unwrap());
            let expect = match k {
                Kind::B => Kind::B,
                Kind::N => Kind::P,
                Kind::P => Kind::N,
            };
            assert_eq!(d, expect, "{s}");
            assert_eq!(f.dual().dual(), f);
        }
    }

    #[test]
    fn locations() {
        assert_eq!(Formula::var(0, 0).location().unwrap(), CellSet::intervals([1]));
        assert_eq!(Formula::var(1, 1).location().unwrap(), CellSet::intervals([6]));
        let oc = parse_formula("(oc (var 0 0))").unwrap();
        assert_eq!(oc.location().unwrap(), CellSet::intervals([1]));
        assert_eq!(crate::graphing::omega_carrier(&CellSet::intervals([1])).unwrap(), CellSet::intervals([1]));
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let e = parse_formula("(tensor (var 0 0)\n  (frob 1))").unwrap_err().to_string();
        assert!(e.contains("2:3"), "{e}");
    }
}
