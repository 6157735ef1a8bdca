use std::collections::BTreeSet;
use std::path::Path;

use goi::dyadic::CellSet;
use goi::ell::{battery, check, check_proof, interpret, localize, parse_formula, parse_proof, verify_soundness, Basis, Enumeration, Formula, Kind, BATTERY_CAP};
use goi::graphing::DEFAULT_FUEL;
use goi::project::Success;
use goi::props::ell::{corpus, cut_step, Entry};
use goi::{Odds, Rational};
use num_traits::Zero;

const TAGS: [&str; 23] = [
    "ax", "cut", "cut_pol", "⊗", "⅋", "⊗pol_g", "⊗pol_d", "⅋pol_d", "⅋pol_g", "⅋mix", "⊗mix", "1_d", "1_g", "⊕1", "⊕2", "&", "⊤", "!", "!pol", "ctr", "weak", "∀", "∃",
];

fn entries() -> Vec<Entry> {
    corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/proofs")).unwrap()
}

#[test]
fn formulas_parse_and_classify() {
    let f = parse_formula("(tensor (var 0 0) (oc (var 1 1)))").unwrap();
    assert_eq!(f.to_string(), "(X0(0) ⊗ !X1(1))");
    assert_eq!(f.kind().unwrap(), Kind::B);
    assert_eq!(f.bases().unwrap(), vec![1, 6]);
    assert_eq!(parse_formula("(oc (var 0 0))").unwrap().kind().unwrap(), Kind::N);
    assert_eq!(parse_formula("(wn (var 0 0))").unwrap().kind().unwrap(), Kind::P);
    assert_eq!(parse_formula("(tensor (wn (var 0 0)) (oc (var 0 1)))").unwrap().kind().unwrap(), Kind::P);
    assert!(parse_formula("(with (oc (var 0 0)) (var 0 1))").is_err());
    assert!(parse_formula("(forall 0 (oc (var 0 0)))").is_err());
    let g = parse_formula("(par (nvar 0 0) (var 0 0))").unwrap();
    assert_eq!(g.dual(), parse_formula("(tensor (var 0 0) (nvar 0 0))").unwrap());
    assert_eq!(Formula::var(2, 0).dual().dual(), Formula::var(2, 0));
    assert!(parse_formula("(tensor (var 0 0))").is_err());
}

#[test]
fn localization_assigns_unit_intervals() {
    let p = parse_proof("(ax 0)").unwrap();
    let d = check(&p).unwrap();
    assert_eq!(d.seq.to_string(), "⊢ X0(0)^⊥, X0(1);");
    assert_eq!(d.seq.location().unwrap(), CellSet::intervals([1, 3]));
    let d = check(&parse_proof("(ax 1)").unwrap()).unwrap();
    assert_eq!(d.seq.bases().unwrap(), vec![2, 6]);
    let q = localize(&parse_proof("(tensor 1 1 (ax 0) (ax 1))").unwrap(), &Enumeration::default()).unwrap();
    assert!(q.is_localized());
    let seq = check(&q).unwrap().seq;
    let bases = seq.bases().unwrap();
    let distinct: BTreeSet<i64> = bases.iter().copied().collect();
    assert_eq!(distinct.len(), bases.len());
}

#[test]
fn corpus_is_sound() {
    let basis = Basis::<Rational>::standard();
    let mut sound = 0;
    for e in entries().iter().filter(|e| !e.rejected) {
        let p = e.proof().unwrap();
        let r = verify_soundness(&p, &basis, &Odds, DEFAULT_FUEL).unwrap_or_else(|err| panic!("{}: {err}", e.name()));
        assert!(r.sound(), "{}: {:?}", e.name(), r.success);
        assert!(r.consistent(), "{}: {:?}", e.name(), r.consistency);
        assert!(r.pairings.iter().all(|v| !v.is_zero() && !v.is_inf()), "{}: {:?}", e.name(), r.pairings);
        sound += 1;
    }
    assert!(sound >= 20);
}

#[test]
fn corpus_covers_every_rule() {
    let mut seen = BTreeSet::new();
    for e in entries().iter().filter(|e| !e.rejected) {
        seen.extend(e.proof().unwrap().rules());
    }
    for t in TAGS {
        assert!(seen.contains(t), "no proof uses {t}");
    }
}

#[test]
fn rejected_proofs_are_diagnosed() {
    let rejected: Vec<Entry> = entries().into_iter().filter(|e| e.rejected).collect();
    assert_eq!(rejected.len(), 3);
    for e in &rejected {
        let p = e.proof().unwrap();
        let diags = check_proof(&p);
        assert!(!diags.is_empty(), "{} was accepted", e.name());
        assert!(verify_soundness(&p, &Basis::<Rational>::standard(), &Odds, DEFAULT_FUEL).is_err());
        if e.name() == "ctr_on_nonbehavior" {
            assert!(diags.iter().any(|d| d.rule == "ctr (B Behavior)"), "{diags:?}");
            assert!(diags[0].to_string().starts_with("3:1:"), "{}", diags[0]);
        }
        if e.name() == "forall_capture" {
            assert!(diags.iter().any(|d| d.rule == "∀ (X ∉ FV)"), "{diags:?}");
        }
    }
}

#[test]
fn cut_steps_preserve_pairings() {
    let basis = Basis::<Rational>::standard();
    let mut steps = 0;
    for e in entries().iter().filter(|e| !e.rejected) {
        let p = e.proof().unwrap();
        if !p.has_cut() {
            continue;
        }
        if let Some(s) = cut_step(&p, &basis, DEFAULT_FUEL).unwrap() {
            assert!(s.stable(), "{}: {:?} vs {:?}", e.name(), s.before, s.after);
            assert!(check_proof(&s.reduct).is_empty());
            steps += 1;
        }
    }
    assert!(steps >= 5, "only {steps} reducible proofs");
}

#[test]
fn enumeration_start_does_not_matter() {
    let basis = Basis::<Rational>::standard();
    for e in entries().iter().filter(|e| !e.rejected) {
        let p = e.proof().unwrap();
        let a = localize(&p, &Enumeration::default()).unwrap();
        let b = localize(&p, &Enumeration { start: 3 }).unwrap();
        let ia = interpret(&check(&a).unwrap(), &basis, &Odds, DEFAULT_FUEL).unwrap();
        let ib = interpret(&check(&b).unwrap(), &basis, &Odds, DEFAULT_FUEL).unwrap();
        assert_eq!(ia.success().unwrap(), ib.success().unwrap(), "{}", e.name());
        let rb = verify_soundness(&b, &basis, &Odds, DEFAULT_FUEL).unwrap();
        assert!(rb.sound(), "{}", e.name());
    }
}

#[test]
fn negative_kinds_interpret_without_wager() {
    let basis = Basis::<Rational>::standard();
    let p = parse_proof("(oc-pol (one-r))").unwrap();
    let a = interpret(&check(&p).unwrap(), &basis, &Odds, DEFAULT_FUEL).unwrap();
    assert_eq!(a.success().unwrap(), Success::Strict);
    for e in entries().iter().filter(|e| !e.rejected) {
        let d = check(&e.proof().unwrap()).unwrap();
        let negative = d.seq.delta.iter().chain(d.seq.theta.iter()).any(|f| f.kind().unwrap() == Kind::N);
        if !negative {
            continue;
        }
        let a = interpret(&d, &basis, &Odds, DEFAULT_FUEL).unwrap();
        assert!(a.wager_free() && !a.unit().is_zero(), "{}", e.name());
        for t in battery(&d.seq, &basis, BATTERY_CAP).unwrap() {
            assert!(t.wager_free() && !t.unit().is_zero(), "{}", e.name());
        }
    }
}
