use goi::dyadic::CellSet;
use goi::graphing::DEFAULT_FUEL;
use goi::project::{execute_project, pairing, promotion_project, tensor, Project, Success};
use goi::props::project::promotion_case;
use goi::{rat, Ext, Odds, Rational};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

fn iv(b: &[i64]) -> CellSet {
    CellSet::intervals(b.iter().copied())
}

#[test]
fn promotion_equation() {
    let mut rng = SplitMix64::seed_from_u64(11);
    for i in 0..20 {
        let c = promotion_case(&mut rng, 4, DEFAULT_FUEL).unwrap();
        assert!(c.holds(), "case {i}: {:?}\n{:?}\nlhs {:?}\nrhs {:?}", c.a, c.f, c.lhs, c.rhs);
    }
}

#[test]
fn primitives() {
    let v = iv(&[0]);
    let fax = Project::<Rational>::fax(&v, 2).unwrap();
    assert_eq!(fax.success().unwrap(), Success::Strict);
    let d = Project::daemon(rat(1, 3), &iv(&[0, 2]));
    assert_eq!(d.success().unwrap(), Success::No);
    let e = Project::daemon(rat(1, 4), &iv(&[0, 2]));
    assert_eq!(pairing(&d, &e, &Odds, DEFAULT_FUEL).unwrap(), Ext::Fin(rat(7, 12)));
    assert_eq!(pairing(&d, &fax, &Odds, DEFAULT_FUEL).unwrap(), Ext::Fin(rat(1, 3)));
    assert!(pairing(&fax, &fax, &Odds, DEFAULT_FUEL).unwrap().is_inf());
    let inf = Project::<Rational>::inflating_fax(&[0, 1], 5).unwrap();
    assert!(inf.slices[0].1.edges.iter().all(|e| e.weight == rat(1, 2)));
    assert_eq!(inf.slices[0].1.edges[0].target().measure(), rat(1, 2));
}

#[test]
fn fax_delocates() {
    let a = Project::<Rational>::fax(&iv(&[0]), 1).unwrap();
    let fax = Project::fax(&iv(&[1]), 4).unwrap();
    let out = execute_project(&fax, &a, &Odds, DEFAULT_FUEL).unwrap();
    assert_eq!(out.carrier, iv(&[0, 5]));
    assert_eq!(out.success().unwrap(), Success::Strict);
    assert!(out.wager.is_zero());
}

#[test]
fn bang_of_empty_is_empty() {
    let z = Project::<Rational>::balanced(goi::graphing::Graphing::new(CellSet::empty(goi::dyadic::Space::Line), 1));
    assert_eq!(z.bang().unwrap(), z);
}

#[test]
fn prom_is_successful() {
    let p = promotion_project::<Rational>(&[0], 10, &[3], 20).unwrap();
    assert_eq!(p.success().unwrap(), Success::Strict);
    let t = tensor(&p, &Project::zero(&iv(&[40]))).unwrap();
    assert_eq!(t.success().unwrap(), Success::Strict);
}
