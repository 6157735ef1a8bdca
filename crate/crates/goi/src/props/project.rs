use rand::Rng;

use super::graphing::random_graphing;
use crate::graphing::{embed_dialect_with, execute, normalize_ae, DialectCode, Graphing};
use crate::project::{execute_project, promotion_project, tensor, Project};
use crate::scalar::{Odds, Rational};
use crate::error::Result;

/// Offsets of the two delocations used by the promotion instances.
pub const PHI: i64 = 10;
pub const PSI: i64 = 20;

pub struct PromotionCase {
    pub a: Graphing,
    pub f: Graphing,
    pub lhs: Graphing,
    pub rhs: Graphing,
}

impl PromotionCase {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `a` on `A`, `f` on `A ∪ B`, both balanced with dialects of size at most
/// 2. Returns both sides of the promotion equation in normal form.
pub fn promotion_case(rng: &mut impl Rng, max_edges: usize, fuel: usize) -> Result<PromotionCase> {
    let va: Vec<i64> = if rng.gen_bool(0.5) { vec![0] } else { vec![0, 1] };
    let vb: Vec<i64> = if rng.gen_bool(0.5) { vec![3] } else { vec![3, 4] };
    let vf: Vec<i64> = va.iter().chain(&vb).copied().collect();
    let (na, nf) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let a = random_graphing(rng, &va, na, max_edges)?;
    let f = random_graphing(rng, &vf, nf, max_edges)?;
    promotion_sides(a, f, &va, &vb, fuel)
}

pub fn promotion_sides(a: Graphing, f: Graphing, va: &[i64], vb: &[i64], fuel: usize) -> Result<PromotionCase> {
    let bang_a = Project::balanced(a.clone()).bang()?.translate(PHI);
    let bang_f = Project::balanced(f.clone()).bang()?;
    let prom = promotion_project::<Rational>(va, PHI, vb, PSI)?;
    let out = execute_project(&prom, &tensor(&bang_a, &bang_f)?, &Odds, fuel)?;
    let lhs = normalize_ae(&out.slices[0].1)?;
    let fa = execute(&f, &a, fuel)?;
    let code = DialectCode::merged(f.dialect, a.dialect);
    let rhs = normalize_ae(&embed_dialect_with(&fa, &code)?.translate(PSI))?;
    Ok(PromotionCase { a, f, lhs, rhs })
}
