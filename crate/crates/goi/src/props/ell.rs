use std::fs;
use std::path::{Path, PathBuf};

use crate::ell::{battery, check, interpret, parse_proof, reduce_once, Basis, Proof};
use crate::error::{Error, Result};
use crate::project::pairing;
use crate::scalar::{Ext, Odds, Rational};

/// Header line marking a proof the checker must reject.
pub const REJECTED: &str = "; expect: rejected";

pub struct Entry {
    pub path: PathBuf,
    pub text: String,
    pub rejected: bool,
}

impl Entry {
    pub fn name(&self) -> String {
        self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    }

    pub fn proof(&self) -> Result<Proof> {
        parse_proof(&self.text)
    }
}

/// Every `.gl` file under `dir`, sorted by name.
pub fn corpus(dir: &Path) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    let rd = fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    for ent in rd.flatten() {
        let path = ent.path();
        if path.extension().and_then(|s| s.to_str()) != Some("gl") {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let rejected = text.lines().next().map(|l| l.trim() == REJECTED).unwrap_or(false);
        out.push(Entry { path, text, rejected });
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

pub struct CutStep {
    pub reduct: Proof,
    pub before: Vec<Ext<Rational>>,
    pub after: Vec<Ext<Rational>>,
}

impl CutStep {
    pub fn stable(&self) -> bool {
        self.before == self.after
    }
}

/// One reduction step on `p`, with the pairings of both interpretations
/// against the battery of the original conclusion. `None` when `p` has no
/// redex.
pub fn cut_step(p: &Proof, basis: &Basis, fuel: usize) -> Result<Option<CutStep>> {
    let proof_err = |d: Vec<crate::ell::Diagnostic>| Error::Proof(d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "));
    let d = check(p).map_err(proof_err)?;
    let Some(reduct) = reduce_once(&d) else { return Ok(None) };
    let r = check(&reduct).map_err(proof_err)?;
    let a = interpret(&d, basis, &Odds, fuel)?;
    let b = interpret(&r, basis, &Odds, fuel)?;
    let mut before = Vec::new();
    let mut after = Vec::new();
    for t in battery(&d.seq, basis, crate::ell::BATTERY_CAP)? {
        before.push(pairing(&a, &t, &Odds, fuel)?);
        after.push(pairing(&b, &t, &Odds, fuel)?);
    }
    Ok(Some(CutStep { reduct, before, after }))
}
