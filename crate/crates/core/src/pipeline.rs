//! Diagram in, rank table out.

use thiserror::Error;

use crate::functor::build_delta;
use crate::khovanov::{compare, reduced_khovanov, Comparison, OracleError};
use crate::pairing::{cohomology, pair, PairingError};
use crate::pillowcase::Violation;
use crate::ranks::{Mode, RankTable};
use crate::tangle::{build_cube, close, orientation_extends, TangleDiagram, TangleError};
use crate::twisted::{verify_twisted, TwistedComplex};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("twisted complex fails its checks: {0:?}")]
    Twisted(Vec<Violation>),
    #[error("the orientation does not extend over closure {0}")]
    Refused(u8),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

/// The twisted complex of a diagram; absolute gradings need an orientation.
pub fn twisted_complex(d: &TangleDiagram, relative: bool) -> TwistedComplex {
    let cube = build_cube(d);
    let counts = if relative || !cube.oriented { (0, 0) } else { cube.counts };
    let mut tc = build_delta(&cube, counts);
    if relative {
        tc.mode = Mode::Relative;
    }
    tc
}

/// Builds, checks, pairs with `W_k` and takes cohomology.
pub fn rank_table(d: &TangleDiagram, k: u8, relative: bool) -> Result<RankTable> {
    let tc = twisted_complex(d, relative);
    let report = verify_twisted(&tc);
    if !report.passed() {
        return Err(PipelineError::Twisted(report.violations));
    }
    Ok(cohomology(&pair(&tc, k)?)?)
}

/// Pipeline against oracle for the closure `k`.
pub fn compare_closure(d: &TangleDiagram, k: u8) -> Result<(RankTable, RankTable, Comparison)> {
    if !orientation_extends(d, k) {
        return Err(PipelineError::Refused(k));
    }
    let ours = rank_table(d, k, false)?;
    let oracle = reduced_khovanov(&close(d, k))?;
    let c = compare(&ours, &oracle)?;
    Ok((ours, oracle, c))
}
