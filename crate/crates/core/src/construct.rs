//! Building tangle diagrams from braid-like words.
//!
//! Strands hang at positions `0..k` (left to right) and are read top to
//! bottom. Caps join adjacent strand tops, cups join adjacent strand
//! bottoms; the remaining four free ends become the tangle endpoints,
//! listed counterclockwise: top ends right to left, then bottom ends left to
//! right, starting at boundary point `1`.

use std::collections::BTreeSet;

use crate::tangle::{Label, Result, TangleDiagram, TangleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Strands at `at` and `at + 1` cross; `left_over` when the strand coming
    /// from the upper left passes over.
    Cross { at: usize, left_over: bool },
    /// A curl on strand `at`, looping to its right.
    Kink { at: usize, vertical_under: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidTangle {
    pub strands: usize,
    pub caps: Vec<usize>,
    pub cups: Vec<usize>,
    pub steps: Vec<Step>,
    /// Which free end (in counterclockwise order) is boundary point `1`.
    pub rotation: usize,
}

impl BraidTangle {
    pub fn new(strands: usize, caps: &[usize], cups: &[usize], steps: &[Step]) -> Self {
        Self { strands, caps: caps.to_vec(), cups: cups.to_vec(), steps: steps.to_vec(), rotation: 0 }
    }

    pub fn rotated(mut self, r: usize) -> Self {
        self.rotation = r;
        self
    }

    /// Unoriented diagram.
    pub fn diagram(&self) -> Result<TangleDiagram> {
        let k = self.strands;
        let bad = |msg: String| TangleError::Format(msg);
        let mut next: Label = 1;
        let mut fresh = || {
            next += 1;
            next - 1
        };
        let mut cur: Vec<Label> = vec![0; k];
        let mut top_free = Vec::new();
        let capped: BTreeSet<usize> = self.caps.iter().flat_map(|&j| [j, j + 1]).collect();
        if capped.len() != 2 * self.caps.len() || capped.iter().any(|&j| j >= k) {
            return Err(bad("overlapping or out of range caps".into()));
        }
        for j in 0..k {
            if self.caps.contains(&j) {
                let l = fresh();
                cur[j] = l;
                cur[j + 1] = l;
            } else if !capped.contains(&j) {
                cur[j] = fresh();
                top_free.push(cur[j]);
            }
        }
        let mut crossings: Vec<[Label; 4]> = Vec::new();
        for step in &self.steps {
            match *step {
                Step::Cross { at, left_over } => {
                    if at + 1 >= k {
                        return Err(bad(format!("crossing at {at} with {k} strands")));
                    }
                    let (tl, tr) = (cur[at], cur[at + 1]);
                    let (bl, br) = (fresh(), fresh());
                    crossings.push(if left_over { [tr, tl, bl, br] } else { [tl, bl, br, tr] });
                    cur[at] = bl;
                    cur[at + 1] = br;
                }
                Step::Kink { at, vertical_under } => {
                    if at >= k {
                        return Err(bad(format!("kink at {at} with {k} strands")));
                    }
                    let t = cur[at];
                    let (lp, b) = (fresh(), fresh());
                    crossings.push(if vertical_under { [t, b, lp, lp] } else { [lp, t, b, lp] });
                    cur[at] = b;
                }
            }
        }
        let cupped: BTreeSet<usize> = self.cups.iter().flat_map(|&j| [j, j + 1]).collect();
        if cupped.len() != 2 * self.cups.len() || cupped.iter().any(|&j| j >= k) {
            return Err(bad("overlapping or out of range cups".into()));
        }
        let mut rename: Vec<(Label, Label)> = Vec::new();
        for &j in &self.cups {
            rename.push((cur[j + 1], cur[j]));
        }
        let apply = |mut l: Label| {
            for &(from, to) in &rename {
                if l == from {
                    l = to;
                }
            }
            l
        };
        // renaming may chain through caps and cups; iterate to a fixed point
        let settle = |l: Label| {
            let mut l = l;
            for _ in 0..=rename.len() {
                l = apply(l);
            }
            l
        };
        let crossings: Vec<[Label; 4]> = crossings.into_iter().map(|r| r.map(settle)).collect();
        let bottom_free: Vec<Label> = (0..k).filter(|j| !cupped.contains(j)).map(|j| settle(cur[j])).collect();
        let top_free: Vec<Label> = top_free.into_iter().map(settle).collect();
        let mut endpoints: Vec<Label> = top_free.iter().rev().chain(bottom_free.iter()).copied().collect();
        if endpoints.len() != 4 {
            return Err(bad(format!("{} free ends, need 4", endpoints.len())));
        }
        endpoints.rotate_left(self.rotation % 4);
        let mut used: BTreeSet<Label> = crossings.iter().flatten().copied().collect();
        used.extend(endpoints.iter().copied());
        let mut loops = BTreeSet::new();
        for j in 0..k {
            let l = settle(cur[j]);
            if !used.contains(&l) {
                loops.insert(l);
            }
        }
        TangleDiagram::new(endpoints, crossings, loops.into_iter().collect(), None)
    }

    /// Diagram oriented so that the closure `k` is oriented.
    pub fn oriented(&self, k: u8) -> Result<TangleDiagram> {
        self.diagram()?.oriented_for_closure(k)
    }
}

/// The 2-strand twist with `n` crossings; closure 0 is the `(2, n)` torus
/// link.
pub fn twist(n: usize, left_over: bool) -> BraidTangle {
    BraidTangle::new(2, &[], &[], &vec![Step::Cross { at: 0, left_over }; n])
}
