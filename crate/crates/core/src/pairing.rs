//! Pairing a twisted complex with the test curves `W0`, `W1`: the bigraded
//! chain complex, its cohomology, Gaussian reduction and the Jones
//! polynomial.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::f2linalg::{tensor_label, BitVec, ColumnEliminator, F2Matrix};
use crate::pillowcase::{ModuleGenerator, ModuleTables};
use crate::ranks::{LaurentPoly, Mode, RankTable};
use crate::twisted::TwistedComplex;

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("closure must be 0 or 1, got {0}")]
    Closure(u8),
    #[error("module mu3 does not vanish on {0}")]
    HigherTerm(String),
    #[error("differential does not square to zero")]
    NotAComplex,
    #[error("differential entry {0} -> {1} does not have bidegree (1, 1)")]
    Bidegree(usize, usize),
    #[error("relative gradings carry no Jones polynomial")]
    Relative,
}

pub type Result<T> = std::result::Result<T, PairingError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairGenerator {
    pub object: usize,
    /// basis index in `A^{⊗m}`
    pub vector: usize,
    pub label: String,
    pub module: ModuleGenerator,
    pub bidegree: (i32, i32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedChainComplex {
    pub generators: Vec<PairGenerator>,
    /// column = source generator
    pub differential: F2Matrix,
    pub mode: Mode,
}

impl BigradedChainComplex {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode,
            "generators": self.generators,
            "differential": self.differential.entries().map(|(r, c)| [c, r]).collect::<Vec<_>>(),
        })
    }

    fn squares_to_zero(&self) -> bool {
        self.differential.mul(&self.differential).expect("square").is_zero()
    }

    fn check_bidegrees(&self) -> Result<()> {
        for (r, c) in self.differential.entries() {
            let (s, t) = (self.generators[c].bidegree, self.generators[r].bidegree);
            if t != (s.0 + 1, s.1 + 1) {
                return Err(PairingError::Bidegree(c, r));
            }
        }
        Ok(())
    }
}

/// `∂(v ⊗ m) = Σ δ(v) ⊗ mu2(g, m)`, plus `mu3(g2, g1, m)` along composable
/// pairs. On complexes straight from a cube every such `mu3` term must
/// vanish generator by generator, and a non-zero one is an error.
pub fn pair(tc: &TwistedComplex, k: u8) -> Result<BigradedChainComplex> {
    pair_with(tc, k, ModuleTables::standard())
}

pub fn pair_with(tc: &TwistedComplex, k: u8, mt: &ModuleTables) -> Result<BigradedChainComplex> {
    if k > 1 {
        return Err(PairingError::Closure(k));
    }
    let mut generators = Vec::new();
    let mut index: HashMap<(usize, usize, ModuleGenerator), usize> = HashMap::new();
    for (i, o) in tc.objects.iter().enumerate() {
        for v in 0..o.dim() {
            for m in ModuleGenerator::basis(k, o.obj()) {
                index.insert((i, v, m), generators.len());
                generators.push(PairGenerator {
                    object: i,
                    vector: v,
                    label: tensor_label(o.m, v),
                    module: m,
                    bidegree: (o.degree(v) + m.degree(), o.h),
                });
            }
        }
    }
    let n = generators.len();
    let mut diff = F2Matrix::zero(n, n);
    let objects = &tc.objects;
    let act = |diff: &mut F2Matrix, j: usize, i: usize, m: &F2Matrix, image: &dyn Fn(ModuleGenerator) -> Vec<ModuleGenerator>| {
        for src in ModuleGenerator::basis(k, objects[i].obj()) {
            for tgt in image(src) {
                for (r, c) in m.entries() {
                    diff.toggle(index[&(j, r, tgt)], index[&(i, c, src)]);
                }
            }
        }
    };
    for (&(j, i), e) in &tc.delta {
        for (g, m) in &e.morphism.parts {
            act(&mut diff, j, i, m, &|src| mt.mu2_gen(*g, src).gens().collect());
        }
    }
    let out = tc.outgoing();
    for (i, first) in out.iter().enumerate() {
        for &(l, d1) in first {
            for &(j, d2) in &out[l] {
                for (g2, m2) in &d2.parts {
                    for (g1, m1) in &d1.parts {
                        for src in ModuleGenerator::basis(k, objects[i].obj()) {
                            let v = mt.mu3_gen(*g2, *g1, src);
                            if v.is_zero() {
                                continue;
                            }
                            if tc.cancelled == 0 {
                                return Err(PairingError::HigherTerm(format!(
                                    "({g2}, {g1}, {}) along {i} -> {l} -> {j}",
                                    src.name()
                                )));
                            }
                            let m = m2.mul(m1).expect("sizes");
                            act(&mut diff, j, i, &m, &|s| if s == src { v.gens().collect() } else { vec![] });
                        }
                    }
                }
            }
        }
    }
    Ok(BigradedChainComplex { generators, differential: diff, mode: tc.mode })
}

/// Ranks of cohomology, one `r - s` diagonal at a time.
pub fn cohomology(c: &BigradedChainComplex) -> Result<RankTable> {
    if !c.squares_to_zero() {
        return Err(PairingError::NotAComplex);
    }
    c.check_bidegrees()?;
    let mut diagonals: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, g) in c.generators.iter().enumerate() {
        diagonals.entry(g.bidegree.0 - g.bidegree.1).or_default().push(i);
    }
    let mut columns: HashMap<usize, Vec<usize>> = HashMap::new();
    for (r, col) in c.differential.entries() {
        columns.entry(col).or_default().push(r);
    }
    let parts: Vec<Vec<((i32, i32), usize)>> = diagonals
        .into_par_iter()
        .map(|(_, gens)| {
            let mut by_s: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
            for &g in &gens {
                by_s.entry(c.generators[g].bidegree.1).or_default().push(g);
            }
            // rank of ∂ leaving homological degree s
            let rank_at = |s: i32| -> usize {
                let (Some(src), Some(tgt)) = (by_s.get(&s), by_s.get(&(s + 1))) else { return 0 };
                let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(i, g)| (*g, i)).collect();
                let mut elim = ColumnEliminator::new(tgt.len(), src.len());
                for (j, g) in src.iter().enumerate() {
                    let mut col = BitVec::new(tgt.len());
                    for r in columns.get(g).into_iter().flatten() {
                        col.flip(pos[r]);
                    }
                    elim.insert(col, j);
                }
                elim.rank()
            };
            by_s.iter()
                .map(|(&s, gs)| {
                    let r = c.generators[gs[0]].bidegree.0;
                    ((r, s), gs.len() - rank_at(s) - rank_at(s - 1))
                })
                .collect()
        })
        .collect();
    let mut t = RankTable::new(c.mode);
    for (at, rank) in parts.into_iter().flatten() {
        t.add(at, rank);
    }
    Ok(t)
}

/// Gaussian elimination: cancel every non-zero matrix coefficient in turn.
pub fn reduce(c: &BigradedChainComplex) -> BigradedChainComplex {
    let n = c.generators.len();
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut inn: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (r, col) in c.differential.entries() {
        out[col].insert(r);
        inn[r].insert(col);
    }
    let mut alive = vec![true; n];
    for x in 0..n {
        let Some(&y) = out[x].iter().next() else { continue };
        let zs: Vec<usize> = inn[y].iter().copied().filter(|&z| z != x).collect();
        let ws: Vec<usize> = out[x].iter().copied().filter(|&w| w != y).collect();
        for &z in &zs {
            for &w in &ws {
                if !out[z].remove(&w) {
                    out[z].insert(w);
                    inn[w].insert(z);
                } else {
                    inn[w].remove(&z);
                }
            }
        }
        for v in [x, y] {
            alive[v] = false;
            for w in std::mem::take(&mut out[v]) {
                inn[w].remove(&v);
            }
            for z in std::mem::take(&mut inn[v]) {
                out[z].remove(&v);
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut generators = Vec::new();
    for i in (0..n).filter(|&i| alive[i]) {
        index[i] = generators.len();
        generators.push(c.generators[i].clone());
    }
    let entries = (0..n).filter(|&i| alive[i]).flat_map(|i| out[i].iter().map(move |&w| (w, i))).collect::<Vec<_>>();
    let m = generators.len();
    let differential = F2Matrix::from_entries(m, m, entries.into_iter().map(|(w, i)| (index[w], index[i]))).expect("in range");
    BigradedChainComplex { generators, differential, mode: c.mode }
}

/// `Σ (-1)^s rank(r, s) q^(r - s)`.
pub fn jones(rt: &RankTable) -> Result<LaurentPoly> {
    if rt.mode != Mode::Absolute {
        return Err(PairingError::Relative);
    }
    let mut p = LaurentPoly::zero();
    for (&(r, s), &rank) in &rt.ranks {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(sign * rank as i64, r - s);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::build_delta;
    use crate::pillowcase::ModuleGenerator::*;
    use crate::tangle::{build_cube, parse_tangle};

    fn complex(json: &str) -> TwistedComplex {
        let d = parse_tangle(json).unwrap();
        let cube = build_cube(&d);
        build_delta(&cube, cube.counts)
    }

    const T_CROSS: &str = r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1]],"orientation":[[2,0,0],[1,0,3]]}"#;
    const T0: &str = r#"{"endpoints":[1,2,2,1],"crossings":[],"orientation":[[1,-1,3],[2,-1,2]]}"#;
    const T1: &str = r#"{"endpoints":[1,1,2,2],"crossings":[],"orientation":[[1,-1,1],[2,-1,3]]}"#;

    #[test]
    fn crossing_pairs_to_the_unknot() {
        let c = pair(&complex(T_CROSS), 0).unwrap();
        let gens: Vec<_> = c.generators.iter().map(|g| (g.module, g.bidegree)).collect();
        assert_eq!(gens, [(Alpha, (1, 0)), (Beta, (-1, 0)), (Gamma, (2, 1))]);
        assert_eq!(c.differential.entries().collect::<Vec<_>>(), [(2, 0)]);
        let t = cohomology(&c).unwrap();
        assert_eq!(t, RankTable::from_entries(Mode::Absolute, &[((-1, 0), 1)]));
        let r = reduce(&c);
        assert_eq!(r.generators.len(), 1);
        assert_eq!(r.generators[0].bidegree, (-1, 0));
        assert!(r.differential.is_zero());
    }

    #[test]
    fn crossingless_tangles() {
        let t0 = cohomology(&pair(&complex(T0), 0).unwrap()).unwrap();
        assert_eq!(t0, RankTable::from_entries(Mode::Absolute, &[((0, 0), 1), ((-2, 0), 1)]));
        let t1 = cohomology(&pair(&complex(T1), 0).unwrap()).unwrap();
        assert_eq!(t1, RankTable::from_entries(Mode::Absolute, &[((-1, 0), 1)]));
        assert_eq!(reduce(&pair(&complex(T0), 0).unwrap()).generators.len(), 2);
    }

    #[test]
    fn jones_of_simple_tables() {
        let unknot = RankTable::from_entries(Mode::Absolute, &[((-1, 0), 1)]);
        assert_eq!(jones(&unknot).unwrap().terms(), [(-1, 1)]);
        let unlink = RankTable::from_entries(Mode::Absolute, &[((0, 0), 1), ((-2, 0), 1)]);
        assert_eq!(jones(&unlink).unwrap().terms(), [(-2, 1), (0, 1)]);
        assert!(matches!(jones(&RankTable::new(Mode::Relative)), Err(PairingError::Relative)));
    }
}
