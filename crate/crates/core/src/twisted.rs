//! Twisted complexes over the pillowcase category: the defining equations,
//! bidegree bookkeeping and cancellation of invertible entries.
//!
//! `delta` is keyed by `(target, source)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{tensor_degree, F2Matrix};
use crate::functor::{SigmaMorphism, SigmaObject};
use crate::pairing::{cohomology, pair};
use crate::pillowcase::{Generator, Report, StructureTables};
use crate::ranks::Mode;

#[derive(Debug, Error)]
pub enum TwistedError {
    #[error("malformed complex: {0}")]
    Shape(String),
    #[error("entry ({to}, {from}) stores bidegree {stored:?}, its summands give {computed:?}")]
    Bidegree { to: usize, from: usize, stored: (i32, i32), computed: Option<(i32, i32)> },
    #[error("cannot cancel along ({to}, {from}): {reason}")]
    Pivot { to: usize, from: usize, reason: String },
    #[error("cancellation broke the complex: {0}")]
    Postcondition(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TwistedError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub morphism: SigmaMorphism,
    pub bidegree: (i32, i32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedComplex {
    pub objects: Vec<SigmaObject>,
    pub delta: BTreeMap<(usize, usize), Entry>,
    pub mode: Mode,
    /// Number of cancelled pairs since the cube.
    pub cancelled: usize,
}

fn computed_bidegree(objects: &[SigmaObject], j: usize, i: usize, m: &SigmaMorphism) -> Option<(i32, i32)> {
    m.degree(&objects[i], &objects[j]).map(|d| (d, objects[j].h - objects[i].h))
}

impl TwistedComplex {
    /// Checks shapes and types and audits every stored bidegree.
    pub fn new(objects: Vec<SigmaObject>, delta: BTreeMap<(usize, usize), Entry>, mode: Mode) -> Result<Self> {
        for (&(j, i), e) in &delta {
            let (Some(src), Some(tgt)) = (objects.get(i), objects.get(j)) else {
                return Err(TwistedError::Shape(format!("entry ({j}, {i}) names a missing object")));
            };
            let m = &e.morphism;
            if (m.source, m.target) != (src.obj(), tgt.obj()) || (m.rows, m.cols) != (tgt.dim(), src.dim()) {
                return Err(TwistedError::Shape(format!("entry ({j}, {i}) does not fit its objects")));
            }
            if m.parts.values().any(|p| (p.rows(), p.cols()) != (m.rows, m.cols)) {
                return Err(TwistedError::Shape(format!("entry ({j}, {i}) has a summand of the wrong size")));
            }
            if m.is_zero() {
                return Err(TwistedError::Shape(format!("entry ({j}, {i}) is zero")));
            }
            let computed = computed_bidegree(&objects, j, i, m);
            if computed != Some(e.bidegree) {
                return Err(TwistedError::Bidegree { to: j, from: i, stored: e.bidegree, computed });
            }
        }
        Ok(Self { objects, delta, mode, cancelled: 0 })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Entries leaving each object: `out[i]` lists `(j, δ_ji)`.
    pub fn outgoing(&self) -> Vec<Vec<(usize, &SigmaMorphism)>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (&(j, i), e) in &self.delta {
            out[i].push((j, &e.morphism));
        }
        out
    }

    /// Total dimension of the underlying vector spaces.
    pub fn total_dim(&self) -> usize {
        self.objects.iter().map(|o| o.dim()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = ComplexFile {
            mode: self.mode,
            cancelled: self.cancelled,
            objects: self.objects.clone(),
            delta: self
                .delta
                .iter()
                .map(|(&(j, i), e)| EntryFile {
                    target: j,
                    source: i,
                    bidegree: e.bidegree,
                    summands: e.morphism.parts.iter().map(|(g, m)| SummandFile { generator: *g, matrix: m.clone() }).collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: ComplexFile = serde_json::from_value(v.clone())?;
        let mut delta = BTreeMap::new();
        for e in doc.delta {
            let (Some(src), Some(tgt)) = (doc.objects.get(e.source), doc.objects.get(e.target)) else {
                return Err(TwistedError::Shape(format!("entry ({}, {}) names a missing object", e.target, e.source)));
            };
            let mut m = SigmaMorphism::zero(src.obj(), tgt.obj(), tgt.dim(), src.dim());
            for s in &e.summands {
                if s.matrix.entries().any(|(r, c)| r >= s.matrix.rows() || c >= s.matrix.cols()) {
                    return Err(TwistedError::Shape("matrix entry out of range".into()));
                }
                m.add_part(s.generator, &s.matrix).map_err(|err| TwistedError::Shape(err.to_string()))?;
            }
            if delta.insert((e.target, e.source), Entry { morphism: m, bidegree: e.bidegree }).is_some() {
                return Err(TwistedError::Shape(format!("entry ({}, {}) listed twice", e.target, e.source)));
            }
        }
        let mut tc = Self::new(doc.objects, delta, doc.mode)?;
        tc.cancelled = doc.cancelled;
        Ok(tc)
    }
}

#[derive(Serialize, Deserialize)]
struct SummandFile {
    generator: Generator,
    matrix: F2Matrix,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    target: usize,
    source: usize,
    bidegree: (i32, i32),
    summands: Vec<SummandFile>,
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    mode: Mode,
    #[serde(default)]
    cancelled: usize,
    objects: Vec<SigmaObject>,
    delta: Vec<EntryFile>,
}

pub fn verify_twisted(tc: &TwistedComplex) -> Report {
    verify_twisted_with(tc, StructureTables::standard())
}

/// `mu2(δ, δ) = 0` and `mu3(δ, δ, δ) = 0` entry by entry, triangularity,
/// and bidegree `(1, 1)` (first coordinate 1 and a positive jump in `h`
/// once pairs have been cancelled).
pub fn verify_twisted_with(tc: &TwistedComplex, t: &StructureTables) -> Report {
    let mut report = Report::new("twisted complex");
    for (&(j, i), e) in &tc.delta {
        let (hi, hj) = (tc.objects[i].h, tc.objects[j].h);
        report.check(hj > hi, "lower triangular", vec![j.to_string(), i.to_string()], format!("h {hi} -> {hj}"));
        let computed = computed_bidegree(&tc.objects, j, i, &e.morphism);
        let ok = match computed {
            Some((1, dh)) => computed == Some(e.bidegree) && if tc.cancelled == 0 { dh == 1 } else { dh >= 1 },
            _ => false,
        };
        report.check(ok, "bidegree (1,1)", vec![j.to_string(), i.to_string()], format!("{computed:?}"));
    }
    let out = tc.outgoing();
    let partial: Vec<Report> = (0..tc.len())
        .into_par_iter()
        .map(|i| {
            let mut r = Report::new("");
            let mut two: BTreeMap<usize, SigmaMorphism> = BTreeMap::new();
            let mut three: BTreeMap<usize, SigmaMorphism> = BTreeMap::new();
            for &(k, d1) in &out[i] {
                for &(j, d2) in &out[k] {
                    let v = d2.compose(d1, t);
                    accumulate(&mut two, j, v);
                    for &(l, d3) in &out[j] {
                        let v = d3.mu3(d2, d1, t);
                        accumulate(&mut three, l, v);
                    }
                }
            }
            for (name, sums) in [("mu2(δ,δ) = 0", two), ("mu3(δ,δ,δ) = 0", three)] {
                for (j, v) in sums {
                    r.check(v.is_zero(), name, vec![j.to_string(), i.to_string()], v.describe());
                }
            }
            r
        })
        .collect();
    for r in partial {
        report.merge(r);
    }
    report
}

fn accumulate(acc: &mut BTreeMap<usize, SigmaMorphism>, j: usize, v: SigmaMorphism) {
    match acc.get_mut(&j) {
        Some(old) => *old = old.add(&v).expect("same hom space"),
        None => {
            acc.insert(j, v);
        }
    }
}

/// Splits every `A^{⊗m}{σ} ⊗ L` into `2^m` copies of `F{σ - p(v)} ⊗ L`.
pub fn explode(tc: &TwistedComplex) -> TwistedComplex {
    let mut offsets = Vec::with_capacity(tc.len());
    let mut objects = Vec::new();
    for o in &tc.objects {
        offsets.push(objects.len());
        for v in 0..o.dim() {
            objects.push(SigmaObject { ell: o.ell, m: 0, shift: o.shift - tensor_degree(o.m, v), h: o.h });
        }
    }
    let mut delta: BTreeMap<(usize, usize), Entry> = BTreeMap::new();
    for (&(j, i), e) in &tc.delta {
        for (g, m) in &e.morphism.parts {
            for (r, c) in m.entries() {
                let key = (offsets[j] + r, offsets[i] + c);
                let entry = delta.entry(key).or_insert_with(|| Entry {
                    morphism: SigmaMorphism::zero(g.source(), g.target(), 1, 1),
                    bidegree: e.bidegree,
                });
                entry.morphism.add_part(*g, &F2Matrix::identity(1)).expect("typed");
            }
        }
    }
    delta.retain(|_, e| !e.morphism.is_zero());
    TwistedComplex { objects, delta, mode: tc.mode, cancelled: tc.cancelled }
}

/// Mutable adjacency form used while cancelling.
struct Work<'t> {
    objects: Vec<SigmaObject>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, SigmaMorphism>>,
    inn: Vec<BTreeSet<usize>>,
    tables: &'t StructureTables,
}

impl<'t> Work<'t> {
    fn new(tc: &TwistedComplex, tables: &'t StructureTables) -> Self {
        let n = tc.len();
        let mut out = vec![BTreeMap::new(); n];
        let mut inn = vec![BTreeSet::new(); n];
        for (&(j, i), e) in &tc.delta {
            out[i].insert(j, e.morphism.clone());
            inn[j].insert(i);
        }
        Self { objects: tc.objects.clone(), alive: vec![true; n], out, inn, tables }
    }

    /// Inverse of the pivot `δ_ba = ψ ⊗ a + φ ⊗ c`.
    fn pivot_inverse(&self, a: usize, b: usize) -> std::result::Result<SigmaMorphism, String> {
        let Some(p) = self.out[a].get(&b) else { return Err("no entry".into()) };
        let (oa, ob) = (&self.objects[a], &self.objects[b]);
        if ob.h != oa.h + 1 {
            return Err(format!("h jumps from {} to {}", oa.h, ob.h));
        }
        if oa.ell != ob.ell {
            return Err("the entry changes the arc".into());
        }
        let (ga, gc) = (Generator::a(oa.ell), Generator::c(oa.ell));
        if p.parts.keys().any(|g| *g != ga && *g != gc) {
            return Err(format!("summands other than {ga} and {gc}"));
        }
        let psi = p.parts.get(&ga).ok_or_else(|| format!("no {ga} summand"))?;
        let inv = psi.inverse().ok_or_else(|| format!("the {ga} part is not invertible"))?;
        let mut chi = SigmaMorphism::single(inv.clone(), ga);
        if let Some(phi) = p.parts.get(&gc) {
            let m = inv.mul(phi).and_then(|x| x.mul(&inv)).expect("square");
            chi.add_part(gc, &m).expect("typed");
        }
        Ok(chi)
    }

    fn cancel(&mut self, a: usize, b: usize) -> std::result::Result<(), String> {
        let chi = self.pivot_inverse(a, b)?;
        let ys: Vec<(usize, SigmaMorphism)> =
            self.out[a].iter().filter(|(y, _)| **y != b).map(|(y, m)| (*y, m.clone())).collect();
        let xs: Vec<usize> = self.inn[b].iter().copied().filter(|x| *x != a).collect();
        for &x in &xs {
            let through = chi.compose(&self.out[x][&b], self.tables);
            for (y, d_ya) in &ys {
                let v = d_ya.compose(&through, self.tables);
                if v.is_zero() {
                    continue;
                }
                let new = match self.out[x].get(y) {
                    Some(old) => old.add(&v).expect("same hom space"),
                    None => v,
                };
                if new.is_zero() {
                    self.out[x].remove(y);
                    self.inn[*y].remove(&x);
                } else {
                    self.out[x].insert(*y, new);
                    self.inn[*y].insert(x);
                }
            }
        }
        for v in [a, b] {
            self.alive[v] = false;
            for y in std::mem::take(&mut self.out[v]).into_keys() {
                self.inn[y].remove(&v);
            }
            for x in std::mem::take(&mut self.inn[v]) {
                self.out[x].remove(&v);
            }
        }
        Ok(())
    }

    fn finish(self, mode: Mode, cancelled: usize) -> Result<TwistedComplex> {
        let index: Vec<Option<usize>> = {
            let mut next = 0;
            self.alive
                .iter()
                .map(|&a| {
                    a.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let objects: Vec<SigmaObject> =
            self.objects.iter().zip(&self.alive).filter(|(_, a)| **a).map(|(o, _)| *o).collect();
        let mut delta = BTreeMap::new();
        for (i, targets) in self.out.into_iter().enumerate() {
            for (j, m) in targets {
                let (Some(ni), Some(nj)) = (index[i], index[j]) else { continue };
                let computed = computed_bidegree(&objects, nj, ni, &m)
                    .ok_or_else(|| TwistedError::Postcondition(format!("entry ({nj}, {ni}) is inhomogeneous")))?;
                delta.insert((nj, ni), Entry { morphism: m, bidegree: computed });
            }
        }
        let mut tc = TwistedComplex::new(objects, delta, mode)?;
        tc.cancelled = cancelled;
        Ok(tc)
    }
}

/// Cancels along `δ_ba` without checking the result.
pub fn eliminate_unchecked(tc: &TwistedComplex, pair: (usize, usize)) -> Result<TwistedComplex> {
    let (a, b) = pair;
    if a >= tc.len() || b >= tc.len() {
        return Err(TwistedError::Shape(format!("no objects {a}, {b}")));
    }
    let mut w = Work::new(tc, StructureTables::standard());
    w.cancel(a, b).map_err(|reason| TwistedError::Pivot { to: b, from: a, reason })?;
    w.finish(tc.mode, tc.cancelled + 1)
}

/// The paired cohomology for both closures.
fn paired_tables(tc: &TwistedComplex) -> std::result::Result<[crate::ranks::RankTable; 2], String> {
    let one = |k: u8| -> std::result::Result<_, String> {
        let c = pair(tc, k).map_err(|e| e.to_string())?;
        cohomology(&c).map_err(|e| e.to_string())
    };
    Ok([one(0)?, one(1)?])
}

fn postcondition(before: &TwistedComplex, after: &TwistedComplex) -> Result<()> {
    let report = verify_twisted(after);
    if !report.passed() {
        return Err(TwistedError::Postcondition(format!("{:?}", report.violations)));
    }
    let old = paired_tables(before).map_err(TwistedError::Postcondition)?;
    let new = paired_tables(after).map_err(TwistedError::Postcondition)?;
    for k in 0..2 {
        if old[k] != new[k] {
            return Err(TwistedError::Postcondition(format!(
                "paired cohomology for closure {k} changed: {:?}",
                old[k].diff(&new[k])
            )));
        }
    }
    Ok(())
}

/// Cancels along `δ_ba`, then checks the defining equations and the paired
/// cohomology of both closures.
pub fn eliminate(tc: &TwistedComplex, pair: (usize, usize)) -> Result<TwistedComplex> {
    let out = eliminate_unchecked(tc, pair)?;
    postcondition(tc, &out)?;
    Ok(out)
}

/// Explodes the complex and cancels unit entries until none is left; the
/// checks run once at the end.
pub fn eliminate_all(tc: &TwistedComplex) -> Result<TwistedComplex> {
    let exploded = explode(tc);
    let mut w = Work::new(&exploded, StructureTables::standard());
    let mut count = 0;
    for a in 0..exploded.len() {
        if !w.alive[a] {
            continue;
        }
        let pivot = w.out[a].keys().copied().find(|&b| w.pivot_inverse(a, b).is_ok());
        if let Some(b) = pivot {
            w.cancel(a, b).expect("pivot was checked");
            count += 1;
        }
    }
    let out = w.finish(tc.mode, tc.cancelled + count)?;
    postcondition(tc, &out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::build_delta;
    use crate::tangle::{build_cube, parse_tangle};

    fn t_cross() -> TwistedComplex {
        let d = parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1]],"orientation":[[2,0,0],[1,0,3]]}"#).unwrap();
        let cube = build_cube(&d);
        build_delta(&cube, cube.counts)
    }

    #[test]
    fn crossing_complex() {
        let tc = t_cross();
        assert_eq!(tc.objects[0], SigmaObject { ell: 0, m: 0, shift: -1, h: 0 });
        assert_eq!(tc.objects[1], SigmaObject { ell: 1, m: 0, shift: -3, h: 1 });
        let e = &tc.delta[&(1, 0)];
        assert_eq!(e.morphism.parts.keys().copied().collect::<Vec<_>>(), [Generator::Q10]);
        let r = verify_twisted(&tc);
        assert!(r.passed());
        assert!(matches!(
            eliminate(&tc, (0, 1)),
            Err(TwistedError::Pivot { .. })
        ));
    }

    #[test]
    fn acyclic_pair_cancels_to_nothing() {
        let o = SigmaObject { ell: 0, m: 1, shift: 0, h: 0 };
        let p = SigmaObject { h: 1, shift: -1, ..o };
        let m = SigmaMorphism::single(F2Matrix::identity(2), Generator::A0);
        let delta = BTreeMap::from([((1, 0), Entry { morphism: m, bidegree: (1, 1) })]);
        let tc = TwistedComplex::new(vec![o, p], delta, Mode::Absolute).unwrap();
        assert!(verify_twisted(&tc).passed());
        let out = eliminate(&tc, (0, 1)).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn stored_bidegree_is_audited() {
        let o = SigmaObject { ell: 0, m: 0, shift: 0, h: 0 };
        let p = SigmaObject { h: 1, ..o };
        let m = SigmaMorphism::single(F2Matrix::identity(1), Generator::A0);
        let delta = BTreeMap::from([((1, 0), Entry { morphism: m, bidegree: (1, 1) })]);
        assert!(matches!(
            TwistedComplex::new(vec![o, p], delta, Mode::Absolute),
            Err(TwistedError::Bidegree { computed: Some((0, 1)), .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let tc = t_cross();
        assert_eq!(TwistedComplex::from_json(&tc.to_json()).unwrap(), tc);
    }

    fn hopf() -> TwistedComplex {
        let d = crate::construct::twist(2, false).oriented(0).unwrap();
        crate::pipeline::twisted_complex(&d, false)
    }

    #[test]
    fn hopf_square_cancels() {
        let tc = hopf();
        assert_eq!(tc.len(), 4);
        assert_eq!(tc.delta.len(), 4);
        let r = verify_twisted(&tc);
        assert!(r.passed(), "{:?}", r.violations);
        // the two composites around the square are equal, so they cancel
        let path = |k: usize| tc.delta[&(3, k)].morphism.compose(&tc.delta[&(k, 0)].morphism, StructureTables::standard());
        assert!(!path(1).is_zero());
        assert_eq!(path(1), path(2));
    }

    #[test]
    fn corrupted_edge_is_reported() {
        let mut tc = hopf();
        let e = tc.delta.get_mut(&(3, 1)).unwrap();
        let (g, m) = e.morphism.parts.iter().next().map(|(g, m)| (*g, m.clone())).unwrap();
        let mut broken = m.clone();
        let (r, c) = m.entries().next().unwrap();
        broken.toggle(r, c);
        e.morphism.parts.insert(g, broken);
        let r = verify_twisted(&tc);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.check.starts_with("mu2") && v.inputs == ["3", "0"]));
    }

    #[test]
    fn single_checked_cancellation() {
        let tc = explode(&hopf());
        let (b, a) = tc
            .delta
            .iter()
            .find(|(_, e)| e.morphism.parts.keys().any(|g| g.is_unit()))
            .map(|(k, _)| *k)
            .unwrap();
        let out = eliminate(&tc, (a, b)).unwrap();
        assert_eq!(out.len(), tc.len() - 2);
        assert_eq!(out.cancelled, 1);
    }
}
