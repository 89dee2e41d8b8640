//! The functor from dotted cobordisms to the additive enlargement of the
//! pillowcase category, evaluated on the saddles of a cube of resolutions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{small, tensor_degree, tensor_permutation, F2Matrix};
use crate::pillowcase::{Generator, Obj, Report, StructureTables};
use crate::ranks::Mode;
use crate::tangle::{ResolutionCube, SaddleKind};
use crate::twisted::{Entry, TwistedComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("{kind:?} needs at least {need} circles, source has {have}")]
    Arity { kind: SaddleKind, need: usize, have: usize },
    #[error("summand {0} has the wrong type")]
    IllTyped(String),
    #[error("matrix of size {got:?} where {want:?} was expected")]
    Dimension { got: (usize, usize), want: (usize, usize) },
}

pub type Result<T> = std::result::Result<T, FunctorError>;

/// `A^{⊗m}{shift} ⊗ L_ell` at homological index `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaObject {
    pub ell: u8,
    pub m: usize,
    pub shift: i32,
    pub h: i32,
}

impl SigmaObject {
    pub fn obj(&self) -> Obj {
        Obj::from_index(self.ell)
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Degree of basis vector `v` after the shift.
    pub fn degree(&self, v: usize) -> i32 {
        tensor_degree(self.m, v) - self.shift
    }
}

/// `Σ matrix_g ⊗ g`, with every `g` of one hom type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMorphism {
    pub source: Obj,
    pub target: Obj,
    pub rows: usize,
    pub cols: usize,
    pub parts: BTreeMap<Generator, F2Matrix>,
}

impl SigmaMorphism {
    pub fn zero(source: Obj, target: Obj, rows: usize, cols: usize) -> Self {
        Self { source, target, rows, cols, parts: BTreeMap::new() }
    }

    pub fn single(matrix: F2Matrix, g: Generator) -> Self {
        let mut out = Self::zero(g.source(), g.target(), matrix.rows(), matrix.cols());
        out.add_part(g, &matrix).expect("typed by construction");
        out
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, g: Generator, m: &F2Matrix) -> Result<()> {
        if (g.source(), g.target()) != (self.source, self.target) {
            return Err(FunctorError::IllTyped(g.name().into()));
        }
        if (m.rows(), m.cols()) != (self.rows, self.cols) {
            return Err(FunctorError::Dimension { got: (m.rows(), m.cols()), want: (self.rows, self.cols) });
        }
        let sum = match self.parts.get(&g) {
            Some(old) => old.add(m).expect("same shape"),
            None => m.clone(),
        };
        if sum.is_zero() {
            self.parts.remove(&g);
        } else {
            self.parts.insert(g, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (g, m) in &other.parts {
            out.add_part(*g, m)?;
        }
        Ok(out)
    }

    /// `self ∘ other` through `mu2` of the tables.
    pub fn compose(&self, other: &Self, t: &StructureTables) -> Self {
        assert_eq!(other.target, self.source, "composing across objects");
        let mut out = Self::zero(other.source, self.target, self.rows, other.cols);
        for (g1, m1) in &self.parts {
            for (g2, m2) in &other.parts {
                let v = t.mu2_gen(*g1, *g2);
                if v.is_zero() {
                    continue;
                }
                let m = m1.mul(m2).expect("matching sizes");
                if m.is_zero() {
                    continue;
                }
                for g in v.gens() {
                    out.add_part(g, &m).expect("typed");
                }
            }
        }
        out
    }

    /// `mu3(self, y, z)`.
    pub fn mu3(&self, y: &Self, z: &Self, t: &StructureTables) -> Self {
        assert!(y.target == self.source && z.target == y.source, "mu3 across objects");
        let mut out = Self::zero(z.source, self.target, self.rows, z.cols);
        for (g1, m1) in &self.parts {
            for (g2, m2) in &y.parts {
                for (g3, m3) in &z.parts {
                    let v = t.mu3_gen(*g1, *g2, *g3);
                    if v.is_zero() {
                        continue;
                    }
                    let m = m1.mul(m2).and_then(|m| m.mul(m3)).expect("matching sizes");
                    if m.is_zero() {
                        continue;
                    }
                    for g in v.gens() {
                        out.add_part(g, &m).expect("typed");
                    }
                }
            }
        }
        out
    }

    /// First coordinate of the bidegree between the given objects, if
    /// homogeneous.
    pub fn degree(&self, source: &SigmaObject, target: &SigmaObject) -> Option<i32> {
        let mut deg = None;
        for (g, m) in &self.parts {
            for (r, c) in m.entries() {
                let d = target.degree(r) - source.degree(c) + g.degree();
                if *deg.get_or_insert(d) != d {
                    return None;
                }
            }
        }
        deg
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(|(g, m)| format!("{}x{}[{}]⊗{g}", m.rows(), m.cols(), m.nnz())).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Template value on an elementary saddle, the consumed circles sitting in
/// the last tensor positions of the source.
pub fn f1_elementary(kind: SaddleKind, m_src: usize, ell_src: u8) -> Result<SigmaMorphism> {
    let (consumed, _) = kind.arity();
    if m_src < consumed {
        return Err(FunctorError::Arity { kind, need: consumed, have: m_src });
    }
    let id = F2Matrix::identity(1 << (m_src - consumed));
    let with = |m: F2Matrix| id.kron(&m);
    let (a, c) = (Generator::a(ell_src), Generator::c(ell_src));
    use SaddleKind::*;
    let parts: Vec<(F2Matrix, Generator)> = match kind {
        ArcArc => {
            let g = if ell_src == 0 { Generator::Q10 } else { Generator::P01 };
            vec![(id.clone(), g)]
        }
        EarringArcCircleSplit => vec![(with(small::eta_dot()), a)],
        EarringArcCircleMerge => vec![(with(small::eps_dot()), a)],
        PlainArcCircleSplit => vec![(with(small::eta_dot()), a), (with(small::eta()), c)],
        PlainArcCircleMerge => vec![(with(small::eps_dot()), a), (with(small::eps()), c)],
        CircleCircleMerge => vec![(with(small::merge()), a)],
        CircleSplit => vec![(with(small::split()), a)],
    };
    let (m0, g0) = &parts[0];
    let mut out = SigmaMorphism::zero(g0.source(), g0.target(), m0.rows(), m0.cols());
    for (m, g) in &parts {
        out.add_part(*g, m)?;
    }
    Ok(out)
}

/// The twisted complex of a cube. `counts` are `(n⁺, n⁻)`, or `(0, 0)` for
/// relative gradings.
pub fn build_delta(cube: &ResolutionCube, counts: (usize, usize)) -> TwistedComplex {
    let (np, nn) = (counts.0 as i32, counts.1 as i32);
    let objects: Vec<SigmaObject> = cube
        .vertices
        .iter()
        .enumerate()
        .map(|(s, v)| {
            let h = s.count_ones() as i32 - nn;
            SigmaObject { ell: v.ell, m: v.m(), shift: nn - np - 2 * h, h }
        })
        .collect();
    let entries: Vec<((usize, usize), SigmaMorphism)> = cube
        .edges
        .par_iter()
        .map(|e| {
            let (src, tgt) = (&objects[e.source], &objects[e.target]);
            let t = f1_elementary(e.kind, src.m, src.ell).expect("cube edges are legal");
            let p_in = tensor_permutation(src.m, &e.perm_in).expect("edge permutation");
            let p_out = tensor_permutation(tgt.m, &e.perm_out).expect("edge permutation");
            let mut out = SigmaMorphism::zero(t.source, t.target, tgt.dim(), src.dim());
            for (g, m) in &t.parts {
                let full = p_out.mul(m).and_then(|x| x.mul(&p_in)).expect("edge sizes");
                out.add_part(*g, &full).expect("typed");
            }
            ((e.target, e.source), out)
        })
        .collect();
    let mode = if cube.oriented && counts == cube.counts { Mode::Absolute } else { Mode::Relative };
    let entries = entries.into_iter().map(|(k, m)| (k, Entry { morphism: m, bidegree: (1, 1) })).collect();
    TwistedComplex::new(objects, entries, mode).expect("fresh complexes have bidegree (1, 1)")
}

/// The identities between the Frobenius structure maps, as matrix
/// equations. `S` uses `ε̇ ⊗ η̇ ⊗ η` in its middle term: that is what
/// `S(1) = 1⊗x + x⊗1` gives.
pub fn frobenius_identities() -> Report {
    let (e, ed, n, nd) = (small::eps(), small::eps_dot(), small::eta(), small::eta_dot());
    let mul = |a: &F2Matrix, b: &F2Matrix| a.mul(b).expect("sizes");
    let add = |a: &F2Matrix, b: &F2Matrix| a.add(b).expect("sizes");
    let mut r = Report::new("frobenius identities");
    let mut eq = |name: &str, lhs: F2Matrix, rhs: F2Matrix| {
        let ok = lhs == rhs;
        r.check(ok, name, vec![], format!("{:?} vs {:?}", lhs.entries().collect::<Vec<_>>(), rhs.entries().collect::<Vec<_>>()));
    };
    eq("ε η = 0", mul(&e, &n), F2Matrix::zero(1, 1));
    eq("ε̇ η̇ = 0", mul(&ed, &nd), F2Matrix::zero(1, 1));
    eq("ε η̇ = id", mul(&e, &nd), F2Matrix::identity(1));
    eq("ε̇ η = id", mul(&ed, &n), F2Matrix::identity(1));
    eq("η ε̇ + η̇ ε = id", add(&mul(&n, &ed), &mul(&nd, &e)), F2Matrix::identity(2));
    // a ⊗ b ⊗ c with a, b: A -> F and c: F -> A is c ∘ (a ⊗ b)
    let m = [(&ed, &ed, &n), (&e, &ed, &nd), (&ed, &e, &nd)]
        .iter()
        .fold(F2Matrix::zero(2, 4), |acc, (a, b, c)| add(&acc, &mul(c, &a.kron(b))));
    eq("M expansion", m, small::merge());
    // a ⊗ b ⊗ c with a: A -> F and b, c: F -> A is (b ⊗ c) ∘ a
    let s = [(&ed, &n, &nd), (&ed, &nd, &n), (&e, &nd, &nd)]
        .iter()
        .fold(F2Matrix::zero(4, 2), |acc, (a, b, c)| add(&acc, &mul(&b.kron(c), a)));
    eq("S expansion", s, small::split());
    r
}
