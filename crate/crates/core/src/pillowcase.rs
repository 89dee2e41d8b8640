//! The A∞-category on the two pillowcase arcs `L0`, `L1` as finite data,
//! together with the test modules `W0`, `W1` and exhaustive verifiers.
//!
//! `mu2(x, y)` is "x after y": `y: B -> C`, `x: C -> D`.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PillowcaseError {
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
    #[error("ill-typed table entry: {0}")]
    IllTyped(String),
}

pub type Result<T> = std::result::Result<T, PillowcaseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Obj {
    L0,
    L1,
}

impl Obj {
    pub fn from_index(l: u8) -> Obj {
        if l == 0 {
            Obj::L0
        } else {
            Obj::L1
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    A0,
    B0,
    C0,
    D0,
    A1,
    B1,
    C1,
    D1,
    P01,
    Q01,
    P10,
    Q10,
}

use Generator::*;

impl Generator {
    pub const ALL: [Generator; 12] = [A0, B0, C0, D0, A1, B1, C1, D1, P01, Q01, P10, Q10];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["a0", "b0", "c0", "d0", "a1", "b1", "c1", "d1", "p01", "q01", "p10", "q10"][self.index()]
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| PillowcaseError::UnknownGenerator(s.to_string()))
    }

    pub fn source(self) -> Obj {
        match self {
            A0 | B0 | C0 | D0 | P10 | Q10 => Obj::L0,
            _ => Obj::L1,
        }
    }

    pub fn target(self) -> Obj {
        match self {
            A0 | B0 | C0 | D0 | P01 | Q01 => Obj::L0,
            _ => Obj::L1,
        }
    }

    pub fn degree(self) -> i32 {
        match self {
            A0 | A1 => 0,
            B0 | B1 => 3,
            C0 | C1 => -2,
            D0 | D1 => 1,
            P01 | Q10 => -1,
            Q01 | P10 => 2,
        }
    }

    pub fn unit(o: Obj) -> Generator {
        match o {
            Obj::L0 => A0,
            Obj::L1 => A1,
        }
    }

    pub fn is_unit(self) -> bool {
        matches!(self, A0 | A1)
    }

    pub fn a(l: u8) -> Generator {
        if l == 0 {
            A0
        } else {
            A1
        }
    }

    pub fn c(l: u8) -> Generator {
        if l == 0 {
            C0
        } else {
            C1
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An F2-combination of generators in a single hom space `(source, target)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: Obj,
    pub target: Obj,
    bits: u16,
}

impl Morphism {
    pub fn zero(source: Obj, target: Obj) -> Self {
        Self { source, target, bits: 0 }
    }

    pub fn gen(g: Generator) -> Self {
        Self { source: g.source(), target: g.target(), bits: 1 << g.index() }
    }

    pub fn sum(gs: &[Generator]) -> Result<Self> {
        let mut it = gs.iter();
        let first = *it.next().ok_or_else(|| PillowcaseError::IllTyped("empty sum".into()))?;
        let mut out = Self::gen(first);
        for &g in it {
            out = out.add(&Self::gen(g))?;
        }
        Ok(out)
    }

    fn from_bits(source: Obj, target: Obj, bits: u16) -> Self {
        Self { source, target, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.bits >> g.index() & 1 == 1
    }

    pub fn gens(&self) -> impl Iterator<Item = Generator> + '_ {
        Generator::ALL.into_iter().filter(|g| self.contains(*g))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(PillowcaseError::IllTyped(format!("{self} + {other}")));
        }
        Ok(Self { bits: self.bits ^ other.bits, ..*self })
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<_> = self.gens().map(|g| g.name()).collect();
        write!(f, "{}", names.join("+"))
    }
}

// ---------------------------------------------------------------------------
// Tables

const MU2: [(Generator, Generator, Generator); 14] = [
    (B0, C0, D0),
    (C0, B0, D0),
    (B1, C1, D1),
    (C1, B1, D1),
    (B0, P01, Q01),
    (P01, B1, Q01),
    (Q10, B0, P10),
    (B1, Q10, P10),
    (P01, P10, D0),
    (Q01, Q10, D0),
    (Q10, Q01, D1),
    (P10, P01, D1),
    (P01, Q10, C0),
    (Q10, P01, C1),
];

const MU3: [(Generator, Generator, Generator, Generator); 24] = [
    (Q10, B0, P01, A1),
    (P01, Q10, B0, A0),
    (Q01, Q10, B0, B0),
    (P01, P10, B0, B0),
    (P10, P01, B1, B1),
    (B1, Q10, Q01, B1),
    (C0, B0, C0, C0),
    (C0, Q01, Q10, C0),
    (C0, P01, P10, C0),
    (C1, B1, C1, C1),
    (C1, P10, P01, C1),
    (Q10, Q01, C1, C1),
    (D0, C0, B0, D0),
    (B0, C0, D0, D0),
    (Q01, Q10, D0, D0),
    (P01, P10, D0, D0),
    (B1, C1, D1, D1),
    (D1, C1, B1, D1),
    (D1, Q10, Q01, D1),
    (P10, P01, D1, D1),
    (P01, P10, Q01, Q01),
    (P10, P01, P10, P10),
    (Q10, Q01, Q10, Q10),
    (Q10, P01, P10, Q10),
];

/// Structure maps of the category. Values are stored as bit sets over the
/// generators; typing of each entry is enforced on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTables {
    mu2: [[u16; 12]; 12],
    mu3: Vec<u16>,
}

fn idx3(x: Generator, y: Generator, z: Generator) -> usize {
    (x.index() * 12 + y.index()) * 12 + z.index()
}

impl StructureTables {
    pub fn empty() -> Self {
        Self { mu2: [[0; 12]; 12], mu3: vec![0; 12 * 12 * 12] }
    }

    /// The tables of the pillowcase category, with strict units.
    pub fn standard() -> &'static StructureTables {
        static T: OnceLock<StructureTables> = OnceLock::new();
        T.get_or_init(|| {
            let mut t = StructureTables::empty();
            for g in Generator::ALL {
                t.set_mu2(Generator::unit(g.target()), g, Morphism::gen(g)).unwrap();
                t.set_mu2(g, Generator::unit(g.source()), Morphism::gen(g)).unwrap();
            }
            for (x, y, z) in MU2 {
                t.set_mu2(x, y, Morphism::gen(z)).unwrap();
            }
            for (x, y, z, w) in MU3 {
                t.set_mu3(x, y, z, Morphism::gen(w)).unwrap();
            }
            t
        })
    }

    pub fn set_mu2(&mut self, x: Generator, y: Generator, v: Morphism) -> Result<()> {
        if y.target() != x.source() {
            return Err(PillowcaseError::IllTyped(format!("mu2({x}, {y})")));
        }
        if !v.is_zero() && (v.source, v.target) != (y.source(), x.target()) {
            return Err(PillowcaseError::IllTyped(format!("mu2({x}, {y}) = {v}")));
        }
        self.mu2[x.index()][y.index()] = v.bits;
        Ok(())
    }

    pub fn set_mu3(&mut self, x: Generator, y: Generator, z: Generator, v: Morphism) -> Result<()> {
        if z.target() != y.source() || y.target() != x.source() {
            return Err(PillowcaseError::IllTyped(format!("mu3({x}, {y}, {z})")));
        }
        if !v.is_zero() && (v.source, v.target) != (z.source(), x.target()) {
            return Err(PillowcaseError::IllTyped(format!("mu3({x}, {y}, {z}) = {v}")));
        }
        self.mu3[idx3(x, y, z)] = v.bits;
        Ok(())
    }

    pub fn mu2_gen(&self, x: Generator, y: Generator) -> Morphism {
        Morphism::from_bits(y.source(), x.target(), self.mu2[x.index()][y.index()])
    }

    pub fn mu3_gen(&self, x: Generator, y: Generator, z: Generator) -> Morphism {
        Morphism::from_bits(z.source(), x.target(), self.mu3[idx3(x, y, z)])
    }

    pub fn mu2(&self, x: &Morphism, y: &Morphism) -> Result<Morphism> {
        if y.target != x.source {
            return Err(PillowcaseError::NotComposable(format!("mu2({x}, {y})")));
        }
        let mut bits = 0;
        for gx in x.gens() {
            for gy in y.gens() {
                bits ^= self.mu2[gx.index()][gy.index()];
            }
        }
        Ok(Morphism::from_bits(y.source, x.target, bits))
    }

    pub fn mu3(&self, x: &Morphism, y: &Morphism, z: &Morphism) -> Result<Morphism> {
        if z.target != y.source || y.target != x.source {
            return Err(PillowcaseError::NotComposable(format!("mu3({x}, {y}, {z})")));
        }
        let mut bits = 0;
        for gx in x.gens() {
            for gy in y.gens() {
                for gz in z.gens() {
                    bits ^= self.mu3[idx3(gx, gy, gz)];
                }
            }
        }
        Ok(Morphism::from_bits(z.source, x.target, bits))
    }

    /// `mu^n` for any `n`; only `n = 2, 3` are non-zero.
    pub fn mu(&self, xs: &[Morphism]) -> Result<Morphism> {
        for w in xs.windows(2) {
            if w[1].target != w[0].source {
                return Err(PillowcaseError::NotComposable(format!("mu{}", xs.len())));
            }
        }
        match xs {
            [] => Err(PillowcaseError::NotComposable("mu0".into())),
            [x, y] => self.mu2(x, y),
            [x, y, z] => self.mu3(x, y, z),
            _ => Ok(Morphism::zero(xs[xs.len() - 1].source, xs[0].target)),
        }
    }

    pub fn mu2_entries(&self) -> Vec<(Generator, Generator, Morphism)> {
        let mut out = Vec::new();
        for x in Generator::ALL {
            for y in Generator::ALL {
                if y.target() == x.source() {
                    let v = self.mu2_gen(x, y);
                    if !v.is_zero() {
                        out.push((x, y, v));
                    }
                }
            }
        }
        out
    }

    pub fn mu3_entries(&self) -> Vec<(Generator, Generator, Generator, Morphism)> {
        let mut out = Vec::new();
        for x in Generator::ALL {
            for y in Generator::ALL {
                for z in Generator::ALL {
                    if z.target() == y.source() && y.target() == x.source() {
                        let v = self.mu3_gen(x, y, z);
                        if !v.is_zero() {
                            out.push((x, y, z, v));
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn mu2(x: &Morphism, y: &Morphism) -> Result<Morphism> {
    StructureTables::standard().mu2(x, y)
}

pub fn mu3(x: &Morphism, y: &Morphism, z: &Morphism) -> Result<Morphism> {
    StructureTables::standard().mu3(x, y, z)
}

// ---------------------------------------------------------------------------
// Test modules

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleGenerator {
    Alpha,
    Beta,
    Gamma,
    Tau,
    Rho,
    Sigma,
}

use ModuleGenerator::*;

impl ModuleGenerator {
    pub const ALL: [ModuleGenerator; 6] = [Alpha, Beta, Gamma, Tau, Rho, Sigma];

    pub fn curve(self) -> u8 {
        match self {
            Alpha | Beta | Gamma => 0,
            _ => 1,
        }
    }

    pub fn object(self) -> Obj {
        match self {
            Alpha | Beta | Tau => Obj::L0,
            _ => Obj::L1,
        }
    }

    pub fn degree(self) -> i32 {
        match self {
            Alpha | Rho => 0,
            Beta | Sigma => -2,
            Gamma | Tau => -1,
        }
    }

    pub fn name(self) -> &'static str {
        ["alpha", "beta", "gamma", "tau", "rho", "sigma"][self as usize]
    }

    pub fn symbol(self) -> &'static str {
        ["α", "β", "γ", "τ", "ρ", "σ"][self as usize]
    }

    /// Basis of `(W_k, L_l)`.
    pub fn basis(k: u8, l: Obj) -> Vec<ModuleGenerator> {
        Self::ALL.into_iter().filter(|m| m.curve() == k && m.object() == l).collect()
    }
}

/// An element of `(W_k, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    pub curve: u8,
    pub object: Obj,
    bits: u8,
}

impl ModuleElement {
    pub fn zero(curve: u8, object: Obj) -> Self {
        Self { curve, object, bits: 0 }
    }

    pub fn gen(m: ModuleGenerator) -> Self {
        Self { curve: m.curve(), object: m.object(), bits: 1 << m as u8 }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn gens(&self) -> impl Iterator<Item = ModuleGenerator> + '_ {
        ModuleGenerator::ALL.into_iter().filter(|m| self.bits >> *m as u8 & 1 == 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.curve, self.object) != (other.curve, other.object) {
            return Err(PillowcaseError::IllTyped("module elements in different spaces".into()));
        }
        Ok(Self { bits: self.bits ^ other.bits, ..*self })
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<_> = self.gens().map(|g| g.symbol()).collect();
        write!(f, "{}", names.join("+"))
    }
}

const MOD2: [(Generator, ModuleGenerator, ModuleGenerator); 6] = [
    (C0, Alpha, Beta),
    (Q10, Alpha, Gamma),
    (P01, Gamma, Beta),
    (C1, Rho, Sigma),
    (Q10, Tau, Sigma),
    (P01, Rho, Tau),
];

const MOD3: [(Generator, Generator, ModuleGenerator, ModuleGenerator); 9] = [
    (B0, P01, Gamma, Alpha),
    (Q01, Q10, Alpha, Alpha),
    (C0, B0, Beta, Beta),
    (P01, P10, Alpha, Alpha),
    (B1, Q10, Tau, Rho),
    (Q10, Q01, Sigma, Sigma),
    (C1, B1, Sigma, Sigma),
    (P10, P01, Rho, Rho),
    (P01, P10, Tau, Tau),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTables {
    mu2: [[u8; 6]; 12],
    mu3: [[[u8; 6]; 12]; 12],
}

impl ModuleTables {
    pub fn empty() -> Self {
        Self { mu2: [[0; 6]; 12], mu3: [[[0; 6]; 12]; 12] }
    }

    pub fn standard() -> &'static ModuleTables {
        static T: OnceLock<ModuleTables> = OnceLock::new();
        T.get_or_init(|| {
            let mut t = ModuleTables::empty();
            for m in ModuleGenerator::ALL {
                t.set_mu2(Generator::unit(m.object()), m, ModuleElement::gen(m)).unwrap();
            }
            for (x, m, v) in MOD2 {
                t.set_mu2(x, m, ModuleElement::gen(v)).unwrap();
            }
            for (x, y, m, v) in MOD3 {
                t.set_mu3(x, y, m, ModuleElement::gen(v)).unwrap();
            }
            t
        })
    }

    pub fn set_mu2(&mut self, x: Generator, m: ModuleGenerator, v: ModuleElement) -> Result<()> {
        if x.source() != m.object()
            || (!v.is_zero() && (v.curve, v.object) != (m.curve(), x.target()))
        {
            return Err(PillowcaseError::IllTyped(format!("mu2({x}, {})", m.symbol())));
        }
        self.mu2[x.index()][m as usize] = v.bits;
        Ok(())
    }

    pub fn set_mu3(&mut self, x: Generator, y: Generator, m: ModuleGenerator, v: ModuleElement) -> Result<()> {
        if y.source() != m.object()
            || x.source() != y.target()
            || (!v.is_zero() && (v.curve, v.object) != (m.curve(), x.target()))
        {
            return Err(PillowcaseError::IllTyped(format!("mu3({x}, {y}, {})", m.symbol())));
        }
        self.mu3[x.index()][y.index()][m as usize] = v.bits;
        Ok(())
    }

    pub fn mu2_gen(&self, x: Generator, m: ModuleGenerator) -> ModuleElement {
        ModuleElement { curve: m.curve(), object: x.target(), bits: self.mu2[x.index()][m as usize] }
    }

    pub fn mu3_gen(&self, x: Generator, y: Generator, m: ModuleGenerator) -> ModuleElement {
        ModuleElement { curve: m.curve(), object: x.target(), bits: self.mu3[x.index()][y.index()][m as usize] }
    }

    /// Module operation with algebra inputs `xs = [x_n, ..., x_1]` acting on
    /// `m`. Only one and two algebra inputs give non-zero values.
    pub fn act(&self, xs: &[Morphism], m: &ModuleElement) -> Result<ModuleElement> {
        let Some(last) = xs.last() else {
            return Err(PillowcaseError::NotComposable("module operation without inputs".into()));
        };
        if last.source != m.object {
            return Err(PillowcaseError::NotComposable(format!("{last} does not act on {m}")));
        }
        for w in xs.windows(2) {
            if w[1].target != w[0].source {
                return Err(PillowcaseError::NotComposable(format!("{} after {}", w[0], w[1])));
            }
        }
        let mut out = ModuleElement::zero(m.curve, xs[0].target);
        match xs {
            [x] => {
                for gx in x.gens() {
                    for gm in m.gens() {
                        out.bits ^= self.mu2[gx.index()][gm as usize];
                    }
                }
            }
            [x, y] => {
                for gx in x.gens() {
                    for gy in y.gens() {
                        for gm in m.gens() {
                            out.bits ^= self.mu3[gx.index()][gy.index()][gm as usize];
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }
}

/// `module_mu(k, xs, m)` on the standard tables.
pub fn module_mu(k: u8, xs: &[Morphism], m: &ModuleElement) -> Result<ModuleElement> {
    if m.curve != k {
        return Err(PillowcaseError::NotComposable(format!("{m} is not in W{k}")));
    }
    ModuleTables::standard().act(xs, m)
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub inputs: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), checked: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&mut self, ok: bool, check: &str, inputs: Vec<String>, value: String) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { check: check.into(), inputs, value });
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

/// All composable sequences `[x_n, ..., x_1]` of length `n` (as generators).
pub fn composable_sequences(n: usize) -> Vec<Vec<Generator>> {
    let mut seqs: Vec<Vec<Generator>> = Generator::ALL.iter().map(|g| vec![*g]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for s in &seqs {
            let head = s[0];
            for g in Generator::ALL {
                if g.source() == head.target() {
                    let mut t = Vec::with_capacity(s.len() + 1);
                    t.push(g);
                    t.extend_from_slice(s);
                    next.push(t);
                }
            }
        }
        seqs = next;
    }
    seqs
}

fn names(gs: &[Generator]) -> Vec<String> {
    gs.iter().map(|g| g.name().to_string()).collect()
}

/// Left-hand side of the A∞ relation on `xs`: the sum over all ways to apply
/// an inner `mu^k` to a consecutive block and an outer `mu` to the result.
pub fn ainfty_relation(t: &StructureTables, xs: &[Morphism]) -> Morphism {
    let n = xs.len();
    let mut total = Morphism::zero(xs[n - 1].source, xs[0].target);
    for k in 2..=3.min(n) {
        for start in 0..=n - k {
            let inner = t.mu(&xs[start..start + k]).expect("composable");
            if inner.is_zero() {
                continue;
            }
            let mut outer: Vec<Morphism> = xs[..start].to_vec();
            outer.push(inner);
            outer.extend_from_slice(&xs[start + k..]);
            if outer.len() < 2 {
                continue;
            }
            let v = t.mu(&outer).expect("composable");
            total = total.add(&v).expect("same hom space");
        }
    }
    total
}

/// Exhaustive check of the A∞ relations for sequences of length 3, 4, 5, of
/// degree homogeneity of every table entry and of strict unitality.
pub fn verify_ainfty_with(t: &StructureTables) -> Report {
    let mut report = Report::new("ainfty");
    for (x, y, v) in t.mu2_entries() {
        for g in v.gens() {
            report.check(
                g.degree() == x.degree() + y.degree(),
                "degree mu2",
                names(&[x, y]),
                v.to_string(),
            );
        }
    }
    for (x, y, z, v) in t.mu3_entries() {
        for g in v.gens() {
            report.check(
                g.degree() == x.degree() + y.degree() + z.degree() - 1,
                "degree mu3",
                names(&[x, y, z]),
                v.to_string(),
            );
        }
    }
    for g in Generator::ALL {
        let left = t.mu2_gen(Generator::unit(g.target()), g);
        let right = t.mu2_gen(g, Generator::unit(g.source()));
        report.check(left == Morphism::gen(g), "left unit", names(&[g]), left.to_string());
        report.check(right == Morphism::gen(g), "right unit", names(&[g]), right.to_string());
    }
    for s in composable_sequences(3) {
        if s.iter().any(|g| g.is_unit()) {
            let v = t.mu3_gen(s[0], s[1], s[2]);
            report.check(v.is_zero(), "unit in mu3", names(&s), v.to_string());
        }
    }
    for n in 3..=5 {
        let seqs = composable_sequences(n);
        let part: Vec<Report> = seqs
            .par_chunks(512)
            .map(|chunk| {
                let mut r = Report::new("");
                for s in chunk {
                    let xs: Vec<Morphism> = s.iter().map(|g| Morphism::gen(*g)).collect();
                    let v = ainfty_relation(t, &xs);
                    r.check(v.is_zero(), &format!("relation d={n}"), names(s), v.to_string());
                }
                r
            })
            .collect();
        for r in part {
            report.merge(r);
        }
    }
    report
}

pub fn verify_ainfty() -> Report {
    verify_ainfty_with(StructureTables::standard())
}

/// Left-hand side of the module relation on `(x_n, ..., x_1, m)`.
pub fn module_relation(
    t: &StructureTables,
    mt: &ModuleTables,
    xs: &[Morphism],
    m: &ModuleElement,
) -> ModuleElement {
    let n = xs.len();
    let mut total = ModuleElement::zero(m.curve, xs[0].target);
    // inner module operation on x_i..x_1, m; outer on the rest
    for i in 1..n {
        let inner = mt.act(&xs[n - i..], m).expect("composable");
        if inner.is_zero() {
            continue;
        }
        let outer = mt.act(&xs[..n - i], &inner).expect("composable");
        total = total.add(&outer).unwrap();
    }
    // category operation on a consecutive block of algebra inputs
    for k in 2..=3.min(n) {
        for start in 0..=n - k {
            let inner = t.mu(&xs[start..start + k]).expect("composable");
            if inner.is_zero() {
                continue;
            }
            let mut outer: Vec<Morphism> = xs[..start].to_vec();
            outer.push(inner);
            outer.extend_from_slice(&xs[start + k..]);
            let v = mt.act(&outer, m).expect("composable");
            total = total.add(&v).unwrap();
        }
    }
    total
}

pub fn verify_module_relations_with(t: &StructureTables, mt: &ModuleTables, k: u8) -> Report {
    let mut report = Report::new(&format!("module W{k}"));
    for m in ModuleGenerator::ALL.into_iter().filter(|m| m.curve() == k) {
        let e = Generator::unit(m.object());
        let v = mt.act(&[Morphism::gen(e)], &ModuleElement::gen(m)).unwrap();
        report.check(v == ModuleElement::gen(m), "unit action", vec![e.to_string(), m.symbol().into()], v.to_string());
        for x in Generator::ALL.into_iter().filter(|x| x.source() == m.object()) {
            if x.is_unit() {
                continue;
            }
            let v = mt.mu2_gen(x, m);
            for g in v.gens() {
                report.check(
                    g.degree() == x.degree() + m.degree(),
                    "degree module mu2",
                    vec![x.to_string(), m.symbol().into()],
                    v.to_string(),
                );
            }
            for y in Generator::ALL.into_iter().filter(|y| y.source() == x.target()) {
                let v = mt.mu3_gen(y, x, m);
                for g in v.gens() {
                    report.check(
                        g.degree() == y.degree() + x.degree() + m.degree() - 1,
                        "degree module mu3",
                        vec![y.to_string(), x.to_string(), m.symbol().into()],
                        v.to_string(),
                    );
                }
                if x.is_unit() || y.is_unit() {
                    report.check(v.is_zero(), "unit in module mu3", vec![y.to_string(), x.to_string()], v.to_string());
                }
            }
        }
        for n in 2..=4 {
            for s in composable_sequences(n) {
                if s[n - 1].source() != m.object() {
                    continue;
                }
                let xs: Vec<Morphism> = s.iter().map(|g| Morphism::gen(*g)).collect();
                let v = module_relation(t, mt, &xs, &ModuleElement::gen(m));
                let mut inputs = names(&s);
                inputs.push(m.symbol().into());
                report.check(v.is_zero(), &format!("module relation n={n}"), inputs, v.to_string());
            }
        }
    }
    report
}

pub fn verify_module_relations(k: u8) -> Report {
    verify_module_relations_with(StructureTables::standard(), ModuleTables::standard(), k)
}

// ---------------------------------------------------------------------------
// Algebra comparisons

/// A finite-dimensional algebra given by structure constants on a basis.
struct FiniteAlgebra {
    names: Vec<&'static str>,
    degrees: Vec<i32>,
    // product[i][j] = bit set over the basis
    product: Vec<Vec<u32>>,
}

impl FiniteAlgebra {
    fn mul(&self, x: u32, y: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.names.len() {
            if x >> i & 1 == 0 {
                continue;
            }
            for j in 0..self.names.len() {
                if y >> j & 1 == 1 {
                    out ^= self.product[i][j];
                }
            }
        }
        out
    }
}

/// The algebra of the category: products of non-composable pairs are zero.
fn pillowcase_algebra(t: &StructureTables) -> FiniteAlgebra {
    let mut product = vec![vec![0u32; 12]; 12];
    for x in Generator::ALL {
        for y in Generator::ALL {
            if y.target() == x.source() {
                product[x.index()][y.index()] = t.mu2_gen(x, y).bits as u32;
            }
        }
    }
    FiniteAlgebra {
        names: Generator::ALL.iter().map(|g| g.name()).collect(),
        degrees: Generator::ALL.iter().map(|g| g.degree()).collect(),
        product,
    }
}

/// Cobordism algebra with the dot-on-earring relation: basis
/// `A0, C0, A1, C1, S10, S01`.
fn reduced_cobordism_algebra() -> FiniteAlgebra {
    const A0_: usize = 0;
    const C0_: usize = 1;
    const A1_: usize = 2;
    const C1_: usize = 3;
    const S10: usize = 4;
    const S01: usize = 5;
    // (source, target) of each basis element
    let st = [(0, 0), (0, 0), (1, 1), (1, 1), (0, 1), (1, 0)];
    let mut product = vec![vec![0u32; 6]; 6];
    for x in 0..6 {
        for y in 0..6 {
            if st[y].1 != st[x].0 {
                continue;
            }
            let v: u32 = match (x, y) {
                (A0_, _) | (A1_, _) => 1 << y,
                (_, A0_) | (_, A1_) => 1 << x,
                (C0_, C0_) | (C1_, C1_) => 0,
                (C1_, S10) | (C0_, S01) | (S10, C0_) | (S01, C1_) => 0,
                // a tube through the other arc: neck cutting leaves a dot on
                // the unearringed arc
                (S01, S10) => 1 << C0_,
                (S10, S01) => 1 << C1_,
                _ => unreachable!(),
            };
            product[x][y] = v;
        }
    }
    FiniteAlgebra {
        names: vec!["A0", "C0", "A1", "C1", "S10", "S01"],
        degrees: vec![0, -2, 0, -2, -1, -1],
        product,
    }
}

/// Cobordism algebra without the earring relation. Every basis element is a
/// product or saddle cobordism carrying dots; dots square to zero and a tube
/// is cut into the sum of the two ways of placing one dot.
fn unreduced_cobordism_algebra() -> FiniteAlgebra {
    // Each basis element: (source, target, dots) where for endomorphisms
    // dots = (earring, other) and for saddles the single component has dots.0.
    #[derive(Clone, Copy, PartialEq)]
    struct Cob {
        s: u8,
        t: u8,
        e: u8,
        u: u8,
    }
    let basis = [
        Cob { s: 0, t: 0, e: 0, u: 0 }, // A0
        Cob { s: 0, t: 0, e: 1, u: 0 }, // B0
        Cob { s: 0, t: 0, e: 0, u: 1 }, // C0
        Cob { s: 0, t: 0, e: 1, u: 1 }, // D0
        Cob { s: 1, t: 1, e: 0, u: 0 }, // A1
        Cob { s: 1, t: 1, e: 1, u: 0 }, // B1
        Cob { s: 1, t: 1, e: 0, u: 1 }, // C1
        Cob { s: 1, t: 1, e: 1, u: 1 }, // D1
        Cob { s: 1, t: 0, e: 0, u: 0 }, // S01
        Cob { s: 1, t: 0, e: 1, u: 0 }, // S'01
        Cob { s: 0, t: 1, e: 1, u: 0 }, // S'10
        Cob { s: 0, t: 1, e: 0, u: 0 }, // S10
    ];
    let find = |c: Cob| basis.iter().position(|b| *b == c).unwrap();
    let n = basis.len();
    let mut product = vec![vec![0u32; n]; n];
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            if y.t != x.s {
                continue;
            }
            let x_saddle = x.s != x.t;
            let y_saddle = y.s != y.t;
            let v = match (x_saddle, y_saddle) {
                (false, false) => {
                    let (e, u) = (x.e + y.e, x.u + y.u);
                    if e > 1 || u > 1 {
                        0
                    } else {
                        1 << find(Cob { s: y.s, t: x.t, e, u })
                    }
                }
                (true, true) => {
                    // the two saddles glue to a tube joining both arcs
                    let dots = x.e + y.e;
                    match dots {
                        0 => (1 << find(Cob { s: y.s, t: x.t, e: 1, u: 0 }))
                            | (1 << find(Cob { s: y.s, t: x.t, e: 0, u: 1 })),
                        1 => 1 << find(Cob { s: y.s, t: x.t, e: 1, u: 1 }),
                        _ => 0,
                    }
                }
                _ => {
                    // saddle composed with a product: all dots land on the
                    // connected saddle surface
                    let dots = x.e + x.u + y.e + y.u;
                    if dots > 1 {
                        0
                    } else {
                        1 << find(Cob { s: y.s, t: x.t, e: dots, u: 0 })
                    }
                }
            };
            product[i][j] = v;
        }
    }
    FiniteAlgebra {
        names: vec!["A0", "B0", "C0", "D0", "A1", "B1", "C1", "D1", "S01", "S'01", "S'10", "S10"],
        degrees: vec![0, -2, -2, -4, 0, -2, -2, -4, -1, -3, -3, -1],
        product,
    }
}

fn bits_rank(vectors: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn apply_map(images: &[u32], x: u32) -> u32 {
    let mut out = 0;
    for (i, img) in images.iter().enumerate() {
        if x >> i & 1 == 1 {
            out ^= img;
        }
    }
    out
}

fn check_homomorphism(report: &mut Report, label: &str, src: &FiniteAlgebra, dst: &FiniteAlgebra, images: &[u32]) {
    let n = src.names.len();
    for i in 0..n {
        for j in 0..n {
            let lhs = apply_map(images, src.product[i][j]);
            let rhs = dst.mul(images[i], images[j]);
            report.check(
                lhs == rhs,
                &format!("{label} multiplicative"),
                vec![src.names[i].into(), src.names[j].into()],
                format!("{lhs:#b} vs {rhs:#b}"),
            );
        }
    }
}

fn gen_bits(gs: &[Generator]) -> u32 {
    gs.iter().fold(0, |acc, g| acc ^ (1 << g.index()))
}

pub fn verify_algebra_comparisons_with(t: &StructureTables) -> Report {
    let mut report = Report::new("algebra comparisons");
    let al = pillowcase_algebra(t);

    // (1) reduced cobordism algebra embeds, preserving gradings
    let ad = reduced_cobordism_algebra();
    let images: Vec<u32> = [A0, C0, A1, C1, Q10, P01].iter().map(|g| gen_bits(&[*g])).collect();
    check_homomorphism(&mut report, "A_D -> A_L", &ad, &al, &images);
    report.check(bits_rank(&images) == 6, "A_D -> A_L injective", vec![], bits_rank(&images).to_string());
    for (i, img) in images.iter().enumerate() {
        for g in Generator::ALL.into_iter().filter(|g| img >> g.index() & 1 == 1) {
            report.check(
                g.degree() == ad.degrees[i],
                "A_D -> A_L grading",
                vec![ad.names[i].into()],
                g.to_string(),
            );
        }
    }

    // (2) unreduced cobordism algebra is isomorphic, ignoring gradings
    let adt = unreduced_cobordism_algebra();
    let images: Vec<u32> = [
        gen_bits(&[A0]),
        gen_bits(&[B0]),
        gen_bits(&[B0, C0]),
        gen_bits(&[D0]),
        gen_bits(&[A1]),
        gen_bits(&[B1]),
        gen_bits(&[B1, C1]),
        gen_bits(&[D1]),
        gen_bits(&[P01]),
        gen_bits(&[Q01]),
        gen_bits(&[P10]),
        gen_bits(&[Q10]),
    ]
    .to_vec();
    check_homomorphism(&mut report, "A_D~ -> A_L", &adt, &al, &images);
    report.check(bits_rank(&images) == 12, "A_D~ -> A_L bijective", vec![], bits_rank(&images).to_string());

    // (3) graded dimensions differ: degree 3 occurs only in A_L
    let deg3_l = al.degrees.iter().filter(|d| **d == 3).count();
    let deg3_dt = adt.degrees.iter().filter(|d| **d == 3).count();
    report.check(
        deg3_l > 0 && deg3_dt == 0,
        "graded obstruction",
        vec![],
        format!("degree 3: A_L {deg3_l}, A_D~ {deg3_dt}"),
    );
    report
}

pub fn verify_algebra_comparisons() -> Report {
    verify_algebra_comparisons_with(StructureTables::standard())
}

/// Generators in the image of the functor on undotted cobordisms.
pub const IMAGE_F1: [Generator; 6] = [A0, A1, C0, C1, Q10, P01];

/// `mu3` and the module `mu3` vanish on composable inputs drawn from the
/// image of the functor.
pub fn verify_image_vanishing_with(t: &StructureTables, mt: &ModuleTables) -> Report {
    let mut report = Report::new("image vanishing");
    for x in IMAGE_F1 {
        for y in IMAGE_F1.into_iter().filter(|y| y.target() == x.source()) {
            for z in IMAGE_F1.into_iter().filter(|z| z.target() == y.source()) {
                let v = t.mu3_gen(x, y, z);
                report.check(v.is_zero(), "mu3 on image", names(&[x, y, z]), v.to_string());
            }
            for m in ModuleGenerator::ALL.into_iter().filter(|m| m.object() == y.source()) {
                let v = mt.mu3_gen(x, y, m);
                report.check(
                    v.is_zero(),
                    "module mu3 on image",
                    vec![x.to_string(), y.to_string(), m.symbol().into()],
                    v.to_string(),
                );
            }
        }
    }
    report
}

pub fn verify_image_vanishing() -> Report {
    verify_image_vanishing_with(StructureTables::standard(), ModuleTables::standard())
}

// ---------------------------------------------------------------------------
// Export

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TablesDocument {
    pub generators: Vec<GeneratorRecord>,
    pub module_generators: Vec<GeneratorRecord>,
    pub mu2: Vec<(Vec<String>, Vec<String>)>,
    pub mu3: Vec<(Vec<String>, Vec<String>)>,
    pub module_mu2: Vec<(Vec<String>, Vec<String>)>,
    pub module_mu3: Vec<(Vec<String>, Vec<String>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i32,
}

pub fn export_tables() -> TablesDocument {
    let t = StructureTables::standard();
    let mt = ModuleTables::standard();
    let gnames = |m: &Morphism| m.gens().map(|g| g.name().to_string()).collect::<Vec<_>>();
    let mnames = |m: &ModuleElement| m.gens().map(|g| g.name().to_string()).collect::<Vec<_>>();
    let mut module_mu2 = Vec::new();
    let mut module_mu3 = Vec::new();
    for m in ModuleGenerator::ALL {
        for x in Generator::ALL.into_iter().filter(|x| x.source() == m.object()) {
            let v = mt.mu2_gen(x, m);
            if !v.is_zero() {
                module_mu2.push((vec![x.name().into(), m.name().into()], mnames(&v)));
            }
            for y in Generator::ALL.into_iter().filter(|y| y.source() == x.target()) {
                let v = mt.mu3_gen(y, x, m);
                if !v.is_zero() {
                    module_mu3.push((vec![y.name().into(), x.name().into(), m.name().into()], mnames(&v)));
                }
            }
        }
    }
    TablesDocument {
        generators: Generator::ALL
            .iter()
            .map(|g| GeneratorRecord {
                name: g.name().into(),
                source: format!("{:?}", g.source()),
                target: format!("{:?}", g.target()),
                degree: g.degree(),
            })
            .collect(),
        module_generators: ModuleGenerator::ALL
            .iter()
            .map(|m| GeneratorRecord {
                name: m.name().into(),
                source: format!("W{}", m.curve()),
                target: format!("{:?}", m.object()),
                degree: m.degree(),
            })
            .collect(),
        mu2: t
            .mu2_entries()
            .into_iter()
            .map(|(x, y, v)| (vec![x.name().into(), y.name().into()], gnames(&v)))
            .collect(),
        mu3: t
            .mu3_entries()
            .into_iter()
            .map(|(x, y, z, v)| (vec![x.name().into(), y.name().into(), z.name().into()], gnames(&v)))
            .collect(),
        module_mu2,
        module_mu3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: Generator) -> Morphism {
        Morphism::gen(x)
    }

    #[test]
    fn products_from_the_table() {
        assert_eq!(mu2(&g(A0), &g(C0)).unwrap(), g(C0));
        assert_eq!(mu2(&g(P01), &g(Q10)).unwrap(), g(C0));
        assert!(mu2(&g(B0), &g(B0)).unwrap().is_zero());
        assert_eq!(mu2(&g(Q01), &g(Q10)).unwrap(), g(D0));
        assert!(matches!(mu2(&g(A0), &g(A1)), Err(PillowcaseError::NotComposable(_))));
    }

    #[test]
    fn triple_products() {
        assert_eq!(mu3(&g(Q10), &g(B0), &g(P01)).unwrap(), g(A1));
        assert_eq!(mu3(&g(C0), &g(B0), &g(C0)).unwrap(), g(C0));
        assert!(mu3(&g(A0), &g(B0), &g(C0)).unwrap().is_zero());
        assert!(mu3(&g(A0), &g(B1), &g(C0)).is_err());
    }

    #[test]
    fn table_sizes() {
        let t = StructureTables::standard();
        assert_eq!(t.mu3_entries().len(), 24);
        // 14 listed products plus 24 unit actions (a0 a0, a1 a1 counted once each)
        assert_eq!(t.mu2_entries().len(), 14 + 24 - 2);
    }

    #[test]
    fn module_examples() {
        let m = |x| ModuleElement::gen(x);
        assert_eq!(module_mu(0, &[g(C0)], &m(Alpha)).unwrap(), m(Beta));
        assert_eq!(module_mu(0, &[g(B0), g(P01)], &m(Gamma)).unwrap(), m(Alpha));
        assert_eq!(module_mu(1, &[g(Q10)], &m(Tau)).unwrap(), m(Sigma));
        assert!(module_mu(0, &[g(P01)], &m(Alpha)).is_err());
        assert_eq!(module_mu(0, &[g(A1)], &m(Gamma)).unwrap(), m(Gamma));
        assert!(module_mu(0, &[g(P01)], &m(Gamma)).unwrap() == m(Beta));
        assert!(module_mu(0, &[g(Q10), g(C0), g(A0)], &m(Alpha)).unwrap().is_zero());
    }

    #[test]
    fn ill_typed_entries_rejected() {
        let mut t = StructureTables::empty();
        assert!(t.set_mu2(B0, B1, g(D0)).is_err());
        assert!(t.set_mu2(B0, C0, g(D1)).is_err());
        assert!(t.set_mu3(Q10, B0, P01, g(A0)).is_err());
    }

    #[test]
    fn hand_checked_associativity() {
        let t = StructureTables::standard();
        let xs = [g(B0), g(C0), g(B0)];
        assert!(ainfty_relation(t, &xs).is_zero());
        assert!(mu2(&g(B0), &g(C0)).unwrap() == g(D0));
        assert!(mu2(&g(D0), &g(B0)).unwrap().is_zero());
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut t = StructureTables::standard().clone();
        t.set_mu2(P01, Q10, g(D0)).unwrap();
        let r = verify_ainfty_with(&t);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.check == "degree mu2"));
    }

    #[test]
    fn module_relation_mixing_both_tables() {
        let t = StructureTables::standard();
        let mt = ModuleTables::standard();
        let xs = [g(Q10), g(B0), g(P01)];
        assert!(module_relation(t, mt, &xs, &ModuleElement::gen(Gamma)).is_zero());
        // the mu3 term alone is non-zero, so the relation balances it
        let lone = mt.act(&[mu3(&xs[0], &xs[1], &xs[2]).unwrap()], &ModuleElement::gen(Gamma)).unwrap();
        assert_eq!(lone, ModuleElement::gen(Gamma));
    }

    #[test]
    fn graded_dimensions() {
        let mut dims = std::collections::BTreeMap::new();
        for x in Generator::ALL {
            *dims.entry(x.degree()).or_insert(0) += 1;
        }
        assert_eq!(dims, [(3, 2), (2, 2), (1, 2), (0, 2), (-1, 2), (-2, 2)].into_iter().collect());
    }

    #[test]
    fn export_round_trips() {
        let doc = export_tables();
        let text = serde_json::to_string(&doc).unwrap();
        let back: TablesDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, back);
        assert_eq!(doc.mu3.len(), 24);
    }
}

#[cfg(test)]
mod full_checks {
    use super::*;

    #[test]
    fn pristine_tables_pass_everything() {
        let r = verify_ainfty();
        assert!(r.passed(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        for k in 0..2 {
            let r = verify_module_relations(k);
            assert!(r.passed(), "{:?}", &r.violations[..r.violations.len().min(5)]);
        }
        let r = verify_algebra_comparisons();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(verify_image_vanishing().passed());
    }
}
