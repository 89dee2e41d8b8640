//! Bigraded rank tables and Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Absolute,
    Relative,
}

/// Ranks indexed by (first grading `r`, homological grading `s`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub ranks: BTreeMap<(i32, i32), usize>,
    pub mode: Mode,
}

#[derive(Serialize, Deserialize)]
struct RankTableFile {
    ranks: Vec<(i32, i32, usize)>,
    mode: Mode,
}

impl RankTable {
    pub fn new(mode: Mode) -> Self {
        Self { ranks: BTreeMap::new(), mode }
    }

    pub fn from_entries(mode: Mode, entries: &[((i32, i32), usize)]) -> Self {
        let mut t = Self::new(mode);
        for &(k, v) in entries {
            t.add(k, v);
        }
        t
    }

    pub fn add(&mut self, at: (i32, i32), rank: usize) {
        if rank > 0 {
            *self.ranks.entry(at).or_insert(0) += rank;
        }
    }

    pub fn get(&self, r: i32, s: i32) -> usize {
        self.ranks.get(&(r, s)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn translate(&self, dr: i32, ds: i32) -> Self {
        Self {
            ranks: self.ranks.iter().map(|(&(r, s), &v)| ((r + dr, s + ds), v)).collect(),
            mode: self.mode,
        }
    }

    /// Bidegrees where the two tables differ.
    pub fn diff(&self, other: &Self) -> Vec<((i32, i32), usize, usize)> {
        let mut keys: Vec<(i32, i32)> = self.ranks.keys().chain(other.ranks.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|k| {
                let (a, b) = (self.get(k.0, k.1), other.get(k.0, k.1));
                (a != b).then_some((k, a, b))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RankTableFile {
            ranks: self.ranks.iter().map(|(&(r, s), &v)| (r, s, v)).collect(),
            mode: self.mode,
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> serde_json::Result<Self> {
        let f: RankTableFile = serde_json::from_value(v.clone())?;
        let mut t = Self::new(f.mode);
        for (r, s, v) in f.ranks {
            t.add((r, s), v);
        }
        Ok(t)
    }

    /// Plain text grid: rows are first gradings (descending), columns are
    /// homological gradings.
    pub fn to_table(&self) -> String {
        if self.ranks.is_empty() {
            return "(zero)\n".into();
        }
        let rs: Vec<i32> = self.ranks.keys().map(|k| k.0).collect();
        let ss: Vec<i32> = self.ranks.keys().map(|k| k.1).collect();
        let (rmin, rmax) = (*rs.iter().min().unwrap(), *rs.iter().max().unwrap());
        let (smin, smax) = (*ss.iter().min().unwrap(), *ss.iter().max().unwrap());
        let mut out = format!("{:>5} |", "r\\s");
        for s in smin..=smax {
            out += &format!("{s:>4}");
        }
        out += "\n";
        out += &"-".repeat(7 + 4 * (smax - smin + 1) as usize);
        out += "\n";
        for r in (rmin..=rmax).rev() {
            out += &format!("{r:>5} |");
            for s in smin..=smax {
                let v = self.get(r, s);
                if v == 0 {
                    out += &format!("{:>4}", ".");
                } else {
                    out += &format!("{v:>4}");
                }
            }
            out += "\n";
        }
        out
    }
}

/// Integer Laurent polynomial in one variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly(pub BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: i64, e: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    pub fn add_term(&mut self, c: i64, e: i32) {
        let v = self.0.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.0 {
            out.add_term(c, e);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::monomial(1, 0), |acc, _| acc.mul(self))
    }

    pub fn coefficient(&self, e: i32) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> Vec<(i32, i64)> {
        self.0.iter().map(|(e, c)| (*e, *c)).collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.0.iter().rev() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let coef = if a == 1 && e != 0 { String::new() } else { a.to_string() };
            let var = match e {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{e}"),
            };
            if first {
                write!(f, "{sign}{coef}{var}")?;
            } else {
                write!(f, " {sign} {coef}{var}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let t = RankTable::from_entries(Mode::Absolute, &[((0, 0), 1), ((-2, 0), 1)]);
        assert_eq!(RankTable::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(t.to_json()["mode"], "absolute");
    }

    #[test]
    fn differences() {
        let a = RankTable::from_entries(Mode::Absolute, &[((-1, 0), 1)]);
        let b = a.translate(1, 0);
        assert_eq!(a.diff(&b).len(), 2);
        assert!(a.diff(&a).is_empty());
    }

    #[test]
    fn polynomial_display() {
        let p = LaurentPoly::monomial(1, -1).add(&LaurentPoly::monomial(-1, 3));
        assert_eq!(p.to_string(), "-q^3 + q^-1");
        assert_eq!(LaurentPoly::monomial(1, 0).to_string(), "1");
    }
}
