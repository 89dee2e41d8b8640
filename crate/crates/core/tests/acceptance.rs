//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pillowcase_core::corpus::{load_pairs, load_tangles, MoveFile};
use pillowcase_core::functor::frobenius_identities;
use pillowcase_core::khovanov::jones_from_bracket;
use pillowcase_core::pairing::{cohomology, jones, pair, reduce, BigradedChainComplex, PairingError};
use pillowcase_core::pillowcase::{
    verify_ainfty, verify_algebra_comparisons, verify_image_vanishing, verify_module_relations, ModuleGenerator,
    Report,
};
use pillowcase_core::pipeline::{compare_closure, rank_table, twisted_complex};
use pillowcase_core::ranks::{Mode, RankTable};
use pillowcase_core::tangle::{close, orientation_extends, parse_tangle, writhe_counts, TangleDiagram};
use pillowcase_core::twisted::{eliminate_all, verify_twisted};

type Outcome = Result<String, String>;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn tangles() -> Result<Vec<(String, TangleDiagram)>, String> {
    load_tangles(&corpus().join("tangles")).map_err(|e| e.to_string())
}

fn pairs() -> Result<Vec<MoveFile>, String> {
    load_pairs(&corpus().join("pairs")).map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration, what: String) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{what} in {:.2?}", t))
    } else {
        Err(format!("{what} but took {:.2?}, limit {:?}", t, limit))
    }
}

fn reports(rs: Vec<Report>) -> Result<usize, String> {
    let mut checked = 0;
    for r in rs {
        if let Some(v) = r.violations.first() {
            return Err(format!("{}: {} violations, first {} at {:?} = {}", r.name, r.violations.len(), v.check, v.inputs, v.value));
        }
        checked += r.checked;
    }
    Ok(checked)
}

fn ainfty() -> Outcome {
    let start = Instant::now();
    let n = reports(vec![verify_ainfty(), verify_module_relations(0), verify_module_relations(1)])?;
    within(start, Duration::from_secs(5), format!("{n} relations hold"))
}

fn functor() -> Outcome {
    let start = Instant::now();
    let n = reports(vec![verify_algebra_comparisons(), verify_image_vanishing(), frobenius_identities()])?;
    within(start, Duration::from_secs(1), format!("{n} checks hold"))
}

const T0: &str = r#"{"endpoints":[1,2,2,1],"crossings":[],"orientation":[[1,-1,3],[2,-1,2]]}"#;
const T1: &str = r#"{"endpoints":[1,1,2,2],"crossings":[],"orientation":[[1,-1,1],[2,-1,3]]}"#;

fn base_cases() -> Outcome {
    use ModuleGenerator::*;
    let cases: [(&str, &str, u8, &[(ModuleGenerator, (i32, i32))]); 4] = [
        ("T0", T0, 0, &[(Alpha, (0, 0)), (Beta, (-2, 0))]),
        ("T1", T1, 0, &[(Gamma, (-1, 0))]),
        ("T0", T0, 1, &[(Tau, (-1, 0))]),
        ("T1", T1, 1, &[(Rho, (0, 0)), (Sigma, (-2, 0))]),
    ];
    for (name, text, k, want) in cases {
        let d = parse_tangle(text).map_err(|e| e.to_string())?;
        let c = pair(&twisted_complex(&d, false), k).map_err(|e| e.to_string())?;
        let got: Vec<_> = c.generators.iter().map(|g| (g.module, g.bidegree)).collect();
        if got != want {
            return Err(format!("{name} with W{k}: generators {got:?}"));
        }
        let table = cohomology(&c).map_err(|e| e.to_string())?;
        let expected = RankTable::from_entries(Mode::Absolute, &want.iter().map(|&(_, b)| (b, 1)).collect::<Vec<_>>());
        if table != expected {
            return Err(format!("{name} with W{k}: {:?}", table.ranks));
        }
    }
    Ok("T0, T1 against W0, W1 give the expected generators and ranks".into())
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let ts = tangles()?;
    let names: BTreeSet<&str> = ts.iter().map(|(n, _)| n.as_str()).collect();
    let mut required = vec!["trefoil_right", "trefoil_left", "figure_eight", "hopf_positive", "hopf_negative"];
    let torus: Vec<String> = (4..=8).map(|n| format!("torus_2_{n}")).collect();
    required.extend(torus.iter().map(String::as_str));
    if let Some(missing) = required.iter().find(|n| !names.contains(*n)) {
        return Err(format!("corpus lacks {missing}"));
    }
    let mut compared = 0;
    for (name, d) in &ts {
        for k in 0..2 {
            if !orientation_extends(d, k) {
                continue;
            }
            let (ours, theirs, c) = compare_closure(d, k).map_err(|e| format!("{name} k={k}: {e}"))?;
            if !c.equal {
                return Err(format!("{name} k={k}: {:?} against {:?}", ours.ranks, theirs.ranks));
            }
            compared += 1;
        }
    }
    within(start, Duration::from_secs(60), format!("{compared} closures of {} tangles agree", ts.len()))
}

fn chain_checks(c: &BigradedChainComplex) -> Result<(), String> {
    let d = &c.differential;
    if !d.mul(d).map_err(|e| e.to_string())?.is_zero() {
        return Err("∂² ≠ 0".into());
    }
    for (r, col) in d.entries() {
        let (s, t) = (c.generators[col].bidegree, c.generators[r].bidegree);
        if t != (s.0 + 1, s.1 + 1) {
            return Err(format!("∂ entry {col} -> {r} has bidegree ({}, {})", t.0 - s.0, t.1 - s.1));
        }
    }
    Ok(())
}

fn structure() -> Outcome {
    let mut diagrams = tangles()?;
    for p in pairs()? {
        diagrams.push((format!("{}/first", p.name), p.first));
        diagrams.push((format!("{}/second", p.name), p.second));
    }
    let mut builds = 0;
    for (name, d) in &diagrams {
        for relative in [false, true] {
            let tc = twisted_complex(d, relative);
            let r = verify_twisted(&tc);
            if let Some(v) = r.violations.first() {
                return Err(format!("{name}: {} at {:?}", v.check, v.inputs));
            }
            for k in 0..2 {
                let c = match pair(&tc, k) {
                    Err(PairingError::HigherTerm(..)) => return Err(format!("{name} k={k}: module mu3 term survives")),
                    other => other.map_err(|e| format!("{name} k={k}: {e}"))?,
                };
                chain_checks(&c).map_err(|e| format!("{name} k={k}: {e}"))?;
            }
            builds += 1;
        }
    }
    Ok(format!("{builds} builds pass every structural check"))
}

fn invariance() -> Outcome {
    let start = Instant::now();
    let ps = pairs()?;
    let moves: BTreeSet<&str> = ps.iter().map(|p| p.mv.as_str()).collect();
    for m in ["R1", "R2", "R3"] {
        if !moves.contains(m) {
            return Err(format!("no {m} pair"));
        }
    }
    let mut writhe_changes = 0;
    for p in &ps {
        let w = |d: &TangleDiagram| writhe_counts(d).map(|(a, b)| a as i64 - b as i64);
        if w(&p.first).map_err(|e| e.to_string())? != w(&p.second).map_err(|e| e.to_string())? {
            writhe_changes += 1;
        }
        for k in 0..2 {
            let a = rank_table(&p.first, k, false).map_err(|e| format!("{} k={k}: {e}", p.name))?;
            let b = rank_table(&p.second, k, false).map_err(|e| format!("{} k={k}: {e}", p.name))?;
            if a != b {
                return Err(format!("{} k={k}: {:?} against {:?}", p.name, a.ranks, b.ranks));
            }
        }
    }
    if ps.len() < 10 || writhe_changes == 0 {
        return Err(format!("{} pairs, {writhe_changes} change the writhe", ps.len()));
    }
    within(start, Duration::from_secs(30), format!("{} pairs agree, {writhe_changes} change the writhe", ps.len()))
}

fn reductions() -> Outcome {
    let ts = tangles()?;
    for (name, d) in &ts {
        let tc = twisted_complex(d, false);
        let small = eliminate_all(&tc).map_err(|e| format!("{name}: {e}"))?;
        for k in 0..2 {
            let c = pair(&tc, k).map_err(|e| e.to_string())?;
            let h = cohomology(&c).map_err(|e| e.to_string())?;
            let hr = cohomology(&reduce(&c)).map_err(|e| e.to_string())?;
            let he = cohomology(&pair(&small, k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if hr != h || he != h {
                return Err(format!("{name} k={k}: {:?}, reduced {:?}, eliminated {:?}", h.ranks, hr.ranks, he.ranks));
            }
        }
    }
    Ok(format!("{} tables unchanged by both reductions", 2 * ts.len()))
}

fn jones_polys() -> Outcome {
    let mut n = 0;
    for (name, d) in &tangles()? {
        for k in 0..2 {
            if !orientation_extends(d, k) {
                continue;
            }
            let ours = jones(&rank_table(d, k, false).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let bracket = jones_from_bracket(&close(d, k)).map_err(|e| e.to_string())?;
            if ours != bracket {
                return Err(format!("{name} k={k}: {ours} against {bracket}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} polynomials match the state sum"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("A-infinity relations", ainfty),
        ("functor coherence", functor),
        ("base cases", base_cases),
        ("oracle equivalence", oracle),
        ("structural checks", structure),
        ("Reidemeister invariance", invariance),
        ("reduction soundness", reductions),
        ("Jones extraction", jones_polys),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {}: {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
