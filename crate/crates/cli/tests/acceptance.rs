//! Acceptance suite: one line per criterion, with its time limit.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass.

use std::collections::{BTreeSet, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pmideal::budget::Budget;
use pmideal::census::{
    estimate_dimension, verify_bundle_count, verify_case3, verify_graph_permissible, verify_jacobi,
    verify_jacobi_duality, verify_jacobi_exhaustive, verify_m2_overlapping2, verify_n5_example, verify_overlap_rule,
    verify_var_decomposition, CensusRecord, GraphCensus,
};
use pmideal::graphs::{
    codim, dim_y_formula, enumerate_permissible, is_permissible, is_permissible_by_definition, minimal_cover_pairs,
    minimize_pair, SimpleGraph,
};
use pmideal::PrimeModulus;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn fq(q: u64) -> PrimeModulus {
    PrimeModulus::new(q).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dimension_theorem() -> Outcome {
    for n in 4..=12 {
        let d = dim_y_formula(n).map_err(|e| e.to_string())?;
        ensure(d.value == n * n - n - 4, || {
            format!("n = {n}: {} vs {}", d.value, n * n - n - 4)
        })?;
    }
    Ok("n = 4..12 all equal n^2 - n - 4".into())
}

fn codimension_formula() -> Outcome {
    let b = Budget::default();
    let c7 = GraphCensus::new(5, fq(7), &b).map_err(|e| e.to_string())?;
    let c11 = GraphCensus::new(5, fq(11), &b).map_err(|e| e.to_string())?;
    let graphs = enumerate_permissible(5).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let records: Vec<CensusRecord> = [&c7, &c11].iter().map(|c| c.record(g).unwrap()).collect();
        let est = estimate_dimension(&records).map_err(|e| format!("{g}: {e}"))?;
        let expect = 6 - codim(g).unwrap() as i64;
        ensure(est.dimension == expect && est.residual < 0.5, || {
            format!("{g}: estimate {:.3} vs 6 - codim = {expect}", est.estimate)
        })?;
        worst = worst.max(est.residual);
    }
    Ok(format!("{} graphs, max residual {worst:.3}", graphs.len()))
}

fn bundle_identity() -> Outcome {
    let mut parts = Vec::new();
    for (n, t, q) in [(3, 1, 2), (3, 1, 3), (4, 2, 2), (4, 2, 3)] {
        let c = verify_bundle_count(n, t, fq(q), &Budget::default()).map_err(|e| e.to_string())?;
        ensure(c.holds, || {
            format!(
                "(n,t,q) = ({n},{t},{q}): {} != {} * {}",
                c.matrices.count, c.pairs.count, c.gl
            )
        })?;
        parts.push(format!(
            "({n},{t},{q}): {} = {} x {}",
            c.matrices.count, c.pairs.count, c.gl
        ));
    }
    Ok(parts.join("; "))
}

fn points_are_permissible() -> Outcome {
    let mut total = 0;
    for (n, q) in [(4, 2), (4, 3), (5, 2), (5, 3)] {
        let v = verify_graph_permissible(n, fq(q), &Budget::default()).map_err(|e| e.to_string())?;
        ensure(v.passed(), || v.to_string())?;
        total += v.checked;
    }
    Ok(format!("{total} points"))
}

fn checker_equivalence() -> Outcome {
    let mut count = 0u64;
    for n in 3..=6 {
        let e = n * (n - 1) / 2;
        for bits in 0u128..1 << e {
            let g = SimpleGraph::from_edge_bits(n, bits).unwrap();
            ensure(is_permissible(&g) == is_permissible_by_definition(&g), || {
                format!("disagree on {g}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} graphs"))
}

fn var_decomposition() -> Outcome {
    let mut total = 0;
    for q in [2, 3] {
        let v = verify_var_decomposition(5, fq(q), 3, &Budget::default()).map_err(|e| e.to_string())?;
        ensure(v.passed(), || v.to_string())?;
        total += v.checked;
    }
    Ok(format!("{total} (constraint set, point) incidences"))
}

fn minimal_pairs() -> Outcome {
    for n in [5, 6] {
        let pairs: HashSet<_> = minimal_cover_pairs(n).unwrap().into_iter().collect();
        for g in enumerate_permissible(n).unwrap() {
            for p in minimize_pair(&g).map_err(|e| e.to_string())? {
                ensure(pairs.contains(&p), || {
                    format!("{g} minimizes to a pair outside the list")
                })?;
            }
        }
    }
    let five = minimal_cover_pairs(5).unwrap();
    let types: BTreeSet<_> = five.iter().map(|p| p.s_graph.canonical_form().unwrap()).collect();
    ensure(five.len() == 25 && types.len() == 3, || {
        format!("{} labeled pairs, {} types", five.len(), types.len())
    })?;
    Ok("25 labeled pairs, 3 types".into())
}

fn case3() -> Outcome {
    let b = Budget::default();
    let v3 = verify_case3(fq(3), 0, 1, &b).map_err(|e| e.to_string())?;
    ensure(v3.passed(), || v3.to_string())?;
    let v5 = verify_case3(fq(5), 5, 1, &b).map_err(|e| e.to_string())?;
    ensure(v5.passed(), || v5.to_string())?;
    Ok(format!("{} + {} point checks", v3.checked, v5.checked))
}

fn overlap_and_m2() -> Outcome {
    let mut total = 0;
    for s in [3, 4] {
        for q in [2, 3, 5] {
            let v = verify_overlap_rule(s, fq(q), &Budget::default()).map_err(|e| e.to_string())?;
            ensure(v.passed(), || v.to_string())?;
            total += v.checked;
        }
    }
    for q in [2, 3] {
        let v = verify_m2_overlapping2(fq(q)).map_err(|e| e.to_string())?;
        ensure(v.passed(), || v.to_string())?;
        total += v.checked;
    }
    Ok(format!("{total} cases"))
}

fn duality() -> Outcome {
    let v = verify_jacobi(6, fq(101), 10_000, 1).map_err(|e| e.to_string())?;
    ensure(v.passed() && v.checked == 10_000, || v.to_string())?;
    let ex = verify_jacobi_exhaustive(3, fq(3), &Budget::default()).map_err(|e| e.to_string())?;
    ensure(ex.passed() && ex.checked == 11_232, || ex.to_string())?;
    for q in [2, 3] {
        let d = verify_jacobi_duality(3, 1, fq(q), &Budget::default()).map_err(|e| e.to_string())?;
        ensure(d.passed(), || d.to_string())?;
    }
    Ok("10000 random + 11232 exhaustive, 0 failures".into())
}

fn n5_example() -> Outcome {
    let v = verify_n5_example(fq(7), 1000, 1).map_err(|e| e.to_string())?;
    ensure(v.passed() && v.checked == 1000, || v.to_string())?;
    Ok("1000 samples".into())
}

fn run_census(dir: &Path, jobs: usize, file: &str) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("jobs{jobs}")).join(file);
    let status = Command::new(env!("CARGO_BIN_EXE_pmideal"))
        .args([
            "census", "--n", "4", "--r", "2", "--t", "2", "--q", "2", "--method", "both",
        ])
        .args(["--jobs", &jobs.to_string(), "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        String::from_utf8_lossy(&status.stderr).into_owned()
    })?;
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for file in ["census.json", "census.csv"] {
        let one = run_census(dir.path(), 1, file)?;
        let eight = run_census(dir.path(), 8, file)?;
        ensure(one == eight, || format!("{file} differs between --jobs 1 and --jobs 8"))?;
    }
    let text = std::fs::read_to_string(dir.path().join("jobs1/census.json")).map_err(|e| e.to_string())?;
    let records: Vec<CensusRecord> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let again = serde_json::to_string_pretty(&records).unwrap() + "\n";
    ensure(again == text, || "JSON does not round-trip byte-identically".into())?;
    Ok("JSON and CSV identical across --jobs 1/8; JSON round-trips".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 dimension theorem", Duration::from_secs(1), dimension_theorem),
        ("2 codimension formula", Duration::from_secs(600), codimension_formula),
        ("3 bundle identity", Duration::from_secs(120), bundle_identity),
        (
            "4 permissibility of points",
            Duration::from_secs(10),
            points_are_permissible,
        ),
        (
            "5 permissibility checkers agree",
            Duration::from_secs(5),
            checker_equivalence,
        ),
        ("6 var decomposition", Duration::from_secs(60), var_decomposition),
        ("7 minimal pairs", Duration::from_secs(10), minimal_pairs),
        ("8 det + nested 2-minor decomposition", Duration::from_secs(30), case3),
        ("9 overlapping minors", Duration::from_secs(30), overlap_and_m2),
        ("10 duality", Duration::from_secs(30), duality),
        ("11 worked 5x5 example", Duration::from_secs(30), n5_example),
        ("12 determinism", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        let took = start.elapsed();
        let line = match outcome {
            Ok(detail) if took <= limit => format!(
                "PASS  {name}: {detail} [{:.2}s / {}s]",
                took.as_secs_f64(),
                limit.as_secs()
            ),
            Ok(detail) => format!(
                "FAIL  {name}: {detail}; took {:.2}s, limit {}s",
                took.as_secs_f64(),
                limit.as_secs()
            ),
            Err(why) => format!("FAIL  {name}: {why} [{:.2}s]", took.as_secs_f64()),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
