//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qdecomp --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use qdecomp::abacus::{render_abacus, RenderOptions};
use qdecomp::blocks::VerificationReport;
use qdecomp::cache::CacheFile;
use qdecomp::suites;
use qdecomp::{BetaSet, CanonicalEngine, Partition, RunnerTuple};

struct Outcome {
    id: usize,
    pass: bool,
    detail: String,
}

/// Criteria whose literal statement does not hold; the line stays FAIL.
const KNOWN_RED: &[usize] = &[7];

fn summary(r: &VerificationReport, took: Duration) -> String {
    format!(
        "{} instances, {} failures, {:.2?}",
        r.instances_checked,
        r.failures.len(),
        took
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn from_report(id: usize, r: qdecomp::Result<VerificationReport>, took: Duration, limit: Option<Duration>) -> Outcome {
    match r {
        Ok(r) => {
            let in_time = limit.is_none_or(|l| took <= l);
            let mut detail = summary(&r, took);
            if let Some(f) = r.failures.first() {
                detail.push_str(&format!("; first failure {f}"));
            }
            Outcome {
                id,
                pass: r.passed() && in_time,
                detail,
            }
        }
        Err(e) => Outcome {
            id,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn figure_partition() -> Partition {
    "(13,12,10,8,8,8,6,5,5,3,2,1,1)".parse().unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let b = BetaSet::from_partition(&figure_partition(), 14);
    let text = render_abacus(
        &b,
        9,
        &RenderOptions {
            rows: Some((-2, 2)),
            sections: None,
        },
    );
    let mut drawn = BTreeSet::new();
    for line in text.lines().skip(1) {
        let mut cells = line.split_whitespace();
        let row: i64 = cells.next().unwrap().parse().unwrap();
        for (col, c) in cells.enumerate() {
            if c == "o" {
                drawn.insert((col as i64, row));
            }
        }
    }
    let mut expected: BTreeSet<(i64, i64)> = (0..9).flat_map(|x| [(x, -2), (x, -1)]).collect();
    expected.extend([(0, 0), (2, 0), (3, 0), (5, 0), (7, 0)]);
    expected.extend([(1, 1), (2, 1), (4, 1), (7, 1), (8, 1)]);
    expected.extend([(0, 2), (3, 2), (6, 2), (8, 2)]);
    let layout_ok = drawn == expected && expected.len() == 32;

    let nt = RunnerTuple::new(vec![4, 2, 3]).unwrap();
    let sections = b.section_sets(&nt);
    let set = |xs: &[usize]| xs.iter().copied().collect::<BTreeSet<usize>>();
    let caption = [
        (0, [set(&[0, 2, 3]), set(&[1]), set(&[1])]),
        (1, [set(&[1, 2]), set(&[0]), set(&[1, 2])]),
        (2, [set(&[0, 3]), set(&[]), set(&[0, 2])]),
    ];
    let mut sections_ok = true;
    for (row, want) in &caption {
        for (j, w) in want.iter().enumerate() {
            sections_ok &= sections.get(*row, j) == *w;
        }
    }
    let took = t.elapsed();
    Outcome {
        id: 1,
        pass: layout_ok && sections_ok && took < Duration::from_secs(1),
        detail: format!(
            "{} beads drawn in rows -2..2, layout {layout_ok}, Figure 2 sections {sections_ok}, {took:.2?}",
            drawn.len()
        ),
    }
}

fn criterion_7(engine: &CanonicalEngine) -> Outcome {
    let (r, took) = timed(|| suites::fk(engine, &[0, 1], 8));
    let r = match r {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                id: 7,
                pass: false,
                detail: format!("error: {e}"),
            }
        }
    };
    let clause = |name: &str| r.failures.iter().filter(|f| f["clause"] == name).count();
    let (eq, mono, count, dual) = (
        clause("equality"),
        clause("monomial"),
        clause("count"),
        clause("dual-row"),
    );
    Outcome {
        id: 7,
        pass: r.passed(),
        detail: format!(
            "{} checks, {took:.2?}; column equality failures {eq}, column monomial failures {mono}, \
             column 2^cups count failures {count}, dual-row shape failures {dual}",
            r.instances_checked
        ),
    }
}

fn criterion_10(engine: &CanonicalEngine) -> Outcome {
    let (r, took) = timed(|| suites::determinism(engine, &[2, 3, 4], 7));
    let mut out = from_report(10, r, took, None);

    let cold = CanonicalEngine::new();
    for n in [2, 3] {
        cold.decomposition_matrix(n, 6).unwrap();
    }
    let cold_text = CacheFile::from_engine(&cold).to_json();
    let warm = CanonicalEngine::new();
    CacheFile::from_json(&cold_text).unwrap().load_into(&warm).unwrap();
    let mut same_matrices = true;
    for n in [2, 3] {
        same_matrices &= warm.decomposition_matrix(n, 6).unwrap() == cold.decomposition_matrix(n, 6).unwrap();
    }
    let warm_stats = warm.stats();
    let warm_text = CacheFile::from_engine(&warm).to_json();
    let bytes_ok = warm_text.as_bytes() == cold_text.as_bytes() && same_matrices && warm_stats.misses == 0;
    out.pass &= bytes_ok;
    out.detail.push_str(&format!(
        "; cache warm/cold {} bytes identical {bytes_ok}, warm misses {}",
        cold_text.len(),
        warm_stats.misses
    ));
    out
}

#[test]
fn acceptance() {
    let engine = CanonicalEngine::new();
    let mut outcomes = vec![criterion_1()];

    let (r, took) = timed(|| suites::relations(&[2, 3, 4], &[0, 1, 14], 6));
    outcomes.push(from_report(2, r, took, Some(Duration::from_secs(30))));

    let (r, took) = timed(|| {
        let mut all = suites::canonical_invariants(&engine, 2, 10)?;
        for n in [3, 4] {
            all.absorb(suites::canonical_invariants(&engine, n, 8)?);
        }
        Ok(all)
    });
    outcomes.push(from_report(3, r, took, None));

    let (r, took) = timed(|| suites::bar_symmetry(&engine, &[2, 3], &[0, 1], 7));
    outcomes.push(from_report(4, r, took, None));

    let (r, took) = timed(|| suites::runner(&engine, &[3, 4, 5], &[2, 3], &[0, 1], 8));
    outcomes.push(from_report(5, r, took, None));

    let (r, took) = timed(|| suites::decomp(&engine, &[3, 4], &[0, 1], 7));
    outcomes.push(from_report(6, r, took, None));

    outcomes.push(criterion_7(&engine));

    let (r, took) = timed(|| suites::lbt(&engine, &[3, 5], 7));
    outcomes.push(from_report(8, r, took, None));

    let (r, took) = timed(|| {
        let mut all = suites::moves(&engine, 5, 8, 2)?;
        all.absorb(suites::branching(&engine, 5, 8)?);
        Ok(all)
    });
    outcomes.push(from_report(9, r, took, None));

    outcomes.push(criterion_10(&engine));

    for o in &outcomes {
        println!(
            "criterion {:>2}: {} ({})",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    assert_eq!(outcomes.len(), 10);
    assert!(engine.warnings().is_empty(), "engine warnings: {:?}", engine.warnings());
    for o in &outcomes {
        if KNOWN_RED.contains(&o.id) {
            assert!(!o.pass, "criterion {} now passes; drop it from KNOWN_RED", o.id);
        } else {
            assert!(o.pass, "criterion {} failed: {}", o.id, o.detail);
        }
    }
}
