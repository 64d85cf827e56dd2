//! One line per acceptance criterion, with its runtime against the limit.

mod props;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use agq_core::catalog::{self, ReproRow, ReproStatus, TableId};
use agq_core::codes::{self, Budget, CodeError, DistanceMode};
use agq_core::constructions::{
    self, CertifiedCode, ConstructionError, ConstructionId, ConstructionRequest, EmbedPolicy, HermitianCase,
};
use agq_core::curves::{self, FamilyRequest};
use agq_core::field::FieldTower;
use agq_core::quantum;

type Check = Result<String, String>;

/// Number, name, time limit in seconds and the check itself.
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn build(req: ConstructionRequest) -> Result<(FieldTower, Vec<CertifiedCode>), String> {
    let f = FieldTower::new(req.p, req.m).map_err(err)?;
    let out = constructions::construct(&f, &req, &Budget::default()).map_err(err)?;
    Ok((f, out.chain))
}

fn dims(chain: &[CertifiedCode]) -> Vec<(usize, usize)> {
    chain.iter().map(|c| (c.n(), c.k())).collect()
}

fn label(f: &FieldTower, code: &CertifiedCode) -> Result<String, String> {
    quantum::stabilizer_params(f, code, &Budget::default())
        .map(|q| q.label())
        .map_err(err)
}

fn gf169_pipeline() -> Check {
    let (_, chain) = build(ConstructionRequest::new(ConstructionId::C1, 13, 1).n(25).embed(EmbedPolicy::Once))?;
    ensure(dims(&chain) == [(25, 2), (25, 3)], format!("chain {:?}", dims(&chain)))?;
    let (f, chain) = build(ConstructionRequest::new(ConstructionId::C1, 13, 1).t(2).embed(EmbedPolicy::Deep))?;
    let top = chain.last().ok_or("empty chain")?;
    ensure((top.n(), top.k()) == (25, 7), format!("deep gave {:?}", dims(&chain)))?;
    let started = Instant::now();
    let verdict = codes::is_mds(&f, top.generator(), &Budget::default()).map_err(err)?;
    let minors = started.elapsed();
    ensure(verdict.mds, format!("dependent columns {:?}", verdict.witness))?;
    ensure(minors < Duration::from_secs(5), format!("minor checks took {minors:?}"))?;
    let q = quantum::stabilizer_params(&f, top, &Budget::default()).map_err(err)?;
    ensure(q.label() == "[[25,11,8]]_13", q.label())?;
    ensure(quantum::singleton_defect(&q) == Ok(0), "defect is not 0")?;
    Ok(format!("[25,2] → [25,3]; [25,7] MDS in {minors:.2?}; {}", q.label()))
}

fn stored_matrices() -> Check {
    let files = [
        ("F_{7²}", include_str!("../data/matrices/f49_22x5.mat")),
        ("F_{13²}", include_str!("../data/matrices/f169_25x7.mat")),
        ("F_{17²}", include_str!("../data/matrices/f289_33x9.mat")),
    ];
    let mut notes = Vec::new();
    for (name, text) in files {
        let started = Instant::now();
        let (header, _) = codes::MatrixFile::read_header(text).map_err(err)?;
        let f = FieldTower::new(header.p, header.m()).map_err(err)?;
        let (_, g) = codes::parse_matrix(&f, text, true).map_err(err)?;
        let gram = codes::hermitian_gram(&f, &g);
        if let Some((i, j, value)) = gram.first_nonzero() {
            return Err(format!("{name}: {}", ConstructionError::GramNonzero { i, j, value }));
        }
        let verdict = codes::is_mds(&f, &g, &Budget::default()).map_err(err)?;
        let elapsed = started.elapsed();
        ensure(verdict.mds, format!("{name}: dependent columns {:?}", verdict.witness))?;
        ensure(elapsed < Duration::from_secs(1), format!("{name}: {elapsed:?}"))?;
        notes.push(format!("{name} [{},{}] {elapsed:.2?}", g.cols(), g.rows()));
    }
    Ok(notes.join(", "))
}

fn artin_schreier() -> Check {
    let (f, chain) = build(ConstructionRequest::new(ConstructionId::C9, 3, 1).t(2).k(4))?;
    let code = chain.last().ok_or("empty chain")?;
    ensure((code.n(), code.k()) == (15, 3), format!("built {:?}", dims(&chain)))?;
    let budget = Budget::default();
    let primal = codes::distance(&f, code.generator(), DistanceMode::Exhaustive, &budget).map_err(err)?;
    ensure(primal.is_exact() && primal.value() == 12, format!("primal {primal:?}"))?;
    let dual = codes::distance(&f, code.generator(), DistanceMode::DualByColumns { d_max: 3 }, &budget).map_err(err)?;
    ensure(dual.is_exact() && dual.value() == 3, format!("dual {dual:?}"))?;
    let q = label(&f, code)?;
    ensure(q == "[[15,9,3]]_3", q.clone())?;
    Ok(format!("[15,3,12], dual distance 3, {q}"))
}

fn elliptic() -> Check {
    let f = FieldTower::new(2, 2).map_err(err)?;
    ensure(constructions::elliptic_assumption(&f, None).map_err(err)?, "assumption fails for q=4")?;
    let support = curves::curve(&f, FamilyRequest::Elliptic { c: None })
        .and_then(|c| c.x_support(&f, None))
        .map_err(err)?;
    ensure(support.len() == 12, format!("|U_c| = {}", support.len()))?;

    let (f, chain) = build(ConstructionRequest::new(ConstructionId::C5, 2, 2).dim(4))?;
    let code = chain.last().ok_or("empty chain")?;
    ensure((code.n(), code.k()) == (24, 4), format!("built {:?}", dims(&chain)))?;
    let d = codes::distance(&f, code.generator(), DistanceMode::Exhaustive, &Budget::default()).map_err(err)?;
    ensure(d.is_exact() && d.value() == 20, format!("primal {d:?}"))?;
    let from_four = label(&f, code)?;

    // n − 2k = 18 needs the three-dimensional code.
    let (f, chain) = build(ConstructionRequest::new(ConstructionId::C5, 2, 2).dim(3))?;
    let small = label(&f, chain.last().ok_or("empty chain")?)?;
    ensure(small == "[[24,18,3]]_4", format!("[24,3] gives {small}"))?;

    let (f, chain) = build(ConstructionRequest::new(ConstructionId::C5, 2, 3).dim(8))?;
    let big = chain.last().ok_or("empty chain")?;
    ensure((big.n(), big.k()) == (80, 8), format!("q=8 built {:?}", dims(&chain)))?;
    let q = quantum::stabilizer_params(&f, big, &Budget::default()).map_err(err)?;
    ensure(q.d.is_some_and(|d| d >= 3), format!("q=8 dual distance {:?}", q.d))?;
    let primal = codes::distance(&f, big.generator(), DistanceMode::Exhaustive, &Budget::default());
    ensure(
        matches!(primal, Err(CodeError::CapExceeded { .. })),
        "q=8 primal distance was not skipped",
    )?;
    Ok(format!("|U_c| = 12, [24,4,20] → {from_four}, [24,3] → {small}, q=8 [80,8] → {}", q.label()))
}

fn hermitian() -> Check {
    let id = ConstructionId::C7(HermitianCase::RootsOfUnity);
    let (f, chain) = build(ConstructionRequest::new(id, 2, 2).n(16).dim(3))?;
    let code = chain.last().ok_or("empty chain")?;
    ensure((code.n(), code.k()) == (64, 3), format!("built {:?}", dims(&chain)))?;
    let dual = codes::distance(&f, code.generator(), DistanceMode::DualByColumns { d_max: 3 }, &Budget::default())
        .map_err(err)?;
    ensure(dual.is_exact() && dual.value() == 3, format!("dual {dual:?}"))?;
    let q = label(&f, code)?;
    ensure(q == "[[64,58,3]]_4", q.clone())?;
    Ok(format!("[64,3], dual distance 3, {q}"))
}

fn embedding_boundary() -> Check {
    let (_, chain) = build(ConstructionRequest::new(ConstructionId::C1, 11, 1).n(16).k(2).embed(EmbedPolicy::Iterate))?;
    ensure(chain.last().map(|c| (c.n(), c.k())) == Some((16, 4)), format!("chain {:?}", dims(&chain)))?;
    let f = FieldTower::new(11, 1).map_err(err)?;
    match constructions::embed_once(&f, chain.last().unwrap(), &Budget::default()) {
        Err(ConstructionError::GramNonzero { .. }) => {}
        Ok(c) => return Err(format!("[16,5] accepted as [{},{}]", c.n(), c.k())),
        Err(e) => return Err(format!("[16,5] failed with {e}")),
    }
    let (_, deep) = build(ConstructionRequest::new(ConstructionId::C1, 11, 1).t(3).embed(EmbedPolicy::Deep))?;
    ensure(dims(&deep) == [(31, 5), (32, 6)], format!("deep {:?}", dims(&deep)))?;
    Ok("[16,4] certified, [16,5] GramNonzero, [31,5] → [32,6]".to_string())
}

fn properties() -> Check {
    let mut failed = Vec::new();
    for property in props::ALL {
        if let Err(e) = (property.run)(props::CASES) {
            failed.push(format!("{}: {e}", property.name));
        }
    }
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{} suites × {} cases", props::ALL.len(), props::CASES))
}

fn status(rows: &[ReproRow], expected: &str) -> Option<ReproStatus> {
    rows.iter().find(|r| r.expected == expected).map(|r| r.result.clone())
}

fn reproduction() -> Check {
    let mds1 = catalog::reproduce(TableId::Mds1, &Budget::default());
    let mixed = catalog::reproduce(TableId::Mixed, &Budget::default());
    let mut problems = Vec::new();
    for (rows, labels) in [
        (&mds1, &["[[9,3,4]]_5", "[[25,11,8]]_13", "[[33,15,10]]_17", "[[21,13,5]]_7", "[[16,10,4]]_8", "[[16,8,5]]_8"][..]),
        (&mixed, &["[[15,9,3]]_3", "[[24,18,3]]_4", "[[64,58,3]]_4", "[[95,89,3]]_5", "[[91,81,4]]_7"][..]),
    ] {
        for &l in labels {
            match status(rows, l) {
                Some(ReproStatus::Match) => {}
                other => problems.push(format!("{l}: {other:?}")),
            }
        }
    }
    for (rows, l) in [(&mixed, "[[20,12,4]]_4"), (&mds1, "[17,3,15]_81"), (&mds1, "[26,3,24]_289")] {
        match status(rows, l) {
            Some(ReproStatus::Unmatched { .. }) => {}
            other => problems.push(format!("{l} should be UNMATCHED: {other:?}")),
        }
    }
    ensure(problems.is_empty(), problems.join("; "))?;
    let count = |rows: &[ReproRow]| rows.iter().filter(|r| r.result == ReproStatus::Match).count();
    Ok(format!(
        "mds1 {}/{} MATCH, mixed {}/{} MATCH",
        count(&mds1),
        mds1.len(),
        count(&mixed),
        mixed.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "q=13 pipeline", 5, gf169_pipeline),
        (2, "stored matrix certification", 3, stored_matrices),
        (3, "Artin–Schreier q=3", 1, artin_schreier),
        (4, "elliptic q=4", 10, elliptic),
        (5, "Hermitian q=4", 2, hermitian),
        (6, "embedding boundary q=11", 5, embedding_boundary),
        (7, "property suites", 600, properties),
        (8, "reproduction report", 300, reproduction),
    ];
    let mut failures = 0;
    for (n, name, limit, run) in criteria {
        let started = Instant::now();
        let result = run();
        let elapsed = started.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let (verdict, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!("criterion {n} {verdict} ({name}, {elapsed:.2?} of {limit} s): {detail}");
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
