use agq_core::catalog::{self, ReproStatus, ScanSpec, TableId, Verdict};
use agq_core::codes::{self, binomial, Budget, Distance, DistanceMode, Matrix, Witness};
use agq_core::constructions::{
    self, ConstructionError, ConstructionId, ConstructionRequest, EmbedPolicy, HermitianCase, Outcome,
};
use agq_core::field::{Element, FieldTower};
use agq_core::quantum::{self, DistanceMethod};

const STORED: &[(&str, &str)] = &[
    ("f49_22x5", include_str!("../data/matrices/f49_22x5.mat")),
    ("f64_16x4", include_str!("../data/matrices/f64_16x4.mat")),
    ("f64_16x5", include_str!("../data/matrices/f64_16x5.mat")),
    ("f64_24x5", include_str!("../data/matrices/f64_24x5.mat")),
    ("f64_24x6", include_str!("../data/matrices/f64_24x6.mat")),
    ("f81_18x4", include_str!("../data/matrices/f81_18x4.mat")),
    ("f81_18x5", include_str!("../data/matrices/f81_18x5.mat")),
    ("f81_27x5", include_str!("../data/matrices/f81_27x5.mat")),
    ("f81_28x6", include_str!("../data/matrices/f81_28x6.mat")),
    ("f169_25x7", include_str!("../data/matrices/f169_25x7.mat")),
    ("f289_33x9", include_str!("../data/matrices/f289_33x9.mat")),
    ("f361_38x10", include_str!("../data/matrices/f361_38x10.mat")),
    ("f529_46x12", include_str!("../data/matrices/f529_46x12.mat")),
    ("f625_49x13", include_str!("../data/matrices/f625_49x13.mat")),
];

fn build(req: ConstructionRequest) -> (FieldTower, Result<Outcome, ConstructionError>) {
    let f = FieldTower::new(req.p, req.m).unwrap();
    let out = constructions::construct(&f, &req, &Budget::default());
    (f, out)
}

fn load(text: &str) -> (FieldTower, Matrix) {
    let (header, _) = codes::MatrixFile::read_header(text).unwrap();
    let f = FieldTower::new(header.p, header.m()).unwrap();
    let (_, g) = codes::parse_matrix(&f, text, true).unwrap();
    (f, g)
}

/// Every w-subset of columns is independent, checked by rank.
fn columns_independent(f: &FieldTower, g: &Matrix, w: usize) -> bool {
    let n = g.cols();
    let mut subset: Vec<usize> = (0..w).collect();
    loop {
        let cols: Vec<Vec<Element>> = subset.iter().map(|&c| g.column(c)).collect();
        if Matrix::from_rows(cols).rank(f) < w {
            return false;
        }
        let Some(i) = (0..w).rev().find(|&i| subset[i] < n - w + i) else {
            return true;
        };
        subset[i] += 1;
        for j in i + 1..w {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

#[test]
fn stored_matrices_are_self_orthogonal() {
    for (name, text) in STORED {
        let (f, g) = load(text);
        let gram = codes::hermitian_gram(&f, &g);
        assert!(gram.all_zero, "{name}: {:?}", gram.first_nonzero());
        assert_eq!(g.rank(&f), g.rows(), "{name}");
    }
}

#[test]
fn small_stored_matrices_are_mds() {
    for (name, text) in STORED.iter().filter(|(_, t)| t.starts_with("q2=7^2") || t.starts_with("q2=2^") || t.starts_with("q2=3^")) {
        let (f, g) = load(text);
        let verdict = codes::is_mds(&f, &g, &Budget::default()).unwrap();
        assert!(verdict.mds, "{name}: {:?}", verdict.witness);
    }
}

#[test]
fn stored_files_survive_a_format_round_trip() {
    for (name, text) in STORED {
        let (f, g) = load(text);
        let full = codes::format_matrix(&f, &g);
        let (_, again) = codes::parse_matrix(&f, &full, false).unwrap();
        assert_eq!(again, g, "{name}");
    }
}

#[test]
fn chain_over_gf169() {
    let (f, out) = build(ConstructionRequest::new(ConstructionId::C1, 13, 1).n(25).embed(EmbedPolicy::Once));
    let out = out.unwrap();
    assert_eq!(out.chain.len(), 2);
    for code in &out.chain {
        assert!(codes::hermitian_gram(&f, code.generator()).all_zero);
        let d = codes::distance(&f, code.generator(), DistanceMode::Exhaustive, &Budget::default()).unwrap();
        assert_eq!(d.value(), code.n() - code.k() + 1);
    }

    let (f, deep) = build(ConstructionRequest::new(ConstructionId::C1, 13, 1).t(2).embed(EmbedPolicy::Deep));
    let top = deep.unwrap().last().clone();
    assert_eq!((top.n(), top.k()), (25, 7));
    assert!(top.mds.as_ref().unwrap().mds);

    // The full column search agrees with the MDS shortcut.
    let searched = quantum::params_for_generator(&f, top.generator(), &Budget::default());
    let shortcut = quantum::stabilizer_params(&f, &top, &Budget::default()).unwrap();
    assert_eq!(searched.d, Some(8));
    assert_eq!(searched.d_method, DistanceMethod::Exact);
    assert_eq!(shortcut.label(), searched.label());
    let cols = searched.witness.unwrap();
    assert_eq!(cols.len(), 8);
    let picked: Vec<Vec<Element>> = cols.iter().map(|&c| top.generator().column(c)).collect();
    assert!(Matrix::from_rows(picked).rank(&f) < 8);
}

#[test]
fn embedding_grows_one_row_at_a_time() {
    let cases = [
        ConstructionRequest::new(ConstructionId::C1, 11, 1).n(16).k(2),
        ConstructionRequest::new(ConstructionId::C1, 5, 1).n(13).k(2),
        ConstructionRequest::new(ConstructionId::C1, 7, 1).n(13).k(2),
        ConstructionRequest::new(ConstructionId::C3, 17, 1).n(12).t(2),
    ];
    for req in cases {
        let (f, out) = build(req.embed(EmbedPolicy::Iterate));
        let out = out.unwrap();
        assert!(out.stopped.is_some());
        for pair in out.chain.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert_eq!(b.k(), a.k() + 1);
            assert!(b.n() == a.n() || b.n() == a.n() + 1);
            assert!(codes::hermitian_gram(&f, b.generator()).all_zero);
            // The earlier code is a punctured subcode of the later one.
            let head = Matrix::from_rows((0..a.k()).map(|r| b.generator().row(r)[..a.n()].to_vec()).collect());
            assert_eq!(head, *a.generator());
        }
    }
}

#[test]
fn boundary_row_is_rejected_by_the_gram_oracle() {
    let (_, out) = build(ConstructionRequest::new(ConstructionId::C1, 11, 1).n(16).k(4).embed(EmbedPolicy::Once));
    match out {
        Err(ConstructionError::EmbeddingRejected(inner)) => {
            assert!(matches!(*inner, ConstructionError::GramNonzero { .. }))
        }
        Ok(o) => panic!("accepted [{}, {}]", o.last().n(), o.last().k()),
        Err(e) => panic!("unexpected {e}"),
    }
}

#[test]
fn artin_schreier_ternary_code() {
    let (f, out) = build(ConstructionRequest::new(ConstructionId::C9, 3, 1).t(2).k(4));
    let code = out.unwrap().last().clone();
    assert_eq!((code.n(), code.k()), (15, 3));
    let budget = Budget::default();
    let primal = codes::distance(&f, code.generator(), DistanceMode::Exhaustive, &budget).unwrap();
    assert_eq!(primal.value(), 12);
    assert!(columns_independent(&f, code.generator(), 2));
    assert!(!columns_independent(&f, code.generator(), 3));
    let q = quantum::stabilizer_params(&f, &code, &budget).unwrap();
    assert_eq!(q.label(), "[[15,9,3]]_3");
}

#[test]
fn elliptic_code_over_gf16() {
    let f = FieldTower::new(2, 2).unwrap();
    assert!(constructions::elliptic_assumption(&f, None).unwrap());
    let (f, out) = build(ConstructionRequest::new(ConstructionId::C5, 2, 2).k(5));
    let code = out.unwrap().last().clone();
    assert_eq!((code.n(), code.k()), (24, 4));
    let d = codes::distance(&f, code.generator(), DistanceMode::Exhaustive, &Budget::default()).unwrap();
    assert_eq!(d.value(), 20);
    match d {
        Distance::Exact { witness: Witness::Codeword(w), .. } => {
            assert_eq!(w.iter().filter(|e| !e.is_zero()).count(), 20)
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn hermitian_curve_dual_distance() {
    let id = ConstructionId::C7(HermitianCase::RootsOfUnity);
    let (f, out) = build(ConstructionRequest::new(id, 2, 2).n(16).dim(3));
    let code = out.unwrap().last().clone();
    assert_eq!((code.n(), code.k()), (64, 3));
    assert_eq!(binomial(64, 2), 2016);
    let q = quantum::stabilizer_params(&f, &code, &Budget::default()).unwrap();
    assert_eq!(q.label(), "[[64,58,3]]_4");
    assert_eq!(q.witness.as_ref().map(Vec::len), Some(3));
}

#[test]
fn identity_matrix_is_rejected() {
    let f = FieldTower::new(3, 1).unwrap();
    let entry = catalog::verify_matrix(&f, &Matrix::identity(3), None, &Budget::default());
    match entry.verdict {
        Verdict::Rejected { reason } => assert!(reason.contains("(0,0)"), "{reason}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn scan_certifies_every_entry() {
    let spec = ScanSpec {
        ids: vec![ConstructionId::C1, ConstructionId::C9],
        fields: vec![(3, 1), (5, 1)],
        n: None,
        t: None,
        k: None,
        embed: EmbedPolicy::None,
    };
    let report = catalog::scan(&spec, &Budget::default());
    assert!(!report.entries.is_empty());
    for entry in &report.entries {
        assert!(entry.verdict.is_certified());
        let q = entry.quantum.as_ref().unwrap();
        let c = entry.classical.as_ref().unwrap();
        assert_eq!(q.n, c.n);
        assert_eq!(q.k, c.n - 2 * c.k);
    }
    let labels: Vec<String> = report.entries.iter().filter_map(|e| e.quantum.as_ref()).map(|q| q.label()).collect();
    let mut unique = labels.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), labels.len());
}

#[test]
fn reproduction_flags_known_discrepancies() {
    let targets = catalog::targets(TableId::Mixed);
    let run = |label: &str| {
        let target = targets.iter().find(|t| t.expected == label).unwrap();
        catalog::reproduce_target(target, &Budget::default())
    };
    assert_eq!(run("[[15,9,3]]_3").result, ReproStatus::Match);
    match run("[[20,12,4]]_4").result {
        ReproStatus::Unmatched { computed, .. } => assert_eq!(computed, "[[24,16,4]]_4"),
        other => panic!("unexpected {other:?}"),
    }
}

/// With n = (Q−1)/(p^r+1), the powers αⁿ are (p^r+1)-th roots of unity ζ and
/// ζ^(p^r) = ζ⁻¹, so ζ − η lies in GF(p^r) exactly when ζ = η or ζη = −1.
#[test]
fn coset_leader_differences() {
    for (p, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let f = FieldTower::new(p, m).unwrap();
        for r in (1..=m).filter(|r| m % r == 0) {
            let pr = p.pow(r);
            let n = f.order() / (pr + 1);
            let roots: Vec<Element> = (0..=pr).map(|j| f.theta_pow((j * n) as i64)).collect();
            let mut counterexamples = 0;
            for &z in &roots {
                for &e in &roots {
                    let d = f.sub(z, e);
                    let in_subfield = f.pow(d, pr as i64) == d;
                    let predicted = z == e || f.mul(z, e) == f.neg(Element::ONE);
                    assert_eq!(in_subfield, predicted, "GF({p}^{}) r={r}: {z} − {e}", 2 * m);
                    counterexamples += usize::from(!in_subfield);
                }
            }
            assert!(counterexamples > 0, "GF({p}^{}) r={r}", 2 * m);
        }
    }
}
