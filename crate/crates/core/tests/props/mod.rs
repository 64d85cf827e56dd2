use std::sync::OnceLock;

use agq_core::codes::{self, Budget, Distance, DistanceMode, DualKind, LinearCode, Matrix};
use agq_core::field::{Element, FieldTower};
use agq_core::points::{self, EvaluationSet, Leaders};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

/// Every GF(q²) with q² ≤ 2^12, as (p, m) with q = p^m.
const TOWERS: &[(u32, u32)] = &[
    (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
    (3, 1), (3, 2), (3, 3),
    (5, 1), (5, 2),
    (7, 1), (7, 2),
    (11, 1), (13, 1), (17, 1), (19, 1), (23, 1), (29, 1), (31, 1),
    (37, 1), (41, 1), (43, 1), (47, 1), (53, 1), (59, 1), (61, 1),
];

fn towers() -> &'static [FieldTower] {
    static CELL: OnceLock<Vec<FieldTower>> = OnceLock::new();
    CELL.get_or_init(|| {
        TOWERS
            .iter()
            .map(|&(p, m)| FieldTower::new(p, m).unwrap())
            .collect()
    })
}

fn small_towers() -> &'static [FieldTower] {
    static CELL: OnceLock<Vec<FieldTower>> = OnceLock::new();
    CELL.get_or_init(|| {
        [(2, 1), (3, 1), (2, 2)]
            .iter()
            .map(|&(p, m)| FieldTower::new(p, m).unwrap())
            .collect()
    })
}

fn element(f: &FieldTower, seed: u32) -> Element {
    let i = seed % f.size();
    if i == f.order() {
        Element::ZERO
    } else {
        f.theta_pow(i as i64)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn weight(v: &[Element]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

/// One of the three point-set families, chosen and parametrized by `seed`.
fn point_set(f: &FieldTower, family: u32, seed: u32) -> EvaluationSet {
    let q = f.q();
    match family % 3 {
        0 => {
            let ds = divisors(f.order());
            let d = ds[seed as usize % ds.len()];
            points::roots_of_unity_set(f, d + 1).unwrap()
        }
        1 => {
            let options: Vec<(u32, u32)> = divisors(f.order())
                .into_iter()
                .flat_map(|n| {
                    let n2 = n / points::gcd(n, q + 1);
                    let max = ((q - 1) / n2).saturating_sub(1);
                    (0..=max).map(move |t| (n, t))
                })
                .collect();
            let (n, t) = options[seed as usize % options.len()];
            points::coset_union_set(f, n, t, &Leaders::Smallest).unwrap()
        }
        _ => {
            let t = 1 + seed % q;
            points::affine_grid_set(f, t, None).unwrap()
        }
    }
}

/// A full-rank k×n generator over `f`, or `None` if the draw was singular.
fn generator(f: &FieldTower, k: usize, n: usize, seeds: &[u32]) -> Option<Matrix> {
    let rows = (0..k)
        .map(|r| (0..n).map(|c| element(f, seeds[r * n + c])).collect())
        .collect();
    let g = Matrix::from_rows(rows);
    (g.rank(f) == k).then_some(g)
}

fn brute_force_mds(f: &FieldTower, g: &Matrix) -> bool {
    let (k, n) = (g.rows(), g.cols());
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let cols: Vec<Vec<Element>> = subset.iter().map(|&c| g.column(c)).collect();
        if Matrix::from_rows(cols).rank(f) < k {
            return false;
        }
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            return true;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

type Check = Result<(), TestCaseError>;

/// A randomized invariant, run for a given number of cases.
pub struct Property {
    pub name: &'static str,
    pub run: fn(u32) -> Result<(), String>,
}

pub const ALL: &[Property] = &[
    Property { name: "residue identity on point sets", run: residues_vanish_on_point_sets },
    Property { name: "norm_preimage", run: norm_preimage_inverts_the_norm },
    Property { name: "Frobenius weight invariance", run: frobenius_preserves_weight },
    Property { name: "dual involution", run: dual_is_an_involution },
    Property { name: "DualByColumns vs Exhaustive", run: column_search_matches_enumeration },
    Property { name: "is_mds vs brute force", run: mds_check_matches_brute_force },
];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        max_global_rejects: cases * 4,
        failure_persistence: None,
        ..Config::default()
    })
}

fn residues_vanish_on_point_sets(cases: u32) -> Result<(), String> {
    let strategy = (any::<prop::sample::Index>(), 0u32..3, any::<u32>(), any::<u32>());
    runner(cases)
        .run(&strategy, |(tower, family, seed, e_seed)| -> Check {
            let f = tower.get(towers());
            let set = point_set(f, family, seed);
            prop_assume!(set.len() >= 2);
            let h = points::local_derivatives(f, &set.points);
            let e = e_seed % (set.len() as u32 - 1);
            let total = f.sum(set.points.iter().zip(&h).map(|(&a, &d)| f.div(f.pow(a, e as i64), d)));
            prop_assert!(total.is_zero(), "e = {} on {} points", e, set.len());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn norm_preimage_inverts_the_norm(cases: u32) -> Result<(), String> {
    let strategy = (any::<prop::sample::Index>(), any::<u32>());
    runner(cases)
        .run(&strategy, |(tower, seed)| -> Check {
            let f = tower.get(towers());
            let base = f.base_field_elements();
            let c = base[1 + seed as usize % (base.len() - 1)];
            let v = f.norm_preimage(c).unwrap();
            prop_assert_eq!(f.relative_norm(v), c);
            let outside = f.theta_pow(1 + (seed % f.q()) as i64);
            prop_assert!(f.norm_preimage(outside).is_err());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn frobenius_preserves_weight(cases: u32) -> Result<(), String> {
    let strategy = (any::<prop::sample::Index>(), prop::collection::vec(any::<u32>(), 1..40));
    runner(cases)
        .run(&strategy, |(tower, seeds)| -> Check {
            let f = tower.get(towers());
            let word: Vec<Element> = seeds.iter().map(|&s| element(f, s)).collect();
            let conj: Vec<Element> = word.iter().map(|&x| f.frobenius(x)).collect();
            prop_assert_eq!(weight(&word), weight(&conj));
            let back: Vec<Element> = conj.iter().map(|&x| f.frobenius(x)).collect();
            prop_assert_eq!(back, word);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn dual_is_an_involution(cases: u32) -> Result<(), String> {
    let strategy = (
        any::<prop::sample::Index>(),
        1usize..5,
        1usize..6,
        prop::collection::vec(any::<u32>(), 40),
        any::<bool>(),
    );
    runner(cases)
        .run(&strategy, |(tower, k, extra, seeds, hermitian)| -> Check {
            let f = tower.get(towers());
            let n = k + extra;
            let g = generator(f, k, n, &seeds);
            prop_assume!(g.is_some());
            let code = LinearCode::new(f, g.unwrap()).unwrap();
            let kind = if hermitian { DualKind::Hermitian } else { DualKind::Euclidean };
            let d = codes::dual(f, &code, kind);
            prop_assert_eq!(d.k(), n - k);
            prop_assert!(codes::dual(f, &d, kind).same_code(f, &code));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn column_search_matches_enumeration(cases: u32) -> Result<(), String> {
    let strategy = (
        any::<prop::sample::Index>(),
        1usize..4,
        4usize..13,
        prop::collection::vec(any::<u32>(), 36),
    );
    runner(cases)
        .run(&strategy, |(tower, k, n, seeds)| -> Check {
            let f = tower.get(small_towers());
            let g = generator(f, k, n, &seeds);
            prop_assume!(g.is_some());
            let code = LinearCode::new(f, g.unwrap()).unwrap();
            let h = codes::dual(f, &code, DualKind::Euclidean);
            let budget = Budget::default();
            let exhaustive = codes::distance(f, code.generator(), DistanceMode::Exhaustive, &budget).unwrap();
            let columns =
                codes::distance(f, h.generator(), DistanceMode::DualByColumns { d_max: n }, &budget).unwrap();
            prop_assert!(exhaustive.is_exact());
            prop_assert!(columns.is_exact());
            prop_assert_eq!(exhaustive.value(), columns.value());
            if let Distance::Exact { witness: codes::Witness::Columns(cols), .. } = columns {
                let picked: Vec<Vec<Element>> = cols.iter().map(|&c| h.generator().column(c)).collect();
                prop_assert!(Matrix::from_rows(picked).rank(f) < cols.len());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn mds_check_matches_brute_force(cases: u32) -> Result<(), String> {
    let strategy = (
        any::<prop::sample::Index>(),
        1usize..5,
        2usize..10,
        prop::collection::vec(any::<u32>(), 40),
    );
    runner(cases)
        .run(&strategy, |(tower, k, n, seeds)| -> Check {
            let f = tower.get(&towers()[..12]);
            prop_assume!(k <= n);
            let g = generator(f, k, n, &seeds);
            prop_assume!(g.is_some());
            let g = g.unwrap();
            let verdict = codes::is_mds(f, &g, &Budget::default()).unwrap();
            prop_assert_eq!(verdict.mds, brute_force_mds(f, &g));
            if let Some(cols) = verdict.witness {
                let picked: Vec<Vec<Element>> = cols.iter().map(|&c| g.column(c)).collect();
                prop_assert!(Matrix::from_rows(picked).rank(f) < cols.len());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
