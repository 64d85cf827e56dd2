//! Catalog entries, parameter sweeps and table reproduction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{self, Budget, Distance, DistanceMode, Matrix};
use crate::constructions::{
    self, CertifiedCode, ConstructionError, ConstructionId, ConstructionRequest, EmbedPolicy,
    HermitianCase, TraceEvent,
};
use crate::field::{FieldError, FieldTower};
use crate::points::gcd;
use crate::quantum::{self, DistanceMethod, QuantumParams};

/// Primal distances are enumerated only below this many codewords.
pub const PRIMAL_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Verdict {
    #[serde(rename = "CERTIFIED")]
    Certified,
    #[serde(rename = "REJECTED")]
    Rejected { reason: String },
    #[serde(rename = "SKIPPED")]
    Skipped { reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalParams {
    pub q2: u32,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mds: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub request: Option<ConstructionRequest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mds_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEvent>,
    pub elapsed_ms: u64,
    pub verdict: Verdict,
}

impl CatalogEntry {
    pub fn rejected(request: Option<ConstructionRequest>, reason: String) -> Self {
        Self {
            request,
            source: None,
            classical: None,
            quantum: None,
            gram_digest: None,
            mds_witness: None,
            trace: Vec::new(),
            elapsed_ms: 0,
            verdict: Verdict::Rejected { reason },
        }
    }

    pub fn skipped(request: Option<ConstructionRequest>, reason: String) -> Self {
        Self {
            verdict: Verdict::Skipped { reason },
            ..Self::rejected(request, String::new())
        }
    }
}

fn primal_distance(f: &FieldTower, g: &Matrix, mds: Option<bool>, budget: &Budget) -> Option<usize> {
    if mds == Some(true) {
        return Some(g.cols() - g.rows() + 1);
    }
    let capped = Budget {
        codeword_cap: budget.codeword_cap.min(PRIMAL_ENUMERATION_CAP),
        ..*budget
    };
    match codes::distance(f, g, DistanceMode::Exhaustive, &capped) {
        Ok(Distance::Exact { d, .. }) => Some(d),
        _ => None,
    }
}

/// Catalog entry for a certified code.
pub fn entry_for(f: &FieldTower, code: &CertifiedCode, budget: &Budget, started: Instant) -> CatalogEntry {
    let mds = code.mds.as_ref().map(|v| v.mds);
    let quantum = quantum::stabilizer_params(f, code, budget).ok();
    CatalogEntry {
        request: Some(code.request.clone()),
        source: None,
        classical: Some(ClassicalParams {
            q2: f.size(),
            n: code.n(),
            k: code.k(),
            d: primal_distance(f, code.generator(), mds, budget),
            mds,
        }),
        quantum,
        gram_digest: Some(code.gram.digest()),
        mds_witness: code.mds.as_ref().and_then(|v| v.witness.clone()),
        trace: code.trace.clone(),
        elapsed_ms: started.elapsed().as_millis() as u64,
        verdict: Verdict::Certified,
    }
}

/// Verdict for an arbitrary generator matrix.
pub fn verify_matrix(f: &FieldTower, g: &Matrix, source: Option<String>, budget: &Budget) -> CatalogEntry {
    let started = Instant::now();
    let gram = codes::hermitian_gram(f, g);
    let mut entry = CatalogEntry {
        source,
        gram_digest: Some(gram.digest()),
        ..CatalogEntry::rejected(None, String::new())
    };
    if let Some((i, j, value)) = gram.first_nonzero() {
        entry.verdict = Verdict::Rejected {
            reason: ConstructionError::GramNonzero { i, j, value }.to_string(),
        };
        entry.elapsed_ms = started.elapsed().as_millis() as u64;
        return entry;
    }
    let rank = g.rank(f);
    if rank != g.rows() {
        entry.verdict = Verdict::Rejected {
            reason: codes::CodeError::RankDefect {
                rank,
                expected: g.rows(),
            }
            .to_string(),
        };
        return entry;
    }
    let verdict = codes::is_mds(f, g, budget).ok();
    let mds = verdict.as_ref().map(|v| v.mds);
    entry.mds_witness = verdict.as_ref().and_then(|v| v.witness.clone());
    entry.quantum = Some(match mds {
        Some(true) => QuantumParams {
            q: f.q(),
            n: g.cols(),
            k: g.cols() - 2 * g.rows(),
            d: Some(g.rows() + 1),
            d_method: DistanceMethod::Exact,
            mds: Some(true),
            defect: Some(0),
            witness: None,
            designed_dual: None,
        },
        _ => quantum::params_for_generator(f, g, budget),
    });
    entry.classical = Some(ClassicalParams {
        q2: f.size(),
        n: g.cols(),
        k: g.rows(),
        d: primal_distance(f, g, mds, budget),
        mds,
    });
    entry.verdict = Verdict::Certified;
    entry.elapsed_ms = started.elapsed().as_millis() as u64;
    entry
}

fn failure_entry(request: &ConstructionRequest, err: &ConstructionError) -> CatalogEntry {
    if err.is_budget() {
        CatalogEntry::skipped(Some(request.clone()), err.to_string())
    } else {
        CatalogEntry::rejected(Some(request.clone()), err.to_string())
    }
}

/// Runs one request and returns an entry per certified code in its chain.
pub fn run_request(request: &ConstructionRequest, budget: &Budget) -> Result<Vec<CatalogEntry>, ConstructionError> {
    let f = FieldTower::new(request.p, request.m)?;
    let started = Instant::now();
    let out = constructions::construct(&f, request, budget)?;
    Ok(out.chain.iter().map(|c| entry_for(&f, c, budget, started)).collect())
}

// ---------------------------------------------------------------- scanning

#[derive(Debug, Clone, Default)]
pub struct ScanSpec {
    pub ids: Vec<ConstructionId>,
    /// (p, m) pairs.
    pub fields: Vec<(u32, u32)>,
    pub n: Option<Vec<u32>>,
    pub t: Option<Vec<u32>>,
    pub k: Option<Vec<u32>>,
    pub embed: EmbedPolicy,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub q: u32,
    pub holds: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    pub entries: Vec<CatalogEntry>,
    pub assumption1: Vec<AssumptionCheck>,
    pub rejected: usize,
    pub skipped: usize,
}

fn admissible_line_lengths(q: u32) -> Vec<u32> {
    let order = q * q - 1;
    (3..=q * q).filter(|n| order.is_multiple_of(n - 1)).collect()
}

fn divisors(x: u32) -> Vec<u32> {
    (2..=x).filter(|d| x.is_multiple_of(*d)).collect()
}

/// Every request on the grid whose parameters make sense for its family.
pub fn scan_requests(spec: &ScanSpec) -> Vec<ConstructionRequest> {
    let mut out = Vec::new();
    for &(p, m) in &spec.fields {
        let q = p.pow(m);
        for &id in &spec.ids {
            let base = ConstructionRequest {
                embed: spec.embed,
                ..ConstructionRequest::new(id, p, m)
            };
            let ns: Vec<Option<u32>> = match id {
                ConstructionId::C1 | ConstructionId::C6 | ConstructionId::C7(HermitianCase::RootsOfUnity) => spec
                    .n
                    .clone()
                    .unwrap_or_else(|| admissible_line_lengths(q))
                    .into_iter()
                    .map(Some)
                    .collect(),
                ConstructionId::C2 | ConstructionId::C3 | ConstructionId::C7(HermitianCase::CosetUnion) => spec
                    .n
                    .clone()
                    .unwrap_or_else(|| divisors(q * q - 1))
                    .into_iter()
                    .map(Some)
                    .collect(),
                _ => vec![None],
            };
            let ts: Vec<Option<u32>> = match id {
                ConstructionId::C2
                | ConstructionId::C3
                | ConstructionId::C4
                | ConstructionId::C7(HermitianCase::CosetUnion)
                | ConstructionId::C7(HermitianCase::AffineGrid) => {
                    spec.t.clone().unwrap_or_else(|| (1..q).collect()).into_iter().map(Some).collect()
                }
                ConstructionId::C9 | ConstructionId::C10 => spec
                    .t
                    .clone()
                    .unwrap_or_else(|| (2..=q + 1).filter(|&t| gcd(t, q) == 1).collect())
                    .into_iter()
                    .map(Some)
                    .collect(),
                _ if spec.embed == EmbedPolicy::Deep => spec
                    .t
                    .clone()
                    .unwrap_or_else(|| divisors(q + 1))
                    .into_iter()
                    .map(Some)
                    .collect(),
                _ => vec![None],
            };
            let ks: Vec<Option<u32>> = match &spec.k {
                Some(ks) => ks.iter().copied().map(Some).collect(),
                None => vec![None],
            };
            for &n in &ns {
                for &t in &ts {
                    for &k in &ks {
                        let mut r = base.clone();
                        r.n = if spec.embed == EmbedPolicy::Deep { None } else { n };
                        r.t = t;
                        r.k = if spec.embed == EmbedPolicy::Deep { None } else { k };
                        if !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    out
}

fn sort_key(e: &CatalogEntry) -> (u32, usize, usize) {
    e.quantum
        .as_ref()
        .map(|q| (q.q, q.n, q.k))
        .unwrap_or((0, 0, 0))
}

/// Runs the grid in parallel; certified codes are deduplicated by
/// (q, n, k_Q), keeping the largest distance, and sorted by that key.
pub fn scan(spec: &ScanSpec, budget: &Budget) -> ScanReport {
    let requests = scan_requests(spec);
    let results: Vec<Vec<CatalogEntry>> = requests
        .par_iter()
        .map(|r| match run_request(r, budget) {
            Ok(entries) => entries,
            Err(e) if e.is_rejection() || e.is_budget() => vec![failure_entry(r, &e)],
            Err(_) => Vec::new(),
        })
        .collect();
    let mut report = ScanReport::default();
    let mut best: BTreeMap<(u32, usize, usize), CatalogEntry> = BTreeMap::new();
    for entry in results.into_iter().flatten() {
        match &entry.verdict {
            Verdict::Certified => {
                let key = sort_key(&entry);
                let d = |e: &CatalogEntry| e.quantum.as_ref().and_then(|q| q.d).unwrap_or(0);
                match best.get(&key) {
                    Some(kept) if d(kept) >= d(&entry) => {}
                    _ => {
                        best.insert(key, entry);
                    }
                }
            }
            Verdict::Rejected { .. } => report.rejected += 1,
            Verdict::Skipped { .. } => report.skipped += 1,
        }
    }
    report.entries = best.into_values().collect();
    if spec.ids.contains(&ConstructionId::C5) {
        for &(p, m) in &spec.fields {
            if p != 2 {
                continue;
            }
            if let Ok(f) = FieldTower::new(p, m) {
                if let Ok(holds) = constructions::elliptic_assumption(&f, None) {
                    report.assumption1.push(AssumptionCheck { q: f.q(), holds });
                }
            }
        }
    }
    report
}

// ----------------------------------------------------------- reproduction

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Mds1,
    Mixed,
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mds1" => Ok(Self::Mds1),
            "mixed" => Ok(Self::Mixed),
            _ => Err(format!("unknown table `{s}`")),
        }
    }
}

/// Printed parameters: `[[n,k,d]]_q` for quantum codes, `[n,k,d]_Q` with
/// Q = q² for classical ones. A distance may carry a `≥` prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub quantum: bool,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub at_least: bool,
    pub field: u32,
}

impl FromStr for Expected {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, field) = s.rsplit_once('_').ok_or_else(|| format!("missing field in `{s}`"))?;
        let field: u32 = field.parse().map_err(|_| format!("bad field in `{s}`"))?;
        let (quantum, inner) = if let Some(x) = body.strip_prefix("[[").and_then(|b| b.strip_suffix("]]")) {
            (true, x)
        } else if let Some(x) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            (false, x)
        } else {
            return Err(format!("expected brackets in `{s}`"));
        };
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [n, k, d] = parts[..] else {
            return Err(format!("expected three parameters in `{s}`"));
        };
        let (d, at_least) = match d.strip_prefix('≥') {
            Some(rest) => (rest, true),
            None => (d, false),
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("bad number `{x}` in `{s}`"));
        Ok(Self {
            quantum,
            n: num(n)?,
            k: num(k)?,
            d: num(d)?,
            at_least,
            field,
        })
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ge = if self.at_least { "≥" } else { "" };
        if self.quantum {
            write!(f, "[[{},{},{ge}{}]]_{}", self.n, self.k, self.d, self.field)
        } else {
            write!(f, "[{},{},{ge}{}]_{}", self.n, self.k, self.d, self.field)
        }
    }
}

/// A pinned recipe: the request, then `extra` further single embeddings of
/// the last certified code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recipe {
    pub request: ConstructionRequest,
    pub extra: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproTarget {
    pub table: TableId,
    pub row: String,
    pub expected: String,
    pub recipe: Recipe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum ReproStatus {
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "UNMATCHED")]
    Unmatched { expected: String, computed: String },
    #[serde(rename = "SKIPPED")]
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproRow {
    pub table: TableId,
    pub row: String,
    pub expected: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    pub result: ReproStatus,
    pub elapsed_ms: u64,
}

fn req(id: ConstructionId, q: (u32, u32)) -> ConstructionRequest {
    ConstructionRequest::new(id, q.0, q.1)
}

fn target(table: TableId, row: &str, expected: &str, request: ConstructionRequest, extra: usize) -> ReproTarget {
    ReproTarget {
        table,
        row: row.to_string(),
        expected: expected.to_string(),
        recipe: Recipe { request, extra },
    }
}

/// (p, m) for the odd and even prime powers used by the tables.
fn pm(q: u32) -> (u32, u32) {
    match q {
        4 => (2, 2),
        8 => (2, 3),
        9 => (3, 2),
        16 => (2, 4),
        25 => (5, 2),
        27 => (3, 3),
        32 => (2, 5),
        _ => (q, 1),
    }
}

pub fn targets(table: TableId) -> Vec<ReproTarget> {
    use ConstructionId::*;
    let mut out = Vec::new();
    match table {
        TableId::Mds1 => {
            let first = [
                (5, "[[9,3,4]]_5"),
                (7, "[[13,7,4]]_7"),
                (9, "[[17,11,4]]_9"),
                (11, "[[21,15,4]]_11"),
                (13, "[[25,19,4]]_13"),
                (17, "[[33,27,4]]_17"),
                (19, "[[37,31,4]]_19"),
                (23, "[[45,39,4]]_23"),
                (25, "[[49,43,4]]_25"),
                (27, "[[53,47,4]]_27"),
            ];
            for (q, e) in first {
                let r = req(C1, pm(q)).n(2 * q - 1).k(2);
                out.push(target(table, "line n=2q-1", e, r, 1));
            }
            let deep = [
                (5, "[[9,3,4]]_5"),
                (7, "[[14,6,5]]_7"),
                (9, "[[17,7,6]]_9"),
                (11, "[[22,10,7]]_11"),
                (13, "[[25,11,8]]_13"),
                (17, "[[33,15,10]]_17"),
                (19, "[[38,18,11]]_19"),
                (23, "[[46,22,13]]_23"),
                (25, "[[49,23,14]]_25"),
                (27, "[[54,26,15]]_27"),
            ];
            for (q, e) in deep {
                let r = req(C1, pm(q)).t(2).embed(EmbedPolicy::Deep);
                out.push(target(table, "deep dimension", e, r, 0));
            }
            let cosets = [
                (3, "[[49,43,4]]_17", "[[49,41,5]]_17"),
                (4, "[[61,53,5]]_17", "[[62,52,6]]_17"),
                (5, "[[73,65,5]]_17", "[[74,64,6]]_17"),
                (6, "[[85,75,6]]_17", "[[85,73,7]]_17"),
                (7, "[[97,85,7]]_17", "[[97,83,8]]_17"),
            ];
            for (t, plain, embedded) in cosets {
                let r = req(C3, pm(17)).n(12).t(t);
                out.push(target(table, "cosets n=12", plain, r.clone(), 0));
                out.push(target(table, "cosets n=12 embedded", embedded, r, 1));
            }
            let grids: [(u32, u32, &[&str]); 14] = [
                (7, 3, &["[[21,13,5]]_7", "[[22,12,6]]_7"]),
                (7, 4, &["[[28,18,6]]_7"]),
                (7, 5, &["[[36,24,7]]_7"]),
                (8, 2, &["[[16,10,4]]_8", "[[16,8,5]]_8", "[[16,6,6]]_8"]),
                (8, 3, &["[[24,16,5]]_8", "[[24,14,6]]_8", "[[24,12,7]]_8"]),
                (8, 4, &["[[32,22,6]]_8", "[[32,20,7]]_8"]),
                (8, 5, &["[[40,28,7]]_8"]),
                (8, 6, &["[[48,34,8]]_8"]),
                (9, 2, &["[[18,12,4]]_9", "[[18,10,5]]_9", "[[18,8,6]]_9"]),
                (9, 3, &["[[27,19,5]]_9", "[[27,17,6]]_9", "[[28,16,7]]_9"]),
                (9, 4, &["[[36,26,6]]_9", "[[36,24,7]]_9"]),
                (9, 5, &["[[45,33,7]]_9", "[[45,31,8]]_9"]),
                (9, 6, &["[[54,40,8]]_9", "[[55,39,9]]_9"]),
                (9, 7, &["[[64,48,9]]_9"]),
            ];
            for (q, t, rows) in grids {
                for (i, e) in rows.iter().enumerate() {
                    let label = if i == 0 { "affine grid" } else { "subcode embedding" };
                    out.push(target(table, label, e, req(C4, pm(q)).t(t), i + 1));
                }
            }
            out.push(target(
                table,
                "base-field cosets",
                "[17,3,15]_81",
                req(C2, pm(9)).n(8).t(2),
                1,
            ));
            out.push(target(
                table,
                "cosets n=12 t=2",
                "[26,3,24]_289",
                req(C3, pm(17)).n(12).t(2),
                1,
            ));
        }
        TableId::Mixed => {
            let ell = |q: u32, k: u32| req(C5, pm(q)).k(k);
            out.push(target(table, "elliptic", "[[24,18,3]]_4", ell(4, 4), 0));
            out.push(target(table, "elliptic", "[[20,12,4]]_4", ell(4, 5), 0));
            out.push(target(table, "elliptic", "[[80,64,8]]_8", ell(8, 9), 0));
            out.push(target(table, "elliptic", "[[288,228,30]]_16", ell(16, 31), 0));
            out.push(target(table, "elliptic", "[[1088,884,102]]_32", ell(32, 103), 0));
            out.push(target(
                table,
                "Hermitian",
                "[[64,58,3]]_4",
                req(C7(HermitianCase::RootsOfUnity), pm(4)).n(16).dim(3),
                0,
            ));
            for (dim, e) in [
                (3, "[[95,89,3]]_5"),
                (4, "[[95,87,3]]_5"),
                (5, "[[95,85,3]]_5"),
                (6, "[[95,83,4]]_5"),
            ] {
                let r = req(C7(HermitianCase::CosetUnion), pm(5)).n(6).t(2).dim(dim);
                out.push(target(table, "Hermitian", e, r, 0));
            }
            out.push(target(table, "semi-Hermitian", "[[15,9,3]]_3", req(C9, pm(3)).t(2).k(4), 0));
            for (q, dim, e) in [
                (5, 3, "[[65,59,3]]_5"),
                (5, 7, "[[65,51,5]]_5"),
                (5, 8, "[[65,49,≥5]]_5"),
                (7, 3, "[[175,169,3]]_7"),
            ] {
                out.push(target(table, "semi-Hermitian", e, req(C8, pm(q)).dim(dim), 0));
            }
            for (id, q, t, dim, e) in [
                (C10, 4, 5, 3, "[[64,58,3]]_4"),
                (C9, 7, 2, 5, "[[91,81,4]]_7"),
                (C10, 8, 3, 4, "[[176,168,3]]_8"),
                (C9, 9, 7, 4, "[[63,55,3]]_9"),
                (C9, 9, 5, 4, "[[369,361,3]]_9"),
            ] {
                out.push(target(table, "Artin-Schreier", e, req(id, pm(q)).t(t).dim(dim), 0));
            }
        }
    }
    out
}

fn compare(expected: &Expected, code: &CertifiedCode, params: Option<&QuantumParams>, f: &FieldTower) -> (String, ReproStatus) {
    if expected.quantum {
        let Some(qp) = params else {
            return ("?".into(), ReproStatus::Skipped { reason: "no quantum parameters".into() });
        };
        let computed = qp.label();
        let unmatched = || ReproStatus::Unmatched {
            expected: expected.to_string(),
            computed: computed.clone(),
        };
        if qp.n != expected.n || qp.k != expected.k || qp.q != expected.field {
            return (computed.clone(), unmatched());
        }
        let status = match (qp.d, qp.d_method) {
            (Some(d), DistanceMethod::Exact) if d == expected.d || (expected.at_least && d >= expected.d) => {
                ReproStatus::Match
            }
            (Some(_), DistanceMethod::Exact) => unmatched(),
            (Some(d), DistanceMethod::LowerBound) if expected.at_least && d >= expected.d => ReproStatus::Match,
            (Some(d), DistanceMethod::LowerBound) if d > expected.d => unmatched(),
            _ => ReproStatus::Skipped {
                reason: "dual distance beyond the subset cap".into(),
            },
        };
        (computed, status)
    } else {
        let mds = code.mds.as_ref().map(|v| v.mds);
        let d = primal_distance(f, code.generator(), mds, &Budget::default());
        let computed = match d {
            Some(d) => format!("[{},{},{}]_{}", code.n(), code.k(), d, f.size()),
            None => format!("[{},{},?]_{}", code.n(), code.k(), f.size()),
        };
        let status = if code.n() != expected.n || code.k() != expected.k || f.size() != expected.field {
            ReproStatus::Unmatched {
                expected: expected.to_string(),
                computed: computed.clone(),
            }
        } else {
            match d {
                Some(d) if d == expected.d => ReproStatus::Match,
                Some(_) => ReproStatus::Unmatched {
                    expected: expected.to_string(),
                    computed: computed.clone(),
                },
                None => ReproStatus::Skipped {
                    reason: "primal distance beyond the enumeration cap".into(),
                },
            }
        };
        (computed, status)
    }
}

fn run_recipe(recipe: &Recipe, budget: &Budget) -> Result<(FieldTower, CertifiedCode), ConstructionError> {
    let r = &recipe.request;
    let f = FieldTower::new(r.p, r.m)?;
    let mut code = constructions::construct(&f, r, budget)?.chain.pop().expect("non-empty chain");
    for _ in 0..recipe.extra {
        code = constructions::embed_once(&f, &code, budget)
            .map_err(|e| ConstructionError::EmbeddingRejected(Box::new(e)))?;
    }
    Ok((f, code))
}

fn field_error_is_budget(e: &ConstructionError) -> bool {
    matches!(e, ConstructionError::Field(FieldError::FieldTooLarge { .. })) || e.is_budget()
}

pub fn reproduce_target(target: &ReproTarget, budget: &Budget) -> ReproRow {
    let started = Instant::now();
    let expected: Expected = target.expected.parse().expect("built-in targets parse");
    let (computed, result) = match run_recipe(&target.recipe, budget) {
        Ok((f, code)) => {
            let params = quantum::stabilizer_params(&f, &code, budget).ok();
            let (computed, status) = compare(&expected, &code, params.as_ref(), &f);
            (Some(computed), status)
        }
        Err(e) if field_error_is_budget(&e) => (None, ReproStatus::Skipped { reason: e.to_string() }),
        Err(e) => (
            None,
            ReproStatus::Unmatched {
                expected: target.expected.clone(),
                computed: e.to_string(),
            },
        ),
    };
    ReproRow {
        table: target.table,
        row: target.row.clone(),
        expected: target.expected.clone(),
        computed,
        result,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Runs every target of `table`, in table order.
pub fn reproduce(table: TableId, budget: &Budget) -> Vec<ReproRow> {
    let targets = targets(table);
    targets.par_iter().map(|t| reproduce_target(t, budget)).collect()
}
