//! End-to-end constructions: point set or curve, twist, evaluation code,
//! Gram certificate, then the optional embedding steps.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{
    self, binomial, Budget, CodeError, GramCertificate, LinearCode, Matrix, MdsVerdict,
};
use crate::curves::{self, CurveError, CurveSpec, FamilyRequest, Point, XSelector};
use crate::field::{Element, FieldError, FieldTower};
use crate::points::{self, EvaluationSet, Leaders, PointSetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HermitianCase {
    #[serde(rename = "i")]
    RootsOfUnity,
    #[serde(rename = "ii")]
    CosetUnion,
    #[serde(rename = "iii")]
    AffineGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstructionId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7(HermitianCase),
    C8,
    C9,
    C10,
}

impl ConstructionId {
    pub fn is_genus_zero(self) -> bool {
        matches!(self, Self::C1 | Self::C2 | Self::C3 | Self::C4)
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::C7(case) => {
                let tag = match case {
                    HermitianCase::RootsOfUnity => "i",
                    HermitianCase::CosetUnion => "ii",
                    HermitianCase::AffineGrid => "iii",
                };
                write!(f, "C7-{tag}")
            }
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for ConstructionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "c1" => Self::C1,
            "c2" => Self::C2,
            "c3" => Self::C3,
            "c4" => Self::C4,
            "c5" => Self::C5,
            "c6" => Self::C6,
            "c7" | "c7-i" => Self::C7(HermitianCase::RootsOfUnity),
            "c7-ii" => Self::C7(HermitianCase::CosetUnion),
            "c7-iii" => Self::C7(HermitianCase::AffineGrid),
            "c8" => Self::C8,
            "c9" => Self::C9,
            "c10" => Self::C10,
            _ => return Err(format!("unknown construction `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedPolicy {
    #[default]
    None,
    Once,
    Iterate,
    Deep,
}

impl FromStr for EmbedPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "once" => Ok(Self::Once),
            "iterate" => Ok(Self::Iterate),
            "deep" => Ok(Self::Deep),
            _ => Err(format!("unknown embedding policy `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionRequest {
    pub id: ConstructionId,
    pub p: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Target code dimension for curve constructions; picks the smallest k
    /// whose basis has this size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    /// Elliptic constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Element>,
    #[serde(default)]
    pub embed: EmbedPolicy,
}

impl ConstructionRequest {
    pub fn new(id: ConstructionId, p: u32, m: u32) -> Self {
        Self {
            id,
            p,
            m,
            n: None,
            t: None,
            k: None,
            dim: None,
            c: None,
            embed: EmbedPolicy::None,
        }
    }

    pub fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn t(mut self, t: u32) -> Self {
        self.t = Some(t);
        self
    }

    pub fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn dim(mut self, dim: u32) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn embed(mut self, policy: EmbedPolicy) -> Self {
        self.embed = policy;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("divisibility condition violated: {0}")]
    DivisibilityViolated(String),
    #[error("Gram matrix entry ({i},{j}) is {value}, not zero")]
    GramNonzero { i: usize, j: usize, value: Element },
    #[error("embedding rejected: {0}")]
    EmbeddingRejected(Box<ConstructionError>),
    #[error("embedding applies to genus-0 codes that have not been extended")]
    EmbeddingUnsupported,
    #[error("Assumption 1 fails for this q: h'(α_{0}) is not a norm value")]
    AssumptionFails(usize),
    #[error("no k gives dimension {0}")]
    UnreachableDimension(u32),
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl ConstructionError {
    /// True for rejections caused by the Gram oracle or rank checks, as
    /// opposed to malformed requests.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            Self::GramNonzero { .. }
                | Self::EmbeddingRejected(_)
                | Self::AssumptionFails(_)
                | Self::Code(CodeError::RankDefect { .. })
                | Self::PointSet(PointSetError::NotNormValue(_))
        )
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Self::Code(CodeError::CapExceeded { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Built {
        construction: String,
        n: usize,
        k: usize,
        k_param: u32,
    },
    /// Declared range g+1 ≤ k ≤ ⌊(N+q+2g−1)/(q+1)⌋.
    KRange { low: u32, high: u32, within: bool },
    /// B(j) = (q+1)(j−1) mod (n−1) for j = 1..k.
    BValues { values: Vec<u32> },
    Deep {
        t: u32,
        k2: u32,
        case: String,
    },
    Embedded {
        case: String,
        n_from: usize,
        n_to: usize,
        k_to: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<Element>,
    },
    Rejected { case: String, reason: String },
}

/// Lower bounds implied by the construction, kept for reference only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignedBounds {
    pub genus: u32,
    /// n − deg G for the primal code.
    pub primal: i64,
    /// k + 1 − 2g for the Hermitian dual.
    pub dual: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LineData {
    pub points: Vec<Element>,
    pub twist: Vec<Element>,
    pub extended: bool,
}

/// A code whose Hermitian Gram matrix has been checked to vanish.
#[derive(Debug, Clone)]
pub struct CertifiedCode {
    pub request: ConstructionRequest,
    pub code: LinearCode,
    pub gram: GramCertificate,
    pub mds: Option<MdsVerdict>,
    pub designed: DesignedBounds,
    pub curve: Option<CurveSpec>,
    pub trace: Vec<TraceEvent>,
    pub(crate) line: Option<LineData>,
}

impl CertifiedCode {
    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn generator(&self) -> &Matrix {
        self.code.generator()
    }

    /// Points and twist of a genus-0 code, if it still has that shape.
    pub fn line_data(&self) -> Option<(&[Element], &[Element])> {
        self.line
            .as_ref()
            .filter(|l| !l.extended)
            .map(|l| (l.points.as_slice(), l.twist.as_slice()))
    }
}

/// Certified codes produced by one request, in order of construction.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub chain: Vec<CertifiedCode>,
    /// Why an iterated embedding stopped.
    pub stopped: Option<ConstructionError>,
}

impl Outcome {
    pub fn last(&self) -> &CertifiedCode {
        self.chain.last().expect("outcomes hold at least one code")
    }
}

pub fn construct(
    f: &FieldTower,
    request: &ConstructionRequest,
    budget: &Budget,
) -> Result<Outcome, ConstructionError> {
    if request.embed != EmbedPolicy::None && !request.id.is_genus_zero() {
        return Err(ConstructionError::EmbeddingUnsupported);
    }
    if request.embed == EmbedPolicy::Deep {
        let q = f.q();
        let t = match (request.t, request.n) {
            (Some(t), _) => t,
            (None, Some(n)) if n > 1 && (n - 1) % (q - 1) == 0 => (n - 1) / (q - 1),
            (None, Some(n)) => {
                return Err(ConstructionError::DivisibilityViolated(format!(
                    "deep dimension needs n − 1 = {} divisible by q − 1 = {}",
                    n.saturating_sub(1),
                    q - 1
                )))
            }
            (None, None) => return Err(ConstructionError::MissingParameter("t")),
        };
        let base = deep_dimension(f, request, t, budget)?;
        let next = embed_once(f, &base, budget).map_err(|e| ConstructionError::EmbeddingRejected(Box::new(e)))?;
        return Ok(Outcome {
            chain: vec![base, next],
            stopped: None,
        });
    }
    let base = if request.id.is_genus_zero() {
        build_line_code(f, request, budget)?
    } else {
        build_curve_code(f, request, budget)?
    };
    match request.embed {
        EmbedPolicy::None | EmbedPolicy::Deep => Ok(Outcome {
            chain: vec![base],
            stopped: None,
        }),
        EmbedPolicy::Once => {
            let next = embed_once(f, &base, budget)
                .map_err(|e| ConstructionError::EmbeddingRejected(Box::new(e)))?;
            Ok(Outcome {
                chain: vec![base, next],
                stopped: None,
            })
        }
        EmbedPolicy::Iterate => {
            let (chain, stopped) = embed_iterate(f, base, budget);
            Ok(Outcome {
                chain,
                stopped: Some(stopped),
            })
        }
    }
}

fn point_set(f: &FieldTower, request: &ConstructionRequest) -> Result<EvaluationSet, ConstructionError> {
    let n = || request.n.ok_or(ConstructionError::MissingParameter("n"));
    let t = || request.t.ok_or(ConstructionError::MissingParameter("t"));
    Ok(match request.id {
        ConstructionId::C1 => points::roots_of_unity_set(f, n()?)?,
        ConstructionId::C2 => points::coset_union_set(f, n()?, t()?, &Leaders::SmallestInBaseField)?,
        ConstructionId::C3 => points::coset_union_set(f, n()?, t()?, &Leaders::Smallest)?,
        ConstructionId::C4 => points::affine_grid_set(f, t()?, None)?,
        _ => unreachable!("curve constructions use x-supports"),
    })
}

fn line_rows(f: &FieldTower, pts: &[Element], twist: &[Element], k: u32) -> Result<LinearCode, CodeError> {
    let affine: Vec<Point> = pts.iter().map(|&x| (x, Element::ZERO)).collect();
    let basis: Vec<(u32, u32)> = (0..k).map(|i| (i, 0)).collect();
    codes::evaluation_code(f, &basis, &affine, twist)
}

fn certify(f: &FieldTower, code: &LinearCode) -> Result<GramCertificate, ConstructionError> {
    let gram = codes::hermitian_gram(f, code.generator());
    match gram.first_nonzero() {
        None => Ok(gram),
        Some((i, j, value)) => Err(ConstructionError::GramNonzero { i, j, value }),
    }
}

fn mds_within_budget(f: &FieldTower, code: &LinearCode, budget: &Budget) -> Option<MdsVerdict> {
    if binomial(code.n(), code.k()) > budget.subset_cap as u128 {
        return None;
    }
    codes::is_mds(f, code.generator(), budget).ok()
}

fn k_range(q: u32, genus: u32, n: usize) -> (u32, u32) {
    let high = (n as i64 + q as i64 + 2 * genus as i64 - 1) / (q as i64 + 1);
    (genus + 1, high.max(0) as u32)
}

fn designed(genus: u32, n: usize, k_param: u32) -> DesignedBounds {
    DesignedBounds {
        genus,
        primal: n as i64 - (k_param as i64 - 1),
        dual: k_param as i64 + 1 - 2 * genus as i64,
    }
}

fn build_line_code(
    f: &FieldTower,
    request: &ConstructionRequest,
    budget: &Budget,
) -> Result<CertifiedCode, ConstructionError> {
    let set = point_set(f, request)?;
    let twist = points::twist_vector(f, &set, None)?;
    let q = f.q();
    let (low, high) = k_range(q, 0, set.len());
    let k = request.k.unwrap_or(high.max(1));
    let code = line_rows(f, &set.points, &twist.values, k)?;
    let mut trace = vec![
        TraceEvent::Built {
            construction: request.id.to_string(),
            n: code.n(),
            k: code.k(),
            k_param: k,
        },
        TraceEvent::KRange {
            low,
            high,
            within: (low..=high).contains(&k),
        },
    ];
    if request.id == ConstructionId::C1 {
        let n1 = set.len() as u32 - 1;
        trace.push(TraceEvent::BValues {
            values: (1..=k).map(|j| ((q + 1) * (j - 1)) % n1).collect(),
        });
    }
    let gram = certify(f, &code)?;
    let mds = mds_within_budget(f, &code, budget);
    Ok(CertifiedCode {
        request: request.clone(),
        designed: designed(0, code.n(), k),
        code,
        gram,
        mds,
        curve: None,
        trace,
        line: Some(LineData {
            points: set.points,
            twist: twist.values,
            extended: false,
        }),
    })
}

/// The [n, ⌊n/(2t)⌋] code on U = {α : α^n = α} with n = t(q−1)+1, t | q+1.
pub fn deep_dimension(
    f: &FieldTower,
    request: &ConstructionRequest,
    t: u32,
    budget: &Budget,
) -> Result<CertifiedCode, ConstructionError> {
    let q = f.q();
    if t == 0 || !(q + 1).is_multiple_of(t) {
        return Err(ConstructionError::DivisibilityViolated(format!(
            "t = {t} must divide q+1 = {}",
            q + 1
        )));
    }
    let n = t * (q - 1) + 1;
    if let Some(given) = request.n {
        if given != n {
            return Err(ConstructionError::DivisibilityViolated(format!(
                "deep dimension needs n = t(q−1)+1 = {n}, got {given}"
            )));
        }
    }
    let set = points::roots_of_unity_set(f, n)?;
    let twist = points::twist_vector(f, &set, None)?;
    let k2 = n / (2 * t);
    let code = line_rows(f, &set.points, &twist.values, k2)?;
    let case = if (k2 * (q + 1)).is_multiple_of(n - 1) {
        "(n−1)|k″(q+1)"
    } else {
        "(n−1)∤k″(q+1)"
    };
    let trace = vec![
        TraceEvent::Built {
            construction: request.id.to_string(),
            n: code.n(),
            k: code.k(),
            k_param: k2,
        },
        TraceEvent::Deep {
            t,
            k2,
            case: case.to_string(),
        },
    ];
    let gram = certify(f, &code)?;
    let mds = mds_within_budget(f, &code, budget);
    let mut req = request.clone();
    req.n = Some(n);
    req.t = Some(t);
    Ok(CertifiedCode {
        request: req,
        designed: designed(0, code.n(), k2),
        code,
        gram,
        mds,
        curve: None,
        trace,
        line: Some(LineData {
            points: set.points,
            twist: twist.values,
            extended: false,
        }),
    })
}

fn embedding_case(n: usize, k: usize, q: u32) -> &'static str {
    let kq = k as u64 * (q as u64 + 1);
    let n1 = n as u64 - 1;
    if kq == n1 {
        "k(q+1)=n−1"
    } else if kq == n1 + q as u64 {
        "k(q+1)=n−1+q"
    } else {
        "n−1+q≠k(q+1)≠n−1"
    }
}

/// Appends the row (v_i α_i^k); when that row is not self-orthogonal on its
/// own, a new coordinate β with β^(q+1) = −⟨row,row⟩_H is added.
pub fn embed_once(
    f: &FieldTower,
    code: &CertifiedCode,
    budget: &Budget,
) -> Result<CertifiedCode, ConstructionError> {
    let (pts, twist) = code.line_data().ok_or(ConstructionError::EmbeddingUnsupported)?;
    let (n, k) = (code.n(), code.k());
    let q = f.q();
    let case = embedding_case(n, k, q);
    let row: Vec<Element> = pts
        .iter()
        .zip(twist)
        .map(|(&a, &v)| f.mul(v, f.pow(a, k as i64)))
        .collect();
    let g = code.generator();
    for i in 0..k {
        let value = codes::hermitian_inner(f, g.row(i), &row);
        if !value.is_zero() {
            return Err(ConstructionError::GramNonzero { i, j: k, value });
        }
    }
    let diag = codes::hermitian_inner(f, &row, &row);
    let mut generator = g.clone();
    generator.push_row(&row);
    let alpha = if diag.is_zero() {
        None
    } else {
        let beta = f.norm_preimage(f.neg(diag))?;
        let mut column = vec![Element::ZERO; k];
        column.push(beta);
        generator.push_column(&column);
        Some(beta)
    };
    let extended = LinearCode::new(f, generator)?;
    let gram = certify(f, &extended)?;
    let mds = mds_within_budget(f, &extended, budget);
    let mut trace = code.trace.clone();
    trace.push(TraceEvent::Embedded {
        case: case.to_string(),
        n_from: n,
        n_to: extended.n(),
        k_to: extended.k(),
        alpha,
    });
    let line = code.line.as_ref().map(|l| LineData {
        points: l.points.clone(),
        twist: l.twist.clone(),
        extended: alpha.is_some(),
    });
    Ok(CertifiedCode {
        request: code.request.clone(),
        designed: designed(0, extended.n(), k as u32 + 1),
        code: extended,
        gram,
        mds,
        curve: None,
        trace,
        line,
    })
}

/// Applies [`embed_once`] until it fails; returns every certified code,
/// starting with `base`, and the reason the chain stopped.
pub fn embed_iterate(
    f: &FieldTower,
    base: CertifiedCode,
    budget: &Budget,
) -> (Vec<CertifiedCode>, ConstructionError) {
    let mut chain = vec![base];
    loop {
        let last = chain.last().expect("chain is never empty");
        match embed_once(f, last, budget) {
            Ok(next) => chain.push(next),
            Err(e) => return (chain, e),
        }
    }
}

fn curve_request(id: ConstructionId, c: Option<Element>, t: Option<u32>) -> Result<FamilyRequest, ConstructionError> {
    Ok(match id {
        ConstructionId::C5 => FamilyRequest::Elliptic { c },
        ConstructionId::C6 => FamilyRequest::HyperElliptic,
        ConstructionId::C7(_) => FamilyRequest::Hermitian,
        ConstructionId::C8 => FamilyRequest::SemiHermitian,
        ConstructionId::C9 | ConstructionId::C10 => FamilyRequest::ArtinSchreier {
            t: t.ok_or(ConstructionError::MissingParameter("t"))?,
        },
        _ => unreachable!("line constructions handled separately"),
    })
}

fn build_curve_code(
    f: &FieldTower,
    request: &ConstructionRequest,
    budget: &Budget,
) -> Result<CertifiedCode, ConstructionError> {
    let q = f.q();
    match request.id {
        ConstructionId::C9 if q.is_multiple_of(2) => {
            return Err(ConstructionError::DivisibilityViolated("C9 needs odd q".into()))
        }
        ConstructionId::C10 if q % 2 == 1 => {
            return Err(ConstructionError::DivisibilityViolated("C10 needs even q".into()))
        }
        _ => {}
    }
    let curve = curves::curve(f, curve_request(request.id, request.c, request.t)?)?;
    let selector = match request.id {
        ConstructionId::C6 => Some(XSelector::RootsOfUnity {
            n: request.n.ok_or(ConstructionError::MissingParameter("n"))?,
        }),
        ConstructionId::C7(HermitianCase::RootsOfUnity) => {
            request.n.map(|n| XSelector::RootsOfUnity { n })
        }
        ConstructionId::C7(HermitianCase::CosetUnion) => Some(XSelector::CosetUnion {
            n: request.n.ok_or(ConstructionError::MissingParameter("n"))?,
            t: request.t.ok_or(ConstructionError::MissingParameter("t"))?,
        }),
        ConstructionId::C7(HermitianCase::AffineGrid) => Some(XSelector::AffineGrid {
            t: request.t.ok_or(ConstructionError::MissingParameter("t"))?,
        }),
        _ => None,
    };
    let support = curve.x_support(f, selector.as_ref())?;
    let derivatives = points::local_derivatives(f, &support.points);
    let unit = support.default_unit(f);
    let per_x = points::twist_from_derivatives(f, &derivatives, unit).map_err(|e| match (request.id, e) {
        (ConstructionId::C5, PointSetError::NotNormValue(i)) => ConstructionError::AssumptionFails(i),
        (_, e) => e.into(),
    })?;
    let mut pts = Vec::with_capacity(support.len() * curve.y_degree as usize);
    let mut twist = Vec::with_capacity(pts.capacity());
    for (&x, &v) in support.points.iter().zip(&per_x) {
        for pt in curve.fiber(f, x)? {
            pts.push(pt);
            twist.push(v);
        }
    }
    let (low, high) = k_range(q, curve.genus, pts.len());
    let k = match (request.k, request.dim) {
        (Some(k), _) => k,
        (None, Some(dim)) => smallest_k_for_dim(&curve, dim)?,
        (None, None) => high,
    };
    let basis = curve.rr_basis(k);
    let code = codes::evaluation_code(f, &basis, &pts, &twist)?;
    let trace = vec![
        TraceEvent::Built {
            construction: request.id.to_string(),
            n: code.n(),
            k: code.k(),
            k_param: k,
        },
        TraceEvent::KRange {
            low,
            high,
            within: (low..=high).contains(&k),
        },
    ];
    let gram = certify(f, &code)?;
    let mds = mds_within_budget(f, &code, budget);
    let mut req = request.clone();
    req.k = Some(k);
    if let curves::Family::Elliptic { c } = curve.family {
        req.c = Some(c);
    }
    Ok(CertifiedCode {
        request: req,
        designed: designed(curve.genus, code.n(), k),
        code,
        gram,
        mds,
        curve: Some(curve),
        trace,
        line: None,
    })
}

/// Whether every h'(α) on the elliptic x-support is a norm value, i.e. a
/// twist vector exists.
pub fn elliptic_assumption(f: &FieldTower, c: Option<Element>) -> Result<bool, ConstructionError> {
    let curve = curves::curve(f, FamilyRequest::Elliptic { c })?;
    let support = curve.x_support(f, None)?;
    let derivatives = points::local_derivatives(f, &support.points);
    match points::twist_from_derivatives(f, &derivatives, support.default_unit(f)) {
        Ok(_) => Ok(true),
        Err(PointSetError::NotNormValue(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn smallest_k_for_dim(curve: &CurveSpec, dim: u32) -> Result<u32, ConstructionError> {
    let limit = dim * curve.pole_x.max(1) + 2 * curve.genus + 2;
    (1..=limit)
        .find(|&k| curve.rr_basis(k).len() as u32 == dim)
        .ok_or(ConstructionError::UnreachableDimension(dim))
}
