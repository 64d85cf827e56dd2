//! Stabilizer parameters [[n, n−2k, d]]_q from Hermitian self-orthogonal
//! [n, k]_{q²} codes.

use serde::Serialize;
use thiserror::Error;

use crate::codes::{self, binomial, Budget, Distance, DistanceMode, Matrix, Witness};
use crate::constructions::CertifiedCode;
use crate::field::FieldTower;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("Hermitian Gram matrix is not zero")]
    NotSelfOrthogonal,
    #[error("distance is only bounded, not exact")]
    DistanceNotExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Exact,
    LowerBound,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumParams {
    pub q: u32,
    pub n: usize,
    /// n − 2k.
    pub k: usize,
    pub d: Option<usize>,
    pub d_method: DistanceMethod,
    /// `None` when the distance does not settle the question.
    pub mds: Option<bool>,
    pub defect: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub designed_dual: Option<i64>,
}

impl QuantumParams {
    pub fn label(&self) -> String {
        let d = match (self.d, self.d_method) {
            (Some(d), DistanceMethod::Exact) => d.to_string(),
            (Some(d), _) => format!("≥{d}"),
            (None, _) => "?".to_string(),
        };
        format!("[[{},{},{}]]_{}", self.n, self.k, d, self.q)
    }
}

/// Largest w ≤ min(k+1, n) with C(n, w) inside the subset cap.
pub fn affordable_depth(n: usize, k: usize, budget: &Budget) -> usize {
    (1..=(k + 1).min(n))
        .take_while(|&w| binomial(n, w) <= budget.subset_cap as u128)
        .last()
        .unwrap_or(0)
}

pub fn stabilizer_params(
    f: &FieldTower,
    code: &CertifiedCode,
    budget: &Budget,
) -> Result<QuantumParams, QuantumError> {
    if !code.gram.all_zero {
        return Err(QuantumError::NotSelfOrthogonal);
    }
    let mut params = match &code.mds {
        // an MDS code has an MDS dual, so d = k + 1
        Some(verdict) if verdict.mds => mds_params(f.q(), code.n(), code.k()),
        _ => params_for_generator(f, code.generator(), budget),
    };
    params.designed_dual = Some(code.designed.dual);
    Ok(params)
}

fn mds_params(q: u32, n: usize, k: usize) -> QuantumParams {
    QuantumParams {
        q,
        n,
        k: n.saturating_sub(2 * k),
        d: Some(k + 1),
        d_method: DistanceMethod::Exact,
        mds: Some(true),
        defect: Some(0),
        witness: None,
        designed_dual: None,
    }
}

/// Parameters for a generator whose Gram matrix is already known to vanish.
/// The Hermitian dual has the same weights as the Euclidean dual, so the
/// column search runs on `g` directly.
pub fn params_for_generator(f: &FieldTower, g: &Matrix, budget: &Budget) -> QuantumParams {
    let (n, k) = (g.cols(), g.rows());
    let k_q = n.saturating_sub(2 * k);
    let depth = affordable_depth(n, k, budget);
    let found = if depth == 0 {
        None
    } else {
        codes::distance(f, g, DistanceMode::DualByColumns { d_max: depth }, budget).ok()
    };
    let (d, d_method, witness) = match found {
        Some(Distance::Exact { d, witness }) => {
            let cols = match witness {
                Witness::Columns(c) => Some(c),
                Witness::Codeword(_) => None,
            };
            (Some(d), DistanceMethod::Exact, cols)
        }
        Some(Distance::Degenerate { d }) => (Some(d), DistanceMethod::Exact, None),
        Some(Distance::LowerBound { d }) => (Some(d), DistanceMethod::LowerBound, None),
        None => (None, DistanceMethod::Unknown, None),
    };
    let defect = match (d, d_method) {
        (Some(d), DistanceMethod::Exact) => Some(n as i64 - k_q as i64 - 2 * d as i64 + 2),
        _ => None,
    };
    let mds = match (d, d_method) {
        (_, DistanceMethod::Exact) => defect.map(|x| x == 0),
        // the quantum Singleton bound caps d at k + 1
        (Some(d), DistanceMethod::LowerBound) if d > k => Some(true),
        _ => None,
    };
    QuantumParams {
        q: f.q(),
        n,
        k: k_q,
        d,
        d_method,
        mds,
        defect,
        witness,
        designed_dual: None,
    }
}

pub fn singleton_defect(params: &QuantumParams) -> Result<i64, QuantumError> {
    match (params.d_method, params.defect) {
        (DistanceMethod::Exact, Some(x)) => Ok(x),
        _ => Err(QuantumError::DistanceNotExact),
    }
}
