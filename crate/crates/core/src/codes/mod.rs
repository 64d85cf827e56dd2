//! Linear codes over GF(q²): evaluation codes, Hermitian Gram certificates,
//! duals and minimum-distance oracles.

mod distance;
mod matrix;
mod text;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::curves::Point;
use crate::field::{Element, FieldTower};

pub use distance::{binomial, distance, is_mds, Budget, Distance, DistanceMode, MdsVerdict, Witness};
pub use matrix::Matrix;
pub use text::{format_matrix, parse_matrix, MatrixFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator has rank {rank}, expected {expected}")]
    RankDefect { rank: usize, expected: usize },
    #[error("twist length {twist} differs from point count {points}")]
    LengthMismatch { twist: usize, points: usize },
    #[error("search needs {needed} steps, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Euclidean,
    Hermitian,
}

/// A code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    /// Accepts `generator` only if its rows are independent.
    pub fn new(f: &FieldTower, generator: Matrix) -> Result<Self, CodeError> {
        let rank = generator.rank(f);
        if rank != generator.rows() {
            return Err(CodeError::RankDefect {
                rank,
                expected: generator.rows(),
            });
        }
        Ok(Self { generator })
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn into_generator(self) -> Matrix {
        self.generator
    }

    /// Entrywise q-th power of the code.
    pub fn conjugate(&self, f: &FieldTower) -> LinearCode {
        LinearCode {
            generator: self.generator.map(|x| f.frobenius(x)),
        }
    }

    pub fn encode(&self, f: &FieldTower, message: &[Element]) -> Vec<Element> {
        assert_eq!(message.len(), self.k());
        (0..self.n())
            .map(|c| {
                f.sum(
                    message
                        .iter()
                        .enumerate()
                        .map(|(r, &m)| f.mul(m, self.generator.get(r, c))),
                )
            })
            .collect()
    }

    pub fn contains(&self, f: &FieldTower, word: &[Element]) -> bool {
        let mut stacked = self.generator.clone();
        stacked.push_row(word);
        stacked.rank(f) == self.k()
    }

    /// Same row space, compared through reduced echelon forms.
    pub fn same_code(&self, f: &FieldTower, other: &LinearCode) -> bool {
        self.n() == other.n()
            && self.k() == other.k()
            && self.generator.rref(f).0 == other.generator.rref(f).0
    }
}

/// G[i][l] = v_l · x_l^a y_l^b for the i-th exponent pair (a, b).
pub fn evaluation_code(
    f: &FieldTower,
    basis: &[(u32, u32)],
    points: &[Point],
    twist: &[Element],
) -> Result<LinearCode, CodeError> {
    if twist.len() != points.len() {
        return Err(CodeError::LengthMismatch {
            twist: twist.len(),
            points: points.len(),
        });
    }
    let mut g = Matrix::zeros(basis.len(), points.len());
    for (r, &(a, b)) in basis.iter().enumerate() {
        for (c, (&(x, y), &v)) in points.iter().zip(twist).enumerate() {
            let value = f.mul(f.pow(x, a as i64), f.pow(y, b as i64));
            g.set(r, c, f.mul(v, value));
        }
    }
    LinearCode::new(f, g)
}

/// Hermitian Gram matrix M[i][j] = Σ_l G[i][l]·G[j][l]^q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramCertificate {
    pub entries: Matrix,
    pub all_zero: bool,
}

impl GramCertificate {
    pub fn first_nonzero(&self) -> Option<(usize, usize, Element)> {
        let k = self.entries.rows();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.entries.get(i, j)))
            .find(|(_, _, v)| !v.is_zero())
    }

    /// SHA-256 over the token form of the entries, hex encoded.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for r in 0..self.entries.rows() {
            let line: Vec<String> = self.entries.row(r).iter().map(|e| e.to_string()).collect();
            hasher.update(line.join(" ").as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

pub fn hermitian_inner(f: &FieldTower, x: &[Element], y: &[Element]) -> Element {
    f.sum(x.iter().zip(y).map(|(&a, &b)| f.mul(a, f.frobenius(b))))
}

pub fn hermitian_gram(f: &FieldTower, g: &Matrix) -> GramCertificate {
    let k = g.rows();
    let mut entries = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            entries.set(i, j, hermitian_inner(f, g.row(i), g.row(j)));
        }
    }
    let all_zero = entries.data().iter().all(|e| e.is_zero());
    GramCertificate { entries, all_zero }
}

/// Parity-check code. The Hermitian dual is the Euclidean dual of C^q.
pub fn dual(f: &FieldTower, code: &LinearCode, kind: DualKind) -> LinearCode {
    let base = match kind {
        DualKind::Euclidean => code.generator.clone(),
        DualKind::Hermitian => code.generator.map(|x| f.frobenius(x)),
    };
    LinearCode {
        generator: base.null_space(f),
    }
}
