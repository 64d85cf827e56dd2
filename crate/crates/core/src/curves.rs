//! The curve families used by the one-point constructions: genus, rational
//! fibers over an x-set, and monomial bases of L((k−1)P∞).

use serde::Serialize;
use thiserror::Error;

use crate::field::{AdditiveMap, Element, FieldError, FieldTower};
use crate::points::{self, EvaluationSet, Leaders, PointSetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("{0} requires characteristic 2")]
    BadCharacteristic(&'static str),
    #[error("semi-Hermitian curve requires odd q")]
    EvenQ,
    #[error("constant c = {c} violates the trace condition for GF(2^{degree})")]
    BadTraceConstant { c: Element, degree: u32 },
    #[error("gcd condition violated: {0}")]
    GcdConditionViolated(String),
    #[error("x-support is not defined for this family without a selector")]
    UnsupportedFamily,
    #[error("fiber over x = {x} has {found} points, expected {expected}")]
    EmptyFiber { x: Element, found: usize, expected: usize },
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    ProjectiveLine,
    /// y² + y = x³ + c.
    Elliptic { c: Element },
    /// y² + y = x^(q+1).
    HyperElliptic,
    /// y^q + y = x^(q+1).
    Hermitian,
    /// y^q + y = x^((q+1)/2).
    SemiHermitian,
    /// y^q − y = x^t.
    ArtinSchreier { t: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    #[serde(flatten)]
    pub family: Family,
    pub q: u32,
    pub genus: u32,
    pub pole_x: u32,
    /// `None` for the projective line.
    pub pole_y: Option<u32>,
    pub y_degree: u32,
}

/// A rational point (x, y) off P∞; y is zero on the projective line.
pub type Point = (Element, Element);

/// Request form of a family; the elliptic constant may be left to the
/// default choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyRequest {
    ProjectiveLine,
    Elliptic { c: Option<Element> },
    HyperElliptic,
    Hermitian,
    SemiHermitian,
    ArtinSchreier { t: u32 },
}

pub fn curve(f: &FieldTower, request: FamilyRequest) -> Result<CurveSpec, CurveError> {
    let q = f.q();
    let spec = |family, genus, pole_x, pole_y: Option<u32>, y_degree| CurveSpec {
        family,
        q,
        genus,
        pole_x,
        pole_y,
        y_degree,
    };
    Ok(match request {
        FamilyRequest::ProjectiveLine => spec(Family::ProjectiveLine, 0, 1, None, 1),
        FamilyRequest::Elliptic { c } => {
            if f.p() != 2 {
                return Err(CurveError::BadCharacteristic("elliptic curve"));
            }
            let c = elliptic_constant(f, c)?;
            spec(Family::Elliptic { c }, 1, 2, Some(3), 2)
        }
        FamilyRequest::HyperElliptic => {
            if f.p() != 2 {
                return Err(CurveError::BadCharacteristic("hyperelliptic curve"));
            }
            spec(Family::HyperElliptic, q / 2, 2, Some(q + 1), 2)
        }
        FamilyRequest::Hermitian => spec(Family::Hermitian, q * (q - 1) / 2, q, Some(q + 1), q),
        FamilyRequest::SemiHermitian => {
            if q.is_multiple_of(2) {
                return Err(CurveError::EvenQ);
            }
            spec(
                Family::SemiHermitian,
                (q - 1) * (q - 1) / 4,
                q,
                Some(q.div_ceil(2)),
                q,
            )
        }
        FamilyRequest::ArtinSchreier { t } => {
            if t < 2 || points::gcd(t, q) != 1 {
                return Err(CurveError::GcdConditionViolated(format!(
                    "t = {t} must be at least 2 and prime to q = {q}"
                )));
            }
            if q % 2 == 1 {
                let g = points::gcd(t, q + 1);
                if !q.div_ceil(2).is_multiple_of(g) {
                    return Err(CurveError::GcdConditionViolated(format!(
                        "gcd(t, q+1) = {g} does not divide (q+1)/2 = {}",
                        q.div_ceil(2)
                    )));
                }
            } else if t % 2 == 0 {
                return Err(CurveError::GcdConditionViolated(format!(
                    "t = {t} must be odd for even q"
                )));
            }
            spec(
                Family::ArtinSchreier { t },
                (q - 1) * (t - 1) / 2,
                q,
                Some(t),
                q,
            )
        }
    })
}

/// c = 0 when [GF(q²):GF(2)] ≡ 2 (mod 4); otherwise an element of absolute
/// trace 1, by default the one with smallest log.
fn elliptic_constant(f: &FieldTower, c: Option<Element>) -> Result<Element, CurveError> {
    let degree = 2 * f.m();
    let wants_trace_one = degree.is_multiple_of(4);
    let ok = |c: Element| {
        if wants_trace_one {
            f.absolute_trace(c) == Element::ONE
        } else {
            c.is_zero()
        }
    };
    match c {
        Some(c) if ok(c) => Ok(c),
        Some(c) => Err(CurveError::BadTraceConstant { c, degree }),
        None if !wants_trace_one => Ok(Element::ZERO),
        None => Ok(f.elements().find(|&c| ok(c)).expect("trace is onto")),
    }
}

/// Choice of x-values for families whose x-set is not forced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XSelector {
    RootsOfUnity { n: u32 },
    CosetUnion { n: u32, t: u32 },
    AffineGrid { t: u32 },
}

impl CurveSpec {
    pub fn equation_map(&self) -> Option<AdditiveMap> {
        match self.family {
            Family::ProjectiveLine => None,
            Family::Elliptic { .. } | Family::HyperElliptic => Some(AdditiveMap::SquarePlusY),
            Family::Hermitian | Family::SemiHermitian => Some(AdditiveMap::FrobeniusPlusY),
            Family::ArtinSchreier { .. } => Some(AdditiveMap::FrobeniusMinusY),
        }
    }

    /// Right-hand side of the curve equation at x.
    pub fn rhs(&self, f: &FieldTower, x: Element) -> Element {
        let q = self.q as i64;
        match self.family {
            Family::ProjectiveLine => Element::ZERO,
            Family::Elliptic { c } => f.add(f.pow(x, 3), c),
            Family::HyperElliptic | Family::Hermitian => f.pow(x, q + 1),
            Family::SemiHermitian => f.pow(x, (q + 1) / 2),
            Family::ArtinSchreier { t } => f.pow(x, t as i64),
        }
    }

    /// The admissible x-values. Elliptic, semi-Hermitian and Artin–Schreier
    /// curves have a forced set; the others take a selector and default to
    /// all of GF(q²).
    pub fn x_support(
        &self,
        f: &FieldTower,
        selector: Option<&XSelector>,
    ) -> Result<EvaluationSet, CurveError> {
        match self.family {
            Family::ProjectiveLine => Err(CurveError::UnsupportedFamily),
            Family::Elliptic { c } => {
                let xs = f
                    .elements()
                    .filter(|&a| f.absolute_trace(f.add(f.pow(a, 3), c)).is_zero())
                    .collect();
                Ok(EvaluationSet::explicit(xs)?)
            }
            Family::HyperElliptic | Family::Hermitian => {
                let set = match selector {
                    None => points::roots_of_unity_set(f, f.size())?,
                    Some(XSelector::RootsOfUnity { n }) => points::roots_of_unity_set(f, *n)?,
                    Some(XSelector::CosetUnion { n, t }) => {
                        points::coset_union_set(f, *n, *t, &Leaders::Smallest)?
                    }
                    Some(XSelector::AffineGrid { t }) => points::affine_grid_set(f, *t, None)?,
                };
                Ok(set)
            }
            Family::SemiHermitian => Ok(points::roots_of_unity_set(f, f.size().div_ceil(2))?),
            Family::ArtinSchreier { t } => {
                let q = self.q as i64;
                let target = if self.q % 2 == 1 {
                    f.neg(Element::ONE)
                } else {
                    Element::ONE
                };
                let xs = f
                    .elements()
                    .filter(|&a| a.is_zero() || f.pow(a, t as i64 * (q - 1)) == target)
                    .collect();
                Ok(EvaluationSet::explicit(xs)?)
            }
        }
    }

    /// All affine points over x0, in canonical y order.
    pub fn fiber(&self, f: &FieldTower, x0: Element) -> Result<Vec<Point>, CurveError> {
        let Some(map) = self.equation_map() else {
            return Ok(vec![(x0, Element::ZERO)]);
        };
        let ys = f.solve_additive(map, self.rhs(f, x0))?;
        if ys.len() != self.y_degree as usize {
            return Err(CurveError::EmptyFiber {
                x: x0,
                found: ys.len(),
                expected: self.y_degree as usize,
            });
        }
        Ok(ys.into_iter().map(|y| (x0, y)).collect())
    }

    /// Points over every x in `support`, grouped by x.
    pub fn rational_points(
        &self,
        f: &FieldTower,
        support: &EvaluationSet,
    ) -> Result<Vec<Point>, CurveError> {
        let mut out = Vec::with_capacity(support.len() * self.y_degree as usize);
        for &x in &support.points {
            out.extend(self.fiber(f, x)?);
        }
        Ok(out)
    }

    /// Exponent pairs (i, j) of x^i y^j spanning L((k−1)P∞), ordered by pole
    /// order and then by j.
    pub fn rr_basis(&self, k: u32) -> Vec<(u32, u32)> {
        if k == 0 {
            return Vec::new();
        }
        let bound = k - 1;
        let py = self.pole_y.unwrap_or(0);
        let max_j = if self.pole_y.is_some() { self.y_degree } else { 1 };
        let mut basis: Vec<(u32, u32)> = (0..max_j)
            .filter(|&j| py * j <= bound)
            .flat_map(|j| (0..=(bound - py * j) / self.pole_x).map(move |i| (i, j)))
            .collect();
        basis.sort_by_key(|&(i, j)| (self.pole_x * i + py * j, j));
        basis
    }

    pub fn pole_order(&self, (i, j): (u32, u32)) -> u32 {
        self.pole_x * i + self.pole_y.unwrap_or(0) * j
    }
}

/// Gap count of the numerical semigroup ⟨a, b⟩ for coprime a, b.
pub fn semigroup_gaps(a: u32, b: u32) -> u32 {
    if a == 1 || b == 1 {
        return 0;
    }
    let conductor = (a - 1) * (b - 1);
    let mut reachable = vec![false; conductor as usize];
    for i in 0..=conductor / a {
        for j in 0..=conductor / b {
            let v = a * i + b * j;
            if v < conductor {
                reachable[v as usize] = true;
            }
        }
    }
    reachable.iter().filter(|r| !**r).count() as u32
}
