//! Evaluation sets for the genus-0 constructions, local derivatives of
//! h(x) = ∏(x − α) and the twist vectors that make GRS codes self-orthogonal.

use serde::Serialize;
use thiserror::Error;

use crate::field::{Element, FieldError, FieldTower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointSetError {
    #[error("divisibility condition violated: {0}")]
    DivisibilityViolated(String),
    #[error("requested {requested} cosets but at most {max} are available")]
    TooManyCosets { requested: u32, max: u32 },
    #[error("coset leader {0} does not lie in V_n")]
    LeaderNotInV(Element),
    #[error("coset leader {0} repeats a coset already in the set")]
    DuplicateCoset(Element),
    #[error("only {found} admissible coset leaders found, {requested} requested")]
    CosetSearchExhausted { requested: u32, found: u32 },
    #[error("anchor {0} lies in GF(q)")]
    AnchorInSubfield(Element),
    #[error("grid width t={t} outside 1..={q}")]
    BadGridWidth { t: u32, q: u32 },
    #[error("evaluation points are not distinct")]
    RepeatedPoint,
    #[error("h'(α_{0}) scaled by the unit is not a norm value")]
    NotNormValue(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SetFamily {
    RootsOfUnity { n: u32 },
    CosetUnion { n: u32, t: u32, leaders: Vec<Element> },
    AffineGrid { t: u32, anchor: Element },
    Explicit,
}

/// Distinct points of GF(q²) in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationSet {
    #[serde(flatten)]
    pub family: SetFamily,
    pub points: Vec<Element>,
}

/// Leader policy for [`coset_union_set`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Leaders {
    /// Smallest exponents e with θ^(e(q+1)/n₁) opening a new coset.
    #[default]
    Smallest,
    /// As `Smallest`, but only leaders lying in GF(q)*.
    SmallestInBaseField,
    Explicit(Vec<Element>),
}

impl EvaluationSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn explicit(mut points: Vec<Element>) -> Result<Self, PointSetError> {
        points.sort_unstable();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(PointSetError::RepeatedPoint);
        }
        Ok(Self {
            family: SetFamily::Explicit,
            points,
        })
    }

    /// Default differential scale: (α^q − α)^(t−1) for grids, 1 otherwise.
    pub fn default_unit(&self, f: &FieldTower) -> Element {
        match self.family {
            SetFamily::AffineGrid { t, anchor } => {
                let d = f.sub(f.frobenius(anchor), anchor);
                f.pow(d, t as i64 - 1)
            }
            _ => Element::ONE,
        }
    }
}

/// U = {α : α^n = α}, i.e. the (n−1)-th roots of unity together with 0.
pub fn roots_of_unity_set(f: &FieldTower, n: u32) -> Result<EvaluationSet, PointSetError> {
    if n < 2 || !f.order().is_multiple_of(n - 1) {
        return Err(PointSetError::DivisibilityViolated(format!(
            "n−1 = {} must divide q²−1 = {}",
            n as i64 - 1,
            f.order()
        )));
    }
    let step = f.order() / (n - 1);
    let points = (0..n - 1)
        .map(|j| f.theta_pow((j * step) as i64))
        .chain(std::iter::once(Element::ZERO))
        .collect();
    Ok(EvaluationSet {
        family: SetFamily::RootsOfUnity { n },
        points,
    })
}

/// U = U_n ∪ α₁U_n ∪ … ∪ α_tU_n ∪ {0}, with U_n the n-th roots of unity and
/// the leaders taken from V_n = ⟨θ^((q+1)/n₁)⟩.
pub fn coset_union_set(
    f: &FieldTower,
    n: u32,
    t: u32,
    leaders: &Leaders,
) -> Result<EvaluationSet, PointSetError> {
    let order = f.order();
    let q = f.q();
    if n == 0 || !order.is_multiple_of(n) {
        return Err(PointSetError::DivisibilityViolated(format!(
            "n = {n} must divide q²−1 = {order}"
        )));
    }
    let n1 = gcd(n, q + 1);
    let n2 = n / n1;
    let max = (q - 1) / n2 - 1;
    if t > max {
        return Err(PointSetError::TooManyCosets { requested: t, max });
    }
    // Cosets of U_n are classes of the log modulo (q²−1)/n.
    let class_mod = order / n;
    let v_step = (q + 1) / n1;
    let mut chosen: Vec<Element> = Vec::new();
    let mut classes = vec![0u32];
    match leaders {
        Leaders::Explicit(list) => {
            if list.len() as u32 != t {
                return Err(PointSetError::TooManyCosets {
                    requested: list.len() as u32,
                    max: t,
                });
            }
            for &a in list {
                let e = a.log().ok_or(PointSetError::LeaderNotInV(a))?;
                if e % v_step != 0 {
                    return Err(PointSetError::LeaderNotInV(a));
                }
                let class = e % class_mod;
                if classes.contains(&class) {
                    return Err(PointSetError::DuplicateCoset(a));
                }
                classes.push(class);
                chosen.push(a);
            }
        }
        Leaders::Smallest | Leaders::SmallestInBaseField => {
            let base_only = matches!(leaders, Leaders::SmallestInBaseField);
            let v_order = (q - 1) * n1;
            for e in 1..v_order {
                if chosen.len() as u32 == t {
                    break;
                }
                let a = f.theta_pow((e * v_step) as i64);
                if base_only && !f.in_base_field(a) {
                    continue;
                }
                let class = (e * v_step) % class_mod;
                if classes.contains(&class) {
                    continue;
                }
                classes.push(class);
                chosen.push(a);
            }
            if (chosen.len() as u32) < t {
                return Err(PointSetError::CosetSearchExhausted {
                    requested: t,
                    found: chosen.len() as u32,
                });
            }
        }
    }
    let mut points: Vec<Element> = Vec::with_capacity(((t + 1) * n + 1) as usize);
    for leader in std::iter::once(Element::ONE).chain(chosen.iter().copied()) {
        for j in 0..n {
            points.push(f.mul(leader, f.theta_pow((j * class_mod) as i64)));
        }
    }
    points.push(Element::ZERO);
    points.sort_unstable();
    Ok(EvaluationSet {
        family: SetFamily::CosetUnion {
            n,
            t,
            leaders: chosen,
        },
        points,
    })
}

/// U = {u_i·α + u_j : 1 ≤ i ≤ t, 1 ≤ j ≤ q}, where u_1, u_2, … enumerates
/// GF(q) as 0, 1, θ^(q+1), θ^(2(q+1)), …
pub fn affine_grid_set(
    f: &FieldTower,
    t: u32,
    anchor: Option<Element>,
) -> Result<EvaluationSet, PointSetError> {
    let q = f.q();
    if t == 0 || t > q {
        return Err(PointSetError::BadGridWidth { t, q });
    }
    let anchor = anchor.unwrap_or_else(|| f.theta());
    if f.in_base_field(anchor) {
        return Err(PointSetError::AnchorInSubfield(anchor));
    }
    let base = f.base_field_elements();
    let mut points: Vec<Element> = base[..t as usize]
        .iter()
        .flat_map(|&ui| base.iter().map(move |&uj| (ui, uj)))
        .map(|(ui, uj)| f.add(f.mul(ui, anchor), uj))
        .collect();
    points.sort_unstable();
    Ok(EvaluationSet {
        family: SetFamily::AffineGrid { t, anchor },
        points,
    })
}

/// h′(α_i) = ∏_{j≠i} (α_i − α_j) for every point.
pub fn local_derivatives(f: &FieldTower, points: &[Element]) -> Vec<Element> {
    points
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            f.product(
                points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &b)| f.sub(a, b)),
            )
        })
        .collect()
}

/// Column multipliers v with v_i^(q+1) · h′(α_i) = unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistVector {
    pub unit: Element,
    pub values: Vec<Element>,
}

pub fn twist_vector(
    f: &FieldTower,
    set: &EvaluationSet,
    unit: Option<Element>,
) -> Result<TwistVector, PointSetError> {
    let unit = unit.unwrap_or_else(|| set.default_unit(f));
    let values = twist_from_derivatives(f, &local_derivatives(f, &set.points), unit)?;
    Ok(TwistVector { unit, values })
}

pub(crate) fn twist_from_derivatives(
    f: &FieldTower,
    derivatives: &[Element],
    unit: Element,
) -> Result<Vec<Element>, PointSetError> {
    derivatives
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if d.is_zero() {
                return Err(PointSetError::RepeatedPoint);
            }
            f.norm_preimage(f.div(unit, d))
                .map_err(|_| PointSetError::NotNormValue(i))
        })
        .collect()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residue_sum(f: &FieldTower, set: &EvaluationSet, e: i64) -> Element {
        let h = local_derivatives(f, &set.points);
        f.sum(set.points.iter().zip(&h).map(|(&a, &d)| f.div(f.pow(a, e), d)))
    }

    #[test]
    fn roots_of_unity_example_sets() {
        let f = FieldTower::new(13, 1).unwrap();
        let u = roots_of_unity_set(&f, 25).unwrap();
        assert_eq!(u.len(), 25);
        assert_eq!(*u.points.last().unwrap(), Element::ZERO);
        assert!(u.points.iter().all(|&a| f.pow(a, 25) == a));

        let f11 = FieldTower::new(11, 1).unwrap();
        assert_eq!(roots_of_unity_set(&f11, 16).unwrap().len(), 16);
        assert!(matches!(
            roots_of_unity_set(&f11, 15),
            Err(PointSetError::DivisibilityViolated(_))
        ));

        let f9 = FieldTower::new(3, 1).unwrap();
        let all = roots_of_unity_set(&f9, 9).unwrap();
        assert_eq!(all.points, f9.elements().collect::<Vec<_>>());
    }

    #[test]
    fn roots_of_unity_derivatives() {
        let f = FieldTower::new(13, 1).unwrap();
        let u = roots_of_unity_set(&f, 25).unwrap();
        let h = local_derivatives(&f, &u.points);
        assert_eq!(*h.last().unwrap(), f.neg(Element::ONE));
        assert!(h[..24].iter().all(|&d| d == f.from_int(24)));
        let v = twist_vector(&f, &u, None).unwrap();
        for (vi, hi) in v.values.iter().zip(&h) {
            assert_eq!(f.mul(f.pow(*vi, 14), *hi), Element::ONE);
        }
    }

    #[test]
    fn coset_union_sizes() {
        let f = FieldTower::new(17, 1).unwrap();
        let u = coset_union_set(&f, 12, 2, &Leaders::Smallest).unwrap();
        assert_eq!(u.len(), 37);
        for &a in &u.points {
            assert!(f.in_base_field(f.pow(a, 12)));
        }
        let t0 = coset_union_set(&f, 12, 0, &Leaders::Smallest).unwrap();
        assert_eq!(t0.points, roots_of_unity_set(&f, 13).unwrap().points);
        assert!(matches!(
            coset_union_set(&f, 12, 30, &Leaders::Smallest),
            Err(PointSetError::TooManyCosets { .. })
        ));
    }

    #[test]
    fn base_field_leaders_can_run_out() {
        let f = FieldTower::new(3, 2).unwrap();
        assert_eq!(
            coset_union_set(&f, 8, 2, &Leaders::SmallestInBaseField),
            Err(PointSetError::TooManyCosets { requested: 2, max: 1 })
        );
        assert_eq!(
            coset_union_set(&f, 8, 1, &Leaders::SmallestInBaseField),
            Err(PointSetError::CosetSearchExhausted {
                requested: 1,
                found: 0
            })
        );
        assert_eq!(coset_union_set(&f, 8, 1, &Leaders::Smallest).unwrap().len(), 17);
    }

    #[test]
    fn explicit_leaders_are_validated() {
        let f = FieldTower::new(17, 1).unwrap();
        let theta = f.theta();
        assert_eq!(
            coset_union_set(&f, 12, 1, &Leaders::Explicit(vec![theta])),
            Err(PointSetError::LeaderNotInV(theta))
        );
        let a = f.theta_pow(3);
        assert_eq!(
            coset_union_set(&f, 12, 2, &Leaders::Explicit(vec![a, f.mul(a, f.theta_pow(24))])),
            Err(PointSetError::DuplicateCoset(f.theta_pow(27)))
        );
    }

    #[test]
    fn affine_grid_q7() {
        let f = FieldTower::new(7, 1).unwrap();
        let u = affine_grid_set(&f, 3, None).unwrap();
        assert_eq!(u.len(), 21);
        let unit = u.default_unit(&f);
        for d in local_derivatives(&f, &u.points) {
            let scaled = f.div(d, unit);
            assert!(!scaled.is_zero() && f.in_base_field(scaled));
        }
        assert!(twist_vector(&f, &u, None).is_ok());

        let line = affine_grid_set(&f, 1, None).unwrap();
        let mut base = f.base_field_elements();
        base.sort_unstable();
        assert_eq!(line.points, base);
        assert!(matches!(
            affine_grid_set(&f, 2, Some(Element::ONE)),
            Err(PointSetError::AnchorInSubfield(_))
        ));
    }

    #[test]
    fn ad_hoc_set_fails_norm_condition() {
        let f = FieldTower::new(3, 1).unwrap();
        let u = EvaluationSet::explicit(vec![Element::ZERO, Element::ONE, f.theta()]).unwrap();
        assert!(matches!(
            twist_vector(&f, &u, None),
            Err(PointSetError::NotNormValue(_))
        ));
    }

    #[test]
    fn residue_identity_and_boundary() {
        let f = FieldTower::new(5, 1).unwrap();
        let u = roots_of_unity_set(&f, 9).unwrap();
        for e in 0..=7 {
            assert_eq!(residue_sum(&f, &u, e), Element::ZERO, "e = {e}");
        }
        assert_eq!(residue_sum(&f, &u, 8), Element::ONE);
    }
}
