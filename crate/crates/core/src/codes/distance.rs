//! Minimum-distance oracles.
//!
//! `Exhaustive` walks every projective message. `DualByColumns` looks for the
//! smallest set of linearly dependent generator columns, which is the minimum
//! distance of the dual code; it runs as a depth-first search over
//! independent column sets, carrying the remaining columns reduced modulo the
//! span of the chosen ones.

use serde::Serialize;

use super::{CodeError, Matrix};
use crate::field::{Element, FieldTower};

pub const DEFAULT_CODEWORD_CAP: u64 = 1 << 26;
pub const DEFAULT_SUBSET_CAP: u64 = 100_000_000;

/// Work limits for the distance oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest admissible q^(2k) for exhaustive enumeration.
    pub codeword_cap: u64,
    /// Largest admissible C(n, w) for column searches.
    pub subset_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            codeword_cap: DEFAULT_CODEWORD_CAP,
            subset_cap: DEFAULT_SUBSET_CAP,
        }
    }
}

impl Budget {
    /// Defaults, with both caps replaced by `AGQ_CAP_OPS` when it is set to a
    /// positive integer.
    pub fn from_env() -> Self {
        match std::env::var("AGQ_CAP_OPS").ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            Some(cap) if cap > 0 => Self {
                codeword_cap: cap,
                subset_cap: cap,
            },
            _ => Self::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DistanceMode {
    Exhaustive,
    DualByColumns { d_max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Codeword(Vec<Element>),
    Columns(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distance {
    Exact { d: usize, witness: Witness },
    LowerBound { d: usize },
    /// The zero code; d is n + 1 by convention.
    Degenerate { d: usize },
}

impl Distance {
    pub fn value(&self) -> usize {
        match self {
            Distance::Exact { d, .. } | Distance::LowerBound { d } | Distance::Degenerate { d } => *d,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Distance::LowerBound { .. })
    }
}

/// C(n, k), saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Minimum distance of the code generated by `g` (Exhaustive) or of its
/// Euclidean dual (DualByColumns).
pub fn distance(
    f: &FieldTower,
    g: &Matrix,
    mode: DistanceMode,
    budget: &Budget,
) -> Result<Distance, CodeError> {
    match mode {
        DistanceMode::Exhaustive => exhaustive(f, g, budget),
        DistanceMode::DualByColumns { d_max } => dependent_columns(f, g, d_max, budget),
    }
}

fn exhaustive(f: &FieldTower, g: &Matrix, budget: &Budget) -> Result<Distance, CodeError> {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 {
        return Ok(Distance::Degenerate { d: n + 1 });
    }
    let needed = (f.size() as u128).saturating_pow(k as u32);
    if needed > budget.codeword_cap as u128 {
        return Err(CodeError::CapExceeded {
            needed,
            cap: budget.codeword_cap,
        });
    }
    let scalars: Vec<Element> = f.elements().filter(|e| !e.is_zero()).collect();
    // multiples[r][s] = scalars[s] · row r
    let multiples: Vec<Vec<Vec<Element>>> = (0..k)
        .map(|r| {
            scalars
                .iter()
                .map(|&s| g.row(r).iter().map(|&x| f.mul(s, x)).collect())
                .collect()
        })
        .collect();
    let mut best: Option<(usize, Vec<Element>)> = None;
    let mut stack: Vec<Vec<Element>> = vec![vec![Element::ZERO; n]; k + 1];
    for lead in 0..k {
        stack[lead + 1].copy_from_slice(g.row(lead));
        walk(f, &multiples, &mut stack, lead + 1, k, &mut best);
    }
    let (d, word) = best.expect("a nonzero row exists");
    Ok(Distance::Exact {
        d,
        witness: Witness::Codeword(word),
    })
}

fn walk(
    f: &FieldTower,
    multiples: &[Vec<Vec<Element>>],
    stack: &mut [Vec<Element>],
    depth: usize,
    k: usize,
    best: &mut Option<(usize, Vec<Element>)>,
) {
    if depth == k {
        let word = &stack[depth];
        let w = word.iter().filter(|x| !x.is_zero()).count();
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            *best = Some((w, word.clone()));
        }
        return;
    }
    // Coefficient zero for this row.
    let (lo, hi) = stack.split_at_mut(depth + 1);
    hi[0].copy_from_slice(&lo[depth]);
    walk(f, multiples, stack, depth + 1, k, best);
    for m in &multiples[depth] {
        let (lo, hi) = stack.split_at_mut(depth + 1);
        for ((out, &a), &b) in hi[0].iter_mut().zip(&lo[depth]).zip(m) {
            *out = f.add(a, b);
        }
        walk(f, multiples, stack, depth + 1, k, best);
    }
}

/// Smallest w ≤ d_max with w dependent columns, searched by increasing w so
/// the witness is the lexicographically first dependent set of that size.
fn dependent_columns(
    f: &FieldTower,
    g: &Matrix,
    d_max: usize,
    budget: &Budget,
) -> Result<Distance, CodeError> {
    let (k, n) = (g.rows(), g.cols());
    let d_max = d_max.min(k + 1).min(n);
    let needed = binomial(n, d_max);
    if needed > budget.subset_cap as u128 {
        return Err(CodeError::CapExceeded {
            needed,
            cap: budget.subset_cap,
        });
    }
    let mut search = ColumnSearch::new(f, g);
    for w in 1..=d_max {
        if let Some(cols) = search.find(w) {
            return Ok(Distance::Exact {
                d: w,
                witness: Witness::Columns(cols),
            });
        }
    }
    Ok(Distance::LowerBound { d: d_max + 1 })
}

/// Verdict of an MDS check; `witness` is a dependent column set of size at
/// most k when the code is not MDS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdsVerdict {
    pub mds: bool,
    pub witness: Option<Vec<usize>>,
}

/// MDS iff every k columns are independent. A dependent set smaller than k
/// extends to one of size k, so only k-subsets are searched.
pub fn is_mds(f: &FieldTower, g: &Matrix, budget: &Budget) -> Result<MdsVerdict, CodeError> {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 {
        return Ok(MdsVerdict {
            mds: true,
            witness: None,
        });
    }
    let needed = binomial(n, k);
    if needed > budget.subset_cap as u128 {
        return Err(CodeError::CapExceeded {
            needed,
            cap: budget.subset_cap,
        });
    }
    let witness = ColumnSearch::new(f, g).find(k);
    Ok(MdsVerdict {
        mds: witness.is_none(),
        witness,
    })
}

struct ColumnSearch<'a> {
    f: &'a FieldTower,
    n: usize,
    k: usize,
    /// Per depth: residual coordinates, column-major with stride k.
    levels: Vec<Vec<Element>>,
    chosen: Vec<usize>,
    stamp: Vec<(u32, u32)>,
    generation: u32,
    keys: Vec<(u64, u32)>,
    points: Vec<Point>,
}

impl<'a> ColumnSearch<'a> {
    fn new(f: &'a FieldTower, g: &Matrix) -> Self {
        let (k, n) = (g.rows(), g.cols());
        let mut top = vec![Element::ZERO; n * k.max(1)];
        for c in 0..n {
            for r in 0..k {
                top[c * k.max(1) + r] = g.get(r, c);
            }
        }
        let mut levels = vec![top];
        levels.resize(k + 1, vec![Element::ZERO; n * k.max(1)]);
        Self {
            f,
            n,
            k,
            levels,
            chosen: Vec::new(),
            stamp: vec![(0, 0); f.size() as usize + 1],
            generation: 0,
            keys: Vec::new(),
            points: Vec::new(),
        }
    }

    fn stride(&self) -> usize {
        self.k.max(1)
    }

    fn find(&mut self, w: usize) -> Option<Vec<usize>> {
        if w == 1 {
            let s = self.stride();
            let top = &self.levels[0];
            return (0..self.n)
                .find(|&c| top[c * s..c * s + self.k].iter().all(|e| e.is_zero()))
                .map(|c| vec![c]);
        }
        self.chosen.clear();
        self.descend(0, 0, w - 2)
    }

    /// At `depth` columns chosen, all columns ≥ `start` carry residuals of
    /// length k − depth in `levels[depth]`.
    fn descend(&mut self, depth: usize, start: usize, target: usize) -> Option<Vec<usize>> {
        if depth == target {
            return self.pair(depth, start).map(|extra| {
                let mut cols = self.chosen.clone();
                cols.extend(extra);
                cols
            });
        }
        let remaining = target - depth;
        // Leave room for `remaining` further choices and a final pair.
        let last = self.n.checked_sub(remaining + 2)?;
        let s = self.stride();
        let len = self.k - depth;
        let fused = depth + 1 == target && len == 3;
        if fused {
            self.project(depth, start);
        }
        for c in start..=last {
            if self.levels[depth][c * s..c * s + len].iter().all(|e| e.is_zero()) {
                let mut cols = self.chosen.clone();
                cols.push(c);
                return Some(cols);
            }
            if fused {
                if let Some(extra) = self.fused_pair(start, c) {
                    let mut cols = self.chosen.clone();
                    cols.push(c);
                    cols.extend(extra);
                    return Some(cols);
                }
                continue;
            }
            self.eliminate(depth, c);
            self.chosen.push(c);
            let hit = self.descend(depth + 1, c + 1, target);
            self.chosen.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    /// Reduces every column after `pivot_col` by the residual of `pivot_col`
    /// and drops the pivot coordinate.
    fn eliminate(&mut self, depth: usize, pivot_col: usize) {
        let f = self.f;
        let s = self.stride();
        let len = self.k - depth;
        let (lo, hi) = self.levels.split_at_mut(depth + 1);
        let cur = &lo[depth];
        let next = &mut hi[0];
        let pivot = &cur[pivot_col * s..pivot_col * s + len];
        let p = pivot
            .iter()
            .position(|e| !e.is_zero())
            .expect("chosen columns are independent");
        let inv = f.inv(pivot[p]);
        for c in pivot_col + 1..self.n {
            let src = &cur[c * s..c * s + len];
            let dst = &mut next[c * s..c * s + len];
            let factor = f.neg(f.mul(src[p], inv));
            if factor.is_zero() {
                dst.copy_from_slice(src);
            } else {
                for ((d, &x), &y) in dst.iter_mut().zip(src).zip(pivot) {
                    *d = f.add(x, f.mul(factor, y));
                }
            }
            dst[p] = dst[len - 1];
        }
    }

    /// Residuals of length 3 as points of the projective plane: finite
    /// points scaled to last coordinate 1, the rest kept as directions.
    fn project(&mut self, depth: usize, start: usize) {
        let f = self.f;
        let s = self.stride();
        let cur = &self.levels[depth];
        self.points.clear();
        self.points.extend((start..self.n).map(|c| {
            let v = &cur[c * s..c * s + 3];
            if !v[2].is_zero() {
                let inv = f.inv(v[2]);
                Point::Finite(f.mul(v[0], inv), f.mul(v[1], inv))
            } else if v[0].is_zero() && v[1].is_zero() {
                Point::Zero
            } else {
                Point::Infinite(v[0], v[1])
            }
        }));
    }

    /// `pair` on the residuals left after choosing `pivot_col` at a depth
    /// with residuals of length 3: the later columns are classified by the
    /// line joining their point to the pivot's.
    fn fused_pair(&mut self, start: usize, pivot_col: usize) -> Option<Vec<usize>> {
        let f = self.f;
        if pivot_col + 2 >= self.n {
            return None;
        }
        let order = f.order();
        let slope = |dx: Element, dy: Element| match (dx.log(), dy.log()) {
            (None, None) => None,
            (None, Some(_)) => Some(order as usize),
            (Some(_), None) => Some(order as usize + 1),
            (Some(a), Some(b)) => Some(log_ratio(a, b, order)),
        };
        let points = &self.points[pivot_col - start + 1..];
        let cols = (pivot_col + 1..self.n).zip(points);
        match self.points[pivot_col - start] {
            Point::Finite(c0, c1) => {
                let (n0, n1) = (f.neg(c0), f.neg(c1));
                let keys = cols.map(|(c, &pt)| {
                    let key = match pt {
                        Point::Zero => None,
                        Point::Finite(x0, x1) => slope(f.add(x0, n0), f.add(x1, n1)),
                        Point::Infinite(x0, x1) => slope(x0, x1),
                    };
                    (c, key)
                });
                ratio_classes(&mut self.stamp, &mut self.generation, pivot_col + 1, keys)
            }
            Point::Infinite(d0, d1) => {
                let nd0 = f.neg(d0);
                let level = |x0: Element, x1: Element| f.add(f.mul(d1, x0), f.mul(nd0, x1));
                let keys = cols.map(|(c, &pt)| {
                    let key = match pt {
                        Point::Zero => None,
                        Point::Finite(x0, x1) => Some(level(x0, x1).log().map_or(order as usize, |l| l as usize)),
                        Point::Infinite(x0, x1) => level(x0, x1).log().map(|_| order as usize + 1),
                    };
                    (c, key)
                });
                ratio_classes(&mut self.stamp, &mut self.generation, pivot_col + 1, keys)
            }
            Point::Zero => unreachable!("zero residuals are caught earlier"),
        }
    }

    /// Lexicographically first pair j < l of columns ≥ `start` whose
    /// residuals are proportional. A zero residual is returned on its own;
    /// that only happens when smaller sizes were not searched first.
    fn pair(&mut self, depth: usize, start: usize) -> Option<Vec<usize>> {
        let f = self.f;
        let s = self.stride();
        let len = self.k - depth;
        let cur = &self.levels[depth];
        if self.n < start + 2 {
            return None;
        }
        let residual = |c: usize| &cur[c * s..c * s + len];
        if len == 1 {
            return Some(match (cur[start * s].is_zero(), cur[(start + 1) * s].is_zero()) {
                (true, _) => vec![start],
                (false, true) => vec![start + 1],
                _ => vec![start, start + 1],
            });
        }
        let mut best: Option<(usize, usize)> = None;
        if len == 2 {
            let order = f.order();
            let cols = (start..self.n).map(|c| {
                let key = match (cur[c * s].log(), cur[c * s + 1].log()) {
                    (None, None) => None,
                    (None, Some(_)) => Some(order as usize),
                    (Some(_), None) => Some(order as usize + 1),
                    (Some(x), Some(y)) => Some(log_ratio(x, y, order)),
                };
                (c, key)
            });
            return ratio_classes(&mut self.stamp, &mut self.generation, start, cols);
        }
        let normalized = |c: usize| -> Option<(Element, &[Element])> {
            let v = residual(c);
            v.iter().find(|e| !e.is_zero()).map(|&lead| (f.inv(lead), v))
        };
        self.keys.clear();
        for c in start..self.n {
            let Some((inv, v)) = normalized(c) else {
                return Some(vec![c]);
            };
            let mut h: u64 = 0xcbf2_9ce4_8422_2325;
            for &x in v {
                let y = f.mul(x, inv).log().map_or(u64::MAX, u64::from);
                h = (h ^ y).wrapping_mul(0x0000_0100_0000_01b3);
            }
            self.keys.push((h, c as u32));
        }
        self.keys.sort_unstable();
        let proportional = |a: usize, b: usize| {
            let (ia, va) = normalized(a).expect("nonzero residual");
            let (ib, vb) = normalized(b).expect("nonzero residual");
            va.iter().zip(vb).all(|(&x, &y)| f.mul(x, ia) == f.mul(y, ib))
        };
        for run in self.keys.chunk_by(|x, y| x.0 == y.0) {
            for (i, &(_, a)) in run.iter().enumerate() {
                if best.is_some_and(|(bj, _)| bj < a as usize) {
                    break;
                }
                if let Some(&(_, b)) = run[i + 1..].iter().find(|&&(_, b)| proportional(a as usize, b as usize)) {
                    let cand = (a as usize, b as usize);
                    if best.is_none_or(|bp| cand < bp) {
                        best = Some(cand);
                    }
                    break;
                }
            }
        }
        best.map(|(j, l)| vec![j, l])
    }
}

/// (b − a) mod order, for logarithms below the order.
#[inline]
fn log_ratio(a: u32, b: u32, order: u32) -> usize {
    let d = b.wrapping_sub(a);
    d.wrapping_add(order & ((d as i32 >> 31) as u32)) as usize
}

#[derive(Debug, Clone, Copy)]
enum Point {
    Zero,
    Finite(Element, Element),
    Infinite(Element, Element),
}

/// First pair of columns sharing a class key in `cols`; a column without a
/// key has a zero residual and is returned alone.
fn ratio_classes(
    stamp: &mut [(u32, u32)],
    generation: &mut u32,
    start: usize,
    cols: impl Iterator<Item = (usize, Option<usize>)>,
) -> Option<Vec<usize>> {
    *generation = generation.wrapping_add(1);
    if *generation == 0 {
        stamp.iter_mut().for_each(|e| *e = (0, 0));
        *generation = 1;
    }
    let gen = *generation;
    let mut best: Option<(usize, usize)> = None;
    for (c, key) in cols {
        let Some(key) = key else {
            return Some(vec![c]);
        };
        let slot = &mut stamp[key];
        if slot.0 != gen {
            *slot = (gen, c as u32);
        } else {
            let j = slot.1 as usize;
            if best.is_none_or(|(bj, _)| j < bj) {
                best = Some((j, c));
                if j == start {
                    break;
                }
            }
            // Later members of the same class never improve on (j, c).
            slot.0 = gen.wrapping_sub(1);
            slot.1 = u32::MAX;
        }
    }
    best.map(|(j, l)| vec![j, l])
}
