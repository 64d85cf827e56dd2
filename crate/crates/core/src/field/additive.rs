use serde::{Deserialize, Serialize};

use super::{Element, FieldError, FieldTower};

/// GF(p)-linear maps on GF(q²) that appear in the curve equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdditiveMap {
    /// y ↦ y² + y, additive only when p = 2.
    SquarePlusY,
    /// y ↦ y^q + y.
    FrobeniusPlusY,
    /// y ↦ y^q − y.
    FrobeniusMinusY,
}

impl FieldTower {
    pub fn apply_additive(&self, map: AdditiveMap, y: Element) -> Element {
        match map {
            AdditiveMap::SquarePlusY => self.add(self.mul(y, y), y),
            AdditiveMap::FrobeniusPlusY => self.add(self.frobenius(y), y),
            AdditiveMap::FrobeniusMinusY => self.sub(self.frobenius(y), y),
        }
    }

    /// All y with map(y) = a, in canonical order. The solution set is empty
    /// or a coset of the kernel.
    pub fn solve_additive(&self, map: AdditiveMap, a: Element) -> Result<Vec<Element>, FieldError> {
        if map == AdditiveMap::SquarePlusY && self.p() != 2 {
            return Err(FieldError::NotAdditive);
        }
        let p = self.p();
        let dim = 2 * self.m() as usize;
        // Column i holds the coordinates of map(θ^i); augmented by a.
        let columns: Vec<Vec<u32>> = (0..dim)
            .map(|i| self.coordinates(self.apply_additive(map, self.theta_pow(i as i64))))
            .collect();
        let rhs = self.coordinates(a);
        let mut rows: Vec<Vec<u32>> = (0..dim)
            .map(|r| {
                let mut row: Vec<u32> = columns.iter().map(|c| c[r]).collect();
                row.push(rhs[r]);
                row
            })
            .collect();

        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..dim {
            let Some(r) = (rank..dim).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, r);
            let inv = inv_mod(rows[rank][col], p);
            for v in rows[rank].iter_mut() {
                *v = *v * inv % p;
            }
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate().take(dim) {
                if r != rank && row[col] != 0 {
                    let f = row[col];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p * p - f * y) % p;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|row| row[dim] != 0) {
            return Ok(Vec::new());
        }

        let mut particular = vec![0u32; dim];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = rows[r][dim];
        }
        let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
        let kernel: Vec<Vec<u32>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u32; dim];
                v[fc] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = (p - rows[r][fc]) % p;
                }
                v
            })
            .collect();

        let count = (p as usize).pow(free.len() as u32);
        let mut out = Vec::with_capacity(count);
        for mut idx in 0..count {
            let mut v = particular.clone();
            for basis in &kernel {
                let c = (idx % p as usize) as u32;
                idx /= p as usize;
                for (x, b) in v.iter_mut().zip(basis) {
                    *x = (*x + c * b) % p;
                }
            }
            out.push(self.from_coordinates(&v));
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}
