use crate::field::{Element, FieldTower};

/// Dense row-major matrix over GF(q²).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Element::ZERO; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Element::ONE);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Element>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Element] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Element {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Element) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Element] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Element> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn push_row(&mut self, row: &[Element]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Appends a column, one entry per row.
    pub fn push_column(&mut self, column: &[Element]) {
        assert_eq!(column.len(), self.rows);
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for (r, &v) in column.iter().enumerate() {
            data.extend_from_slice(self.row(r));
            data.push(v);
        }
        self.data = data;
        self.cols += 1;
    }

    pub fn map(&self, mut op: impl FnMut(Element) -> Element) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| op(x)).collect(),
        }
    }

    /// First `count` rows.
    pub fn top(&self, count: usize) -> Matrix {
        Matrix {
            rows: count,
            cols: self.cols,
            data: self.data[..count * self.cols].to_vec(),
        }
    }

    /// Reduced row echelon form with leftmost pivots scaled to 1; zero rows
    /// are dropped. Returns the matrix and its pivot columns.
    pub fn rref(&self, f: &FieldTower) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = f.inv(m.get(rank, c));
            for j in c..m.cols {
                let v = f.mul(m.get(rank, j), inv);
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r == rank || factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        (m, pivots)
    }

    pub fn rank(&self, f: &FieldTower) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of {x : M x = 0}, one row per free column of the echelon form.
    pub fn null_space(&self, f: &FieldTower) -> Matrix {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, Element::ONE);
            for (row, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, f.neg(r.get(row, fc)));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_null_space() {
        let f = FieldTower::new(3, 1).unwrap();
        let t = f.theta();
        let m = Matrix::from_rows(vec![
            vec![Element::ONE, t, Element::ZERO, f.pow(t, 2)],
            vec![t, f.pow(t, 2), Element::ONE, Element::ONE],
        ]);
        let (r, pivots) = m.rref(&f);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(r.get(0, 0), Element::ONE);
        let h = m.null_space(&f);
        assert_eq!(h.rows(), 2);
        for i in 0..m.rows() {
            for j in 0..h.rows() {
                let dot = f.sum(m.row(i).iter().zip(h.row(j)).map(|(&a, &b)| f.mul(a, b)));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn push_column_and_top() {
        let mut m = Matrix::identity(2);
        m.push_column(&[Element::ONE, Element::ZERO]);
        assert_eq!(m.cols(), 3);
        assert_eq!(m.row(0), &[Element::ONE, Element::ZERO, Element::ONE]);
        assert_eq!(m.top(1).rows(), 1);
    }
}
