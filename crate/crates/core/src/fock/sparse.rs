use ndarray::Array2;
use num_complex::Complex64;

/// Compressed-row complex matrix; just enough for operator assembly and
/// matrix-vector products.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseMatrix {
    /// Assembles a `dim x dim` matrix from `(row, col, value)` triplets;
    /// duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < dim && c < dim);
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
            last = Some((r, c));
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn adjoint(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, t)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        assert_eq!(self.dim, other.dim);
        let t = self
            .triplets()
            .map(|(r, c, v)| (r, c, a * v))
            .chain(other.triplets().map(|(r, c, v)| (r, c, b * v)))
            .collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    /// Column `col` as a dense vector.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); self.dim];
        e[col] = Complex64::new(1.0, 0.0);
        self.apply(&e)
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Largest entrywise deviation from self-adjointness.
    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.adjoint();
        self.combine(Complex64::new(1.0, 0.0), &adj, Complex64::new(-1.0, 0.0))
            .vals
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn assembly_sums_duplicates_and_multiplies() {
        let m = SparseMatrix::from_triplets(
            3,
            vec![(0, 1, c(1.0, 0.0)), (2, 0, c(0.0, 2.0)), (0, 1, c(1.0, 1.0))],
        );
        assert_eq!(m.nnz(), 2);
        let y = m.apply(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(y, vec![c(4.0, 2.0), c(0.0, 0.0), c(0.0, 2.0)]);
        let d = m.to_dense();
        assert_eq!(d[(0, 1)], c(2.0, 1.0));
        let a = m.adjoint();
        assert_eq!(a.to_dense()[(1, 0)], c(2.0, -1.0));
        assert!(m.hermitian_defect() > 1.0);
        let h = m.combine(c(1.0, 0.0), &a, c(1.0, 0.0));
        assert_eq!(h.hermitian_defect(), 0.0);
    }
}
