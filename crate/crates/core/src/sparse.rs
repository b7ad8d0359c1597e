//! Square sparse matrix held in both compressed-row and compressed-column form.
//!
//! Row `i` lists the out-edges of node `i` (entries `W[i][j]`); column `j`
//! lists its in-edges. Both stores are sorted by the minor index.

/// Square sparse matrix with row-major and column-major views of the same entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    row_vals: Vec<f64>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    col_vals: Vec<f64>,
}

impl SparseMatrix {
    /// Builds an `n x n` matrix from `(row, col, value)` triplets.
    ///
    /// Duplicate coordinates are summed; entries that sum to exactly zero are dropped.
    /// Panics if a coordinate is out of range.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        for &(r, c, _) in &triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for n = {n}");
        }
        triplets.sort_by_key(|t| (t.0, t.1));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);

        let nnz = merged.len();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(nnz);
        let mut row_vals = Vec::with_capacity(nnz);
        for &(r, c, v) in &merged {
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            row_vals.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }

        // Transpose by counting sort; rows are visited in order so each column stays sorted.
        let mut col_ptr = vec![0usize; n + 1];
        for &(_, c, _) in &merged {
            col_ptr[c + 1] += 1;
        }
        for j in 0..n {
            col_ptr[j + 1] += col_ptr[j];
        }
        let mut next = col_ptr.clone();
        let mut row_idx = vec![0usize; nnz];
        let mut col_vals = vec![0.0; nnz];
        for &(r, c, v) in &merged {
            let slot = next[c];
            row_idx[slot] = r;
            col_vals[slot] = v;
            next[c] += 1;
        }

        Self {
            n,
            row_ptr,
            col_idx,
            row_vals,
            col_ptr,
            row_idx,
            col_vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[range.clone()], &self.row_vals[range])
    }

    /// Row indices and values of column `j`.
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[range.clone()], &self.col_vals[range])
    }

    /// Entry `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    /// All entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).fold(0.0, |acc, (&j, &w)| acc + w * x[j])
            })
            .collect()
    }

    /// `(I - M) x`.
    pub fn resolvent_apply(&self, x: &[f64]) -> Vec<f64> {
        let mx = self.mul_vec(x);
        x.iter().zip(mx).map(|(a, b)| a - b).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.col(j).1.iter().fold(0.0, |a, w| a + w)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).1.iter().fold(0.0, |a, w| a + w)).collect()
    }

    /// Matrix with every entry replaced by `f(entry)`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (i, j, f(v))).collect();
        Self::from_triplets(self.n, triplets)
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.n, triplets)
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.get(i, i)
    }

    /// Principal submatrix on `nodes` (local index = position in `nodes`).
    ///
    /// `scratch` must have length `dim()` and be filled with `usize::MAX`; it is restored
    /// before returning.
    pub(crate) fn principal_submatrix(&self, nodes: &[usize], scratch: &mut [usize]) -> SparseMatrix {
        for (local, &g) in nodes.iter().enumerate() {
            scratch[g] = local;
        }
        let mut triplets = Vec::new();
        for (local, &g) in nodes.iter().enumerate() {
            let (cols, vals) = self.row(g);
            for (&j, &w) in cols.iter().zip(vals) {
                let lj = scratch[j];
                if lj != usize::MAX {
                    triplets.push((local, lj, w));
                }
            }
        }
        for &g in nodes {
            scratch[g] = usize::MAX;
        }
        SparseMatrix::from_triplets(nodes.len(), triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SparseMatrix::from_triplets(
            3,
            vec![(0, 1, 0.3), (0, 1, 0.4), (2, 0, 0.0), (1, 2, 1.0)],
        );
        assert_eq!(m.nnz(), 2);
        assert!((m.get(0, 1) - 0.7).abs() < 1e-15);
        assert_eq!(m.get(2, 0), 0.0);
    }

    #[test]
    fn row_and_column_stores_agree() {
        let m = SparseMatrix::from_triplets(
            4,
            vec![(3, 0, 0.5), (0, 3, 0.25), (1, 1, 0.1), (2, 0, 0.2), (0, 2, 0.9)],
        );
        for j in 0..4 {
            let (rows, vals) = m.col(j);
            assert!(rows.windows(2).all(|w| w[0] < w[1]));
            for (&i, &v) in rows.iter().zip(vals) {
                assert_eq!(m.get(i, j), v);
            }
        }
        assert_eq!(m.column_sums()[0], 0.7);
    }

    #[test]
    fn resolvent_apply_of_self_loop() {
        let m = SparseMatrix::from_triplets(1, vec![(0, 0, 0.5)]);
        assert_eq!(m.resolvent_apply(&[2.0]), vec![1.0]);
    }
}
