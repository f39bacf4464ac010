//! Compressed sparse row storage for the symmetric five-point operator.

use super::mask::DomainMask;
use crate::error::{Error, Result};

/// Symmetric sparse matrix in CSR form (full pattern stored).
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<f64>,
}

impl Csr {
    /// Build from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Domain("csr: triplet index out of range".into()));
            }
            rows[i].push((j as u32, v));
        }
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<u32> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *data.last_mut().unwrap() += v;
                } else {
                    indices.push(j);
                    data.push(v);
                    last = Some(j);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Csr { n, indptr, indices, data })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Csr {
            n,
            indptr: (0..=n).collect(),
            indices: (0..n as u32).collect(),
            data: values.to_vec(),
        }
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let lo = self.indptr[i];
        let hi = self.indptr[i + 1];
        (&self.indices[lo..hi], &self.data[lo..hi])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                acc += v * x[*c as usize];
            }
            *yi = acc;
        }
    }

    /// Largest |A_ii|; used for breakdown scaling in the factorization.
    pub fn diag_scale(&self) -> f64 {
        let mut scale = 0.0f64;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                if *c as usize == i {
                    scale = scale.max(v.abs());
                }
            }
        }
        scale
    }

    /// Structural + numerical symmetry check (tests).
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                let j = *c as usize;
                let (jc, jv) = self.row(j);
                let back = jc
                    .iter()
                    .position(|&cc| cc as usize == i)
                    .map(|p| jv[p])
                    .unwrap_or(0.0);
                worst = worst.max((v - back).abs());
            }
        }
        worst
    }
}

/// Five-point discretization of the Dirichlet Laplacian on the mask:
/// diagonal 4/h², off-diagonal −1/h² between active lattice neighbors
/// (inactive neighbors carry the Dirichlet zeros).
pub fn assemble(mask: &DomainMask) -> Csr {
    let n = mask.active_count();
    let h2 = mask.h * mask.h;
    let diag = 4.0 / h2;
    let off = -1.0 / h2;
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices: Vec<u32> = Vec::with_capacity(5 * n);
    let mut data: Vec<f64> = Vec::with_capacity(5 * n);
    indptr.push(0);
    let mut row: Vec<(u32, f64)> = Vec::with_capacity(5);
    for k in 0..n {
        let (ix, iy) = mask.nodes[k];
        row.clear();
        for (dx, dy) in [(0i64, -1i64), (-1, 0), (1, 0), (0, 1)] {
            if let Some(j) = mask.index_at(ix as i64 + dx, iy as i64 + dy) {
                row.push((j as u32, off));
            }
        }
        row.push((k as u32, diag));
        row.sort_by_key(|e| e.0);
        for &(c, v) in &row {
            indices.push(c);
            data.push(v);
        }
        indptr.push(indices.len());
    }
    Csr { n, indptr, indices, data }
}
