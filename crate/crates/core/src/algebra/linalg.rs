//! Dense linear algebra over `F_p`.

use super::fp;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = fp::inv(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = fp::mul(*v, inv, p);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c];
            let (head, tail) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&mut a[i], &b[0])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&mut b[0], &a[r])
            };
            for (x, &y) in head.iter_mut().zip(tail.iter()) {
                if y != 0 {
                    *x = fp::sub(*x, fp::mul(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : A v = 0}` for `A` given by rows of length `ncols`.
pub fn kernel(a: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = a.to_vec();
    let pivots = rref(&mut m, ncols, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = fp::neg(m[r][free], p);
        }
        out.push(v);
    }
    out
}

pub fn rank(a: &[Vec<u32>], ncols: usize, p: u32) -> usize {
    let mut m = a.to_vec();
    rref(&mut m, ncols, p).len()
}

/// A subspace of `F_p^dim` kept in reduced echelon form, supporting canonical
/// reduction of vectors modulo it.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    p: u32,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(gens: &[Vec<u32>], dim: usize, p: u32) -> Self {
        let mut rows = gens.to_vec();
        let pivots = rref(&mut rows, dim, p);
        rows.truncate(pivots.len());
        Subspace { dim, p, rows, pivots }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Canonical representative of `v + self`.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = fp::sub(*x, fp::mul(f, y, self.p), self.p);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
}
