//! Matrices over `F_p[T]`.
//!
//! Lattices are written with basis vectors as columns. The Hermite normal
//! form is lower triangular with monic diagonal, and every entry left of the
//! diagonal has degree below the diagonal entry of its row. It is reached by
//! column operations, so `H = M * U` with `U` unimodular.

use std::fmt;

use super::fp;
use super::linalg;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    e: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, p: u32) -> Self {
        PolyMatrix { rows, cols, p, e: vec![Poly::zero(p); rows * cols] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zero(n, n, p);
        for i in 0..n {
            m.set(i, i, Poly::one(p));
        }
        m
    }

    pub fn diagonal(d: &[Poly]) -> Self {
        let p = d[0].modulus();
        let mut m = Self::zero(d.len(), d.len(), p);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(Error::Shape("empty matrix".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let p = rows[0][0].modulus();
        Ok(PolyMatrix { rows: r, cols: c, p, e: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Poly>]) -> Self {
        let c = cols.len();
        let r = cols[0].len();
        let p = cols[0][0].modulus();
        let mut m = Self::zero(r, c, p);
        for (j, col) in cols.iter().enumerate() {
            m.set_col(j, col);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.e[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.e[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.e[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Poly]) {
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.e[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries_mut(&mut self) -> &mut [Poly] {
        &mut self.e
    }

    pub fn entries(&self) -> &[Poly] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut r = Self::zero(self.rows, o.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = r.get(i, j).add(&a.mul(b));
                        r.set(i, j, v);
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Poly::zero(self.p);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s.add(&a.mul(b));
                    }
                }
                s
            })
            .collect()
    }

    pub fn scale(&self, c: &Poly) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, p: self.p, e: self.e.iter().map(|x| x.mul(c)).collect() }
    }

    /// Entrywise exact division; `None` if some entry is not divisible.
    pub fn div_exact(&self, c: &Poly) -> Option<Self> {
        let e = self.e.iter().map(|x| x.div_exact(c)).collect::<Option<Vec<_>>>()?;
        Some(PolyMatrix { rows: self.rows, cols: self.cols, p: self.p, e })
    }

    /// Monic gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero(self.p);
        for x in &self.e {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, p: self.p, e: self.e.iter().map(f).collect() }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &PolyMatrix) -> Result<Self> {
        if self.rows != o.rows {
            return Err(Error::Shape("hcat row mismatch".into()));
        }
        let mut m = Self::zero(self.rows, self.cols + o.cols, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        Ok(m)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.e.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `col_dst -= q * col_src`
    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src).clone();
            if !s.is_zero() {
                self.get_mut(i, dst).sub_mul(q, &s);
            }
        }
    }

    /// `col_dst += c * T^k * col_src`
    fn col_add_scaled_shifted(&mut self, dst: usize, src: usize, c: u32, k: usize) {
        for i in 0..self.rows {
            let s = self.get(i, src).clone();
            self.get_mut(i, dst).add_scaled_shifted(&s, c, k);
        }
    }

    fn scale_col(&mut self, j: usize, c: u32) {
        for i in 0..self.rows {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    /// Column degree (`-1` for a zero column).
    pub fn col_degree(&self, j: usize) -> i64 {
        (0..self.rows).map(|i| self.get(i, j).deg()).max().unwrap_or(-1)
    }

    pub fn col_degrees(&self) -> Vec<i64> {
        (0..self.cols).map(|j| self.col_degree(j)).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let p = self.p;
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut neg = false;
        let mut prev = Poly::one(p);
        for k in 0..n {
            let Some(r) = (k..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].deg()) else {
                return Ok(Poly::zero(p));
            };
            if r != k {
                a.swap(r, k);
                neg = !neg;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = v.div(&prev);
                }
                a[i][k] = Poly::zero(p);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if neg { d.neg() } else { d })
    }

    /// Fraction-free Gauss-Jordan inverse: returns `(X, d)` with
    /// `self * X = d * I` and `d = ±det(self) != 0`.
    /// Column `j` of the adjugate.
    pub fn adjugate_col(&self, j: usize) -> Result<Vec<Poly>> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        if self.rows != 3 {
            return Ok(self.adjugate()?.0.col(j));
        }
        let g = |i: usize, k: usize| self.get(i, k);
        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
        Ok((0..3)
            .map(|i| {
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                g(r0, c0).mul(g(r1, c1)).sub(&g(r0, c1).mul(g(r1, c0)))
            })
            .collect())
    }

    /// Cofactor formulas for `n <= 3`.
    fn adjugate_small(&self) -> Result<(PolyMatrix, Poly)> {
        let n = self.rows;
        let p = self.p;
        let g = |i: usize, j: usize| self.get(i, j);
        let mut x = PolyMatrix::zero(n, n, p);
        match n {
            0 => return Ok((x, Poly::one(p))),
            1 => x.set(0, 0, Poly::one(p)),
            2 => {
                x.set(0, 0, g(1, 1).clone());
                x.set(0, 1, g(0, 1).neg());
                x.set(1, 0, g(1, 0).neg());
                x.set(1, 1, g(0, 0).clone());
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        x.set(i, j, g(r0, c0).mul(g(r1, c1)).sub(&g(r0, c1).mul(g(r1, c0))));
                    }
                }
            }
        }
        let det = (0..n).fold(Poly::zero(p), |acc, j| acc.add(&g(0, j).mul(x.get(j, 0))));
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok((x, det))
    }

    pub fn adjugate(&self) -> Result<(PolyMatrix, Poly)> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let p = self.p;
        if n <= 3 {
            return self.adjugate_small();
        }
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Poly::one(p) } else { Poly::zero(p) }));
                r
            })
            .collect();
        let mut prev = Poly::one(p);
        for k in 0..n {
            let r = (k..n)
                .filter(|&r| !a[r][k].is_zero())
                .min_by_key(|&r| a[r][k].deg())
                .ok_or(Error::SingularMatrix)?;
            a.swap(r, k);
            let pivot_row = a[k].clone();
            let piv = pivot_row[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let f = row[k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let mut v = row[j].mul(&piv);
                    if !f.is_zero() && !pivot_row[j].is_zero() {
                        v = v.sub(&f.mul(&pivot_row[j]));
                    }
                    row[j] = if prev.is_one() { v } else { v.div(&prev) };
                }
                row[k] = Poly::zero(p);
            }
            prev = piv;
        }
        // left block is now prev * I
        let mut x = PolyMatrix::zero(n, n, p);
        for (i, row) in a.iter().enumerate() {
            debug_assert_eq!(row[i], prev);
            for j in 0..n {
                x.set(i, j, row[n + j].clone());
            }
        }
        Ok((x, prev))
    }

    /// Hermite normal form with transform: `(H, U)`, `H = self * U`.
    pub fn hnf(&self) -> Result<(PolyMatrix, PolyMatrix)> {
        if !self.is_square() {
            return Err(Error::Shape("hnf expects a square matrix".into()));
        }
        let mut h = self.clone();
        let mut u = PolyMatrix::identity(self.cols, self.p);
        hnf_in_place(&mut h, Some(&mut u))?;
        Ok((h, u))
    }

    /// HNF of the lattice spanned by the columns (at least `rows` of them,
    /// full row rank); returns a square matrix.
    pub fn hnf_of_columns(&self) -> Result<PolyMatrix> {
        let mut h = self.clone();
        hnf_in_place(&mut h, None)?;
        Ok(h.truncate_cols(self.rows))
    }

    /// HNF of `L + d T^n` for the column lattice `L` and any nonzero `d`,
    /// with all entries kept below `deg d`.
    pub fn hnf_mod_sum(&self, d: &Poly) -> Result<PolyMatrix> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.rows;
        let p = self.p;
        let d = d.monic();
        let mut a: Vec<Vec<Poly>> = (0..self.cols).map(|j| (0..n).map(|i| self.get(i, j).rem(&d)).collect()).collect();
        a.retain(|c| c.iter().any(|x| !x.is_zero()));
        let mut w: Vec<Vec<Poly>> = Vec::with_capacity(n);
        let mut state = 0x853c_49e6_748f_ea9bu64;
        for i in 0..n {
            if let Some(wi) = Self::row_by_combination(&mut a, i, &d, &mut state)? {
                for wj in w.iter_mut() {
                    if wj[i].is_zero() {
                        continue;
                    }
                    let q = wj[i].div(&wi[i]);
                    for (x, y) in wj.iter_mut().zip(&wi).skip(i) {
                        x.sub_mul(&q, y);
                    }
                }
                w.push(wi);
                a.retain(|c| c.iter().any(|x| !x.is_zero()));
                continue;
            }
            // fold row i of every column into column 0
            let mut k = None;
            for j in 0..a.len() {
                if a[j][i].is_zero() {
                    continue;
                }
                let Some(k0) = k else {
                    k = Some(j);
                    continue;
                };
                if a[j][i].deg() < a[k0][i].deg() {
                    a.swap(j, k0);
                }
                if let Some(q) = a[j][i].div_exact(&a[k0][i]) {
                    let (head, tail) = a.split_at_mut(j);
                    for (x, y) in tail[0].iter_mut().zip(&head[k0]).skip(i) {
                        x.sub_mul(&q, y);
                        *x = x.rem(&d);
                    }
                    continue;
                }
                let (g, s, t) = a[k0][i].xgcd(&a[j][i])?;
                let ak = a[k0][i].div(&g);
                let aj = a[j][i].div(&g);
                let (ck, cj) = (&a[k0], &a[j]);
                let b: Vec<Poly> = ck.iter().zip(cj).map(|(x, y)| s.mul(x).add(&t.mul(y)).rem(&d)).collect();
                let nj: Vec<Poly> = ck.iter().zip(cj).map(|(x, y)| ak.mul(y).sub(&aj.mul(x)).rem(&d)).collect();
                a[k0] = b;
                a[j] = nj;
            }
            // combine with d e_i
            let mut wi = match k {
                None => {
                    let mut e = vec![Poly::zero(p); n];
                    e[i] = d.clone();
                    e
                }
                Some(k0) => {
                    let (g, s, _) = a[k0][i].xgcd(&d)?;
                    let mut wi: Vec<Poly> = a[k0].iter().map(|x| s.mul(x).rem(&d)).collect();
                    wi[i] = g.clone();
                    if g.is_one() {
                        a.swap_remove(k0);
                    } else {
                        let f = d.div(&g);
                        let col = std::mem::take(&mut a[k0]);
                        let z: Vec<Poly> = col.iter().map(|x| f.mul(x).neg().rem(&d)).collect();
                        if z.iter().any(|x| !x.is_zero()) {
                            a[k0] = z;
                            a[k0][i] = Poly::zero(p);
                        } else {
                            a.swap_remove(k0);
                        }
                    }
                    wi
                }
            };
            for x in wi.iter_mut().take(i) {
                *x = Poly::zero(p);
            }
            for wj in w.iter_mut() {
                if wj[i].is_zero() {
                    continue;
                }
                let q = wj[i].div(&wi[i]);
                for (x, y) in wj.iter_mut().zip(&wi).skip(i) {
                    x.sub_mul(&q, y);
                }
            }
            w.push(std::mem::take(&mut wi));
            a.retain(|c| c.iter().any(|x| !x.is_zero()));
        }
        let mut h = PolyMatrix::from_cols(&w);
        for i in 0..n {
            for j in 0..i {
                let q = h.get(i, j).div(h.get(i, i));
                h.col_sub_mul(j, i, &q);
            }
        }
        Ok(h)
    }

    /// Row `i` of the modular HNF in one step: a random constant combination
    /// `c` of the columns usually has `gcd(c_i, d)` equal to the gcd of the
    /// whole row with `d`. `None` when there is nothing to gain or the draw was
    /// unlucky.
    fn row_by_combination(a: &mut Vec<Vec<Poly>>, i: usize, d: &Poly, state: &mut u64) -> Result<Option<Vec<Poly>>> {
        let live: Vec<usize> = (0..a.len()).filter(|&j| !a[j][i].is_zero()).collect();
        if live.len() < 2 {
            return Ok(None);
        }
        let p = d.modulus();
        let n = a[live[0]].len();
        let mut c = vec![Poly::zero(p); n];
        for &j in &live {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let lam = ((*state >> 33) % p as u64) as u32;
            if lam == 0 {
                continue;
            }
            for (x, y) in c.iter_mut().zip(&a[j]).skip(i) {
                *x = x.add(&y.scale(lam));
            }
        }
        if c[i].is_zero() {
            return Ok(None);
        }
        let (g, s, _) = c[i].xgcd(d)?;
        if !g.is_one() && live.iter().any(|&j| !a[j][i].rem(&g).is_zero()) {
            return Ok(None);
        }
        let mut wi: Vec<Poly> = c.iter().map(|x| s.mul(x).rem(d)).collect();
        wi[i] = g.clone();
        for &j in &live {
            let q = a[j][i].div(&g);
            let col = &mut a[j];
            for (x, y) in col.iter_mut().zip(&wi).skip(i + 1) {
                x.sub_mul(&q, y);
                *x = x.rem(d);
            }
            col[i] = Poly::zero(p);
        }
        if !g.is_one() {
            let f = d.div(&g);
            let mut z: Vec<Poly> = wi.iter().map(|x| f.mul(x).rem(d)).collect();
            z[i] = Poly::zero(p);
            if z.iter().any(|x| !x.is_zero()) {
                a.push(z);
            }
        }
        for x in wi.iter_mut().take(i) {
            *x = Poly::zero(p);
        }
        Ok(Some(wi))
    }

    /// HNF of `L + d T^n` with entries kept below `deg d`. Only correct when
    /// `det(L + d T^n)` divides `d`, e.g. when `d` is a multiple of `det L`;
    /// otherwise use [`PolyMatrix::hnf_mod_sum`].
    pub fn hnf_mod(&self, d: &Poly) -> Result<PolyMatrix> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.rows;
        let m = self.cols.max(n);
        let p = self.p;
        let mut r = d.monic();
        let mut a: Vec<Vec<Poly>> = (0..m)
            .map(|j| (0..n).map(|i| if j < self.cols { self.get(i, j).rem(&r) } else { Poly::zero(p) }).collect())
            .collect();
        let mut w: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let k = i;
            for j in k + 1..m {
                if a[j][i].is_zero() {
                    continue;
                }
                if a[k][i].is_zero() {
                    a.swap(j, k);
                    continue;
                }
                let (g, s, t) = a[k][i].xgcd(&a[j][i])?;
                let ak = a[k][i].div(&g);
                let aj = a[j][i].div(&g);
                let (ck, cj) = (&a[k], &a[j]);
                let b: Vec<Poly> = ck.iter().zip(cj).map(|(x, y)| s.mul(x).add(&t.mul(y)).rem(&r)).collect();
                let nj: Vec<Poly> = ck.iter().zip(cj).map(|(x, y)| ak.mul(y).sub(&aj.mul(x)).rem(&r)).collect();
                a[k] = b;
                a[j] = nj;
            }
            let (g, s, _) = a[k][i].xgcd(&r)?;
            let mut wi: Vec<Poly> = a[k].iter().map(|x| s.mul(x).rem(&r)).collect();
            if wi[i].is_zero() {
                wi[i] = r.clone();
            }
            debug_assert!(wi[..i].iter().all(|x| x.is_zero()));
            for wj in w.iter_mut() {
                if wj[i].is_zero() {
                    continue;
                }
                let q = wj[i].div(&wi[i]);
                for (x, y) in wj.iter_mut().zip(&wi).skip(i) {
                    x.sub_mul(&q, y);
                }
            }
            w.push(wi);
            r = r.div(&g);
        }
        let mut h = PolyMatrix::from_cols(&w);
        // diagonal entries are gcds, hence monic; re-reduce to be safe
        for i in 0..n {
            debug_assert!(h.get(i, i).is_monic());
            for j in 0..i {
                let q = h.get(i, j).div(h.get(i, i));
                h.col_sub_mul(j, i, &q);
            }
        }
        Ok(h)
    }

    fn truncate_cols(&self, c: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(self.rows, c, self.p);
        for i in 0..self.rows {
            for j in 0..c {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_hnf(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            let d = self.get(i, i);
            if !d.is_monic() {
                return false;
            }
            for j in 0..self.cols {
                let x = self.get(i, j);
                if j > i && !x.is_zero() {
                    return false;
                }
                if j < i && x.deg() >= d.deg() {
                    return false;
                }
            }
        }
        true
    }

    /// Column-reduced form `(R, degs)`: `R = self * U` with `U` unimodular,
    /// leading column coefficient matrix of `R` nonsingular.
    pub fn column_reduce(&self) -> Result<(PolyMatrix, Vec<i64>)> {
        let mut r = self.clone();
        reduce_columns(&mut r, None, |_, _| false)?;
        let degs = r.col_degrees();
        Ok((r, degs))
    }

    /// As [`column_reduce`](Self::column_reduce), also returning `U`.
    pub fn column_reduce_with_transform(&self) -> Result<(PolyMatrix, PolyMatrix, Vec<i64>)> {
        let mut r = self.clone();
        let mut u = PolyMatrix::identity(self.cols, self.p);
        reduce_columns(&mut r, Some(&mut u), |_, _| false)?;
        let degs = r.col_degrees();
        Ok((r, u, degs))
    }

    /// Matrix of leading column coefficients over `F_p`.
    pub fn leading_matrix(&self) -> Vec<Vec<u32>> {
        let degs = self.col_degrees();
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if degs[j] < 0 { 0 } else { self.get(i, j).coeff(degs[j] as usize) }).collect())
            .collect()
    }
}

/// Plain HNF by column Euclid steps; columns beyond `rows` end up zero.
fn hnf_in_place(h: &mut PolyMatrix, mut u: Option<&mut PolyMatrix>) -> Result<()> {
    let n = h.rows;
    let m = h.cols;
    if m < n {
        return Err(Error::SingularMatrix);
    }
    for i in 0..n {
        loop {
            let piv = (i..m)
                .filter(|&j| !h.get(i, j).is_zero())
                .min_by_key(|&j| h.get(i, j).deg())
                .ok_or(Error::SingularMatrix)?;
            h.swap_cols(i, piv);
            if let Some(u) = u.as_deref_mut() {
                u.swap_cols(i, piv);
            }
            let mut done = true;
            for j in i + 1..m {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div(h.get(i, i));
                h.col_sub_mul(j, i, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.col_sub_mul(j, i, &q);
                }
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        let lc = h.get(i, i).lc();
        if lc != 1 {
            let inv = fp::inv(lc, h.p);
            h.scale_col(i, inv);
            if let Some(u) = u.as_deref_mut() {
                u.scale_col(i, inv);
            }
        }
        for j in 0..i {
            let q = h.get(i, j).div(h.get(i, i));
            if !q.is_zero() {
                h.col_sub_mul(j, i, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.col_sub_mul(j, i, &q);
                }
            }
        }
    }
    Ok(())
}

/// Column reduction by leading-coefficient kernel steps. Before each step
/// `stop(j, deg_j)` is asked about every column in order; a `true` answer
/// ends the reduction and returns `Some(j)`. Returns `None` once reduced.
/// `track` receives the same column operations.
pub fn reduce_columns(
    m: &mut PolyMatrix,
    mut track: Option<&mut PolyMatrix>,
    mut stop: impl FnMut(usize, i64) -> bool,
) -> Result<Option<usize>> {
    let p = m.p;
    loop {
        let degs = m.col_degrees();
        if degs.iter().any(|&d| d < 0) {
            return Err(Error::SingularMatrix);
        }
        for (j, &d) in degs.iter().enumerate() {
            if stop(j, d) {
                return Ok(Some(j));
            }
        }
        let lead = m.leading_matrix();
        let ker = linalg::kernel(&lead, m.cols, p);
        let Some(v) = ker.into_iter().next() else {
            return Ok(None);
        };
        // pivot: a supported column of maximal degree (first one on ties)
        let k = (0..m.cols).filter(|&j| v[j] != 0).max_by(|&a, &b| degs[a].cmp(&degs[b]).then(b.cmp(&a))).unwrap();
        let inv = fp::inv(v[k], p);
        for j in 0..m.cols {
            if j == k || v[j] == 0 {
                continue;
            }
            let c = fp::mul(v[j], inv, p);
            let shift = (degs[k] - degs[j]) as usize;
            m.col_add_scaled_shifted(k, j, c, shift);
            if let Some(t) = track.as_deref_mut() {
                t.col_add_scaled_shifted(k, j, c, shift);
            }
        }
        debug_assert!(m.col_degree(k) < degs[k]);
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u32 = 32771;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, d: usize) -> PolyMatrix {
        let mut a = PolyMatrix::zero(n, m, P);
        for i in 0..n {
            for j in 0..m {
                a.set(i, j, Poly::random(rng, d, P));
            }
        }
        a
    }

    #[test]
    fn hnf_trivial_cases() {
        let id = PolyMatrix::identity(3, P);
        let (h, u) = id.hnf().unwrap();
        assert!(h.is_identity() && u.is_identity());
        let x = Poly::x(P);
        let d = PolyMatrix::diagonal(&[x.clone(), x.clone()]);
        let (h, u) = d.hnf().unwrap();
        assert_eq!(h, d);
        assert!(u.is_identity());
        let z = PolyMatrix::zero(2, 2, P);
        assert!(matches!(z.hnf(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn hnf_random_three_by_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 3, 3);
            let (h, u) = a.hnf().unwrap();
            assert!(h.is_hnf());
            assert_eq!(a.mul(&u).unwrap(), h);
            assert_eq!(u.det().unwrap().degree(), Some(0));
            // idempotence
            let (h2, u2) = h.hnf().unwrap();
            assert_eq!(h2, h);
            assert!(u2.is_identity());
        }
    }

    #[test]
    fn hnf_mod_sum_matches_plain_hnf() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 5, 32771] {
            for _ in 0..60 {
                let n = rng.gen_range(1..5);
                let m = rng.gen_range(0..7);
                let mut a = PolyMatrix::zero(n, m, p);
                for i in 0..n {
                    for j in 0..m {
                        let k = rng.gen_range(0..4);
                        a.set(i, j, Poly::random(&mut rng, k, p));
                    }
                }
                let k = rng.gen_range(0..4);
                let d = Poly::random_monic(&mut rng, k, p).mul(&Poly::random_monic(&mut rng, 1, p));
                let full = a.hcat(&PolyMatrix::identity(n, p).scale(&d)).unwrap().hnf_of_columns().unwrap();
                assert_eq!(a.hnf_mod_sum(&d).unwrap(), full, "lattice {a:?} d={d}");
            }
        }
    }

    #[test]
    fn hnf_mod_matches_plain_hnf() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2u32, 5, P] {
            for _ in 0..30 {
                let n = rng.gen_range(1..5);
                let m = n + rng.gen_range(0..4);
                let mut a = PolyMatrix::zero(n, m, p);
                for i in 0..n {
                    for j in 0..m {
                        a.set(i, j, Poly::random(&mut rng, 2, p));
                    }
                }
                let Ok(h) = a.hnf_of_columns() else { continue };
                let det = h.det().unwrap();
                let extra = { let k = rng.gen_range(0..3); Poly::random_monic(&mut rng, k, p) };
                let hm = a.hnf_mod(&det.mul(&extra)).unwrap();
                assert_eq!(hm, h, "lattice {a:?}");
            }
        }
    }

    #[test]
    fn hnf_mod_adds_multiple_of_d() {
        // HNF(L + d*T^n) for a d that is not a multiple of det(L)
        let p = 7;
        let x = Poly::x(p);
        let a = PolyMatrix::diagonal(&[x.pow(3), Poly::one(p)]);
        let h = a.hnf_mod(&x.pow(2)).unwrap();
        assert_eq!(h, PolyMatrix::diagonal(&[x.pow(2), Poly::one(p)]));
    }

    #[test]
    fn hnf_mod_sum_on_inert_prime() {
        // L = T^2, d = x + 2: the plain modular HNF would collapse to diag(d, 1)
        let p = 7;
        let d = Poly::from_i64(&[2, 1], p);
        let a = PolyMatrix::identity(2, p);
        let h = a.scale(&d).hnf_mod_sum(&d).unwrap();
        assert_eq!(h, PolyMatrix::diagonal(&[d.clone(), d.clone()]));
        let mut b = PolyMatrix::identity(2, p);
        b.set(1, 0, Poly::x(p));
        let h = b.hnf_mod_sum(&d).unwrap();
        assert_eq!(h, PolyMatrix::identity(2, p));
    }

    #[test]
    fn determinant_and_adjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let a = random_matrix(&mut rng, n, n, 2);
            let det = a.det().unwrap();
            let (x, d) = a.adjugate().unwrap();
            assert!(d == det || d == det.neg());
            let prod = a.mul(&x).unwrap();
            assert_eq!(prod, PolyMatrix::identity(n, P).scale(&d));
            for j in 0..n {
                assert_eq!(a.adjugate_col(j).unwrap(), x.col(j));
            }
            // det(AB) = det A det B
            let b = random_matrix(&mut rng, n, n, 1);
            assert_eq!(a.mul(&b).unwrap().det().unwrap(), det.mul(&b.det().unwrap()));
        }
    }

    #[test]
    fn column_reduce_properties() {
        let x = Poly::x(P);
        let (_, degs) = PolyMatrix::identity(3, P).column_reduce().unwrap();
        assert_eq!(degs, vec![0, 0, 0]);
        let (_, mut degs) = PolyMatrix::diagonal(&[x.pow(2), x.pow(5)]).column_reduce().unwrap();
        degs.sort();
        assert_eq!(degs, vec![2, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 4, 3);
            let u0 = {
                let mut u = PolyMatrix::identity(4, P);
                // a non-trivial unimodular mixing so the input is far from reduced
                for j in 1..4 {
                    let q = Poly::random(&mut rng, 4, P);
                    u.col_sub_mul(j, 0, &q);
                }
                u
            };
            let a = a.mul(&u0).unwrap();
            let (r, u, degs) = a.column_reduce_with_transform().unwrap();
            assert_eq!(a.mul(&u).unwrap(), r);
            assert_eq!(degs.iter().sum::<i64>(), a.det().unwrap().deg());
            assert_eq!(linalg::rank(&r.leading_matrix(), 4, P), 4);
            // permutation invariance of the degree multiset
            let mut perm = a.clone();
            perm.swap_cols(0, 3);
            let (_, mut d2) = perm.column_reduce().unwrap();
            let mut d1 = degs.clone();
            d1.sort();
            d2.sort();
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn column_reduce_rejects_singular() {
        let x = Poly::x(P);
        let a = PolyMatrix::from_rows(vec![vec![x.clone(), x.clone()], vec![Poly::one(P), Poly::one(P)]]).unwrap();
        assert!(a.column_reduce().is_err());
    }
}
