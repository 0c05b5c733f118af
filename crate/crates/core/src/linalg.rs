//! Exact dense linear algebra over a finite field: row reduction, rank,
//! kernels, inverses, determinants, and quadratic-form utilities.
//!
//! Matrices do not carry a field handle; every operation takes the field
//! explicitly, matching the element design in [`crate::field`].

use crate::field::{FieldElement, FiniteField};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<FieldElement>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, mut f: impl FnMut(&FieldElement) -> FieldElement) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn add(&self, field: &FiniteField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            field.add(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn sub(&self, field: &FiniteField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            field.sub(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn scale(&self, field: &FiniteField, s: &FieldElement) -> Mat {
        self.map(|e| field.mul(e, s))
    }

    pub fn matmul(&self, field: &FiniteField, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = field.mul(&a, &other[(k, j)]);
                    out[(i, j)] = field.add(&out[(i, j)], &t);
                }
            }
        }
        out
    }

    pub fn matvec(&self, field: &FiniteField, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        acc = field.add(&acc, &field.mul(&self[(i, j)], &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self, field: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(&self[(r, c)]).expect("pivot nonzero");
            for j in c..self.cols {
                self[(r, j)] = field.mul(&self[(r, j)], &inv);
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)];
                    for j in c..self.cols {
                        let t = field.mul(&factor, &self[(r, j)]);
                        self[(i, j)] = field.sub(&self[(i, j)], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        let mut m = self.clone();
        m.rref_in_place(field).len()
    }

    /// Canonical kernel basis, one row per free column, in reduced echelon
    /// convention: the basis vector for free column f has 1 at f and the
    /// negated reduced coefficients at the pivot columns.
    pub fn kernel_basis(&self, field: &FiniteField) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref_in_place(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            out[(bi, fc)] = field.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                out[(bi, pc)] = field.neg(&m[(ri, fc)]);
            }
        }
        out
    }

    pub fn inverse(&self, field: &FiniteField) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = field.one();
        }
        let pivots = aug.rref_in_place(field);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug[(i, n + j)]))
    }

    pub fn det(&self, field: &FiniteField) -> FieldElement {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return field.zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = field.neg(&det);
            }
            let pivot = m[(c, c)];
            det = field.mul(&det, &pivot);
            let inv = field.inv(&pivot).expect("pivot nonzero");
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = field.mul(&m[(i, c)], &inv);
                for j in c..n {
                    let t = field.mul(&factor, &m[(c, j)]);
                    m[(i, j)] = field.sub(&m[(i, j)], &t);
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = FieldElement;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Quadratic-form utilities. A quadratic form is stored as any square matrix
// M with n(x) = x^T M x; two matrices define the same form iff their
// upper-triangular normalizations agree. This convention is characteristic-
// free (a symmetric Gram matrix cannot represent forms with cross terms in
// characteristic 2).
// ---------------------------------------------------------------------------

/// Upper-triangular normalization: U_ii = M_ii, U_ij = M_ij + M_ji for i < j.
pub fn quad_normalize(field: &FiniteField, m: &Mat) -> Mat {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, i)]
        } else if i < j {
            field.add(&m[(i, j)], &m[(j, i)])
        } else {
            field.zero()
        }
    })
}

/// Whether two matrices define the same quadratic form.
pub fn quad_eq(field: &FiniteField, a: &Mat, b: &Mat) -> bool {
    quad_normalize(field, a) == quad_normalize(field, b)
}

/// Evaluate n(x) = x^T M x.
pub fn quad_eval(field: &FiniteField, m: &Mat, x: &[FieldElement]) -> FieldElement {
    let n = m.rows();
    assert_eq!(x.len(), n);
    let mut acc = field.zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let mut row = field.zero();
        for j in 0..n {
            if !x[j].is_zero() {
                row = field.add(&row, &field.mul(&m[(i, j)], &x[j]));
            }
        }
        acc = field.add(&acc, &field.mul(&x[i], &row));
    }
    acc
}

/// Polar form matrix B = M + M^T, so b(x, y) = x^T B y.
pub fn polar_matrix(field: &FiniteField, m: &Mat) -> Mat {
    m.add(field, &m.transpose())
}

pub fn bilinear_eval(
    field: &FiniteField,
    b: &Mat,
    x: &[FieldElement],
    y: &[FieldElement],
) -> FieldElement {
    let by = b.matvec(field, y);
    let mut acc = field.zero();
    for i in 0..x.len() {
        if !x[i].is_zero() && !by[i].is_zero() {
            acc = field.add(&acc, &field.mul(&x[i], &by[i]));
        }
    }
    acc
}

/// Congruence diagonalization of a symmetric matrix in odd characteristic:
/// returns (P, d) with P^T G P = diag(d). Fails on degenerate input or in
/// characteristic 2, where no orthogonal basis need exist.
pub fn diagonalize(field: &FiniteField, g: &Mat) -> Result<(Mat, Vec<FieldElement>), DiagError> {
    if field.characteristic() == 2 {
        return Err(DiagError::CharacteristicTwo);
    }
    assert_eq!(g.rows(), g.cols());
    let n = g.rows();
    if g != &g.transpose() {
        return Err(DiagError::NotSymmetric);
    }
    let mut a = g.clone();
    let mut p = Mat::identity(field, n);

    // apply a column operation col_t += s * col_src and the matching row op
    // to a; mirror the column op on p
    let col_op = |a: &mut Mat, p: &mut Mat, t: usize, src: usize, s: &FieldElement| {
        for i in 0..n {
            let add = field.mul(&a[(i, src)], s);
            a[(i, t)] = field.add(&a[(i, t)], &add);
        }
        for j in 0..n {
            let add = field.mul(&a[(src, j)], s);
            a[(t, j)] = field.add(&a[(t, j)], &add);
        }
        for i in 0..n {
            let add = field.mul(&p[(i, src)], s);
            p[(i, t)] = field.add(&p[(i, t)], &add);
        }
    };

    for i in 0..n {
        if a[(i, i)].is_zero() {
            if let Some(j) = ((i + 1)..n).find(|&j| !a[(j, j)].is_zero()) {
                // swap basis vectors i and j
                for r in 0..n {
                    let tmp = a[(r, i)];
                    a[(r, i)] = a[(r, j)];
                    a[(r, j)] = tmp;
                }
                for c in 0..n {
                    let tmp = a[(i, c)];
                    a[(i, c)] = a[(j, c)];
                    a[(j, c)] = tmp;
                }
                for r in 0..n {
                    let tmp = p[(r, i)];
                    p[(r, i)] = p[(r, j)];
                    p[(r, j)] = tmp;
                }
            } else if let Some(j) = ((i + 1)..n).find(|&j| !a[(i, j)].is_zero()) {
                // e_i += e_j gives diagonal entry 2*a_ij != 0
                let one = field.one();
                col_op(&mut a, &mut p, i, j, &one);
            } else {
                return Err(DiagError::Degenerate);
            }
        }
        let pivot = a[(i, i)];
        if pivot.is_zero() {
            return Err(DiagError::Degenerate);
        }
        let pinv = field.inv(&pivot).expect("nonzero pivot");
        for j in (i + 1)..n {
            if !a[(i, j)].is_zero() {
                let s = field.neg(&field.mul(&a[(i, j)], &pinv));
                col_op(&mut a, &mut p, j, i, &s);
            }
        }
    }
    let diag: Vec<FieldElement> = (0..n).map(|i| a[(i, i)]).collect();
    if diag.iter().any(|d| d.is_zero()) {
        return Err(DiagError::Degenerate);
    }
    Ok((p, diag))
}

// ---------------------------------------------------------------------------
// Dense rank-3 structure tensors: T[i][j] is the coefficient vector of the
// product of basis elements i and j.
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<FieldElement>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Tensor3 {
        Tensor3 {
            dim,
            data: vec![FieldElement::ZERO; dim * dim * dim],
        }
    }

    pub fn from_products(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<FieldElement>) -> Tensor3 {
        let mut t = Tensor3::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let prod = f(i, j);
                assert_eq!(prod.len(), dim);
                t.data[(i * dim + j) * dim..(i * dim + j + 1) * dim].copy_from_slice(&prod);
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> &FieldElement {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: FieldElement) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    /// Coefficient vector of e_i * e_j.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[FieldElement] {
        &self.data[(i * self.dim + j) * self.dim..(i * self.dim + j + 1) * self.dim]
    }

    pub fn map(&self, mut f: impl FnMut(&FieldElement) -> FieldElement) -> Tensor3 {
        Tensor3 {
            dim: self.dim,
            data: self.data.iter().map(|e| f(e)).collect(),
        }
    }
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor3(dim={})", self.dim)
    }
}

/// Deterministic element of SL_n as a product of seeded transvections
/// I + c E_ij. Handy for exercising basis changes and automorphisms.
pub fn random_special_linear(
    field: &FiniteField,
    n: usize,
    rng: &mut crate::sample::SampleStream,
    steps: usize,
) -> Mat {
    let mut m = Mat::identity(field, n);
    for _ in 0..steps {
        let i = rng.below(n as u64) as usize;
        let mut j = rng.below(n as u64) as usize;
        if i == j {
            j = (j + 1) % n;
        }
        let c = rng.element(field);
        let mut t = Mat::identity(field, n);
        t[(i, j)] = c;
        m = m.matmul(field, &t);
    }
    m
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DiagError {
    #[error("diagonalization requires odd characteristic")]
    CharacteristicTwo,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is degenerate")]
    Degenerate,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::SampleStream;

    fn gf(p: u64, k: usize) -> FiniteField {
        FiniteField::new(p, k).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(7, 1);
        let mut rng = SampleStream::new(1);
        let mut found = 0;
        while found < 5 {
            let m = Mat::from_fn(5, 5, |_, _| rng.element(&f));
            if let Some(inv) = m.inverse(&f) {
                assert_eq!(m.matmul(&f, &inv), Mat::identity(&f, 5));
                assert_eq!(inv.matmul(&f, &m), Mat::identity(&f, 5));
                found += 1;
            }
        }
    }

    #[test]
    fn singular_has_no_inverse_and_zero_det() {
        let f = gf(7, 1);
        let mut m = Mat::zeros(3, 3);
        // row 2 = row 0 + row 1
        let vals = [[1, 2, 3], [4, 5, 6], [5, 0, 2]];
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = f.from_int(vals[i][j]);
            }
        }
        assert!(m.inverse(&f).is_none());
        assert!(m.det(&f).is_zero());
        assert_eq!(m.rank(&f), 2);
        let ker = m.kernel_basis(&f);
        assert_eq!(ker.rows(), 1);
        // kernel vectors really are in the kernel
        let kv = ker.row(0).to_vec();
        assert!(m.matvec(&f, &kv).iter().all(|e| e.is_zero()));
    }

    #[test]
    fn det_multiplicative() {
        let f = gf(2, 2);
        let mut rng = SampleStream::new(2);
        for _ in 0..20 {
            let a = Mat::from_fn(4, 4, |_, _| rng.element(&f));
            let b = Mat::from_fn(4, 4, |_, _| rng.element(&f));
            let lhs = a.matmul(&f, &b).det(&f);
            let rhs = f.mul(&a.det(&f), &b.det(&f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_nullity_exhaustive_small() {
        let f = gf(2, 1);
        // all 2^9 binary 3x3 matrices
        for bits in 0..512u32 {
            let m = Mat::from_fn(3, 3, |i, j| f.from_int(((bits >> (3 * i + j)) & 1) as u64));
            let r = m.rank(&f);
            let k = m.kernel_basis(&f).rows();
            assert_eq!(r + k, 3);
        }
    }

    #[test]
    fn diagonalize_hyperbolic_plane_gf7() {
        let f = gf(7, 1);
        let mut g = Mat::zeros(2, 2);
        g[(0, 1)] = f.one();
        g[(1, 0)] = f.one();
        let (p, d) = diagonalize(&f, &g).unwrap();
        // congruence check: P^T G P = diag(d)
        let lhs = p.transpose().matmul(&f, &g).matmul(&f, &p);
        let mut diag = Mat::zeros(2, 2);
        diag[(0, 0)] = d[0];
        diag[(1, 1)] = d[1];
        assert_eq!(lhs, diag);
        // entries are {2, -2} up to squares: -d0*d1 must be a square
        let prod = f.neg(&f.mul(&d[0], &d[1]));
        assert!(f.is_square(&prod));
    }

    #[test]
    fn diagonalize_already_diagonal_is_identity() {
        let f = gf(7, 1);
        let mut g = Mat::zeros(3, 3);
        g[(0, 0)] = f.from_int(2);
        g[(1, 1)] = f.from_int(3);
        g[(2, 2)] = f.from_int(5);
        let (p, d) = diagonalize(&f, &g).unwrap();
        assert_eq!(p, Mat::identity(&f, 3));
        assert_eq!(d, vec![f.from_int(2), f.from_int(3), f.from_int(5)]);
    }

    #[test]
    fn diagonalize_scrambled_congruent() {
        let f = gf(7, 1);
        let mut rng = SampleStream::new(3);
        let mut d0 = Mat::zeros(4, 4);
        for i in 0..4 {
            d0[(i, i)] = f.from_int([1, 3, 2, 6][i]);
        }
        // random congruence scramble by an invertible S
        let s = loop {
            let s = Mat::from_fn(4, 4, |_, _| rng.element(&f));
            if s.inverse(&f).is_some() {
                break s;
            }
        };
        let g = s.transpose().matmul(&f, &d0).matmul(&f, &s);
        let (p, d) = diagonalize(&f, &g).unwrap();
        let lhs = p.transpose().matmul(&f, &g).matmul(&f, &p);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { d[i] } else { f.zero() };
                assert_eq!(lhs[(i, j)], want);
            }
        }
        // same determinant square-class
        let det_d: FieldElement = d.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
        let det_g = g.det(&f);
        assert!(f.is_square(&f.div(&det_d, &det_g).unwrap()));
    }

    #[test]
    fn quad_normalize_char2_keeps_cross_terms() {
        let f = gf(2, 1);
        let mut m = Mat::zeros(2, 2);
        m[(0, 1)] = f.one(); // n(x) = x0*x1, the hyperbolic plane
        let u = quad_normalize(&f, &m);
        assert_eq!(u[(0, 1)], f.one());
        let x = [f.one(), f.one()];
        assert_eq!(quad_eval(&f, &u, &x), f.one());
        // polar form is alternating but nondegenerate
        let b = polar_matrix(&f, &u);
        assert!(!b.det(&f).is_zero());
        assert!(bilinear_eval(&f, &b, &x, &x).is_zero());
    }
}
