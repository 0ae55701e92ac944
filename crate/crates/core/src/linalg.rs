//! Row reduction and the subspace computations built on it.
//!
//! Everything is exact. Subspaces are handed around as matrices whose
//! columns form a basis; the canonical representative of a subspace is the
//! reduced row echelon form of the transposed basis.

use alloc::vec::Vec;

use crate::field::Field;
use crate::matrix::Matrix;

/// Result of Gauss-Jordan elimination: `transform * input == rref`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<F: Field> {
    pub rref: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Invertible `rows x rows` matrix recording the row operations.
    pub transform: Matrix<F>,
}

impl<F: Field> Echelon<F> {
    /// Apply the recorded row operations to another matrix with the same
    /// number of rows.
    pub fn replay(&self, other: &Matrix<F>) -> Matrix<F> {
        &self.transform * other
    }
}

/// Reduced row echelon form with pivots chosen left to right.
pub fn reduce<F: Field>(m: &Matrix<F>) -> Echelon<F> {
    let f = m.field().clone();
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut t = Matrix::identity(&f, rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        swap_rows(&mut a, r, p);
        swap_rows(&mut t, r, p);
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        scale_row(&mut a, r, &inv);
        scale_row(&mut t, r, &inv);
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            axpy_row(&mut a, i, r, &factor);
            axpy_row(&mut t, i, r, &factor);
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rref: a,
        rank: r,
        pivots,
        transform: t,
    }
}

fn swap_rows<F: Field>(m: &mut Matrix<F>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn scale_row<F: Field>(m: &mut Matrix<F>, r: usize, s: &F::Elem) {
    let f = m.field().clone();
    for j in 0..m.cols() {
        let v = f.mul(s, m.get(r, j));
        m.set(r, j, v);
    }
}

/// row[i] -= factor * row[src]
fn axpy_row<F: Field>(m: &mut Matrix<F>, i: usize, src: usize, factor: &F::Elem) {
    let f = m.field().clone();
    for j in 0..m.cols() {
        let v = f.sub(m.get(i, j), &f.mul(factor, m.get(src, j)));
        m.set(i, j, v);
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    reduce(m).rank
}

/// Kernel, image and cokernel of a linear map `k^cols -> k^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspaces<F: Field> {
    /// `cols x (cols - rank)`, columns a basis of the kernel.
    pub kernel: Matrix<F>,
    /// `rows x rank`, the pivot columns of the input.
    pub image: Matrix<F>,
    /// `(rows - rank) x rows`, surjective with kernel exactly the image.
    pub cokernel: Matrix<F>,
    /// `rows x (rows - rank)` with `cokernel * section == id`.
    pub section: Matrix<F>,
}

pub fn subspaces<F: Field>(m: &Matrix<F>) -> Subspaces<F> {
    let f = m.field().clone();
    let ech = reduce(m);
    let kernel = kernel_from_rref(&ech, m.cols());
    let image = m.select_columns(&ech.pivots);
    let section = complement(&image, m.rows());
    let basis = Matrix::hstack(&f, m.rows(), &[&image, &section]);
    let inv = inverse(&basis).expect("image plus complement is a basis");
    let cokernel = inv.submatrix(image.cols(), m.rows(), 0, m.rows());
    Subspaces {
        kernel,
        image,
        cokernel,
        section,
    }
}

fn kernel_from_rref<F: Field>(ech: &Echelon<F>, cols: usize) -> Matrix<F> {
    let f = ech.rref.field().clone();
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut k = Matrix::zeros(&f, cols, free.len());
    for (jj, &j) in free.iter().enumerate() {
        k.set(j, jj, f.one());
        for (r, &p) in ech.pivots.iter().enumerate() {
            k.set(p, jj, f.neg(ech.rref.get(r, j)));
        }
    }
    k
}

/// Basis of the kernel, as columns.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    kernel_from_rref(&reduce(m), m.cols())
}

/// Canonical basis of the column span: the nonzero rows of the rref of the
/// transpose, returned as columns.
pub fn canonical_span<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let ech = reduce(&m.transpose());
    ech.rref.submatrix(0, ech.rank, 0, m.rows()).transpose()
}

/// Standard basis vectors completing the column span of `sub` to a basis of
/// `k^ambient`.
pub fn complement<F: Field>(sub: &Matrix<F>, ambient: usize) -> Matrix<F> {
    assert_eq!(sub.rows(), ambient, "subspace generators live in the ambient space");
    let f = sub.field().clone();
    let ech = reduce(&sub.transpose());
    let free: Vec<usize> = (0..ambient).filter(|c| !ech.pivots.contains(c)).collect();
    let mut c = Matrix::zeros(&f, ambient, free.len());
    for (jj, &j) in free.iter().enumerate() {
        c.set(j, jj, f.one());
    }
    c
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    if !m.is_square() {
        return None;
    }
    let ech = reduce(m);
    (ech.rank == m.rows()).then_some(ech.transform)
}

/// Some `X` with `a * X == b`, if one exists.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(a.rows(), b.rows());
    let f = a.field().clone();
    let aug = Matrix::hstack(&f, a.rows(), &[a, b]);
    let ech = reduce(&aug);
    if ech.pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = Matrix::zeros(&f, a.cols(), b.cols());
    for (r, &p) in ech.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, ech.rref.get(r, a.cols() + j).clone());
        }
    }
    Some(x)
}

/// Coordinates of the columns of `vectors` in the basis given by the columns
/// of `basis` (which must have full column rank).
pub fn coordinates<F: Field>(basis: &Matrix<F>, vectors: &Matrix<F>) -> Option<Matrix<F>> {
    solve(basis, vectors)
}

pub fn in_span<F: Field>(span: &Matrix<F>, vectors: &Matrix<F>) -> bool {
    solve(span, vectors).is_some()
}

/// Columns of `m` extended by columns of `candidates` (in order) until they
/// span the same space as both together; returns the indices of the added
/// candidate columns.
pub fn extend_basis<F: Field>(m: &Matrix<F>, candidates: &Matrix<F>) -> Vec<usize> {
    let f = m.field().clone();
    let all = Matrix::hstack(&f, m.rows(), &[m, candidates]);
    reduce(&all)
        .pivots
        .into_iter()
        .filter(|&p| p >= m.cols())
        .map(|p| p - m.cols())
        .collect()
}

/// A fixed subspace `U` of `k^n` used to reduce vectors to canonical coset
/// representatives modulo `U`.
#[derive(Clone, Debug)]
pub struct CosetReducer<F: Field> {
    ambient: usize,
    /// rref of the spanning set, nonzero rows only.
    rows: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> CosetReducer<F> {
    /// `generators` is `ambient x g`, its columns span `U`.
    pub fn new(generators: &Matrix<F>) -> Self {
        let ech = reduce(&generators.transpose());
        CosetReducer {
            ambient: generators.rows(),
            rows: ech.rref.submatrix(0, ech.rank, 0, generators.rows()),
            pivots: ech.pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim_subspace(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim_quotient(&self) -> usize {
        self.ambient - self.pivots.len()
    }

    /// Positions not occupied by pivots; coordinates on the quotient.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// The unique representative of `v + U` vanishing at every pivot.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ambient);
        let f = self.rows.field().clone();
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.rows.row(r)) {
                *o = f.sub(o, &f.mul(&c, x));
            }
        }
        out
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.rows.field().clone();
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    /// Quotient coordinates of `v + U`.
    pub fn coordinates(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let r = self.reduce(v);
        self.free_positions().into_iter().map(|i| r[i].clone()).collect()
    }

    /// Canonical representative with the given quotient coordinates.
    pub fn lift(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.rows.field().clone();
        let free = self.free_positions();
        assert_eq!(coords.len(), free.len());
        let mut v = alloc::vec![f.zero(); self.ambient];
        for (c, &i) in coords.iter().zip(&free) {
            v[i] = c.clone();
        }
        v
    }
}
