//! `Hom_S(V, W) = ker d^0` and `Hom^ε(V, W) = cok d^{-1}` of the graded Hom
//! object, computed on a finite frame.
//!
//! Let `[A, B]` be the common window of `V` and `W` widened by one degree on
//! each side. Every degree-0 cycle is constant outside `[A, B]`, so `Hom_S` is
//! the kernel of the commutation equations on `[A, B]`. Every degree-0 map
//! vanishing on `[A, B]` is a boundary (solve `d^{-1} h = f` outward from the
//! frame), so `Hom^ε` is the quotient of the frame components by the frame
//! part of `im d^{-1}`. Both answers are recomputed on frames widened by one
//! and two degrees as a certificate.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedHom;
use crate::linalg::{self, CosetReducer};
use crate::matrix::Matrix;
use crate::seq::Seq;

/// Offsets of the blocks `Hom(V^i, W^{n+i})`, `i` in `[lo, hi]`, inside the
/// concatenated row-major coordinate vector.
fn block_offsets<F: Field>(v: &Seq<F>, w: &Seq<F>, n: i64, lo: i64, hi: i64) -> (Vec<usize>, usize) {
    let mut offs = Vec::new();
    let mut at = 0;
    for i in lo..=hi {
        offs.push(at);
        at += w.dim(n + i) * v.dim(i);
    }
    (offs, at)
}

/// Matrix of `d^n`, from coordinates of `Hom^n` on `[lo, hi + 1]` to
/// coordinates of `Hom^{n+1}` on `[lo, hi]`.
pub fn differential_matrix<F: Field>(v: &Seq<F>, w: &Seq<F>, n: i64, lo: i64, hi: i64) -> Matrix<F> {
    let field = v.field().clone();
    let (src_off, src_len) = block_offsets(v, w, n, lo, hi + 1);
    let (dst_off, dst_len) = block_offsets(v, w, n + 1, lo, hi);
    let mut m = Matrix::zeros(&field, dst_len, src_len);
    let s = field.sign(n.rem_euclid(2) == 1);
    for i in lo..=hi + 1 {
        let rows = w.dim(n + i);
        let cols = v.dim(i);
        let so = src_off[(i - lo) as usize];
        // (d f)^i gets d_W^{n+i} f^i.
        if i <= hi {
            let dw = w.map(n + i);
            let to = dst_off[(i - lo) as usize];
            let tcols = cols;
            for r in 0..rows {
                for c in 0..cols {
                    for r2 in 0..dw.rows() {
                        let x = dw.get(r2, r);
                        if !field.is_zero(x) {
                            let t = to + r2 * tcols + c;
                            let cur = m.get(t, so + r * cols + c).clone();
                            m.set(t, so + r * cols + c, field.add(&cur, x));
                        }
                    }
                }
            }
        }
        // (d f)^{i-1} gets -(-1)^n f^i d_V^{i-1}.
        if i > lo {
            let j = i - 1;
            let dv = v.map(j);
            let to = dst_off[(j - lo) as usize];
            let tcols = v.dim(j);
            for r in 0..rows {
                for c in 0..cols {
                    for c2 in 0..dv.cols() {
                        let x = dv.get(c, c2);
                        if !field.is_zero(x) {
                            let t = to + r * tcols + c2;
                            let cur = m.get(t, so + r * cols + c).clone();
                            m.set(t, so + r * cols + c, field.sub(&cur, &field.mul(&s, x)));
                        }
                    }
                }
            }
        }
    }
    m
}

/// Smallest frame on which `Hom_S` and `Hom^ε` are computed exactly.
pub fn base_frame<F: Field>(v: &Seq<F>, w: &Seq<F>) -> (i64, i64) {
    (v.lo().min(w.lo()) - 1, v.hi().max(w.hi()) + 1)
}

/// Default widening depth: three times the frame span plus four.
pub fn default_depth<F: Field>(v: &Seq<F>, w: &Seq<F>) -> usize {
    let (a, b) = base_frame(v, w);
    3 * (b - a) as usize + 4
}

/// Degree-0 cycles, as a basis of graded maps with constant tails.
fn cycles_on<F: Field>(v: &Seq<F>, w: &Seq<F>, lo: i64, hi: i64) -> Vec<GradedHom<F>> {
    let eqs = differential_matrix(v, w, 0, lo, hi - 1);
    let ker = linalg::kernel(&eqs);
    (0..ker.cols())
        .map(|k| {
            let f = GradedHom::from_vectorized(v, w, 0, lo, hi, &ker.col(k));
            let (first, last) = (f.component(lo), f.component(hi));
            GradedHom::from_fn(v, w, 0, lo, hi, |i| {
                if i < lo {
                    first.clone()
                } else if i > hi {
                    last.clone()
                } else {
                    f.component(i)
                }
            })
        })
        .collect()
}

/// `Hom^ε(V, W)` with canonical coset representatives on the base frame.
#[derive(Clone, Debug)]
pub struct EpsSpace<F: Field> {
    src: Seq<F>,
    dst: Seq<F>,
    lo: i64,
    hi: i64,
    reducer: CosetReducer<F>,
}

impl<F: Field> EpsSpace<F> {
    pub fn new(v: &Seq<F>, w: &Seq<F>) -> Self {
        let (lo, hi) = base_frame(v, w);
        Self::on_frame(v, w, lo, hi)
    }

    fn on_frame(v: &Seq<F>, w: &Seq<F>, lo: i64, hi: i64) -> Self {
        let bounds = differential_matrix(v, w, -1, lo, hi);
        EpsSpace {
            src: v.clone(),
            dst: w.clone(),
            lo,
            hi,
            reducer: CosetReducer::new(&bounds),
        }
    }

    pub fn dim(&self) -> usize {
        self.reducer.dim_quotient()
    }

    pub fn frame(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn check(&self, f: &GradedHom<F>) -> Result<()> {
        if f.degree() != 0 || f.src() != &self.src || f.dst() != &self.dst {
            return Err(Error::ShapeMismatch("type-ε part has the wrong source, target or degree".into()));
        }
        Ok(())
    }

    /// Coordinates of the class `[f]`.
    pub fn coordinates(&self, f: &GradedHom<F>) -> Result<Vec<F::Elem>> {
        self.check(f)?;
        Ok(self.reducer.coordinates(&f.vectorize(self.lo, self.hi)))
    }

    /// The canonical representative of `[f]`: supported on the frame and
    /// reduced against the frame part of `im d^{-1}`.
    pub fn canonical(&self, f: &GradedHom<F>) -> Result<GradedHom<F>> {
        self.check(f)?;
        let r = self.reducer.reduce(&f.vectorize(self.lo, self.hi));
        Ok(GradedHom::from_vectorized(&self.src, &self.dst, 0, self.lo, self.hi, &r))
    }

    pub fn is_zero_class(&self, f: &GradedHom<F>) -> Result<bool> {
        self.check(f)?;
        Ok(self.reducer.contains(&f.vectorize(self.lo, self.hi)))
    }

    pub fn from_coordinates(&self, coords: &[F::Elem]) -> GradedHom<F> {
        let v = self.reducer.lift(coords);
        GradedHom::from_vectorized(&self.src, &self.dst, 0, self.lo, self.hi, &v)
    }

    pub fn basis(&self) -> Vec<GradedHom<F>> {
        let field = self.src.field().clone();
        (0..self.dim())
            .map(|k| {
                let mut e = alloc::vec![field.zero(); self.dim()];
                e[k] = field.one();
                self.from_coordinates(&e)
            })
            .collect()
    }
}

/// Dimensions found on successively wider frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    /// Frame margins beyond the base frame that were evaluated.
    pub margins: Vec<usize>,
    pub hom_s_dims: Vec<usize>,
    pub hom_eps_dims: Vec<usize>,
    pub depth: usize,
}

impl Stabilization {
    pub fn is_stable(&self) -> bool {
        let all_eq = |d: &[usize]| d.windows(2).all(|p| p[0] == p[1]);
        self.margins.len() >= 3 && all_eq(&self.hom_s_dims) && all_eq(&self.hom_eps_dims)
    }
}

#[derive(Clone, Debug)]
pub struct HomData<F: Field> {
    pub hom_s: Vec<GradedHom<F>>,
    pub eps: EpsSpace<F>,
    pub certificate: Stabilization,
}

impl<F: Field> HomData<F> {
    pub fn dim_hom_s(&self) -> usize {
        self.hom_s.len()
    }

    pub fn dim_hom_eps(&self) -> usize {
        self.eps.dim()
    }

    pub fn hom_eps_basis(&self) -> Vec<GradedHom<F>> {
        self.eps.basis()
    }
}

/// Bases of `Hom_S(V, W)` and `Hom^ε(V, W)`; `depth` bounds the frame
/// widening used for the certificate (default: [`default_depth`]).
pub fn hom_complex<F: Field>(v: &Seq<F>, w: &Seq<F>, depth: Option<usize>) -> Result<HomData<F>> {
    let depth = depth.unwrap_or_else(|| default_depth(v, w));
    let (lo, hi) = base_frame(v, w);
    let mut cert = Stabilization {
        margins: Vec::new(),
        hom_s_dims: Vec::new(),
        hom_eps_dims: Vec::new(),
        depth,
    };
    let mut base = None;
    for m in 0..=depth {
        let (a, b) = (lo - m as i64, hi + m as i64);
        let s = cycles_on(v, w, a, b);
        let e = EpsSpace::on_frame(v, w, a, b);
        cert.margins.push(m);
        cert.hom_s_dims.push(s.len());
        cert.hom_eps_dims.push(e.dim());
        if m == 0 {
            base = Some((s, e));
        }
        let n = cert.margins.len();
        if n >= 3 {
            let tail = |d: &[usize]| d[n - 3] == d[n - 2] && d[n - 2] == d[n - 1];
            if tail(&cert.hom_s_dims) && tail(&cert.hom_eps_dims) {
                let (hom_s, eps) = base.expect("margin 0 evaluated first");
                return Ok(HomData {
                    hom_s,
                    eps,
                    certificate: cert,
                });
            }
        }
    }
    Err(Error::StabilizationDepthExceeded { depth })
}
