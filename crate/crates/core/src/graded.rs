//! Elements of the graded Hom object `Hom^n(V, W) = ∏_i Hom(V^i, W^{n+i})`.
//!
//! Components are stored explicitly on a window `[lo, hi]` that covers the
//! windows of `V` and `W[n]`. Outside it both sequences are tail-stable and the
//! components are required to repeat with period two, indexed by the parity
//! of the degree.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::seq::Seq;

pub(crate) fn parity(i: i64) -> usize {
    i.rem_euclid(2) as usize
}

#[derive(Clone)]
pub struct GradedHom<F: Field> {
    src: Seq<F>,
    dst: Seq<F>,
    degree: i64,
    lo: i64,
    comps: Vec<Matrix<F>>,
    /// Components below the window, by parity of the degree.
    left: [Matrix<F>; 2],
    /// Components above the window, by parity of the degree.
    right: [Matrix<F>; 2],
}

impl<F: Field> GradedHom<F> {
    /// The smallest admissible window for an element of `Hom^n(V, W)`.
    pub fn frame(src: &Seq<F>, dst: &Seq<F>, degree: i64) -> (i64, i64) {
        (
            src.lo().min(dst.lo() - degree),
            src.hi().max(dst.hi() - degree),
        )
    }

    /// Checked constructor. `comps[k]` is `f^{lo+k}`; `left`/`right` give the
    /// tail components for even and odd degrees.
    pub fn new(
        src: &Seq<F>,
        dst: &Seq<F>,
        degree: i64,
        lo: i64,
        comps: Vec<Matrix<F>>,
        left: [Matrix<F>; 2],
        right: [Matrix<F>; 2],
    ) -> Result<Self> {
        let (a, b) = Self::frame(src, dst, degree);
        let hi = lo + comps.len() as i64 - 1;
        if comps.is_empty() || lo > a || hi < b {
            return Err(Error::InvalidMorphism(format!(
                "component window [{lo}, {hi}] does not cover [{a}, {b}]"
            )));
        }
        for (k, m) in comps.iter().enumerate() {
            let i = lo + k as i64;
            let want = (dst.dim(degree + i), src.dim(i));
            if m.shape() != want {
                return Err(Error::InvalidMorphism(format!(
                    "component {i} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        let lw = (dst.left().dim(), src.left().dim());
        let rw = (dst.right().dim(), src.right().dim());
        for (side, tail, want) in [("left", &left, lw), ("right", &right, rw)] {
            for m in tail {
                if m.shape() != want {
                    return Err(Error::InvalidMorphism(format!(
                        "{side} tail component has shape {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        want.0,
                        want.1
                    )));
                }
            }
        }
        Ok(GradedHom {
            src: src.clone(),
            dst: dst.clone(),
            degree,
            lo,
            comps,
            left,
            right,
        })
    }

    /// Build from a rule valid in every degree; the rule must already be
    /// 2-periodic outside `[lo, hi]` and the frame.
    pub fn from_fn(
        src: &Seq<F>,
        dst: &Seq<F>,
        degree: i64,
        lo: i64,
        hi: i64,
        mut f: impl FnMut(i64) -> Matrix<F>,
    ) -> Self {
        let (a, b) = Self::frame(src, dst, degree);
        let (a, b) = (a.min(lo), b.max(hi));
        let comps: Vec<_> = (a..=b).map(&mut f).collect();
        let mut left = [f(a - 2), f(a - 1)];
        if parity(a - 2) == 1 {
            left.swap(0, 1);
        }
        let mut right = [f(b + 1), f(b + 2)];
        if parity(b + 1) == 1 {
            right.swap(0, 1);
        }
        GradedHom::new(src, dst, degree, a, comps, left, right)
            .expect("components produced by the rule have consistent shapes")
    }

    pub fn zero(src: &Seq<F>, dst: &Seq<F>, degree: i64) -> Self {
        let field = src.field().clone();
        let (a, b) = Self::frame(src, dst, degree);
        Self::from_fn(src, dst, degree, a, b, |i| {
            Matrix::zeros(&field, dst.dim(degree + i), src.dim(i))
        })
    }

    pub fn identity(v: &Seq<F>) -> Self {
        let field = v.field().clone();
        Self::from_fn(v, v, 0, v.lo(), v.hi(), |i| Matrix::identity(&field, v.dim(i)))
    }

    pub fn src(&self) -> &Seq<F> {
        &self.src
    }

    pub fn dst(&self) -> &Seq<F> {
        &self.dst
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn field(&self) -> &F {
        self.src.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn left_tail(&self) -> &[Matrix<F>; 2] {
        &self.left
    }

    pub fn right_tail(&self) -> &[Matrix<F>; 2] {
        &self.right
    }

    /// `f^i` for any degree.
    pub fn component(&self, i: i64) -> Matrix<F> {
        if i < self.lo {
            self.left[parity(i)].clone()
        } else if i > self.hi() {
            self.right[parity(i)].clone()
        } else {
            self.comps[(i - self.lo) as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().chain(&self.left).chain(&self.right).all(Matrix::is_zero)
    }

    /// Components outside the window are all constant (not just 2-periodic).
    pub fn has_constant_tails(&self) -> bool {
        self.left[0] == self.left[1] && self.right[0] == self.right[1]
    }

    /// `d^n(f)^i = d_W^{n+i} f^i - (-1)^n f^{i+1} d_V^i`.
    pub fn differential(&self) -> Self {
        let n = self.degree;
        let field = self.field().clone();
        let sign = field.sign(n.rem_euclid(2) == 1);
        Self::from_fn(&self.src, &self.dst, n + 1, self.lo - 1, self.hi() + 1, |i| {
            let a = &self.dst.map(n + i) * &self.component(i);
            let b = &self.component(i + 1) * &self.src.map(i);
            &a - &b.scale(&sign)
        })
    }

    /// `(g ∘ f)^i = g^{m+i} f^i` with `m` the degree of `self`.
    pub fn then(&self, g: &Self) -> Result<Self> {
        if g.src != self.dst {
            return Err(Error::ShapeMismatch(
                "composite of graded maps with mismatched middle object".into(),
            ));
        }
        let m = self.degree;
        let lo = self.lo.min(g.lo - m);
        let hi = self.hi().max(g.hi() - m);
        Ok(Self::from_fn(&self.src, &g.dst, m + g.degree, lo, hi, |i| {
            &g.component(m + i) * &self.component(i)
        }))
    }

    /// `g ∘ f` in the usual order.
    pub fn compose(g: &Self, f: &Self) -> Result<Self> {
        f.then(g)
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        if self.src != other.src || self.dst != other.dst || self.degree != other.degree {
            return Err(Error::ShapeMismatch("graded maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Ok(self.zip(other, |x, y| x + y))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Ok(self.zip(other, |x, y| x - y))
    }

    fn zip(&self, other: &Self, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        Self::from_fn(&self.src, &self.dst, self.degree, lo, hi, |i| {
            op(&self.component(i), &other.component(i))
        })
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map_components(|m| m.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.map_components(|m| -m)
    }

    fn map_components(&self, op: impl Fn(&Matrix<F>) -> Matrix<F>) -> Self {
        GradedHom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            degree: self.degree,
            lo: self.lo,
            comps: self.comps.iter().map(&op).collect(),
            left: [op(&self.left[0]), op(&self.left[1])],
            right: [op(&self.right[0]), op(&self.right[1])],
        }
    }

    /// Same components on `[lo, hi]`, zero elsewhere.
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        let field = self.field().clone();
        let (src, dst, n) = (&self.src, &self.dst, self.degree);
        Self::from_fn(src, dst, n, lo, hi, |i| {
            if (lo..=hi).contains(&i) {
                self.component(i)
            } else {
                Matrix::zeros(&field, dst.dim(n + i), src.dim(i))
            }
        })
    }

    /// Concatenated row-major entries of `f^lo, ..., f^hi`.
    pub fn vectorize(&self, lo: i64, hi: i64) -> Vec<F::Elem> {
        (lo..=hi).flat_map(|i| self.component(i).vectorize()).collect()
    }

    /// Inverse of [`vectorize`](Self::vectorize), zero outside `[lo, hi]`.
    pub fn from_vectorized(
        src: &Seq<F>,
        dst: &Seq<F>,
        degree: i64,
        lo: i64,
        hi: i64,
        entries: &[F::Elem],
    ) -> Self {
        let field = src.field().clone();
        let mut offsets = Vec::new();
        let mut at = 0;
        for i in lo..=hi {
            offsets.push(at);
            at += dst.dim(degree + i) * src.dim(i);
        }
        assert_eq!(at, entries.len(), "entry count matches the window");
        Self::from_fn(src, dst, degree, lo, hi, |i| {
            let (r, c) = (dst.dim(degree + i), src.dim(i));
            if (lo..=hi).contains(&i) {
                let o = offsets[(i - lo) as usize];
                Matrix::from_vectorized(&field, r, c, &entries[o..o + r * c])
            } else {
                Matrix::zeros(&field, r, c)
            }
        })
    }
}

/// Number of scalar coordinates of `Hom^n(V, W)` restricted to `[lo, hi]`.
pub fn window_size<F: Field>(src: &Seq<F>, dst: &Seq<F>, degree: i64, lo: i64, hi: i64) -> usize {
    (lo..=hi).map(|i| dst.dim(degree + i) * src.dim(i)).sum()
}

impl<F: Field> PartialEq for GradedHom<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.src != other.src || self.dst != other.dst || self.degree != other.degree {
            return false;
        }
        // Outside both windows both sides are 2-periodic.
        let lo = self.lo.min(other.lo) - 2;
        let hi = self.hi().max(other.hi()) + 2;
        (lo..=hi).all(|i| self.component(i) == other.component(i))
    }
}

impl<F: Field> Eq for GradedHom<F> {}

impl<F: Field> fmt::Debug for GradedHom<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedHom {{ degree: {}, window: [{}, {}], comps: [", self.degree, self.lo, self.hi())?;
        for (k, m) in self.comps.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(
            f,
            "], left: [{}, {}], right: [{}, {}] }}",
            self.left[0], self.left[1], self.right[0], self.right[1]
        )
    }
}
