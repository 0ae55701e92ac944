//! Complexes of free `k[ε]`-modules written as `d = d_1 + ε d_ε`, their
//! minimal models, and the dictionary with sequence objects.
//!
//! A map of free modules `k[ε]^r -> k[ε]^s` is a pair `(f_1, f_ε)` of
//! `s x r` matrices; composition is `(g_1 f_1, g_1 f_ε + g_ε f_1)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedHom;
use crate::hat::HatMorphism;
use crate::linalg;
use crate::matrix::Matrix;
use crate::seq::{Presentation, Seq, Tail, TailKind};

/// A `k[ε]`-linear map between free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsMat<F: Field> {
    pub one: Matrix<F>,
    pub eps: Matrix<F>,
}

impl<F: Field> EpsMat<F> {
    pub fn new(one: Matrix<F>, eps: Matrix<F>) -> Result<Self> {
        if one.shape() != eps.shape() {
            return Err(Error::ShapeMismatch(format!(
                "parts of shapes {:?} and {:?}",
                one.shape(),
                eps.shape()
            )));
        }
        Ok(EpsMat { one, eps })
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        EpsMat {
            one: Matrix::zeros(field, rows, cols),
            eps: Matrix::zeros(field, rows, cols),
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        EpsMat {
            one: Matrix::identity(field, n),
            eps: Matrix::zeros(field, n, n),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.one.shape()
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.eps.is_zero()
    }

    /// `self ∘ rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        EpsMat {
            one: &self.one * &rhs.one,
            eps: &(&self.one * &rhs.eps) + &(&self.eps * &rhs.one),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        EpsMat {
            one: &self.one + &rhs.one,
            eps: &self.eps + &rhs.eps,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        EpsMat {
            one: &self.one - &rhs.one,
            eps: &self.eps - &rhs.eps,
        }
    }

    /// Matrix over `k` in the basis `(1-part, ε-part)` of each free module.
    pub fn to_k_matrix(&self) -> Matrix<F> {
        let f = self.one.field().clone();
        let (r, c) = self.shape();
        let mut m = Matrix::zeros(&f, 2 * r, 2 * c);
        m.set_block(0, 0, &self.one);
        m.set_block(r, 0, &self.eps);
        m.set_block(r, c, &self.one);
        m
    }
}

/// A complex of free `k[ε]`-modules. Outside `[lo, hi]` it is either zero or
/// the stable pattern `d_1 = 0`, `d_ε^i = (-1)^i id` (carried by the tails,
/// whose links give `d_ε` into and out of the window).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsComplex<F: Field> {
    field: F,
    lo: i64,
    ranks: Vec<usize>,
    d1: Vec<Matrix<F>>,
    deps: Vec<Matrix<F>>,
    left: Tail<F>,
    right: Tail<F>,
}

impl<F: Field> EpsComplex<F> {
    pub fn new(
        field: &F,
        lo: i64,
        ranks: Vec<usize>,
        d1: Vec<Matrix<F>>,
        deps: Vec<Matrix<F>>,
        left: Tail<F>,
        right: Tail<F>,
    ) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidSeq("complex needs at least one degree".into()));
        }
        if d1.len() + 1 != ranks.len() || deps.len() + 1 != ranks.len() {
            return Err(Error::InvalidSeq(format!(
                "{} degrees need {} differentials of each kind",
                ranks.len(),
                ranks.len() - 1
            )));
        }
        for k in 0..d1.len() {
            let want = (ranks[k + 1], ranks[k]);
            for (name, m) in [("d1", &d1[k]), ("deps", &deps[k])] {
                if m.shape() != want {
                    return Err(Error::InvalidSeq(format!(
                        "{name}^{} has shape {}x{}, expected {}x{}",
                        lo + k as i64,
                        m.rows(),
                        m.cols(),
                        want.0,
                        want.1
                    )));
                }
            }
        }
        // Reuse the shape checks of sequence tails.
        Seq::new(field, lo, ranks.clone(), deps.clone(), left.clone(), right.clone())?;
        Ok(EpsComplex {
            field: field.clone(),
            lo,
            ranks,
            d1,
            deps,
            left,
            right,
        })
    }

    /// A complex with zero tails.
    pub fn finite(field: &F, lo: i64, ranks: Vec<usize>, d1: Vec<Matrix<F>>, deps: Vec<Matrix<F>>) -> Result<Self> {
        Self::new(field, lo, ranks, d1, deps, Tail::Zero, Tail::Zero)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn window_ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn left(&self) -> &Tail<F> {
        &self.left
    }

    pub fn right(&self) -> &Tail<F> {
        &self.right
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo {
            self.left.dim()
        } else if i > self.hi() {
            self.right.dim()
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn d1(&self, i: i64) -> Matrix<F> {
        if i >= self.lo && i < self.hi() {
            self.d1[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(&self.field, self.rank(i + 1), self.rank(i))
        }
    }

    pub fn deps(&self, i: i64) -> Matrix<F> {
        if i >= self.lo && i < self.hi() {
            self.deps[(i - self.lo) as usize].clone()
        } else {
            self.eps_seq().map(i)
        }
    }

    pub fn differential(&self, i: i64) -> EpsMat<F> {
        EpsMat {
            one: self.d1(i),
            eps: self.deps(i),
        }
    }

    fn eps_seq(&self) -> Seq<F> {
        Seq::new(
            &self.field,
            self.lo,
            self.ranks.clone(),
            self.deps.clone(),
            self.left.clone(),
            self.right.clone(),
        )
        .expect("shapes checked at construction")
    }

    pub fn is_minimal(&self) -> bool {
        self.d1.iter().all(Matrix::is_zero)
    }

    /// Both components of `d^2 = 0`; reports the first degree where one fails.
    pub fn validate(&self) -> Result<()> {
        for i in self.lo - 2..=self.hi() + 1 {
            if !(&self.d1(i + 1) * &self.d1(i)).is_zero() {
                return Err(Error::ValidationFailed {
                    degree: i,
                    reason: "d1^{i+1} d1^i != 0".into(),
                });
            }
            let mixed = &(&self.d1(i + 1) * &self.deps(i)) + &(&self.deps(i + 1) * &self.d1(i));
            if !mixed.is_zero() {
                return Err(Error::ValidationFailed {
                    degree: i,
                    reason: "d1^{i+1} deps^i + deps^{i+1} d1^i != 0".into(),
                });
            }
        }
        Ok(())
    }

    /// The sequence with `V^i = k^{rank}` and `d^i = d_ε^i`; needs `d_1 = 0`.
    pub fn to_seq(&self) -> Result<Seq<F>> {
        if !self.is_minimal() {
            return Err(Error::InvalidSeq("complex is not minimal".into()));
        }
        Ok(self.eps_seq())
    }

    /// The minimal complex with differential `ε d_V`.
    pub fn from_seq(v: &Seq<F>) -> Self {
        let f = v.field().clone();
        let d1 = v
            .window_maps()
            .iter()
            .map(|m| Matrix::zeros(&f, m.rows(), m.cols()))
            .collect();
        EpsComplex {
            field: f,
            lo: v.lo(),
            ranks: v.window_dims().to_vec(),
            d1,
            deps: v.window_maps().to_vec(),
            left: v.left().clone(),
            right: v.right().clone(),
        }
    }

    /// Cohomology of the underlying complex of vector spaces, `(degree, dim)`
    /// for nonzero degrees.
    pub fn cohomology(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for i in self.lo - 1..=self.hi() + 1 {
            let d = self.differential(i).to_k_matrix();
            let prev = self.differential(i - 1).to_k_matrix();
            let dim = d.cols() - linalg::rank(&d) - linalg::rank(&prev);
            if dim > 0 {
                out.push((i, dim));
            }
        }
        out
    }

    /// Minimal model with an explicit homotopy equivalence.
    pub fn minimize(&self) -> Result<Minimization<F>> {
        self.validate()?;
        minimize(self)
    }
}

/// `H^i = ker d^i ⊕ cok d^{i-1}` of a sequence viewed as a minimal complex.
pub fn cohomology<F: Field>(v: &Seq<F>) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for i in v.lo() - 1..=v.hi() + 1 {
        let d = v.map(i);
        let prev = v.map(i - 1);
        let dim = (d.cols() - linalg::rank(&d)) + (prev.rows() - linalg::rank(&prev));
        if dim > 0 {
            out.push((i, dim));
        }
    }
    out
}

/// Degreewise `k[ε]`-linear maps `M^i -> N^{degree+i}`, explicit on
/// `[lo, hi]` and constant outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsMap<F: Field> {
    pub degree: i64,
    pub lo: i64,
    pub comps: Vec<EpsMat<F>>,
    pub left: EpsMat<F>,
    pub right: EpsMat<F>,
}

impl<F: Field> EpsMap<F> {
    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn component(&self, i: i64) -> EpsMat<F> {
        if i < self.lo {
            self.left.clone()
        } else if i > self.hi() {
            self.right.clone()
        } else {
            self.comps[(i - self.lo) as usize].clone()
        }
    }

    pub fn identity(m: &EpsComplex<F>) -> Self {
        let f = m.field();
        let (lo, hi) = (m.lo() - 1, m.hi() + 1);
        EpsMap {
            degree: 0,
            lo,
            comps: (lo..=hi).map(|i| EpsMat::identity(f, m.rank(i))).collect(),
            left: EpsMat::identity(f, m.left().dim()),
            right: EpsMat::identity(f, m.right().dim()),
        }
    }

    /// `(g ∘ f)^i = g^{m+i} f^i`, `m` the degree of `f`.
    pub fn compose(g: &Self, f: &Self) -> Self {
        let m = f.degree;
        let lo = f.lo.min(g.lo - m);
        let hi = f.hi().max(g.hi() - m);
        EpsMap {
            degree: m + g.degree,
            lo,
            comps: (lo..=hi).map(|i| g.component(m + i).mul(&f.component(i))).collect(),
            left: g.left.mul(&f.left),
            right: g.right.mul(&f.right),
        }
    }

    /// `f_1 + ε f_ε` between minimal complexes as the morphism `f_1 + [f_ε]`
    /// of their sequences.
    pub fn to_hat(&self, src: &EpsComplex<F>, dst: &EpsComplex<F>) -> Result<HatMorphism<F>> {
        if self.degree != 0 {
            return Err(Error::InvalidMorphism("only degree-0 maps have a sequence image".into()));
        }
        let (v, w) = (src.to_seq()?, dst.to_seq()?);
        let (lo, hi) = self.range_with(src);
        let part = |one: bool| {
            GradedHom::from_fn(&v, &w, 0, lo, hi, |i| {
                let c = self.component(i);
                if one {
                    c.one
                } else {
                    c.eps
                }
            })
        };
        HatMorphism::new(part(true), part(false))
    }

    /// Inverse of [`to_hat`](Self::to_hat), using the canonical representative
    /// of the type-ε class.
    pub fn from_hat(h: &HatMorphism<F>) -> Self {
        let (lo, hi) = (h.one().lo().min(h.eps().lo()), h.one().hi().max(h.eps().hi()));
        let at = |i: i64| EpsMat {
            one: h.one().component(i),
            eps: h.eps().component(i),
        };
        EpsMap {
            degree: 0,
            lo,
            comps: (lo..=hi).map(at).collect(),
            left: at(lo - 1),
            right: at(hi + 1),
        }
    }

    fn range_with(&self, m: &EpsComplex<F>) -> (i64, i64) {
        (self.lo.min(m.lo()) - 2, self.hi().max(m.hi()) + 2)
    }

    /// `d_N f = f d_M` for a degree-0 map.
    pub fn is_chain_map(&self, src: &EpsComplex<F>, dst: &EpsComplex<F>) -> bool {
        let (lo, hi) = self.range_with(src);
        let (lo, hi) = (lo.min(dst.lo() - 2), hi.max(dst.hi() + 2));
        (lo..=hi).all(|i| {
            let a = dst.differential(self.degree + i).mul(&self.component(i));
            let b = self.component(i + 1).mul(&src.differential(i));
            a == b
        })
    }
}

/// `f: M -> N`, `g: N -> M`, `k` of degree `-1` on `M`, with `f g = id` and
/// `g f - id = d k + k d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyEquivalence<F: Field> {
    pub f: EpsMap<F>,
    pub g: EpsMap<F>,
    pub k: EpsMap<F>,
}

impl<F: Field> HomotopyEquivalence<F> {
    /// Check every identity exactly.
    pub fn verify(&self, m: &EpsComplex<F>, n: &EpsComplex<F>) -> bool {
        if !self.f.is_chain_map(m, n) || !self.g.is_chain_map(n, m) {
            return false;
        }
        let fg = EpsMap::compose(&self.f, &self.g);
        let gf = EpsMap::compose(&self.g, &self.f);
        let lo = m.lo().min(n.lo()).min(self.k.lo) - 2;
        let hi = m.hi().max(n.hi()).max(self.k.hi()) + 2;
        let field = m.field();
        (lo..=hi).all(|i| {
            let id_n = EpsMat::identity(field, n.rank(i));
            let id_m = EpsMat::identity(field, m.rank(i));
            let dk = m.differential(i - 1).mul(&self.k.component(i));
            let kd = self.k.component(i + 1).mul(&m.differential(i));
            fg.component(i) == id_n && gf.component(i).sub(&id_m) == dk.add(&kd)
        })
    }
}

#[derive(Clone, Debug)]
pub struct Minimization<F: Field> {
    pub minimal: EpsComplex<F>,
    pub equivalence: HomotopyEquivalence<F>,
}

struct Split<F: Field> {
    p: Matrix<F>,
    p_inv: Matrix<F>,
    nb: usize,
    nh: usize,
    nc: usize,
    c_basis: Matrix<F>,
}

fn minimize<F: Field>(c: &EpsComplex<F>) -> Result<Minimization<F>> {
    let field = c.field().clone();
    // All splittings are identities outside [lo - 1, hi + 2].
    let (lo, hi) = (c.lo() - 1, c.hi() + 2);
    let mut splits: Vec<Split<F>> = Vec::new();
    for i in lo - 1..=hi + 1 {
        let r = c.rank(i);
        let z = linalg::kernel(&c.d1(i));
        let b = match splits.last() {
            Some(prev) => &c.d1(i - 1) * &prev.c_basis,
            None => Matrix::zeros(&field, r, 0),
        };
        let h = z.select_columns(&linalg::extend_basis(&b, &z));
        let cb = linalg::complement(&z, r);
        let p = Matrix::hstack(&field, r, &[&b, &h, &cb]);
        let p_inv = linalg::inverse(&p).expect("B, H and C span the module");
        splits.push(Split {
            nb: b.cols(),
            nh: h.cols(),
            nc: cb.cols(),
            p,
            p_inv,
            c_basis: cb,
        });
    }
    let sp = |i: i64| &splits[(i - lo + 1) as usize];
    // d_ε in adapted bases, block rows (B, H, C) of degree i+1 and columns of degree i.
    let adapted = |i: i64| &(&sp(i + 1).p_inv * &c.deps(i)) * &sp(i).p;
    let block = |m: &Matrix<F>, i: i64, row: usize, col: usize| {
        let (s, t) = (sp(i + 1), sp(i));
        let rs = [0, s.nb, s.nb + s.nh, s.nb + s.nh + s.nc];
        let cs = [0, t.nb, t.nb + t.nh, t.nb + t.nh + t.nc];
        m.submatrix(rs[row], rs[row + 1], cs[col], cs[col + 1])
    };

    let h_maps: Vec<Matrix<F>> = (lo - 1..=hi).map(|i| block(&adapted(i), i, 1, 1)).collect();
    let pres = Presentation {
        lo,
        dims: (lo..=hi).map(|i| sp(i).nh).collect(),
        maps: h_maps[1..h_maps.len() - 1].to_vec(),
        incoming: h_maps[0].clone(),
        outgoing: h_maps[h_maps.len() - 1].clone(),
    };
    let kind = |t: &Tail<F>| if t.dim() > 0 { TailKind::Iso } else { TailKind::Zero };
    let n_seq = Seq::from_presentation(&field, pres, kind(c.left()), kind(c.right()))?;
    let minimal = EpsComplex::from_seq(&n_seq);

    let zeros = |r: usize, k: usize| Matrix::zeros(&field, r, k);
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut k = Vec::new();
    for i in lo..=hi {
        let s = sp(i);
        let prev = adapted(i - 1);
        let here = adapted(i);
        // f_1 = [0 I 0], f_ε = [-c^{i-1} 0 0] in adapted coordinates.
        let f1 = Matrix::hstack(&field, s.nh, &[&zeros(s.nh, s.nb), &Matrix::identity(&field, s.nh), &zeros(s.nh, s.nc)]);
        let c_prev = block(&prev, i - 1, 1, 2);
        let fe = Matrix::hstack(&field, s.nh, &[&-&c_prev, &zeros(s.nh, s.nh), &zeros(s.nh, s.nc)]);
        f.push(EpsMat {
            one: &f1 * &s.p_inv,
            eps: &fe * &s.p_inv,
        });
        // g_1 = [0; I; 0], g_ε = [0; 0; -a^i].
        let g1 = Matrix::vstack(&field, s.nh, &[&zeros(s.nb, s.nh), &Matrix::identity(&field, s.nh), &zeros(s.nc, s.nh)]);
        let a = block(&here, i, 0, 1);
        let ge = Matrix::vstack(&field, s.nh, &[&zeros(s.nb, s.nh), &zeros(s.nh, s.nh), &-&a]);
        g.push(EpsMat {
            one: &s.p * &g1,
            eps: &s.p * &ge,
        });
        // k_1 sends B^i to C^{i-1} by -id, k_ε by b^{i-1}.
        let t = sp(i - 1);
        let mut k1 = zeros(t.nb + t.nh + t.nc, s.nb + s.nh + s.nc);
        let mut ke = k1.clone();
        k1.set_block(t.nb + t.nh, 0, &-&Matrix::identity(&field, s.nb));
        ke.set_block(t.nb + t.nh, 0, &block(&prev, i - 1, 0, 2));
        k.push(EpsMat {
            one: &(&t.p * &k1) * &s.p_inv,
            eps: &(&t.p * &ke) * &s.p_inv,
        });
    }
    let idl = EpsMat::identity(&field, c.left().dim());
    let idr = EpsMat::identity(&field, c.right().dim());
    let equivalence = HomotopyEquivalence {
        f: EpsMap {
            degree: 0,
            lo,
            comps: f,
            left: idl.clone(),
            right: idr.clone(),
        },
        g: EpsMap {
            degree: 0,
            lo,
            comps: g,
            left: idl,
            right: idr,
        },
        k: EpsMap {
            degree: -1,
            lo,
            comps: k,
            left: EpsMat::zeros(&field, c.left().dim(), c.left().dim()),
            right: EpsMat::zeros(&field, c.right().dim(), c.right().dim()),
        },
    };
    debug_assert!(equivalence.verify(c, &minimal));
    Ok(Minimization { minimal, equivalence })
}

/// `dim H^0 Hom_{k[ε]}(M, N)`: chain maps modulo homotopy, for complexes with
/// zero tails.
pub fn hom_k<F: Field>(m: &EpsComplex<F>, n: &EpsComplex<F>) -> Result<usize> {
    for t in [m.left(), m.right(), n.left(), n.right()] {
        if t.dim() > 0 {
            return Err(Error::InvalidSeq("hom_k needs complexes with zero tails".into()));
        }
    }
    let lo = m.lo().min(n.lo()) - 1;
    let hi = m.hi().max(n.hi()) + 1;
    let z = dim_ker(&hom_differential(m, n, 0, lo, hi));
    let b = linalg::rank(&hom_differential(m, n, -1, lo, hi));
    Ok(z - b)
}

fn dim_ker<F: Field>(a: &Matrix<F>) -> usize {
    a.cols() - linalg::rank(a)
}

/// Matrix of `D(φ) = d_N φ - (-1)^n φ d_M` on `Hom^n_{k[ε]}(M, N)` over degrees
/// `[lo, hi]`, coordinates `(φ_1, φ_ε)` row-major per degree.
fn hom_differential<F: Field>(m: &EpsComplex<F>, n: &EpsComplex<F>, deg: i64, lo: i64, hi: i64) -> Matrix<F> {
    let field = m.field().clone();
    let size = |d: i64| -> Vec<(usize, usize)> { (lo..=hi).map(|i| (n.rank(d + i), m.rank(i))).collect() };
    let src = size(deg);
    let dst = size(deg + 1);
    let total = |v: &[(usize, usize)]| v.iter().map(|(r, c)| 2 * r * c).sum::<usize>();
    let offs = |v: &[(usize, usize)]| {
        let mut o = vec![0];
        for (r, c) in v {
            let last = *o.last().expect("nonempty");
            o.push(last + 2 * r * c);
        }
        o
    };
    let (so, dof) = (offs(&src), offs(&dst));
    let sign = field.sign(deg.rem_euclid(2) == 1);
    let mut out = Matrix::zeros(&field, total(&dst), total(&src));
    let mut col = 0;
    for (ii, i) in (lo..=hi).enumerate() {
        let (r, c) = src[ii];
        for part in 0..2 {
            for e in 0..r * c {
                let mut phi = EpsMat::zeros(&field, r, c);
                let unit = Matrix::from_vectorized(&field, r, c, &{
                    let mut v = vec![field.zero(); r * c];
                    v[e] = field.one();
                    v
                });
                if part == 0 {
                    phi.one = unit;
                } else {
                    phi.eps = unit;
                }
                // Contribution to degree i: d_N^{deg+i} φ.
                let a = n.differential(deg + i).mul(&phi);
                // Contribution to degree i-1: -(-1)^n φ d_M^{i-1}.
                let b = phi.mul(&m.differential(i - 1));
                let mut put = |j: i64, v: &EpsMat<F>, s: &F::Elem| {
                    if j < lo || j > hi {
                        return;
                    }
                    let jj = (j - lo) as usize;
                    let base = dof[jj];
                    for (t, x) in v.one.entries().iter().chain(v.eps.entries()).enumerate() {
                        let row = base + t;
                        let cur = out.get(row, col).clone();
                        out.set(row, col, field.add(&cur, &field.mul(s, x)));
                    }
                };
                put(i, &a, &field.one());
                put(i - 1, &b, &field.neg(&sign));
                col += 1;
            }
        }
        debug_assert_eq!(col, so[ii + 1]);
    }
    out
}
