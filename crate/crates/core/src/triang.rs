//! Cones, extensions and triangles in the enlarged category.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedHom;
use crate::hat::HatMorphism;
use crate::hom::{base_frame, differential_matrix};
use crate::linalg;
use crate::matrix::Matrix;
use crate::seq::{Presentation, Seq, TailKind};

/// `A --u--> B --v--> C --w--> A[1]`.
#[derive(Clone, Debug)]
pub struct Triangle<F: Field> {
    pub a: Seq<F>,
    pub b: Seq<F>,
    pub c: Seq<F>,
    pub u: HatMorphism<F>,
    pub v: HatMorphism<F>,
    pub w: HatMorphism<F>,
}

impl<F: Field> Triangle<F> {
    /// `v ∘ u`, `w ∘ v` and `u[1] ∘ w` all vanish.
    pub fn composites_vanish(&self) -> Result<bool> {
        let vu = HatMorphism::compose(&self.v, &self.u)?;
        let wv = HatMorphism::compose(&self.w, &self.v)?;
        let uw = HatMorphism::compose(&self.u.shift(1), &self.w)?;
        Ok(vu.is_zero() && wv.is_zero() && uw.is_zero())
    }
}

fn kind(dim: usize) -> TailKind {
    if dim > 0 {
        TailKind::Iso
    } else {
        TailKind::Zero
    }
}

/// Build a sequence from a rule for `dim` and `d` valid in all degrees, pure
/// outside `[lo, hi]`.
fn seq_from_rule<F: Field>(
    field: &F,
    lo: i64,
    hi: i64,
    dim: impl Fn(i64) -> usize,
    map: impl Fn(i64) -> Matrix<F>,
) -> Result<Seq<F>> {
    let pres = Presentation {
        lo,
        dims: (lo..=hi).map(&dim).collect(),
        maps: (lo..hi).map(&map).collect(),
        incoming: map(lo - 1),
        outgoing: map(hi),
    };
    Seq::from_presentation(field, pres, kind(dim(lo - 1)), kind(dim(hi + 1)))
}

/// Splitting data of `h_1^i: V^i -> W^i`.
struct Split<F: Field> {
    /// Basis of `ker h_1^i`.
    k: Matrix<F>,
    /// Complement of the kernel.
    q: Matrix<F>,
    /// `[k | q]^{-1}`, top rows give kernel coordinates.
    kq_inv: Matrix<F>,
    /// `W^i -> cok h_1^i`.
    pr: Matrix<F>,
    /// Section of `pr`.
    sec: Matrix<F>,
    /// `W^i -> k^{rank}`: coordinates of `w - sec pr w` in the basis `-h_1 q`.
    r: Matrix<F>,
}

impl<F: Field> Split<F> {
    fn new(h1: &Matrix<F>) -> Self {
        let field = h1.field().clone();
        let sub = linalg::subspaces(h1);
        let q = linalg::complement(&sub.kernel, h1.cols());
        let kq = Matrix::hstack(&field, h1.cols(), &[&sub.kernel, &q]);
        let kq_inv = linalg::inverse(&kq).expect("kernel plus complement is a basis");
        let img = -&(h1 * &q);
        let proj = &Matrix::identity(&field, h1.rows()) - &(&sub.section * &sub.cokernel);
        let r = linalg::solve(&img, &proj).expect("projection lands in the image");
        Split {
            k: sub.kernel,
            q,
            kq_inv,
            pr: sub.cokernel,
            sec: sub.section,
            r,
        }
    }

    fn nk(&self) -> usize {
        self.k.cols()
    }

    fn ncok(&self) -> usize {
        self.pr.rows()
    }

    fn kercoord(&self, x: &Matrix<F>) -> Matrix<F> {
        (&self.kq_inv * x).submatrix(0, self.nk(), 0, x.cols())
    }
}

/// The cone of `h: V -> W` as the triangle `W[-1] --f--> U --g--> V --h--> W`
/// with `U^i = ker h_1^i ⊕ cok h_1^{i-1}`.
pub fn cone<F: Field>(h: &HatMorphism<F>) -> Result<Triangle<F>> {
    let (v, w) = (h.src(), h.dst());
    let field = v.field().clone();
    let split = |i: i64| Split::new(&h.one().component(i));
    let he = |i: i64| h.eps().component(i);
    let dim_u = |i: i64| split(i).nk() + split(i - 1).ncok();
    let d_u = |i: i64| {
        let (s0, s1, sp) = (split(i), split(i + 1), split(i - 1));
        let alpha = s1.kercoord(&(&v.map(i) * &s0.k));
        let gamma = &(&s0.pr * &he(i)) * &s0.k;
        let beta = &(&s0.pr * &w.map(i - 1)) * &sp.sec;
        let mut m = Matrix::zeros(&field, dim_u(i + 1), dim_u(i));
        m.set_block(0, 0, &alpha);
        m.set_block(s1.nk(), 0, &-&gamma);
        m.set_block(s1.nk(), s0.nk(), &-&beta);
        m
    };
    let lo = v.lo().min(w.lo()) - 3;
    let hi = v.hi().max(w.hi() + 1) + 3;
    let u = seq_from_rule(&field, lo, hi, dim_u, d_u)?;
    let w1 = w.shift(-1);

    let f_one = |i: i64| {
        let sp = split(i - 1);
        Matrix::vstack(&field, w.dim(i - 1), &[&Matrix::zeros(&field, split(i).nk(), w.dim(i - 1)), &sp.pr])
    };
    let f_eps = |i: i64| {
        let (s0, sp) = (split(i), split(i - 1));
        let top = -&s0.kercoord(&(&(&v.map(i - 1) * &sp.q) * &sp.r));
        let bottom = &(&(&sp.pr * &he(i - 1)) * &sp.q) * &sp.r;
        Matrix::vstack(&field, w.dim(i - 1), &[&top, &bottom])
    };
    let g_one = |i: i64| {
        let s0 = split(i);
        Matrix::hstack(&field, v.dim(i), &[&s0.k, &Matrix::zeros(&field, v.dim(i), split(i - 1).ncok())])
    };
    let g_eps = |i: i64| {
        let (s0, sp) = (split(i), split(i - 1));
        let inner = Matrix::hstack(
            &field,
            w.dim(i),
            &[&(&he(i) * &s0.k), &(&w.map(i - 1) * &sp.sec)],
        );
        &(&s0.q * &s0.r) * &inner
    };
    let f = HatMorphism::new(
        GradedHom::from_fn(&w1, &u, 0, lo, hi, f_one),
        GradedHom::from_fn(&w1, &u, 0, lo, hi, f_eps),
    )?;
    let g = HatMorphism::new(
        GradedHom::from_fn(&u, v, 0, lo, hi, g_one),
        GradedHom::from_fn(&u, v, 0, lo, hi, g_eps),
    )?;
    Ok(Triangle {
        a: w1,
        b: u,
        c: v.clone(),
        u: f,
        v: g,
        w: h.clone(),
    })
}

/// The short exact sequence `0 -> Y[-1] -> C -> X -> 0` with
/// `C^i = X^i ⊕ Y^{i-1}` and `d_C = [[d_X, 0], [-f, -d_Y]]`.
#[derive(Clone, Debug)]
pub struct ExtensionClass<F: Field> {
    pub x: Seq<F>,
    pub y: Seq<F>,
    /// Representative supported on the base frame of `(X, Y)`.
    pub f: GradedHom<F>,
    pub middle: Seq<F>,
    pub inclusion: HatMorphism<F>,
    pub projection: HatMorphism<F>,
}

/// `E_f` for a degree-0 map `f: X -> Y`. Only the class of `f` matters, so
/// `f` is first cut down to the base frame, which keeps the tails of `C`
/// stable.
pub fn extension_from_eps<F: Field>(f: &GradedHom<F>) -> Result<ExtensionClass<F>> {
    if f.degree() != 0 {
        return Err(Error::InvalidMorphism("extension needs a degree-0 map".into()));
    }
    let (x, y) = (f.src(), f.dst());
    let field = x.field().clone();
    let (a, b) = base_frame(x, y);
    let f = f.truncate(a, b);
    let dim = |i: i64| x.dim(i) + y.dim(i - 1);
    let d = |i: i64| {
        let mut m = Matrix::zeros(&field, dim(i + 1), dim(i));
        m.set_block(0, 0, &x.map(i));
        m.set_block(x.dim(i + 1), 0, &-&f.component(i));
        m.set_block(x.dim(i + 1), x.dim(i), &-&y.map(i - 1));
        m
    };
    let (lo, hi) = (a - 2, b + 3);
    let middle = seq_from_rule(&field, lo, hi, dim, d)?;
    let y1 = y.shift(-1);
    let inclusion = GradedHom::from_fn(&y1, &middle, 0, lo, hi, |i| {
        Matrix::vstack(&field, y.dim(i - 1), &[&Matrix::zeros(&field, x.dim(i), y.dim(i - 1)), &Matrix::identity(&field, y.dim(i - 1))])
    });
    let projection = GradedHom::from_fn(&middle, x, 0, lo, hi, |i| {
        Matrix::hstack(&field, x.dim(i), &[&Matrix::identity(&field, x.dim(i)), &Matrix::zeros(&field, x.dim(i), y.dim(i - 1))])
    });
    Ok(ExtensionClass {
        x: x.clone(),
        y: y.clone(),
        f,
        middle,
        inclusion: HatMorphism::type_one(inclusion)?,
        projection: HatMorphism::type_one(projection)?,
    })
}

/// Some `h: X^i -> Y^{i-1}` with `-f^i = d_Y^{i-1} h^i + h^{i+1} d_X^i` for all
/// `i`, or `None` when `[f] != 0` in `Hom^ε`.
pub fn splits<F: Field>(e: &ExtensionClass<F>) -> Option<GradedHom<F>> {
    let (x, y) = (&e.x, &e.y);
    let field = x.field().clone();
    let (a, b) = base_frame(x, y);
    let lhs = differential_matrix(x, y, -1, a, b);
    let rhs: Vec<F::Elem> = e.f.neg().vectorize(a, b);
    let sol = linalg::solve(&lhs, &Matrix::column(&field, rhs))?;
    let h = GradedHom::from_vectorized(x, y, -1, a, b + 1, &sol.col(0));
    let (first, last) = (h.component(a), h.component(b + 1));
    Some(GradedHom::from_fn(x, y, -1, a, b + 1, |i| {
        if i < a {
            first.clone()
        } else if i > b + 1 {
            last.clone()
        } else {
            h.component(i)
        }
    }))
}

/// Common degree range on which every object and map below is explicit.
fn span<F: Field>(maps: &[&HatMorphism<F>]) -> (i64, i64) {
    let lo = maps.iter().map(|m| m.one().lo().min(m.src().lo()).min(m.dst().lo())).min().unwrap_or(0);
    let hi = maps.iter().map(|m| m.one().hi().max(m.src().hi()).max(m.dst().hi())).max().unwrap_or(0);
    (lo - 2, hi + 2)
}

/// Complete `0 -> A --u--> B --v--> C -> 0` (type-1 maps) to a triangle. The
/// third map is `[-t]` with `t^i = r^{i+1} d_B^i s^i` for a degreewise
/// section `s` of `v` and the retraction `r` of `u` vanishing on `s`.
pub fn triangle_from_ses<F: Field>(u: &HatMorphism<F>, v: &HatMorphism<F>) -> Result<Triangle<F>> {
    if !u.is_type_one() || !v.is_type_one() {
        return Err(Error::NotExact {
            degree: 0,
            reason: "maps must be of type 1".into(),
        });
    }
    if u.dst() != v.src() {
        return Err(Error::ShapeMismatch("u and v are not composable".into()));
    }
    let (a, b, c) = (u.src(), u.dst(), v.dst());
    let field = a.field().clone();
    let (lo, hi) = span(&[u, v]);
    for i in lo..=hi {
        let (ui, vi) = (u.one().component(i), v.one().component(i));
        let bad = |reason: &str| Error::NotExact {
            degree: i,
            reason: reason.into(),
        };
        if linalg::rank(&ui) != ui.cols() {
            return Err(bad("u is not injective"));
        }
        if linalg::rank(&vi) != vi.rows() {
            return Err(bad("v is not surjective"));
        }
        if !(&vi * &ui).is_zero() || ui.cols() + vi.rows() != b.dim(i) {
            return Err(bad("image of u differs from kernel of v"));
        }
    }
    let pieces = |i: i64| {
        let (ui, vi) = (u.one().component(i), v.one().component(i));
        let s = linalg::solve(&vi, &Matrix::identity(&field, c.dim(i))).expect("v is surjective");
        // Adjust s so that it is a complement of im u with v s = id.
        let basis = Matrix::hstack(&field, b.dim(i), &[&ui, &s]);
        let inv = linalg::inverse(&basis).expect("exactness gives a basis");
        let r = inv.submatrix(0, a.dim(i), 0, b.dim(i));
        (s, r)
    };
    let a1 = a.shift(1);
    let t = GradedHom::from_fn(c, &a1, 0, lo, hi, |i| {
        let (s, _) = pieces(i);
        let (_, r) = pieces(i + 1);
        -&(&(&r * &b.map(i)) * &s)
    });
    let w = HatMorphism::type_eps(t)?;
    Ok(Triangle {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        u: u.clone(),
        v: v.clone(),
        w,
    })
}

/// `V^{>=n} --β--> V --δ--> V^{<n} --ε--> V^{>=n}[1]`.
pub fn truncation_triangle<F: Field>(v: &Seq<F>, n: i64) -> Result<Triangle<F>> {
    let field = v.field().clone();
    let (lo, hi) = (v.lo().min(n) - 2, v.hi().max(n) + 2);
    let ge_dim = |i: i64| if i >= n { v.dim(i) } else { 0 };
    let lt_dim = |i: i64| if i < n { v.dim(i) } else { 0 };
    let restrict = |keep: &dyn Fn(i64) -> bool, i: i64| {
        let rows = if keep(i + 1) { v.dim(i + 1) } else { 0 };
        let cols = if keep(i) { v.dim(i) } else { 0 };
        if rows > 0 && cols > 0 {
            v.map(i)
        } else {
            Matrix::zeros(&field, rows, cols)
        }
    };
    let ge = seq_from_rule(&field, lo, hi, ge_dim, |i| restrict(&|j| j >= n, i))?;
    let lt = seq_from_rule(&field, lo, hi, lt_dim, |i| restrict(&|j| j < n, i))?;
    let beta = GradedHom::from_fn(&ge, v, 0, lo, hi, |i| {
        if i >= n {
            Matrix::identity(&field, v.dim(i))
        } else {
            Matrix::zeros(&field, v.dim(i), 0)
        }
    });
    let delta = GradedHom::from_fn(v, &lt, 0, lo, hi, |i| {
        if i < n {
            Matrix::identity(&field, v.dim(i))
        } else {
            Matrix::zeros(&field, 0, v.dim(i))
        }
    });
    triangle_from_ses(&HatMorphism::type_one(beta)?, &HatMorphism::type_one(delta)?)
}
