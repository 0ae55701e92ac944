//! Morphisms of the enlarged category: `f = f_1 + [f_ε]` with `f_1` a
//! sequence morphism and `[f_ε]` a class in `Hom^ε`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedHom;
use crate::hom::EpsSpace;
use crate::matrix::Matrix;
use crate::seq::Seq;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatMorphism<F: Field> {
    one: GradedHom<F>,
    /// Canonical representative of the type-ε class.
    eps: GradedHom<F>,
}

impl<F: Field> HatMorphism<F> {
    /// `one` must be a degree-0 cycle; `eps` is reduced to its canonical
    /// representative.
    pub fn new(one: GradedHom<F>, eps: GradedHom<F>) -> Result<Self> {
        if one.degree() != 0 || eps.degree() != 0 {
            return Err(Error::InvalidMorphism("both parts must have degree 0".into()));
        }
        if one.src() != eps.src() || one.dst() != eps.dst() {
            return Err(Error::InvalidMorphism("parts have different source or target".into()));
        }
        if let Some(i) = first_noncommuting(&one) {
            return Err(Error::InvalidMorphism(alloc::format!(
                "type-1 part does not commute with d at degree {i}"
            )));
        }
        let eps = if eps.is_zero() {
            eps
        } else {
            EpsSpace::new(one.src(), one.dst()).canonical(&eps)?
        };
        Ok(HatMorphism { one, eps })
    }

    pub fn type_one(one: GradedHom<F>) -> Result<Self> {
        let eps = GradedHom::zero(one.src(), one.dst(), 0);
        Self::new(one, eps)
    }

    pub fn type_eps(eps: GradedHom<F>) -> Result<Self> {
        let one = GradedHom::zero(eps.src(), eps.dst(), 0);
        Self::new(one, eps)
    }

    pub fn zero(src: &Seq<F>, dst: &Seq<F>) -> Self {
        HatMorphism {
            one: GradedHom::zero(src, dst, 0),
            eps: GradedHom::zero(src, dst, 0),
        }
    }

    pub fn identity(v: &Seq<F>) -> Self {
        HatMorphism {
            one: GradedHom::identity(v),
            eps: GradedHom::zero(v, v, 0),
        }
    }

    /// The class `[id]` of type ε.
    pub fn eps_identity(v: &Seq<F>) -> Self {
        Self::type_eps(GradedHom::identity(v)).expect("identity has degree 0")
    }

    pub fn src(&self) -> &Seq<F> {
        self.one.src()
    }

    pub fn dst(&self) -> &Seq<F> {
        self.one.dst()
    }

    pub fn one(&self) -> &GradedHom<F> {
        &self.one
    }

    pub fn eps(&self) -> &GradedHom<F> {
        &self.eps
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.eps.is_zero()
    }

    pub fn is_type_one(&self) -> bool {
        self.eps.is_zero()
    }

    pub fn is_type_eps(&self) -> bool {
        self.one.is_zero()
    }

    /// `g ∘ f = g_1 f_1 + [g_1 f_ε + g_ε f_1]`.
    pub fn compose(g: &Self, f: &Self) -> Result<Self> {
        if f.dst() != g.src() {
            return Err(Error::ShapeMismatch("target of f is not the source of g".into()));
        }
        let one = GradedHom::compose(&g.one, &f.one)?;
        let eps = GradedHom::compose(&g.one, &f.eps)?.try_add(&GradedHom::compose(&g.eps, &f.one)?)?;
        Self::new(one, eps)
    }

    pub fn then(&self, g: &Self) -> Result<Self> {
        Self::compose(g, self)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.one.try_add(&other.one)?, self.eps.try_add(&other.eps)?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.one.try_sub(&other.one)?, self.eps.try_sub(&other.eps)?)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        HatMorphism {
            one: self.one.scale(s),
            eps: self.eps.scale(s),
        }
    }

    pub fn neg(&self) -> Self {
        HatMorphism {
            one: self.one.neg(),
            eps: self.eps.neg(),
        }
    }

    /// `f[n]: V[n] -> W[n]`, componentwise `f^{n+i}` on both parts.
    pub fn shift(&self, n: i64) -> Self {
        let (v, w) = (self.src().shift(n), self.dst().shift(n));
        let re = |g: &GradedHom<F>| GradedHom::from_fn(&v, &w, 0, g.lo() - n, g.hi() - n, |i| g.component(n + i));
        Self::new(re(&self.one), re(&self.eps)).expect("shift preserves morphisms")
    }
}

fn first_noncommuting<F: Field>(f: &GradedHom<F>) -> Option<i64> {
    let d = f.differential();
    (d.lo() - 2..=d.hi() + 2).find(|&i| !d.component(i).is_zero())
}

/// `V ⊕ W` with inclusions and projections, all of type 1.
pub struct DirectSum<F: Field> {
    pub sum: Seq<F>,
    pub inclusions: [HatMorphism<F>; 2],
    pub projections: [HatMorphism<F>; 2],
}

pub fn direct_sum<F: Field>(v: &Seq<F>, w: &Seq<F>) -> DirectSum<F> {
    let sum = v.direct_sum(w);
    let field = v.field().clone();
    let lo = sum.lo() - 1;
    let hi = sum.hi() + 1;
    let block = |i: i64, first: bool| {
        let (dv, dw) = (v.dim(i), w.dim(i));
        let mut m = Matrix::zeros(&field, dv + dw, if first { dv } else { dw });
        let id = Matrix::identity(&field, if first { dv } else { dw });
        m.set_block(if first { 0 } else { dv }, 0, &id);
        m
    };
    let inc = |part: &Seq<F>, first| {
        HatMorphism::type_one(GradedHom::from_fn(part, &sum, 0, lo, hi, |i| block(i, first)))
            .expect("block inclusion commutes")
    };
    let proj = |part: &Seq<F>, first| {
        HatMorphism::type_one(GradedHom::from_fn(&sum, part, 0, lo, hi, |i| block(i, first).transpose()))
            .expect("block projection commutes")
    };
    DirectSum {
        inclusions: [inc(v, true), inc(w, false)],
        projections: [proj(v, true), proj(w, false)],
        sum,
    }
}
