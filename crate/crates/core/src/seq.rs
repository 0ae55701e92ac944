//! Sequence objects: `Z`-indexed finite-dimensional spaces `V^i` with maps
//! `d^i: V^i -> V^{i+1}` (no condition on `d^{i+1} d^i`).
//!
//! A [`Seq`] stores a finite window `[lo, hi]` and a tail descriptor on each
//! side. An `Iso` tail of dimension `s` means `V^i = k^s` beyond the window
//! with `d^i = (-1)^i id`; the `link` joins the tail to the window. A `Zero`
//! tail means `V^i = 0` beyond the window.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A point of `Z ∪ {-∞, +∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Endpoint {
    pub fn finite(self) -> Option<i64> {
        match self {
            Endpoint::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Endpoint::Fin(_))
    }

    /// Shift a finite endpoint; infinite ones are fixed.
    pub fn offset(self, by: i64) -> Endpoint {
        match self {
            Endpoint::Fin(v) => Endpoint::Fin(v + by),
            e => e,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::Fin(v) => write!(f, "{v}"),
            Endpoint::PosInf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailKind {
    Zero,
    Iso,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail<F: Field> {
    Zero,
    /// Stable dimension `dim`; `link` is `d^{lo-1}` on the left
    /// (`dims[lo] x dim`) or `d^{hi}` on the right (`dim x dims[hi]`).
    Iso { dim: usize, link: Matrix<F> },
}

impl<F: Field> Tail<F> {
    pub fn dim(&self) -> usize {
        match self {
            Tail::Zero => 0,
            Tail::Iso { dim, .. } => *dim,
        }
    }

    pub fn kind(&self) -> TailKind {
        match self {
            Tail::Zero => TailKind::Zero,
            Tail::Iso { .. } => TailKind::Iso,
        }
    }
}

/// Explicit finite data of a sequence over a window `[lo, lo + dims.len() - 1]`,
/// including the maps entering and leaving the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<F: Field> {
    pub lo: i64,
    pub dims: Vec<usize>,
    /// `maps[k]` is `d^{lo+k}`.
    pub maps: Vec<Matrix<F>>,
    /// `d^{lo-1}`.
    pub incoming: Matrix<F>,
    /// `d^{hi}`.
    pub outgoing: Matrix<F>,
}

impl<F: Field> Presentation<F> {
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, i: i64) -> usize {
        self.dims[(i - self.lo) as usize]
    }

    pub fn map(&self, i: i64) -> &Matrix<F> {
        if i == self.lo - 1 {
            &self.incoming
        } else if i == self.hi() {
            &self.outgoing
        } else {
            &self.maps[(i - self.lo) as usize]
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Seq<F: Field> {
    field: F,
    lo: i64,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
    left: Tail<F>,
    right: Tail<F>,
}

impl<F: Field> Seq<F> {
    /// Validate shapes and bring the data to normal form (trimmed window).
    pub fn new(
        field: &F,
        lo: i64,
        dims: Vec<usize>,
        maps: Vec<Matrix<F>>,
        left: Tail<F>,
        right: Tail<F>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSeq("window must contain at least one degree".into()));
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::InvalidSeq(format!(
                "{} degrees need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.shape() != (dims[k + 1], dims[k]) {
                return Err(Error::InvalidSeq(format!(
                    "d^{} has shape {}x{}, expected {}x{}",
                    lo + k as i64,
                    m.rows(),
                    m.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        if let Tail::Iso { dim, link } = &left {
            if link.shape() != (dims[0], *dim) {
                return Err(Error::InvalidSeq(format!(
                    "left link has shape {}x{}, expected {}x{}",
                    link.rows(),
                    link.cols(),
                    dims[0],
                    dim
                )));
            }
        }
        if let Tail::Iso { dim, link } = &right {
            let last = *dims.last().unwrap();
            if link.shape() != (*dim, last) {
                return Err(Error::InvalidSeq(format!(
                    "right link has shape {}x{}, expected {}x{}",
                    link.rows(),
                    link.cols(),
                    dim,
                    last
                )));
            }
        }
        let mut s = Seq {
            field: field.clone(),
            lo,
            dims,
            maps,
            left,
            right,
        };
        s.normalize();
        Ok(s)
    }

    pub fn zero(field: &F) -> Self {
        Seq {
            field: field.clone(),
            lo: 0,
            dims: vec![0],
            maps: Vec::new(),
            left: Tail::Zero,
            right: Tail::Zero,
        }
    }

    /// The interval object `S_{a,b}`: `k` in degrees `a..=b`, `d^i = (-1)^i`.
    pub fn interval(field: &F, a: Endpoint, b: Endpoint) -> Result<Self> {
        validate_interval(a, b)?;
        let sign = |i: i64| Matrix::signed_identity(field, 1, i);
        let s = match (a, b) {
            (Endpoint::Fin(a), Endpoint::Fin(b)) => Seq {
                field: field.clone(),
                lo: a,
                dims: vec![1; (b - a + 1) as usize],
                maps: (a..b).map(sign).collect(),
                left: Tail::Zero,
                right: Tail::Zero,
            },
            (Endpoint::NegInf, Endpoint::Fin(b)) => Seq {
                field: field.clone(),
                lo: b,
                dims: vec![1],
                maps: Vec::new(),
                left: Tail::Iso { dim: 1, link: sign(b - 1) },
                right: Tail::Zero,
            },
            (Endpoint::Fin(a), Endpoint::PosInf) => Seq {
                field: field.clone(),
                lo: a,
                dims: vec![1],
                maps: Vec::new(),
                left: Tail::Zero,
                right: Tail::Iso { dim: 1, link: sign(a) },
            },
            _ => Seq {
                field: field.clone(),
                lo: 0,
                dims: vec![1],
                maps: Vec::new(),
                left: Tail::Iso { dim: 1, link: sign(-1) },
                right: Tail::Iso { dim: 1, link: sign(0) },
            },
        };
        Ok(s)
    }

    /// Rebuild from a presentation whose boundary maps already sit in the
    /// stable regions: for an `Iso` side the incoming/outgoing map must be the
    /// signed identity of that degree.
    pub fn from_presentation(
        field: &F,
        pres: Presentation<F>,
        left: TailKind,
        right: TailKind,
    ) -> Result<Self> {
        let lo = pres.lo;
        let hi = pres.hi();
        let left = match left {
            TailKind::Zero => {
                if pres.incoming.cols() != 0 {
                    return Err(Error::InvalidSeq("zero left tail with nonzero incoming map".into()));
                }
                Tail::Zero
            }
            TailKind::Iso => {
                if !pres.incoming.is_signed_identity(lo - 1) {
                    return Err(Error::InvalidSeq(format!(
                        "incoming map at degree {} is not a signed identity",
                        lo - 1
                    )));
                }
                Tail::Iso {
                    dim: pres.incoming.cols(),
                    link: pres.incoming,
                }
            }
        };
        let right = match right {
            TailKind::Zero => {
                if pres.outgoing.rows() != 0 {
                    return Err(Error::InvalidSeq("zero right tail with nonzero outgoing map".into()));
                }
                Tail::Zero
            }
            TailKind::Iso => {
                if !pres.outgoing.is_signed_identity(hi) {
                    return Err(Error::InvalidSeq(format!(
                        "outgoing map at degree {hi} is not a signed identity"
                    )));
                }
                Tail::Iso {
                    dim: pres.outgoing.rows(),
                    link: pres.outgoing,
                }
            }
        };
        Seq::new(field, lo, pres.dims, pres.maps, left, right)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn window_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn window_maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn left(&self) -> &Tail<F> {
        &self.left
    }

    pub fn right(&self) -> &Tail<F> {
        &self.right
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.left, Tail::Zero)
            && matches!(self.right, Tail::Zero)
            && self.dims.iter().all(|&d| d == 0)
    }

    /// `dim V^i` for any degree.
    pub fn dim(&self, i: i64) -> usize {
        if i < self.lo {
            self.left.dim()
        } else if i > self.hi() {
            self.right.dim()
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    /// `d^i` for any degree.
    pub fn map(&self, i: i64) -> Matrix<F> {
        let f = &self.field;
        let lo = self.lo;
        let hi = self.hi();
        if i < lo - 1 {
            Matrix::signed_identity(f, self.left.dim(), i)
        } else if i == lo - 1 {
            match &self.left {
                Tail::Zero => Matrix::zeros(f, self.dims[0], 0),
                Tail::Iso { link, .. } => link.clone(),
            }
        } else if i < hi {
            self.maps[(i - lo) as usize].clone()
        } else if i == hi {
            match &self.right {
                Tail::Zero => Matrix::zeros(f, 0, self.dims[self.dims.len() - 1]),
                Tail::Iso { link, .. } => link.clone(),
            }
        } else {
            Matrix::signed_identity(f, self.right.dim(), i)
        }
    }

    /// The composite `d^{i,j} = d^{j-1} ... d^i: V^i -> V^j` for `i <= j`.
    pub fn composite(&self, i: i64, j: i64) -> Matrix<F> {
        assert!(i <= j);
        let mut acc = Matrix::identity(&self.field, self.dim(i));
        for k in i..j {
            acc = &self.map(k) * &acc;
        }
        acc
    }

    /// Explicit data on `[m, n]`, tails expanded.
    pub fn materialize(&self, m: i64, n: i64) -> Presentation<F> {
        assert!(m <= n);
        Presentation {
            lo: m,
            dims: (m..=n).map(|i| self.dim(i)).collect(),
            maps: (m..n).map(|i| self.map(i)).collect(),
            incoming: self.map(m - 1),
            outgoing: self.map(n),
        }
    }

    /// `V[n]`: `V[n]^i = V^{n+i}`, `d^i = (-1)^n d^{n+i}`.
    pub fn shift(&self, n: i64) -> Self {
        let flip = |m: &Matrix<F>| m.scale_sign(n);
        let tail = |t: &Tail<F>| match t {
            Tail::Zero => Tail::Zero,
            Tail::Iso { dim, link } => Tail::Iso {
                dim: *dim,
                link: flip(link),
            },
        };
        let mut s = Seq {
            field: self.field.clone(),
            lo: self.lo - n,
            dims: self.dims.clone(),
            maps: self.maps.iter().map(flip).collect(),
            left: tail(&self.left),
            right: tail(&self.right),
        };
        s.normalize();
        s
    }

    /// Degreewise direct sum with block-diagonal maps.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo) - 1;
        let hi = self.hi().max(other.hi()) + 1;
        let a = self.materialize(lo, hi);
        let b = other.materialize(lo, hi);
        let f = &self.field;
        let pres = Presentation {
            lo,
            dims: a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect(),
            maps: a
                .maps
                .iter()
                .zip(&b.maps)
                .map(|(x, y)| Matrix::block_diag(f, &[x, y]))
                .collect(),
            incoming: Matrix::block_diag(f, &[&a.incoming, &b.incoming]),
            outgoing: Matrix::block_diag(f, &[&a.outgoing, &b.outgoing]),
        };
        let kind = |x: &Tail<F>, y: &Tail<F>| {
            if x.dim() + y.dim() > 0 {
                TailKind::Iso
            } else {
                TailKind::Zero
            }
        };
        Seq::from_presentation(
            f,
            pres,
            kind(&self.left, &other.left),
            kind(&self.right, &other.right),
        )
        .expect("direct sum of stable tails is stable")
    }

    /// Trim the window while its boundary degrees belong to the tails.
    fn normalize(&mut self) {
        for t in [&mut self.left, &mut self.right] {
            if matches!(t, Tail::Iso { dim: 0, .. }) {
                *t = Tail::Zero;
            }
        }
        // Right side first so that a window squeezed between two tails
        // settles on a unique degree.
        while self.dims.len() > 1 {
            let hi = self.hi();
            let last = self.dims[self.dims.len() - 1];
            let drop = match &self.right {
                Tail::Zero => last == 0,
                Tail::Iso { dim, link } => last == *dim && link.is_signed_identity(hi),
            };
            if !drop {
                break;
            }
            let m = self.maps.pop().expect("window has more than one degree");
            if let Tail::Iso { link, .. } = &mut self.right {
                *link = m;
            }
            self.dims.pop();
        }
        while self.dims.len() > 1 {
            let drop = match &self.left {
                Tail::Zero => self.dims[0] == 0,
                Tail::Iso { dim, link } => {
                    self.dims[0] == *dim && link.is_signed_identity(self.lo - 1)
                }
            };
            if !drop {
                break;
            }
            let first = self.maps.remove(0);
            if let Tail::Iso { link, .. } = &mut self.left {
                *link = first;
            }
            self.dims.remove(0);
            self.lo += 1;
        }
        if self.dims.len() == 1 {
            let d = self.dims[0];
            let centered = match (&self.left, &self.right) {
                (Tail::Zero, Tail::Zero) => d == 0,
                (Tail::Iso { dim: s, link: l }, Tail::Iso { dim: t, link: r }) => {
                    *s == d && *t == d && l.is_signed_identity(self.lo - 1) && r.is_signed_identity(self.lo)
                }
                _ => false,
            };
            if centered && self.lo != 0 {
                let lo = self.lo;
                self.lo = 0;
                if let Tail::Iso { link, .. } = &mut self.left {
                    *link = link.scale_sign(lo);
                }
                if let Tail::Iso { link, .. } = &mut self.right {
                    *link = link.scale_sign(lo);
                }
            }
        }
    }
}

pub(crate) fn validate_interval(a: Endpoint, b: Endpoint) -> Result<()> {
    if a == Endpoint::PosInf || b == Endpoint::NegInf {
        return Err(Error::InvalidInterval(format!("[{a}, {b}]")));
    }
    if a.cmp(&b) == Ordering::Greater {
        return Err(Error::InvalidInterval(format!("[{a}, {b}] has a > b")));
    }
    Ok(())
}

impl<F: Field> fmt::Debug for Seq<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |t: &Tail<F>| match t {
            Tail::Zero => alloc::string::String::from("zero"),
            Tail::Iso { dim, link } => format!("iso({dim}, {link})"),
        };
        write!(
            f,
            "Seq {{ window: [{}, {}], dims: {:?}, maps: [",
            self.lo,
            self.hi(),
            self.dims
        )?;
        for (k, m) in self.maps.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "], left: {}, right: {} }}", tail(&self.left), tail(&self.right))
    }
}
