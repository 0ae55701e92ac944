//! Interval decomposition of sequence objects and the predicates that can be
//! read off from it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::field::Field;
use crate::graded::GradedHom;
use crate::hat::HatMorphism;
use crate::linalg;
use crate::matrix::Matrix;
use crate::seq::{validate_interval, Endpoint, Presentation, Seq, Tail, TailKind};

/// `[a, b]` with `a ∈ Z ∪ {-∞}`, `b ∈ Z ∪ {+∞}`, `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    a: Endpoint,
    b: Endpoint,
}

impl Interval {
    pub fn new(a: Endpoint, b: Endpoint) -> Result<Self> {
        validate_interval(a, b)?;
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> Endpoint {
        self.a
    }

    pub fn b(&self) -> Endpoint {
        self.b
    }

    pub fn contains(&self, i: i64) -> bool {
        self.a <= Endpoint::Fin(i) && Endpoint::Fin(i) <= self.b
    }

    pub fn shift(&self, n: i64) -> Self {
        Interval {
            a: self.a.offset(-n),
            b: self.b.offset(-n),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// A multiset of intervals, optionally with an isomorphism
/// `assemble(bars) -> V` whose degree-`i` matrix lists the basis vectors of
/// the bars alive at `i`, in the order of `bars`.
#[derive(Clone, Debug)]
pub struct Barcode<F: Field> {
    pub bars: BTreeMap<Interval, usize>,
    pub certificate: Option<HatMorphism<F>>,
}

impl<F: Field> Barcode<F> {
    pub fn total(&self) -> usize {
        self.bars.values().sum()
    }
}

fn stable_left<F: Field>(v: &Seq<F>, b: i64) -> Option<i64> {
    match v.left() {
        Tail::Zero => None,
        Tail::Iso { .. } => Some((v.lo() - 1).min(b)),
    }
}

/// Rank of `d^{a,b}: V^a -> V^b`, infinite endpoints read at tail degrees.
pub fn rank_pairing<F: Field>(v: &Seq<F>, a: Endpoint, b: Endpoint) -> Result<usize> {
    validate_interval(a, b)?;
    let b = match b {
        Endpoint::Fin(b) => b,
        _ => match v.right() {
            Tail::Zero => return Ok(0),
            Tail::Iso { .. } => (v.hi() + 1).max(a.finite().unwrap_or(i64::MIN)),
        },
    };
    let a = match a {
        Endpoint::Fin(a) => a,
        _ => match stable_left(v, b) {
            None => return Ok(0),
            Some(a) => a,
        },
    };
    Ok(linalg::rank(&v.composite(a, b)))
}

/// Candidate bars: every bar of `V` is one of these.
fn candidates<F: Field>(v: &Seq<F>) -> Vec<Interval> {
    let (lo, hi) = (v.lo(), v.hi());
    let starts = core::iter::once(Endpoint::NegInf).chain((lo..=hi + 1).map(Endpoint::Fin));
    let mut out = Vec::new();
    for a in starts {
        let ends = (lo - 1..=hi).map(Endpoint::Fin).chain(core::iter::once(Endpoint::PosInf));
        for b in ends {
            if let Ok(iv) = Interval::new(a, b) {
                out.push(iv);
            }
        }
    }
    out
}

/// Bar multiplicities by inclusion–exclusion of ranks.
pub fn multiplicities<F: Field>(v: &Seq<F>) -> BTreeMap<Interval, usize> {
    let r = |a: Endpoint, b: Endpoint| -> i64 {
        if a > b {
            0
        } else {
            rank_pairing(v, a, b).expect("endpoints are ordered") as i64
        }
    };
    let mut out = BTreeMap::new();
    for iv in candidates(v) {
        let (a, b) = (iv.a, iv.b);
        let m = match (a, b) {
            (Endpoint::Fin(x), Endpoint::Fin(y)) => {
                let (a1, b1) = (Endpoint::Fin(x - 1), Endpoint::Fin(y + 1));
                r(a, b) - r(a1, b) - r(a, b1) + r(a1, b1)
            }
            (Endpoint::NegInf, Endpoint::Fin(y)) => r(a, b) - r(a, Endpoint::Fin(y + 1)),
            (Endpoint::Fin(x), Endpoint::PosInf) => r(a, b) - r(Endpoint::Fin(x - 1), b),
            _ => r(a, b),
        };
        debug_assert!(m >= 0);
        if m > 0 {
            out.insert(iv, m as usize);
        }
    }
    out
}

/// Direct sum of the intervals, in the order of the map, each repeated by its
/// multiplicity.
pub fn assemble<F: Field>(field: &F, bars: &BTreeMap<Interval, usize>) -> Seq<F> {
    let mut acc = Seq::zero(field);
    for (iv, &m) in bars {
        let s = Seq::interval(field, iv.a, iv.b).expect("intervals are valid");
        for _ in 0..m {
            acc = acc.direct_sum(&s);
        }
    }
    acc
}

struct Bar<F: Field> {
    birth: i64,
    death: Option<i64>,
    /// Vector in `V^{birth + k}` for each `k`.
    history: Vec<Vec<F::Elem>>,
}

/// Complete decomposition with a certificate.
///
/// Works left to right over `[lo - 1, hi + 1]` with the twisted maps
/// `e^i = (-1)^i d^i`, under which every interval has identity transitions.
/// A bar whose image depends on the images of older surviving bars is
/// corrected along its whole history by that combination and dies there.
pub fn decompose<F: Field>(v: &Seq<F>) -> Barcode<F> {
    let field = v.field().clone();
    let (lo, hi) = (v.lo() - 1, v.hi() + 1);
    let mut bars: Vec<Bar<F>> = Vec::new();
    let unit = |n: usize, k: usize| {
        let mut e = vec![field.zero(); n];
        e[k] = field.one();
        e
    };
    for k in 0..v.dim(lo) {
        bars.push(Bar {
            birth: lo,
            death: None,
            history: vec![unit(v.dim(lo), k)],
        });
    }
    for i in lo..hi {
        let e = v.map(i).scale_sign(i);
        let mut alive: Vec<usize> = (0..bars.len()).filter(|&k| bars[k].death.is_none()).collect();
        alive.sort_by_key(|&k| (bars[k].birth, k));
        let mut kept: Vec<usize> = Vec::new();
        let mut images: Vec<Vec<F::Elem>> = Vec::new();
        for k in alive {
            let x = bars[k].history.last().expect("bars have at least one vector").clone();
            let y = (&e * &Matrix::column(&field, x)).col(0);
            let span = Matrix::from_columns(&field, v.dim(i + 1), &images);
            match linalg::solve(&span, &Matrix::column(&field, y.clone())) {
                Some(c) => {
                    // Subtract the older bars along the whole history of bar k.
                    let len = bars[k].history.len();
                    for (jj, &j) in kept.iter().enumerate() {
                        let cj = c.get(jj, 0).clone();
                        if field.is_zero(&cj) {
                            continue;
                        }
                        for t in 0..len {
                            let deg = bars[k].birth + t as i64;
                            let tj = (deg - bars[j].birth) as usize;
                            let xj = bars[j].history[tj].clone();
                            let xk = &mut bars[k].history[t];
                            for (p, q) in xk.iter_mut().zip(&xj) {
                                *p = field.sub(p, &field.mul(&cj, q));
                            }
                        }
                    }
                    bars[k].death = Some(i);
                }
                None => {
                    kept.push(k);
                    images.push(y);
                }
            }
        }
        for (&k, y) in kept.iter().zip(&images) {
            bars[k].history.push(y.clone());
        }
        let span = Matrix::from_columns(&field, v.dim(i + 1), &images);
        let comp = linalg::complement(&span, v.dim(i + 1));
        for c in 0..comp.cols() {
            bars.push(Bar {
                birth: i + 1,
                death: None,
                history: vec![comp.col(c)],
            });
        }
    }

    let interval = |b: &Bar<F>| {
        let a = if b.birth == lo { Endpoint::NegInf } else { Endpoint::Fin(b.birth) };
        let e = match b.death {
            Some(d) => Endpoint::Fin(d),
            None => Endpoint::PosInf,
        };
        Interval::new(a, e).expect("bars die after birth")
    };
    let mut order: Vec<usize> = (0..bars.len()).collect();
    order.sort_by_key(|&k| (interval(&bars[k]), k));
    let mut multiset = BTreeMap::new();
    for &k in &order {
        *multiset.entry(interval(&bars[k])).or_insert(0) += 1;
    }

    let assembled = assemble(&field, &multiset);
    let vector_at = |b: &Bar<F>, deg: i64| -> Option<Vec<F::Elem>> {
        let clamped = deg.clamp(lo, hi);
        if clamped < b.birth {
            return None;
        }
        if let Some(d) = b.death {
            if clamped > d {
                return None;
            }
        }
        b.history.get((clamped - b.birth) as usize).cloned()
    };
    let one = GradedHom::from_fn(&assembled, v, 0, lo, hi, |i| {
        let cols: Vec<Vec<F::Elem>> = order
            .iter()
            .filter(|&&k| interval(&bars[k]).contains(i))
            .map(|&k| vector_at(&bars[k], i).expect("bar alive in its interval"))
            .collect();
        Matrix::from_columns(&field, v.dim(i), &cols)
    });
    let certificate = HatMorphism::type_one(one).expect("bar bases commute with the maps");
    Barcode {
        bars: multiset,
        certificate: Some(certificate),
    }
}

/// Degreewise invertibility of a type-1 morphism, checked over the frame.
pub fn is_isomorphism<F: Field>(f: &HatMorphism<F>) -> bool {
    if !f.is_type_one() {
        return false;
    }
    let one = f.one();
    (one.lo() - 2..=one.hi() + 2).all(|i| linalg::inverse(&one.component(i)).is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundedClass {
    Sb,
    B,
    Plus,
    Minus,
    Unbounded,
}

impl fmt::Display for BoundedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundedClass::Sb => "sb",
            BoundedClass::B => "b",
            BoundedClass::Plus => "plus",
            BoundedClass::Minus => "minus",
            BoundedClass::Unbounded => "unbounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub injective: bool,
    pub acyclic: bool,
    pub h_projective: bool,
    /// Class of the image in the derived category of `k[ε]`-modules.
    pub bounded_class: BoundedClass,
    pub finitely_generated_degreewise: bool,
    pub indecomposable: bool,
}

pub fn classify<F: Field>(v: &Seq<F>) -> Classification {
    let maps: Vec<Matrix<F>> = (v.lo() - 1..=v.hi()).map(|i| v.map(i)).collect();
    let injective = maps.iter().all(|m| linalg::rank(m) == m.rows());
    let acyclic = maps.iter().all(|m| m.is_square() && linalg::rank(m) == m.rows());
    let bars = multiplicities(v);
    // In the derived category S_{a,∞} becomes S_{-∞,a} and S_{-∞,∞} vanishes;
    // everything is bounded, and strictly so unless a half-line survives.
    let half_line = bars.keys().any(|iv| iv.a.is_finite() != iv.b.is_finite());
    Classification {
        injective,
        acyclic,
        h_projective: v.right().dim() == 0,
        bounded_class: if half_line { BoundedClass::B } else { BoundedClass::Sb },
        finitely_generated_degreewise: true,
        indecomposable: bars.values().sum::<usize>() == 1,
    }
}

/// The largest subobject on which every `d^i` is surjective: the images of the
/// far left tail. Zero when the left tail is zero.
pub fn max_injective_subobject<F: Field>(v: &Seq<F>) -> (Seq<F>, HatMorphism<F>) {
    let field = v.field().clone();
    let s = v.left().dim();
    if s == 0 {
        let z = Seq::zero(&field);
        let inc = HatMorphism::zero(&z, v);
        return (z, inc);
    }
    let (lo, hi) = (v.lo() - 1, v.hi() + 1);
    let mut bases = vec![Matrix::identity(&field, s)];
    for i in lo..hi {
        let next = &v.map(i) * bases.last().expect("nonempty");
        bases.push(linalg::canonical_span(&next));
    }
    let basis = |i: i64| bases[(i.clamp(lo, hi) - lo) as usize].clone();
    let restricted = |i: i64| {
        let image = &v.map(i) * &basis(i);
        linalg::coordinates(&basis(i + 1), &image).expect("images stay in the next image")
    };
    let pres = Presentation {
        lo,
        dims: (lo..=hi).map(|i| basis(i).cols()).collect(),
        maps: (lo..hi).map(restricted).collect(),
        incoming: restricted(lo - 1),
        outgoing: restricted(hi),
    };
    let right = if basis(hi).cols() > 0 { TailKind::Iso } else { TailKind::Zero };
    let sub = Seq::from_presentation(&field, pres, TailKind::Iso, right).expect("tails of the image are stable");
    let inc = GradedHom::from_fn(&sub, v, 0, lo, hi, basis);
    let inc = HatMorphism::type_one(inc).expect("inclusion of a subobject commutes");
    (sub, inc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::seq::Endpoint::{Fin, NegInf, PosInf};

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn s(a: Endpoint, b: Endpoint) -> Seq<Fp> {
        Seq::interval(&f5(), a, b).unwrap()
    }

    fn bars(list: &[(Endpoint, Endpoint, usize)]) -> BTreeMap<Interval, usize> {
        list.iter().map(|&(a, b, m)| (Interval::new(a, b).unwrap(), m)).collect()
    }

    fn seq2(map: &[i64], dims: [usize; 2]) -> Seq<Fp> {
        let f = f5();
        Seq::new(
            &f,
            0,
            dims.to_vec(),
            vec![Matrix::from_i64(&f, dims[1], dims[0], map)],
            Tail::Zero,
            Tail::Zero,
        )
        .unwrap()
    }

    #[test]
    fn rank_pairing_examples() {
        assert_eq!(rank_pairing(&s(Fin(0), Fin(1)), Fin(0), Fin(1)).unwrap(), 1);
        let v = s(Fin(0), Fin(0)).direct_sum(&s(Fin(1), Fin(1)));
        assert_eq!(rank_pairing(&v, Fin(0), Fin(1)).unwrap(), 0);
        assert_eq!(rank_pairing(&s(NegInf, Fin(0)), NegInf, Fin(0)).unwrap(), 1);
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&seq2(&[1], [1, 1]));
        assert_eq!(d.bars, bars(&[(Fin(0), Fin(1), 1)]));
        let d = decompose(&seq2(&[0], [1, 1]));
        assert_eq!(d.bars, bars(&[(Fin(0), Fin(0), 1), (Fin(1), Fin(1), 1)]));
        let d = decompose(&seq2(&[1, 0], [2, 1]));
        assert_eq!(d.bars, bars(&[(Fin(0), Fin(1), 1), (Fin(0), Fin(0), 1)]));
    }

    #[test]
    fn certificate_is_an_isomorphism_from_the_assembly() {
        let v = seq2(&[1, 2, 3, 4], [2, 2]).direct_sum(&s(NegInf, Fin(1))).direct_sum(&s(Fin(0), PosInf));
        let d = decompose(&v);
        let cert = d.certificate.unwrap();
        assert!(is_isomorphism(&cert));
        assert_eq!(cert.src(), &assemble(&f5(), &d.bars));
        assert_eq!(cert.dst(), &v);
        assert_eq!(d.bars, multiplicities(&v));
    }

    #[test]
    fn assemble_examples() {
        let f = f5();
        assert!(assemble(&f, &BTreeMap::new()).is_zero());
        let v = assemble(&f, &bars(&[(Fin(0), Fin(0), 2)]));
        assert_eq!((v.lo(), v.hi(), v.window_dims()), (0, 0, &[2usize][..]));
        let v = assemble(&f, &bars(&[(NegInf, Fin(0), 1), (Fin(0), PosInf, 1)]));
        assert_eq!((v.lo(), v.hi(), v.window_dims()), (0, 0, &[2usize][..]));
        assert_eq!((v.left().dim(), v.right().dim()), (1, 1));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&s(NegInf, PosInf));
        assert!(c.injective && c.acyclic && !c.h_projective);
        let c = classify(&s(Fin(0), Fin(0)));
        assert!(!c.injective && !c.acyclic && c.h_projective && c.indecomposable);
        assert_eq!(c.bounded_class, BoundedClass::Sb);
        let c = classify(&s(NegInf, Fin(0)));
        assert!(c.injective && !c.acyclic && c.h_projective);
        assert_eq!(c.bounded_class, BoundedClass::B);
        let c = classify(&Seq::zero(&f5()));
        assert!(c.acyclic && !c.indecomposable);
    }

    #[test]
    fn max_injective_examples() {
        let (z, _) = max_injective_subobject(&s(Fin(0), Fin(3)));
        assert!(z.is_zero());
        let v = s(NegInf, PosInf);
        assert_eq!(max_injective_subobject(&v).0, v);
        let v = s(NegInf, Fin(0)).direct_sum(&s(Fin(0), Fin(1)));
        let (sub, inc) = max_injective_subobject(&v);
        assert_eq!(sub, s(NegInf, Fin(0)));
        assert_eq!(inc.dst(), &v);
        assert!(classify(&sub).injective);
    }
}
