//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dualseq_core::dualnum::{EpsComplex, EpsMat};
use dualseq_core::hom::{hom_complex, EpsSpace};
use dualseq_core::{Endpoint, Field, GradedHom, HatMorphism, Interval, Matrix, Seq, Tail};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem<F: Field>(rng: &mut Rng8, f: &F) -> F::Elem {
    match f.order() {
        Some(q) => f.enumerate(rng.gen_range(0..q)),
        None => f.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn matrix<F: Field>(rng: &mut Rng8, f: &F, r: usize, c: usize) -> Matrix<F> {
    let data: Vec<F::Elem> = (0..r * c).map(|_| elem(rng, f)).collect();
    Matrix::from_vectorized(f, r, c, &data)
}

pub fn invertible<F: Field>(rng: &mut Rng8, f: &F, n: usize) -> Matrix<F> {
    loop {
        let m = matrix(rng, f, n, n);
        if dualseq_core::linalg::inverse(&m).is_some() {
            return m;
        }
    }
}

/// Every interval with endpoints in `[lo, hi] ∪ {±∞}`.
pub fn grid(lo: i64, hi: i64) -> Vec<(Endpoint, Endpoint)> {
    let starts: Vec<Endpoint> = std::iter::once(Endpoint::NegInf).chain((lo..=hi).map(Endpoint::Fin)).collect();
    let ends: Vec<Endpoint> = (lo..=hi).map(Endpoint::Fin).chain(std::iter::once(Endpoint::PosInf)).collect();
    let mut out = Vec::new();
    for &a in &starts {
        for &b in &ends {
            if a <= b {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn endpoint(rng: &mut Rng8, lo: i64, hi: i64, inf: Endpoint) -> Endpoint {
    if rng.gen_bool(0.2) {
        inf
    } else {
        Endpoint::Fin(rng.gen_range(lo..=hi))
    }
}

pub fn interval(rng: &mut Rng8, lo: i64, hi: i64) -> Interval {
    loop {
        let a = endpoint(rng, lo, hi, Endpoint::NegInf);
        let b = endpoint(rng, lo, hi, Endpoint::PosInf);
        if let Ok(iv) = Interval::new(a, b) {
            return iv;
        }
    }
}

pub fn bars(rng: &mut Rng8, max: usize, lo: i64, hi: i64) -> BTreeMap<Interval, usize> {
    let n = rng.gen_range(0..=max);
    let mut out = BTreeMap::new();
    for _ in 0..n {
        *out.entry(interval(rng, lo, hi)).or_insert(0) += 1;
    }
    out
}

/// `V` with a random change of basis in every window degree, so that its
/// maps are no longer in interval normal form.
pub fn scramble<F: Field>(rng: &mut Rng8, v: &Seq<F>) -> Seq<F> {
    let f = v.field().clone();
    let (lo, hi) = (v.lo(), v.hi());
    let p: Vec<Matrix<F>> = (lo..=hi).map(|i| invertible(rng, &f, v.dim(i))).collect();
    let pinv: Vec<Matrix<F>> = p.iter().map(|m| dualseq_core::linalg::inverse(m).unwrap()).collect();
    let at = |i: i64| (i - lo) as usize;
    let maps = (lo..hi).map(|i| &(&p[at(i + 1)] * &v.map(i)) * &pinv[at(i)]).collect();
    let left = match v.left() {
        Tail::Zero => Tail::Zero,
        Tail::Iso { dim, .. } => Tail::Iso {
            dim: *dim,
            link: &p[0] * &v.map(lo - 1),
        },
    };
    let right = match v.right() {
        Tail::Zero => Tail::Zero,
        Tail::Iso { dim, .. } => Tail::Iso {
            dim: *dim,
            link: &v.map(hi) * &pinv[at(hi)],
        },
    };
    Seq::new(&f, lo, v.window_dims().to_vec(), maps, left, right).unwrap()
}

pub fn seq<F: Field>(rng: &mut Rng8, f: &F, max_bars: usize, lo: i64, hi: i64) -> Seq<F> {
    let b = bars(rng, max_bars, lo, hi);
    let v = dualseq_core::barcode::assemble(f, &b);
    scramble(rng, &v)
}

/// A sequence with arbitrary maps on `[lo, lo + dims.len() - 1]` and zero
/// tails.
pub fn finite_seq<F: Field>(rng: &mut Rng8, f: &F, lo: i64, dims: &[usize]) -> Seq<F> {
    let maps = dims.windows(2).map(|w| matrix(rng, f, w[1], w[0])).collect();
    Seq::new(f, lo, dims.to_vec(), maps, Tail::Zero, Tail::Zero).unwrap()
}

/// A degree-`n` element with random components on `[lo, hi]` and random
/// 2-periodic tails.
pub fn graded<F: Field>(rng: &mut Rng8, v: &Seq<F>, w: &Seq<F>, n: i64, lo: i64, hi: i64) -> GradedHom<F> {
    let f = v.field().clone();
    let (a, b) = GradedHom::frame(v, w, n);
    let (a, b) = (a.min(lo), b.max(hi));
    let left = [matrix(rng, &f, w.dim(n + a - 2), v.dim(a - 2)), matrix(rng, &f, w.dim(n + a - 1), v.dim(a - 1))];
    let right = [matrix(rng, &f, w.dim(n + b + 1), v.dim(b + 1)), matrix(rng, &f, w.dim(n + b + 2), v.dim(b + 2))];
    let mid: Vec<Matrix<F>> = (a..=b).map(|i| matrix(rng, &f, w.dim(n + i), v.dim(i))).collect();
    GradedHom::from_fn(v, w, n, a, b, |i| {
        if i < a {
            left[(i - a + 2).rem_euclid(2) as usize].clone()
        } else if i > b {
            right[(i - b - 1).rem_euclid(2) as usize].clone()
        } else {
            mid[(i - a) as usize].clone()
        }
    })
}

/// Random combination of the basis of `Hom_S(V, W)` plus a random type-ε
/// class.
pub fn hat<F: Field>(rng: &mut Rng8, v: &Seq<F>, w: &Seq<F>) -> HatMorphism<F> {
    let f = v.field().clone();
    let data = hom_complex(v, w, None).unwrap();
    let mut one = GradedHom::zero(v, w, 0);
    for b in &data.hom_s {
        one = one.try_add(&b.scale(&elem(rng, &f))).unwrap();
    }
    let coords: Vec<F::Elem> = (0..data.eps.dim()).map(|_| elem(rng, &f)).collect();
    HatMorphism::new(one, data.eps.from_coordinates(&coords)).unwrap()
}

pub fn eps_class<F: Field>(rng: &mut Rng8, v: &Seq<F>, w: &Seq<F>) -> HatMorphism<F> {
    let f = v.field().clone();
    let eps = EpsSpace::new(v, w);
    let coords: Vec<F::Elem> = (0..eps.dim()).map(|_| elem(rng, &f)).collect();
    HatMorphism::type_eps(eps.from_coordinates(&coords)).unwrap()
}

/// A finite complex of free `k[ε]`-modules: a minimal part built from a
/// random sequence, contractible pairs `k[ε] --1--> k[ε]`, then a random
/// change of basis by `k[ε]`-automorphisms in every degree.
pub fn eps_complex<F: Field>(rng: &mut Rng8, f: &F, max_rank: usize, width: usize) -> EpsComplex<F> {
    let lo = rng.gen_range(-3..=0);
    let width = rng.gen_range(1..=width);
    let mut ranks = vec![0usize; width];
    let mut minimal = vec![0usize; width];
    let mut pairs: Vec<usize> = Vec::new();
    for k in 0..width {
        minimal[k] = rng.gen_range(0..=max_rank.min(2));
        ranks[k] = minimal[k];
    }
    for k in 0..width.saturating_sub(1) {
        if ranks[k] < max_rank && ranks[k + 1] < max_rank && rng.gen_bool(0.5) {
            pairs.push(k);
            ranks[k] += 1;
            ranks[k + 1] += 1;
        }
    }
    // Positions of the contractible generators inside each degree.
    let mut next = minimal.clone();
    let mut slot = Vec::new();
    for &k in &pairs {
        slot.push((next[k], next[k + 1]));
        next[k] += 1;
        next[k + 1] += 1;
    }
    let mut d1 = Vec::new();
    let mut deps = Vec::new();
    for k in 0..width.saturating_sub(1) {
        let mut one = Matrix::zeros(f, ranks[k + 1], ranks[k]);
        let mut eps = Matrix::zeros(f, ranks[k + 1], ranks[k]);
        eps.set_block(0, 0, &matrix(rng, f, minimal[k + 1], minimal[k]));
        for (&p, &(s, t)) in pairs.iter().zip(&slot) {
            if p == k {
                one.set(t, s, f.one());
            }
        }
        d1.push(one);
        deps.push(eps);
    }
    // Change of basis P = P_1 + ε P_ε with inverse P_1^{-1} - ε P_1^{-1} P_ε P_1^{-1}.
    let p: Vec<EpsMat<F>> = ranks
        .iter()
        .map(|&r| EpsMat::new(invertible(rng, f, r), matrix(rng, f, r, r)).unwrap())
        .collect();
    let pinv: Vec<EpsMat<F>> = p
        .iter()
        .map(|m| {
            let i1 = dualseq_core::linalg::inverse(&m.one).unwrap();
            let ie = -&(&(&i1 * &m.eps) * &i1);
            EpsMat::new(i1, ie).unwrap()
        })
        .collect();
    let mut nd1 = Vec::new();
    let mut ndeps = Vec::new();
    for k in 0..width.saturating_sub(1) {
        let d = EpsMat::new(d1[k].clone(), deps[k].clone()).unwrap();
        let c = p[k + 1].mul(&d).mul(&pinv[k]);
        nd1.push(c.one);
        ndeps.push(c.eps);
    }
    EpsComplex::finite(f, lo, ranks, nd1, ndeps).unwrap()
}

/// Rank over any field by plain Gaussian elimination on a copy, independent
/// of the library's echelon code.
pub fn naive_rank<F: Field>(m: &Matrix<F>) -> usize {
    let f = m.field().clone();
    let mut a: Vec<Vec<F::Elem>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !f.is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = f.inv(&a[rank][c]).unwrap();
        for r in 0..rows {
            if r != rank && !f.is_zero(&a[r][c]) {
                let k = f.mul(&a[r][c], &inv);
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A sequence over `F_2` on degrees `0..dims.len()` with zero tails. Vectors
/// are bitmasks; `maps[k][j]` is the image of the `j`-th basis vector.
#[derive(Clone, Debug)]
pub struct F2Seq {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<u32>>,
}

fn apply(cols: &[u32], x: u32) -> u32 {
    cols.iter()
        .enumerate()
        .filter(|(j, _)| x >> j & 1 == 1)
        .fold(0, |acc, (_, c)| acc ^ c)
}

fn pair(phi: u32, x: u32) -> u32 {
    (phi & x).count_ones() & 1
}

/// `φ ∘ d` as a functional.
fn pull(phi: u32, cols: &[u32]) -> u32 {
    cols.iter()
        .enumerate()
        .fold(0, |acc, (j, &c)| acc | pair(phi, c) << j)
}

impl F2Seq {
    fn len(&self) -> usize {
        self.dims.len()
    }

    fn map(&self, k: usize) -> &[u32] {
        &self.maps[k]
    }

    /// An inclusion of `S_{a,b}` (given by its vectors) and a retraction of
    /// it, found by exhaustive search.
    fn find_summand(&self, a: usize, b: usize) -> Option<(Vec<u32>, Vec<u32>)> {
        'outer: for x0 in 1..1u32 << self.dims[a] {
            let mut xs = vec![x0];
            for k in a..b {
                xs.push(apply(self.map(k), xs[xs.len() - 1]));
            }
            if b + 1 < self.len() && apply(self.map(b), xs[xs.len() - 1]) != 0 {
                continue 'outer;
            }
            for phi_b in 1..1u32 << self.dims[b] {
                let mut phis = vec![phi_b];
                for k in (a..b).rev() {
                    let next = pull(phis[phis.len() - 1], self.map(k));
                    phis.push(next);
                }
                phis.reverse();
                if a > 0 && pull(phis[0], self.map(a - 1)) != 0 {
                    continue;
                }
                if xs.iter().zip(&phis).all(|(&x, &p)| pair(p, x) == 1) {
                    return Some((xs, phis));
                }
            }
        }
        None
    }

    /// The kernel of the retraction, with its own bases.
    fn complement(&self, a: usize, b: usize, phis: &[u32]) -> F2Seq {
        let basis: Vec<Vec<u32>> = (0..self.len())
            .map(|k| {
                let all = 1u32 << self.dims[k];
                let mut chosen: Vec<u32> = Vec::new();
                for y in 1..all {
                    let keep = !(a..=b).contains(&k) || pair(phis[k - a], y) == 0;
                    if keep && !span(&chosen).contains(&y) {
                        chosen.push(y);
                    }
                }
                chosen
            })
            .collect();
        let maps = (0..self.len() - 1)
            .map(|k| {
                basis[k]
                    .iter()
                    .map(|&y| {
                        let img = apply(self.map(k), y);
                        coords(&basis[k + 1], img).expect("kernel is d-stable")
                    })
                    .collect()
            })
            .collect();
        F2Seq {
            dims: basis.iter().map(Vec::len).collect(),
            maps,
        }
    }

    /// Interval multiplicities by repeatedly splitting off summands.
    pub fn brute_force_bars(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        let mut cur = self.clone();
        'search: loop {
            for a in 0..cur.len() {
                for b in a..cur.len() {
                    if let Some((_, phis)) = cur.find_summand(a, b) {
                        *out.entry((a as i64, b as i64)).or_insert(0) += 1;
                        cur = cur.complement(a, b, &phis);
                        continue 'search;
                    }
                }
            }
            break;
        }
        assert!(cur.dims.iter().all(|&d| d == 0), "every nonzero sequence has an interval summand");
        out
    }

    /// Every sequence with the given dimensions.
    pub fn all_with_dims(dims: &[usize]) -> Vec<F2Seq> {
        let mut out = vec![F2Seq {
            dims: dims.to_vec(),
            maps: Vec::new(),
        }];
        for k in 0..dims.len() - 1 {
            let mut next = Vec::new();
            for s in &out {
                for cols in all_matrices(dims[k + 1], dims[k]) {
                    let mut t = s.clone();
                    t.maps.push(cols);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    pub fn to_seq<F: Field>(&self, f: &F) -> Seq<F> {
        let maps = (0..self.len() - 1)
            .map(|k| {
                let (r, c) = (self.dims[k + 1], self.dims[k]);
                let mut m = Matrix::zeros(f, r, c);
                for (j, &col) in self.maps[k].iter().enumerate() {
                    for i in 0..r {
                        if col >> i & 1 == 1 {
                            m.set(i, j, f.one());
                        }
                    }
                }
                m
            })
            .collect();
        Seq::new(f, 0, self.dims.clone(), maps, Tail::Zero, Tail::Zero).unwrap()
    }
}

fn span(vs: &[u32]) -> Vec<u32> {
    (0..1u32 << vs.len()).map(|c| apply(vs, c)).collect()
}

fn coords(basis: &[u32], y: u32) -> Option<u32> {
    (0..1u32 << basis.len()).find(|&c| apply(basis, c) == y)
}

fn all_matrices(rows: usize, cols: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..cols {
        let mut next = Vec::new();
        for m in &out {
            for c in 0..1u32 << rows {
                let mut t = m.clone();
                t.push(c);
                next.push(t);
            }
        }
        out = next;
    }
    out
}
