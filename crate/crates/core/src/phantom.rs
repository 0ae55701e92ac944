//! Phantom morphisms, and derivations on finite diagrams.
//!
//! A morphism `f: V -> W` is phantom when `f ∘ β_{V,n}` vanishes for every
//! truncation `β_{V,n}: V^{>=n} -> V`. Only finitely many levels can be
//! inspected; the verdict comes with the dimensions seen at each level so the
//! caller can judge how settled it is.

use alloc::string::String;
use alloc::vec::Vec;

use crate::barcode::classify;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedHom;
use crate::hat::HatMorphism;
use crate::hom::{base_frame, EpsSpace};
use crate::linalg;
use crate::matrix::Matrix;
use crate::seq::{Seq, Tail};
use crate::triang::truncation_triangle;

/// Dimension of the phantom candidates after each truncation level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhantomCertificate {
    pub levels: Vec<i64>,
    pub dims: Vec<usize>,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct PhantomSubspace<F: Field> {
    /// Canonical representatives in `Hom^ε(V, W)`.
    pub basis: Vec<GradedHom<F>>,
    /// `None` when the source has a zero left tail.
    pub certificate: Option<PhantomCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomReason {
    /// The type-1 part is nonzero.
    TypeOne,
    /// The source is compact, so only zero is phantom.
    CompactSource,
    /// Decided by the truncation levels in the certificate.
    Truncations,
}

#[derive(Clone, Debug)]
pub struct PhantomVerdict {
    pub phantom: bool,
    pub reason: PhantomReason,
    pub certificate: Option<PhantomCertificate>,
}

fn require_h_projective<F: Field>(v: &Seq<F>, name: &str) -> Result<()> {
    if classify(v).h_projective {
        Ok(())
    } else {
        Err(Error::NotHProjective(alloc::format!("{name} is not h-projective")))
    }
}

/// Subspace of `Hom^ε(V, W)` killed by every truncation level. Levels run
/// from `hi_V + 1` down to `depth + 1` steps below the base frame of the
/// pair; the levels below the frame are recorded, and the last three must
/// agree.
pub fn phantom_basis<F: Field>(v: &Seq<F>, w: &Seq<F>, depth: usize) -> Result<PhantomSubspace<F>> {
    require_h_projective(v, "source")?;
    require_h_projective(w, "target")?;
    if matches!(v.left(), Tail::Zero) {
        return Ok(PhantomSubspace {
            basis: Vec::new(),
            certificate: None,
        });
    }
    if depth < 2 {
        return Err(Error::StabilizationDepthExceeded { depth });
    }
    let field = v.field().clone();
    let eps = EpsSpace::new(v, w);
    let basis = eps.basis();
    let mut constraints = Matrix::zeros(&field, 0, basis.len());
    let mut cert = PhantomCertificate {
        levels: Vec::new(),
        dims: Vec::new(),
        depth,
    };
    let (frame_lo, _) = base_frame(v, w);
    let bottom = frame_lo - 1 - depth as i64;
    for n in (bottom..=v.hi() + 1).rev() {
        let beta = truncation_triangle(v, n)?.u;
        let level = EpsSpace::new(beta.src(), w);
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            cols.push(level.coordinates(&GradedHom::compose(b, beta.one())?)?);
        }
        let m = Matrix::from_columns(&field, level.dim(), &cols);
        constraints = Matrix::vstack(&field, basis.len(), &[&constraints, &m]);
        if n < frame_lo {
            cert.levels.push(n);
            cert.dims.push(basis.len() - linalg::rank(&constraints));
        }
    }
    let tail = &cert.dims[cert.dims.len() - 3..];
    if tail.iter().any(|&d| d != tail[0]) {
        return Err(Error::StabilizationDepthExceeded { depth });
    }
    let kernel = linalg::kernel(&constraints);
    let basis = (0..kernel.cols())
        .map(|j| eps.canonical(&eps.from_coordinates(&kernel.col(j))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhantomSubspace {
        basis,
        certificate: Some(cert),
    })
}

pub fn is_phantom<F: Field>(f: &HatMorphism<F>, depth: usize) -> Result<PhantomVerdict> {
    let (v, w) = (f.src(), f.dst());
    require_h_projective(v, "source")?;
    require_h_projective(w, "target")?;
    if !f.is_type_eps() {
        return Ok(PhantomVerdict {
            phantom: false,
            reason: PhantomReason::TypeOne,
            certificate: None,
        });
    }
    if matches!(v.left(), Tail::Zero) {
        return Ok(PhantomVerdict {
            phantom: f.is_zero(),
            reason: PhantomReason::CompactSource,
            certificate: None,
        });
    }
    let sub = phantom_basis(v, w, depth)?;
    let eps = EpsSpace::new(v, w);
    let field = v.field().clone();
    let cols = sub
        .basis
        .iter()
        .map(|b| eps.coordinates(b))
        .collect::<Result<Vec<_>>>()?;
    let span = Matrix::from_columns(&field, eps.dim(), &cols);
    let target = Matrix::column(&field, eps.coordinates(f.eps())?);
    Ok(PhantomVerdict {
        phantom: linalg::in_span(&span, &target),
        reason: PhantomReason::Truncations,
        certificate: sub.certificate,
    })
}

#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub map: HatMorphism<F>,
}

/// `lhs = rhs`, or `lhs = 0` when `rhs` is `None`. Paths list generator
/// indices in the order they are applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Vec<usize>,
    pub rhs: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Diagram<F: Field> {
    objects: Vec<(String, Seq<F>)>,
    generators: Vec<Generator<F>>,
    relations: Vec<Relation>,
}

impl<F: Field> Diagram<F> {
    /// Checks that generator endpoints match their objects, that every path
    /// is composable and that every relation holds.
    pub fn new(objects: Vec<(String, Seq<F>)>, generators: Vec<Generator<F>>, relations: Vec<Relation>) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidDiagram(s));
        for g in &generators {
            let (Some(src), Some(dst)) = (objects.get(g.src), objects.get(g.dst)) else {
                return bad(alloc::format!("generator {} refers to a missing object", g.name));
            };
            if g.map.src() != &src.1 || g.map.dst() != &dst.1 {
                return bad(alloc::format!("generator {} does not match its objects", g.name));
            }
        }
        let d = Diagram {
            objects,
            generators,
            relations,
        };
        for (k, r) in d.relations.iter().enumerate() {
            let lhs = d.path_endpoints(&r.lhs)?;
            let holds = match &r.rhs {
                Some(rhs) => {
                    if d.path_endpoints(rhs)? != lhs {
                        return bad(alloc::format!("relation {k} compares paths with different endpoints"));
                    }
                    d.evaluate(&r.lhs)? == d.evaluate(rhs)?
                }
                None => d.evaluate(&r.lhs)?.is_zero(),
            };
            if !holds {
                return bad(alloc::format!("relation {k} does not hold"));
            }
        }
        Ok(d)
    }

    pub fn objects(&self) -> &[(String, Seq<F>)] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator<F>] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn path_endpoints(&self, path: &[usize]) -> Result<(usize, usize)> {
        let gen = |k: usize| {
            self.generators
                .get(k)
                .ok_or_else(|| Error::InvalidDiagram(alloc::format!("unknown generator {k}")))
        };
        let first = path
            .first()
            .ok_or_else(|| Error::InvalidDiagram("empty path".into()))?;
        let src = gen(*first)?.src;
        let mut at = gen(*first)?.dst;
        for &k in &path[1..] {
            let g = gen(k)?;
            if g.src != at {
                return Err(Error::InvalidDiagram(alloc::format!("path breaks at generator {}", g.name)));
            }
            at = g.dst;
        }
        Ok((src, at))
    }

    fn evaluate(&self, path: &[usize]) -> Result<HatMorphism<F>> {
        let mut acc = self.generators[path[0]].map.clone();
        for &k in &path[1..] {
            acc = HatMorphism::compose(&self.generators[k].map, &acc)?;
        }
        Ok(acc)
    }
}

/// Values `D(g)` on the generators, all of type ε.
#[derive(Clone, Debug)]
pub struct Derivation<F: Field> {
    pub values: Vec<HatMorphism<F>>,
}

impl<F: Field> Derivation<F> {
    pub fn zero(d: &Diagram<F>) -> Self {
        Derivation {
            values: d.generators.iter().map(|g| HatMorphism::zero(g.map.src(), g.map.dst())).collect(),
        }
    }

    /// `D(f) = f θ_V - θ_W f`.
    pub fn inner(d: &Diagram<F>, theta: &[HatMorphism<F>]) -> Result<Self> {
        if theta.len() != d.objects.len() {
            return Err(Error::InvalidDiagram("one θ per object is needed".into()));
        }
        let values = d
            .generators
            .iter()
            .map(|g| {
                let a = HatMorphism::compose(&g.map, &theta[g.src])?;
                let b = HatMorphism::compose(&theta[g.dst], &g.map)?;
                a.try_sub(&b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { values })
    }

    /// `D` extended along a path by the Leibniz rule.
    fn along(&self, d: &Diagram<F>, path: &[usize]) -> Result<HatMorphism<F>> {
        let mut map = d.generators[path[0]].map.clone();
        let mut der = self.values[path[0]].clone();
        for &k in &path[1..] {
            let g = &d.generators[k].map;
            der = HatMorphism::compose(&self.values[k], &map)?.try_add(&HatMorphism::compose(g, &der)?)?;
            map = HatMorphism::compose(g, &map)?;
        }
        Ok(der)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeibnizCheck {
    Ok,
    /// The relation at this index is not respected.
    Violated { relation: usize },
    /// The value on this generator is not of type ε, or is nonzero on an
    /// identity generator.
    BadValue { generator: usize },
}

/// Leibniz on every declared relation, plus `D(id) = 0` for generators that
/// are identities.
pub fn check_derivation<F: Field>(d: &Diagram<F>, der: &Derivation<F>) -> Result<LeibnizCheck> {
    if der.values.len() != d.generators.len() {
        return Err(Error::InvalidDiagram("one value per generator is needed".into()));
    }
    for (k, (g, val)) in d.generators.iter().zip(&der.values).enumerate() {
        if val.src() != g.map.src() || val.dst() != g.map.dst() {
            return Err(Error::InvalidDiagram(alloc::format!("value on {} has the wrong shape", g.name)));
        }
        let is_identity = g.src == g.dst && g.map == HatMorphism::identity(g.map.src());
        if !val.is_type_eps() || (is_identity && !val.is_zero()) {
            return Ok(LeibnizCheck::BadValue { generator: k });
        }
    }
    for (k, r) in d.relations.iter().enumerate() {
        let lhs = der.along(d, &r.lhs)?;
        let ok = match &r.rhs {
            Some(rhs) => lhs == der.along(d, rhs)?,
            None => lhs.is_zero(),
        };
        if !ok {
            return Ok(LeibnizCheck::Violated { relation: k });
        }
    }
    Ok(LeibnizCheck::Ok)
}

/// Some `θ_V ∈ Hom^ε(V, V)` per object with `D(f) = f θ_V - θ_W f` for every
/// generator, if one exists. Free coordinates are set to zero.
pub fn solve_inner<F: Field>(d: &Diagram<F>, der: &Derivation<F>) -> Result<Option<Vec<HatMorphism<F>>>> {
    let field = d.objects.first().map(|o| o.1.field().clone());
    let Some(field) = field else {
        return Ok(Some(Vec::new()));
    };
    let ends: Vec<EpsSpace<F>> = d.objects.iter().map(|(_, v)| EpsSpace::new(v, v)).collect();
    let offsets: Vec<usize> = ends
        .iter()
        .scan(0, |at, e| {
            let o = *at;
            *at += e.dim();
            Some(o)
        })
        .collect();
    let unknowns: usize = ends.iter().map(|e| e.dim()).sum();
    let mut blocks_a = Vec::new();
    let mut blocks_b = Vec::new();
    for (g, val) in d.generators.iter().zip(&der.values) {
        let target = EpsSpace::new(g.map.src(), g.map.dst());
        let mut a = Matrix::zeros(&field, target.dim(), unknowns);
        let mut add = |obj: usize, sign: bool, right: bool| -> Result<()> {
            for (j, t) in ends[obj].basis().into_iter().enumerate() {
                let t = HatMorphism::type_eps(t)?;
                let c = if right {
                    HatMorphism::compose(&g.map, &t)?
                } else {
                    HatMorphism::compose(&t, &g.map)?
                };
                let coords = target.coordinates(c.eps())?;
                for (r, x) in coords.iter().enumerate() {
                    let x = if sign { x.clone() } else { field.neg(x) };
                    let cur = a.get(r, offsets[obj] + j).clone();
                    a.set(r, offsets[obj] + j, field.add(&cur, &x));
                }
            }
            Ok(())
        };
        add(g.src, true, true)?;
        add(g.dst, false, false)?;
        blocks_a.push(a);
        blocks_b.push(Matrix::column(&field, target.coordinates(val.eps())?));
    }
    let a = Matrix::vstack(&field, unknowns, &blocks_a.iter().collect::<Vec<_>>());
    let b = Matrix::vstack(&field, 1, &blocks_b.iter().collect::<Vec<_>>());
    if !der.values.iter().all(|v| v.is_type_eps()) {
        return Ok(None);
    }
    let Some(x) = linalg::solve(&a, &b) else {
        return Ok(None);
    };
    let x = x.col(0);
    ends.iter()
        .zip(&offsets)
        .map(|(e, &o)| HatMorphism::type_eps(e.from_coordinates(&x[o..o + e.dim()])))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::seq::Endpoint::{self, Fin, NegInf, PosInf};
    use alloc::string::ToString;
    use alloc::vec;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    fn s(a: Endpoint, b: Endpoint) -> Seq<Fp> {
        Seq::interval(&f3(), a, b).unwrap()
    }

    #[test]
    fn zero_is_phantom() {
        let v = s(NegInf, Fin(0));
        let verdict = is_phantom(&HatMorphism::zero(&v, &v), 4).unwrap();
        assert!(verdict.phantom);
    }

    #[test]
    fn type_one_is_not_phantom() {
        let v = s(NegInf, Fin(0));
        let verdict = is_phantom(&HatMorphism::identity(&v), 4).unwrap();
        assert!(!verdict.phantom);
        assert_eq!(verdict.reason, PhantomReason::TypeOne);
    }

    #[test]
    fn compact_source() {
        let v = s(Fin(0), Fin(0));
        let verdict = is_phantom(&HatMorphism::eps_identity(&v), 4).unwrap();
        assert!(!verdict.phantom);
        assert_eq!(verdict.reason, PhantomReason::CompactSource);
        assert!(phantom_basis(&v, &v, 4).unwrap().basis.is_empty());
    }

    #[test]
    fn left_infinite_interval_has_no_phantoms() {
        let v = s(NegInf, Fin(0));
        let sub = phantom_basis(&v, &v, 4).unwrap();
        assert!(sub.basis.is_empty());
        assert!(sub.certificate.is_some());
    }

    #[test]
    fn shallow_depth_and_non_projective() {
        let v = s(NegInf, Fin(0));
        assert!(matches!(phantom_basis(&v, &v, 1), Err(Error::StabilizationDepthExceeded { depth: 1 })));
        let a = s(Fin(0), PosInf);
        assert!(matches!(phantom_basis(&a, &v, 4), Err(Error::NotHProjective(_))));
    }

    fn chain() -> Diagram<Fp> {
        let v = s(Fin(0), Fin(1));
        let w = s(Fin(1), Fin(1));
        let field = f3();
        let g = GradedHom::from_fn(&w, &v, 0, -1, 3, |i| {
            if i == 1 {
                Matrix::identity(&field, 1)
            } else {
                Matrix::zeros(&field, v.dim(i), w.dim(i))
            }
        });
        let gens = vec![
            Generator {
                name: "id".to_string(),
                src: 0,
                dst: 0,
                map: HatMorphism::identity(&v),
            },
            Generator {
                name: "g".to_string(),
                src: 1,
                dst: 0,
                map: HatMorphism::type_one(g).unwrap(),
            },
        ];
        let rels = vec![
            Relation {
                lhs: vec![0, 0],
                rhs: Some(vec![0]),
            },
            Relation {
                lhs: vec![1, 0],
                rhs: Some(vec![1]),
            },
        ];
        Diagram::new(vec![("V".to_string(), v), ("W".to_string(), w)], gens, rels).unwrap()
    }

    #[test]
    fn zero_derivation_is_inner() {
        let d = chain();
        let z = Derivation::zero(&d);
        assert_eq!(check_derivation(&d, &z).unwrap(), LeibnizCheck::Ok);
        let theta = solve_inner(&d, &z).unwrap().unwrap();
        assert!(theta.iter().all(|t| t.is_zero()));
    }

    #[test]
    fn inner_derivation_is_recovered() {
        let d = chain();
        let theta: Vec<_> = d.objects().iter().map(|(_, v)| HatMorphism::eps_identity(v)).collect();
        let der = Derivation::inner(&d, &theta).unwrap();
        assert_eq!(check_derivation(&d, &der).unwrap(), LeibnizCheck::Ok);
        let found = solve_inner(&d, &der).unwrap().unwrap();
        let again = Derivation::inner(&d, &found).unwrap();
        for (a, b) in der.values.iter().zip(&again.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn nonzero_on_identity_is_rejected() {
        let v = s(Fin(0), Fin(0));
        let gens = vec![Generator {
            name: "id".to_string(),
            src: 0,
            dst: 0,
            map: HatMorphism::identity(&v),
        }];
        let d = Diagram::new(vec![("V".to_string(), v.clone())], gens, Vec::new()).unwrap();
        let der = Derivation {
            values: vec![HatMorphism::eps_identity(&v)],
        };
        assert_eq!(check_derivation(&d, &der).unwrap(), LeibnizCheck::BadValue { generator: 0 });
    }

    #[test]
    fn false_relation_is_rejected() {
        let v = s(Fin(0), Fin(0));
        let gens = vec![Generator {
            name: "id".to_string(),
            src: 0,
            dst: 0,
            map: HatMorphism::identity(&v),
        }];
        let rels = vec![Relation {
            lhs: vec![0],
            rhs: None,
        }];
        assert!(matches!(
            Diagram::new(vec![("V".to_string(), v)], gens, rels),
            Err(Error::InvalidDiagram(_))
        ));
    }
}
