//! The twelve acceptance criteria, each printed as one PASS/FAIL line.
//!
//! All arithmetic is exact, so every criterion tolerates zero discrepancies.

mod common;

use std::io::Write;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::*;
use dualseq_core::barcode::{assemble, classify, decompose, is_isomorphism, multiplicities};
use dualseq_core::dualnum::{hom_k, EpsComplex, EpsMap, EpsMat};
use dualseq_core::hom::{base_frame, hom_complex, EpsSpace};
use dualseq_core::phantom::{check_derivation, is_phantom, phantom_basis, solve_inner};
use dualseq_core::triang::{cone, extension_from_eps, splits, triangle_from_ses};
use dualseq_core::{
    Derivation, Diagram, Endpoint, Field, Fp, Generator, GradedHom, HatMorphism, LeibnizCheck, Matrix,
    Rationals, Relation, Seq,
};
use rand::Rng;

const ALLOWED_DISCREPANCIES: usize = 0;
const PHANTOM_DEPTH: usize = 4;
const PHANTOM_WIDENING: usize = 2;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn f(p: u32) -> Fp {
    Fp::new(p).unwrap()
}

fn interval<F: Field>(field: &F, a: Endpoint, b: Endpoint) -> Seq<F> {
    Seq::interval(field, a, b).unwrap()
}

fn tally(failures: usize, checked: usize, what: &str) -> Outcome {
    if failures.saturating_sub(ALLOWED_DISCREPANCIES) == 0 {
        Ok(format!("{checked} {what}, {failures} failures"))
    } else {
        Err(format!("{failures} of {checked} {what} failed"))
    }
}

fn leibniz() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    for (seed, p) in [(1u64, 2u32), (2, 5)] {
        let field = f(p);
        let mut r = rng(seed);
        for _ in 0..250 {
            let u = seq(&mut r, &field, 3, -3, 3);
            let v = seq(&mut r, &field, 3, -3, 3);
            let w = seq(&mut r, &field, 3, -3, 3);
            let m = r.gen_range(-2..=2);
            let n = r.gen_range(-2..=2);
            let fm = graded(&mut r, &u, &v, m, -3, 3);
            let gn = graded(&mut r, &v, &w, n, -3, 3);
            let lhs = GradedHom::compose(&gn, &fm).unwrap().differential();
            let a = GradedHom::compose(&gn.differential(), &fm).unwrap();
            let b = GradedHom::compose(&gn, &fm.differential()).unwrap();
            let b = if n.rem_euclid(2) == 1 { b.neg() } else { b };
            if lhs != a.try_add(&b).unwrap() {
                failures += 1;
            }
            checked += 1;
        }
    }
    tally(failures, checked, "triples")
}

fn round_trip() -> Outcome {
    let mut failures = 0;
    let q = Rationals;
    let f5 = f(5);
    let mut r = rng(3);
    for k in 0..300 {
        let ok = if k % 2 == 0 {
            round_trip_one(&mut r, &f5)
        } else {
            round_trip_one(&mut r, &q)
        };
        if !ok {
            failures += 1;
        }
    }
    tally(failures, 300, "barcodes")
}

fn round_trip_one<F: Field>(r: &mut Rng8, field: &F) -> bool {
    let b = bars(r, 8, -4, 4);
    let v = scramble(r, &assemble(field, &b));
    let bc = decompose(&v);
    let Some(cert) = bc.certificate else {
        return false;
    };
    bc.bars == b && cert.src() == &assemble(field, &b) && cert.dst() == &v && is_isomorphism(&cert)
}

fn oracle_equivalence() -> Outcome {
    let f2 = f(2);
    let mut failures = 0;
    let mut checked = 0;
    for d0 in 0..=2 {
        for d1 in 0..=2 {
            for d2 in 0..=2 {
                for s in F2Seq::all_with_dims(&[d0, d1, d2]) {
                    let brute = s.brute_force_bars();
                    let lib: BTreeMap<(i64, i64), usize> = multiplicities(&s.to_seq(&f2))
                        .into_iter()
                        .map(|(iv, m)| ((iv.a().finite().unwrap(), iv.b().finite().unwrap()), m))
                        .collect();
                    if brute != lib {
                        failures += 1;
                    }
                    checked += 1;
                }
            }
        }
    }
    tally(failures, checked, "sequences")
}

fn naive_cohomology<F: Field>(m: &EpsComplex<F>) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for i in m.lo() - 1..=m.hi() + 1 {
        let d = m.differential(i).to_k_matrix();
        let prev = m.differential(i - 1).to_k_matrix();
        let dim = d.cols() - naive_rank(&d) - naive_rank(&prev);
        if dim > 0 {
            out.push((i, dim));
        }
    }
    out
}

fn minimal_reduction() -> Outcome {
    let mut failures = 0;
    let mut r = rng(4);
    let mut reduced = 0;
    for k in 0..200 {
        let field = f(if k % 2 == 0 { 2 } else { 5 });
        let m = eps_complex(&mut r, &field, 4, 6);
        reduced += usize::from(!m.is_minimal());
        let ok = match m.minimize() {
            Ok(min) => {
                min.minimal.is_minimal()
                    && min.equivalence.verify(&m, &min.minimal)
                    && naive_cohomology(&m) == min.minimal.cohomology()
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
    }
    tally(failures, 200, "complexes").map(|t| format!("{t}, {reduced} not minimal on input"))
}

fn hom_dictionary() -> Outcome {
    let field = f(3);
    let mut failures = 0;
    let mut checked = 0;
    let targets = grid(-3, 3);
    for (a, b) in grid(-3, 3) {
        let Endpoint::Fin(n) = a else { continue };
        let src = interval(&field, a, b);
        for &(c, e) in &targets {
            let v = interval(&field, c, e);
            let expected = match b {
                Endpoint::Fin(b) => {
                    let comp = v.composite(n, b + 1);
                    v.dim(n) - naive_rank(&comp)
                }
                _ => v.dim(n),
            };
            let got = hom_complex(&src, &v, None).unwrap().dim_hom_s();
            if got != expected {
                failures += 1;
            }
            checked += 1;
        }
    }
    tally(failures, checked, "pairs")
}

fn ext_bijection() -> Outcome {
    let field = f(2);
    let mut failures = 0;
    let mut classes = 0;
    let mut r = rng(6);
    for _ in 0..100 {
        let x = seq(&mut r, &field, 4, -2, 2);
        let y = seq(&mut r, &field, 4, -2, 2);
        let eps = EpsSpace::new(&x, &y);
        let (lo, hi) = base_frame(&x, &y);
        let mut chosen: Vec<GradedHom<Fp>> = Vec::new();
        let mut agree = true;
        for i in lo..=hi {
            for rr in 0..y.dim(i) {
                for cc in 0..x.dim(i) {
                    let unit = GradedHom::from_fn(&x, &y, 0, lo, hi, |j| {
                        let mut m = Matrix::zeros(&field, y.dim(j), x.dim(j));
                        if j == i {
                            m.set(rr, cc, field.one());
                        }
                        m
                    });
                    // Independent of the chosen classes unless some
                    // combination with them splits.
                    let mut independent = true;
                    for mask in 0..1u32 << chosen.len() {
                        let mut g = unit.clone();
                        for (k, c) in chosen.iter().enumerate() {
                            if mask >> k & 1 == 1 {
                                g = g.try_add(c).unwrap();
                            }
                        }
                        let e = extension_from_eps(&g).unwrap();
                        let split = splits(&e);
                        if let Some(h) = &split {
                            agree &= h.differential() == e.f.neg();
                        }
                        agree &= split.is_some() == eps.is_zero_class(&g).unwrap();
                        if split.is_some() {
                            independent = false;
                            break;
                        }
                    }
                    if independent {
                        chosen.push(unit);
                    }
                }
            }
        }
        if !agree || chosen.len() != eps.dim() {
            failures += 1;
        }
        classes += eps.dim();
    }
    tally(failures, 100, "pairs").map(|t| format!("{t}, {classes} non-split classes in total"))
}

fn classification() -> Outcome {
    let field = f(3);
    let mut failures = 0;
    let mut checked = 0;
    let objects: Vec<(Seq<Fp>, bool)> = grid(-3, 3)
        .into_iter()
        .map(|(a, b)| (interval(&field, a, b), b.is_finite()))
        .collect();
    let mut all: Vec<(Seq<Fp>, Option<bool>)> = objects.iter().map(|(s, h)| (s.clone(), Some(*h))).collect();
    for (k, (s, _)) in objects.iter().enumerate() {
        let (t, _) = &objects[(k * 7 + 3) % objects.len()];
        all.push((s.direct_sum(t), None));
    }
    for (v, hproj) in &all {
        let c = classify(v);
        let maps: Vec<Matrix<Fp>> = (v.lo() - 3..=v.hi() + 3).map(|i| v.map(i)).collect();
        let surj = maps.iter().all(|m| naive_rank(m) == m.rows());
        let iso = maps.iter().all(|m| m.rows() == m.cols() && naive_rank(m) == m.rows());
        let mut ok = c.injective == surj && c.acyclic == iso;
        if let Some(h) = hproj {
            ok &= c.h_projective == *h;
        }
        if !ok {
            failures += 1;
        }
        checked += 1;
    }
    tally(failures, checked, "objects")
}

fn semiorthogonality() -> Outcome {
    let field = f(3);
    let mut r = rng(8);
    let line = interval(&field, Endpoint::NegInf, Endpoint::PosInf);
    let acyclics = [line.clone(), scramble(&mut r, &line.direct_sum(&line))];
    let mut projectives: Vec<Seq<Fp>> = grid(-3, 3)
        .into_iter()
        .filter(|(_, b)| b.is_finite())
        .map(|(a, b)| interval(&field, a, b))
        .collect();
    for _ in 0..10 {
        let a = projectives[r.gen_range(0..projectives.len())].clone();
        let b = projectives[r.gen_range(0..projectives.len())].clone();
        projectives.push(scramble(&mut r, &a.direct_sum(&b)));
    }
    let mut failures = 0;
    let mut checked = 0;
    for p in &projectives {
        assert!(classify(p).h_projective);
        for a in &acyclics {
            let h = hom_complex(p, a, None).unwrap();
            if h.dim_hom_s() + h.dim_hom_eps() != 0 {
                failures += 1;
            }
            checked += 1;
        }
    }
    tally(failures, checked, "pairs")
}

fn cone_laws() -> Outcome {
    let field = f(3);
    let mut r = rng(9);
    let mut failures = 0;
    let mut nonzero = 0;
    for _ in 0..100 {
        let v = seq(&mut r, &field, 4, -2, 2);
        let w = seq(&mut r, &field, 4, -2, 2);
        let mut ok = cone(&HatMorphism::identity(&v)).unwrap().b.is_zero();
        let z = cone(&HatMorphism::zero(&v, &w)).unwrap();
        ok &= multiplicities(&z.b) == multiplicities(&v.direct_sum(&w.shift(-1)));
        let h = eps_class(&mut r, &v, &w);
        nonzero += usize::from(!h.is_zero());
        let t = cone(&h).unwrap();
        ok &= match triangle_from_ses(&t.u, &t.v) {
            Ok(back) => back.w == h,
            Err(_) => false,
        };
        let g = hat(&mut r, &v, &w);
        ok &= cone(&g).unwrap().composites_vanish().unwrap();
        if !ok {
            failures += 1;
        }
    }
    tally(failures, 100, "morphisms").map(|t| format!("{t}, {nonzero} nonzero type-ε inputs"))
}

fn phantom_laws() -> Outcome {
    let field = f(3);
    let mut r = rng(10);
    let objects: Vec<Seq<Fp>> = grid(-2, 2)
        .into_iter()
        .filter(|(_, b)| b.is_finite())
        .map(|(a, b)| interval(&field, a, b))
        .collect();
    let mut failures = 0;
    let mut checked = 0;
    for v in &objects {
        for w in &objects {
            let narrow = phantom_basis(v, w, PHANTOM_DEPTH).unwrap();
            let wide = phantom_basis(v, w, PHANTOM_DEPTH + PHANTOM_WIDENING).unwrap();
            let mut ok = narrow.basis.len() == wide.basis.len();
            if v.left().dim() == 0 {
                ok &= narrow.basis.is_empty();
            }
            for b in &narrow.basis {
                let ph = HatMorphism::type_eps(b.clone()).unwrap();
                ok &= ph.is_type_eps() && is_phantom(&ph, PHANTOM_DEPTH).unwrap().phantom;
                let u = &objects[r.gen_range(0..objects.len())];
                let g = hat(&mut r, w, u);
                let gf = HatMorphism::compose(&g, &ph).unwrap();
                ok &= is_phantom(&gf, PHANTOM_DEPTH).unwrap().phantom;
            }
            let f = hat(&mut r, v, w);
            if is_phantom(&f, PHANTOM_DEPTH).unwrap().phantom {
                ok &= f.is_type_eps();
                if v.left().dim() == 0 {
                    ok &= f.is_zero();
                }
            }
            if !ok {
                failures += 1;
            }
            checked += 1;
        }
    }
    tally(failures, checked, "pairs")
}

fn random_diagram(r: &mut Rng8, field: &Fp) -> Diagram<Fp> {
    let n = r.gen_range(2..=3);
    let objects: Vec<(String, Seq<Fp>)> = (0..n).map(|k| (format!("V{k}"), seq(r, field, 4, -2, 2))).collect();
    let mut gens: Vec<Generator<Fp>> = Vec::new();
    for k in 0..r.gen_range(2..=4) {
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        gens.push(Generator {
            name: format!("g{k}"),
            src: s,
            dst: t,
            map: hat(r, &objects[s].1, &objects[t].1),
        });
    }
    let mut rels = Vec::new();
    let base = gens.len();
    for i in 0..base {
        for j in 0..base {
            if gens[i].dst != gens[j].src || rels.len() >= 3 {
                continue;
            }
            let comp = HatMorphism::compose(&gens[j].map, &gens[i].map).unwrap();
            if comp.is_zero() {
                rels.push(Relation {
                    lhs: vec![i, j],
                    rhs: None,
                });
            } else {
                gens.push(Generator {
                    name: format!("g{j}g{i}"),
                    src: gens[i].src,
                    dst: gens[j].dst,
                    map: comp,
                });
                rels.push(Relation {
                    lhs: vec![i, j],
                    rhs: Some(vec![gens.len() - 1]),
                });
            }
        }
    }
    Diagram::new(objects, gens, rels).unwrap()
}

fn derivations() -> Outcome {
    let field = f(3);
    let mut r = rng(11);
    let mut failures = 0;
    let mut nonzero = 0;
    for _ in 0..50 {
        let d = random_diagram(&mut r, &field);
        let theta: Vec<HatMorphism<Fp>> = d.objects().iter().map(|(_, v)| eps_class(&mut r, v, v)).collect();
        let der = Derivation::inner(&d, &theta).unwrap();
        nonzero += usize::from(der.values.iter().any(|v| !v.is_zero()));
        let mut ok = check_derivation(&d, &der).unwrap() == LeibnizCheck::Ok;
        ok &= match solve_inner(&d, &der).unwrap() {
            Some(found) => Derivation::inner(&d, &found).unwrap().values == der.values,
            None => false,
        };
        let zero = Derivation::zero(&d);
        ok &= check_derivation(&d, &zero).unwrap() == LeibnizCheck::Ok;
        ok &= match solve_inner(&d, &zero).unwrap() {
            Some(found) => found.iter().all(HatMorphism::is_zero),
            None => false,
        };
        if !ok {
            failures += 1;
        }
    }
    tally(failures, 50, "diagrams").map(|t| format!("{t}, {nonzero} nonzero derivations"))
}

fn dual_numbers() -> Outcome {
    let field = f(5);
    let s = interval(&field, Endpoint::Fin(0), Endpoint::Fin(0));
    let h = hom_complex(&s, &s, None).unwrap();
    let total = h.dim_hom_s() + h.dim_hom_eps();
    let e = HatMorphism::eps_identity(&s);
    let id = HatMorphism::identity(&s);
    let m = EpsComplex::from_seq(&s);
    let km = hom_k(&m, &m).unwrap();
    let eps_map = EpsMap {
        degree: 0,
        lo: 0,
        comps: vec![EpsMat::new(Matrix::zeros(&field, 1, 1), Matrix::identity(&field, 1)).unwrap()],
        left: EpsMat::zeros(&field, 0, 0),
        right: EpsMat::zeros(&field, 0, 0),
    };
    let squared_k = EpsMap::compose(&eps_map, &eps_map);
    let checks = [
        (total == 2, "End has dimension 2"),
        (km == 2, "End in K(k[ε]) has dimension 2"),
        (HatMorphism::compose(&e, &e).unwrap().is_zero(), "ε squared vanishes"),
        (!e.is_zero() && e != id, "ε is nonzero and not the identity"),
        (eps_map.to_hat(&m, &m).unwrap() == e, "ε maps to [id]"),
        (EpsMap::identity(&m).to_hat(&m, &m).unwrap() == id, "1 maps to id"),
        (squared_k.to_hat(&m, &m).unwrap().is_zero(), "ε² maps to 0"),
        (EpsMap::from_hat(&e).to_hat(&m, &m).unwrap() == e, "round trip"),
    ];
    match checks.iter().find(|(ok, _)| !ok) {
        None => Ok(format!("dim {total} both ways")),
        Some((_, what)) => Err(format!("failed: {what}")),
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("graded Leibniz rule", leibniz),
        ("decomposition round trip", round_trip),
        ("inclusion-exclusion vs summand search", oracle_equivalence),
        ("minimal reduction", minimal_reduction),
        ("Hom dictionary", hom_dictionary),
        ("Ext1 bijection", ext_bijection),
        ("classification predicates", classification),
        ("semiorthogonality", semiorthogonality),
        ("cone laws", cone_laws),
        ("phantom laws", phantom_laws),
        ("derivation harness", derivations),
        ("endomorphisms of S_{0,0}", dual_numbers),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (verdict, detail) = match outcome {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failed.push(k + 1);
                ("FAIL", detail)
            }
        };
        // Straight to stdout so the lines survive the test harness's capture.
        let line = format!("criterion {:>2} {verdict}  {name}: {detail} ({secs:.1}s)\n", k + 1);
        let mut out = std::io::stdout().lock();
        out.write_all(line.as_bytes()).unwrap();
        out.flush().unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

