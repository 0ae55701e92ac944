//! Command dispatch. Each command yields a text report and a JSON value.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use dualseq_core::barcode::{assemble, classify, decompose, is_isomorphism};
use dualseq_core::dualnum::cohomology;
use dualseq_core::hom::hom_complex;
use dualseq_core::phantom::{check_derivation, is_phantom, solve_inner, PhantomReason};
use dualseq_core::triang::{cone, truncation_triangle, Triangle};
use dualseq_core::{Field, GradedHom, HatMorphism, Interval, LeibnizCheck, Seq};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::document::{parse, AnyDocument, Document, Object};
use crate::dto::{field_label, ComplexDto, Envelope, GradedDto, MorphismDto, SeqDto, SCHEMA};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "dualseq", version, about = "Sequences of vector spaces and their dual-number models")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interval decomposition of a sequence.
    Decompose { file: PathBuf, obj: String },
    /// Injective, acyclic and h-projective predicates.
    Classify { file: PathBuf, obj: String },
    /// Bases of Hom_S and Hom^eps between two sequences.
    Hom {
        file: PathBuf,
        src: String,
        dst: String,
        /// Frame widening used for the stabilization certificate.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Mapping cone triangle of a morphism.
    Cone { file: PathBuf, mor: String },
    /// Minimal model of a complex over k[eps].
    Minimize { file: PathBuf, cplx: String },
    /// Cohomology of a sequence or complex.
    Cohomology { file: PathBuf, obj: String },
    /// Whether a morphism between h-projective sequences is phantom.
    Phantom {
        file: PathBuf,
        mor: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Truncation triangle at degree n.
    Truncate {
        file: PathBuf,
        obj: String,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Leibniz rule of a derivation on a diagram.
    DerivationCheck { file: PathBuf, diag: String, deriv: String },
    /// Write a derivation as inner, if possible.
    InnerSolve { file: PathBuf, diag: String, deriv: String },
    /// Dump a named value; text output is valid document syntax for objects.
    Show { file: PathBuf, name: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Classify { .. } => "classify",
            Command::Hom { .. } => "hom",
            Command::Cone { .. } => "cone",
            Command::Minimize { .. } => "minimize",
            Command::Cohomology { .. } => "cohomology",
            Command::Phantom { .. } => "phantom",
            Command::Truncate { .. } => "truncate",
            Command::DerivationCheck { .. } => "derivation-check",
            Command::InnerSolve { .. } => "inner-solve",
            Command::Show { .. } => "show",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Decompose { file, .. }
            | Command::Classify { file, .. }
            | Command::Hom { file, .. }
            | Command::Cone { file, .. }
            | Command::Minimize { file, .. }
            | Command::Cohomology { file, .. }
            | Command::Phantom { file, .. }
            | Command::Truncate { file, .. }
            | Command::DerivationCheck { file, .. }
            | Command::InnerSolve { file, .. }
            | Command::Show { file, .. } => file,
        }
    }
}

pub struct Report {
    pub text: String,
    pub json: Value,
}

/// Load the document and run the command; the returned string is what goes
/// to standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let path = cli.command.file();
    let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let (field, report) = match parse(&src)? {
        AnyDocument::Prime(doc) => (field_label(&doc.field), execute(&doc, &cli.command)?),
        AnyDocument::Rational(doc) => (field_label(&doc.field), execute(&doc, &cli.command)?),
    };
    if cli.json {
        let env = Envelope {
            schema: SCHEMA,
            command: cli.command.name().to_string(),
            field,
            result: report.json,
        };
        Ok(serde_json::to_string_pretty(&env)? + "\n")
    } else {
        Ok(report.text)
    }
}

pub fn execute<F: Field>(doc: &Document<F>, cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Decompose { obj, .. } => decompose_cmd(doc.seq(obj)?),
        Command::Classify { obj, .. } => classify_cmd(doc.seq(obj)?),
        Command::Hom { src, dst, depth, .. } => hom_cmd(doc.seq(src)?, doc.seq(dst)?, *depth),
        Command::Cone { mor, .. } => {
            let t = cone(&doc.morphism(mor)?.map)?;
            Ok(triangle_report(&t))
        }
        Command::Minimize { cplx, .. } => minimize_cmd(doc, cplx),
        Command::Cohomology { obj, .. } => {
            let h = match doc.objects.get(obj) {
                Some(Object::Seq(v)) => cohomology(v),
                Some(Object::Complex(c)) => c.cohomology(),
                None => return Err(CliError::Usage(format!("no object named {obj}"))),
            };
            Ok(cohomology_report(&h))
        }
        Command::Phantom { mor, depth, .. } => phantom_cmd(&doc.morphism(mor)?.map, *depth),
        Command::Truncate { obj, n, .. } => {
            let t = truncation_triangle(doc.seq(obj)?, *n)?;
            Ok(triangle_report(&t))
        }
        Command::DerivationCheck { diag, deriv, .. } => derivation_cmd(doc, diag, deriv, false),
        Command::InnerSolve { diag, deriv, .. } => derivation_cmd(doc, diag, deriv, true),
        Command::Show { name, .. } => show_cmd(doc, name),
    }
}

fn bars_text(bars: &BTreeMap<Interval, usize>) -> String {
    if bars.is_empty() {
        return "0".into();
    }
    bars.iter().map(|(iv, m)| format!("{iv} x{m}")).collect::<Vec<_>>().join(", ")
}

fn bars_json(bars: &BTreeMap<Interval, usize>) -> Value {
    bars.iter()
        .map(|(iv, m)| json!({"a": iv.a().to_string(), "b": iv.b().to_string(), "multiplicity": m}))
        .collect()
}

fn decompose_cmd<F: Field>(v: &Seq<F>) -> Result<Report, CliError> {
    let b = decompose(v);
    let verified = b.certificate.as_ref().is_some_and(|c| {
        c.src() == &assemble(v.field(), &b.bars) && c.dst() == v && c.is_type_one() && is_isomorphism(c)
    });
    let verdict = if verified { "OK" } else { "FAILED" };
    Ok(Report {
        text: format!("{}\ncertificate: {verdict}\n", bars_text(&b.bars)),
        json: json!({
            "bars": bars_json(&b.bars),
            "certificate": b.certificate.as_ref().map(MorphismDto::from_hat),
            "certificate_verified": verified,
        }),
    })
}

fn classify_cmd<F: Field>(v: &Seq<F>) -> Result<Report, CliError> {
    let c = classify(v);
    let yn = |b: bool| if b { "yes" } else { "no" };
    let text = format!(
        "injective: {}\nacyclic: {}\nh-projective: {}\nbounded class: {}\ndegreewise finite: {}\nindecomposable: {}\n",
        yn(c.injective),
        yn(c.acyclic),
        yn(c.h_projective),
        c.bounded_class,
        yn(c.finitely_generated_degreewise),
        yn(c.indecomposable),
    );
    Ok(Report {
        text,
        json: json!({
            "injective": c.injective,
            "acyclic": c.acyclic,
            "h_projective": c.h_projective,
            "bounded_class": c.bounded_class.to_string(),
            "finitely_generated_degreewise": c.finitely_generated_degreewise,
            "indecomposable": c.indecomposable,
        }),
    })
}

/// Nonzero components on the explicit window, then the tails if nonzero.
fn graded_text<F: Field>(f: &GradedHom<F>) -> String {
    let mut parts: Vec<String> = (f.lo()..=f.hi())
        .filter(|&i| !f.component(i).is_zero())
        .map(|i| format!("{i}: {}", f.component(i)))
        .collect();
    let [l0, l1] = f.left_tail();
    if !l0.is_zero() || !l1.is_zero() {
        parts.push(format!("left: {l0} {l1}"));
    }
    let [r0, r1] = f.right_tail();
    if !r0.is_zero() || !r1.is_zero() {
        parts.push(format!("right: {r0} {r1}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

fn hom_cmd<F: Field>(v: &Seq<F>, w: &Seq<F>, depth: Option<usize>) -> Result<Report, CliError> {
    let data = hom_complex(v, w, depth)?;
    let cert = &data.certificate;
    if !cert.is_stable() {
        return Err(dualseq_core::Error::StabilizationDepthExceeded { depth: cert.depth }.into());
    }
    let eps = data.hom_eps_basis();
    let mut text = format!("Hom_S: {}\nHom^eps: {}\n", data.dim_hom_s(), data.dim_hom_eps());
    for (k, b) in data.hom_s.iter().enumerate() {
        let _ = writeln!(text, "  S[{k}] {}", graded_text(b));
    }
    for (k, b) in eps.iter().enumerate() {
        let _ = writeln!(text, "  eps[{k}] {}", graded_text(b));
    }
    let _ = writeln!(text, "stable over margins {:?}", cert.margins);
    Ok(Report {
        text,
        json: json!({
            "dim_hom_s": data.dim_hom_s(),
            "dim_hom_eps": data.dim_hom_eps(),
            "hom_s_basis": data.hom_s.iter().map(GradedDto::from_graded).collect::<Vec<_>>(),
            "hom_eps_basis": eps.iter().map(GradedDto::from_graded).collect::<Vec<_>>(),
            "certificate": {
                "margins": cert.margins,
                "hom_s_dims": cert.hom_s_dims,
                "hom_eps_dims": cert.hom_eps_dims,
                "depth": cert.depth,
            },
        }),
    })
}

fn triangle_report<F: Field>(t: &Triangle<F>) -> Report {
    let vanish = t.composites_vanish().unwrap_or(false);
    let bars = |s: &Seq<F>| bars_text(&decompose(s).bars);
    let text = format!(
        "A: {}\nB: {}\nC: {}\ncomposites vanish: {}\n",
        bars(&t.a),
        bars(&t.b),
        bars(&t.c),
        if vanish { "yes" } else { "no" }
    );
    let obj = |s: &Seq<F>| json!({"seq": SeqDto::from_seq(s), "bars": bars_json(&decompose(s).bars)});
    Report {
        text,
        json: json!({
            "a": obj(&t.a),
            "b": obj(&t.b),
            "c": obj(&t.c),
            "u": MorphismDto::from_hat(&t.u),
            "v": MorphismDto::from_hat(&t.v),
            "w": MorphismDto::from_hat(&t.w),
            "composites_vanish": vanish,
        }),
    }
}

fn minimize_cmd<F: Field>(doc: &Document<F>, name: &str) -> Result<Report, CliError> {
    let c = doc.complex(name)?;
    let m = c.minimize()?;
    let ok = m.minimal.is_minimal() && m.equivalence.verify(c, &m.minimal);
    let ranks = m.minimal.window_ranks();
    let model = if ranks.iter().all(|&r| r == 0) && m.minimal.left().dim() == 0 && m.minimal.right().dim() == 0 {
        "0".to_string()
    } else {
        format!("lo {} ranks {:?}", m.minimal.lo(), ranks)
    };
    let verdict = if ok { "OK" } else { "FAILED" };
    Ok(Report {
        text: format!("minimal model: {model}; certificates: {verdict}\n"),
        json: json!({
            "minimal": ComplexDto::from_complex(&m.minimal),
            "certificates_verified": ok,
        }),
    })
}

fn cohomology_report(h: &[(i64, usize)]) -> Report {
    let text = if h.is_empty() {
        "0".to_string()
    } else {
        h.iter().map(|(i, d)| format!("H^{i}: {d}")).collect::<Vec<_>>().join(", ")
    };
    Report {
        text: text + "\n",
        json: json!({
            "dims": h.iter().map(|(i, d)| json!({"degree": i, "dim": d})).collect::<Vec<_>>(),
        }),
    }
}

fn phantom_cmd<F: Field>(f: &HatMorphism<F>, depth: usize) -> Result<Report, CliError> {
    let verdict = is_phantom(f, depth)?;
    let reason = match verdict.reason {
        PhantomReason::TypeOne => "type-1 part is nonzero",
        PhantomReason::CompactSource => "source is compact",
        PhantomReason::Truncations => "truncation levels",
    };
    let mut text = format!("phantom: {} ({reason})\n", if verdict.phantom { "yes" } else { "no" });
    if let Some(c) = &verdict.certificate {
        let _ = writeln!(text, "levels {:?} dims {:?}", c.levels, c.dims);
    }
    Ok(Report {
        text,
        json: json!({
            "phantom": verdict.phantom,
            "reason": reason,
            "certificate": verdict.certificate.as_ref().map(|c| json!({
                "levels": c.levels,
                "dims": c.dims,
                "depth": c.depth,
            })),
        }),
    })
}

fn derivation_cmd<F: Field>(doc: &Document<F>, diag: &str, deriv: &str, solve: bool) -> Result<Report, CliError> {
    let d = doc.diagram(diag)?;
    let nd = doc.derivation(deriv)?;
    if nd.diagram != diag {
        return Err(CliError::Usage(format!("{deriv} is defined on {}, not {diag}", nd.diagram)));
    }
    let check = check_derivation(d, &nd.derivation)?;
    let gens = d.generators();
    let (status, detail) = match check {
        LeibnizCheck::Ok => ("ok", None),
        LeibnizCheck::Violated { relation } => ("violated", Some(format!("relation {}", relation + 1))),
        LeibnizCheck::BadValue { generator } => ("bad value", Some(format!("generator {}", gens[generator].name))),
    };
    let mut text = match &detail {
        None => "Leibniz: OK\n".to_string(),
        Some(d) => format!("Leibniz: {status} at {d}\n"),
    };
    let mut out = json!({"leibniz": status, "at": detail});
    if solve {
        let theta = if check == LeibnizCheck::Ok { solve_inner(d, &nd.derivation)? } else { None };
        match &theta {
            None => text.push_str("inner: no\n"),
            Some(t) => {
                text.push_str("inner: yes\n");
                for ((name, _), th) in d.objects().iter().zip(t) {
                    let _ = writeln!(text, "  theta_{name} = {}", graded_text(th.eps()));
                }
            }
        }
        out["inner"] = json!(theta.is_some());
        out["theta"] = match &theta {
            None => Value::Null,
            Some(t) => d
                .objects()
                .iter()
                .zip(t)
                .map(|((name, _), th)| json!({"object": name, "value": MorphismDto::from_hat(th)}))
                .collect(),
        };
    }
    Ok(Report { text, json: out })
}

fn tail_text<F: Field>(t: &dualseq_core::Tail<F>) -> String {
    match t {
        dualseq_core::Tail::Zero => "zero".into(),
        dualseq_core::Tail::Iso { dim, link } => format!("iso {dim} {link}"),
    }
}

fn list_text<F: Field>(ms: impl Iterator<Item = dualseq_core::Matrix<F>>) -> String {
    format!("[{}]", ms.map(|m| m.to_string()).collect::<Vec<_>>().join(", "))
}

fn show_cmd<F: Field>(doc: &Document<F>, name: &str) -> Result<Report, CliError> {
    if let Some(obj) = doc.objects.get(name) {
        return Ok(match obj {
            Object::Seq(v) => Report {
                text: format!(
                    "seq {name} {{\n  lo {}\n  dims {:?}\n  maps {}\n  left {}\n  right {}\n}}\n",
                    v.lo(),
                    v.window_dims(),
                    list_text(v.window_maps().iter().cloned()),
                    tail_text(v.left()),
                    tail_text(v.right()),
                ),
                json: json!({"seq": SeqDto::from_seq(v)}),
            },
            Object::Complex(c) => Report {
                text: format!(
                    "complex {name} {{\n  lo {}\n  ranks {:?}\n  d1 {}\n  deps {}\n  left {}\n  right {}\n}}\n",
                    c.lo(),
                    c.window_ranks(),
                    list_text((c.lo()..c.hi()).map(|i| c.d1(i))),
                    list_text((c.lo()..c.hi()).map(|i| c.deps(i))),
                    tail_text(c.left()),
                    tail_text(c.right()),
                ),
                json: json!({"complex": ComplexDto::from_complex(c)}),
            },
        });
    }
    let m = doc.morphism(name)?;
    Ok(Report {
        text: format!(
            "{name} : {} -> {}\n  one {}\n  eps {}\n",
            m.src,
            m.dst,
            graded_text(m.map.one()),
            graded_text(m.map.eps())
        ),
        json: json!({"morphism": MorphismDto::from_hat(&m.map)}),
    })
}
