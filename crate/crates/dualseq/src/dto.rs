//! JSON forms of documents' values. Field elements are strings (`"3"`,
//! `"-1/2"`) so that rationals survive exactly.

use dualseq_core::dualnum::EpsComplex;
use dualseq_core::{Field, GradedHom, HatMorphism, Matrix, Seq, Tail};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: u32,
    pub command: String,
    pub field: String,
    pub result: Value,
}

pub type MatrixDto = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailDto {
    Zero,
    Iso { dim: usize, link: MatrixDto },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqDto {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<MatrixDto>,
    pub left: TailDto,
    pub right: TailDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDto {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub d1: Vec<MatrixDto>,
    pub deps: Vec<MatrixDto>,
    pub left: TailDto,
    pub right: TailDto,
}

/// Components on `[lo, lo + len)`; tails are listed for even then odd degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDto {
    pub degree: i64,
    pub lo: i64,
    pub components: Vec<MatrixDto>,
    pub left_tail: [MatrixDto; 2],
    pub right_tail: [MatrixDto; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDto {
    pub src: SeqDto,
    pub dst: SeqDto,
    pub one: GradedDto,
    pub eps: GradedDto,
}

pub fn field_label<F: Field>(field: &F) -> String {
    field.order().map_or_else(|| "Q".to_string(), |p| p.to_string())
}

pub fn matrix<F: Field>(m: &Matrix<F>) -> MatrixDto {
    (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect()
}

fn bad(msg: String) -> CliError {
    CliError::Usage(format!("malformed value: {msg}"))
}

pub fn elem<F: Field>(field: &F, s: &str) -> Result<F::Elem, CliError> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad(format!("'{s}' is not a number")));
    field
        .from_fraction(&parse(num)?, &parse(den)?)
        .ok_or_else(|| bad(format!("'{s}' is not defined in this field")))
}

pub fn to_matrix<F: Field>(field: &F, m: &MatrixDto, rows: usize, cols: usize) -> Result<Matrix<F>, CliError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(bad(format!("expected a {rows}x{cols} matrix")));
    }
    let entries = m.iter().flatten().map(|s| elem(field, s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_vectorized(field, rows, cols, &entries))
}

fn tail<F: Field>(t: &Tail<F>) -> TailDto {
    match t {
        Tail::Zero => TailDto::Zero,
        Tail::Iso { dim, link } => TailDto::Iso {
            dim: *dim,
            link: matrix(link),
        },
    }
}

fn to_tail<F: Field>(field: &F, t: &TailDto, window_edge: usize, left: bool) -> Result<Tail<F>, CliError> {
    Ok(match t {
        TailDto::Zero => Tail::Zero,
        TailDto::Iso { dim, link } => {
            let (r, c) = if left { (window_edge, *dim) } else { (*dim, window_edge) };
            Tail::Iso {
                dim: *dim,
                link: to_matrix(field, link, r, c)?,
            }
        }
    })
}

fn maps<F: Field>(field: &F, dims: &[usize], ms: &[MatrixDto]) -> Result<Vec<Matrix<F>>, CliError> {
    if dims.is_empty() || ms.len() + 1 != dims.len() {
        return Err(bad(format!("{} degrees with {} maps", dims.len(), ms.len())));
    }
    ms.iter()
        .zip(dims.windows(2))
        .map(|(m, d)| to_matrix(field, m, d[1], d[0]))
        .collect()
}

impl SeqDto {
    pub fn from_seq<F: Field>(v: &Seq<F>) -> Self {
        SeqDto {
            lo: v.lo(),
            dims: v.window_dims().to_vec(),
            maps: v.window_maps().iter().map(matrix).collect(),
            left: tail(v.left()),
            right: tail(v.right()),
        }
    }

    pub fn to_seq<F: Field>(&self, field: &F) -> Result<Seq<F>, CliError> {
        let ms = maps(field, &self.dims, &self.maps)?;
        let left = to_tail(field, &self.left, self.dims[0], true)?;
        let right = to_tail(field, &self.right, *self.dims.last().expect("nonempty"), false)?;
        Ok(Seq::new(field, self.lo, self.dims.clone(), ms, left, right)?)
    }
}

impl ComplexDto {
    pub fn from_complex<F: Field>(c: &EpsComplex<F>) -> Self {
        ComplexDto {
            lo: c.lo(),
            ranks: c.window_ranks().to_vec(),
            d1: (c.lo()..c.hi()).map(|i| matrix(&c.d1(i))).collect(),
            deps: (c.lo()..c.hi()).map(|i| matrix(&c.deps(i))).collect(),
            left: tail(c.left()),
            right: tail(c.right()),
        }
    }

    pub fn to_complex<F: Field>(&self, field: &F) -> Result<EpsComplex<F>, CliError> {
        let d1 = maps(field, &self.ranks, &self.d1)?;
        let deps = maps(field, &self.ranks, &self.deps)?;
        let left = to_tail(field, &self.left, self.ranks[0], true)?;
        let right = to_tail(field, &self.right, *self.ranks.last().expect("nonempty"), false)?;
        let c = EpsComplex::new(field, self.lo, self.ranks.clone(), d1, deps, left, right)?;
        c.validate()?;
        Ok(c)
    }
}

impl GradedDto {
    pub fn from_graded<F: Field>(f: &GradedHom<F>) -> Self {
        let [l0, l1] = f.left_tail();
        let [r0, r1] = f.right_tail();
        GradedDto {
            degree: f.degree(),
            lo: f.lo(),
            components: (f.lo()..=f.hi()).map(|i| matrix(&f.component(i))).collect(),
            left_tail: [matrix(l0), matrix(l1)],
            right_tail: [matrix(r0), matrix(r1)],
        }
    }

    pub fn to_graded<F: Field>(&self, v: &Seq<F>, w: &Seq<F>) -> Result<GradedHom<F>, CliError> {
        let field = v.field();
        let n = self.degree;
        let shape = |i: i64| (w.dim(i + n), v.dim(i));
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let (r, c) = shape(self.lo + k as i64);
                to_matrix(field, m, r, c)
            })
            .collect::<Result<Vec<_>, _>>()?;
        // Tail degrees far from every window have the tail dimensions.
        let far_left = v.lo().min(w.lo() - n).min(self.lo) - 4;
        let far_right = v.hi().max(w.hi() - n).max(self.lo + self.components.len() as i64) + 4;
        let tails = |t: &[MatrixDto; 2], base: i64| -> Result<[Matrix<F>; 2], CliError> {
            let (r0, c0) = shape(base);
            let (r1, c1) = shape(base + 1);
            Ok([to_matrix(field, &t[0], r0, c0)?, to_matrix(field, &t[1], r1, c1)?])
        };
        let left = tails(&self.left_tail, far_left)?;
        let right = tails(&self.right_tail, far_right)?;
        Ok(GradedHom::new(v, w, n, self.lo, comps, left, right)?)
    }
}

impl MorphismDto {
    pub fn from_hat<F: Field>(h: &HatMorphism<F>) -> Self {
        MorphismDto {
            src: SeqDto::from_seq(h.src()),
            dst: SeqDto::from_seq(h.dst()),
            one: GradedDto::from_graded(h.one()),
            eps: GradedDto::from_graded(h.eps()),
        }
    }

    pub fn to_hat<F: Field>(&self, field: &F) -> Result<HatMorphism<F>, CliError> {
        let v = self.src.to_seq(field)?;
        let w = self.dst.to_seq(field)?;
        let one = self.one.to_graded(&v, &w)?;
        let eps = self.eps.to_graded(&v, &w)?;
        Ok(HatMorphism::new(one, eps)?)
    }
}
