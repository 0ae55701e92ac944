//! Parsing documents: a field, then named sequences, complexes, morphisms,
//! diagrams and derivations. See `docs/format.md` for the grammar.

use std::collections::BTreeMap;

use dualseq_core::barcode::assemble;
use dualseq_core::dualnum::EpsComplex;
use dualseq_core::phantom::{Derivation, Diagram, Generator, Relation};
use dualseq_core::{Endpoint, Field, Fp, GradedHom, HatMorphism, Interval, Matrix, Rationals, Seq, Tail};
use num_bigint::BigInt;

use crate::error::CliError;
use crate::lexer::{lex, Pos, Tok, Token};

#[derive(Clone, Debug)]
pub enum Object<F: Field> {
    Seq(Seq<F>),
    Complex(EpsComplex<F>),
}

#[derive(Clone, Debug)]
pub struct NamedMorphism<F: Field> {
    pub src: String,
    pub dst: String,
    pub map: HatMorphism<F>,
}

#[derive(Clone, Debug)]
pub struct NamedDerivation<F: Field> {
    pub diagram: String,
    pub derivation: Derivation<F>,
}

#[derive(Clone, Debug)]
pub struct Document<F: Field> {
    pub field: F,
    pub objects: BTreeMap<String, Object<F>>,
    pub morphisms: BTreeMap<String, NamedMorphism<F>>,
    pub diagrams: BTreeMap<String, Diagram<F>>,
    pub derivations: BTreeMap<String, NamedDerivation<F>>,
}

#[derive(Clone, Debug)]
pub enum AnyDocument {
    Prime(Document<Fp>),
    Rational(Document<Rationals>),
}

impl<F: Field> Document<F> {
    pub fn new(field: F) -> Self {
        Document {
            field,
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            diagrams: BTreeMap::new(),
            derivations: BTreeMap::new(),
        }
    }

    fn defined(&self, name: &str) -> bool {
        self.objects.contains_key(name)
            || self.morphisms.contains_key(name)
            || self.diagrams.contains_key(name)
            || self.derivations.contains_key(name)
    }

    pub fn seq(&self, name: &str) -> Result<&Seq<F>, CliError> {
        match self.objects.get(name) {
            Some(Object::Seq(s)) => Ok(s),
            Some(Object::Complex(_)) => Err(CliError::Usage(format!("{name} is a complex, not a sequence"))),
            None => Err(CliError::Usage(format!("no sequence named {name}"))),
        }
    }

    pub fn complex(&self, name: &str) -> Result<&EpsComplex<F>, CliError> {
        match self.objects.get(name) {
            Some(Object::Complex(c)) => Ok(c),
            Some(Object::Seq(_)) => Err(CliError::Usage(format!("{name} is a sequence, not a complex"))),
            None => Err(CliError::Usage(format!("no complex named {name}"))),
        }
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism<F>, CliError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no morphism named {name}")))
    }

    pub fn diagram(&self, name: &str) -> Result<&Diagram<F>, CliError> {
        self.diagrams
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no diagram named {name}")))
    }

    pub fn derivation(&self, name: &str) -> Result<&NamedDerivation<F>, CliError> {
        self.derivations
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no derivation named {name}")))
    }
}

pub fn parse(src: &str) -> Result<AnyDocument, CliError> {
    let toks = lex(src)?;
    let mut head = Cursor { toks: &toks, at: 0 };
    head.keyword("field")?;
    let pos = head.pos();
    match head.next() {
        Tok::Ident(q) if q == "Q" => Ok(AnyDocument::Rational(Parser::run(head, Rationals)?)),
        Tok::Int(p) => {
            let n: u32 = (&p)
                .try_into()
                .map_err(|_| parse_err(pos, format!("{p} is not a valid characteristic")))?;
            let field = Fp::new(n).map_err(|e| invalid(pos, e))?;
            Ok(AnyDocument::Prime(Parser::run(head, field)?))
        }
        other => Err(parse_err(pos, format!("expected a prime or Q, found {other}"))),
    }
}

fn parse_err(pos: Pos, msg: String) -> CliError {
    CliError::Parse {
        line: pos.line,
        col: pos.col,
        msg,
    }
}

fn invalid(pos: Pos, source: dualseq_core::Error) -> CliError {
    CliError::Invalid {
        line: pos.line,
        col: pos.col,
        source,
    }
}

struct Cursor<'a> {
    toks: &'a [Token],
    at: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, what: &str) -> Result<T, CliError> {
        Err(parse_err(self.pos(), format!("expected {what}, found {}", self.peek())))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), CliError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.fail(&tok.to_string())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), CliError> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            self.fail(&format!("'{kw}'"))
        }
    }

    fn ident(&mut self) -> Result<String, CliError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            _ => self.fail("a name"),
        }
    }

    fn big(&mut self) -> Result<BigInt, CliError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => self.fail("an integer"),
        }
    }

    fn int(&mut self) -> Result<i64, CliError> {
        let pos = self.pos();
        let n = self.big()?;
        n.try_into().map_err(|_| parse_err(pos, "integer out of range".into()))
    }

    fn count(&mut self) -> Result<usize, CliError> {
        let pos = self.pos();
        let n = self.big()?;
        n.try_into()
            .map_err(|_| parse_err(pos, "expected a nonnegative integer".into()))
    }

    fn endpoint(&mut self) -> Result<Endpoint, CliError> {
        match self.peek() {
            Tok::NegInf => {
                self.next();
                Ok(Endpoint::NegInf)
            }
            Tok::Ident(s) if s == "inf" => {
                self.next();
                Ok(Endpoint::PosInf)
            }
            _ => Ok(Endpoint::Fin(self.int()?)),
        }
    }

    /// `[x, y, ...]` with `item` parsing each entry.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::RBracket) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }
}

const KEYWORDS: &[&str] = &[
    "field", "seq", "interval", "barcode", "complex", "morphism", "diagram", "derivation", "generator", "relation",
    "object", "on", "inf",
];

fn elem<F: Field>(cur: &mut Cursor<'_>, field: &F) -> Result<F::Elem, CliError> {
    let pos = cur.pos();
    let num = cur.big()?;
    let den = if cur.eat(&Tok::Slash) { cur.big()? } else { BigInt::from(1) };
    field
        .from_fraction(&num, &den)
        .ok_or_else(|| parse_err(pos, format!("{num}/{den} is not defined in this field")))
}

/// Entries as written, checked against a shape once it is known.
#[derive(Clone, Debug)]
struct RawMatrix<E> {
    rows: Vec<Vec<E>>,
    pos: Pos,
}

struct Parser<'a, F: Field> {
    cur: Cursor<'a>,
    doc: Document<F>,
}

impl<'a, F: Field> Parser<'a, F> {
    fn run(cur: Cursor<'a>, field: F) -> Result<Document<F>, CliError> {
        let mut p = Parser {
            cur,
            doc: Document::new(field),
        };
        while *p.cur.peek() != Tok::Eof {
            p.statement()?;
        }
        Ok(p.doc)
    }

    fn field(&self) -> &F {
        &self.doc.field
    }

    fn raw_matrix(&mut self) -> Result<RawMatrix<F::Elem>, CliError> {
        let pos = self.cur.pos();
        let field = self.doc.field.clone();
        let rows = self.cur.list(|c| c.list(|c| elem(c, &field)))?;
        Ok(RawMatrix { rows, pos })
    }

    fn shaped(&self, m: &RawMatrix<F::Elem>, rows: usize, cols: usize) -> Result<Matrix<F>, CliError> {
        let ok = m.rows.len() == rows && m.rows.iter().all(|r| r.len() == cols);
        if !ok {
            let found_cols = m.rows.first().map_or(0, Vec::len);
            return Err(parse_err(
                m.pos,
                format!("expected a {rows}x{cols} matrix, found {}x{found_cols}", m.rows.len()),
            ));
        }
        let entries: Vec<F::Elem> = m.rows.iter().flatten().cloned().collect();
        Ok(Matrix::from_vectorized(self.field(), rows, cols, &entries))
    }

    fn define(&self, pos: Pos, name: &str) -> Result<(), CliError> {
        if self.doc.defined(name) {
            Err(parse_err(pos, format!("{name} is already defined")))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> Result<(), CliError> {
        let pos = self.cur.pos();
        match self.cur.peek().clone() {
            Tok::Ident(kw) => match kw.as_str() {
                "seq" => self.seq_block(pos),
                "complex" => self.complex_block(pos),
                "interval" => self.interval(pos),
                "barcode" => self.barcode(pos),
                "morphism" => self.morphism(pos),
                "diagram" => self.diagram(pos),
                "derivation" => self.derivation(pos),
                _ => self.cur.fail("a statement"),
            },
            _ => self.cur.fail("a statement"),
        }
    }

    fn tail(&mut self) -> Result<RawTail<F::Elem>, CliError> {
        if self.cur.is_keyword("zero") {
            self.cur.next();
            return Ok(None);
        }
        self.cur.keyword("iso")?;
        let dim = self.cur.count()?;
        Ok(Some((dim, self.raw_matrix()?)))
    }

    /// Fields shared by `seq` and `complex` blocks; `maps` names the lists of
    /// window maps.
    fn window_block(&mut self, maps: &[&str]) -> Result<WindowBlock<F::Elem>, CliError> {
        let mut b = WindowBlock {
            lo: 0,
            dims: None,
            maps: vec![None; maps.len()],
            left: None,
            right: None,
        };
        self.cur.expect(Tok::LBrace)?;
        while !self.cur.eat(&Tok::RBrace) {
            let pos = self.cur.pos();
            let key = match self.cur.next() {
                Tok::Ident(k) => k,
                other => return Err(parse_err(pos, format!("expected a field name, found {other}"))),
            };
            match key.as_str() {
                "lo" => b.lo = self.cur.int()?,
                "dims" | "ranks" => b.dims = Some(self.cur.list(Cursor::count)?),
                "left" => b.left = self.tail()?,
                "right" => b.right = self.tail()?,
                k => match maps.iter().position(|m| *m == k) {
                    Some(slot) => {
                        let mut list = Vec::new();
                        self.cur.expect(Tok::LBracket)?;
                        if !self.cur.eat(&Tok::RBracket) {
                            loop {
                                list.push(self.raw_matrix()?);
                                if self.cur.eat(&Tok::RBracket) {
                                    break;
                                }
                                self.cur.expect(Tok::Comma)?;
                            }
                        }
                        b.maps[slot] = Some((pos, list));
                    }
                    None => return Err(parse_err(pos, format!("unknown field '{k}'"))),
                },
            }
        }
        Ok(b)
    }

    fn window_parts(
        &self,
        pos: Pos,
        b: &WindowBlock<F::Elem>,
    ) -> Result<WindowParts<F>, CliError> {
        let dims = b
            .dims
            .clone()
            .ok_or_else(|| parse_err(pos, "missing dims".into()))?;
        if dims.is_empty() {
            return Err(parse_err(pos, "dims must be nonempty".into()));
        }
        let mut lists = Vec::new();
        for slot in &b.maps {
            let list = match slot {
                None => dims
                    .windows(2)
                    .map(|w| Matrix::zeros(self.field(), w[1], w[0]))
                    .collect(),
                Some((p, raws)) => {
                    if raws.len() + 1 != dims.len() {
                        return Err(parse_err(
                            *p,
                            format!("{} degrees need {} maps, found {}", dims.len(), dims.len() - 1, raws.len()),
                        ));
                    }
                    raws.iter()
                        .zip(dims.windows(2))
                        .map(|(m, w)| self.shaped(m, w[1], w[0]))
                        .collect::<Result<Vec<_>, _>>()?
                }
            };
            lists.push(list);
        }
        let tail = |t: &RawTail<F::Elem>, left: bool| -> Result<Tail<F>, CliError> {
            Ok(match t {
                None => Tail::Zero,
                Some((dim, raw)) => {
                    let (r, c) = if left {
                        (dims[0], *dim)
                    } else {
                        (*dim, *dims.last().expect("nonempty"))
                    };
                    Tail::Iso {
                        dim: *dim,
                        link: self.shaped(raw, r, c)?,
                    }
                }
            })
        };
        let left = tail(&b.left, true)?;
        let right = tail(&b.right, false)?;
        Ok((dims, lists, left, right))
    }

    fn seq_block(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("seq")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        let b = self.window_block(&["maps"])?;
        let (dims, mut lists, left, right) = self.window_parts(pos, &b)?;
        let seq = Seq::new(self.field(), b.lo, dims, lists.remove(0), left, right).map_err(|e| invalid(pos, e))?;
        self.doc.objects.insert(name, Object::Seq(seq));
        Ok(())
    }

    fn complex_block(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("complex")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        let b = self.window_block(&["d1", "deps"])?;
        let (dims, mut lists, left, right) = self.window_parts(pos, &b)?;
        let deps = lists.remove(1);
        let d1 = lists.remove(0);
        let c = EpsComplex::new(self.field(), b.lo, dims, d1, deps, left, right).map_err(|e| invalid(pos, e))?;
        c.validate().map_err(|e| invalid(pos, e))?;
        self.doc.objects.insert(name, Object::Complex(c));
        Ok(())
    }

    fn bar(&mut self) -> Result<(Interval, usize), CliError> {
        let pos = self.cur.pos();
        self.cur.expect(Tok::LBracket)?;
        let a = self.cur.endpoint()?;
        self.cur.expect(Tok::Comma)?;
        let b = self.cur.endpoint()?;
        self.cur.expect(Tok::RBracket)?;
        let iv = Interval::new(a, b).map_err(|e| invalid(pos, e))?;
        // `x2` lexes as one word, `x 2` as two.
        let mult = match self.cur.peek().clone() {
            Tok::Ident(s) if s == "x" => {
                self.cur.next();
                self.cur.count()?
            }
            Tok::Ident(s) if s.len() > 1 && s.starts_with('x') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let pos = self.cur.pos();
                self.cur.next();
                s[1..].parse().map_err(|_| parse_err(pos, "multiplicity out of range".into()))?
            }
            _ => 1,
        };
        Ok((iv, mult))
    }

    fn interval(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("interval")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        self.cur.expect(Tok::Equals)?;
        let (iv, _) = self.bar()?;
        let s = Seq::interval(self.field(), iv.a(), iv.b()).map_err(|e| invalid(pos, e))?;
        self.doc.objects.insert(name, Object::Seq(s));
        Ok(())
    }

    fn barcode(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("barcode")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        self.cur.expect(Tok::Equals)?;
        let mut bars = BTreeMap::new();
        if !self.cur.eat(&Tok::Int(BigInt::from(0))) {
            loop {
                let (iv, m) = self.bar()?;
                *bars.entry(iv).or_insert(0) += m;
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        let s = assemble(self.field(), &bars);
        self.doc.objects.insert(name, Object::Seq(s));
        Ok(())
    }

    fn morphism(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("morphism")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        self.cur.expect(Tok::Colon)?;
        let src_pos = self.cur.pos();
        let src = self.cur.ident()?;
        self.cur.expect(Tok::Arrow)?;
        let dst_pos = self.cur.pos();
        let dst = self.cur.ident()?;
        let v = self.doc.seq(&src).map_err(|e| parse_err(src_pos, e.to_string()))?.clone();
        let w = self.doc.seq(&dst).map_err(|e| parse_err(dst_pos, e.to_string()))?.clone();
        let map = if self.cur.eat(&Tok::Equals) {
            let kpos = self.cur.pos();
            let kind = match self.cur.next() {
                Tok::Ident(k) => k,
                other => return Err(parse_err(kpos, format!("expected id, eps or zero, found {other}"))),
            };
            match kind.as_str() {
                "zero" => HatMorphism::zero(&v, &w),
                "id" | "eps" if v != w => {
                    return Err(parse_err(kpos, format!("{kind} needs equal source and target")));
                }
                "id" => HatMorphism::identity(&v),
                "eps" => HatMorphism::eps_identity(&v),
                k => return Err(parse_err(kpos, format!("expected id, eps or zero, found '{k}'"))),
            }
        } else {
            self.morphism_block(pos, &v, &w)?
        };
        self.doc.morphisms.insert(name, NamedMorphism { src, dst, map });
        Ok(())
    }

    fn morphism_block(&mut self, pos: Pos, v: &Seq<F>, w: &Seq<F>) -> Result<HatMorphism<F>, CliError> {
        // part -> (explicit degrees, left, right)
        let mut parts: [Part<F::Elem>; 2] = Default::default();
        self.cur.expect(Tok::LBrace)?;
        while !self.cur.eat(&Tok::RBrace) {
            let kpos = self.cur.pos();
            let part = match self.cur.next() {
                Tok::Ident(k) if k == "one" => 0,
                Tok::Ident(k) if k == "eps" => 1,
                other => return Err(parse_err(kpos, format!("expected one or eps, found {other}"))),
            };
            let at = match self.cur.peek().clone() {
                Tok::Ident(s) if s == "left" || s == "right" => {
                    self.cur.next();
                    Slot::Tail(s == "left")
                }
                _ => Slot::Degree(self.cur.int()?),
            };
            self.cur.expect(Tok::Equals)?;
            let m = self.raw_matrix()?;
            match at {
                Slot::Degree(i) => {
                    parts[part].comps.insert(i, m);
                }
                Slot::Tail(true) => parts[part].left = Some(m),
                Slot::Tail(false) => parts[part].right = Some(m),
            }
        }
        let mut built = Vec::new();
        for part in &parts {
            built.push(self.graded(part, v, w)?);
        }
        let eps = built.pop().expect("two parts");
        let one = built.pop().expect("two parts");
        HatMorphism::new(one, eps).map_err(|e| invalid(pos, e))
    }

    fn graded(&self, part: &Part<F::Elem>, v: &Seq<F>, w: &Seq<F>) -> Result<GradedHom<F>, CliError> {
        let (fa, fb) = GradedHom::frame(v, w, 0);
        let lo = part.comps.keys().next().copied().unwrap_or(fa).min(fa);
        let hi = part.comps.keys().last().copied().unwrap_or(fb).max(fb);
        let first = part.comps.keys().next().copied().unwrap_or(lo);
        let last = part.comps.keys().last().copied().unwrap_or(hi);
        let mut cache = BTreeMap::new();
        for i in lo - 2..=hi + 2 {
            let (r, c) = (w.dim(i), v.dim(i));
            let m = match part.comps.get(&i) {
                Some(raw) => self.shaped(raw, r, c)?,
                None => match (&part.left, &part.right) {
                    (Some(raw), _) if i < first => self.shaped(raw, r, c)?,
                    (_, Some(raw)) if i > last => self.shaped(raw, r, c)?,
                    _ => Matrix::zeros(self.field(), r, c),
                },
            };
            cache.insert(i, m);
        }
        Ok(GradedHom::from_fn(v, w, 0, lo, hi, |i| {
            cache[&i.clamp(lo - 2, hi + 2)].clone()
        }))
    }

    fn diagram(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("diagram")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        self.cur.expect(Tok::LBrace)?;
        let mut objects: Vec<(String, Seq<F>)> = Vec::new();
        let mut gens: Vec<Generator<F>> = Vec::new();
        let mut rels = Vec::new();
        let object_index = |objects: &mut Vec<(String, Seq<F>)>, n: &str, s: &Seq<F>| {
            match objects.iter().position(|(m, _)| m == n) {
                Some(k) => k,
                None => {
                    objects.push((n.to_string(), s.clone()));
                    objects.len() - 1
                }
            }
        };
        while !self.cur.eat(&Tok::RBrace) {
            let kpos = self.cur.pos();
            if self.cur.is_keyword("object") {
                self.cur.next();
                let o = self.cur.ident()?;
                let s = self.doc.seq(&o).map_err(|e| parse_err(kpos, e.to_string()))?.clone();
                object_index(&mut objects, &o, &s);
            } else if self.cur.is_keyword("generator") {
                self.cur.next();
                let g = self.cur.ident()?;
                self.cur.expect(Tok::Equals)?;
                let mpos = self.cur.pos();
                let m = self.cur.ident()?;
                let nm = self.doc.morphism(&m).map_err(|e| parse_err(mpos, e.to_string()))?.clone();
                if gens.iter().any(|x| x.name == g) {
                    return Err(parse_err(kpos, format!("generator {g} is already defined")));
                }
                let src = object_index(&mut objects, &nm.src, nm.map.src());
                let dst = object_index(&mut objects, &nm.dst, nm.map.dst());
                gens.push(Generator {
                    name: g,
                    src,
                    dst,
                    map: nm.map,
                });
            } else if self.cur.is_keyword("relation") {
                self.cur.next();
                let lhs = self.path(&gens)?;
                self.cur.expect(Tok::Equals)?;
                let rhs = if self.cur.eat(&Tok::Int(BigInt::from(0))) {
                    None
                } else {
                    Some(self.path(&gens)?)
                };
                rels.push(Relation { lhs, rhs });
            } else {
                return self.cur.fail("object, generator or relation");
            }
        }
        let d = Diagram::new(objects, gens, rels).map_err(|e| invalid(pos, e))?;
        self.doc.diagrams.insert(name, d);
        Ok(())
    }

    fn path(&mut self, gens: &[Generator<F>]) -> Result<Vec<usize>, CliError> {
        let mut out = Vec::new();
        while let Tok::Ident(s) = self.cur.peek().clone() {
            if KEYWORDS.contains(&s.as_str()) {
                break;
            }
            let pos = self.cur.pos();
            self.cur.next();
            let k = gens
                .iter()
                .position(|g| g.name == s)
                .ok_or_else(|| parse_err(pos, format!("no generator named {s}")))?;
            out.push(k);
        }
        if out.is_empty() {
            return self.cur.fail("a path of generators");
        }
        Ok(out)
    }

    fn derivation(&mut self, pos: Pos) -> Result<(), CliError> {
        self.cur.keyword("derivation")?;
        let name = self.cur.ident()?;
        self.define(pos, &name)?;
        self.cur.keyword("on")?;
        let dpos = self.cur.pos();
        let dname = self.cur.ident()?;
        let diagram = self.doc.diagram(&dname).map_err(|e| parse_err(dpos, e.to_string()))?.clone();
        let mut der = Derivation::zero(&diagram);
        self.cur.expect(Tok::LBrace)?;
        while !self.cur.eat(&Tok::RBrace) {
            let gpos = self.cur.pos();
            let g = self.cur.ident()?;
            let k = diagram
                .generators()
                .iter()
                .position(|x| x.name == g)
                .ok_or_else(|| parse_err(gpos, format!("{dname} has no generator {g}")))?;
            self.cur.expect(Tok::Equals)?;
            if self.cur.eat(&Tok::Int(BigInt::from(0))) {
                continue;
            }
            let mpos = self.cur.pos();
            let m = self.cur.ident()?;
            let nm = self.doc.morphism(&m).map_err(|e| parse_err(mpos, e.to_string()))?;
            let gen = &diagram.generators()[k];
            if nm.map.src() != gen.map.src() || nm.map.dst() != gen.map.dst() {
                return Err(parse_err(mpos, format!("{m} does not have the source and target of {g}")));
            }
            der.values[k] = nm.map.clone();
        }
        self.doc.derivations.insert(
            name,
            NamedDerivation {
                diagram: dname,
                derivation: der,
            },
        );
        Ok(())
    }
}

struct WindowBlock<E> {
    lo: i64,
    dims: Option<Vec<usize>>,
    maps: Vec<Option<(Pos, Vec<RawMatrix<E>>)>>,
    left: RawTail<E>,
    right: RawTail<E>,
}

/// `iso <dim> <link>`, or `None` for `zero`.
type RawTail<E> = Option<(usize, RawMatrix<E>)>;

/// Dims, one list of window maps per map field, and the two tails.
type WindowParts<F> = (Vec<usize>, Vec<Vec<Matrix<F>>>, Tail<F>, Tail<F>);

struct Part<E> {
    comps: BTreeMap<i64, RawMatrix<E>>,
    left: Option<RawMatrix<E>>,
    right: Option<RawMatrix<E>>,
}

impl<E> Default for Part<E> {
    fn default() -> Self {
        Part {
            comps: BTreeMap::new(),
            left: None,
            right: None,
        }
    }
}

enum Slot {
    Degree(i64),
    Tail(bool),
}
