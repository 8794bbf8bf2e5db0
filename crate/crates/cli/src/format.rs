//! Line-oriented space and map files.
//!
//! ```text
//! space SO5
//! dim 10
//! stably-parallelizable true
//! generator b1 1
//! generator b3 3
//! truncate b1 8
//! truncate b3 2
//! known-cat 8 "citation"
//! ```
//!
//! A table ring uses `basis LABEL DEGREE` and `product LABEL LABEL = EXPR`
//! lines instead of generators. Homology data for the Morse bounds goes in
//! `betti`, `torsion` and `simply-connected` lines; `genus` and `note` are
//! also accepted.

use std::collections::HashMap;
use std::fmt;

use lscat_core::algebra::{Element, Expr, GeneratorSpec, MultiplicationTable, Ring, RingRepr, TruncatedPresentation};
use lscat_core::catalogue::SpaceRecord;
use lscat_core::invariants::{KnownValue, MorseData};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Syntax,
    UnknownKeyword,
    DuplicateKey,
    MissingField,
    DuplicateGenerator,
    InvalidExponent,
    InvalidDegree,
    UnknownSymbol,
    MissingTruncation,
    MixedRingForms,
    Expression,
    InvalidRing,
    InvalidRecord,
}

impl ErrorKind {
    pub fn class(self) -> &'static str {
        match self {
            Self::Syntax => "syntax",
            Self::UnknownKeyword => "unknown-keyword",
            Self::DuplicateKey => "duplicate-key",
            Self::MissingField => "missing-field",
            Self::DuplicateGenerator => "duplicate-generator",
            Self::InvalidExponent => "invalid-exponent",
            Self::InvalidDegree => "invalid-degree",
            Self::UnknownSymbol => "unknown-symbol",
            Self::MissingTruncation => "missing-truncation",
            Self::MixedRingForms => "mixed-ring-forms",
            Self::Expression => "expression",
            Self::InvalidRing => "invalid-ring",
            Self::InvalidRecord => "invalid-record",
        }
    }
}

/// A parse failure with a 1-based position; line 0 means end of input.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: [{}] {}",
            self.line,
            self.column,
            self.kind.class(),
            self.message
        )
    }
}

fn err(kind: ErrorKind, line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
    /// Byte offset of the token start in the line.
    offset: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    raw: &'a str,
    tokens: Vec<Token>,
}

impl Line<'_> {
    fn keyword(&self) -> &Token {
        &self.tokens[0]
    }

    fn syntax(&self, usage: &str) -> ParseError {
        let column = self.tokens.get(1).map_or(self.raw.len() + 1, |t| t.column);
        err(ErrorKind::Syntax, self.number, column, format!("expected `{usage}`"))
    }

    fn expect_args(&self, n: usize, usage: &str) -> Result<&[Token], ParseError> {
        if self.tokens.len() == n + 1 {
            Ok(&self.tokens[1..])
        } else {
            Err(self.syntax(usage))
        }
    }

    fn int(&self, t: &Token) -> Result<u32, ParseError> {
        t.text.parse().map_err(|_| {
            err(
                ErrorKind::Syntax,
                self.number,
                t.column,
                format!("expected a non-negative integer, found `{}`", t.text),
            )
        })
    }

    fn int64(&self, t: &Token) -> Result<u64, ParseError> {
        t.text.parse().map_err(|_| {
            err(
                ErrorKind::Syntax,
                self.number,
                t.column,
                format!("expected a non-negative integer, found `{}`", t.text),
            )
        })
    }

    fn boolean(&self, t: &Token) -> Result<bool, ParseError> {
        match t.text.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(err(
                ErrorKind::Syntax,
                self.number,
                t.column,
                format!("expected `true` or `false`, found `{other}`"),
            )),
        }
    }

    /// Text after the separator token, parsed as an expression.
    fn expr_after(&self, sep_index: usize) -> Result<Expr, ParseError> {
        let sep = &self.tokens[sep_index];
        let start = sep.offset + sep.text.len();
        let rest = strip_comment(&self.raw[start..]);
        let column = self.raw[..start].chars().count() + 1;
        Expr::parse(rest).map_err(|e| err(ErrorKind::Expression, self.number, column + e.column - 1, e.message))
    }
}

fn strip_comment(s: &str) -> &str {
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_string => escaped = true,
            '"' => in_string = !in_string,
            '#' if !in_string => return &s[..i],
            _ => {}
        }
    }
    s
}

fn tokenize(number: usize, raw: &str) -> Result<Line<'_>, ParseError> {
    let body = strip_comment(raw);
    let mut tokens = Vec::new();
    let mut chars = body.char_indices().peekable();
    let column_of = |offset: usize| raw[..offset].chars().count() + 1;
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '"' {
            chars.next();
            let mut text = String::new();
            let mut closed = false;
            while let Some((_, c)) = chars.next() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match chars.next() {
                        Some((_, e @ ('"' | '\\'))) => text.push(e),
                        Some((i, other)) => {
                            return Err(err(
                                ErrorKind::Syntax,
                                number,
                                column_of(i),
                                format!("unknown escape `\\{other}`"),
                            ))
                        }
                        None => break,
                    },
                    c => text.push(c),
                }
            }
            if !closed {
                return Err(err(ErrorKind::Syntax, number, column_of(start), "unterminated string"));
            }
            tokens.push(Token {
                text,
                column: column_of(start),
                offset: start,
            });
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        tokens.push(Token {
            text: body[start..end].to_string(),
            column: column_of(start),
            offset: start,
        });
    }
    Ok(Line { number, raw, tokens })
}

fn lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = tokenize(i + 1, raw)?;
        if !line.tokens.is_empty() {
            out.push(line);
        }
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A single-valued key; records the line it was set on.
struct Slot<T> {
    value: Option<(T, usize)>,
}

impl<T> Slot<T> {
    fn new() -> Self {
        Self { value: None }
    }

    fn set(&mut self, line: &Line, value: T) -> Result<(), ParseError> {
        if let Some((_, prev)) = &self.value {
            return Err(err(
                ErrorKind::DuplicateKey,
                line.number,
                line.keyword().column,
                format!("`{}` already given on line {prev}", line.keyword().text),
            ));
        }
        self.value = Some((value, line.number));
        Ok(())
    }

    fn get(&self) -> Option<&T> {
        self.value.as_ref().map(|(v, _)| v)
    }

    fn line(&self) -> usize {
        self.value.as_ref().map_or(0, |(_, l)| *l)
    }
}

/// Parses a space file into a validated record.
pub fn parse_space(text: &str) -> Result<SpaceRecord, ParseError> {
    let mut name = Slot::new();
    let mut dim = Slot::new();
    let mut connectivity = Slot::new();
    let mut stably = Slot::new();
    let mut orientable = Slot::new();
    let mut known = Slot::new();
    let mut genus = Slot::new();
    let mut betti = Slot::new();
    let mut torsion = Slot::new();
    let mut simply = Slot::new();
    let mut notes = Vec::new();
    let mut generators: Vec<(GeneratorSpec, usize)> = Vec::new();
    let mut truncations: HashMap<String, (u32, usize)> = HashMap::new();
    let mut basis: Vec<(String, u32, usize)> = Vec::new();
    let mut products: Vec<(String, String, Expr, usize)> = Vec::new();
    let mut first_generator_line = None;
    let mut first_table_line = None;

    for line in lines(text)? {
        let kw = line.keyword();
        match kw.text.as_str() {
            "space" => {
                let a = line.expect_args(1, "space NAME")?;
                name.set(&line, a[0].text.clone())?;
            }
            "dim" => {
                let a = line.expect_args(1, "dim N")?;
                dim.set(&line, line.int(&a[0])?)?;
            }
            "connectivity" => {
                let a = line.expect_args(1, "connectivity C")?;
                connectivity.set(&line, line.int(&a[0])?)?;
            }
            "stably-parallelizable" => {
                let a = line.expect_args(1, "stably-parallelizable BOOL")?;
                stably.set(&line, line.boolean(&a[0])?)?;
            }
            "orientable" => {
                let a = line.expect_args(1, "orientable BOOL")?;
                orientable.set(&line, line.boolean(&a[0])?)?;
            }
            "simply-connected" => {
                let a = line.expect_args(1, "simply-connected BOOL")?;
                simply.set(&line, line.boolean(&a[0])?)?;
            }
            "genus" => {
                let a = line.expect_args(1, "genus G")?;
                genus.set(&line, line.int(&a[0])?)?;
            }
            "known-cat" => {
                let a = line.expect_args(2, "known-cat K \"CITATION\"")?;
                let k = line.int(&a[0])?;
                known.set(&line, KnownValue::new(k, a[1].text.clone()))?;
            }
            "note" => {
                let a = line.expect_args(1, "note \"TEXT\"")?;
                notes.push(a[0].text.clone());
            }
            "betti" | "torsion" => {
                if line.tokens.len() < 2 {
                    return Err(line.syntax(&format!("{} N0 N1 ...", kw.text)));
                }
                let values = line.tokens[1..]
                    .iter()
                    .map(|t| line.int64(t))
                    .collect::<Result<Vec<_>, _>>()?;
                if kw.text == "betti" {
                    betti.set(&line, values)?;
                } else {
                    torsion.set(&line, values)?;
                }
            }
            "generator" => {
                let a = line.expect_args(2, "generator NAME DEGREE")?;
                let degree = line.int(&a[1])?;
                if degree == 0 {
                    return Err(err(
                        ErrorKind::InvalidDegree,
                        line.number,
                        a[1].column,
                        "generator degree must be >= 1",
                    ));
                }
                if let Some((_, prev)) = generators.iter().find(|(g, _)| g.name == a[0].text) {
                    return Err(err(
                        ErrorKind::DuplicateGenerator,
                        line.number,
                        a[0].column,
                        format!("generator `{}` already declared on line {prev}", a[0].text),
                    ));
                }
                first_generator_line.get_or_insert(line.number);
                generators.push((GeneratorSpec::new(a[0].text.clone(), degree), line.number));
            }
            "truncate" => {
                let a = line.expect_args(2, "truncate NAME EXPONENT")?;
                let p = line.int(&a[1])?;
                if p == 0 {
                    return Err(err(
                        ErrorKind::InvalidExponent,
                        line.number,
                        a[1].column,
                        "exponent must be >= 1",
                    ));
                }
                if !generators.iter().any(|(g, _)| g.name == a[0].text) {
                    return Err(err(
                        ErrorKind::UnknownSymbol,
                        line.number,
                        a[0].column,
                        format!("`{}` is not a declared generator", a[0].text),
                    ));
                }
                if let Some((_, prev)) = truncations.insert(a[0].text.clone(), (p, line.number)) {
                    return Err(err(
                        ErrorKind::DuplicateKey,
                        line.number,
                        a[0].column,
                        format!("`{}` already truncated on line {prev}", a[0].text),
                    ));
                }
                first_generator_line.get_or_insert(line.number);
            }
            "basis" => {
                let a = line.expect_args(2, "basis LABEL DEGREE")?;
                let degree = line.int(&a[1])?;
                check_label(&line, &a[0])?;
                first_table_line.get_or_insert(line.number);
                basis.push((a[0].text.clone(), degree, line.number));
            }
            "product" => {
                if line.tokens.len() < 5 || line.tokens[3].text != "=" {
                    return Err(line.syntax("product LABEL LABEL = EXPR"));
                }
                let expr = line.expr_after(3)?;
                first_table_line.get_or_insert(line.number);
                products.push((
                    line.tokens[1].text.clone(),
                    line.tokens[2].text.clone(),
                    expr,
                    line.number,
                ));
            }
            other => {
                return Err(err(
                    ErrorKind::UnknownKeyword,
                    line.number,
                    kw.column,
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
        if let (Some(g), Some(t)) = (first_generator_line, first_table_line) {
            return Err(err(
                ErrorKind::MixedRingForms,
                g.max(t),
                1,
                format!("generator/truncate lines (line {g}) cannot be mixed with basis/product lines (line {t})"),
            ));
        }
    }

    let Some(name) = name.get().cloned() else {
        return Err(err(ErrorKind::MissingField, 0, 0, "`space NAME` line missing"));
    };
    let Some(&dimension) = dim.get() else {
        return Err(err(ErrorKind::MissingField, 0, 0, "`dim N` line missing"));
    };
    let mut record = SpaceRecord::bare(name, dimension);
    record.connectivity = connectivity.get().copied().unwrap_or(0);
    record.stably_parallelizable = stably.get().copied().unwrap_or(false);
    record.orientable = orientable.get().copied().unwrap_or(true);
    record.known_cat = known.get().cloned();
    record.genus = genus.get().copied();
    record.notes = notes;

    record.ring = if !generators.is_empty() {
        let mut truncs = Vec::with_capacity(generators.len());
        for (g, line) in &generators {
            match truncations.get(&g.name) {
                Some(&(p, _)) => truncs.push(p),
                None => {
                    return Err(err(
                        ErrorKind::MissingTruncation,
                        *line,
                        1,
                        format!("generator `{}` has no `truncate` line", g.name),
                    ))
                }
            }
        }
        let gens = generators.into_iter().map(|(g, _)| g).collect();
        let p = TruncatedPresentation::new(gens, truncs, dimension).map_err(|e| {
            err(
                ErrorKind::InvalidRing,
                first_generator_line.unwrap_or(0),
                1,
                e.to_string(),
            )
        })?;
        Some(p.into())
    } else if !basis.is_empty() || !products.is_empty() {
        Some(build_table(&basis, &products, dimension, first_table_line.unwrap_or(0))?.into())
    } else if dimension == 0 {
        Some(TruncatedPresentation::point().into())
    } else {
        None
    };

    if let Some(ranks) = betti.get() {
        let torsion_values = torsion.get().cloned().unwrap_or_else(|| vec![0; ranks.len()]);
        let sc = simply.get().copied().unwrap_or(record.connectivity >= 1);
        let data = MorseData::new(ranks.clone(), torsion_values, sc, dimension)
            .map_err(|e| err(ErrorKind::InvalidRecord, betti.line(), 1, e.to_string()))?;
        record.morse = Some(data);
    } else if torsion.get().is_some() || simply.get().is_some() {
        let line = torsion.line().max(simply.line());
        return Err(err(
            ErrorKind::MissingField,
            line,
            1,
            "homology data needs a `betti` line",
        ));
    }

    if let Err(e) = record.validate() {
        let line = if known.get().is_some() {
            known.line()
        } else {
            dim.line()
        };
        return Err(err(ErrorKind::InvalidRecord, line, 1, e));
    }
    Ok(record)
}

/// Labels must read back as the monomial they display as.
fn check_label(line: &Line, t: &Token) -> Result<(), ParseError> {
    let ok = Expr::parse(&t.text)
        .ok()
        .filter(|e| e.monomials().len() == 1 && e.to_string() == t.text)
        .is_some();
    if ok {
        Ok(())
    } else {
        Err(err(
            ErrorKind::Syntax,
            line.number,
            t.column,
            format!("`{}` is not a valid basis label", t.text),
        ))
    }
}

fn build_table(
    basis: &[(String, u32, usize)],
    products: &[(String, String, Expr, usize)],
    top: u32,
    first_line: usize,
) -> Result<MultiplicationTable, ParseError> {
    let index: HashMap<&str, usize> = basis.iter().enumerate().map(|(i, (l, _, _))| (l.as_str(), i)).collect();
    let unit = basis.iter().position(|(_, d, _)| *d == 0);
    let lookup = |label: &str, line: usize| {
        index.get(label).copied().ok_or_else(|| {
            err(
                ErrorKind::UnknownSymbol,
                line,
                1,
                format!("`{label}` is not a basis label"),
            )
        })
    };
    let mut entries = Vec::with_capacity(products.len());
    for (left, right, expr, line) in products {
        let (i, j) = (lookup(left, *line)?, lookup(right, *line)?);
        let mut value = Element::zero();
        for mono in expr.monomials() {
            let k = if mono.factors().is_empty() {
                unit.ok_or_else(|| err(ErrorKind::InvalidRing, *line, 1, "table has no degree-0 element"))?
            } else {
                lookup(&mono.to_string(), *line)?
            };
            value.add_term(k);
        }
        entries.push((i, j, value));
    }
    let labels = basis.iter().map(|(l, d, _)| (l.clone(), *d)).collect();
    MultiplicationTable::new(labels, top, entries)
        .map_err(|e| err(ErrorKind::InvalidRing, first_line, 1, e.to_string()))
}

/// Normalized text form of a record; `parse_space` reads it back unchanged.
pub fn serialize_space(r: &SpaceRecord) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("space {}", r.name));
    line(format!("dim {}", r.dimension));
    line(format!("connectivity {}", r.connectivity));
    line(format!("stably-parallelizable {}", r.stably_parallelizable));
    line(format!("orientable {}", r.orientable));
    match r.ring.as_ref().map(Ring::repr) {
        Some(RingRepr::Presentation(p)) => {
            for g in p.generators() {
                line(format!("generator {} {}", g.name, g.degree));
            }
            for (g, t) in p.generators().iter().zip(p.truncations()) {
                line(format!("truncate {} {}", g.name, t));
            }
        }
        Some(RingRepr::Table(t)) => {
            for b in t.basis() {
                line(format!("basis {} {}", b.label, b.degree));
            }
            for (i, j, v) in t.nonzero_products() {
                let terms: Vec<&str> = v.terms().map(|&k| t.basis()[k].label.as_str()).collect();
                line(format!(
                    "product {} {} = {}",
                    t.basis()[i].label,
                    t.basis()[j].label,
                    terms.join(" + ")
                ));
            }
        }
        None => {}
    }
    if let Some(k) = &r.known_cat {
        line(format!("known-cat {} {}", k.value, quote(&k.citation)));
    }
    if let Some(g) = r.genus {
        line(format!("genus {g}"));
    }
    if let Some(m) = &r.morse {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        line(format!("betti {}", join(m.ranks())));
        if !m.is_torsion_free() {
            line(format!("torsion {}", join(m.torsion())));
        }
        line(format!("simply-connected {}", m.simply_connected()));
    }
    for n in &r.notes {
        line(format!("note {}", quote(n)));
    }
    out
}

/// One `send GEN -> EXPR` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Send {
    pub generator: String,
    pub image: Expr,
    pub line: usize,
}

/// A putative map `f: domain -> range` of degree ±1, given by the images of
/// the range's generators in the domain's ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub name: String,
    pub domain: String,
    pub range: String,
    pub degree: i32,
    pub sends: Vec<Send>,
}

pub fn parse_map(text: &str) -> Result<MapFile, ParseError> {
    let mut name = Slot::new();
    let mut domain = Slot::new();
    let mut range = Slot::new();
    let mut degree = Slot::new();
    let mut sends: Vec<Send> = Vec::new();
    for line in lines(text)? {
        let kw = line.keyword();
        match kw.text.as_str() {
            "map" => {
                let a = line.expect_args(1, "map NAME")?;
                name.set(&line, a[0].text.clone())?;
            }
            "domain" => {
                let a = line.expect_args(1, "domain SPACE")?;
                domain.set(&line, a[0].text.clone())?;
            }
            "range" => {
                let a = line.expect_args(1, "range SPACE")?;
                range.set(&line, a[0].text.clone())?;
            }
            "degree" => {
                let a = line.expect_args(1, "degree +1|-1")?;
                let d = match a[0].text.as_str() {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    other => {
                        return Err(err(
                            ErrorKind::InvalidDegree,
                            line.number,
                            a[0].column,
                            format!("map degree must be +1 or -1, found `{other}`"),
                        ))
                    }
                };
                degree.set(&line, d)?;
            }
            "send" => {
                if line.tokens.len() < 4 || line.tokens[2].text != "->" {
                    return Err(line.syntax("send GEN -> EXPR"));
                }
                let generator = line.tokens[1].text.clone();
                if let Some(prev) = sends.iter().find(|s| s.generator == generator) {
                    return Err(err(
                        ErrorKind::DuplicateKey,
                        line.number,
                        line.tokens[1].column,
                        format!("image of `{generator}` already given on line {}", prev.line),
                    ));
                }
                sends.push(Send {
                    generator,
                    image: line.expr_after(2)?,
                    line: line.number,
                });
            }
            other => {
                return Err(err(
                    ErrorKind::UnknownKeyword,
                    line.number,
                    kw.column,
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
    }
    let missing = |what: &str| err(ErrorKind::MissingField, 0, 0, format!("`{what}` line missing"));
    Ok(MapFile {
        name: name.get().cloned().ok_or_else(|| missing("map NAME"))?,
        domain: domain.get().cloned().ok_or_else(|| missing("domain SPACE"))?,
        range: range.get().cloned().ok_or_else(|| missing("range SPACE"))?,
        degree: *degree.get().ok_or_else(|| missing("degree +1|-1"))?,
        sends,
    })
}

pub fn serialize_map(m: &MapFile) -> String {
    let mut out = format!(
        "map {}\ndomain {}\nrange {}\ndegree {}\n",
        m.name,
        m.domain,
        m.range,
        if m.degree < 0 { "-1" } else { "+1" }
    );
    for s in &m.sends {
        out.push_str(&format!("send {} -> {}\n", s.generator, s.image));
    }
    out
}
