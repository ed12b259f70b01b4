//! Line-oriented text formats with a versioned header.
//!
//! * `fibred v1`: a `[category]` section and an optional `[complex]` section.
//! * `fibred-module v1`: a module by values and generator actions.
//! * `fibred-chains v1`: a free chain complex over an embedded category.
//! * `fibred-map v1`: functor overrides and chain map components.
//! * `fibred-domination v1`: two chain complexes with `f`, `g` and `h`.
//!
//! Blank lines and text after `#` are ignored.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::category::{
    CategorySpec, CompletionConfig, MorphismWord, ObjectId, PresentedCategory, TableSpec,
};
use crate::chains::{CategoryFunctor, FreeChainComplex, ZPiEntry, ZPiMatrix};
use crate::complex::{Attaching, FComplex};
use crate::error::{Error, Result};
use crate::ktheory::Domination;
use crate::linalg::{AbGroup, IntMatrix, PresentedGroup};
use crate::module::{CatModule, Variance};
use crate::pi::PiCategory;

struct Line<'a> {
    no: usize,
    text: &'a str,
}

struct Reader<'a> {
    file: &'a str,
}

impl<'a> Reader<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    /// Non-empty, comment-stripped lines after checking the header.
    fn lines(&self, text: &'a str, header: &str) -> Result<Vec<Line<'a>>> {
        let mut out = Vec::new();
        let mut seen_header = false;
        for (k, raw) in text.lines().enumerate() {
            let t = raw.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            if !seen_header {
                if t != header {
                    return Err(self.err(k + 1, format!("expected header `{header}`, found `{t}`")));
                }
                seen_header = true;
                continue;
            }
            out.push(Line { no: k + 1, text: t });
        }
        if !seen_header {
            return Err(self.err(0, format!("missing header `{header}`")));
        }
        Ok(out)
    }

    fn locate<T>(&self, line: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            e @ Error::Parse { .. } => e,
            Error::Validation(m) if m.starts_with(&format!("{}:", self.file)) => {
                Error::Validation(m)
            }
            other => Error::Validation(format!("{}:{line}: {other}", self.file)),
        })
    }
}

/// Splits at the first ` : `; a trailing ` :` gives an empty tail.
fn split_colon(s: &str) -> (&str, Option<&str>) {
    if let Some(h) = s.strip_suffix(" :") {
        return (h.trim(), Some(""));
    }
    match s.split_once(" : ") {
        Some((h, t)) => (h.trim(), Some(t.trim())),
        None => (s, None),
    }
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// Splits `lines` at `[section]` markers.
fn sections<'a>(
    r: &Reader<'_>,
    lines: Vec<Line<'a>>,
) -> Result<Vec<(String, usize, Vec<Line<'a>>)>> {
    let mut out: Vec<(String, usize, Vec<Line<'a>>)> = Vec::new();
    for l in lines {
        if let Some(name) = l.text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            out.push((name.trim().to_string(), l.no, Vec::new()));
        } else {
            match out.last_mut() {
                Some(s) => s.2.push(l),
                None => return Err(r.err(l.no, "content before the first section")),
            }
        }
    }
    Ok(out)
}

fn parse_category_lines(r: &Reader<'_>, lines: &[Line<'_>]) -> Result<PresentedCategory> {
    let mut spec = CategorySpec::default();
    let mut tables: Option<TableSpec> = None;
    let mut config = None;
    for l in lines {
        let w = words(l.text);
        let s = |x: &str| x.to_string();
        let eq = |rest: &str| -> Result<(String, String)> {
            let (a, b) = rest
                .split_once('=')
                .ok_or_else(|| r.err(l.no, "expected `lhs = rhs`"))?;
            Ok((a.trim().to_string(), b.trim().to_string()))
        };
        match w.as_slice() {
            ["object", name] => spec.objects.push(s(name)),
            ["gen", name, src, tgt] => spec.generators.push((s(name), s(src), s(tgt))),
            ["rel", ..] => spec.relations.push(eq(l.text["rel".len()..].trim())?),
            ["track", ..] => spec.tracks.push(eq(l.text["track".len()..].trim())?),
            ["element", name, src, tgt] => tables
                .get_or_insert_with(Default::default)
                .elements
                .push((s(name), s(src), s(tgt))),
            ["identity", obj, e] => tables
                .get_or_insert_with(Default::default)
                .identities
                .push((s(obj), s(e))),
            ["value", g, e] => tables
                .get_or_insert_with(Default::default)
                .values
                .push((s(g), s(e))),
            ["compose", f, g, h] => {
                tables
                    .get_or_insert_with(Default::default)
                    .compose
                    .push((s(f), s(g), s(h)))
            }
            ["completion", a, b, c] => {
                let p = |x: &str| {
                    x.parse::<usize>()
                        .map_err(|e| r.err(l.no, format!("`{x}`: {e}")))
                };
                config = Some(CompletionConfig {
                    max_rules: p(a)?,
                    max_word_len: p(b)?,
                    max_steps: p(c)?,
                });
            }
            _ => return Err(r.err(l.no, format!("unrecognised category line `{}`", l.text))),
        }
    }
    spec.tables = tables;
    let first = lines.first().map(|l| l.no).unwrap_or(0);
    let mut cat = r.locate(first, PresentedCategory::from_spec(&spec))?;
    if let Some(c) = config {
        cat.set_completion_config(c);
    }
    Ok(cat)
}

fn emit_category(cat: &PresentedCategory, out: &mut String) {
    let spec = cat.to_spec();
    out.push_str("[category]\n");
    for o in &spec.objects {
        out.push_str(&format!("object {o}\n"));
    }
    for (g, a, b) in &spec.generators {
        out.push_str(&format!("gen {g} {a} {b}\n"));
    }
    for (a, b) in &spec.relations {
        out.push_str(&format!("rel {a} = {b}\n"));
    }
    for (a, b) in &spec.tracks {
        out.push_str(&format!("track {a} = {b}\n"));
    }
    if let Some(t) = &spec.tables {
        for (e, a, b) in &t.elements {
            out.push_str(&format!("element {e} {a} {b}\n"));
        }
        for (o, e) in &t.identities {
            out.push_str(&format!("identity {o} {e}\n"));
        }
        for (g, e) in &t.values {
            out.push_str(&format!("value {g} {e}\n"));
        }
        for (f, g, h) in &t.compose {
            out.push_str(&format!("compose {f} {g} {h}\n"));
        }
    }
    let c = cat.completion_config();
    if c != CompletionConfig::default() {
        out.push_str(&format!(
            "completion {} {} {}\n",
            c.max_rules, c.max_word_len, c.max_steps
        ));
    }
}

/// Parses a `fibred v1` document. Without a `[complex]` section the complex is empty.
pub fn parse_fibred(text: &str, file: &str) -> Result<FComplex> {
    let r = Reader { file };
    let lines = r.lines(text, "fibred v1")?;
    let secs = sections(&r, lines)?;
    let mut cat = None;
    let mut complex_lines = None;
    for (name, no, body) in secs {
        match name.as_str() {
            "category" if cat.is_none() => cat = Some(parse_category_lines(&r, &body)?),
            "complex" if complex_lines.is_none() => complex_lines = Some(body),
            other => return Err(r.err(no, format!("unexpected section `[{other}]`"))),
        }
    }
    let cat = cat.ok_or_else(|| r.err(0, "missing `[category]` section"))?;
    let body = complex_lines.unwrap_or_default();
    let relative = body.iter().any(|l| l.text == "relative");
    let mut x = FComplex::new(cat, relative);
    for l in body.iter().filter(|l| l.text != "relative") {
        let (head, tail) = split_colon(l.text);
        let w = words(head);
        let kind = w.first().copied().unwrap_or("");
        let dim: usize = kind
            .strip_prefix("cell")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| r.err(l.no, format!("unrecognised complex line `{}`", l.text)))?;
        let fib = |name: &str| r.locate(l.no, x.category().object(name));
        match (dim, w.as_slice(), tail) {
            (0, [_, name, f], None) => {
                let f = fib(f)?;
                r.locate(l.no, x.add_cell0(name, f))?;
            }
            (1, [_, name, f, d0, d1], None) => {
                let f = fib(f)?;
                let d0 = r.locate(l.no, x.parse_object(d0))?;
                let d1 = r.locate(l.no, x.parse_object(d1))?;
                r.locate(l.no, x.add_cell1(name, f, d0, d1))?;
            }
            (1, [_, name, f, d0, d1, "base", b], None) => {
                let f = fib(f)?;
                let d0 = r.locate(l.no, x.parse_object(d0))?;
                let d1 = r.locate(l.no, x.parse_object(d1))?;
                let b = r.locate(l.no, x.parse_object(b))?;
                r.locate(l.no, x.add_cell1_based(name, f, b, d0, d1))?;
            }
            (2, [_, name, f, base], Some(t)) => {
                let f = fib(f)?;
                let base = r.locate(l.no, x.parse_object(base))?;
                let letters = words(t)
                    .into_iter()
                    .map(|s| r.locate(l.no, x.parse_letter(s)))
                    .collect::<Result<Vec<_>>>()?;
                r.locate(l.no, x.add_cell2(name, f, base, letters))?;
            }
            (n, [_, name, f, base], Some(t)) if n >= 3 => {
                let f = fib(f)?;
                let base = r.locate(l.no, x.parse_object(base))?;
                let row = r.locate(l.no, x.parse_row(t, n))?;
                r.locate(l.no, x.add_cell(name, n, f, base, row))?;
            }
            _ => return Err(r.err(l.no, format!("malformed cell line `{}`", l.text))),
        }
    }
    Ok(x)
}

/// A `fibred v1` document holding only a category.
pub fn emit_category_file(cat: &PresentedCategory) -> String {
    let mut out = String::from("fibred v1\n");
    emit_category(cat, &mut out);
    out
}

pub fn emit_fibred(x: &FComplex) -> String {
    let mut out = String::from("fibred v1\n");
    emit_category(x.category(), &mut out);
    if x.cell_count() == 0 && !x.is_relative() {
        return out;
    }
    out.push_str("[complex]\n");
    if x.is_relative() {
        out.push_str("relative\n");
    }
    let cat = x.category();
    for n in 0..=x.dim() {
        for c in x.cells(n) {
            let fib = cat.object_name(c.fibre);
            match &c.attaching {
                Attaching::Point => out.push_str(&format!("cell0 {} {fib}\n", c.name)),
                Attaching::Edge { d0, d1 } => {
                    out.push_str(&format!(
                        "cell1 {} {fib} {} {}",
                        c.name,
                        x.display_object(d0),
                        x.display_object(d1)
                    ));
                    if let Some(b) = &c.base {
                        if b != d0 {
                            out.push_str(&format!(" base {}", x.display_object(b)));
                        }
                    }
                    out.push('\n');
                }
                Attaching::Loop(letters) => {
                    let base = c
                        .base
                        .as_ref()
                        .map(|b| x.display_object(b))
                        .unwrap_or_default();
                    let ls: Vec<String> = letters.iter().map(|l| x.display_letter(l)).collect();
                    out.push_str(
                        &format!("cell2 {} {fib} {base} : {}\n", c.name, ls.join(" "))
                            .replace(" \n", "\n"),
                    );
                }
                Attaching::Row(row) => {
                    let base = c
                        .base
                        .as_ref()
                        .map(|b| x.display_object(b))
                        .unwrap_or_default();
                    out.push_str(&format!(
                        "cell{n} {} {fib} {base} : {}\n",
                        c.name,
                        x.display_row(n, row)
                    ));
                }
            }
        }
    }
    out
}

/// Parses an integer matrix `[1 0; 0 1]`, a bare row `1 2`, or `[]`.
pub fn parse_matrix(text: &str, rows: usize, cols: usize) -> Result<IntMatrix> {
    let t = text.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(t);
    let mut data: Vec<Vec<BigInt>> = Vec::new();
    for row in t.split(';') {
        let row = row.trim();
        if row.is_empty() {
            continue;
        }
        let parsed = row
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Validation(format!("`{s}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        data.push(parsed);
    }
    if rows * cols == 0 {
        if data.iter().all(Vec::is_empty) {
            return Ok(IntMatrix::zeros(rows, cols));
        }
        return Err(Error::Validation(format!(
            "expected an empty {rows}x{cols} matrix"
        )));
    }
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::Validation(format!(
            "expected a {rows}x{cols} matrix, got `{text}`"
        )));
    }
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, r) in data.into_iter().enumerate() {
        for (j, v) in r.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn emit_matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Parses `0`, `Z`, `Z^3`, `Z/2`, `Z^2 + Z/2 + Z/6`.
pub fn parse_group(text: &str) -> Result<AbGroup> {
    let t = text.trim();
    if t == "0" {
        return Ok(AbGroup::trivial());
    }
    let mut rank = 0;
    let mut torsion = Vec::new();
    for part in t.split('+') {
        let p = part.trim();
        if p == "Z" {
            rank += 1;
        } else if let Some(k) = p.strip_prefix("Z^") {
            rank += k
                .parse::<usize>()
                .map_err(|e| Error::Validation(format!("`{p}`: {e}")))?;
        } else if let Some(m) = p.strip_prefix("Z/") {
            let m: i64 = m
                .parse()
                .map_err(|e| Error::Validation(format!("`{p}`: {e}")))?;
            if m < 1 {
                return Err(Error::Validation(format!(
                    "`{p}`: modulus must be positive"
                )));
            }
            torsion.push(m);
        } else {
            return Err(Error::Validation(format!("`{p}` is not a group summand")));
        }
    }
    Ok(AbGroup::new(rank, &torsion))
}

/// A parsed module file, before it is attached to a category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleFile {
    pub variance: Variance,
    /// True when the module lives on the structure category and is pulled back.
    pub over_structure: bool,
    pub values: Vec<(String, AbGroup)>,
    pub actions: Vec<(String, String)>,
    lines: HashMap<String, usize>,
    file: String,
}

/// Parses a `fibred-module v1` document.
///
/// ```text
/// fibred-module v1
/// variance left
/// over structure
/// value G/e Z
/// value G/G Z/2
/// act t [-1]
/// act p [1]
/// ```
pub fn parse_module(text: &str, file: &str) -> Result<ModuleFile> {
    let r = Reader { file };
    let mut m = ModuleFile {
        variance: Variance::Left,
        over_structure: false,
        values: Vec::new(),
        actions: Vec::new(),
        lines: HashMap::new(),
        file: file.to_string(),
    };
    for l in r.lines(text, "fibred-module v1")? {
        let w = words(l.text);
        match w.as_slice() {
            ["variance", v] => m.variance = r.locate(l.no, v.parse())?,
            ["over", "structure"] => m.over_structure = true,
            ["over", "pi"] => m.over_structure = false,
            ["value", obj, ..] => {
                let g = r.locate(
                    l.no,
                    parse_group(l.text["value".len()..].trim()[obj.len()..].trim()),
                )?;
                m.lines.insert(format!("value {obj}"), l.no);
                m.values.push((obj.to_string(), g));
            }
            ["act", gen, ..] => {
                m.lines.insert(format!("act {gen}"), l.no);
                let rest = l.text["act".len()..].trim()[gen.len()..].trim();
                m.actions.push((gen.to_string(), rest.to_string()));
            }
            _ => return Err(r.err(l.no, format!("unrecognised module line `{}`", l.text))),
        }
    }
    Ok(m)
}

impl ModuleFile {
    /// Builds the module over `cat`; unspecified values are `0`, unspecified actions identities or zero.
    pub fn build(&self, cat: &PresentedCategory) -> Result<CatModule> {
        let r = Reader { file: &self.file };
        let mut values = vec![PresentedGroup::free(0); cat.object_count()];
        for (name, g) in &self.values {
            let no = self
                .lines
                .get(&format!("value {name}"))
                .copied()
                .unwrap_or(0);
            let o = r.locate(no, cat.object(name))?;
            values[o.0] = PresentedGroup::from(g);
        }
        let mut actions: Vec<IntMatrix> = cat
            .generators()
            .iter()
            .map(|g| {
                let (from, to) = match self.variance {
                    Variance::Left => (g.source, g.target),
                    Variance::Right => (g.target, g.source),
                };
                let (a, b) = (values[to.0].gens, values[from.0].gens);
                if a == b && values[to.0] == values[from.0] {
                    IntMatrix::identity(a)
                } else {
                    IntMatrix::zeros(a, b)
                }
            })
            .collect();
        for (name, text) in &self.actions {
            let no = self.lines.get(&format!("act {name}")).copied().unwrap_or(0);
            let g = cat
                .gen_id(name)
                .ok_or_else(|| r.err(no, format!("unknown generator `{name}`")))?;
            let shape = actions[g.0].shape();
            actions[g.0] = r.locate(no, parse_matrix(text, shape.0, shape.1))?;
        }
        let m = CatModule {
            variance: self.variance,
            values,
            actions,
        };
        let report = m.validate(cat);
        if !report.is_valid() {
            return Err(Error::InvalidModule(format!("{}: {}", self.file, report)));
        }
        Ok(m)
    }

    /// Builds the module over the fundamental category, pulling back when needed.
    pub fn build_for(&self, pi: &PiCategory) -> Result<CatModule> {
        if self.over_structure {
            Ok(CatModule::pullback(
                pi,
                &self.build(pi.base_complex().category())?,
            ))
        } else {
            self.build(pi.category())
        }
    }
}

pub fn emit_module(m: &CatModule, cat: &PresentedCategory, over_structure: bool) -> String {
    let mut out = String::from("fibred-module v1\n");
    out.push_str(&format!("variance {}\n", m.variance));
    if over_structure {
        out.push_str("over structure\n");
    }
    for o in cat.object_ids() {
        out.push_str(&format!(
            "value {} {}\n",
            cat.object_name(o),
            m.values[o.0].canonical()
        ));
    }
    for (g, a) in cat.generators().iter().zip(&m.actions) {
        out.push_str(&format!("act {} {}\n", g.name, emit_matrix(a)));
    }
    out
}

/// Parses `2*w - v + id(X)` with words over `cat`; `hint` serves a bare `id`.
pub fn parse_entry(cat: &PresentedCategory, text: &str, hint: ObjectId) -> Result<ZPiEntry> {
    let mut e = ZPiEntry::zero();
    let t = text.trim();
    if t == "0" || t.is_empty() {
        return Ok(e);
    }
    let mut sign = BigInt::from(1);
    let mut expect_term = true;
    for tok in t.split_whitespace() {
        match tok {
            "+" | "-" if !expect_term => {
                sign = BigInt::from(if tok == "-" { -1 } else { 1 });
                expect_term = true;
            }
            _ if expect_term => {
                let (neg, body) = match tok.strip_prefix('-') {
                    Some(b) if !b.is_empty() => (true, b),
                    _ => (false, tok),
                };
                let (coeff, word) = match body.split_once('*') {
                    Some((c, w)) => (
                        c.parse::<BigInt>()
                            .map_err(|err| Error::Validation(format!("`{c}`: {err}")))?,
                        w,
                    ),
                    None => (BigInt::from(1), body),
                };
                let w = cat.parse_word(word, Some(hint))?;
                let c = if neg { -coeff } else { coeff };
                e.push(&sign * c, w);
                sign = BigInt::from(1);
                expect_term = false;
            }
            _ => return Err(Error::Validation(format!("unexpected `{tok}` in `{text}`"))),
        }
    }
    if expect_term {
        return Err(Error::Validation(format!("`{text}` ends with an operator")));
    }
    Ok(e)
}

fn parse_anchor_list(
    r: &Reader<'_>,
    cat: &PresentedCategory,
    l: &Line<'_>,
    items: &[&str],
) -> Result<(Vec<ObjectId>, Vec<String>)> {
    let mut anchors = Vec::new();
    let mut labels = Vec::new();
    for it in items {
        let (label, obj) = it
            .split_once('@')
            .ok_or_else(|| r.err(l.no, format!("basis element `{it}` is not `label@object`")))?;
        anchors.push(r.locate(l.no, cat.object(obj))?);
        labels.push(label.to_string());
    }
    Ok((anchors, labels))
}

struct ChainSection {
    bases: Vec<Vec<ObjectId>>,
    labels: Vec<Vec<String>>,
    entries: Vec<(usize, usize, String, String, String)>,
}

fn parse_chain_lines(
    r: &Reader<'_>,
    cat: &PresentedCategory,
    lines: &[Line<'_>],
) -> Result<ChainSection> {
    let mut s = ChainSection {
        bases: Vec::new(),
        labels: Vec::new(),
        entries: Vec::new(),
    };
    for l in lines {
        let (head, tail) = split_colon(l.text);
        let tail = tail.unwrap_or("");
        let w = words(head);
        match w.as_slice() {
            ["degree", n] => {
                let n: usize = n.parse().map_err(|e| r.err(l.no, format!("`{n}`: {e}")))?;
                if n != s.bases.len() {
                    return Err(r.err(l.no, format!("degree {n} out of order")));
                }
                let (a, lb) = parse_anchor_list(r, cat, l, &words(tail))?;
                s.bases.push(a);
                s.labels.push(lb);
            }
            ["d", n, row, col] => {
                let n: usize = n.parse().map_err(|e| r.err(l.no, format!("`{n}`: {e}")))?;
                s.entries.push((
                    l.no,
                    n,
                    row.to_string(),
                    col.to_string(),
                    tail.trim().to_string(),
                ));
            }
            _ => return Err(r.err(l.no, format!("unrecognised chains line `{}`", l.text))),
        }
    }
    Ok(s)
}

fn position(r: &Reader<'_>, no: usize, labels: &[String], name: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == name)
        .ok_or_else(|| r.err(no, format!("unknown basis element `{name}`")))
}

fn build_chains(
    r: &Reader<'_>,
    cat: &PresentedCategory,
    s: ChainSection,
) -> Result<FreeChainComplex> {
    let mut d: Vec<ZPiMatrix> = (1..s.bases.len())
        .map(|n| ZPiMatrix::zeros(s.bases[n].clone(), s.bases[n - 1].clone()))
        .collect();
    for (no, n, row, col, text) in s.entries {
        if n == 0 || n >= s.bases.len() {
            return Err(r.err(no, format!("no differential d {n}")));
        }
        let i = position(r, no, &s.labels[n], &row)?;
        let j = position(r, no, &s.labels[n - 1], &col)?;
        let e = r.locate(no, parse_entry(cat, &text, s.bases[n][i]))?;
        r.locate(no, d[n - 1].set(i, j, e))?;
    }
    let bases = if s.bases.is_empty() {
        vec![Vec::new()]
    } else {
        s.bases
    };
    let labels = if s.labels.is_empty() {
        vec![Vec::new()]
    } else {
        s.labels
    };
    r.locate(0, FreeChainComplex::new(cat.clone(), bases, labels, d))
}

/// Parses a `fibred-chains v1` document: `[category]` then `[chains]`.
pub fn parse_chains(text: &str, file: &str) -> Result<FreeChainComplex> {
    let r = Reader { file };
    let secs = sections(&r, r.lines(text, "fibred-chains v1")?)?;
    let mut cat = None;
    let mut out = None;
    for (name, no, body) in secs {
        match name.as_str() {
            "category" => cat = Some(parse_category_lines(&r, &body)?),
            "chains" => {
                let c = cat
                    .as_ref()
                    .ok_or_else(|| r.err(no, "`[chains]` before `[category]`"))?;
                let s = parse_chain_lines(&r, c, &body)?;
                out = Some(build_chains(&r, c, s)?);
            }
            other => return Err(r.err(no, format!("unexpected section `[{other}]`"))),
        }
    }
    out.ok_or_else(|| r.err(0, "missing `[chains]` section"))
}

fn emit_chain_body(c: &FreeChainComplex, out: &mut String) {
    let cat = c.category();
    for n in 0..c.degrees() {
        let items: Vec<String> = c
            .labels(n)
            .iter()
            .zip(c.basis(n))
            .map(|(l, o)| format!("{l}@{}", cat.object_name(*o)))
            .collect();
        out.push_str(&format!("degree {n} : {}\n", items.join(" ")).replace(" \n", "\n"));
    }
    for n in 1..c.degrees() {
        let d = c.differential(n);
        for i in 0..d.row_count() {
            for j in 0..d.col_count() {
                if !d.entry(i, j).is_zero() {
                    out.push_str(&format!(
                        "d {n} {} {} : {}\n",
                        c.labels(n)[i],
                        c.labels(n - 1)[j],
                        d.entry(i, j).display(cat)
                    ));
                }
            }
        }
    }
}

/// Chain complex dump; [`parse_chains`] reads it back.
pub fn emit_chains(c: &FreeChainComplex) -> String {
    let mut out = String::from("fibred-chains v1\n");
    emit_category(c.category(), &mut out);
    out.push_str("[chains]\n");
    emit_chain_body(c, &mut out);
    out
}

/// Emits a matrix over the category ring with row and column labels.
pub fn emit_zpi_matrix(
    cat: &PresentedCategory,
    m: &ZPiMatrix,
    rows: &[String],
    cols: &[String],
) -> String {
    let mut out = String::new();
    for i in 0..m.row_count() {
        for j in 0..m.col_count() {
            if !m.entry(i, j).is_zero() {
                out.push_str(&format!(
                    "entry {} {} : {}\n",
                    rows[i],
                    cols[j],
                    m.entry(i, j).display(cat)
                ));
            }
        }
    }
    out
}

/// A parsed map file: functor overrides and chain map entries by cell name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapFile {
    pub objects: Vec<(String, String)>,
    pub gens: Vec<(String, String)>,
    /// `(degree, source cell, target cell, entry text)`.
    pub entries: Vec<(usize, String, String, String)>,
    file: String,
    lines: Vec<usize>,
}

/// Parses a `fibred-map v1` document.
///
/// ```text
/// fibred-map v1
/// object c:id c:id
/// gen e = e.e
/// map 1 e e : id + e
/// ```
pub fn parse_map(text: &str, file: &str) -> Result<MapFile> {
    let r = Reader { file };
    let mut m = MapFile {
        file: file.to_string(),
        ..MapFile::default()
    };
    for l in r.lines(text, "fibred-map v1")? {
        let (head, tail) = split_colon(l.text);
        let w = words(head);
        match (w.as_slice(), tail) {
            (["object", a, b], None) => m.objects.push((a.to_string(), b.to_string())),
            (["gen", g, "=", rest @ ..], None) if !rest.is_empty() => {
                m.gens.push((g.to_string(), rest.join(" ")))
            }
            (["map", n, a, b], Some(t)) => {
                let n: usize = n.parse().map_err(|e| r.err(l.no, format!("`{n}`: {e}")))?;
                m.entries
                    .push((n, a.to_string(), b.to_string(), t.trim().to_string()));
                m.lines.push(l.no);
            }
            _ => return Err(r.err(l.no, format!("unrecognised map line `{}`", l.text))),
        }
    }
    Ok(m)
}

impl MapFile {
    /// Functor (by names, with overrides) and per-degree matrices between two complexes.
    pub fn build(
        &self,
        source: &FreeChainComplex,
        target: &FreeChainComplex,
    ) -> Result<(CategoryFunctor, Vec<ZPiMatrix>)> {
        let r = Reader { file: &self.file };
        let (sc, tc) = (source.category(), target.category());
        let mut objects: Vec<Option<ObjectId>> = sc
            .object_ids()
            .map(|o| tc.object_id(sc.object_name(o)))
            .collect();
        for (a, b) in &self.objects {
            let o = r.locate(0, sc.object(a))?;
            objects[o.0] = Some(r.locate(0, tc.object(b))?);
        }
        let objects = objects
            .into_iter()
            .enumerate()
            .map(|(k, o)| {
                o.ok_or_else(|| {
                    r.err(
                        0,
                        format!("no image for object `{}`", sc.object_name(ObjectId(k))),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images: Vec<Option<MorphismWord>> = sc
            .generators()
            .iter()
            .map(|g| tc.gen_id(&g.name).map(|h| tc.gen_word(h)))
            .collect();
        for (g, w) in &self.gens {
            let id = sc
                .gen_id(g)
                .ok_or_else(|| r.err(0, format!("unknown source generator `{g}`")))?;
            let hint = objects[sc.generator(id).source.0];
            images[id.0] = Some(r.locate(0, tc.parse_word(w, Some(hint)))?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(k, w)| {
                w.ok_or_else(|| {
                    r.err(
                        0,
                        format!("no image for generator `{}`", sc.generators()[k].name),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let functor = CategoryFunctor { objects, images };
        let mut maps: Vec<ZPiMatrix> = (0..source.degrees())
            .map(|n| {
                ZPiMatrix::zeros(
                    source.basis(n).iter().map(|o| functor.object(*o)).collect(),
                    target.basis(n).to_vec(),
                )
            })
            .collect();
        for ((n, a, b, text), &no) in self.entries.iter().zip(&self.lines) {
            if *n >= maps.len() {
                return Err(r.err(no, format!("degree {n} is out of range")));
            }
            let i = position(&r, no, source.labels(*n), a)?;
            let j = position(&r, no, target.labels(*n), b)?;
            let hint = maps[*n].row_anchors()[i];
            let e = r.locate(no, parse_entry(tc, text, hint))?;
            r.locate(no, maps[*n].set(i, j, e))?;
        }
        Ok((functor, maps))
    }
}

/// Parses a `fibred-domination v1` document.
///
/// Sections: `[category]`, `[y]` and `[x]` (chains bodies), then `[maps]`
/// with lines `f n a b : entry`, `g n a b : entry` and `h n a b : entry`
/// (`h` maps degree `n` of `y` to degree `n + 1`).
pub fn parse_domination(text: &str, file: &str) -> Result<Domination> {
    let r = Reader { file };
    let secs = sections(&r, r.lines(text, "fibred-domination v1")?)?;
    let mut cat = None;
    let mut y = None;
    let mut x = None;
    let mut maps: Vec<(usize, String, usize, String, String, String)> = Vec::new();
    for (name, no, body) in secs {
        match name.as_str() {
            "category" => cat = Some(parse_category_lines(&r, &body)?),
            "y" | "x" => {
                let c = cat
                    .as_ref()
                    .ok_or_else(|| r.err(no, "complex before `[category]`"))?;
                let s = parse_chain_lines(&r, c, &body)?;
                let built = build_chains(&r, c, s)?;
                if name == "y" {
                    y = Some(built);
                } else {
                    x = Some(built);
                }
            }
            "maps" => {
                for l in body {
                    let (head, tail) = split_colon(l.text);
                    let tail = tail.ok_or_else(|| r.err(l.no, "expected ` : entry`"))?;
                    match words(head).as_slice() {
                        [k @ ("f" | "g" | "h"), n, a, b] => {
                            let n: usize =
                                n.parse().map_err(|e| r.err(l.no, format!("`{n}`: {e}")))?;
                            maps.push((
                                l.no,
                                k.to_string(),
                                n,
                                a.to_string(),
                                b.to_string(),
                                tail.trim().to_string(),
                            ));
                        }
                        _ => return Err(r.err(l.no, format!("unrecognised map line `{}`", l.text))),
                    }
                }
            }
            other => return Err(r.err(no, format!("unexpected section `[{other}]`"))),
        }
    }
    let cat = cat.ok_or_else(|| r.err(0, "missing `[category]`"))?;
    let y = y.ok_or_else(|| r.err(0, "missing `[y]`"))?;
    let x = x.ok_or_else(|| r.err(0, "missing `[x]`"))?;
    let zeros = |a: &FreeChainComplex, b: &FreeChainComplex, shift: usize| -> Vec<ZPiMatrix> {
        (0..a.degrees())
            .map(|n| ZPiMatrix::zeros(a.basis(n).to_vec(), b.basis(n + shift).to_vec()))
            .collect()
    };
    let mut f = zeros(&y, &x, 0);
    let mut g = zeros(&x, &y, 0);
    let mut h = zeros(&y, &y, 1);
    for (no, k, n, a, b, text) in maps {
        let (m, src, tgt, shift) = match k.as_str() {
            "f" => (&mut f, &y, &x, 0),
            "g" => (&mut g, &x, &y, 0),
            _ => (&mut h, &y, &y, 1),
        };
        if n >= m.len() {
            return Err(r.err(no, format!("degree {n} is out of range")));
        }
        let i = position(&r, no, src.labels(n), &a)?;
        let j = position(&r, no, tgt.labels(n + shift), &b)?;
        let e = r.locate(no, parse_entry(&cat, &text, src.basis(n)[i]))?;
        r.locate(no, m[n].set(i, j, e))?;
    }
    Ok(Domination { y, x, f, g, h })
}

pub fn emit_domination(d: &Domination) -> String {
    let cat = d.y.category();
    let mut out = String::from("fibred-domination v1\n");
    emit_category(cat, &mut out);
    out.push_str("[y]\n");
    emit_chain_body(&d.y, &mut out);
    out.push_str("[x]\n");
    emit_chain_body(&d.x, &mut out);
    out.push_str("[maps]\n");
    for (k, ms, src, tgt, shift) in [
        ("f", &d.f, &d.y, &d.x, 0),
        ("g", &d.g, &d.x, &d.y, 0),
        ("h", &d.h, &d.y, &d.y, 1),
    ] {
        for (n, m) in ms.iter().enumerate() {
            for i in 0..m.row_count() {
                for j in 0..m.col_count() {
                    if !m.entry(i, j).is_zero() {
                        out.push_str(&format!(
                            "{k} {n} {} {} : {}\n",
                            src.labels(n)[i],
                            tgt.labels(n + shift)[j],
                            m.entry(i, j).display(cat)
                        ));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::build_chain_complex;
    use crate::complex::{
        antipodal_sphere, elementary_expansion, projective_plane, reflection_sphere, torus,
        ExpansionSpec,
    };
    use crate::pi::{build_pi, ObjectPolicy};

    #[test]
    fn complexes_round_trip() {
        let mut corpus = vec![
            projective_plane(),
            torus(),
            antipodal_sphere(3),
            reflection_sphere(),
        ];
        let base = torus();
        let spec = ExpansionSpec {
            dim: 2,
            base: 0,
            sign: 1,
            loop_word: Vec::new(),
            tag: "0".into(),
        };
        corpus.push(elementary_expansion(&base, &spec).unwrap());
        for x in corpus {
            let text = emit_fibred(&x);
            let back = parse_fibred(&text, "t").unwrap();
            assert_eq!(back, x, "{text}");
            assert_eq!(emit_fibred(&back), text);
        }
    }

    #[test]
    fn errors_are_located() {
        let text =
            "fibred v1\n[category]\nobject pt\n[complex]\ncell0 c pt\ncell1 e pt c:id q:id\n";
        match parse_fibred(text, "bad.fib") {
            Err(Error::Validation(m)) => assert!(m.starts_with("bad.fib:6:"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_fibred("fibred v2\n", "x"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn chains_round_trip() {
        let x = antipodal_sphere(2);
        let pi = build_pi(&x, ObjectPolicy::CellsOnly, 64).unwrap();
        let c = build_chain_complex(&x, &pi).unwrap();
        let text = emit_chains(&c);
        let back = parse_chains(&text, "c").unwrap();
        assert_eq!(emit_chains(&back), text);
        for n in 1..c.degrees() {
            assert!(back
                .differential(n)
                .equals_in(&c.differential(n), c.category())
                .unwrap());
        }
    }

    #[test]
    fn modules_parse_and_validate() {
        let f = crate::category::z2_orbit_category();
        let text =
            "fibred-module v1\nvariance left\nvalue G/e Z\nvalue G/G Z/2\nact t [-1]\nact p [1]\n";
        let m = parse_module(text, "m").unwrap().build(&f).unwrap();
        assert_eq!(m.values[1].canonical().to_string(), "Z/2");
        let bad =
            "fibred-module v1\nvariance left\nvalue G/e Z\nvalue G/G Z\nact t [-1]\nact p [1]\n";
        assert!(parse_module(bad, "m").unwrap().build(&f).is_err());
        assert_eq!(
            parse_module(&emit_module(&m, &f, false), "m")
                .unwrap()
                .build(&f)
                .unwrap(),
            m
        );
    }

    #[test]
    fn groups_and_entries() {
        assert_eq!(parse_group("Z^2 + Z/2").unwrap(), AbGroup::new(2, &[2]));
        assert_eq!(parse_group("0").unwrap(), AbGroup::trivial());
        let f = crate::category::z2_orbit_category();
        let e = parse_entry(&f, "2*t - + t", ObjectId(0));
        assert!(e.is_err());
        let e = parse_entry(&f, "2*t - id", ObjectId(0)).unwrap();
        assert_eq!(e.display(&f), "2*t - id(G/e)");
    }
}
