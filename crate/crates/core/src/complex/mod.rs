//! Combinatorial fibred CW-complexes: cells with fibre objects,
//! basepoints and attaching data at the level the chain complex consumes.

mod corpus;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

pub use corpus::{
    antipodal_sphere, elementary_expansion, klein_bottle, point, projective_plane,
    reflection_circle, reflection_sphere, sphere, torus, trivial_action_sphere, ExpansionSpec,
};

use crate::category::{check_name, MorphismWord, ObjectId, PresentedCategory, ValidationReport};
use crate::error::{Error, Result};
use crate::pi::{PiLetter, PiObject};

/// One term `coeff * word @ cell` of a boundary row. `word` runs from the
/// anchor of the row's cell to the anchor of `cell`, letters in composition order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTerm {
    pub coeff: BigInt,
    pub word: Vec<PiLetter>,
    pub cell: usize,
}

/// Attaching data, by dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attaching {
    Point,
    /// Endpoints of a 1-cell.
    Edge {
        d0: PiObject,
        d1: PiObject,
    },
    /// Boundary loop of a 2-cell, letters in traversal order.
    Loop(Vec<PiLetter>),
    /// Boundary row of a cell of dimension at least 3.
    Row(Vec<RowTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCell {
    pub name: String,
    pub fibre: ObjectId,
    /// Basepoint anchor `(0-cell, fibre -> fibre of that 0-cell)`; `None` for 0-cells.
    pub base: Option<PiObject>,
    pub attaching: Attaching,
}

/// A reduced, normalized fibred CW-complex over a structure category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FComplex {
    category: PresentedCategory,
    relative: bool,
    cells: Vec<Vec<FCell>>,
}

/// Validation outcome plus the cell census.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub report: ValidationReport,
    pub census: BTreeMap<usize, BTreeMap<String, usize>>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }
}

impl fmt::Display for ComplexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.report)?;
        if self.is_valid() {
            writeln!(f)?;
        }
        for (n, per) in &self.census {
            let parts: Vec<String> = per.iter().map(|(o, k)| format!("{o}:{k}")).collect();
            writeln!(f, "dim {n}: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FComplex {
    /// An empty complex; relative complexes have their 0-cells as the subcomplex.
    pub fn new(category: PresentedCategory, relative: bool) -> Self {
        FComplex {
            category,
            relative,
            cells: vec![Vec::new()],
        }
    }

    pub fn category(&self) -> &PresentedCategory {
        &self.category
    }

    pub fn is_relative(&self) -> bool {
        self.relative
    }

    /// Highest dimension carrying a cell (0 for an empty complex).
    pub fn dim(&self) -> usize {
        self.cells.iter().rposition(|c| !c.is_empty()).unwrap_or(0)
    }

    pub fn cells(&self, n: usize) -> &[FCell] {
        self.cells.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell(&self, n: usize, i: usize) -> &FCell {
        &self.cells[n][i]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `(dimension, index)` of a named cell.
    pub fn find(&self, name: &str) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .enumerate()
            .find_map(|(n, cs)| cs.iter().position(|c| c.name == name).map(|i| (n, i)))
    }

    fn find_in(&self, n: usize, name: &str) -> Result<usize> {
        match self.find(name) {
            Some((m, i)) if m == n => Ok(i),
            Some((m, _)) => Err(Error::UnknownCell(format!(
                "`{name}` has dimension {m}, expected {n}"
            ))),
            None => Err(Error::UnknownCell(name.to_string())),
        }
    }

    /// Anchor object of a cell: `(c, id)` for a 0-cell, its basepoint otherwise.
    pub fn anchor(&self, n: usize, i: usize) -> PiObject {
        let c = &self.cells[n][i];
        match &c.base {
            Some(b) => b.clone(),
            None => PiObject {
                cell: i,
                phi: MorphismWord::identity(c.fibre),
            },
        }
    }

    fn push(&mut self, n: usize, cell: FCell) -> Result<usize> {
        check_name(&cell.name, "cell")?;
        if cell.name.chars().any(|c| "[]:,^()".contains(c)) || cell.name == "id" {
            return Err(Error::Validation(format!(
                "invalid cell name `{}`",
                cell.name
            )));
        }
        if self.find(&cell.name).is_some() {
            return Err(Error::Validation(format!(
                "cell `{}` declared twice",
                cell.name
            )));
        }
        if self.category.gen_id(&cell.name).is_some() {
            return Err(Error::Validation(format!(
                "cell `{}` has the name of a generator of the structure category",
                cell.name
            )));
        }
        while self.cells.len() <= n {
            self.cells.push(Vec::new());
        }
        self.cells[n].push(cell);
        Ok(self.cells[n].len() - 1)
    }

    pub fn add_cell0(&mut self, name: &str, fibre: ObjectId) -> Result<usize> {
        self.push(
            0,
            FCell {
                name: name.to_string(),
                fibre,
                base: None,
                attaching: Attaching::Point,
            },
        )
    }

    /// A 1-cell based at its `d0` endpoint.
    pub fn add_cell1(
        &mut self,
        name: &str,
        fibre: ObjectId,
        d0: PiObject,
        d1: PiObject,
    ) -> Result<usize> {
        self.add_cell1_based(name, fibre, d0.clone(), d0, d1)
    }

    /// A 1-cell with an explicit basepoint (normalization demands `base == d0`).
    pub fn add_cell1_based(
        &mut self,
        name: &str,
        fibre: ObjectId,
        base: PiObject,
        d0: PiObject,
        d1: PiObject,
    ) -> Result<usize> {
        self.push(
            1,
            FCell {
                name: name.to_string(),
                fibre,
                base: Some(base),
                attaching: Attaching::Edge { d0, d1 },
            },
        )
    }

    /// A 2-cell whose boundary loop is given in traversal order.
    pub fn add_cell2(
        &mut self,
        name: &str,
        fibre: ObjectId,
        base: PiObject,
        letters: Vec<PiLetter>,
    ) -> Result<usize> {
        self.push(
            2,
            FCell {
                name: name.to_string(),
                fibre,
                base: Some(base),
                attaching: Attaching::Loop(letters),
            },
        )
    }

    /// A cell of dimension `n >= 3` with a boundary row.
    pub fn add_cell(
        &mut self,
        name: &str,
        n: usize,
        fibre: ObjectId,
        base: PiObject,
        row: Vec<RowTerm>,
    ) -> Result<usize> {
        if n < 3 {
            return Err(Error::Validation(format!(
                "cell `{name}`: rows are for dimension 3 and up"
            )));
        }
        self.push(
            n,
            FCell {
                name: name.to_string(),
                fibre,
                base: Some(base),
                attaching: Attaching::Row(row),
            },
        )
    }

    /// Subcomplex of cells of dimension at most `n`.
    pub fn skeleton(&self, n: usize) -> FComplex {
        let mut cells: Vec<Vec<FCell>> = self.cells.iter().take(n + 1).cloned().collect();
        while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        FComplex {
            category: self.category.clone(),
            relative: self.relative,
            cells,
        }
    }

    /// Number of `n`-cells per fibre object, for every dimension up to `dim`.
    pub fn cell_census(&self) -> BTreeMap<usize, BTreeMap<String, usize>> {
        let mut out = BTreeMap::new();
        for n in 0..=self.dim() {
            let per: &mut BTreeMap<String, usize> = out.entry(n).or_default();
            for c in self.cells(n) {
                *per.entry(self.category.object_name(c.fibre).to_string())
                    .or_default() += 1;
            }
        }
        out
    }

    // ---- names of objects and letters ----

    /// `c:id` or `c:f,g` (meaning `f ∘ g`).
    pub fn display_object(&self, o: &PiObject) -> String {
        format!(
            "{}:{}",
            self.cells[0][o.cell].name,
            self.f_word_text(&o.phi)
        )
    }

    fn f_word_text(&self, w: &MorphismWord) -> String {
        if w.is_identity() {
            "id".to_string()
        } else {
            w.letters()
                .iter()
                .map(|g| self.category.generator(*g).name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn display_letter(&self, l: &PiLetter) -> String {
        match l {
            PiLetter::Track {
                edge,
                beta,
                inverse,
            } => {
                let mut s = self.cells[1][*edge].name.clone();
                if !beta.is_identity() {
                    s = format!("{s}[{}]", self.f_word_text(beta));
                }
                if *inverse {
                    s.push_str("^-1");
                }
                s
            }
            PiLetter::Whisker { gen, anchor } => {
                format!(
                    "{}[{}]",
                    self.category.generator(*gen).name,
                    self.display_object(anchor)
                )
            }
        }
    }

    /// Π word text: `id` or letters joined by `.` in composition order.
    pub fn display_letters(&self, letters: &[PiLetter]) -> String {
        if letters.is_empty() {
            return "id".to_string();
        }
        letters
            .iter()
            .map(|l| self.display_letter(l))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// F word with `,` separators; `id` is the identity of `target`.
    fn parse_f_word(&self, text: &str, target: ObjectId) -> Result<MorphismWord> {
        let text = text.trim();
        if text == "id" {
            return Ok(MorphismWord::identity(target));
        }
        self.category
            .parse_word(&text.replace(',', "."), Some(target))
    }

    /// Parses `c:id` or `c:f,g`.
    pub fn parse_object(&self, text: &str) -> Result<PiObject> {
        let (c, phi) = text.split_once(':').ok_or_else(|| {
            Error::Validation(format!("object `{text}` is not of the form cell:morphism"))
        })?;
        let cell = self.find_in(0, c.trim())?;
        let phi = self.parse_f_word(phi, self.cells[0][cell].fibre)?;
        Ok(PiObject { cell, phi })
    }

    /// Parses a letter: `e`, `e^-1`, `e[f,g]`, `e[f]^-1` or `a[c:psi]`.
    pub fn parse_letter(&self, text: &str) -> Result<PiLetter> {
        let text = text.trim();
        let (body, inverse) = match text.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (text, false),
        };
        let (head, inner) = match body.split_once('[') {
            Some((h, rest)) => {
                let inner = rest.strip_suffix(']').ok_or_else(|| {
                    Error::Validation(format!("letter `{text}` has an unclosed bracket"))
                })?;
                (h, Some(inner))
            }
            None => (body, None),
        };
        if let Some((1, edge)) = self.find(head) {
            let fibre = self.cells[1][edge].fibre;
            let beta = match inner {
                Some(b) => self.parse_f_word(b, fibre)?,
                None => MorphismWord::identity(fibre),
            };
            return Ok(PiLetter::Track {
                edge,
                beta,
                inverse,
            });
        }
        if let Some(gen) = self.category.gen_id(head) {
            if inverse {
                return Err(Error::Validation(format!(
                    "whisker `{text}` cannot be inverted"
                )));
            }
            let inner = inner.ok_or_else(|| {
                Error::Validation(format!("whisker `{text}` needs an anchor `[c:psi]`"))
            })?;
            return Ok(PiLetter::Whisker {
                gen,
                anchor: self.parse_object(inner)?,
            });
        }
        Err(Error::UnknownGenerator(head.to_string()))
    }

    /// Parses `id` or letters joined by `.`.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<PiLetter>> {
        let text = text.trim();
        if text == "id" || text.is_empty() {
            return Ok(Vec::new());
        }
        text.split('.').map(|l| self.parse_letter(l)).collect()
    }

    /// Parses a row `2*word@cell - other@cell2`, splitting on top-level `+`/`-`.
    pub fn parse_row(&self, text: &str, n: usize) -> Result<Vec<RowTerm>> {
        let mut terms = Vec::new();
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(terms);
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0i32;
        let mut prev = ' ';
        for ch in text.chars() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') && prev != '^' {
                if !cur.trim().is_empty() {
                    pieces.push((neg, cur.trim().to_string()));
                }
                cur.clear();
                neg = ch == '-';
                prev = ch;
                continue;
            }
            cur.push(ch);
            prev = ch;
        }
        if !cur.trim().is_empty() {
            pieces.push((neg, cur.trim().to_string()));
        }
        for (neg, piece) in pieces {
            let (lhs, cell) = piece
                .rsplit_once('@')
                .ok_or_else(|| Error::Validation(format!("row term `{piece}` lacks `@cell`")))?;
            let (coeff, word) = match lhs.split_once('*') {
                Some((c, w)) => (
                    c.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Validation(format!("bad coefficient in `{piece}`")))?,
                    w,
                ),
                None => match lhs.trim().parse::<BigInt>() {
                    Ok(c) => (c, "id"),
                    Err(_) => (BigInt::from(1), lhs),
                },
            };
            let coeff = if neg { -coeff } else { coeff };
            let cell = self.find_in(n - 1, cell.trim())?;
            terms.push(RowTerm {
                coeff,
                word: self.parse_letters(word)?,
                cell,
            });
        }
        Ok(terms)
    }

    pub fn display_row(&self, n: usize, row: &[RowTerm]) -> String {
        if row.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, t) in row.iter().enumerate() {
            let neg = t.coeff < BigInt::from(0);
            let mag = if neg {
                -t.coeff.clone()
            } else {
                t.coeff.clone()
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag != BigInt::from(1) {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&format!(
                "{}@{}",
                self.display_letters(&t.word),
                self.cells[n - 1][t.cell].name
            ));
        }
        s
    }

    // ---- endpoint arithmetic ----

    /// Normal form of an object.
    pub fn normalize_object(&self, o: &PiObject) -> Result<PiObject> {
        Ok(PiObject {
            cell: o.cell,
            phi: self.category.normalize(&o.phi)?,
        })
    }

    fn compose_object(&self, o: &PiObject, f: &MorphismWord) -> Result<PiObject> {
        Ok(PiObject {
            cell: o.cell,
            phi: self.category.normalize(&o.phi.compose(f)?)?,
        })
    }

    /// Normalized `(source, target)` of a letter.
    pub fn letter_ends(&self, l: &PiLetter) -> Result<(PiObject, PiObject)> {
        match l {
            PiLetter::Track {
                edge,
                beta,
                inverse,
            } => {
                let Attaching::Edge { d0, d1 } = &self.cells[1][*edge].attaching else {
                    unreachable!("1-cells carry edge data")
                };
                let s = self.compose_object(d0, beta)?;
                let t = self.compose_object(d1, beta)?;
                Ok(if *inverse { (t, s) } else { (s, t) })
            }
            PiLetter::Whisker { gen, anchor } => {
                let g = self.category.generator(*gen);
                if anchor.phi.source() != g.target {
                    return Err(Error::EndpointMismatch(format!(
                        "whisker `{}` does not end at the fibre of its anchor",
                        self.display_letter(l)
                    )));
                }
                let t = self.normalize_object(anchor)?;
                let s = self.compose_object(&t, &self.category.gen_word(*gen))?;
                Ok((s, t))
            }
        }
    }

    /// Endpoints of a composition-order word, checked for composability.
    pub fn word_ends(
        &self,
        letters: &[PiLetter],
        identity_at: &PiObject,
    ) -> Result<(PiObject, PiObject)> {
        let Some(last) = letters.last() else {
            let o = self.normalize_object(identity_at)?;
            return Ok((o.clone(), o));
        };
        let (src, mut at) = self.letter_ends(last)?;
        for l in letters.iter().rev().skip(1) {
            let (s, t) = self.letter_ends(l)?;
            if s != at {
                return Err(Error::EndpointMismatch(format!(
                    "letter `{}` starts at `{}` but the word so far ends at `{}`",
                    self.display_letter(l),
                    self.display_object(&s),
                    self.display_object(&at)
                )));
            }
            at = t;
        }
        Ok((src, at))
    }

    fn check_object(&self, o: &PiObject, fibre: ObjectId, what: &str, r: &mut ValidationReport) {
        if o.cell >= self.cells(0).len() {
            r.push(format!("{what}: 0-cell #{} does not exist", o.cell));
            return;
        }
        let target = self.cells[0][o.cell].fibre;
        if o.phi.source() != fibre || o.phi.target() != target {
            r.push(format!(
                "{what}: morphism `{}` is not {} -> {}",
                self.f_word_text(&o.phi),
                self.category.object_name(fibre),
                self.category.object_name(target)
            ));
        }
    }

    /// Checks every cell invariant and reports the census.
    pub fn validate(&self) -> ComplexReport {
        let mut r = ValidationReport::default();
        let nf_ok = self.category.has_normal_forms();
        if !nf_ok && self.dim() >= 1 {
            r.push("structure category has no normal forms within the completion bounds; endpoints cannot be checked");
        }
        if self.relative && self.cells(0).is_empty() && self.cell_count() > 0 {
            r.push("relative complex has no 0-cells to attach to");
        }
        for n in 1..self.cells.len() {
            for c in &self.cells[n] {
                let what = format!("cell `{}` (dim {n})", c.name);
                let Some(base) = &c.base else {
                    r.push(format!("{what}: missing basepoint"));
                    continue;
                };
                let before = r.errors.len();
                self.check_object(base, c.fibre, &format!("{what} basepoint"), &mut r);
                match (&c.attaching, n) {
                    (Attaching::Edge { d0, d1 }, 1) => {
                        self.check_object(d0, c.fibre, &format!("{what} d0"), &mut r);
                        self.check_object(d1, c.fibre, &format!("{what} d1"), &mut r);
                        if r.errors.len() == before && nf_ok {
                            match (self.normalize_object(base), self.normalize_object(d0)) {
                                (Ok(b), Ok(d)) if b != d => r.push(format!(
                                    "{what}: not normalized, d0 endpoint `{}` differs from basepoint `{}`",
                                    self.display_object(d0),
                                    self.display_object(base)
                                )),
                                (Err(e), _) | (_, Err(e)) => r.push(format!("{what}: {e}")),
                                _ => {}
                            }
                        }
                    }
                    (Attaching::Loop(letters), 2) => {
                        if r.errors.len() == before && nf_ok {
                            let traversal: Vec<PiLetter> = letters.iter().rev().cloned().collect();
                            match (
                                self.word_ends(&traversal, base),
                                self.normalize_object(base),
                            ) {
                                (Ok((s, t)), Ok(b)) => {
                                    if s != b || t != b {
                                        r.push(format!(
                                            "{what}: boundary word runs from `{}` to `{}`, not a loop at `{}`",
                                            self.display_object(&s),
                                            self.display_object(&t),
                                            self.display_object(&b)
                                        ));
                                    }
                                }
                                (Err(e), _) | (_, Err(e)) => r.push(format!("{what}: {e}")),
                            }
                        }
                    }
                    (Attaching::Row(terms), n) if n >= 3 => {
                        for t in terms {
                            if t.cell >= self.cells[n - 1].len() {
                                r.push(format!(
                                    "{what}: row references a missing cell of dimension {}",
                                    n - 1
                                ));
                                continue;
                            }
                            if r.errors.len() != before || !nf_ok {
                                continue;
                            }
                            let target = self.anchor(n - 1, t.cell);
                            let ends = self.word_ends(&t.word, base).and_then(|(s, e)| {
                                Ok((
                                    s,
                                    e,
                                    self.normalize_object(base)?,
                                    self.normalize_object(&target)?,
                                ))
                            });
                            match ends {
                                Ok((s, e, b, tg)) => {
                                    if s != b || e != tg {
                                        r.push(format!(
                                            "{what}: term `{}@{}` runs from `{}` to `{}`, expected `{}` to `{}`",
                                            self.display_letters(&t.word),
                                            self.cells[n - 1][t.cell].name,
                                            self.display_object(&s),
                                            self.display_object(&e),
                                            self.display_object(&b),
                                            self.display_object(&tg)
                                        ));
                                    }
                                }
                                Err(e) => r.push(format!("{what}: {e}")),
                            }
                        }
                    }
                    _ => r.push(format!("{what}: attaching data of the wrong kind")),
                }
            }
        }
        ComplexReport {
            report: r,
            census: self.cell_census(),
        }
    }
}

/// Checks every invariant of a complex and reports the cell census.
pub fn validate_complex(x: &FComplex) -> ComplexReport {
    x.validate()
}

/// Subcomplex of cells of dimension at most `n`.
pub fn skeleton(x: &FComplex, n: usize) -> FComplex {
    x.skeleton(n)
}

/// Number of cells per dimension and fibre object.
pub fn cell_census(x: &FComplex) -> BTreeMap<usize, BTreeMap<String, usize>> {
    x.cell_census()
}
