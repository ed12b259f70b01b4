//! Cellular chain complexes of free right modules over a presented
//! category, chain maps between them and their evaluation at objects.
//!
//! A free right module is `⊕ Z hom(-, a_i)` for a list of anchors `a_i`.
//! A map between two of them is a matrix whose `(i, j)` entry is a linear
//! combination of morphisms `a_i -> b_j`; such matrices act on row vectors,
//! so `A.then(B)` is "first `A`, then `B`".

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::category::{GenId, MorphismWord, ObjectId, PresentedCategory};
use crate::complex::{Attaching, FComplex};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::module::{induced_chain_map, induced_cochain_map, CatModule, FreeRightModule, Variance};
use crate::pi::{PiCategory, PiLetter};

/// A formal integer combination of parallel morphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZPiEntry {
    terms: Vec<(BigInt, MorphismWord)>,
}

impl ZPiEntry {
    pub fn zero() -> Self {
        ZPiEntry::default()
    }

    pub fn term(c: impl Into<BigInt>, w: MorphismWord) -> Self {
        let mut e = ZPiEntry::zero();
        e.push(c.into(), w);
        e
    }

    pub fn terms(&self) -> &[(BigInt, MorphismWord)] {
        &self.terms
    }

    /// True when there are no terms. Use [`ZPiEntry::normalize`] first to
    /// decide vanishing in the category.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·w`, merging with an equal word.
    pub fn push(&mut self, c: BigInt, w: MorphismWord) {
        if c.is_zero() {
            return;
        }
        if let Some(k) = self.terms.iter().position(|(_, v)| *v == w) {
            self.terms[k].0 += c;
            if self.terms[k].0.is_zero() {
                self.terms.remove(k);
            }
        } else {
            self.terms.push((c, w));
        }
    }

    pub fn add(&mut self, other: &ZPiEntry) {
        for (c, w) in &other.terms {
            self.push(c.clone(), w.clone());
        }
    }

    pub fn scaled(&self, c: &BigInt) -> ZPiEntry {
        let mut out = ZPiEntry::zero();
        for (d, w) in &self.terms {
            out.push(c * d, w.clone());
        }
        out
    }

    /// Normal forms of all words, like terms merged, sorted shortlex.
    pub fn normalize(&self, cat: &PresentedCategory) -> Result<ZPiEntry> {
        let mut acc: BTreeMap<MorphismWord, BigInt> = BTreeMap::new();
        for (c, w) in &self.terms {
            *acc.entry(cat.normalize(w)?).or_insert_with(BigInt::zero) += c;
        }
        Ok(ZPiEntry {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (c, w))
                .collect(),
        })
    }

    /// `other ∘ self`, term by term.
    pub fn then(&self, other: &ZPiEntry) -> Result<ZPiEntry> {
        let mut out = ZPiEntry::zero();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                out.push(a * b, v.compose(u)?);
            }
        }
        Ok(out)
    }

    /// Image under a functor.
    pub fn map(&self, f: &CategoryFunctor) -> Result<ZPiEntry> {
        let mut out = ZPiEntry::zero();
        for (c, w) in &self.terms {
            out.push(c.clone(), f.apply(w)?);
        }
        Ok(out)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> BigInt {
        self.terms.iter().map(|(c, _)| c).sum()
    }

    pub fn display(&self, cat: &PresentedCategory) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (c, w)) in self.terms.iter().enumerate() {
            let word = cat.display_word(w);
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(&word);
            } else {
                out.push_str(&format!("{mag}*{word}"));
            }
        }
        out
    }
}

/// A matrix over the category ring, with row and column anchors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPiMatrix {
    rows: Vec<ObjectId>,
    cols: Vec<ObjectId>,
    entries: Vec<Vec<ZPiEntry>>,
}

impl ZPiMatrix {
    pub fn zeros(rows: Vec<ObjectId>, cols: Vec<ObjectId>) -> Self {
        let entries = vec![vec![ZPiEntry::zero(); cols.len()]; rows.len()];
        ZPiMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(anchors: Vec<ObjectId>) -> Self {
        let mut m = ZPiMatrix::zeros(anchors.clone(), anchors.clone());
        for (i, a) in anchors.iter().enumerate() {
            m.entries[i][i] = ZPiEntry::term(1, MorphismWord::identity(*a));
        }
        m
    }

    pub fn row_anchors(&self) -> &[ObjectId] {
        &self.rows
    }

    pub fn col_anchors(&self) -> &[ObjectId] {
        &self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ZPiEntry {
        &self.entries[i][j]
    }

    /// Sets an entry after checking the endpoints of every term.
    pub fn set(&mut self, i: usize, j: usize, e: ZPiEntry) -> Result<()> {
        for (_, w) in e.terms() {
            self.check_term(i, j, w)?;
        }
        self.entries[i][j] = e;
        Ok(())
    }

    /// Adds `c·w` to entry `(i, j)`.
    pub fn add_term(
        &mut self,
        i: usize,
        j: usize,
        c: impl Into<BigInt>,
        w: MorphismWord,
    ) -> Result<()> {
        self.check_term(i, j, &w)?;
        self.entries[i][j].push(c.into(), w);
        Ok(())
    }

    fn check_term(&self, i: usize, j: usize, w: &MorphismWord) -> Result<()> {
        if w.source() != self.rows[i] || w.target() != self.cols[j] {
            return Err(Error::EndpointMismatch(format!(
                "entry ({i}, {j}) expects #{} -> #{}, got #{} -> #{}",
                self.rows[i].0,
                self.cols[j].0,
                w.source().0,
                w.target().0
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(ZPiEntry::is_zero)
    }

    /// First `self`, then `other`: `(A·B)[i][k] = Σ_j B[j][k] ∘ A[i][j]`.
    pub fn then(&self, other: &ZPiMatrix) -> Result<ZPiMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{} (anchors differ)",
                self.row_count(),
                self.col_count(),
                other.row_count(),
                other.col_count()
            )));
        }
        let mut out = ZPiMatrix::zeros(self.rows.clone(), other.cols.clone());
        for i in 0..self.row_count() {
            for j in 0..self.col_count() {
                if self.entries[i][j].is_zero() {
                    continue;
                }
                for k in 0..other.col_count() {
                    if other.entries[j][k].is_zero() {
                        continue;
                    }
                    let p = self.entries[i][j].then(&other.entries[j][k])?;
                    out.entries[i][k].add(&p);
                }
            }
        }
        Ok(out)
    }

    /// Like [`ZPiMatrix::then`] with the result normalized.
    pub fn then_in(&self, other: &ZPiMatrix, cat: &PresentedCategory) -> Result<ZPiMatrix> {
        self.then(other)?.normalize(cat)
    }

    pub fn plus(&self, other: &ZPiMatrix) -> Result<ZPiMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(
                "cannot add matrices with different anchors".into(),
            ));
        }
        let mut out = self.clone();
        for (ra, rb) in out.entries.iter_mut().zip(&other.entries) {
            for (a, b) in ra.iter_mut().zip(rb) {
                a.add(b);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &BigInt) -> ZPiMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut().flatten() {
            *e = e.scaled(c);
        }
        out
    }

    pub fn neg(&self) -> ZPiMatrix {
        self.scaled(&BigInt::from(-1))
    }

    pub fn minus(&self, other: &ZPiMatrix) -> Result<ZPiMatrix> {
        self.plus(&other.neg())
    }

    pub fn normalize(&self, cat: &PresentedCategory) -> Result<ZPiMatrix> {
        let mut out = self.clone();
        for e in out.entries.iter_mut().flatten() {
            *e = e.normalize(cat)?;
        }
        Ok(out)
    }

    /// First entry that does not vanish in the category.
    pub fn first_nonzero(
        &self,
        cat: &PresentedCategory,
    ) -> Result<Option<(usize, usize, ZPiEntry)>> {
        for i in 0..self.row_count() {
            for j in 0..self.col_count() {
                let e = self.entries[i][j].normalize(cat)?;
                if !e.is_zero() {
                    return Ok(Some((i, j, e)));
                }
            }
        }
        Ok(None)
    }

    /// Equality in the category ring.
    pub fn equals_in(&self, other: &ZPiMatrix, cat: &PresentedCategory) -> Result<bool> {
        Ok(self.minus(other)?.first_nonzero(cat)?.is_none())
    }

    pub fn transpose_anchors_ok(&self) -> bool {
        self.entries.len() == self.rows.len()
            && self.entries.iter().all(|r| r.len() == self.cols.len())
    }

    /// Block matrix from a grid; blocks in a row share row anchors.
    pub fn from_blocks(
        row_groups: &[Vec<ObjectId>],
        col_groups: &[Vec<ObjectId>],
        blocks: &[(usize, usize, &ZPiMatrix)],
    ) -> Result<ZPiMatrix> {
        let rows: Vec<ObjectId> = row_groups.concat();
        let cols: Vec<ObjectId> = col_groups.concat();
        let roff = prefix_sums(row_groups.iter().map(Vec::len));
        let coff = prefix_sums(col_groups.iter().map(Vec::len));
        let mut out = ZPiMatrix::zeros(rows, cols);
        for &(bi, bj, m) in blocks {
            if m.rows != row_groups[bi] || m.cols != col_groups[bj] {
                return Err(Error::Dimension(format!(
                    "block ({bi}, {bj}) has the wrong anchors"
                )));
            }
            for i in 0..m.row_count() {
                for j in 0..m.col_count() {
                    out.entries[roff[bi] + i][coff[bj] + j].add(&m.entries[i][j]);
                }
            }
        }
        Ok(out)
    }

    /// The sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ZPiMatrix {
        ZPiMatrix {
            rows: rows.iter().map(|&i| self.rows[i]).collect(),
            cols: cols.iter().map(|&j| self.cols[j]).collect(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Image under a functor.
    pub fn map(&self, f: &CategoryFunctor) -> Result<ZPiMatrix> {
        let mut out = ZPiMatrix::zeros(
            self.rows.iter().map(|o| f.object(*o)).collect(),
            self.cols.iter().map(|o| f.object(*o)).collect(),
        );
        for i in 0..self.row_count() {
            for j in 0..self.col_count() {
                out.entries[i][j] = self.entries[i][j].map(f)?;
            }
        }
        Ok(out)
    }

    /// Integer matrix of coefficient sums (rows stay rows).
    pub fn augmentation(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.row_count(), self.col_count());
        for i in 0..self.row_count() {
            for j in 0..self.col_count() {
                m[(i, j)] = self.entries[i][j].augmentation();
            }
        }
        m
    }

    pub fn display(&self, cat: &PresentedCategory) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.display(cat)).collect();
            out.push_str(&format!("[ {} ]\n", cells.join(" | ")));
        }
        out
    }
}

fn prefix_sums(lens: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut at = 0;
    for l in lens {
        out.push(at);
        at += l;
    }
    out
}

/// A functor between presented categories, given on objects and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryFunctor {
    pub objects: Vec<ObjectId>,
    pub images: Vec<MorphismWord>,
}

impl CategoryFunctor {
    pub fn identity(cat: &PresentedCategory) -> Self {
        CategoryFunctor {
            objects: cat.object_ids().collect(),
            images: (0..cat.generator_count())
                .map(|g| cat.gen_word(GenId(g)))
                .collect(),
        }
    }

    /// Matches objects and generators by name.
    pub fn by_names(source: &PresentedCategory, target: &PresentedCategory) -> Result<Self> {
        let objects = source
            .object_ids()
            .map(|o| target.object(source.object_name(o)))
            .collect::<Result<Vec<_>>>()?;
        let images = source
            .generators()
            .iter()
            .map(|g| {
                target
                    .gen_id(&g.name)
                    .map(|h| target.gen_word(h))
                    .ok_or_else(|| {
                        Error::UnknownGenerator(format!("`{}` has no counterpart", g.name))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CategoryFunctor { objects, images })
    }

    /// The functor to the one-object, one-morphism category.
    pub fn to_trivial(source: &PresentedCategory) -> (PresentedCategory, Self) {
        let t = PresentedCategory::trivial();
        let pt = ObjectId(0);
        let f = CategoryFunctor {
            objects: vec![pt; source.object_count()],
            images: vec![MorphismWord::identity(pt); source.generator_count()],
        };
        (t, f)
    }

    pub fn object(&self, o: ObjectId) -> ObjectId {
        self.objects[o.0]
    }

    pub fn apply(&self, w: &MorphismWord) -> Result<MorphismWord> {
        let mut acc = MorphismWord::identity(self.object(w.source()));
        for g in w.letters().iter().rev() {
            let img = self
                .images
                .get(g.0)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))?;
            acc = img.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Checks endpoints and, where normal forms exist, that relations map to equal morphisms.
    pub fn check(&self, source: &PresentedCategory, target: &PresentedCategory) -> Result<()> {
        if self.objects.len() != source.object_count()
            || self.images.len() != source.generator_count()
        {
            return Err(Error::Validation(
                "functor data does not match the source category".into(),
            ));
        }
        for (g, img) in source.generators().iter().zip(&self.images) {
            if img.source() != self.object(g.source) || img.target() != self.object(g.target) {
                return Err(Error::EndpointMismatch(format!(
                    "image of `{}` has the wrong endpoints",
                    g.name
                )));
            }
        }
        if target.has_normal_forms() {
            for (a, b) in source.equations() {
                if !target.equal(&self.apply(&a)?, &self.apply(&b)?)? {
                    return Err(Error::Validation(format!(
                        "functor breaks the relation `{} = {}`",
                        source.display_word(&a),
                        source.display_word(&b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pullback of a module along the functor.
    pub fn pull_back(&self, m: &CatModule) -> Result<CatModule> {
        Ok(CatModule {
            variance: m.variance,
            values: self.objects.iter().map(|o| m.values[o.0].clone()).collect(),
            actions: self
                .images
                .iter()
                .map(|w| m.act(w))
                .collect::<Result<_>>()?,
        })
    }
}

/// A bounded complex of free right modules; `d[n]: C_n -> C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeChainComplex {
    category: PresentedCategory,
    labels: Vec<Vec<String>>,
    d: Vec<ZPiMatrix>,
}

impl FreeChainComplex {
    /// `bases[n]` lists the anchors of degree `n`; `d[k]` is the
    /// differential out of degree `k + 1`.
    pub fn new(
        category: PresentedCategory,
        bases: Vec<Vec<ObjectId>>,
        labels: Vec<Vec<String>>,
        d: Vec<ZPiMatrix>,
    ) -> Result<Self> {
        if labels.len() != bases.len() || bases.iter().zip(&labels).any(|(b, l)| b.len() != l.len())
        {
            return Err(Error::Dimension("labels do not match the bases".into()));
        }
        if d.len() + 1 != bases.len().max(1) {
            return Err(Error::Dimension(format!(
                "{} degrees need {} differentials, got {}",
                bases.len(),
                bases.len().saturating_sub(1),
                d.len()
            )));
        }
        let mut all = vec![ZPiMatrix::zeros(
            bases.first().cloned().unwrap_or_default(),
            Vec::new(),
        )];
        for (k, m) in d.into_iter().enumerate() {
            if m.rows != bases[k + 1] || m.cols != bases[k] {
                return Err(Error::Dimension(format!(
                    "d_{} has the wrong anchors",
                    k + 1
                )));
            }
            for i in 0..m.row_count() {
                for j in 0..m.col_count() {
                    for (_, w) in m.entry(i, j).terms() {
                        m.check_term(i, j, w)?;
                    }
                }
            }
            all.push(m);
        }
        for o in bases.iter().flatten() {
            if o.0 >= category.object_count() {
                return Err(Error::AnchorMissing(format!("object #{}", o.0)));
            }
        }
        Ok(FreeChainComplex {
            category,
            labels,
            d: all,
        })
    }

    pub fn category(&self) -> &PresentedCategory {
        &self.category
    }

    /// Number of degrees minus one; `0` for complexes concentrated in degree 0 or empty.
    pub fn dim(&self) -> usize {
        self.d.len().saturating_sub(1)
    }

    pub fn degrees(&self) -> usize {
        self.d.len()
    }

    pub fn basis(&self, n: usize) -> &[ObjectId] {
        self.d.get(n).map(|m| m.row_anchors()).unwrap_or(&[])
    }

    pub fn labels(&self, n: usize) -> &[String] {
        self.labels.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rank(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    /// `d_n: C_n -> C_{n-1}`; degree 0 maps to the zero module.
    pub fn differential(&self, n: usize) -> ZPiMatrix {
        match self.d.get(n) {
            Some(m) => m.clone(),
            None => ZPiMatrix::zeros(Vec::new(), self.basis(n.wrapping_sub(1)).to_vec()),
        }
    }

    pub fn free_module(&self, n: usize) -> FreeRightModule {
        FreeRightModule {
            anchors: self.basis(n).to_vec(),
            labels: self.labels(n).to_vec(),
        }
    }

    /// Image under a functor (the induced complex over the target category).
    pub fn push_forward(
        &self,
        f: &CategoryFunctor,
        target: &PresentedCategory,
    ) -> Result<FreeChainComplex> {
        let bases: Vec<Vec<ObjectId>> = (0..self.degrees())
            .map(|n| self.basis(n).iter().map(|o| f.object(*o)).collect())
            .collect();
        let d = (1..self.degrees())
            .map(|n| self.d[n].map(f))
            .collect::<Result<Vec<_>>>()?;
        FreeChainComplex::new(target.clone(), bases, self.labels.clone(), d)
    }

    /// The complex with every morphism sent to the single morphism of the trivial category.
    pub fn trivial_quotient(&self) -> Result<FreeChainComplex> {
        let (t, f) = CategoryFunctor::to_trivial(&self.category);
        self.push_forward(&f, &t)
    }

    /// The integer chain complex `C ⊗ N`; entry `n` maps degree `n` to `n - 1`.
    pub fn tensor(&self, n: &CatModule) -> Result<Vec<IntMatrix>> {
        (0..self.degrees())
            .map(|k| induced_chain_map(&self.d[k], n))
            .collect()
    }

    /// The integer cochain complex `hom(C, M)`; entry `n` maps degree `n - 1` to `n`.
    pub fn hom(&self, m: &CatModule) -> Result<Vec<IntMatrix>> {
        (0..self.degrees())
            .map(|k| induced_cochain_map(&self.d[k], m))
            .collect()
    }
}

/// Builds the cellular chain complex of `x` over its fundamental category.
pub fn build_chain_complex(x: &FComplex, pi: &PiCategory) -> Result<FreeChainComplex> {
    let cat = pi.category();
    let degrees = x.dim() + 1;
    let mut bases = Vec::with_capacity(degrees);
    let mut labels = Vec::with_capacity(degrees);
    for n in 0..degrees {
        let mut b = Vec::new();
        let mut l = Vec::new();
        for i in 0..x.cells(n).len() {
            b.push(
                pi.anchor_object(x, n, i)
                    .map_err(|e| Error::InconsistentBoundary {
                        cell: x.cell(n, i).name.clone(),
                        reason: e.to_string(),
                    })?,
            );
            l.push(x.cell(n, i).name.clone());
        }
        bases.push(b);
        labels.push(l);
    }
    if x.cell_count() == 0 {
        return FreeChainComplex::new(cat.clone(), vec![Vec::new()], vec![Vec::new()], Vec::new());
    }

    let mut d = Vec::new();
    for n in 1..degrees {
        let mut m = ZPiMatrix::zeros(bases[n].clone(), bases[n - 1].clone());
        for (i, cell) in x.cells(n).iter().enumerate() {
            let located = |e: Error| Error::InconsistentBoundary {
                cell: cell.name.clone(),
                reason: e.to_string(),
            };
            match &cell.attaching {
                Attaching::Edge { d0, d1 } => {
                    let t = PiLetter::Track {
                        edge: i,
                        beta: MorphismWord::identity(cell.fibre),
                        inverse: false,
                    };
                    let t = pi.letters_to_word(&[t], bases[n][i]).map_err(located)?;
                    let w1 = pi
                        .whisker_path(d1)
                        .map_err(located)?
                        .compose(&t)
                        .map_err(located)?;
                    m.add_term(i, d1.cell, 1, w1).map_err(located)?;
                    let w0 = pi.whisker_path(d0).map_err(located)?;
                    m.add_term(i, d0.cell, -1, w0).map_err(located)?;
                }
                Attaching::Loop(traversal) => {
                    let mut prefix = MorphismWord::identity(bases[n][i]);
                    for l in traversal {
                        let step = pi
                            .letters_to_word(std::slice::from_ref(l), prefix.target())
                            .map_err(located)?;
                        let next = step.compose(&prefix).map_err(located)?;
                        if let PiLetter::Track {
                            edge,
                            beta,
                            inverse,
                        } = l
                        {
                            let Attaching::Edge { d0, .. } = &x.cell(1, *edge).attaching else {
                                return Err(located(Error::UnknownCell(format!(
                                    "track of non-edge #{edge}"
                                ))));
                            };
                            let wb = pi.whisker_along(d0, beta).map_err(located)?;
                            if *inverse {
                                m.add_term(i, *edge, -1, wb.compose(&next).map_err(located)?)
                                    .map_err(located)?;
                            } else {
                                m.add_term(i, *edge, 1, wb.compose(&prefix).map_err(located)?)
                                    .map_err(located)?;
                            }
                        }
                        prefix = next;
                    }
                }
                Attaching::Row(row) => {
                    for t in row {
                        let w = pi.letters_to_word(&t.word, bases[n][i]).map_err(located)?;
                        m.add_term(i, t.cell, t.coeff.clone(), w).map_err(located)?;
                    }
                }
                Attaching::Point => {
                    return Err(located(Error::Dimension(format!(
                        "a point attached in degree {n}"
                    ))));
                }
            }
        }
        d.push(m);
    }
    FreeChainComplex::new(cat.clone(), bases, labels, d)
}

/// How to test `d ∘ d = 0`.
#[derive(Clone, Debug)]
pub enum D2Mode {
    /// In the category ring, using normal forms.
    Exact,
    /// After tensoring (left modules) or homming (right modules) into integers.
    Coefficients(Vec<CatModule>),
}

/// Outcome of a `d ∘ d = 0` test.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct D2Report {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl D2Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for D2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "d^2 = 0 ({} compositions checked)", self.checked)
        } else {
            for l in &self.failures {
                writeln!(f, "{l}")?;
            }
            Ok(())
        }
    }
}

pub fn verify_d_squared(c: &FreeChainComplex, mode: &D2Mode) -> Result<D2Report> {
    let mut report = D2Report::default();
    match mode {
        D2Mode::Exact => {
            if !c.category.has_normal_forms() {
                return Err(Error::NoNormalForm(
                    "exact d^2 test needs normal forms; use coefficient mode".into(),
                ));
            }
            for n in 2..c.degrees() {
                report.checked += 1;
                let dd = c.d[n].then(&c.d[n - 1])?;
                if let Some((i, j, e)) = dd.first_nonzero(&c.category)? {
                    report.failures.push(format!(
                        "d_{} d_{} has entry ({}, {}) = {} from `{}` to `{}`",
                        n - 1,
                        n,
                        i,
                        j,
                        e.display(&c.category),
                        c.labels[n][i],
                        c.labels[n - 2][j]
                    ));
                }
            }
        }
        D2Mode::Coefficients(modules) => {
            for (k, m) in modules.iter().enumerate() {
                let maps = match m.variance {
                    Variance::Left => c.tensor(m)?,
                    Variance::Right => c.hom(m)?,
                };
                for n in 2..c.degrees() {
                    report.checked += 1;
                    let (first, second) = match m.variance {
                        Variance::Left => (&maps[n], &maps[n - 1]),
                        Variance::Right => (&maps[n - 1], &maps[n]),
                    };
                    let to = match m.variance {
                        Variance::Left => c.basis(n - 2),
                        Variance::Right => c.basis(n),
                    };
                    let comp = second * first;
                    let rel = crate::linalg::PresentedGroup::direct_sum_all(
                        to.iter().map(|o| &m.values[o.0]),
                    );
                    if !crate::linalg::in_column_span(&rel.relations, &comp) {
                        report.failures.push(format!(
                            "module {k}: composite through degree {} is nonzero",
                            n - 1
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// A chain map `C -> D` over a functor between their categories.
///
/// `maps[n]` has rows anchored at the images of the basis of `C_n` and
/// columns at the basis of `D_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub functor: CategoryFunctor,
    pub maps: Vec<ZPiMatrix>,
}

impl ChainMap {
    pub fn identity(c: &FreeChainComplex) -> Self {
        ChainMap {
            functor: CategoryFunctor::identity(&c.category),
            maps: (0..c.degrees())
                .map(|n| ZPiMatrix::identity(c.basis(n).to_vec()))
                .collect(),
        }
    }

    /// `self` then `other`.
    pub fn then(&self, other: &ChainMap, target: &PresentedCategory) -> Result<ChainMap> {
        let functor = CategoryFunctor {
            objects: self
                .functor
                .objects
                .iter()
                .map(|o| other.functor.object(*o))
                .collect(),
            images: self
                .functor
                .images
                .iter()
                .map(|w| other.functor.apply(w))
                .collect::<Result<_>>()?,
        };
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.map(&other.functor)?.then_in(b, target))
            .collect::<Result<_>>()?;
        Ok(ChainMap { functor, maps })
    }

    /// The induced map between trivial quotients; `target` is the codomain of `self`.
    pub fn trivial_quotient(&self, target: &FreeChainComplex) -> Result<ChainMap> {
        let (t, q) = CategoryFunctor::to_trivial(&target.category);
        Ok(ChainMap {
            functor: CategoryFunctor::identity(&t),
            maps: self.maps.iter().map(|m| m.map(&q)).collect::<Result<_>>()?,
        })
    }

    /// The degree-`n` component as an integer map `C_n ⊗ F*N -> D_n ⊗ N`.
    pub fn tensor(&self, n: usize, module: &CatModule) -> Result<IntMatrix> {
        induced_chain_map(&self.maps[n], module)
    }
}

/// Checks that per-degree matrices commute with the differentials.
pub fn chain_map_from_cellular(
    source: &FreeChainComplex,
    target: &FreeChainComplex,
    functor: CategoryFunctor,
    maps: Vec<ZPiMatrix>,
) -> Result<ChainMap> {
    functor.check(&source.category, &target.category)?;
    let pushed = source.push_forward(&functor, &target.category)?;
    let mut maps = maps;
    while maps.len() < source.degrees() {
        let n = maps.len();
        maps.push(ZPiMatrix::zeros(
            pushed.basis(n).to_vec(),
            target.basis(n).to_vec(),
        ));
    }
    if maps.len() > source.degrees() {
        return Err(Error::NotAChainMap {
            degree: source.degrees(),
            reason: "more components than degrees".into(),
        });
    }
    for (n, m) in maps.iter().enumerate() {
        if m.rows != pushed.basis(n) || m.cols != target.basis(n) {
            return Err(Error::NotAChainMap {
                degree: n,
                reason: "component has the wrong anchors".into(),
            });
        }
    }
    let f = ChainMap { functor, maps };
    check_chain_map(&pushed, target, &f.maps)?;
    Ok(f)
}

/// `d^C_n · f_{n-1} = f_n · d^D_n` for every `n`, where `c` is already over the target category.
fn check_chain_map(c: &FreeChainComplex, d: &FreeChainComplex, maps: &[ZPiMatrix]) -> Result<()> {
    let cat = &d.category;
    for n in 1..c.degrees() {
        let lhs = c.d[n].then(&maps[n - 1])?;
        let target_d = d.differential(n);
        let rhs = if n < maps.len() && n < d.degrees() {
            maps[n].then(&target_d)?
        } else {
            ZPiMatrix::zeros(lhs.rows.clone(), lhs.cols.clone())
        };
        let diff = lhs.minus(&rhs)?;
        let bad = if cat.has_normal_forms() {
            diff.first_nonzero(cat)?.is_some()
        } else {
            !diff.augmentation().is_zero()
        };
        if bad {
            return Err(Error::NotAChainMap {
                degree: n,
                reason: "does not commute with the differential".into(),
            });
        }
    }
    Ok(())
}

/// The mapping cone of `f: C -> D` with `C` already over the category of `D`:
/// degree `n` is `C_{n-1} ⊕ D_n` and `d(x, y) = (-dx, fx + dy)`.
pub fn cone(
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    f: &[ZPiMatrix],
) -> Result<FreeChainComplex> {
    let top = c.degrees().max(d.degrees().saturating_sub(1)) + 1;
    let mut bases = Vec::with_capacity(top);
    let mut labels = Vec::with_capacity(top);
    let x_basis = |n: usize| {
        if n == 0 {
            Vec::new()
        } else {
            c.basis(n - 1).to_vec()
        }
    };
    for n in 0..top {
        let mut b = x_basis(n);
        b.extend_from_slice(d.basis(n));
        bases.push(b);
        let mut l: Vec<String> = if n == 0 {
            Vec::new()
        } else {
            c.labels(n - 1).iter().map(|s| format!("{s}'")).collect()
        };
        l.extend(d.labels(n).iter().cloned());
        labels.push(l);
    }
    let zero_map = |n: usize| ZPiMatrix::zeros(c.basis(n).to_vec(), d.basis(n).to_vec());
    let mut diffs = Vec::new();
    for n in 1..top {
        let rows = [x_basis(n), d.basis(n).to_vec()];
        let cols = [x_basis(n - 1), d.basis(n - 1).to_vec()];
        let dx = if n >= 2 {
            c.differential(n - 1).neg()
        } else {
            ZPiMatrix::zeros(rows[0].clone(), cols[0].clone())
        };
        let fx = f.get(n - 1).cloned().unwrap_or_else(|| zero_map(n - 1));
        let dy = d.differential(n);
        let dy = if dy.row_count() == rows[1].len() && dy.col_count() == cols[1].len() {
            dy
        } else {
            ZPiMatrix::zeros(rows[1].clone(), cols[1].clone())
        };
        diffs.push(ZPiMatrix::from_blocks(
            &rows,
            &cols,
            &[(0, 0, &dx), (0, 1, &fx), (1, 1, &dy)],
        )?);
    }
    FreeChainComplex::new(d.category().clone(), bases, labels, diffs)
}

/// The inclusion of a subcomplex, matching cells, objects and generators by name.
pub fn inclusion(
    sub: &FComplex,
    sub_pi: &PiCategory,
    sup: &FComplex,
    sup_pi: &PiCategory,
) -> Result<ChainMap> {
    let c = build_chain_complex(sub, sub_pi)?;
    let d = build_chain_complex(sup, sup_pi)?;
    let functor = CategoryFunctor::by_names(sub_pi.category(), sup_pi.category())?;
    let mut maps = Vec::new();
    for n in 0..c.degrees() {
        let rows: Vec<ObjectId> = c.basis(n).iter().map(|o| functor.object(*o)).collect();
        let mut m = ZPiMatrix::zeros(rows.clone(), d.basis(n).to_vec());
        for (i, name) in c.labels(n).iter().enumerate() {
            let j = d.labels(n).iter().position(|l| l == name).ok_or_else(|| {
                Error::UnknownCell(format!("`{name}` is missing from the larger complex"))
            })?;
            m.add_term(i, j, 1, MorphismWord::identity(rows[i]))?;
        }
        maps.push(m);
    }
    chain_map_from_cellular(&c, &d, functor, maps)
}

/// The basis of `C_n` evaluated at an object `P`: pairs (cell, morphism `P -> anchor`).
#[derive(Clone, Debug)]
pub struct EvaluatedBasis {
    pub object: ObjectId,
    pub elements: Vec<(usize, MorphismWord)>,
    index: HashMap<(usize, MorphismWord), usize>,
}

impl EvaluatedBasis {
    pub fn new(
        cat: &PresentedCategory,
        anchors: &[ObjectId],
        object: ObjectId,
        cap: usize,
    ) -> Result<Self> {
        let mut elements = Vec::new();
        for (i, a) in anchors.iter().enumerate() {
            let homs = cat.enumerate_homs(object, *a, cap).map_err(|e| match e {
                Error::CapExceeded { from, to, .. } => Error::InfiniteFundamentalCategory(format!(
                    "hom({from}, {to}) has more than {cap} elements"
                )),
                other => other,
            })?;
            elements.extend(homs.into_iter().map(|m| (i, m)));
        }
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, e)| (e, k))
            .collect();
        Ok(EvaluatedBasis {
            object,
            elements,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates of `Σ c·(i, w)` with `w` normalized first.
    pub fn coordinates(
        &self,
        cat: &PresentedCategory,
        terms: &[(BigInt, usize, MorphismWord)],
    ) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (c, i, w) in terms {
            let key = (*i, cat.normalize(w)?);
            let k = self.index.get(&key).ok_or_else(|| {
                Error::AnchorMissing(format!(
                    "morphism `{}` is not in the evaluated basis",
                    cat.display_word(&key.1)
                ))
            })?;
            v[*k] += c;
        }
        Ok(v)
    }

    pub fn position(&self, i: usize, w: &MorphismWord) -> Option<usize> {
        self.index.get(&(i, w.clone())).copied()
    }
}

/// Integer matrix (column convention) of a matrix map between evaluated bases.
pub fn evaluate_matrix(
    cat: &PresentedCategory,
    m: &ZPiMatrix,
    src: &EvaluatedBasis,
    tgt: &EvaluatedBasis,
) -> Result<IntMatrix> {
    let mut cols = Vec::with_capacity(src.len());
    for (i, u) in &src.elements {
        let mut terms = Vec::new();
        for j in 0..m.col_count() {
            for (c, w) in m.entry(*i, j).terms() {
                terms.push((c.clone(), j, w.compose(u)?));
            }
        }
        cols.push(tgt.coordinates(cat, &terms)?);
    }
    Ok(IntMatrix::from_columns(tgt.len(), &cols))
}

/// The integer complex `C(P)` of abelian groups obtained by evaluating at `P`.
#[derive(Clone, Debug)]
pub struct EvaluatedComplex {
    pub bases: Vec<EvaluatedBasis>,
    /// `d[n]: C_n(P) -> C_{n-1}(P)` in column convention.
    pub d: Vec<IntMatrix>,
}

impl EvaluatedComplex {
    pub fn rank(&self, n: usize) -> usize {
        self.bases.get(n).map(EvaluatedBasis::len).unwrap_or(0)
    }

    pub fn differential(&self, n: usize) -> IntMatrix {
        match self.d.get(n) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.rank(n.wrapping_sub(1)), self.rank(n)),
        }
    }
}

pub fn evaluate_at(c: &FreeChainComplex, object: ObjectId, cap: usize) -> Result<EvaluatedComplex> {
    let cat = &c.category;
    let bases = (0..c.degrees())
        .map(|n| EvaluatedBasis::new(cat, c.basis(n), object, cap))
        .collect::<Result<Vec<_>>>()?;
    let mut d = vec![IntMatrix::zeros(
        0,
        bases.first().map(EvaluatedBasis::len).unwrap_or(0),
    )];
    for n in 1..c.degrees() {
        d.push(evaluate_matrix(cat, &c.d[n], &bases[n], &bases[n - 1])?);
    }
    Ok(EvaluatedComplex { bases, d })
}

/// Precomposition with `u: P -> Q` as a map `C_n(Q) -> C_n(P)`.
pub fn restriction(
    cat: &PresentedCategory,
    u: &MorphismWord,
    from: &EvaluatedBasis,
    to: &EvaluatedBasis,
) -> Result<IntMatrix> {
    let mut cols = Vec::with_capacity(from.len());
    for (i, m) in &from.elements {
        cols.push(to.coordinates(cat, &[(BigInt::one(), *i, m.compose(u)?)])?);
    }
    Ok(IntMatrix::from_columns(to.len(), &cols))
}
