//! Finitely presented categories with a track congruence: word
//! arithmetic, normal forms, equality and bounded hom enumeration.

mod orbit;
mod rewriting;
mod tables;
mod word;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

pub use orbit::{orbit_category, parse_group_table, z2_orbit_category};
pub use rewriting::{complete, CompletionConfig, CompletionFailure, RewriteSystem, Rule};
pub use tables::HomTables;
pub use word::{GenId, MorphismWord, ObjectId};

use crate::error::{Error, Result};

/// A generating morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: ObjectId,
    pub target: ObjectId,
}

/// Text-level description of a category, before any checking.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    /// `(name, source, target)`.
    pub generators: Vec<(String, String, String)>,
    pub relations: Vec<(String, String)>,
    pub tracks: Vec<(String, String)>,
    pub tables: Option<TableSpec>,
}

/// Text-level hom tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableSpec {
    /// `(element, source, target)`.
    pub elements: Vec<(String, String, String)>,
    /// `(object, element)`.
    pub identities: Vec<(String, String)>,
    /// `(generator, element)`.
    pub values: Vec<(String, String)>,
    /// `(f, g, f ∘ g)`.
    pub compose: Vec<(String, String, String)>,
}

/// Outcome of a validation pass: every violation found, in input order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub(crate) fn push(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self.errors.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        Ok(())
    }
}

/// Checks a category description without building it.
pub fn validate_category(spec: &CategorySpec) -> ValidationReport {
    match PresentedCategory::build(spec) {
        Ok((_, report)) => report,
        Err(report) => report,
    }
}

/// A finitely presented category with relations and a track congruence.
#[derive(Clone, Debug)]
pub struct PresentedCategory {
    objects: Vec<String>,
    object_index: HashMap<String, ObjectId>,
    generators: Vec<Generator>,
    gen_index: HashMap<String, GenId>,
    relations: Vec<(MorphismWord, MorphismWord)>,
    tracks: Vec<(MorphismWord, MorphismWord)>,
    tables: Option<HomTables>,
    config: CompletionConfig,
    normalizer: OnceLock<std::result::Result<RewriteSystem, CompletionFailure>>,
}

impl PartialEq for PresentedCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.generators == other.generators
            && self.relations == other.relations
            && self.tracks == other.tracks
            && self.tables == other.tables
    }
}

impl Eq for PresentedCategory {}

impl PresentedCategory {
    pub fn new() -> Self {
        PresentedCategory {
            objects: Vec::new(),
            object_index: HashMap::new(),
            generators: Vec::new(),
            gen_index: HashMap::new(),
            relations: Vec::new(),
            tracks: Vec::new(),
            tables: None,
            config: CompletionConfig::default(),
            normalizer: OnceLock::new(),
        }
    }

    /// One object `pt`, no generators.
    pub fn trivial() -> Self {
        let mut c = PresentedCategory::new();
        c.add_object("pt").expect("fresh category");
        c
    }

    pub fn from_spec(spec: &CategorySpec) -> Result<Self> {
        PresentedCategory::build(spec)
            .map_err(|r| Error::Validation(r.errors.join("; ")))
            .and_then(|(c, r)| r.into_result().map(|_| c))
    }

    fn build(
        spec: &CategorySpec,
    ) -> std::result::Result<(Self, ValidationReport), ValidationReport> {
        let mut report = ValidationReport::default();
        let mut c = PresentedCategory::new();
        for o in &spec.objects {
            if let Err(e) = c.add_object(o) {
                report.push(e.to_string());
            }
        }
        for (name, s, t) in &spec.generators {
            match (c.object_id(s), c.object_id(t)) {
                (Some(s), Some(t)) => {
                    if let Err(e) = c.add_generator(name, s, t) {
                        report.push(e.to_string());
                    }
                }
                _ => {
                    let missing = if c.object_id(s).is_none() { s } else { t };
                    report.push(format!(
                        "generator `{name}` uses undeclared object `{missing}`"
                    ));
                }
            }
        }
        for (track, list) in [(false, &spec.relations), (true, &spec.tracks)] {
            let kind = if track { "track" } else { "relation" };
            for (l, r) in list {
                match c.parse_pair(l, r) {
                    Ok((a, b)) => {
                        if (a.source(), a.target()) != (b.source(), b.target()) {
                            report.push(format!(
                                "{kind} `{l} = {r}`: endpoint mismatch ({} -> {} versus {} -> {})",
                                c.objects[a.source().0],
                                c.objects[a.target().0],
                                c.objects[b.source().0],
                                c.objects[b.target().0]
                            ));
                        } else if track {
                            c.tracks.push((a, b));
                        } else {
                            c.relations.push((a, b));
                        }
                    }
                    Err(e) => report.push(format!("{kind} `{l} = {r}`: {e}")),
                }
            }
        }
        if !report.is_valid() {
            return Err(report);
        }
        if let Some(ts) = &spec.tables {
            match c.tables_from_spec(ts) {
                Ok(t) => {
                    let gen_names: Vec<String> =
                        c.generators.iter().map(|g| g.name.clone()).collect();
                    for p in t.problems(&c.objects, &gen_names, &c.gen_ends()) {
                        report.push(format!("hom tables: {p}"));
                    }
                    if report.is_valid() {
                        for (a, b) in c.relations.iter().chain(&c.tracks) {
                            let ea = t.evaluate(a.source(), a.letters());
                            let eb = t.evaluate(b.source(), b.letters());
                            if ea != eb {
                                report.push(format!(
                                    "relation `{} = {}` does not hold in the hom tables",
                                    c.display_word(a),
                                    c.display_word(b)
                                ));
                            }
                        }
                    }
                    c.tables = Some(t);
                }
                Err(msgs) => {
                    for m in msgs {
                        report.push(format!("hom tables: {m}"));
                    }
                }
            }
        }
        Ok((c, report))
    }

    fn tables_from_spec(&self, ts: &TableSpec) -> std::result::Result<HomTables, Vec<String>> {
        let mut errs = Vec::new();
        let mut idx: HashMap<&str, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut ends = Vec::new();
        for (name, s, t) in &ts.elements {
            match (self.object_id(s), self.object_id(t)) {
                (Some(s), Some(t)) => {
                    if idx.insert(name.as_str(), names.len()).is_some() {
                        errs.push(format!("element `{name}` declared twice"));
                    }
                    names.push(name.clone());
                    ends.push((s, t));
                }
                _ => errs.push(format!("element `{name}` uses an undeclared object")),
            }
        }
        let lookup = |n: &str, errs: &mut Vec<String>| -> usize {
            idx.get(n).copied().unwrap_or_else(|| {
                errs.push(format!("unknown element `{n}`"));
                usize::MAX
            })
        };
        let mut identities = vec![usize::MAX; self.objects.len()];
        for (o, e) in &ts.identities {
            match self.object_id(o) {
                Some(o) => identities[o.0] = lookup(e, &mut errs),
                None => errs.push(format!("identity for undeclared object `{o}`")),
            }
        }
        for (o, &e) in identities.iter().enumerate() {
            if e == usize::MAX && !errs.iter().any(|m| m.starts_with("unknown element")) {
                errs.push(format!(
                    "object `{}` has no identity element",
                    self.objects[o]
                ));
            }
        }
        let mut values = vec![usize::MAX; self.generators.len()];
        for (g, e) in &ts.values {
            match self.gen_id(g) {
                Some(g) => values[g.0] = lookup(e, &mut errs),
                None => errs.push(format!("value for unknown generator `{g}`")),
            }
        }
        for (g, &e) in values.iter().enumerate() {
            if e == usize::MAX {
                errs.push(format!(
                    "generator `{}` has no value",
                    self.generators[g].name
                ));
            }
        }
        let mut compose = HashMap::new();
        for (f, g, h) in &ts.compose {
            let (f, g, h) = (
                lookup(f, &mut errs),
                lookup(g, &mut errs),
                lookup(h, &mut errs),
            );
            if compose.insert((f, g), h).is_some_and(|old| old != h) {
                errs.push(format!(
                    "composition of `{}` after `{}` given twice",
                    names[f], names[g]
                ));
            }
        }
        if !errs.is_empty() {
            errs.dedup();
            return Err(errs);
        }
        Ok(HomTables::new(
            names,
            ends,
            identities,
            values,
            compose,
            &self.gen_ends(),
        ))
    }

    /// Description that [`PresentedCategory::from_spec`] turns back into `self`.
    pub fn to_spec(&self) -> CategorySpec {
        let obj = |o: ObjectId| self.objects[o.0].clone();
        let pair =
            |(a, b): &(MorphismWord, MorphismWord)| (self.display_word(a), self.display_word(b));
        CategorySpec {
            objects: self.objects.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| (g.name.clone(), obj(g.source), obj(g.target)))
                .collect(),
            relations: self.relations.iter().map(pair).collect(),
            tracks: self.tracks.iter().map(pair).collect(),
            tables: self.tables.as_ref().map(|t| TableSpec {
                elements: (0..t.element_count())
                    .map(|e| (t.name(e).to_string(), obj(t.ends(e).0), obj(t.ends(e).1)))
                    .collect(),
                identities: (0..self.objects.len())
                    .map(|o| {
                        (
                            self.objects[o].clone(),
                            t.name(t.identity(ObjectId(o))).to_string(),
                        )
                    })
                    .collect(),
                values: (0..self.generators.len())
                    .map(|g| {
                        (
                            self.generators[g].name.clone(),
                            t.name(t.value(GenId(g))).to_string(),
                        )
                    })
                    .collect(),
                compose: {
                    let mut v: Vec<_> = t.compose.iter().collect();
                    v.sort();
                    v.into_iter()
                        .map(|(&(f, g), &h)| {
                            (
                                t.name(f).to_string(),
                                t.name(g).to_string(),
                                t.name(h).to_string(),
                            )
                        })
                        .collect()
                },
            }),
        }
    }

    pub fn add_object(&mut self, name: &str) -> Result<ObjectId> {
        check_name(name, "object")?;
        if self.object_index.contains_key(name) {
            return Err(Error::Validation(format!("object `{name}` declared twice")));
        }
        let id = ObjectId(self.objects.len());
        self.objects.push(name.to_string());
        self.object_index.insert(name.to_string(), id);
        self.reset();
        Ok(id)
    }

    pub fn add_generator(
        &mut self,
        name: &str,
        source: ObjectId,
        target: ObjectId,
    ) -> Result<GenId> {
        check_name(name, "generator")?;
        if name == "id" {
            return Err(Error::Validation(
                "`id` is reserved and cannot name a generator".into(),
            ));
        }
        if self.gen_index.contains_key(name) {
            return Err(Error::Validation(format!(
                "generator `{name}` declared twice"
            )));
        }
        for o in [source, target] {
            if o.0 >= self.objects.len() {
                return Err(Error::UnknownObject(format!("#{}", o.0)));
            }
        }
        let id = GenId(self.generators.len());
        self.generators.push(Generator {
            name: name.to_string(),
            source,
            target,
        });
        self.gen_index.insert(name.to_string(), id);
        self.tables = None;
        self.reset();
        Ok(id)
    }

    pub fn add_relation(&mut self, a: MorphismWord, b: MorphismWord) -> Result<()> {
        self.check_pair(&a, &b)?;
        self.relations.push((a, b));
        self.reset();
        Ok(())
    }

    pub fn add_track(&mut self, a: MorphismWord, b: MorphismWord) -> Result<()> {
        self.check_pair(&a, &b)?;
        self.tracks.push((a, b));
        self.reset();
        Ok(())
    }

    /// Parses and adds a relation given as text.
    pub fn relate(&mut self, lhs: &str, rhs: &str) -> Result<()> {
        let (a, b) = self.parse_pair(lhs, rhs)?;
        self.add_relation(a, b)
    }

    fn check_pair(&self, a: &MorphismWord, b: &MorphismWord) -> Result<()> {
        if (a.source(), a.target()) != (b.source(), b.target()) {
            return Err(Error::EndpointMismatch(format!(
                "`{}` and `{}` have different endpoints",
                self.display_word(a),
                self.display_word(b)
            )));
        }
        Ok(())
    }

    pub fn set_completion_config(&mut self, config: CompletionConfig) {
        self.config = config;
        self.reset();
    }

    pub fn completion_config(&self) -> CompletionConfig {
        self.config
    }

    fn reset(&mut self) {
        self.normalizer = OnceLock::new();
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.0]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.object_index.get(name).copied()
    }

    pub fn object(&self, name: &str) -> Result<ObjectId> {
        self.object_id(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g.0]
    }

    pub fn gen_id(&self, name: &str) -> Option<GenId> {
        self.gen_index.get(name).copied()
    }

    fn gen_ends(&self) -> Vec<(ObjectId, ObjectId)> {
        self.generators
            .iter()
            .map(|g| (g.source, g.target))
            .collect()
    }

    pub fn relations(&self) -> &[(MorphismWord, MorphismWord)] {
        &self.relations
    }

    pub fn tracks(&self) -> &[(MorphismWord, MorphismWord)] {
        &self.tracks
    }

    pub fn tables(&self) -> Option<&HomTables> {
        self.tables.as_ref()
    }

    pub fn identity(&self, o: ObjectId) -> MorphismWord {
        MorphismWord::identity(o)
    }

    pub fn gen_word(&self, g: GenId) -> MorphismWord {
        let gen = &self.generators[g.0];
        MorphismWord::from_parts(gen.source, gen.target, vec![g])
    }

    /// Word from letters in composition order; `source` is only consulted
    /// for the empty word.
    pub fn word(&self, source: ObjectId, letters: &[GenId]) -> Result<MorphismWord> {
        let Some(&last) = letters.last() else {
            return Ok(MorphismWord::identity(source));
        };
        let src = self.generators[last.0].source;
        let mut at = src;
        for g in letters.iter().rev() {
            let gen = &self.generators[g.0];
            if gen.source != at {
                return Err(Error::EndpointMismatch(format!(
                    "generator `{}` starts at `{}` but the word so far ends at `{}`",
                    gen.name, self.objects[gen.source.0], self.objects[at.0]
                )));
            }
            at = gen.target;
        }
        Ok(MorphismWord::from_parts(src, at, letters.to_vec()))
    }

    /// Parses `id`, `id(Obj)` or `f.g.h` (meaning `f ∘ g ∘ h`). A bare `id`
    /// needs `hint` for its object.
    pub fn parse_word(&self, text: &str, hint: Option<ObjectId>) -> Result<MorphismWord> {
        let text = text.trim();
        if text == "id" {
            return hint
                .map(MorphismWord::identity)
                .ok_or_else(|| Error::EndpointMismatch("cannot infer the object of `id`".into()));
        }
        if let Some(inner) = text.strip_prefix("id(").and_then(|s| s.strip_suffix(')')) {
            return Ok(MorphismWord::identity(self.object(inner)?));
        }
        let mut letters = Vec::new();
        for part in text.split('.') {
            let g = self
                .gen_id(part.trim())
                .ok_or_else(|| Error::UnknownGenerator(part.trim().to_string()))?;
            letters.push(g);
        }
        self.word(ObjectId(0), &letters)
    }

    /// Parses both sides of an equation, inferring the object of a bare `id`.
    pub fn parse_pair(&self, lhs: &str, rhs: &str) -> Result<(MorphismWord, MorphismWord)> {
        let l = self.parse_word(lhs, None);
        let r = self.parse_word(rhs, None);
        match (l, r) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            (Ok(a), Err(_)) => Ok((a.clone(), self.parse_word(rhs, Some(a.source()))?)),
            (Err(_), Ok(b)) => Ok((self.parse_word(lhs, Some(b.source()))?, b)),
            (Err(e), Err(_)) => Err(e),
        }
    }

    /// `id(Obj)` for identities, otherwise generator names joined by `.`.
    pub fn display_word(&self, w: &MorphismWord) -> String {
        if w.is_identity() {
            return format!("id({})", self.objects[w.source().0]);
        }
        self.display_letters(w.letters())
    }

    pub fn display_letters(&self, letters: &[GenId]) -> String {
        letters
            .iter()
            .map(|g| self.generators[g.0].name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Defining equations: relations, tracks and, with tables, the relations they imply.
    pub fn equations(&self) -> Vec<(MorphismWord, MorphismWord)> {
        let mut out: Vec<(MorphismWord, MorphismWord)> =
            self.relations.iter().chain(&self.tracks).cloned().collect();
        if let Some(t) = &self.tables {
            let ends = self.gen_ends();
            for (src, l, r) in t.defining_relations(&ends) {
                let lw = self.word(src, &l).expect("table words compose");
                let rw = self.word(src, &r).expect("table words compose");
                out.push((lw, rw));
            }
        }
        out
    }

    fn rewrite_system(&self) -> &std::result::Result<RewriteSystem, CompletionFailure> {
        self.normalizer.get_or_init(|| {
            let eqs: Vec<(Vec<GenId>, Vec<GenId>)> = self
                .relations
                .iter()
                .chain(&self.tracks)
                .map(|(a, b)| (a.letters().to_vec(), b.letters().to_vec()))
                .collect();
            complete(&eqs, &self.config)
        })
    }

    /// True when the word problem is solvable with the configured bounds.
    pub fn has_normal_forms(&self) -> bool {
        self.tables.is_some() || self.rewrite_system().is_ok()
    }

    /// The completed rewriting system, when completion succeeded.
    pub fn completed_rules(&self) -> Option<&RewriteSystem> {
        self.rewrite_system().as_ref().ok()
    }

    /// Canonical representative of the congruence class of `w`.
    pub fn normalize(&self, w: &MorphismWord) -> Result<MorphismWord> {
        if let Some(t) = &self.tables {
            let e = t
                .evaluate(w.source(), w.letters())
                .ok_or_else(|| Error::NoNormalForm("word leaves the hom tables".into()))?;
            let nw = t.normal_word(e).ok_or_else(|| {
                Error::NoNormalForm(format!("element `{}` has no word", t.name(e)))
            })?;
            return Ok(MorphismWord::from_parts(
                w.source(),
                w.target(),
                nw.to_vec(),
            ));
        }
        match self.rewrite_system() {
            Ok(rs) => Ok(MorphismWord::from_parts(
                w.source(),
                w.target(),
                rs.reduce(w.letters()),
            )),
            Err(f) => Err(Error::NoNormalForm(f.to_string())),
        }
    }

    pub fn equal(&self, a: &MorphismWord, b: &MorphismWord) -> Result<bool> {
        if (a.source(), a.target()) != (b.source(), b.target()) {
            return Ok(false);
        }
        if a == b {
            return Ok(true);
        }
        Ok(self.normalize(a)? == self.normalize(b)?)
    }

    /// `f ∘ g`, normalized when normal forms are available.
    pub fn compose(&self, f: &MorphismWord, g: &MorphismWord) -> Result<MorphismWord> {
        let w = f.compose(g)?;
        match self.normalize(&w) {
            Ok(n) => Ok(n),
            Err(Error::NoNormalForm(_)) => Ok(w),
            Err(e) => Err(e),
        }
    }

    /// Normal forms of all morphisms `a -> b`, in shortlex order.
    pub fn enumerate_homs(
        &self,
        a: ObjectId,
        b: ObjectId,
        cap: usize,
    ) -> Result<Vec<MorphismWord>> {
        let exceeded = |partial: usize| Error::CapExceeded {
            from: self.objects[a.0].clone(),
            to: self.objects[b.0].clone(),
            cap,
            partial,
        };
        if let Some(t) = &self.tables {
            let hom = t.hom(a, b);
            if hom.len() > cap {
                return Err(exceeded(hom.len()));
            }
            let mut out: Vec<MorphismWord> = hom
                .into_iter()
                .map(|e| {
                    t.normal_word(e)
                        .map(|w| MorphismWord::from_parts(a, b, w.to_vec()))
                        .ok_or_else(|| {
                            Error::NoNormalForm(format!("element `{}` has no word", t.name(e)))
                        })
                })
                .collect::<Result<_>>()?;
            out.sort();
            return Ok(out);
        }
        let rs = self
            .rewrite_system()
            .as_ref()
            .map_err(|f| Error::NoNormalForm(f.to_string()))?;
        // Irreducible words are closed under suffixes, so grow them outward from `a`.
        let budget = cap
            .saturating_mul(self.objects.len().max(1))
            .saturating_add(64);
        let mut out = Vec::new();
        let mut visited = 0usize;
        let mut queue: VecDeque<(ObjectId, Vec<GenId>)> = VecDeque::new();
        queue.push_back((a, Vec::new()));
        while let Some((at, w)) = queue.pop_front() {
            visited += 1;
            if at == b {
                out.push(MorphismWord::from_parts(a, b, w.clone()));
                if out.len() > cap {
                    return Err(exceeded(out.len()));
                }
            }
            if visited > budget {
                return Err(exceeded(out.len()));
            }
            for (gi, g) in self.generators.iter().enumerate() {
                if g.source != at {
                    continue;
                }
                let mut nw = Vec::with_capacity(w.len() + 1);
                nw.push(GenId(gi));
                nw.extend_from_slice(&w);
                if !rs.has_prefix_redex(&nw) {
                    queue.push_back((g.target, nw));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Hom tables for the whole category, tabulated from normal forms when
    /// not given explicitly. Fails if any hom-set exceeds `cap`.
    pub fn finite_tables(&self, cap: usize) -> Result<HomTables> {
        if let Some(t) = &self.tables {
            return Ok(t.clone());
        }
        let mut names = Vec::new();
        let mut ends = Vec::new();
        let mut words = Vec::new();
        let mut index: HashMap<(ObjectId, Vec<GenId>), usize> = HashMap::new();
        for a in self.object_ids() {
            for b in self.object_ids() {
                for w in self.enumerate_homs(a, b, cap)? {
                    index.insert((a, w.letters().to_vec()), names.len());
                    names.push(self.display_word(&w));
                    ends.push((a, b));
                    words.push(w);
                }
            }
        }
        let identities: Vec<usize> = self.object_ids().map(|o| index[&(o, Vec::new())]).collect();
        let mut values = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let n = self.normalize(&self.gen_word(GenId(gi)))?;
            values.push(index[&(g.source, n.letters().to_vec())]);
        }
        let mut compose = HashMap::new();
        for f in 0..names.len() {
            for g in 0..names.len() {
                if ends[g].1 != ends[f].0 {
                    continue;
                }
                let fg = self.normalize(&words[f].compose(&words[g])?)?;
                compose.insert((f, g), index[&(fg.source(), fg.letters().to_vec())]);
            }
        }
        Ok(HomTables::new(
            names,
            ends,
            identities,
            values,
            compose,
            &self.gen_ends(),
        ))
    }

    /// Number of distinct generator names used in the relations; handy for reports.
    pub fn relation_count(&self) -> usize {
        self.relations.len() + self.tracks.len()
    }

    /// Objects reachable from `a` along generators.
    pub fn reachable_from(&self, a: ObjectId) -> HashSet<ObjectId> {
        let mut seen = HashSet::from([a]);
        let mut stack = vec![a];
        while let Some(o) = stack.pop() {
            for g in &self.generators {
                if g.source == o && seen.insert(g.target) {
                    stack.push(g.target);
                }
            }
        }
        seen
    }
}

impl Default for PresentedCategory {
    fn default() -> Self {
        PresentedCategory::new()
    }
}

/// Names may not contain characters the text formats use as separators.
pub(crate) fn check_name(name: &str, what: &str) -> Result<()> {
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || ".@*;=#".contains(c))
    {
        return Err(Error::Validation(format!("invalid {what} name `{name}`")));
    }
    Ok(())
}
