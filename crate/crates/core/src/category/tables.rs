use std::collections::{BTreeMap, HashMap, VecDeque};

use super::word::{GenId, ObjectId};

/// Explicit finite hom-sets with a full composition table.
///
/// Elements are numbered; `compose(f, g)` is `f ∘ g` and is defined exactly
/// when the target of `g` is the source of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTables {
    pub(crate) names: Vec<String>,
    pub(crate) ends: Vec<(ObjectId, ObjectId)>,
    pub(crate) identities: Vec<usize>,
    pub(crate) values: Vec<usize>,
    pub(crate) compose: HashMap<(usize, usize), usize>,
    pub(crate) normal_words: Vec<Option<Vec<GenId>>>,
}

impl HomTables {
    /// Assembles tables and computes the shortlex-least word of every
    /// element. Consistency is checked separately by [`HomTables::problems`].
    pub(crate) fn new(
        names: Vec<String>,
        ends: Vec<(ObjectId, ObjectId)>,
        identities: Vec<usize>,
        values: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
        gen_ends: &[(ObjectId, ObjectId)],
    ) -> Self {
        let mut t = HomTables {
            normal_words: vec![None; names.len()],
            names,
            ends,
            identities,
            values,
            compose,
        };
        t.normal_words = t.shortlex_words(gen_ends);
        t
    }

    pub fn element_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn ends(&self, e: usize) -> (ObjectId, ObjectId) {
        self.ends[e]
    }

    pub fn identity(&self, o: ObjectId) -> usize {
        self.identities[o.0]
    }

    pub fn value(&self, g: GenId) -> usize {
        self.values[g.0]
    }

    /// `f ∘ g`, if composable and tabulated.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    /// Elements of `hom(a, b)` in index order.
    pub fn hom(&self, a: ObjectId, b: ObjectId) -> Vec<usize> {
        (0..self.names.len())
            .filter(|&e| self.ends[e] == (a, b))
            .collect()
    }

    /// Value of a composable word (letters in composition order).
    pub fn evaluate(&self, source: ObjectId, letters: &[GenId]) -> Option<usize> {
        let mut acc = self.identity(source);
        for g in letters.iter().rev() {
            acc = self.compose(self.value(*g), acc)?;
        }
        Some(acc)
    }

    pub fn normal_word(&self, e: usize) -> Option<&[GenId]> {
        self.normal_words[e].as_deref()
    }

    /// Breadth-first search in shortlex order: shortlex-least words are
    /// prefix closed, so the first word reaching an element is its normal form.
    fn shortlex_words(&self, gen_ends: &[(ObjectId, ObjectId)]) -> Vec<Option<Vec<GenId>>> {
        let mut out: Vec<Option<Vec<GenId>>> = vec![None; self.names.len()];
        let mut queue = VecDeque::new();
        for (o, &e) in self.identities.iter().enumerate() {
            if e < out.len() && out[e].is_none() {
                out[e] = Some(Vec::new());
                queue.push_back((Vec::new(), ObjectId(o), e));
            }
        }
        // Identities seed every length-zero word; process in shortlex order.
        let mut layer: Vec<(Vec<GenId>, ObjectId, usize)> = queue.drain(..).collect();
        while !layer.is_empty() {
            layer.sort_by(|a, b| a.0.cmp(&b.0));
            let mut next = Vec::new();
            for (w, src, e) in &layer {
                for (gi, &(gs, gt)) in gen_ends.iter().enumerate() {
                    if gt != *src {
                        continue;
                    }
                    let Some(v) = self.values.get(gi) else {
                        continue;
                    };
                    let Some(c) = self.compose(e.to_owned(), *v) else {
                        continue;
                    };
                    if c < out.len() && out[c].is_none() {
                        let mut nw = w.clone();
                        nw.push(GenId(gi));
                        out[c] = Some(nw.clone());
                        next.push((nw, gs, c));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Every failed table axiom, as human-readable lines.
    pub fn problems(
        &self,
        objects: &[String],
        gen_names: &[String],
        gen_ends: &[(ObjectId, ObjectId)],
    ) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.names.len();
        for (o, &e) in self.identities.iter().enumerate() {
            if e >= n || self.ends[e] != (ObjectId(o), ObjectId(o)) {
                out.push(format!(
                    "identity of `{}` is not an endomorphism of it",
                    objects[o]
                ));
            }
        }
        for (g, &e) in self.values.iter().enumerate() {
            if e >= n || self.ends[e] != gen_ends[g] {
                out.push(format!(
                    "value of generator `{}` has the wrong endpoints",
                    gen_names[g]
                ));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in 0..n {
            for g in 0..n {
                let composable = self.ends[g].1 == self.ends[f].0;
                match (composable, self.compose(f, g)) {
                    (true, None) => out.push(format!(
                        "composition `{}` after `{}` is missing",
                        self.names[f], self.names[g]
                    )),
                    (false, Some(_)) => out.push(format!(
                        "composition `{}` after `{}` given for non-composable pair",
                        self.names[f], self.names[g]
                    )),
                    (true, Some(h)) => {
                        if h >= n || self.ends[h] != (self.ends[g].0, self.ends[f].1) {
                            out.push(format!(
                                "composite of `{}` after `{}` has the wrong endpoints",
                                self.names[f], self.names[g]
                            ));
                        } else {
                            by_pair.insert((f, g), h);
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in 0..n {
            let (s, t) = self.ends[f];
            if by_pair[&(f, self.identities[s.0])] != f || by_pair[&(self.identities[t.0], f)] != f
            {
                out.push(format!("identities are not units for `{}`", self.names[f]));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(&fg) = by_pair.get(&(f, g)) else {
                    continue;
                };
                for h in 0..n {
                    let Some(&gh) = by_pair.get(&(g, h)) else {
                        continue;
                    };
                    if by_pair[&(fg, h)] != by_pair[&(f, gh)] {
                        out.push(format!(
                            "composition is not associative on `{}`, `{}`, `{}`",
                            self.names[f], self.names[g], self.names[h]
                        ));
                    }
                }
            }
        }
        for (e, w) in self.normal_words.iter().enumerate() {
            if w.is_none() {
                out.push(format!(
                    "element `{}` is not a composite of generators",
                    self.names[e]
                ));
            }
        }
        out
    }

    /// A complete set of defining relations read off the tables: every
    /// normal word extended by one generator equals the normal word of the product.
    pub(crate) fn defining_relations(
        &self,
        gen_ends: &[(ObjectId, ObjectId)],
    ) -> Vec<(ObjectId, Vec<GenId>, Vec<GenId>)> {
        let mut out = Vec::new();
        for (e, w) in self.normal_words.iter().enumerate() {
            let Some(w) = w else { continue };
            let (src, tgt) = self.ends[e];
            for (gi, &(gs, _)) in gen_ends.iter().enumerate() {
                if gs != tgt {
                    continue;
                }
                let Some(p) = self.compose(self.values[gi], e) else {
                    continue;
                };
                let mut lhs = vec![GenId(gi)];
                lhs.extend_from_slice(w);
                let Some(rhs) = &self.normal_words[p] else {
                    continue;
                };
                if &lhs != rhs {
                    out.push((src, lhs, rhs.clone()));
                }
            }
        }
        out
    }
}
