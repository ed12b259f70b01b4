//! The fundamental category of a fibred complex as a presented category.
//!
//! Objects are F-points `(V, c, ψ)`: a 0-cell `c` and an F-morphism
//! `ψ: V -> fibre(c)`, written `c:ψ`. Generators are whiskers
//! `α[c:ψ]: (c, ψα) -> (c, ψ)` for F-generators `α`, and tracks
//! `t_e^β: (c0, φ0β) -> (c1, φ1β)` of 1-cells `e` with endpoint data
//! `(c0, φ0)`, `(c1, φ1)`, together with formal inverses.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::category::{GenId, MorphismWord, ObjectId, PresentedCategory};
use crate::complex::{Attaching, FComplex};
use crate::error::{Error, Result};

/// An F-point `(V, c, ψ)` with `V` the source of `ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiObject {
    /// Index of the 0-cell.
    pub cell: usize,
    pub phi: MorphismWord,
}

impl PiObject {
    pub fn fibre(&self) -> ObjectId {
        self.phi.source()
    }
}

/// A generator of the fundamental category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PiLetter {
    /// `t_e^β` or its inverse.
    Track {
        edge: usize,
        beta: MorphismWord,
        inverse: bool,
    },
    /// `α[c:ψ]`, ending at `anchor = (c, ψ)`.
    Whisker { gen: GenId, anchor: PiObject },
}

impl PiLetter {
    pub fn is_track(&self) -> bool {
        matches!(self, PiLetter::Track { .. })
    }
}

/// Which F-points become objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ObjectPolicy {
    /// Anchors of cells and whatever the attaching data of the 2-skeleton touches.
    #[default]
    CellsOnly,
    /// Every F-point, found by enumerating F hom-sets under a cap.
    All,
}

impl std::str::FromStr for ObjectPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cells-only" => Ok(ObjectPolicy::CellsOnly),
            "all" | "all-pairs-under-cap" => Ok(ObjectPolicy::All),
            other => Err(Error::Validation(format!(
                "unknown object policy `{other}`"
            ))),
        }
    }
}

/// The fundamental category with provenance for every generator.
#[derive(Clone, Debug)]
pub struct PiCategory {
    category: PresentedCategory,
    base: FComplex,
    objects: Vec<PiObject>,
    object_index: HashMap<PiObject, ObjectId>,
    letters: Vec<PiLetter>,
    letter_index: HashMap<PiLetter, GenId>,
    policy: ObjectPolicy,
}

/// Outcome of a finiteness test.
#[derive(Clone, Debug)]
pub enum Finiteness {
    Finite(crate::category::HomTables),
    /// The first hom-set found to exceed the cap.
    Infinite {
        from: String,
        to: String,
    },
    Unknown(String),
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite(_))
    }
}

impl fmt::Display for Finiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finiteness::Finite(t) => write!(f, "finite ({} morphisms)", t.element_count()),
            Finiteness::Infinite { from, to } => {
                write!(f, "infinite (hom {from} -> {to} exceeds the cap)")
            }
            Finiteness::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

struct Builder<'a> {
    x: &'a FComplex,
    f: &'a PresentedCategory,
}

impl Builder<'_> {
    fn nf(&self, w: &MorphismWord) -> Result<MorphismWord> {
        self.f.normalize(w)
    }

    fn obj(&self, cell: usize, phi: &MorphismWord) -> Result<PiObject> {
        Ok(PiObject {
            cell,
            phi: self.nf(phi)?,
        })
    }

    fn edge(&self, e: usize) -> (&PiObject, &PiObject) {
        match &self.x.cell(1, e).attaching {
            Attaching::Edge { d0, d1 } => (d0, d1),
            _ => unreachable!("1-cells carry edge data"),
        }
    }

    fn normal_letter(&self, l: &PiLetter) -> Result<PiLetter> {
        Ok(match l {
            PiLetter::Track {
                edge,
                beta,
                inverse,
            } => PiLetter::Track {
                edge: *edge,
                beta: self.nf(beta)?,
                inverse: *inverse,
            },
            PiLetter::Whisker { gen, anchor } => PiLetter::Whisker {
                gen: *gen,
                anchor: self.obj(anchor.cell, &anchor.phi)?,
            },
        })
    }

    /// Objects on the whisker path from `(c, ψw)` to `(c, ψ)`.
    fn path_objects(
        &self,
        c: usize,
        psi: &MorphismWord,
        w: &MorphismWord,
        out: &mut BTreeSet<PiObject>,
    ) -> Result<()> {
        let mut acc = psi.clone();
        out.insert(self.obj(c, &acc)?);
        for &g in w.letters() {
            acc = acc.compose(&self.f.gen_word(g))?;
            out.insert(self.obj(c, &acc)?);
        }
        Ok(())
    }
}

/// Builds the fundamental category of `x`; only the 2-skeleton contributes.
pub fn build_pi(x: &FComplex, policy: ObjectPolicy, hom_cap: usize) -> Result<PiCategory> {
    let f = x.category();
    if !f.has_normal_forms() {
        return Err(Error::NoNormalForm(
            "the structure category needs normal forms to build the fundamental category".into(),
        ));
    }
    let b = Builder { x, f };
    let edges = x.cells(1).len();
    let mut objs: BTreeSet<PiObject> = BTreeSet::new();
    let mut betas: Vec<BTreeSet<MorphismWord>> = vec![BTreeSet::new(); edges];

    match policy {
        ObjectPolicy::All => {
            for (c, cell) in x.cells(0).iter().enumerate() {
                for v in f.object_ids() {
                    for psi in f.enumerate_homs(v, cell.fibre, hom_cap)? {
                        objs.insert(PiObject { cell: c, phi: psi });
                    }
                }
            }
            for (e, cell) in x.cells(1).iter().enumerate() {
                for u in f.object_ids() {
                    betas[e].extend(f.enumerate_homs(u, cell.fibre, hom_cap)?);
                }
            }
        }
        ObjectPolicy::CellsOnly => {
            for (c, cell) in x.cells(0).iter().enumerate() {
                objs.insert(PiObject {
                    cell: c,
                    phi: MorphismWord::identity(cell.fibre),
                });
            }
            for (e, cell) in x.cells(1).iter().enumerate() {
                betas[e].insert(MorphismWord::identity(cell.fibre));
            }
            for n in 1..=2 {
                for i in 0..x.cells(n).len() {
                    let a = x.anchor(n, i);
                    objs.insert(b.obj(a.cell, &a.phi)?);
                }
            }
            for c in x.cells(2) {
                if let Attaching::Loop(letters) = &c.attaching {
                    for l in letters {
                        match b.normal_letter(l)? {
                            PiLetter::Track { edge, beta, .. } => {
                                betas[edge].insert(beta);
                            }
                            w @ PiLetter::Whisker { .. } => {
                                let (s, t) = x.letter_ends(&w)?;
                                objs.insert(s);
                                objs.insert(t);
                            }
                        }
                    }
                }
            }
            // Prefixes of normal words are normal, so this closes the track sets.
            for set in betas.iter_mut() {
                let mut extra = Vec::new();
                for beta in set.iter() {
                    extra.push(MorphismWord::identity(beta.target()));
                    for k in 1..beta.len() {
                        extra.push(f.word(beta.target(), &beta.letters()[..k])?);
                    }
                }
                set.extend(extra);
            }
        }
    }

    // Endpoints of tracks and whisker paths to them.
    for (e, set) in betas.iter().enumerate() {
        let (d0, d1) = b.edge(e);
        for beta in set {
            b.path_objects(d0.cell, &d0.phi, beta, &mut objs)?;
            b.path_objects(d1.cell, &d1.phi, beta, &mut objs)?;
        }
    }
    if policy == ObjectPolicy::CellsOnly {
        let snapshot: Vec<PiObject> = objs.iter().cloned().collect();
        for o in snapshot {
            let fib = x.cell(0, o.cell).fibre;
            b.path_objects(o.cell, &MorphismWord::identity(fib), &o.phi, &mut objs)?;
        }
    }

    let objects: Vec<PiObject> = objs.into_iter().collect();
    let object_index: HashMap<PiObject, ObjectId> = objects
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, o)| (o, ObjectId(i)))
        .collect();

    let mut letters: Vec<PiLetter> = Vec::new();
    for o in &objects {
        for (gi, g) in f.generators().iter().enumerate() {
            if g.target != o.phi.source() {
                continue;
            }
            let src = b.obj(o.cell, &o.phi.compose(&f.gen_word(GenId(gi)))?)?;
            if object_index.contains_key(&src) {
                letters.push(PiLetter::Whisker {
                    gen: GenId(gi),
                    anchor: o.clone(),
                });
            }
        }
    }
    for (e, set) in betas.iter().enumerate() {
        for beta in set {
            for inverse in [false, true] {
                letters.push(PiLetter::Track {
                    edge: e,
                    beta: beta.clone(),
                    inverse,
                });
            }
        }
    }
    let letter_index: HashMap<PiLetter, GenId> = letters
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, l)| (l, GenId(i)))
        .collect();

    let mut category = PresentedCategory::new();
    let x1 = x.skeleton(1);
    for o in &objects {
        category.add_object(&x1.display_object(o))?;
    }
    for l in &letters {
        let (s, t) = x1.letter_ends(l)?;
        category.add_generator(&x1.display_letter(l), object_index[&s], object_index[&t])?;
    }

    let mut pi = PiCategory {
        category,
        base: x1,
        objects,
        object_index,
        letters,
        letter_index,
        policy,
    };

    // Track inverses.
    for (i, l) in pi.letters.clone().iter().enumerate() {
        if let PiLetter::Track {
            edge,
            beta,
            inverse: false,
        } = l
        {
            let inv = pi.letter_index[&PiLetter::Track {
                edge: *edge,
                beta: beta.clone(),
                inverse: true,
            }];
            let (s, t) = (
                pi.category.generator(GenId(i)).source,
                pi.category.generator(GenId(i)).target,
            );
            pi.relate(&[GenId(i), inv], t)?;
            pi.relate(&[inv, GenId(i)], s)?;
        }
    }

    // Whiskered relations and tracks of F.
    for (l, r) in f.equations() {
        for o in pi.objects.clone() {
            if o.phi.source() != l.target() {
                continue;
            }
            let (Ok(wl), Ok(wr)) = (pi.whisker_along(&o, &l), pi.whisker_along(&o, &r)) else {
                continue;
            };
            if wl != wr {
                pi.category.add_relation(wl, wr)?;
            }
        }
    }

    // Naturality of tracks: γ[c1:φ1β] ∘ t^{βγ} = t^β ∘ γ[c0:φ0β].
    for (e, set) in betas.iter().enumerate() {
        let (d0, d1) = b.edge(e);
        for beta in set {
            for (gi, g) in f.generators().iter().enumerate() {
                if g.target != beta.source() {
                    continue;
                }
                let gw = f.gen_word(GenId(gi));
                let bg = b.nf(&beta.compose(&gw)?)?;
                if !set.contains(&bg) {
                    continue;
                }
                let w1 = PiLetter::Whisker {
                    gen: GenId(gi),
                    anchor: b.obj(d1.cell, &d1.phi.compose(beta)?)?,
                };
                let w0 = PiLetter::Whisker {
                    gen: GenId(gi),
                    anchor: b.obj(d0.cell, &d0.phi.compose(beta)?)?,
                };
                let t_bg = PiLetter::Track {
                    edge: e,
                    beta: bg,
                    inverse: false,
                };
                let t_b = PiLetter::Track {
                    edge: e,
                    beta: beta.clone(),
                    inverse: false,
                };
                let ids: Option<Vec<GenId>> = [&w1, &t_bg, &t_b, &w0]
                    .iter()
                    .map(|l| pi.gen_of(l))
                    .collect();
                let Some(ids) = ids else { continue };
                let lhs = pi.category.word(ObjectId(0), &[ids[0], ids[1]])?;
                let rhs = pi.category.word(ObjectId(0), &[ids[2], ids[3]])?;
                pi.category.add_relation(lhs, rhs)?;
            }
        }
    }

    // 2-cells.
    for (i, cell) in x.cells(2).iter().enumerate() {
        let Attaching::Loop(traversal) = &cell.attaching else {
            continue;
        };
        let anchor = pi.anchor_object(x, 2, i)?;
        let composed: Vec<PiLetter> = traversal.iter().rev().cloned().collect();
        let w =
            pi.letters_to_word(&composed, anchor)
                .map_err(|err| Error::InconsistentBoundary {
                    cell: cell.name.clone(),
                    reason: err.to_string(),
                })?;
        if !w.is_empty() {
            pi.category
                .add_relation(w, MorphismWord::identity(anchor))?;
        }
        if policy == ObjectPolicy::All && composed.iter().all(PiLetter::is_track) {
            for u in f.object_ids() {
                for beta in f.enumerate_homs(u, cell.fibre, hom_cap)? {
                    if beta.is_identity() || composed.is_empty() {
                        continue;
                    }
                    let moved: Result<Vec<PiLetter>> = composed
                        .iter()
                        .map(|l| match l {
                            PiLetter::Track {
                                edge,
                                beta: b0,
                                inverse,
                            } => Ok(PiLetter::Track {
                                edge: *edge,
                                beta: b.nf(&b0.compose(&beta)?)?,
                                inverse: *inverse,
                            }),
                            PiLetter::Whisker { .. } => unreachable!("filtered to tracks"),
                        })
                        .collect();
                    let moved = moved?;
                    let (start, _) = x1_ends(&pi, &moved)?;
                    let mw = pi.letters_to_word(&moved, start)?;
                    pi.category
                        .add_relation(mw, MorphismWord::identity(start))?;
                }
            }
        }
    }
    Ok(pi)
}

fn x1_ends(pi: &PiCategory, letters: &[PiLetter]) -> Result<(ObjectId, ObjectId)> {
    let last = letters.last().expect("nonempty word");
    let (s, _) = pi.base.letter_ends(last)?;
    let (_, t) = pi.base.letter_ends(&letters[0])?;
    Ok((pi.object(&s)?, pi.object(&t)?))
}

impl PiCategory {
    fn relate(&mut self, letters: &[GenId], at: ObjectId) -> Result<()> {
        let w = self.category.word(at, letters)?;
        self.category.add_relation(w, MorphismWord::identity(at))
    }

    pub fn category(&self) -> &PresentedCategory {
        &self.category
    }

    pub fn policy(&self) -> ObjectPolicy {
        self.policy
    }

    /// The 1-skeleton the letters refer to.
    pub fn base_complex(&self) -> &FComplex {
        &self.base
    }

    pub fn objects(&self) -> &[PiObject] {
        &self.objects
    }

    pub fn pi_object(&self, o: ObjectId) -> &PiObject {
        &self.objects[o.0]
    }

    /// Provenance of a generator.
    pub fn letter(&self, g: GenId) -> &PiLetter {
        &self.letters[g.0]
    }

    pub fn gen_of(&self, l: &PiLetter) -> Option<GenId> {
        self.letter_index.get(l).copied()
    }

    fn normal_letter(&self, l: &PiLetter) -> Result<PiLetter> {
        let f = self.base.category();
        Ok(match l {
            PiLetter::Track {
                edge,
                beta,
                inverse,
            } => PiLetter::Track {
                edge: *edge,
                beta: f.normalize(beta)?,
                inverse: *inverse,
            },
            PiLetter::Whisker { gen, anchor } => PiLetter::Whisker {
                gen: *gen,
                anchor: self.base.normalize_object(anchor)?,
            },
        })
    }

    /// Object id of an F-point, after normalization.
    pub fn object(&self, o: &PiObject) -> Result<ObjectId> {
        let n = self.base.normalize_object(o)?;
        self.object_index.get(&n).copied().ok_or_else(|| {
            Error::AnchorMissing(format!(
                "`{}` is not an object of the fundamental category",
                self.base.display_object(&n)
            ))
        })
    }

    /// Object id of the anchor of a cell of `x` (which must share the 0- and 1-cells).
    pub fn anchor_object(&self, x: &FComplex, n: usize, i: usize) -> Result<ObjectId> {
        self.object(&x.anchor(n, i))
    }

    /// Word for letters in composition order; `identity_at` serves the empty word.
    pub fn letters_to_word(
        &self,
        letters: &[PiLetter],
        identity_at: ObjectId,
    ) -> Result<MorphismWord> {
        let gens: Result<Vec<GenId>> = letters
            .iter()
            .map(|l| {
                let n = self.normal_letter(l)?;
                self.gen_of(&n).ok_or_else(|| {
                    Error::UnknownGenerator(format!(
                        "`{}` is not a generator of the fundamental category",
                        self.base.display_letter(&n)
                    ))
                })
            })
            .collect();
        self.category.word(identity_at, &gens?)
    }

    /// `W(w)` at `(c, ψ)`: the whisker path from `(c, ψw)` to `(c, ψ)`.
    pub fn whisker_along(&self, o: &PiObject, w: &MorphismWord) -> Result<MorphismWord> {
        let f = self.base.category();
        let target = self.object(o)?;
        let mut acc = o.phi.clone();
        let mut letters = Vec::with_capacity(w.len());
        for &g in w.letters() {
            let anchor = PiObject {
                cell: o.cell,
                phi: f.normalize(&acc)?,
            };
            let l = PiLetter::Whisker { gen: g, anchor };
            letters.push(self.gen_of(&l).ok_or_else(|| {
                Error::UnknownGenerator(format!(
                    "whisker `{}` is not a generator of the fundamental category",
                    self.base.display_letter(&l)
                ))
            })?);
            acc = acc.compose(&f.gen_word(g))?;
        }
        self.category.word(target, &letters)
    }

    /// `W(ψ)`: from `(c, ψ)` to the 0-cell anchor `(c, id)`.
    pub fn whisker_path(&self, o: &PiObject) -> Result<MorphismWord> {
        let fib = self.base.cell(0, o.cell).fibre;
        self.whisker_along(
            &PiObject {
                cell: o.cell,
                phi: MorphismWord::identity(fib),
            },
            &o.phi,
        )
    }

    /// Image under the projection to F: whiskers go to their F-generator, tracks to identities.
    pub fn to_f_word(&self, w: &MorphismWord) -> MorphismWord {
        let f = self.base.category();
        let letters: Vec<GenId> = w
            .letters()
            .iter()
            .filter_map(|g| match &self.letters[g.0] {
                PiLetter::Whisker { gen, .. } => Some(*gen),
                PiLetter::Track { .. } => None,
            })
            .collect();
        let src = self.objects[w.source().0].fibre();
        f.word(src, &letters)
            .expect("projection of a composable word composes")
    }

    /// Decides whether every hom-set has at most `cap` elements.
    pub fn is_finite(&self, cap: usize) -> Finiteness {
        match self.category.finite_tables(cap) {
            Ok(t) => Finiteness::Finite(t),
            Err(Error::CapExceeded { from, to, .. }) => Finiteness::Infinite { from, to },
            Err(e) => Finiteness::Unknown(e.to_string()),
        }
    }
}

/// Tri-state finiteness test for a built fundamental category.
pub fn is_finite_pi(p: &PiCategory, cap: usize) -> Finiteness {
    p.is_finite(cap)
}
