//! Built-in example complexes.

use num_bigint::BigInt;

use super::{FComplex, RowTerm};
use crate::category::{z2_orbit_category, MorphismWord, ObjectId, PresentedCategory};
use crate::error::{Error, Result};
use crate::pi::{PiLetter, PiObject};

fn at(cell: usize, fibre: ObjectId) -> PiObject {
    PiObject {
        cell,
        phi: MorphismWord::identity(fibre),
    }
}

fn track(edge: usize, fibre: ObjectId, inverse: bool) -> PiLetter {
    PiLetter::Track {
        edge,
        beta: MorphismWord::identity(fibre),
        inverse,
    }
}

/// A single 0-cell with the given fibre.
pub fn point(category: PresentedCategory, fibre: ObjectId) -> FComplex {
    let mut x = FComplex::new(category, false);
    x.add_cell0("c", fibre).expect("fresh complex");
    x
}

/// Minimal cell structure of `S^n` over the trivial category
/// (two points for `n = 0`).
pub fn sphere(n: usize) -> FComplex {
    sphere_over(PresentedCategory::trivial(), ObjectId(0), n)
}

fn sphere_over(category: PresentedCategory, fibre: ObjectId, n: usize) -> FComplex {
    let mut x = FComplex::new(category, false);
    x.add_cell0("c", fibre).expect("fresh complex");
    let base = at(0, fibre);
    match n {
        0 => {
            x.add_cell0("d", fibre).expect("fresh name");
        }
        1 => {
            x.add_cell1("e", fibre, base.clone(), base)
                .expect("fresh name");
        }
        2 => {
            x.add_cell2("e", fibre, base, Vec::new())
                .expect("fresh name");
        }
        n => {
            x.add_cell("e", n, fibre, base, Vec::new())
                .expect("fresh name");
        }
    }
    x
}

/// `S^n` with the trivial action of `Z/2`: every cell has fibre `G/G`.
pub fn trivial_action_sphere(n: usize) -> FComplex {
    let f = z2_orbit_category();
    let gg = f.object("G/G").expect("orbit category has G/G");
    sphere_over(f, gg, n)
}

fn surface(word: &[(usize, bool)]) -> FComplex {
    let mut x = FComplex::new(PresentedCategory::trivial(), false);
    let pt = ObjectId(0);
    x.add_cell0("c", pt).expect("fresh complex");
    x.add_cell1("a", pt, at(0, pt), at(0, pt))
        .expect("fresh name");
    x.add_cell1("b", pt, at(0, pt), at(0, pt))
        .expect("fresh name");
    let letters = word.iter().map(|&(e, inv)| track(e, pt, inv)).collect();
    x.add_cell2("f", pt, at(0, pt), letters)
        .expect("fresh name");
    x
}

/// Torus with boundary word `a b a^-1 b^-1`.
pub fn torus() -> FComplex {
    surface(&[(0, false), (1, false), (0, true), (1, true)])
}

/// Klein bottle with boundary word `a b a^-1 b`.
pub fn klein_bottle() -> FComplex {
    surface(&[(0, false), (1, false), (0, true), (1, false)])
}

/// Real projective plane with boundary word `e e`.
pub fn projective_plane() -> FComplex {
    let mut x = FComplex::new(PresentedCategory::trivial(), false);
    let pt = ObjectId(0);
    x.add_cell0("c", pt).expect("fresh complex");
    x.add_cell1("e", pt, at(0, pt), at(0, pt))
        .expect("fresh name");
    x.add_cell2(
        "f",
        pt,
        at(0, pt),
        vec![track(0, pt, false), track(0, pt, false)],
    )
    .expect("fresh name");
    x
}

/// `S^n` with the antipodal action of `Z/2`: one free cell in each dimension.
pub fn antipodal_sphere(n: usize) -> FComplex {
    let f = z2_orbit_category();
    let ge = f.object("G/e").expect("orbit category has G/e");
    let t = f.gen_id("t").expect("orbit category has t");
    let tw = f.gen_word(t);
    let mut x = FComplex::new(f, false);
    x.add_cell0("c", ge).expect("fresh complex");
    if n == 0 {
        return x;
    }
    x.add_cell1(
        "e1",
        ge,
        at(0, ge),
        PiObject {
            cell: 0,
            phi: tw.clone(),
        },
    )
    .expect("fresh name");
    if n >= 2 {
        let loop_word = vec![
            track(0, ge, false),
            PiLetter::Track {
                edge: 0,
                beta: tw,
                inverse: false,
            },
        ];
        x.add_cell2("e2", ge, at(0, ge), loop_word)
            .expect("fresh name");
    }
    // The deck transformation at (c, id) is t[c:id] ∘ e1.
    let deck = vec![
        PiLetter::Whisker {
            gen: t,
            anchor: at(0, ge),
        },
        track(0, ge, false),
    ];
    for k in 3..=n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let row = vec![
            RowTerm {
                coeff: BigInt::from(1),
                word: Vec::new(),
                cell: 0,
            },
            RowTerm {
                coeff: BigInt::from(sign),
                word: deck.clone(),
                cell: 0,
            },
        ];
        x.add_cell(&format!("e{k}"), k, ge, at(0, ge), row)
            .expect("fresh name");
    }
    x
}

/// `S^1` with `Z/2` acting by a reflection: two fixed points `x`, `y` and a
/// free orbit of arcs.
pub fn reflection_circle() -> FComplex {
    let f = z2_orbit_category();
    let ge = f.object("G/e").expect("orbit category has G/e");
    let gg = f.object("G/G").expect("orbit category has G/G");
    let p = f.gen_word(f.gen_id("p").expect("orbit category has p"));
    let mut x = FComplex::new(f, false);
    x.add_cell0("x", gg).expect("fresh complex");
    x.add_cell0("y", gg).expect("fresh name");
    x.add_cell1(
        "e",
        ge,
        PiObject {
            cell: 0,
            phi: p.clone(),
        },
        PiObject { cell: 1, phi: p },
    )
    .expect("fresh name");
    x
}

/// `S^2` with `Z/2` acting by a reflection: the fixed equator is one 0-cell
/// and one 1-cell with fibre `G/G`, the hemispheres form a free 2-cell.
pub fn reflection_sphere() -> FComplex {
    let f = z2_orbit_category();
    let ge = f.object("G/e").expect("orbit category has G/e");
    let gg = f.object("G/G").expect("orbit category has G/G");
    let p = f.gen_word(f.gen_id("p").expect("orbit category has p"));
    let mut x = FComplex::new(f, false);
    x.add_cell0("c", gg).expect("fresh complex");
    x.add_cell1("a", gg, at(0, gg), at(0, gg))
        .expect("fresh name");
    let based = PiObject {
        cell: 0,
        phi: p.clone(),
    };
    let letters = vec![PiLetter::Track {
        edge: 0,
        beta: p,
        inverse: false,
    }];
    x.add_cell2("f", ge, based, letters).expect("fresh name");
    x
}

/// Data for an elementary expansion: a new `dim`-cell and a new
/// `(dim + 1)`-cell having it as a free face.
#[derive(Clone, Debug)]
pub struct ExpansionSpec {
    /// Dimension of the lower new cell, at least 1.
    pub dim: usize,
    /// 0-cell carrying the basepoints of the new cells.
    pub base: usize,
    /// Sign of the free face in the boundary of the upper cell.
    pub sign: i64,
    /// For `dim == 1`: loop at the base, in traversal order, closing the new 2-cell.
    pub loop_word: Vec<PiLetter>,
    /// Suffix for the new cell names.
    pub tag: String,
}

/// Returns `x` with an elementary expansion attached.
pub fn elementary_expansion(x: &FComplex, spec: &ExpansionSpec) -> Result<FComplex> {
    if spec.dim == 0 || spec.base >= x.cells(0).len() {
        return Err(Error::Validation(
            "expansion needs dimension at least 1 and an existing 0-cell".into(),
        ));
    }
    if spec.sign != 1 && spec.sign != -1 {
        return Err(Error::Validation("expansion sign must be 1 or -1".into()));
    }
    let mut y = x.clone();
    let fibre = x.cells(0)[spec.base].fibre;
    let base = at(spec.base, fibre);
    let lower = format!("x{}", spec.tag);
    let upper = format!("y{}", spec.tag);
    match spec.dim {
        1 => {
            let e = y.add_cell1(&lower, fibre, base.clone(), base.clone())?;
            let first = PiLetter::Track {
                edge: e,
                beta: MorphismWord::identity(fibre),
                inverse: spec.sign < 0,
            };
            let mut letters = vec![first];
            letters.extend(spec.loop_word.iter().cloned());
            y.add_cell2(&upper, fibre, base, letters)?;
        }
        2 => {
            let a = y.add_cell2(&lower, fibre, base.clone(), Vec::new())?;
            let row = vec![RowTerm {
                coeff: BigInt::from(spec.sign),
                word: Vec::new(),
                cell: a,
            }];
            y.add_cell(&upper, 3, fibre, base, row)?;
        }
        n => {
            let a = y.add_cell(&lower, n, fibre, base.clone(), Vec::new())?;
            let row = vec![RowTerm {
                coeff: BigInt::from(spec.sign),
                word: Vec::new(),
                cell: a,
            }];
            y.add_cell(&upper, n + 1, fibre, base, row)?;
        }
    }
    Ok(y)
}
