//! Modules over presented categories: functors to finitely presented
//! abelian groups, free right modules and the pairings with them.

use num_bigint::BigInt;

use crate::category::{GenId, MorphismWord, ObjectId, PresentedCategory, ValidationReport};
use crate::chains::ZPiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{in_column_span, IntMatrix, PresentedGroup};
use crate::pi::{PiCategory, PiLetter};

/// Left modules are covariant functors, right modules contravariant ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Left,
    Right,
}

impl std::str::FromStr for Variance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Variance::Left),
            "right" => Ok(Variance::Right),
            other => Err(Error::InvalidModule(format!("unknown variance `{other}`"))),
        }
    }
}

impl std::fmt::Display for Variance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variance::Left => "left",
            Variance::Right => "right",
        })
    }
}

/// A module: one presented group per object and one matrix per generator.
///
/// For `g: s -> t` the matrix maps `value(s) -> value(t)` for left modules
/// and `value(t) -> value(s)` for right modules; matrices act on column
/// vectors of generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatModule {
    pub variance: Variance,
    pub values: Vec<PresentedGroup>,
    pub actions: Vec<IntMatrix>,
}

impl CatModule {
    /// The constant functor with value `group` and identity actions.
    pub fn constant(base: &PresentedCategory, variance: Variance, group: &PresentedGroup) -> Self {
        CatModule {
            variance,
            values: vec![group.clone(); base.object_count()],
            actions: vec![IntMatrix::identity(group.gens); base.generator_count()],
        }
    }

    /// Constant `Z` (for `m == 0`) or `Z/m`.
    pub fn constant_cyclic(base: &PresentedCategory, variance: Variance, m: i64) -> Self {
        CatModule::constant(base, variance, &PresentedGroup::cyclic(m))
    }

    /// Value `Z` everywhere; tracks of the listed 1-cells act by `-1`, all else by `1`.
    pub fn sign(pi: &PiCategory, variance: Variance, edges: &[usize]) -> Self {
        let c = pi.category();
        let actions = (0..c.generator_count())
            .map(|g| match pi.letter(GenId(g)) {
                PiLetter::Track { edge, .. } if edges.contains(edge) => {
                    IntMatrix::from_rows(&[[-1]])
                }
                _ => IntMatrix::identity(1),
            })
            .collect();
        CatModule {
            variance,
            values: vec![PresentedGroup::free(1); c.object_count()],
            actions,
        }
    }

    /// Sign module from 1-cell names.
    pub fn sign_by_names(pi: &PiCategory, variance: Variance, names: &[&str]) -> Result<Self> {
        let x = pi.base_complex();
        let edges: Result<Vec<usize>> = names
            .iter()
            .map(|n| match x.find(n) {
                Some((1, i)) => Ok(i),
                _ => Err(Error::UnknownCell(format!("`{n}` is not a 1-cell"))),
            })
            .collect();
        Ok(CatModule::sign(pi, variance, &edges?))
    }

    /// Pullback of a module over the structure category along the
    /// projection: whiskers act as their F-generator, tracks trivially.
    pub fn pullback(pi: &PiCategory, module: &CatModule) -> Self {
        let c = pi.category();
        let values = (0..c.object_count())
            .map(|o| module.values[pi.pi_object(ObjectId(o)).fibre().0].clone())
            .collect();
        let actions = (0..c.generator_count())
            .map(|g| match pi.letter(GenId(g)) {
                PiLetter::Whisker { gen, .. } => module.actions[gen.0].clone(),
                PiLetter::Track { .. } => {
                    let src = c.generator(GenId(g)).source;
                    IntMatrix::identity(module.values[pi.pi_object(src).fibre().0].gens)
                }
            })
            .collect();
        CatModule {
            variance: module.variance,
            values,
            actions,
        }
    }

    pub fn value(&self, o: ObjectId) -> &PresentedGroup {
        &self.values[o.0]
    }

    /// Matrix of the action of a word, composed in variance order.
    pub fn act(&self, w: &MorphismWord) -> Result<IntMatrix> {
        let mut gens = w.letters().iter();
        let base = match self.variance {
            Variance::Left => w.source(),
            Variance::Right => w.target(),
        };
        let mut acc = IntMatrix::identity(
            self.values
                .get(base.0)
                .map(|v| v.gens)
                .ok_or_else(|| Error::UnknownObject(format!("#{}", base.0)))?,
        );
        let get = |g: &GenId| {
            self.actions
                .get(g.0)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{}", g.0)))
        };
        match self.variance {
            // N(g1 ∘ ... ∘ gm) = N(g1) ··· N(gm)
            Variance::Left => {
                for g in gens.by_ref().rev() {
                    acc = get(g)? * &acc;
                }
            }
            // M(g1 ∘ ... ∘ gm) = M(gm) ··· M(g1)
            Variance::Right => {
                for g in gens {
                    acc = get(g)? * &acc;
                }
            }
        }
        Ok(acc)
    }

    /// Checks shapes, compatibility with presentations and, for each
    /// defining equation of `base`, equality of the two actions.
    pub fn validate(&self, base: &PresentedCategory) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.values.len() != base.object_count() {
            r.push(format!(
                "module has {} values but the category has {} objects",
                self.values.len(),
                base.object_count()
            ));
            return r;
        }
        if self.actions.len() != base.generator_count() {
            r.push(format!(
                "module has {} actions but the category has {} generators",
                self.actions.len(),
                base.generator_count()
            ));
            return r;
        }
        for (g, gen) in base.generators().iter().enumerate() {
            let (from, to) = self.direction(gen.source, gen.target);
            let m = &self.actions[g];
            if m.shape() != (self.values[to.0].gens, self.values[from.0].gens) {
                r.push(format!(
                    "action of `{}` has shape {:?}",
                    gen.name,
                    m.shape()
                ));
                continue;
            }
            let image = m * &self.values[from.0].relations;
            if !in_column_span(&self.values[to.0].relations, &image) {
                r.push(format!(
                    "action of `{}` does not respect the presentations",
                    gen.name
                ));
            }
        }
        if !r.is_valid() {
            return r;
        }
        for (a, b) in base.equations() {
            match (self.act(&a), self.act(&b)) {
                (Ok(x), Ok(y)) => {
                    let (_, to) = self.direction(a.source(), a.target());
                    if !self.maps_equal(&x, &y, to) {
                        r.push(format!(
                            "relation `{} = {}` is not respected",
                            base.display_word(&a),
                            base.display_word(&b)
                        ));
                    }
                }
                (Err(e), _) | (_, Err(e)) => r.push(e.to_string()),
            }
        }
        r
    }

    /// `(from, to)` of the action of a morphism `s -> t`.
    fn direction(&self, s: ObjectId, t: ObjectId) -> (ObjectId, ObjectId) {
        match self.variance {
            Variance::Left => (s, t),
            Variance::Right => (t, s),
        }
    }

    /// Equality of two maps into `value(to)` as maps of presented groups.
    pub fn maps_equal(&self, x: &IntMatrix, y: &IntMatrix, to: ObjectId) -> bool {
        in_column_span(&self.values[to.0].relations, &(x - y))
    }
}

/// A free right module `⊕ Z hom(-, anchor)` with one summand per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeRightModule {
    pub anchors: Vec<ObjectId>,
    pub labels: Vec<String>,
}

/// A direct sum of module values with the offset of every summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub group: PresentedGroup,
    pub offsets: Vec<usize>,
    pub labels: Vec<String>,
}

impl Evaluation {
    fn of(basis: &FreeRightModule, module: &CatModule, base: &PresentedCategory) -> Result<Self> {
        let mut offsets = Vec::with_capacity(basis.anchors.len());
        let mut parts = Vec::new();
        let mut at = 0;
        for (a, label) in basis.anchors.iter().zip(&basis.labels) {
            if a.0 >= base.object_count() || a.0 >= module.values.len() {
                return Err(Error::AnchorMissing(format!("basis element `{label}`")));
            }
            offsets.push(at);
            at += module.values[a.0].gens;
            parts.push(&module.values[a.0]);
        }
        Ok(Evaluation {
            group: PresentedGroup::direct_sum_all(parts),
            offsets,
            labels: basis.labels.clone(),
        })
    }
}

/// Natural transformations `B -> M`, one element of `M(anchor)` per basis element.
pub fn hom_from_free(
    basis: &FreeRightModule,
    module: &CatModule,
    base: &PresentedCategory,
) -> Result<Evaluation> {
    if module.variance != Variance::Right {
        return Err(Error::InvalidModule(
            "hom out of a free right module needs a right module".into(),
        ));
    }
    Evaluation::of(basis, module, base)
}

/// `B ⊗ N`, which for free `B` is `⊕ N(anchor)`.
pub fn tensor_free(
    basis: &FreeRightModule,
    module: &CatModule,
    base: &PresentedCategory,
) -> Result<Evaluation> {
    if module.variance != Variance::Left {
        return Err(Error::InvalidModule(
            "tensor with a free right module needs a left module".into(),
        ));
    }
    Evaluation::of(basis, module, base)
}

fn offsets(module: &CatModule, anchors: &[ObjectId]) -> (Vec<usize>, usize) {
    let mut out = Vec::with_capacity(anchors.len());
    let mut at = 0;
    for a in anchors {
        out.push(at);
        at += module.values[a.0].gens;
    }
    (out, at)
}

/// `d ⊗ N`: the block for (column cell, row cell) is `Σ c · N(w)`.
pub fn induced_chain_map(d: &ZPiMatrix, module: &CatModule) -> Result<IntMatrix> {
    if module.variance != Variance::Left {
        return Err(Error::InvalidModule(
            "chain maps are induced by left modules".into(),
        ));
    }
    let (row_off, row_total) = offsets(module, d.row_anchors());
    let (col_off, col_total) = offsets(module, d.col_anchors());
    let mut out = IntMatrix::zeros(col_total, row_total);
    for i in 0..d.row_count() {
        for j in 0..d.col_count() {
            for (c, w) in d.entry(i, j).terms() {
                out.add_block(col_off[j], row_off[i], &module.act(w)?.scale(c));
            }
        }
    }
    Ok(out)
}

/// `hom(d, M)`: the block for (row cell, column cell) is `Σ c · M(w)`.
pub fn induced_cochain_map(d: &ZPiMatrix, module: &CatModule) -> Result<IntMatrix> {
    if module.variance != Variance::Right {
        return Err(Error::InvalidModule(
            "cochain maps are induced by right modules".into(),
        ));
    }
    let (row_off, row_total) = offsets(module, d.row_anchors());
    let (col_off, col_total) = offsets(module, d.col_anchors());
    let mut out = IntMatrix::zeros(row_total, col_total);
    for i in 0..d.row_count() {
        for j in 0..d.col_count() {
            for (c, w) in d.entry(i, j).terms() {
                out.add_block(row_off[i], col_off[j], &module.act(w)?.scale(c));
            }
        }
    }
    Ok(out)
}

/// Coefficient of a term, for callers assembling rows by hand.
pub fn coeff(c: i64) -> BigInt {
    BigInt::from(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::z2_orbit_category;
    use crate::complex::projective_plane;
    use crate::pi::{build_pi, ObjectPolicy};

    #[test]
    fn identity_and_constant_actions() {
        let pi = build_pi(&projective_plane(), ObjectPolicy::CellsOnly, 16).unwrap();
        let c = pi.category();
        let z = CatModule::constant_cyclic(c, Variance::Left, 0);
        let o = ObjectId(0);
        assert_eq!(z.act(&c.identity(o)).unwrap(), IntMatrix::identity(1));
        let ee = c.parse_word("e.e.e", None).unwrap();
        assert_eq!(z.act(&ee).unwrap(), IntMatrix::identity(1));
        let s = CatModule::sign(&pi, Variance::Left, &[0]);
        assert!(s.validate(c).is_valid());
        assert_eq!(
            s.act(&c.parse_word("e.e", None).unwrap()).unwrap(),
            IntMatrix::identity(1)
        );
        assert_eq!(
            s.act(&c.parse_word("e", None).unwrap()).unwrap(),
            IntMatrix::from_rows(&[[-1]])
        );
    }

    #[test]
    fn variance_order() {
        // Free category on a, b: A -> A with non-commuting matrix actions.
        let mut c = PresentedCategory::new();
        let o = c.add_object("A").unwrap();
        c.add_generator("a", o, o).unwrap();
        c.add_generator("b", o, o).unwrap();
        let ma = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let mb = IntMatrix::from_rows(&[[1, 0], [1, 1]]);
        let left = CatModule {
            variance: Variance::Left,
            values: vec![PresentedGroup::free(2)],
            actions: vec![ma.clone(), mb.clone()],
        };
        let right = CatModule {
            variance: Variance::Right,
            ..left.clone()
        };
        let w = c.parse_word("a.b", None).unwrap();
        assert_eq!(left.act(&w).unwrap(), &ma * &mb);
        assert_eq!(right.act(&w).unwrap(), &mb * &ma);
    }

    #[test]
    fn bredon_style_system_validates() {
        let f = z2_orbit_category();
        let good = CatModule {
            variance: Variance::Left,
            values: vec![PresentedGroup::free(1), PresentedGroup::cyclic(2)],
            actions: vec![IntMatrix::from_rows(&[[-1]]), IntMatrix::from_rows(&[[1]])],
        };
        assert!(good.validate(&f).is_valid());
        let bad = CatModule {
            values: vec![PresentedGroup::free(1), PresentedGroup::free(1)],
            ..good
        };
        assert!(!bad.validate(&f).is_valid());
    }

    #[test]
    fn free_evaluations() {
        let f = z2_orbit_category();
        let m = CatModule {
            variance: Variance::Right,
            values: vec![PresentedGroup::free(2), PresentedGroup::free(1)],
            actions: vec![
                IntMatrix::from_rows(&[[0, 1], [1, 0]]),
                IntMatrix::from_rows(&[[1], [1]]),
            ],
        };
        assert!(m.validate(&f).is_valid());
        let b = FreeRightModule {
            anchors: vec![ObjectId(0), ObjectId(1)],
            labels: vec!["x".into(), "y".into()],
        };
        let h = hom_from_free(&b, &m, &f).unwrap();
        assert_eq!(h.group.canonical().to_string(), "Z^3");
        let empty = FreeRightModule {
            anchors: vec![],
            labels: vec![],
        };
        assert!(hom_from_free(&empty, &m, &f)
            .unwrap()
            .group
            .canonical()
            .is_trivial());
        let n = CatModule {
            variance: Variance::Left,
            values: vec![PresentedGroup::free(1), PresentedGroup::cyclic(2)],
            actions: vec![IntMatrix::identity(1), IntMatrix::from_rows(&[[1]])],
        };
        assert_eq!(
            tensor_free(&b, &n, &f)
                .unwrap()
                .group
                .canonical()
                .to_string(),
            "Z + Z/2"
        );
    }
}
