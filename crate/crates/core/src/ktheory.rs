//! Chain contractions, Whitehead torsion representatives and finiteness
//! obstruction representatives over finite categories.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::category::{MorphismWord, ObjectId, PresentedCategory};
use crate::chains::{
    cone, evaluate_at, ChainMap, EvaluatedComplex, FreeChainComplex, ZPiEntry, ZPiMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::{
    homology_of_pair, kernel, lattice_basis, smith_normal_form, solve_with, IntMatrix, Smith,
};

/// A contraction `s_n: C_n -> C_{n+1}` with `ds + sd = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub s: Vec<ZPiMatrix>,
}

struct Evaluations<'a> {
    c: &'a FreeChainComplex,
    cap: usize,
    cache: HashMap<ObjectId, (EvaluatedComplex, Vec<Option<Smith>>)>,
}

impl<'a> Evaluations<'a> {
    fn get(&mut self, p: ObjectId) -> Result<&mut (EvaluatedComplex, Vec<Option<Smith>>)> {
        if !self.cache.contains_key(&p) {
            let e = evaluate_at(self.c, p, self.cap)?;
            let snfs = vec![None; e.d.len() + 1];
            self.cache.insert(p, (e, snfs));
        }
        Ok(self.cache.get_mut(&p).expect("inserted"))
    }
}

/// Finds a contraction degree by degree by solving integer systems at the anchors.
pub fn find_chain_contraction(c: &FreeChainComplex, cap: usize) -> Result<Contraction> {
    let cat = c.category();
    let mut ev = Evaluations {
        c,
        cap,
        cache: HashMap::new(),
    };
    let top = c.degrees();
    let mut s: Vec<ZPiMatrix> = Vec::with_capacity(top);
    for n in 0..top {
        let next: Vec<ObjectId> = if n + 1 < top {
            c.basis(n + 1).to_vec()
        } else {
            Vec::new()
        };
        let mut sn = ZPiMatrix::zeros(c.basis(n).to_vec(), next);
        // Row x of d_n then s_{n-1}.
        let ds = if n >= 1 {
            Some(c.differential(n).then(&s[n - 1])?)
        } else {
            None
        };
        for (x, &p) in c.basis(n).iter().enumerate() {
            let (e, snfs) = ev.get(p)?;
            let mut rhs =
                e.bases[n].coordinates(cat, &[(BigInt::one(), x, MorphismWord::identity(p))])?;
            if let Some(ds) = &ds {
                let mut terms = Vec::new();
                for j in 0..ds.col_count() {
                    for (coef, w) in ds.entry(x, j).terms() {
                        terms.push((coef.clone(), j, w.clone()));
                    }
                }
                let sub = e.bases[n].coordinates(cat, &terms)?;
                for (r, v) in rhs.iter_mut().zip(sub) {
                    *r -= v;
                }
            }
            let obstruction = || {
                let h = homology_of_pair(&e.differential(n), &e.differential(n + 1))
                    .map(|h| h.group.to_string())
                    .unwrap_or_else(|err| err.to_string());
                Error::NotContractible {
                    degree: n,
                    object: cat.object_name(p).to_string(),
                    obstruction: h,
                }
            };
            if n + 1 >= top {
                if rhs.iter().any(|v| !v.is_zero()) {
                    return Err(obstruction());
                }
                continue;
            }
            if snfs[n + 1].is_none() {
                snfs[n + 1] = Some(smith_normal_form(&e.d[n + 1]));
            }
            let v = solve_with(snfs[n + 1].as_ref().expect("set"), &rhs).ok_or_else(obstruction)?;
            for (k, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let (y, m) = &e.bases[n + 1].elements[k];
                sn.add_term(x, *y, coef.clone(), m.clone())?;
            }
        }
        s.push(sn);
    }
    let k = Contraction { s };
    check_contraction(c, &k)?;
    Ok(k)
}

/// Checks `d s + s d = 1` in every degree.
pub fn check_contraction(c: &FreeChainComplex, k: &Contraction) -> Result<()> {
    let cat = c.category();
    let top = c.degrees();
    if k.s.len() != top {
        return Err(Error::ContractionInvalid(format!(
            "{} components for {} degrees",
            k.s.len(),
            top
        )));
    }
    for n in 0..top {
        let mut sum = ZPiMatrix::zeros(c.basis(n).to_vec(), c.basis(n).to_vec());
        if n + 1 < top {
            sum = sum.plus(&k.s[n].then(&c.differential(n + 1))?)?;
        }
        if n >= 1 {
            sum = sum.plus(&c.differential(n).then(&k.s[n - 1])?)?;
        }
        let diff = sum.minus(&ZPiMatrix::identity(c.basis(n).to_vec()))?;
        if !vanishes(cat, &diff)? {
            return Err(Error::ContractionInvalid(format!(
                "ds + sd differs from 1 in degree {n}"
            )));
        }
    }
    Ok(())
}

fn vanishes(cat: &PresentedCategory, m: &ZPiMatrix) -> Result<bool> {
    if cat.has_normal_forms() {
        Ok(m.first_nonzero(cat)?.is_none())
    } else {
        Err(Error::NoNormalForm(
            "exact identities need normal forms".into(),
        ))
    }
}

/// The torsion representative `(d + s): C_odd -> C_even` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionRepresentative {
    pub category: PresentedCategory,
    pub matrix: ZPiMatrix,
    pub inverse: ZPiMatrix,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl TorsionRepresentative {
    /// Checks `M·M⁻¹ = 1` and `M⁻¹·M = 1` exactly.
    pub fn verify(&self) -> Result<bool> {
        let a = self.matrix.then(&self.inverse)?;
        let b = self.inverse.then(&self.matrix)?;
        Ok(vanishes(
            &self.category,
            &a.minus(&ZPiMatrix::identity(a.row_anchors().to_vec()))?,
        )? && vanishes(
            &self.category,
            &b.minus(&ZPiMatrix::identity(b.row_anchors().to_vec()))?,
        )?)
    }

    /// The integer matrix over the one-object quotient.
    pub fn trivial_quotient(&self) -> IntMatrix {
        self.matrix.augmentation()
    }
}

/// Total graded matrix with blocks `(n, n + shift)` taken from `parts[n]`.
fn graded(c: &FreeChainComplex, parts: &[ZPiMatrix], shift: isize) -> Result<ZPiMatrix> {
    let groups: Vec<Vec<ObjectId>> = (0..c.degrees()).map(|n| c.basis(n).to_vec()).collect();
    let mut blocks = Vec::new();
    for (n, m) in parts.iter().enumerate() {
        let k = n as isize + shift;
        if k < 0 || k as usize >= c.degrees() || m.row_count() == 0 || m.col_count() == 0 {
            continue;
        }
        blocks.push((n, k as usize, m));
    }
    ZPiMatrix::from_blocks(&groups, &groups, &blocks)
}

fn parity_indices(c: &FreeChainComplex, odd: bool) -> (Vec<usize>, Vec<String>) {
    let mut idx = Vec::new();
    let mut labels = Vec::new();
    let mut at = 0;
    for n in 0..c.degrees() {
        for l in c.labels(n) {
            if (n % 2 == 1) == odd {
                idx.push(at);
                labels.push(format!("{l}({n})"));
            }
            at += 1;
        }
    }
    (idx, labels)
}

pub fn torsion_of_contractible(
    c: &FreeChainComplex,
    k: &Contraction,
) -> Result<TorsionRepresentative> {
    check_contraction(c, k)?;
    let cat = c.category();
    let diffs: Vec<ZPiMatrix> = (0..c.degrees()).map(|n| c.differential(n)).collect();
    let d = graded(c, &diffs, -1)?;
    let s = graded(c, &k.s, 1)?;
    let ds = d.plus(&s)?;
    // (d + s)^2 = 1 + s^2 with s^2 nilpotent.
    let s2 = s.then_in(&s, cat)?.neg();
    let mut q = ZPiMatrix::identity(d.row_anchors().to_vec());
    let mut power = q.clone();
    for _ in 0..c.degrees() {
        power = power.then_in(&s2, cat)?;
        if power.first_nonzero(cat)?.is_none() {
            break;
        }
        q = q.plus(&power)?;
    }
    let inv_full = q.then_in(&ds, cat)?;
    let (odd, row_labels) = parity_indices(c, true);
    let (even, col_labels) = parity_indices(c, false);
    let rep = TorsionRepresentative {
        category: cat.clone(),
        matrix: ds.select(&odd, &even).normalize(cat)?,
        inverse: inv_full.select(&even, &odd),
        row_labels,
        col_labels,
    };
    if !rep.verify()? {
        return Err(Error::ContractionInvalid("d + s is not invertible".into()));
    }
    Ok(rep)
}

/// Chain homotopy inverse `g` with `gf - 1 = ds + sd` and `fg - 1 = dt + td`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub g: Vec<ZPiMatrix>,
    pub s: Vec<ZPiMatrix>,
    pub t: Vec<ZPiMatrix>,
}

/// Reads `(g, s, t)` off a contraction of the cone of `f: C -> D`.
pub fn certificate_from_cone(
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    k: &Contraction,
) -> EquivalenceCertificate {
    let mut g = Vec::new();
    let mut s = Vec::new();
    let mut t = Vec::new();
    // σ_n has rows [C_{n-1}; D_n] and columns [C_n; D_{n+1}].
    for (n, sigma) in k.s.iter().enumerate() {
        let xr = if n == 0 { 0 } else { c.rank(n - 1) };
        let (yr, xc, yc) = (d.rank(n), c.rank(n), d.rank(n + 1));
        let rows_x: Vec<usize> = (0..xr).collect();
        let rows_y: Vec<usize> = (xr..xr + yr).collect();
        let cols_x: Vec<usize> = (0..xc).collect();
        let cols_y: Vec<usize> = (xc..xc + yc).collect();
        g.push(sigma.select(&rows_y, &cols_x));
        if n >= 1 {
            s.push(sigma.select(&rows_x, &cols_x));
        }
        t.push(sigma.select(&rows_y, &cols_y).neg());
    }
    s.truncate(c.degrees());
    EquivalenceCertificate { g, s, t }
}

/// Verifies the certificate identities exactly; `c` is over the category of `d`.
pub fn verify_certificate(
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    f: &[ZPiMatrix],
    cert: &EquivalenceCertificate,
) -> Result<bool> {
    let cat = d.category();
    let top = c.degrees().max(d.degrees());
    let fm = |n: usize| {
        f.get(n)
            .cloned()
            .unwrap_or_else(|| ZPiMatrix::zeros(c.basis(n).to_vec(), d.basis(n).to_vec()))
    };
    let gm = |n: usize| {
        cert.g
            .get(n)
            .cloned()
            .unwrap_or_else(|| ZPiMatrix::zeros(d.basis(n).to_vec(), c.basis(n).to_vec()))
    };
    let sm = |n: usize| {
        cert.s
            .get(n)
            .cloned()
            .unwrap_or_else(|| ZPiMatrix::zeros(c.basis(n).to_vec(), c.basis(n + 1).to_vec()))
    };
    let tm = |n: usize| {
        cert.t
            .get(n)
            .cloned()
            .unwrap_or_else(|| ZPiMatrix::zeros(d.basis(n).to_vec(), d.basis(n + 1).to_vec()))
    };
    for n in 0..top {
        // g is a chain map.
        if n >= 1 {
            let a = gm(n).then(&c.differential(n))?;
            let b = d.differential(n).then(&gm(n - 1))?;
            if !vanishes(cat, &a.minus(&b)?)? {
                return Ok(false);
            }
        }
        // f then g, minus 1, equals s then d plus d then s.
        let mut lhs = fm(n)
            .then(&gm(n))?
            .minus(&ZPiMatrix::identity(c.basis(n).to_vec()))?;
        lhs = lhs.minus(&sm(n).then(&c.differential(n + 1))?)?;
        if n >= 1 {
            lhs = lhs.minus(&c.differential(n).then(&sm(n - 1))?)?;
        }
        if !vanishes(cat, &lhs)? {
            return Ok(false);
        }
        let mut rhs = gm(n)
            .then(&fm(n))?
            .minus(&ZPiMatrix::identity(d.basis(n).to_vec()))?;
        rhs = rhs.minus(&tm(n).then(&d.differential(n + 1))?)?;
        if n >= 1 {
            rhs = rhs.minus(&d.differential(n).then(&tm(n - 1))?)?;
        }
        if !vanishes(cat, &rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Torsion of the cone of `f`, with the contraction assembled from the certificate.
pub fn torsion_of_equivalence(
    source: &FreeChainComplex,
    target: &FreeChainComplex,
    f: &ChainMap,
    cert: &EquivalenceCertificate,
) -> Result<TorsionRepresentative> {
    let cat = target.category();
    let c = source.push_forward(&f.functor, cat)?;
    if !verify_certificate(&c, target, &f.maps, cert)? {
        return Err(Error::ContractionInvalid(
            "equivalence certificate fails".into(),
        ));
    }
    let k = cone(&c, target, &f.maps)?;
    // σ0 = [[s, 0], [g, -t]] in blocks [X_{n-1}; Y_n] x [X_n; Y_{n+1}].
    let mut sigma0 = Vec::new();
    for n in 0..k.degrees() {
        let rows = [
            if n == 0 {
                Vec::new()
            } else {
                c.basis(n - 1).to_vec()
            },
            target.basis(n).to_vec(),
        ];
        let cols = [c.basis(n).to_vec(), target.basis(n + 1).to_vec()];
        let pick = |v: &[ZPiMatrix], i: usize, r: &Vec<ObjectId>, cl: &Vec<ObjectId>| {
            v.get(i)
                .filter(|m| m.row_anchors() == r.as_slice() && m.col_anchors() == cl.as_slice())
                .cloned()
                .unwrap_or_else(|| ZPiMatrix::zeros(r.clone(), cl.clone()))
        };
        let s = if n == 0 {
            ZPiMatrix::zeros(rows[0].clone(), cols[0].clone())
        } else {
            pick(&cert.s, n - 1, &rows[0], &cols[0])
        };
        let g = pick(&cert.g, n, &rows[1], &cols[0]);
        let t = pick(&cert.t, n, &rows[1], &cols[1]).neg();
        sigma0.push(ZPiMatrix::from_blocks(
            &rows,
            &cols,
            &[(0, 0, &s), (1, 0, &g), (1, 1, &t)],
        )?);
    }
    // φ = dσ0 + σ0 d = 1 + ν with ν² = 0; σ = σ0 ∘ (1 - ν).
    let mut sigma = Vec::new();
    for n in 0..k.degrees() {
        let mut phi = ZPiMatrix::zeros(k.basis(n).to_vec(), k.basis(n).to_vec());
        if n + 1 < k.degrees() {
            phi = phi.plus(&sigma0[n].then(&k.differential(n + 1))?)?;
        }
        if n >= 1 {
            phi = phi.plus(&k.differential(n).then(&sigma0[n - 1])?)?;
        }
        let nu = phi.minus(&ZPiMatrix::identity(k.basis(n).to_vec()))?;
        let corr = ZPiMatrix::identity(k.basis(n).to_vec()).minus(&nu)?;
        sigma.push(corr.then_in(&sigma0[n], cat)?);
    }
    torsion_of_contractible(&k, &Contraction { s: sigma })
}

/// Decided class of a torsion or finiteness representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KClass {
    /// Trivial. The witness is the determinant over the trivial category, the
    /// number of elimination moves otherwise, or the Euler rank (finiteness).
    Trivial { witness: BigInt },
    /// Reduction to trivial units did not finish within the budget.
    Unknown,
    /// Only a representative is available for this category.
    RepresentativeOnly,
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KClass::Trivial { witness } => write!(f, "trivial (witness {witness})"),
            KClass::Unknown => f.write_str("unknown"),
            KClass::RepresentativeOnly => f.write_str("representative-only"),
        }
    }
}

/// True for a category with one object and only its identity.
pub fn is_trivial_category(cat: &PresentedCategory) -> bool {
    cat.object_count() == 1
        && cat.has_normal_forms()
        && cat
            .enumerate_homs(ObjectId(0), ObjectId(0), 1)
            .map(|h| h.len() == 1)
            .unwrap_or(false)
}

/// Over the trivial category the class is decided by the determinant.
pub fn reduce_trivial_pi(t: &TorsionRepresentative) -> KClass {
    if !is_trivial_category(&t.category) {
        return KClass::RepresentativeOnly;
    }
    let m = t.trivial_quotient();
    if !m.is_square() {
        return KClass::Unknown;
    }
    let det = m.det();
    if det.abs().is_one() {
        KClass::Trivial { witness: det }
    } else {
        KClass::Unknown
    }
}

/// Decides the class: by determinant over the trivial category, otherwise
/// by eliminating with trivial-unit pivots for at most `budget` moves.
pub fn decide_torsion(t: &TorsionRepresentative, budget: usize, cap: usize) -> Result<KClass> {
    if is_trivial_category(&t.category) {
        return Ok(reduce_trivial_pi(t));
    }
    let cat = &t.category;
    let mut m = t.matrix.normalize(cat)?;
    let mut moves = 0;
    while m.row_count() > 0 || m.col_count() > 0 {
        if m.row_count() == 0 || m.col_count() == 0 {
            return Ok(KClass::Unknown);
        }
        let Some((pi, pj, w, w_inv, sign)) = find_unit_pivot(cat, &m, cap)? else {
            return Ok(KClass::Unknown);
        };
        // Clear column pj below and above the pivot: row_k -= λ row_pi.
        let mut next = m.clone();
        for k in 0..m.row_count() {
            if k == pi || m.entry(k, pj).is_zero() {
                continue;
            }
            moves += 1;
            if moves > budget {
                return Ok(KClass::Unknown);
            }
            // λ = sign · w⁻¹ ∘ m[k][pj]: a_k -> a_pi.
            let lambda = m
                .entry(k, pj)
                .then(&ZPiEntry::term(sign.clone(), w_inv.clone()))?;
            for l in 0..m.col_count() {
                let delta = lambda.then(m.entry(pi, l))?;
                let mut e = next.entry(k, l).clone();
                e.add(&delta.scaled(&BigInt::from(-1)));
                next.set(k, l, e.normalize(cat)?)?;
            }
        }
        // The pivot row now only needs its other entries cleared by column moves.
        let rows: Vec<usize> = (0..m.row_count()).filter(|&k| k != pi).collect();
        let cols: Vec<usize> = (0..m.col_count()).filter(|&l| l != pj).collect();
        moves += cols.iter().filter(|&&l| !m.entry(pi, l).is_zero()).count();
        if moves > budget {
            return Ok(KClass::Unknown);
        }
        let _ = w;
        m = next.select(&rows, &cols);
    }
    Ok(KClass::Trivial {
        witness: BigInt::from(moves),
    })
}

type Pivot = (usize, usize, MorphismWord, MorphismWord, BigInt);

/// An entry `±w` with `w` invertible.
fn find_unit_pivot(cat: &PresentedCategory, m: &ZPiMatrix, cap: usize) -> Result<Option<Pivot>> {
    for i in 0..m.row_count() {
        for j in 0..m.col_count() {
            let e = m.entry(i, j);
            if e.terms().len() != 1 {
                continue;
            }
            let (c, w) = &e.terms()[0];
            if !c.abs().is_one() {
                continue;
            }
            let back = match cat.enumerate_homs(w.target(), w.source(), cap) {
                Ok(h) => h,
                Err(_) => continue,
            };
            for v in back {
                if cat.normalize(&v.compose(w)?)?.is_identity()
                    && cat.normalize(&w.compose(&v)?)?.is_identity()
                {
                    return Ok(Some((i, j, w.clone(), v, c.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Data `f: Y -> X`, `g: X -> Y`, `h` with `gf - 1 = dh + hd` on `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domination {
    pub y: FreeChainComplex,
    pub x: FreeChainComplex,
    pub f: Vec<ZPiMatrix>,
    pub g: Vec<ZPiMatrix>,
    pub h: Vec<ZPiMatrix>,
}

/// Idempotents whose images represent the finiteness obstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Representative {
    pub category: PresentedCategory,
    /// `idempotents[n]` acts on the degree-`n` module; signs alternate with `n`.
    pub idempotents: Vec<ZPiMatrix>,
    pub class: KClass,
    /// Over the trivial category: per degree a unimodular `[image | kernel]` basis.
    pub witnesses: Vec<IntMatrix>,
    pub ranks: Vec<usize>,
}

fn map_or_zero(v: &[ZPiMatrix], n: usize, rows: &[ObjectId], cols: &[ObjectId]) -> ZPiMatrix {
    v.get(n)
        .cloned()
        .unwrap_or_else(|| ZPiMatrix::zeros(rows.to_vec(), cols.to_vec()))
}

pub fn finiteness_obstruction(dom: &Domination) -> Result<K0Representative> {
    let (y, x) = (&dom.y, &dom.x);
    let cat = y.category();
    let top = y.degrees().max(x.degrees()) + 1;
    let f = |n: usize| map_or_zero(&dom.f, n, y.basis(n), x.basis(n));
    let g = |n: usize| map_or_zero(&dom.g, n, x.basis(n), y.basis(n));
    let h = |n: usize| map_or_zero(&dom.h, n, y.basis(n), y.basis(n + 1));
    let bad = |why: String| Error::NotADomination(why);
    for n in 1..top {
        if !vanishes(
            cat,
            &y.differential(n)
                .then(&f(n - 1))?
                .minus(&f(n).then(&x.differential(n))?)?,
        )? {
            return Err(bad(format!("f is not a chain map in degree {n}")));
        }
        if !vanishes(
            cat,
            &x.differential(n)
                .then(&g(n - 1))?
                .minus(&g(n).then(&y.differential(n))?)?,
        )? {
            return Err(bad(format!("g is not a chain map in degree {n}")));
        }
    }
    let mut strict = true;
    for n in 0..top {
        let gf = f(n)
            .then(&g(n))?
            .minus(&ZPiMatrix::identity(y.basis(n).to_vec()))?;
        let mut homotopy = h(n).then(&y.differential(n + 1))?;
        if n >= 1 {
            homotopy = homotopy.plus(&y.differential(n).then(&h(n - 1))?)?;
        }
        if !vanishes(cat, &gf.minus(&homotopy)?)? {
            return Err(bad(format!("gf - 1 differs from dh + hd in degree {n}")));
        }
        strict &= vanishes(cat, &gf)?;
    }

    let idempotents: Vec<ZPiMatrix> = if strict {
        (0..x.degrees())
            .map(|n| g(n).then_in(&f(n), cat))
            .collect::<Result<_>>()?
    } else {
        // Mapping cylinder Y_n ⊕ Y_{n-1} ⊕ X_n; e(a, b, c) = (a - hb + gc, 0, 0).
        (0..top)
            .map(|n| {
                let yb = y.basis(n).to_vec();
                let yb1 = if n == 0 {
                    Vec::new()
                } else {
                    y.basis(n - 1).to_vec()
                };
                let xb = x.basis(n).to_vec();
                let groups = [yb.clone(), yb1.clone(), xb.clone()];
                let one = ZPiMatrix::identity(yb.clone());
                let minus_h = if n == 0 {
                    ZPiMatrix::zeros(yb1.clone(), yb.clone())
                } else {
                    h(n - 1).neg()
                };
                let gn = g(n);
                ZPiMatrix::from_blocks(
                    &groups,
                    &groups,
                    &[(0, 0, &one), (1, 0, &minus_h), (2, 0, &gn)],
                )
            })
            .collect::<Result<_>>()?
    };
    for (n, e) in idempotents.iter().enumerate() {
        if !vanishes(cat, &e.then(e)?.minus(e)?)? {
            return Err(bad(format!(
                "the splitting is not idempotent in degree {n}"
            )));
        }
    }

    let mut witnesses = Vec::new();
    let mut ranks = Vec::new();
    let class = if is_trivial_category(cat) {
        let mut euler = BigInt::zero();
        for (n, e) in idempotents.iter().enumerate() {
            let a = e.augmentation().transpose();
            let image = lattice_basis(&a);
            let ker = kernel(&a);
            let w = image.hstack(&ker);
            let ok = w.is_square()
                && w.det().abs().is_one()
                && (&a * &image) == image
                && (&a * &ker).is_zero();
            if !ok {
                return Err(bad(format!("no free splitting in degree {n}")));
            }
            let r = image.cols();
            euler += if n % 2 == 0 {
                BigInt::from(r)
            } else {
                -BigInt::from(r)
            };
            ranks.push(r);
            witnesses.push(w);
        }
        KClass::Trivial { witness: euler }
    } else {
        KClass::RepresentativeOnly
    };
    Ok(K0Representative {
        category: cat.clone(),
        idempotents,
        class,
        witnesses,
        ranks,
    })
}

/// One sample for the torsion algebra check: composable equivalences `f: X -> Y`, `g: Y -> Z`.
#[derive(Clone, Debug)]
pub struct TorsionSample {
    pub x: FreeChainComplex,
    pub y: FreeChainComplex,
    pub z: FreeChainComplex,
    pub f: ChainMap,
    pub g: ChainMap,
}

/// Determinants found for one sample and whether the identities hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionAlgebraLine {
    pub det_f: BigInt,
    pub det_g: BigInt,
    pub det_gf: BigInt,
    pub det_sum: BigInt,
    pub derivation: bool,
    pub addition: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorsionAlgebraReport {
    pub lines: Vec<TorsionAlgebraLine>,
    pub failures: Vec<String>,
}

impl TorsionAlgebraReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Determinant of the torsion of an equivalence over the trivial category.
pub fn torsion_determinant(
    source: &FreeChainComplex,
    target: &FreeChainComplex,
    f: &ChainMap,
    cap: usize,
) -> Result<BigInt> {
    let c = source.push_forward(&f.functor, target.category())?;
    let k = cone(&c, target, &f.maps)?;
    let contraction = find_chain_contraction(&k, cap)?;
    let cert = certificate_from_cone(&c, target, &contraction);
    let t = torsion_of_equivalence(source, target, f, &cert)?;
    let m = t.trivial_quotient();
    if !m.is_square() {
        return Err(Error::Dimension("torsion matrix is not square".into()));
    }
    Ok(m.det())
}

/// Direct sum of two complexes over the same category.
pub fn direct_sum(a: &FreeChainComplex, b: &FreeChainComplex) -> Result<FreeChainComplex> {
    let top = a.degrees().max(b.degrees());
    let mut bases = Vec::new();
    let mut labels = Vec::new();
    for n in 0..top {
        bases.push([a.basis(n), b.basis(n)].concat());
        let mut l: Vec<String> = a.labels(n).iter().map(|s| format!("{s}.0")).collect();
        l.extend(b.labels(n).iter().map(|s| format!("{s}.1")));
        labels.push(l);
    }
    let mut d = Vec::new();
    for n in 1..top {
        let rows = [a.basis(n).to_vec(), b.basis(n).to_vec()];
        let cols = [a.basis(n - 1).to_vec(), b.basis(n - 1).to_vec()];
        let da = a.differential(n);
        let db = b.differential(n);
        let da = if da.row_count() == rows[0].len() && da.col_count() == cols[0].len() {
            da
        } else {
            ZPiMatrix::zeros(rows[0].clone(), cols[0].clone())
        };
        let db = if db.row_count() == rows[1].len() && db.col_count() == cols[1].len() {
            db
        } else {
            ZPiMatrix::zeros(rows[1].clone(), cols[1].clone())
        };
        d.push(ZPiMatrix::from_blocks(
            &rows,
            &cols,
            &[(0, 0, &da), (1, 1, &db)],
        )?);
    }
    FreeChainComplex::new(a.category().clone(), bases, labels, d)
}

/// Direct sum of two chain maps over identity functors.
pub fn direct_sum_map(
    f: &ChainMap,
    g: &ChainMap,
    a: (&FreeChainComplex, &FreeChainComplex),
    b: (&FreeChainComplex, &FreeChainComplex),
) -> Result<ChainMap> {
    let top = a.0.degrees().max(b.0.degrees());
    let mut maps = Vec::new();
    for n in 0..top {
        let rows = [a.0.basis(n).to_vec(), b.0.basis(n).to_vec()];
        let cols = [a.1.basis(n).to_vec(), b.1.basis(n).to_vec()];
        let fa = map_or_zero(&f.maps, n, &rows[0], &cols[0]);
        let gb = map_or_zero(&g.maps, n, &rows[1], &cols[1]);
        maps.push(ZPiMatrix::from_blocks(
            &rows,
            &cols,
            &[(0, 0, &fa), (1, 1, &gb)],
        )?);
    }
    Ok(ChainMap {
        functor: f.functor.clone(),
        maps,
    })
}

/// Checks `det τ(gf) = ±det τ(g)·det τ(f)` and `det τ(f ⊕ g) = ±det τ(f)·det τ(g)`.
pub fn check_torsion_algebra(
    samples: &[TorsionSample],
    cap: usize,
) -> Result<TorsionAlgebraReport> {
    let mut report = TorsionAlgebraReport::default();
    for (k, s) in samples.iter().enumerate() {
        if !is_trivial_category(s.x.category()) {
            report
                .failures
                .push(format!("sample {k}: not over the trivial category"));
            continue;
        }
        let cat = s.z.category();
        let det_f = torsion_determinant(&s.x, &s.y, &s.f, cap)?;
        let det_g = torsion_determinant(&s.y, &s.z, &s.g, cap)?;
        let gf = s.f.then(&s.g, cat)?;
        let det_gf = torsion_determinant(&s.x, &s.z, &gf, cap)?;
        let sum_src = direct_sum(&s.x, &s.y)?;
        let sum_tgt = direct_sum(&s.y, &s.z)?;
        let sum = direct_sum_map(&s.f, &s.g, (&s.x, &s.y), (&s.y, &s.z))?;
        let det_sum = torsion_determinant(&sum_src, &sum_tgt, &sum, cap)?;
        let prod = &det_f * &det_g;
        let derivation = det_gf.abs() == prod.abs();
        let addition = det_sum.abs() == prod.abs();
        if !derivation {
            report.failures.push(format!(
                "sample {k}: det τ(gf) = {det_gf}, det τ(g)·det τ(f) = {prod}"
            ));
        }
        if !addition {
            report.failures.push(format!(
                "sample {k}: det τ(f ⊕ g) = {det_sum}, product = {prod}"
            ));
        }
        report.lines.push(TorsionAlgebraLine {
            det_f,
            det_g,
            det_gf,
            det_sum,
            derivation,
            addition,
        });
    }
    Ok(report)
}
