//! Homology and cohomology with coefficients, total homology over a finite
//! fundamental category, Euler characteristics and the chain-level
//! Whitehead criteria.

use std::fmt;

use crate::category::{GenId, ObjectId};
use crate::chains::{
    cone, evaluate_at, evaluate_matrix, restriction, ChainMap, EvaluatedBasis, FreeChainComplex,
};
use crate::error::{Error, Result};
use crate::ktheory::{
    certificate_from_cone, find_chain_contraction, verify_certificate, EquivalenceCertificate,
};
use crate::linalg::{
    homology_of_pair, homology_presented, induced_map, is_isomorphism, reduce_columns, AbGroup,
    HomologyGroup, IntMatrix, PresentedGroup,
};
use crate::module::{CatModule, Variance};

/// Relations of `⊕ M(anchor)` over a list of anchors.
pub fn module_relations(m: &CatModule, anchors: &[ObjectId]) -> IntMatrix {
    PresentedGroup::direct_sum_all(anchors.iter().map(|o| &m.values[o.0])).relations
}

/// One group per degree, `0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub variance: Variance,
    pub groups: Vec<AbGroup>,
}

impl HomologyTable {
    pub fn group(&self, n: usize) -> AbGroup {
        self.groups.get(n).cloned().unwrap_or_default()
    }

    pub fn symbol(&self) -> &'static str {
        match self.variance {
            Variance::Left => "H_",
            Variance::Right => "H^",
        }
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, g) in self.groups.iter().enumerate() {
            writeln!(f, "{}{} = {}", self.symbol(), n, g)?;
        }
        Ok(())
    }
}

/// Per-degree homology groups of `C ⊗ N` with their tracked bases.
pub fn homology_groups(c: &FreeChainComplex, n: &CatModule) -> Result<Vec<HomologyGroup>> {
    let maps = c.tensor(n)?;
    let top = c.degrees();
    let mut out = Vec::with_capacity(top);
    for k in 0..top {
        let d_out = &maps[k];
        let d_in = if k + 1 < top {
            maps[k + 1].clone()
        } else {
            IntMatrix::zeros(d_out.cols(), 0)
        };
        let rel_here = module_relations(n, c.basis(k));
        let rel_out = if k == 0 {
            IntMatrix::zeros(0, 0)
        } else {
            module_relations(n, c.basis(k - 1))
        };
        out.push(homology_presented(d_out, &d_in, &rel_here, &rel_out));
    }
    Ok(out)
}

/// `H_*(C ⊗ N)` for a left module `N`.
pub fn homology(c: &FreeChainComplex, n: &CatModule) -> Result<HomologyTable> {
    if n.variance != Variance::Left {
        return Err(Error::InvalidModule("homology takes a left module".into()));
    }
    Ok(HomologyTable {
        variance: Variance::Left,
        groups: homology_groups(c, n)?
            .into_iter()
            .map(|h| h.group)
            .collect(),
    })
}

/// `H^*(hom(C, M))` for a right module `M`.
pub fn cohomology(c: &FreeChainComplex, m: &CatModule) -> Result<HomologyTable> {
    if m.variance != Variance::Right {
        return Err(Error::InvalidModule(
            "cohomology takes a right module".into(),
        ));
    }
    let maps = c.hom(m)?;
    let top = c.degrees();
    let mut groups = Vec::with_capacity(top);
    for k in 0..top {
        let here = module_relations(m, c.basis(k));
        let d_out = if k + 1 < top {
            maps[k + 1].clone()
        } else {
            IntMatrix::zeros(0, here.rows())
        };
        let d_in = &maps[k];
        let rel_out = if k + 1 < top {
            module_relations(m, c.basis(k + 1))
        } else {
            IntMatrix::zeros(0, 0)
        };
        groups.push(homology_presented(&d_out, d_in, &here, &rel_out).group);
    }
    Ok(HomologyTable {
        variance: Variance::Right,
        groups,
    })
}

/// Total homology: per degree a right module over the category of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleValuedHomology {
    pub objects: Vec<String>,
    pub generators: Vec<String>,
    pub degrees: Vec<CatModule>,
}

impl ModuleValuedHomology {
    pub fn value(&self, n: usize, o: ObjectId) -> AbGroup {
        self.degrees[n].values[o.0].canonical()
    }
}

impl fmt::Display for ModuleValuedHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, m) in self.degrees.iter().enumerate() {
            for (o, name) in self.objects.iter().enumerate() {
                writeln!(f, "H_{n}({name}) = {}", m.values[o].canonical())?;
            }
        }
        Ok(())
    }
}

/// Homology of the evaluated complexes at every object, with induced actions.
pub fn total_homology(c: &FreeChainComplex, cap: usize) -> Result<ModuleValuedHomology> {
    let cat = c.category();
    let evaluated = cat
        .object_ids()
        .map(|p| evaluate_at(c, p, cap))
        .collect::<Result<Vec<_>>>()?;
    let top = c.degrees();
    let mut groups: Vec<Vec<HomologyGroup>> = Vec::with_capacity(evaluated.len());
    for e in &evaluated {
        let mut hs = Vec::with_capacity(top);
        for n in 0..top {
            hs.push(homology_of_pair(
                &e.differential(n),
                &e.differential(n + 1),
            )?);
        }
        groups.push(hs);
    }
    let mut degrees = Vec::with_capacity(top);
    for n in 0..top {
        let values: Vec<PresentedGroup> = groups
            .iter()
            .map(|hs| PresentedGroup::from(&hs[n].group))
            .collect();
        let mut actions = Vec::with_capacity(cat.generator_count());
        for g in 0..cat.generator_count() {
            let gen = cat.generator(GenId(g));
            let (p, q) = (gen.source, gen.target);
            let r = restriction(
                cat,
                &cat.gen_word(GenId(g)),
                &evaluated[q.0].bases[n],
                &evaluated[p.0].bases[n],
            )?;
            let mut m = induced_map(&groups[q.0][n], &groups[p.0][n], &r)?;
            reduce_columns(&mut m, &groups[p.0][n].group);
            actions.push(m);
        }
        degrees.push(CatModule {
            variance: Variance::Right,
            values,
            actions,
        });
    }
    Ok(ModuleValuedHomology {
        objects: cat
            .object_ids()
            .map(|o| cat.object_name(o).to_string())
            .collect(),
        generators: cat.generators().iter().map(|g| g.name.clone()).collect(),
        degrees,
    })
}

/// Alternating sums of chain ranks and homology ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub chains: i64,
    pub homology: i64,
}

impl fmt::Display for EulerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi(chains) = {}, chi(homology) = {}",
            self.chains, self.homology
        )
    }
}

pub fn euler_characteristics(c: &FreeChainComplex, n: &CatModule) -> Result<EulerReport> {
    let h = homology(c, n)?;
    let mut chains = 0i64;
    let mut hom = 0i64;
    for k in 0..c.degrees() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let group =
            PresentedGroup::direct_sum_all(c.basis(k).iter().map(|o| &n.values[o.0])).canonical();
        chains += sign * group.rank as i64;
        hom += sign * h.group(k).rank as i64;
    }
    Ok(EulerReport {
        chains,
        homology: hom,
    })
}

/// Outcome of the Whitehead criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhiteheadStatus {
    Equivalence,
    NotEquivalence(String),
    /// Every supplied module sees an isomorphism; nothing more is decidable here.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadVerdict {
    pub status: WhiteheadStatus,
    /// One line per object or module checked.
    pub checks: Vec<String>,
    pub certificate: Option<EquivalenceCertificate>,
}

impl fmt::Display for WhiteheadVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.checks {
            writeln!(f, "{l}")?;
        }
        match &self.status {
            WhiteheadStatus::Equivalence => write!(
                f,
                "equivalence{}",
                if self.certificate.is_some() {
                    " (certificate verified)"
                } else {
                    ""
                }
            ),
            WhiteheadStatus::NotEquivalence(why) => write!(f, "not an equivalence: {why}"),
            WhiteheadStatus::Partial => write!(f, "partial: isomorphic on every tested module"),
        }
    }
}

/// Decides whether `f: source -> target` is a chain homotopy equivalence.
///
/// Over a finite category the induced maps on evaluated homology are tested
/// at every object and a certificate `(g, s, t)` is built from a contraction
/// of the cone. Otherwise the supplied left modules over the target category
/// are used; a failing module decides the answer, passing ones give `Partial`.
pub fn whitehead_check(
    source: &FreeChainComplex,
    target: &FreeChainComplex,
    f: &ChainMap,
    modules: &[CatModule],
    cap: usize,
) -> Result<WhiteheadVerdict> {
    let cat = target.category();
    let c = source.push_forward(&f.functor, cat)?;
    match finite_check(&c, target, f, cap) {
        Ok(v) => return Ok(v),
        Err(Error::InfiniteFundamentalCategory(why)) => {
            if modules.is_empty() {
                return Err(Error::Undecidable(format!(
                    "the fundamental category is not finite ({why}) and no test modules were given"
                )));
            }
        }
        Err(e) => return Err(e),
    }
    let mut checks = Vec::new();
    for (k, n) in modules.iter().enumerate() {
        let hs = homology_groups(&c, n)?;
        let ht = homology_groups(target, n)?;
        for deg in 0..hs.len().max(ht.len()) {
            let (a, b) = match (hs.get(deg), ht.get(deg)) {
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) if a.group.is_trivial() => continue,
                (None, Some(b)) if b.group.is_trivial() => continue,
                _ => {
                    return Ok(WhiteheadVerdict {
                        status: WhiteheadStatus::NotEquivalence(format!(
                            "module {k}: degree {deg} differs"
                        )),
                        checks,
                        certificate: None,
                    })
                }
            };
            let m = induced_map(a, b, &f.tensor(deg, n)?)?;
            let iso = is_isomorphism(&m, &a.group, &b.group);
            checks.push(format!(
                "module {k}, degree {deg}: {} -> {} {}",
                a.group,
                b.group,
                if iso { "iso" } else { "not iso" }
            ));
            if !iso {
                return Ok(WhiteheadVerdict {
                    status: WhiteheadStatus::NotEquivalence(format!(
                        "module {k}: H_{deg} map is not an isomorphism"
                    )),
                    checks,
                    certificate: None,
                });
            }
        }
    }
    Ok(WhiteheadVerdict {
        status: WhiteheadStatus::Partial,
        checks,
        certificate: None,
    })
}

fn finite_check(
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    f: &ChainMap,
    cap: usize,
) -> Result<WhiteheadVerdict> {
    let cat = d.category();
    let top = c.degrees().max(d.degrees());
    let mut checks = Vec::new();
    let mut failure = None;
    for p in cat.object_ids() {
        let ec = evaluate_at(c, p, cap)?;
        let ed = evaluate_at(d, p, cap)?;
        for n in 0..top {
            let hc = homology_of_pair(&ec.differential(n), &ec.differential(n + 1))?;
            let hd = homology_of_pair(&ed.differential(n), &ed.differential(n + 1))?;
            let empty = |_: usize| EvaluatedBasis::new(cat, &[], p, cap);
            let src = ec
                .bases
                .get(n)
                .cloned()
                .map(Ok)
                .unwrap_or_else(|| empty(n))?;
            let tgt = ed
                .bases
                .get(n)
                .cloned()
                .map(Ok)
                .unwrap_or_else(|| empty(n))?;
            let m = match f.maps.get(n) {
                Some(fm) => evaluate_matrix(cat, fm, &src, &tgt)?,
                None => IntMatrix::zeros(tgt.len(), src.len()),
            };
            let induced = induced_map(&hc, &hd, &m)?;
            let iso = is_isomorphism(&induced, &hc.group, &hd.group);
            checks.push(format!(
                "{}: H_{n} {} -> {} {}",
                cat.object_name(p),
                hc.group,
                hd.group,
                if iso { "iso" } else { "not iso" }
            ));
            if !iso && failure.is_none() {
                failure = Some(format!(
                    "H_{n} at {} is not mapped isomorphically",
                    cat.object_name(p)
                ));
            }
        }
    }
    if let Some(why) = failure {
        return Ok(WhiteheadVerdict {
            status: WhiteheadStatus::NotEquivalence(why),
            checks,
            certificate: None,
        });
    }
    if !cat.has_normal_forms() {
        return Ok(WhiteheadVerdict {
            status: WhiteheadStatus::Partial,
            checks,
            certificate: None,
        });
    }
    let k = cone(c, d, &f.maps)?;
    let contraction = find_chain_contraction(&k, cap)?;
    let cert = certificate_from_cone(c, d, &contraction);
    if !verify_certificate(c, d, &f.maps, &cert)? {
        return Err(Error::ContractionInvalid(
            "certificate read off the cone fails".into(),
        ));
    }
    Ok(WhiteheadVerdict {
        status: WhiteheadStatus::Equivalence,
        checks,
        certificate: Some(cert),
    })
}
