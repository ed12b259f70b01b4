//! Orbit categories of finite groups.

use std::collections::{BTreeSet, HashMap};

use super::{CategorySpec, PresentedCategory, TableSpec};
use crate::error::{Error, Result};

/// Parses a multiplication table: rows separated by `;` or newlines,
/// entries by whitespace or `,`. Entry `(i, j)` is the product `g_i g_j`.
pub fn parse_group_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for (k, row) in text.split([';', '\n']).enumerate() {
        let row = row.trim();
        if row.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<usize>, _> = row
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect();
        rows.push(parsed.map_err(|e| Error::Parse {
            file: "<group table>".into(),
            line: k + 1,
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}

struct Group<'a> {
    table: &'a [Vec<usize>],
    unit: usize,
}

impl<'a> Group<'a> {
    fn new(table: &'a [Vec<usize>]) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Error::Validation(format!("group table: {m}"));
        if n == 0
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(bad("must be a square table with entries below its size"));
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| bad("no identity element"))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == unit) {
                return Err(bad(&format!("element {x} has no inverse")));
            }
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(bad(&format!("not associative on ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(Group { table, unit })
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    fn inv(&self, a: usize) -> usize {
        (0..self.table.len())
            .find(|&b| self.table[a][b] == self.unit)
            .expect("checked")
    }

    /// Left coset `gK`, as a sorted set.
    fn coset(&self, g: usize, k: &BTreeSet<usize>) -> BTreeSet<usize> {
        k.iter().map(|&x| self.mul(g, x)).collect()
    }
}

/// The orbit category of a finite group restricted to the given subgroups.
///
/// Objects are `G/H`; morphisms `G/H -> G/K` are the cosets `gK` with
/// `g⁻¹Hg ⊆ K`, acting by `xH ↦ xgK`. Every non-identity morphism is a
/// generator named `m<i>_<j>_<g>` (with `g` the least coset element), and
/// the full composition table is attached.
pub fn orbit_category(table: &[Vec<usize>], subgroups: &[Vec<usize>]) -> Result<PresentedCategory> {
    let g = Group::new(table)?;
    let n = table.len();
    let subs: Vec<BTreeSet<usize>> = subgroups
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    for (i, s) in subs.iter().enumerate() {
        let closed = s.contains(&g.unit)
            && s.iter()
                .all(|&a| s.contains(&g.inv(a)) && s.iter().all(|&b| s.contains(&g.mul(a, b))));
        if !closed || s.iter().any(|&x| x >= n) {
            return Err(Error::Validation(format!("subgroup {i} is not a subgroup")));
        }
    }
    let mut names: Vec<String> = Vec::new();
    for (i, s) in subs.iter().enumerate() {
        let candidate = if s.len() == 1 {
            "G/e".to_string()
        } else if s.len() == n {
            "G/G".to_string()
        } else {
            format!("G/H{i}")
        };
        names.push(if names.contains(&candidate) {
            format!("G/H{i}")
        } else {
            candidate
        });
    }

    // Morphisms as (i, j, coset).
    let mut morphisms: Vec<(usize, usize, BTreeSet<usize>)> = Vec::new();
    for (i, h) in subs.iter().enumerate() {
        for (j, k) in subs.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for x in 0..n {
                let c = g.coset(x, k);
                if !seen.insert(c.clone()) {
                    continue;
                }
                let xi = g.inv(x);
                if h.iter().all(|&y| k.contains(&g.mul(g.mul(xi, y), x))) {
                    morphisms.push((i, j, c));
                }
            }
        }
    }
    let is_identity = |m: &(usize, usize, BTreeSet<usize>)| m.0 == m.1 && m.2 == subs[m.0];
    let elem_name = |m: &(usize, usize, BTreeSet<usize>)| {
        if is_identity(m) {
            format!("id_{}", m.0)
        } else {
            format!(
                "m{}_{}_{}",
                m.0,
                m.1,
                m.2.iter().next().expect("nonempty coset")
            )
        }
    };
    let index: HashMap<(usize, usize, BTreeSet<usize>), usize> = morphisms
        .iter()
        .cloned()
        .enumerate()
        .map(|(e, m)| (m, e))
        .collect();

    let mut spec = CategorySpec {
        objects: names.clone(),
        ..CategorySpec::default()
    };
    let mut tables = TableSpec::default();
    for m in &morphisms {
        let name = elem_name(m);
        tables
            .elements
            .push((name.clone(), names[m.0].clone(), names[m.1].clone()));
        if is_identity(m) {
            tables.identities.push((names[m.0].clone(), name));
        } else {
            spec.generators
                .push((name.clone(), names[m.0].clone(), names[m.1].clone()));
            tables.values.push((name.clone(), name));
        }
    }
    // (g'L : K -> L) ∘ (gK : H -> K) = gg'L.
    for second in &morphisms {
        for first in &morphisms {
            if first.1 != second.0 {
                continue;
            }
            let a = *first.2.iter().next().expect("nonempty");
            let b = *second.2.iter().next().expect("nonempty");
            let c = g.coset(g.mul(a, b), &subs[second.1]);
            let prod = &morphisms[index[&(first.0, second.1, c)]];
            tables
                .compose
                .push((elem_name(second), elem_name(first), elem_name(prod)));
        }
    }
    spec.tables = Some(tables);
    PresentedCategory::from_spec(&spec)
}

/// The orbit category of `Z/2` with objects `G/e`, `G/G`, the swap
/// `t: G/e -> G/e` and the projection `p: G/e -> G/G`.
pub fn z2_orbit_category() -> PresentedCategory {
    let s = |x: &str| x.to_string();
    let spec = CategorySpec {
        objects: vec![s("G/e"), s("G/G")],
        generators: vec![(s("t"), s("G/e"), s("G/e")), (s("p"), s("G/e"), s("G/G"))],
        relations: vec![(s("t.t"), s("id")), (s("p.t"), s("p"))],
        tracks: Vec::new(),
        tables: Some(TableSpec {
            elements: vec![
                (s("1e"), s("G/e"), s("G/e")),
                (s("t"), s("G/e"), s("G/e")),
                (s("p"), s("G/e"), s("G/G")),
                (s("1G"), s("G/G"), s("G/G")),
            ],
            identities: vec![(s("G/e"), s("1e")), (s("G/G"), s("1G"))],
            values: vec![(s("t"), s("t")), (s("p"), s("p"))],
            compose: vec![
                (s("1e"), s("1e"), s("1e")),
                (s("1e"), s("t"), s("t")),
                (s("t"), s("1e"), s("t")),
                (s("t"), s("t"), s("1e")),
                (s("p"), s("1e"), s("p")),
                (s("p"), s("t"), s("p")),
                (s("1G"), s("p"), s("p")),
                (s("1G"), s("1G"), s("1G")),
            ],
        }),
    };
    PresentedCategory::from_spec(&spec).expect("the Z/2 orbit category is valid")
}
