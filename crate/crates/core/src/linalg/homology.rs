//! Homology of complexes of finitely presented abelian groups, with
//! tracked bases so that chain maps induce explicit matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::smith::{kernel, lattice_basis, smith_normal_form, solve_with, Smith};
use super::{AbGroup, IntMatrix};
use crate::error::{Error, Result};

/// One homology group `ker / im` with enough bookkeeping to express
/// cycles in canonical coordinates.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub group: AbGroup,
    ambient: usize,
    /// Lattice basis of the cycles, as columns (`ambient x m`).
    cycles: IntMatrix,
    cycles_snf: Smith,
    /// Base change on cycle coordinates diagonalising the boundaries.
    change: IntMatrix,
    change_inv: IntMatrix,
    /// Indices (into cycle coordinates after base change) of free and torsion generators.
    free_idx: Vec<usize>,
    torsion_idx: Vec<usize>,
}

impl HomologyGroup {
    /// Dimension of the chain group this homology lives in.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Cycle representatives of the canonical generators (free first, then torsion).
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.free_idx
            .iter()
            .chain(&self.torsion_idx)
            .map(|&i| self.cycles.mul_vec(&self.change_inv.column(i)))
            .collect()
    }

    /// Canonical coordinates of a cycle, torsion parts reduced. `None` if `z` is not a cycle.
    pub fn coordinates(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.cycles.cols() == 0 {
            return z.iter().all(Zero::is_zero).then(Vec::new);
        }
        let y = solve_with(&self.cycles_snf, z)?;
        let c = self.change.mul_vec(&y);
        let mut out: Vec<BigInt> = self
            .free_idx
            .iter()
            .chain(&self.torsion_idx)
            .map(|&i| c[i].clone())
            .collect();
        self.group.reduce(&mut out);
        Some(out)
    }

    /// True when `z` is a cycle representing zero.
    pub fn is_boundary(&self, z: &[BigInt]) -> bool {
        self.coordinates(z)
            .is_some_and(|c| c.iter().all(Zero::is_zero))
    }
}

/// Homology at a spot of a complex of presented groups
///
/// ```text
///   C_{n+1} --d_in--> C_n --d_out--> C_{n-1}
/// ```
///
/// where `C_n = Z^k / im(rel_here)` and `C_{n-1} = Z^{k'} / im(rel_out)`.
/// Maps are given on free generators and must respect the relations.
pub fn homology_presented(
    d_out: &IntMatrix,
    d_in: &IntMatrix,
    rel_here: &IntMatrix,
    rel_out: &IntMatrix,
) -> HomologyGroup {
    let k = d_out.cols();
    assert_eq!(d_in.rows(), k, "d_in lands in the wrong group");
    assert_eq!(rel_here.rows(), k, "relations of C_n have wrong height");
    assert_eq!(
        rel_out.rows(),
        d_out.rows(),
        "relations of C_n-1 have wrong height"
    );

    // Cycles: x with d_out x in im(rel_out).
    let cycles = if rel_out.cols() == 0 {
        kernel(d_out)
    } else {
        let ker = kernel(&d_out.hstack(rel_out));
        let projected = ker.block(0, 0, k, ker.cols());
        lattice_basis(&projected)
    };
    let m = cycles.cols();
    let cycles_snf = smith_normal_form(&cycles);

    // Boundaries (plus relations of C_n) in cycle coordinates.
    let bounds = d_in.hstack(rel_here);
    let mut coords = Vec::with_capacity(bounds.cols());
    for j in 0..bounds.cols() {
        let col = bounds.column(j);
        let y = if m == 0 {
            Vec::new()
        } else {
            solve_with(&cycles_snf, &col)
                .expect("boundary is not a cycle: d_out * d_in must vanish")
        };
        coords.push(y);
    }
    let y = IntMatrix::from_columns(m, &coords);
    let snf = smith_normal_form(&y);

    let mut free_idx = Vec::new();
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..m {
        if i < snf.rank {
            let d = &snf.s[(i, i)];
            if d > &BigInt::from(1) {
                torsion_idx.push(i);
                torsion.push(d.clone());
            }
        } else {
            free_idx.push(i);
        }
    }
    let group = AbGroup {
        rank: free_idx.len(),
        torsion,
    };
    HomologyGroup {
        group,
        ambient: k,
        cycles,
        cycles_snf,
        change: snf.u,
        change_inv: snf.u_inv,
        free_idx,
        torsion_idx,
    }
}

/// Homology `ker(d_out) / im(d_in)` of free abelian groups.
pub fn homology_of_pair(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<HomologyGroup> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::Dimension(format!(
            "d_out is {:?} but d_in is {:?}",
            d_out.shape(),
            d_in.shape()
        )));
    }
    if !(d_out * d_in).is_zero() {
        return Err(Error::NotAComplex("d_out * d_in is nonzero".into()));
    }
    Ok(homology_presented(
        d_out,
        d_in,
        &IntMatrix::zeros(d_out.cols(), 0),
        &IntMatrix::zeros(d_out.rows(), 0),
    ))
}

/// Matrix of the map induced on homology by `f`, in canonical coordinates.
///
/// `f` maps the chain group of `source` to that of `target`; it must send
/// cycles to cycles.
pub fn induced_map(
    source: &HomologyGroup,
    target: &HomologyGroup,
    f: &IntMatrix,
) -> Result<IntMatrix> {
    if f.shape() != (target.ambient, source.ambient) {
        return Err(Error::Dimension(format!(
            "map is {:?}, expected {}x{}",
            f.shape(),
            target.ambient,
            source.ambient
        )));
    }
    let cols: Option<Vec<Vec<BigInt>>> = source
        .generators()
        .iter()
        .map(|z| target.coordinates(&f.mul_vec(z)))
        .collect();
    let cols = cols.ok_or_else(|| Error::NotAChainMap {
        degree: 0,
        reason: "a cycle is sent to a non-cycle".into(),
    })?;
    Ok(IntMatrix::from_columns(
        target.group.generator_count(),
        &cols,
    ))
}

/// Kernel of a map between canonical groups, given in canonical coordinates.
pub fn map_kernel(map: &IntMatrix, source: &AbGroup, target: &AbGroup) -> AbGroup {
    homology_presented(
        map,
        &IntMatrix::zeros(source.generator_count(), 0),
        &source.relation_matrix(),
        &target.relation_matrix(),
    )
    .group
}

/// Cokernel of a map between canonical groups, given in canonical coordinates.
pub fn map_cokernel(map: &IntMatrix, target: &AbGroup) -> AbGroup {
    let rel = map.hstack(&target.relation_matrix());
    let snf = smith_normal_form(&rel);
    AbGroup::from_invariants(target.generator_count(), &snf.invariants())
}

/// True when `map` is an isomorphism `source -> target`.
pub fn is_isomorphism(map: &IntMatrix, source: &AbGroup, target: &AbGroup) -> bool {
    source == target
        && map_kernel(map, source, target).is_trivial()
        && map_cokernel(map, target).is_trivial()
}

/// Reduces each entry of a canonical-coordinate matrix modulo the target torsion.
pub fn reduce_columns(map: &mut IntMatrix, target: &AbGroup) {
    for (k, d) in target.torsion.iter().enumerate() {
        let r = target.rank + k;
        for j in 0..map.cols() {
            map[(r, j)] = map[(r, j)].mod_floor(d);
        }
    }
}
