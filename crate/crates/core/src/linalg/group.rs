use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::smith::smith_normal_form;
use super::IntMatrix;

/// A finitely generated abelian group in canonical form
/// `Z^rank + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from machine-size torsion coefficients, normalising them.
    pub fn new(rank: usize, torsion: &[i64]) -> Self {
        let diag: Vec<BigInt> = torsion.iter().map(|&d| BigInt::from(d)).collect();
        let mut g = PresentedGroup::new(diag.len(), IntMatrix::diagonal(&diag)).canonical();
        g.rank += rank;
        g
    }

    /// The group `Z^n / im(diag)` where `diag` lists the leading invariants
    /// of a Smith form; entries equal to one are dropped.
    pub fn from_invariants(generators: usize, invariants: &[BigInt]) -> Self {
        let torsion: Vec<BigInt> = invariants
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.abs())
            .collect();
        let killed = invariants.iter().filter(|d| !d.is_zero()).count();
        AbGroup {
            rank: generators - killed,
            torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of elements, or `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Number of canonical generators (free first, then torsion).
    pub fn generator_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Reduces canonical coordinates: torsion coordinates mod their order.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (k, d) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.rank + k];
            *c = c.mod_floor(d);
        }
    }

    /// Relation matrix of the canonical presentation (one column per torsion summand).
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut r = IntMatrix::zeros(n, self.torsion.len());
        for (k, d) in self.torsion.iter().enumerate() {
            r[(self.rank + k, k)] = d.clone();
        }
        r
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut diag: Vec<BigInt> = self.torsion.clone();
        diag.extend(other.torsion.iter().cloned());
        let p = PresentedGroup::new(diag.len(), IntMatrix::diagonal(&diag)).canonical();
        AbGroup {
            rank: self.rank + other.rank + p.rank,
            torsion: p.torsion,
        }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An abelian group given by generators and relations: `Z^gens / im(relations)`.
/// Relations are the columns of a `gens x r` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedGroup {
    pub gens: usize,
    pub relations: IntMatrix,
}

impl PresentedGroup {
    pub fn new(gens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), gens, "relation matrix has wrong height");
        PresentedGroup { gens, relations }
    }

    pub fn free(gens: usize) -> Self {
        PresentedGroup {
            gens,
            relations: IntMatrix::zeros(gens, 0),
        }
    }

    /// `Z/m` (or `Z` for `m == 0`).
    pub fn cyclic(m: i64) -> Self {
        if m == 0 {
            return Self::free(1);
        }
        PresentedGroup {
            gens: 1,
            relations: IntMatrix::from_rows(&[[m]]),
        }
    }

    pub fn canonical(&self) -> AbGroup {
        let snf = smith_normal_form(&self.relations);
        AbGroup::from_invariants(self.gens, &snf.invariants())
    }

    pub fn direct_sum(&self, other: &PresentedGroup) -> PresentedGroup {
        PresentedGroup {
            gens: self.gens + other.gens,
            relations: self.relations.direct_sum(&other.relations),
        }
    }

    pub fn direct_sum_all<'a>(
        parts: impl IntoIterator<Item = &'a PresentedGroup>,
    ) -> PresentedGroup {
        parts
            .into_iter()
            .fold(PresentedGroup::free(0), |acc, p| acc.direct_sum(p))
    }
}

impl From<&AbGroup> for PresentedGroup {
    fn from(g: &AbGroup) -> Self {
        PresentedGroup::new(g.generator_count(), g.relation_matrix())
    }
}
