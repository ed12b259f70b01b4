//! Smith normal form with unimodular transformation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Result of a Smith normal form computation: `u * a * v == s`.
///
/// `s` is diagonal with nonnegative entries `s[0] | s[1] | ... | s[rank-1]`,
/// all nonzero, followed by zeros. `u` and `v` are unimodular; `u_inv` is
/// maintained alongside `u` so callers can change bases in both directions.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// The nonzero invariant factors, in divisibility order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form of `a`.
///
/// Pivoting is deterministic: the entry of smallest nonzero magnitude
/// (first in row-major order) of the active block becomes the pivot, and
/// rows and columns are cleared by Euclidean division until the pivot
/// divides everything that remains.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // Row operation helpers keep u and u_inv in lockstep.
    let swap_rows =
        |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize, b: usize| {
            s.swap_rows(a, b);
            u.swap_rows(a, b);
            ui.swap_cols(a, b);
        };
    // row[dst] += q * row[src]
    let add_row = |s: &mut IntMatrix,
                   u: &mut IntMatrix,
                   ui: &mut IntMatrix,
                   dst: usize,
                   src: usize,
                   q: &BigInt| {
        s.add_row_multiple(dst, src, q);
        u.add_row_multiple(dst, src, q);
        ui.add_col_multiple(src, dst, &-q);
    };

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_nonzero(&s, t, t) else {
            break;
        };
        swap_rows(&mut s, &mut u, &mut u_inv, t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !s[(i, t)].is_zero() {
                    let q = s[(i, t)].div_floor(&s[(t, t)]);
                    add_row(&mut s, &mut u, &mut u_inv, i, t, &-q);
                    if !s[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !s[(t, j)].is_zero() {
                    let q = s[(t, j)].div_floor(&s[(t, t)]);
                    s.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-q);
                    if !s[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; promote the smallest.
                let mut best: Option<(usize, usize)> = None;
                let mut best_abs = s[(t, t)].abs();
                for i in t + 1..m {
                    let x = s[(i, t)].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = Some((i, t));
                    }
                }
                for j in t + 1..n {
                    let x = s[(t, j)].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = Some((t, j));
                    }
                }
                match best {
                    Some((i, j)) if j == t => swap_rows(&mut s, &mut u, &mut u_inv, t, i),
                    Some((_, j)) => {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                    None => {}
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let p = s[(t, t)].clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&p));
            match offender {
                Some((i, _)) => add_row(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    Smith {
        s,
        u,
        u_inv,
        v,
        rank: t,
    }
}

fn min_nonzero(s: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in r0..s.rows() {
        for j in c0..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Integer solution `x` of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&smith_normal_form(a), b)
}

/// Like [`solve`] but reuses a precomputed Smith form of `a`.
pub fn solve_with(snf: &Smith, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = snf.u.mul_vec(b);
    let n = snf.v.rows();
    let mut w = vec![BigInt::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = ci.div_rem(&snf.s[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&w))
}

/// Column-wise solution `X` of `a X = b`.
pub fn solve_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let snf = smith_normal_form(a);
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        cols.push(solve_with(&snf, &b.column(j))?);
    }
    Some(IntMatrix::from_columns(a.cols(), &cols))
}

/// Lattice basis (as columns) of the integer kernel of `a`.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let idx: Vec<usize> = (snf.rank..a.cols()).collect();
    snf.v.select_columns(&idx)
}

/// Lattice basis (as columns) of the column span of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let cols: Vec<Vec<BigInt>> = (0..snf.rank)
        .map(|i| {
            let s = &snf.s[(i, i)];
            snf.u_inv.column(i).into_iter().map(|x| x * s).collect()
        })
        .collect();
    IntMatrix::from_columns(gens.rows(), &cols)
}

/// True when every column of `b` lies in the column span of `a`.
pub fn in_column_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    if b.is_zero() {
        return true;
    }
    let snf = smith_normal_form(a);
    (0..b.cols()).all(|j| solve_with(&snf, &b.column(j)).is_some())
}
