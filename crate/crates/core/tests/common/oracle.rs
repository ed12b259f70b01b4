//! Small exact linear algebra over `i128`, written separately from the
//! library so that its results can serve as an oracle.

pub type Mat = Vec<Vec<i128>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn cols(m: &Mat, rows: usize) -> usize {
    if rows == 0 {
        0
    } else {
        m[0].len()
    }
}

pub fn transpose(m: &Mat, r: usize, c: usize) -> Mat {
    let mut t = zeros(c, r);
    for i in 0..r {
        for j in 0..c {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn mul(a: &Mat, b: &Mat, n: usize, k: usize, m: usize) -> Mat {
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column echelon form of the first `rows` rows of `a` (all columns), with the
/// same column operations applied to the trailing rows. Returns the number of
/// pivot columns; pivot rows are strictly increasing.
fn column_echelon(a: &mut Mat, rows: usize, ncols: usize) -> (usize, Vec<usize>) {
    let total = a.len();
    let mut p = 0;
    let mut pivots = Vec::new();
    for r in 0..rows {
        if p == ncols {
            break;
        }
        for j in p + 1..ncols {
            if a[r][j] == 0 {
                continue;
            }
            let (x, y) = (a[r][p], a[r][j]);
            let (g, s, t) = ext_gcd(x, y);
            let (u, v) = (x / g, y / g);
            // [col_p, col_j] <- [s col_p + t col_j, -v col_p + u col_j]
            for row in a.iter_mut().take(total) {
                let (cp, cj) = (row[p], row[j]);
                row[p] = s * cp + t * cj;
                row[j] = -v * cp + u * cj;
            }
        }
        if a[r][p] != 0 {
            pivots.push(r);
            p += 1;
        }
    }
    (p, pivots)
}

/// Basis of the integer kernel of an `r x c` matrix, as vectors.
pub fn kernel(a: &Mat, r: usize, c: usize) -> Vec<Vec<i128>> {
    let mut aug = zeros(r + c, c);
    for i in 0..r {
        aug[i][..c].copy_from_slice(&a[i][..c]);
    }
    for j in 0..c {
        aug[r + j][j] = 1;
    }
    let (p, _) = column_echelon(&mut aug, r, c);
    (p..c)
        .map(|j| (0..c).map(|i| aug[r + i][j]).collect())
        .collect()
}

/// Nonzero diagonal of a Smith form, normalised into a divisibility chain.
pub fn invariants(a: &Mat, r: usize, c: usize) -> Vec<i128> {
    let mut m = a.clone();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut done = false;
        while !done {
            done = true;
            for i in t + 1..r {
                let q = m[i][t].div_euclid(m[t][t]);
                if q != 0 {
                    for j in t..c {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    m.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..c {
                let q = m[t][j].div_euclid(m[t][t]);
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    done = false;
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // (a, b) -> (gcd, lcm) until every entry divides the next.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

pub fn rank(a: &Mat, r: usize, c: usize) -> usize {
    invariants(a, r, c).len()
}

/// Canonical text of `Z^rank + Z/d...`, matching the library's notation.
pub fn group_text(rank: usize, torsion: &[i128]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for d in torsion.iter().filter(|&&d| d > 1) {
        parts.push(format!("Z/{d}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// The quotient of the lattice spanned by `gens` by the sublattice spanned by `sub`.
/// Vectors have length `n`; `sub` must lie in the span of `gens`.
pub fn lattice_quotient(gens: &[Vec<i128>], sub: &[Vec<i128>], n: usize) -> String {
    let k = gens.len();
    let mut a = zeros(n, k);
    for (j, g) in gens.iter().enumerate() {
        for i in 0..n {
            a[i][j] = g[i];
        }
    }
    let (p, pivots) = column_echelon(&mut a, n, k);
    // Coordinates of each `sub` vector in the echelon basis.
    let mut coords = zeros(p, sub.len());
    for (s, v) in sub.iter().enumerate() {
        let mut rest = v.clone();
        for (kk, &row) in pivots.iter().enumerate() {
            let y = rest[row] / a[row][kk];
            assert_eq!(y * a[row][kk], rest[row], "vector is not in the lattice");
            coords[kk][s] = y;
            for (i, x) in rest.iter_mut().enumerate() {
                *x -= y * a[i][kk];
            }
        }
        assert!(rest.iter().all(|&x| x == 0), "vector is not in the lattice");
    }
    let inv = invariants(&coords, p, sub.len());
    group_text(p - inv.len(), &inv)
}

/// A chain complex of presented groups: `gens[n]`, relations `rels[n]`
/// (`gens[n] x r` columns) and maps `d[n]: degree n -> n - 1` (`gens[n-1] x gens[n]`).
pub struct PresentedComplex {
    pub gens: Vec<usize>,
    pub rels: Vec<Mat>,
    pub rel_counts: Vec<usize>,
    pub d: Vec<Mat>,
}

impl PresentedComplex {
    pub fn free(d: Vec<Mat>, gens: Vec<usize>) -> Self {
        let n = gens.len();
        PresentedComplex {
            rels: gens.iter().map(|&g| zeros(g, 0)).collect(),
            rel_counts: vec![0; n],
            gens,
            d,
        }
    }

    /// Homology in each degree.
    pub fn homology(&self) -> Vec<String> {
        let top = self.gens.len();
        let mut out = Vec::new();
        for n in 0..top {
            let g = self.gens[n];
            // Cycles: x with d_n x in im R_{n-1}.
            let cycles: Vec<Vec<i128>> = if n == 0 || self.gens[n - 1] == 0 {
                (0..g)
                    .map(|i| (0..g).map(|j| i128::from(i == j)).collect())
                    .collect()
            } else {
                let below = self.gens[n - 1];
                let rc = self.rel_counts[n - 1];
                let mut m = zeros(below, g + rc);
                for i in 0..below {
                    for j in 0..g {
                        m[i][j] = self.d[n][i][j];
                    }
                    for j in 0..rc {
                        m[i][g + j] = self.rels[n - 1][i][j];
                    }
                }
                kernel(&m, below, g + rc)
                    .into_iter()
                    .map(|v| v[..g].to_vec())
                    .collect()
            };
            let mut boundaries: Vec<Vec<i128>> = (0..self.rel_counts[n])
                .map(|j| (0..g).map(|i| self.rels[n][i][j]).collect())
                .collect();
            if n + 1 < top {
                for j in 0..self.gens[n + 1] {
                    boundaries.push((0..g).map(|i| self.d[n + 1][i][j]).collect());
                }
            }
            out.push(lattice_quotient(&cycles, &boundaries, g));
        }
        out
    }
}

/// Homology of a free complex given by integer boundary matrices `d[n]`
/// (`dims[n-1] x dims[n]`, column convention; `d[0]` unused).
pub fn free_homology(dims: &[usize], d: &[Mat]) -> Vec<String> {
    PresentedComplex::free(d.to_vec(), dims.to_vec()).homology()
}

/// Cohomology of the same complex.
pub fn free_cohomology(dims: &[usize], d: &[Mat]) -> Vec<String> {
    let top = dims.len();
    // Reindex the cochain complex as a chain complex in degree top-1-n.
    let rdims: Vec<usize> = (0..top).rev().map(|n| dims[n]).collect();
    let mut rd = vec![Vec::new(); top];
    for k in 1..top {
        // rd[k]: rdims[k-1] x rdims[k], i.e. degree top-k -> degree top-k+1 in the original.
        let n = top - k; // δ: C^{n-1} -> C^n is d[n]^T
        rd[k] = transpose(&d[n], dims[n - 1], dims[n]);
    }
    let mut h = free_homology(&rdims, &rd);
    h.reverse();
    h
}
