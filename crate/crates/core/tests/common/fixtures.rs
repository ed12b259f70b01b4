//! Hand-encoded complexes and textbook tables.

use fibred::category::z2_orbit_category;
use fibred::complex::{self, FComplex};
use fibred::linalg::{IntMatrix, PresentedGroup};
use fibred::module::{CatModule, Variance};

use super::oracle::{zeros, Mat, PresentedComplex};

/// A CW-complex by its integer boundary matrices, with the expected tables.
pub struct Classical {
    pub name: &'static str,
    pub dims: Vec<usize>,
    /// `d[n]` is `dims[n-1] x dims[n]`; `d[0]` is empty.
    pub d: Vec<Mat>,
    pub homology: [&'static str; 4],
    pub cohomology: [&'static str; 4],
    pub build: fn() -> FComplex,
}

fn m(rows: &[&[i128]]) -> Mat {
    rows.iter().map(|r| r.to_vec()).collect()
}

pub fn classical() -> Vec<Classical> {
    vec![
        Classical {
            name: "S1",
            dims: vec![1, 1],
            d: vec![vec![], m(&[&[0]])],
            homology: ["Z", "Z", "", ""],
            cohomology: ["Z", "Z", "", ""],
            build: || complex::sphere(1),
        },
        Classical {
            name: "S2",
            dims: vec![1, 0, 1],
            d: vec![vec![], zeros(1, 0), zeros(0, 1)],
            homology: ["Z", "0", "Z", ""],
            cohomology: ["Z", "0", "Z", ""],
            build: || complex::sphere(2),
        },
        Classical {
            name: "S3",
            dims: vec![1, 0, 0, 1],
            d: vec![vec![], zeros(1, 0), zeros(0, 0), zeros(0, 1)],
            homology: ["Z", "0", "0", "Z"],
            cohomology: ["Z", "0", "0", "Z"],
            build: || complex::sphere(3),
        },
        Classical {
            name: "T2",
            dims: vec![1, 2, 1],
            d: vec![vec![], m(&[&[0, 0]]), m(&[&[0], &[0]])],
            homology: ["Z", "Z^2", "Z", ""],
            cohomology: ["Z", "Z^2", "Z", ""],
            build: complex::torus,
        },
        Classical {
            name: "RP2",
            dims: vec![1, 1, 1],
            d: vec![vec![], m(&[&[0]]), m(&[&[2]])],
            homology: ["Z", "Z/2", "0", ""],
            cohomology: ["Z", "0", "Z/2", ""],
            build: complex::projective_plane,
        },
        Classical {
            name: "Klein",
            dims: vec![1, 2, 1],
            d: vec![vec![], m(&[&[0, 0]]), m(&[&[0], &[2]])],
            homology: ["Z", "Z + Z/2", "0", ""],
            cohomology: ["Z", "Z", "Z/2", ""],
            build: complex::klein_bottle,
        },
    ]
}

/// A `Z/2`-CW-complex given cell by cell: the underlying complex, the action
/// of the generator and the cells fixed pointwise.
pub struct GComplex {
    pub name: &'static str,
    pub dims: Vec<usize>,
    pub d: Vec<Mat>,
    /// `action[n][i] = (j, s)`: `g · cell_i = s · cell_j`.
    pub action: Vec<Vec<(usize, i128)>>,
    /// Cells of the fixed-point complex, per degree.
    pub fixed: Vec<Vec<usize>>,
    pub build: fn() -> FComplex,
}

pub fn g_complexes() -> Vec<GComplex> {
    let swap = vec![(1, 1), (0, 1)];
    vec![
        GComplex {
            name: "point G/e",
            dims: vec![2],
            d: vec![vec![]],
            action: vec![swap.clone()],
            fixed: vec![vec![]],
            build: || {
                let f = z2_orbit_category();
                let o = f.object("G/e").unwrap();
                complex::point(f, o)
            },
        },
        GComplex {
            name: "point G/G",
            dims: vec![1],
            d: vec![vec![]],
            action: vec![vec![(0, 1)]],
            fixed: vec![vec![0]],
            build: || {
                let f = z2_orbit_category();
                let o = f.object("G/G").unwrap();
                complex::point(f, o)
            },
        },
        GComplex {
            name: "antipodal S1",
            dims: vec![2, 2],
            d: vec![vec![], m(&[&[-1, 1], &[1, -1]])],
            action: vec![swap.clone(), swap.clone()],
            fixed: vec![vec![], vec![]],
            build: || complex::antipodal_sphere(1),
        },
        GComplex {
            name: "reflection S1",
            dims: vec![2, 2],
            d: vec![vec![], m(&[&[-1, -1], &[1, 1]])],
            action: vec![vec![(0, 1), (1, 1)], swap.clone()],
            fixed: vec![vec![0, 1], vec![]],
            build: complex::reflection_circle,
        },
        GComplex {
            name: "antipodal S2",
            dims: vec![2, 2, 2],
            d: vec![vec![], m(&[&[-1, 1], &[1, -1]]), m(&[&[1, 1], &[1, 1]])],
            action: vec![swap.clone(), swap.clone(), swap.clone()],
            fixed: vec![vec![], vec![], vec![]],
            build: || complex::antipodal_sphere(2),
        },
        GComplex {
            name: "reflection S2",
            dims: vec![1, 1, 2],
            d: vec![vec![], m(&[&[0]]), m(&[&[1, 1]])],
            action: vec![vec![(0, 1)], vec![(0, 1)], swap],
            fixed: vec![vec![0], vec![0], vec![]],
            build: complex::reflection_sphere,
        },
    ]
}

/// A covariant coefficient system on the orbit category of `Z/2`:
/// `M(G/e) = Z^a / rel_e`, `M(G/G) = Z^b / rel_g`, `t` acting on `M(G/e)`
/// and `p: M(G/e) -> M(G/G)`; matrices act on column vectors.
pub struct CoefficientSystem {
    pub name: &'static str,
    pub a: usize,
    pub rel_e: Mat,
    pub b: usize,
    pub rel_g: Mat,
    pub t: Mat,
    pub p: Mat,
}

pub fn coefficient_systems() -> Vec<CoefficientSystem> {
    vec![
        CoefficientSystem {
            name: "constant Z",
            a: 1,
            rel_e: zeros(1, 0),
            b: 1,
            rel_g: zeros(1, 0),
            t: m(&[&[1]]),
            p: m(&[&[1]]),
        },
        CoefficientSystem {
            name: "sign on G/e, Z/2 on G/G",
            a: 1,
            rel_e: zeros(1, 0),
            b: 1,
            rel_g: m(&[&[2]]),
            t: m(&[&[-1]]),
            p: m(&[&[1]]),
        },
        CoefficientSystem {
            name: "Z[G] with augmentation",
            a: 2,
            rel_e: zeros(2, 0),
            b: 1,
            rel_g: zeros(1, 0),
            t: m(&[&[0, 1], &[1, 0]]),
            p: m(&[&[1, 1]]),
        },
        CoefficientSystem {
            name: "constant Z/3",
            a: 1,
            rel_e: m(&[&[3]]),
            b: 1,
            rel_g: m(&[&[3]]),
            t: m(&[&[1]]),
            p: m(&[&[1]]),
        },
    ]
}

fn int_matrix(a: &Mat, rows: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = a[i][j].into();
        }
    }
    out
}

impl CoefficientSystem {
    /// The same system as a left module over the orbit category (generators `t`, `p`).
    pub fn module(&self) -> CatModule {
        CatModule {
            variance: Variance::Left,
            values: vec![
                PresentedGroup::new(
                    self.a,
                    int_matrix(&self.rel_e, self.a, self.rel_e.first().map_or(0, Vec::len)),
                ),
                PresentedGroup::new(
                    self.b,
                    int_matrix(&self.rel_g, self.b, self.rel_g.first().map_or(0, Vec::len)),
                ),
            ],
            actions: vec![
                int_matrix(&self.t, self.a, self.a),
                int_matrix(&self.p, self.b, self.a),
            ],
        }
    }
}

fn rel_cols(m: &Mat) -> usize {
    m.first().map_or(0, Vec::len)
}

/// Bredon homology as the coend of the fixed-point chain complexes
/// `G/H ↦ C_*(X^H)` with the coefficient system, by generators and relations.
pub fn bredon_homology(x: &GComplex, m: &CoefficientSystem) -> Vec<String> {
    let top = x.dims.len();
    // Generator numbering: (e, cell, i) then (G, fixed cell, k).
    let e_gen = |c: usize, i: usize| c * m.a + i;
    let mut gens = Vec::new();
    let mut rels = Vec::new();
    let mut rel_counts = Vec::new();
    for n in 0..top {
        let cells = x.dims[n];
        let fixed = &x.fixed[n];
        let g_gen = |c: usize, k: usize| {
            cells * m.a + fixed.iter().position(|&f| f == c).unwrap() * m.b + k
        };
        let total = cells * m.a + fixed.len() * m.b;
        let mut cols: Vec<Vec<i128>> = Vec::new();
        for c in 0..cells {
            for r in 0..rel_cols(&m.rel_e) {
                let mut v = vec![0; total];
                for i in 0..m.a {
                    v[e_gen(c, i)] += m.rel_e[i][r];
                }
                cols.push(v);
            }
            // t^*(c) ⊗ m_i - c ⊗ t·m_i
            let (gc, s) = x.action[n][c];
            for i in 0..m.a {
                let mut v = vec![0; total];
                v[e_gen(gc, i)] += s;
                for k in 0..m.a {
                    v[e_gen(c, k)] -= m.t[k][i];
                }
                cols.push(v);
            }
        }
        for &c in fixed {
            for r in 0..rel_cols(&m.rel_g) {
                let mut v = vec![0; total];
                for k in 0..m.b {
                    v[g_gen(c, k)] += m.rel_g[k][r];
                }
                cols.push(v);
            }
            // p^*(c) ⊗ m_i - c ⊗ p·m_i
            for i in 0..m.a {
                let mut v = vec![0; total];
                v[e_gen(c, i)] += 1;
                for k in 0..m.b {
                    v[g_gen(c, k)] -= m.p[k][i];
                }
                cols.push(v);
            }
        }
        let mut r = zeros(total, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..total {
                r[i][j] = v[i];
            }
        }
        gens.push(total);
        rel_counts.push(cols.len());
        rels.push(r);
    }
    let mut d = vec![Vec::new()];
    for n in 1..top {
        let mut dn = zeros(gens[n - 1], gens[n]);
        let (cells, below) = (x.dims[n], x.dims[n - 1]);
        for c in 0..cells {
            for b in 0..below {
                let coef = x.d[n][b][c];
                if coef == 0 {
                    continue;
                }
                for i in 0..m.a {
                    dn[b * m.a + i][c * m.a + i] += coef;
                }
            }
        }
        for (fi, &c) in x.fixed[n].iter().enumerate() {
            for b in 0..below {
                let coef = x.d[n][b][c];
                if coef == 0 {
                    continue;
                }
                let fb = x.fixed[n - 1]
                    .iter()
                    .position(|&f| f == b)
                    .expect("fixed cells form a subcomplex");
                for k in 0..m.b {
                    dn[below * m.a + fb * m.b + k][cells * m.a + fi * m.b + k] += coef;
                }
            }
        }
        d.push(dn);
    }
    PresentedComplex {
        gens,
        rels,
        rel_counts,
        d,
    }
    .homology()
}
