//! The acceptance checks, each returning a verdict with details.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fibred::category::{
    orbit_category, z2_orbit_category, MorphismWord, ObjectId, PresentedCategory,
};
use fibred::chains::{
    build_chain_complex, inclusion, verify_d_squared, CategoryFunctor, ChainMap, D2Mode,
    FreeChainComplex, ZPiMatrix,
};
use fibred::complex::{self, elementary_expansion, ExpansionSpec, FComplex};
use fibred::homology::{cohomology, homology, whitehead_check, WhiteheadStatus};
use fibred::ktheory::{
    check_torsion_algebra, decide_torsion, finiteness_obstruction, torsion_of_equivalence,
    Domination, KClass, TorsionSample,
};
use fibred::linalg::{homology_of_pair, smith_normal_form, IntMatrix, PresentedGroup};
use fibred::module::{hom_from_free, tensor_free, CatModule, FreeRightModule, Variance};
use fibred::pi::{build_pi, ObjectPolicy, PiCategory};

use super::fixtures::{bredon_homology, classical, coefficient_systems, g_complexes};
use super::oracle::{self, free_cohomology, free_homology, group_text, lattice_quotient, Mat};

pub const CAP: usize = 256;

pub struct Verdict {
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn from_failures(failures: Vec<String>, ok: String) -> Self {
        if failures.is_empty() {
            Verdict {
                passed: true,
                detail: ok,
            }
        } else {
            Verdict {
                passed: false,
                detail: failures.join("; "),
            }
        }
    }
}

pub fn chains_of(x: &FComplex) -> (PiCategory, FreeChainComplex) {
    let pi = build_pi(x, ObjectPolicy::CellsOnly, CAP).expect("fundamental category");
    let c = build_chain_complex(x, &pi).expect("chain complex");
    (pi, c)
}

fn texts(groups: &[fibred::linalg::AbGroup]) -> Vec<String> {
    groups.iter().map(|g| g.to_string()).collect()
}

/// Trailing zero groups removed, for comparing complexes of different length.
fn trim(mut v: Vec<String>) -> Vec<String> {
    while v.last().is_some_and(|s| s == "0") {
        v.pop();
    }
    v
}

pub fn criterion_1() -> Verdict {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for fx in classical() {
        let start = Instant::now();
        let (_, c) = chains_of(&(fx.build)());
        let h = texts(
            &homology(
                &c,
                &CatModule::constant_cyclic(c.category(), Variance::Left, 0),
            )
            .unwrap()
            .groups,
        );
        let co = texts(
            &cohomology(
                &c,
                &CatModule::constant_cyclic(c.category(), Variance::Right, 0),
            )
            .unwrap()
            .groups,
        );
        let took = start.elapsed();
        slowest = slowest.max(took);
        let fixture_h: Vec<String> = fx
            .homology
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        let fixture_c: Vec<String> = fx
            .cohomology
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        let oracle_h = free_homology(&fx.dims, &fx.d);
        let oracle_c = free_cohomology(&fx.dims, &fx.d);
        if oracle_h != fixture_h || oracle_c != fixture_c {
            failures.push(format!(
                "{}: oracle {oracle_h:?}/{oracle_c:?} disagrees with the table",
                fx.name
            ));
        }
        if h != fixture_h {
            failures.push(format!(
                "{}: homology {h:?}, expected {fixture_h:?}",
                fx.name
            ));
        }
        if co != fixture_c {
            failures.push(format!(
                "{}: cohomology {co:?}, expected {fixture_c:?}",
                fx.name
            ));
        }
        if took >= Duration::from_secs(1) {
            failures.push(format!("{}: took {took:?}", fx.name));
        }
    }
    Verdict::from_failures(failures, format!("6 complexes, slowest {slowest:?}"))
}

pub fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for x in g_complexes() {
        let fx = (x.build)();
        let (pi, c) = chains_of(&fx);
        for m in coefficient_systems() {
            let module = m.module();
            let report = module.validate(fx.category());
            if !report.is_valid() {
                failures.push(format!("{}: {report}", m.name));
                continue;
            }
            let lib = trim(texts(
                &homology(&c, &CatModule::pullback(&pi, &module))
                    .unwrap()
                    .groups,
            ));
            let brute = trim(bredon_homology(&x, &m));
            count += 1;
            if lib != brute {
                failures.push(format!(
                    "{} with {}: {lib:?} vs fixed points {brute:?}",
                    x.name, m.name
                ));
            }
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(5) {
        failures.push(format!("took {took:?}"));
    }
    Verdict::from_failures(
        failures,
        format!("{count} (complex, coefficients) pairs in {took:?}"),
    )
}

pub fn corpus() -> Vec<(String, FComplex)> {
    let mut out = vec![
        ("torus".to_string(), complex::torus()),
        ("klein".to_string(), complex::klein_bottle()),
        ("rp2".to_string(), complex::projective_plane()),
        ("reflection S1".to_string(), complex::reflection_circle()),
        ("reflection S2".to_string(), complex::reflection_sphere()),
    ];
    for n in 0..=4 {
        out.push((format!("S{n}"), complex::sphere(n)));
        out.push((format!("antipodal S{n}"), complex::antipodal_sphere(n)));
        out.push((format!("trivial S{n}"), complex::trivial_action_sphere(n)));
    }
    out
}

pub fn criterion_3() -> Verdict {
    let mut failures = Vec::new();
    let mut exact = 0;
    let mut pairs = 0;
    for (name, x) in corpus() {
        let (pi, c) = chains_of(&x);
        if x.category().has_normal_forms() {
            match verify_d_squared(&c, &D2Mode::Exact) {
                Ok(r) if r.passed() => exact += 1,
                Ok(r) => failures.push(format!("{name}: {r}")),
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
        let cat = c.category();
        let mut modules = vec![
            CatModule::constant_cyclic(cat, Variance::Left, 0),
            CatModule::constant_cyclic(cat, Variance::Left, 2),
            CatModule::constant_cyclic(cat, Variance::Right, 3),
        ];
        let edges: Vec<usize> = (0..x.cells(1).len()).collect();
        if !edges.is_empty() {
            modules.push(CatModule::sign(&pi, Variance::Left, &edges));
            modules.push(CatModule::sign(&pi, Variance::Right, &edges[..1]));
        }
        if x.category().object_count() == 2 {
            for m in coefficient_systems() {
                modules.push(CatModule::pullback(&pi, &m.module()));
            }
        }
        for m in modules.into_iter().filter(|m| m.validate(cat).is_valid()) {
            pairs += 1;
            match verify_d_squared(&c, &D2Mode::Coefficients(vec![m])) {
                Ok(r) if r.passed() => {}
                Ok(r) => failures.push(format!("{name}: {r}")),
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
    }
    if pairs < 20 {
        failures.push(format!("only {pairs} pairs"));
    }
    Verdict::from_failures(
        failures,
        format!("{exact} complexes exact, {pairs} (complex, module) pairs"),
    )
}

/// Complexes with finite fundamental category, with loops usable for 1-dimensional expansions.
fn finite_corpus() -> Vec<(&'static str, FComplex, Vec<&'static str>)> {
    vec![
        ("S2", complex::sphere(2), vec![]),
        ("S3", complex::sphere(3), vec![]),
        ("rp2", complex::projective_plane(), vec!["e", "e e", "e^-1"]),
        (
            "antipodal S2",
            complex::antipodal_sphere(2),
            vec!["e1 e1[t]"],
        ),
        (
            "antipodal S3",
            complex::antipodal_sphere(3),
            vec!["e1 e1[t]"],
        ),
        ("trivial S2", complex::trivial_action_sphere(2), vec![]),
    ]
}

pub struct Expansion {
    pub name: String,
    pub x: FComplex,
    pub y: FComplex,
}

pub fn random_expansions(seed: u64, count: usize) -> Vec<Expansion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = finite_corpus();
    (0..count)
        .map(|k| {
            let (name, x, loops) = &corpus[rng.gen_range(0..corpus.len())];
            let dim = rng.gen_range(1..=3);
            let mut loop_word = Vec::new();
            if dim == 1 && !loops.is_empty() && rng.gen_bool(0.7) {
                let text = loops[rng.gen_range(0..loops.len())];
                loop_word = text
                    .split_whitespace()
                    .map(|l| x.parse_letter(l).unwrap())
                    .collect();
            }
            let spec = ExpansionSpec {
                dim,
                base: 0,
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
                loop_word,
                tag: k.to_string(),
            };
            let y = elementary_expansion(x, &spec).expect("expansion");
            Expansion {
                name: format!("{name} + {dim}-expansion #{k}"),
                x: x.clone(),
                y,
            }
        })
        .collect()
}

fn tables(x: &FComplex) -> Vec<Vec<String>> {
    let (pi, c) = chains_of(x);
    let cat = c.category();
    let mut out = vec![
        trim(texts(
            &homology(&c, &CatModule::constant_cyclic(cat, Variance::Left, 0))
                .unwrap()
                .groups,
        )),
        trim(texts(
            &cohomology(&c, &CatModule::constant_cyclic(cat, Variance::Right, 0))
                .unwrap()
                .groups,
        )),
        trim(texts(
            &homology(&c, &CatModule::constant_cyclic(cat, Variance::Left, 2))
                .unwrap()
                .groups,
        )),
    ];
    if x.category().object_count() == 2 {
        for m in coefficient_systems() {
            out.push(trim(texts(
                &homology(&c, &CatModule::pullback(&pi, &m.module()))
                    .unwrap()
                    .groups,
            )));
        }
    }
    out
}

/// Torsion of `f` decided over the trivial quotient.
pub fn quotient_torsion(
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    f: &ChainMap,
) -> Result<KClass, String> {
    let fq = f.trivial_quotient(d).map_err(|e| e.to_string())?;
    let cq = c.trivial_quotient().map_err(|e| e.to_string())?;
    let dq = d.trivial_quotient().map_err(|e| e.to_string())?;
    let v = whitehead_check(&cq, &dq, &fq, &[], CAP).map_err(|e| e.to_string())?;
    let cert = v.certificate.ok_or("no certificate over the quotient")?;
    let t = torsion_of_equivalence(&cq, &dq, &fq, &cert).map_err(|e| e.to_string())?;
    if !t.verify().map_err(|e| e.to_string())? {
        return Err("inverse certificate fails".into());
    }
    decide_torsion(&t, 1000, CAP).map_err(|e| e.to_string())
}

pub fn criterion_4(seed: u64) -> Verdict {
    let mut failures = Vec::new();
    for ex in random_expansions(seed, 10) {
        if tables(&ex.x) != tables(&ex.y) {
            failures.push(format!("{}: homology changed", ex.name));
        }
        let (xp, c) = chains_of(&ex.x);
        let (yp, d) = chains_of(&ex.y);
        let f = match inclusion(&ex.x, &xp, &ex.y, &yp) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{}: {e}", ex.name));
                continue;
            }
        };
        match whitehead_check(&c, &d, &f, &[], CAP) {
            Ok(v) if v.status == WhiteheadStatus::Equivalence && v.certificate.is_some() => {}
            Ok(v) => failures.push(format!("{}: {v}", ex.name)),
            Err(e) => failures.push(format!("{}: {e}", ex.name)),
        }
        match quotient_torsion(&c, &d, &f) {
            Ok(KClass::Trivial { .. }) => {}
            Ok(k) => failures.push(format!("{}: torsion {k}", ex.name)),
            Err(e) => failures.push(format!("{}: {e}", ex.name)),
        }
    }
    Verdict::from_failures(
        failures,
        "10 expansions: homology unchanged, inclusion certified, torsion trivial".into(),
    )
}

/// `a + bT` in the group ring of `Z/2`, evaluated at `T = s`.
fn eval(a: i128, b: i128, s: i128) -> i128 {
    a + b * s
}

/// Homology and cohomology of `Z <- Z <- Z` with 1x1 differentials.
fn one_by_one(d1: i128, d2: i128) -> (Vec<String>, Vec<String>) {
    let h = |v: i128| {
        if v == 0 {
            "Z".to_string()
        } else {
            group_text(0, &[v.abs()])
        }
    };
    let ker = |v: i128| usize::from(v == 0);
    let homology = vec![
        h(d1),
        if ker(d1) == 1 { h(d2) } else { "0".into() },
        if ker(d2) == 1 { "Z".into() } else { "0".into() },
    ];
    let cohomology = vec![
        if ker(d1) == 1 { "Z".into() } else { "0".into() },
        if ker(d2) == 1 { h(d1) } else { "0".into() },
        h(d2),
    ];
    (homology, cohomology)
}

pub fn criterion_5() -> Verdict {
    // Fox derivatives of the cell structure e, f = e e: d1 = T - 1, d2 = 1 + T.
    let (d1, d2) = ((-1, 1), (1, 1));
    let mut failures = Vec::new();
    let x = complex::projective_plane();
    let (pi, c) = chains_of(&x);
    for (s, label) in [(1, "trivial"), (-1, "sign")] {
        let (oh, oc) = one_by_one(eval(d1.0, d1.1, s), eval(d2.0, d2.1, s));
        let (n, m) = if s == 1 {
            (
                CatModule::constant_cyclic(c.category(), Variance::Left, 0),
                CatModule::constant_cyclic(c.category(), Variance::Right, 0),
            )
        } else {
            (
                CatModule::sign_by_names(&pi, Variance::Left, &["e"]).unwrap(),
                CatModule::sign_by_names(&pi, Variance::Right, &["e"]).unwrap(),
            )
        };
        let h = texts(&homology(&c, &n).unwrap().groups);
        let co = texts(&cohomology(&c, &m).unwrap().groups);
        if h != oh {
            failures.push(format!("{label}: homology {h:?}, oracle {oh:?}"));
        }
        if co != oc {
            failures.push(format!("{label}: cohomology {co:?}, oracle {oc:?}"));
        }
    }
    let fixture = (["Z/2", "0", "Z"], ["0", "Z/2", "Z"]);
    let (oh, oc) = one_by_one(eval(d1.0, d1.1, -1), eval(d2.0, d2.1, -1));
    if oh != fixture.0 || oc != fixture.1 {
        failures.push(format!(
            "oracle {oh:?}/{oc:?} disagrees with the committed values"
        ));
    }
    Verdict::from_failures(
        failures,
        "RP2 with sign: H = Z/2, 0, Z; H^ = 0, Z/2, Z".into(),
    )
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = BigInt::from(rng.gen_range(-bound..=bound));
        }
    }
    m
}

/// Problems with a Smith form of `a`, if any.
pub fn smith_contract(a: &IntMatrix) -> Option<String> {
    let snf = smith_normal_form(a);
    let (r, c) = a.shape();
    if &(&snf.u * a) * &snf.v != snf.s {
        return Some("u a v != s".into());
    }
    if !snf.u.det().abs().is_one() || !snf.v.det().abs().is_one() {
        return Some("u or v is not unimodular".into());
    }
    if &snf.u * &snf.u_inv != IntMatrix::identity(r) {
        return Some("u_inv is not the inverse of u".into());
    }
    for i in 0..r {
        for j in 0..c {
            let v = &snf.s[(i, j)];
            if (i != j || i >= snf.rank) && !v.is_zero() {
                return Some(format!("s has a stray entry at ({i}, {j})"));
            }
            if i == j && i < snf.rank && !v.is_positive() {
                return Some(format!("s[{i}][{i}] = {v} is not positive"));
            }
        }
    }
    for i in 1..snf.rank {
        if !(&snf.s[(i, i)] % &snf.s[(i - 1, i - 1)]).is_zero() {
            return Some(format!("s[{}] does not divide s[{i}]", i - 1));
        }
    }
    None
}

fn to_mat(a: &IntMatrix) -> Mat {
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| i128::try_from(&a[(i, j)]).unwrap())
                .collect()
        })
        .collect()
}

/// All vectors of `[-b, b]^n`.
fn box_vectors(n: usize, b: i128) -> Vec<Vec<i128>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn apply(a: &Mat, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Size of the subgroup of `(Z/m)^n` generated by `gens`.
fn subgroup_size(gens: &[Vec<i128>], m: i128, n: usize) -> usize {
    let reduce = |v: &[i128]| v.iter().map(|x| x.rem_euclid(m)).collect::<Vec<_>>();
    let gens: BTreeSet<Vec<i128>> = gens.iter().map(|g| reduce(g)).collect();
    let mut seen: BTreeSet<Vec<i128>> = BTreeSet::new();
    let mut stack = vec![vec![0; n]];
    seen.insert(vec![0; n]);
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w: Vec<i128> = v
                .iter()
                .zip(g)
                .map(|(a, b)| (a + b).rem_euclid(m))
                .collect();
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    seen.len()
}

/// `|H / mH|` for `H = ker(d_out) / im(d_in)` by enumeration, for `m = 2..=7`,
/// plus the rank.
fn brute_force_profile(d_out: &Mat, d_in: &Mat, n: usize, rows: usize) -> (usize, Vec<usize>) {
    let kernel: Vec<Vec<i128>> = box_vectors(n, 8)
        .into_iter()
        .filter(|v| apply(d_out, v).iter().all(|&x| x == 0))
        .collect();
    let images: Vec<Vec<i128>> = (0..d_in.first().map_or(0, Vec::len))
        .map(|j| (0..n).map(|i| d_in[i][j]).collect())
        .collect();
    let sizes = (2..=7)
        .map(|m| subgroup_size(&kernel, m, n) / subgroup_size(&images, m, n))
        .collect();
    let rank = n - oracle::rank(d_out, rows, n) - oracle::rank(d_in, n, images.len());
    (rank, sizes)
}

fn library_profile(g: &fibred::linalg::AbGroup) -> (usize, Vec<usize>) {
    let sizes = (2..=7u64)
        .map(|m| {
            let mut s = (m as usize).pow(g.rank as u32);
            for d in &g.torsion {
                s *= num_integer::Integer::gcd(d, &BigInt::from(m))
                    .try_into()
                    .unwrap_or(1usize);
            }
            s
        })
        .collect();
    (g.rank, sizes)
}

pub fn criterion_6(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..1000 {
        let (r, c) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
        let a = random_matrix(&mut rng, r, c, 100);
        if let Some(why) = smith_contract(&a) {
            failures.push(format!("matrix {k}: {why}"));
        }
    }
    let mut pairs = 0;
    while pairs < 200 {
        let (rows, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let d_out = random_matrix(&mut rng, rows, n, 2);
        let dm = to_mat(&d_out);
        let small: Vec<Vec<i128>> = box_vectors(n, 2)
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0) && apply(&dm, v).iter().all(|&x| x == 0))
            .collect();
        let k = if small.is_empty() {
            0
        } else {
            rng.gen_range(0..=3)
        };
        let mut d_in = IntMatrix::zeros(n, k);
        for j in 0..k {
            let v = small.choose(&mut rng).unwrap();
            for i in 0..n {
                d_in[(i, j)] = BigInt::from(v[i]);
            }
        }
        pairs += 1;
        let lib = match homology_of_pair(&d_out, &d_in) {
            Ok(h) => library_profile(&h.group),
            Err(e) => {
                failures.push(format!("pair {pairs}: {e}"));
                continue;
            }
        };
        let brute = brute_force_profile(&dm, &to_mat(&d_in), n, rows);
        if lib != brute {
            failures.push(format!(
                "pair {pairs}: library {lib:?}, enumeration {brute:?}"
            ));
        }
    }
    Verdict::from_failures(failures, "1000 Smith forms, 200 homology pairs".into())
}

/// Small finite categories for the Yoneda checks.
pub fn yoneda_categories() -> Vec<(String, PresentedCategory)> {
    let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    let mut out = vec![
        ("trivial".to_string(), PresentedCategory::trivial()),
        ("Z/2 orbits".to_string(), z2_orbit_category()),
        (
            "Z/3 orbits".to_string(),
            orbit_category(&z3, &[vec![0], vec![0, 1, 2]]).unwrap(),
        ),
    ];
    for (name, x) in [
        ("rp2", complex::projective_plane()),
        ("antipodal S2", complex::antipodal_sphere(2)),
    ] {
        out.push((format!("pi({name})"), chains_of(&x).0.category().clone()));
    }
    out
}

const GROUPS: &[&[i128]] = &[
    &[1],
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[7],
    &[8],
    &[2, 4],
];

fn lcm_of(m: &[i128]) -> i128 {
    m.iter()
        .fold(1, |a, &b| a / num_integer::Integer::gcd(&a, &b) * b)
}

/// A random module with values of order at most 8, by rejection sampling.
pub fn random_module(
    rng: &mut ChaCha8Rng,
    cat: &PresentedCategory,
    variance: Variance,
) -> (CatModule, Vec<Vec<i128>>) {
    for _ in 0..20_000 {
        let shared = rng.gen_bool(0.5);
        let first = GROUPS[rng.gen_range(0..GROUPS.len())];
        let moduli: Vec<Vec<i128>> = cat
            .object_ids()
            .map(|_| {
                if shared {
                    first.to_vec()
                } else {
                    GROUPS[rng.gen_range(0..GROUPS.len())].to_vec()
                }
            })
            .collect();
        let values: Vec<PresentedGroup> = moduli
            .iter()
            .map(|m| {
                let diag: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
                PresentedGroup::new(m.len(), IntMatrix::diagonal(&diag))
            })
            .collect();
        let actions: Vec<IntMatrix> = cat
            .generators()
            .iter()
            .map(|g| {
                let (from, to) = match variance {
                    Variance::Left => (g.source, g.target),
                    Variance::Right => (g.target, g.source),
                };
                let (mt, mf) = (&moduli[to.0], &moduli[from.0]);
                let bound = lcm_of(mt) as i64;
                let mut a = IntMatrix::zeros(mt.len(), mf.len());
                for i in 0..mt.len() {
                    for j in 0..mf.len() {
                        a[(i, j)] = BigInt::from(rng.gen_range(0..bound));
                    }
                }
                a
            })
            .collect();
        let m = CatModule {
            variance,
            values,
            actions,
        };
        if m.validate(cat).is_valid() {
            return (m, moduli);
        }
    }
    panic!("no module found");
}

fn act_mod(a: &IntMatrix, v: &[i128], moduli: &[i128]) -> Vec<i128> {
    (0..a.rows())
        .map(|i| {
            let s: i128 = (0..a.cols())
                .map(|j| i128::try_from(&a[(i, j)]).unwrap() * v[j])
                .sum();
            s.rem_euclid(moduli[i])
        })
        .collect()
}

fn elements(moduli: &[i128]) -> Vec<Vec<i128>> {
    let mut out = vec![Vec::new()];
    for &m in moduli {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Morphisms into `p`, grouped by source: `(source, morphisms)`.
fn homs_into(cat: &PresentedCategory, p: ObjectId) -> Vec<(ObjectId, MorphismWord)> {
    cat.object_ids()
        .flat_map(|q| {
            cat.enumerate_homs(q, p, CAP)
                .unwrap()
                .into_iter()
                .map(move |u| (q, u))
        })
        .collect()
}

/// Natural transformations `Z hom(-, p) -> M` by enumeration: for `k = 1..=8`
/// the number of transformations killed by `k`.
fn brute_force_hom(
    cat: &PresentedCategory,
    m: &CatModule,
    moduli: &[Vec<i128>],
    p: ObjectId,
) -> Vec<usize> {
    let homs = homs_into(cat, p);
    let choices: Vec<Vec<Vec<i128>>> = homs.iter().map(|(q, _)| elements(&moduli[q.0])).collect();
    let mut counts = vec![0usize; 8];
    let mut idx = vec![0usize; homs.len()];
    loop {
        let eta: Vec<&Vec<i128>> = idx.iter().zip(&choices).map(|(&i, c)| &c[i]).collect();
        let natural = homs.iter().enumerate().all(|(k, (q, u))| {
            cat.generators()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.target == *q)
                .all(|(gi, g)| {
                    let ug = cat
                        .compose(u, &cat.gen_word(fibred::category::GenId(gi)))
                        .unwrap();
                    let pos = homs
                        .iter()
                        .position(|(_, w)| *w == ug)
                        .expect("composite is enumerated");
                    act_mod(&m.actions[gi], eta[k], &moduli[g.source.0]) == *eta[pos]
                })
        });
        if natural {
            for kk in 1..=8i128 {
                let killed = homs.iter().enumerate().all(|(k, (q, _))| {
                    eta[k]
                        .iter()
                        .zip(&moduli[q.0])
                        .all(|(x, md)| (kk * x).rem_euclid(*md) == 0)
                });
                if killed {
                    counts[kk as usize - 1] += 1;
                }
            }
        }
        // Next assignment.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return counts;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `Z hom(-, p_1) ⊕ ... ⊗ N` as a presented group by the coend relations.
fn brute_force_tensor(cat: &PresentedCategory, n: &CatModule, anchors: &[ObjectId]) -> String {
    let mut offsets = Vec::new();
    let mut total = 0;
    let mut all = Vec::new();
    for &p in anchors {
        let homs = homs_into(cat, p);
        let mut off = Vec::new();
        for (q, _) in &homs {
            off.push(total);
            total += n.values[q.0].gens;
        }
        offsets.push(off);
        all.push(homs);
    }
    let mut rels: Vec<Vec<i128>> = Vec::new();
    for (b, homs) in all.iter().enumerate() {
        for (k, (q, u)) in homs.iter().enumerate() {
            let v = &n.values[q.0];
            for r in 0..v.relations.cols() {
                let mut col = vec![0; total];
                for i in 0..v.gens {
                    col[offsets[b][k] + i] += i128::try_from(&v.relations[(i, r)]).unwrap();
                }
                rels.push(col);
            }
            // (u∘g) ⊗ x ~ u ⊗ N(g) x for g: q' -> q.
            for (gi, g) in cat
                .generators()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.target == *q)
            {
                let ug = cat
                    .compose(u, &cat.gen_word(fibred::category::GenId(gi)))
                    .unwrap();
                let pos = homs.iter().position(|(_, w)| *w == ug).unwrap();
                let a = &n.actions[gi];
                for i in 0..n.values[g.source.0].gens {
                    let mut col = vec![0; total];
                    col[offsets[b][pos] + i] += 1;
                    for j in 0..a.rows() {
                        col[offsets[b][k] + j] -= i128::try_from(&a[(j, i)]).unwrap();
                    }
                    rels.push(col);
                }
            }
        }
    }
    let gens: Vec<Vec<i128>> = (0..total)
        .map(|i| (0..total).map(|j| i128::from(i == j)).collect())
        .collect();
    lattice_quotient(&gens, &rels, total)
}

fn torsion_counts(g: &fibred::linalg::AbGroup) -> Option<Vec<usize>> {
    if g.rank > 0 {
        return None;
    }
    Some(
        (1..=8u64)
            .map(|k| {
                g.torsion
                    .iter()
                    .map(|d| {
                        usize::try_from(num_integer::Integer::gcd(d, &BigInt::from(k))).unwrap()
                    })
                    .product()
            })
            .collect(),
    )
}

pub fn criterion_7(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cats = yoneda_categories();
    let mut failures = Vec::new();
    let mut instances = 0;
    for k in 0..60 {
        let (name, cat) = &cats[k % cats.len()];
        let anchors: Vec<ObjectId> = (0..rng.gen_range(1..=2))
            .map(|_| ObjectId(rng.gen_range(0..cat.object_count())))
            .collect();
        let basis = FreeRightModule {
            labels: (0..anchors.len()).map(|i| format!("b{i}")).collect(),
            anchors: anchors.clone(),
        };
        let (m, moduli) = random_module(&mut rng, cat, Variance::Right);
        let lib = hom_from_free(&basis, &m, cat).unwrap().group.canonical();
        let mut brute = vec![1usize; 8];
        for &p in &anchors {
            for (b, c) in brute.iter_mut().zip(brute_force_hom(cat, &m, &moduli, p)) {
                *b *= c;
            }
        }
        if torsion_counts(&lib) != Some(brute.clone()) {
            failures.push(format!("{name} hom: library {lib}, enumeration {brute:?}"));
        }
        let (n, _) = random_module(&mut rng, cat, Variance::Left);
        let lib = tensor_free(&basis, &n, cat)
            .unwrap()
            .group
            .canonical()
            .to_string();
        let brute = brute_force_tensor(cat, &n, &anchors);
        if lib != brute {
            failures.push(format!("{name} tensor: library {lib}, coend {brute}"));
        }
        instances += 1;
    }
    Verdict::from_failures(
        failures,
        format!("{instances} instances, hom and tensor each"),
    )
}

fn zpi(a: &IntMatrix, rows: usize, cols: usize) -> ZPiMatrix {
    let o = ObjectId(0);
    let mut m = ZPiMatrix::zeros(vec![o; rows], vec![o; cols]);
    for i in 0..rows {
        for j in 0..cols {
            if !a[(i, j)].is_zero() {
                m.add_term(i, j, a[(i, j)].clone(), MorphismWord::identity(o))
                    .unwrap();
            }
        }
    }
    m
}

/// A unimodular matrix and its inverse, as a product of elementary moves.
fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            p[(0, 0)] = BigInt::from(-1);
            q[(0, 0)] = BigInt::from(-1);
        }
        return (p, q);
    }
    for _ in 0..4 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-2..=2));
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = c.clone();
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(i, j)] = -c;
        p = &p * &e;
        q = &e_inv * &q;
    }
    (p, q)
}

/// A complex over the trivial category with integer differentials (row convention).
pub fn integer_complex(ranks: &[usize], d: &[IntMatrix]) -> FreeChainComplex {
    let o = ObjectId(0);
    let bases: Vec<Vec<ObjectId>> = ranks.iter().map(|&r| vec![o; r]).collect();
    let labels: Vec<Vec<String>> = ranks
        .iter()
        .enumerate()
        .map(|(n, &r)| (0..r).map(|i| format!("x{n}_{i}")).collect())
        .collect();
    let dz: Vec<ZPiMatrix> = (1..ranks.len())
        .map(|n| zpi(&d[n], ranks[n], ranks[n - 1]))
        .collect();
    FreeChainComplex::new(PresentedCategory::trivial(), bases, labels, dz).expect("valid complex")
}

/// A random complex as a sum of pieces `Z` and `Z --m--> Z`, in mixed bases.
fn random_integer_complex(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<IntMatrix>) {
    let top = rng.gen_range(1..=3);
    let mut ranks = vec![0; top + 1];
    let mut pieces: Vec<(usize, i64)> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let n = rng.gen_range(0..=top);
        if n < top && rng.gen_bool(0.5) {
            pieces.push((n, [1, -1, 2, 3][rng.gen_range(0..4)]));
            ranks[n] += 1;
            ranks[n + 1] += 1;
        } else {
            pieces.push((n, 0));
            ranks[n] += 1;
        }
    }
    let mut d: Vec<IntMatrix> = (0..=top)
        .map(|n| {
            if n == 0 {
                IntMatrix::zeros(0, 0)
            } else {
                IntMatrix::zeros(ranks[n], ranks[n - 1])
            }
        })
        .collect();
    let mut fill = vec![0; top + 1];
    for (n, m) in pieces {
        let i = fill[n];
        fill[n] += 1;
        if m != 0 {
            let j = fill[n + 1];
            fill[n + 1] += 1;
            d[n + 1][(j, i)] = BigInt::from(m);
        }
    }
    (ranks, d)
}

/// `Y` isomorphic to `X` by basis changes `P_n`; returns `(D^Y, P)` with `D^Y_n = P_n^{-1} D_n P_{n-1}`.
fn change_basis(
    rng: &mut ChaCha8Rng,
    ranks: &[usize],
    d: &[IntMatrix],
) -> (Vec<IntMatrix>, Vec<IntMatrix>) {
    let ps: Vec<(IntMatrix, IntMatrix)> = ranks.iter().map(|&r| unimodular(rng, r)).collect();
    let dy = (0..ranks.len())
        .map(|n| {
            if n == 0 {
                d[0].clone()
            } else {
                &(&ps[n].1 * &d[n]) * &ps[n - 1].0
            }
        })
        .collect();
    (dy, ps.into_iter().map(|(p, _)| p).collect())
}

fn integer_map(ranks: &[usize], ps: &[IntMatrix]) -> ChainMap {
    ChainMap {
        functor: CategoryFunctor::identity(&PresentedCategory::trivial()),
        maps: ranks.iter().zip(ps).map(|(&r, p)| zpi(p, r, r)).collect(),
    }
}

pub fn torsion_samples(seed: u64, count: usize) -> Vec<TorsionSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (ranks, dx) = random_integer_complex(&mut rng);
            let (dy, p) = change_basis(&mut rng, &ranks, &dx);
            let (dz, q) = change_basis(&mut rng, &ranks, &dy);
            TorsionSample {
                x: integer_complex(&ranks, &dx),
                y: integer_complex(&ranks, &dy),
                z: integer_complex(&ranks, &dz),
                f: integer_map(&ranks, &p),
                g: integer_map(&ranks, &q),
            }
        })
        .collect()
}

/// A domination `Y = X ⊕ E -> X` with `E` elementary, in a mixed basis of `Y`.
pub fn random_domination(rng: &mut ChaCha8Rng) -> Domination {
    let (ranks, dx) = random_integer_complex(rng);
    let top = ranks.len() - 1;
    let k = rng.gen_range(0..top.max(1));
    let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut ry = ranks.clone();
    if top == 0 {
        ry.push(0);
    }
    ry[k] += 1;
    ry[k + 1] += 1;
    let ty = ry.len() - 1;
    let ext = |n: usize| if n < ranks.len() { ranks[n] } else { 0 };
    // Degree n of Y is X_n then the E cell (a in degree k, b in degree k + 1).
    let mut dy: Vec<IntMatrix> = vec![IntMatrix::zeros(0, 0)];
    for n in 1..=ty {
        let mut m = IntMatrix::zeros(ry[n], ry[n - 1]);
        if n < ranks.len() {
            m.set_block(0, 0, &dx[n]);
        }
        if n == k + 1 {
            m[(ry[n] - 1, ry[n - 1] - 1)] = BigInt::from(eps);
        }
        dy.push(m);
    }
    let f: Vec<IntMatrix> = (0..=ty)
        .map(|n| {
            let mut m = IntMatrix::zeros(ry[n], ext(n));
            m.set_block(0, 0, &IntMatrix::identity(ext(n)));
            m
        })
        .collect();
    let g: Vec<IntMatrix> = (0..=ty)
        .map(|n| {
            let mut m = IntMatrix::zeros(ext(n), ry[n]);
            m.set_block(0, 0, &IntMatrix::identity(ext(n)));
            m
        })
        .collect();
    // gf - 1 = -1_E = dh + hd with h(a) = -eps b.
    let h: Vec<IntMatrix> = (0..=ty)
        .map(|n| {
            let next = if n < ty { ry[n + 1] } else { 0 };
            let mut m = IntMatrix::zeros(ry[n], next);
            if n == k {
                m[(ry[n] - 1, ry[n + 1] - 1)] = BigInt::from(-eps);
            }
            m
        })
        .collect();
    // Mix the basis of Y: Y' -> Y by P, D' = P D P^{-1}.
    let ps: Vec<(IntMatrix, IntMatrix)> = ry.iter().map(|&r| unimodular(rng, r)).collect();
    let dy2: Vec<IntMatrix> = (0..=ty)
        .map(|n| {
            if n == 0 {
                dy[0].clone()
            } else {
                &(&ps[n].0 * &dy[n]) * &ps[n - 1].1
            }
        })
        .collect();
    let f2: Vec<IntMatrix> = (0..=ty).map(|n| &ps[n].0 * &f[n]).collect();
    let g2: Vec<IntMatrix> = (0..=ty).map(|n| &g[n] * &ps[n].1).collect();
    let h2: Vec<IntMatrix> = (0..=ty)
        .map(|n| {
            if n < ty {
                &(&ps[n].0 * &h[n]) * &ps[n + 1].1
            } else {
                h[n].clone()
            }
        })
        .collect();
    let y = integer_complex(&ry, &dy2);
    let x = integer_complex(&ranks, &dx);
    let xr = |n: usize| ext(n);
    Domination {
        f: (0..=ty).map(|n| zpi(&f2[n], ry[n], xr(n))).collect(),
        g: (0..=ty).map(|n| zpi(&g2[n], xr(n), ry[n])).collect(),
        h: (0..=ty)
            .map(|n| zpi(&h2[n], ry[n], if n < ty { ry[n + 1] } else { 0 }))
            .collect(),
        y,
        x,
    }
}

/// Problems with a finiteness witness, if any.
pub fn witness_problem(k: &fibred::ktheory::K0Representative) -> Option<String> {
    for (n, (e, w)) in k.idempotents.iter().zip(&k.witnesses).enumerate() {
        let a = e.augmentation().transpose();
        if &a * &a != a {
            return Some(format!("degree {n}: not idempotent"));
        }
        if !w.is_square() || !w.det().abs().is_one() {
            return Some(format!("degree {n}: witness is not unimodular"));
        }
        let r = k.ranks[n];
        let image = w.block(0, 0, w.rows(), r);
        let ker = w.block(0, r, w.rows(), w.cols() - r);
        if &a * &image != image || !(&a * &ker).is_zero() {
            return Some(format!("degree {n}: witness does not split the idempotent"));
        }
    }
    if k.witnesses.len() != k.idempotents.len() {
        return Some("missing witnesses".into());
    }
    None
}

pub fn criterion_8(seed: u64) -> Verdict {
    let mut failures = Vec::new();
    let samples = torsion_samples(seed, 100);
    match check_torsion_algebra(&samples, CAP) {
        Ok(r) if r.passed() && r.lines.len() == 100 => {}
        Ok(r) => failures.push(format!("torsion algebra: {}", r.failures.join("; "))),
        Err(e) => failures.push(format!("torsion algebra: {e}")),
    }
    for (name, x, _) in finite_corpus() {
        let (_, c) = chains_of(&x);
        match quotient_torsion(&c, &c, &ChainMap::identity(&c)) {
            Ok(KClass::Trivial { .. }) => {}
            Ok(k) => failures.push(format!("identity of {name}: {k}")),
            Err(e) => failures.push(format!("identity of {name}: {e}")),
        }
    }
    for ex in random_expansions(seed ^ 0x5a5a, 5) {
        let (xp, c) = chains_of(&ex.x);
        let (yp, d) = chains_of(&ex.y);
        let f = inclusion(&ex.x, &xp, &ex.y, &yp).unwrap();
        match quotient_torsion(&c, &d, &f) {
            Ok(KClass::Trivial { .. }) => {}
            Ok(k) => failures.push(format!("{}: {k}", ex.name)),
            Err(e) => failures.push(format!("{}: {e}", ex.name)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(8));
    for i in 0..30 {
        let dom = random_domination(&mut rng);
        match finiteness_obstruction(&dom) {
            Ok(k) => {
                if !matches!(k.class, KClass::Trivial { .. }) {
                    failures.push(format!("domination {i}: class {}", k.class));
                }
                if let Some(why) = witness_problem(&k) {
                    failures.push(format!("domination {i}: {why}"));
                }
            }
            Err(e) => failures.push(format!("domination {i}: {e}")),
        }
    }
    Verdict::from_failures(
        failures,
        "100 composable pairs, identities and expansions trivial, 30 dominations with free witnesses".into(),
    )
}
