use std::io::{self, Read};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fibred::category::{
    orbit_category, parse_group_table, z2_orbit_category, GenId, PresentedCategory,
};
use fibred::chains::{
    build_chain_complex, chain_map_from_cellular, inclusion, verify_d_squared, ChainMap, D2Mode,
    FreeChainComplex,
};
use fibred::complex::{self, FComplex};
use fibred::format;
use fibred::homology::{
    cohomology, euler_characteristics, homology, total_homology, whitehead_check, WhiteheadStatus,
};
use fibred::ktheory::{
    decide_torsion, find_chain_contraction, finiteness_obstruction, torsion_of_contractible,
    torsion_of_equivalence, KClass, TorsionRepresentative,
};
use fibred::linalg::IntMatrix;
use fibred::module::{CatModule, Variance};
use fibred::pi::{build_pi, ObjectPolicy, PiCategory};
use fibred::Error;

#[derive(Parser)]
#[command(
    name = "fibred",
    version,
    about = "Homology and torsion of fibred CW-complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Records,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum D2 {
    Exact,
    Coeff,
}

#[derive(Args, Clone)]
struct Opts {
    /// Coefficients: `Z`, `Z/m`, `sign:e,f` or a module file. Repeatable.
    #[arg(long = "coeff")]
    coeff: Vec<String>,
    /// `cells-only` or `all`.
    #[arg(long, default_value = "cells-only")]
    object_policy: String,
    /// Bound on hom-set enumeration.
    #[arg(long, default_value_t = 256)]
    hom_cap: usize,
    #[arg(long, value_enum, default_value_t = D2::Exact)]
    d2_mode: D2,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Move budget for class searches.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex, chains or domination file and check d^2 = 0.
    Validate {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Dump the fundamental category.
    Pi {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    Homology {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    Cohomology {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Homology of the evaluated complexes as a module.
    TotalHomology {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    Euler {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Decide whether a map (inclusion by default) is a chain homotopy equivalence.
    WhiteheadCheck {
        source: String,
        target: String,
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Torsion of a contractible complex, or of an equivalence `source -> target`.
    Torsion {
        source: String,
        target: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Finiteness obstruction of a domination file.
    Finiteness {
        input: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Emit a built-in complex: `sphere N`, `rp2`, `torus`, `klein`,
    /// `z2-sphere N antipodal|reflection|trivial`, `z2-point G/e|G/G`.
    Gen { name: String, args: Vec<String> },
    /// Emit the orbit category of a finite group. `table` is a file or
    /// inline rows like `0,1;1,0`; `subgroups` like `0;0,1`.
    OrbitCategory { table: String, subgroups: String },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => 3,
            e if e.is_undecidable() => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &str, e: io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{path}: {e}"),
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Output of a command plus whether its answer was decided.
struct Report {
    table: String,
    records: Value,
    decided: bool,
}

impl Report {
    fn decided(table: String, records: Value) -> Self {
        Report {
            table,
            records,
            decided: true,
        }
    }
}

fn read_input(path: Option<&str>) -> Run<(String, String)> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_failure("<stdin>", e))?;
            Ok((s, "<stdin>".into()))
        }
        Some(p) => Ok((
            std::fs::read_to_string(p).map_err(|e| io_failure(p, e))?,
            p.to_string(),
        )),
    }
}

fn header(text: &str) -> &str {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("")
}

/// A complex file with its fundamental category, or a bare chain complex.
struct Loaded {
    space: Option<(FComplex, PiCategory)>,
    chains: FreeChainComplex,
}

impl Loaded {
    fn pi(&self) -> Option<&PiCategory> {
        self.space.as_ref().map(|(_, p)| p)
    }
}

fn policy(opts: &Opts) -> Run<ObjectPolicy> {
    Ok(opts.object_policy.parse::<ObjectPolicy>()?)
}

fn check_complex(x: &FComplex, name: &str) -> Run<()> {
    let report = x.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("{name}: [complex] {}", report.report.errors.join("; ")),
        })
    }
}

fn load(path: Option<&str>, opts: &Opts) -> Run<Loaded> {
    let (text, name) = read_input(path)?;
    match header(&text) {
        "fibred-chains v1" => Ok(Loaded {
            space: None,
            chains: format::parse_chains(&text, &name)?,
        }),
        _ => {
            let x = format::parse_fibred(&text, &name)?;
            check_complex(&x, &name)?;
            let pi = build_pi(&x, policy(opts)?, opts.hom_cap)?;
            let chains = build_chain_complex(&x, &pi)?;
            Ok(Loaded {
                space: Some((x, pi)),
                chains,
            })
        }
    }
}

fn coefficient(spec: &str, variance: Variance, loaded: &Loaded) -> Run<CatModule> {
    let cat = loaded.chains.category();
    if spec == "Z" {
        return Ok(CatModule::constant_cyclic(cat, variance, 0));
    }
    if let Some(m) = spec.strip_prefix("Z/") {
        let m: i64 = m.parse().map_err(|_| Failure {
            code: 3,
            message: format!("bad modulus in `--coeff {spec}`"),
        })?;
        if m < 1 {
            return Err(Failure {
                code: 1,
                message: format!("`--coeff {spec}`: modulus must be positive"),
            });
        }
        return Ok(CatModule::constant_cyclic(cat, variance, m));
    }
    if let Some(names) = spec.strip_prefix("sign:") {
        let pi = loaded.pi().ok_or_else(|| Failure {
            code: 1,
            message: "sign coefficients need a complex file, not a chains dump".into(),
        })?;
        let names: Vec<&str> = names.split(',').filter(|s| !s.is_empty()).collect();
        return Ok(CatModule::sign_by_names(pi, variance, &names)?);
    }
    let (text, name) = read_input(Some(spec))?;
    let file = format::parse_module(&text, &name)?;
    if file.variance != variance {
        return Err(Failure {
            code: 1,
            message: format!(
                "{name}: expected a {variance} module, found a {} module",
                file.variance
            ),
        });
    }
    match loaded.pi() {
        Some(pi) => Ok(file.build_for(pi)?),
        None if file.over_structure => Err(Failure {
            code: 1,
            message: format!("{name}: `over structure` needs a complex file"),
        }),
        None => Ok(file.build(cat)?),
    }
}

fn coefficients(opts: &Opts, variance: Variance, loaded: &Loaded) -> Run<Vec<(String, CatModule)>> {
    let specs = if opts.coeff.is_empty() {
        vec!["Z".to_string()]
    } else {
        opts.coeff.clone()
    };
    specs
        .into_iter()
        .map(|s| coefficient(&s, variance, loaded).map(|m| (s, m)))
        .collect()
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m[(i, j)].to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn validate(input: Option<&str>, opts: &Opts) -> Run<Report> {
    let (text, name) = read_input(input)?;
    let mut lines = Vec::new();
    let loaded = match header(&text) {
        "fibred-domination v1" => {
            let d = format::parse_domination(&text, &name)?;
            lines.push(format!(
                "domination: y has {} degrees, x has {}",
                d.y.degrees(),
                d.x.degrees()
            ));
            Loaded {
                space: None,
                chains: d.y,
            }
        }
        "fibred-chains v1" => Loaded {
            space: None,
            chains: format::parse_chains(&text, &name)?,
        },
        _ => {
            let x = format::parse_fibred(&text, &name)?;
            check_complex(&x, &name)?;
            let report = x.validate();
            lines.push(report.to_string().trim_end().to_string());
            let pi = build_pi(&x, policy(opts)?, opts.hom_cap)?;
            let chains = build_chain_complex(&x, &pi)?;
            Loaded {
                space: Some((x, pi)),
                chains,
            }
        }
    };
    let mode = match opts.d2_mode {
        D2::Exact => D2Mode::Exact,
        D2::Coeff => {
            let mut ms = Vec::new();
            for s in if opts.coeff.is_empty() {
                vec!["Z".to_string()]
            } else {
                opts.coeff.clone()
            } {
                let variance = if Path::new(&s).exists() {
                    let (t, n) = read_input(Some(&s))?;
                    format::parse_module(&t, &n)?.variance
                } else {
                    Variance::Left
                };
                ms.push(coefficient(&s, variance, &loaded)?);
            }
            D2Mode::Coefficients(ms)
        }
    };
    let d2 = verify_d_squared(&loaded.chains, &mode)?;
    if !d2.passed() {
        return Err(Failure {
            code: 1,
            message: format!("{name}: {d2}"),
        });
    }
    lines.push(d2.to_string());
    let records = json!({ "command": "validate", "valid": true, "d2_checked": d2.checked });
    Ok(Report::decided(lines.join("\n"), records))
}

fn pi_dump(input: Option<&str>, opts: &Opts) -> Run<Report> {
    let (text, name) = read_input(input)?;
    let x = format::parse_fibred(&text, &name)?;
    check_complex(&x, &name)?;
    let pi = build_pi(&x, policy(opts)?, opts.hom_cap)?;
    let cat = pi.category();
    let finiteness = pi.is_finite(opts.hom_cap);
    let mut table = format::emit_category_file(cat);
    for (k, g) in cat.generators().iter().enumerate() {
        let l = pi.letter(GenId(k));
        table.push_str(&format!("# {} = {}\n", g.name, x.display_letter(l)));
    }
    table.push_str(&format!("# finiteness: {finiteness}"));
    let records = json!({
        "command": "pi",
        "objects": cat.object_ids().map(|o| cat.object_name(o).to_string()).collect::<Vec<_>>(),
        "generators": cat.generators().iter().enumerate().map(|(k, g)| json!({
            "name": g.name,
            "source": cat.object_name(g.source),
            "target": cat.object_name(g.target),
            "letter": x.display_letter(pi.letter(GenId(k))),
        })).collect::<Vec<_>>(),
        "relations": cat.relations().len(),
        "tracks": cat.tracks().len(),
        "finiteness": finiteness.to_string(),
    });
    Ok(Report::decided(table, records))
}

fn homology_cmd(input: Option<&str>, opts: &Opts, variance: Variance) -> Run<Report> {
    let loaded = load(input, opts)?;
    let mut table = Vec::new();
    let mut recs = Vec::new();
    for (spec, m) in coefficients(opts, variance, &loaded)? {
        let h = match variance {
            Variance::Left => homology(&loaded.chains, &m)?,
            Variance::Right => cohomology(&loaded.chains, &m)?,
        };
        table.push(format!("coefficients {spec}"));
        table.push(h.to_string().trim_end().to_string());
        recs.push(json!({
            "coefficients": spec,
            "groups": h.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        }));
    }
    let command = if variance == Variance::Left {
        "homology"
    } else {
        "cohomology"
    };
    Ok(Report::decided(
        table.join("\n"),
        json!({ "command": command, "results": recs }),
    ))
}

fn total_homology_cmd(input: Option<&str>, opts: &Opts) -> Run<Report> {
    let loaded = load(input, opts)?;
    let h = total_homology(&loaded.chains, opts.hom_cap)?;
    let degrees: Vec<Value> = h
        .degrees
        .iter()
        .map(|m| {
            json!({
                "values": m.values.iter().map(|v| v.canonical().to_string()).collect::<Vec<_>>(),
                "actions": m.actions.iter().map(matrix_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let records = json!({
        "command": "total-homology",
        "objects": h.objects,
        "generators": h.generators,
        "degrees": degrees,
    });
    Ok(Report::decided(
        h.to_string().trim_end().to_string(),
        records,
    ))
}

fn euler_cmd(input: Option<&str>, opts: &Opts) -> Run<Report> {
    let loaded = load(input, opts)?;
    let mut table = Vec::new();
    let mut recs = Vec::new();
    for (spec, m) in coefficients(opts, Variance::Left, &loaded)? {
        let e = euler_characteristics(&loaded.chains, &m)?;
        table.push(format!("coefficients {spec}"));
        table.push(format!("chi = {}", e.homology));
        table.push(e.to_string());
        recs.push(json!({ "coefficients": spec, "chains": e.chains, "homology": e.homology }));
    }
    Ok(Report::decided(
        table.join("\n"),
        json!({ "command": "euler", "results": recs }),
    ))
}

/// Source, target and the chain map between them.
fn load_map(
    source: &str,
    target: &str,
    map: Option<&str>,
    opts: &Opts,
) -> Run<(Loaded, Loaded, ChainMap)> {
    let s = load(Some(source), opts)?;
    let t = load(Some(target), opts)?;
    let f = match map {
        Some(path) => {
            let (text, name) = read_input(Some(path))?;
            let (functor, maps) = format::parse_map(&text, &name)?.build(&s.chains, &t.chains)?;
            chain_map_from_cellular(&s.chains, &t.chains, functor, maps)?
        }
        None => match (&s.space, &t.space) {
            (Some((x, xp)), Some((y, yp))) => inclusion(x, xp, y, yp)?,
            _ => {
                return Err(Failure {
                    code: 1,
                    message: "chains dumps need an explicit --map".into(),
                })
            }
        },
    };
    Ok((s, t, f))
}

fn whitehead_cmd(source: &str, target: &str, map: Option<&str>, opts: &Opts) -> Run<Report> {
    let (s, t, f) = load_map(source, target, map, opts)?;
    let modules: Vec<CatModule> = if opts.coeff.is_empty() {
        Vec::new()
    } else {
        coefficients(opts, Variance::Left, &t)?
            .into_iter()
            .map(|(_, m)| m)
            .collect()
    };
    let v = whitehead_check(&s.chains, &t.chains, &f, &modules, opts.hom_cap)?;
    let (status, why) = match &v.status {
        WhiteheadStatus::Equivalence => ("equivalence", String::new()),
        WhiteheadStatus::NotEquivalence(w) => ("not-equivalence", w.clone()),
        WhiteheadStatus::Partial => ("partial", String::new()),
    };
    let records = json!({
        "command": "whitehead-check",
        "status": status,
        "reason": why,
        "checks": v.checks,
        "certificate": v.certificate.is_some(),
    });
    Ok(Report {
        table: v.to_string(),
        records,
        decided: v.status != WhiteheadStatus::Partial,
    })
}

fn class_json(c: &KClass) -> Value {
    match c {
        KClass::Trivial { witness } => {
            json!({ "class": "trivial", "witness": witness.to_string() })
        }
        KClass::Unknown => json!({ "class": "unknown" }),
        KClass::RepresentativeOnly => json!({ "class": "representative-only" }),
    }
}

fn torsion_report(t: &TorsionRepresentative, opts: &Opts) -> Run<Report> {
    let verified = t.verify()?;
    let class = decide_torsion(t, opts.budget, opts.hom_cap)?;
    let matrix = format::emit_zpi_matrix(&t.category, &t.matrix, &t.row_labels, &t.col_labels);
    let inverse = format::emit_zpi_matrix(&t.category, &t.inverse, &t.col_labels, &t.row_labels);
    let mut table = format!(
        "class: {class}\ninverse verified: {verified}\nrepresentative {}x{}\n{matrix}",
        t.matrix.row_count(),
        t.matrix.col_count()
    );
    table.push_str("inverse\n");
    table.push_str(&inverse);
    let mut records = class_json(&class);
    records["command"] = json!("torsion");
    records["verified"] = json!(verified);
    records["matrix"] = json!(matrix);
    records["inverse"] = json!(inverse);
    Ok(Report {
        table: table.trim_end().to_string(),
        records,
        decided: matches!(class, KClass::Trivial { .. }),
    })
}

fn torsion_cmd(source: &str, target: Option<&str>, map: Option<&str>, opts: &Opts) -> Run<Report> {
    let mut quotient = false;
    let t = match target {
        None => {
            let c = load(Some(source), opts)?.chains;
            let k = find_chain_contraction(&c, opts.hom_cap)?;
            torsion_of_contractible(&c, &k)?
        }
        Some(target) => {
            let (s, t, f) = load_map(source, target, map, opts)?;
            let (sc, tc, f) = match whitehead_check(&s.chains, &t.chains, &f, &[], opts.hom_cap) {
                Err(e) if e.is_undecidable() => {
                    quotient = true;
                    let tq = t.chains.trivial_quotient()?;
                    (
                        s.chains.trivial_quotient()?,
                        tq,
                        f.trivial_quotient(&t.chains)?,
                    )
                }
                Err(e) => return Err(e.into()),
                Ok(_) => (s.chains, t.chains, f),
            };
            let v = whitehead_check(&sc, &tc, &f, &[], opts.hom_cap)?;
            let Some(cert) = v.certificate else {
                return Err(match v.status {
                    WhiteheadStatus::NotEquivalence(why) => Failure {
                        code: 1,
                        message: format!("not a homotopy equivalence: {why}"),
                    },
                    _ => Error::Undecidable("no equivalence certificate".into()).into(),
                });
            };
            torsion_of_equivalence(&sc, &tc, &f, &cert)?
        }
    };
    let mut r = torsion_report(&t, opts)?;
    if quotient {
        r.table = format!("over the trivial quotient\n{}", r.table);
        r.records["quotient"] = json!("trivial");
    }
    Ok(r)
}

fn finiteness_cmd(input: Option<&str>) -> Run<Report> {
    let (text, name) = read_input(input)?;
    let d = format::parse_domination(&text, &name)?;
    let k = finiteness_obstruction(&d)?;
    let mut table = vec![format!("class: {}", k.class)];
    let mut idempotents = Vec::new();
    for (n, e) in k.idempotents.iter().enumerate() {
        let labels: Vec<String> = (0..e.row_count()).map(|i| format!("b{i}")).collect();
        let text = format::emit_zpi_matrix(&k.category, e, &labels, &labels);
        table.push(format!("degree {n} ({} generators)", e.row_count()));
        if !text.is_empty() {
            table.push(text.trim_end().to_string());
        }
        idempotents.push(text);
    }
    if !k.ranks.is_empty() {
        table.push(format!(
            "image ranks: {}",
            k.ranks
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    let mut records = class_json(&k.class);
    records["command"] = json!("finiteness");
    records["idempotents"] = json!(idempotents);
    records["ranks"] = json!(k.ranks);
    records["witnesses"] = Value::Array(k.witnesses.iter().map(matrix_json).collect());
    Ok(Report {
        table: table.join("\n"),
        records,
        decided: matches!(k.class, KClass::Trivial { .. }),
    })
}

fn usage(message: String) -> Failure {
    Failure { code: 3, message }
}

fn gen(name: &str, args: &[String]) -> Run<String> {
    let dim = |k: usize| -> Run<usize> {
        args.get(k)
            .ok_or_else(|| usage(format!("`gen {name}` needs a dimension")))?
            .parse()
            .map_err(|_| usage(format!("`gen {name}`: bad dimension")))
    };
    let x = match name {
        "sphere" => complex::sphere(dim(0)?),
        "rp2" => complex::projective_plane(),
        "torus" => complex::torus(),
        "klein" => complex::klein_bottle(),
        "z2-sphere" => {
            let n = dim(0)?;
            match args.get(1).map(String::as_str).unwrap_or("antipodal") {
                "antipodal" => complex::antipodal_sphere(n),
                "trivial" => complex::trivial_action_sphere(n),
                "reflection" if n == 1 => complex::reflection_circle(),
                "reflection" if n == 2 => complex::reflection_sphere(),
                "reflection" => return Err(usage("reflection spheres exist for n = 1, 2".into())),
                other => return Err(usage(format!("unknown action `{other}`"))),
            }
        }
        "z2-point" => {
            let f = z2_orbit_category();
            let fibre = f.object(args.first().map(String::as_str).unwrap_or("G/G"))?;
            complex::point(f, fibre)
        }
        other => return Err(usage(format!("unknown generator `{other}`"))),
    };
    Ok(format::emit_fibred(&x))
}

fn orbit(table: &str, subgroups: &str) -> Run<String> {
    let text = if Path::new(table).is_file() {
        std::fs::read_to_string(table).map_err(|e| io_failure(table, e))?
    } else {
        table.to_string()
    };
    let t = parse_group_table(&text)?;
    let subs = subgroups
        .split(';')
        .map(|s| {
            s.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| usage(format!("bad subgroup element `{x}`")))
                })
                .collect::<Run<Vec<usize>>>()
        })
        .collect::<Run<Vec<_>>>()?;
    let cat: PresentedCategory = orbit_category(&t, &subs)?;
    Ok(format::emit_category_file(&cat))
}

fn emit(r: Report, format: Format) -> Run<u8> {
    match format {
        Format::Table => println!("{}", r.table),
        Format::Records => println!(
            "{}",
            serde_json::to_string_pretty(&r.records).map_err(|e| usage(e.to_string()))?
        ),
    }
    Ok(if r.decided { 0 } else { 2 })
}

fn run(cli: Cli) -> Run<u8> {
    match cli.command {
        Command::Validate { input, opts } => emit(validate(input.as_deref(), &opts)?, opts.format),
        Command::Pi { input, opts } => emit(pi_dump(input.as_deref(), &opts)?, opts.format),
        Command::Homology { input, opts } => emit(
            homology_cmd(input.as_deref(), &opts, Variance::Left)?,
            opts.format,
        ),
        Command::Cohomology { input, opts } => emit(
            homology_cmd(input.as_deref(), &opts, Variance::Right)?,
            opts.format,
        ),
        Command::TotalHomology { input, opts } => {
            emit(total_homology_cmd(input.as_deref(), &opts)?, opts.format)
        }
        Command::Euler { input, opts } => emit(euler_cmd(input.as_deref(), &opts)?, opts.format),
        Command::WhiteheadCheck {
            source,
            target,
            map,
            opts,
        } => emit(
            whitehead_cmd(&source, &target, map.as_deref(), &opts)?,
            opts.format,
        ),
        Command::Torsion {
            source,
            target,
            map,
            opts,
        } => emit(
            torsion_cmd(&source, target.as_deref(), map.as_deref(), &opts)?,
            opts.format,
        ),
        Command::Finiteness { input, opts } => emit(finiteness_cmd(input.as_deref())?, opts.format),
        Command::Gen { name, args } => {
            print!("{}", gen(&name, &args)?);
            Ok(0)
        }
        Command::OrbitCategory { table, subgroups } => {
            print!("{}", orbit(&table, &subgroups)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
