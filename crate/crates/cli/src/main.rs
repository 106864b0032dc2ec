mod fmt;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use kunzcone_core::abelian::{make_group, quotient_map, subgroup_generated, FiniteAbelianGroup};
use kunzcone_core::cone::{Face, DEFAULT_FACE_CAP};
use kunzcone_core::ehrhart::{
    count_group_cone_points, count_multiplicity_genus, fit_quasipolynomial, leading_gamma,
    leading_lambda, DEFAULT_COUNT_GUARD,
};
use kunzcone_core::groupcone::{build_group_cone, GroupCone};
use kunzcone_core::kunzpoly::{build_kunz_polyhedron, lift_oversemigroup, DEFAULT_WITNESS_BOUND_FACTOR};
use kunzcone_core::numsgp::{
    apery_bfs, apery_naive, enumerate_by_multiplicity_genus, enumerate_oversemigroups,
    kunz_coords, AperySet, NumericalSemigroup, DEFAULT_GAP_GUARD, DEFAULT_GENUS_GUARD,
};
use kunzcone_core::overcone::{build_oversemigroup_cone, DEFAULT_SLICE_GUARD};
use kunzcone_core::poset::KunzPoset;

#[derive(Parser)]
#[command(
    name = "kunzcone",
    version,
    about = "Exact-arithmetic toolkit for group cones, Kunz polyhedra, and oversemigroup cones"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Group cone construction, rays, faces, and posets
    Groupcone {
        #[command(subcommand)]
        cmd: GroupconeCmd,
    },
    /// Kunz polyhedron: coordinates, faces, witnesses, lifting
    Kunz {
        #[command(subcommand)]
        cmd: KunzCmd,
    },
    /// Oversemigroup cone: rays, maps, slice counts
    Overcone {
        #[command(subcommand)]
        cmd: OverconeCmd,
    },
    /// Numerical semigroups: Apery sets and enumerations
    Sgp {
        #[command(subcommand)]
        cmd: SgpCmd,
    },
    /// Leading quasipolynomial coefficients from cone volumes
    Leading {
        #[command(subcommand)]
        cmd: LeadingCmd,
    },
    /// Lattice point counters
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
    /// Fit an exact quasipolynomial to a series file (lines: `g value`)
    Fit {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        period: u64,
        #[arg(long)]
        series: PathBuf,
    },
    /// Regenerate the reference artifacts into a directory
    Repro {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GroupconeCmd {
    /// Print the inequality description
    Build { group: String },
    /// Enumerate the extreme rays
    Rays { group: String },
    /// Enumerate the face lattice
    Faces {
        group: String,
        #[arg(long)]
        max_faces: Option<usize>,
    },
    /// Kunz subgroup and poset of a face, located by ray or equality set
    Poset {
        group: String,
        #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "equalities")]
        ray: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        equalities: Option<Vec<usize>>,
    },
    /// Smallest face whose equalities realize the given relations
    FaceOfPoset {
        group: String,
        /// Relations like `1<6;3<2` on quotient element indices
        #[arg(long)]
        relations: String,
        /// Kunz subgroup elements (parent element indices)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subgroup: Option<Vec<usize>>,
    },
    /// Orbit of a face under the unit action
    Orbit {
        group: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        ray: Vec<i64>,
    },
}

#[derive(Subcommand)]
enum KunzCmd {
    /// Print the affine inequality description and vertex
    Polyhedron { m: u64 },
    /// Kunz coordinates of the semigroup generated by the arguments
    Coords {
        m: u64,
        #[arg(required = true)]
        generators: Vec<u64>,
    },
    /// Face record (with witness status) for a cone ray direction
    Face {
        m: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        ray: Vec<i64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Witness decision for one ray or for every extreme ray
    Witness {
        m: u64,
        #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "all_rays")]
        ray: Option<Vec<i64>>,
        #[arg(long)]
        all_rays: bool,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Witness consistency across the unit orbit of a face
    Orbit {
        m: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        ray: Vec<i64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Lift to a semigroup with multiplicity n and the same Kunz poset
    Lift {
        n: u64,
        #[arg(required = true)]
        generators: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum OverconeCmd {
    /// Enumerate the extreme rays
    Rays { n: u64 },
    /// Map a point of the y_1 = 0 face onto the group cone
    Map {
        n: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        point: Vec<String>,
    },
    /// Split a point into its y_1 = 0 part and the diagonal ray part
    Decompose {
        n: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        point: Vec<String>,
    },
    /// Count integer points on the slice with last coordinate q
    Count { n: u64, q: u64 },
}

#[derive(Subcommand)]
enum SgpCmd {
    /// Apery set via the queue relaxation
    Apery {
        m: u64,
        #[arg(required = true)]
        generators: Vec<u64>,
    },
    /// Apery set via the scanning baseline
    AperyNaive {
        m: u64,
        #[arg(required = true)]
        generators: Vec<u64>,
    },
    /// Enumerate (or count) the oversemigroups
    Oversemigroups {
        #[arg(required = true)]
        generators: Vec<u64>,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        max_gaps: Option<usize>,
    },
    /// Enumerate semigroups with fixed multiplicity and genus
    Enumerate { m: u64, genus: u64 },
    /// Time both Apery implementations on preset instances (CSV)
    Benchmark,
}

#[derive(Subcommand)]
enum LeadingCmd {
    /// Top coefficient of the multiplicity-genus counter
    Gamma { m: u64 },
    /// Top coefficient of the oversemigroup counter
    Lambda { n: u64 },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Integer points of the group cone with coordinate sum g
    #[command(name = "l", alias = "L")]
    L { m: u64, g: u64 },
    /// Semigroups with multiplicity m and genus g
    #[command(name = "n", alias = "N")]
    N { m: u64, g: u64 },
}

/// Guard values, overridable through the KUNZCONE_GUARD environment variable.
struct Guards {
    faces: usize,
    gaps: usize,
    genus: u64,
    slice: usize,
    count: u64,
}

impl Guards {
    fn from_env() -> Result<Self> {
        let mut g = Guards {
            faces: DEFAULT_FACE_CAP,
            gaps: DEFAULT_GAP_GUARD,
            genus: DEFAULT_GENUS_GUARD,
            slice: DEFAULT_SLICE_GUARD,
            count: DEFAULT_COUNT_GUARD,
        };
        if let Ok(raw) = std::env::var("KUNZCONE_GUARD") {
            let cap: usize = raw
                .trim()
                .parse()
                .map_err(|_| anyhow!("KUNZCONE_GUARD must be a positive integer, got {raw:?}"))?;
            g.faces = cap;
            g.gaps = cap;
            g.genus = cap as u64;
            g.slice = cap;
            g.count = cap as u64;
        }
        Ok(g)
    }
}

fn parse_group(raw: &str) -> Result<FiniteAbelianGroup> {
    let cleaned = raw.trim().to_ascii_lowercase();
    let mut factors = Vec::new();
    for part in cleaned.split('x') {
        let digits = part.strip_prefix('z').unwrap_or(part);
        let f: u64 = digits
            .parse()
            .map_err(|_| anyhow!("cannot parse group component {part:?} (try Z6 or 2x2)"))?;
        factors.push(f);
    }
    Ok(make_group(&factors)?)
}

fn parse_rational(raw: &str) -> Result<BigRational> {
    let raw = raw.trim();
    if let Some((num, den)) = raw.split_once('/') {
        let n: BigInt = num.parse().context("rational numerator")?;
        let d: BigInt = den.parse().context("rational denominator")?;
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = raw.parse().context("integer value")?;
        Ok(BigRational::from_integer(n))
    }
}

fn parse_relations(raw: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for piece in raw.split([';', ',']) {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (a, b) = piece
            .split_once('<')
            .ok_or_else(|| anyhow!("relation {piece:?} must look like a<b"))?;
        out.push((a.trim().parse()?, b.trim().parse()?));
    }
    Ok(out)
}

fn ray_face(gc: &GroupCone, ray: &[i64]) -> Result<Face> {
    let dir: Vec<BigInt> = ray.iter().map(|&c| BigInt::from(c)).collect();
    let idx = gc
        .cone()
        .ray_index(&dir)
        .ok_or_else(|| anyhow!("{ray:?} is not an extreme ray of this cone"))?;
    Ok(gc.cone().face_from_rays(&[idx])?)
}

fn emit(format: Format, text: impl FnOnce() -> String, jsonv: impl FnOnce() -> Value) {
    match format {
        Format::Json => println!("{}", jsonv()),
        Format::Text | Format::Csv => println!("{}", text().trim_end()),
    }
}

fn fraction_report(name: &str, value: &BigRational) -> String {
    format!(
        "{name} = {} = {}",
        fmt::plain_fraction(value),
        fmt::factored_fraction(value)
    )
}

fn gens_text(s: &NumericalSemigroup) -> String {
    format!(
        "<{}>",
        s.generators()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn run(cli: Cli) -> Result<()> {
    let guards = Guards::from_env()?;
    let format = cli.format;
    match cli.command {
        Command::Groupcone { cmd } => run_groupcone(cmd, format, &guards),
        Command::Kunz { cmd } => run_kunz(cmd, format, &guards),
        Command::Overcone { cmd } => run_overcone(cmd, format, &guards),
        Command::Sgp { cmd } => run_sgp(cmd, format, &guards),
        Command::Leading { cmd } => {
            let (name, value) = match cmd {
                LeadingCmd::Gamma { m } => ("gamma", leading_gamma(m)?),
                LeadingCmd::Lambda { n } => ("lambda", leading_lambda(n)?),
            };
            emit(
                format,
                || fraction_report(name, &value),
                || {
                    json!({
                        name: fmt::plain_fraction(&value),
                        "factored": fmt::factored_fraction(&value),
                    })
                },
            );
            Ok(())
        }
        Command::Count { cmd } => {
            let (label, value) = match cmd {
                CountCmd::L { m, g } => (
                    format!("L_{m}({g})"),
                    count_group_cone_points(m, g, guards.count)?,
                ),
                CountCmd::N { m, g } => (
                    format!("N_{m}({g})"),
                    count_multiplicity_genus(m, g, guards.count)?,
                ),
            };
            emit(
                format,
                || format!("{label} = {value}"),
                || json!({ "count": value }),
            );
            Ok(())
        }
        Command::Fit {
            degree,
            period,
            series,
        } => run_fit(degree, period, &series, format),
        Command::Repro { out } => repro::run(&out),
    }
}

fn run_groupcone(cmd: GroupconeCmd, format: Format, guards: &Guards) -> Result<()> {
    match cmd {
        GroupconeCmd::Build { group } => {
            let gc = build_group_cone(parse_group(&group)?)?;
            let rows: Vec<Vec<BigInt>> = gc.cone().hcone().rows().to_vec();
            emit(
                format,
                || fmt::matrix_text(&rows),
                || fmt::hcone_json(gc.cone().hcone()),
            );
        }
        GroupconeCmd::Rays { group } => {
            let gc = build_group_cone(parse_group(&group)?)?;
            let rows: Vec<Vec<BigInt>> = gc
                .cone()
                .rays()
                .iter()
                .map(|r| r.direction.clone())
                .collect();
            emit(format, || fmt::matrix_text(&rows), || fmt::rays_json(gc.cone()));
        }
        GroupconeCmd::Faces { group, max_faces } => {
            let gc = build_group_cone(parse_group(&group)?)?;
            let lattice = gc.cone().face_lattice(max_faces.unwrap_or(guards.faces))?;
            let records: Vec<Value> = lattice
                .faces()
                .iter()
                .map(|f| Ok(fmt::face_pair_json(&gc.face_to_pair(f)?)))
                .collect::<Result<_>>()?;
            emit(
                format,
                || {
                    let mut out = format!("f-vector: {:?}\n", lattice.f_vector());
                    for face in lattice.faces() {
                        out.push_str(&format!(
                            "dim {} rays {:?} equalities {:?}\n",
                            face.dim(),
                            face.ray_set(),
                            face.equality_set()
                        ));
                    }
                    out
                },
                || json!({ "f_vector": lattice.f_vector(), "faces": records }),
            );
        }
        GroupconeCmd::Poset {
            group,
            ray,
            equalities,
        } => {
            let gc = build_group_cone(parse_group(&group)?)?;
            let face = match (ray, equalities) {
                (Some(ray), None) => ray_face(&gc, &ray)?,
                (None, Some(eqs)) => gc.cone().face_from_equalities(&eqs)?,
                _ => bail!("provide exactly one of --ray or --equalities"),
            };
            let pair = gc.face_to_pair(&face)?;
            emit(
                format,
                || {
                    format!(
                        "dim {}\nkunz_subgroup {:?}\natoms {:?}\nrelations {:?}\ncovers {:?}",
                        face.dim(),
                        pair.kunz_subgroup.elements(),
                        pair.poset.atoms(),
                        pair.poset.relation_pairs(),
                        pair.poset.covers(),
                    )
                },
                || fmt::face_pair_json(&pair),
            );
        }
        GroupconeCmd::FaceOfPoset {
            group,
            relations,
            subgroup,
        } => {
            let g = parse_group(&group)?;
            let gc = build_group_cone(g.clone())?;
            let sub = subgroup_generated(&g, &subgroup.unwrap_or_default())?;
            let (quotient, _) = quotient_map(&g, &sub)?;
            let poset = KunzPoset::from_relations(quotient, &parse_relations(&relations)?)?;
            let realized = gc.pair_to_face(&sub, &poset)?;
            emit(
                format,
                || {
                    format!(
                        "dim {}\nrays {:?}\nstrictly_refined {}\nrealized_relations {:?}",
                        realized.face.dim(),
                        realized.face.ray_set(),
                        realized.strictly_refined,
                        realized.realized.poset.relation_pairs(),
                    )
                },
                || {
                    json!({
                        "face": fmt::face_json(&realized.face),
                        "strictly_refined": realized.strictly_refined,
                        "realized": fmt::face_pair_json(&realized.realized),
                    })
                },
            );
        }
        GroupconeCmd::Orbit { group, ray } => {
            let gc = build_group_cone(parse_group(&group)?)?;
            let face = ray_face(&gc, &ray)?;
            let orbit = gc.face_orbit(&face)?;
            emit(
                format,
                || {
                    orbit
                        .iter()
                        .map(|(u, f)| format!("unit {u}: rays {:?}", f.ray_set()))
                        .collect::<Vec<_>>()
                        .join("\n")
                },
                || {
                    Value::Array(
                        orbit
                            .iter()
                            .map(|(u, f)| json!({ "unit": u, "face": fmt::face_json(f) }))
                            .collect(),
                    )
                },
            );
        }
    }
    Ok(())
}

fn kunz_face_report(m: u64, ray: &[i64], bound: Option<u64>, format: Format) -> Result<()> {
    let poly = build_kunz_polyhedron(m)?;
    let face = ray_face(poly.group_cone(), ray)?;
    let pair = poly.group_cone().face_to_pair(&face)?;
    let status = poly.face_witness(&face, bound.unwrap_or(DEFAULT_WITNESS_BOUND_FACTOR * m))?;
    emit(
        format,
        || {
            format!(
                "dim {}\nkunz_subgroup {:?}\n{}",
                face.dim(),
                pair.kunz_subgroup.elements(),
                fmt::witness_text(&status)
            )
        },
        || {
            let mut v = fmt::face_pair_json(&pair);
            v["witness"] = fmt::witness_json(&status);
            v
        },
    );
    Ok(())
}

fn run_kunz(cmd: KunzCmd, format: Format, _guards: &Guards) -> Result<()> {
    match cmd {
        KunzCmd::Polyhedron { m } => {
            let poly = build_kunz_polyhedron(m)?;
            emit(
                format,
                || {
                    let mut out = format!(
                        "vertex: [{}]\n",
                        poly.vertex()
                            .iter()
                            .map(fmt::plain_fraction)
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    for row in poly.rows() {
                        out.push_str(&format!(
                            "[{}] . z + {} >= 0\n",
                            row.coeffs
                                .iter()
                                .map(ToString::to_string)
                                .collect::<Vec<_>>()
                                .join(", "),
                            fmt::plain_fraction(&row.constant)
                        ));
                    }
                    out
                },
                || {
                    json!({
                        "m": m,
                        "vertex": poly.vertex().iter().map(fmt::plain_fraction).collect::<Vec<_>>(),
                        "rows": poly
                            .rows()
                            .iter()
                            .map(|r| json!({
                                "coeffs": r.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                                "constant": fmt::plain_fraction(&r.constant),
                                "label": fmt::label_json(&r.label),
                            }))
                            .collect::<Vec<_>>(),
                    })
                },
            );
        }
        KunzCmd::Coords { m, generators } => {
            let s = NumericalSemigroup::new(&generators)?;
            let coords = kunz_coords(&s, m)?;
            emit(
                format,
                || format!("{coords:?}"),
                || json!({ "m": m, "coords": coords }),
            );
        }
        KunzCmd::Face { m, ray, bound } => kunz_face_report(m, &ray, bound, format)?,
        KunzCmd::Witness {
            m,
            ray,
            all_rays,
            bound,
        } => match ray {
            Some(ray) => kunz_face_report(m, &ray, bound, format)?,
            None => {
                if !all_rays {
                    bail!("provide --ray or --all-rays");
                }
                let poly = build_kunz_polyhedron(m)?;
                let bound = bound.unwrap_or(DEFAULT_WITNESS_BOUND_FACTOR * m);
                let mut lines = Vec::new();
                let mut records = Vec::new();
                for idx in 0..poly.group_cone().cone().rays().len() {
                    let face = poly.group_cone().cone().face_from_rays(&[idx])?;
                    let dir = &poly.group_cone().cone().rays()[idx].direction;
                    let status = poly.face_witness(&face, bound)?;
                    lines.push(format!("{dir:?}: {}", fmt::witness_text(&status)));
                    records.push(json!({
                        "ray": dir.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "witness": fmt::witness_json(&status),
                    }));
                }
                emit(format, || lines.join("\n"), || Value::Array(records));
            }
        },
        KunzCmd::Orbit { m, ray, bound } => {
            let poly = build_kunz_polyhedron(m)?;
            let face = ray_face(poly.group_cone(), &ray)?;
            let report = poly.orbit_witness_report(&face, bound.unwrap_or(DEFAULT_WITNESS_BOUND_FACTOR * m))?;
            emit(
                format,
                || {
                    let mut out = format!("consistent: {}\n", report.consistent);
                    for ((u, f), status) in report.orbit.iter().zip(&report.statuses) {
                        out.push_str(&format!(
                            "unit {u}: rays {:?} -> {}\n",
                            f.ray_set(),
                            fmt::witness_text(status)
                        ));
                    }
                    for (u, t) in &report.transported {
                        out.push_str(&format!("transported by {u}: {}\n", gens_text(t)));
                    }
                    out
                },
                || {
                    json!({
                        "consistent": report.consistent,
                        "orbit": report
                            .orbit
                            .iter()
                            .zip(&report.statuses)
                            .map(|((u, f), s)| json!({
                                "unit": u,
                                "face": fmt::face_json(f),
                                "witness": fmt::witness_json(s),
                            }))
                            .collect::<Vec<_>>(),
                        "transported": report
                            .transported
                            .iter()
                            .map(|(u, t)| json!({ "unit": u, "semigroup": fmt::semigroup_json(t) }))
                            .collect::<Vec<_>>(),
                    })
                },
            );
        }
        KunzCmd::Lift { n, generators } => {
            let s = NumericalSemigroup::new(&generators)?;
            let t = lift_oversemigroup(&s, n)?;
            emit(
                format,
                || {
                    format!(
                        "lift: {} (multiplicity {}, genus {})",
                        gens_text(&t),
                        t.multiplicity(),
                        t.genus()
                    )
                },
                || fmt::semigroup_json(&t),
            );
        }
    }
    Ok(())
}

fn run_overcone(cmd: OverconeCmd, format: Format, guards: &Guards) -> Result<()> {
    match cmd {
        OverconeCmd::Rays { n } => {
            let oc = build_oversemigroup_cone(n)?;
            let rows: Vec<Vec<BigInt>> = oc
                .cone()
                .rays()
                .iter()
                .map(|r| r.direction.clone())
                .collect();
            emit(format, || fmt::matrix_text(&rows), || fmt::rays_json(oc.cone()));
        }
        OverconeCmd::Map { n, point } => {
            let oc = build_oversemigroup_cone(n)?;
            let y: Vec<BigRational> = point
                .iter()
                .map(|p| parse_rational(p))
                .collect::<Result<_>>()?;
            let x = oc.map_to_group_cone(&y)?;
            emit(
                format,
                || {
                    format!(
                        "x = [{}]",
                        x.iter().map(fmt::plain_fraction).collect::<Vec<_>>().join(", ")
                    )
                },
                || json!({ "x": x.iter().map(fmt::plain_fraction).collect::<Vec<_>>() }),
            );
        }
        OverconeCmd::Decompose { n, point } => {
            let oc = build_oversemigroup_cone(n)?;
            let y: Vec<BigRational> = point
                .iter()
                .map(|p| parse_rational(p))
                .collect::<Result<_>>()?;
            let (yp, t) = oc.decompose_point(&y)?;
            emit(
                format,
                || {
                    format!(
                        "y' = [{}]\nt = {}",
                        yp.iter().map(fmt::plain_fraction).collect::<Vec<_>>().join(", "),
                        fmt::plain_fraction(&t)
                    )
                },
                || {
                    json!({
                        "y_prime": yp.iter().map(fmt::plain_fraction).collect::<Vec<_>>(),
                        "t": fmt::plain_fraction(&t),
                    })
                },
            );
        }
        OverconeCmd::Count { n, q } => {
            let oc = build_oversemigroup_cone(n)?;
            let count = oc.slice_count(q, guards.slice)?;
            let coprime = {
                let (mut a, mut b) = (n, q);
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a == 1
            };
            emit(
                format,
                || {
                    let mut out = format!("count = {count}");
                    if !coprime {
                        out.push_str("  (gcd(n, q) > 1: no semigroup interpretation)");
                    }
                    out
                },
                || {
                    json!({
                        "n": n,
                        "q": q,
                        "count": count,
                        "semigroup_interpretation": coprime,
                    })
                },
            );
        }
    }
    Ok(())
}

fn emit_apery(ap: &AperySet, format: Format) {
    emit(
        format,
        || format!("{:?}", ap.elements),
        || json!({ "modulus": ap.modulus, "elements": ap.elements }),
    );
}

fn run_sgp(cmd: SgpCmd, format: Format, guards: &Guards) -> Result<()> {
    match cmd {
        SgpCmd::Apery { m, generators } => emit_apery(&apery_bfs(m, &generators)?, format),
        SgpCmd::AperyNaive { m, generators } => {
            emit_apery(&apery_naive(m, &generators)?, format)
        }
        SgpCmd::Oversemigroups {
            generators,
            count,
            max_gaps,
        } => {
            let s = NumericalSemigroup::new(&generators)?;
            let all = enumerate_oversemigroups(&s, max_gaps.unwrap_or(guards.gaps))?;
            if count {
                emit(
                    format,
                    || format!("{}", all.len()),
                    || json!({ "count": all.len() }),
                );
            } else {
                emit(
                    format,
                    || all.iter().map(gens_text).collect::<Vec<_>>().join("\n"),
                    || Value::Array(all.iter().map(fmt::semigroup_json).collect()),
                );
            }
        }
        SgpCmd::Enumerate { m, genus } => {
            let all = enumerate_by_multiplicity_genus(m, genus, guards.genus)?;
            emit(
                format,
                || {
                    let mut out = format!("count = {}\n", all.len());
                    for s in &all {
                        out.push_str(&gens_text(s));
                        out.push('\n');
                    }
                    out
                },
                || Value::Array(all.iter().map(fmt::semigroup_json).collect()),
            );
        }
        SgpCmd::Benchmark => {
            println!("instance,algorithm,wall_time_ms");
            for gens in [
                vec![1000u64, 1001],
                vec![10000, 10001],
                vec![27143, 30949, 35207],
            ] {
                let m = gens[0];
                let label = gens
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                let t = std::time::Instant::now();
                let fast = apery_bfs(m, &gens)?;
                let fast_ms = t.elapsed().as_secs_f64() * 1e3;
                let t = std::time::Instant::now();
                let slow = apery_naive(m, &gens)?;
                let slow_ms = t.elapsed().as_secs_f64() * 1e3;
                anyhow::ensure!(fast == slow, "implementations disagree on {label}");
                println!("<{label}>,queue,{fast_ms:.3}");
                println!("<{label}>,scan,{slow_ms:.3}");
            }
        }
    }
    Ok(())
}

fn run_fit(degree: usize, period: u64, series: &PathBuf, format: Format) -> Result<()> {
    let raw = std::fs::read_to_string(series)
        .with_context(|| format!("reading series file {}", series.display()))?;
    let mut samples: Vec<(u64, BigInt)> = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let g: u64 = parts
            .next()
            .ok_or_else(|| anyhow!("line {}: missing index", lineno + 1))?
            .parse()?;
        let v: BigInt = parts
            .next()
            .ok_or_else(|| anyhow!("line {}: missing value", lineno + 1))?
            .parse()?;
        samples.push((g, v));
    }
    let q = fit_quasipolynomial(&samples, degree, period)?;
    let leading = q.leading_row();
    let constant = q.leading_constant();
    match format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "degree": q.degree(),
                    "period": q.period(),
                    "minimal_period": q.minimal_period(),
                    "coefficients": q
                        .coefficient_rows()
                        .iter()
                        .map(|row| row.iter().map(fmt::plain_fraction).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "leading_row": leading.iter().map(fmt::plain_fraction).collect::<Vec<_>>(),
                    "leading_constant": constant.as_ref().map(fmt::plain_fraction),
                })
            );
        }
        Format::Csv => {
            println!(
                "residue,{}",
                (0..=degree)
                    .map(|k| format!("c{k}"))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            for (r, row) in q.coefficient_rows().iter().enumerate() {
                println!(
                    "{r},{}",
                    row.iter().map(fmt::plain_fraction).collect::<Vec<_>>().join(",")
                );
            }
        }
        Format::Text => {
            println!(
                "degree {} period {} (minimal {})",
                q.degree(),
                q.period(),
                q.minimal_period()
            );
            for (r, row) in q.coefficient_rows().iter().enumerate() {
                println!(
                    "residue {r}: [{}]",
                    row.iter().map(fmt::plain_fraction).collect::<Vec<_>>().join(", ")
                );
            }
            match &constant {
                Some(c) => println!("{}", fraction_report("leading", c)),
                None => println!("leading coefficient is not constant"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let guard = e
                .downcast_ref::<kunzcone_core::Error>()
                .is_some_and(|err| matches!(err, kunzcone_core::Error::TooLarge { .. }));
            ExitCode::from(if guard { 2 } else { 1 })
        }
    }
}
