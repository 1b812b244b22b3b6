use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use gosset::fibration::{
    builtin_state, check_orbit, cusp_restriction_analysis, random_orbit_search, CuspRestriction,
    OrbitOptions, OrbitReport, State, Verdict,
};
use gosset::gosset::{build, expected, gosset_name, GossetPolytope, CONSTRUCTION_VERSION};
use gosset::manifold::{
    builtin_colouring, cusp_census, max_disjoint_facets, volume, BettiOptions, Colouring,
    CuspCensus, ManifoldReport, SumStrategy, Volume,
};
use gosset::par::{with_threads, Execution};
use gosset::reproduce::claimed_verdict;

use crate::output::{emit, join};
use crate::{
    reproduce, Cli, ColouringAction, Command, OrbitAction, PolytopeAction, EXIT_UNDETERMINED,
    EXIT_VALIDATION,
};

pub fn run(cli: &Cli) -> Result<u8> {
    with_threads(cli.threads, || dispatch(cli))
}

fn execution(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// Build the polytope, or load it from the cache directory when present.
/// A cache entry failing revalidation is rebuilt.
pub fn load_polytope(cli: &Cli, n: usize) -> Result<GossetPolytope> {
    expected(n)?;
    let Some(dir) = &cli.cache_dir else {
        return Ok(build(n)?);
    };
    let path = dir.join(format!("polytope-n{n}-v{CONSTRUCTION_VERSION}.json"));
    if path.exists() {
        let text = fs::read_to_string(&path)
            .with_context(|| format!("reading cache {}", path.display()))?;
        match GossetPolytope::from_json(&text) {
            Ok(p) if p.n == n => return Ok(p),
            Ok(_) => eprintln!(
                "warning: cache {} holds another polytope; rebuilding",
                path.display()
            ),
            Err(e) => eprintln!(
                "warning: cache {} rejected ({e}); rebuilding",
                path.display()
            ),
        }
    }
    let p = build(n)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(&path, p.to_json()?).with_context(|| format!("writing {}", path.display()))?;
    Ok(p)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_colouring(q: &GossetPolytope, file: Option<&Path>) -> Result<Colouring> {
    let col = match file {
        Some(f) => Colouring::from_json(&read(f)?)?,
        None => builtin_colouring(q)?,
    };
    col.validate(q)?;
    Ok(col)
}

fn load_state(q: &GossetPolytope, col: &Colouring, file: Option<&Path>) -> Result<State> {
    match file {
        Some(f) => {
            let s = State::from_json(&read(f)?)?;
            anyhow::ensure!(
                s.len() == q.vertex_count(),
                gosset::Error::InvalidState(format!(
                    "{} statuses for {} facets",
                    s.len(),
                    q.vertex_count()
                ))
            );
            Ok(s)
        }
        None => Ok(builtin_state(q, col)?),
    }
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Polytope {
            action: PolytopeAction::Info { n },
        } => polytope_info(cli, *n),
        Command::Colouring { action } => match action {
            ColouringAction::Validate { n, file } => {
                let q = load_polytope(cli, *n)?;
                let col = Colouring::from_json(&read(file)?)?;
                col.validate(&q)?;
                let classes: Vec<usize> = col.classes().iter().map(Vec::len).collect();
                #[derive(Serialize)]
                struct Valid {
                    n: usize,
                    colours: usize,
                    class_sizes: Vec<usize>,
                }
                let v = Valid {
                    n: *n,
                    colours: col.colour_count(),
                    class_sizes: classes,
                };
                emit(
                    cli.format,
                    &v,
                    || {
                        format!(
                            "valid {}-colouring; class sizes {}",
                            v.colours,
                            join(&v.class_sizes)
                        )
                    },
                    None,
                )?;
                Ok(0)
            }
            ColouringAction::Show { n } => {
                let q = load_polytope(cli, *n)?;
                println!("{}", builtin_colouring(&q)?.to_json()?);
                Ok(0)
            }
        },
        Command::Manifold {
            n,
            colouring,
            full_sum,
        } => {
            let q = load_polytope(cli, *n)?;
            let col = load_colouring(&q, colouring.as_deref())?;
            let opts = BettiOptions {
                strategy: if *full_sum {
                    SumStrategy::Full
                } else {
                    SumStrategy::ColourSymmetry
                },
                execution: execution(cli),
            };
            let r = ManifoldReport::build(&q, &col, &opts)?;
            let csv = format!("{}\n{}", ManifoldReport::CSV_HEADER, r.csv_row());
            emit(cli.format, &r, || manifold_human(&r), Some(csv))?;
            Ok(0)
        }
        Command::Orbit { action } => match action {
            OrbitAction::Check {
                n,
                colouring,
                state,
                pi1_budget,
                euler_check,
                state_classes,
                per_state,
            } => {
                let q = load_polytope(cli, *n)?;
                let col = load_colouring(&q, colouring.as_deref())?;
                let s = load_state(&q, &col, state.as_deref())?;
                let opts = OrbitOptions {
                    pi1_budget: *pi1_budget,
                    execution: execution(cli),
                    state_classes: *state_classes,
                };
                let mut r = check_orbit(&q, &col, &s, &opts)?;
                let code = orbit_exit_code(&r, *n, colouring.is_none() && state.is_none());
                if !per_state {
                    r.states.clear();
                }
                emit(cli.format, &r, || orbit_human(&r, *euler_check), None)?;
                Ok(code)
            }
            OrbitAction::Search {
                n,
                count,
                seed,
                pi1_budget,
            } => {
                let q = load_polytope(cli, *n)?;
                let col = builtin_colouring(&q)?;
                let opts = OrbitOptions {
                    pi1_budget: *pi1_budget,
                    execution: execution(cli),
                    state_classes: false,
                };
                let r = random_orbit_search(&q, &col, *count, *seed, &opts)?;
                emit(
                    cli.format,
                    &r,
                    || {
                        format!(
                            "examined {} random orbits (seed {seed}): {} legal, {} 1-legal, {} undetermined",
                            r.examined, r.legal, r.one_legal, r.undetermined
                        )
                    },
                    None,
                )?;
                Ok(if r.undetermined > 0 {
                    EXIT_UNDETERMINED
                } else {
                    0
                })
            }
        },
        Command::Cusps {
            n,
            colouring,
            state,
        } => {
            let q = load_polytope(cli, *n)?;
            let col = load_colouring(&q, colouring.as_deref())?;
            let s = load_state(&q, &col, state.as_deref())?;
            #[derive(Serialize)]
            struct Cusps {
                census: CuspCensus,
                restriction: CuspRestriction,
            }
            let c = Cusps {
                census: cusp_census(&q, &col),
                restriction: cusp_restriction_analysis(&q, &col, &s),
            };
            let csv = std::iter::once("c_prime,ideal_vertices,cusps_each".to_string())
                .chain(
                    c.census
                        .types()
                        .iter()
                        .map(|t| format!("{},{},{}", t.c_prime, t.ideal_vertices, t.cusps_each)),
                )
                .collect::<Vec<_>>()
                .join("\n");
            emit(
                cli.format,
                &c,
                || {
                    let mut out = String::new();
                    for t in c.census.types() {
                        let _ = writeln!(
                            out,
                            "{} ideal vertices with a {}-coloured cube: {} cusps each",
                            t.ideal_vertices, t.c_prime, t.cusps_each
                        );
                    }
                    let _ = writeln!(out, "total cusps: {}", c.census.total);
                    let _ = writeln!(
                        out,
                        "diagonal map null-homotopic on {} of {} cusp sections",
                        c.restriction.null_homotopic,
                        c.restriction.verdicts.len()
                    );
                    out
                },
                Some(csv),
            )?;
            Ok(0)
        }
        Command::Volumes => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                volume: Volume,
            }
            let mut rows = Vec::new();
            for n in 3..=8 {
                let q = load_polytope(cli, n)?;
                let col = builtin_colouring(&q)?;
                rows.push(Row {
                    n,
                    volume: volume(n, col.colour_count(), q.euler_characteristic()),
                });
            }
            let csv = std::iter::once("n,label,value".to_string())
                .chain(
                    rows.iter()
                        .map(|r| format!("{},{},{:.12e}", r.n, r.volume.label, r.volume.value)),
                )
                .collect::<Vec<_>>()
                .join("\n");
            emit(
                cli.format,
                &rows,
                || {
                    rows.iter()
                        .map(|r| {
                            format!(
                                "Vol(M{}) = {} ≈ {:.6e}",
                                r.n, r.volume.label, r.volume.value
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                },
                Some(csv),
            )?;
            Ok(0)
        }
        Command::Reproduce { skip_heavy } => reproduce::run(cli, *skip_heavy, execution(cli)),
    }
}

fn orbit_exit_code(r: &OrbitReport, n: usize, builtin: bool) -> u8 {
    if let Verdict::Undetermined { .. } = r.verdict {
        return EXIT_UNDETERMINED;
    }
    if builtin && (r.verdict != claimed_verdict(n) || !r.euler.holds()) {
        return EXIT_VALIDATION;
    }
    0
}

fn polytope_info(cli: &Cli, n: usize) -> Result<u8> {
    let q = load_polytope(cli, n)?;
    let ind = max_disjoint_facets(&q);
    #[derive(Serialize)]
    struct Info {
        n: usize,
        dual: &'static str,
        facets: usize,
        ideal_vertices: usize,
        finite_vertices: usize,
        degree: Option<usize>,
        face_vector: Vec<u64>,
        euler_characteristic: String,
        max_disjoint_facets: usize,
    }
    let info = Info {
        n,
        dual: gosset_name(n),
        facets: q.vertex_count(),
        ideal_vertices: q.orthoplex_facets.len(),
        finite_vertices: q.simplex_facets.len(),
        degree: q.degree(),
        face_vector: q.face_vector(),
        euler_characteristic: q.euler_characteristic().to_string(),
        max_disjoint_facets: ind.size,
    };
    let csv = format!(
        "n,facets,ideal,finite,chi\n{},{},{},{},{}",
        info.n, info.facets, info.ideal_vertices, info.finite_vertices, info.euler_characteristic
    );
    emit(
        cli.format,
        &info,
        || {
            format!(
                "P{n} (dual to {})\nfacets {}, ideal {}, finite {}\ndegree {}\nface vector {}\nχ(P{n}) = {}\nmax disjoint facets {}",
                info.dual,
                info.facets,
                info.ideal_vertices,
                info.finite_vertices,
                info.degree.map_or("-".into(), |d| d.to_string()),
                join(&info.face_vector),
                info.euler_characteristic,
                info.max_disjoint_facets
            )
        },
        Some(csv),
    )?;
    Ok(0)
}

fn manifold_human(r: &ManifoldReport) -> String {
    let mut out = String::new();
    let n = r.n;
    let _ = writeln!(
        out,
        "M{n}: {} colours, χ(P) = {}, χ(M) = {}",
        r.colours, r.chi_polytope, r.chi_manifold
    );
    let _ = writeln!(out, "Betti numbers b0..b{n}: {}", join(&r.betti));
    let _ = writeln!(out, "cusps: {}", r.total_cusps);
    for t in &r.cusp_types {
        let _ = writeln!(
            out,
            "  {} × {} (c' = {})",
            t.ideal_vertices, t.cusps_each, t.c_prime
        );
    }
    let _ = writeln!(out, "volume: {} ≈ {:.6e}", r.volume.label, r.volume.value);
    out
}

fn orbit_human(r: &OrbitReport, euler: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "orbit of {} states, free: {}, balanced: {}",
        r.orbit_size, r.orbit_free, r.balanced
    );
    let _ = writeln!(out, "{} link classes up to isomorphism", r.classes.len());
    for (i, k) in r.classes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  [{i}] {} vertices, χ {}, b̃ ({}), ↑{} ↓{}, {}",
            k.vertices,
            k.euler,
            join(&k.reduced_betti),
            k.ascending,
            k.descending,
            match &k.pi1 {
                None => "disconnected".to_string(),
                Some(p) => format!("{p:?}"),
            }
        );
    }
    if let Some(s) = r.state_classes {
        let _ = writeln!(out, "{s} states up to isomorphism");
    }
    if euler {
        let _ = writeln!(
            out,
            "χ double count: ascending {}, descending {}, χ(M) = {}",
            r.euler.ascending, r.euler.descending, r.euler.expected
        );
    }
    let _ = writeln!(out, "verdict: {:?}", r.verdict);
    out
}
