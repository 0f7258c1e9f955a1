//! `geozero`: evaluate loop polynomials of embedded polyhedra and run the
//! zero-search experiments from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use geozero::canonical::{self, build_canonical, CanonicalSpec};
use geozero::experiments::{self, BatchRow, CampaignConfig, CampaignManifest, TorusParameter};
use geozero::geometry::{read_mesh_file, write_mesh_file};
use geozero::ising::{self, EvalConfig, Method, Summation};
use geozero::meshgen::{self, Distribution, RescaleConfig, SamplerConfig};
use geozero::{mesh_couplings, EmbeddedMesh};

#[derive(Parser)]
#[command(name = "geozero", version, about = "Geometric Ising zeros on embedded polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    StructuredText,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write the table or mesh here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "structured-text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the loop polynomial of mesh files at their geometric couplings.
    Verify {
        #[arg(required = true)]
        meshes: Vec<PathBuf>,
        #[arg(long, default_value = "spin-sum", value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value_t = ising::ZERO_TOLERANCE)]
        tolerance: f64,
        /// Use compensated summation.
        #[arg(long)]
        compensated: bool,
        /// Report non-zero values without failing.
        #[arg(long)]
        allow_nonzero: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Sample a random sphere triangulation, optionally rescaled.
    Generate {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Radial rescaling range `lo:hi`.
        #[arg(long, value_parser = parse_range)]
        rescale: Option<(f64, f64)>,
        #[arg(long, default_value = "uniform")]
        distribution: Distribution,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random-mesh zero campaign; writes a CSV table and a JSON manifest.
    Campaign {
        #[arg(long)]
        vertices: usize,
        /// First seed; seeds are consecutive.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long, default_value_t = 9)]
        rescalings: usize,
        #[arg(long, value_parser = parse_range, default_value = "1:4")]
        rescale: (f64, f64),
        #[arg(long, default_value_t = ising::ZERO_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value = "spin-sum", value_parser = parse_method)]
        method: Method,
        #[command(flatten)]
        output: Output,
    },
    /// Mean |P| under real random perturbations of growing amplitude.
    Perturb {
        mesh: PathBuf,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// |P| over all convexity-sign assignments of a mesh.
    Signsearch {
        mesh: PathBuf,
        #[arg(long, default_value_t = ising::ZERO_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 24)]
        max_edges: usize,
        /// With `--format csv`, the full |P| table indexed by sign bit pattern.
        #[command(flatten)]
        output: Output,
    },
    /// Prismatic-torus loop polynomial along one parameter.
    TorusSweep {
        #[arg(long, default_value = "r")]
        param: TorusParameter,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        /// Also enumerate the dual graph of the built mesh.
        #[arg(long)]
        enumerate: bool,
        /// Compare against the reference value and asymptotic table.
        #[arg(long)]
        check_reference: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluation time and residual against the number of vertices.
    Scaling {
        /// Vertex counts `lo:hi`, inclusive.
        #[arg(long, value_parser = parse_count_range, default_value = "8:14")]
        vertices: (usize, usize),
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build a canonical configuration: writes its mesh and reports its
    /// couplings and loop polynomial.
    Example {
        /// pancake, tetrahedron, pyramid, double-pyramid, cube, torus, or a
        /// frozen fixture (two-concave-6, nonconvex-9).
        name: String,
        /// Shape parameters `key=value` (h, z, a, r, R).
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long, default_value_t = ising::ZERO_TOLERANCE)]
        tolerance: f64,
        /// Mesh output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.replace('-', "_").parse()
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn parse_count_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    Ok((k.trim().to_owned(), v.trim().parse::<f64>().map_err(|e| e.to_string())?))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<EmbeddedMesh> {
    read_mesh_file(path).with_context(|| format!("reading {}", path.display()))
}

/// `Ok(true)` when every assertion-class check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify {
            meshes,
            method,
            tolerance,
            compensated,
            allow_nonzero,
            output,
        } => {
            let cfg = EvalConfig {
                summation: if compensated { Summation::Compensated } else { Summation::Pairwise },
                ..EvalConfig::default()
            };
            let mut ok = true;
            let mut rows = Vec::new();
            let mut text = String::new();
            for path in &meshes {
                let mesh = load(path)?;
                let ev = experiments::evaluate_mesh(&mesh, method, &cfg)?;
                let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("mesh");
                let zero = ev.report.is_zero(tolerance);
                ok &= zero || allow_nonzero;
                text += &format!(
                    "mesh: {id}\nvertices: {}\nfaces: {}\nmethod: {}\nvalue: {:e} {:+e}i\nabs: {:e}\nnormalized: {:e}\nscale: {:e}\nseconds: {:.6}\nzero: {zero}\n\n",
                    mesh.vertex_count(),
                    mesh.face_count(),
                    ev.report.method,
                    ev.report.value.re,
                    ev.report.value.im,
                    ev.report.abs(),
                    ev.report.normalized_residual,
                    ev.report.magnitude_scale,
                    ev.report.elapsed_seconds,
                );
                rows.push(BatchRow::new(id, &mesh, &ev.report));
            }
            match output.format {
                Format::StructuredText => emit(output.out.as_deref(), &text)?,
                Format::Csv => emit(output.out.as_deref(), &experiments::to_csv(&rows)?)?,
            }
            Ok(ok)
        }
        Command::Generate {
            vertices,
            seed,
            rescale,
            distribution,
            out,
        } => {
            let sampler = SamplerConfig {
                n_points: vertices,
                distribution,
                seed,
            };
            let rescale = rescale.map(|(lo, hi)| RescaleConfig::new(lo, hi, seed)).transpose()?;
            let mesh = meshgen::generate_mesh(&sampler, rescale.as_ref())?;
            let report = meshgen::validate_closed(&mesh);
            match out {
                Some(p) => {
                    write_mesh_file(&p, &mesh)?;
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                None => println!("{}", mesh.to_json()),
            }
            if !report.accepted {
                eprintln!("mesh rejected: {:?}", report.issues);
            }
            Ok(report.accepted)
        }
        Command::Campaign {
            vertices,
            seed,
            seeds,
            rescalings,
            rescale,
            tolerance,
            method,
            output,
        } => {
            let mut cfg = CampaignConfig::new(vertices, seeds, rescalings, seed);
            cfg.rescale_range = rescale;
            cfg.tolerance = tolerance;
            cfg.method = method;
            let rows = experiments::run_zero_campaign(&cfg)?;
            let accepted: Vec<_> = rows.iter().filter(|r| r.accepted).collect();
            let failures = accepted
                .iter()
                .filter(|r| !r.zero || r.oracle_diff.is_some_and(|d| !(d <= 1e-10)))
                .count();
            let errors = rows.iter().filter(|r| r.error.is_some()).count();
            let worst = accepted.iter().map(|r| r.normalized).fold(0.0, f64::max);
            let summary = format!(
                "meshes: {}\naccepted: {}\nnonconvex: {}\nerrors: {errors}\nfailures: {failures}\nworst_normalized: {worst:e}\n",
                rows.len(),
                accepted.len(),
                accepted.iter().filter(|r| !r.convex).count(),
            );
            match (output.format, &output.out) {
                (Format::Csv, out) => emit(out.as_deref(), &experiments::campaign_csv(&rows)?)?,
                (Format::StructuredText, out) => emit(out.as_deref(), &summary)?,
            }
            if let Some(out) = &output.out {
                let manifest = out.with_extension("manifest.json");
                fs::write(&manifest, serde_json::to_string_pretty(&CampaignManifest::new(&cfg))?)?;
                eprint!("{summary}");
            }
            Ok(failures == 0 && errors == 0)
        }
        Command::Perturb {
            mesh,
            draws,
            seed,
            output,
        } => {
            let mesh = load(&mesh)?;
            let rows = experiments::run_perturbation_scan(&mesh, &experiments::PerturbationConfig::decades(draws, seed))?;
            let slope = experiments::loglog_slope(&rows);
            let text = match output.format {
                Format::Csv => experiments::to_csv(&rows)?,
                Format::StructuredText => {
                    let mut t: String = rows
                        .iter()
                        .map(|r| format!("amplitude: {:e} mean_abs: {:e} max_abs: {:e}\n", r.amplitude, r.mean_abs, r.max_abs))
                        .collect();
                    t += &format!("slope: {slope}\n");
                    t
                }
            };
            emit(output.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Signsearch {
            mesh,
            tolerance,
            max_edges,
            output,
        } => {
            let mesh = load(&mesh)?;
            let cfg = experiments::SignSearchConfig {
                max_edges,
                tolerance,
                keep_table: output.format == Format::Csv,
            };
            let res = experiments::run_sign_search(&mesh, &cfg)?;
            let signs = |s: &[i8]| s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect::<String>();
            let text = match (output.format, &res.full_table) {
                (Format::Csv, Some(table)) => {
                    let mut t = String::from("mask,signs,abs\n");
                    for (m, v) in table.iter().enumerate() {
                        let s = experiments::signs_of(m as u64, res.geometric_signs.len());
                        t += &format!("{m},{},{v:e}\n", signs(&s));
                    }
                    t
                }
                _ => {
                    let mut t = format!("geometric: {}\n", signs(&res.geometric_signs));
                    for b in &res.best_configs {
                        t += &format!("minimizer: {}\n", signs(b));
                    }
                    t += &format!(
                        "best_abs: {:e}\nbest_normalized: {:e}\nmatches_geometry: {}\n",
                        res.best_value, res.best_normalized, res.matches_geometry
                    );
                    t
                }
            };
            emit(output.out.as_deref(), &text)?;
            Ok(res.matches_geometry)
        }
        Command::TorusSweep {
            param,
            values,
            enumerate,
            check_reference,
            output,
        } => {
            let rows = experiments::run_torus_sweep(param, &values, enumerate)?;
            let mut ok = rows.iter().all(|r| r.abs.is_finite());
            let text = match output.format {
                Format::Csv => experiments::to_csv(&rows)?,
                Format::StructuredText => rows
                    .iter()
                    .map(|r| format!("r: {} R: {} h: {} value: {:e} {:+e}i abs: {:e}\n", r.r, r.big_r, r.h, r.re, r.im, r.abs))
                    .collect(),
            };
            if check_reference {
                let (r, big_r, h) = experiments::TORUS_REFERENCE_POINT;
                let p = experiments::torus_value(r, big_r, h)?;
                let (re, im) = experiments::TORUS_REFERENCE_VALUE;
                let ref_ok = (p.re - re).abs() <= 1e-4 && (p.im - im).abs() <= 1e-4;
                let mut worst: f64 = 0.0;
                for (param, v, expected) in experiments::TORUS_ASYMPTOTICS {
                    let (r, big_r, h) = param.apply(v);
                    worst = worst.max((experiments::torus_value(r, big_r, h)?.norm() - expected).abs() / expected);
                }
                ok &= ref_ok && worst <= 1e-3;
                eprintln!("reference: {:.7} {:+.7}i ({})", p.re, p.im, if ref_ok { "ok" } else { "MISMATCH" });
                eprintln!("asymptotics worst relative deviation: {worst:.3e}");
            }
            emit(output.out.as_deref(), &text)?;
            Ok(ok)
        }
        Command::Scaling {
            vertices,
            seed,
            seeds,
            output,
        } => {
            let cfg = experiments::ScalingConfig::new(
                (vertices.0..=vertices.1).collect(),
                (seed..seed + seeds as u64).collect(),
            );
            let rows = experiments::run_scaling_study(&cfg)?;
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.median_seconds > 0.0)
                .map(|r| (r.n as f64, r.median_seconds.ln()))
                .collect();
            let (slope, _, r2) = experiments::linear_fit(&pts);
            let text = match output.format {
                Format::Csv => experiments::to_csv(&rows)?,
                Format::StructuredText => {
                    let mut t: String = rows
                        .iter()
                        .map(|r| {
                            format!(
                                "n: {} faces: {} median_seconds: {:e} median_residual: {:e} failures: {}\n",
                                r.n, r.faces, r.median_seconds, r.median_residual, r.failures
                            )
                        })
                        .collect();
                    t += &format!("log_time_slope: {slope}\nr2: {r2}\n");
                    t
                }
            };
            emit(output.out.as_deref(), &text)?;
            Ok(rows.iter().all(|r| r.failures == 0))
        }
        Command::Example {
            name,
            params,
            tolerance,
            out,
        } => example(&name, &params, tolerance, out.as_deref()),
    }
}

fn example(name: &str, params: &[(String, f64)], tolerance: f64, out: Option<&Path>) -> Result<bool> {
    let get = |key: &str, default: f64| params.iter().rev().find(|p| p.0 == key).map_or(default, |p| p.1);
    let spec = match name {
        "pancake" => Some(CanonicalSpec::Pancake),
        "tetrahedron" => Some(CanonicalSpec::TetrahedronRegular),
        "pyramid" => Some(CanonicalSpec::Pyramid { h: get("h", 1.0) }),
        "double-pyramid" => Some(CanonicalSpec::DoublePyramid {
            h: get("h", 1.0),
            z: get("z", 1.0),
        }),
        "cube" => Some(CanonicalSpec::Cube { a: get("a", 1.0) }),
        "torus" => Some(CanonicalSpec::PrismaticTorus {
            r: get("r", 1.0),
            big_r: get("R", 2.0),
            h: get("h", 1.0),
        }),
        _ => None,
    };
    let mesh = match &spec {
        Some(s) => build_canonical(s)?,
        None if canonical::fixture_names().contains(&name) => canonical::load_fixture(name)?,
        None => bail!(
            "unknown example `{name}`; expected pancake, tetrahedron, pyramid, double-pyramid, cube, torus, {}",
            canonical::fixture_names().join(", ")
        ),
    };
    if let Some(p) = out {
        write_mesh_file(p, &mesh)?;
    }
    let (graph, records, y) = mesh_couplings(&mesh)?;
    let report = ising::evaluate(&graph, &y, ising::cheaper_method(&graph), &EvalConfig::default())?;
    println!("example: {name}");
    println!("vertices: {}\nfaces: {}\nlinks: {}", mesh.vertex_count(), mesh.face_count(), graph.link_count());
    let classes = spec.as_ref().map(canonical::link_classes).transpose()?;
    for (l, r) in records.iter().enumerate() {
        let class = classes.as_ref().map_or("", |c| c[l]);
        println!(
            "link {l} edge {:?} {class} theta {:.12} sign {:+} Y {:.12} {:+.12}i",
            r.vertex_pair, r.dihedral_angle, r.convexity_sign, y[l].re, y[l].im
        );
    }
    if let Some(s) = &spec {
        if let Ok(reference) = canonical::reference_polynomial(s, &y) {
            println!("closed_form: {:e} {:+e}i", reference.re, reference.im);
        }
    }
    println!(
        "value: {:e} {:+e}i\nabs: {:e}\nnormalized: {:e}\nmethod: {}\nzero: {}",
        report.value.re,
        report.value.im,
        report.abs(),
        report.normalized_residual,
        report.method,
        report.is_zero(tolerance)
    );
    // The torus is the genus-one counterexample; every other example is a zero.
    let expect_zero = mesh.genus_hint == 0;
    Ok(report.is_zero(tolerance) == expect_zero)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
