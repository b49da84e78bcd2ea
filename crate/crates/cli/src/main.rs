use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use geocross::drawing::{
    base_angles, blowup_drawing_unchecked, default_radius, random_blowup_config,
};
use geocross::theory::triangle_density;
use geocross::*;
use serde::Serialize;
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Margin used when drawing a random base configuration.
const CONFIG_MARGIN: f64 = 0.2;

#[derive(Parser, Debug)]
#[command(
    name = "geocross",
    version,
    about = "Crossing graphs of geodesic drawings on the sphere"
)]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Draw a random K_{n,n}, or a blow-up when --config is given.
    Draw(DrawArgs),
    /// Count crossings of a drawing file.
    Crossings(CrossingsArgs),
    /// Monte Carlo estimate of a pattern density.
    Density(DensityArgs),
    /// Measured vs predicted censuses of a blow-up drawing.
    Blowup(BlowupArgs),
    /// Tabulate angles and triangle density along the sweep family.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
struct DrawArgs {
    #[arg(long, default_value = "uniform")]
    mu1: String,
    #[arg(long, default_value = "uniform")]
    mu2: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Blow-up configuration JSON; --n overrides its vertex count.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CrossingsArgs {
    /// Drawing JSON.
    input: PathBuf,
    /// Also count triangles in the crossing graph.
    #[arg(long)]
    triangles: bool,
    /// Append a summary row to this CSV file.
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DensityArgs {
    /// Pattern: k1..k8, p3, empty1..empty8.
    #[arg(long, default_value = "k2")]
    h: String,
    #[arg(long, default_value = "uniform")]
    mu1: String,
    #[arg(long, default_value = "uniform")]
    mu2: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Blow-up configuration JSON backing `circles4`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct BlowupArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Node circle radius, default min(1e-3, 1/(10n)).
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip the triangle census.
    #[arg(long)]
    no_triangles: bool,
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

/// A failure and the exit code it maps to.
#[derive(Debug)]
enum Failure {
    /// Bad flags, malformed input, invalid configuration: exit 2.
    Usage(anyhow::Error),
    /// Degenerate geometry or an exhausted retry budget: exit 3.
    Degenerate(anyhow::Error),
}

type Res<T> = Result<T, Failure>;

trait Classify<T> {
    fn usage(self) -> Res<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Res<T> {
        self.map_err(|e| Failure::Usage(e.into()))
    }
}

fn drawing_failure(e: DrawingError) -> Failure {
    match e {
        DrawingError::TooManyRejections(_) | DrawingError::GeneralPositionViolation(_) => {
            Failure::Degenerate(e.into())
        }
        DrawingError::Geom(
            GeomError::DegenerateSegment | GeomError::DegenerateConfiguration(_),
        ) => Failure::Degenerate(e.into()),
        _ => Failure::Usage(e.into()),
    }
}

fn census_failure(e: CensusError) -> Failure {
    match e {
        CensusError::Geom(g) => drawing_failure(DrawingError::Geom(g)),
        _ => Failure::Usage(e.into()),
    }
}

fn density_failure(e: DensityError) -> Failure {
    match e {
        DensityError::Degenerate => Failure::Degenerate(e.into()),
        DensityError::Drawing(d) => drawing_failure(d),
        DensityError::Census(c) => census_failure(c),
        _ => Failure::Usage(e.into()),
    }
}

fn generator(command: &str, config: &impl Serialize) -> Value {
    json!({ "tool": "geocross", "version": VERSION, "command": command, "config": config })
}

fn write_output(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .usage(),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .usage()
        }
    }
}

fn read_config(path: &Path) -> Res<BlowupConfig> {
    let s = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .usage()?;
    serde_json::from_str(&s)
        .with_context(|| format!("parsing {}", path.display()))
        .usage()
}

/// Explicit config if given, otherwise a random one drawn from `seed`.
/// `r` overrides the file's radius; without a file it defaults to
/// `min(1e-3, 1/(10n))`.
fn blowup_config(path: Option<&Path>, seed: u64, n: usize, r: Option<f64>) -> Res<BlowupConfig> {
    if n == 0 {
        return Err(Failure::Usage(anyhow!("--n must be at least 1")));
    }
    let cfg = match path {
        Some(p) => {
            let c = read_config(p)?.with_n(n);
            match r {
                Some(r) => c.with_r(r),
                None => c,
            }
        }
        None => {
            let r = r.unwrap_or_else(|| default_radius(n));
            random_blowup_config(&mut RngStream::new(seed, 0), n, r, CONFIG_MARGIN)
                .map_err(drawing_failure)?
        }
    };
    cfg.validate().map_err(drawing_failure)?;
    Ok(cfg)
}

/// Parses a measure: a shortcut name, inline JSON, or a path to JSON.
/// `part` picks the side of the blow-up for `circles4`.
fn parse_measure(
    s: &str,
    part: usize,
    circles: &dyn Fn() -> Res<BlowupConfig>,
) -> Res<MeasureSpec> {
    let m = match s {
        "uniform" => MeasureSpec::Uniform,
        "sym-uniform" => MeasureSpec::symmetrized(MeasureSpec::Uniform),
        "circles4" => {
            let (a, b) = circles()?.circle_measures();
            if part == 0 {
                a
            } else {
                b
            }
        }
        _ if s.trim_start().starts_with('{') => serde_json::from_str(s)
            .context("parsing measure JSON")
            .usage()?,
        _ if Path::new(s).is_file() => {
            let text = fs::read_to_string(s).usage()?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing measure {s}"))
                .usage()?
        }
        _ => return Err(Failure::Usage(anyhow!("unknown measure {s:?}"))),
    };
    m.validate().usage()?;
    Ok(m)
}

fn append_csv<S: Serialize>(path: &Path, row: &S) -> Res<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))
        .usage()?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(row).usage()?;
    w.flush().usage()
}

fn cmd_draw(a: &DrawArgs) -> Res<()> {
    if a.n == 0 {
        return Err(Failure::Usage(anyhow!("--n must be at least 1")));
    }
    let d = match &a.config {
        Some(p) => {
            let cfg = read_config(p)?.with_n(a.n);
            blowup_drawing_unchecked(&cfg).map_err(drawing_failure)?
        }
        None => {
            let none = || Err(Failure::Usage(anyhow!("circles4 needs --config")));
            let mu1 = parse_measure(&a.mu1, 0, &none)?;
            let mu2 = parse_measure(&a.mu2, 1, &none)?;
            random_bipartite_drawing(&mu1, &mu2, a.n, &mut RngStream::new(a.seed, 0))
                .map_err(drawing_failure)?
        }
    };
    let mut v = serde_json::to_value(&d).usage()?;
    v["generator"] = generator("draw", a);
    write_output(a.output.as_deref(), &format!("{v}\n"))
}

#[derive(Serialize)]
struct CrossingsRow {
    version: &'static str,
    input: String,
    n_a: usize,
    n_b: usize,
    r: Option<f64>,
    total: u64,
    c: Option<u64>,
    b: Option<u64>,
    n: Option<u64>,
    triangles: Option<u64>,
    ccc: Option<u64>,
    ccb: Option<u64>,
    ccn: Option<u64>,
    cbb: Option<u64>,
    cbn: Option<u64>,
    cnn: Option<u64>,
    bbb: Option<u64>,
    bbn: Option<u64>,
    bnn: Option<u64>,
    nnn: Option<u64>,
}

fn cmd_crossings(a: &CrossingsArgs) -> Res<()> {
    let text = fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))
        .usage()?;
    let d = BipartiteDrawing::from_json(&text).usage()?;
    let (na, nb) = (d.part_a.len(), d.part_b.len());
    let z = zarankiewicz(na as u64, nb as u64);

    let need_graph = a.triangles;
    let (total, graph) = if need_graph {
        let g = build_crossing_graph(&d).map_err(census_failure)?;
        (g.edge_count() as u64, Some(g))
    } else {
        (count_crossings(&d).map_err(census_failure)?, None)
    };
    let vertices = (na * nb) as f64;
    let census = match (&d.blowup, &graph) {
        (Some(meta), Some(g)) => Some(crossing_census_from_graph(g, meta).map_err(census_failure)?),
        (Some(_), None) => Some(crossing_census(&d).map_err(census_failure)?),
        _ => None,
    };
    let triangles = match &graph {
        Some(g) => Some(triangle_census(g, d.blowup.as_ref()).map_err(census_failure)?),
        None => None,
    };

    let out = json!({
        "generator": generator("crossings", a),
        "part_a": na,
        "part_b": nb,
        "crossings": total,
        "t_k2": if vertices > 0.0 { 2.0 * total as f64 / (vertices * vertices) } else { 0.0 },
        "zarankiewicz": z.to_string(),
        "ratio": if z > 0 { Some(total as f64 / z as f64) } else { None },
        "census": census,
        "triangles": triangles,
    });
    write_output(
        a.output.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&out).usage()?),
    )?;

    if let Some(path) = &a.csv {
        let ty = |k: &str| {
            triangles
                .as_ref()
                .filter(|t| !t.by_type.is_empty())
                .map(|t| t.get(k))
        };
        let row = CrossingsRow {
            version: VERSION,
            input: a.input.display().to_string(),
            n_a: na,
            n_b: nb,
            r: d.blowup.as_ref().map(|m| m.config.r),
            total,
            c: census.as_ref().map(|c| c.c),
            b: census.as_ref().map(|c| c.b),
            n: census.as_ref().map(|c| c.n),
            triangles: triangles.as_ref().map(|t| t.total),
            ccc: ty("CCC"),
            ccb: ty("CCB"),
            ccn: ty("CCN"),
            cbb: ty("CBB"),
            cbn: ty("CBN"),
            cnn: ty("CNN"),
            bbb: ty("BBB"),
            bbn: ty("BBN"),
            bnn: ty("BNN"),
            nnn: ty("NNN"),
        };
        append_csv(path, &row)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DensityRow<'a> {
    version: &'static str,
    h: &'a str,
    mu1: &'a str,
    mu2: &'a str,
    samples: u64,
    seed: u64,
    value: f64,
    std_error: f64,
    reference: Option<f64>,
}

fn cmd_density(a: &DensityArgs) -> Res<()> {
    let h = PatternGraph::from_name(&a.h).usage()?;
    if a.samples == 0 {
        return Err(Failure::Usage(anyhow!("--samples must be at least 1")));
    }
    let circles = || blowup_config(a.config.as_deref(), a.seed, 1, None);
    let mu1 = parse_measure(&a.mu1, 0, &circles)?;
    let mu2 = parse_measure(&a.mu2, 1, &circles)?;
    // The triangle density of the circle measures has a closed form.
    let reference = if a.mu1 == "circles4" && a.mu2 == "circles4" && h == PatternGraph::k(3) {
        let q = base_angles(&circles()?).map_err(drawing_failure)?;
        Some(t_k3_formula(&q).usage()?)
    } else {
        None
    };
    let est = estimate_p_h(&h, &mu1, &mu2, a.samples, &RngStream::new(a.seed, 1))
        .map_err(density_failure)?;
    let out = json!({
        "generator": generator("density", a),
        "value": est.value,
        "std_error": est.std_error,
        "samples": est.samples,
        "hits": est.hits,
        "seed": est.seed,
        "reference": reference,
    });
    write_output(
        a.output.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&out).usage()?),
    )?;
    if let Some(path) = &a.csv {
        append_csv(
            path,
            &DensityRow {
                version: VERSION,
                h: &a.h,
                mu1: &a.mu1,
                mu2: &a.mu2,
                samples: a.samples,
                seed: a.seed,
                value: est.value,
                std_error: est.std_error,
                reference,
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportRow {
    version: &'static str,
    seed: u64,
    n: usize,
    r: f64,
    quantity: String,
    measured: f64,
    predicted: Option<f64>,
    relative_error: Option<f64>,
}

fn cmd_blowup(a: &BlowupArgs) -> Res<()> {
    let cfg = blowup_config(a.config.as_deref(), a.seed, a.n, a.r)?;
    let q = base_angles(&cfg).map_err(drawing_failure)?;
    let d = blowup_drawing_unchecked(&cfg).map_err(drawing_failure)?;
    let meta = d.blowup.as_ref().expect("blow-up drawings carry metadata");
    let g = build_crossing_graph(&d).map_err(census_failure)?;
    let census = crossing_census_from_graph(&g, meta).map_err(census_failure)?;
    let cp = predicted_crossing_census(&q, cfg.n as u64).usage()?;

    let mut rows: Vec<(String, f64, Option<f64>)> = vec![
        (
            "crossings".into(),
            census.total as f64,
            Some((cp.c + cp.b + cp.n_exact) as f64),
        ),
        ("C".into(), census.c as f64, Some(cp.c as f64)),
        ("B".into(), census.b as f64, Some(cp.b as f64)),
        ("N".into(), census.n as f64, Some(cp.n_exact as f64)),
        // Leading-order sum over node angles; matches N only as n grows.
        ("N_angles".into(), census.n as f64, Some(cp.n)),
    ];
    for (name, x) in ["alpha", "beta", "gamma", "delta"].iter().zip(q.to_array()) {
        rows.push(((*name).into(), x, None));
    }
    let formula = t_k3_formula(&q).usage()?;
    if !a.no_triangles {
        let t = triangle_census(&g, Some(meta)).map_err(census_failure)?;
        let tp = predicted_triangle_census(&q, cfg.n as u64).usage()?;
        let predicted = [
            ("CNN", tp.cnn),
            ("BBB", tp.bbb_exact as f64),
            ("CCB", tp.ccb_exact as f64),
            ("BNN", tp.bnn),
        ];
        for k in [
            "CCC", "CCB", "CCN", "CBB", "CBN", "CNN", "BBB", "BBN", "BNN", "NNN",
        ] {
            let p = predicted
                .iter()
                .find(|(n, _)| *n == k)
                .map_or(0.0, |(_, v)| *v);
            rows.push((format!("triangles_{k}"), t.get(k) as f64, Some(p)));
        }
        rows.push(("triangles".into(), t.total as f64, Some(tp.total)));
        rows.push((
            "t_k3".into(),
            triangle_density(t.total as f64, cfg.n as u64),
            Some(formula),
        ));
    } else {
        rows.push(("t_k3".into(), f64::NAN, Some(formula)));
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    for (quantity, measured, predicted) in rows {
        let relative_error = predicted.filter(|p| *p != 0.0).map(|p| (measured - p) / p);
        w.serialize(ReportRow {
            version: VERSION,
            seed: a.seed,
            n: cfg.n,
            r: cfg.r,
            quantity,
            measured,
            predicted,
            relative_error,
        })
        .usage()?;
    }
    // The full base configuration, so any row can be replayed with --config.
    w.serialize(ReportRow {
        version: VERSION,
        seed: a.seed,
        n: cfg.n,
        r: cfg.r,
        quantity: format!("config={}", serde_json::to_string(&cfg).usage()?),
        measured: f64::NAN,
        predicted: None,
        relative_error: None,
    })
    .usage()?;
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Usage(anyhow!(e.to_string())))?;
    write_output(a.output.as_deref(), &String::from_utf8(bytes).usage()?)
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    version: &'static str,
    family: &'a str,
    t: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    t_k3: f64,
    angle_sum_ok: bool,
}

fn cmd_sweep(a: &SweepArgs) -> Res<()> {
    let mut family = SweepFamily::default();
    family.lambda = a.lambda.unwrap_or(family.lambda);
    family.eps = a.eps.unwrap_or(family.eps);
    family.ratio = a.ratio.unwrap_or(family.ratio);
    let rows = sweep(&family, a.steps).map_err(|e| match e {
        TheoryError::Drawing(d) => drawing_failure(d),
        e => Failure::Usage(anyhow!(e.to_string())),
    })?;
    let family_json = serde_json::to_string(&family).usage()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(SweepCsvRow {
            version: VERSION,
            family: &family_json,
            t: row.t,
            alpha: row.alpha,
            beta: row.beta,
            gamma: row.gamma,
            delta: row.delta,
            t_k3: row.t_k3,
            angle_sum_ok: row.angle_sum_ok,
        })
        .usage()?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Usage(anyhow!(e.to_string())))?;
    write_output(a.output.as_deref(), &String::from_utf8(bytes).usage()?)
}

fn run(cli: &Cli) -> Res<()> {
    match &cli.cmd {
        Cmd::Draw(a) => cmd_draw(a),
        Cmd::Crossings(a) => cmd_crossings(a),
        Cmd::Density(a) => cmd_density(a),
        Cmd::Blowup(a) => cmd_blowup(a),
        Cmd::Sweep(a) => cmd_sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Degenerate(e)) => {
            eprintln!("degenerate: {e:#}");
            ExitCode::from(3)
        }
    }
}
