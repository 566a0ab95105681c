//! `eur`: entropies and entropic uncertainty sums for the coupled
//! quartic-oscillator ground state and tracked excited states.

mod settings;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eur_core::adiabatic::{momentum_gs_large_alpha, position_gs_large_alpha, SmallAlphaState};
use eur_core::entropy::{
    check_eur_sum, momentum_amplitude_grid, momentum_density_grid, position_amplitude_grid,
    position_density_grid, GridSettings,
};
use eur_core::fit::{compare_methods, compare_methods_between, fit, Field, FitKind};
use eur_core::linalg::Mat;
use eur_core::spectral::{block_spectrum, ground_state, HamiltonianParams, ParityBlock};
use eur_core::sweep::{
    format_sig12, from_csv, run_sweep, to_csv, to_json, EntropyRecord, Method, StateSelector,
    SweepConfig,
};

use settings::{build_alpha_grid, parse_methods, CommonArgs, UsageError};

#[derive(Parser)]
#[command(
    name = "eur",
    version,
    about = "Entropic uncertainty of the coupled quartic oscillator: exact diagonalization, adiabatic closed forms, sweeps and fits",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize parity blocks and print low-lying eigenvalues
    Spectrum(SpectrumArgs),
    /// Ground-state entropies at a single coupling
    Entropy(EntropyArgs),
    /// Run a coupling sweep and write the record table
    Sweep(SweepArgs),
    /// Least-squares fit of a column of a sweep table
    Fit(FitArgs),
    /// Per-coupling deltas between two method tags of a sweep table
    Compare(CompareArgs),
    /// Follow a labelled excited state along a coupling grid
    Track(TrackArgs),
    /// Write a wavefunction or density grid as CSV
    DumpState(DumpStateArgs),
}

#[derive(clap::Args)]
struct SpectrumArgs {
    /// Coupling strength
    #[arg(long)]
    alpha: f64,
    /// How many eigenvalues to print per block
    #[arg(long, default_value_t = 8)]
    n_lowest: usize,
    /// Parity block: all | ee | eo | oe | oo
    #[arg(long, default_value = "all")]
    block: String,
    /// Write each block as `<prefix>-<block>.txt` triplets (row col value)
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct EntropyArgs {
    /// Coupling strength
    #[arg(long)]
    alpha: f64,
    /// numeric | analytic-small | analytic-large | adiabatic-numeric-FT
    #[arg(long, default_value = "numeric")]
    method: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_step: Option<f64>,
    /// Explicit comma-separated coupling list (overrides min/max/step)
    #[arg(long)]
    alphas: Option<String>,
    /// Comma-separated methods to run
    #[arg(long)]
    methods: Option<String>,
    /// Output path (CSV; JSON mirror derives its name)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json | both
    #[arg(long)]
    format: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct FitArgs {
    /// Input sweep CSV
    #[arg(long = "in")]
    input: PathBuf,
    /// S_q | S_p | S_sum
    #[arg(long)]
    field: String,
    /// linear | quadratic | log (aliases linear_alpha, quadratic_alpha, linear_logalpha)
    #[arg(long)]
    model: String,
    /// Restrict to one method tag before fitting
    #[arg(long)]
    method: Option<String>,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Input sweep CSV
    #[arg(long = "in")]
    input: PathBuf,
    /// First method tag (defaults to auto when the file has exactly two)
    #[arg(long)]
    method_a: Option<String>,
    /// Second method tag
    #[arg(long)]
    method_b: Option<String>,
}

#[derive(clap::Args)]
struct TrackArgs {
    /// Quanta along x of the tracked label (n, 0)
    #[arg(long)]
    n: usize,
    /// Starting coupling alpha0
    #[arg(long, default_value_t = 0.0)]
    alpha_min: f64,
    #[arg(long)]
    alpha_max: f64,
    #[arg(long)]
    alpha_step: f64,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(clap::Args)]
struct DumpStateArgs {
    /// Coupling strength
    #[arg(long)]
    alpha: f64,
    /// position | momentum
    #[arg(long)]
    space: String,
    /// numeric | adiabatic-small | adiabatic-large
    #[arg(long, default_value = "numeric")]
    source: String,
    /// density | amplitude (momentum amplitude dumps the modulus)
    #[arg(long, default_value = "density")]
    quantity: String,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

enum AppError {
    Usage(String),
    Compute(String),
}

impl From<UsageError> for AppError {
    fn from(e: UsageError) -> Self {
        AppError::Usage(e.0)
    }
}

impl From<eur_core::Error> for AppError {
    fn from(e: eur_core::Error) -> Self {
        AppError::Compute(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Compute(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Track(a) => cmd_track(a),
        Command::DumpState(a) => cmd_dump_state(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Writes atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn g(v: f64) -> String {
    format_sig12(v)
}

fn sweep_config_from(
    resolved: &settings::Resolved,
    alphas: Vec<f64>,
    methods: Vec<Method>,
    state: StateSelector<f64>,
) -> Result<SweepConfig<f64>, AppError> {
    let basis = resolved.basis_spec()?;
    Ok(SweepConfig {
        alphas,
        k1: resolved.k1,
        k2: resolved.k2,
        basis,
        methods,
        state,
        overlap_threshold: resolved.overlap_threshold,
        grid: resolved.grid_settings(),
        quad_order: resolved.quad_order,
        ft_order: resolved.ft_order,
        ft_points: resolved.ft_points,
        ft_pmax: resolved.ft_pmax,
        norm_tolerance: resolved.norm_tolerance,
    })
}

fn print_record_line(r: &EntropyRecord<f64>) {
    let eur = check_eur_sum(r.s_sum);
    println!(
        "alpha={} method={} S_q={} S_p={} S_sum={} bbm_margin={} E0={} overlap={} converged={} satisfied={} saturated={}",
        g(r.alpha),
        r.method,
        g(r.s_q),
        g(r.s_p),
        g(r.s_sum),
        g(r.bbm_margin),
        g(r.e0),
        g(r.overlap),
        r.converged,
        eur.satisfied,
        eur.saturated
    );
}

fn cmd_entropy(a: EntropyArgs) -> Result<(), AppError> {
    let (resolved, _) = a.common.resolve()?;
    let method = Method::parse(&a.method)
        .ok_or_else(|| UsageError(format!("unknown method {:?}", a.method)))?;
    if !(a.alpha >= 0.0) {
        return Err(UsageError(format!("--alpha must be >= 0, got {}", a.alpha)).into());
    }
    let cfg = sweep_config_from(&resolved, vec![a.alpha], vec![method], StateSelector::Ground)?;
    let records = run_sweep(&cfg)?;
    print_record_line(&records[0]);
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), AppError> {
    let (resolved, cfgmap) = a.common.resolve()?;
    let alphas = build_alpha_grid(
        a.alphas.as_deref().or(cfgmap.get("alphas").map(|s| s.as_str())),
        a.alpha_min.or(parse_cfg_f64(&cfgmap, "alpha_min")?),
        a.alpha_max.or(parse_cfg_f64(&cfgmap, "alpha_max")?),
        a.alpha_step.or(parse_cfg_f64(&cfgmap, "alpha_step")?),
    )?;
    let methods_str = a
        .methods
        .or(cfgmap.get("methods").cloned())
        .unwrap_or_else(|| "numeric".to_string());
    let methods = parse_methods(&methods_str)?;
    let out = a
        .out
        .or(cfgmap.get("out").map(PathBuf::from))
        .ok_or_else(|| UsageError("missing --out".into()))?;
    let format = a
        .format
        .or(cfgmap.get("format").cloned())
        .unwrap_or_else(|| "csv".to_string());
    if !["csv", "json", "both"].contains(&format.as_str()) {
        return Err(UsageError(format!("--format must be csv, json or both, got {format:?}")).into());
    }

    let cfg = sweep_config_from(&resolved, alphas, methods, StateSelector::Ground)?;
    cfg.validate()?;
    let records = run_sweep(&cfg)?;
    emit_records(&records, &out, &format)?;
    for r in &records {
        print_record_line(r);
    }
    Ok(())
}

fn parse_cfg_f64(
    map: &std::collections::BTreeMap<String, String>,
    key: &str,
) -> Result<Option<f64>, AppError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<f64>()
            .map(Some)
            .map_err(|_| UsageError(format!("config key {key}: cannot parse {v:?}")).into()),
    }
}

fn emit_records(records: &[EntropyRecord<f64>], out: &Path, format: &str) -> Result<(), AppError> {
    if format == "csv" || format == "both" {
        write_atomic(out, &to_csv(records))?;
        eprintln!("wrote {}", out.display());
    }
    if format == "json" || format == "both" {
        let json_path = if format == "json" {
            out.to_path_buf()
        } else {
            out.with_extension("json")
        };
        write_atomic(&json_path, &to_json(records))?;
        eprintln!("wrote {}", json_path.display());
    }
    Ok(())
}

fn cmd_track(a: TrackArgs) -> Result<(), AppError> {
    let (resolved, _) = a.common.resolve()?;
    let alphas = build_alpha_grid(None, Some(a.alpha_min), Some(a.alpha_max), Some(a.alpha_step))?;
    let cfg = sweep_config_from(
        &resolved,
        alphas,
        vec![Method::Numeric],
        StateSelector::Tracked {
            n: a.n,
            alpha0: a.alpha_min,
        },
    )?;
    let records = run_sweep(&cfg)?;
    if let Some(out) = &a.out {
        emit_records(&records, out, "csv")?;
    }
    for r in &records {
        print_record_line(r);
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<(), AppError> {
    let text = std::fs::read_to_string(&a.input)?;
    let mut records = from_csv(&text)?;
    if let Some(m) = &a.method {
        let m = Method::parse(m).ok_or_else(|| UsageError(format!("unknown method {m:?}")))?;
        records.retain(|r| r.method == m);
    }
    let field = Field::parse(&a.field)
        .ok_or_else(|| UsageError(format!("unknown field {:?} (S_q, S_p, S_sum)", a.field)))?;
    let kind = FitKind::parse(&a.model)
        .ok_or_else(|| UsageError(format!("unknown model {:?} (linear, quadratic, log)", a.model)))?;
    let model = fit(&records, field, kind)?;
    println!(
        "model={} field={} n={} alpha_range=[{},{}]",
        model.kind.name(),
        model.field.name(),
        model.n_points,
        g(model.alpha_range.0),
        g(model.alpha_range.1)
    );
    for (i, c) in model.coefficients.iter().enumerate() {
        println!("c{i}={}", g(*c));
    }
    println!("rms={}", g(model.residual_rms));
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> Result<(), AppError> {
    let text = std::fs::read_to_string(&a.input)?;
    let records = from_csv(&text)?;
    let cmp = match (&a.method_a, &a.method_b) {
        (Some(ma), Some(mb)) => {
            let ma = Method::parse(ma).ok_or_else(|| UsageError(format!("unknown method {ma:?}")))?;
            let mb = Method::parse(mb).ok_or_else(|| UsageError(format!("unknown method {mb:?}")))?;
            compare_methods_between(&records, ma, mb)?
        }
        (None, None) => compare_methods(&records)?,
        _ => {
            return Err(UsageError("give both --method-a and --method-b, or neither".into()).into())
        }
    };
    println!(
        "comparing method_b={} minus method_a={} over {} common alphas",
        cmp.method_b,
        cmp.method_a,
        cmp.rows.len()
    );
    for r in &cmp.rows {
        println!(
            "alpha={} dS_q={} dS_p={} dS_sum={}",
            g(r.alpha),
            g(r.d_s_q),
            g(r.d_s_p),
            g(r.d_sum)
        );
    }
    println!(
        "max|dS_q|={} max|dS_p|={} max|dS_sum|={}",
        g(cmp.max_abs.0),
        g(cmp.max_abs.1),
        g(cmp.max_abs.2)
    );
    println!(
        "mean|dS_q|={} mean|dS_p|={} mean|dS_sum|={}",
        g(cmp.mean_abs.0),
        g(cmp.mean_abs.1),
        g(cmp.mean_abs.2)
    );
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), AppError> {
    let (resolved, _) = a.common.resolve()?;
    if !(a.alpha >= 0.0) {
        return Err(UsageError(format!("--alpha must be >= 0, got {}", a.alpha)).into());
    }
    let params = HamiltonianParams::new(resolved.k1, resolved.k2, a.alpha)?;
    let spec = resolved.basis_spec()?;
    let blocks: Vec<ParityBlock> = match a.block.as_str() {
        "all" => ParityBlock::ALL.to_vec(),
        other => vec![ParityBlock::from_label(other)
            .ok_or_else(|| UsageError(format!("unknown block {other:?} (all, ee, eo, oe, oo)")))?],
    };
    for block in blocks {
        let sp = block_spectrum(&params, &spec, block)?;
        if let Some(prefix) = &a.dump_matrix {
            let path = PathBuf::from(format!("{}-{}.txt", prefix.display(), block.label()));
            let sb = eur_core::spectral::SymmetricBlock {
                block,
                indices: sp.indices.clone(),
                matrix: sp.matrix.clone(),
            };
            write_atomic(&path, &sb.to_triplets())?;
            eprintln!("wrote {}", path.display());
        }
        for i in 0..a.n_lowest.min(sp.dim()) {
            println!("block={} i={} E={}", block.label(), i, g(sp.eigen.values[i]));
        }
    }
    Ok(())
}

fn grid_nodes(half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(3);
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

fn dump_grid_csv(xs: &[f64], ys: &[f64], value: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::from("x_or_px,y_or_py,value\n");
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", g(x), g(y), g(value(i, j))));
        }
    }
    out
}

fn cmd_dump_state(a: DumpStateArgs) -> Result<(), AppError> {
    let (resolved, _) = a.common.resolve()?;
    let want_density = match a.quantity.as_str() {
        "density" => true,
        "amplitude" => false,
        other => return Err(UsageError(format!("unknown quantity {other:?}")).into()),
    };
    let position = match a.space.as_str() {
        "position" => true,
        "momentum" => false,
        other => return Err(UsageError(format!("unknown space {other:?}")).into()),
    };
    let params = HamiltonianParams::new(resolved.k1, resolved.k2, a.alpha)?;
    let gridset: GridSettings<f64> = resolved.grid_settings();

    let csv = match a.source.as_str() {
        "numeric" => {
            let spec = resolved.basis_spec()?;
            let gs = ground_state(&params, &spec)?;
            if position {
                if want_density {
                    let d = position_density_grid(&gs, &spec, &gridset)?;
                    dump_grid_csv(&d.x.clone(), &d.y.clone(), |i, j| d.at(i, j))
                } else {
                    let (xs, ys, amp) = position_amplitude_grid(&gs, &spec, &gridset)?;
                    dump_grid_csv(&xs, &ys, |i, j| amp[(i, j)])
                }
            } else if want_density {
                let d = momentum_density_grid(&gs, &spec, &gridset)?;
                dump_grid_csv(&d.x.clone(), &d.y.clone(), |i, j| d.at(i, j))
            } else {
                let (xs, ys, re, im) = momentum_amplitude_grid(&gs, &spec, &gridset)?;
                dump_grid_csv(&xs, &ys, |i, j| {
                    (re[(i, j)] * re[(i, j)] + im[(i, j)] * im[(i, j)]).sqrt()
                })
            }
        }
        "adiabatic-small" => {
            let st = SmallAlphaState::new(params);
            if position {
                let l = a
                    .common
                    .half_width
                    .unwrap_or(6.5 / st.omega.min(params.k2).sqrt());
                let xs = grid_nodes(l, gridset.points);
                let vals: Vec<f64> = xs
                    .iter()
                    .flat_map(|&x| xs.iter().map(move |&y| (x, y)))
                    .map(|(x, y)| st.position_amplitude(x, y))
                    .collect();
                let n = xs.len();
                dump_grid_csv(&xs.clone(), &xs, |i, j| {
                    let v = vals[i * n + j];
                    if want_density {
                        v * v
                    } else {
                        v
                    }
                })
            } else {
                let limit = st.momentum_py_limit();
                let auto = 6.5 * st.omega.max(params.k2).sqrt();
                let l = a.common.half_width.unwrap_or(auto.min(0.95 * limit));
                if l >= limit {
                    return Err(eur_core::Error::OmegaPDomain { p_y: l }.into());
                }
                let ps = grid_nodes(l, gridset.points);
                let n = ps.len();
                let mut vals = vec![0.0_f64; n * n];
                for (i, &px) in ps.iter().enumerate() {
                    for (j, &py) in ps.iter().enumerate() {
                        vals[i * n + j] = st.momentum_amplitude(px, py)?;
                    }
                }
                dump_grid_csv(&ps.clone(), &ps, |i, j| {
                    let v = vals[i * n + j];
                    if want_density {
                        v * v
                    } else {
                        v
                    }
                })
            }
        }
        "adiabatic-large" => {
            if resolved.k1 != 1.0 || resolved.k2 != 1.0 {
                return Err(UsageError("adiabatic-large requires k1 = k2 = 1".into()).into());
            }
            if position {
                let st = position_gs_large_alpha::<f64>(a.alpha, resolved.quad_order.max(96))?;
                let lx = a
                    .common
                    .half_width
                    .unwrap_or((44.0 / st.solution.b).sqrt() + 0.3);
                let ly = a.common.half_width.unwrap_or(6.5);
                let xs = grid_nodes(lx, gridset.points);
                let ys = grid_nodes(ly, gridset.points);
                dump_grid_csv(&xs.clone(), &ys, |i, j| {
                    let v = st.amplitude(xs[i], ys[j]);
                    if want_density {
                        v * v
                    } else {
                        v
                    }
                })
            } else {
                let l = a.common.half_width.unwrap_or(resolved.ft_pmax);
                let ps = grid_nodes(l, resolved.ft_points);
                let mg: eur_core::MomentumGrid64 = momentum_gs_large_alpha(
                    a.alpha,
                    &ps,
                    &ps,
                    resolved.ft_order,
                    resolved.norm_tolerance,
                )?;
                let amp: Mat<f64> = mg.amplitudes;
                dump_grid_csv(&mg.px.clone(), &mg.py, |i, j| {
                    let v = amp[(i, j)];
                    if want_density {
                        v * v
                    } else {
                        v
                    }
                })
            }
        }
        other => return Err(UsageError(format!("unknown source {other:?}")).into()),
    };
    write_atomic(&a.out, &csv)?;
    eprintln!("wrote {}", a.out.display());
    Ok(())
}
