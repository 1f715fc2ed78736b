//! Command-line front end: seeded generators, autocorrelation and
//! spectral estimators, entropy tools, experiment recipes and reference
//! comparisons, with CSV/JSON outputs that are byte-identical across
//! identical invocations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use difflab::combs::{tensor_product, LatticeConfig2D, PointSet2D, SequenceWindow};
use difflab::correlation::{autocorr_1d, autocorr_2d, autocorr_pointset, default_max_lag};
use difflab::entropy::{block_entropy, patch_census_2d};
use difflab::error::Error;
use difflab::experiments::{
    bernoullisation_homometry, dimer_hidden_order, ledrappier_order, meyer_peaks, visible_points,
    ExperimentReport,
};
use difflab::generators::{
    bernoullise, dimer_factor, gen_bernoulli, gen_dimer, gen_ledrappier, gen_meyer_example,
    gen_rudin_shapiro, gen_visible,
};
use difflab::io;
use difflab::rng::SeededRng;
use difflab::spectra::{
    bragg_mass, bragg_mass_pointset, detect_point_mass, measure_distance, measure_distance_2d,
    periodogram_1d_uniform, periodogram_2d_uniform, ref_bernoulli, ref_dimer, ref_dimer_factor,
    ref_full_shift_2d, ref_ledrappier, ref_meyer_example, ref_rs, PointMassEstimate,
    ReferenceMeasure, SpectralEstimate, Spectrum1D, Spectrum2D, NOISE_FLOOR_COEFF,
};

const SYSTEMS: &[&str] = &[
    "bernoulli",
    "rs",
    "bernoullised-rs",
    "dimer",
    "dimer-factor",
    "ledrappier",
    "visible",
    "meyer",
    "rs2d",
];

#[derive(Parser)]
#[command(name = "difflab", version, about = "Point-set and sequence laboratory: generators, diffraction estimators, entropy tools and experiments")]
struct Cli {
    /// Worker threads for multi-seed estimator runs (results are
    /// independent of the thread count).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a system realisation and write it as CSV or JSON.
    Gen(GenArgs),
    /// Estimate autocorrelation coefficients of a generated system.
    Autocorr(AutocorrArgs),
    /// Estimate the spectral density and point-mass candidates.
    Spectrum(SpectrumArgs),
    /// Block entropies (1D) or patch census (2D).
    Entropy(EntropyArgs),
    /// Run a named experiment recipe and report pass/fail metrics.
    Experiment(ExperimentArgs),
    /// Compare a saved spectral estimate against a reference measure.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// System name: bernoulli, rs, bernoullised-rs, dimer, dimer-factor,
    /// ledrappier, visible, meyer, rs2d.
    #[arg(long)]
    system: String,
    /// Window length for 1D systems.
    #[arg(long, default_value_t = 65536)]
    n: usize,
    /// First index for rs windows (defaults to 0).
    #[arg(long)]
    lo: Option<i64>,
    /// Last index for rs windows (defaults to lo + n - 1).
    #[arg(long)]
    hi: Option<i64>,
    /// Width for 2D systems.
    #[arg(long, default_value_t = 256)]
    width: usize,
    /// Height for 2D systems.
    #[arg(long, default_value_t = 256)]
    height: usize,
    /// Disc radius for the visible-points system.
    #[arg(long, default_value_t = 2000.0)]
    radius: f64,
    /// Probability of +1 (bernoulli) or of keeping a sign (bernoullised-rs).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Occupation probability of odd sites (meyer).
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// RNG seed; echoed into every output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct AutocorrArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Largest lag; defaults to min(128, n/64) in 1D, 16 in 2D, 2 for
    /// point sets.
    #[arg(long)]
    max_lag: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Grid points per axis.
    #[arg(long, default_value_t = 256)]
    k_points: usize,
    /// Bartlett block count (default 64 in 1D, 16 in 2D).
    #[arg(long)]
    blocks: Option<usize>,
    /// Number of seeds to average (seed, seed+1, ...).
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    /// Density output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Point-mass output path (defaults to `<out>` with a `-peaks` stem).
    #[arg(long)]
    peaks_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Largest block length (1D, default 8) or patch side (2D, default 4).
    #[arg(long)]
    max_l: Option<usize>,
    /// Sampled positions for the 2D patch census.
    #[arg(long, default_value_t = 20000)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: bernoullisation, dimer, ledrappier, visible, meyer.
    #[arg(long)]
    name: String,
    /// Window length override.
    #[arg(long)]
    n: Option<usize>,
    /// Configuration side override (ledrappier).
    #[arg(long)]
    size: Option<usize>,
    /// Disc radius override (visible).
    #[arg(long)]
    radius: Option<f64>,
    /// Odd-site occupation probability override (meyer).
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated keep probabilities (bernoullisation).
    #[arg(long)]
    p_list: Option<String>,
    /// Peak-threshold epsilon (meyer).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Number of seeds (defaults per experiment).
    #[arg(long)]
    seeds: Option<usize>,
    /// First seed of the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Spectral-estimate JSON produced by `spectrum --format json`.
    #[arg(long)]
    estimate: PathBuf,
    /// Reference name: bernoulli, rs, dimer, dimer-factor, meyer,
    /// ledrappier, full-shift-2d.
    #[arg(long)]
    reference: String,
    /// Parameter for the bernoulli reference.
    #[arg(long)]
    p: Option<f64>,
    /// Parameter for the meyer reference.
    #[arg(long)]
    q: Option<f64>,
    /// Tolerance on the density sup-distance.
    #[arg(long, default_value_t = 0.05)]
    tol_ac: f64,
    /// Tolerance on the worst point-mass error.
    #[arg(long, default_value_t = 0.01)]
    tol_pp: f64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Csv,
    Json,
}

enum Generated {
    Window(SequenceWindow),
    Lattice(LatticeConfig2D),
    Points(PointSet2D),
}

fn unknown_system(system: &str) -> Error {
    Error::invalid(format!(
        "unknown system '{system}'; valid systems: {}",
        SYSTEMS.join(", ")
    ))
}

/// Build the requested system; `scale` doubles the window for
/// point-mass stability checks.
fn generate(sys: &SystemArgs, seed: u64, scale: usize) -> Result<Generated, Error> {
    let rng = SeededRng::from_seed(seed);
    let n = sys.n * scale;
    match sys.system.as_str() {
        "bernoulli" => Ok(Generated::Window(gen_bernoulli(n, sys.p, rng)?)),
        "rs" => {
            let lo = sys.lo.unwrap_or(0);
            let len = match sys.hi {
                Some(hi) if hi >= lo => (hi - lo + 1) as usize,
                Some(hi) => return Err(Error::invalid(format!("hi {hi} below lo {lo}"))),
                None => sys.n,
            };
            Ok(Generated::Window(gen_rudin_shapiro(
                lo,
                lo + (len * scale) as i64 - 1,
            )?))
        }
        "bernoullised-rs" => {
            let base = gen_rudin_shapiro(0, n as i64 - 1)?;
            Ok(Generated::Window(bernoullise(&base, sys.p, rng)?))
        }
        "dimer" => Ok(Generated::Window(gen_dimer(n, rng)?)),
        "dimer-factor" => {
            let x = gen_dimer(n, rng)?;
            Ok(Generated::Window(dimer_factor(&x)?))
        }
        "ledrappier" => Ok(Generated::Lattice(gen_ledrappier(
            sys.width * scale,
            sys.height * scale,
            rng,
        )?)),
        "visible" => Ok(Generated::Points(gen_visible(sys.radius * scale as f64)?)),
        "meyer" => Ok(Generated::Window(gen_meyer_example(n, sys.q, rng)?)),
        "rs2d" => {
            let a = gen_rudin_shapiro(0, (sys.width * scale) as i64 - 1)?;
            let b = gen_rudin_shapiro(0, (sys.height * scale) as i64 - 1)?;
            Ok(Generated::Lattice(tensor_product(&a, &b)?))
        }
        other => Err(unknown_system(other)),
    }
}

/// Write to stdout, treating a closed pipe as a normal end of output.
fn write_stdout(content: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(content.as_bytes());
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            write_stdout(content);
            Ok(())
        }
    }
}

fn seed_comment(seed: u64) -> String {
    format!("# seed={seed}\n")
}

fn json_envelope(seed: u64, kind: &str, body: &str) -> String {
    format!("{{\n  \"seed\": {seed},\n  \"{kind}\": {}\n}}\n", indent_json(body))
}

fn indent_json(body: &str) -> String {
    body.trim_end().replace('\n', "\n  ")
}

fn run_gen(args: &GenArgs) -> Result<(), Error> {
    let generated = generate(&args.system, args.system.seed, 1)?;
    let content = match (&generated, args.format) {
        (Generated::Window(w), Format::Csv) => seed_comment(args.system.seed) + &io::window_to_csv(w),
        (Generated::Window(w), Format::Json) => json_envelope(args.system.seed, "window", &io::to_json(w)),
        (Generated::Lattice(c), Format::Csv) => seed_comment(args.system.seed) + &io::lattice_to_csv(c),
        (Generated::Lattice(c), Format::Json) => json_envelope(args.system.seed, "lattice", &io::to_json(c)),
        (Generated::Points(ps), Format::Csv) => seed_comment(args.system.seed) + &io::pointset_to_csv(ps),
        (Generated::Points(ps), Format::Json) => json_envelope(args.system.seed, "point_set", &io::to_json(ps)),
    };
    emit(&args.out, &content)
}

fn run_autocorr(args: &AutocorrArgs) -> Result<(), Error> {
    let generated = generate(&args.system, args.system.seed, 1)?;
    let seed = args.system.seed;
    let content = match generated {
        Generated::Window(w) => {
            let max_lag = args.max_lag.unwrap_or_else(|| default_max_lag(w.len()));
            let est = autocorr_1d(&w, max_lag)?;
            match args.format {
                Format::Csv => seed_comment(seed) + &io::autocorr_1d_to_csv(&est),
                Format::Json => json_envelope(seed, "autocorrelation", &io::to_json(&est)),
            }
        }
        Generated::Lattice(c) => {
            let cap = c.width().min(c.height()).saturating_sub(1);
            let max_lag = args.max_lag.unwrap_or(16).min(cap);
            let est = autocorr_2d(&c, max_lag)?;
            match args.format {
                Format::Csv => seed_comment(seed) + &io::autocorr_2d_to_csv(&est),
                Format::Json => json_envelope(seed, "autocorrelation", &io::to_json(&est)),
            }
        }
        Generated::Points(ps) => {
            let max_lag = args.max_lag.unwrap_or(2);
            let est = autocorr_pointset(&ps, max_lag)?;
            match args.format {
                Format::Csv => seed_comment(seed) + &io::autocorr_2d_to_csv(&est),
                Format::Json => json_envelope(seed, "autocorrelation", &io::to_json(&est)),
            }
        }
    };
    emit(&args.out, &content)
}

/// Run `f` once per seed on up to `threads` workers; results come back
/// in seed order, so the averaged output is independent of the thread
/// count.
fn per_seed_threaded<T: Send>(
    seeds: &[u64],
    threads: usize,
    f: impl Fn(u64) -> Result<T, Error> + Sync,
) -> Result<Vec<T>, Error> {
    let workers = threads.clamp(1, seeds.len().max(1));
    if workers == 1 {
        return seeds.iter().map(|&s| f(s)).collect();
    }
    let chunk = seeds.len().div_ceil(workers);
    let mut slots: Vec<Option<Result<T, Error>>> = Vec::new();
    slots.resize_with(seeds.len(), || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (c, seed_chunk) in seeds.chunks(chunk).enumerate() {
            let f = &f;
            handles.push(scope.spawn(move || {
                let results: Vec<Result<T, Error>> = seed_chunk.iter().map(|&s| f(s)).collect();
                (c, results)
            }));
        }
        for handle in handles {
            let (c, results) = handle.join().expect("worker panicked");
            for (i, r) in results.into_iter().enumerate() {
                slots[c * chunk + i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("seed computed")).collect()
}

struct MassStats {
    mean: f64,
    mean_doubled: f64,
    stderr: f64,
}

fn mass_stats(per_seed: &[(f64, f64)]) -> MassStats {
    let runs = per_seed.len() as f64;
    let mean = per_seed.iter().map(|m| m.0).sum::<f64>() / runs;
    let mean_doubled = per_seed.iter().map(|m| m.1).sum::<f64>() / runs;
    let stderr = if per_seed.len() > 1 {
        let var = per_seed
            .iter()
            .map(|m| (m.0 - mean) * (m.0 - mean))
            .sum::<f64>()
            / (runs - 1.0);
        (var / runs).sqrt()
    } else {
        0.0
    };
    MassStats {
        mean,
        mean_doubled,
        stderr,
    }
}

fn spectrum_window(
    args: &SpectrumArgs,
    threads: usize,
    seeds: &[u64],
) -> Result<Spectrum1D, Error> {
    let blocks = args.blocks.unwrap_or(64);
    let candidates = [0.0, 0.5];
    let runs = per_seed_threaded(seeds, threads, |seed| {
        let Generated::Window(w) = generate(&args.system, seed, 1)? else {
            unreachable!("1D spectrum on a 1D system");
        };
        let Generated::Window(w2) = generate(&args.system, seed, 2)? else {
            unreachable!();
        };
        let est = periodogram_1d_uniform(&w, args.k_points, blocks)?;
        let masses: Vec<(f64, f64)> = candidates
            .iter()
            .map(|&k| (bragg_mass(&w, k).0, bragg_mass(&w2, k).0))
            .collect();
        Ok((est, masses))
    })?;

    let template = &runs[0].0;
    let points = template.density().len();
    let mut density = vec![0.0f64; points];
    for (est, _) in &runs {
        for (d, &v) in density.iter_mut().zip(est.density()) {
            *d += v;
        }
    }
    for d in &mut density {
        *d /= runs.len() as f64;
    }

    let floor = NOISE_FLOOR_COEFF / template.window_size() as f64;
    let floor_doubled = floor / 2.0;
    let point_masses = candidates
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let stats = mass_stats(&runs.iter().map(|r| r.1[i]).collect::<Vec<_>>());
            PointMassEstimate {
                k,
                mass: stats.mean,
                stderr: stats.stderr,
                detected: detect_point_mass(stats.mean, floor, stats.mean_doubled, floor_doubled),
            }
        })
        .collect();

    let mut est = SpectralEstimate::new(
        template.k_grid().to_vec(),
        density,
        template.window_size(),
        blocks,
        template.label(),
    )?;
    est.set_point_masses(point_masses);
    est.set_seeds(seeds.to_vec());
    Ok(est)
}

fn spectrum_lattice(
    args: &SpectrumArgs,
    threads: usize,
    seeds: &[u64],
) -> Result<Spectrum2D, Error> {
    let blocks = args.blocks.unwrap_or(16);
    let candidates = [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5]];
    let runs = per_seed_threaded(seeds, threads, |seed| {
        let Generated::Lattice(c) = generate(&args.system, seed, 1)? else {
            unreachable!("2D spectrum on a 2D system");
        };
        let est = periodogram_2d_uniform(&c, args.k_points, blocks)?;
        // Point masses from the full-rectangle Fourier sum via a
        // one-block estimate at the candidate frequencies.
        let mass_of = |config: &LatticeConfig2D, k: [f64; 2]| -> Result<f64, Error> {
            let full = difflab::spectra::periodogram_2d(config, &[k], 1)?;
            Ok(full.density()[0] / full.window_size() as f64)
        };
        let Generated::Lattice(c2) = generate(&args.system, seed, 2)? else {
            unreachable!();
        };
        let masses: Vec<(f64, f64)> = candidates
            .iter()
            .map(|&k| Ok((mass_of(&c, k)?, mass_of(&c2, k)?)))
            .collect::<Result<_, Error>>()?;
        Ok((est, masses))
    })?;

    let template = &runs[0].0;
    let mut density = vec![0.0f64; template.density().len()];
    for (est, _) in &runs {
        for (d, &v) in density.iter_mut().zip(est.density()) {
            *d += v;
        }
    }
    for d in &mut density {
        *d /= runs.len() as f64;
    }

    let floor = NOISE_FLOOR_COEFF / template.window_size() as f64;
    let floor_doubled = floor / 4.0;
    let point_masses = candidates
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let stats = mass_stats(&runs.iter().map(|r| r.1[i]).collect::<Vec<_>>());
            PointMassEstimate {
                k,
                mass: stats.mean,
                stderr: stats.stderr,
                detected: detect_point_mass(stats.mean, floor, stats.mean_doubled, floor_doubled),
            }
        })
        .collect();

    let mut est = SpectralEstimate::new(
        template.k_grid().to_vec(),
        density,
        template.window_size(),
        blocks,
        template.label(),
    )?;
    est.set_point_masses(point_masses);
    est.set_seeds(seeds.to_vec());
    Ok(est)
}

fn spectrum_pointset(args: &SpectrumArgs) -> Result<String, Error> {
    let Generated::Points(near) = generate(&args.system, args.system.seed, 1)? else {
        unreachable!("point spectrum on the point-set system");
    };
    let Generated::Points(far) = generate(&args.system, args.system.seed, 2)? else {
        unreachable!();
    };
    let candidates = [
        [0.0, 0.0],
        [0.5, 0.0],
        [0.5, 0.5],
        [1.0 / 3.0, 1.0 / 3.0],
    ];
    let masses: Vec<PointMassEstimate<[f64; 2]>> = candidates
        .iter()
        .map(|&k| {
            let (mass, floor) = bragg_mass_pointset(&near, k);
            let (mass_doubled, floor_doubled) = bragg_mass_pointset(&far, k);
            PointMassEstimate {
                k,
                mass,
                stderr: 0.0,
                detected: detect_point_mass(mass, floor, mass_doubled, floor_doubled),
            }
        })
        .collect();
    match args.format {
        Format::Csv => {
            let mut out = format!(
                "# label=visible(R={})\n# points={}\nk1,k2,mass,stderr,detected\n",
                near.window_radius(),
                near.len()
            );
            for pm in &masses {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    io::fmt_f64(pm.k[0]),
                    io::fmt_f64(pm.k[1]),
                    io::fmt_f64(pm.mass),
                    io::fmt_f64(pm.stderr),
                    pm.detected
                ));
            }
            Ok(out)
        }
        Format::Json => Ok(io::to_json(&serde_json::json!({
            "label": format!("visible(R={})", near.window_radius()),
            "points": near.len(),
            "disc_area": near.disc_area(),
            "point_masses": masses,
        }))),
    }
}

fn peaks_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("spectrum");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}-peaks.{ext}"))
}

fn run_spectrum(args: &SpectrumArgs, threads: usize) -> Result<(), Error> {
    if args.seeds == 0 {
        return Err(Error::invalid("seed count must be positive"));
    }
    let seeds: Vec<u64> = (args.system.seed..args.system.seed + args.seeds as u64).collect();
    // Point sets have no density grid; they get a peaks-only report.
    if args.system.system == "visible" {
        let content = spectrum_pointset(args)?;
        return emit(&args.out, &content);
    }
    let is_lattice = matches!(args.system.system.as_str(), "ledrappier" | "rs2d");
    if is_lattice {
        let est = spectrum_lattice(args, threads, &seeds)?;
        match args.format {
            Format::Json => emit(&args.out, &io::to_json(&est)),
            Format::Csv => {
                let density = io::spectrum_2d_to_csv(&est);
                let peaks = io::point_masses_2d_to_csv(&est);
                match &args.out {
                    Some(path) => {
                        emit(&args.out, &density)?;
                        let peaks_file = args.peaks_out.clone().unwrap_or_else(|| peaks_path(path));
                        emit(&Some(peaks_file), &peaks)
                    }
                    None => {
                        write_stdout(&format!("{density}# point masses\n{peaks}"));
                        Ok(())
                    }
                }
            }
        }
    } else {
        let est = spectrum_window(args, threads, &seeds)?;
        match args.format {
            Format::Json => emit(&args.out, &io::to_json(&est)),
            Format::Csv => {
                let density = io::spectrum_1d_to_csv(&est);
                let peaks = io::point_masses_1d_to_csv(&est);
                match &args.out {
                    Some(path) => {
                        emit(&args.out, &density)?;
                        let peaks_file = args.peaks_out.clone().unwrap_or_else(|| peaks_path(path));
                        emit(&Some(peaks_file), &peaks)
                    }
                    None => {
                        write_stdout(&format!("{density}# point masses\n{peaks}"));
                        Ok(())
                    }
                }
            }
        }
    }
}

fn run_entropy(args: &EntropyArgs) -> Result<(), Error> {
    let generated = generate(&args.system, args.system.seed, 1)?;
    let seed = args.system.seed;
    let report = match &generated {
        Generated::Window(w) => block_entropy(w, args.max_l.unwrap_or(8))?,
        Generated::Lattice(c) => patch_census_2d(c, args.max_l.unwrap_or(4), args.samples)?,
        Generated::Points(_) => {
            return Err(Error::invalid(
                "entropy estimation is not defined for the point-set system",
            ));
        }
    };
    let content = match args.format {
        Format::Csv => seed_comment(seed) + &io::entropy_to_csv(&report),
        Format::Json => json_envelope(seed, "entropy", &io::to_json(&report)),
    };
    emit(&args.out, &content)
}

fn parse_p_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad probability '{s}'")))
        })
        .collect()
}

fn run_experiment(args: &ExperimentArgs) -> Result<ExperimentReport, Error> {
    let seed_list = |count: usize| -> Vec<u64> {
        (args.seed..args.seed + count as u64).collect()
    };
    match args.name.as_str() {
        "bernoullisation" => {
            let p_list = match &args.p_list {
                Some(text) => parse_p_list(text)?,
                None => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            };
            bernoullisation_homometry(
                args.n.unwrap_or(65536),
                &p_list,
                &seed_list(args.seeds.unwrap_or(8)),
            )
        }
        "dimer" => dimer_hidden_order(
            args.n.unwrap_or(65536),
            &seed_list(args.seeds.unwrap_or(800)),
        ),
        "ledrappier" => ledrappier_order(
            args.size.unwrap_or(256),
            &seed_list(args.seeds.unwrap_or(256)),
        ),
        "visible" => visible_points(args.radius.unwrap_or(2000.0)),
        "meyer" => meyer_peaks(
            args.n.unwrap_or(65536),
            args.q.unwrap_or(0.5),
            &seed_list(args.seeds.unwrap_or(16)),
            args.epsilon.unwrap_or(0.9),
        ),
        other => Err(Error::invalid(format!(
            "unknown experiment '{other}'; valid names: bernoullisation, dimer, ledrappier, visible, meyer"
        ))),
    }
}

fn reference_by_name(name: &str, p: Option<f64>, q: Option<f64>) -> Result<ReferenceMeasure, Error> {
    match name {
        "bernoulli" => {
            let p = p.ok_or_else(|| Error::invalid("bernoulli reference needs --p"))?;
            ref_bernoulli(p)
        }
        "rs" => Ok(ref_rs()),
        "dimer" => Ok(ref_dimer()),
        "dimer-factor" => Ok(ref_dimer_factor()),
        "meyer" => {
            let q = q.ok_or_else(|| Error::invalid("meyer reference needs --q"))?;
            ref_meyer_example(q)
        }
        "ledrappier" => Ok(ref_ledrappier()),
        "full-shift-2d" => Ok(ref_full_shift_2d()),
        other => Err(Error::invalid(format!(
            "unknown reference '{other}'; valid names: bernoulli, rs, dimer, dimer-factor, meyer, ledrappier, full-shift-2d"
        ))),
    }
}

fn run_compare(args: &CompareArgs) -> Result<bool, Error> {
    let text = fs::read_to_string(&args.estimate)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", args.estimate.display())))?;
    let reference = reference_by_name(&args.reference, args.p, args.q)?;
    let distance = match io::from_json::<Spectrum1D>(&text) {
        Ok(est) => measure_distance(&est, &reference),
        Err(_) => {
            let est: Spectrum2D = io::from_json(&text).map_err(|_| {
                Error::parse("estimate file is neither a 1D nor a 2D spectrum JSON")
            })?;
            if matches!(reference.ac(), difflab::spectra::AcDensity::OneMinusCos) {
                return Err(Error::invalid(
                    "the dimer reference density is one-dimensional",
                ));
            }
            measure_distance_2d(&est, &reference)
        }
    };
    let ac_pass = distance.ac_linf <= args.tol_ac;
    let pp_pass = distance.pp_max_abs_err <= args.tol_pp;
    println!(
        "acLinf       = {:<12.6} tolerance {:<8} {}",
        distance.ac_linf,
        args.tol_ac,
        if ac_pass { "PASS" } else { "FAIL" }
    );
    println!(
        "ppMaxAbsErr  = {:<12.6} tolerance {:<8} {}",
        distance.pp_max_abs_err,
        args.tol_pp,
        if pp_pass { "PASS" } else { "FAIL" }
    );
    Ok(ac_pass && pp_pass)
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Gen(args) => {
            run_gen(args)?;
            Ok(0)
        }
        Command::Autocorr(args) => {
            run_autocorr(args)?;
            Ok(0)
        }
        Command::Spectrum(args) => {
            run_spectrum(args, cli.threads)?;
            Ok(0)
        }
        Command::Entropy(args) => {
            run_entropy(args)?;
            Ok(0)
        }
        Command::Experiment(args) => {
            let report = run_experiment(args)?;
            write_stdout(&report.table());
            if let Some(path) = &args.out {
                emit(&Some(path.clone()), &io::to_json(&report))?;
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Compare(args) => {
            let pass = run_compare(args)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
