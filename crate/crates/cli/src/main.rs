//! normlab: generate, analyze and certify normal sequences along Følner
//! sequences in (N, +) and (N, x).
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a
//! verification fails.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use normlab::champernowne::{
    classical_champernowne, diff_is_expected, figure1_blocks, figure1_diff, render_figure1,
};
use normlab::config::{
    default_zone_spec, generate, GeneratorConfig, GeneratorKind, RunConfig, SetSource, EX9_LEADING,
    REFINE_HORIZON,
};
use normlab::folner::{DirectionSchedule, FiniteSet, FolnerSpec, NiceSource};
use normlab::io::{read_bits, write_bits, BitFormat};
use normlab::liouville::{
    additive_liouville_normal, interval_folner_refine, liouville_witness, mult_liouville_normal,
    verify_witness, Witness,
};
use normlab::sampler::{adversarial_doubling, bernoulli_seq, DEFAULT_SEED};
use normlab::seq::{block_freqs, BitSeq};
use normlab::structure::{
    config_search, ex9_set, intersection_density, thick_counterexample, NatSet, Pattern,
};

#[derive(Parser)]
#[command(
    name = "normlab",
    version,
    about = "Normal sequences along Følner sequences in (N,+) and (N,x)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a bit sequence file.
    Gen(GenArgs),
    /// Block counts, frequencies and defects of a sequence file as CSV.
    Analyze(AnalyzeArgs),
    /// Følner density of a set (or of A/n_1 ∩ ... ∩ A/n_k) as CSV.
    Density(DensityArgs),
    /// Search a set for a configuration; prints the witnesses as JSON.
    Solve(SolveArgs),
    /// Build a Liouville-normal sequence and check its witness exactly.
    Liouville(LiouvilleArgs),
    /// Print the first packages and chains of the multiplicative
    /// Champernowne construction.
    Figure1(FigureArgs),
    /// Adaptive doubling towards the zeros of a sequence; trace as CSV.
    Adversarial(AdversarialArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Packed,
}

#[derive(Args)]
struct GenArgs {
    /// Run config (JSON); its generator section is used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<GeneratorKind>,
    #[arg(long)]
    bits: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// staircase or toeplitz.
    #[arg(long, value_parser = parse_directions)]
    directions: Option<DirectionSchedule>,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Sequence file (ASCII or packed).
    input: PathBuf,
    /// Run config (JSON); its folner and analysis sections are used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// classical, doubling-staircase, doubling-toeplitz, nice-staircase,
    /// nice-toeplitz, or a JSON recipe.
    #[arg(long, value_parser = parse_spec)]
    spec: Option<FolnerSpec>,
    /// Indices n, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
    /// A shift set K, comma separated; repeat for several.
    #[arg(long = "k")]
    shifts: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SetArgs {
    /// all, support, thick-counterexample or ex9.
    #[arg(long, value_parser = parse_set)]
    set: Option<SetSource>,
    /// Sequence file whose support is the set (for --set support).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Coefficients i,j,k of ia + jb = kc.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<u64>,
    /// Horizon N: the set is built within 1..=N.
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, value_parser = parse_spec, default_value = "classical")]
    spec: FolnerSpec,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Measure A/n_1 ∩ ... ∩ A/n_k instead of A.
    #[arg(long, value_delimiter = ',')]
    divisors: Vec<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternKind {
    Linear,
    Power,
    SumProd,
    GeoArith,
    PolyGeo,
}

#[derive(Args)]
struct SolveArgs {
    /// Run config (JSON); its search section is used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pattern: Option<PatternKind>,
    #[command(flatten)]
    set: SetArgs,
    /// Exponent for the power pattern ab = c^k.
    #[arg(long)]
    power: Option<u32>,
    /// Length n for the geo-arith and poly-geo patterns.
    #[arg(long)]
    length: Option<u32>,
    /// Stop after this many witnesses.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiouvilleMode {
    Add,
    Mult,
}

#[derive(Args)]
struct LiouvilleArgs {
    #[arg(long, value_enum)]
    mode: LiouvilleMode,
    /// Exponent k of the witness |x - p/q| < q^{-k}.
    #[arg(long)]
    k: u32,
    /// Exit with status 2 unless the witness verifies.
    #[arg(long)]
    verify: bool,
    /// Seed of the Bernoulli base sequence (mult mode).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Base sequence file instead of a Bernoulli one (mult mode).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the constructed prefix here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Print the rows that differ from the published figure.
    #[arg(long)]
    diff: bool,
    /// Compare the rendering with this file; exit 2 on any difference.
    #[arg(long)]
    check: Option<PathBuf>,
}

#[derive(Args)]
struct AdversarialArgs {
    /// Sequence file; a Bernoulli sequence is drawn otherwise.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Length of the drawn Bernoulli sequence.
    #[arg(long, default_value_t = 1 << 24)]
    bits: u64,
    #[arg(long, default_value_t = 64)]
    steps: u64,
    /// Largest leading parameter probed (defaults to the sequence length).
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<normlab::Error> for Failure {
    fn from(e: normlab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn from_name<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<GeneratorKind, String> {
    from_name(s)
}

fn parse_directions(s: &str) -> Result<DirectionSchedule, String> {
    from_name(s)
}

fn parse_set(s: &str) -> Result<SetSource, String> {
    from_name(s)
}

fn parse_spec(s: &str) -> Result<FolnerSpec, String> {
    let doubling = |d| FolnerSpec::Doubling { directions: d };
    let nice = |d| FolnerSpec::NiceBoxes {
        source: NiceSource::Directions(d),
    };
    Ok(match s {
        "classical" => FolnerSpec::Classical,
        "doubling" | "doubling-staircase" => doubling(DirectionSchedule::Staircase),
        "doubling-toeplitz" => doubling(DirectionSchedule::Toeplitz),
        "nice-staircase" => nice(DirectionSchedule::Staircase),
        "nice-toeplitz" => nice(DirectionSchedule::Toeplitz),
        _ => {
            let spec: FolnerSpec =
                serde_json::from_str(s).map_err(|e| format!("unknown recipe {s:?}: {e}"))?;
            spec.validate().map_err(|e| e.to_string())?;
            spec
        }
    })
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, Failure> {
    match path {
        Some(p) => Ok(RunConfig::from_json(&fs::read_to_string(p)?)?),
        None => Ok(RunConfig::default()),
    }
}

fn load_bits(path: &Path) -> Result<BitSeq, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(read_bits(&bytes)?)
}

fn emit_json(v: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v).unwrap())?;
    Ok(())
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn shift_set(s: &str) -> Result<FiniteSet, Failure> {
    let elems = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("bad shift set {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSet::from_unsorted(elems))
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let cfg = load_config(&a.config)?;
    let base = cfg.generator.clone();
    let kind = a
        .kind
        .or(base.as_ref().map(|g| g.kind))
        .ok_or_else(|| Failure::Usage("--kind or a config generator section is required".into()))?;
    let bits = a
        .bits
        .or(base.as_ref().map(|g| g.bits))
        .ok_or_else(|| Failure::Usage("--bits or a config generator section is required".into()))?;
    let g = GeneratorConfig {
        kind,
        bits,
        seed: a.seed.or(base.as_ref().and_then(|g| g.seed)),
        directions: a.directions.or(base.and_then(|g| g.directions)),
    };
    let zone_spec = cfg
        .folner
        .filter(|f| matches!(f, FolnerSpec::NiceBoxes { .. }));
    let mut prov = format!(
        "normlab gen kind={} bits={bits}",
        serde_json::to_value(kind).unwrap().as_str().unwrap()
    );
    if let Some(s) = g.seed {
        prov.push_str(&format!(" seed={s}"));
    }
    if let Some(d) = &g.directions {
        let d = match serde_json::to_value(d).unwrap() {
            Value::String(name) => name,
            other => other.to_string(),
        };
        prov.push_str(&format!(" directions={d}"));
    }
    let x = generate(&g, zone_spec.as_ref())?.with_provenance(prov);
    let format = match a.format {
        Format::Ascii => BitFormat::Ascii,
        Format::Packed => BitFormat::Packed,
    };
    let mut out = sink(&a.output)?;
    write_bits(&x, format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Outcome {
    let cfg = load_config(&a.config)?;
    let spec = a.spec.or(cfg.folner).unwrap_or(FolnerSpec::Classical);
    let ns = if a.n.is_empty() {
        cfg.analysis
            .as_ref()
            .map(|s| s.ns.clone())
            .unwrap_or_default()
    } else {
        a.n
    };
    let shifts: Vec<FiniteSet> = if a.shifts.is_empty() {
        cfg.analysis
            .map(|s| s.shifts.into_iter().map(FiniteSet::from_unsorted).collect())
            .unwrap_or_default()
    } else {
        a.shifts
            .iter()
            .map(|s| shift_set(s))
            .collect::<Result<_, _>>()?
    };
    if ns.is_empty() || shifts.is_empty() {
        return Err(Failure::Usage(
            "analyze needs indices (--n) and shift sets (--k)".into(),
        ));
    }
    let x = load_bits(&a.input)?;
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    w.write_record(["n", "|F_n|", "K", "block", "count", "freq", "defect"])?;
    let mut errors = 0;
    for &n in &ns {
        let card = spec
            .cardinality(n)
            .map(|c| c.to_string())
            .unwrap_or_default();
        for k in &shifts {
            let label = k
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            match block_freqs(&x, &spec, n, k) {
                Ok(bf) => {
                    let defect = bf.defect().to_string();
                    for (idx, &count) in bf.counts.iter().enumerate() {
                        let block: String = (0..k.len())
                            .rev()
                            .map(|j| if idx >> j & 1 == 1 { '1' } else { '0' })
                            .collect();
                        w.write_record([
                            &n.to_string(),
                            &card,
                            &label,
                            &block,
                            &count.to_string(),
                            &bf.freq(idx).to_string(),
                            &defect,
                        ])?;
                    }
                }
                Err(e) => {
                    errors += 1;
                    eprintln!("n={n} K={{{label}}}: {e}");
                    w.write_record([&n.to_string(), &card, &label, "", "", "", ""])?;
                }
            }
        }
    }
    w.flush()?;
    if errors > 0 {
        return Err(Failure::Usage(format!(
            "{errors} (n, K) rows could not be computed"
        )));
    }
    Ok(())
}

struct BuiltSet {
    set: NatSet,
    /// The set comes with a no-solution claim for the searched pattern.
    certified: bool,
}

fn build_set(a: &SetArgs, source: SetSource, horizon: u64) -> Result<BuiltSet, Failure> {
    Ok(match source {
        SetSource::All => BuiltSet {
            set: NatSet::all(horizon)?,
            certified: false,
        },
        SetSource::Support => {
            let path = a
                .input
                .as_ref()
                .ok_or_else(|| Failure::Usage("--set support needs --input".into()))?;
            let x = load_bits(path)?;
            BuiltSet {
                set: NatSet::support_of(&x.prefix(horizon.min(x.len())))?,
                certified: false,
            }
        }
        SetSource::ThickCounterexample => {
            let [i, j, k] = <[u64; 3]>::try_from(a.coeffs.as_slice()).map_err(|_| {
                Failure::Usage("the thick counterexample needs --coeffs i,j,k".into())
            })?;
            BuiltSet {
                set: thick_counterexample(i, j, k, horizon)?.set,
                certified: true,
            }
        }
        SetSource::Ex9 => BuiltSet {
            set: ex9_set(&EX9_LEADING, horizon)?.set,
            certified: true,
        },
    })
}

fn cmd_density(a: DensityArgs) -> Outcome {
    let source = a.set.set.unwrap_or(SetSource::All);
    let horizon = a
        .set
        .bound
        .ok_or_else(|| Failure::Usage("--bound is required".into()))?;
    let built = build_set(&a.set, source, horizon)?;
    let divisors = if a.divisors.is_empty() {
        vec![1]
    } else {
        a.divisors
    };
    let table = intersection_density(&built.set, &divisors, &a.spec, &a.n)?;
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    w.write_record(["n", "|F_n|", "hits", "density"])?;
    for r in &table.rows {
        w.write_record([
            r.n.to_string(),
            r.card.to_string(),
            r.hits.to_string(),
            r.density.to_string(),
        ])?;
    }
    w.flush()?;
    eprintln!(
        "upper {} lower {} (over the second half of the indices)",
        table.upper, table.lower
    );
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let cfg = load_config(&a.config)?.search;
    let pattern = match a.pattern {
        Some(PatternKind::Linear) => {
            let [i, j, k] = <[u64; 3]>::try_from(a.set.coeffs.as_slice())
                .map_err(|_| Failure::Usage("the linear pattern needs --coeffs i,j,k".into()))?;
            Pattern::Linear { i, j, k }
        }
        Some(PatternKind::Power) => Pattern::Power {
            k: a.power.unwrap_or(2),
        },
        Some(PatternKind::SumProd) => Pattern::SumProd,
        Some(PatternKind::GeoArith) => Pattern::GeoArith {
            n: a.length.unwrap_or(2),
        },
        Some(PatternKind::PolyGeo) => Pattern::PolyGeo {
            n: a.length.unwrap_or(2),
        },
        None => cfg
            .as_ref()
            .map(|s| s.pattern)
            .ok_or_else(|| Failure::Usage("--pattern is required".into()))?,
    };
    let source = a
        .set
        .set
        .or(cfg.as_ref().map(|s| s.set))
        .unwrap_or(SetSource::All);
    let horizon = a
        .set
        .bound
        .or(cfg.as_ref().map(|s| s.horizon))
        .ok_or_else(|| Failure::Usage("--bound is required".into()))?;
    let mut bounds = cfg.map(|s| s.bounds).unwrap_or_default();
    if a.limit.is_some() {
        bounds.limit = a.limit;
    }
    let mut set_args = a.set;
    if set_args.coeffs.is_empty() {
        if let Pattern::Linear { i, j, k } = pattern {
            set_args.coeffs = vec![i, j, k];
        }
    }
    let built = build_set(&set_args, source, horizon)?;
    let found = config_search(&built.set, pattern, &bounds)?;
    let report = json!({
        "set": source,
        "horizon": horizon,
        "size": built.set.len(),
        "pattern": found.pattern,
        "variables": found.variables,
        "witnesses": found.witnesses,
        "candidates": found.candidates,
        "exhaustive": found.exhaustive,
    });
    emit_json(&report)?;
    if built.certified && !found.witnesses.is_empty() {
        return Err(Failure::Verification(format!(
            "{} solutions in a set built to avoid them",
            found.witnesses.len()
        )));
    }
    Ok(())
}

fn witness_json(w: &Witness) -> Value {
    let mut v = serde_json::to_value(w).unwrap();
    v["q"] = json!(format!("2^{} - 1", w.period));
    v
}

fn cmd_liouville(a: LiouvilleArgs) -> Outcome {
    if a.k == 0 {
        return Err(Failure::Usage("--k must be positive".into()));
    }
    let (x, witness, extra) = match a.mode {
        LiouvilleMode::Add => {
            let refined = interval_folner_refine(&FolnerSpec::Classical, REFINE_HORIZON)?;
            let source = classical_champernowne(256)?;
            let mut n = 16u64;
            let mut built = loop {
                let built = additive_liouville_normal(&refined.spec, REFINE_HORIZON, &source, n)?;
                if built.levels.len() > a.k as usize {
                    break built;
                }
                n *= 2;
            };
            let w = liouville_witness(&built.repetitive_spec(), a.k)?;
            if built.x.len() < w.prefix_len {
                built = additive_liouville_normal(
                    &refined.spec,
                    REFINE_HORIZON,
                    &source,
                    w.prefix_len,
                )?;
            }
            let lengths: Vec<u64> = built.levels.iter().map(|l| l.w_len).collect();
            (built.x, w, json!({ "word_lengths": lengths }))
        }
        LiouvilleMode::Mult => {
            if a.k < 2 {
                return Err(Failure::Usage(
                    "the multiplicative witness needs k ≥ 2".into(),
                ));
            }
            let spec = default_zone_spec();
            let probe = mult_liouville_normal(&spec, &bernoulli_seq(a.seed, 64)?, 64)?;
            let m = *probe.zones.m.get(a.k as usize - 2).ok_or_else(|| {
                Failure::Usage(format!(
                    "the period for k = {} lies beyond the known zones {:?}",
                    a.k, probe.zones.m
                ))
            })?;
            let n = m
                .checked_mul(a.k as u64)
                .ok_or_else(|| Failure::Usage(format!("{}·{m} bits overflow", a.k)))?;
            let base = match &a.input {
                Some(p) => load_bits(p)?,
                None => bernoulli_seq(a.seed, n)?,
            };
            let built = mult_liouville_normal(&spec, &base, n)?;
            let w = built.witness(a.k)?;
            (built.x, w, json!({ "zones": built.zones.m }))
        }
    };
    // the witness comes from the construction's word lengths; the prefix
    // actually built has to agree with it
    let on_prefix = verify_witness(&x, witness.period, a.k)?;
    let verified = witness.verified && on_prefix.verified;
    let report = json!({
        "mode": match a.mode { LiouvilleMode::Add => "add", LiouvilleMode::Mult => "mult" },
        "k": a.k,
        "prefix_bits": x.len(),
        "witness": witness_json(&witness),
        "prefix_verified": on_prefix.verified,
        "construction": extra,
    });
    emit_json(&report)?;
    if let Some(p) = &a.output {
        let mut out = sink(&Some(p.clone()))?;
        write_bits(&x, BitFormat::Packed, &mut out)?;
        out.flush()?;
    }
    if a.verify && !verified {
        return Err(Failure::Verification(format!(
            "the exponent-{} witness does not verify",
            a.k
        )));
    }
    Ok(())
}

fn cmd_figure1(a: FigureArgs) -> Outcome {
    let blocks = figure1_blocks()?;
    let text = render_figure1(&blocks);
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    let diffs = figure1_diff(&blocks);
    if a.diff {
        for d in &diffs {
            writeln!(
                out,
                "# {} row {}: published {} generated {}",
                d.label, d.row, d.published, d.generated
            )?;
        }
        if !diff_is_expected(&diffs) {
            return Err(Failure::Verification(
                "differences beyond the known misprints".into(),
            ));
        }
    }
    if let Some(p) = &a.check {
        let golden = fs::read_to_string(p)?;
        if golden != text {
            return Err(Failure::Verification(format!(
                "rendering differs from {}",
                p.display()
            )));
        }
    }
    Ok(())
}

fn cmd_adversarial(a: AdversarialArgs) -> Outcome {
    let x = match &a.input {
        Some(p) => load_bits(p)?,
        None => bernoulli_seq(a.seed, a.bits)?,
    };
    let run = adversarial_doubling(&x, a.steps, a.horizon.unwrap_or(x.len()))?;
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    w.write_record([
        "n",
        "direction",
        "adversarial",
        "success",
        "fallback",
        "|F_n|",
        "zeros",
        "zero_fraction",
        "ledger_bound",
    ])?;
    for s in &run.steps {
        w.write_record([
            s.n.to_string(),
            s.direction.to_string(),
            s.adversarial.to_string(),
            s.success.to_string(),
            s.fallback.to_string(),
            s.card.to_string(),
            s.zeros.to_string(),
            s.zero_fraction.to_string(),
            s.ledger_bound.to_string(),
        ])?;
    }
    w.flush()?;
    eprintln!(
        "{} successes in {} steps{}",
        run.successes(),
        run.steps.len(),
        if run.truncated {
            " (stopped at the horizon)"
        } else {
            ""
        }
    );
    if !run.ledger_holds() {
        return Err(Failure::Verification(
            "a zero fraction falls below its ledger bound".into(),
        ));
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("NORMLAB_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::Usage(format!("NORMLAB_THREADS={v:?} is not a positive integer"))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Density(a) => cmd_density(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Liouville(a) => cmd_liouville(a),
        Command::Figure1(a) => cmd_figure1(a),
        Command::Adversarial(a) => cmd_adversarial(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("normlab: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("normlab: verification failed: {m}");
            ExitCode::from(2)
        }
    }
}
