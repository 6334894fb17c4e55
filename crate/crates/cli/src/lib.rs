//! `frobchar` command-line driver.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use frobchar_core::drinfeld::{eval_point, gamma_from_drinfeld, BasePoint, DrinfeldPolynomialSet, LambdaVarpi, Sign};
use frobchar_core::fgl::{
    count_hom, cyclotomic_ring_k, enumerate_hom, torsion_count, CoefficientRing, FormalGroupLaw, LawKind,
};
use frobchar_core::klengine::{cache, CoxeterPresentation, KlEngine};
use frobchar_core::lusztig::{e_n, stabilization_check, steinberg_check, E1Mode, E1Source};
use frobchar_core::qchar::{assemble_ch_et, EpsTChar, fm_expand, pi, sl2_e1_hat, Monomial, Param, DEFAULT_FM_STEP_CAP};
use frobchar_core::quiverfix::{enumerate_components, poincare_polynomial, verify_a1_even_iso};
use frobchar_core::verify::{run_criterion, verify_all, Scale, VerifyReport, DEFAULT_SEED};
use frobchar_core::weightlat::p_adic_decompose;
use frobchar_core::weylchar::{freudenthal_character, weyl_character};
use frobchar_core::{Character, Error, ErrorCategory, Result, RootSystem, WeightVector};

pub mod table;

pub use table::{CharacterTableFile, SCHEMA_VERSION};

pub const CACHE_DIR_ENV: &str = "FROBCHAR_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "frobchar", version, about = "Exact characters under iterated quantum Frobenius")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cache directory; falls back to $FROBCHAR_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RootArgs {
    /// Root system label such as A2 or B3.
    #[arg(long = "type")]
    pub root_type: String,
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    #[command(flatten)]
    pub root: RootArgs,
    #[arg(long)]
    pub p: u64,
    /// E1 source: sl2, lowest-alcove, kl or table.
    #[arg(long)]
    pub e1_source: Option<String>,
    /// Character table for the `table` source.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Weyl character of a dominant weight.
    WeylChar {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long)]
        weight: String,
        /// Use Freudenthal multiplicities instead of the alternating sum.
        #[arg(long)]
        freudenthal: bool,
    },
    /// The level-n character E^n of a dominant weight.
    LusztigE {
        #[command(flatten)]
        level_args: LevelArgs,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Write the E1 table of every supported restricted weight here.
        #[arg(long)]
        export_e1_table: Option<PathBuf>,
    },
    /// Steinberg factorization over all weights up to a bound.
    SteinbergSweep {
        #[command(flatten)]
        level_args: LevelArgs,
        #[arg(long)]
        max_weight: i64,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// E^1 = E^2 = ... on restricted weights.
    Stabilization {
        #[command(flatten)]
        level_args: LevelArgs,
        /// A single restricted weight; all restricted weights otherwise.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Kazhdan–Lusztig polynomials.
    Kl {
        /// Coxeter group such as A3, B2 or ~A2.
        #[arg(long, alias = "coxeter")]
        group: String,
        /// Word for x, e.g. "1 2".
        #[arg(long, default_value = "")]
        x: String,
        /// Word for w.
        #[arg(long)]
        w: String,
        /// Print P_{y,w} for every y <= w.
        #[arg(long)]
        interval: bool,
    },
    /// Drinfeld polynomial exponents and evaluation points in type A.
    Drinfeld {
        /// Rank n of sl_{n+1}.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "+")]
        sign: String,
        /// one or formal.
        #[arg(long, default_value = "one")]
        base: String,
        /// as-printed or paired.
        #[arg(long, default_value = "as-printed")]
        reading: String,
        /// Reduce exponents at a p-th root of unity.
        #[arg(long)]
        p: Option<u64>,
    },
    /// ε,t-characters.
    Qchar(QcharArgs),
    /// Formal group laws.
    Fgl {
        #[command(subcommand)]
        command: FglCommand,
    },
    /// Fixed-point components of T*Gr(w).
    Quiverfix {
        #[arg(long)]
        w: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = QuiverEmit::Components)]
        emit: QuiverEmit,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "small")]
        scale: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        parallel: bool,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuiverEmit {
    Components,
    Poincare,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QcharMode {
    /// Level-n assembly for sl2.
    Assemble,
    /// Frenkel–Mukhin expansion.
    Expand,
}

#[derive(Debug, Clone, Args)]
pub struct QcharArgs {
    #[arg(long, value_enum, default_value_t = QcharMode::Assemble)]
    pub mode: QcharMode,
    #[arg(long = "type", default_value = "A1")]
    pub root_type: String,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// Fundamental node (1-based) for expansion in rank >= 2.
    #[arg(long)]
    pub node: Option<usize>,
    /// Length of the sl2 string for expansion in rank 1.
    #[arg(long)]
    pub string: Option<u32>,
    /// What to print: the ε,t-character, its collapse, or both.
    #[arg(long, value_enum, default_value_t = QcharEmit::Both)]
    pub emit: QcharEmit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QcharEmit {
    #[value(name = "eps-t")]
    EpsT,
    Collapsed,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    /// additive, multiplicative or honda.
    #[arg(long, default_value = "multiplicative")]
    pub law: String,
    /// Z, Q, padic, cyclotomic or cyclotomic-rationals.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 10)]
    pub order: u32,
    /// Height of the honda model.
    #[arg(long, default_value_t = 1)]
    pub height: u32,
    /// Precision of the p-adic model.
    #[arg(long, default_value_t = 8)]
    pub precision: u32,
}

#[derive(Debug, Clone, Subcommand)]
pub enum FglCommand {
    /// The p-series [p]x.
    PSeries(LawArgs),
    /// Number of p-torsion points.
    Torsion(LawArgs),
    /// Formal group law axioms.
    Axioms(LawArgs),
    /// Cyclotomic unit certificate.
    Certificate {
        #[arg(long)]
        p: u64,
    },
    /// Homomorphisms (Z/p)^n -> G.
    Hom {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Invariant factors of G, e.g. "4,2".
        #[arg(long)]
        group: String,
        /// Count without listing.
        #[arg(long)]
        count_only: bool,
    },
}

/// Everything a run needs, after defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
}

/// Text to print and whether every check it reports passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub text: String,
    pub success: bool,
}

impl RunOutput {
    fn ok(text: String) -> Self {
        RunOutput { text, success: true }
    }
}

impl RunConfig {
    /// Builds a config, reading the cache directory from the environment
    /// when not given.
    pub fn from_cli(cli: Cli) -> Self {
        let cache_dir = cli.cache_dir.or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        let format = if cli.json { OutputFormat::Json } else { cli.format };
        RunConfig { command: cli.command, format, cache_dir }
    }

    /// Cheap checks that do not run any computation.
    pub fn validate(&self) -> Result<()> {
        match &self.command {
            Command::WeylChar { root, weight, .. } => {
                let root = parse_root(&root.root_type)?;
                parse_weight(&root, weight)?;
            }
            Command::LusztigE { level_args, weight, .. } => {
                let root = validate_level_args(level_args)?;
                parse_weight(&root, weight)?;
            }
            Command::SteinbergSweep { level_args, max_weight, level } => {
                validate_level_args(level_args)?;
                if *max_weight < 0 {
                    return Err(Error::domain("max_weight", "must be non-negative"));
                }
                if *level == 0 {
                    return Err(Error::domain("level", "the Steinberg check needs level >= 1"));
                }
            }
            Command::Stabilization { level_args, weight, n_max } => {
                let root = validate_level_args(level_args)?;
                if let Some(w) = weight {
                    parse_weight(&root, w)?;
                }
                if *n_max < 1 {
                    return Err(Error::domain("n_max", "must be at least 1"));
                }
            }
            Command::Kl { group, .. } => {
                CoxeterPresentation::parse(group)?;
            }
            Command::Drinfeld { n, weight, sign, base, reading, .. } => {
                parse_weight_rank(*n, weight)?;
                Sign::parse(sign)?;
                parse_base(base)?;
                parse_reading(reading)?;
            }
            Command::Qchar(args) => {
                let root = parse_root(&args.root_type)?;
                match args.mode {
                    QcharMode::Assemble => {
                        if root.label() != "A1" {
                            return Err(Error::unsupported("type", "assembly is provided for A1"));
                        }
                        args.p.ok_or_else(|| Error::domain("p", "assembly needs --p"))?;
                        parse_weight(&root, args.weight.as_deref().ok_or_else(|| Error::domain("weight", "assembly needs --weight"))?)?;
                    }
                    QcharMode::Expand => {
                        if root.rank() == 1 && args.string.is_none() {
                            return Err(Error::domain("string", "expansion in rank 1 needs --string"));
                        }
                        if root.rank() > 1 && args.node.is_none() {
                            return Err(Error::domain("node", "expansion in rank >= 2 needs --node"));
                        }
                    }
                }
            }
            Command::Fgl { command } => match command {
                FglCommand::PSeries(l) | FglCommand::Torsion(l) | FglCommand::Axioms(l) => {
                    parse_law(l)?;
                }
                FglCommand::Certificate { .. } => {}
                FglCommand::Hom { group, .. } => {
                    parse_list(group, "group")?;
                }
            },
            Command::Quiverfix { w, p, .. } => {
                if *p == 0 || w % p != 0 {
                    return Err(Error::domain("w", format!("p = {p} must divide w = {w}")));
                }
            }
            Command::Verify { scale, criterion, .. } => {
                Scale::parse(scale)?;
                if let Some(c) = criterion {
                    if !(1..=11).contains(c) {
                        return Err(Error::domain("criterion", format!("no criterion {c}")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_root(label: &str) -> Result<RootSystem> {
    RootSystem::parse(label).map_err(|e| Error::domain("type", e.message().to_string()))
}

fn parse_list(text: &str, field: &str) -> Result<Vec<i64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Error::domain(field, format!("`{t}` is not an integer in `{text}`"))))
        .collect()
}

fn parse_weight_rank(rank: usize, text: &str) -> Result<WeightVector> {
    let coords = parse_list(text, "weight")?;
    if coords.len() != rank {
        return Err(Error::domain("weight", format!("expected {rank} coordinates, got {}", coords.len())));
    }
    let w = WeightVector(coords);
    if !w.is_dominant() {
        return Err(Error::domain("weight", format!("{w} is not dominant")));
    }
    Ok(w)
}

fn parse_weight(root: &RootSystem, text: &str) -> Result<WeightVector> {
    parse_weight_rank(root.rank(), text)
}

fn parse_base(s: &str) -> Result<BasePoint> {
    match s {
        "one" | "1" => Ok(BasePoint::One),
        "formal" | "a" => Ok(BasePoint::Formal),
        _ => Err(Error::domain("base", format!("expected one or formal, got `{s}`"))),
    }
}

fn parse_reading(s: &str) -> Result<LambdaVarpi> {
    match s {
        "as-printed" => Ok(LambdaVarpi::AsPrinted),
        "paired" => Ok(LambdaVarpi::Paired),
        _ => Err(Error::domain("reading", format!("expected as-printed or paired, got `{s}`"))),
    }
}

fn default_mode(root: &RootSystem) -> E1Mode {
    if root.label() == "A1" {
        E1Mode::Sl2ClosedForm
    } else {
        E1Mode::LowestAlcove
    }
}

fn validate_level_args(a: &LevelArgs) -> Result<RootSystem> {
    let root = parse_root(&a.root.root_type)?;
    if !frobchar_core::is_prime(a.p) {
        return Err(Error::domain("p", format!("{} is not a prime", a.p)));
    }
    let mode = match &a.e1_source {
        Some(s) => E1Mode::parse(s)?,
        None => default_mode(&root),
    };
    match (mode, &a.table) {
        (E1Mode::UserTable, None) => return Err(Error::domain("table", "the table source needs --table")),
        (m, Some(_)) if m != E1Mode::UserTable => {
            return Err(Error::domain("table", "--table only applies to --e1-source table"));
        }
        _ => {}
    }
    Ok(root)
}

fn build_source(a: &LevelArgs) -> Result<E1Source> {
    let root = validate_level_args(a)?;
    let mode = a.e1_source.as_deref().map(E1Mode::parse).transpose()?.unwrap_or_else(|| default_mode(&root));
    if mode == E1Mode::UserTable {
        let file = CharacterTableFile::load(a.table.as_ref().expect("validated"))?;
        if file.root()?.label() != root.label() || file.header.p != a.p {
            return Err(Error::domain("table", "table header does not match --type and --p"));
        }
        return E1Source::from_table(file.to_dominant_table()?, a.p);
    }
    E1Source::new(root, a.p, mode)
}

/// Runs a validated configuration.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let json = config.format == OutputFormat::Json;
    match &config.command {
        Command::WeylChar { root, weight, freudenthal } => {
            let root = parse_root(&root.root_type)?;
            let lam = parse_weight(&root, weight)?;
            let ch = if *freudenthal { freudenthal_character(&root, &lam)? } else { weyl_character(&root, &lam)? };
            let header = json!({"type": root.label(), "weight": lam, "dim": ch.dim()});
            Ok(RunOutput::ok(emit_character(json, header, &format!("chi{lam} type {} dim {}", root.label(), ch.dim()), &ch)))
        }
        Command::LusztigE { level_args, weight, level, export_e1_table } => {
            let src = build_source(level_args)?;
            let root = src.root().clone();
            let lam = parse_weight(&root, weight)?;
            if let Some(path) = export_e1_table {
                export_table(&src, path)?;
            }
            let ch = e_n(&src, &lam, *level)?.character;
            let header = json!({
                "type": root.label(), "weight": lam, "p": src.p(), "level": level,
                "e1_source": src.mode().name(), "dim": ch.dim(),
            });
            let title = format!("E^{level}{lam} type {} p={} e1={} dim {}", root.label(), src.p(), src.mode(), ch.dim());
            Ok(RunOutput::ok(emit_character(json, header, &title, &ch)))
        }
        Command::SteinbergSweep { level_args, max_weight, level } => {
            let src = build_source(level_args)?;
            let weights = sweep_weights(src.root().rank(), *max_weight);
            let mut failures = Vec::new();
            for w in &weights {
                if !steinberg_check(&src, w, *level)?.passed {
                    failures.push(w.clone());
                }
            }
            let passed = weights.len() - failures.len();
            let text = if json {
                to_json(&json!({
                    "schema_version": SCHEMA_VERSION, "passed": passed, "total": weights.len(),
                    "failures": failures, "level": level, "p": src.p(),
                }))
            } else {
                let mut t = format!("{passed}/{} pass\n", weights.len());
                for f in &failures {
                    t.push_str(&format!("fail {f}\n"));
                }
                t
            };
            Ok(RunOutput { text, success: failures.is_empty() })
        }
        Command::Stabilization { level_args, weight, n_max } => {
            let src = build_source(level_args)?;
            let root = src.root().clone();
            let weights = match weight {
                Some(w) => vec![parse_weight(&root, w)?],
                None => restricted_weights(root.rank(), src.p()),
            };
            let (mut stable, mut skipped, mut unstable) = (0usize, 0usize, Vec::new());
            for w in &weights {
                match stabilization_check(&src, w, *n_max) {
                    Ok(true) => stable += 1,
                    Ok(false) => unstable.push(w.clone()),
                    Err(e) if weight.is_none() && e.category() == ErrorCategory::UnsupportedConfiguration => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            let checked = stable + unstable.len();
            let text = if json {
                to_json(&json!({
                    "schema_version": SCHEMA_VERSION, "stable": stable, "checked": checked,
                    "skipped": skipped, "unstable": unstable, "n_max": n_max,
                }))
            } else {
                format!("{stable}/{checked} stable up to level {n_max} ({skipped} skipped)\n")
            };
            Ok(RunOutput { text, success: unstable.is_empty() })
        }
        Command::Kl { group, x, w, interval } => run_kl(config, group, x, w, *interval),
        Command::Drinfeld { n, weight, sign, base, reading, p } => {
            let lam = parse_weight_rank(*n, weight)?;
            let sign = Sign::parse(sign)?;
            let base = parse_base(base)?;
            let reading = parse_reading(reading)?;
            let set = DrinfeldPolynomialSet::new(*n, &lam, sign, base)?;
            let point = eval_point(*n, &lam, base, sign, reading)?;
            let gamma = p.map(|p| gamma_from_drinfeld(&set, p)).transpose()?;
            let text = if json {
                to_json(&json!({
                    "schema_version": SCHEMA_VERSION, "n": n, "weight": lam, "sign": sign,
                    "exponents": set.exponents, "degrees": (1..=*n).map(|i| set.degree(i)).collect::<Vec<_>>(),
                    "eval_point": point.to_string(), "gamma": gamma,
                }))
            } else {
                let mut t = String::new();
                for i in 1..=*n {
                    t.push_str(&format!("P_{i}(t) = {}\n", set.display_polynomial(i)));
                }
                t.push_str(&format!("eval point = {point}\n"));
                if let Some(g) = gamma {
                    t.push_str(&format!("exponents mod {} = {:?}\n", g.p, g.exponents));
                }
                t
            };
            Ok(RunOutput::ok(text))
        }
        Command::Qchar(args) => run_qchar(json, args),
        Command::Fgl { command } => run_fgl(json, command),
        Command::Quiverfix { w, p, emit } => run_quiver(json, *w, *p, *emit),
        Command::Verify { scale, seed, parallel, criterion } => {
            let scale = Scale::parse(scale)?;
            let report = match criterion {
                Some(id) => VerifyReport { scale, seed: *seed, rows: vec![run_criterion(*id, scale, *seed)?] },
                None => verify_all(scale, *seed, *parallel),
            };
            let text = if json {
                let mut v = serde_json::to_value(&report).expect("reports serialise");
                v["schema_version"] = json!(SCHEMA_VERSION);
                v["all_passed"] = json!(report.all_passed());
                to_json(&v)
            } else {
                let mut t = String::new();
                for row in &report.rows {
                    t.push_str(&format!("{row}\n"));
                }
                let ok = report.rows.iter().filter(|r| r.ok()).count();
                t.push_str(&format!("{ok}/{} criteria pass ({} scale, seed {})\n", report.rows.len(), scale.name(), seed));
                t
            };
            Ok(RunOutput { text, success: report.all_passed() })
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn emit_character(json: bool, mut header: Value, title: &str, ch: &Character) -> String {
    if json {
        header["schema_version"] = json!(SCHEMA_VERSION);
        header["character"] = ch.to_json_value();
        return to_json(&header);
    }
    let mut t = format!("# {title}\n");
    let terms: Vec<(&WeightVector, i64)> = ch.terms().collect();
    for (mu, c) in terms.into_iter().rev() {
        t.push_str(&format!("{mu}\t{c}\n"));
    }
    t
}

fn sweep_weights(rank: usize, max: i64) -> Vec<WeightVector> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v| (0..=max).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.into_iter().map(WeightVector).filter(|w| !w.is_zero()).collect()
}

fn restricted_weights(rank: usize, p: u64) -> Vec<WeightVector> {
    let mut all = sweep_weights(rank, p as i64 - 1);
    all.insert(0, WeightVector::zero(rank));
    all
}

fn export_table(src: &E1Source, path: &std::path::Path) -> Result<()> {
    let mut file = CharacterTableFile::new(src.root(), src.p(), 1, src.mode().name());
    for lam in restricted_weights(src.root().rank(), src.p()) {
        match src.e1_reduced(&lam) {
            Ok(ch) => file.push(lam, ch),
            Err(e) if e.category() == ErrorCategory::UnsupportedConfiguration => {}
            Err(e) => return Err(e),
        }
    }
    file.save(path)
}

fn run_kl(config: &RunConfig, group: &str, x: &str, w: &str, interval: bool) -> Result<RunOutput> {
    let pres = CoxeterPresentation::parse(group)?;
    let engine = KlEngine::new(pres.clone());
    let cache_file = match &config.cache_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::resource("cache_dir", e.to_string()))?;
            let path = cache::cache_path(dir, &engine);
            cache::load(&engine, &path)?;
            Some(path)
        }
        None => None,
    };
    let we = pres.element(&pres.parse_word(w)?)?;
    let xs = if interval { engine.lower_interval(&we)? } else { vec![pres.element(&pres.parse_word(x)?)?] };
    let mut rows = Vec::new();
    for xe in &xs {
        rows.push((pres.format_word(xe.word()), engine.kl_polynomial(xe, &we)?));
    }
    if let Some(path) = cache_file {
        cache::save(&engine, &path)?;
    }
    let wf = pres.format_word(we.word());
    let text = if config.format == OutputFormat::Json {
        let entries: Vec<Value> = rows.iter().map(|(x, p)| json!({"x": x, "w": wf, "coeffs": p.coeffs()})).collect();
        to_json(&json!({"schema_version": SCHEMA_VERSION, "group": pres.name(), "entries": entries}))
    } else {
        rows.iter().map(|(x, p)| format!("P[{x} | {wf}] = {p}\n")).collect()
    };
    Ok(RunOutput::ok(text))
}

fn run_qchar(json: bool, args: &QcharArgs) -> Result<RunOutput> {
    let root = parse_root(&args.root_type)?;
    match args.mode {
        QcharMode::Assemble => {
            let p = args.p.expect("validated");
            let lam = parse_weight(&root, args.weight.as_deref().expect("validated"))?;
            let n = args.level as usize;
            let mut digits = p_adic_decompose(&lam, p)?;
            digits.resize(digits.len().max(n), WeightVector::zero(1));
            let mut tail = WeightVector::zero(1);
            for d in digits.iter().skip(n).rev() {
                tail = &tail.scale(p as i64) + d;
            }
            let chi_tail = weyl_character(&root, &tail)?;
            let assembled = assemble_ch_et(&root, p, &digits[..n], &tail, &chi_tail, |d| sl2_e1_hat(p, d.0[0]))?;
            let collapsed = pi(&assembled, &root)?;
            let src = E1Source::new(root.clone(), p, E1Mode::Sl2ClosedForm)?;
            let expected = e_n(&src, &lam, args.level)?.character;
            let agrees = collapsed == expected;
            let text = if json {
                let mut v = json!({"schema_version": SCHEMA_VERSION, "weight": lam, "p": p, "level": n, "pi_matches_e_n": agrees});
                put_emitted(&mut v, args.emit, &assembled, &collapsed);
                to_json(&v)
            } else {
                let mut t = String::new();
                if args.emit != QcharEmit::Collapsed {
                    t.push_str(&format!("{assembled}\n"));
                }
                if args.emit != QcharEmit::EpsT {
                    t.push_str(&collapsed_lines(&collapsed));
                }
                t.push_str(&format!("Pi = E^{n}{lam}: {agrees} (dim {})\n", collapsed.dim()));
                t
            };
            Ok(RunOutput { text, success: agrees })
        }
        QcharMode::Expand => {
            let eps = Param(vec![1]);
            let highest = if root.rank() == 1 {
                Monomial::from_w((0..args.string.expect("validated") as i64).map(|j| (0usize, Param(vec![2 * j]))))
            } else {
                let node = args.node.expect("validated");
                if node == 0 || node > root.rank() {
                    return Err(Error::domain("node", format!("node {node} out of range 1..={}", root.rank())));
                }
                Monomial::from_w([(node - 1, Param(vec![0]))])
            };
            let out = fm_expand(&root, &highest, 1, &eps, DEFAULT_FM_STEP_CAP)?;
            let collapsed = pi(&out, &root)?;
            let text = if json {
                let mut v = json!({"schema_version": SCHEMA_VERSION, "type": root.label()});
                put_emitted(&mut v, args.emit, &out, &collapsed);
                to_json(&v)
            } else {
                let mut t = String::new();
                if args.emit != QcharEmit::Collapsed {
                    t.extend(out.terms().map(|(_, m, c)| format!("{c}\t{m}\n")));
                }
                if args.emit != QcharEmit::EpsT {
                    t.push_str(&collapsed_lines(&collapsed));
                }
                t.push_str(&format!("{} monomials, Pi has dim {}\n", out.len(), collapsed.dim()));
                t
            };
            Ok(RunOutput::ok(text))
        }
    }
}

fn put_emitted(v: &mut Value, emit: QcharEmit, xi: &EpsTChar, collapsed: &Character) {
    if emit != QcharEmit::Collapsed {
        v["eps_t_character"] = xi.to_json_value();
    }
    if emit != QcharEmit::EpsT {
        v["pi"] = collapsed.to_json_value();
    }
}

fn collapsed_lines(ch: &Character) -> String {
    ch.terms().collect::<Vec<_>>().into_iter().rev().map(|(mu, c)| format!("{mu}\t{c}\n")).collect()
}

fn parse_law(l: &LawArgs) -> Result<FormalGroupLaw> {
    let ring = CoefficientRing::parse(&l.ring, l.p, l.precision)?;
    let kind = LawKind::parse(&l.law, l.p, l.height)?;
    if l.order < 2 {
        return Err(Error::domain("order", "truncation order must be at least 2"));
    }
    FormalGroupLaw::new(kind, ring, l.order)
}

fn run_fgl(json: bool, command: &FglCommand) -> Result<RunOutput> {
    match command {
        FglCommand::PSeries(l) => {
            let law = parse_law(l)?;
            let s = law.p_series(l.p);
            let text = if json {
                let mut v = s.to_json_value();
                v["schema_version"] = json!(SCHEMA_VERSION);
                to_json(&v)
            } else {
                format!("[{}]x = {s}\n", l.p)
            };
            Ok(RunOutput::ok(text))
        }
        FglCommand::Torsion(l) => {
            let law = parse_law(l)?;
            let t = torsion_count(&law, l.p)?;
            let ring = law.ring();
            let roots: Option<Vec<String>> = t.roots.as_ref().map(|r| r.iter().map(|x| ring.format(x)).collect());
            let text = if json {
                to_json(&json!({
                    "schema_version": SCHEMA_VERSION, "count": t.count,
                    "weierstrass_degree": t.weierstrass_degree, "roots": roots, "ring": ring.name(),
                }))
            } else {
                let mut s = format!("{} torsion points over {}\n", t.count, ring.name());
                if let Some(r) = roots {
                    s.push_str(&format!("roots: {}\n", r.join(", ")));
                }
                s
            };
            Ok(RunOutput::ok(text))
        }
        FglCommand::Axioms(l) => {
            let law = parse_law(l)?;
            let r = law.check_axioms()?;
            let text = if json {
                let mut v = serde_json::to_value(r).expect("reports serialise");
                v["schema_version"] = json!(SCHEMA_VERSION);
                to_json(&v)
            } else {
                format!(
                    "left unit {}, right unit {}, commutative {}, associative {} (order {})\n",
                    r.left_unit, r.right_unit, r.commutative, r.associative, l.order
                )
            };
            Ok(RunOutput { text, success: r.all() })
        }
        FglCommand::Certificate { p } => {
            let c = cyclotomic_ring_k(*p)?;
            let field = CoefficientRing::CyclotomicRationals { p: *p };
            let inverses: Vec<Value> =
                c.inverses.iter().map(|(k, inv)| json!({"k": k, "inverse": field.format(inv)})).collect();
            let product = c.ring.format(&c.product);
            let text = if json {
                to_json(&json!({
                    "schema_version": SCHEMA_VERSION, "ring": c.ring.name(), "product": product,
                    "inverses": inverses, "verified": c.verified,
                }))
            } else {
                let mut t = format!("prod (1 - z^k) = {product} in {}\n", c.ring.name());
                for (k, inv) in &c.inverses {
                    t.push_str(&format!("(1 - z^{k})^-1 = {}\n", field.format(inv)));
                }
                t.push_str(&format!("verified: {}\n", c.verified));
                t
            };
            Ok(RunOutput { text, success: c.verified })
        }
        FglCommand::Hom { p, n, group, count_only } => {
            let factors: Vec<u64> = parse_list(group, "group")?
                .into_iter()
                .map(|d| u64::try_from(d).map_err(|_| Error::domain("group", "invariant factors must be positive")))
                .collect::<Result<_>>()?;
            let (count, homs) = if *count_only {
                (count_hom(*p, *n, &factors)?, None)
            } else {
                let e = enumerate_hom(*p, *n, &factors)?;
                (e.count, Some(e.homs))
            };
            let text = if json {
                to_json(&json!({"schema_version": SCHEMA_VERSION, "count": count.to_string(), "homs": homs}))
            } else {
                let mut t = format!("{count} homomorphisms\n");
                for h in homs.iter().flatten() {
                    t.push_str(&format!("{h:?}\n"));
                }
                t
            };
            Ok(RunOutput::ok(text))
        }
    }
}

fn run_quiver(json: bool, w: u64, p: u64, emit: QuiverEmit) -> Result<RunOutput> {
    match emit {
        QuiverEmit::Components | QuiverEmit::Poincare => {
            let comps = enumerate_components(w, p)?;
            let text = if json {
                let rows: Vec<Value> = comps
                    .iter()
                    .map(|d| {
                        json!({
                            "v": d.v, "w": d.w, "even": d.is_even(), "fiber_rank": d.fiber_rank(),
                            "poincare": poincare_polynomial(d),
                        })
                    })
                    .collect();
                to_json(&json!({"schema_version": SCHEMA_VERSION, "p": p, "w": w, "components": rows}))
            } else {
                comps
                    .iter()
                    .map(|d| match emit {
                        QuiverEmit::Components => format!(
                            "v={:?} {} fiber {}\n",
                            d.v,
                            if d.is_even() { "even" } else { "uneven" },
                            d.fiber_rank()
                        ),
                        _ => format!("v={:?} {}\n", d.v, format_t_poly(&poincare_polynomial(d))),
                    })
                    .collect()
            };
            Ok(RunOutput::ok(text))
        }
        QuiverEmit::Verify => {
            let r = verify_a1_even_iso(w, p)?;
            let text = if json {
                let mut v = serde_json::to_value(&r).expect("reports serialise");
                v["schema_version"] = json!(SCHEMA_VERSION);
                to_json(&v)
            } else {
                let mut t = String::new();
                for m in &r.pairs {
                    t.push_str(&format!("v={} {} ~ {} shift {}\n", m.v, format_t_poly(&m.fixed_poincare), format_t_poly(&m.product_poincare), m.shift));
                }
                t.push_str(&format!("even isomorphism holds: {}\n", r.holds));
                t
            };
            Ok(RunOutput { text, success: r.holds })
        }
    }
}

fn format_t_poly(c: &[i64]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(d, &x)| match (d, x) {
            (0, _) => x.to_string(),
            (1, 1) => "t".into(),
            (_, 1) => format!("t^{d}"),
            (1, _) => format!("{x}t"),
            _ => format!("{x}t^{d}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Process exit code for an error category.
pub fn exit_code(category: ErrorCategory) -> u8 {
    match category {
        ErrorCategory::Domain => 2,
        ErrorCategory::UnsupportedConfiguration => 3,
        ErrorCategory::Resource => 4,
    }
}

/// Machine-readable error body.
pub fn error_json(e: &Error) -> String {
    to_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "category": e.category().to_string(),
        "field": e.field(),
        "message": e.message(),
    }))
}
