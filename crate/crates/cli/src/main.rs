use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sofic::action::{nontrivial_words, parse_action, sofic_defect, write_action};
use sofic::constructions::{
    bernoulli_labeling, build_profinite, build_treeable, default_word_table, oe_add_generator, rational_round_stats,
    target_stats_free_involutions, Labeling, Preset, WordRule,
};
use sofic::nbhd::{pair_stats, stat_vector, statistical_distance, TypeOrdering};
use sofic::operator::analytic_trace;
use sofic::scalar::{rational_to_f64, ratio};
use sofic::spectral::{det_conjecture_check, DetOptions};
use sofic::{ComplexSpec, Error, FiniteAction, GeneratorWord, IntSpec, Rational, StatVector};

#[derive(Parser)]
#[command(name = "sofic", version, about = "Finite sofic models, local statistics and operator checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenPreset {
    Cyclic,
    Torus,
    FreeRandom,
    Treeable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelKind {
    Zeros,
    Iid,
    Bernoulli,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Build an action and write it in the plain-text action format.
    Gen {
        #[arg(long, value_enum)]
        preset: GenPreset,
        /// Size: vertices for cyclic and free-random, side length for torus,
        /// size hint for treeable.
        #[arg(long)]
        n: usize,
        /// Generators for free-random and treeable.
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Label bits per vertex.
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value = "iid")]
        labels: LabelKind,
        /// Neighborhood radius of the treeable target.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Rounding tolerance of the treeable target.
        #[arg(long, default_value = "1/1000")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Labeled neighborhood statistics of an action.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: u32,
        /// Joint statistics along each generator (involution actions).
        #[arg(long)]
        pairs: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Statistical distance between two statistics files.
    Dist {
        #[arg(long)]
        a: Vec<PathBuf>,
        #[arg(long)]
        b: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Append an orbit-equivalent generator given by a word rule.
    OeExtend {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rule: PathBuf,
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Where to write the report; standard error if omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Instantiate an operator spec and report traces and norms.
    Op {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        i_max: usize,
        /// Statistics to evaluate the analytic trace formula against.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Read entries as complex numbers `re,im`.
        #[arg(long)]
        complex: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Determinant check of an integer spec over a family of presets.
    Det {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        preset: GenPreset,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        i_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Multiplicativity and freeness defects over short words.
    Defect {
        #[arg(long)]
        input: PathBuf,
        /// Test all pairs of reduced words up to this length.
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Words expected to act trivially, e.g. `1,1,1`.
        #[arg(long)]
        relation: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
}

/// A failure with its exit status: 1 for input errors, 2 for numerical
/// failures and guards.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input() { 1 } else { 2 },
            msg: e.to_string(),
        }
    }
}

fn input_failure(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

/// Reads and parses a file, naming it in any error.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> sofic::Result<T>) -> Res<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            code: f.code,
            msg: format!("{}: {}", path.display(), f.msg),
        }
    })
}

/// Writes through a temporary file in the same directory, then renames.
fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    let Some(path) = out else {
        print!("{text}");
        return Ok(());
    };
    let name = path
        .file_name()
        .ok_or_else(|| input_failure(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| input_failure(format!("{}: {e}", path.display()));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn parse_rational(s: &str) -> Res<Rational> {
    let bad = || input_failure(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(ratio(n, d));
    }
    let x: f64 = s.trim().parse().map_err(|_| bad())?;
    Rational::from_float(x).ok_or_else(bad)
}

/// `key value` lines, or a two-row CSV.
fn report(fields: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Text => fields.iter().map(|(k, v)| format!("{k} {v}\n")).collect(),
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    format!("{r} ({:.12e})", rational_to_f64(r))
}

#[allow(clippy::too_many_arguments)]
fn gen(
    preset: GenPreset,
    n: usize,
    d: u32,
    k: usize,
    labels: LabelKind,
    r: u32,
    eps: &str,
    seed: u64,
) -> Res<FiniteAction> {
    let base_labels = match labels {
        LabelKind::Zeros | LabelKind::Bernoulli => Labeling::Zeros(0),
        LabelKind::Iid => Labeling::Iid { k, seed },
    };
    let action = match preset {
        GenPreset::Cyclic => build_profinite(Preset::Cyclic, n, base_labels, seed)?,
        GenPreset::Torus => build_profinite(Preset::Torus, n, base_labels, seed)?,
        GenPreset::FreeRandom => build_profinite(Preset::FreeRandom { d }, n, base_labels, seed)?,
        GenPreset::Treeable => {
            let (s, p) = target_stats_free_involutions(d, r)?;
            let sol = rational_round_stats(&s, &p, &parse_rational(eps)?)?;
            build_treeable(&sol, n as u64, r as usize, seed)?.action
        }
    };
    Ok(match labels {
        LabelKind::Zeros => {
            let keep = if preset == GenPreset::Treeable { action.label_len().max(k) } else { k };
            let l = action.labels().iter().map(|w| w.resized(keep)).collect();
            action.with_labels(l)?
        }
        LabelKind::Iid if preset == GenPreset::Treeable => {
            return Err(input_failure("treeable models carry the labels of their types; use --labels zeros"));
        }
        LabelKind::Iid => action,
        LabelKind::Bernoulli => {
            let table = default_word_table(action.d(), action.mode(), k);
            bernoulli_labeling(&action, &table, k, seed)?
        }
    })
}

fn stats(input: &Path, r: u32, pairs: bool, format: Format) -> Res<String> {
    let action = load(input, parse_action)?;
    if pairs {
        let p = pair_stats(&action, r)?;
        return Ok(match format {
            Format::Csv => p.to_csv(),
            Format::Text => p
                .iter()
                .map(|((a, i, b), v)| format!("{a} {i} {b} {}\n", fmt_rational(v)))
                .collect(),
        });
    }
    let s = stat_vector(&action, r)?;
    Ok(match format {
        Format::Csv => s.to_csv(),
        Format::Text => {
            let mut out = format!("# radius {r}, {} types, {} vertices\n", s.len(), action.n());
            for (t, p) in s.iter() {
                let _ = writeln!(out, "{t} {}", fmt_rational(p));
            }
            out
        }
    })
}

fn dist(a: &[PathBuf], b: &[PathBuf], format: Format) -> Res<String> {
    if a.is_empty() || b.is_empty() {
        return Err(input_failure("dist needs at least one --a and one --b file"));
    }
    let read_all = |paths: &[PathBuf]| -> Res<Vec<StatVector>> {
        paths.iter().map(|p| load(p, StatVector::from_csv)).collect()
    };
    let (va, vb) = (read_all(a)?, read_all(b)?);
    let ord = TypeOrdering::from_supports(va.iter().chain(&vb));
    let d = statistical_distance(&va, &vb, &ord)?;
    Ok(report(
        &[
            ("d_s", d.to_string()),
            ("d_s_float", format!("{:.12e}", rational_to_f64(&d))),
            ("types", ord.len().to_string()),
            ("ordering", format!("\"{}\"", TypeOrdering::DESCRIPTION)),
        ],
        format,
    ))
}

fn oe_extend(input: &Path, rule: &Path, eps: &str) -> Res<(String, String)> {
    let action = load(input, parse_action)?;
    let rule = load(rule, WordRule::parse)?;
    let (ext, rep) = oe_add_generator(&action, &rule, &parse_rational(eps)?)?;
    let text = report(
        &[
            ("bad_ratio", fmt_rational(&rep.bad_ratio)),
            ("patched", rep.patched.to_string()),
            ("eps", rep.eps.to_string()),
            ("within_2eps", rep.within_bound().to_string()),
        ],
        Format::Text,
    );
    Ok((write_action(&ext), text))
}

fn op(spec: &Path, input: &Path, i_max: usize, stats: Option<&Path>, complex: bool, format: Format) -> Res<String> {
    let action = Arc::new(load(input, parse_action)?);
    let targets = stats.map(|p| load(p, StatVector::from_csv)).transpose()?;
    let mut fields: Vec<(&str, String)> = Vec::new();
    let mut moment_lines: Vec<(String, String)> = Vec::new();
    macro_rules! run {
        ($spec:expr, $fmt:expr) => {{
            let spec = $spec;
            let k = spec.instantiate(&action)?;
            fields.push(("n", action.n().to_string()));
            fields.push(("d_block", k.dim().to_string()));
            fields.push(("width", k.width().to_string()));
            fields.push(("sup_block_norm", format!("{:.12e}", k.sup_norm())));
            fields.push(("hs_norm", format!("{:.12e}", k.hs_norm())));
            let norm = match k.op_norm(1e-12, 100_000) {
                Ok(v) => v,
                Err(Error::Numerical { partial, .. }) => partial,
                Err(e) => return Err(e.into()),
            };
            fields.push(("op_norm", format!("{norm:.12e}")));
            fields.push(("norm_bound", format!("{:.12e}", k.width() as f64 * k.sup_norm())));
            for (i, m) in k.moments(i_max)?.iter().enumerate() {
                moment_lines.push((format!("moment_{}", i + 1), $fmt(m)));
                if let Some(t) = &targets {
                    let a = analytic_trace(&spec, i as u32 + 1, t)?;
                    moment_lines.push((format!("analytic_{}", i + 1), $fmt(&a)));
                }
            }
        }};
    }
    if complex {
        run!(load(spec, ComplexSpec::parse)?, |z: &sofic::Complex64| format!("{:.12e}{:+.12e}i", z.re, z.im));
    } else {
        run!(load(spec, IntSpec::parse)?, |q: &Rational| q.to_string());
    }
    let mut all: Vec<(&str, String)> = fields;
    all.extend(moment_lines.iter().map(|(k, v)| (k.as_str(), v.clone())));
    Ok(report(&all, format))
}

#[allow(clippy::too_many_arguments)]
fn det(spec: &Path, preset: GenPreset, sizes: &[usize], d: u32, seed: u64, i_max: usize, format: Format) -> Res<String> {
    let spec = load(spec, IntSpec::parse)?;
    let k = spec.radius() as usize;
    let build = |size: usize| match preset {
        GenPreset::Cyclic => build_profinite(Preset::Cyclic, size, Labeling::Zeros(k), seed),
        GenPreset::Torus => build_profinite(Preset::Torus, size, Labeling::Zeros(k), seed),
        GenPreset::FreeRandom => build_profinite(Preset::FreeRandom { d }, size, Labeling::Zeros(k), seed),
        GenPreset::Treeable => {
            let (s, p) = target_stats_free_involutions(d, spec.radius())?;
            let sol = rational_round_stats(&s, &p, &ratio(1, 1000))?;
            Ok(build_treeable(&sol, size as u64, k, seed)?.action)
        }
    };
    let opts = DetOptions {
        moments: i_max,
        ..DetOptions::default()
    };
    let rep = det_conjecture_check(&spec, build, sizes, &opts)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n,d_block,rank,log_det,normalized_det,certificate,op_norm,schur_bound");
            for m in 1..=i_max {
                let _ = write!(out, ",moment_{m}");
            }
            out.push('\n');
            for r in &rep.rows {
                let cert = r.certificate.as_ref().map(|c| c.to_string()).unwrap_or_default();
                let _ = write!(
                    out,
                    "{},{},{},{:.15e},{:.15e},{cert},{:.12e},{:.12e}",
                    r.n, r.d_block, r.rank, r.log_det, r.det, r.op_norm, r.schur_bound
                );
                for m in &r.moments {
                    let _ = write!(out, ",{m}");
                }
                out.push('\n');
            }
        }
        Format::Text => {
            for r in &rep.rows {
                let _ = writeln!(
                    out,
                    "n {} rank {} normalized_det {:.15e} log_det {:.15e} op_norm {:.12e} certificate {}",
                    r.n,
                    r.rank,
                    r.det,
                    r.log_det,
                    r.op_norm,
                    r.certificate.as_ref().map_or("-".to_string(), |c| c.to_string()),
                );
            }
            let _ = writeln!(out, "uniform_bound {:.12e}", rep.uniform_bound);
            let _ = writeln!(out, "uniformly_bounded {}", rep.uniformly_bounded);
            let spread: Vec<String> = rep.moment_spread.iter().map(|s| format!("{s:.3e}")).collect();
            let _ = writeln!(out, "moment_spread {}", spread.join(" "));
            let _ = writeln!(out, "moments_settled {}", rep.moments_settled);
            let _ = writeln!(out, "certificates_ok {}", rep.certificates_ok);
        }
    }
    Ok(out)
}

fn defect(input: &Path, q: u32, relations: &[String], format: Format) -> Res<String> {
    let action = load(input, parse_action)?;
    let words = nontrivial_words(&action, q);
    let pairs: Vec<(GeneratorWord, GeneratorWord)> = words
        .iter()
        .flat_map(|e| words.iter().map(move |f| (e.clone(), f.clone())))
        .collect();
    let rels = relations
        .iter()
        .map(|s| GeneratorWord::parse(s))
        .collect::<sofic::Result<Vec<_>>>()?;
    let rep = sofic_defect(&action, &pairs, &rels)?;
    Ok(report(
        &[
            ("pairs", rep.pairs.len().to_string()),
            ("eps_mult", fmt_rational(&rep.eps_mult)),
            ("eps_free", fmt_rational(&rep.eps_free)),
        ],
        format,
    ))
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Gen {
            preset,
            n,
            d,
            k,
            labels,
            r,
            eps,
            seed,
            out,
        } => {
            let a = gen(preset, n, d, k, labels, r, &eps, seed)?;
            emit(out.as_deref(), &write_action(&a))
        }
        Command::Stats { input, r, pairs, output } => {
            emit(output.out.as_deref(), &stats(&input, r, pairs, output.format)?)
        }
        Command::Dist { a, b, output } => emit(output.out.as_deref(), &dist(&a, &b, output.format)?),
        Command::OeExtend {
            input,
            rule,
            eps,
            out,
            report,
        } => {
            let (action, text) = oe_extend(&input, &rule, &eps)?;
            emit(out.as_deref(), &action)?;
            match report {
                Some(p) => emit(Some(&p), &text),
                None => {
                    eprint!("{text}");
                    Ok(())
                }
            }
        }
        Command::Op {
            spec,
            input,
            i_max,
            stats,
            complex,
            output,
        } => emit(
            output.out.as_deref(),
            &op(&spec, &input, i_max, stats.as_deref(), complex, output.format)?,
        ),
        Command::Det {
            spec,
            preset,
            sizes,
            d,
            seed,
            i_max,
            output,
        } => emit(
            output.out.as_deref(),
            &det(&spec, preset, &sizes, d, seed, i_max, output.format)?,
        ),
        Command::Defect {
            input,
            q,
            relation,
            output,
        } => emit(output.out.as_deref(), &defect(&input, q, &relation, output.format)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
