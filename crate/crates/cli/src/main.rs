use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setcode::bounds::{self, BoundKind, GridPoint};
use setcode::channel::{apply, ball_size_formulas, ChannelSpec};
use setcode::constructions::{ConstructionParams, ListedCode};
use setcode::payload::{decode_stream, encode_stream};
use setcode::seq::parse_sets;
use setcode::verify::{code_sound, is_code, soundness_json, verdict_json, CodeVerdict};
use setcode::{DataSet, ReceivedSet, Sequence};

#[derive(Parser)]
#[command(
    name = "setcode",
    version,
    about = "Codes over unordered sets of binary sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a byte stream into codeword sets.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Decode received sets back to the byte stream.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Pass every set in a file through the channel.
    Simulate {
        /// e.g. `s=1,t=1,eps=1,metric=H`
        #[arg(long)]
        spec: ChannelSpec,
        #[arg(long)]
        seed: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// JSON list of what the channel did to each set.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Evaluate one cardinality / redundancy bound.
    Bounds {
        /// 1: substitution packing, 2: insertion packing, 3 and 4: their
        /// asymptotic forms, 5: losses and errors.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        thm: u8,
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        eps: usize,
        /// Constant of the asymptotic forms, in [0, 1).
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long)]
        json: bool,
    },
    /// Construction redundancies next to lower bounds.
    Table1 {
        /// JSON list of grid points `{M, L, s, t, eps, c}`; defaults to the
        /// single point given by the flags.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long = "M", default_value_t = 8)]
        m: usize,
        #[arg(long = "L", default_value_t = 64)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        eps: usize,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Check a construction exhaustively against a channel.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        /// Defaults to the channel the construction claims to correct.
        #[arg(long)]
        spec: Option<ChannelSpec>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Random trials instead of exhaustive checking; evidence only.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print ball-size formulas.
    Balls {
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        eps: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    C1,
    C2,
    C3,
    C4,
    /// Systematic encoder for the c4 codebook.
    C4s,
    C5,
    C6,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    construction: Kind,
    #[arg(long = "M")]
    m: usize,
    #[arg(long = "L")]
    l: usize,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    #[arg(long, default_value_t = 0)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Bits of group index for c3.
    #[arg(long, default_value_t = 0)]
    c_bits: usize,
    /// Checksum residue for c4 and c5.
    #[arg(long, default_value_t = 0)]
    a: u64,
    #[arg(long, default_value_t = 1)]
    eps: usize,
}

impl CodeArgs {
    fn params(&self) -> ConstructionParams {
        let (m, l) = (self.m, self.l);
        match self.construction {
            Kind::C1 => ConstructionParams::C1 {
                M: m,
                L: l,
                delta: self.delta,
            },
            Kind::C2 => ConstructionParams::C2 {
                M: m,
                L: l,
                s: self.s,
                t: self.t,
            },
            Kind::C3 => ConstructionParams::C3 {
                M: m,
                L: l,
                c_bits: self.c_bits,
                delta: self.delta,
            },
            Kind::C4 => ConstructionParams::C4 {
                M: m,
                L: l,
                a: self.a,
            },
            Kind::C4s => ConstructionParams::C4s {
                M: m,
                L: l,
                a: self.a,
            },
            Kind::C5 => ConstructionParams::C5 {
                M: m,
                L: l,
                a: self.a,
            },
            Kind::C6 => ConstructionParams::C6 {
                M: m,
                L: l,
                eps: self.eps,
            },
        }
    }

    fn build(&self) -> Result<Box<dyn ListedCode>> {
        Ok(self.params().build()?)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn sets_text<'a>(sets: impl Iterator<Item = String> + 'a) -> String {
    sets.collect::<Vec<_>>().join("\n")
}

/// A run that completed but found a failure.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode {
            code,
            input,
            output,
        } => {
            let code = code.build()?;
            let data = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let sets = encode_stream(code.as_ref(), &data)?;
            write(&output, sets_text(sets.iter().map(DataSet::to_text)))?;
            eprintln!("{} bytes -> {} sets", data.len(), sets.len());
        }
        Command::Decode {
            code,
            input,
            output,
        } => {
            let code = code.build()?;
            let recv: Vec<ReceivedSet> = parse_sets(&read_text(&input)?)?
                .into_iter()
                .map(|b| b.into_received())
                .collect();
            let data = decode_stream(code.as_ref(), &recv)?;
            write(&output, &data)?;
            eprintln!("{} sets -> {} bytes", recv.len(), data.len());
        }
        Command::Simulate {
            spec,
            seed,
            input,
            output,
            transcript,
        } => {
            let sets = parse_sets(&read_text(&input)?)?
                .into_iter()
                .map(|b| b.into_data_set())
                .collect::<setcode::Result<Vec<_>>>()?;
            let mut recv = Vec::with_capacity(sets.len());
            let mut log = Vec::with_capacity(sets.len());
            for (i, ds) in sets.iter().enumerate() {
                let (r, t) = apply(ds, &spec, seed.wrapping_add(i as u64));
                recv.push(r.to_text());
                log.push(t);
            }
            write(&output, sets_text(recv.into_iter()))?;
            if let Some(path) = transcript {
                let json = serde_json::json!({ "spec": spec, "seed": seed, "sets": log });
                write(&path, serde_json::to_string_pretty(&json)?)?;
            }
        }
        Command::Bounds {
            thm,
            m,
            l,
            s,
            t,
            eps,
            c,
            json,
        } => {
            let kind = BoundKind::from_number(thm).ok_or_else(|| anyhow!("unknown bound {thm}"))?;
            let (report, log_form) = match kind {
                BoundKind::SubstitutionPacking => {
                    (bounds::substitution_packing(m, l, t, eps)?, None)
                }
                BoundKind::InsertionPacking => (bounds::insertion_packing(m, l, t, eps)?, None),
                BoundKind::SubstitutionAsymptotic => {
                    (bounds::substitution_asymptotic(m, l, eps, c)?, None)
                }
                BoundKind::InsertionAsymptotic => {
                    (bounds::insertion_asymptotic(m, l, eps, c)?, None)
                }
                BoundKind::LossAndError => {
                    let b = bounds::loss_and_error(m, l, s, t)?;
                    (b.exact, Some(b.log_form))
                }
            };
            if json {
                let mut v = report.to_json();
                if let Some(f) = log_form {
                    v["log_form_bits"] = f.into();
                }
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("{report}");
                if let Some(f) = log_form {
                    println!("log form: r(C) >= {f:.4} bits");
                }
            }
        }
        Command::Table1 {
            grid,
            m,
            l,
            s,
            t,
            eps,
            c,
            format,
            output,
        } => {
            let points: Vec<GridPoint> = match grid {
                Some(path) => serde_json::from_str(&read_text(&path)?)
                    .with_context(|| format!("parsing grid {}", path.display()))?,
                None => vec![GridPoint {
                    M: m,
                    L: l,
                    s,
                    t,
                    eps,
                    c,
                }],
            };
            let mut rows = Vec::new();
            for p in &points {
                rows.extend(bounds::table1(p)?);
            }
            let text = match format {
                Format::Csv => bounds::table1_csv(&rows)?,
                Format::Json => bounds::table1_json(&rows) + "\n",
            };
            match output {
                Some(path) => write(&path, text)?,
                None => print!("{text}"),
            }
        }
        Command::Verify {
            code,
            spec,
            jobs,
            sample,
            seed,
            json,
        } => {
            let params = code.params();
            let code = code.build()?;
            let spec = spec.unwrap_or_else(|| code.channel());
            match sample {
                Some(trials) => verify_sampled(code.as_ref(), &spec, trials, seed, json)?,
                None => verify_exhaustive(code.as_ref(), params, &spec, jobs, json)?,
            }
        }
        Command::Balls { l, eps, json } => {
            let b = ball_size_formulas(l, eps)?;
            if json {
                let v = serde_json::json!({
                    "L": l, "eps": eps,
                    "B_H": b.b_h.to_string(), "N_H": b.n_h.to_string(),
                    "S_I": b.s_i.to_string(), "N_I": b.n_i.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("L={l} eps={eps}");
                println!("B_H = {}", b.b_h);
                println!("N_H = {}", b.n_h);
                println!("S_I = {}", b.s_i);
                println!("N_I = {}", b.n_i);
            }
        }
    }
    Ok(())
}

fn verify_exhaustive(
    code: &dyn ListedCode,
    params: ConstructionParams,
    spec: &ChannelSpec,
    jobs: usize,
    json: bool,
) -> Result<()> {
    let book = code.codewords()?;
    let verdict = is_code(&book, spec, jobs)?;
    let sound = code_sound(code, &book, spec, jobs)?;
    if json {
        let v = serde_json::json!({
            "construction": params,
            "spec": spec,
            "codewords": book.len(),
            "is_code": verdict_json(&verdict),
            "decoder": soundness_json(&sound),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{} codewords under {spec}", book.len());
        match &verdict {
            CodeVerdict::Yes => println!("code: YES"),
            CodeVerdict::Counterexample(c) => {
                println!(
                    "code: NO, codewords {} and {} share",
                    c.first_index, c.second_index
                );
                print!("{}", c.received);
            }
        }
        if sound.is_yes() {
            println!("decoder: YES ({} received sets)", sound.checked);
        } else {
            println!(
                "decoder: NO, {} of {} received sets",
                sound.failures, sound.checked
            );
            if let Some(f) = &sound.first_failure {
                print!(
                    "codeword {}:\n{}received:\n{}got: {}\n",
                    f.index, f.codeword, f.received, f.outcome
                );
            }
        }
    }
    if !verdict.is_yes() || !sound.is_yes() {
        return Err(Rejected("verification failed".into()).into());
    }
    Ok(())
}

fn verify_sampled(
    code: &dyn ListedCode,
    spec: &ChannelSpec,
    trials: u64,
    seed: u64,
    json: bool,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for trial in 0..trials {
        let info = Sequence::from_bits((0..code.info_bits()).map(|_| rng.gen::<bool>()));
        let ds = code.encode_bits(&info)?;
        let (recv, _) = apply(&ds, spec, seed ^ trial.rotate_left(32));
        if code.decode_set(&recv).ok().as_ref() != Some(&ds) {
            failures += 1;
        }
    }
    if json {
        let v = serde_json::json!({ "spec": spec, "trials": trials, "failures": failures, "exhaustive": false });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("sampled {trials} trials under {spec}: {failures} failures (evidence, not proof)");
    }
    if failures > 0 {
        bail!(Rejected(format!("{failures} sampled failures")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let decode = err.downcast_ref::<Rejected>().is_some()
                || err
                    .downcast_ref::<setcode::Error>()
                    .is_some_and(setcode::Error::is_decode_failure);
            ExitCode::from(if decode { 1 } else { 2 })
        }
    }
}
