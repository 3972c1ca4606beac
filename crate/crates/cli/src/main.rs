//! `sumsets`: command-line front end for the sumset-core library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sumset_core::dsl::{parse_system, to_dsl};
use sumset_core::product2d::{expand2d, DEFAULT_MAX_CELLS};
use sumset_core::render::{diagonal_overlays, render_svg, RenderSpec};
use sumset_core::tm::{tm_closed_form_check, verify_block_properties, verify_purity, verify_recursions};
use sumset_core::{
    complement_upto, cross_check, diagonal, factors_upto, product, search_certificate,
    verify_certificate, Error, MorphicSystem, PairLetter, SearchOutcome, ShiftCertificate,
    SumsetKind, SumsetQuery,
};

const DEFAULT_MAX_LENGTH: u64 = 1 << 27;

#[derive(Parser)]
#[command(name = "sumsets", version, about = "Sumsets of letter positions in substitution fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Built-in system: fibonacci, thue_morse, von_neumann, squares
    #[arg(long, conflicts_with = "file")]
    system: Option<String>,
    /// System description file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Refuse to build words longer than this
    #[arg(long, default_value_t = DEFAULT_MAX_LENGTH)]
    max_length: u64,
}

impl SystemArgs {
    fn load(&self) -> Result<MorphicSystem, Failure> {
        match (&self.system, &self.file) {
            (Some(name), _) => Ok(MorphicSystem::builtin(name)?),
            (None, Some(path)) => Ok(parse_system(&read(path)?)?),
            (None, None) => Err(Failure::Usage("one of --system or --file is required".into())),
        }
    }

    fn cap(&self, what: &'static str, needed: u64) -> Result<(), Failure> {
        if needed > self.max_length {
            return Err(Error::ResourceLimit {
                what,
                needed: needed as u128,
                limit: self.max_length as u128,
            }
            .into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Overlay {
    Diagonals,
}

#[derive(Subcommand)]
enum Command {
    /// Print σⁿ(letter) in raw glyphs
    Expand {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, short = 'n')]
        iterations: u32,
        /// Glyph to expand (default: the start letter)
        #[arg(long)]
        letter: Option<char>,
    },
    /// Print a coded prefix of the fixed point
    Word {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        length: u64,
    },
    /// Print diagonal words d_from ..= d_to
    Diagonal {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Complement of a sumset up to a bound
    Sumset {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        kind: SumsetKind,
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the diagonal scan with the brute-force oracle
    OracleCheck {
        #[command(flatten)]
        sys: SystemArgs,
        /// Single kind (default: all three)
        #[arg(long)]
        kind: Option<SumsetKind>,
        #[arg(long, default_value_t = 2000)]
        max: u64,
    },
    /// Search for a shift certificate
    Certify {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        kind: SumsetKind,
        #[arg(long)]
        kmax: u64,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file
    VerifyCert {
        cert: PathBuf,
        /// System description file (default: the built-in named in the certificate)
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Draw a 2D block of the product substitution as SVG
    Render {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, short = 'n')]
        iterations: u32,
        /// Pair letter a–d, or two glyphs (default: start letter twice)
        #[arg(long)]
        letter: Option<String>,
        #[arg(long, value_enum)]
        overlay: Option<Overlay>,
        /// Number of diagonals to overlay (default: all)
        #[arg(long)]
        count: Option<usize>,
        /// Pair letter whose presence colors a diagonal green
        #[arg(long, default_value = "a")]
        target: char,
        #[arg(long, default_value_t = 16)]
        cell_size: u32,
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural diagnostics of a system
    Validate {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Indices up to a bound where the coded letter equals a symbol
    Positions {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        symbol: u8,
        #[arg(long)]
        max: u64,
    },
    /// Coded factors of a given length
    Factors {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        length: usize,
    },
    /// Print a system in the description language
    Dsl {
        #[command(flatten)]
        sys: SystemArgs,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Recursions, purity, closed forms and block properties
    ThueMorse {
        #[arg(long, default_value_t = 1024)]
        nmax: u64,
        /// Largest block level n for the τⁿ(p) checks
        #[arg(long, default_value_t = 8)]
        block_max: u32,
    },
}

enum Failure {
    Usage(String),
    Input(Error),
    Claim,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bits(w: &[u8]) -> String {
    w.iter().map(|b| char::from(b'0' + b)).collect()
}

fn pair_letter(spec: &str, system: &MorphicSystem) -> Result<PairLetter, Failure> {
    let chars: Vec<char> = spec.chars().collect();
    let bad = || Failure::Usage(format!("bad pair letter '{spec}'"));
    match chars.as_slice() {
        [c] => PairLetter::from_abcd(*c).ok_or_else(bad),
        [p, q] => {
            let sub = system.substitution();
            match (sub.letter(*p), sub.letter(*q)) {
                (Some(p), Some(q)) => Ok(PairLetter::new(p.0, q.0)),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand { sys, iterations, letter } => {
            let system = sys.load()?;
            let sub = system.substitution();
            let a = match letter {
                Some(g) => sub.letter(g).ok_or(Error::UnknownGlyph(g))?,
                None => system.start(),
            };
            let w = sub.iterate(a, iterations, sys.max_length as usize)?;
            println!("{}", sub.render(&w));
        }
        Command::Word { sys, length } => {
            sys.cap("word length", length)?;
            let system = sys.load()?;
            println!("{}", bits(&system.prefix(length as usize)));
        }
        Command::Diagonal { sys, from, to } => {
            let system = sys.load()?;
            let to = to.unwrap_or(from);
            sys.cap("diagonal index", to)?;
            for n in from..=to {
                println!("{}", diagonal(&system, n)?);
            }
        }
        Command::Sumset { sys, kind, max, format } => {
            sys.cap("sumset bound", max)?;
            let q = SumsetQuery::new(sys.load()?, kind);
            let report = complement_upto(&q, max)?;
            match format {
                Format::Text => println!("{}", report.to_line()),
                Format::Csv => print!("{}", report.to_csv()),
            }
        }
        Command::OracleCheck { sys, kind, max } => {
            sys.cap("oracle bound", max)?;
            let system = sys.load()?;
            let kinds = kind.map_or(SumsetKind::ALL.to_vec(), |k| vec![k]);
            let mut ok = true;
            for kind in kinds {
                let check = cross_check(&SumsetQuery::new(system.clone(), kind), max)?;
                match check.first_disagreement {
                    None => println!("PASS {} {kind} N={max}", system.name()),
                    Some(n) => {
                        ok = false;
                        println!("FAIL {} {kind} N={max} first disagreement at {n}", system.name());
                    }
                }
            }
            if !ok {
                return Err(Failure::Claim);
            }
        }
        Command::Certify { sys, kind, kmax, out } => {
            sys.cap("k_max", kmax)?;
            let q = SumsetQuery::new(sys.load()?, kind);
            match search_certificate(&q, kmax)? {
                SearchOutcome::Found(cert) => {
                    write_out(out.as_deref(), &cert.to_text())?;
                    if let Some(p) = out {
                        eprintln!("wrote {}", p.display());
                    }
                }
                SearchOutcome::NotFound { k_max, witness } => {
                    println!("not-found kmax={k_max}");
                    match witness {
                        Some(w) => println!("witness {}", bits(&w)),
                        None => println!("witness none"),
                    }
                    return Err(Failure::Claim);
                }
            }
        }
        Command::VerifyCert { cert, file } => {
            let cert: ShiftCertificate = read(&cert)?.parse()?;
            let system = match file {
                Some(p) => parse_system(&read(&p)?)?,
                None => MorphicSystem::builtin(&cert.system)?,
            };
            let verdict = verify_certificate(&SumsetQuery::new(system, cert.kind), &cert)?;
            println!("{verdict}");
            if !verdict.is_valid() {
                return Err(Failure::Claim);
            }
        }
        Command::Verify { suite: Suite::ThueMorse { nmax, block_max } } => {
            if nmax < 8 || block_max < 4 {
                return Err(Failure::Usage("need --nmax ≥ 8 and --block-max ≥ 4".into()));
            }
            let mut reports = verify_recursions(nmax)?.to_vec();
            reports.push(verify_purity(nmax)?);
            reports.extend(tm_closed_form_check(nmax)?);
            let mut ok = reports.iter().all(|r| r.passed());
            for r in &reports {
                println!("{r}");
            }
            let blocks = verify_block_properties(4, block_max)?;
            match blocks.first_violation() {
                None => println!(
                    "PASS block properties n=4..{block_max} ({} blocks)",
                    blocks.levels.len()
                ),
                Some(level) => {
                    ok = false;
                    let v: Vec<String> = level.violations.iter().map(ToString::to_string).collect();
                    println!(
                        "FAIL block properties at n={} letter {}: red {}",
                        level.n,
                        level.letter,
                        v.join(",")
                    );
                }
            }
            if !ok {
                return Err(Failure::Claim);
            }
        }
        Command::Render {
            sys,
            iterations,
            letter,
            overlay,
            count,
            target,
            cell_size,
            labels,
            max_cells,
            out,
        } => {
            let system = sys.load()?;
            let start = system.start().0;
            let p = match letter {
                Some(s) => pair_letter(&s, &system)?,
                None => PairLetter::new(start, start),
            };
            let target = PairLetter::from_abcd(target)
                .ok_or_else(|| Failure::Usage(format!("bad target '{target}'")))?;
            let raw = expand2d(&product(system.substitution()), p, iterations, max_cells)?;
            let block = raw.map(|c| {
                let code = |l: u8| system.code(sumset_core::Letter(l));
                PairLetter::new(code(c.first), code(c.second))
            });
            let mut spec = RenderSpec::new(block);
            spec.cell_size = cell_size;
            spec.label_cells = labels;
            if overlay.is_some() {
                let all = spec.block.width() + spec.block.height() - 1;
                spec.overlays = diagonal_overlays(&spec.block, target, count.unwrap_or(all));
            }
            write_out(out.as_deref(), &render_svg(&spec))?;
        }
        Command::Validate { sys } => {
            let system = sys.load()?;
            println!("system={}", system.name());
            println!("rules={}", system.substitution());
            print!("{}", system.validate());
        }
        Command::Positions { sys, symbol, max } => {
            sys.cap("positions bound", max)?;
            let ps = sys.load()?.positions(symbol, max);
            let s: Vec<String> = ps.iter().map(u64::to_string).collect();
            println!("{}", s.join(","));
        }
        Command::Factors { sys, length } => {
            let f = factors_upto(&sys.load()?, length)?;
            for w in f.of_len(length) {
                println!("{}", bits(w));
            }
        }
        Command::Dsl { sys } => print!("{}", to_dsl(&sys.load()?)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claim) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
