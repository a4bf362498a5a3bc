use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use supergeom::clifford::{gamma_rep, GammaRep};
use supergeom::rational::format_rational;
use supergeom::scenario::{self, flat_scenario, load, named_beta, parse_signature, parse_style, Report, RunOptions};
use supergeom::superpoincare::check_admissible;
use supergeom::{Error, Result};

#[derive(Parser)]
#[command(name = "supergeom", version, about = "Exact checks for super-Poincaré geometry and 11D supergravity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated checks overriding the scenario list.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Largest polynomial degree kept in the even coordinates.
        #[arg(long)]
        jet_order: Option<u32>,
        /// Random Jacobi triples instead of the full enumeration.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        emit_report: Option<PathBuf>,
    },
    /// Print and validate a Γ representation.
    Gamma {
        #[arg(long)]
        signature: String,
        #[arg(long, default_value = "auto")]
        style: String,
    },
    /// Test admissibility of a named β or of a scenario's β.
    Admissible {
        #[arg(long, conflicts_with = "scenario")]
        signature: Option<String>,
        #[arg(long, default_value = "eleven-dim")]
        beta: String,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Emit the flat-model scenario of a signature.
    Flat {
        #[arg(long)]
        signature: String,
        #[arg(long, default_value_t = 2)]
        generators: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-render a stored report.
    Report { path: PathBuf },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn complex(re: &supergeom::Q, im: &supergeom::Q) -> String {
    match (re == &supergeom::rational::qzero(), im == &supergeom::rational::qzero()) {
        (true, true) => "0".into(),
        (false, true) => format_rational(re),
        (true, false) => format!("{}i", format_rational(im)),
        (false, false) => format!("{}+{}i", format_rational(re), format_rational(im)),
    }
}

fn print_rep(rep: &GammaRep) {
    for (k, g) in rep.gammas().iter().enumerate() {
        println!("Gamma_{k}");
        for r in 0..g.rows() {
            let row: Vec<String> = (0..g.cols()).map(|c| complex(&g.re[(r, c)], &g.im[(r, c)])).collect();
            println!("  [{}]", row.join(" "));
        }
    }
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run {
            scenario: path,
            checks,
            jet_order,
            sample,
            emit_report,
        } => {
            let source = read(&path)?;
            let loaded = load(&source, jet_order)?;
            let report = scenario::run(&loaded, &RunOptions { checks, sample })?;
            print!("{}", report.render());
            if let Some(out) = emit_report {
                write(&out, &report.to_toml()?)?;
            }
            Ok(report.passed())
        }
        Command::Gamma { signature, style } => {
            let sig = parse_signature(&signature)?;
            let rep = gamma_rep(&sig, parse_style(&style)?)?;
            print_rep(&rep);
            let bad = rep.anticommutator_failures();
            println!(
                "relations: {} ({} pairs)",
                if bad.is_empty() { "pass" } else { "fail" },
                sig.n() * sig.n()
            );
            Ok(bad.is_empty())
        }
        Command::Admissible {
            signature,
            beta,
            scenario: path,
        } => {
            let (beta, rep) = match (signature, path) {
                (_, Some(p)) => {
                    let l = load(&read(&p)?, None)?;
                    (l.beta, l.rep)
                }
                (Some(s), None) => {
                    let rep = gamma_rep(&parse_signature(&s)?, parse_style("auto")?)?;
                    (named_beta(&beta, &rep)?, rep)
                }
                (None, None) => return Err(Error::Validation("give --signature or --scenario".into())),
            };
            let r = check_admissible(&beta, &rep)?;
            println!("symmetry: {:?}", r.symmetry);
            println!("clifford type: {:?}", r.clifford_type);
            println!("split type: {:?}", r.split_type);
            println!("admissible: {}", r.admissible);
            Ok(r.admissible)
        }
        Command::Flat {
            signature,
            generators,
            output,
        } => {
            let text = flat_scenario(&parse_signature(&signature)?, generators)?;
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Report { path } => {
            let report = Report::from_toml(&read(&path)?)?;
            print!("{}", report.render());
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
