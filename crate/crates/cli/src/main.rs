//! Command-line front end: parse model files, run every check, generate
//! models, and produce deterministic reports.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical check failed (the
//! report lists residues in canonical form), 2 = input or shape error.

use clap::{Args, Parser, Subcommand};
use darboux_core::cdga::RationalPoint;
use darboux_core::darboux::weak_to_strong;
use darboux_core::element::Element;
use darboux_core::forms::{check_closed, is_nondegenerate_at, is_strictly_nondegenerate};
use darboux_core::hamilton::{check_poisson_axioms, extract_hamiltonian, poisson_bracket};
use darboux_core::model::{parse_point, ModelFile};
use darboux_core::sample::{random_poisson_arg, rng};
use darboux_core::{acceptance, Error};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "darboux")]
#[command(about = "Exact checks and generators for shifted symplectic model algebras")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the full model package from a `darboux_spec` section
    GenDarboux {
        /// Model file carrying the model-family section
        #[arg(long)]
        spec: PathBuf,
        /// Write the generated model here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one verification against a model file
    #[command(subcommand)]
    Check(CheckCommand),
    /// Print the cotangent-restriction matrices, optionally at a point
    Cotangent {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// Test minimality of the model at a rational point
    MinimalAt {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Evaluate the shifted Poisson bracket of two expressions
    Bracket {
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 'g')]
        g: String,
    },
    /// Check the Poisson axioms on random homogeneous triples
    Axioms {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract the Hamiltonian from the model's pair section
    ExtractH {
        #[arg(long)]
        model: PathBuf,
    },
    /// Verify an overlap comparison certificate
    VerifyOverlap {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Rescale a weak-form model into strong form using explicit roots
    WeakToStrong {
        #[arg(long)]
        spec: PathBuf,
        /// Square roots of the q list, comma separated
        #[arg(long)]
        roots: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance suite
    Selftest {
        #[arg(long, default_value_t = 20260810)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// The classical master equation of the model-family section
    Master(ModelArg),
    /// The closedness identities of the `closed_form` section
    Closed(ModelArg),
    /// Nondegeneracy: strict, or pointwise with `--at`
    Nondeg {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// `d∘d = 0` on every generator
    D2(ModelArg),
}

#[derive(Args)]
struct ModelArg {
    #[arg(long, alias = "spec")]
    model: PathBuf,
}

/// 0 = pass, 1 = check failed, 2 = bad input.
fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::GenDarboux { spec, out } => {
            let file = ModelFile::load(&spec)?;
            let model = file.darboux_spec()?.generate()?;
            let rendered = ModelFile::from_generated(&model)?.print()?;
            match out {
                Some(path) => {
                    std::fs::write(&path, rendered)
                        .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
                    println!(
                        "generated model with {} generators; all postconditions verified",
                        model.sig.n_gens() / 2
                    );
                }
                None => print!("{rendered}"),
            }
            Ok(true)
        }
        Command::Check(check) => run_check(check),
        Command::Cotangent { model, at } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let restriction = cdga.cotangent_restriction()?;
            let point = at
                .map(|src| -> Result<RationalPoint, Error> {
                    let named = parse_point(&src)?;
                    let p = RationalPoint::new(&sig, &named)?;
                    p.validate(&cdga)?;
                    Ok(p)
                })
                .transpose()?;
            for block in &restriction.blocks {
                println!("tier {}:", block.tier);
                for (i, r) in block.rows.iter().enumerate() {
                    for (j, c) in block.cols.iter().enumerate() {
                        let entry = &block.entries[i][j];
                        match &point {
                            Some(p) => println!(
                                "  d[{}][{}] = {}",
                                sig.name(*r),
                                sig.name(*c),
                                entry.evaluate(&p.values)?
                            ),
                            None => println!(
                                "  d[{}][{}] = {}",
                                sig.name(*r),
                                sig.name(*c),
                                entry.render()
                            ),
                        }
                    }
                }
            }
            Ok(true)
        }
        Command::MinimalAt { model, at } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let named = parse_point(&at)?;
            let p = RationalPoint::new(&sig, &named)?;
            let report = cdga.is_minimal_at(&p)?;
            if report.minimal {
                println!("minimal at the given point");
                Ok(true)
            } else {
                for entry in &report.offending {
                    println!(
                        "not minimal: tier {} entry [{}][{}] = {}",
                        entry.tier, entry.row, entry.col, entry.value
                    );
                }
                Ok(false)
            }
        }
        Command::Bracket { model, f, g } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let omega0 = file.omega0(&sig)?;
            let fe = Element::parse(&sig, &f)?;
            let ge = Element::parse(&sig, &g)?;
            let out = poisson_bracket(&cdga, &omega0, &fe, &ge)?;
            println!("{}", out.render());
            Ok(true)
        }
        Command::Axioms {
            model,
            samples,
            seed,
        } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let omega0 = file.omega0(&sig)?;
            let k = omega0
                .homogeneous_bidegree()
                .map(|(d, _)| d + 2)
                .unwrap_or(-1);
            let mut r = rng(seed);
            let mut failures = 0usize;
            for idx in 0..samples {
                let f = random_poisson_arg(&sig, k, &mut r);
                let g = random_poisson_arg(&sig, k, &mut r);
                let h = random_poisson_arg(&sig, k, &mut r);
                let res = check_poisson_axioms(&cdga, &omega0, &f, &g, &h)?;
                if !res.all_zero() {
                    failures += 1;
                    println!(
                        "sample {idx}: antisymmetry {}, jacobi {}, derivation {}",
                        res.antisymmetry.render(),
                        res.jacobi.render(),
                        res.derivation.render()
                    );
                }
            }
            println!(
                "{} of {samples} samples satisfied all three axioms",
                samples as usize - failures
            );
            Ok(failures == 0)
        }
        Command::ExtractH { model } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let pair = file.phi_phi(&sig)?;
            let omega0 = file.omega0(&sig)?;
            let pkg = extract_hamiltonian(&cdga, &omega0, &pair)?;
            println!("H = {}", pkg.hamiltonian.render());
            println!("normalized phi = {}", pkg.normalized_pair.varphi.render());
            Ok(true)
        }
        Command::VerifyOverlap { cert } => {
            let file = ModelFile::load(&cert)?;
            let certificate = file.certificate()?;
            let report = darboux_core::dcrit::verify_comparison(&certificate)?;
            for check in &report.identities {
                match &check.residue {
                    None => println!("ok   {}", check.label),
                    Some(residue) => println!("FAIL {} (residue {})", check.label, residue),
                }
            }
            if let (Some(terms), Some(total)) = (&report.witness, &report.witness_total) {
                println!("membership witness: a*(H) - b*(H~) = {total}");
                for t in terms {
                    println!("  I_{} I_{} M: {}", t.j, t.jp, t.coefficient);
                }
            }
            Ok(report.ok)
        }
        Command::WeakToStrong { spec, roots, out } => {
            let file = ModelFile::load(&spec)?;
            let weak = file.darboux_spec()?;
            let roots: Vec<String> = roots.split(',').map(|s| s.trim().to_string()).collect();
            let (strong, map) = weak_to_strong(&weak, &roots)?;
            for (name, image) in &map.images {
                println!("{name} -> {image}");
            }
            let model = strong.generate()?;
            let rendered = ModelFile::from_generated(&model)?.print()?;
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?,
                None => print!("{rendered}"),
            }
            Ok(true)
        }
        Command::Selftest { seed } => {
            let report = acceptance::run_all(seed);
            print!("{}", report.render());
            Ok(report.all_passed())
        }
    }
}

fn run_check(check: CheckCommand) -> Result<bool, Error> {
    match check {
        CheckCommand::Master(arg) => {
            let file = ModelFile::load(&arg.model)?;
            let spec = file.darboux_spec()?;
            let report = spec.check_master()?;
            if report.ok {
                println!("master equation holds");
                Ok(true)
            } else {
                println!("master equation fails: residue {}", report.residue.render());
                Ok(false)
            }
        }
        CheckCommand::Closed(arg) => {
            let file = ModelFile::load(&arg.model)?;
            let (sig, cdga) = file.cdga()?;
            let omega = file.closed_form(&sig)?;
            let report = check_closed(&cdga, &omega)?;
            if report.closed {
                println!("closed");
                Ok(true)
            } else {
                for (slot, residue) in &report.residues {
                    println!("slot {slot}: residue {}", residue.render());
                }
                Ok(false)
            }
        }
        CheckCommand::Nondeg { model, at } => {
            let file = ModelFile::load(&model)?;
            let (sig, cdga) = file.cdga()?;
            let omega0 = file.omega0(&sig)?;
            match at {
                Some(src) => {
                    let named = parse_point(&src)?;
                    let p = RationalPoint::new(&sig, &named)?;
                    if is_nondegenerate_at(&cdga, &omega0, &p)? {
                        println!("nondegenerate at the given point");
                        Ok(true)
                    } else {
                        println!("degenerate at the given point");
                        Ok(false)
                    }
                }
                None => {
                    if is_strictly_nondegenerate(&cdga, &omega0)? {
                        println!("strictly nondegenerate");
                        Ok(true)
                    } else {
                        println!("not strictly nondegenerate");
                        Ok(false)
                    }
                }
            }
        }
        CheckCommand::D2(arg) => {
            let file = ModelFile::load(&arg.model)?;
            let (sig, cdga) = file.cdga_unchecked()?;
            let mut ok = true;
            for (g, residue) in cdga.d_squared_residues()? {
                if !residue.is_zero() {
                    println!("d(d {}) = {}", sig.name(g), residue.render());
                    ok = false;
                }
            }
            if ok {
                println!("d squares to zero on every generator");
            }
            Ok(ok)
        }
    }
}
