use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Parser, Subcommand};

use radaff::affine::{generate, AffineElement};
use radaff::census::{census_report, run_census, Bounds};
use radaff::correspondence::{ring_to_subgroup, subgroup_to_ring, verify_facts, Coverage};
use radaff::field::Fp;
use radaff::format::{emit_affine, emit_algebra, parse_affine, parse_algebra_table};
use radaff::series::{annihilator_witness, torsion_check, ts_circle_inverse, TruncSeries};
use radaff::{gallery, Error};

#[derive(Parser)]
#[command(name = "radaff", version, about = "Abelian regular affine groups and radical rings over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra axioms and the correspondence identities.
    Verify {
        /// Algebra file, or `-` for stdin.
        file: PathBuf,
    },
    /// Print the affine maps tau(x) of an algebra.
    ToSubgroup {
        file: PathBuf,
        /// Only tau(e_1), ..., tau(e_d).
        #[arg(long)]
        basis: bool,
    },
    /// Recover the algebra from affine maps generating an abelian regular subgroup.
    FromSubgroup { file: PathBuf },
    /// Enumerate and classify every structure on GF(p)^d.
    Census {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        d: usize,
    },
    /// Print a named example algebra.
    Gallery { name: String },
    /// Power-series demonstrations on a literal `p=<p> prec=<n> coeffs=<c1,...>`.
    #[command(group(ArgGroup::new("mode").required(true).args(["torsion", "inverse", "annihilator"])))]
    Series {
        #[arg(required = true, num_args = 1..)]
        literal: Vec<String>,
        /// Compute p^j o x.
        #[arg(long, value_name = "J")]
        torsion: Option<u32>,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        annihilator: bool,
    },
}

/// A run that completed but found the input wanting.
struct VerificationFailed;

fn read_input(path: &Path) -> Result<String> {
    let mut s = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
    } else {
        s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(s)
}

/// Elements listed in an affine-element file.
fn parse_affine_file(path: &Path) -> Result<(Fp, usize, Vec<AffineElement>)> {
    let f = parse_affine(&read_input(path)?)?;
    Ok((f.p, f.d, f.elements))
}

fn verify(path: &Path, out: &mut impl Write) -> Result<Result<(), VerificationFailed>> {
    let table = parse_algebra_table(&read_input(path)?)?;
    let mut fields = Vec::new();
    let algebra = match table.to_algebra_unchecked() {
        Ok(a) => {
            fields.push("commutative: ok".to_string());
            a
        }
        Err(Error::NotCommutative { i, j }) => {
            writeln!(out, "commutative: fail at e{i} e{j}")?;
            return Ok(Err(VerificationFailed));
        }
        Err(e) => return Err(e.into()),
    };
    if let Err(Error::NotAssociative { i, j, k }) = algebra.check_associative() {
        fields.push(format!("associative: fail at e{i} e{j} e{k}"));
        writeln!(out, "{}", fields.join(", "))?;
        return Ok(Err(VerificationFailed));
    }
    fields.push("associative: ok".into());
    let Some(class) = algebra.nilpotency_class() else {
        fields.push("nilpotent: fail".into());
        writeln!(out, "{}", fields.join(", "))?;
        return Ok(Err(VerificationFailed));
    };
    fields.push(format!("nilpotent: class {class}"));
    let facts = verify_facts(&algebra, Coverage::Auto);
    fields.push(format!("facts: {}/{}", facts.passed(), facts.checks.len()));
    writeln!(out, "{}", fields.join(", "))?;
    if facts.all_passed() {
        Ok(Ok(()))
    } else {
        write!(out, "{facts}")?;
        Ok(Err(VerificationFailed))
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<Result<(), VerificationFailed>> {
    match cli.command {
        Command::Verify { file } => return verify(&file, out),
        Command::ToSubgroup { file, basis } => {
            let a = parse_algebra_table(&read_input(&file)?)?.to_algebra()?;
            let t = ring_to_subgroup(&a)?;
            let elements = if basis {
                a.basis().iter().map(|e| t.tau(e)).collect()
            } else {
                t.elements()?
            };
            out.write_all(emit_affine(a.modulus(), a.dim(), &elements).as_bytes())?;
        }
        Command::FromSubgroup { file } => {
            let (p, d, gens) = parse_affine_file(&file)?;
            let group = generate(p, d, &gens)?;
            match subgroup_to_ring(&group) {
                Ok(a) => out.write_all(emit_algebra(&a).as_bytes())?,
                Err(e) => {
                    writeln!(out, "not an abelian regular subgroup: {e}")?;
                    return Ok(Err(VerificationFailed));
                }
            }
        }
        Command::Census { p, d } => {
            let r = run_census(Fp::new(p)?, d, &Bounds::from_env()?)?;
            out.write_all(census_report(&r).as_bytes())?;
        }
        Command::Gallery { name } => {
            out.write_all(emit_algebra(&gallery::by_name(&name)?).as_bytes())?;
        }
        Command::Series {
            literal,
            torsion,
            inverse,
            annihilator,
        } => {
            let x: TruncSeries = literal.join(" ").parse()?;
            if let Some(j) = torsion {
                let r = torsion_check(&x, j)?;
                let q = (x.modulus().p() as u64).pow(j);
                let state = if r.is_zero { "zero" } else { "nonzero" };
                writeln!(out, "{q}∘x = {}, {state}", r.value.pretty())?;
            } else if inverse {
                let y = ts_circle_inverse(&x);
                writeln!(out, "y = {}", y.pretty())?;
                writeln!(out, "{y}")?;
            } else if annihilator {
                let w = annihilator_witness(&x)?;
                writeln!(out, "x·t = {}, nonzero", w.pretty())?;
            }
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(VerificationFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Malformed input and impossible parameters are usage errors; structural
/// failures of well-formed input are verification failures.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::NotAssociative { .. }
            | Error::NotCommutative { .. }
            | Error::NotRadical
            | Error::NotNilpotent
            | Error::NotRegular(_)
            | Error::NotAbelian
            | Error::NotSubgroup(_),
        ) => 1,
        _ => 2,
    }
}
