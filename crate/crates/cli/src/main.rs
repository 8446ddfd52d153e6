//! Command-line front end: load germ files, run the library operations and
//! print deterministic reports.
//!
//! Exit codes: 0 success, 1 axiom or semantic failure, 2 parse error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use garside_core::category::{gcd, lcm, normal_form, parse_word, CategoryError, Morphism};
use garside_core::conjugacy::{conj_apply, conj_normal_form, ConjObject};
use garside_core::coxeter::{lift_germ, CoxeterSystem};
use garside_core::decomposition::{build_eg, check_simply_connected};
use garside_core::germ::{check_locally_garside, fixed_subgerm, G4Strategy, GermAutomorphism};
use garside_core::germfile::GermFile;
use garside_core::ribbon::{build_ribbon_germ, ribbon_atoms, set_label};
use garside_core::GermTable;

#[derive(Parser)]
#[command(name = "garside", version, about = "Exact computation in germ-presented categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the locally-Garside axioms of a germ file
    Check {
        file: PathBuf,
        /// `assume` or `search=L` for a bounded left-cancellation search
        #[arg(long, default_value = "assume")]
        g4: String,
    },
    /// Greedy normal form of a word (whitespace-separated element names)
    Nf { file: PathBuf, word: String },
    /// Least common right multiple of two or more words
    Lcm {
        file: PathBuf,
        #[arg(required = true, num_args = 2..)]
        words: Vec<String>,
    },
    /// Greatest common left divisor of two or more words
    Gcd {
        file: PathBuf,
        #[arg(required = true, num_args = 2..)]
        words: Vec<String>,
    },
    /// List the atoms of the germ
    Atoms { file: PathBuf },
    /// Build the germ of a Coxeter preset (A2, A3, B3, Atilde1)
    Coxeter {
        preset: String,
        /// bound the carrier by element length (required for affine types)
        #[arg(long)]
        max_length: Option<usize>,
        /// write the germ as a germ file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the ribbon germ of a preset over a generator subset like s1,s3
    Ribbon { preset: String, i0: String },
    /// Conjugate a family of endomorphism words by a word
    Conj {
        file: PathBuf,
        x: String,
        #[arg(long, required = true, num_args = 1..)]
        family: Vec<String>,
    },
    /// Decomposition poset of a word, with connectivity and homology
    Eposet {
        file: PathBuf,
        word: String,
        /// compute the first homology rank of the order complex
        #[arg(long)]
        h1: bool,
        /// print vertices and covering edges after the summary
        #[arg(long)]
        export: bool,
    },
    /// Fixed subgerm of a label substitution like a:b,b:a
    Fixed { file: PathBuf, map: String },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Inner errors are parse-class failures (exit 2); semantic failures return
/// Ok(1) after printing their own report.
fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Check { file, g4 } => cmd_check(&file, &g4),
        Cmd::Nf { file, word } => {
            let germ = load(&file)?;
            let m = nf(&germ, &word)?;
            println!("{}", m.display(&germ));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lcm { file, words } => {
            let germ = load(&file)?;
            let ms = parse_all(&germ, &words)?;
            match lcm(&germ, &ms) {
                Ok(m) => println!("{}", m.display(&germ)),
                Err(CategoryError::NoCommonMultiple) => println!("no common multiple"),
                Err(e) => return Err(e.to_string()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gcd { file, words } => {
            let germ = load(&file)?;
            let ms = parse_all(&germ, &words)?;
            let m = gcd(&germ, &ms).map_err(|e| e.to_string())?;
            println!("{}", m.display(&germ));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Atoms { file } => {
            let germ = load(&file)?;
            for a in germ.atoms() {
                println!("{}", germ.label(a));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Coxeter {
            preset,
            max_length,
            out,
        } => cmd_coxeter(&preset, max_length, out.as_deref()),
        Cmd::Ribbon { preset, i0 } => cmd_ribbon(&preset, &i0),
        Cmd::Conj { file, x, family } => cmd_conj(&file, &x, &family),
        Cmd::Eposet {
            file,
            word,
            h1,
            export,
        } => cmd_eposet(&file, &word, h1, export),
        Cmd::Fixed { file, map } => cmd_fixed(&file, &map),
    }
}

fn load(path: &Path) -> Result<GermTable, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = GermFile::from_str(&text).map_err(|e| e.to_string())?;
    // round-trip guard: the on-disk form must be canonical
    let canonical = file.to_string_pretty();
    if canonical != text {
        eprintln!("note: {} is not in canonical form", path.display());
    }
    file.build().map_err(|e| e.to_string())
}

fn nf(germ: &GermTable, word: &str) -> Result<Morphism, String> {
    let raw = parse_word(germ, word).map_err(|e| e.to_string())?;
    Ok(normal_form(germ, &raw))
}

fn parse_all(germ: &GermTable, words: &[String]) -> Result<Vec<Morphism>, String> {
    words.iter().map(|w| nf(germ, w)).collect()
}

fn cmd_check(file: &Path, g4: &str) -> Result<ExitCode, String> {
    let strategy = match g4 {
        "assume" => G4Strategy::Assume,
        other => match other.strip_prefix("search=") {
            Some(n) => G4Strategy::BoundedSearch(
                n.parse::<usize>().map_err(|_| format!("bad g4 bound {n:?}"))?,
            ),
            None => return Err(format!("bad --g4 value {other:?}; use assume or search=L")),
        },
    };
    let germ = load(file)?;
    let report = check_locally_garside(&germ, strategy);
    print!("{report}");
    if report.all_pass() {
        println!("result: pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("result: fail");
        Ok(ExitCode::from(1))
    }
}

fn cmd_coxeter(
    preset: &str,
    max_length: Option<usize>,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    let cox = CoxeterSystem::preset(preset).map_err(|e| e.to_string())?;
    let lift = lift_germ(&cox, max_length).map_err(|e| e.to_string())?;
    println!(
        "elements={} objects={} truncated={}",
        lift.germ.len(),
        lift.germ.object_count(),
        lift.truncated
    );
    if let Some(path) = out {
        let file = GermFile::from_table(&lift.germ);
        std::fs::write(path, file.to_string_pretty())
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ribbon(preset: &str, i0: &str) -> Result<ExitCode, String> {
    let cox = CoxeterSystem::preset(preset).map_err(|e| e.to_string())?;
    let mut set: BTreeSet<u8> = BTreeSet::new();
    for tok in i0.split(',').filter(|t| !t.is_empty()) {
        let i = cox
            .labels
            .iter()
            .position(|l| l == tok)
            .ok_or_else(|| format!("unknown generator {tok:?}"))?;
        set.insert(i as u8);
    }
    let rg = build_ribbon_germ(&cox, &set).map_err(|e| e.to_string())?;
    let objects: Vec<String> = rg.objects.iter().map(|s| set_label(&cox, s)).collect();
    println!("objects: {}", objects.join(" "));
    println!("elements={}", rg.germ.len());
    let atoms: Vec<&str> = ribbon_atoms(&cox, &rg)
        .iter()
        .map(|&e| rg.germ.label(e))
        .collect();
    println!("atoms: {}", atoms.join(" "));
    Ok(ExitCode::SUCCESS)
}

fn cmd_conj(file: &Path, x: &str, family: &[String]) -> Result<ExitCode, String> {
    let germ = load(file)?;
    let members = parse_all(&germ, family)?;
    let fam = ConjObject::new(&germ, members).map_err(|e| e.to_string())?;
    let raw = parse_word(&germ, x).map_err(|e| e.to_string())?;
    match conj_normal_form(&germ, &fam, &raw) {
        Ok(m) => {
            let target = conj_apply(&germ, &fam, &m).expect("normal form conjugates");
            println!("nf: {}", m.display(&germ));
            let images: Vec<String> = target.family.iter().map(|w| w.display(&germ)).collect();
            println!("target: {}", images.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("{e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_eposet(file: &Path, word: &str, h1: bool, export: bool) -> Result<ExitCode, String> {
    let germ = load(file)?;
    let m = nf(&germ, word)?;
    if m.is_identity() {
        return Err("the identity has no decomposition poset".to_string());
    }
    let poset = build_eg(&germ, &m, 1_000_000).map_err(|e| e.to_string())?;
    let report = check_simply_connected(&poset, false);
    if h1 {
        println!(
            "vertices={} connected={} h1={}",
            poset.vertices.len(),
            report.connected,
            report.h1_rank
        );
    } else {
        println!(
            "vertices={} covers={} connected={}",
            poset.vertices.len(),
            poset.covers.len(),
            report.connected
        );
    }
    if export {
        for v in &poset.vertices {
            let labels: Vec<&str> = v.iter().map(|&e| germ.label(e)).collect();
            println!("{}", labels.join(" "));
        }
        for (a, b) in &poset.covers {
            println!("{a} {b}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixed(file: &Path, map: &str) -> Result<ExitCode, String> {
    let germ = load(file)?;
    let mut elem_map: Vec<_> = germ.elements().collect();
    for pair in map.split(',').filter(|t| !t.is_empty()) {
        let (from, to) = pair
            .split_once(':')
            .ok_or_else(|| format!("bad map entry {pair:?}; use from:to"))?;
        let f = germ
            .find_by_label(from)
            .ok_or_else(|| format!("unknown element {from:?}"))?;
        let t = germ
            .find_by_label(to)
            .ok_or_else(|| format!("unknown element {to:?}"))?;
        elem_map[f.index()] = t;
    }
    let sigma = GermAutomorphism {
        obj_map: germ.objects().collect(),
        elem_map,
    };
    match fixed_subgerm(&germ, &sigma) {
        Ok(fixed) => {
            let labels: Vec<&str> = fixed
                .germ
                .elements()
                .map(|e| fixed.germ.label(e))
                .collect();
            println!("fixed: {}", labels.join(" "));
            let atoms: Vec<&str> = fixed.germ.atoms().iter().map(|&e| fixed.germ.label(e)).collect();
            println!("atoms: {}", atoms.join(" "));
            println!(
                "stable_by_complement={} stable_by_lcm={} stable_by_alpha2={}",
                fixed.stable_by_complement, fixed.stable_by_lcm, fixed.stable_by_alpha2
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("{e}");
            Ok(ExitCode::from(1))
        }
    }
}
