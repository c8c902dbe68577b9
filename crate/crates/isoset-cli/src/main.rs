//! Batch front end: construct standard objects, verify combinatorial
//! claims, count morphisms, and export meshes.
//!
//! Exit codes: 0 when a verdict was computed and printed (including
//! negative verdicts such as "non-admissible"), 1 on usage errors, 2 on
//! invalid input (unreadable files, malformed documents, out-of-range
//! degrees), 3 when a verification that should hold actually failed.
//! All output is deterministic: identical inputs give byte-identical
//! reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use isoset::anodyne::{build_filtration, retract_witness, verify_stage, AnodyneError};
use isoset::codec;
use isoset::cylinder::{cylinder, interval_of_representable, verify_exactness};
use isoset::gdelta::{check_cosimplicial_relations, decompose, enumerate_hom, SimplexObject};
use isoset::homotopy::{
    is_admissible, is_admissible_by_definition, is_elementary_homotopy_equivalence, is_normal,
};
use isoset::presheaf::{inclusion, representable, IsoSSet};
use isoset::realization::{euler_characteristic, export_obj, export_off, realize};
use isoset::standard::{boundary, horn};

#[derive(Parser)]
#[command(name = "isoset", version, about = "Build, check, and export finite twisted simplicial sets")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches. Accepted by every subcommand for
    /// reproducibility; the current checks are all deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count or list the morphisms between two objects, given as "n,k".
    Hom {
        src: String,
        tgt: String,
        /// Print only the number of morphisms (the default).
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// Print every morphism, one per line.
        #[arg(long)]
        list: bool,
    },
    /// Factor the morphism in a file into swap, codegeneracies, cofaces.
    Decompose { map_file: PathBuf },
    /// Verify every generator relation up to a source dimension bound.
    Relations {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Construct a standard object and print its document.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Run a verification and print the verdict.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Realize the object in a file and export the mesh.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
    },
    /// Euler characteristic of the realization of the object in a file.
    Euler { file: PathBuf },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// The representable presheaf on the object [n]_k.
    Delta { n: usize, k: usize },
    /// Its boundary: the union of all proper faces.
    Boundary { n: usize, k: usize },
    /// The horn omitting the face at orbit l.
    Horn { n: usize, k: usize, l: usize },
    /// The cylinder bundle over the object in a file.
    Cylinder { file: PathBuf },
    /// The interval presheaf on [n]_k (the cylinder of the representable).
    Interval { n: usize, k: usize },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Is the horn (n,k,l) admissible? Closed form and definitional
    /// search are both run and must agree.
    Admissible { n: usize, k: usize, l: usize },
    /// Is the object in the file normal (free swap action off the fixed
    /// locus)?
    Normal { file: PathBuf },
    /// Does the cylinder keep the inclusion of the first object into the
    /// second exact at both ends?
    Exactness { sub_file: PathBuf, ambient_file: PathBuf },
    /// Build the cylinder filtration for the representable at [n]_k and
    /// verify every attachment stage (pushout along an admissible horn).
    Saturation { n: usize, k: usize },
    /// Exhibit and verify the retract presenting the horn (n,k,l) as a
    /// retract of its cylinder end inclusion.
    Retract { n: usize, k: usize, l: usize },
    /// Is the morphism in the file an elementary homotopy equivalence?
    HomotopyEquiv { map_file: PathBuf },
}

#[derive(Copy, Clone, ValueEnum)]
enum ExportFormat {
    Off,
    Obj,
    Json,
}

/// A failed run, carrying the exit code mandated for its class.
enum Failure {
    /// Exit 2: unreadable, malformed, or out-of-range input.
    Input(String),
    /// Exit 3: a check that should hold did not.
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Verification(m) => m,
        }
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Enumeration guard: callers may not exceed this dimension.
fn max_n_cap() -> usize {
    std::env::var("ISOSET_MAX_N")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(6)
}

fn check_cap(n: usize) -> Result<(), Failure> {
    let cap = max_n_cap();
    if n > cap {
        return Err(input_err(format!(
            "dimension {n} exceeds the enumeration cap {cap} (set ISOSET_MAX_N to raise it)"
        )));
    }
    Ok(())
}

/// Parses a degree written as "n,k".
fn parse_degree(text: &str) -> Result<SimplexObject, Failure> {
    let (n, k) = text
        .split_once(',')
        .ok_or_else(|| input_err(format!("degree `{text}` is not of the form n,k")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| input_err(format!("degree `{text}` is not of the form n,k")))?;
    let k: usize = k
        .trim()
        .parse()
        .map_err(|_| input_err(format!("degree `{text}` is not of the form n,k")))?;
    degree(n, k)
}

fn degree(n: usize, k: usize) -> Result<SimplexObject, Failure> {
    SimplexObject::new(n, k)
        .map_err(|_| input_err(format!("degree ({n},{k}) is out of range: need k <= n + 1")))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))
}

fn read_object(path: &Path) -> Result<IsoSSet, Failure> {
    codec::decode(&read_text(path)?)
        .map_err(|e| input_err(format!("{} is not a valid document: {e}", path.display())))
}

fn horn_range_ok(n: usize, k: usize, l: usize) -> Result<(), Failure> {
    degree(n, k)?;
    if n == 0 || l > n {
        return Err(input_err(format!(
            "horn index ({n},{k},{l}) is out of range: need n >= 1 and l <= n"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let _ = cli.seed;
    match &cli.command {
        Command::Hom { src, tgt, count, list } => cmd_hom(cli, src, tgt, *count, *list),
        Command::Decompose { map_file } => cmd_decompose(cli, map_file),
        Command::Relations { max_n } => cmd_relations(cli, *max_n),
        Command::Build(what) => cmd_build(what),
        Command::Check(what) => cmd_check(cli, what),
        Command::Export { file, format } => cmd_export(file, *format),
        Command::Euler { file } => cmd_euler(cli, file),
    }
}

fn cmd_hom(cli: &Cli, src: &str, tgt: &str, count: bool, list: bool) -> Result<(), Failure> {
    let src = parse_degree(src)?;
    let tgt = parse_degree(tgt)?;
    check_cap(src.n().max(tgt.n()))?;
    let maps = enumerate_hom(src, tgt);
    let _ = count;
    if cli.json {
        let mut out = json!({
            "src": [src.n(), src.k()],
            "tgt": [tgt.n(), tgt.k()],
            "count": maps.len(),
        });
        if list {
            out["maps"] = serde_json::to_value(
                maps.iter().map(codec::map_to_doc).collect::<Vec<_>>(),
            )
            .expect("morphisms serialize");
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
    } else if list {
        for f in &maps {
            println!("{f}");
        }
    } else {
        println!("{}", maps.len());
    }
    Ok(())
}

fn cmd_decompose(cli: &Cli, map_file: &Path) -> Result<(), Failure> {
    let f = codec::decode_map(&read_text(map_file)?)
        .map_err(|e| input_err(format!("{} is not a valid morphism: {e}", map_file.display())))?;
    let d = decompose(&f);
    if cli.json {
        let out = json!({
            "src": [d.src.n(), d.src.k()],
            "tgt": [d.tgt.n(), d.tgt.k()],
            "swap": d.swap,
            "codegens": d.codegens.iter().map(|s| json!({"index": s.index, "eps": s.eps})).collect::<Vec<_>>(),
            "cofaces": d.cofaces.iter().map(|c| json!({"index": c.index, "eps": c.eps})).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
    } else {
        println!("{f}");
        println!("swap: {}", if d.swap { "yes" } else { "no" });
        println!("codegeneracies: {}", render_chain(d.codegens.iter().map(|s| (s.index, s.eps)), 's'));
        println!("cofaces: {}", render_chain(d.cofaces.iter().map(|c| (c.index, c.eps)), 'd'));
    }
    Ok(())
}

fn render_chain(gens: impl Iterator<Item = (usize, u8)>, kind: char) -> String {
    let mut parts = Vec::new();
    for (index, eps) in gens {
        parts.push(format!("{kind}{eps}^{index}"));
    }
    if parts.is_empty() {
        "(none)".to_string()
    } else {
        parts.join(" ")
    }
}

fn cmd_relations(cli: &Cli, max_n: usize) -> Result<(), Failure> {
    check_cap(max_n)?;
    let report = check_cosimplicial_relations(max_n);
    let failures = report.failures();
    if cli.json {
        let out = json!({
            "max_n": report.max_n,
            "instances": report.instances.len(),
            "all_hold": failures.is_empty(),
            "failures": failures.iter().map(|i| json!({
                "family": i.family,
                "source": [i.source.n(), i.source.k()],
                "detail": i.detail,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
    } else if failures.is_empty() {
        println!("all {} instances pass", report.instances.len());
    } else {
        for i in &failures {
            println!("FAILED (family {}): {}", i.family, i.detail);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} relation instances failed",
            failures.len()
        )))
    }
}

fn cmd_build(what: &BuildCmd) -> Result<(), Failure> {
    let text = match what {
        BuildCmd::Delta { n, k } => codec::encode(&representable(degree(*n, *k)?)),
        BuildCmd::Boundary { n, k } => codec::encode(&boundary(degree(*n, *k)?)),
        BuildCmd::Horn { n, k, l } => {
            horn_range_ok(*n, *k, *l)?;
            let x = horn(degree(*n, *k)?, *l)
                .map_err(|e| input_err(format!("cannot build the horn: {e}")))?;
            codec::encode(&x)
        }
        BuildCmd::Cylinder { file } => codec::encode_bundle(&cylinder(&read_object(file)?)),
        BuildCmd::Interval { n, k } => codec::encode(&interval_of_representable(degree(*n, *k)?)),
    };
    print!("{text}");
    Ok(())
}

fn cmd_check(cli: &Cli, what: &CheckCmd) -> Result<(), Failure> {
    match what {
        CheckCmd::Admissible { n, k, l } => {
            horn_range_ok(*n, *k, *l)?;
            let closed = is_admissible(*n, *k, *l);
            let searched = is_admissible_by_definition(*n, *k, *l);
            if closed != searched {
                return Err(Failure::Verification(format!(
                    "closed form says {closed}, definitional search says {searched} at ({n},{k},{l})"
                )));
            }
            if cli.json {
                let out = json!({"n": n, "k": k, "l": l, "admissible": closed, "routes_agree": true});
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else if closed {
                println!("admissible");
            } else {
                println!("non-admissible");
            }
            Ok(())
        }
        CheckCmd::Normal { file } => {
            let x = read_object(file)?;
            let verdict = is_normal(&x);
            if cli.json {
                let out = json!({"normal": verdict});
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else if verdict {
                println!("normal");
            } else {
                println!("not normal");
            }
            Ok(())
        }
        CheckCmd::Exactness { sub_file, ambient_file } => {
            let sub = read_object(sub_file)?;
            let ambient = read_object(ambient_file)?;
            let iota = inclusion(&sub, &ambient).map_err(|e| {
                input_err(format!(
                    "{} is not a subobject of {}: {e}",
                    sub_file.display(),
                    ambient_file.display()
                ))
            })?;
            let report = verify_exactness(&iota)
                .map_err(|e| input_err(format!("exactness check rejected the input: {e}")))?;
            if cli.json {
                let out = json!({
                    "degrees_checked": report.degrees_checked,
                    "exact": report.is_exact(),
                    "problems": report.problems,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else if report.is_exact() {
                println!("exact at both ends across {} degrees", report.degrees_checked);
            } else {
                for p in &report.problems {
                    println!("FAILED: {p}");
                }
            }
            if report.is_exact() {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "{} exactness problems",
                    report.problems.len()
                )))
            }
        }
        CheckCmd::Saturation { n, k } => {
            check_cap(*n)?;
            degree(*n, *k)?;
            let f = build_filtration(*n, *k).map_err(|e| input_err(e.to_string()))?;
            let reports: Vec<_> = (0..f.attached.len()).map(|i| verify_stage(&f, i)).collect();
            let all_ok = reports.iter().all(|r| r.is_verified());
            if cli.json {
                let out = json!({
                    "n": n, "k": k,
                    "stages": reports.iter().map(|r| json!({
                        "stage": r.stage,
                        "attach_degree": [r.attach_degree.n(), r.attach_degree.k()],
                        "horn_index": r.horn_index,
                        "horn_admissible": r.horn_admissible,
                        "union_is_pushout": r.union_is_pushout,
                        "cones_mediate": r.cones_mediate,
                        "verified": r.is_verified(),
                    })).collect::<Vec<_>>(),
                    "all_verified": all_ok,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else {
                for r in &reports {
                    let horn_index = r
                        .horn_index
                        .map_or("?".to_string(), |l| l.to_string());
                    let mut line = format!(
                        "stage {}: attach ({},{}) along horn {}",
                        r.stage,
                        r.attach_degree.n(),
                        r.attach_degree.k(),
                        horn_index
                    );
                    write!(
                        line,
                        " [admissible: {}, pushout: {}, cones: {}]",
                        r.horn_admissible, r.union_is_pushout, r.cones_mediate
                    )
                    .expect("writing to a string cannot fail");
                    println!("{line}");
                }
                if all_ok {
                    println!("all {} stages verified", reports.len());
                }
            }
            if all_ok {
                Ok(())
            } else {
                Err(Failure::Verification("a filtration stage failed to verify".into()))
            }
        }
        CheckCmd::Retract { n, k, l } => {
            horn_range_ok(*n, *k, *l)?;
            check_cap(*n)?;
            if !is_admissible(*n, *k, *l) {
                if cli.json {
                    let out = json!({"n": n, "k": k, "l": l, "admissible": false});
                    println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
                } else {
                    println!("non-admissible");
                }
                return Ok(());
            }
            match retract_witness(*n, *k, *l) {
                Ok(w) => {
                    if cli.json {
                        let out = json!({
                            "n": n, "k": k, "l": l,
                            "admissible": true,
                            "end": w.eps,
                            "omitted_orbit": w.omitted,
                            "verified": true,
                        });
                        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
                    } else {
                        println!(
                            "witness verified: horn ({n},{k},{l}) is a retract of the end-{} inclusion",
                            w.eps
                        );
                    }
                    Ok(())
                }
                Err(AnodyneError::SearchExhausted { .. }) => Err(Failure::Verification(format!(
                    "no retract found for the admissible horn ({n},{k},{l})"
                ))),
                Err(e) => Err(input_err(e.to_string())),
            }
        }
        CheckCmd::HomotopyEquiv { map_file } => {
            let f = codec::decode_presheaf_map(&read_text(map_file)?).map_err(|e| {
                input_err(format!("{} is not a valid morphism file: {e}", map_file.display()))
            })?;
            let witness = is_elementary_homotopy_equivalence(&f);
            if cli.json {
                let out = json!({"equivalence": witness.is_some()});
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else if witness.is_some() {
                println!("elementary homotopy equivalence");
            } else {
                println!("not an elementary homotopy equivalence");
            }
            Ok(())
        }
    }
}

fn cmd_export(file: &Path, format: ExportFormat) -> Result<(), Failure> {
    let x = read_object(file)?;
    let mesh = realize(&x);
    match format {
        ExportFormat::Off => print!("{}", export_off(&mesh)),
        ExportFormat::Obj => print!("{}", export_obj(&mesh)),
        ExportFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&mesh).expect("meshes serialize"));
        }
    }
    Ok(())
}

fn cmd_euler(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let x = read_object(file)?;
    let chi = euler_characteristic(&x);
    if cli.json {
        let out = json!({"euler": chi});
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
    } else {
        println!("{chi}");
    }
    Ok(())
}
