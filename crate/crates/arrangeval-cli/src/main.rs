//! Command-line front end for exact arrangement valuations.
//!
//! Subcommands: `filtration` (degree filtration dimensions and bases),
//! `verify` (linear descriptions of the graded pieces), `scissors`
//! (translation congruence verdicts), `hadwiger-eval` (every invariant of a
//! polytope), and `render` (deterministic SVG of a 2D arrangement).
//!
//! Exit codes: `0` success, `1` a verified theorem failed to hold, `2`
//! parse failure, `3` validation or precondition failure.

use arrangeval::chains::degree_filtration;
use arrangeval::constraints::{
    verify_compact_description, verify_pseudoaffine_descriptions, verify_toric_descriptions,
};
use arrangeval::geometry::{enumerate_flags, flag_label, Geometry};
use arrangeval::hadwiger::{hadwiger_eval, HadwigerLabel, TableEntry};
use arrangeval::io::{
    decomposition_csv, invariant_table_csv, report_json, ArrangementFile, ArrangementKind,
    FiltrationReport, HadwigerEvalReport, InvariantTableReport, LevelBasis, PolytopeFile,
    ScissorsReport, VerificationReport, WitnessReport,
};
use arrangeval::rational::format_q;
use arrangeval::scissors::{hadwiger_glur_2d, joint_toric_geometry, zn_congruent};
use arrangeval::toric::{validate_toric, ToricArrangement};
use arrangeval::SCHEMA;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod render;

/// Exact computations on rational hyperplane and toric arrangements.
#[derive(Debug, Parser)]
#[command(name = "arrangeval", version, about)]
struct RunConfig {
    /// Random seed, recorded in every report for reproducibility.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format where a choice exists.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    /// Pick by arrangement kind: toric or pseudoaffine.
    Auto,
    /// Reciprocity + period descriptions of a toric arrangement.
    Toric,
    /// Reciprocity-only descriptions (and the bounded-polytope subspace)
    /// of an affine arrangement.
    Pseudoaffine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScissorsMode {
    /// Lattice-translation congruence via torus pushforwards.
    Zn,
    /// Planar translation congruence via the Hadwiger–Glur criterion.
    Hg2d,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the degree filtration: graded dimensions and bases.
    Filtration {
        /// Arrangement file (JSON).
        input: PathBuf,
    },
    /// Verify that each graded piece equals its linear description.
    Verify {
        /// Arrangement file (JSON).
        input: PathBuf,
        /// Which description to check.
        #[arg(long, value_enum, default_value_t = VerifyMode::Auto)]
        mode: VerifyMode,
    },
    /// Decide translation scissors congruence of two polytopes.
    Scissors {
        /// First polytope file (JSON).
        left: PathBuf,
        /// Second polytope file (JSON).
        right: PathBuf,
        /// Which congruence to decide.
        #[arg(long, value_enum)]
        mode: ScissorsMode,
    },
    /// Evaluate every Hadwiger invariant of a polytope.
    HadwigerEval {
        /// Arrangement file (JSON).
        input: PathBuf,
        /// Polytope file (JSON); its facets must lie on the arrangement.
        polytope: PathBuf,
    },
    /// Render a two-dimensional arrangement as SVG.
    Render {
        /// Arrangement file (JSON).
        input: PathBuf,
        /// Also draw flat labels.
        #[arg(long)]
        flags: bool,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(e: impl std::fmt::Display) -> Failure {
        Failure {
            code: 2,
            message: format!("parse error: {e}"),
        }
    }

    fn validation(e: impl std::fmt::Display) -> Failure {
        Failure {
            code: 3,
            message: format!("validation error: {e}"),
        }
    }

    fn verification() -> Failure {
        Failure {
            code: 1,
            message: "verification failed: some description does not match".to_string(),
        }
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn write_output(config: &RunConfig, contents: &str) -> Result<(), Failure> {
    match &config.out {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => std::fs::write(path, contents).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        }),
    }
}

fn load_arrangement(path: &Path) -> Result<ArrangementFile, Failure> {
    let file = ArrangementFile::parse(&read_file(path)?).map_err(Failure::parse)?;
    Ok(file)
}

/// Validate the arrangement; on failure, emit the validation report and
/// exit 3.
fn require_valid(config: &RunConfig, file: &ArrangementFile) -> Result<(), Failure> {
    let validation = file.validate();
    if !validation.valid() {
        let _ = write_output(config, &report_json(&validation));
        return Err(Failure::validation("invalid arrangement (see report)"));
    }
    Ok(())
}

fn run(config: &RunConfig) -> Result<(), Failure> {
    match &config.command {
        Command::Filtration { input } => cmd_filtration(config, input),
        Command::Verify { input, mode } => cmd_verify(config, input, *mode),
        Command::Scissors { left, right, mode } => cmd_scissors(config, left, right, *mode),
        Command::HadwigerEval { input, polytope } => cmd_hadwiger_eval(config, input, polytope),
        Command::Render { input, flags } => cmd_render(config, input, *flags),
    }
}

fn cmd_filtration(config: &RunConfig, input: &Path) -> Result<(), Failure> {
    let file = load_arrangement(input)?;
    require_valid(config, &file)?;
    let report = match file.kind {
        ArrangementKind::Toric => {
            let a = file.to_toric().map_err(Failure::parse)?;
            let g = arrangeval::toric::ToricGeometry::new(&a).map_err(Failure::validation)?;
            filtration_report(config, &file, &g)?
        }
        ArrangementKind::Affine => {
            let a = file.to_affine().map_err(Failure::parse)?;
            let g = arrangeval::affine::AffineGeometry::new(&a).map_err(Failure::validation)?;
            filtration_report(config, &file, &g)?
        }
    };
    write_output(config, &report_json(&report))
}

fn filtration_report<G: Geometry + ?Sized>(
    config: &RunConfig,
    file: &ArrangementFile,
    g: &G,
) -> Result<FiltrationReport, Failure> {
    let filt = degree_filtration(g).map_err(Failure::validation)?;
    let levels = (0..filt.spaces.len())
        .map(|k| LevelBasis {
            level: k,
            flags: filt.spaces[k]
                .flags()
                .iter()
                .map(|f| flag_label(g, f))
                .collect(),
            basis: filt.graded[k]
                .basis()
                .to_rows()
                .iter()
                .map(|row| row.iter().map(format_q).collect())
                .collect(),
        })
        .collect();
    Ok(FiltrationReport {
        schema: SCHEMA.to_string(),
        seed: config.seed,
        kind: file.kind,
        validation: file.validate(),
        dims: filt.graded_dims(),
        total_dim: filt.spaces[0].dim(),
        levels,
    })
}

fn cmd_verify(config: &RunConfig, input: &Path, mode: VerifyMode) -> Result<(), Failure> {
    let file = load_arrangement(input)?;
    require_valid(config, &file)?;
    let (mode_name, levels, compact) = match (file.kind, mode) {
        (ArrangementKind::Toric, VerifyMode::Auto | VerifyMode::Toric) => {
            let a = file.to_toric().map_err(Failure::parse)?;
            let g = arrangeval::toric::ToricGeometry::new(&a).map_err(Failure::validation)?;
            let d = verify_toric_descriptions(&g).map_err(Failure::validation)?;
            ("toric", d.levels, None)
        }
        (ArrangementKind::Affine, VerifyMode::Auto | VerifyMode::Pseudoaffine) => {
            let a = file.to_affine().map_err(Failure::parse)?;
            let g = arrangeval::affine::AffineGeometry::new(&a).map_err(Failure::validation)?;
            let d = verify_pseudoaffine_descriptions(&g).map_err(Failure::validation)?;
            let c = verify_compact_description(&g).map_err(Failure::validation)?;
            ("pseudoaffine", d.levels, Some(c))
        }
        (kind, mode) => {
            return Err(Failure::validation(format!(
                "mode {mode:?} does not apply to a {kind} arrangement"
            )))
        }
    };
    let all_equal = levels.iter().all(|l| l.equal)
        && compact
            .as_ref()
            .map(|c| c.equal && c.contained_in_reciprocity)
            .unwrap_or(true);
    let report = VerificationReport {
        schema: SCHEMA.to_string(),
        seed: config.seed,
        kind: file.kind,
        mode: mode_name.to_string(),
        validation: file.validate(),
        levels,
        compact,
        all_equal,
    };
    write_output(config, &report_json(&report))?;
    if all_equal {
        Ok(())
    } else {
        Err(Failure::verification())
    }
}

fn cmd_scissors(
    config: &RunConfig,
    left: &Path,
    right: &Path,
    mode: ScissorsMode,
) -> Result<(), Failure> {
    let lf = PolytopeFile::parse(&read_file(left)?).map_err(Failure::parse)?;
    let rf = PolytopeFile::parse(&read_file(right)?).map_err(Failure::parse)?;
    let report = match mode {
        ScissorsMode::Zn => {
            let p = lf.to_polytope().map_err(Failure::validation)?;
            let q = rf.to_polytope().map_err(Failure::validation)?;
            let verdict = zn_congruent(&p, &q).map_err(Failure::validation)?;
            let joint = joint_toric_geometry(&[&p, &q]).map_err(Failure::validation)?;
            let arrangement = ToricArrangement {
                dim: joint.dim(),
                hyperplanes: joint.hyperplanes().to_vec(),
            };
            ScissorsReport {
                schema: SCHEMA.to_string(),
                seed: config.seed,
                mode: "zn".to_string(),
                validation: Some(arrangeval::io::ValidationReport::Toric(validate_toric(
                    &arrangement,
                ))),
                congruent: verdict.congruent,
                witness: verdict.witness.as_ref().map(WitnessReport::from),
                left: None,
                right: None,
            }
        }
        ScissorsMode::Hg2d => {
            let p = lf.to_polygon().map_err(Failure::validation)?;
            let q = rf.to_polygon().map_err(Failure::validation)?;
            let cmp = hadwiger_glur_2d(&p, &q).map_err(Failure::validation)?;
            if config.format == Format::Csv {
                let mut out = invariant_table_csv(&cmp.left);
                out.push('\n');
                out.push_str(&invariant_table_csv(&cmp.right));
                return write_output(config, &out);
            }
            ScissorsReport {
                schema: SCHEMA.to_string(),
                seed: config.seed,
                mode: "hg2d".to_string(),
                validation: None,
                congruent: cmp.verdict.congruent,
                witness: cmp.verdict.witness.as_ref().map(WitnessReport::from),
                left: Some(InvariantTableReport::from(&cmp.left)),
                right: Some(InvariantTableReport::from(&cmp.right)),
            }
        }
    };
    write_output(config, &report_json(&report))
}

fn cmd_hadwiger_eval(config: &RunConfig, input: &Path, polytope: &Path) -> Result<(), Failure> {
    let file = load_arrangement(input)?;
    require_valid(config, &file)?;
    let pf = PolytopeFile::parse(&read_file(polytope)?).map_err(Failure::parse)?;
    let p = pf.to_polytope().map_err(Failure::validation)?;
    let rows = match file.kind {
        ArrangementKind::Toric => {
            let a = file.to_toric().map_err(Failure::parse)?;
            let g = arrangeval::toric::ToricGeometry::new(&a).map_err(Failure::validation)?;
            eval_rows(&g, &p)?
        }
        ArrangementKind::Affine => {
            let a = file.to_affine().map_err(Failure::parse)?;
            let g = arrangeval::affine::AffineGeometry::new(&a).map_err(Failure::validation)?;
            eval_rows(&g, &p)?
        }
    };
    if config.format == Format::Csv {
        return write_output(config, &decomposition_csv(&rows));
    }
    let report = HadwigerEvalReport {
        schema: SCHEMA.to_string(),
        seed: config.seed,
        validation: file.validate(),
        rows,
    };
    write_output(config, &report_json(&report))
}

fn eval_rows<G: Geometry + ?Sized>(
    g: &G,
    p: &arrangeval::polytope::Polytope,
) -> Result<Vec<TableEntry>, Failure> {
    let mut rows = Vec::new();
    for k in 0..=g.dim() {
        for flag in enumerate_flags(g, k) {
            let label = HadwigerLabel {
                flag: flag.clone(),
                orientation: 1,
            };
            let value = hadwiger_eval(g, &label, p).map_err(Failure::validation)?;
            rows.push(TableEntry {
                rank: k,
                flag: flag_label(g, &flag),
                orientation: 1,
                coefficient: format_q(&value),
            });
        }
    }
    Ok(rows)
}

fn cmd_render(config: &RunConfig, input: &Path, flags: bool) -> Result<(), Failure> {
    let file = load_arrangement(input)?;
    require_valid(config, &file)?;
    if file.dim != 2 {
        return Err(Failure::validation(format!(
            "render needs a two-dimensional arrangement, got dimension {}",
            file.dim
        )));
    }
    let svg = match file.kind {
        ArrangementKind::Toric => {
            let a = file.to_toric().map_err(Failure::parse)?;
            let g = arrangeval::toric::ToricGeometry::new(&a).map_err(Failure::validation)?;
            render::render_toric(&g, flags)
        }
        ArrangementKind::Affine => {
            let a = file.to_affine().map_err(Failure::parse)?;
            let g = arrangeval::affine::AffineGeometry::new(&a).map_err(Failure::validation)?;
            render::render_affine(&g, flags)
        }
    };
    write_output(config, &svg)
}
