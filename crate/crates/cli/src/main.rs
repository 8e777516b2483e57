//! Command-line front end: evaluate Jensen functionals, verify bound
//! chains and refinements, certify function/modulus pairs, run seeded
//! fuzz campaigns, and rank refinements.
//!
//! Exit codes: 0 = verified, 1 = an inequality violation was detected,
//! 2 = invalid input or an instance that is inadmissible for the
//! requested operation.

mod document;
mod instance_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jengap::classic::{ratio_extremes, theorem1_bounds, two_point_bounds};
use jengap::oracle::{run_campaign, tightness_ranking, FuzzConfig, TheoremCheck, WeightMode};
use jengap::refined::{
    prefix_suffix_ratios, theorem2_bounds, theorem4_endpoint_bound, theorem6_uniform_q_bounds,
};
use jengap::uniform::{
    certify_uniform_convexity, eq32_lower_bound, estimate_modulus_coefficient,
    gradient_inequality_check, sy_chain_bound, thm7_lower_refinement, thm7_n2_specials,
    thm7_upper_refinement, thm7_upper_refinement_normalized, thm8_merged_bound, thm9_two_point,
    CertGrid, Certify,
};
use jengap::{
    FunctionSpec64, Instance64, Interval64, ModulusSpec64, Tolerance64, WeightVector64,
};

use document::{NamedValue, ReportBody, ReportDocument};
use instance_file::InstanceFile;

#[derive(Parser)]
#[command(
    name = "jengap",
    version,
    about = "Jensen-functional bounds, refinements and verification oracles"
)]
struct Cli {
    /// Absolute tolerance floor of every verification gate.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_abs: f64,

    /// Relative tolerance of every verification gate.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Nonneg,
    Signed,
    Bounded,
}

impl Mode {
    fn to_weight_mode(self) -> WeightMode {
        match self {
            Mode::Nonneg => WeightMode::NonnegSimplex,
            Mode::Signed => WeightMode::SignedPrefixValid,
            Mode::Bounded => WeightMode::BoundedPositive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the functional, barycenters and ratio summaries of an
    /// instance file.
    Eval { file: PathBuf },

    /// Verify a sandwich bound on an instance file.
    Bounds {
        file: PathBuf,
        /// 1 = pointwise ratios, 2 = cumulative ratios, 4 = endpoint
        /// bound, 5 = two-point, 6 = uniform-q chain.
        #[arg(long, value_parser = ["1", "2", "4", "5", "6"])]
        theorem: String,
    },

    /// Verify a modulus refinement on an instance file (needs `phi`).
    Refine {
        file: PathBuf,
        /// 3 = sorted chain, 7 = gradient route, 8 = merged tuple,
        /// 9 = two-point definition route, eq32 = barycenter spread.
        #[arg(long, value_parser = ["3", "7", "8", "9", "eq32"])]
        theorem: String,
        /// Skip the uniform-convexity certification of (f, phi).
        #[arg(long)]
        no_certify: bool,
    },

    /// Certify a function/modulus pair, or estimate a modulus coefficient
    /// with --exponent. TARGET is an instance file or a catalog name
    /// (square, exp, xlogx, power(R), abspower(R)).
    Certify {
        target: String,
        /// Grid as XxYxT, e.g. 64x64x17.
        #[arg(long, default_value = "64x64x17")]
        grid: String,
        /// Estimate the largest admissible coefficient for this exponent
        /// instead of certifying.
        #[arg(long)]
        exponent: Option<f64>,
        /// Interval as "a,b" for catalog-name targets (files carry their
        /// own interval).
        #[arg(long)]
        interval: Option<String>,
        /// Also check the gradient-form inequality of the pair.
        #[arg(long)]
        gradient: bool,
    },

    /// Run a seeded randomized verification campaign.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
        /// Comma-separated subset of 1,2,3,4,5,6,7,8,9,eq32.
        #[arg(long, default_value = "1,2,3,4,5,6,7,8,9,eq32")]
        theorems: String,
        #[arg(long, value_enum, default_value_t = Mode::Nonneg)]
        mode: Mode,
    },

    /// Rank every applicable refinement on an instance file.
    Compare {
        file: PathBuf,
        #[arg(long)]
        no_certify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerance64::new(cli.tol_abs, cli.tol_rel);
    match run(&cli, &tol) {
        Ok(doc) => {
            match cli.format {
                Format::Text => print!("{}", doc.to_text()),
                Format::Json => print!("{}", doc.to_json()),
            }
            if doc.is_verified() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, tol: &Tolerance64) -> Result<ReportDocument, String> {
    match &cli.command {
        Command::Eval { file } => cmd_eval(file, tol),
        Command::Bounds { file, theorem } => cmd_bounds(file, theorem, tol),
        Command::Refine {
            file,
            theorem,
            no_certify,
        } => cmd_refine(file, theorem, *no_certify, tol),
        Command::Certify {
            target,
            grid,
            exponent,
            interval,
            gradient,
        } => cmd_certify(target, grid, *exponent, interval.as_deref(), *gradient, tol),
        Command::Fuzz {
            seed,
            trials,
            theorems,
            mode,
        } => cmd_fuzz(*seed, *trials, theorems, *mode, tol),
        Command::Compare { file, no_certify } => cmd_compare(file, *no_certify, tol),
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance64, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    InstanceFile::parse(&text)?.to_instance()
}

fn cmd_eval(path: &PathBuf, tol: &Tolerance64) -> Result<ReportDocument, String> {
    let inst = load_instance(path)?;
    let mut doc = ReportDocument::new("eval", None, tol).with_instance(&inst);
    let mut values = vec![
        NamedValue {
            name: "J(f,x,p)".into(),
            value: inst.jensen_p().map_err(|e| e.to_string())?,
        },
        NamedValue {
            name: "J(f,x,q)".into(),
            value: inst.jensen_q().map_err(|e| e.to_string())?,
        },
        NamedValue {
            name: "x̄_p".into(),
            value: inst.barycenter_p(),
        },
        NamedValue {
            name: "x̄_q".into(),
            value: inst.barycenter_q(),
        },
    ];
    let mut notes = Vec::new();
    match ratio_extremes(inst.p(), inst.q()) {
        Ok(r) => {
            values.push(NamedValue {
                name: "m".into(),
                value: r.m,
            });
            values.push(NamedValue {
                name: "M".into(),
                value: r.big_m,
            });
        }
        Err(e) => notes.push(format!("pointwise ratios unavailable: {e}")),
    }
    match prefix_suffix_ratios(&inst.rearranged()) {
        Ok(s) => {
            values.push(NamedValue {
                name: "m*".into(),
                value: s.m_star,
            });
            values.push(NamedValue {
                name: "M*".into(),
                value: s.big_m_star,
            });
        }
        Err(e) => notes.push(format!("cumulative ratios unavailable: {e}")),
    }
    doc.push(ReportBody::Values {
        name: "functional".into(),
        values,
        notes,
    });
    Ok(doc.finalize())
}

fn cmd_bounds(path: &PathBuf, theorem: &str, tol: &Tolerance64) -> Result<ReportDocument, String> {
    let inst = load_instance(path)?;
    let mut doc =
        ReportDocument::new("bounds", Some(theorem.to_string()), tol).with_instance(&inst);
    match theorem {
        "1" => doc.push(ReportBody::from_chain(
            &theorem1_bounds(&inst, tol).map_err(|e| e.to_string())?,
        )),
        "2" => doc.push(ReportBody::from_chain(
            &theorem2_bounds(&inst, tol).map_err(|e| e.to_string())?,
        )),
        "4" => doc.push(ReportBody::from_chain(
            &theorem4_endpoint_bound(inst.f(), inst.interval(), inst.x(), inst.p(), tol)
                .map_err(|e| e.to_string())?,
        )),
        "5" => {
            if inst.n() != 2 {
                return Err(format!(
                    "the two-point bound needs exactly 2 points, got {}",
                    inst.n()
                ));
            }
            let r = inst.rearranged();
            let (a, b) = (r.x()[0], r.x()[1]);
            let report = two_point_bounds(inst.f(), a, b, r.p().get(0), tol)
                .map_err(|e| e.to_string())?
                .with_note("pivot weights are (1/2, 1/2); the file's q is not used here");
            doc.push(ReportBody::from_chain(&report));
        }
        "6" => doc.push(ReportBody::from_chain(
            &theorem6_uniform_q_bounds(inst.f(), inst.x(), inst.p(), tol)
                .map_err(|e| e.to_string())?,
        )),
        _ => unreachable!("clap validates the theorem tag"),
    }
    Ok(doc.finalize())
}

fn cmd_refine(
    path: &PathBuf,
    theorem: &str,
    no_certify: bool,
    tol: &Tolerance64,
) -> Result<ReportDocument, String> {
    let inst = load_instance(path)?;
    let certify = if no_certify {
        Certify::Skip
    } else {
        Certify::Default
    };
    let mut doc =
        ReportDocument::new("refine", Some(theorem.to_string()), tol).with_instance(&inst);
    match theorem {
        "3" => doc.push(ReportBody::from_refinement(
            &sy_chain_bound(&inst, tol, &certify).map_err(|e| e.to_string())?,
        )),
        "7" => {
            doc.push(ReportBody::from_refinement(
                &thm7_lower_refinement(&inst, tol, &certify).map_err(|e| e.to_string())?,
            ));
            doc.push(ReportBody::from_refinement(
                &thm7_upper_refinement(&inst, tol, &certify).map_err(|e| e.to_string())?,
            ));
            doc.push(ReportBody::from_refinement(
                &thm7_upper_refinement_normalized(&inst, tol, &certify)
                    .map_err(|e| e.to_string())?,
            ));
            if inst.n() == 2 {
                let r = inst.rearranged();
                let phi = inst.require_phi().map_err(|e| e.to_string())?;
                let reports = thm7_n2_specials(
                    inst.f(),
                    phi,
                    r.x()[0],
                    r.x()[1],
                    r.p().get(0),
                    r.q().get(0),
                    tol,
                    &certify,
                )
                .map_err(|e| e.to_string())?;
                doc.push(ReportBody::from_refinement(&reports.lower));
                doc.push(ReportBody::from_refinement(&reports.upper));
                if let Some(r) = &reports.lower_half_q {
                    doc.push(ReportBody::from_refinement(r));
                }
                if let Some(r) = &reports.upper_half_q {
                    doc.push(ReportBody::from_refinement(r));
                }
            }
        }
        "8" => {
            let r = inst.rearranged();
            let sorted = Instance64::new(
                r.x().to_vec(),
                WeightVector64::new(r.p().entries().to_vec()).map_err(|e| e.to_string())?,
                WeightVector64::new(r.q().entries().to_vec()).map_err(|e| e.to_string())?,
                *inst.f(),
                inst.phi().copied(),
                *inst.interval(),
            )
            .map_err(|e| e.to_string())?;
            let merged = thm8_merged_bound(&sorted, tol, &certify).map_err(|e| e.to_string())?;
            let report = merged.report.clone().with_note(format!(
                "points rearranged into increasing order; barycenter inserted at position {} \
                 of the merged tuple",
                merged.insert_index + 1
            ));
            doc.push(ReportBody::from_refinement(&report));
        }
        "9" => {
            if inst.n() != 2 {
                return Err(format!(
                    "the two-point refinement needs exactly 2 points, got {}",
                    inst.n()
                ));
            }
            let r = inst.rearranged();
            let phi = inst.require_phi().map_err(|e| e.to_string())?;
            let reports = thm9_two_point(
                inst.f(),
                phi,
                r.x()[0],
                r.x()[1],
                r.p().get(0),
                r.q().get(0),
                tol,
                &certify,
            )
            .map_err(|e| e.to_string())?;
            doc.push(ReportBody::from_refinement(&reports.general));
            if let Some(hq) = &reports.half_q {
                let mut body = hq.clone();
                if let Some(best) = reports.best_half_q_rhs {
                    body = body.with_note(format!(
                        "right-hand side is maximized at p1 = 1/4, where it equals {}",
                        document::sci(best)
                    ));
                }
                doc.push(ReportBody::from_refinement(&body));
            }
        }
        "eq32" => doc.push(ReportBody::from_refinement(
            &eq32_lower_bound(&inst, tol, &certify).map_err(|e| e.to_string())?,
        )),
        _ => unreachable!("clap validates the theorem tag"),
    }
    Ok(doc.finalize())
}

fn parse_grid(grid: &str, tol: &Tolerance64) -> Result<CertGrid<f64>, String> {
    let parts: Vec<&str> = grid.split('x').collect();
    if parts.len() != 3 {
        return Err(format!("grid must look like 64x64x17, got {grid:?}"));
    }
    let mut nums = [0usize; 3];
    for (i, p) in parts.iter().enumerate() {
        nums[i] = p
            .parse()
            .map_err(|_| format!("grid component {p:?} is not a count"))?;
    }
    CertGrid::new(nums[0], nums[1], nums[2], *tol).map_err(|e| e.to_string())
}

fn parse_interval(s: &str) -> Result<Interval64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("interval must look like \"a,b\", got {s:?}"));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("interval endpoint {:?} is not a number", parts[0]))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("interval endpoint {:?} is not a number", parts[1]))?;
    Interval64::new(a, b).map_err(|e| e.to_string())
}

fn parse_catalog_name(name: &str) -> Result<FunctionSpec64, String> {
    match name {
        "square" => Ok(FunctionSpec64::square()),
        "exp" => Ok(FunctionSpec64::exp()),
        "xlogx" => Ok(FunctionSpec64::xlogx()),
        _ => {
            let parse_param = |prefix: &str| -> Option<Result<f64, String>> {
                name.strip_prefix(prefix)
                    .and_then(|rest| rest.strip_suffix(')'))
                    .map(|inner| {
                        inner
                            .parse::<f64>()
                            .map_err(|_| format!("exponent {inner:?} is not a number"))
                    })
            };
            if let Some(r) = parse_param("power(") {
                return FunctionSpec64::power(r?).map_err(|e| e.to_string());
            }
            if let Some(r) = parse_param("abspower(") {
                return FunctionSpec64::abs_power(r?).map_err(|e| e.to_string());
            }
            Err(format!(
                "unknown catalog function {name:?} (expected square, exp, xlogx, \
                 power(R) or abspower(R), or a path to an instance file)"
            ))
        }
    }
}

fn cmd_certify(
    target: &str,
    grid: &str,
    exponent: Option<f64>,
    interval: Option<&str>,
    gradient: bool,
    tol: &Tolerance64,
) -> Result<ReportDocument, String> {
    let grid = parse_grid(grid, tol)?;
    let path = PathBuf::from(target);
    let (f, phi, iv, doc_instance): (
        FunctionSpec64,
        Option<ModulusSpec64>,
        Interval64,
        Option<Instance64>,
    ) = if path.is_file() {
        let inst = load_instance(&path)?;
        let iv = *inst.interval();
        (*inst.f(), inst.phi().copied(), iv, Some(inst))
    } else {
        let f = parse_catalog_name(target)?;
        let iv = parse_interval(interval.unwrap_or("0,1"))?;
        (f, None, iv, None)
    };
    let iv = match interval {
        Some(s) => parse_interval(s)?,
        None => iv,
    };

    let mut doc = ReportDocument::new("certify", None, tol);
    if let Some(inst) = &doc_instance {
        doc = doc.with_instance(inst);
    }
    if let Some(r) = exponent {
        let c = estimate_modulus_coefficient(&f, r, &iv, &grid).map_err(|e| e.to_string())?;
        doc.push(ReportBody::Values {
            name: "modulus-coefficient".into(),
            values: vec![NamedValue {
                name: format!("sup admissible c for Φ(d)=c·d^{r} on {}", f.name()),
                value: c,
            }],
            notes: vec![format!(
                "grid infimum of the chord gap over t(1−t)·|x−y|^{r}; any coefficient \
                 at or below this value passes certification on the same grid"
            )],
        });
        return Ok(doc.finalize());
    }
    let phi = phi.ok_or_else(|| {
        "certification needs a modulus: give an instance file with 'phi' or pass --exponent \
         to estimate one"
            .to_string()
    })?;
    let cert = certify_uniform_convexity(&f, &phi, &iv, &grid).map_err(|e| e.to_string())?;
    doc.push(ReportBody::from_certificate(&cert));
    if gradient {
        let g = gradient_inequality_check(&f, &phi, &iv, &grid).map_err(|e| e.to_string())?;
        doc.push(ReportBody::from_gradient_certificate(
            &g,
            [iv.lower(), iv.upper()],
            format!("{}x{}x{}", grid.x_points, grid.y_points, grid.t_points),
        ));
    }
    Ok(doc.finalize())
}

fn parse_theorem_set(theorems: &str) -> Result<Vec<TheoremCheck>, String> {
    let mut checks = Vec::new();
    for tag in theorems.split(',') {
        let tag = tag.trim();
        match tag {
            "1" => checks.push(TheoremCheck::Theorem1),
            "2" => checks.push(TheoremCheck::Theorem2),
            "3" => checks.push(TheoremCheck::Theorem3),
            "4" => checks.push(TheoremCheck::Theorem4),
            "5" => checks.push(TheoremCheck::Theorem5),
            "6" => checks.push(TheoremCheck::Theorem6),
            "7" => {
                checks.push(TheoremCheck::Theorem7Lower);
                checks.push(TheoremCheck::Theorem7Upper);
            }
            "8" => checks.push(TheoremCheck::Theorem8),
            "9" => checks.push(TheoremCheck::Theorem9),
            "eq32" => checks.push(TheoremCheck::Eq32),
            other => {
                return Err(format!(
                    "unknown theorem tag {other:?} (expected 1..9 or eq32)"
                ))
            }
        }
    }
    if checks.is_empty() {
        return Err("the theorem set is empty".into());
    }
    Ok(checks)
}

fn cmd_fuzz(
    seed: u64,
    trials: usize,
    theorems: &str,
    mode: Mode,
    tol: &Tolerance64,
) -> Result<ReportDocument, String> {
    let checks = parse_theorem_set(theorems)?;
    let mut cfg = FuzzConfig::standard(seed, trials, mode.to_weight_mode());
    cfg.tol = *tol;
    let summary = run_campaign(&cfg, &checks).map_err(|e| e.to_string())?;
    let mut doc = ReportDocument::new("fuzz", None, tol).with_seed(seed);
    doc.push(ReportBody::from_campaign(&summary));
    Ok(doc.finalize())
}

fn cmd_compare(
    path: &PathBuf,
    no_certify: bool,
    tol: &Tolerance64,
) -> Result<ReportDocument, String> {
    let inst = load_instance(path)?;
    let certify = if no_certify {
        Certify::Skip
    } else {
        Certify::Default
    };
    let ranking = tightness_ranking(&inst, tol, &certify).map_err(|e| e.to_string())?;
    let mut doc = ReportDocument::new("compare", None, tol).with_instance(&inst);
    doc.push(ReportBody::from_ranking(&ranking));
    Ok(doc.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_set_parsing() {
        let checks = parse_theorem_set("1,2,eq32").unwrap();
        assert_eq!(checks.len(), 3);
        let checks = parse_theorem_set("7").unwrap();
        assert_eq!(checks.len(), 2); // lower and upper
        assert!(parse_theorem_set("10").is_err());
        assert!(parse_theorem_set("").is_err());
    }

    #[test]
    fn catalog_name_parsing() {
        assert!(parse_catalog_name("square").is_ok());
        assert!(parse_catalog_name("power(3)").is_ok());
        assert!(parse_catalog_name("abspower(4)").is_ok());
        assert!(parse_catalog_name("power(0.5)").is_err());
        assert!(parse_catalog_name("cube").is_err());
    }

    #[test]
    fn grid_and_interval_parsing() {
        let tol = Tolerance64::default();
        let g = parse_grid("8x8x5", &tol).unwrap();
        assert_eq!((g.x_points, g.y_points, g.t_points), (8, 8, 5));
        assert!(parse_grid("8x8", &tol).is_err());
        assert!(parse_grid("8x8x4", &tol).is_err());
        let iv = parse_interval("0.5, 2.5").unwrap();
        assert_eq!((iv.lower(), iv.upper()), (0.5, 2.5));
        assert!(parse_interval("1").is_err());
    }
}
