//! Report documents: one schema serialized two ways.
//!
//! The machine form is JSON with every float printed at 17 significant
//! digits (scientific notation), which round-trips `f64` exactly and is
//! byte-identical across reruns. The text form is a table rendering of
//! the same numbers, printed with the same formatter so both carry
//! identical values.

use jengap::oracle::{CampaignSummary, TightnessRanking};
use jengap::uniform::{Certificate, GradientCertificate};
use jengap::{BoundReport64, RefinementTerms64, Tolerance64, Verdict};
use serde::Serialize;
use std::io::Write;

use crate::instance_file::{FunctionDesc, ModulusDesc};

/// Prints an `f64` with 17 significant digits, enough to reconstruct the
/// exact bit pattern.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON formatter that emits every float through [`sci`].
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EchoInstance {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub f: FunctionDesc,
    pub phi: Option<ModulusDesc>,
    pub interval: [f64; 2],
}

impl EchoInstance {
    pub fn from_instance(inst: &jengap::Instance64) -> Self {
        Self {
            x: inst.x().to_vec(),
            p: inst.p().entries().to_vec(),
            q: inst.q().entries().to_vec(),
            f: FunctionDesc::from_spec(inst.f()),
            phi: inst.phi().map(ModulusDesc::from_spec),
            interval: [inst.interval().lower(), inst.interval().upper()],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankGroup {
    pub gap_name: String,
    pub entries: Vec<RankEntry>,
    pub tightest: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankEntry {
    pub name: String,
    pub gap: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub check: String,
    pub evaluated: usize,
    pub skipped: usize,
    pub violations: usize,
    pub worst_trial: Option<usize>,
    pub worst_normalized_slack: Option<f64>,
    pub min_normalized_slack: f64,
    pub median_normalized_slack: f64,
    pub equality_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportBody {
    Chain {
        name: String,
        terms: Vec<NamedValue>,
        slacks: Vec<f64>,
        scale: f64,
        gate: f64,
        verdict: String,
        notes: Vec<String>,
    },
    Refinement {
        name: String,
        gap_name: String,
        gap: f64,
        terms: Vec<NamedValue>,
        total: f64,
        slack: f64,
        scale: f64,
        gate: f64,
        verdict: String,
        notes: Vec<String>,
    },
    Certificate {
        name: String,
        passed: bool,
        worst_slack: f64,
        worst_point: Vec<f64>,
        scale: f64,
        gate: f64,
        grid: String,
        interval: [f64; 2],
    },
    Values {
        name: String,
        values: Vec<NamedValue>,
        notes: Vec<String>,
    },
    Ranking {
        name: String,
        groups: Vec<RankGroup>,
        notes: Vec<String>,
    },
    Campaign {
        seed: u64,
        trials: usize,
        mode: String,
        total_violations: usize,
        checks: Vec<CheckDoc>,
    },
}

impl ReportBody {
    pub fn from_chain(report: &BoundReport64) -> Self {
        ReportBody::Chain {
            name: report.label.clone(),
            terms: report
                .terms
                .iter()
                .map(|t| NamedValue {
                    name: t.name.clone(),
                    value: t.value,
                })
                .collect(),
            slacks: report.slacks.clone(),
            scale: report.scale,
            gate: report.gate,
            verdict: report.verdict.name().to_string(),
            notes: report.notes.clone(),
        }
    }

    pub fn from_refinement(report: &RefinementTerms64) -> Self {
        ReportBody::Refinement {
            name: report.label.clone(),
            gap_name: report.gap_name.clone(),
            gap: report.gap,
            terms: report
                .summands
                .iter()
                .map(|s| NamedValue {
                    name: s.name.clone(),
                    value: s.value,
                })
                .collect(),
            total: report.total,
            slack: report.slack,
            scale: report.scale,
            gate: report.gate,
            verdict: report.verdict.name().to_string(),
            notes: report.notes.clone(),
        }
    }

    pub fn from_certificate(cert: &Certificate<f64>) -> Self {
        ReportBody::Certificate {
            name: "uniform-convexity".to_string(),
            passed: cert.passed,
            worst_slack: cert.worst_slack,
            worst_point: vec![cert.worst_point.0, cert.worst_point.1, cert.worst_point.2],
            scale: cert.scale,
            gate: cert.gate,
            grid: format!(
                "{}x{}x{}",
                cert.grid.x_points, cert.grid.y_points, cert.grid.t_points
            ),
            interval: [cert.interval.lower(), cert.interval.upper()],
        }
    }

    pub fn from_gradient_certificate(cert: &GradientCertificate<f64>, interval: [f64; 2], grid: String) -> Self {
        ReportBody::Certificate {
            name: "gradient-inequality".to_string(),
            passed: cert.passed,
            worst_slack: cert.worst_slack,
            worst_point: vec![cert.worst_point.0, cert.worst_point.1],
            scale: cert.scale,
            gate: cert.gate,
            grid,
            interval,
        }
    }

    pub fn from_ranking(ranking: &TightnessRanking<f64>) -> Self {
        let group = |name: &str, entries: &[jengap::oracle::RankedRefinement<f64>], tightest: &[String]| RankGroup {
            gap_name: name.to_string(),
            entries: entries
                .iter()
                .map(|e| RankEntry {
                    name: e.name.clone(),
                    gap: e.gap,
                    rhs: e.rhs,
                    slack: e.slack,
                })
                .collect(),
            tightest: tightest.to_vec(),
        };
        ReportBody::Ranking {
            name: "tightness".to_string(),
            groups: vec![
                group("J(f,x,p)", &ranking.jensen_gap, &ranking.tightest_jensen),
                group(
                    "J(f,x,p)−m·J(f,x,q)",
                    &ranking.excess_gap,
                    &ranking.tightest_excess,
                ),
            ],
            notes: ranking.notes.clone(),
        }
    }

    pub fn from_campaign(summary: &CampaignSummary<f64>) -> Self {
        ReportBody::Campaign {
            seed: summary.seed,
            trials: summary.trials,
            mode: summary.weight_mode.name().to_string(),
            total_violations: summary.total_violations(),
            checks: summary
                .checks
                .iter()
                .map(|c| CheckDoc {
                    check: c.check.name().to_string(),
                    evaluated: c.evaluated,
                    skipped: c.skipped,
                    violations: c.violations.len(),
                    worst_trial: c.worst.as_ref().map(|w| w.trial),
                    worst_normalized_slack: c.worst.as_ref().map(|w| w.normalized),
                    min_normalized_slack: c.min_normalized,
                    median_normalized_slack: c.median_normalized,
                    equality_residual: c.equality_residual,
                })
                .collect(),
        }
    }

    fn verdict(&self) -> Verdict {
        match self {
            ReportBody::Chain { verdict, .. } | ReportBody::Refinement { verdict, .. } => {
                if verdict == "verified" {
                    Verdict::Verified
                } else {
                    Verdict::Violated
                }
            }
            ReportBody::Certificate { passed, .. } => {
                if *passed {
                    Verdict::Verified
                } else {
                    Verdict::Violated
                }
            }
            ReportBody::Campaign {
                total_violations, ..
            } => {
                if *total_violations == 0 {
                    Verdict::Verified
                } else {
                    Verdict::Violated
                }
            }
            ReportBody::Values { .. } | ReportBody::Ranking { .. } => Verdict::Verified,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceDoc {
    pub atol: f64,
    pub rtol: f64,
}

/// The full output of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub theorem: Option<String>,
    pub tolerance: ToleranceDoc,
    pub seed: Option<u64>,
    pub instance: Option<EchoInstance>,
    pub reports: Vec<ReportBody>,
    pub verdict: String,
}

impl ReportDocument {
    pub fn new(command: &str, theorem: Option<String>, tol: &Tolerance64) -> Self {
        Self {
            tool: "jengap",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            theorem,
            tolerance: ToleranceDoc {
                atol: tol.atol,
                rtol: tol.rtol,
            },
            seed: None,
            instance: None,
            reports: Vec::new(),
            verdict: Verdict::Verified.name().to_string(),
        }
    }

    pub fn with_instance(mut self, inst: &jengap::Instance64) -> Self {
        self.instance = Some(EchoInstance::from_instance(inst));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, body: ReportBody) {
        self.reports.push(body);
    }

    /// Overall verdict: violated when any report is.
    pub fn finalize(mut self) -> Self {
        let violated = self
            .reports
            .iter()
            .any(|r| r.verdict() == Verdict::Violated);
        self.verdict = if violated {
            Verdict::Violated.name().to_string()
        } else {
            Verdict::Verified.name().to_string()
        };
        self
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == "verified"
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
        self.serialize(&mut ser).expect("document serializes");
        out.push(b'\n');
        String::from_utf8(out).expect("json is utf8")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let push = |s: &mut String, line: String| {
            s.push_str(&line);
            s.push('\n');
        };
        push(
            &mut s,
            format!(
                "{} {} {}{}",
                self.tool,
                self.version,
                self.command,
                self.theorem
                    .as_ref()
                    .map(|t| format!(" --theorem {t}"))
                    .unwrap_or_default()
            ),
        );
        push(
            &mut s,
            format!(
                "tolerance: atol={} rtol={}",
                sci(self.tolerance.atol),
                sci(self.tolerance.rtol)
            ),
        );
        if let Some(seed) = self.seed {
            push(&mut s, format!("seed: {seed}"));
        }
        if let Some(inst) = &self.instance {
            push(
                &mut s,
                format!(
                    "instance: n={} f={}{} phi={} interval=[{}, {}]",
                    inst.x.len(),
                    inst.f.kind,
                    inst.f
                        .exponent
                        .map(|e| format!("({e})"))
                        .unwrap_or_default(),
                    inst.phi
                        .as_ref()
                        .map(|m| format!("{}*d^{}", m.coefficient, m.exponent))
                        .unwrap_or_else(|| "none".to_string()),
                    inst.interval[0],
                    inst.interval[1]
                ),
            );
        }
        for body in &self.reports {
            render_body(&mut s, body);
        }
        push(&mut s, format!("verdict: {}", self.verdict));
        s
    }
}

fn render_body(s: &mut String, body: &ReportBody) {
    use std::fmt::Write as _;
    match body {
        ReportBody::Chain {
            name,
            terms,
            slacks,
            gate,
            verdict,
            notes,
            ..
        } => {
            let _ = writeln!(s, "report {name} (chain, gate={})", sci(*gate));
            let width = terms.iter().map(|t| t.name.chars().count()).max().unwrap_or(4);
            let _ = writeln!(s, "  {:<width$}  {:>24}  {:>24}", "term", "value", "slack");
            for (i, t) in terms.iter().enumerate() {
                let slack = if i < slacks.len() {
                    sci(slacks[i])
                } else {
                    String::new()
                };
                let _ = writeln!(s, "  {:<width$}  {:>24}  {:>24}", t.name, sci(t.value), slack);
            }
            let _ = writeln!(s, "  verdict: {verdict}");
            for n in notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        ReportBody::Refinement {
            name,
            gap_name,
            gap,
            terms,
            total,
            slack,
            gate,
            verdict,
            notes,
            ..
        } => {
            let _ = writeln!(s, "report {name} (refinement, gate={})", sci(*gate));
            let _ = writeln!(s, "  gap {gap_name} = {}", sci(*gap));
            let width = terms.iter().map(|t| t.name.chars().count()).max().unwrap_or(4);
            for t in terms {
                let _ = writeln!(s, "  {:<width$}  {:>24}", t.name, sci(t.value));
            }
            let _ = writeln!(s, "  total = {}  slack = {}", sci(*total), sci(*slack));
            let _ = writeln!(s, "  verdict: {verdict}");
            for n in notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        ReportBody::Certificate {
            name,
            passed,
            worst_slack,
            worst_point,
            gate,
            grid,
            interval,
            ..
        } => {
            let point = worst_point
                .iter()
                .map(|v| sci(*v))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                s,
                "certificate {name}: {} (grid {grid} on [{}, {}], gate={})",
                if *passed { "pass" } else { "FAIL" },
                interval[0],
                interval[1],
                sci(*gate)
            );
            let _ = writeln!(s, "  worst slack {} at ({point})", sci(*worst_slack));
        }
        ReportBody::Values { name, values, notes } => {
            let _ = writeln!(s, "values {name}");
            let width = values.iter().map(|t| t.name.chars().count()).max().unwrap_or(4);
            for v in values {
                let _ = writeln!(s, "  {:<width$}  {:>24}", v.name, sci(v.value));
            }
            for n in notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        ReportBody::Ranking { name, groups, notes } => {
            let _ = writeln!(s, "ranking {name}");
            for g in groups {
                let _ = writeln!(s, "  gap {}:", g.gap_name);
                for e in &g.entries {
                    let _ = writeln!(
                        s,
                        "    {:<12} rhs={}  gap={}  slack={}",
                        e.name,
                        sci(e.rhs),
                        sci(e.gap),
                        sci(e.slack)
                    );
                }
                let _ = writeln!(s, "    tightest: {}", g.tightest.join(", "));
            }
            for n in notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        ReportBody::Campaign {
            seed,
            trials,
            mode,
            total_violations,
            checks,
        } => {
            let _ = writeln!(
                s,
                "campaign seed={seed} trials={trials} mode={mode} violations={total_violations}"
            );
            let _ = writeln!(
                s,
                "  {:<16} {:>9} {:>8} {:>10} {:>24} {:>24}",
                "check", "evaluated", "skipped", "violations", "min slack/gate", "median slack/gate"
            );
            for c in checks {
                let _ = writeln!(
                    s,
                    "  {:<16} {:>9} {:>8} {:>10} {:>24} {:>24}",
                    c.check,
                    c.evaluated,
                    c.skipped,
                    c.violations,
                    sci(c.min_normalized_slack),
                    sci(c.median_normalized_slack)
                );
            }
        }
    }
}
