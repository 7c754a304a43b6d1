//! `bsnr`: multiplier tables, Monte Carlo risk curves, dominance analysis and
//! verification suites for mean estimation under a bounded signal-to-noise
//! ratio.

mod config;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bsnr_core::analysis::{
    self, decomposition_suite, dominance_suite, envelope_violation_set, h_properties_suite,
    midpoint_dominance_check, r1_suite, specfun_suite, SuiteReport,
};
use bsnr_core::estimators::multiplier;
use bsnr_core::risk::{format_sig12, risk_curve, RiskCurve, SampleConfig};
use bsnr_core::{EstimatorSpec64, Problem64};

use config::{Inputs, Resolved};
use svg::Series;

#[derive(Parser)]
#[command(
    name = "bsnr",
    version,
    about = "Estimators of a multivariate normal mean with a bounded signal-to-noise ratio: \
             multiplier tables, Monte Carlo risk curves, dominance analysis and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; explicit flags override its fields
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Dimension p of the mean vector
    #[arg(long)]
    p: Option<u32>,
    /// Degrees of freedom k of the variance estimate
    #[arg(long)]
    k: Option<u32>,
    /// Upper bound m on the signal-to-noise ratio
    #[arg(long)]
    m: Option<f64>,
    /// Prior exponent l for the default boundary-uniform spec (must be < k+p)
    #[arg(long)]
    l: Option<f64>,
    /// Sphere radius for the default boundary-uniform spec (in (0, m])
    #[arg(long)]
    radius: Option<f64>,
    /// Estimator spec as JSON, e.g. '{"kind":"mle"}'; repeatable
    #[arg(long = "spec", value_name = "JSON")]
    specs: Vec<String>,
    /// λ grid as lo:hi:n
    #[arg(long = "lambda-grid", value_name = "LO:HI:N")]
    lambda_grid: Option<String>,
    /// t grid as lo:hi:n or lo:hi:n:log
    #[arg(long = "t-grid", value_name = "LO:HI:N[:log]")]
    t_grid: Option<String>,
    /// Monte Carlo replicates per grid point
    #[arg(long)]
    replicates: Option<u64>,
    /// Base RNG seed (every output records it)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV/SVG/JSON artifacts
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also emit SVG plots
    #[arg(long)]
    svg: bool,
}

impl CommonArgs {
    fn resolve(self) -> Result<Resolved> {
        Inputs {
            config: self.config,
            p: self.p,
            k: self.k,
            m: self.m,
            l: self.l,
            radius: self.radius,
            specs: self.specs,
            lambda_grid: self.lambda_grid,
            t_grid: self.t_grid,
            replicates: self.replicates,
            seed: self.seed,
            out: self.out,
            svg: self.svg,
        }
        .resolve()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate multiplier functions h(t) over a t grid
    Multiplier(CommonArgs),
    /// Monte Carlo risk curves over a λ grid (CSV per spec, optional SVG)
    RiskCurve(CommonArgs),
    /// Midpoint dominance checks, envelope violations and truncation specs
    Dominance(CommonArgs),
    /// Run a verification suite; exit 0 iff all assertions pass
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Reproduce the multiplier/risk figure bundles and a gains summary
    Figures(CommonArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Specfun,
    HProperties,
    R1Inequality,
    Decomposition,
    Dominance,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Multiplier(args) => cmd_multiplier(args.resolve()?),
        Command::RiskCurve(args) => cmd_risk_curve(args.resolve()?),
        Command::Dominance(args) => cmd_dominance(args.resolve()?),
        Command::Verify { suite, args } => cmd_verify(suite, args.resolve()?),
        Command::Figures(args) => cmd_figures(args.resolve()?),
    }
}

fn provenance(subcommand: &str, r: &Resolved) -> Vec<String> {
    let mut lines = vec![format!(
        "bsnr {subcommand} p={} k={} m={} seed={} replicates={}",
        r.problem.p(),
        r.problem.k(),
        r.problem.m(),
        r.sample.seed,
        r.sample.replicates
    )];
    for spec in &r.specs {
        lines.push(format!(
            "spec {}: {}",
            spec.label(),
            serde_json::to_string(spec).expect("spec serializes")
        ));
    }
    lines
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn cmd_multiplier(r: Resolved) -> Result<ExitCode> {
    let labels: Vec<String> = r.specs.iter().map(|s| s.label()).collect();
    let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(r.t_grid.len());
    for &t in &r.t_grid {
        let hs: Result<Vec<f64>, _> = r
            .specs
            .iter()
            .map(|spec| multiplier(spec, t, &r.problem))
            .collect();
        rows.push((t, hs?));
    }

    // Table on stdout.
    print!("{:>14}", "t");
    for label in &labels {
        print!("{label:>20}");
    }
    println!();
    for (t, hs) in &rows {
        print!("{t:>14.6}");
        for h in hs {
            print!("{h:>20.12}");
        }
        println!();
    }

    // CSV artifact.
    let mut csv = String::new();
    for line in provenance("multiplier", &r) {
        csv.push_str(&format!("# {line}\n"));
    }
    csv.push_str(&format!("t,{}\n", labels.join(",")));
    for (t, hs) in &rows {
        let cells: Vec<String> = std::iter::once(format_sig12(*t))
            .chain(hs.iter().map(|&h| format_sig12(h)))
            .collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let path = r.out.join("multipliers.csv");
    write_text(&path, &csv)?;
    eprintln!("wrote {}", path.display());

    if r.svg {
        let series: Vec<Series> = labels
            .iter()
            .enumerate()
            .map(|(j, label)| Series {
                label: label.clone(),
                points: rows.iter().map(|(t, hs)| (*t, hs[j])).collect(),
            })
            .collect();
        let path = r.out.join("multipliers.svg");
        write_text(&path, &svg::line_chart("multipliers", "t", "h(t)", &series))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn curve_series(curves: &[RiskCurve<f64>]) -> Vec<Series> {
    curves
        .iter()
        .map(|curve| Series {
            label: curve.spec.label(),
            points: curve
                .points
                .iter()
                .map(|pt| (pt.lambda, pt.estimate))
                .collect(),
        })
        .collect()
}

fn cmd_risk_curve(r: Resolved) -> Result<ExitCode> {
    let comments = provenance("risk-curve", &r);
    let mut curves = Vec::new();
    for spec in &r.specs {
        let curve = risk_curve(spec, &r.problem, &r.lambda_grid, &r.sample)?;
        let path = r.out.join(format!("risk_{}.csv", spec.label()));
        write_text(&path, &curve.to_csv_string(&comments))?;
        let first = curve.points.first().expect("nonempty grid");
        let last = curve.points.last().expect("nonempty grid");
        println!(
            "{:<24} R({}) = {:.4} ± {:.4}   R({}) = {:.4} ± {:.4}   -> {}",
            spec.label(),
            first.lambda,
            first.estimate,
            first.std_error,
            last.lambda,
            last.estimate,
            last.std_error,
            path.display()
        );
        curves.push(curve);
    }
    if r.svg {
        let path = r.out.join("risk_curves.svg");
        write_text(
            &path,
            &svg::line_chart(
                &format!(
                    "risk curves, p={} k={} m={}",
                    r.problem.p(),
                    r.problem.k(),
                    r.problem.m()
                ),
                "lambda",
                "risk",
                &curve_series(&curves),
            ),
        )?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dominance(r: Resolved) -> Result<ExitCode> {
    let t_grid = analysis::default_t_grid::<f64>();
    let mut reports = Vec::new();
    for i in 0..r.specs.len() {
        for j in 0..r.specs.len() {
            if i == j {
                continue;
            }
            let rep = midpoint_dominance_check(&r.specs[i], &r.specs[j], &r.problem, &t_grid)?;
            println!(
                "[{}] {}",
                if rep.passed { "PASS" } else { "fail" },
                rep.name
            );
            reports.push(rep);
        }
    }
    for spec in &r.specs {
        let violations = envelope_violation_set(spec, &r.problem, &t_grid)?;
        if violations.is_empty() {
            println!(
                "envelope: {} never exceeds h(m,0,.) on the grid; truncation would be an identity (advisory)",
                spec.label()
            );
        } else {
            let truncation = analysis::build_dominating_truncation(spec, &r.problem)?;
            let path = r.out.join(format!("truncated_{}.json", spec.label()));
            write_text(&path, &serde_json::to_string_pretty(&truncation.spec)?)?;
            println!(
                "envelope: {} exceeds h(m,0,.) at {} grid points (first at t = {:.6}); dominating truncation -> {}",
                spec.label(),
                violations.len(),
                violations[0],
                path.display()
            );
        }
    }
    let suite = SuiteReport::new("dominance-analysis", reports);
    let path = r.out.join("dominance.json");
    write_text(&path, &suite.to_json())?;
    eprintln!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn print_suite(suite: &SuiteReport<f64>) {
    for rep in &suite.reports {
        println!(
            "[{}] {} — {} ({} violations)",
            if rep.passed { "PASS" } else { "FAIL" },
            rep.name,
            rep.grid_description,
            rep.violations.len()
        );
    }
    println!(
        "suite {}: {}",
        suite.suite,
        if suite.passed { "PASS" } else { "FAIL" }
    );
}

fn cmd_verify(suite: Suite, r: Resolved) -> Result<ExitCode> {
    let (report, extra_json): (SuiteReport<f64>, Option<serde_json::Value>) = match suite {
        Suite::Specfun => (specfun_suite(r.sample.seed, 1_000_000)?, None),
        Suite::HProperties => (h_properties_suite(&r.problem)?, None),
        Suite::R1Inequality => (r1_suite(2..=6, 2..=6)?, None),
        Suite::Decomposition => {
            let cfg = SampleConfig {
                replicates: r.sample.replicates.max(100_000),
                ..r.sample
            };
            (decomposition_suite(&r.problem, &cfg)?, None)
        }
        Suite::Dominance => {
            let out = dominance_suite(&r.problem)?;
            for rep in &out.exploratory {
                println!(
                    "[INFO] {} — {} ({} violations, not asserted)",
                    rep.name,
                    rep.grid_description,
                    rep.violations.len()
                );
            }
            if out.mle_truncation.is_identity_advisory() {
                println!("mle stays under the envelope on the grid; truncation is an identity (advisory)");
            } else {
                let path = r.out.join("truncated_mle.json");
                write_text(&path, &serde_json::to_string_pretty(&out.mle_truncation.spec)?)?;
                println!(
                    "mle exceeds the envelope at {} grid points; dominating truncation -> {}",
                    out.mle_truncation.violations.len(),
                    path.display()
                );
            }
            let extra = serde_json::json!({
                "exploratory": out.exploratory,
                "mle_truncation": {
                    "spec": out.mle_truncation.spec,
                    "violations": out.mle_truncation.violations,
                },
            });
            (out.report, Some(extra))
        }
    };
    print_suite(&report);

    let mut value = serde_json::to_value(&report)?;
    if let (Some(extra), Some(obj)) = (extra_json, value.as_object_mut()) {
        if let Some(extra_obj) = extra.as_object() {
            for (key, val) in extra_obj {
                obj.insert(key.clone(), val.clone());
            }
        }
    }
    let path = r.out.join(format!("verify_{}.json", report.suite));
    write_text(&path, &serde_json::to_string_pretty(&value)?)?;
    eprintln!("wrote {}", path.display());

    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_figures(r: Resolved) -> Result<ExitCode> {
    let configs: [(&str, u32, u32, f64, Option<f64>); 4] = [
        ("5_10_2", 5, 10, 2.0, None),
        ("5_20_2", 5, 20, 2.0, None),
        ("5_20_3", 5, 20, 3.0, None),
        ("3_20_3_a25", 3, 20, 3.0, Some(2.5)),
    ];
    let mut summary = String::new();
    summary.push_str(&format!(
        "gains of the boundary-uniform rule over the constrained MLE\nseed={} replicates={}\n\n",
        r.sample.seed, r.sample.replicates
    ));

    for (tag, p, k, m, alpha) in configs {
        let problem = Problem64::new(p, k, m)?;
        let mut specs = vec![
            EstimatorSpec64::Unbiased,
            EstimatorSpec64::Mle,
            EstimatorSpec64::boundary_uniform(0.0, &problem),
        ];
        if let Some(radius) = alpha {
            specs.push(EstimatorSpec64::BoundaryUniform { l: 0.0, radius });
        }
        let sub = Resolved {
            problem,
            specs: specs.clone(),
            lambda_grid: analysis::default_lambda_grid(&problem),
            t_grid: analysis::linspace(0.0, 20.0, 201),
            sample: r.sample,
            out: r.out.clone(),
            svg: true,
        };

        // Multiplier table and plot.
        let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
        let mut csv = String::new();
        for line in provenance(&format!("figures {tag}"), &sub) {
            csv.push_str(&format!("# {line}\n"));
        }
        csv.push_str(&format!("t,{}\n", labels.join(",")));
        let mut mult_series: Vec<Series> = labels
            .iter()
            .map(|l| Series {
                label: l.clone(),
                points: Vec::new(),
            })
            .collect();
        for &t in &sub.t_grid {
            let mut cells = vec![format_sig12(t)];
            for (j, spec) in specs.iter().enumerate() {
                let h = multiplier(spec, t, &problem)?;
                mult_series[j].points.push((t, h));
                cells.push(format_sig12(h));
            }
            csv.push_str(&cells.join(","));
            csv.push('\n');
        }
        write_text(&sub.out.join(format!("multipliers_{tag}.csv")), &csv)?;
        write_text(
            &sub.out.join(format!("multipliers_{tag}.svg")),
            &svg::line_chart(
                &format!("multipliers, p={p} k={k} m={m}"),
                "t",
                "h(t)",
                &mult_series,
            ),
        )?;

        // Risk curves, shared draws per grid point.
        let comments = provenance(&format!("figures {tag}"), &sub);
        let mut curves = Vec::new();
        for spec in &specs {
            let curve = risk_curve(spec, &problem, &sub.lambda_grid, &sub.sample)?;
            write_text(
                &sub.out.join(format!("risk_{tag}_{}.csv", spec.label())),
                &curve.to_csv_string(&comments),
            )?;
            curves.push(curve);
        }
        write_text(
            &sub.out.join(format!("risk_{tag}.svg")),
            &svg::line_chart(
                &format!("risks, p={p} k={k} m={m}"),
                "lambda",
                "risk",
                &curve_series(&curves),
            ),
        )?;

        // Gains summary at the center and the boundary.
        let mle = &curves[1];
        let bu = &curves[2];
        let last = mle.points.len() - 1;
        let gain = |i: usize| {
            100.0 * (mle.points[i].estimate - bu.points[i].estimate) / mle.points[i].estimate
        };
        summary.push_str(&format!(
            "({p},{k},{m}): gain at lambda=0: {:.1}%   gain at lambda={m}: {:.1}%\n",
            gain(0),
            gain(last)
        ));
        if alpha.is_some() {
            let a_curve = &curves[3];
            let gain_alpha = |i: usize| {
                100.0 * (bu.points[i].estimate - a_curve.points[i].estimate)
                    / bu.points[i].estimate
            };
            summary.push_str(&format!(
                "({p},{k},{m}) radius-2.5 vs full-radius rule: gain at lambda=0: {:.1}%   at lambda={m}: {:.1}%\n",
                gain_alpha(0),
                gain_alpha(last)
            ));
        }
        println!("figure bundle {tag} written");
    }
    write_text(&r.out.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}
