use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mctool::linalg::algebra_closure_dim;
use mctool::pipeline::{load_tuple, parse_pipeline, run, scenario_g2, scenario_sl, scenario_so6, Report};
use mctool::recognition::{g2_certificate, jordan_report};
use mctool::tuples::MonodromyTuple;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mctool",
    about = "Exact middle convolution engine for monodromy tuples over cyclotomic fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    G2,
    So6,
    Sl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a pipeline from a JSON file
    Run {
        spec: PathBuf,
        /// Write the machine-readable report to this path
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also print per-step Jordan data
        #[arg(long)]
        verbose: bool,
    },
    /// Run a built-in scenario
    Scenario {
        name: ScenarioName,
        /// Dihedral parameter for the sl scenario (odd, >= 3)
        #[arg(long, default_value_t = 3)]
        m: u64,
        /// Puncture count for the sl scenario
        #[arg(long, default_value_t = 5)]
        r: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
    /// Run selected checks against a stored tuple
    Check {
        tuple: PathBuf,
        /// Print the Jordan data of every entry
        #[arg(long)]
        jordan: bool,
        /// Verify absolute irreducibility via the algebra closure
        #[arg(long)]
        irreducible: bool,
        /// Report the invariant bilinear forms
        #[arg(long)]
        forms: bool,
        /// Verify the G2 certificate
        #[arg(long)]
        g2: bool,
        /// Compute the rigidity index
        #[arg(long)]
        rigidity: bool,
    },
}

fn print_report(report: &Report, verbose: bool) {
    println!(
        "field Q(zeta_{}), genericity assumed: {}",
        report.field_order, report.generic_assumed
    );
    for step in &report.steps {
        println!(
            "step {:<20} {:<18} rank {:>3}  punctures {}",
            step.output, step.op, step.rank, step.punctures
        );
        if verbose {
            if let Some(jordan) = &step.jordan {
                for (i, entry) in jordan.iter().enumerate() {
                    let blocks: Vec<String> = entry
                        .iter()
                        .map(|(ev, l)| format!("J({}, {})", ev, l))
                        .collect();
                    println!("    entry {}: {}", i + 1, blocks.join(" + "));
                }
            }
        }
    }
    for check in &report.checks {
        println!(
            "{} {:<35} {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    println!(
        "{} ({} ms)",
        if report.all_passed() {
            "all checks passed"
        } else {
            "some checks FAILED"
        },
        report.wall_time_ms
    );
}

fn finish(report: &Report, out: Option<&PathBuf>, verbose: bool) -> Result<bool> {
    print_report(report, verbose);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(report)?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.all_passed())
}

fn check_tuple(
    t: &MonodromyTuple,
    jordan: bool,
    irreducible: bool,
    forms: bool,
    g2: bool,
    rigidity: bool,
) -> bool {
    if !(jordan || irreducible || forms || g2 || rigidity) {
        println!(
            "rank {} tuple with {} punctures over Q(zeta_{}); no checks requested",
            t.rank(),
            t.puncture_count(),
            t.order()
        );
        return true;
    }
    let mut ok = true;
    let mut record = |name: &str, pass: bool, detail: String| {
        println!("{} {:<14} {}", if pass { "PASS" } else { "FAIL" }, name, detail);
        ok &= pass;
    };
    if jordan {
        match jordan_report(t) {
            Ok(rep) => {
                let text: Vec<String> = rep.iter().map(|j| j.to_string()).collect();
                record("jordan", true, text.join("; "));
            }
            Err(e) => record("jordan", false, e.to_string()),
        }
    }
    if irreducible {
        let n = t.rank();
        match algebra_closure_dim(t.entries()) {
            Ok(dim) => record(
                "irreducible",
                dim == n * n,
                format!("algebra closure dim {} of {}", dim, n * n),
            ),
            Err(e) => record("irreducible", false, e.to_string()),
        }
    }
    if forms {
        match mctool::linalg::invariant_bilinear_forms(&t.all_entries()) {
            Ok(f) => record(
                "forms",
                true,
                format!(
                    "space dim {}, symmetric nondegenerate: {}, alternating nondegenerate: {}",
                    f.space.dim(),
                    f.symmetric_nondegenerate.is_some(),
                    f.alternating_nondegenerate.is_some()
                ),
            ),
            Err(e) => record("forms", false, e.to_string()),
        }
    }
    if g2 {
        match g2_certificate(t) {
            Ok(cert) => record("g2", cert.holds(), format!("{:?}", cert)),
            Err(e) => record("g2", false, e.to_string()),
        }
    }
    if rigidity {
        match t.rigidity_index() {
            Ok(idx) => record("rigidity", true, format!("rigidity index {}", idx)),
            Err(e) => record("rigidity", false, e.to_string()),
        }
    }
    ok
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let ok = match cli.cmd {
        Cmd::Run {
            spec,
            report,
            verbose,
        } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let parsed = parse_pipeline(&text)?;
            let rep = run(&parsed)?;
            finish(&rep, report.as_ref(), verbose)?
        }
        Cmd::Scenario {
            name,
            m,
            r,
            report,
            verbose,
        } => {
            let spec = match name {
                ScenarioName::G2 => scenario_g2(),
                ScenarioName::So6 => scenario_so6(),
                ScenarioName::Sl => scenario_sl(m, r)?,
            };
            let rep = run(&spec)?;
            finish(&rep, report.as_ref(), verbose)?
        }
        Cmd::Check {
            tuple,
            jordan,
            irreducible,
            forms,
            g2,
            rigidity,
        } => {
            let t = load_tuple(&tuple)?;
            check_tuple(&t, jordan, irreducible, forms, g2, rigidity)
        }
    };
    if !ok {
        bail!("checks failed");
    }
    Ok(())
}
