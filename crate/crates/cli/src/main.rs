use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use torsionlab::bianchi::{parabolic_lattice, unimodular_shape, SubgroupSpec};
use torsionlab::growth_lab::{
    measure, predicted_bounds, run_suite, run_sweep, weight_sweep, write_csv, write_weight_csv,
    SubgroupData, Suite, SweepConfig,
};
use torsionlab::quad_arith::{Ideal, QuadRing};
use torsionlab::Result;

#[derive(Parser)]
#[command(
    name = "torsionlab",
    version,
    about = "Torsion homology of congruence subgroups of Bianchi groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic constants and predicted growth bounds.
    Predict {
        #[arg(long = "D")]
        d: i64,
        #[arg(long)]
        m: usize,
    },
    /// H_1 of one subgroup with Sym^m coefficients, with all exact checks.
    Homology {
        #[arg(long = "D")]
        d: i64,
        /// `principal:<ideal>` or `hecke-intersect:<ideal>:base=<ideal>`.
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Principal congruence subgroups up to a norm, one CSV row per (ideal, m).
    Sweep {
        #[arg(long = "D")]
        d: i64,
        #[arg(long)]
        max_norm: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        /// CSV path; the JSON report goes next to it with a `.json` extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Torsion along weights 1..=m-max for a fixed subgroup.
    Weights {
        #[arg(long = "D")]
        d: i64,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cusp lattices and their shapes for principal levels up to a norm.
    CuspShapes {
        #[arg(long = "D")]
        d: i64,
        #[arg(long)]
        max_norm: i64,
    },
    /// Built-in self checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

fn json_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn cusp_shapes(d: i64, max_norm: i64) -> Result<serde_json::Value> {
    let ring = QuadRing::new(d)?;
    let mut levels = Vec::new();
    for ideal in Ideal::enumerate_up_to(&ring, max_norm) {
        let spec = SubgroupSpec::principal(ideal);
        let Ok(data) = SubgroupData::build(&ring, &spec) else {
            continue;
        };
        let mut cusps = Vec::new();
        for c in &data.cusps {
            let l = parabolic_lattice(&spec, c)?;
            let shape = unimodular_shape(&l)?;
            cusps.push(serde_json::json!({
                "representative": [c.representative.0.to_string(), c.representative.1.to_string()],
                "lattice": l,
                "covolume": l.covolume(),
                "shape": shape,
            }));
        }
        levels.push(serde_json::json!({
            "subgroup": spec.label(),
            "norm": spec.ideal.norm(),
            "index": data.index(),
            "kappa": data.cusps.len(),
            "cusps": cusps,
        }));
    }
    Ok(serde_json::json!({ "D": d, "levels": levels }))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Predict { d, m } => print_json(&predicted_bounds(d, m)?)?,
        Command::Homology {
            d,
            subgroup,
            m,
            format,
        } => {
            let ring = QuadRing::new(d)?;
            let data = SubgroupData::build(&ring, &SubgroupSpec::parse(&ring, &subgroup)?)?;
            let record = measure(&data, m)?;
            match format {
                Format::Json => print_json(&record)?,
                Format::Csv => write_csv(std::slice::from_ref(&record), std::io::stdout())?,
            }
            return Ok(record.checks_passed);
        }
        Command::Sweep {
            d,
            max_norm,
            m,
            out,
        } => {
            let mut config = SweepConfig::principal(d, max_norm, m);
            config.csv_out = Some(out.clone());
            config.json_out = Some(json_path(&out));
            let report = run_sweep(&config)?;
            for f in &report.failures {
                eprintln!("skipped {} (m = {:?}): {}", f.subgroup, f.m, f.reason);
            }
            eprintln!(
                "{} records written to {}",
                report.records.len(),
                out.display()
            );
            return Ok(report.records.iter().all(|r| r.checks_passed));
        }
        Command::Weights {
            d,
            subgroup,
            m_max,
            out,
        } => {
            let ring = QuadRing::new(d)?;
            let report = weight_sweep(d, &SubgroupSpec::parse(&ring, &subgroup)?, m_max)?;
            write_weight_csv(&report, std::fs::File::create(&out)?)?;
            std::fs::write(json_path(&out), serde_json::to_string_pretty(&report)?)?;
            eprintln!(
                "{} weights written to {}",
                report.entries.len(),
                out.display()
            );
        }
        Command::CuspShapes { d, max_norm } => print_json(&cusp_shapes(d, max_norm)?)?,
        Command::Verify { suite } => {
            let checks = run_suite(suite);
            for c in &checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                if c.detail.is_empty() {
                    println!("{mark} [{}] {}", c.suite, c.name);
                } else {
                    println!("{mark} [{}] {}: {}", c.suite, c.name, c.detail);
                }
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
