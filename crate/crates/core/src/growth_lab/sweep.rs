use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::constants::{humbert_volume, weight_band};
use super::pipeline::{measure, ExperimentRecord, SubgroupData};
use crate::bianchi::SubgroupSpec;
use crate::error::{Error, Result};
use crate::quad_arith::{Ideal, QuadRing};

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "TORSIONLAB_THREADS";

pub const CSV_HEADER: [&str; 12] = [
    "D",
    "ideal",
    "norm",
    "index",
    "kappa",
    "m",
    "h1_rank",
    "log_torsion",
    "ratio",
    "bound_lower",
    "bound_upper",
    "checks_passed",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IdealSource {
    MaxNorm(i64),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SweepKind {
    Principal,
    /// `Γ_0(𝔞) ∩ Γ(base)`.
    HeckeIntersect {
        base: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub d: i64,
    pub ideals: IdealSource,
    pub weights: Vec<usize>,
    pub kind: SweepKind,
    /// `None` reads the environment, then falls back to the available parallelism.
    pub threads: Option<usize>,
    pub csv_out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn principal(d: i64, max_norm: i64, weights: Vec<usize>) -> Self {
        SweepConfig {
            d,
            ideals: IdealSource::MaxNorm(max_norm),
            weights,
            kind: SweepKind::Principal,
            threads: None,
            csv_out: None,
            json_out: None,
        }
    }
}

/// A pair that produced no record.
#[derive(Clone, Debug, Serialize)]
pub struct SweepFailure {
    pub subgroup: String,
    pub m: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<SweepFailure>,
}

pub fn thread_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|s| s.trim().parse().ok())
        })
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn specs(ring: &QuadRing, config: &SweepConfig) -> Result<Vec<SubgroupSpec>> {
    let ideals = match &config.ideals {
        IdealSource::MaxNorm(n) => Ideal::enumerate_up_to(ring, *n),
        IdealSource::List(list) => list
            .iter()
            .map(|s| Ideal::parse(ring, s))
            .collect::<Result<_>>()?,
    };
    Ok(match &config.kind {
        SweepKind::Principal => ideals.into_iter().map(SubgroupSpec::principal).collect(),
        SweepKind::HeckeIntersect { base } => {
            let base = Ideal::parse(ring, base)?;
            ideals
                .into_iter()
                .map(|i| SubgroupSpec::hecke_intersect(i, base.clone()))
                .collect()
        }
    })
}

/// One record per `(ideal, m)`; a failing pair is reported and does not stop the sweep.
/// Records come back in ideal order, then weight order, whatever the worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let ring = QuadRing::new(config.d)?;
    let specs = specs(&ring, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(config.threads))
        .build()
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let per_spec: Vec<(Vec<ExperimentRecord>, Vec<SweepFailure>)> = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| {
                let mut records = Vec::new();
                let mut failures = Vec::new();
                let data = match SubgroupData::build(&ring, spec) {
                    Ok(d) => d,
                    Err(e) => {
                        failures.push(SweepFailure {
                            subgroup: spec.label(),
                            m: None,
                            reason: e.to_string(),
                        });
                        return (records, failures);
                    }
                };
                for &m in &config.weights {
                    match measure(&data, m) {
                        Ok(r) => records.push(r),
                        Err(e) => failures.push(SweepFailure {
                            subgroup: spec.label(),
                            m: Some(m),
                            reason: e.to_string(),
                        }),
                    }
                }
                log::info!("{}: {} records", spec.label(), records.len());
                (records, failures)
            })
            .collect()
    });
    let (records, failures) =
        per_spec
            .into_iter()
            .fold((Vec::new(), Vec::new()), |(mut r, mut f), (a, b)| {
                r.extend(a);
                f.extend(b);
                (r, f)
            });
    let report = SweepReport {
        config: config.clone(),
        records,
        failures,
    };
    if let Some(p) = &config.csv_out {
        write_csv(&report.records, std::fs::File::create(p)?)?;
    }
    if let Some(p) = &config.json_out {
        std::fs::write(p, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12}")
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.d.to_string(),
            r.ideal.clone(),
            r.norm.to_string(),
            r.index.to_string(),
            r.kappa.to_string(),
            r.m.to_string(),
            r.h1_rank.to_string(),
            fmt_f(r.log_torsion),
            fmt_f(r.ratio),
            fmt_f(r.bound_lower),
            fmt_f(r.bound_upper),
            r.checks_passed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[ExperimentRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub m: usize,
    pub h1_rank: usize,
    pub log_torsion: f64,
    /// `log |H_1 tor| / m²`.
    pub normalized: f64,
    pub in_band: bool,
}

/// Torsion along weights on a fixed manifold against `[vol/2π, vol/π]`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub d: i64,
    pub subgroup: String,
    pub volume: f64,
    pub band_lower: f64,
    pub band_upper: f64,
    pub entries: Vec<WeightEntry>,
}

pub fn weight_sweep(d: i64, spec: &SubgroupSpec, m_max: usize) -> Result<WeightReport> {
    let ring = QuadRing::new(d)?;
    let data = SubgroupData::build(&ring, spec)?;
    let volume = data.psl_index() as f64 * humbert_volume(d)?;
    let (band_lower, band_upper) = weight_band(volume);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(None))
        .build()
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let entries = pool.install(|| {
        (1..=m_max)
            .into_par_iter()
            .map(|m| {
                let h = data.homology(m)?;
                let normalized = h.log_torsion_order / (m * m) as f64;
                Ok(WeightEntry {
                    m,
                    h1_rank: h.free_rank,
                    log_torsion: h.log_torsion_order,
                    normalized,
                    in_band: (band_lower..=band_upper).contains(&normalized),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(WeightReport {
        d,
        subgroup: spec.label(),
        volume,
        band_lower,
        band_upper,
        entries,
    })
}

pub fn write_weight_csv<W: Write>(report: &WeightReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "D",
        "subgroup",
        "m",
        "h1_rank",
        "log_torsion",
        "normalized",
        "band_lower",
        "band_upper",
        "in_band",
    ])?;
    for e in &report.entries {
        w.write_record([
            report.d.to_string(),
            report.subgroup.clone(),
            e.m.to_string(),
            e.h1_rank.to_string(),
            fmt_f(e.log_torsion),
            fmt_f(e.normalized),
            fmt_f(report.band_lower),
            fmt_f(report.band_upper),
            e.in_band.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_list_is_an_empty_report() {
        let mut c = SweepConfig::principal(1, 0, vec![2]);
        c.ideals = IdealSource::List(Vec::new());
        let r = run_sweep(&c).unwrap();
        assert!(r.records.is_empty() && r.failures.is_empty());
        assert_eq!(csv_string(&r.records).unwrap().trim(), CSV_HEADER.join(","));
    }

    #[test]
    fn unit_ideal_is_a_failure_not_an_abort() {
        let mut c = SweepConfig::principal(1, 0, vec![1]);
        c.ideals = IdealSource::List(vec!["1".into(), "2+i".into()]);
        c.threads = Some(2);
        let r = run_sweep(&c).unwrap();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.records.len(), 1);
        assert_eq!(
            r.records[0].ideal,
            Ideal::parse(&QuadRing::new(1).unwrap(), "2+i")
                .unwrap()
                .label()
        );
    }

    #[test]
    fn thread_count_prefers_the_explicit_value() {
        assert_eq!(thread_count(Some(3)), 3);
        assert!(thread_count(None) >= 1);
    }
}
