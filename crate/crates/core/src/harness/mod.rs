//! Batch experiments: bounds, procedure runs and their reports.
//!
//! Output layout under the chosen directory:
//!
//! ```text
//! results.csv      instance, procedure, n0, m0, n_final, m_final, outer_iters, fixed0, fixed1
//! timings.csv      instance, procedure, wall_ms
//! averages.csv     set, procedure, instances, pct_reduction
//! rounds.csv       per-round statistics of every run
//! ubs.txt          the bounds used, in upper-bound file format
//! traces/<instance>__<procedure>.csv
//! figures/<instance>__<procedure>.svg, figures/<instance>__rounds.svg
//! ```
//!
//! Everything except `timings.csv` is a pure function of the inputs.

mod greedy;
pub mod svg;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use greedy::greedy_ub;

use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::oracle;
use crate::orlib::UbTable;
use crate::pipeline::{run_procedure, set_averages, NamedInstance, PipelineConfig, Procedure, ProcedureResult, SuiteRow};
use svg::Series;

#[derive(Debug, Clone)]
pub enum UbSource {
    Table(UbTable),
    Greedy,
    /// Exhaustive search; small instances only.
    Exact,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub ub_source: UbSource,
    pub procedures: Vec<Procedure>,
    pub pipeline: PipelineConfig,
    pub out_dir: PathBuf,
    /// Fan-out over (instance, procedure) pairs.
    pub exec: Execution,
    pub write_figures: bool,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            ub_source: UbSource::Greedy,
            procedures: Procedure::ALL.to_vec(),
            pipeline: PipelineConfig::default(),
            out_dir: out_dir.into(),
            exec: Execution::default(),
            write_figures: true,
        }
    }
}

/// Looks up or computes an upper bound for every instance.
pub fn resolve_ubs(instances: &[NamedInstance], source: &UbSource) -> Result<UbTable> {
    let mut table = UbTable::new();
    for named in instances {
        let ub = match source {
            UbSource::Table(t) => t.get(&named.name).ok_or_else(|| Error::MissingUb(named.name.clone()))?,
            UbSource::Greedy => greedy_ub(&named.instance).0,
            UbSource::Exact => oracle::exact_optimum(&named.instance)?.0,
        };
        // an instance with no rows has optimum 0, which a bound file cannot hold
        if ub > 0.0 {
            table.insert(named.name.clone(), ub)?;
        } else {
            table.insert(named.name.clone(), f64::MIN_POSITIVE)?;
        }
    }
    Ok(table)
}

/// Runs every requested procedure on every instance and writes the reports.
/// Rows of runs that finished are written even when another run fails; the
/// first failure is then returned.
pub fn run(instances: &[NamedInstance], cfg: &RunConfig) -> Result<Vec<SuiteRow>> {
    let ubs = resolve_ubs(instances, &cfg.ub_source)?;
    let jobs: Vec<(usize, Procedure)> = (0..instances.len())
        .flat_map(|k| cfg.procedures.iter().map(move |&p| (k, p)))
        .collect();
    let outcomes = map_slice(&jobs, cfg.exec, |&(k, p)| {
        let named = &instances[k];
        let ub = ubs.get(&named.name).expect("resolved above");
        let r = run_procedure(&named.instance, ub, p, &cfg.pipeline);
        if let Ok(res) = &r {
            log::info!(
                "{} {}: ({}, {}) -> ({}, {}) [{}]",
                named.name,
                p,
                res.n0,
                res.m0,
                res.n_final(),
                res.m_final(),
                res.outer_iterations
            );
        }
        r
    });
    let mut rows = Vec::new();
    let mut first_err = None;
    for (&(k, p), out) in jobs.iter().zip(outcomes) {
        match out {
            Ok(result) => rows.push(SuiteRow {
                instance: instances[k].name.clone(),
                ub: ubs.get(&instances[k].name).expect("resolved above"),
                result,
            }),
            Err(e) => {
                log::error!("{} {}: {e}", instances[k].name, p);
                first_err.get_or_insert(e);
            }
        }
    }
    write_reports(&cfg.out_dir, &rows, &ubs, cfg.write_figures)?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

pub fn write_reports(dir: &Path, rows: &[SuiteRow], ubs: &UbTable, figures: bool) -> Result<()> {
    fs::create_dir_all(dir.join("traces"))?;
    let mut results = writer(&dir.join("results.csv"))?;
    results.write_record([
        "instance",
        "procedure",
        "n0",
        "m0",
        "n_final",
        "m_final",
        "outer_iters",
        "fixed0",
        "fixed1",
    ])?;
    let mut timings = writer(&dir.join("timings.csv"))?;
    timings.write_record(["instance", "procedure", "wall_ms"])?;
    let mut rounds = writer(&dir.join("rounds.csv"))?;
    rounds.write_record([
        "instance",
        "procedure",
        "outer",
        "n_start",
        "m_start",
        "ub",
        "lp_value",
        "pivots",
        "fixed_by_lp",
        "fixed_by_dre",
        "rows_dominated",
        "fixed_empty",
    ])?;
    for row in rows {
        let r = &row.result;
        let name = r.procedure.name();
        results.write_record([
            row.instance.clone(),
            name.to_string(),
            r.n0.to_string(),
            r.m0.to_string(),
            r.n_final().to_string(),
            r.m_final().to_string(),
            r.outer_iterations.to_string(),
            r.fixed0().to_string(),
            r.fixed1().to_string(),
        ])?;
        timings.write_record([
            row.instance.clone(),
            name.to_string(),
            format!("{:.3}", r.wall_time.as_secs_f64() * 1e3),
        ])?;
        for s in &r.rounds {
            rounds.write_record([
                row.instance.clone(),
                name.to_string(),
                s.outer.to_string(),
                s.n_start.to_string(),
                s.m_start.to_string(),
                s.ub.to_string(),
                s.lp_value.to_string(),
                s.pivots.to_string(),
                s.fixed_by_lp.to_string(),
                s.fixed_by_dre.to_string(),
                s.rows_dominated.to_string(),
                s.fixed_empty.to_string(),
            ])?;
        }
        write_trace(&dir.join("traces").join(trace_file(&row.instance, r.procedure, "csv")), r)?;
    }
    results.flush()?;
    timings.flush()?;
    rounds.flush()?;

    let mut avg = writer(&dir.join("averages.csv"))?;
    avg.write_record(["set", "procedure", "instances", "pct_reduction"])?;
    for a in set_averages(rows) {
        avg.write_record([
            a.set,
            a.procedure.name().to_string(),
            a.instances.to_string(),
            format!("{:.4}", a.pct_reduction),
        ])?;
    }
    avg.flush()?;

    let mut ub_text = String::from("# instance upper_bound\n");
    for (name, ub) in ubs.iter() {
        ub_text.push_str(&format!("{name} {ub}\n"));
    }
    fs::write(dir.join("ubs.txt"), ub_text)?;

    if figures {
        write_figures(&dir.join("figures"), rows)?;
    }
    Ok(())
}

pub fn trace_file(instance: &str, p: Procedure, ext: &str) -> String {
    format!("{}__{}.{ext}", file_stem(instance), p.short())
}

fn write_trace(path: &Path, r: &ProcedureResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["outer", "iteration", "zeta", "fixed", "gap_pct", "offset"])?;
    for t in &r.trace {
        w.write_record([
            t.outer.to_string(),
            t.iteration.to_string(),
            t.zeta.to_string(),
            t.fixed.to_string(),
            t.gap_pct.to_string(),
            t.offset.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_figures(dir: &Path, rows: &[SuiteRow]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for row in rows {
        let r = &row.result;
        if r.trace.is_empty() {
            continue;
        }
        // iterations are numbered consecutively across rounds
        let mut fixed = Vec::with_capacity(r.trace.len());
        let mut gap = Vec::with_capacity(r.trace.len());
        for (k, t) in r.trace.iter().enumerate() {
            fixed.push((k as f64, t.fixed as f64));
            gap.push((k as f64, t.gap_pct));
        }
        let title = format!("{} {}", row.instance, r.procedure.name());
        let chart = svg::line_chart(
            &title,
            "simplex iteration",
            "fixed variables / % of initial gap",
            &[
                Series {
                    label: "fixed variables",
                    points: fixed,
                },
                Series {
                    label: "gap %",
                    points: gap,
                },
            ],
        );
        let mut f = BufWriter::new(File::create(dir.join(trace_file(&row.instance, r.procedure, "svg")))?);
        f.write_all(chart.as_bytes())?;
    }

    // per-round LP fixings of the iterative procedures, one chart per instance
    let mut start = 0;
    while start < rows.len() {
        let name = &rows[start].instance;
        let end = start + rows[start..].iter().take_while(|r| &r.instance == name).count();
        let iter: Vec<&ProcedureResult> = rows[start..end]
            .iter()
            .map(|r| &r.result)
            .filter(|r| r.procedure.is_iterative())
            .collect();
        if !iter.is_empty() {
            let depth = iter.iter().map(|r| r.rounds.len()).max().unwrap_or(0);
            let groups: Vec<Vec<f64>> = (0..depth)
                .map(|k| {
                    iter.iter()
                        .map(|r| r.rounds.get(k).map_or(0.0, |s| s.fixed_by_lp as f64))
                        .collect()
                })
                .collect();
            let labels: Vec<&str> = iter.iter().map(|r| r.procedure.name()).collect();
            let chart = svg::bar_chart(
                &format!("{name}: variables fixed per round"),
                "round",
                "variables fixed",
                &labels,
                &groups,
            );
            fs::write(dir.join(format!("{}__rounds.svg", file_stem(name))), chart)?;
        }
        start = end;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;

    fn named(name: &str, inst: crate::instance::ScpInstance) -> NamedInstance {
        NamedInstance {
            name: name.into(),
            instance: inst,
        }
    }

    #[test]
    fn writes_all_reports() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(dir.path());
        cfg.ub_source = UbSource::Exact;
        let rows = run(&[named("t1", t1()), named("t2", t2())], &cfg).unwrap();
        assert_eq!(rows.len(), 10);
        let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(results.lines().count(), 11);
        assert!(results.contains("t1,SF+DRE,3,2,0,0,1,2,1"));
        for f in ["timings.csv", "averages.csv", "rounds.csv", "ubs.txt", "traces/t1__dpf.csv", "figures/t1__dpf.svg", "figures/t1__rounds.svg"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        let ubs = crate::orlib::read_ub_table(dir.path().join("ubs.txt")).unwrap();
        assert_eq!(ubs.get("t2"), Some(3.0));
    }

    #[test]
    fn missing_bound_fails_before_running() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(dir.path());
        cfg.ub_source = UbSource::Table(UbTable::new());
        assert!(matches!(run(&[named("t1", t1())], &cfg), Err(Error::MissingUb(_))));
    }

    #[test]
    fn partial_results_are_flushed() {
        let dir = tempfile::tempdir().unwrap();
        let mut table = UbTable::new();
        table.insert("t1", 1.0).unwrap();
        table.insert("bad", 0.5).unwrap();
        let mut cfg = RunConfig::new(dir.path());
        cfg.ub_source = UbSource::Table(table);
        cfg.procedures = vec![Procedure::RcfDre];
        let err = run(&[named("t1", t1()), named("bad", t1())], &cfg);
        assert!(matches!(err, Err(Error::InvalidBound { .. })));
        let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(results.lines().count(), 2);
    }
}
