//! Command implementations. Every command is a pure function of
//! (config, seed): the data outputs it writes are byte-identical across
//! reruns.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::json;

use srs::diagnose::{ising_diagnose, DiagnoseConfig};
use srs::exact::{exact_rank_pmf, sup_norm_to_uniform};
use srs::models::IsingKernel;
use srs::power::{
    estimate_power, weight_sweep, ExperimentConfig, SweepConfig as LibSweepConfig, SweepMetric,
};
use srs::rank::{rank_dataset, RankHistogram};
use srs::rng::derive_stream_key;
use srs::uniformity::{binomial_normal_test, chisq_uniformity, Decision, TestReport};
use srs::{DiscreteModel, RandomSource, TotalOrder};

use crate::config::{
    ExactDistConfig, IsingDiagnoseConfig, KernelKind, MethodKind, MetricKind,
    ObservationsSpec, PowerConfig, SweepConfig, TestConfig,
};
use crate::error::{CliError, CliResult};
use crate::iofmt;
use crate::registry::{self, build_model, DomainModel};

/// What a finished command reports back to `main`.
pub struct CommandOutcome {
    pub exit_code: u8,
    pub outputs: Vec<PathBuf>,
}

const OBSERVATION_STREAM: u64 = 0;
const RANK_STREAM: u64 = 1;

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Dispatch a (p, q, ordering-name) triple into a typed closure, building
/// the `optimal` ordering from the pair when requested.
macro_rules! with_model_pair {
    ($p:expr, $q:expr, $name:expr, |$pm:ident, $qm:ident, $ord:ident| $body:expr) => {{
        match (build_model($p)?, build_model($q)?) {
            (DomainModel::Int($pm), DomainModel::Int($qm)) => {
                let $ord = registry::int_order($name, &$pm, Some(&$qm))?;
                $body
            }
            (DomainModel::Bits($pm), DomainModel::Bits($qm)) => {
                let $ord = registry::bits_order($name, &$pm, Some(&$qm))?;
                $body
            }
            (DomainModel::Parts($pm), DomainModel::Parts($qm)) => {
                let $ord = registry::parts_order($name, &$pm, Some(&$qm))?;
                $body
            }
            (DomainModel::Lattice($pm), DomainModel::Lattice($qm)) => {
                let $ord = registry::lattice_order_by_name($name)?;
                $body
            }
            (a, b) => Err(CliError::Config(format!(
                "p and q live in different domains: {} vs {}",
                a.domain_name(),
                b.domain_name()
            ))),
        }
    }};
}

// ---------------------------------------------------------------- test --

fn run_test_typed<T: Clone + Send + Sync>(
    candidate: Arc<dyn DiscreteModel<T>>,
    order: Arc<dyn TotalOrder<T>>,
    observations: Vec<T>,
    cfg: &TestConfig,
    seed: u64,
) -> CliResult<(TestReport, RankHistogram, usize)> {
    let n = observations.len();
    let root = RandomSource::new(seed);
    let hist = rank_dataset(
        &observations,
        &candidate,
        cfg.m,
        &order,
        &root.child(RANK_STREAM),
    )?;
    let report = match cfg.method {
        MethodKind::Chisq => chisq_uniformity(&hist, cfg.alpha)?,
        MethodKind::BinomialNormal => binomial_normal_test(&hist, cfg.alpha)?,
    };
    Ok((report, hist, n))
}

fn sample_observations<T>(
    model: &Arc<dyn DiscreteModel<T>>,
    n: usize,
    seed: u64,
) -> CliResult<Vec<T>> {
    if n == 0 {
        return Err(CliError::Config("observation count must be >= 1".into()));
    }
    let mut rng = RandomSource::new(seed).child(OBSERVATION_STREAM);
    (0..n)
        .map(|_| model.sample(&mut rng).map_err(CliError::from))
        .collect()
}

pub fn run_test(config_path: &Path, seed: u64, out_dir: &Path) -> CliResult<CommandOutcome> {
    let cfg: TestConfig = crate::config::load_config(config_path)?;
    let candidate = build_model(&cfg.model)?;

    // Resolve observations + ordering within the candidate's domain.
    let (report, hist, n) = match candidate {
        DomainModel::Int(p) => {
            let (obs, q_model) = match &cfg.observations {
                ObservationsSpec::File { file } => (iofmt::read_integers(file)?, None),
                ObservationsSpec::Model { model, n } => match build_model(model)? {
                    DomainModel::Int(q) => (sample_observations(&q, *n, seed)?, Some(q)),
                    other => return Err(domain_clash("observations", &other, "integers")),
                },
            };
            let order = registry::int_order(&cfg.ordering, &p, q_model.as_ref())?;
            run_test_typed(p, order, obs, &cfg, seed)?
        }
        DomainModel::Bits(p) => {
            let (obs, q_model) = match &cfg.observations {
                ObservationsSpec::File { file } => (iofmt::read_bitstrings(file)?, None),
                ObservationsSpec::Model { model, n } => match build_model(model)? {
                    DomainModel::Bits(q) => (sample_observations(&q, *n, seed)?, Some(q)),
                    other => return Err(domain_clash("observations", &other, "bit strings")),
                },
            };
            let order = registry::bits_order(&cfg.ordering, &p, q_model.as_ref())?;
            run_test_typed(p, order, obs, &cfg, seed)?
        }
        DomainModel::Parts(p) => {
            let (obs, q_model) = match &cfg.observations {
                ObservationsSpec::File { file } => (iofmt::read_partitions(file)?, None),
                ObservationsSpec::Model { model, n } => match build_model(model)? {
                    DomainModel::Parts(q) => (sample_observations(&q, *n, seed)?, Some(q)),
                    other => return Err(domain_clash("observations", &other, "partitions")),
                },
            };
            let order = registry::parts_order(&cfg.ordering, &p, q_model.as_ref())?;
            run_test_typed(p, order, obs, &cfg, seed)?
        }
        DomainModel::Lattice(p) => {
            let obs = match &cfg.observations {
                ObservationsSpec::File { file } => iofmt::read_lattices(file)?,
                ObservationsSpec::Model { model, n } => match build_model(model)? {
                    DomainModel::Lattice(q) => sample_observations(&q, *n, seed)?,
                    other => return Err(domain_clash("observations", &other, "lattices")),
                },
            };
            let order = registry::lattice_order_by_name(&cfg.ordering)?;
            run_test_typed(p, order, obs, &cfg, seed)?
        }
    };

    let decision = report.decision;
    let report_json = json!({
        "schema": crate::config::SCHEMA_VERSION,
        "command": "test",
        "ordering": cfg.ordering,
        "m": cfg.m,
        "n": n,
        "seed": seed,
        "report": report,
    });
    let report_path = out_dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&report_json).expect("report serializes");
    text.push('\n');
    iofmt::write_file(&report_path, &text)?;

    let rank_rows: Vec<Vec<String>> = hist
        .counts()
        .iter()
        .enumerate()
        .map(|(r, &c)| vec![r.to_string(), c.to_string()])
        .collect();
    let ranks_path = out_dir.join("ranks.csv");
    iofmt::write_file(&ranks_path, &iofmt::csv_text("rank,count", &rank_rows))?;

    println!(
        "test: n={n} m={} statistic={:.6} p={:.6} -> {}",
        hist.m(),
        report.statistic,
        report.p_value,
        match decision {
            Decision::Reject => "reject",
            Decision::NotReject => "not_reject",
        }
    );
    Ok(CommandOutcome {
        exit_code: match decision {
            Decision::Reject => 1,
            Decision::NotReject => 0,
        },
        outputs: vec![report_path, ranks_path],
    })
}

fn domain_clash(what: &str, got: &DomainModel, want: &str) -> CliError {
    CliError::Config(format!(
        "{what} live in {} but the candidate model is over {want}",
        got.domain_name()
    ))
}

// ---------------------------------------------------------- exact-dist --

pub fn run_exact_dist(config_path: &Path, seed: u64, out_dir: &Path) -> CliResult<CommandOutcome> {
    let cfg: ExactDistConfig = crate::config::load_config(config_path)?;
    let pmf = with_model_pair!(&cfg.p, &cfg.q, &cfg.ordering, |p, q, order| {
        Ok::<_, CliError>(exact_rank_pmf(&p, &q, &order, cfg.m)?)
    })?;
    let uniform = 1.0 / (f64::from(cfg.m) + 1.0);
    let rows: Vec<Vec<String>> = pmf
        .probs
        .iter()
        .enumerate()
        .map(|(r, &prob)| {
            vec![
                r.to_string(),
                fmt_f64(prob),
                fmt_f64(uniform),
                fmt_f64((prob - uniform).abs()),
            ]
        })
        .collect();
    let path = out_dir.join("exact_dist.csv");
    iofmt::write_file(&path, &iofmt::csv_text("r,prob,uniform_ref,abs_dev", &rows))?;
    println!(
        "exact-dist: m={} sup_norm={:.6e} (seed {seed} unused: closed form)",
        cfg.m,
        sup_norm_to_uniform(&pmf),
    );
    Ok(CommandOutcome {
        exit_code: 0,
        outputs: vec![path],
    })
}

// ---------------------------------------------------------------- power --

pub fn run_power(config_path: &Path, seed: u64, out_dir: &Path) -> CliResult<CommandOutcome> {
    let cfg: PowerConfig = crate::config::load_config(config_path)?;
    let method = match cfg.method {
        MethodKind::Chisq => srs::TestMethod::Chisq,
        MethodKind::BinomialNormal => srs::TestMethod::BinomialNormal,
    };
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, n) in cfg.n.values().into_iter().enumerate() {
        let estimate = with_model_pair!(&cfg.p, &cfg.q, &cfg.ordering, |p, q, order| {
            Ok::<_, CliError>(estimate_power(&ExperimentConfig {
                null_model: p,
                alt_model: q,
                order,
                m: cfg.m,
                n,
                alpha: cfg.alpha,
                trials: cfg.trials,
                seed: derive_stream_key(seed, i as u64),
                method,
            })?)
        })?;
        rows.push(vec![
            n.to_string(),
            cfg.m.to_string(),
            estimate.order.clone(),
            fmt_f64(estimate.power),
            estimate.trials.to_string(),
            seed.to_string(),
        ]);
        println!(
            "power: n={n} m={} ordering={} power={:.4} ({}/{})",
            cfg.m, estimate.order, estimate.power, estimate.rejections, estimate.trials
        );
    }
    let path = out_dir.join("power.csv");
    iofmt::write_file(
        &path,
        &iofmt::csv_text("n_or_w,m,ordering,power_or_supnorm,trials,seed", &rows),
    )?;
    Ok(CommandOutcome {
        exit_code: 0,
        outputs: vec![path],
    })
}

// ---------------------------------------------------------------- sweep --

pub fn run_sweep(config_path: &Path, seed: u64, out_dir: &Path) -> CliResult<CommandOutcome> {
    let cfg: SweepConfig = crate::config::load_config(config_path)?;
    let metric = match cfg.metric {
        MetricKind::Power => SweepMetric::Power,
        MetricKind::Supnorm => SweepMetric::SupNorm,
    };
    if metric == SweepMetric::Power && (cfg.n.is_none() || cfg.alpha.is_none() || cfg.trials.is_none())
    {
        return Err(CliError::Config(
            "metric=power requires n, alpha and trials".into(),
        ));
    }

    macro_rules! sweep_domain {
        ($p:ident, $a:ident, $resolver:path) => {{
            let orders = cfg
                .orderings
                .iter()
                .map(|name| $resolver(name, &$p, Some(&$a)))
                .collect::<CliResult<Vec<_>>>()?;
            let lib_cfg = LibSweepConfig {
                ind_model: $p,
                alt_model: $a,
                orders,
                m: cfg.m,
                n: cfg.n.unwrap_or(0),
                alpha: cfg.alpha.unwrap_or(0.05),
                trials: cfg.trials.unwrap_or(0),
                seed,
            };
            weight_sweep(&lib_cfg, &cfg.weights, metric).map_err(CliError::from)
        }};
    }

    let rows = match (build_model(&cfg.p_ind)?, build_model(&cfg.p_alt)?) {
        (DomainModel::Int(p), DomainModel::Int(a)) => sweep_domain!(p, a, registry::int_order)?,
        (DomainModel::Bits(p), DomainModel::Bits(a)) => sweep_domain!(p, a, registry::bits_order)?,
        (DomainModel::Parts(p), DomainModel::Parts(a)) => {
            sweep_domain!(p, a, registry::parts_order)?
        }
        (DomainModel::Lattice(p), DomainModel::Lattice(a)) => {
            let orders = cfg
                .orderings
                .iter()
                .map(|name| registry::lattice_order_by_name(name))
                .collect::<CliResult<Vec<_>>>()?;
            let lib_cfg = LibSweepConfig {
                ind_model: p,
                alt_model: a,
                orders,
                m: cfg.m,
                n: cfg.n.unwrap_or(0),
                alpha: cfg.alpha.unwrap_or(0.05),
                trials: cfg.trials.unwrap_or(0),
                seed,
            };
            weight_sweep(&lib_cfg, &cfg.weights, metric)?
        }
        (a, b) => {
            return Err(CliError::Config(format!(
                "p_ind and p_alt live in different domains: {} vs {}",
                a.domain_name(),
                b.domain_name()
            )))
        }
    };

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                fmt_f64(row.weight),
                row.m.to_string(),
                row.ordering.clone(),
                fmt_f64(row.value),
                row.trials.to_string(),
                row.seed.to_string(),
            ]
        })
        .collect();
    for row in &rows {
        println!(
            "sweep: w={} ordering={} value={:.6e}",
            row.weight, row.ordering, row.value
        );
    }
    let path = out_dir.join("sweep.csv");
    iofmt::write_file(
        &path,
        &iofmt::csv_text("n_or_w,m,ordering,power_or_supnorm,trials,seed", &csv_rows),
    )?;
    Ok(CommandOutcome {
        exit_code: 0,
        outputs: vec![path],
    })
}

// ------------------------------------------------------- ising-diagnose --

pub fn run_ising_diagnose(
    config_path: &Path,
    seed: u64,
    out_dir: &Path,
) -> CliResult<CommandOutcome> {
    let cfg: IsingDiagnoseConfig = crate::config::load_config(config_path)?;
    let rows = ising_diagnose(&DiagnoseConfig {
        side: cfg.k as usize,
        temperature: cfg.t,
        kernel: match cfg.method {
            KernelKind::Gibbs => IsingKernel::Gibbs,
            KernelKind::Mh => IsingKernel::MetropolisHastings,
        },
        coupling: cfg.coupling,
        checkpoints: cfg.checkpoints.clone(),
        n: cfg.n,
        m: cfg.m,
        alpha: cfg.alpha,
        reference_multiplier: cfg.reference_multiplier,
        seed,
    })?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.steps.to_string(),
                fmt_f64(r.statistic),
                fmt_f64(r.p_value),
            ]
        })
        .collect();
    for r in &rows {
        println!(
            "ising-diagnose: steps={} chisq={:.3} p={:.6}",
            r.steps, r.statistic, r.p_value
        );
    }
    let path = out_dir.join("ising_diagnose.csv");
    iofmt::write_file(
        &path,
        &iofmt::csv_text("steps,chisq_statistic,p_value", &csv_rows),
    )?;
    Ok(CommandOutcome {
        exit_code: 0,
        outputs: vec![path],
    })
}

// ---------------------------------------------------------------- seed --

/// CLI flag beats the config's `seed` field; the default is 0.
pub fn resolve_seed(cli_seed: Option<u64>, config_path: &Path) -> u64 {
    if let Some(s) = cli_seed {
        return s;
    }
    std::fs::read_to_string(config_path)
        .ok()
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|v| v.get("seed").and_then(|s| s.as_u64()))
        .unwrap_or(0)
}
