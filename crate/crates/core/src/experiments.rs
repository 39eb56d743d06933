//! Reproducible experiment drivers: the synthetic duality-gap curve, the
//! two-stage selection pipeline and the runtime scaling study.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::baselines::{odds_ratio_rank, select_top, tmnb_rank};
use crate::multinomial::{fit_multinomial_mle, predict_multinomial, smnb_bound, RelaxationSolver, DEFAULT_TOL};
use crate::{summarize, ClassSummary, Error, Label, LabeledDataset, Result, SparseCountMatrix};

/// Class sums drawn uniformly on `[0, 1]^m` and scaled to sum to one per
/// class, with one pseudo-document per class.
pub fn synthetic_summary(m: usize, seed: u64) -> Result<ClassSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let v: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect()
    };
    let f_plus = draw(&mut rng);
    let f_minus = draw(&mut rng);
    ClassSummary::new(f_plus, f_minus, 1, 1)
}

/// One `k` of the duality-gap curve.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub k: usize,
    pub psi_k: f64,
    /// `psi(k - 4)`; always present for the rows built here.
    pub psi_km4: Option<f64>,
    pub primal_value: f64,
    pub a_posteriori_gap: f64,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCurve {
    pub m: usize,
    pub seed: u64,
    pub rows: Vec<GapRow>,
}

/// Bound, primal value and gap for every `4 <= k <= m` on a synthetic
/// summary.
pub fn run_gap_experiment(m: usize, seed: u64, gamma: f64) -> Result<GapCurve> {
    if m < 8 {
        return Err(Error::Experiments(format!("gap experiment needs m >= 8, got {m}")));
    }
    let s = synthetic_summary(m, seed)?;
    let rows = gap_rows(&s, gamma)?;
    Ok(GapCurve { m, seed, rows })
}

/// Gap rows for an arbitrary summary; `k` runs over `4..=m`.
pub fn gap_rows(s: &ClassSummary, gamma: f64) -> Result<Vec<GapRow>> {
    let solver = RelaxationSolver::new(s, gamma)?;
    let m = solver.m();
    if m < 4 {
        return Ok(Vec::new());
    }
    let relaxed: Vec<(usize, f64, f64)> = (4..=m)
        .into_par_iter()
        .map(|k| solver.relax(k, DEFAULT_TOL).map(|r| (k, r.psi, r.primal_value)))
        .collect::<Result<_>>()?;
    let mut psi: Vec<f64> = (0..4.min(m + 1))
        .map(|k| solver.psi(k, DEFAULT_TOL))
        .collect::<Result<_>>()?;
    psi.extend(relaxed.iter().map(|r| r.1));
    Ok(relaxed
        .iter()
        .map(|&(k, psi_k, primal_value)| {
            let psi_km4 = Some(psi[k - 4]);
            GapRow {
                k,
                psi_k,
                psi_km4,
                primal_value,
                a_posteriori_gap: psi_k - primal_value,
                delta: psi_km4.map(|p| psi_k - p),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Smnb,
    Tmnb,
    Odds,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Smnb => "smnb",
            Method::Tmnb => "tmnb",
            Method::Odds => "odds",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smnb" => Ok(Method::Smnb),
            "tmnb" => Ok(Method::Tmnb),
            "odds" => Ok(Method::Odds),
            other => Err(Error::Experiments(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub method: Method,
    pub k: usize,
    /// Percentage of features kept.
    pub sparsity_pct: f64,
    /// Ascending feature indices.
    pub selected: Vec<usize>,
    pub stage2_accuracy: f64,
    /// Wall-clock time of the selection step.
    pub fit_seconds: f64,
}

/// `k` feature indices chosen by `method` on the training data, ascending.
pub fn select_features(train: &LabeledDataset, method: Method, k: usize, gamma: f64) -> Result<Vec<usize>> {
    let m = train.n_features();
    if k > m {
        return Err(Error::cardinality("experiments", k, m));
    }
    let mut selected = match method {
        Method::Smnb => smnb_bound(&summarize(train)?, k, gamma, DEFAULT_TOL)?.top_k,
        Method::Tmnb => select_top(&tmnb_rank(&fit_multinomial_mle(&summarize(train)?, gamma)?)?, k)?,
        Method::Odds => select_top(&odds_ratio_rank(&summarize(&train.binarized())?, gamma)?, k)?,
    };
    selected.sort_unstable();
    Ok(selected)
}

/// Selects `k` features, fits a multinomial model on those columns and
/// reports held-out accuracy.
pub fn run_pipeline(
    train: &LabeledDataset,
    test: &LabeledDataset,
    method: Method,
    k: usize,
    gamma: f64,
) -> Result<PipelineReport> {
    let m = train.n_features();
    if test.n_features() != m {
        return Err(Error::dims("experiments", m, test.n_features()));
    }
    let start = Instant::now();
    let selected = select_features(train, method, k, gamma)?;
    let fit_seconds = start.elapsed().as_secs_f64();

    let model = fit_multinomial_mle(&summarize(&train.select_columns(&selected)?)?, gamma)?;
    let test_sel = test.select_columns(&selected)?;
    let predicted = predict_multinomial(&model, test_sel.x())?;
    let stage2_accuracy = test_sel.accuracy(&predicted)?;
    Ok(PipelineReport {
        method,
        k,
        sparsity_pct: if m == 0 { 0.0 } else { 100.0 * selected.len() as f64 / m as f64 },
        selected,
        stage2_accuracy,
        fit_seconds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub m: usize,
    pub k: usize,
    /// Median wall-clock seconds of one `smnb_bound` call.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Every step from one point to the next grows the time by at most
    /// 2.5x per doubling of `m`.
    pub ratio_bound_ok: bool,
}

const TIMING_RUNS: usize = 5;

/// Times `smnb_bound` on synthetic summaries of size `base_m * factor` with
/// `k = round(k_ratio * m)`: one warm-up call, then the median of five.
pub fn run_scaling(base_m: usize, factors: &[usize], k_ratio: f64, seed: u64) -> Result<ScalingReport> {
    if factors.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Experiments("scaling factors must be nondecreasing".into()));
    }
    if !(0.0..=1.0).contains(&k_ratio) {
        return Err(Error::Experiments(format!("k ratio must lie in [0, 1], got {k_ratio}")));
    }
    let mut points = Vec::with_capacity(factors.len());
    for &factor in factors {
        let m = base_m * factor;
        let k = ((k_ratio * m as f64).round() as usize).min(m);
        let s = synthetic_summary(m, seed.wrapping_add(m as u64))?;
        smnb_bound(&s, k, 0.0, DEFAULT_TOL)?;
        let mut times = Vec::with_capacity(TIMING_RUNS);
        for _ in 0..TIMING_RUNS {
            let start = Instant::now();
            std::hint::black_box(smnb_bound(&s, k, 0.0, DEFAULT_TOL)?);
            times.push(start.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        points.push(ScalingPoint {
            m,
            k,
            seconds: times[TIMING_RUNS / 2],
        });
    }
    let ratio_bound_ok = points.windows(2).all(|w| {
        let size_ratio = w[1].m as f64 / w[0].m.max(1) as f64;
        w[1].seconds <= 1.25 * size_ratio * w[0].seconds
    });
    Ok(ScalingReport { points, ratio_bound_ok })
}

/// Settings for the planted-feature dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub n_features: usize,
    pub n_informative: usize,
    /// Documents per split.
    pub n_rows: usize,
    /// Poisson rate of every uninformative feature in both classes.
    pub background_rate: f64,
    /// Poisson rate of an informative feature in the class it favours.
    pub informative_rate: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            n_features: 1000,
            n_informative: 10,
            n_rows: 400,
            background_rate: 0.05,
            informative_rate: 0.8,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedDataset {
    pub train: LabeledDataset,
    pub test: LabeledDataset,
    /// Planted features, ascending. The first half of this list favours
    /// the positive class.
    pub informative: Vec<usize>,
}

/// Count data where only `n_informative` randomly chosen columns depend on
/// the label. Labels alternate `+1, -1, ...`.
pub fn planted_dataset(cfg: &PlantedConfig) -> Result<PlantedDataset> {
    if cfg.n_informative > cfg.n_features {
        return Err(Error::cardinality("experiments", cfg.n_informative, cfg.n_features));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut informative = rand::seq::index::sample(&mut rng, cfg.n_features, cfg.n_informative).into_vec();
    informative.sort_unstable();
    let mut favours = vec![None; cfg.n_features];
    for (t, &j) in informative.iter().enumerate() {
        favours[j] = Some(if t < cfg.n_informative / 2 { Label::Positive } else { Label::Negative });
    }
    let poisson = |rate: f64| {
        Poisson::new(rate).map_err(|e| Error::Experiments(format!("invalid Poisson rate {rate}: {e}")))
    };
    let background = poisson(cfg.background_rate)?;
    let strong = poisson(cfg.informative_rate)?;

    let split = |rng: &mut ChaCha8Rng| -> Result<LabeledDataset> {
        let mut rows = Vec::with_capacity(cfg.n_rows);
        let mut labels = Vec::with_capacity(cfg.n_rows);
        for i in 0..cfg.n_rows {
            let label = if i % 2 == 0 { Label::Positive } else { Label::Negative };
            let mut row = Vec::new();
            for (j, fav) in favours.iter().enumerate() {
                let count: f64 = match fav {
                    Some(c) if *c == label => strong.sample(rng),
                    _ => background.sample(rng),
                };
                if count > 0.0 {
                    row.push((j, count));
                }
            }
            rows.push(row);
            labels.push(label);
        }
        LabeledDataset::new(SparseCountMatrix::from_rows(cfg.n_features, &rows)?, labels)
    };
    let train = split(&mut rng)?;
    let test = split(&mut rng)?;
    Ok(PlantedDataset { train, test, informative })
}
