use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bernoulli::{predict_bernoulli, BernoulliModel};
use crate::multinomial::{predict_multinomial, MultinomialModel};
use crate::{Error, Label, Result, SparseCountMatrix};

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Bernoulli,
    Multinomial,
}

/// On-disk form of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    pub model_kind: ModelKind,
    pub m: usize,
    pub theta_plus: Vec<f64>,
    pub theta_minus: Vec<f64>,
    pub log_prior_ratio: f64,
    pub selected: Vec<usize>,
    pub smoothing_gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Bernoulli(BernoulliModel),
    Multinomial(MultinomialModel),
}

impl From<BernoulliModel> for FittedModel {
    fn from(m: BernoulliModel) -> Self {
        FittedModel::Bernoulli(m)
    }
}

impl From<MultinomialModel> for FittedModel {
    fn from(m: MultinomialModel) -> Self {
        FittedModel::Multinomial(m)
    }
}

impl FittedModel {
    pub fn m(&self) -> usize {
        match self {
            FittedModel::Bernoulli(b) => b.m(),
            FittedModel::Multinomial(mn) => mn.m(),
        }
    }

    pub fn selected(&self) -> &[usize] {
        match self {
            FittedModel::Bernoulli(b) => b.selected(),
            FittedModel::Multinomial(mn) => mn.selected(),
        }
    }

    pub fn predict(&self, x: &SparseCountMatrix) -> Result<Vec<Label>> {
        match self {
            FittedModel::Bernoulli(b) => predict_bernoulli(b, x),
            FittedModel::Multinomial(mn) => predict_multinomial(mn, x),
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let (model_kind, tp, tm, lpr, sel, gamma) = match self {
            FittedModel::Bernoulli(b) => (
                ModelKind::Bernoulli,
                b.theta_plus(),
                b.theta_minus(),
                b.log_prior_ratio(),
                b.selected(),
                b.gamma(),
            ),
            FittedModel::Multinomial(mn) => (
                ModelKind::Multinomial,
                mn.theta_plus(),
                mn.theta_minus(),
                mn.log_prior_ratio(),
                mn.selected(),
                mn.gamma(),
            ),
        };
        ModelFile {
            version: MODEL_FILE_VERSION,
            model_kind,
            m: tp.len(),
            theta_plus: tp.to_vec(),
            theta_minus: tm.to_vec(),
            log_prior_ratio: lpr,
            selected: sel.to_vec(),
            smoothing_gamma: gamma,
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        if file.version != MODEL_FILE_VERSION {
            return Err(Error::ModelFile(format!(
                "unsupported version {} (expected {MODEL_FILE_VERSION})",
                file.version
            )));
        }
        for (name, len) in [("theta_plus", file.theta_plus.len()), ("theta_minus", file.theta_minus.len())] {
            if len != file.m {
                return Err(Error::ModelFile(format!("{name} has {len} entries, m = {}", file.m)));
            }
        }
        Ok(match file.model_kind {
            ModelKind::Bernoulli => FittedModel::Bernoulli(BernoulliModel::from_parameters(
                file.theta_plus,
                file.theta_minus,
                file.log_prior_ratio,
                file.selected,
                file.smoothing_gamma,
            )?),
            ModelKind::Multinomial => FittedModel::Multinomial(MultinomialModel::from_parameters(
                file.theta_plus,
                file.theta_minus,
                file.log_prior_ratio,
                file.selected,
                file.smoothing_gamma,
            )?),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
