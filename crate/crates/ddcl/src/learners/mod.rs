//! The three classifiers trained on curriculum-ordered data: an
//! order-sensitive MLP, an RBF-kernel SVM and a random forest.

pub mod forest;
pub mod mlp;
pub mod svm;

pub use forest::{predict_forest, train_forest, DecisionTree, ForestModel, ForestSpec, TreeNode};
pub use mlp::{
    mlp_gradients, predict_mlp, train_mlp, tune_hidden_layers, BatchMode, MlpGradients, MlpModel,
    MlpSpec,
};
pub use svm::{
    predict_svm, rbf_kernel, resolve_gamma, train_svm, BinarySvm, GammaRule, SvmModel, SvmSpec,
};

use serde::{Deserialize, Serialize};

/// Per-epoch mean training loss (cross-entropy, nats) and wall time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epoch_loss: Vec<f64>,
    pub epoch_secs: Vec<f64>,
}

impl TrainLog {
    pub fn epochs(&self) -> usize {
        self.epoch_loss.len()
    }
}
