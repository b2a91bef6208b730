//! Fully-connected classifier with rectifier hidden layers and a
//! normalized-exponential output, trained on squared error against one-hot
//! labels with minibatch Adam.

mod checkpoint;
mod mlp;
mod train;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC};
pub use mlp::{one_hot, Mlp, LOG_FLOOR};
pub(crate) use mlp::argmax as argmax_of;
pub use train::{accuracy, train, EpochLog, TrainConfig};
pub(crate) use train::mean_loss;
