use crate::bow::BowError;
use crate::classify::ClassifyError;
use crate::corpus::CorpusError;
use crate::embed::EmbedError;
use crate::eval::EvalError;
use crate::mw::MwError;
use crate::screen::ScreenError;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Bow(#[from] BowError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Screen(#[from] ScreenError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Mw(#[from] MwError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
