//! Two-stage classifier for spotting medication mentions in short noisy
//! texts. Module 1 runs four cheap prefilters (lexicon, spelling variants,
//! patterns, a weakly supervised LSTM) to nominate candidates; module 2
//! decides with an ensemble of character+word recurrent attention networks.

pub mod error;
pub mod text;

pub use error::{Error, Result};
