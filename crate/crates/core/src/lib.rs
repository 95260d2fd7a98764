//! DICOM deidentification: a Part 10 codec, a confidentiality profile
//! engine, free-text cleaning, series harmonization, a batch pipeline and an
//! answer-key scorer.

pub mod codec;
pub mod dictionary;
pub mod text;
pub mod profile;
pub mod harmonize;
pub mod pipeline;
pub mod score;
pub mod synth;
