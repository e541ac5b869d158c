//! Gadget construction, verification and patching into a single regular graph.

mod gadget;
mod patch;
mod synth;

pub use gadget::{
    construct_gadget, gadget_core, verify_gadget_lambda1, verify_gadget_lambda2, GadgetProvenance, GadgetSpec,
    Lambda1Check, Lambda2Method,
};
pub use patch::{
    min_pairwise_distance, pad_length, path_gadget, r_patch, select_spread_set, spread_with_fallback, LeafLink,
    PatchedGraph, SpreadSet,
};
pub use synth::{
    default_gadget_size, synthesize, BaseReport, Deviation, FinalReport, GadgetReport, PatchReport, SynthOptions,
    SynthReport, Synthesis, ENDPOINT_GAP,
};
