//! Finite acyclic flows and the constructions around them: globe-attachment
//! pushouts, decomposition scripts, timed execution paths, isomorphism and
//! T-homotopy decisions, and the underlying homotopy type of 1-dimensional
//! decompositions.

pub mod builder;
pub mod dihomotopy;
pub mod document;
pub mod flow;
pub mod oracle;
pub mod pushout;
pub mod reparam;
pub mod underlying;

pub use builder::{build, concat, glob, DecompositionScript, ScriptStep};
pub use flow::{Atom, AtomId, AtomOrigin, Direction, Flow, FlowError, Path, Presentation, StateId};
pub use pushout::{attach_globe, AttachSpec};
