//! Vocabulary, IRI minting, the triple store, and its N-Triples/Turtle forms.

mod error;
mod graph;
mod iri;
pub mod naming;
pub mod serialize;
mod term;
pub mod vocab;

pub use error::OntologyError;
pub use graph::Graph;
pub use iri::Iri;
pub use naming::{make_iri, EntityKind, Namespace};
pub use serialize::{parse, render_term_nt, serialize, serialize_with_namespace, Format};
pub use term::{Datatype, Literal, Term, Triple};
pub use vocab::{Class, Individual, Property};
