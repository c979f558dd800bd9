//! End-to-end runs: load a corpus, map it, serialize the graph.

use std::path::PathBuf;

use thiserror::Error;

use crate::ingest::{fetch_range, read_fixture, Corpus, HttpTransport, IngestError, RetryPolicy};
use crate::mapper::{map_corpus, MapError, MappingContext};
use crate::ontology::{serialize_with_namespace, Format, Namespace};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),

    #[error(transparent)]
    Map(#[from] MapError),

    #[error("empty block range {from}..={to}")]
    EmptyRange { from: u64, to: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Fixture(PathBuf),
    Rpc { url: String, from_block: u64, to_block: u64 },
}

pub fn load(source: &Source) -> Result<Corpus, PipelineError> {
    match source {
        Source::Fixture(path) => Ok(read_fixture(path)?),
        Source::Rpc {
            url,
            from_block,
            to_block,
        } => {
            if from_block > to_block {
                return Err(PipelineError::EmptyRange {
                    from: *from_block,
                    to: *to_block,
                });
            }
            let transport = HttpTransport::new(url.clone());
            Ok(fetch_range(&transport, *from_block, *to_block, &RetryPolicy::default())?)
        }
    }
}

pub fn ingest(source: &Source, namespace: Namespace) -> Result<MappingContext, PipelineError> {
    let corpus = load(source)?;
    Ok(map_corpus(&corpus, namespace)?)
}

/// Serializes the mapped graph, abbreviating instance IRIs in Turtle.
pub fn export(ctx: &MappingContext, format: Format) -> Vec<u8> {
    serialize_with_namespace(&ctx.graph, format, ctx.namespace().as_str())
}
