//! Maps Ethereum chain data into an agent and behavior knowledge graph, with
//! ERC721 token lifecycles, template matching, validation and discovery.

pub mod behavior;
pub mod discovery;
pub mod ingest;
pub mod lineage;
pub mod mapper;
pub mod ontology;
pub mod pipeline;
pub mod validate;
