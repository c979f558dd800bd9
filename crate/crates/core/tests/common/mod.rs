#![allow(dead_code)]

pub mod builder;
pub mod checks;
pub mod oracle;
pub mod props;

use std::path::PathBuf;

use chain_oasis::ingest::{read_fixture, Corpus};
use chain_oasis::mapper::{map_corpus, MappingContext};
use chain_oasis::ontology::Namespace;

pub const FIXTURES: [&str; 6] = [
    "creation_only",
    "lifecycle",
    "delegation",
    "mixed_agents",
    "agent_categories",
    "empty",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.jsonl"))
}

pub fn corpus(name: &str) -> Corpus {
    read_fixture(fixture_path(name)).unwrap()
}

pub fn mapped(name: &str) -> MappingContext {
    map_corpus(&corpus(name), Namespace::default()).unwrap()
}

use std::collections::BTreeMap;

use chain_oasis::lineage::{account_address, current_owner_account};
use chain_oasis::ontology::{Class, Graph, Property};

/// Owners of live tokens read back from the graph alone, keyed like the oracle.
pub fn graph_owner_map(graph: &Graph) -> BTreeMap<oracle::Key, String> {
    graph
        .instances_of(Class::EthereumTokenErc721)
        .into_iter()
        .filter(|t| !graph.is_a(t, Class::BurnedEthereumToken))
        .map(|t| {
            let contract = graph.object_literal(&t, Property::HasContractAddress).unwrap();
            let id: u128 = graph.object_literal(&t, Property::HasTokenId).unwrap().lexical().parse().unwrap();
            let account = current_owner_account(graph, &t).unwrap();
            let owner = account_address(graph, &account).unwrap();
            ((contract.lexical().to_string(), id), owner.to_string())
        })
        .collect()
}
