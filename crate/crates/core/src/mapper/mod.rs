//! Translates classified chain records and decoded ERC721 events into graph
//! assertions: blocks, transactions, agents, plan executions, and the token
//! ownership lifecycle.

mod chain;
mod tokens;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::behavior::{build_erc721_template, BehaviorTemplate};
use crate::ingest::{Address, Corpus, IngestError, Meta, TokenId, H256};
use crate::ontology::{Class, EntityKind, Graph, Iri, Namespace, OntologyError};

pub use chain::decide_agent_category;

pub type TokenKey = (Address, TokenId);

#[derive(Debug, Error)]
pub enum MapError {
    #[error("block {0} is already mapped")]
    AlreadyMapped(u64),

    #[error("unknown token {id} of {contract}", id = .0.1, contract = .0.0)]
    UnknownToken(TokenKey),

    #[error("token {id} of {contract} already exists", id = .0.1, contract = .0.0)]
    DuplicateToken(TokenKey),

    #[error("token {id} of {contract} is burned", id = .0.1, contract = .0.0)]
    TokenBurned(TokenKey),

    #[error("token {id} of {contract} is owned by {owner}, event names {claimed}", id = .key.1, contract = .key.0)]
    OwnerMismatch {
        key: TokenKey,
        owner: Address,
        claimed: Address,
    },

    #[error("event {log_index} of {tx_hash} arrives after a later event")]
    OutOfOrder { tx_hash: H256, log_index: u64 },

    #[error("inconsistent record: {0}")]
    InconsistentRecord(String),

    #[error(transparent)]
    Ingest(#[from] IngestError),

    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TxCounts {
    pub contract_creation: u64,
    pub contract_interaction: u64,
    pub ether_transfer: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub blocks: u64,
    pub transactions: TxCounts,
    pub agents: u64,
    pub mints: u64,
    pub transfers: u64,
    pub burns: u64,
    pub delegations: u64,
    pub revocations: u64,
    pub skipped_logs: u64,
}

/// What a contract has been seen doing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AgentEvidence {
    pub erc721: bool,
    pub erc20: bool,
    pub ether: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentRecord {
    pub agent_iri: Iri,
    pub behavior_iri: Iri,
    pub account_iri: Iri,
    pub evidence: AgentEvidence,
    pub categories: BTreeSet<Class>,
    /// Created on first interaction rather than from an observed creation.
    pub stub: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndurantFeature {
    pub feature_iri: Iri,
    pub owner_wallet: Address,
    pub deprecated: bool,
    pub modified_in: Option<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    pub token_iri: Iri,
    pub contract: Address,
    pub token_id: TokenId,
    pub feature_chain: Vec<EndurantFeature>,
    pub burned: bool,
}

impl TokenRecord {
    pub fn active_feature(&self) -> Option<&EndurantFeature> {
        self.feature_chain.iter().find(|f| !f.deprecated)
    }

    pub fn owner(&self) -> Option<Address> {
        self.active_feature().map(|f| f.owner_wallet)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelegationScope {
    Token(TokenKey),
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delegation {
    pub activity_iri: Iri,
    pub operator: Address,
    pub owner: Address,
    pub scope: DelegationScope,
    pub active: bool,
}

/// The chain position an assertion stems from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cause {
    pub tx_hash: H256,
    pub log_index: u64,
}

#[derive(Debug, Clone)]
struct TxSlot {
    iri: Iri,
    block: u64,
    /// The creation or interaction individual describing the transaction.
    description: Option<Iri>,
}

pub struct MappingContext {
    pub graph: Graph,
    namespace: Namespace,
    network_iri: Iri,
    labels: BTreeMap<Address, String>,
    template: BehaviorTemplate,
    nodes: BTreeMap<Address, Iri>,
    accounts: BTreeMap<Address, Iri>,
    agents: BTreeMap<Address, AgentRecord>,
    tokens: BTreeMap<TokenKey, TokenRecord>,
    burned: BTreeMap<TokenKey, TokenRecord>,
    delegations: Vec<Delegation>,
    txs: HashMap<H256, TxSlot>,
    counted_txs: HashSet<H256>,
    mapped_blocks: BTreeSet<u64>,
    applied_events: HashSet<(H256, u64)>,
    last_event: Option<(u64, u64)>,
    sequence: u64,
    allow_remap: bool,
    summary: Summary,
}

impl MappingContext {
    pub fn new(namespace: Namespace, meta: &Meta) -> Result<Self, MapError> {
        let network_iri = namespace.make_iri(EntityKind::Named, &[meta.network.as_str()])?;
        Ok(MappingContext {
            graph: Graph::new(),
            namespace,
            network_iri,
            labels: meta.labels.clone(),
            template: build_erc721_template(),
            nodes: BTreeMap::new(),
            accounts: BTreeMap::new(),
            agents: BTreeMap::new(),
            tokens: BTreeMap::new(),
            burned: BTreeMap::new(),
            delegations: Vec::new(),
            txs: HashMap::new(),
            counted_txs: HashSet::new(),
            mapped_blocks: BTreeSet::new(),
            applied_events: HashSet::new(),
            last_event: None,
            sequence: 0,
            allow_remap: false,
            summary: Summary::default(),
        })
    }

    /// Disables the duplicate-block guard so a stream can be replayed.
    pub fn set_allow_remap(&mut self, allow: bool) {
        self.allow_remap = allow;
    }

    pub fn network_iri(&self) -> &Iri {
        &self.network_iri
    }

    pub fn namespace(&self) -> &Namespace {
        &self.namespace
    }

    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn agent(&self, contract: &Address) -> Option<&AgentRecord> {
        self.agents.get(contract)
    }

    pub fn agents(&self) -> impl Iterator<Item = (&Address, &AgentRecord)> {
        self.agents.iter()
    }

    pub fn token(&self, key: &TokenKey) -> Option<&TokenRecord> {
        self.tokens.get(key).or_else(|| self.burned.get(key))
    }

    pub fn live_tokens(&self) -> impl Iterator<Item = &TokenRecord> {
        self.tokens.values()
    }

    pub fn burned_tokens(&self) -> impl Iterator<Item = &TokenRecord> {
        self.burned.values()
    }

    pub fn delegations(&self) -> &[Delegation] {
        &self.delegations
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    fn iri(&self, kind: EntityKind, components: &[&str]) -> Result<Iri, MapError> {
        Ok(self.namespace.make_iri(kind, components)?)
    }

    /// Maps every block of `corpus` in canonical order.
    pub fn map_corpus(&mut self, corpus: &Corpus) -> Result<(), MapError> {
        let receipts = corpus.receipts_by_hash();
        for block in &corpus.blocks {
            let mut ordered = Vec::with_capacity(block.transactions.len());
            for tx in &block.transactions {
                let receipt = receipts.get(&tx.hash).ok_or_else(|| {
                    MapError::InconsistentRecord(format!("no receipt for {}", tx.hash))
                })?;
                ordered.push(*receipt);
            }
            self.ingest_block(block, &ordered)?;
        }
        Ok(())
    }
}

/// Maps a whole corpus into a fresh context.
pub fn map_corpus(corpus: &Corpus, namespace: Namespace) -> Result<MappingContext, MapError> {
    let mut ctx = MappingContext::new(namespace, &corpus.meta)?;
    ctx.map_corpus(corpus)?;
    Ok(ctx)
}
