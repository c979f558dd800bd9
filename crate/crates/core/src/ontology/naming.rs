//! Deterministic IRIs for minted individuals.

use std::fmt::Write as _;

use super::{Iri, OntologyError};

pub const DEFAULT_INSTANCE_NS: &str = "urn:chain-oasis:";

/// What kind of individual an IRI names. Each kind has a fixed arity and template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    /// `block_node_<number>`
    Block,
    /// `block_node_<number>_tran_<position>`
    Transaction,
    /// A human label used verbatim (miner names, networks).
    Named,
    /// `node_<address>`
    Node,
    /// `account_<address>`
    Account,
    /// `<prefix>_SmartContractCreation`
    Creation,
    /// `<prefix>_smart_contract_agent`
    Agent,
    /// `<prefix>_smart_contract_behavior`
    Behavior,
    /// `interaction_<txhash>`
    Interaction,
    /// `plan_<txhash>` or `plan_<txhash>_<logindex>`
    Plan,
    /// `token_<contract>_<id>`
    Token,
    /// `feature_<contract>_<id>_<seq>`
    Feature,
    /// `activity_<txhash>_<logindex>`
    Activity,
    /// `modification_<txhash>_<logindex>`
    Modification,
    /// `tokens_of_<owner>`
    DelegationScope,
}

impl EntityKind {
    fn arity(self) -> &'static [usize] {
        match self {
            EntityKind::Block
            | EntityKind::Named
            | EntityKind::Node
            | EntityKind::Account
            | EntityKind::Creation
            | EntityKind::Agent
            | EntityKind::Behavior
            | EntityKind::Interaction
            | EntityKind::DelegationScope => &[1],
            EntityKind::Plan => &[1, 2],
            EntityKind::Transaction
            | EntityKind::Token
            | EntityKind::Activity
            | EntityKind::Modification => &[2],
            EntityKind::Feature => &[3],
        }
    }

    fn render(self, parts: &[String]) -> String {
        match self {
            EntityKind::Block => format!("block_node_{}", parts[0]),
            EntityKind::Transaction => format!("block_node_{}_tran_{}", parts[0], parts[1]),
            EntityKind::Named => parts[0].clone(),
            EntityKind::Node => format!("node_{}", parts[0]),
            EntityKind::Account => format!("account_{}", parts[0]),
            EntityKind::Creation => format!("{}_SmartContractCreation", parts[0]),
            EntityKind::Agent => format!("{}_smart_contract_agent", parts[0]),
            EntityKind::Behavior => format!("{}_smart_contract_behavior", parts[0]),
            EntityKind::Interaction => format!("interaction_{}", parts[0]),
            EntityKind::Plan => format!("plan_{}", parts.join("_")),
            EntityKind::Token => format!("token_{}_{}", parts[0], parts[1]),
            EntityKind::Feature => format!("feature_{}_{}_{}", parts[0], parts[1], parts[2]),
            EntityKind::Activity => format!("activity_{}_{}", parts[0], parts[1]),
            EntityKind::Modification => format!("modification_{}_{}", parts[0], parts[1]),
            EntityKind::DelegationScope => format!("tokens_of_{}", parts[0]),
        }
    }
}

/// Percent-encodes everything outside `[A-Za-z0-9.-]` so `_` only ever appears
/// as a template separator, which keeps minting injective.
fn escape_component(component: &str) -> String {
    let mut out = String::with_capacity(component.len());
    for byte in component.bytes() {
        if byte.is_ascii_alphanumeric() || byte == b'-' || byte == b'.' {
            out.push(byte as char);
        } else {
            let _ = write!(out, "%{byte:02X}");
        }
    }
    out
}

const TEMPLATE_PREFIXES: [&str; 10] = [
    "block_node_",
    "node_",
    "account_",
    "interaction_",
    "plan_",
    "token_",
    "feature_",
    "activity_",
    "modification_",
    "tokens_of_",
];
const TEMPLATE_SUFFIXES: [&str; 3] = ["_SmartContractCreation", "_smart_contract_agent", "_smart_contract_behavior"];

/// Labels keep their underscores (`ethereum_mainnet`) unless they could be
/// mistaken for another template, in which case they are escaped like any
/// other component. Escaped output never contains `_`, so this stays injective.
fn named_component(label: &str) -> String {
    let plain = label
        .bytes()
        .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_'));
    let shadows_template = TEMPLATE_PREFIXES.iter().any(|p| label.starts_with(p))
        || TEMPLATE_SUFFIXES.iter().any(|s| label.ends_with(s));
    if plain && !shadows_template {
        label.to_string()
    } else {
        escape_component(label)
    }
}

/// Prefix under which individuals are minted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Namespace(String);

impl Default for Namespace {
    fn default() -> Self {
        Namespace(DEFAULT_INSTANCE_NS.to_string())
    }
}

impl Namespace {
    pub fn new(prefix: impl Into<String>) -> Result<Self, OntologyError> {
        let prefix = prefix.into();
        if !prefix.ends_with([':', '#', '/']) {
            return Err(OntologyError::InvalidIri {
                iri: prefix,
                reason: "namespace must end with ':', '#' or '/'",
            });
        }
        Iri::new(&prefix, "probe")?;
        Ok(Namespace(prefix))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn make_iri<S: AsRef<str>>(&self, kind: EntityKind, components: &[S]) -> Result<Iri, OntologyError> {
        if components.is_empty() {
            return Err(OntologyError::InvalidName(format!("{kind:?}: no components")));
        }
        if !kind.arity().contains(&components.len()) {
            return Err(OntologyError::InvalidName(format!(
                "{kind:?}: expected {:?} components, got {}",
                kind.arity(),
                components.len()
            )));
        }
        let mut parts = Vec::with_capacity(components.len());
        for c in components {
            let c = c.as_ref();
            if c.is_empty() {
                return Err(OntologyError::InvalidName(format!("{kind:?}: empty component")));
            }
            parts.push(if kind == EntityKind::Named {
                named_component(c)
            } else {
                escape_component(c)
            });
        }
        Iri::new(&self.0, &kind.render(&parts))
    }
}

/// Mints an IRI under the default instance namespace.
pub fn make_iri<S: AsRef<str>>(kind: EntityKind, components: &[S]) -> Result<Iri, OntologyError> {
    Namespace::default().make_iri(kind, components)
}
