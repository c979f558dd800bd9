//! Discovery: criteria compiled into graph pattern queries, a native
//! executor, and token provenance lookups.

mod query;

use serde::Serialize;
use thiserror::Error;

pub use query::{execute, Clause, Group, Node, QueryPlan, Row};

use crate::ingest::{Address, TokenId, H256};
use crate::lineage::{account_address, address_literal, current_owner_account, feature_chain, find_token};
use crate::ontology::{Class, Graph, Individual, Iri, Property, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoveryError {
    #[error("criteria select nothing: set at least one field")]
    EmptyCriteria,

    #[error("no token {token_id} in contract {contract}")]
    NotFound { contract: Address, token_id: TokenId },

    #[error("token {token_id} of {contract} is burned")]
    TokenBurned { contract: Address, token_id: TokenId },

    #[error("inconsistent provenance: {0}")]
    Inconsistent(String),
}

/// What to look for. `token_class` constrains the parameters of the task
/// selected by `action` when one is given, and the tokens themselves otherwise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Criteria {
    pub agent_category: Option<Class>,
    pub action: Option<Individual>,
    pub token_class: Option<Class>,
    pub owner: Option<Address>,
    /// Property values a task parameter's reference template must require.
    pub reference_constraints: Vec<(Property, Term)>,
}

impl Criteria {
    pub fn is_empty(&self) -> bool {
        self.agent_category.is_none()
            && self.action.is_none()
            && self.token_class.is_none()
            && self.owner.is_none()
            && self.reference_constraints.is_empty()
    }
}

fn v(name: &str) -> Node {
    Node::var(name)
}

fn c(subject: Node, p: Property, object: impl Into<Node>) -> Clause {
    Clause::new(subject, p.iri(), object)
}

fn class_node(class: Class) -> Node {
    Node::iri(class.iri())
}

/// `subject` is an instance of `class` or of any of its subclasses.
fn membership(subject: &str, class: Class) -> Group {
    Group::Union(
        class
            .descendants()
            .iter()
            .map(|d| vec![c(v(subject), Property::Type, class_node(*d))])
            .collect(),
    )
}

/// Compiles criteria into a deterministic plan. Projects `agent`, `token` or both.
pub fn compile_criteria(criteria: &Criteria) -> Result<QueryPlan, DiscoveryError> {
    if criteria.is_empty() {
        return Err(DiscoveryError::EmptyCriteria);
    }
    let needs_task = criteria.action.is_some() || !criteria.reference_constraints.is_empty();
    let class_on_task = needs_task && criteria.token_class.is_some();
    let agent_side = criteria.agent_category.is_some() || needs_task;
    let token_side = criteria.owner.is_some() || (criteria.token_class.is_some() && !class_on_task);

    let mut groups = Vec::new();
    if let Some(category) = criteria.agent_category {
        groups.push(membership("agent", category));
    }
    if needs_task {
        groups.push(Group::Pattern(c(v("agent"), Property::HasBehavior, v("behavior"))));
        groups.push(Group::Pattern(c(v("behavior"), Property::ImplementsTemplate, v("template"))));
        groups.push(Group::Pattern(c(v("template"), Property::HasGoal, v("goal"))));
        groups.push(Group::Pattern(c(v("goal"), Property::HasTask, v("task"))));
    }
    if let Some(action) = criteria.action {
        groups.push(Group::Pattern(c(v("task"), Property::HasOperator, v("operator"))));
        groups.push(Group::Pattern(c(
            v("operator"),
            Property::RefersExactlyTo,
            Node::iri(action.iri()),
        )));
    }
    if class_on_task || !criteria.reference_constraints.is_empty() {
        groups.push(Group::Union(
            [Property::HasOutputParameter, Property::HasInputParameter, Property::HasObject]
                .into_iter()
                .map(|p| vec![c(v("task"), p, v("parameter"))])
                .collect(),
        ));
        groups.push(Group::Pattern(c(v("parameter"), Property::RefersAsNewTo, v("spec"))));
    }
    if class_on_task {
        let class = criteria.token_class.expect("checked");
        groups.push(Group::Union(
            class
                .descendants()
                .iter()
                .map(|d| vec![c(v("spec"), Property::RequiresClass, class_node(*d))])
                .collect(),
        ));
    }
    for (i, (property, value)) in criteria.reference_constraints.iter().enumerate() {
        let constraint = format!("constraint{}", i + 1);
        groups.push(Group::Pattern(c(v("spec"), Property::HasPropertyConstraint, v(&constraint))));
        groups.push(Group::Pattern(c(
            v(&constraint),
            Property::ConstraintProperty,
            Node::iri(property.iri()),
        )));
        groups.push(Group::Pattern(c(v(&constraint), Property::ConstraintValue, value.clone())));
    }

    if token_side {
        groups.push(membership("token", criteria.token_class.filter(|_| !class_on_task).unwrap_or(Class::EthereumToken)));
    }
    if let Some(owner) = &criteria.owner {
        groups.push(Group::Pattern(c(v("token"), Property::HasEthereumTokenEndurantFeature, v("feature"))));
        groups.push(Group::Pattern(c(
            v("feature"),
            Property::Type,
            class_node(Class::EthereumWalletOwnerEndurantFeature),
        )));
        groups.push(Group::NotExists(vec![c(
            v("feature"),
            Property::Type,
            class_node(Class::DeprecatedEthereumTokenEndurantFeature),
        )]));
        groups.push(Group::Pattern(c(v("feature"), Property::IsInTheWalletOf, v("wallet"))));
        groups.push(Group::Pattern(c(v("wallet"), Property::HasAddress, address_literal(owner))));
    }
    if agent_side && token_side {
        groups.push(Group::Pattern(c(v("token"), Property::IsManagedBy, v("agent"))));
    }

    let mut projection = Vec::new();
    if agent_side {
        projection.push("agent".to_string());
    }
    if token_side {
        projection.push("token".to_string());
    }
    Ok(QueryPlan { groups, projection })
}

/// Compiles and runs `criteria`, returning the first projected column.
pub fn find(graph: &Graph, criteria: &Criteria) -> Result<Vec<Iri>, DiscoveryError> {
    let plan = compile_criteria(criteria)?;
    Ok(execute(&plan, graph)
        .into_iter()
        .filter_map(|row| row.into_iter().next().and_then(|t| t.as_iri().cloned()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistoryEntry {
    pub owner: Address,
    pub tx_hash: Option<H256>,
    /// The modification activity that introduced this owner, or the mint plan
    /// execution for the first entry.
    pub activity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenHistory {
    pub token: String,
    pub entries: Vec<HistoryEntry>,
    pub burned: bool,
}

fn token_iri(graph: &Graph, contract: &Address, token_id: &TokenId) -> Result<Iri, DiscoveryError> {
    find_token(graph, contract, token_id).ok_or_else(|| DiscoveryError::NotFound {
        contract: *contract,
        token_id: token_id.clone(),
    })
}

/// Owners of the token from mint onwards, one entry per owner feature.
pub fn token_history(graph: &Graph, contract: &Address, token_id: &TokenId) -> Result<TokenHistory, DiscoveryError> {
    let token = token_iri(graph, contract, token_id)?;
    let chain = feature_chain(graph, &token).map_err(DiscoveryError::Inconsistent)?;
    let mut entries = Vec::with_capacity(chain.len());
    for feature in &chain {
        let wallet = graph
            .object_iri(feature, Property::IsInTheWalletOf)
            .ok_or_else(|| DiscoveryError::Inconsistent(format!("{feature} names no wallet")))?;
        let owner = account_address(graph, &wallet)
            .ok_or_else(|| DiscoveryError::Inconsistent(format!("{wallet} has no address")))?;
        let plan = graph.object_iri(feature, Property::IntroducedBy);
        let tx_hash = plan
            .as_ref()
            .and_then(|p| graph.object_literal(p, Property::HasTransactionHash))
            .and_then(|l| l.lexical().parse().ok());
        let activity = graph
            .subjects_with(Property::HasEthereumTokenFeatureModificationResult, &Term::Iri(feature.clone()))
            .into_iter()
            .next()
            .or(plan)
            .map(|a| a.to_string())
            .unwrap_or_default();
        entries.push(HistoryEntry {
            owner,
            tx_hash,
            activity,
        });
    }
    Ok(TokenHistory {
        token: token.to_string(),
        entries,
        burned: graph.is_a(&token, Class::BurnedEthereumToken),
    })
}

/// The wallet holding the token's unique active owner feature.
pub fn owner_of(graph: &Graph, contract: &Address, token_id: &TokenId) -> Result<Address, DiscoveryError> {
    let token = token_iri(graph, contract, token_id)?;
    if graph.is_a(&token, Class::BurnedEthereumToken) {
        return Err(DiscoveryError::TokenBurned {
            contract: *contract,
            token_id: token_id.clone(),
        });
    }
    current_owner_account(graph, &token)
        .and_then(|account| account_address(graph, &account))
        .ok_or_else(|| DiscoveryError::Inconsistent(format!("{token} has no unique owner")))
}
