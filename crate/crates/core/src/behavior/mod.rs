//! Behavior templates, reference matching, conditional evaluation and
//! delegation-aware authorization.

mod conditional;
mod matching;
mod model;
pub mod template;

use thiserror::Error;

pub use conditional::{evaluate_conditional, is_active, Evaluation};
pub use matching::{match_reference, match_task_request, satisfies, MatchResult, MismatchReason};
pub use model::{
    ActivityPattern, BehaviorTemplate, Bindings, Conditional, Goal, Position, Reference,
    ReferenceTemplateSpec, RoleConstraint, RoleValue, Step, TaskDescription, TaskKind, Timing,
};
pub use template::{build_erc721_template, task_iri, write_template};

use crate::ingest::Address;
use crate::lineage::{current_owner_account, find_account};
use crate::ontology::{Class, Graph, Individual, Iri, Property, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("reference template `{0}` has no constraints")]
    EmptyTemplate(String),

    #[error("{agent} is not an ERC721 smart contract agent")]
    CategoryMismatch { agent: String },

    #[error("no binding for task position {0:?}")]
    IncompleteBindings(Position),

    #[error("action `{0}` cannot be delegated (only burn and transfer)")]
    NotDelegable(String),
}

/// Links `agent` to a behavior implementing `template`, writing the template
/// into the graph. Idempotent; returns the number of new triples.
pub fn instantiate_for_agent(
    template: &BehaviorTemplate,
    agent: &Iri,
    graph: &mut Graph,
) -> Result<usize, BehaviorError> {
    if !graph.is_a(agent, Class::EthereumErc721SmartContractAgent) {
        return Err(BehaviorError::CategoryMismatch {
            agent: agent.to_string(),
        });
    }
    let before = graph.len();
    let behavior = match graph.object_iri(agent, Property::HasBehavior) {
        Some(b) => b,
        None => {
            let b = Iri::new(agent.namespace(), &format!("{}_behavior", agent.local_name()))
                .expect("derived from a valid IRI");
            graph.add(agent, Property::HasBehavior, b.clone());
            b
        }
    };
    graph.assert_class(&behavior, Class::Behavior);
    graph.add(&behavior, Property::ImplementsTemplate, template.iri.clone());
    write_template(graph, template);
    Ok(graph.len() - before)
}

/// May `operator` perform `action` on `token`? Owners always may; otherwise an
/// active delegation from the current owner must cover the token, either
/// directly or through a scope with specificity `any`.
pub fn authorize_operation(
    graph: &Graph,
    operator: &Address,
    action: &Iri,
    token: &Iri,
) -> Result<bool, BehaviorError> {
    if *action != Individual::Burn.iri() && *action != Individual::Transfer.iri() {
        return Err(BehaviorError::NotDelegable(action.to_string()));
    }
    if graph.is_a(token, Class::BurnedEthereumToken) {
        return Ok(false);
    }
    let (Some(owner), Some(account)) = (current_owner_account(graph, token), find_account(graph, operator))
    else {
        return Ok(false);
    };
    if graph.same_entity(&owner, &account) {
        return Ok(true);
    }
    let action = Term::Iri(action.clone());
    let any = Term::Iri(Individual::Any.iri());
    let token_term = Term::Iri(token.clone());
    let owner_term = Term::Iri(owner.clone());
    Ok(graph
        .subjects_with(Property::HasDelegationSubject, &Term::Iri(account))
        .into_iter()
        .filter(|d| graph.is_a(d, Class::DelegationActivity) && is_active(graph, d, None))
        .filter(|d| graph.has(d, Property::HasDelegationProperty, &action))
        .any(|d| {
            graph.has(&d, Property::HasDelegationObject, &token_term)
                || (graph.has(&d, Property::HasDelegator, &owner_term)
                    && graph
                        .object_iris(&d, Property::HasDelegationObject)
                        .iter()
                        .any(|scope| graph.has(scope, Property::HasSpecificity, &any)))
        }))
}
