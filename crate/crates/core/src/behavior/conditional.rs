use std::collections::BTreeSet;

use crate::ontology::{Graph, Iri, Property, Term};

use super::model::{Bindings, Conditional, RoleValue, Step};
use super::BehaviorError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub holds: bool,
    /// The activity (or feature) that satisfied the pattern.
    pub witness: Option<Iri>,
}

fn follow(graph: &Graph, from: &Iri, path: &[Step]) -> BTreeSet<Iri> {
    let mut frontier = BTreeSet::from([from.clone()]);
    for step in path {
        let mut next = BTreeSet::new();
        for node in &frontier {
            match step {
                Step::Out(p) => next.extend(graph.object_iris(node, *p)),
                Step::In(p) => next.extend(graph.subjects_with(*p, &Term::Iri(node.clone()))),
            }
        }
        frontier = next;
    }
    frontier
}

fn integer(graph: &Graph, subject: &Iri, property: Property) -> Option<u64> {
    graph
        .object_literal(subject, property)
        .and_then(|l| l.lexical().parse().ok())
}

/// Whether an activity counts as active at `as_of` (or now, when `None`).
pub fn is_active(graph: &Graph, activity: &Iri, as_of: Option<u64>) -> bool {
    let revoked = integer(graph, activity, Property::IsRevokedAt);
    match as_of {
        None => revoked.is_none(),
        Some(at) => {
            integer(graph, activity, Property::HasSequence).is_none_or(|s| s <= at)
                && revoked.is_none_or(|r| r > at)
        }
    }
}

/// Closed-world existence check: is there an instance of the pattern's class
/// whose role paths reach the bound entities?
pub fn evaluate_conditional(
    cond: &Conditional,
    bindings: &Bindings,
    graph: &Graph,
    as_of: Option<u64>,
) -> Result<Evaluation, BehaviorError> {
    let mut targets = Vec::with_capacity(cond.pattern.roles.len());
    for role in &cond.pattern.roles {
        let target = match &role.value {
            RoleValue::Param(position) => bindings
                .get(position)
                .cloned()
                .ok_or(BehaviorError::IncompleteBindings(*position))?,
            RoleValue::Const(iri) => iri.clone(),
        };
        targets.push((role, target));
    }
    let pattern = &cond.pattern;
    for candidate in graph.instances_of(pattern.class) {
        if pattern.excluded_classes.iter().any(|c| graph.is_a(&candidate, *c)) {
            continue;
        }
        if pattern.require_active && !is_active(graph, &candidate, as_of) {
            continue;
        }
        let all_roles = targets.iter().all(|(role, target)| {
            follow(graph, &candidate, &role.path)
                .iter()
                .any(|reached| graph.same_entity(reached, target))
        });
        if all_roles {
            return Ok(Evaluation {
                holds: true,
                witness: Some(candidate),
            });
        }
    }
    Ok(Evaluation {
        holds: false,
        witness: None,
    })
}
