use crate::ontology::{Graph, Iri};

use super::model::{Bindings, Position, Reference, ReferenceTemplateSpec, TaskDescription};

/// Does `candidate` satisfy every constraint of `spec`?
pub fn satisfies(spec: &ReferenceTemplateSpec, candidate: &Iri, graph: &Graph) -> bool {
    spec.required_classes
        .iter()
        .all(|class| graph.is_instance(candidate, class))
        && spec
            .required_property_values
            .iter()
            .all(|(p, v)| graph.objects_iri(candidate, p).any(|o| o == v))
}

pub fn match_reference(reference: &Reference, candidate: &Iri, graph: &Graph) -> bool {
    match reference {
        Reference::Exact(target) => graph.same_entity(target, candidate),
        Reference::AsNew(spec) => satisfies(spec, candidate, graph),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MismatchReason {
    ArityMismatch {
        requested: (usize, usize),
        offered: (usize, usize),
    },
    /// The offered task has no element at a position the request constrains.
    MissingPosition(Position),
    Incompatible(Position),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub matched: bool,
    pub bindings: Bindings,
    pub reason: Option<MismatchReason>,
}

impl MatchResult {
    fn fail(reason: MismatchReason) -> Self {
        MatchResult {
            matched: false,
            bindings: Bindings::new(),
            reason: Some(reason),
        }
    }
}

/// Matches one requested element against one offered element, returning the
/// entity the request binds to.
fn match_element(requested: &Reference, offered: &Reference, graph: &Graph) -> Option<Iri> {
    match offered {
        Reference::Exact(entity) => match_reference(requested, entity, graph).then(|| entity.clone()),
        Reference::AsNew(offered_spec) => match requested {
            // An open slot satisfies a requested template only when it promises
            // at least everything the request asks for.
            Reference::AsNew(requested_spec) => offered_spec
                .subsumes_constraints_of(requested_spec)
                .then(|| offered_spec.iri.clone()),
            Reference::Exact(_) => None,
        },
    }
}

/// Position-sensitive task matching. A request without an object leaves the
/// offered object unconstrained.
pub fn match_task_request(request: &TaskDescription, offered: &TaskDescription, graph: &Graph) -> MatchResult {
    let requested_arity = (request.input_parameters.len(), request.output_parameters.len());
    let offered_arity = (offered.input_parameters.len(), offered.output_parameters.len());
    if requested_arity != offered_arity {
        return MatchResult::fail(MismatchReason::ArityMismatch {
            requested: requested_arity,
            offered: offered_arity,
        });
    }
    let offered_positions = offered.positions();
    let mut bindings = Bindings::new();
    for (position, requested) in request.positions() {
        let Some((_, offered_ref)) = offered_positions.iter().find(|(p, _)| *p == position) else {
            return MatchResult::fail(MismatchReason::MissingPosition(position));
        };
        match match_element(requested, offered_ref, graph) {
            Some(entity) => {
                bindings.insert(position, entity);
            }
            None => return MatchResult::fail(MismatchReason::Incompatible(position)),
        }
    }
    MatchResult {
        matched: true,
        bindings,
        reason: None,
    }
}
