use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{Class, Individual, Iri, Property, Term};

use super::BehaviorError;

/// How a task element designates the entity it talks about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reference {
    /// A well-known entity, matched by IRI identity or `owl:sameAs`.
    Exact(Iri),
    /// Any entity satisfying the template's constraints.
    AsNew(ReferenceTemplateSpec),
}

impl Reference {
    pub fn exact(individual: Individual) -> Reference {
        Reference::Exact(individual.iri())
    }

    pub fn as_spec(&self) -> Option<&ReferenceTemplateSpec> {
        match self {
            Reference::AsNew(spec) => Some(spec),
            Reference::Exact(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceTemplateSpec {
    pub iri: Iri,
    pub required_classes: BTreeSet<Iri>,
    pub required_property_values: BTreeSet<(Iri, Term)>,
}

impl ReferenceTemplateSpec {
    pub fn new(
        iri: Iri,
        required_classes: impl IntoIterator<Item = Iri>,
        required_property_values: impl IntoIterator<Item = (Iri, Term)>,
    ) -> Result<Self, BehaviorError> {
        let spec = ReferenceTemplateSpec {
            iri,
            required_classes: required_classes.into_iter().collect(),
            required_property_values: required_property_values.into_iter().collect(),
        };
        if spec.required_classes.is_empty() && spec.required_property_values.is_empty() {
            return Err(BehaviorError::EmptyTemplate(spec.iri.to_string()));
        }
        Ok(spec)
    }

    pub fn of_class(iri: Iri, class: Class) -> Self {
        ReferenceTemplateSpec::new(iri, [class.iri()], []).expect("one class constraint")
    }

    pub fn with_value(mut self, property: Property, value: impl Into<Term>) -> Self {
        self.required_property_values
            .insert((property.iri(), value.into()));
        self
    }

    /// True when every constraint of `other` is also a constraint of `self`.
    pub fn subsumes_constraints_of(&self, other: &ReferenceTemplateSpec) -> bool {
        self.required_classes.is_superset(&other.required_classes)
            && self
                .required_property_values
                .is_superset(&other.required_property_values)
    }
}

/// The six ERC721 functions described by the template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Mint,
    Transfer,
    Burn,
    Approve,
    ApproveAll,
    OwnerOf,
}

impl TaskKind {
    pub const ALL: [TaskKind; 6] = [
        TaskKind::Mint,
        TaskKind::Transfer,
        TaskKind::Burn,
        TaskKind::Approve,
        TaskKind::ApproveAll,
        TaskKind::OwnerOf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Mint => "mint",
            TaskKind::Transfer => "transfer",
            TaskKind::Burn => "burn",
            TaskKind::Approve => "approve",
            TaskKind::ApproveAll => "setApprovalForAll",
            TaskKind::OwnerOf => "ownerOf",
        }
    }
}

/// A slot of a task description. Inputs and outputs are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Operator,
    Argument,
    Object,
    Input(usize),
    Output(usize),
}

impl Position {
    /// The plan-execution predicate that records what was bound at this position.
    pub fn binding_property(self) -> Option<Property> {
        match self {
            Position::Object => Some(Property::BindsObject),
            Position::Input(0) => Some(Property::BindsInput1),
            Position::Input(1) => Some(Property::BindsInput2),
            Position::Input(2) => Some(Property::BindsInput3),
            Position::Output(0) => Some(Property::BindsOutput1),
            _ => None,
        }
    }
}

pub type Bindings = BTreeMap<Position, Iri>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskDescription {
    pub iri: Iri,
    pub operator: Reference,
    pub operator_argument: Reference,
    pub object: Option<Reference>,
    pub input_parameters: Vec<Reference>,
    pub output_parameters: Vec<Reference>,
}

impl TaskDescription {
    /// Every (position, reference) pair in canonical order.
    pub fn positions(&self) -> Vec<(Position, &Reference)> {
        let mut out = vec![
            (Position::Operator, &self.operator),
            (Position::Argument, &self.operator_argument),
        ];
        if let Some(object) = &self.object {
            out.push((Position::Object, object));
        }
        out.extend(
            self.input_parameters
                .iter()
                .enumerate()
                .map(|(i, r)| (Position::Input(i), r)),
        );
        out.extend(
            self.output_parameters
                .iter()
                .enumerate()
                .map(|(i, r)| (Position::Output(i), r)),
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub iri: Iri,
    pub kind: TaskKind,
    pub tasks: Vec<TaskDescription>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Before,
    After,
}

impl Timing {
    pub fn name(self) -> &'static str {
        match self {
            Timing::Before => "before",
            Timing::After => "after",
        }
    }
}

/// One hop along a role path from the candidate activity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Out(Property),
    In(Property),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoleValue {
    Param(Position),
    Const(Iri),
}

/// The entity reached by following `path` from the candidate must be `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleConstraint {
    pub path: Vec<Step>,
    pub value: RoleValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityPattern {
    pub iri: Iri,
    pub class: Class,
    pub excluded_classes: Vec<Class>,
    pub roles: Vec<RoleConstraint>,
    /// Only activities that were not revoked at evaluation time qualify.
    pub require_active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditional {
    pub iri: Iri,
    pub task: Iri,
    pub operator: Iri,
    pub pattern: ActivityPattern,
    pub timing: Timing,
}

impl Conditional {
    /// Task positions the pattern reads.
    pub fn variables(&self) -> BTreeSet<Position> {
        self.pattern
            .roles
            .iter()
            .filter_map(|r| match r.value {
                RoleValue::Param(p) => Some(p),
                RoleValue::Const(_) => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorTemplate {
    pub iri: Iri,
    pub goals: Vec<Goal>,
    pub conditionals: Vec<Conditional>,
}

impl BehaviorTemplate {
    pub fn goal(&self, kind: TaskKind) -> &Goal {
        self.goals
            .iter()
            .find(|g| g.kind == kind)
            .expect("template has one goal per task kind")
    }

    pub fn task(&self, kind: TaskKind) -> &TaskDescription {
        &self.goal(kind).tasks[0]
    }

    pub fn tasks(&self) -> impl Iterator<Item = &TaskDescription> {
        self.goals.iter().flat_map(|g| g.tasks.iter())
    }

    pub fn task_by_iri(&self, iri: &Iri) -> Option<&TaskDescription> {
        self.tasks().find(|t| t.iri == *iri)
    }

    pub fn conditional_for(&self, task: &Iri) -> Option<&Conditional> {
        self.conditionals.iter().find(|c| c.task == *task)
    }
}
