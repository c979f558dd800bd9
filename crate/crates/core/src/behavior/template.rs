//! The ERC721 behavior template and its graph form.

use std::sync::LazyLock;

use crate::ontology::vocab::{EXT_NS, ONTOLOGY_NS};
use crate::ontology::{Class, Graph, Individual, Iri, Literal, Property, Term};

use super::model::{
    ActivityPattern, BehaviorTemplate, Conditional, Goal, Position, Reference, ReferenceTemplateSpec,
    RoleConstraint, RoleValue, Step, TaskDescription, TaskKind, Timing,
};

pub const ERC721_TEMPLATE_NAME: &str = "ethereum_ERC721_smart_contract_behavior_template";

fn onto(local: &str) -> Iri {
    Iri::new(ONTOLOGY_NS, local).expect("static ontology name")
}

fn ext(local: &str) -> Iri {
    Iri::new(EXT_NS, local).expect("static extension name")
}

pub fn erc721_template_iri() -> Iri {
    onto(ERC721_TEMPLATE_NAME)
}

/// IRI of the task description for `kind` inside the ERC721 template.
pub fn task_iri(kind: TaskKind) -> Iri {
    ext(&format!("erc721_{}_task", kind.name()))
}

fn token_spec(name: &str) -> Reference {
    Reference::AsNew(ReferenceTemplateSpec::of_class(onto(name), Class::EthereumTokenErc721))
}

fn eoa_spec(name: &str) -> Reference {
    Reference::AsNew(ReferenceTemplateSpec::of_class(onto(name), Class::EoaEthereumAccount))
}

fn role(path: Vec<Step>, value: RoleValue) -> RoleConstraint {
    RoleConstraint { path, value }
}

fn conditional(kind: TaskKind, pattern: ActivityPattern) -> Conditional {
    Conditional {
        iri: ext(&format!("erc721_{}_conditional", kind.name())),
        task: task_iri(kind),
        operator: Individual::Exist.iri(),
        pattern,
        timing: Timing::After,
    }
}

fn pattern_iri(kind: TaskKind) -> Iri {
    ext(&format!("erc721_{}_activity_pattern", kind.name()))
}

fn delegation_properties() -> [RoleConstraint; 2] {
    [
        role(
            vec![Step::Out(Property::HasDelegationProperty)],
            RoleValue::Const(Individual::Burn.iri()),
        ),
        role(
            vec![Step::Out(Property::HasDelegationProperty)],
            RoleValue::Const(Individual::Transfer.iri()),
        ),
    ]
}

fn build() -> BehaviorTemplate {
    let task = |kind, operator: Individual, argument: Individual, object, inputs, outputs| Goal {
        iri: ext(&format!("erc721_{}_goal", TaskKind::name(kind))),
        kind,
        tasks: vec![TaskDescription {
            iri: task_iri(kind),
            operator: Reference::exact(operator),
            operator_argument: Reference::exact(argument),
            object,
            input_parameters: inputs,
            output_parameters: outputs,
        }],
    };
    use Individual::{BlockchainDigitalToken as Token, Ownership};

    let goals = vec![
        task(
            TaskKind::Mint,
            Individual::Mint,
            Token,
            Some(token_spec("mint_ERC721_token")),
            vec![],
            vec![token_spec("mint_ERC721_token")],
        ),
        task(
            TaskKind::Transfer,
            Individual::Transfer,
            Token,
            None,
            vec![
                token_spec("transfer-1_ERC721_token"),
                eoa_spec("transfer-2_ERC721_EOA-account"),
                eoa_spec("transfer-3_ERC721_EOA-account"),
            ],
            vec![],
        ),
        task(
            TaskKind::Burn,
            Individual::Burn,
            Token,
            None,
            vec![token_spec("burn_ERC721_token")],
            vec![],
        ),
        task(
            TaskKind::Approve,
            Individual::Delegate,
            Ownership,
            None,
            vec![
                eoa_spec("approve-1_ERC721_EOA-account"),
                token_spec("approve-2_ERC721_token"),
            ],
            vec![],
        ),
        task(
            TaskKind::ApproveAll,
            Individual::Delegate,
            Ownership,
            None,
            vec![eoa_spec("setApprovalForAll_ERC721_EOA-account")],
            vec![],
        ),
        task(
            TaskKind::OwnerOf,
            Individual::Retrieve,
            Ownership,
            Some(token_spec("ownerOf-1_ERC721_token")),
            vec![token_spec("ownerOf-1_ERC721_token")],
            vec![eoa_spec("ownerOf-2_ERC721_EOA-account")],
        ),
    ];

    let conditionals = vec![
        conditional(
            TaskKind::Transfer,
            ActivityPattern {
                iri: pattern_iri(TaskKind::Transfer),
                class: Class::TransferActivity,
                excluded_classes: vec![],
                roles: vec![
                    role(
                        vec![Step::Out(Property::HasTransferSource)],
                        RoleValue::Param(Position::Input(1)),
                    ),
                    role(
                        vec![Step::Out(Property::HasTransferDestination)],
                        RoleValue::Param(Position::Input(2)),
                    ),
                    role(
                        vec![Step::Out(Property::HasTransferObject)],
                        RoleValue::Param(Position::Input(0)),
                    ),
                ],
                require_active: false,
            },
        ),
        conditional(
            TaskKind::Approve,
            ActivityPattern {
                iri: pattern_iri(TaskKind::Approve),
                class: Class::DelegationActivity,
                excluded_classes: vec![],
                roles: [
                    role(
                        vec![Step::Out(Property::HasDelegationSubject)],
                        RoleValue::Param(Position::Input(0)),
                    ),
                    role(
                        vec![Step::Out(Property::HasDelegationObject)],
                        RoleValue::Param(Position::Input(1)),
                    ),
                ]
                .into_iter()
                .chain(delegation_properties())
                .collect(),
                require_active: true,
            },
        ),
        conditional(
            TaskKind::ApproveAll,
            ActivityPattern {
                iri: pattern_iri(TaskKind::ApproveAll),
                class: Class::DelegationActivity,
                excluded_classes: vec![],
                roles: [
                    role(
                        vec![Step::Out(Property::HasDelegationSubject)],
                        RoleValue::Param(Position::Input(0)),
                    ),
                    role(
                        vec![
                            Step::Out(Property::HasDelegationObject),
                            Step::Out(Property::HasSpecificity),
                        ],
                        RoleValue::Const(Individual::Any.iri()),
                    ),
                ]
                .into_iter()
                .chain(delegation_properties())
                .collect(),
                require_active: true,
            },
        ),
        conditional(
            TaskKind::OwnerOf,
            ActivityPattern {
                iri: pattern_iri(TaskKind::OwnerOf),
                class: Class::EthereumWalletOwnerEndurantFeature,
                excluded_classes: vec![Class::DeprecatedEthereumTokenEndurantFeature],
                roles: vec![
                    role(
                        vec![Step::In(Property::HasEthereumTokenEndurantFeature)],
                        RoleValue::Param(Position::Input(0)),
                    ),
                    role(
                        vec![Step::Out(Property::IsInTheWalletOf)],
                        RoleValue::Param(Position::Output(0)),
                    ),
                ],
                require_active: false,
            },
        ),
    ];

    BehaviorTemplate {
        iri: erc721_template_iri(),
        goals,
        conditionals,
    }
}

/// The ERC721 template: one goal per standard function, each with a single task.
pub fn build_erc721_template() -> BehaviorTemplate {
    static TEMPLATE: LazyLock<BehaviorTemplate> = LazyLock::new(build);
    TEMPLATE.clone()
}

fn child(parent: &Iri, suffix: &str) -> Iri {
    Iri::new(parent.namespace(), &format!("{}_{suffix}", parent.local_name()))
        .expect("derived from a valid IRI")
}

fn write_reference(graph: &mut Graph, node: &Iri, reference: &Reference) {
    graph.assert_class(node, Class::TaskReference);
    match reference {
        Reference::Exact(target) => {
            graph.add(node, Property::RefersExactlyTo, target.clone());
        }
        Reference::AsNew(spec) => {
            graph.add(node, Property::RefersAsNewTo, spec.iri.clone());
            graph.assert_class(&spec.iri, Class::ReferenceTemplate);
            for class in &spec.required_classes {
                graph.add(&spec.iri, Property::RequiresClass, class.clone());
            }
            for (i, (property, value)) in spec.required_property_values.iter().enumerate() {
                let c = child(&spec.iri, &format!("constraint_{}", i + 1));
                graph.assert_class(&c, Class::PropertyConstraint);
                graph.add(&spec.iri, Property::HasPropertyConstraint, c.clone());
                graph.add(&c, Property::ConstraintProperty, property.clone());
                graph.add(&c, Property::ConstraintValue, value.clone());
            }
        }
    }
}

fn position_node(task: &Iri, position: Position) -> Iri {
    match position {
        Position::Operator => child(task, "operator"),
        Position::Argument => child(task, "argument"),
        Position::Object => child(task, "object"),
        Position::Input(i) => child(task, &format!("input_{}", i + 1)),
        Position::Output(i) => child(task, &format!("output_{}", i + 1)),
    }
}

fn step_text(step: &Step) -> String {
    match step {
        Step::Out(p) => format!("out:{}", p.local_name()),
        Step::In(p) => format!("in:{}", p.local_name()),
    }
}

/// Writes the template as triples. Idempotent.
pub fn write_template(graph: &mut Graph, template: &BehaviorTemplate) -> usize {
    let before = graph.len();
    graph.assert_class(&template.iri, Class::BehaviorTemplate);
    for goal in &template.goals {
        graph.assert_class(&goal.iri, Class::Goal);
        graph.add(&template.iri, Property::HasGoal, goal.iri.clone());
        for task in &goal.tasks {
            graph.assert_class(&task.iri, Class::TaskDescription);
            graph.add(&goal.iri, Property::HasTask, task.iri.clone());
            for (position, reference) in task.positions() {
                let node = position_node(&task.iri, position);
                let edge = match position {
                    Position::Operator => Property::HasOperator,
                    Position::Argument => Property::HasOperatorArgument,
                    Position::Object => Property::HasObject,
                    Position::Input(_) => Property::HasInputParameter,
                    Position::Output(_) => Property::HasOutputParameter,
                };
                graph.add(&task.iri, edge, node.clone());
                if let Position::Input(i) | Position::Output(i) = position {
                    graph.add_literal(&node, Property::HasPosition, Literal::integer(i + 1));
                }
                write_reference(graph, &node, reference);
            }
        }
    }
    for cond in &template.conditionals {
        graph.assert_class(&cond.iri, Class::Conditional);
        graph.add(&cond.task, Property::HasConditional, cond.iri.clone());
        graph.add(&cond.iri, Property::HasConditionalOperator, cond.operator.clone());
        graph.add_literal(&cond.iri, Property::HasConditionTiming, Literal::text(cond.timing.name()));
        let pattern = &cond.pattern;
        graph.add(&cond.iri, Property::HasConditionalObject, pattern.iri.clone());
        graph.assert_class(&pattern.iri, Class::ActivityPattern);
        graph.add(&pattern.iri, Property::RequiresClass, pattern.class.iri());
        for excluded in &pattern.excluded_classes {
            graph.add(&pattern.iri, Property::ExcludesClass, excluded.iri());
        }
        for (i, r) in pattern.roles.iter().enumerate() {
            let node = child(&pattern.iri, &format!("role_{}", i + 1));
            graph.assert_class(&node, Class::RoleConstraint);
            graph.add(&pattern.iri, Property::HasRoleConstraint, node.clone());
            let path: Vec<String> = r.path.iter().map(step_text).collect();
            graph.add_literal(&node, Property::ConstraintPath, Literal::text(path.join("/")));
            let value: Term = match &r.value {
                RoleValue::Param(p) => position_node(&cond.task, *p).into(),
                RoleValue::Const(iri) => iri.into(),
            };
            graph.add(&node, Property::ConstraintValue, value);
        }
    }
    for individual in [
        Individual::Mint,
        Individual::Burn,
        Individual::Transfer,
        Individual::Delegate,
        Individual::Retrieve,
    ] {
        graph.assert_individual(individual);
    }
    graph.len() - before
}
