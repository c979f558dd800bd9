//! Integrity checks over a mapped graph: task conditionals on every recorded
//! plan execution, ownership uniqueness and feature-chain integrity.

use serde::Serialize;

use crate::behavior::{build_erc721_template, evaluate_conditional, BehaviorError, Bindings};
use crate::lineage::{active_owner_features, feature_chain};
use crate::ontology::{Class, Graph, Iri, Property, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A plan execution whose task conditional does not hold.
    ConditionalFailed { plan: String, conditional: String },
    /// A plan execution missing a binding its conditional reads.
    UnboundParameter { plan: String, position: String },
    /// A token with the wrong number of active owner features.
    OwnershipUniqueness { token: String, burned: bool, active: usize },
    ChainIntegrity { token: String, detail: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub plans_checked: usize,
    pub tokens_checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sequence(graph: &Graph, plan: &Iri) -> Option<u64> {
    graph
        .object_literal(plan, Property::HasSequence)
        .and_then(|l| l.lexical().parse().ok())
}

fn check_plans(graph: &Graph, report: &mut Report) {
    let template = build_erc721_template();
    for plan in graph.instances_of(Class::PlanExecution) {
        for task in graph.object_iris(&plan, Property::ExecutesTask) {
            let Some(cond) = template.conditional_for(&task) else {
                continue;
            };
            report.plans_checked += 1;
            let bindings: Bindings = cond
                .variables()
                .into_iter()
                .filter_map(|position| {
                    let property = position.binding_property()?;
                    Some((position, graph.object_iri(&plan, property)?))
                })
                .collect();
            match evaluate_conditional(cond, &bindings, graph, sequence(graph, &plan)) {
                Ok(eval) if eval.holds => {}
                Ok(_) => report.violations.push(Violation::ConditionalFailed {
                    plan: plan.to_string(),
                    conditional: cond.iri.to_string(),
                }),
                Err(BehaviorError::IncompleteBindings(position)) => {
                    report.violations.push(Violation::UnboundParameter {
                        plan: plan.to_string(),
                        position: format!("{position:?}"),
                    })
                }
                Err(other) => unreachable!("conditional evaluation only fails on bindings: {other}"),
            }
        }
    }
}

fn check_tokens(graph: &Graph, report: &mut Report) {
    for token in graph.instances_of(Class::EthereumToken) {
        report.tokens_checked += 1;
        let burned = graph.is_a(&token, Class::BurnedEthereumToken);
        let active = active_owner_features(graph, &token).len();
        if active != usize::from(!burned) {
            report.violations.push(Violation::OwnershipUniqueness {
                token: token.to_string(),
                burned,
                active,
            });
        }
        let chain = match feature_chain(graph, &token) {
            Ok(chain) => chain,
            Err(detail) => {
                report.violations.push(Violation::ChainIntegrity {
                    token: token.to_string(),
                    detail,
                });
                continue;
            }
        };
        let modifications = chain
            .iter()
            .map(|f| {
                graph
                    .subjects_with(Property::HasEthereumTokenFeatureModificationSource, &Term::Iri(f.clone()))
                    .len()
            })
            .sum::<usize>();
        if chain.len() != modifications + 1 {
            report.violations.push(Violation::ChainIntegrity {
                token: token.to_string(),
                detail: format!("{} features but {modifications} modifications", chain.len()),
            });
        }
        let last = chain.last().expect("chains are non-empty");
        let last_deprecated = graph.is_a(last, Class::DeprecatedEthereumTokenEndurantFeature);
        if last_deprecated != burned {
            report.violations.push(Violation::ChainIntegrity {
                token: token.to_string(),
                detail: format!("last feature {last} does not match the token's burned state"),
            });
        }
    }
}

/// Runs every check. Never mutates the graph.
pub fn validate(graph: &Graph) -> Report {
    let mut report = Report::default();
    check_plans(graph, &mut report);
    check_tokens(graph, &mut report);
    report
}
