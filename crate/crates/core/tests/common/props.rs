//! Randomized matching checks, driven through `TestRunner` so both the
//! property tests and the acceptance suite can run them.

use std::collections::{BTreeMap, BTreeSet};

use chain_oasis::behavior::{match_reference, satisfies, Reference, ReferenceTemplateSpec};
use chain_oasis::ontology::{Class, Graph, Iri, Literal, Property, Term};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const CLASSES: [Class; 5] = [
    Class::EthereumTokenErc721,
    Class::EthereumTokenErc20,
    Class::EoaEthereumAccount,
    Class::BurnedEthereumToken,
    Class::EthereumSmartContractAccount,
];
const PROPERTIES: [Property; 3] = [Property::HasTokenId, Property::HasContractAddress, Property::HasStatus];

pub fn entity(i: usize) -> Iri {
    Iri::new("urn:test:", &format!("e{i}")).unwrap()
}

fn value(i: usize) -> Term {
    Literal::integer(i).into()
}

#[derive(Debug, Clone)]
pub struct World {
    types: Vec<(usize, usize)>,
    values: Vec<(usize, usize, usize)>,
    same_as: Vec<(usize, usize)>,
}

impl World {
    pub fn graph(&self) -> Graph {
        let mut g = Graph::new();
        g.register_extension("urn:test:");
        for &(e, c) in &self.types {
            g.assert_class(&entity(e), CLASSES[c]);
        }
        for &(e, p, v) in &self.values {
            g.add_literal(&entity(e), PROPERTIES[p], Literal::integer(v));
        }
        for &(a, b) in &self.same_as {
            g.add_same_as(&entity(a), &entity(b));
        }
        g
    }
}

fn world() -> impl Strategy<Value = World> {
    (
        prop::collection::vec((0..6usize, 0..CLASSES.len()), 0..12),
        prop::collection::vec((0..6usize, 0..PROPERTIES.len(), 0..3usize), 0..12),
        prop::collection::vec((0..6usize, 0..6usize), 0..4),
    )
        .prop_map(|(types, values, same_as)| World { types, values, same_as })
}

type Constraints = (BTreeSet<usize>, BTreeSet<(usize, usize)>);

fn constraints() -> impl Strategy<Value = Constraints> {
    (
        prop::collection::btree_set(0..CLASSES.len(), 0..3),
        prop::collection::btree_set((0..PROPERTIES.len(), 0..3usize), 0..3),
    )
        .prop_filter("a template needs a constraint", |(c, v)| !c.is_empty() || !v.is_empty())
}

fn spec(name: &str, (classes, values): &Constraints) -> Option<ReferenceTemplateSpec> {
    ReferenceTemplateSpec::new(
        Iri::new("urn:test:", name).unwrap(),
        classes.iter().map(|&c| CLASSES[c].iri()),
        values.iter().map(|&(p, v)| (PROPERTIES[p].iri(), value(v))),
    )
    .ok()
}

/// Connected components of the undirected sameAs pairs, computed naively.
fn components(pairs: &[(usize, usize)]) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut out: BTreeMap<usize, BTreeSet<usize>> = (0..6).map(|i| (i, BTreeSet::from([i]))).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in pairs {
            let merged: BTreeSet<usize> = out[&a].union(&out[&b]).copied().collect();
            for &m in &merged {
                if out[&m] != merged {
                    out.insert(m, merged.clone());
                    changed = true;
                }
            }
        }
    }
    out
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

/// Exact references match precisely the sameAs component of their target,
/// and adding sameAs facts never loses a match.
pub fn exact_matching(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(world(), 0..6usize, prop::collection::vec((0..6usize, 0..6usize), 0..3)), |(w, target, extra)| {
            let g = w.graph();
            let reference = Reference::Exact(entity(target));
            let component = &components(&w.same_as)[&target];
            for candidate in 0..6 {
                prop_assert_eq!(
                    match_reference(&reference, &entity(candidate), &g),
                    component.contains(&candidate)
                );
            }
            let mut bigger = w.clone();
            bigger.same_as.extend(extra);
            let g2 = bigger.graph();
            for candidate in 0..6 {
                if match_reference(&reference, &entity(candidate), &g) {
                    prop_assert!(match_reference(&reference, &entity(candidate), &g2));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// A spec with more constraints never matches something a weaker spec rejects.
pub fn as_new_subsumption(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(world(), constraints(), constraints()), |(w, strong, extra)| {
            let weak = strong.clone();
            let strong = (
                strong.0.union(&extra.0).copied().collect(),
                strong.1.union(&extra.1).copied().collect(),
            );
            let (Some(strong), Some(weak)) = (spec("strong", &strong), spec("weak", &weak)) else {
                return Ok(());
            };
            prop_assert!(strong.subsumes_constraints_of(&weak));
            let g = w.graph();
            for candidate in 0..6 {
                if satisfies(&strong, &entity(candidate), &g) {
                    prop_assert!(satisfies(&weak, &entity(candidate), &g));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
