use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::vocab::{Class, Individual, Property, EXT_NS, ONTOLOGY_NS, OWL_NS, RDF_NS};
use super::{Iri, Literal, OntologyError, Term, Triple};

/// In-memory triple store with set semantics and `owl:sameAs` aware identity.
///
/// Only asserted class memberships are stored; [`Graph::is_instance`] walks the
/// static hierarchy in [`Class::ancestors`].
#[derive(Debug, Clone)]
pub struct Graph {
    spo: BTreeMap<Iri, BTreeMap<Iri, BTreeSet<Term>>>,
    pos: BTreeMap<Iri, BTreeMap<Term, BTreeSet<Iri>>>,
    len: usize,
    same_as: BTreeMap<Iri, BTreeSet<Iri>>,
    extensions: BTreeSet<String>,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Graph {
            spo: BTreeMap::new(),
            pos: BTreeMap::new(),
            len: 0,
            same_as: BTreeMap::new(),
            extensions: [EXT_NS.to_string()].into(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Allows predicates and classes under `namespace` in addition to the fixed vocabulary.
    pub fn register_extension(&mut self, namespace: impl Into<String>) {
        self.extensions.insert(namespace.into());
    }

    fn is_registered(&self, iri: &Iri) -> bool {
        self.extensions.iter().any(|ns| iri.as_str().starts_with(ns.as_str()))
    }

    fn check_predicate(&self, predicate: &Iri) -> Result<(), OntologyError> {
        if Property::from_iri(predicate).is_some() || self.is_registered(predicate) {
            Ok(())
        } else {
            Err(OntologyError::UnknownVocabularyTerm(predicate.to_string()))
        }
    }

    /// Inserts a triple. Returns `false` when it was already present.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, OntologyError> {
        self.check_predicate(&triple.predicate)?;
        let Triple {
            subject,
            predicate,
            object,
        } = triple;
        let fresh = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !fresh {
            return Ok(false);
        }
        if predicate == Property::SameAs.iri() {
            if let Term::Iri(other) = &object {
                self.same_as.entry(subject.clone()).or_default().insert(other.clone());
                self.same_as.entry(other.clone()).or_default().insert(subject.clone());
            }
        }
        self.pos
            .entry(predicate)
            .or_default()
            .entry(object)
            .or_default()
            .insert(subject);
        self.len += 1;
        Ok(true)
    }

    /// Insert for vocabulary-typed predicates, which cannot fail the predicate check.
    pub fn add(&mut self, subject: &Iri, predicate: Property, object: impl Into<Term>) -> bool {
        self.insert(Triple::new(subject.clone(), predicate.iri(), object))
            .expect("vocabulary predicate")
    }

    pub fn add_literal(&mut self, subject: &Iri, predicate: Property, literal: Literal) -> bool {
        self.add(subject, predicate, Term::Literal(literal))
    }

    /// Asserts `entity rdf:type class`; the class must be known or registered.
    pub fn assert_instance(&mut self, entity: &Iri, class: &Iri) -> Result<bool, OntologyError> {
        if Class::from_iri(class).is_none() && !self.is_registered(class) {
            return Err(OntologyError::UnknownVocabularyTerm(class.to_string()));
        }
        self.insert(Triple::new(entity.clone(), Property::Type.iri(), class.clone()))
    }

    pub fn assert_class(&mut self, entity: &Iri, class: Class) -> bool {
        self.add(entity, Property::Type, class.iri())
    }

    /// Writes a named vocabulary individual together with its class, if it has one.
    pub fn assert_individual(&mut self, individual: Individual) -> Iri {
        let iri = individual.iri();
        if let Some(class) = individual.class() {
            self.assert_class(&iri, class);
        }
        iri
    }

    pub fn add_same_as(&mut self, a: &Iri, b: &Iri) -> bool {
        self.add(a, Property::SameAs, b.clone())
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|p| p.get(&triple.predicate))
            .is_some_and(|o| o.contains(&triple.object))
    }

    pub fn has(&self, subject: &Iri, predicate: Property, object: &Term) -> bool {
        self.spo
            .get(subject)
            .and_then(|p| p.get(&predicate.iri()))
            .is_some_and(|o| o.contains(object))
    }

    /// All triples in (subject, predicate, object) order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, preds)| {
            preds.iter().flat_map(move |(p, objs)| {
                objs.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Iri> {
        self.spo.keys()
    }

    pub fn objects_iri(&self, subject: &Iri, predicate: &Iri) -> impl Iterator<Item = &Term> {
        self.spo
            .get(subject)
            .and_then(|p| p.get(predicate))
            .into_iter()
            .flatten()
    }

    pub fn objects(&self, subject: &Iri, predicate: Property) -> Vec<Term> {
        self.objects_iri(subject, &predicate.iri()).cloned().collect()
    }

    pub fn object_iris(&self, subject: &Iri, predicate: Property) -> Vec<Iri> {
        self.objects_iri(subject, &predicate.iri())
            .filter_map(Term::as_iri)
            .cloned()
            .collect()
    }

    pub fn object_iri(&self, subject: &Iri, predicate: Property) -> Option<Iri> {
        self.objects_iri(subject, &predicate.iri())
            .find_map(Term::as_iri)
            .cloned()
    }

    pub fn object_literal(&self, subject: &Iri, predicate: Property) -> Option<Literal> {
        self.objects_iri(subject, &predicate.iri())
            .find_map(Term::as_literal)
            .cloned()
    }

    pub fn subjects_with_iri(&self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &Iri> {
        self.pos
            .get(predicate)
            .and_then(|o| o.get(object))
            .into_iter()
            .flatten()
    }

    pub fn subjects_with(&self, predicate: Property, object: &Term) -> Vec<Iri> {
        self.subjects_with_iri(&predicate.iri(), object).cloned().collect()
    }

    /// Triples matching a pattern where `None` is a wildcard.
    pub fn matching(
        &self,
        subject: Option<&Iri>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        match (subject, predicate, object) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s.clone(), p.clone(), o.clone());
                if self.contains(&t) {
                    vec![t]
                } else {
                    vec![]
                }
            }
            (Some(s), Some(p), None) => self
                .objects_iri(s, p)
                .map(|o| Triple::new(s.clone(), p.clone(), o.clone()))
                .collect(),
            (Some(s), None, _) => self
                .spo
                .get(s)
                .into_iter()
                .flat_map(|preds| preds.iter())
                .flat_map(|(p, objs)| objs.iter().map(move |o| (p, o)))
                .filter(|(_, o)| object.is_none_or(|want| want == *o))
                .map(|(p, o)| Triple::new(s.clone(), p.clone(), o.clone()))
                .collect(),
            (None, Some(p), Some(o)) => self
                .subjects_with_iri(p, o)
                .map(|s| Triple::new(s.clone(), p.clone(), o.clone()))
                .collect(),
            (None, Some(p), None) => self
                .pos
                .get(p)
                .into_iter()
                .flat_map(|objs| objs.iter())
                .flat_map(|(o, subjects)| {
                    subjects
                        .iter()
                        .map(move |s| Triple::new(s.clone(), p.clone(), o.clone()))
                })
                .collect(),
            (None, None, _) => self
                .triples()
                .filter(|t| object.is_none_or(|want| *want == t.object))
                .collect(),
        }
    }

    /// Classes asserted for `entity` (no hierarchy expansion).
    pub fn asserted_types(&self, entity: &Iri) -> Vec<Iri> {
        self.object_iris(entity, Property::Type)
    }

    /// Membership under subclass transitivity of the fixed hierarchy.
    pub fn is_instance(&self, entity: &Iri, class: &Iri) -> bool {
        let target = Class::from_iri(class);
        self.objects_iri(entity, &Property::Type.iri())
            .filter_map(Term::as_iri)
            .any(|asserted| {
                asserted == class
                    || match (Class::from_iri(asserted), target) {
                        (Some(a), Some(t)) => a.is_subclass_of(t),
                        _ => false,
                    }
            })
    }

    pub fn is_a(&self, entity: &Iri, class: Class) -> bool {
        self.is_instance(entity, &class.iri())
    }

    /// Instances of `class` under subclass transitivity, in IRI order.
    pub fn instances_of(&self, class: Class) -> Vec<Iri> {
        let type_iri = Property::Type.iri();
        let mut out = BTreeSet::new();
        for sub in class.descendants() {
            out.extend(self.subjects_with_iri(&type_iri, &Term::Iri(sub.iri())).cloned());
        }
        out.into_iter().collect()
    }

    /// The `owl:sameAs` equivalence class of `entity`, including itself.
    pub fn same_as_closure(&self, entity: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::from([entity.clone()]);
        let mut queue = VecDeque::from([entity.clone()]);
        while let Some(next) = queue.pop_front() {
            for neighbour in self.same_as.get(&next).into_iter().flatten() {
                if seen.insert(neighbour.clone()) {
                    queue.push_back(neighbour.clone());
                }
            }
        }
        seen
    }

    pub fn same_entity(&self, a: &Iri, b: &Iri) -> bool {
        a == b || self.same_as_closure(a).contains(b)
    }

    /// Removes every triple; vocabulary registrations are kept.
    pub fn clear(&mut self) {
        self.spo.clear();
        self.pos.clear();
        self.same_as.clear();
        self.len = 0;
    }

    /// Namespaces used to split IRIs when parsing documents that share this vocabulary.
    pub fn known_namespaces(&self) -> Vec<&str> {
        let mut out = vec![RDF_NS, OWL_NS, ONTOLOGY_NS];
        out.extend(self.extensions.iter().map(String::as_str));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(local: &str) -> Iri {
        Iri::new("urn:test:", local).unwrap()
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let mut g = Graph::new();
        let x = inst("x");
        assert!(g.assert_instance(&x, &Class::EthereumTokenErc721.iri()).unwrap());
        let before = g.len();
        assert!(!g.assert_instance(&x, &Class::EthereumTokenErc721.iri()).unwrap());
        assert_eq!(g.len(), before);
    }

    #[test]
    fn instance_respects_subclass_transitivity() {
        let mut g = Graph::new();
        let x = inst("tokenX");
        g.assert_instance(&x, &Class::EthereumTokenErc721.iri()).unwrap();
        assert!(g.is_a(&x, Class::EthereumToken));
        assert!(g.is_a(&x, Class::EthereumNonFungibleToken));
        assert!(!g.is_a(&x, Class::EthereumFungibleToken));
        assert_eq!(g.instances_of(Class::EthereumToken), vec![x]);
    }

    #[test]
    fn unknown_class_rejected() {
        let mut g = Graph::new();
        let err = g
            .assert_instance(&inst("x"), &Iri::new(ONTOLOGY_NS, "NoSuchClass").unwrap())
            .unwrap_err();
        assert!(matches!(err, OntologyError::UnknownVocabularyTerm(_)));
        assert!(g.is_empty());
    }

    #[test]
    fn unknown_predicate_rejected_until_registered() {
        let mut g = Graph::new();
        let p = Iri::new("urn:other#", "rel").unwrap();
        let t = Triple::new(inst("a"), p, inst("b"));
        assert!(g.insert(t.clone()).is_err());
        g.register_extension("urn:other#");
        assert!(g.insert(t).unwrap());
    }

    #[test]
    fn same_as_closure() {
        let mut g = Graph::new();
        let (a, b, c, d) = (inst("a"), inst("b"), inst("c"), inst("d"));
        assert!(g.same_entity(&a, &a));
        assert!(!g.same_entity(&a, &b));
        g.add_same_as(&a, &b);
        g.add_same_as(&b, &c);
        assert!(g.same_entity(&a, &c));
        assert!(g.same_entity(&c, &a));
        assert!(!g.same_entity(&a, &d));
    }

    #[test]
    fn matching_patterns() {
        let mut g = Graph::new();
        let (a, b) = (inst("a"), inst("b"));
        g.add(&a, Property::Describes, b.clone());
        g.add(&b, Property::Describes, a.clone());
        let p = Property::Describes.iri();
        assert_eq!(g.matching(None, Some(&p), None).len(), 2);
        assert_eq!(g.matching(Some(&a), None, None).len(), 1);
        assert_eq!(g.matching(None, None, Some(&Term::Iri(a.clone()))).len(), 1);
        assert_eq!(g.matching(None, Some(&p), Some(&Term::Iri(b))).len(), 1);
    }
}
