use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::ontology::{render_term_nt, Graph, Iri, Term};

/// A position in a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Var(String),
    Term(Term),
}

impl Node {
    pub fn var(name: &str) -> Node {
        Node::Var(name.to_string())
    }

    pub fn iri(iri: Iri) -> Node {
        Node::Term(Term::Iri(iri))
    }

    fn render(&self) -> String {
        match self {
            Node::Var(v) => format!("?{v}"),
            Node::Term(t) => render_term_nt(t),
        }
    }
}

impl From<Term> for Node {
    fn from(t: Term) -> Node {
        Node::Term(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub subject: Node,
    pub predicate: Iri,
    pub object: Node,
}

impl Clause {
    pub fn new(subject: Node, predicate: Iri, object: impl Into<Node>) -> Clause {
        Clause {
            subject,
            predicate,
            object: object.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Pattern(Clause),
    /// Each branch is a conjunction; the group matches if any branch does.
    Union(Vec<Vec<Clause>>),
    NotExists(Vec<Clause>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    pub groups: Vec<Group>,
    pub projection: Vec<String>,
}

pub type Row = BTreeMap<String, Term>;

fn clause_vars(clause: &Clause, out: &mut BTreeSet<String>) {
    for node in [&clause.subject, &clause.object] {
        if let Node::Var(v) = node {
            out.insert(v.clone());
        }
    }
}

impl QueryPlan {
    /// Variables bound by positive clauses (every branch of a union counts).
    pub fn bound_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for group in &self.groups {
            match group {
                Group::Pattern(c) => clause_vars(c, &mut out),
                Group::Union(branches) => branches.iter().flatten().for_each(|c| clause_vars(c, &mut out)),
                Group::NotExists(_) => {}
            }
        }
        out
    }

    /// SELECT query text using full IRIs, so it needs no prefix table.
    pub fn to_sparql(&self) -> String {
        let mut out = String::from("SELECT DISTINCT");
        for v in &self.projection {
            let _ = write!(out, " ?{v}");
        }
        out.push_str("\nWHERE {\n");
        let clause = |c: &Clause| {
            format!("{} <{}> {} .", c.subject.render(), c.predicate, c.object.render())
        };
        let block = |clauses: &[Clause]| {
            clauses.iter().map(clause).collect::<Vec<_>>().join(" ")
        };
        for group in &self.groups {
            match group {
                Group::Pattern(c) => {
                    let _ = writeln!(out, "  {}", clause(c));
                }
                Group::Union(branches) => {
                    let rendered: Vec<String> =
                        branches.iter().map(|b| format!("{{ {} }}", block(b))).collect();
                    let _ = writeln!(out, "  {}", rendered.join(" UNION "));
                }
                Group::NotExists(clauses) => {
                    let _ = writeln!(out, "  FILTER NOT EXISTS {{ {} }}", block(clauses));
                }
            }
        }
        out.push('}');
        if !self.projection.is_empty() {
            out.push_str("\nORDER BY");
            for v in &self.projection {
                let _ = write!(out, " ?{v}");
            }
        }
        out.push('\n');
        out
    }
}

fn resolve<'a>(node: &'a Node, row: &'a Row) -> Option<&'a Term> {
    match node {
        Node::Var(v) => row.get(v),
        Node::Term(t) => Some(t),
    }
}

fn extend(graph: &Graph, clause: &Clause, row: &Row) -> Vec<Row> {
    let subject = match resolve(&clause.subject, row) {
        Some(Term::Iri(iri)) => Some(iri),
        Some(Term::Literal(_)) => return Vec::new(),
        None => None,
    };
    let object = resolve(&clause.object, row);
    graph
        .matching(subject, Some(&clause.predicate), object)
        .into_iter()
        .filter_map(|t| {
            let mut next = row.clone();
            for (node, value) in [(&clause.subject, Term::Iri(t.subject)), (&clause.object, t.object)] {
                if let Node::Var(v) = node {
                    match next.get(v) {
                        Some(bound) if *bound != value => return None,
                        Some(_) => {}
                        None => {
                            next.insert(v.clone(), value);
                        }
                    }
                }
            }
            Some(next)
        })
        .collect()
}

fn conjunction(graph: &Graph, clauses: &[Clause], rows: Vec<Row>) -> Vec<Row> {
    clauses.iter().fold(rows, |rows, clause| {
        rows.iter().flat_map(|row| extend(graph, clause, row)).collect()
    })
}

/// Evaluates the plan with set semantics and returns the projected rows sorted.
pub fn execute(plan: &QueryPlan, graph: &Graph) -> Vec<Vec<Term>> {
    let mut rows = vec![Row::new()];
    for group in &plan.groups {
        rows = match group {
            Group::Pattern(c) => conjunction(graph, std::slice::from_ref(c), rows),
            Group::Union(branches) => rows
                .iter()
                .flat_map(|row| {
                    branches
                        .iter()
                        .flat_map(|b| conjunction(graph, b, vec![row.clone()]))
                        .collect::<Vec<_>>()
                })
                .collect(),
            Group::NotExists(clauses) => rows
                .into_iter()
                .filter(|row| conjunction(graph, clauses, vec![row.clone()]).is_empty())
                .collect(),
        };
    }
    let projected: BTreeSet<Vec<Term>> = rows
        .iter()
        .map(|row| {
            plan.projection
                .iter()
                .map(|v| row.get(v).cloned().expect("projected variables are bound"))
                .collect()
        })
        .collect();
    projected.into_iter().collect()
}
