//! N-Triples and Turtle emission and parsing.
//!
//! N-Triples output is sorted by the rendered (subject, predicate, object)
//! tuple so exports diff cleanly. Turtle output uses a fixed prefix block and
//! the same ordering, grouped by subject.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::naming::DEFAULT_INSTANCE_NS;
use super::vocab::{Property, EXT_NS, ONTOLOGY_NS, OWL_NS, RDF_NS, XSD_NS};
use super::{Datatype, Graph, Iri, Literal, OntologyError, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    NTriples,
    Turtle,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ntriples" | "nt" | "n-triples" => Ok(Format::NTriples),
            "turtle" | "ttl" => Ok(Format::Turtle),
            other => Err(format!("unknown format `{other}` (expected ntriples or turtle)")),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::NTriples => "nt",
            Format::Turtle => "ttl",
        }
    }
}

fn escape_string(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

pub fn render_term_nt(term: &Term) -> String {
    match term {
        Term::Iri(iri) => format!("<{iri}>"),
        Term::Literal(lit) => {
            let mut out = String::from("\"");
            escape_string(lit.lexical(), &mut out);
            out.push('"');
            if lit.datatype() != Datatype::Text {
                let _ = write!(out, "^^<{}>", lit.datatype().iri_str());
            }
            out
        }
    }
}

fn sorted_rendered(graph: &Graph) -> Vec<(String, String, String)> {
    let mut rows: Vec<_> = graph
        .triples()
        .map(|t| {
            (
                format!("<{}>", t.subject),
                format!("<{}>", t.predicate),
                render_term_nt(&t.object),
            )
        })
        .collect();
    rows.sort();
    rows
}

pub fn serialize(graph: &Graph, format: Format) -> Vec<u8> {
    serialize_with_namespace(graph, format, DEFAULT_INSTANCE_NS)
}

/// Like [`serialize`]; `instance_ns` is bound to the `inst:` prefix in Turtle output.
pub fn serialize_with_namespace(graph: &Graph, format: Format, instance_ns: &str) -> Vec<u8> {
    match format {
        Format::NTriples => {
            let mut out = String::new();
            for (s, p, o) in sorted_rendered(graph) {
                let _ = writeln!(out, "{s} {p} {o} .");
            }
            out.into_bytes()
        }
        Format::Turtle => write_turtle(graph, instance_ns).into_bytes(),
    }
}

fn prefix_table(instance_ns: &str) -> Vec<(&'static str, String)> {
    vec![
        ("rdf", RDF_NS.to_string()),
        ("owl", OWL_NS.to_string()),
        ("xsd", XSD_NS.to_string()),
        ("oasis", ONTOLOGY_NS.to_string()),
        ("ext", EXT_NS.to_string()),
        ("inst", instance_ns.to_string()),
    ]
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
        && local
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn turtle_iri(iri: &Iri, prefixes: &[(&str, String)]) -> String {
    let best = prefixes
        .iter()
        .filter(|(_, ns)| iri.as_str().starts_with(ns.as_str()))
        .max_by_key(|(_, ns)| ns.len());
    if let Some((name, ns)) = best {
        let local = &iri.as_str()[ns.len()..];
        if is_simple_local(local) {
            return format!("{name}:{local}");
        }
    }
    format!("<{iri}>")
}

fn turtle_term(term: &Term, prefixes: &[(&str, String)]) -> String {
    match term {
        Term::Iri(iri) => turtle_iri(iri, prefixes),
        Term::Literal(lit) => {
            let mut out = String::from("\"");
            escape_string(lit.lexical(), &mut out);
            out.push('"');
            if lit.datatype() != Datatype::Text {
                let dt = Iri::parse(lit.datatype().iri_str()).expect("datatype IRI");
                let _ = write!(out, "^^{}", turtle_iri(&dt, prefixes));
            }
            out
        }
    }
}

/// Predicate -> objects, keyed by rendered N-Triples form.
type PredicateObjects = BTreeMap<String, (Iri, BTreeMap<String, Term>)>;

fn write_turtle(graph: &Graph, instance_ns: &str) -> String {
    let prefixes = prefix_table(instance_ns);
    let mut out = String::new();
    for (name, ns) in &prefixes {
        let _ = writeln!(out, "@prefix {name}: <{ns}> .");
    }

    let mut grouped: BTreeMap<String, (Iri, PredicateObjects)> = BTreeMap::new();
    for t in graph.triples() {
        let entry = grouped
            .entry(format!("<{}>", t.subject))
            .or_insert_with(|| (t.subject.clone(), BTreeMap::new()));
        let preds = entry
            .1
            .entry(format!("<{}>", t.predicate))
            .or_insert_with(|| (t.predicate.clone(), BTreeMap::new()));
        preds.1.insert(render_term_nt(&t.object), t.object);
    }

    let type_iri = Property::Type.iri();
    for (subject, preds) in grouped.values() {
        out.push('\n');
        out.push_str(&turtle_iri(subject, &prefixes));
        let count = preds.len();
        for (i, (predicate, objects)) in preds.values().enumerate() {
            let verb = if *predicate == type_iri {
                "a".to_string()
            } else {
                turtle_iri(predicate, &prefixes)
            };
            let objs: Vec<String> = objects.values().map(|o| turtle_term(o, &prefixes)).collect();
            let sep = if i == 0 { " " } else { "    " };
            let end = if i + 1 == count { " ." } else { " ;" };
            let _ = writeln!(out, "{sep}{verb} {}{end}", objs.join(" , "));
        }
    }
    out
}

pub fn parse(bytes: &[u8], format: Format) -> Result<Graph, OntologyError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        OntologyError::parse(line, "invalid UTF-8")
    })?;
    let mut graph = Graph::new();
    let mut parser = Parser::new(text, &graph);
    match format {
        Format::NTriples => parser.ntriples(&mut graph)?,
        Format::Turtle => parser.turtle(&mut graph)?,
    }
    Ok(graph)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    prefixes: BTreeMap<String, String>,
    namespaces: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, graph: &Graph) -> Self {
        let mut namespaces: Vec<String> =
            graph.known_namespaces().into_iter().map(String::from).collect();
        namespaces.push(DEFAULT_INSTANCE_NS.to_string());
        Parser {
            src,
            pos: 0,
            line: 1,
            prefixes: BTreeMap::new(),
            namespaces,
        }
    }

    fn err(&self, message: impl Into<String>) -> OntologyError {
        OntologyError::parse(self.line, message)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn expect(&mut self, want: char) -> Result<(), OntologyError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    /// Skips spaces and tabs, plus newlines and comments when `newlines` is set.
    fn skip_ws(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' => {
                    self.bump();
                }
                '\n' | '\r' if newlines => {
                    self.bump();
                }
                '#' if newlines => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn make_iri(&self, full: &str) -> Result<Iri, OntologyError> {
        let mut spaces: Vec<&str> = self.namespaces.iter().map(String::as_str).collect();
        spaces.extend(self.prefixes.values().map(String::as_str));
        Iri::parse_with_namespaces(full, spaces).map_err(|e| self.err(e.to_string()))
    }

    fn read_uchar(&mut self, digits: usize) -> Result<char, OntologyError> {
        let hex: String = (0..digits).filter_map(|_| self.bump()).collect();
        u32::from_str_radix(&hex, 16)
            .ok()
            .filter(|_| hex.len() == digits)
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(format!("invalid unicode escape `{hex}`")))
    }

    fn iri_ref(&mut self) -> Result<Iri, OntologyError> {
        let full = self.iri_ref_raw()?;
        self.make_iri(&full)
    }

    fn iri_ref_raw(&mut self) -> Result<String, OntologyError> {
        self.expect('<')?;
        let mut full = String::new();
        loop {
            if matches!(self.peek(), Some('\n') | None) {
                return Err(self.err("unterminated IRI"));
            }
            match self.bump() {
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => full.push(self.read_uchar(4)?),
                    Some('U') => full.push(self.read_uchar(8)?),
                    _ => return Err(self.err("invalid escape in IRI")),
                },
                Some('\n') | None => return Err(self.err("unterminated IRI")),
                Some(c) => full.push(c),
            }
        }
        Ok(full)
    }

    fn string(&mut self) -> Result<String, OntologyError> {
        let quote = self.bump().ok_or_else(|| self.err("expected string"))?;
        let mut out = String::new();
        loop {
            if matches!(self.peek(), Some('\n') | None) {
                return Err(self.err("unterminated string"));
            }
            match self.bump() {
                Some(c) if c == quote => return Ok(out),
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.read_uchar(4)?,
                        Some('U') => self.read_uchar(8)?,
                        _ => return Err(self.err("invalid escape in string")),
                    };
                    out.push(c);
                }
                Some('\n') | None => return Err(self.err("unterminated string")),
                Some(c) => out.push(c),
            }
        }
    }

    fn literal_with_datatype(&mut self, lexical: String, turtle: bool) -> Result<Literal, OntologyError> {
        if self.peek() == Some('@') {
            return Err(self.err("language-tagged literals are not supported"));
        }
        if self.rest().starts_with("^^") {
            self.bump();
            self.bump();
            let dt = if turtle { self.iri()? } else { self.iri_ref()? };
            let datatype = Datatype::from_iri_str(dt.as_str())
                .ok_or_else(|| self.err(format!("unsupported datatype `{dt}`")))?;
            Literal::new(lexical, datatype).map_err(|e| self.err(e.to_string()))
        } else {
            Ok(Literal::text(lexical))
        }
    }

    fn nt_object(&mut self) -> Result<Term, OntologyError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('"') => {
                let lexical = self.string()?;
                Ok(Term::Literal(self.literal_with_datatype(lexical, false)?))
            }
            Some('_') => Err(self.err("blank nodes are not supported")),
            _ => Err(self.err("expected IRI or literal")),
        }
    }

    fn ntriples(&mut self, graph: &mut Graph) -> Result<(), OntologyError> {
        loop {
            self.skip_ws(false);
            match self.peek() {
                None => return Ok(()),
                Some('\n') | Some('\r') => {
                    self.bump();
                    continue;
                }
                Some('#') => {
                    self.skip_ws(true);
                    continue;
                }
                _ => {}
            }
            if self.peek() == Some('_') {
                return Err(self.err("blank nodes are not supported"));
            }
            let subject = self.iri_ref()?;
            self.skip_ws(false);
            let predicate = self.iri_ref()?;
            self.skip_ws(false);
            let object = self.nt_object()?;
            self.skip_ws(false);
            self.expect('.')?;
            self.skip_ws(false);
            if self.peek() == Some('#') {
                while !matches!(self.peek(), Some('\n') | None) {
                    self.bump();
                }
            }
            match self.peek() {
                None | Some('\n') | Some('\r') => {}
                Some(c) => return Err(self.err(format!("unexpected `{c}` after triple"))),
            }
            let line = self.line;
            graph
                .insert(Triple::new(subject, predicate, object))
                .map_err(|e| OntologyError::parse(line, e.to_string()))?;
        }
    }

    fn pname(&mut self) -> Result<Iri, OntologyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-') {
            self.bump();
        }
        let prefix = self.src[start..self.pos].to_string();
        self.expect(':')?;
        let local_start = self.pos;
        while let Some(c) = self.peek() {
            let continues = c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '%')
                || (c == '.' && self.rest()[1..].starts_with(|n: char| n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '%')));
            if !continues {
                break;
            }
            self.bump();
        }
        let local = &self.src[local_start..self.pos];
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| self.err(format!("undeclared prefix `{prefix}:`")))?;
        self.make_iri(&format!("{ns}{local}"))
    }

    fn iri(&mut self) -> Result<Iri, OntologyError> {
        if self.peek() == Some('<') {
            self.iri_ref()
        } else {
            self.pname()
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let rest = self.rest();
        if rest.len() >= word.len() && rest[..word.len()].eq_ignore_ascii_case(word) {
            let after = rest[word.len()..].chars().next();
            if after.is_none_or(|c| c.is_whitespace() || c == '<') {
                for _ in 0..word.chars().count() {
                    self.bump();
                }
                return true;
            }
        }
        false
    }

    fn prefix_directive(&mut self, sparql_style: bool) -> Result<(), OntologyError> {
        self.skip_ws(true);
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-') {
            self.bump();
        }
        let name = self.src[start..self.pos].to_string();
        self.expect(':')?;
        self.skip_ws(true);
        let ns = self.iri_ref_raw()?;
        self.prefixes.insert(name, ns);
        if !sparql_style {
            self.skip_ws(true);
            self.expect('.')?;
        }
        Ok(())
    }

    fn turtle_object(&mut self) -> Result<Term, OntologyError> {
        match self.peek() {
            Some('"') | Some('\'') => {
                if self.rest().starts_with("\"\"\"") || self.rest().starts_with("'''") {
                    return Err(self.err("long string literals are not supported"));
                }
                let lexical = self.string()?;
                Ok(Term::Literal(self.literal_with_datatype(lexical, true)?))
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                let start = self.pos;
                self.bump();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
                let text = self.src[start..self.pos].trim_start_matches('+').to_string();
                Literal::new(text, Datatype::Integer)
                    .map(Term::Literal)
                    .map_err(|e| self.err(e.to_string()))
            }
            Some('_') if self.rest().starts_with("_:") => Err(self.err("blank nodes are not supported")),
            Some('[') | Some('(') => Err(self.err("blank nodes and collections are not supported")),
            _ => Ok(Term::Iri(self.iri()?)),
        }
    }

    fn turtle(&mut self, graph: &mut Graph) -> Result<(), OntologyError> {
        let type_iri = Property::Type.iri();
        loop {
            self.skip_ws(true);
            if self.peek().is_none() {
                return Ok(());
            }
            if self.keyword("@prefix") {
                self.prefix_directive(false)?;
                continue;
            }
            if self.keyword("PREFIX") {
                self.prefix_directive(true)?;
                continue;
            }
            if self.keyword("@base") || self.keyword("BASE") {
                return Err(self.err("base IRIs are not supported"));
            }
            let subject = self.iri()?;
            loop {
                self.skip_ws(true);
                let predicate = if self.peek() == Some('a')
                    && self.rest()[1..].starts_with(|c: char| c.is_whitespace())
                {
                    self.bump();
                    type_iri.clone()
                } else {
                    self.iri()?
                };
                loop {
                    self.skip_ws(true);
                    let object = self.turtle_object()?;
                    let line = self.line;
                    graph
                        .insert(Triple::new(subject.clone(), predicate.clone(), object))
                        .map_err(|e| OntologyError::parse(line, e.to_string()))?;
                    self.skip_ws(true);
                    if self.peek() == Some(',') {
                        self.bump();
                    } else {
                        break;
                    }
                }
                match self.bump() {
                    Some(';') => {
                        self.skip_ws(true);
                        if self.peek() == Some('.') {
                            self.bump();
                            break;
                        }
                    }
                    Some('.') => break,
                    Some(c) => return Err(self.err(format!("expected `;` or `.`, found `{c}`"))),
                    None => return Err(self.err("unexpected end of input")),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::vocab::Class;
    use proptest::prelude::*;

    fn inst(local: &str) -> Iri {
        Iri::new(DEFAULT_INSTANCE_NS, local).unwrap()
    }

    fn sample() -> Graph {
        let mut g = Graph::new();
        let b = inst("block_node_1");
        g.assert_class(&b, Class::EthereumBlock);
        g.add(&b, Property::Embeds, inst("block_node_1_tran_1"));
        g.add_literal(&b, Property::HasBlockNumber, Literal::integer(1));
        g.add_literal(&b, Property::HasHash, Literal::hex(&[0xab; 4]));
        g.add_literal(&b, Property::HasStatus, Literal::text("line\n\"quoted\" \\ tab\t"));
        g.add(&inst("a%20b"), Property::SameAs, b.clone());
        g
    }

    #[test]
    fn empty_graph_serializes_to_empty_document() {
        assert!(serialize(&Graph::new(), Format::NTriples).is_empty());
        assert_eq!(parse(b"", Format::NTriples).unwrap(), Graph::new());
    }

    #[test]
    fn ntriples_lines_are_sorted() {
        let text = String::from_utf8(serialize(&sample(), Format::NTriples)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(text.contains("\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>"));
        assert!(text.contains("\"line\\n\\\"quoted\\\" \\\\ tab\\t\""));
    }

    #[test]
    fn round_trips_both_formats() {
        let g = sample();
        for f in [Format::NTriples, Format::Turtle] {
            let bytes = serialize(&g, f);
            let back = parse(&bytes, f).unwrap();
            assert_eq!(back, g, "{f:?}:\n{}", String::from_utf8_lossy(&bytes));
            assert_eq!(serialize(&back, f), bytes);
        }
    }

    #[test]
    fn turtle_uses_prefixes() {
        let text = String::from_utf8(serialize(&sample(), Format::Turtle)).unwrap();
        assert!(text.starts_with("@prefix rdf:"));
        assert!(text.contains("inst:block_node_1 a oasis:EthereumBlock ;"));
        assert!(text.contains("<urn:chain-oasis:a%20b> owl:sameAs inst:block_node_1 ."));
        assert!(text.contains("\"1\"^^xsd:integer"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let doc = "<urn:a:x> <urn:oasis-eth:ontology#embeds> <urn:a:y> .\n<urn:a:x> <urn:oasis-eth:ontology#embeds> \"open .\n";
        match parse(doc.as_bytes(), Format::NTriples) {
            Err(OntologyError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let doc = "@prefix oasis: <urn:oasis-eth:ontology#> .\n\n<urn:a:x> oasis:embeds nope:y .\n";
        match parse(doc.as_bytes(), Format::Turtle) {
            Err(OntologyError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_predicate_and_blank_nodes() {
        let doc = "<urn:a:x> <urn:other#p> <urn:a:y> .\n";
        assert!(parse(doc.as_bytes(), Format::NTriples).is_err());
        let doc = "_:b <urn:oasis-eth:ontology#embeds> <urn:a:y> .\n";
        assert!(parse(doc.as_bytes(), Format::NTriples).is_err());
    }

    #[test]
    fn turtle_accepts_hand_written_forms() {
        let doc = r#"
PREFIX oasis: <urn:oasis-eth:ontology#>
@prefix ext: <urn:oasis-eth:ext#> .
# comment
<urn:a:x> a oasis:EthereumBlock , oasis:BlockchainBlock ;
    ext:hasBlockNumber 42 ;
    ext:hasStatus 'ok' ;
.
"#;
        let g = parse(doc.as_bytes(), Format::Turtle).unwrap();
        assert_eq!(g.len(), 4);
        let x = Iri::parse("urn:a:x").unwrap();
        assert_eq!(g.object_literal(&x, Property::HasBlockNumber), Some(Literal::integer(42)));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        let local = "[A-Za-z0-9_%.-]{1,8}";
        let lit = prop_oneof![
            "\\PC{0,12}".prop_map(Literal::text),
            any::<i64>().prop_map(Literal::integer),
            prop::collection::vec(any::<u8>(), 0..6).prop_map(|b| Literal::hex(&b)),
            any::<u32>().prop_map(|t| Literal::timestamp(t as u64)),
        ];
        let obj = prop_oneof![
            local.prop_map(|l| Term::Iri(inst(&l))),
            lit.prop_map(Term::Literal),
        ];
        let pred = prop::sample::select(Property::ALL.to_vec());
        prop::collection::vec((local, pred, obj), 0..20).prop_map(|rows| {
            let mut g = Graph::new();
            for (s, p, o) in rows {
                g.add(&inst(&s), p, o);
            }
            g
        })
    }

    proptest! {
        #[test]
        fn round_trip_law(g in arb_graph()) {
            for f in [Format::NTriples, Format::Turtle] {
                let bytes = serialize(&g, f);
                let back = parse(&bytes, f).unwrap();
                prop_assert_eq!(&back, &g);
            }
        }
    }
}
