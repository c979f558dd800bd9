use std::fmt;

use super::{Iri, OntologyError};

/// The closed set of literal datatypes the store accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    Text,
    Integer,
    /// Lowercase hex with a `0x` prefix (hashes, addresses, calldata).
    HexBytes,
    /// Unix seconds.
    Timestamp,
}

impl Datatype {
    pub const ALL: [Datatype; 4] = [
        Datatype::Text,
        Datatype::Integer,
        Datatype::HexBytes,
        Datatype::Timestamp,
    ];

    pub fn iri_str(self) -> &'static str {
        match self {
            Datatype::Text => "http://www.w3.org/2001/XMLSchema#string",
            Datatype::Integer => "http://www.w3.org/2001/XMLSchema#integer",
            Datatype::HexBytes => "urn:oasis-eth:ext#hexBytes",
            Datatype::Timestamp => "urn:oasis-eth:ext#unixTimestamp",
        }
    }

    pub fn from_iri_str(iri: &str) -> Option<Datatype> {
        Datatype::ALL.into_iter().find(|d| d.iri_str() == iri)
    }

    pub fn name(self) -> &'static str {
        match self {
            Datatype::Text => "text",
            Datatype::Integer => "integer",
            Datatype::HexBytes => "hex-bytes",
            Datatype::Timestamp => "timestamp",
        }
    }

    fn accepts(self, lexical: &str) -> bool {
        match self {
            Datatype::Text => true,
            Datatype::Integer => {
                let digits = lexical.strip_prefix('-').unwrap_or(lexical);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            }
            Datatype::HexBytes => lexical.strip_prefix("0x").is_some_and(|h| {
                h.len() % 2 == 0 && h.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
            }),
            Datatype::Timestamp => !lexical.is_empty() && lexical.bytes().all(|b| b.is_ascii_digit()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Result<Self, OntologyError> {
        let lexical = lexical.into();
        if !datatype.accepts(&lexical) {
            return Err(OntologyError::InvalidLiteral {
                lexical,
                datatype: datatype.name(),
            });
        }
        Ok(Literal { lexical, datatype })
    }

    pub fn text(value: impl Into<String>) -> Self {
        Literal {
            lexical: value.into(),
            datatype: Datatype::Text,
        }
    }

    pub fn integer(value: impl fmt::Display) -> Self {
        Literal::new(value.to_string(), Datatype::Integer).expect("Display of an integer")
    }

    pub fn hex(bytes: &[u8]) -> Self {
        Literal {
            lexical: format!("0x{}", hex::encode(bytes)),
            datatype: Datatype::HexBytes,
        }
    }

    pub fn timestamp(unix_seconds: u64) -> Self {
        Literal {
            lexical: unix_seconds.to_string(),
            datatype: Datatype::Timestamp,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<&Iri> for Term {
    fn from(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal(lit) => write!(f, "\"{}\"^^<{}>", lit.lexical, lit.datatype.iri_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }
}
