use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("invalid name: {0}")]
    InvalidName(String),

    #[error("invalid IRI `{iri}`: {reason}")]
    InvalidIri { iri: String, reason: &'static str },

    #[error("invalid {datatype} literal `{lexical}`")]
    InvalidLiteral { lexical: String, datatype: &'static str },

    #[error("unknown vocabulary term `{0}`")]
    UnknownVocabularyTerm(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl OntologyError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        OntologyError::Parse {
            line,
            message: message.into(),
        }
    }
}
