use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::OntologyError;

/// An absolute IRI split into a namespace and a non-empty local name.
///
/// Identity is the rendered form: two values compare equal iff
/// `namespace + local_name` is byte-equal, regardless of where the split falls.
#[derive(Clone)]
pub struct Iri {
    full: Arc<str>,
    split: usize,
}

impl Iri {
    pub fn new(namespace: &str, local_name: &str) -> Result<Self, OntologyError> {
        if local_name.is_empty() {
            return Err(OntologyError::InvalidName(format!(
                "empty local name in namespace `{namespace}`"
            )));
        }
        let full = format!("{namespace}{local_name}");
        if local_name.chars().any(char::is_whitespace) {
            return Err(OntologyError::InvalidIri {
                iri: full,
                reason: "local name contains whitespace",
            });
        }
        check_absolute(&full)?;
        Ok(Iri {
            full: full.into(),
            split: namespace.len(),
        })
    }

    /// Parses a rendered IRI, splitting after the last `#`, `/` or `:`.
    pub fn parse(full: &str) -> Result<Self, OntologyError> {
        check_absolute(full)?;
        let split = full
            .rfind(['#', '/', ':'])
            .map(|i| i + 1)
            .filter(|&i| i < full.len())
            .ok_or_else(|| OntologyError::InvalidIri {
                iri: full.to_string(),
                reason: "no local name",
            })?;
        Ok(Iri {
            full: full.into(),
            split,
        })
    }

    /// Like [`Iri::parse`] but splits at a known namespace when the IRI starts with one.
    pub fn parse_with_namespaces<'a>(
        full: &str,
        namespaces: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, OntologyError> {
        let best = namespaces
            .into_iter()
            .filter(|ns| full.len() > ns.len() && full.starts_with(ns))
            .map(str::len)
            .max();
        match best {
            Some(split) => {
                check_absolute(full)?;
                Ok(Iri {
                    full: full.into(),
                    split,
                })
            }
            None => Iri::parse(full),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.full
    }

    pub fn namespace(&self) -> &str {
        &self.full[..self.split]
    }

    pub fn local_name(&self) -> &str {
        &self.full[self.split..]
    }
}

fn check_absolute(full: &str) -> Result<(), OntologyError> {
    let bad = |reason| OntologyError::InvalidIri {
        iri: full.to_string(),
        reason,
    };
    let colon = full.find(':').ok_or_else(|| bad("missing scheme"))?;
    let scheme = &full[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return Err(bad("scheme must start with a letter")),
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return Err(bad("invalid scheme character"));
    }
    if full
        .chars()
        .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
    {
        return Err(bad("forbidden character"));
    }
    Ok(())
}

impl PartialEq for Iri {
    fn eq(&self, other: &Self) -> bool {
        self.full == other.full
    }
}

impl Eq for Iri {}

impl Hash for Iri {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.full.hash(state)
    }
}

impl PartialOrd for Iri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Iri {
    fn cmp(&self, other: &Self) -> Ordering {
        self.full.cmp(&other.full)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.full)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.full)
    }
}
