//! Read helpers over mapped token and account individuals, shared by the
//! behavior engine, discovery and validation.

use crate::ingest::{Address, TokenId};
use crate::ontology::{Class, Graph, Iri, Literal, Property, Term};

pub fn address_literal(address: &Address) -> Term {
    Literal::hex(address.as_bytes()).into()
}

/// The account individual carrying `address`, if one was mapped.
pub fn find_account(graph: &Graph, address: &Address) -> Option<Iri> {
    graph
        .subjects_with(Property::HasAddress, &address_literal(address))
        .into_iter()
        .find(|s| graph.is_a(s, Class::BlockchainAccount))
}

pub fn account_address(graph: &Graph, account: &Iri) -> Option<Address> {
    graph
        .object_literal(account, Property::HasAddress)
        .and_then(|l| l.lexical().parse().ok())
}

pub fn find_token(graph: &Graph, contract: &Address, token_id: &TokenId) -> Option<Iri> {
    let id: Term = Literal::integer(token_id).into();
    let contract = address_literal(contract);
    graph
        .subjects_with(Property::HasTokenId, &id)
        .into_iter()
        .find(|t| graph.has(t, Property::HasContractAddress, &contract))
}

/// Owner features of `token` that are not deprecated.
pub fn active_owner_features(graph: &Graph, token: &Iri) -> Vec<Iri> {
    graph
        .object_iris(token, Property::HasEthereumTokenEndurantFeature)
        .into_iter()
        .filter(|f| {
            graph.is_a(f, Class::EthereumWalletOwnerEndurantFeature)
                && !graph.is_a(f, Class::DeprecatedEthereumTokenEndurantFeature)
        })
        .collect()
}

/// The wallet account of the token's unique active owner feature.
pub fn current_owner_account(graph: &Graph, token: &Iri) -> Option<Iri> {
    match active_owner_features(graph, token).as_slice() {
        [feature] => graph.object_iri(feature, Property::IsInTheWalletOf),
        _ => None,
    }
}

/// Walks `isEthereumTokenFeatureModifiedIn` from the token's first feature.
/// Fails when the features do not form a single chain.
pub fn feature_chain(graph: &Graph, token: &Iri) -> Result<Vec<Iri>, String> {
    let features = graph.object_iris(token, Property::HasEthereumTokenEndurantFeature);
    let roots: Vec<&Iri> = features
        .iter()
        .filter(|f| {
            graph
                .subjects_with(Property::IsEthereumTokenFeatureModifiedIn, &Term::Iri((*f).clone()))
                .is_empty()
        })
        .collect();
    let [root] = roots.as_slice() else {
        return Err(format!("{token}: expected one initial feature, found {}", roots.len()));
    };
    let mut chain = vec![(*root).clone()];
    loop {
        let last = chain.last().expect("non-empty");
        match graph
            .object_iris(last, Property::IsEthereumTokenFeatureModifiedIn)
            .as_slice()
        {
            [] => break,
            [next] => {
                if chain.contains(next) {
                    return Err(format!("{token}: feature chain has a cycle"));
                }
                chain.push(next.clone());
            }
            many => return Err(format!("{last}: modified into {} features", many.len())),
        }
    }
    if chain.len() != features.len() {
        return Err(format!(
            "{token}: chain reaches {} of {} features",
            chain.len(),
            features.len()
        ));
    }
    Ok(chain)
}
