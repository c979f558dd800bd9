//! Checks shared by the behavior tests and the acceptance suite.

use std::collections::BTreeSet;

use chain_oasis::behavior::{authorize_operation, build_erc721_template, evaluate_conditional, task_iri, Bindings, Position, TaskKind};
use chain_oasis::ingest::Address;
use chain_oasis::lineage::{find_account, find_token};
use chain_oasis::mapper::MappingContext;
use chain_oasis::ontology::{Graph, Individual, Iri};

use super::builder::id;
use super::oracle::{Key, Replay};

pub fn conditional(kind: TaskKind) -> chain_oasis::behavior::Conditional {
    build_erc721_template().conditional_for(&task_iri(kind)).unwrap().clone()
}

pub fn account(g: &Graph, hex: &str) -> Iri {
    find_account(g, &hex.parse().unwrap()).unwrap()
}

pub fn token(g: &Graph, key: &Key) -> Iri {
    find_token(g, &key.0.parse().unwrap(), &id(key.1 as u64)).unwrap()
}

pub fn transfer_bindings(tok: Iri, from: Iri, to: Iri) -> Bindings {
    Bindings::from([(Position::Input(0), tok), (Position::Input(1), from), (Position::Input(2), to)])
}

pub fn holds(kind: TaskKind, bindings: &Bindings, g: &Graph) -> bool {
    evaluate_conditional(&conditional(kind), bindings, g, None).unwrap().holds
}

/// Every recorded transfer satisfies the conditional; every binding with one
/// role swapped for another known entity holds exactly when the replay saw
/// such a transfer.
pub fn check_transfer_perturbations(name: &str) -> (usize, usize) {
    let ctx = super::mapped(name);
    let g = &ctx.graph;
    let replay = Replay::from_file(&super::fixture_path(name));
    let wallets: BTreeSet<&String> = replay.wallets.iter().collect();
    let tokens: BTreeSet<Key> = replay.history.keys().cloned().collect();
    let seen = |t: &Key, f: &str, to: &str| {
        replay
            .transfers
            .iter()
            .any(|x| x.contract == t.0 && x.token_id == t.1 && x.from == f && x.to == to)
    };
    let (mut truths, mut forged) = (0, 0);
    for x in &replay.transfers {
        let key = (x.contract.clone(), x.token_id);
        let b = transfer_bindings(token(g, &key), account(g, &x.from), account(g, &x.to));
        assert!(holds(TaskKind::Transfer, &b, g), "{name}: {x:?}");
        truths += 1;
        for w in &wallets {
            if **w != x.from {
                let b = transfer_bindings(token(g, &key), account(g, w), account(g, &x.to));
                assert_eq!(holds(TaskKind::Transfer, &b, g), seen(&key, w, &x.to));
                forged += 1;
            }
            if **w != x.to {
                let b = transfer_bindings(token(g, &key), account(g, &x.from), account(g, w));
                assert_eq!(holds(TaskKind::Transfer, &b, g), seen(&key, &x.from, w));
                forged += 1;
            }
        }
        for t in tokens.iter().filter(|t| **t != key) {
            let b = transfer_bindings(token(g, t), account(g, &x.from), account(g, &x.to));
            assert_eq!(holds(TaskKind::Transfer, &b, g), seen(t, &x.from, &x.to));
            forged += 1;
        }
    }
    (truths, forged)
}

pub fn check_authorization(name: &str) -> usize {
    let ctx = super::mapped(name);
    let g = &ctx.graph;
    let replay = Replay::from_file(&super::fixture_path(name));
    let mut pairs = 0;
    for key in replay.history.keys() {
        let t = token(g, key);
        for operator in &replay.wallets {
            let op: Address = operator.parse().unwrap();
            for action in [Individual::Burn, Individual::Transfer] {
                let got = authorize_operation(g, &op, &action.iri(), &t).unwrap();
                assert_eq!(got, replay.authorized(operator, key), "{name}: {operator} on {key:?}");
            }
            pairs += 1;
        }
    }
    pairs
}

pub fn owner_of_conditional_single_winner(ctx: &MappingContext, replay: &Replay) {
    let g = &ctx.graph;
    for (key, owner) in &replay.owners {
        let t = token(g, key);
        for w in &replay.wallets {
            let b = Bindings::from([(Position::Input(0), t.clone()), (Position::Output(0), account(g, w))]);
            assert_eq!(holds(TaskKind::OwnerOf, &b, g), w == owner, "{key:?} {w}");
        }
    }
    for key in &replay.burned {
        let t = token(g, key);
        for w in &replay.wallets {
            let b = Bindings::from([(Position::Input(0), t.clone()), (Position::Output(0), account(g, w))]);
            assert!(!holds(TaskKind::OwnerOf, &b, g));
        }
    }
}


/// A discovery-style request: mint an ERC721 token.
pub fn mint_request() -> chain_oasis::behavior::TaskDescription {
    use chain_oasis::behavior::{Reference, ReferenceTemplateSpec, TaskDescription};
    use chain_oasis::ontology::Class;
    let wanted = Reference::AsNew(ReferenceTemplateSpec::of_class(
        Iri::new("urn:test:", "wanted_token").unwrap(),
        Class::EthereumTokenErc721,
    ));
    TaskDescription {
        iri: Iri::new("urn:test:", "mint_request").unwrap(),
        operator: Reference::exact(Individual::Mint),
        operator_argument: Reference::exact(Individual::BlockchainDigitalToken),
        object: None,
        input_parameters: vec![],
        output_parameters: vec![wanted],
    }
}

/// Template tasks the request matches.
pub fn matching_tasks(request: &chain_oasis::behavior::TaskDescription) -> Vec<Iri> {
    let template = build_erc721_template();
    let g = Graph::new();
    template
        .tasks()
        .filter(|t| chain_oasis::behavior::match_task_request(request, t, &g).matched)
        .map(|t| t.iri.clone())
        .collect()
}
