mod common;

use std::collections::BTreeSet;

use chain_oasis::ingest::{Erc721Event, H256};
use chain_oasis::lineage::{feature_chain, find_token};
use chain_oasis::mapper::{decide_agent_category, map_corpus, AgentEvidence, MapError, MappingContext};
use chain_oasis::ontology::{Class, Graph, Iri, Namespace, Property, Term};
use chain_oasis::validate::validate;

use common::builder::{address, approve, approve_all, burn, id, mint, transfer, ChainBuilder, TxSpec};
use common::oracle::Replay;

fn ontology_iri(local: &str) -> Iri {
    Iri::new("urn:oasis-eth:ontology#", local).unwrap()
}

fn inst(local: &str) -> Iri {
    Iri::new("urn:chain-oasis:", local).unwrap()
}

const NFT: u8 = 0xc1;

fn nft() -> chain_oasis::ingest::Address {
    address(NFT)
}

fn deployed() -> ChainBuilder {
    let mut chain = ChainBuilder::new(1).label(nft(), "Nft");
    chain.block(vec![TxSpec::create(address(1), nft())]);
    chain
}

fn try_map(chain: &ChainBuilder) -> Result<MappingContext, MapError> {
    map_corpus(&chain.build(), Namespace::default())
}

#[test]
fn creation_block_edges() {
    let ctx = common::mapped("creation_only");
    let g = &ctx.graph;
    let tx = inst("block_node_10452395_tran_1");
    let creation = inst("SWB_SmartContractCreation");
    let agent = inst("SWB_smart_contract_agent");
    let miner = inst("SparkPool");
    let has = |s: &Iri, p: &str, o: &Iri| g.contains(&chain_oasis::ontology::Triple::new(s.clone(), ontology_iri(p), o.clone()));
    assert!(has(&miner, "mines", &inst("block_node_10452395")));
    assert!(has(&miner, "constitutes", &inst("ethereum_mainnet")));
    assert!(has(&inst("block_node_10452395"), "embeds", &tx));
    assert!(has(&tx, "describes", &creation));
    assert!(has(&creation, "describes", &agent));
    assert!(g.is_a(&creation, Class::EthereumSmartContractCreation));
    assert!(g.is_a(&agent, Class::GeneralPurposeBlockchainSmartContractAgent));
    let account = g.object_iri(&agent, Property::AssociatedWith).unwrap();
    assert!(g.is_a(&account, Class::EthereumSmartContractAccount));
}

#[test]
fn duplicate_block_rejected_without_changes() {
    let corpus = common::corpus("creation_only");
    let mut ctx = map_corpus(&corpus, Namespace::default()).unwrap();
    let before = ctx.graph.clone();
    let err = ctx.map_block(&corpus.blocks[0]).unwrap_err();
    assert!(matches!(err, MapError::AlreadyMapped(10452395)));
    assert_eq!(ctx.graph, before);
}

#[test]
fn empty_block_has_block_and_miner_only() {
    let mut chain = ChainBuilder::new(9);
    chain.block(vec![]);
    let ctx = try_map(&chain).unwrap();
    let g = &ctx.graph;
    assert!(g.instances_of(Class::EthereumTransaction).is_empty());
    let block = inst("block_node_9");
    assert!(g.is_a(&block, Class::EthereumBlock));
    assert_eq!(g.subjects_with(Property::Mines, &Term::Iri(block)).len(), 1);
}

#[test]
fn failed_creation_only_records_transaction() {
    let mut chain = ChainBuilder::new(1);
    chain.block(vec![TxSpec::create(address(1), nft()).failed()]);
    let ctx = try_map(&chain).unwrap();
    assert!(ctx.graph.instances_of(Class::BlockchainSmartContractCreation).is_empty());
    assert!(ctx.graph.instances_of(Class::BlockchainSmartContractAgent).is_empty());
    assert_eq!(ctx.graph.instances_of(Class::EthereumTransaction).len(), 1);
    assert_eq!(ctx.summary().transactions.failed, 1);
}

#[test]
fn lifecycle_matches_replay() {
    let ctx = common::mapped("lifecycle");
    let replay = Replay::from_file(&common::fixture_path("lifecycle"));
    let s = ctx.summary();
    assert_eq!((s.mints, s.transfers, s.burns), (3, 2, 1));
    assert_eq!(s.mints as usize, replay.mints);
    assert_eq!(s.transfers as usize, replay.transfers.len());
    assert_eq!(s.burns as usize, replay.burns);
    assert_eq!(common::graph_owner_map(&ctx.graph), replay.owners);
    assert!(validate(&ctx.graph).is_clean());
}

#[test]
fn every_fixture_agrees_with_replay() {
    for name in common::FIXTURES {
        let ctx = common::mapped(name);
        let replay = Replay::from_file(&common::fixture_path(name));
        assert_eq!(common::graph_owner_map(&ctx.graph), replay.owners, "{name}");
        let report = validate(&ctx.graph);
        assert!(report.is_clean(), "{name}: {:?}", report.violations);
        for (key, expected) in &replay.history {
            let token = find_token(&ctx.graph, &key.0.parse().unwrap(), &id(key.1 as u64)).unwrap();
            let chain = feature_chain(&ctx.graph, &token).unwrap();
            assert_eq!(chain.len(), expected.len(), "{name} {key:?}");
            assert_eq!(
                chain.len(),
                1 + replay.transfer_counts.get(key).copied().unwrap_or(0),
                "{name} {key:?}"
            );
        }
    }
}

#[test]
fn agent_categories_follow_observed_events() {
    for name in common::FIXTURES {
        let ctx = common::mapped(name);
        let replay = Replay::from_file(&common::fixture_path(name));
        for (contract, record) in ctx.agents() {
            let hex = contract.to_string();
            let g = &ctx.graph;
            assert_eq!(
                g.is_a(&record.agent_iri, Class::EthereumErc721SmartContractAgent),
                replay.erc721_contracts.contains(&hex),
                "{name} {hex}"
            );
            assert_eq!(
                g.is_a(&record.agent_iri, Class::EthereumErc20SmartContractAgent),
                replay.erc20_contracts.contains(&hex),
                "{name} {hex}"
            );
        }
    }
}

#[test]
fn category_decision_table() {
    let ev = |erc721, erc20, ether| AgentEvidence { erc721, erc20, ether };
    assert_eq!(
        decide_agent_category(&ev(true, false, false)),
        BTreeSet::from([Class::EthereumErc721SmartContractAgent])
    );
    assert_eq!(
        decide_agent_category(&ev(false, false, false)),
        BTreeSet::from([Class::GeneralPurposeBlockchainSmartContractAgent])
    );
    assert_eq!(
        decide_agent_category(&ev(false, false, true)),
        BTreeSet::from([Class::EtherExchangeSmartContractAgent])
    );
    assert_eq!(
        decide_agent_category(&ev(true, true, true)),
        BTreeSet::from([Class::EthereumErc721SmartContractAgent, Class::EthereumErc20SmartContractAgent])
    );
}

#[test]
fn dual_standard_contract_has_both_classes_and_keeps_earlier_ones() {
    let ctx = common::mapped("agent_categories");
    let g = &ctx.graph;
    let hybrid = inst("Hybrid_smart_contract_agent");
    assert!(g.is_a(&hybrid, Class::EthereumErc721SmartContractAgent));
    assert!(g.is_a(&hybrid, Class::EthereumErc20SmartContractAgent));
    // Seen as general purpose at creation; memberships are never retracted.
    assert!(g.is_a(&hybrid, Class::GeneralPurposeBlockchainSmartContractAgent));
    assert!(g.is_a(&inst("Coin_smart_contract_agent"), Class::EthereumErc20SmartContractAgent));
    assert!(g.is_a(&inst("Vault_smart_contract_agent"), Class::EtherExchangeSmartContractAgent));
    let stub = ctx
        .agents()
        .find(|(_, r)| r.stub)
        .map(|(_, r)| r.agent_iri.clone())
        .unwrap();
    assert!(g.is_a(&stub, Class::GeneralPurposeBlockchainSmartContractAgent));
    assert_eq!(ctx.summary().skipped_logs, 1);
    let vault_interactions = g.instances_of(Class::EtherExchangeSmartContractInteraction);
    assert_eq!(vault_interactions.len(), 1);
}

#[test]
fn interaction_without_events_gets_generic_plan() {
    let ctx = common::mapped("mixed_agents");
    let g = &ctx.graph;
    let registry_behavior = inst("Registry_smart_contract_behavior");
    let plans = g.subjects_with(Property::IsPlanExecutionOf, &Term::Iri(registry_behavior));
    assert_eq!(plans.len(), 1);
    let interaction = g.subjects_with(Property::Describes, &Term::Iri(plans[0].clone()));
    assert_eq!(interaction.len(), 1);
    assert!(g.is_a(&interaction[0], Class::EthereumContractInteraction));
}

#[test]
fn mint_creates_token_with_owner_feature() {
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(address(2), nft()).event(nft(), mint(address(2), 7))]);
    let ctx = try_map(&chain).unwrap();
    let g = &ctx.graph;
    let token = find_token(g, &nft(), &id(7)).unwrap();
    assert!(g.is_a(&token, Class::EthereumTokenErc721));
    let features = g.object_iris(&token, Property::HasEthereumTokenEndurantFeature);
    assert_eq!(features.len(), 1);
    let wallet = g.object_iri(&features[0], Property::IsInTheWalletOf).unwrap();
    assert!(g.is_a(&wallet, Class::EoaEthereumAccount));
    assert_eq!(ctx.token(&(nft(), id(7))).unwrap().owner(), Some(address(2)));
}

#[test]
fn transfer_records_activity_and_new_feature() {
    let (a, b) = (address(2), address(3));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), transfer(a, b, 7))]);
    let ctx = try_map(&chain).unwrap();
    let g = &ctx.graph;
    let token = find_token(g, &nft(), &id(7)).unwrap();
    let activities = g.instances_of(Class::TransferActivity);
    assert_eq!(activities.len(), 1);
    let act = &activities[0];
    let account = |addr| chain_oasis::lineage::find_account(g, &addr).unwrap();
    assert_eq!(g.object_iri(act, Property::HasTransferSource), Some(account(a)));
    assert_eq!(g.object_iri(act, Property::HasTransferDestination), Some(account(b)));
    assert_eq!(g.object_iri(act, Property::HasTransferObject), Some(token.clone()));
    let chain = feature_chain(g, &token).unwrap();
    assert_eq!(chain.len(), 2);
    assert!(g.is_a(&chain[0], Class::DeprecatedEthereumTokenEndurantFeature));
    assert!(!g.is_a(&chain[1], Class::DeprecatedEthereumTokenEndurantFeature));
    assert_eq!(g.instances_of(Class::EthereumTokenFeatureModificationActivity).len(), 1);
}

#[test]
fn self_transfer_extends_chain() {
    let a = address(2);
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), transfer(a, a, 7))]);
    let ctx = try_map(&chain).unwrap();
    let record = ctx.token(&(nft(), id(7))).unwrap();
    assert_eq!(record.feature_chain.len(), 2);
    assert!(record.feature_chain.iter().all(|f| f.owner_wallet == a));
}

#[test]
fn k_transfers_make_chain_of_k_plus_one() {
    let wallets: Vec<_> = (10..16).map(address).collect();
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(wallets[0], nft()).event(nft(), mint(wallets[0], 1))]);
    for pair in wallets.windows(2) {
        chain.block(vec![TxSpec::call(pair[0], nft()).event(nft(), transfer(pair[0], pair[1], 1))]);
    }
    let ctx = try_map(&chain).unwrap();
    let token = find_token(&ctx.graph, &nft(), &id(1)).unwrap();
    assert_eq!(feature_chain(&ctx.graph, &token).unwrap().len(), wallets.len());
    assert_eq!(
        ctx.graph.instances_of(Class::EthereumTokenFeatureModificationActivity).len(),
        wallets.len() - 1
    );
}

#[test]
fn burned_token_leaves_registry() {
    let (a, b, x) = (address(2), address(3), address(4));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(b, 7))]);
    chain.block(vec![TxSpec::call(b, nft()).event(nft(), burn(b, 7))]);
    let ctx = try_map(&chain).unwrap();
    let token = find_token(&ctx.graph, &nft(), &id(7)).unwrap();
    assert!(ctx.graph.is_a(&token, Class::BurnedEthereumToken));
    assert!(chain_oasis::lineage::active_owner_features(&ctx.graph, &token).is_empty());
    assert_eq!(ctx.live_tokens().count(), 0);

    chain.block(vec![TxSpec::call(b, nft()).event(nft(), transfer(b, x, 7))]);
    assert!(matches!(try_map(&chain), Err(MapError::TokenBurned(_))));
}

#[test]
fn event_on_unknown_token_fails() {
    let (a, b) = (address(2), address(3));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), transfer(a, b, 99))]);
    assert!(matches!(try_map(&chain), Err(MapError::UnknownToken(_))));
}

#[test]
fn double_mint_fails() {
    let a = address(2);
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7)).event(nft(), mint(a, 7))]);
    assert!(matches!(try_map(&chain), Err(MapError::DuplicateToken(_))));
}

#[test]
fn transfer_from_non_owner_fails() {
    let (a, b, c) = (address(2), address(3), address(4));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![TxSpec::call(b, nft()).event(nft(), transfer(b, c, 7))]);
    assert!(matches!(try_map(&chain), Err(MapError::OwnerMismatch { .. })));
}

#[test]
fn double_burn_reports_token_burned() {
    let a = address(2);
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), burn(a, 7))]);
    let mut ctx = try_map(&chain).unwrap();
    let before = ctx.graph.clone();
    assert!(matches!(ctx.mark_burned(&(nft(), id(7))), Err(MapError::TokenBurned(_))));
    assert!(matches!(ctx.mark_burned(&(nft(), id(8))), Err(MapError::UnknownToken(_))));
    assert_eq!(ctx.graph, before);
}

#[test]
fn events_out_of_order_are_rejected() {
    let a = address(2);
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 1)).event(nft(), mint(a, 2))]);
    let corpus = chain.build();
    let mut ctx = MappingContext::new(Namespace::default(), &corpus.meta).unwrap();
    ctx.map_block(&corpus.blocks[0]).unwrap();
    ctx.map_block(&corpus.blocks[1]).unwrap();
    let receipt = &corpus.receipts[1];
    let decode = |i: usize| chain_oasis::ingest::decode_erc721_log(&receipt.logs[i]).unwrap().unwrap();
    let (first, second): (Erc721Event, Erc721Event) = (decode(0), decode(1));
    ctx.map_erc721_event(&second).unwrap();
    assert!(matches!(ctx.map_erc721_event(&first), Err(MapError::OutOfOrder { .. })));
    // Replaying an applied event is a no-op rather than an ordering error.
    assert_eq!(ctx.map_erc721_event(&second).unwrap(), 0);
}

#[test]
fn approval_and_operator_delegations() {
    let (a, d, e) = (address(2), address(3), address(4));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![
        TxSpec::call(a, nft()).event(nft(), approve(a, d, 7)),
        TxSpec::call(a, nft()).event(nft(), approve_all(a, e, true)),
    ]);
    let ctx = try_map(&chain).unwrap();
    let g = &ctx.graph;
    let token = find_token(g, &nft(), &id(7)).unwrap();
    let delegations = g.instances_of(Class::DelegationActivity);
    assert_eq!(delegations.len(), 2);
    let single = delegations
        .iter()
        .find(|x| g.has(x, Property::HasDelegationObject, &Term::Iri(token.clone())))
        .unwrap();
    let props: BTreeSet<Iri> = g.object_iris(single, Property::HasDelegationProperty).into_iter().collect();
    assert_eq!(props, BTreeSet::from([ontology_iri("burn"), ontology_iri("transfer")]));
    let scoped = delegations.iter().find(|x| *x != single).unwrap();
    let scope = g.object_iri(scoped, Property::HasDelegationObject).unwrap();
    assert_eq!(g.object_iri(&scope, Property::HasSpecificity), Some(ontology_iri("any")));

    let mut chain2 = chain;
    chain2.block(vec![TxSpec::call(a, nft()).event(nft(), approve_all(a, e, false))]);
    let ctx = try_map(&chain2).unwrap();
    let active: Vec<_> = ctx.delegations().iter().filter(|d| d.active).collect();
    assert_eq!(active.len(), 1);
    assert_eq!(active[0].operator, d);
    assert!(ctx.graph.has(&ctx.delegations()[1].activity_iri, Property::IsRevokedAt, &chain_oasis::ontology::Literal::integer(4).into()));
}

#[test]
fn transfer_clears_single_token_approval() {
    let (a, b, d) = (address(2), address(3), address(4));
    let mut chain = deployed();
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), mint(a, 7))]);
    chain.block(vec![TxSpec::call(a, nft()).event(nft(), approve(a, d, 7))]);
    chain.block(vec![TxSpec::call(d, nft()).event(nft(), transfer(a, b, 7))]);
    let ctx = try_map(&chain).unwrap();
    assert!(ctx.delegations().iter().all(|d| !d.active));
    // The activity stays as history.
    assert_eq!(ctx.graph.instances_of(Class::DelegationActivity).len(), 1);
}

fn triples(g: &Graph) -> BTreeSet<chain_oasis::ontology::Triple> {
    g.triples().collect()
}

#[test]
fn replaying_the_stream_is_idempotent() {
    for name in common::FIXTURES {
        let corpus = common::corpus(name);
        let once = map_corpus(&corpus, Namespace::default()).unwrap();
        let mut twice = map_corpus(&corpus, Namespace::default()).unwrap();
        twice.set_allow_remap(true);
        twice.map_corpus(&corpus).unwrap();
        assert_eq!(triples(&once.graph), triples(&twice.graph), "{name}");
        assert_eq!(once.summary(), twice.summary(), "{name}");
    }
}

#[test]
fn plans_reference_their_action() {
    let ctx = common::mapped("lifecycle");
    let g = &ctx.graph;
    let plans = g.instances_of(Class::PlanExecution);
    let with_log: Vec<_> = plans
        .iter()
        .filter(|p| g.object_literal(p, Property::HasLogIndex).is_some())
        .collect();
    assert_eq!(with_log.len(), 8);
    for plan in with_log {
        assert!(g.object_iri(plan, Property::RefersExactlyTo).is_some());
        assert!(g.object_iri(plan, Property::IsPlanExecutionOf).is_some());
        let hash = g.object_literal(plan, Property::HasTransactionHash).unwrap();
        assert!(hash.lexical().parse::<H256>().is_ok());
    }
}
