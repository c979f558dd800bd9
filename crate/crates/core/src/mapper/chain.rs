use std::collections::BTreeSet;

use crate::behavior::instantiate_for_agent;
use crate::ingest::erc721::is_erc20_log;
use crate::ingest::{classify_transaction, decode_erc721_log, Address, Block, Receipt, Transaction, TxKind};
use crate::ontology::{Class, EntityKind, Iri, Literal, Property};

use super::{AgentEvidence, AgentRecord, MapError, MappingContext, TxSlot};

/// Agent classes warranted by the evidence. Token standards take precedence;
/// ether pass-through only counts when no token events were seen.
pub fn decide_agent_category(evidence: &AgentEvidence) -> BTreeSet<Class> {
    let mut out = BTreeSet::new();
    if evidence.erc721 {
        out.insert(Class::EthereumErc721SmartContractAgent);
    }
    if evidence.erc20 {
        out.insert(Class::EthereumErc20SmartContractAgent);
    }
    if out.is_empty() {
        out.insert(if evidence.ether {
            Class::EtherExchangeSmartContractAgent
        } else {
            Class::GeneralPurposeBlockchainSmartContractAgent
        });
    }
    out
}

impl MappingContext {
    fn contract_prefix(&self, contract: &Address) -> String {
        self.labels
            .get(contract)
            .cloned()
            .unwrap_or_else(|| contract.to_string())
    }

    /// The account individual for `address`, typed by what we know about it.
    pub(super) fn account(&mut self, address: &Address, contract: bool) -> Result<Iri, MapError> {
        let iri = match self.accounts.get(address) {
            Some(iri) => iri.clone(),
            None => {
                let iri = self.iri(EntityKind::Account, &[&address.to_string()])?;
                self.graph
                    .add_literal(&iri, Property::HasAddress, Literal::hex(address.as_bytes()));
                self.accounts.insert(*address, iri.clone());
                iri
            }
        };
        let class = if contract || self.agents.contains_key(address) {
            Class::EthereumSmartContractAccount
        } else {
            Class::EoaEthereumAccount
        };
        if contract || !self.graph.is_a(&iri, Class::BlockchainAccount) {
            self.graph.assert_class(&iri, class);
        }
        Ok(iri)
    }

    fn miner_node(&mut self, miner: &Address) -> Result<Iri, MapError> {
        if let Some(iri) = self.nodes.get(miner) {
            return Ok(iri.clone());
        }
        let iri = match self.labels.get(miner) {
            Some(label) => self.iri(EntityKind::Named, &[label])?,
            None => self.iri(EntityKind::Node, &[&miner.to_string()])?,
        };
        self.graph.assert_class(&iri, Class::EthereumNode);
        self.graph
            .add_literal(&iri, Property::HasAddress, Literal::hex(miner.as_bytes()));
        let network = self.network_iri.clone();
        self.graph.assert_class(&network, Class::EthereumSystem);
        self.graph.add(&iri, Property::Constitutes, network);
        self.nodes.insert(*miner, iri.clone());
        Ok(iri)
    }

    /// Asserts the block, its miner, and the bare record of every transaction.
    pub fn map_block(&mut self, block: &Block) -> Result<usize, MapError> {
        if self.mapped_blocks.contains(&block.number) && !self.allow_remap {
            return Err(MapError::AlreadyMapped(block.number));
        }
        let before = self.graph.len();
        let number = block.number.to_string();
        let block_iri = self.iri(EntityKind::Block, &[&number])?;
        let g = &mut self.graph;
        g.assert_class(&block_iri, Class::EthereumBlock);
        g.add_literal(&block_iri, Property::HasBlockNumber, Literal::integer(block.number));
        g.add_literal(&block_iri, Property::HasHash, Literal::hex(block.hash.as_bytes()));
        g.add_literal(&block_iri, Property::HasTimestamp, Literal::timestamp(block.timestamp));
        let miner = self.miner_node(&block.miner)?;
        self.graph.add(&miner, Property::Mines, block_iri.clone());

        for tx in &block.transactions {
            let position = (tx.index + 1).to_string();
            let tx_iri = self.iri(EntityKind::Transaction, &[&number, &position])?;
            self.graph.add(&block_iri, Property::Embeds, tx_iri.clone());
            self.graph.assert_class(&tx_iri, Class::EthereumTransaction);
            self.graph
                .add_literal(&tx_iri, Property::HasHash, Literal::hex(tx.hash.as_bytes()));
            self.graph
                .add_literal(&tx_iri, Property::HasTransactionIndex, Literal::integer(tx.index));
            self.graph
                .add_literal(&tx_iri, Property::HasValue, Literal::integer(tx.value));
            let sender = self.account(&tx.from, false)?;
            self.graph.add(&tx_iri, Property::HasSender, sender);
            if let Some(to) = &tx.to {
                let recipient = self.account(to, false)?;
                self.graph.add(&tx_iri, Property::HasRecipient, recipient);
            }
            if let Some(selector) = tx.input.selector() {
                self.graph
                    .add_literal(&tx_iri, Property::HasSelector, Literal::hex(&selector));
            }
            self.txs.entry(tx.hash).or_insert(TxSlot {
                iri: tx_iri,
                block: block.number,
                description: None,
            });
        }
        if self.mapped_blocks.insert(block.number) {
            self.summary.blocks += 1;
        }
        Ok(self.graph.len() - before)
    }

    /// `map_block` followed by the semantic mapping of each transaction.
    /// `receipts` must be in transaction order.
    pub fn ingest_block(&mut self, block: &Block, receipts: &[&Receipt]) -> Result<usize, MapError> {
        if receipts.len() != block.transactions.len() {
            return Err(MapError::InconsistentRecord(format!(
                "block {} has {} transactions but {} receipts",
                block.number,
                block.transactions.len(),
                receipts.len()
            )));
        }
        let mut added = self.map_block(block)?;
        for (tx, receipt) in block.transactions.iter().zip(receipts) {
            added += self.map_transaction(tx, receipt)?;
        }
        Ok(added)
    }

    fn slot(&self, tx: &Transaction) -> Result<TxSlot, MapError> {
        self.txs.get(&tx.hash).cloned().ok_or_else(|| {
            MapError::InconsistentRecord(format!("transaction {} is not part of a mapped block", tx.hash))
        })
    }

    pub fn map_transaction(&mut self, tx: &Transaction, receipt: &Receipt) -> Result<usize, MapError> {
        let kind = classify_transaction(tx, receipt)?;
        let slot = self.slot(tx)?;
        let before = self.graph.len();
        self.graph.add_literal(
            &slot.iri,
            Property::HasStatus,
            Literal::integer(u8::from(receipt.success)),
        );
        if self.counted_txs.insert(tx.hash) {
            let counts = &mut self.summary.transactions;
            match (receipt.success, kind) {
                (false, _) => counts.failed += 1,
                (true, TxKind::ContractCreation) => counts.contract_creation += 1,
                (true, TxKind::ContractInteraction) => counts.contract_interaction += 1,
                (true, TxKind::EtherTransfer) => counts.ether_transfer += 1,
            }
        }
        if !receipt.success {
            return Ok(self.graph.len() - before);
        }
        match kind {
            TxKind::ContractCreation => self.map_creation(tx, receipt)?,
            TxKind::ContractInteraction => self.map_interaction(tx, receipt)?,
            TxKind::EtherTransfer => {
                let to = tx.to.expect("ether transfers have a recipient");
                if self.agents.contains_key(&to) {
                    self.map_interaction(tx, receipt)?;
                }
                0
            }
        };
        Ok(self.graph.len() - before)
    }

    fn new_agent(&mut self, contract: &Address, stub: bool) -> Result<(), MapError> {
        let prefix = self.contract_prefix(contract);
        let agent_iri = self.iri(EntityKind::Agent, &[&prefix])?;
        let behavior_iri = self.iri(EntityKind::Behavior, &[&prefix])?;
        let account_iri = self.account(contract, true)?;
        self.graph.add(&agent_iri, Property::AssociatedWith, account_iri.clone());
        self.graph.assert_class(&behavior_iri, Class::Behavior);
        self.graph.add(&agent_iri, Property::HasBehavior, behavior_iri.clone());
        self.agents.insert(
            *contract,
            AgentRecord {
                agent_iri,
                behavior_iri,
                account_iri,
                evidence: AgentEvidence::default(),
                categories: BTreeSet::new(),
                stub,
            },
        );
        self.summary.agents += 1;
        Ok(())
    }

    /// The agent for `contract`, creating a general-purpose stub on first sight.
    pub(super) fn ensure_agent(&mut self, contract: &Address) -> Result<Iri, MapError> {
        if !self.agents.contains_key(contract) {
            self.new_agent(contract, true)?;
            self.refresh_agent(contract)?;
        }
        Ok(self.agents[contract].agent_iri.clone())
    }

    /// Adds whatever categories the evidence now warrants. Never removes any.
    pub(super) fn refresh_agent(&mut self, contract: &Address) -> Result<(), MapError> {
        let record = self.agents.get_mut(contract).expect("known agent");
        let fresh: Vec<Class> = decide_agent_category(&record.evidence)
            .into_iter()
            .filter(|c| !record.categories.contains(c))
            .collect();
        record.categories.extend(fresh.iter().copied());
        let agent = record.agent_iri.clone();
        for class in fresh {
            self.graph.assert_class(&agent, class);
            if class == Class::EthereumErc721SmartContractAgent {
                instantiate_for_agent(&self.template, &agent, &mut self.graph)
                    .expect("agent was just typed as ERC721");
            }
        }
        Ok(())
    }

    pub(super) fn add_evidence(&mut self, contract: &Address, f: impl FnOnce(&mut AgentEvidence)) -> Result<(), MapError> {
        self.ensure_agent(contract)?;
        let record = self.agents.get_mut(contract).expect("ensured");
        let before = record.evidence;
        f(&mut record.evidence);
        if record.evidence != before {
            self.refresh_agent(contract)?;
        }
        Ok(())
    }

    /// A successful contract creation: creation and agent individuals linked
    /// from the transaction by `describes`.
    pub fn map_creation(&mut self, tx: &Transaction, receipt: &Receipt) -> Result<usize, MapError> {
        let slot = self.slot(tx)?;
        let contract = match (tx.to, receipt.contract_address, receipt.success) {
            (None, Some(c), true) => c,
            _ => {
                return Err(MapError::InconsistentRecord(format!(
                    "{} is not a successful contract creation",
                    tx.hash
                )))
            }
        };
        let before = self.graph.len();
        let prefix = self.contract_prefix(&contract);
        let creation = self.iri(EntityKind::Creation, &[&prefix])?;
        self.graph.assert_class(&creation, Class::EthereumSmartContractCreation);
        self.graph.add(&slot.iri, Property::Describes, creation.clone());
        if !self.agents.contains_key(&contract) {
            self.new_agent(&contract, false)?;
        }
        let agent = self.agents[&contract].agent_iri.clone();
        self.graph.add(&creation, Property::Describes, agent);
        self.txs.get_mut(&tx.hash).expect("slot exists").description = Some(creation);

        self.collect_log_evidence(receipt)?;
        self.refresh_agent(&contract)?;
        self.map_logs(receipt)?;
        Ok(self.graph.len() - before)
    }

    /// A call into a contract: interaction individual plus plan executions.
    pub fn map_interaction(&mut self, tx: &Transaction, receipt: &Receipt) -> Result<usize, MapError> {
        let slot = self.slot(tx)?;
        let target = tx.to.ok_or_else(|| {
            MapError::InconsistentRecord(format!("{} has no target contract", tx.hash))
        })?;
        let before = self.graph.len();
        self.ensure_agent(&target)?;
        let interaction = self.iri(EntityKind::Interaction, &[&tx.hash.to_string()])?;
        self.graph.assert_class(&interaction, Class::EthereumContractInteraction);
        if tx.value > 0 {
            self.graph
                .assert_class(&interaction, Class::EtherExchangeSmartContractInteraction);
            self.add_evidence(&target, |e| e.ether = true)?;
        }
        self.graph.add(&slot.iri, Property::Describes, interaction.clone());
        self.txs.get_mut(&tx.hash).expect("slot exists").description = Some(interaction.clone());

        self.collect_log_evidence(receipt)?;
        let events = self.map_logs(receipt)?;
        if events == 0 {
            let plan = self.iri(EntityKind::Plan, &[&tx.hash.to_string()])?;
            let behavior = self.agents[&target].behavior_iri.clone();
            self.graph.assert_class(&plan, Class::PlanExecution);
            self.graph.add(&interaction, Property::Describes, plan.clone());
            self.graph.add(&plan, Property::IsPlanExecutionOf, behavior);
            self.graph
                .add_literal(&plan, Property::HasTransactionHash, Literal::hex(tx.hash.as_bytes()));
            if let Some(selector) = tx.input.selector() {
                self.graph
                    .add_literal(&plan, Property::HasSelector, Literal::hex(&selector));
            }
        }
        Ok(self.graph.len() - before)
    }

    fn collect_log_evidence(&mut self, receipt: &Receipt) -> Result<(), MapError> {
        for log in &receipt.logs {
            if is_erc20_log(log) {
                self.add_evidence(&log.address, |e| e.erc20 = true)?;
            }
        }
        Ok(())
    }

    /// Decodes and maps the receipt's ERC721 events; returns how many there were.
    fn map_logs(&mut self, receipt: &Receipt) -> Result<usize, MapError> {
        let mut mapped = 0;
        for log in &receipt.logs {
            match decode_erc721_log(log) {
                Ok(Some(event)) => {
                    self.map_erc721_event(&event)?;
                    mapped += 1;
                }
                Ok(None) => {}
                Err(_) => {
                    if self.applied_events.insert((log.tx_hash, log.log_index)) {
                        self.summary.skipped_logs += 1;
                    }
                }
            }
        }
        Ok(mapped)
    }
}
