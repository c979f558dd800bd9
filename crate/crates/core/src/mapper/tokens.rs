use crate::behavior::{task_iri, TaskKind};
use crate::ingest::{Address, Erc721Event, Erc721EventKind, TokenId};
use crate::ontology::{Class, EntityKind, Individual, Iri, Literal, Property};

use super::{
    Cause, Delegation, DelegationScope, EndurantFeature, MapError, MappingContext, TokenKey, TokenRecord,
};

/// What a plan execution records besides its action.
struct PlanSpec {
    action: Individual,
    task: Option<TaskKind>,
    bindings: Vec<(Property, Iri)>,
}

impl MappingContext {
    fn event_block(&self, event: &Erc721Event) -> Result<u64, MapError> {
        self.txs.get(&event.tx_hash).map(|s| s.block).ok_or_else(|| {
            MapError::InconsistentRecord(format!("event {} of unmapped tx {}", event.log_index, event.tx_hash))
        })
    }

    fn live(&self, key: &TokenKey) -> Result<&TokenRecord, MapError> {
        self.tokens.get(key).ok_or_else(|| {
            if self.burned.contains_key(key) {
                MapError::TokenBurned(key.clone())
            } else {
                MapError::UnknownToken(key.clone())
            }
        })
    }

    fn check_owner(&self, key: &TokenKey, claimed: &Address) -> Result<(), MapError> {
        let owner = self.live(key)?.owner().expect("live tokens have an owner");
        if owner != *claimed {
            return Err(MapError::OwnerMismatch {
                key: key.clone(),
                owner,
                claimed: *claimed,
            });
        }
        Ok(())
    }

    /// Maps one decoded event. Replaying an already applied event is a no-op.
    pub fn map_erc721_event(&mut self, event: &Erc721Event) -> Result<usize, MapError> {
        let id = (event.tx_hash, event.log_index);
        if self.applied_events.contains(&id) {
            return Ok(0);
        }
        let position = (self.event_block(event)?, event.log_index);
        if self.last_event.is_some_and(|last| position <= last) {
            return Err(MapError::OutOfOrder {
                tx_hash: event.tx_hash,
                log_index: event.log_index,
            });
        }
        let key = |token_id: &TokenId| (event.contract, token_id.clone());
        match &event.kind {
            Erc721EventKind::Mint { token_id, .. } => {
                let k = key(token_id);
                if self.tokens.contains_key(&k) || self.burned.contains_key(&k) {
                    return Err(MapError::DuplicateToken(k));
                }
            }
            Erc721EventKind::TokenTransfer { from, token_id, .. }
            | Erc721EventKind::Burn { from, token_id } => self.check_owner(&key(token_id), from)?,
            Erc721EventKind::Approval { owner, token_id, .. } => self.check_owner(&key(token_id), owner)?,
            Erc721EventKind::ApprovalForAll { .. } => {}
        }

        let before = self.graph.len();
        self.add_evidence(&event.contract, |e| e.erc721 = true)?;
        self.sequence += 1;
        let cause = Cause {
            tx_hash: event.tx_hash,
            log_index: event.log_index,
        };
        match &event.kind {
            Erc721EventKind::Mint { to, token_id } => self.mint(event.contract, to, token_id, cause)?,
            Erc721EventKind::TokenTransfer { from, to, token_id } => {
                self.transfer(event.contract, from, to, token_id, cause)?
            }
            Erc721EventKind::Burn { from, token_id } => self.burn(event.contract, from, token_id, cause)?,
            Erc721EventKind::Approval { .. } | Erc721EventKind::ApprovalForAll { .. } => {
                self.record_delegation(event)?
            }
        }
        self.applied_events.insert(id);
        self.last_event = Some(position);
        Ok(self.graph.len() - before)
    }

    fn plan(&mut self, contract: &Address, cause: Cause, spec: PlanSpec) -> Result<Iri, MapError> {
        let tx = cause.tx_hash.to_string();
        let plan = self.iri(EntityKind::Plan, &[&tx, &cause.log_index.to_string()])?;
        let slot = self.txs[&cause.tx_hash].clone();
        let describer = slot.description.unwrap_or(slot.iri);
        let behavior = self.agents[contract].behavior_iri.clone();
        let action = self.graph.assert_individual(spec.action);
        let g = &mut self.graph;
        g.assert_class(&plan, Class::PlanExecution);
        g.add(&describer, Property::Describes, plan.clone());
        g.add(&plan, Property::IsPlanExecutionOf, behavior);
        g.add(&plan, Property::RefersExactlyTo, action);
        if let Some(kind) = spec.task {
            g.add(&plan, Property::ExecutesTask, task_iri(kind));
        }
        for (property, value) in spec.bindings {
            g.add(&plan, property, value);
        }
        g.add_literal(&plan, Property::HasTransactionHash, Literal::hex(cause.tx_hash.as_bytes()));
        g.add_literal(&plan, Property::HasLogIndex, Literal::integer(cause.log_index));
        g.add_literal(&plan, Property::HasSequence, Literal::integer(self.sequence));
        Ok(plan)
    }

    /// A wallet seen in an event: an EOA unless it is a known contract.
    fn wallet(&mut self, address: &Address) -> Result<Iri, MapError> {
        self.account(address, false)
    }

    fn new_feature(&mut self, key: &TokenKey, index: usize, owner: &Address, plan: &Iri) -> Result<EndurantFeature, MapError> {
        let feature = self.iri(
            EntityKind::Feature,
            &[&key.0.to_string(), &key.1.to_string(), &index.to_string()],
        )?;
        let wallet = self.wallet(owner)?;
        self.graph.assert_class(&feature, Class::EthereumWalletOwnerEndurantFeature);
        self.graph.add(&feature, Property::IsInTheWalletOf, wallet);
        self.graph.add(&feature, Property::IntroducedBy, plan.clone());
        Ok(EndurantFeature {
            feature_iri: feature,
            owner_wallet: *owner,
            deprecated: false,
            modified_in: None,
        })
    }

    fn mint(&mut self, contract: Address, to: &Address, token_id: &TokenId, cause: Cause) -> Result<(), MapError> {
        let key = (contract, token_id.clone());
        let token = self.iri(EntityKind::Token, &[&contract.to_string(), &token_id.to_string()])?;
        let agent = self.agents[&contract].agent_iri.clone();
        self.graph.assert_class(&token, Class::EthereumTokenErc721);
        self.graph.add_literal(&token, Property::HasTokenId, Literal::integer(token_id));
        self.graph
            .add_literal(&token, Property::HasContractAddress, Literal::hex(contract.as_bytes()));
        self.graph.add(&token, Property::IsManagedBy, agent);
        let plan = self.plan(
            &contract,
            cause,
            PlanSpec {
                action: Individual::Mint,
                task: Some(TaskKind::Mint),
                bindings: vec![(Property::BindsObject, token.clone()), (Property::BindsOutput1, token.clone())],
            },
        )?;
        let feature = self.new_feature(&key, 1, to, &plan)?;
        self.graph
            .add(&token, Property::HasEthereumTokenEndurantFeature, feature.feature_iri.clone());
        self.tokens.insert(
            key.clone(),
            TokenRecord {
                token_iri: token,
                contract,
                token_id: token_id.clone(),
                feature_chain: vec![feature],
                burned: false,
            },
        );
        self.summary.mints += 1;
        Ok(())
    }

    fn transfer(
        &mut self,
        contract: Address,
        from: &Address,
        to: &Address,
        token_id: &TokenId,
        cause: Cause,
    ) -> Result<(), MapError> {
        let key = (contract, token_id.clone());
        let token = self.live(&key)?.token_iri.clone();
        let source = self.wallet(from)?;
        let destination = self.wallet(to)?;
        let plan = self.plan(
            &contract,
            cause,
            PlanSpec {
                action: Individual::Transfer,
                task: Some(TaskKind::Transfer),
                bindings: vec![
                    (Property::BindsInput1, token.clone()),
                    (Property::BindsInput2, source.clone()),
                    (Property::BindsInput3, destination.clone()),
                ],
            },
        )?;
        self.apply_ownership_change(&key, to, cause, &plan)?;
        let activity = self.iri(
            EntityKind::Activity,
            &[&cause.tx_hash.to_string(), &cause.log_index.to_string()],
        )?;
        let g = &mut self.graph;
        g.assert_class(&activity, Class::TransferActivity);
        g.add(&activity, Property::HasTransferSource, source);
        g.add(&activity, Property::HasTransferDestination, destination);
        g.add(&activity, Property::HasTransferObject, token);
        g.add(&activity, Property::IntroducedBy, plan);
        self.revoke_token_delegations(&key);
        self.summary.transfers += 1;
        Ok(())
    }

    /// Deprecates the token's current owner feature in favour of a fresh one
    /// naming `new_owner`, recording the modification activity.
    pub fn apply_ownership_change(
        &mut self,
        key: &TokenKey,
        new_owner: &Address,
        cause: Cause,
        plan: &Iri,
    ) -> Result<Iri, MapError> {
        let (token, index) = {
            let record = self.live(key)?;
            (record.token_iri.clone(), record.feature_chain.len() + 1)
        };
        let fresh = self.new_feature(key, index, new_owner, plan)?;
        let modification = self.iri(
            EntityKind::Modification,
            &[&cause.tx_hash.to_string(), &cause.log_index.to_string()],
        )?;
        let record = self.tokens.get_mut(key).expect("checked live");
        let old = record
            .feature_chain
            .iter_mut()
            .find(|f| !f.deprecated)
            .expect("live tokens have an active feature");
        old.deprecated = true;
        old.modified_in = Some(fresh.feature_iri.clone());
        let old_iri = old.feature_iri.clone();
        record.feature_chain.push(fresh.clone());

        let g = &mut self.graph;
        g.assert_class(&old_iri, Class::DeprecatedEthereumTokenEndurantFeature);
        g.add(&old_iri, Property::IsEthereumTokenFeatureModifiedIn, fresh.feature_iri.clone());
        g.assert_class(&modification, Class::EthereumTokenFeatureModificationActivity);
        g.add(&modification, Property::HasEthereumTokenFeatureModificationSource, old_iri);
        g.add(
            &modification,
            Property::HasEthereumTokenFeatureModificationResult,
            fresh.feature_iri.clone(),
        );
        g.add(&modification, Property::IntroducedBy, plan.clone());
        g.add(&token, Property::HasEthereumTokenEndurantFeature, fresh.feature_iri.clone());
        Ok(fresh.feature_iri)
    }

    fn burn(&mut self, contract: Address, _from: &Address, token_id: &TokenId, cause: Cause) -> Result<(), MapError> {
        let key = (contract, token_id.clone());
        let token = self.live(&key)?.token_iri.clone();
        self.plan(
            &contract,
            cause,
            PlanSpec {
                action: Individual::Burn,
                task: Some(TaskKind::Burn),
                bindings: vec![(Property::BindsInput1, token)],
            },
        )?;
        self.mark_burned(&key)?;
        self.summary.burns += 1;
        Ok(())
    }

    /// Moves a live token to the burned registry, deprecating its owner
    /// feature without a successor.
    pub fn mark_burned(&mut self, key: &TokenKey) -> Result<(), MapError> {
        self.live(key)?;
        let mut record = self.tokens.remove(key).expect("checked live");
        record.burned = true;
        let active = record
            .feature_chain
            .iter_mut()
            .find(|f| !f.deprecated)
            .expect("live tokens have an active feature");
        active.deprecated = true;
        let feature = active.feature_iri.clone();
        self.graph.assert_class(&record.token_iri, Class::BurnedEthereumToken);
        self.graph
            .assert_class(&feature, Class::DeprecatedEthereumTokenEndurantFeature);
        self.burned.insert(key.clone(), record);
        self.revoke_token_delegations(key);
        Ok(())
    }

    fn revoke(&mut self, matches: impl Fn(&Delegation) -> bool) {
        let seq = self.sequence;
        for delegation in self.delegations.iter_mut().filter(|d| d.active && matches(d)) {
            delegation.active = false;
            self.graph
                .add_literal(&delegation.activity_iri, Property::IsRevokedAt, Literal::integer(seq));
        }
    }

    fn revoke_token_delegations(&mut self, key: &TokenKey) {
        self.revoke(|d| d.scope == DelegationScope::Token(key.clone()));
    }

    fn delegation_activity(
        &mut self,
        cause: Cause,
        operator: &Address,
        owner: &Address,
        object: Iri,
    ) -> Result<Iri, MapError> {
        let activity = self.iri(
            EntityKind::Activity,
            &[&cause.tx_hash.to_string(), &cause.log_index.to_string()],
        )?;
        let subject = self.wallet(operator)?;
        let delegator = self.wallet(owner)?;
        let burn = self.graph.assert_individual(Individual::Burn);
        let transfer = self.graph.assert_individual(Individual::Transfer);
        let g = &mut self.graph;
        g.assert_class(&activity, Class::DelegationActivity);
        g.add(&activity, Property::HasDelegationSubject, subject);
        g.add(&activity, Property::HasDelegationObject, object);
        g.add(&activity, Property::HasDelegationProperty, burn);
        g.add(&activity, Property::HasDelegationProperty, transfer);
        g.add(&activity, Property::HasDelegator, delegator);
        g.add_literal(&activity, Property::HasSequence, Literal::integer(self.sequence));
        Ok(activity)
    }

    /// Approval and ApprovalForAll. A zero `approved` address or a disabled
    /// operator revokes instead of granting.
    pub fn record_delegation(&mut self, event: &Erc721Event) -> Result<(), MapError> {
        let cause = Cause {
            tx_hash: event.tx_hash,
            log_index: event.log_index,
        };
        match &event.kind {
            Erc721EventKind::Approval {
                owner,
                approved,
                token_id,
            } => {
                let key = (event.contract, token_id.clone());
                self.check_owner(&key, owner)?;
                let token = self.live(&key)?.token_iri.clone();
                self.revoke_token_delegations(&key);
                if approved.is_zero() {
                    self.plan(
                        &event.contract,
                        cause,
                        PlanSpec {
                            action: Individual::Delegate,
                            task: None,
                            bindings: vec![(Property::BindsInput2, token)],
                        },
                    )?;
                    self.summary.revocations += 1;
                    return Ok(());
                }
                let operator = self.wallet(approved)?;
                let plan = self.plan(
                    &event.contract,
                    cause,
                    PlanSpec {
                        action: Individual::Delegate,
                        task: Some(TaskKind::Approve),
                        bindings: vec![(Property::BindsInput1, operator), (Property::BindsInput2, token.clone())],
                    },
                )?;
                let activity = self.delegation_activity(cause, approved, owner, token)?;
                self.graph.add(&activity, Property::IntroducedBy, plan);
                self.delegations.push(Delegation {
                    activity_iri: activity,
                    operator: *approved,
                    owner: *owner,
                    scope: DelegationScope::Token(key),
                    active: true,
                });
                self.summary.delegations += 1;
            }
            Erc721EventKind::ApprovalForAll {
                owner,
                operator,
                enabled,
            } => {
                let (owner, operator) = (*owner, *operator);
                self.revoke(|d| d.scope == DelegationScope::Any && d.owner == owner && d.operator == operator);
                let operator_iri = self.wallet(&operator)?;
                let plan = self.plan(
                    &event.contract,
                    cause,
                    PlanSpec {
                        action: Individual::Delegate,
                        task: enabled.then_some(TaskKind::ApproveAll),
                        bindings: vec![(Property::BindsInput1, operator_iri)],
                    },
                )?;
                if !enabled {
                    self.summary.revocations += 1;
                    return Ok(());
                }
                let scope = self.iri(EntityKind::DelegationScope, &[&owner.to_string()])?;
                let any = self.graph.assert_individual(Individual::Any);
                self.graph.assert_class(&scope, Class::DelegationScope);
                self.graph.add(&scope, Property::HasSpecificity, any);
                let activity = self.delegation_activity(cause, &operator, &owner, scope)?;
                self.graph.add(&activity, Property::IntroducedBy, plan);
                self.delegations.push(Delegation {
                    activity_iri: activity,
                    operator,
                    owner,
                    scope: DelegationScope::Any,
                    active: true,
                });
                self.summary.delegations += 1;
            }
            _ => {
                return Err(MapError::InconsistentRecord(format!(
                    "event {} of {} is not a delegation",
                    event.log_index, event.tx_hash
                )))
            }
        }
        Ok(())
    }
}
