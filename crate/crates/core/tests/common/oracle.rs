//! Naive replay of fixture files. Reads the raw JSON lines directly and
//! matches event signatures against frozen topic constants, so it shares no
//! decoding or mapping code with the crate under test.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::Value;

const TRANSFER: &str = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef";
const APPROVAL: &str = "0x8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925";
const APPROVAL_FOR_ALL: &str = "0x17307eab39ab6107e8899845ad3d59bd9653f200f220920489ca2b5937696c31";
const ZERO: &str = "0x0000000000000000000000000000000000000000";

/// (contract, token id) with lowercase hex addresses.
pub type Key = (String, u128);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub contract: String,
    pub token_id: u128,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Default)]
pub struct Replay {
    pub owners: BTreeMap<Key, String>,
    pub burned: BTreeSet<Key>,
    pub mints: usize,
    pub transfers: Vec<Transfer>,
    pub burns: usize,
    pub transfer_counts: BTreeMap<Key, usize>,
    /// Owner history per token, mint first.
    pub history: BTreeMap<Key, Vec<String>>,
    pub approved: BTreeMap<Key, String>,
    /// (owner, operator) pairs with an enabled ApprovalForAll, per contract.
    pub operators: BTreeSet<(String, String, String)>,
    pub erc721_contracts: BTreeSet<String>,
    pub erc20_contracts: BTreeSet<String>,
    pub wallets: BTreeSet<String>,
}

fn addr_from_topic(topic: &str) -> Option<String> {
    let hex = topic.strip_prefix("0x")?;
    if hex.len() != 64 || !hex[..24].chars().all(|c| c == '0') {
        return None;
    }
    Some(format!("0x{}", &hex[24..]))
}

fn word(hex: &str) -> Option<u128> {
    let hex = hex.strip_prefix("0x")?;
    if hex.len() != 64 || !hex[..32].chars().all(|c| c == '0') {
        return None;
    }
    u128::from_str_radix(&hex[32..], 16).ok()
}

impl Replay {
    pub fn from_file(path: &Path) -> Replay {
        Replay::from_text(&std::fs::read_to_string(path).unwrap())
    }

    pub fn from_text(text: &str) -> Replay {
        let mut replay = Replay::default();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let record: Value = serde_json::from_str(line).unwrap();
            if record["record"] != "receipt" || record["status"] != 1 {
                continue;
            }
            for log in record["logs"].as_array().unwrap() {
                replay.apply(log);
            }
        }
        replay
    }

    fn apply(&mut self, log: &Value) {
        let contract = log["address"].as_str().unwrap().to_string();
        let topics: Vec<&str> = log["topics"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
        let data = log.get("data").and_then(Value::as_str).unwrap_or("0x");
        match (topics.first().copied(), topics.len()) {
            (Some(TRANSFER), 3) => {
                self.erc20_contracts.insert(contract);
            }
            (Some(TRANSFER), 4) if data == "0x" => {
                let (Some(from), Some(to), Some(id)) =
                    (addr_from_topic(topics[1]), addr_from_topic(topics[2]), word(topics[3]))
                else {
                    return;
                };
                let key = (contract.clone(), id);
                self.erc721_contracts.insert(contract.clone());
                if from == ZERO && to == ZERO {
                    return;
                }
                if from == ZERO {
                    self.mints += 1;
                    self.owners.insert(key.clone(), to.clone());
                    self.history.insert(key, vec![to.clone()]);
                    self.wallets.insert(to);
                } else if to == ZERO {
                    self.burns += 1;
                    self.owners.remove(&key);
                    self.approved.remove(&key);
                    self.burned.insert(key);
                } else {
                    self.owners.insert(key.clone(), to.clone());
                    self.history.get_mut(&key).unwrap().push(to.clone());
                    *self.transfer_counts.entry(key.clone()).or_default() += 1;
                    self.approved.remove(&key);
                    self.wallets.insert(to.clone());
                    self.transfers.push(Transfer {
                        contract,
                        token_id: id,
                        from,
                        to,
                    });
                }
            }
            (Some(APPROVAL), 3) => {
                self.erc20_contracts.insert(contract);
            }
            (Some(APPROVAL), 4) => {
                let (Some(approved), Some(id)) = (addr_from_topic(topics[2]), word(topics[3])) else {
                    return;
                };
                self.erc721_contracts.insert(contract.clone());
                if approved == ZERO {
                    self.approved.remove(&(contract, id));
                } else {
                    self.wallets.insert(approved.clone());
                    self.approved.insert((contract, id), approved);
                }
            }
            (Some(APPROVAL_FOR_ALL), 3) => {
                let (Some(owner), Some(operator), Some(flag)) =
                    (addr_from_topic(topics[1]), addr_from_topic(topics[2]), word(data))
                else {
                    return;
                };
                self.erc721_contracts.insert(contract.clone());
                self.wallets.insert(operator.clone());
                let entry = (contract, owner, operator);
                if flag == 1 {
                    self.operators.insert(entry);
                } else {
                    self.operators.remove(&entry);
                }
            }
            _ => {}
        }
    }

    /// May `operator` burn or transfer `key` under ERC721 rules?
    pub fn authorized(&self, operator: &str, key: &Key) -> bool {
        let Some(owner) = self.owners.get(key) else {
            return false;
        };
        owner == operator
            || self.approved.get(key).is_some_and(|a| a == operator)
            || self
                .operators
                .contains(&(key.0.clone(), owner.clone(), operator.to_string()))
    }
}
