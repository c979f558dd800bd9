//! ERC721 event decoding from raw logs.
//!
//! Mint and burn follow the ERC721 zero-address convention: a `Transfer` from
//! the zero address is a mint, one to the zero address is a burn.

use std::sync::LazyLock;

use super::keccak::keccak256;
use super::types::{Address, Bytes, EventLog, TokenId, H256};
use super::IngestError;

pub const TRANSFER_SIGNATURE: &str = "Transfer(address,address,uint256)";
pub const APPROVAL_SIGNATURE: &str = "Approval(address,address,uint256)";
pub const APPROVAL_FOR_ALL_SIGNATURE: &str = "ApprovalForAll(address,address,bool)";

pub fn event_topic(signature: &str) -> H256 {
    H256(keccak256(signature.as_bytes()))
}

pub static TRANSFER_TOPIC: LazyLock<H256> = LazyLock::new(|| event_topic(TRANSFER_SIGNATURE));
pub static APPROVAL_TOPIC: LazyLock<H256> = LazyLock::new(|| event_topic(APPROVAL_SIGNATURE));
pub static APPROVAL_FOR_ALL_TOPIC: LazyLock<H256> =
    LazyLock::new(|| event_topic(APPROVAL_FOR_ALL_SIGNATURE));

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Erc721EventKind {
    Mint { to: Address, token_id: TokenId },
    TokenTransfer { from: Address, to: Address, token_id: TokenId },
    Burn { from: Address, token_id: TokenId },
    Approval { owner: Address, approved: Address, token_id: TokenId },
    ApprovalForAll { owner: Address, operator: Address, enabled: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erc721Event {
    pub contract: Address,
    pub tx_hash: H256,
    pub log_index: u64,
    pub kind: Erc721EventKind,
}

impl Erc721Event {
    pub fn token_id(&self) -> Option<&TokenId> {
        match &self.kind {
            Erc721EventKind::Mint { token_id, .. }
            | Erc721EventKind::TokenTransfer { token_id, .. }
            | Erc721EventKind::Burn { token_id, .. }
            | Erc721EventKind::Approval { token_id, .. } => Some(token_id),
            Erc721EventKind::ApprovalForAll { .. } => None,
        }
    }
}

/// True for the fungible-token shape of `Transfer`/`Approval`: three topics and
/// the amount in a 32-byte data word.
pub fn is_erc20_log(log: &EventLog) -> bool {
    match log.topics.first() {
        Some(t) if *t == *TRANSFER_TOPIC || *t == *APPROVAL_TOPIC => {
            log.topics.len() == 3 && log.data.len() == 32
        }
        _ => false,
    }
}

fn malformed(log: &EventLog, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedLog {
        tx_hash: log.tx_hash,
        log_index: log.log_index,
        reason: reason.into(),
    }
}

fn address_topic(log: &EventLog, i: usize) -> Result<Address, IngestError> {
    Address::from_topic(&log.topics[i])
        .ok_or_else(|| malformed(log, format!("topic {i} is not a left-padded address")))
}

/// Decodes an ERC721 event. `Ok(None)` means the log is not an ERC721 event
/// (unknown signature, ERC20-shaped, or a zero-to-zero transfer).
pub fn decode_erc721_log(log: &EventLog) -> Result<Option<Erc721Event>, IngestError> {
    let Some(topic0) = log.topics.first() else {
        return Ok(None);
    };
    let wrap = |kind| {
        Some(Erc721Event {
            contract: log.address,
            tx_hash: log.tx_hash,
            log_index: log.log_index,
            kind,
        })
    };

    if *topic0 == *TRANSFER_TOPIC || *topic0 == *APPROVAL_TOPIC {
        if is_erc20_log(log) {
            return Ok(None);
        }
        if log.topics.len() != 4 {
            return Err(malformed(
                log,
                format!("expected 4 topics, found {}", log.topics.len()),
            ));
        }
        if !log.data.is_empty() {
            return Err(malformed(log, "unexpected data alongside an indexed token id"));
        }
        let a = address_topic(log, 1)?;
        let b = address_topic(log, 2)?;
        let token_id = TokenId::from_word(&log.topics[3]);
        let kind = if *topic0 == *APPROVAL_TOPIC {
            Erc721EventKind::Approval {
                owner: a,
                approved: b,
                token_id,
            }
        } else {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => return Ok(None),
                (true, false) => Erc721EventKind::Mint { to: b, token_id },
                (false, true) => Erc721EventKind::Burn { from: a, token_id },
                (false, false) => Erc721EventKind::TokenTransfer {
                    from: a,
                    to: b,
                    token_id,
                },
            }
        };
        return Ok(wrap(kind));
    }

    if *topic0 == *APPROVAL_FOR_ALL_TOPIC {
        if log.topics.len() != 3 {
            return Err(malformed(
                log,
                format!("expected 3 topics, found {}", log.topics.len()),
            ));
        }
        let owner = address_topic(log, 1)?;
        let operator = address_topic(log, 2)?;
        let enabled = match log.data.0.as_slice() {
            [zeros @ .., last] if zeros.len() == 31 && zeros.iter().all(|&b| b == 0) && *last <= 1 => {
                *last == 1
            }
            _ => return Err(malformed(log, "approval flag is not an ABI-encoded bool")),
        };
        return Ok(wrap(Erc721EventKind::ApprovalForAll {
            owner,
            operator,
            enabled,
        }));
    }

    Ok(None)
}

/// Rebuilds the `(topics, data)` pair a contract would emit for `event`.
pub fn encode_topics(event: &Erc721Event) -> (Vec<H256>, Bytes) {
    let id_word = |id: &TokenId| id.to_word().expect("token id decoded from a 32-byte word");
    match &event.kind {
        Erc721EventKind::Mint { to, token_id } => (
            vec![*TRANSFER_TOPIC, Address::ZERO.to_topic(), to.to_topic(), id_word(token_id)],
            Bytes::default(),
        ),
        Erc721EventKind::TokenTransfer { from, to, token_id } => (
            vec![*TRANSFER_TOPIC, from.to_topic(), to.to_topic(), id_word(token_id)],
            Bytes::default(),
        ),
        Erc721EventKind::Burn { from, token_id } => (
            vec![*TRANSFER_TOPIC, from.to_topic(), Address::ZERO.to_topic(), id_word(token_id)],
            Bytes::default(),
        ),
        Erc721EventKind::Approval {
            owner,
            approved,
            token_id,
        } => (
            vec![*APPROVAL_TOPIC, owner.to_topic(), approved.to_topic(), id_word(token_id)],
            Bytes::default(),
        ),
        Erc721EventKind::ApprovalForAll {
            owner,
            operator,
            enabled,
        } => {
            let mut data = vec![0u8; 32];
            data[31] = u8::from(*enabled);
            (
                vec![*APPROVAL_FOR_ALL_TOPIC, owner.to_topic(), operator.to_topic()],
                Bytes(data),
            )
        }
    }
}
