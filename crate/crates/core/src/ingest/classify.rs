use serde::Serialize;

use super::types::{Receipt, Transaction};
use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TxKind {
    ContractCreation,
    ContractInteraction,
    EtherTransfer,
}

pub fn classify_transaction(tx: &Transaction, receipt: &Receipt) -> Result<TxKind, IngestError> {
    if tx.hash != receipt.tx_hash {
        return Err(IngestError::InconsistentRecord(format!(
            "receipt {} does not belong to transaction {}",
            receipt.tx_hash, tx.hash
        )));
    }
    Ok(match tx.to {
        None => TxKind::ContractCreation,
        Some(_) if tx.value > 0 && tx.input.is_empty() && receipt.logs.is_empty() => {
            TxKind::EtherTransfer
        }
        Some(_) => TxKind::ContractInteraction,
    })
}
