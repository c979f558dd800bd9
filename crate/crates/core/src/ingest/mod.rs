//! Raw Ethereum data: JSON-RPC and fixture sources, transaction
//! classification, and ERC721 log decoding.

mod classify;
pub mod erc721;
mod error;
pub mod fixture;
pub mod keccak;
pub mod rpc;
mod types;

pub use classify::{classify_transaction, TxKind};
pub use erc721::{decode_erc721_log, encode_topics, Erc721Event, Erc721EventKind};
pub use error::{FixtureError, IngestError};
pub use fixture::{parse_fixture, read_fixture, Corpus, Meta};
pub use rpc::{fetch_block, fetch_logs, fetch_range, FixtureTransport, HttpTransport, RetryPolicy, RpcTransport};
pub use types::{parse_quantity, to_quantity, Address, Block, Bytes, EventLog, Receipt, TokenId, Transaction, H256};
