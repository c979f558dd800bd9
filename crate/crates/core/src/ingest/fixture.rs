//! Line-delimited JSON fixture corpora. The format is documented in
//! `fixtures/SCHEMA.md` at the crate root.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::types::{parse_quantity, Address, Block, Bytes, EventLog, Receipt, Transaction, H256};
use super::{FixtureError, IngestError};

pub const DEFAULT_NETWORK: &str = "ethereum_mainnet";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub network: String,
    #[serde(default)]
    pub labels: BTreeMap<Address, String>,
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            network: DEFAULT_NETWORK.to_string(),
            labels: BTreeMap::new(),
        }
    }
}

/// Blocks and receipts in canonical `(block number, tx index)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub meta: Meta,
    pub blocks: Vec<Block>,
    pub receipts: Vec<Receipt>,
}

impl Corpus {
    pub fn receipt(&self, tx_hash: &H256) -> Option<&Receipt> {
        self.receipts.iter().find(|r| r.tx_hash == *tx_hash)
    }

    /// Receipts paired with their transactions, block by block.
    pub fn receipts_by_hash(&self) -> HashMap<H256, &Receipt> {
        self.receipts.iter().map(|r| (r.tx_hash, r)).collect()
    }

    pub fn transaction_count(&self) -> usize {
        self.blocks.iter().map(|b| b.transactions.len()).sum()
    }

    /// Renders the corpus back to the fixture format.
    pub fn to_jsonl(&self) -> String {
        let by_hash = self.receipts_by_hash();
        let mut out = String::new();
        let mut push = |v: Value| {
            out.push_str(&v.to_string());
            out.push('\n');
        };
        let mut meta = serde_json::to_value(&self.meta).expect("meta serializes");
        meta["record"] = "meta".into();
        push(meta);
        for block in &self.blocks {
            push(serde_json::json!({
                "record": "block",
                "number": block.number,
                "hash": block.hash,
                "miner": block.miner,
                "timestamp": block.timestamp,
            }));
            for tx in &block.transactions {
                push(serde_json::json!({
                    "record": "tx",
                    "block": block.number,
                    "index": tx.index,
                    "hash": tx.hash,
                    "from": tx.from,
                    "to": tx.to,
                    "value": tx.value.to_string(),
                    "input": tx.input,
                }));
                if let Some(r) = by_hash.get(&tx.hash) {
                    let logs: Vec<Value> = r
                        .logs
                        .iter()
                        .map(|l| {
                            serde_json::json!({
                                "address": l.address,
                                "topics": l.topics,
                                "data": l.data,
                                "log_index": l.log_index,
                            })
                        })
                        .collect();
                    push(serde_json::json!({
                        "record": "receipt",
                        "tx_hash": r.tx_hash,
                        "status": u8::from(r.success),
                        "contract_address": r.contract_address,
                        "logs": logs,
                    }));
                }
            }
        }
        out
    }
}

fn decimal_u128<'de, D: serde::Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
    let s = String::deserialize(d)?;
    if s.starts_with("0x") {
        return Err(serde::de::Error::custom("value must be a decimal string"));
    }
    parse_quantity(&s).map_err(serde::de::Error::custom)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRecord {
    number: u64,
    hash: H256,
    miner: Address,
    timestamp: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TxRecord {
    block: u64,
    index: u64,
    hash: H256,
    from: Address,
    to: Option<Address>,
    #[serde(deserialize_with = "decimal_u128")]
    value: u128,
    #[serde(default)]
    input: Bytes,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LogRecord {
    address: Address,
    topics: Vec<H256>,
    #[serde(default)]
    data: Bytes,
    log_index: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiptRecord {
    tx_hash: H256,
    status: u8,
    contract_address: Option<Address>,
    #[serde(default)]
    logs: Vec<LogRecord>,
}

fn err(line: usize, path: impl Into<String>, message: impl Into<String>) -> FixtureError {
    FixtureError {
        line,
        path: path.into(),
        message: message.into(),
    }
}

fn decode<T: DeserializeOwned>(line: usize, value: Value) -> Result<T, FixtureError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        err(line, path, e.into_inner().to_string())
    })
}

struct PendingBlock {
    header: BlockRecord,
    txs: Vec<(usize, Transaction)>,
}

/// Parses fixture text. Records may appear in any order as long as a
/// transaction follows its block and a receipt follows its transaction.
pub fn parse_fixture(text: &str) -> Result<Corpus, FixtureError> {
    let mut meta: Option<Meta> = None;
    let mut blocks: BTreeMap<u64, PendingBlock> = BTreeMap::new();
    let mut tx_block: HashMap<H256, u64> = HashMap::new();
    let mut receipts: HashMap<H256, (usize, ReceiptRecord)> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut value: Value =
            serde_json::from_str(raw).map_err(|e| err(line, ".", format!("invalid JSON: {e}")))?;
        let kind = match value.as_object_mut().and_then(|o| o.remove("record")) {
            Some(Value::String(k)) => k,
            Some(_) => return Err(err(line, "record", "must be a string")),
            None => return Err(err(line, "record", "missing record tag")),
        };
        match kind.as_str() {
            "meta" => {
                if meta.is_some() {
                    return Err(err(line, "record", "duplicate meta record"));
                }
                meta = Some(decode(line, value)?);
            }
            "block" => {
                let header: BlockRecord = decode(line, value)?;
                if blocks.contains_key(&header.number) {
                    return Err(err(line, "number", format!("duplicate block {}", header.number)));
                }
                blocks.insert(
                    header.number,
                    PendingBlock {
                        header,
                        txs: Vec::new(),
                    },
                );
            }
            "tx" => {
                let rec: TxRecord = decode(line, value)?;
                let Some(block) = blocks.get_mut(&rec.block) else {
                    return Err(err(line, "block", format!("block {} not declared yet", rec.block)));
                };
                if tx_block.insert(rec.hash, rec.block).is_some() {
                    return Err(err(line, "hash", format!("duplicate transaction {}", rec.hash)));
                }
                block.txs.push((
                    line,
                    Transaction {
                        hash: rec.hash,
                        from: rec.from,
                        to: rec.to,
                        value: rec.value,
                        input: rec.input,
                        index: rec.index,
                    },
                ));
            }
            "receipt" => {
                let rec: ReceiptRecord = decode(line, value)?;
                if !tx_block.contains_key(&rec.tx_hash) {
                    return Err(err(line, "tx_hash", format!("transaction {} not declared yet", rec.tx_hash)));
                }
                if rec.status > 1 {
                    return Err(err(line, "status", "must be 0 or 1"));
                }
                for (j, log) in rec.logs.iter().enumerate() {
                    if log.topics.len() > 4 {
                        return Err(err(line, format!("logs[{j}].topics"), "at most 4 topics"));
                    }
                }
                if receipts.contains_key(&rec.tx_hash) {
                    return Err(err(line, "tx_hash", "duplicate receipt"));
                }
                receipts.insert(rec.tx_hash, (line, rec));
            }
            other => return Err(err(line, "record", format!("unknown record kind `{other}`"))),
        }
    }

    let mut corpus = Corpus {
        meta: meta.unwrap_or_default(),
        ..Corpus::default()
    };
    for (_, mut pending) in blocks {
        pending.txs.sort_by_key(|(_, tx)| tx.index);
        let mut last_log: Option<u64> = None;
        let mut transactions = Vec::with_capacity(pending.txs.len());
        for (pos, (line, tx)) in pending.txs.into_iter().enumerate() {
            if tx.index != pos as u64 {
                return Err(err(
                    line,
                    "index",
                    format!("block {} transaction indices are not contiguous from 0", pending.header.number),
                ));
            }
            let Some((rline, rec)) = receipts.remove(&tx.hash) else {
                return Err(err(line, "hash", format!("transaction {} has no receipt", tx.hash)));
            };
            let success = rec.status == 1;
            let expects_address = tx.to.is_none() && success;
            if rec.contract_address.is_some() != expects_address {
                return Err(err(
                    rline,
                    "contract_address",
                    "present iff the transaction is a successful contract creation",
                ));
            }
            let mut logs = Vec::with_capacity(rec.logs.len());
            for (j, l) in rec.logs.into_iter().enumerate() {
                if last_log.is_some_and(|prev| l.log_index <= prev) {
                    return Err(err(rline, format!("logs[{j}].log_index"), "log indices must increase within a block"));
                }
                last_log = Some(l.log_index);
                logs.push(EventLog {
                    address: l.address,
                    topics: l.topics,
                    data: l.data,
                    log_index: l.log_index,
                    tx_hash: tx.hash,
                });
            }
            corpus.receipts.push(Receipt {
                tx_hash: tx.hash,
                contract_address: rec.contract_address,
                logs,
                success,
            });
            transactions.push(tx);
        }
        corpus.blocks.push(Block {
            number: pending.header.number,
            hash: pending.header.hash,
            miner: pending.header.miner,
            timestamp: pending.header.timestamp,
            transactions,
        });
    }
    Ok(corpus)
}

pub fn read_fixture(path: impl AsRef<Path>) -> Result<Corpus, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_fixture(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HASH_A: &str = "0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
    const HASH_B: &str = "0xbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb";
    const HASH_1: &str = "0x1111111111111111111111111111111111111111111111111111111111111111";
    const ADDR_M: &str = "0x5a0b54d5dc17e0aadc383d2db43b0a0d3e029c4c";
    const ADDR_C: &str = "0xcccccccccccccccccccccccccccccccccccccccc";

    fn block(n: u64) -> String {
        format!(r#"{{"record":"block","number":{n},"hash":"{HASH_A}","miner":"{ADDR_M}","timestamp":1}}"#)
    }

    fn creation(index: u64, hash: &str) -> String {
        format!(
            r#"{{"record":"tx","block":5,"index":{index},"hash":"{hash}","from":"{ADDR_M}","to":null,"value":"0","input":"0x60"}}
{{"record":"receipt","tx_hash":"{hash}","status":1,"contract_address":"{ADDR_C}","logs":[]}}"#
        )
    }

    #[test]
    fn parses_and_orders() {
        let text = format!(
            "{{\"record\":\"meta\",\"network\":\"ethereum_mainnet\",\"labels\":{{\"{ADDR_M}\":\"SparkPool\"}}}}\n{}\n{}\n\n{}\n",
            block(5),
            creation(1, HASH_B),
            creation(0, HASH_1)
        );
        let corpus = parse_fixture(&text).unwrap();
        assert_eq!(corpus.blocks.len(), 1);
        let idx: Vec<u64> = corpus.blocks[0].transactions.iter().map(|t| t.index).collect();
        assert_eq!(idx, [0, 1]);
        assert_eq!(corpus.receipts[0].tx_hash.to_string(), HASH_1);
        assert_eq!(corpus.meta.labels[&ADDR_M.parse().unwrap()], "SparkPool");
        assert_eq!(parse_fixture(&corpus.to_jsonl()).unwrap(), corpus);
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let corpus = parse_fixture("").unwrap();
        assert!(corpus.blocks.is_empty());
        assert_eq!(corpus.meta.network, DEFAULT_NETWORK);
    }

    #[test]
    fn field_paths_in_errors() {
        let bad = format!(
            r#"{{"record":"block","number":5,"hash":"0x12","miner":"{ADDR_M}","timestamp":1}}"#
        );
        let e = parse_fixture(&bad).unwrap_err();
        assert_eq!((e.line, e.path.as_str()), (1, "hash"));

        let bad_log = format!(
            "{}\n{}",
            block(5),
            creation(0, HASH_1).replace(
                r#""logs":[]"#,
                &format!(r#""logs":[{{"address":"{ADDR_C}","topics":["0x1"],"log_index":0}}]"#)
            )
        );
        let e = parse_fixture(&bad_log).unwrap_err();
        assert_eq!((e.line, e.path.as_str()), (3, "logs[0].topics[0]"));
    }

    #[test]
    fn structural_violations() {
        let gap = format!("{}\n{}", block(5), creation(1, HASH_1));
        assert_eq!(parse_fixture(&gap).unwrap_err().path, "index");

        let no_receipt = format!("{}\n{}", block(5), creation(0, HASH_1).lines().next().unwrap());
        assert_eq!(parse_fixture(&no_receipt).unwrap_err().path, "hash");

        let orphan = creation(0, HASH_1);
        assert_eq!(parse_fixture(&orphan).unwrap_err().path, "block");

        let failed_with_address = format!("{}\n{}", block(5), creation(0, HASH_1).replace("\"status\":1", "\"status\":0"));
        assert_eq!(parse_fixture(&failed_with_address).unwrap_err().path, "contract_address");

        assert_eq!(parse_fixture("{\"record\":\"nope\"}").unwrap_err().path, "record");
        assert_eq!(parse_fixture("not json").unwrap_err().line, 1);
    }
}
