//! Ethereum JSON-RPC access: a blocking HTTP transport, a fixture-backed
//! transport serving the same methods offline, and retrying fetch helpers.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use serde_json::{json, Value};

use super::fixture::{Corpus, Meta};
use super::types::{parse_quantity, to_quantity, Address, Block, Bytes, EventLog, Receipt, Transaction, H256};
use super::IngestError;

pub const RPC_URL_ENV: &str = "CHAIN_OASIS_RPC_URL";

pub trait RpcTransport {
    fn request(&self, method: &str, params: Value) -> Result<Value, IngestError>;
}

pub struct HttpTransport {
    url: String,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpTransport {
            url: url.into(),
            agent,
        }
    }
}

impl RpcTransport for HttpTransport {
    fn request(&self, method: &str, params: Value) -> Result<Value, IngestError> {
        let body = json!({"jsonrpc": "2.0", "id": 1, "method": method, "params": params});
        let mut response = self
            .agent
            .post(&self.url)
            .header("content-type", "application/json")
            .send(body.to_string())
            .map_err(|e| IngestError::Transient(format!("{method}: {e}")))?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| IngestError::Transient(format!("{method}: {e}")))?;
        if status == 429 || status >= 500 {
            return Err(IngestError::Transient(format!("{method}: HTTP {status}")));
        }
        if status != 200 {
            return Err(IngestError::Rpc(format!("{method}: HTTP {status}")));
        }
        let mut envelope: Value = serde_json::from_str(&text)
            .map_err(|e| IngestError::Rpc(format!("{method}: invalid JSON response: {e}")))?;
        if let Some(error) = envelope.get("error") {
            return Err(IngestError::Rpc(format!("{method}: {error}")));
        }
        Ok(envelope
            .get_mut("result")
            .map(Value::take)
            .unwrap_or(Value::Null))
    }
}

/// Serves the JSON-RPC subset used by [`fetch_block`] and [`fetch_logs`] from a
/// fixture corpus. It can be told to fail the first few requests.
pub struct FixtureTransport {
    corpus: Corpus,
    failures_left: AtomicUsize,
    requests: AtomicUsize,
}

impl FixtureTransport {
    pub fn new(corpus: Corpus) -> Self {
        FixtureTransport {
            corpus,
            failures_left: AtomicUsize::new(0),
            requests: AtomicUsize::new(0),
        }
    }

    /// Makes the next `n` requests fail with [`IngestError::Transient`].
    pub fn with_transient_failures(self, n: usize) -> Self {
        self.failures_left.store(n, Ordering::SeqCst);
        self
    }

    pub fn meta(&self) -> &Meta {
        &self.corpus.meta
    }

    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    fn block(&self, number: u64) -> Option<&Block> {
        self.corpus.blocks.iter().find(|b| b.number == number)
    }

    fn head(&self) -> u64 {
        self.corpus.blocks.last().map_or(0, |b| b.number)
    }
}

fn param_quantity(params: &Value, i: usize, head: u64) -> Result<u64, IngestError> {
    match params.get(i).and_then(Value::as_str) {
        Some("latest") => Ok(head),
        Some("earliest") => Ok(0),
        Some(q) => parse_quantity(q)
            .ok()
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| IngestError::Rpc(format!("bad block parameter `{q}`"))),
        None => Err(IngestError::Rpc("missing block parameter".into())),
    }
}

impl RpcTransport for FixtureTransport {
    fn request(&self, method: &str, params: Value) -> Result<Value, IngestError> {
        self.requests.fetch_add(1, Ordering::SeqCst);
        if self
            .failures_left
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |n| n.checked_sub(1))
            .is_ok()
        {
            return Err(IngestError::Transient(format!("{method}: injected failure")));
        }
        match method {
            "eth_blockNumber" => Ok(json!(to_quantity(self.head().into()))),
            "eth_getBlockByNumber" => {
                let n = param_quantity(&params, 0, self.head())?;
                Ok(self.block(n).map_or(Value::Null, block_to_json))
            }
            "eth_getTransactionReceipt" => {
                let hash: H256 = params
                    .get(0)
                    .and_then(Value::as_str)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| IngestError::Rpc("bad transaction hash parameter".into()))?;
                Ok(self.corpus.receipt(&hash).map_or(Value::Null, receipt_to_json))
            }
            "eth_getLogs" => {
                let filter = params.get(0).cloned().unwrap_or(Value::Null);
                let head = self.head();
                let bound = |key: &str, default: u64| -> Result<u64, IngestError> {
                    match filter.get(key) {
                        None => Ok(default),
                        Some(v) => param_quantity(&json!([v]), 0, head),
                    }
                };
                let from = bound("fromBlock", head)?;
                let to = bound("toBlock", head)?;
                let address: Option<Address> = filter
                    .get("address")
                    .and_then(Value::as_str)
                    .and_then(|s| s.parse().ok());
                let mut out = Vec::new();
                for block in self.corpus.blocks.iter().filter(|b| (from..=to).contains(&b.number)) {
                    for tx in &block.transactions {
                        let Some(receipt) = self.corpus.receipt(&tx.hash) else { continue };
                        for log in &receipt.logs {
                            if address.is_none_or(|a| a == log.address) {
                                out.push(log_to_json(log, block.number));
                            }
                        }
                    }
                }
                Ok(Value::Array(out))
            }
            other => Err(IngestError::Rpc(format!("method `{other}` not supported"))),
        }
    }
}

fn block_to_json(block: &Block) -> Value {
    json!({
        "number": to_quantity(block.number.into()),
        "hash": block.hash,
        "miner": block.miner,
        "timestamp": to_quantity(block.timestamp.into()),
        "transactions": block.transactions.iter().map(|tx| json!({
            "hash": tx.hash,
            "from": tx.from,
            "to": tx.to,
            "value": to_quantity(tx.value),
            "input": tx.input,
            "transactionIndex": to_quantity(tx.index.into()),
            "blockNumber": to_quantity(block.number.into()),
        })).collect::<Vec<_>>(),
    })
}

fn log_to_json(log: &EventLog, block_number: u64) -> Value {
    json!({
        "address": log.address,
        "topics": log.topics,
        "data": log.data,
        "logIndex": to_quantity(log.log_index.into()),
        "transactionHash": log.tx_hash,
        "blockNumber": to_quantity(block_number.into()),
    })
}

fn receipt_to_json(receipt: &Receipt) -> Value {
    json!({
        "transactionHash": receipt.tx_hash,
        "contractAddress": receipt.contract_address,
        "status": if receipt.success { "0x1" } else { "0x0" },
        "logs": receipt.logs.iter().map(|l| log_to_json(l, 0)).collect::<Vec<_>>(),
    })
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a str, IngestError> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| IngestError::Rpc(format!("{what}: missing `{key}`")))
}

fn parsed<T: std::str::FromStr<Err = String>>(v: &Value, key: &str, what: &str) -> Result<T, IngestError> {
    field(v, key, what)?
        .parse()
        .map_err(|e| IngestError::Rpc(format!("{what}.{key}: {e}")))
}

fn quantity(v: &Value, key: &str, what: &str) -> Result<u128, IngestError> {
    parse_quantity(field(v, key, what)?).map_err(|e| IngestError::Rpc(format!("{what}.{key}: {e}")))
}

fn small_quantity(v: &Value, key: &str, what: &str) -> Result<u64, IngestError> {
    u64::try_from(quantity(v, key, what)?)
        .map_err(|_| IngestError::Rpc(format!("{what}.{key}: out of range")))
}

fn optional_address(v: &Value, key: &str, what: &str) -> Result<Option<Address>, IngestError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => parsed(v, key, what).map(Some),
    }
}

fn block_from_json(v: &Value) -> Result<Block, IngestError> {
    let txs = v
        .get("transactions")
        .and_then(Value::as_array)
        .ok_or_else(|| IngestError::Rpc("block: missing full transactions".into()))?;
    let transactions = txs
        .iter()
        .map(|t| {
            Ok(Transaction {
                hash: parsed(t, "hash", "transaction")?,
                from: parsed(t, "from", "transaction")?,
                to: optional_address(t, "to", "transaction")?,
                value: quantity(t, "value", "transaction")?,
                input: parsed::<Bytes>(t, "input", "transaction")?,
                index: small_quantity(t, "transactionIndex", "transaction")?,
            })
        })
        .collect::<Result<Vec<_>, IngestError>>()?;
    Ok(Block {
        number: small_quantity(v, "number", "block")?,
        hash: parsed(v, "hash", "block")?,
        miner: parsed(v, "miner", "block")?,
        timestamp: small_quantity(v, "timestamp", "block")?,
        transactions,
    })
}

fn log_from_json(v: &Value) -> Result<EventLog, IngestError> {
    let topics = v
        .get("topics")
        .and_then(Value::as_array)
        .ok_or_else(|| IngestError::Rpc("log: missing `topics`".into()))?
        .iter()
        .map(|t| {
            t.as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| IngestError::Rpc(format!("log: bad topic {t}")))
        })
        .collect::<Result<Vec<H256>, _>>()?;
    Ok(EventLog {
        address: parsed(v, "address", "log")?,
        topics,
        data: parsed(v, "data", "log")?,
        log_index: small_quantity(v, "logIndex", "log")?,
        tx_hash: parsed(v, "transactionHash", "log")?,
    })
}

fn receipt_from_json(v: &Value) -> Result<Receipt, IngestError> {
    let logs = v
        .get("logs")
        .and_then(Value::as_array)
        .ok_or_else(|| IngestError::Rpc("receipt: missing `logs`".into()))?
        .iter()
        .map(log_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Receipt {
        tx_hash: parsed(v, "transactionHash", "receipt")?,
        contract_address: optional_address(v, "contractAddress", "receipt")?,
        logs,
        success: quantity(v, "status", "receipt")? == 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 5,
            initial_backoff: Duration::from_millis(200),
        }
    }
}

impl RetryPolicy {
    pub fn none() -> Self {
        RetryPolicy {
            max_attempts: 1,
            initial_backoff: Duration::ZERO,
        }
    }

    fn run<T>(&self, mut op: impl FnMut() -> Result<T, IngestError>) -> Result<T, IngestError> {
        let mut backoff = self.initial_backoff;
        let mut attempt = 1;
        loop {
            match op() {
                Err(e) if e.is_transient() && attempt < self.max_attempts => {
                    std::thread::sleep(backoff);
                    backoff = backoff.saturating_mul(2);
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

pub fn chain_head(transport: &dyn RpcTransport, policy: &RetryPolicy) -> Result<u64, IngestError> {
    let v = policy.run(|| transport.request("eth_blockNumber", json!([])))?;
    let s = v.as_str().ok_or_else(|| IngestError::Rpc("eth_blockNumber: not a string".into()))?;
    parse_quantity(s)
        .ok()
        .and_then(|n| u64::try_from(n).ok())
        .ok_or_else(|| IngestError::Rpc(format!("eth_blockNumber: bad quantity `{s}`")))
}

/// Fetches a block with full transactions and one receipt per transaction.
pub fn fetch_block(
    transport: &dyn RpcTransport,
    number: u64,
    policy: &RetryPolicy,
) -> Result<(Block, Vec<Receipt>), IngestError> {
    let raw = policy.run(|| {
        transport.request(
            "eth_getBlockByNumber",
            json!([to_quantity(number.into()), true]),
        )
    })?;
    if raw.is_null() {
        return Err(IngestError::NotFound(format!("block {number}")));
    }
    let mut block = block_from_json(&raw)?;
    block.transactions.sort_by_key(|t| t.index);
    let mut receipts = Vec::with_capacity(block.transactions.len());
    for tx in &block.transactions {
        let raw = policy.run(|| transport.request("eth_getTransactionReceipt", json!([tx.hash])))?;
        if raw.is_null() {
            return Err(IngestError::NotFound(format!("receipt for {}", tx.hash)));
        }
        let receipt = receipt_from_json(&raw)?;
        if receipt.tx_hash != tx.hash {
            return Err(IngestError::InconsistentRecord(format!(
                "asked for the receipt of {}, got {}",
                tx.hash, receipt.tx_hash
            )));
        }
        receipts.push(receipt);
    }
    Ok((block, receipts))
}

pub fn fetch_logs(
    transport: &dyn RpcTransport,
    from_block: u64,
    to_block: u64,
    address: Option<Address>,
    policy: &RetryPolicy,
) -> Result<Vec<EventLog>, IngestError> {
    let mut filter = json!({
        "fromBlock": to_quantity(from_block.into()),
        "toBlock": to_quantity(to_block.into()),
    });
    if let Some(a) = address {
        filter["address"] = json!(a);
    }
    let raw = policy.run(|| transport.request("eth_getLogs", json!([filter.clone()])))?;
    raw.as_array()
        .ok_or_else(|| IngestError::Rpc("eth_getLogs: not an array".into()))?
        .iter()
        .map(log_from_json)
        .collect()
}

/// Fetches an inclusive block range into a corpus in canonical order.
pub fn fetch_range(
    transport: &dyn RpcTransport,
    from_block: u64,
    to_block: u64,
    policy: &RetryPolicy,
) -> Result<Corpus, IngestError> {
    let mut corpus = Corpus::default();
    for number in from_block..=to_block {
        let (block, receipts) = fetch_block(transport, number, policy)?;
        corpus.blocks.push(block);
        corpus.receipts.extend(receipts);
    }
    Ok(corpus)
}
