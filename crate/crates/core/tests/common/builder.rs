//! Programmatic corpora for tests that need a specific event sequence.

use chain_oasis::ingest::{
    encode_topics, Address, Block, Bytes, Corpus, Erc721Event, Erc721EventKind, EventLog, Receipt, TokenId,
    Transaction, H256,
};

pub fn address(n: u8) -> Address {
    let mut a = [0u8; 20];
    a[0] = 0xa0;
    a[19] = n;
    Address(a)
}

pub fn id(n: u64) -> TokenId {
    TokenId::from(n)
}

pub fn mint(to: Address, token: u64) -> Erc721EventKind {
    Erc721EventKind::Mint { to, token_id: id(token) }
}

pub fn transfer(from: Address, to: Address, token: u64) -> Erc721EventKind {
    Erc721EventKind::TokenTransfer {
        from,
        to,
        token_id: id(token),
    }
}

pub fn burn(from: Address, token: u64) -> Erc721EventKind {
    Erc721EventKind::Burn { from, token_id: id(token) }
}

pub fn approve(owner: Address, approved: Address, token: u64) -> Erc721EventKind {
    Erc721EventKind::Approval {
        owner,
        approved,
        token_id: id(token),
    }
}

pub fn approve_all(owner: Address, operator: Address, enabled: bool) -> Erc721EventKind {
    Erc721EventKind::ApprovalForAll {
        owner,
        operator,
        enabled,
    }
}

pub struct TxSpec {
    pub from: Address,
    pub to: Option<Address>,
    pub value: u128,
    pub created: Option<Address>,
    pub success: bool,
    pub logs: Vec<(Address, Vec<H256>, Bytes)>,
}

impl TxSpec {
    pub fn create(from: Address, contract: Address) -> TxSpec {
        TxSpec {
            from,
            to: None,
            value: 0,
            created: Some(contract),
            success: true,
            logs: vec![],
        }
    }

    pub fn call(from: Address, contract: Address) -> TxSpec {
        TxSpec {
            from,
            to: Some(contract),
            value: 0,
            created: None,
            success: true,
            logs: vec![],
        }
    }

    pub fn event(mut self, contract: Address, kind: Erc721EventKind) -> TxSpec {
        let event = Erc721Event {
            contract,
            tx_hash: H256([0; 32]),
            log_index: 0,
            kind,
        };
        let (topics, data) = encode_topics(&event);
        self.logs.push((contract, topics, data));
        self
    }

    pub fn raw_log(mut self, contract: Address, topics: Vec<H256>, data: Bytes) -> TxSpec {
        self.logs.push((contract, topics, data));
        self
    }

    pub fn value(mut self, value: u128) -> TxSpec {
        self.value = value;
        self
    }

    pub fn failed(mut self) -> TxSpec {
        self.success = false;
        self
    }
}

#[derive(Default)]
pub struct ChainBuilder {
    pub corpus: Corpus,
    next_block: u64,
    next_hash: u64,
}

impl ChainBuilder {
    pub fn new(first_block: u64) -> ChainBuilder {
        ChainBuilder {
            next_block: first_block,
            ..ChainBuilder::default()
        }
    }

    fn hash(&mut self, tag: u8) -> H256 {
        self.next_hash += 1;
        let mut h = [0u8; 32];
        h[0] = tag;
        h[24..].copy_from_slice(&self.next_hash.to_be_bytes());
        H256(h)
    }

    pub fn label(mut self, address: Address, name: &str) -> ChainBuilder {
        self.corpus.meta.labels.insert(address, name.to_string());
        self
    }

    pub fn block(&mut self, txs: Vec<TxSpec>) -> &mut ChainBuilder {
        let number = self.next_block;
        self.next_block += 1;
        let block_hash = self.hash(0xb0);
        let mut transactions = Vec::new();
        let mut log_index = 0;
        for (index, spec) in txs.into_iter().enumerate() {
            let tx_hash = self.hash(0x70);
            transactions.push(Transaction {
                hash: tx_hash,
                from: spec.from,
                to: spec.to,
                value: spec.value,
                input: Bytes(vec![0x12, 0x34, 0x56, 0x78]),
                index: index as u64,
            });
            let logs = spec
                .logs
                .into_iter()
                .map(|(address, topics, data)| {
                    let log = EventLog {
                        address,
                        topics,
                        data,
                        log_index,
                        tx_hash,
                    };
                    log_index += 1;
                    log
                })
                .collect();
            self.corpus.receipts.push(Receipt {
                tx_hash,
                contract_address: spec.created.filter(|_| spec.success),
                logs: if spec.success { logs } else { vec![] },
                success: spec.success,
            });
        }
        self.corpus.blocks.push(Block {
            number,
            hash: block_hash,
            miner: address(0xee),
            timestamp: 1_700_000_000 + number,
            transactions,
        });
        self
    }

    pub fn build(&self) -> Corpus {
        self.corpus.clone()
    }
}
