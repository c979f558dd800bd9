use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn decode_hex_prefixed(s: &str) -> Result<Vec<u8>, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| format!("`{s}` is missing the 0x prefix"))?;
    hex::decode(digits).map_err(|e| format!("`{s}`: {e}"))
}

macro_rules! fixed_bytes {
    ($(#[$meta:meta])* $name:ident, $len:expr, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub struct $name(pub [u8; $len]);

        impl $name {
            pub const LEN: usize = $len;

            pub fn as_bytes(&self) -> &[u8; $len] {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "0x{}", hex::encode(self.0))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let bytes = decode_hex_prefixed(s)?;
                let arr: [u8; $len] = bytes.try_into().map_err(|b: Vec<u8>| {
                    format!(concat!("expected ", $what, " ({} bytes), got {} bytes"), $len, b.len())
                })?;
                Ok($name(arr))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

fixed_bytes!(
    /// 20-byte account address, rendered lowercase with `0x`.
    Address, 20, "a 20-byte address"
);
fixed_bytes!(
    /// 32-byte hash or log topic.
    H256, 32, "a 32-byte hash"
);

impl Address {
    pub const ZERO: Address = Address([0; 20]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 20]
    }

    /// Left-pads to a 32-byte topic word.
    pub fn to_topic(&self) -> H256 {
        let mut word = [0u8; 32];
        word[12..].copy_from_slice(&self.0);
        H256(word)
    }

    /// Reads an address from a topic word; the 12 high bytes must be zero.
    pub fn from_topic(topic: &H256) -> Option<Address> {
        if topic.0[..12].iter().any(|&b| b != 0) {
            return None;
        }
        let mut out = [0u8; 20];
        out.copy_from_slice(&topic.0[12..]);
        Some(Address(out))
    }
}

/// Arbitrary byte string (calldata, log data), serialized as `0x` hex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bytes(pub Vec<u8>);

impl Bytes {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The 4-byte function selector, when the calldata carries one.
    pub fn selector(&self) -> Option<[u8; 4]> {
        self.0.get(..4).map(|s| s.try_into().expect("4 bytes"))
    }
}

impl fmt::Display for Bytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(&self.0))
    }
}

impl fmt::Debug for Bytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Bytes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        decode_hex_prefixed(s).map(Bytes)
    }
}

impl From<Vec<u8>> for Bytes {
    fn from(v: Vec<u8>) -> Self {
        Bytes(v)
    }
}

impl Serialize for Bytes {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bytes {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// ERC721 token identifier: an unbounded non-negative integer (uint256 on chain).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TokenId(pub BigUint);

impl TokenId {
    pub fn from_word(word: &H256) -> TokenId {
        TokenId(BigUint::from_bytes_be(&word.0))
    }

    /// Big-endian 32-byte word; `None` when the id does not fit in uint256.
    pub fn to_word(&self) -> Option<H256> {
        let bytes = self.0.to_bytes_be();
        if bytes.len() > 32 {
            return None;
        }
        let mut word = [0u8; 32];
        word[32 - bytes.len()..].copy_from_slice(&bytes);
        Some(H256(word))
    }
}

impl From<u64> for TokenId {
    fn from(v: u64) -> Self {
        TokenId(BigUint::from(v))
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for TokenId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed = match s.strip_prefix("0x") {
            Some(h) => BigUint::parse_bytes(h.as_bytes(), 16),
            None => BigUint::parse_bytes(s.as_bytes(), 10),
        };
        parsed
            .map(TokenId)
            .ok_or_else(|| format!("`{s}` is not a non-negative integer"))
    }
}

/// Parses a JSON-RPC quantity (`0x`-hex) or a decimal string.
pub fn parse_quantity(s: &str) -> Result<u128, String> {
    match s.strip_prefix("0x") {
        Some("") => Err(format!("`{s}` is an empty quantity")),
        Some(h) => u128::from_str_radix(h, 16).map_err(|e| format!("`{s}`: {e}")),
        None => s.parse().map_err(|e| format!("`{s}`: {e}")),
    }
}

pub fn to_quantity(v: u128) -> String {
    format!("{v:#x}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub hash: H256,
    pub from: Address,
    /// Absent for contract creations.
    pub to: Option<Address>,
    pub value: u128,
    pub input: Bytes,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub number: u64,
    pub hash: H256,
    pub miner: Address,
    pub timestamp: u64,
    pub transactions: Vec<Transaction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    pub address: Address,
    pub topics: Vec<H256>,
    pub data: Bytes,
    pub log_index: u64,
    pub tx_hash: H256,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receipt {
    pub tx_hash: H256,
    pub contract_address: Option<Address>,
    pub logs: Vec<EventLog>,
    pub success: bool,
}
