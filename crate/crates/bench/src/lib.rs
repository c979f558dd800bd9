//! Criterion benchmarks for the chain-oasis pipeline; see `benches/`.
