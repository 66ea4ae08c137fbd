//! Criterion benchmarks for assocf; see `benches/`.
