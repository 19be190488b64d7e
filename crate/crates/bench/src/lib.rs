//! Criterion benchmarks for movcat live in `benches/`.
