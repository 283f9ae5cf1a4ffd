//! Criterion benchmarks for `weil-core`; see `benches/`.
