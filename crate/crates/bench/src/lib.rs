//! Criterion benchmarks for `qwalk-core`; see `benches/`.
