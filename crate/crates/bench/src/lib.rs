//! Criterion benchmarks for `cartan-super`; see `benches/`.
