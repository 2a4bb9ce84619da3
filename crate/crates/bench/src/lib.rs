//! Criterion benchmarks for the adpt-core kernels; see `benches/`.
