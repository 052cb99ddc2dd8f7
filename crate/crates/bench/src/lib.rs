//! Criterion benchmarks for the estimator live in `benches/`.
