//! Criterion benchmarks for the contour pipeline; see `benches/pipeline.rs`.
