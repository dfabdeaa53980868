//! Criterion benchmarks of the core kernels live in `benches/`.
