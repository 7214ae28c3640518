//! Benchmarks for the integral and CI kernels live under `benches/`.
