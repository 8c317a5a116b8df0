//! Benchmarks for the covers library live in `benches/`.
