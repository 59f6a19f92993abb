//! Holds the criterion benchmarks in `benches/`; run with `cargo bench -p mcomb-bench`.
