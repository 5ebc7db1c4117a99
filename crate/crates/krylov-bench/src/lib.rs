//! Benchmark-only crate; the measurements live in `benches/core.rs` and run
//! with `cargo bench -p krylov-bench`. There is no library surface here.
