//! Criterion benchmarks for the `fkineq` kernels. Run with `cargo bench -p fkineq-bench`.
