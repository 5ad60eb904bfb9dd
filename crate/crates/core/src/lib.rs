pub mod arith;
pub mod aschbacher;
pub mod cli;
pub mod ff;
pub mod gsp4core;
pub mod induced;
pub mod linalg;
pub mod primes;
pub mod screener;
