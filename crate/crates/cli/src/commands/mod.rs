pub mod analyze;
pub mod construct;
pub mod extend;
pub mod puncture;
pub mod report;
pub mod simulate;
pub mod throughput;
