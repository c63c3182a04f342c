pub mod cli;
pub mod modes;
pub mod report;
pub mod scalars;
pub mod superspace;
pub mod vertex;
pub mod wgens;
pub mod yangian;
