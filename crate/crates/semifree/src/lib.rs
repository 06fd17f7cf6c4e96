pub mod classifier;
pub mod dh;
pub mod localization;
pub mod model;
pub mod poly;
pub mod report;
pub mod ring;
