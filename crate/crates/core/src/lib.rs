pub mod band;
pub mod classifier;
pub mod diagram;
pub mod milnor;
pub mod series;
