pub mod analysis;
pub mod bundled;
pub mod cli;
pub mod formats;
pub mod model;
pub mod narrative;
pub mod numfmt;
pub mod parser;
pub mod sbml;
pub mod sim;
