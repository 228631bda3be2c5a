//! Model file formats, looked up by name or file extension.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::model::Model;
use crate::parser::{parse_model, render_model, ParseError};
use crate::sbml::{export_sbml, import_sbml, SbmlError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sbml(#[from] SbmlError),
}

pub trait ModelFormat: Send + Sync {
    fn name(&self) -> &'static str;
    /// Extensions without the dot.
    fn extensions(&self) -> &'static [&'static str];
    fn read(&self, text: &str) -> Result<Model, FormatError>;
    fn write(&self, model: &Model) -> Result<String, FormatError>;
}

pub struct BioPepaFormat;

impl ModelFormat for BioPepaFormat {
    fn name(&self) -> &'static str {
        "biopepa"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["biopepa"]
    }

    fn read(&self, text: &str) -> Result<Model, FormatError> {
        Ok(parse_model(text)?)
    }

    fn write(&self, model: &Model) -> Result<String, FormatError> {
        Ok(render_model(model))
    }
}

pub struct SbmlFormat;

impl ModelFormat for SbmlFormat {
    fn name(&self) -> &'static str {
        "sbml"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["xml", "sbml"]
    }

    fn read(&self, text: &str) -> Result<Model, FormatError> {
        Ok(import_sbml(text)?)
    }

    fn write(&self, model: &Model) -> Result<String, FormatError> {
        Ok(export_sbml(model)?)
    }
}

#[derive(Clone, Default)]
pub struct FormatRegistry {
    formats: BTreeMap<&'static str, Arc<dyn ModelFormat>>,
}

impl FormatRegistry {
    pub fn with_defaults() -> Self {
        let mut r = FormatRegistry::default();
        r.register(Arc::new(BioPepaFormat));
        r.register(Arc::new(SbmlFormat));
        r
    }

    pub fn register(&mut self, format: Arc<dyn ModelFormat>) {
        self.formats.insert(format.name(), format);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn ModelFormat>> {
        self.formats.get(name).cloned()
    }

    pub fn for_path(&self, path: &Path) -> Option<Arc<dyn ModelFormat>> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        self.formats
            .values()
            .find(|f| f.extensions().contains(&ext.as_str()))
            .cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.formats.keys().copied().collect()
    }
}
