//! Named specifications, graphs, families and term abbreviations loaded
//! from files or from the bundled corpus.

use std::collections::BTreeMap;
use std::path::Path;

use crate::corpus;
use crate::error::{Error, Result};
use crate::graph::{GraphFamily, ProcessGraph};
use crate::syntax::{parse_graphs, parse_term_checked, parse_tss};
use crate::term::{Signature, Term};
use crate::tss::Tss;

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    specs: BTreeMap<String, Tss>,
    graphs: BTreeMap<String, ProcessGraph>,
    families: BTreeMap<String, GraphFamily>,
    terms: BTreeMap<String, String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn duplicate(kind: &str, name: &str) -> Error {
    Error::Invalid(format!("{kind} `{name}` is already defined"))
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tss(&mut self, name: &str, tss: Tss) -> Result<()> {
        if self.specs.contains_key(name) {
            return Err(duplicate("specification", name));
        }
        self.specs.insert(name.to_string(), tss);
        Ok(())
    }

    /// Adds a family and each of its graphs under its own name.
    pub fn add_family(&mut self, name: &str, graphs: Vec<(String, ProcessGraph)>) -> Result<()> {
        if self.families.contains_key(name) {
            return Err(duplicate("family", name));
        }
        for (g, _) in &graphs {
            if self.graphs.contains_key(g) {
                return Err(duplicate("graph", g));
            }
        }
        self.families
            .insert(name.to_string(), graphs.iter().map(|(_, g)| g.clone()).collect());
        self.graphs.extend(graphs);
        Ok(())
    }

    pub fn define_term(&mut self, name: &str, text: &str) -> Result<()> {
        if self.terms.contains_key(name) {
            return Err(duplicate("term", name));
        }
        self.terms.insert(name.to_string(), text.to_string());
        Ok(())
    }

    /// Loads a specification from `path`, or from the bundled corpus when no
    /// such file exists. Returns the name it is stored under.
    pub fn load_tss(&mut self, path: &str) -> Result<String> {
        let p = Path::new(path);
        let tss = if p.exists() {
            parse_tss(&read(p)?)?
        } else {
            match corpus::tss_text(path) {
                Some(text) => parse_tss(text)?,
                None => {
                    return Err(Error::Io {
                        path: path.to_string(),
                        message: "no such file and no bundled specification of that name".into(),
                    })
                }
            }
        };
        let name = tss.name.clone();
        self.add_tss(&name, tss)?;
        Ok(name)
    }

    /// Loads a graph file as a family named after the file.
    pub fn load_family(&mut self, path: &str) -> Result<String> {
        let p = Path::new(path);
        let graphs = if p.exists() {
            parse_graphs(&read(p)?)?
        } else {
            match corpus::graphs_text(path) {
                Some(text) => parse_graphs(text)?,
                None => {
                    return Err(Error::Io {
                        path: path.to_string(),
                        message: "no such file and no bundled graphs of that name".into(),
                    })
                }
            }
        };
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| path.to_string());
        self.add_family(&name, graphs)?;
        Ok(name)
    }

    pub fn tss(&self, name: &str) -> Option<&Tss> {
        self.specs.get(name)
    }

    pub fn graph(&self, name: &str) -> Option<&ProcessGraph> {
        self.graphs.get(name)
    }

    pub fn family(&self, name: &str) -> Option<&GraphFamily> {
        self.families.get(name)
    }

    pub fn graph_names(&self) -> impl Iterator<Item = &str> {
        self.graphs.keys().map(String::as_str)
    }

    /// Parses `text` against `sig`, expanding a defined abbreviation first.
    pub fn term(&self, text: &str, sig: &Signature) -> Result<Term> {
        let text = self.terms.get(text).map(String::as_str).unwrap_or(text);
        parse_term_checked(text, sig)
    }
}
