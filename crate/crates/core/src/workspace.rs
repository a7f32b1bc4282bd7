//! Loading files and the groupoids they refer to.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::Error;
use crate::format::{self, BibundleFile, BundleFile, FileKind, MapFile};
use crate::functor::GroupoidExtension;
use crate::groupoid::FinGroupoid;

/// Any loaded file.
#[derive(Debug, Clone)]
pub enum Document {
    Groupoid(Arc<FinGroupoid>),
    Map(MapFile),
    Bundle(BundleFile),
    Bibundle(BibundleFile),
}

/// Registry of loaded groupoids keyed by canonical path. A groupoid named
/// by several files is parsed once and shared.
#[derive(Debug, Default)]
pub struct Workspace {
    groupoids: HashMap<PathBuf, Arc<FinGroupoid>>,
}

fn read(path: &Path) -> Result<(PathBuf, String), Error> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let canonical = path.canonicalize().map_err(io)?;
    let text = std::fs::read_to_string(&canonical).map_err(io)?;
    Ok((canonical, text))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        e @ (Error::InFile { .. } | Error::Io { .. }) => e,
        e => Error::InFile { path: path.display().to_string(), source: Box::new(e) },
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn groupoid(&mut self, path: impl AsRef<Path>) -> Result<Arc<FinGroupoid>, Error> {
        let path = path.as_ref();
        let (canonical, text) = read(path)?;
        if let Some(g) = self.groupoids.get(&canonical) {
            return Ok(g.clone());
        }
        let g = Arc::new(format::parse_groupoid(&text).map_err(|e| in_file(path, e.into()))?);
        self.groupoids.insert(canonical, g.clone());
        Ok(g)
    }

    /// The file a loaded groupoid came from.
    pub fn path_of(&self, g: &Arc<FinGroupoid>) -> Option<&Path> {
        self.groupoids.iter().find(|(_, h)| Arc::ptr_eq(g, h)).map(|(p, _)| p.as_path())
    }

    /// Loaded groupoid files, sorted.
    pub fn names(&self) -> Vec<&Path> {
        let mut v: Vec<&Path> = self.groupoids.keys().map(PathBuf::as_path).collect();
        v.sort();
        v
    }

    fn resolver<'a>(&'a mut self, base: &'a Path) -> impl FnMut(&str) -> Result<Arc<FinGroupoid>, Error> + 'a {
        move |rel| self.groupoid(base.parent().unwrap_or(Path::new(".")).join(rel))
    }

    pub fn map(&mut self, path: impl AsRef<Path>) -> Result<MapFile, Error> {
        let path = path.as_ref();
        let (_, text) = read(path)?;
        format::parse_map(&text, self.resolver(path)).map_err(|e| in_file(path, e))
    }

    /// A functor or extension file read as an extension; the extension
    /// conditions are left to validation.
    pub fn extension(&mut self, path: impl AsRef<Path>) -> Result<GroupoidExtension, Error> {
        Ok(GroupoidExtension::new(self.map(path)?.map))
    }

    pub fn bundle(&mut self, path: impl AsRef<Path>) -> Result<BundleFile, Error> {
        let path = path.as_ref();
        let (_, text) = read(path)?;
        format::parse_bundle(&text, self.resolver(path)).map_err(|e| in_file(path, e))
    }

    pub fn bibundle(&mut self, path: impl AsRef<Path>) -> Result<BibundleFile, Error> {
        let path = path.as_ref();
        let (_, text) = read(path)?;
        format::parse_bibundle(&text, self.resolver(path)).map_err(|e| in_file(path, e))
    }

    pub fn load(&mut self, path: impl AsRef<Path>) -> Result<Document, Error> {
        let path = path.as_ref();
        let (_, text) = read(path)?;
        let kind = format::detect(&text).map_err(|e| in_file(path, e.into()))?;
        Ok(match kind {
            FileKind::Groupoid => Document::Groupoid(self.groupoid(path)?),
            FileKind::Functor | FileKind::Extension => Document::Map(self.map(path)?),
            FileKind::Bundle => Document::Bundle(self.bundle(path)?),
            FileKind::Bibundle => Document::Bibundle(self.bibundle(path)?),
        })
    }
}

/// `target` written relative to the directory `from`.
pub fn relative_path(target: &Path, from: &Path) -> PathBuf {
    let (t, f): (Vec<_>, Vec<_>) = (target.components().collect(), from.components().collect());
    let common = t.iter().zip(&f).take_while(|(a, b)| a == b).count();
    let mut out = PathBuf::new();
    for _ in common..f.len() {
        out.push("..");
    }
    for c in &t[common..] {
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        assert_eq!(relative_path(Path::new("/a/b/c.ggd"), Path::new("/a/b")), PathBuf::from("c.ggd"));
        assert_eq!(relative_path(Path::new("/a/x/c.ggd"), Path::new("/a/b")), PathBuf::from("../x/c.ggd"));
    }
}
