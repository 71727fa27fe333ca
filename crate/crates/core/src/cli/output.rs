//! Output directory: append-only versioned reports and a hash manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "MANIFEST.sha256";

#[derive(Clone, Debug)]
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// First `{stem}-v{N}` (with `ext`, if any) that does not exist yet.
    pub fn next_version(&self, stem: &str, ext: &str) -> (u32, PathBuf) {
        (1..)
            .map(|n| {
                let name = if ext.is_empty() { format!("{stem}-v{n}") } else { format!("{stem}-v{n}.{ext}") };
                (n, self.root.join(name))
            })
            .find(|(_, p)| !p.exists())
            .unwrap()
    }

    /// Writes a new version; earlier versions are never touched.
    pub fn write_versioned(&self, stem: &str, ext: &str, contents: &[u8]) -> io::Result<PathBuf> {
        let (_, path) = self.next_version(stem, ext);
        let mut f = fs::OpenOptions::new().write(true).create_new(true).open(&path)?;
        io::Write::write_all(&mut f, contents)?;
        Ok(path)
    }

    /// Writes `rel` unless an identical file is already there; refuses to
    /// replace different contents.
    pub fn write_once(&self, rel: &str, contents: &[u8]) -> io::Result<PathBuf> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        if path.exists() {
            if fs::read(&path)? == contents {
                return Ok(path);
            }
            return Err(io::Error::new(io::ErrorKind::AlreadyExists, format!("{} exists with other contents", path.display())));
        }
        fs::write(&path, contents)?;
        Ok(path)
    }

    /// Every file below the root except the manifest, relative and sorted.
    pub fn files(&self) -> io::Result<Vec<String>> {
        let mut out = Vec::new();
        let mut stack = vec![self.root.clone()];
        while let Some(dir) = stack.pop() {
            for e in fs::read_dir(&dir)? {
                let p = e?.path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    let rel = p.strip_prefix(&self.root).unwrap().to_string_lossy().replace('\\', "/");
                    if rel != MANIFEST {
                        out.push(rel);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Rewrites the manifest: one `sha256  path` line per file.
    pub fn write_manifest(&self) -> io::Result<PathBuf> {
        let mut text = String::new();
        for rel in self.files()? {
            let mut h = Sha256::new();
            let mut f = fs::File::open(self.root.join(&rel))?;
            io::copy(&mut f, &mut h)?;
            text.push_str(&format!("{}  {}\n", hex::encode(h.finalize()), rel));
        }
        let path = self.root.join(MANIFEST);
        fs::write(&path, text)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn versions_are_append_only() {
        let dir = tempfile::tempdir().unwrap();
        let out = OutDir::create(dir.path()).unwrap();
        let a = out.write_versioned("verify", "txt", b"one").unwrap();
        let b = out.write_versioned("verify", "txt", b"two").unwrap();
        assert!(a.ends_with("verify-v1.txt") && b.ends_with("verify-v2.txt"));
        assert_eq!(fs::read(&a).unwrap(), b"one");
        out.write_once("x/y.txt", b"same").unwrap();
        out.write_once("x/y.txt", b"same").unwrap();
        assert!(out.write_once("x/y.txt", b"other").is_err());
    }

    #[test]
    fn manifest_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let out = OutDir::create(dir.path()).unwrap();
        out.write_once("a.txt", b"abc").unwrap();
        let m = fs::read_to_string(out.write_manifest().unwrap()).unwrap();
        // sha256("abc")
        assert_eq!(m, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  a.txt\n");
    }
}
