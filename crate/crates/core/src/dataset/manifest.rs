use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::SceneClass;

/// One manifest line: an image path and its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub path: PathBuf,
    pub label: SceneClass,
}

/// Parses manifest text: one `path,label` record per line.
///
/// Blank lines and lines starting with `#` are skipped. The label is taken
/// after the last comma, so paths may themselves contain commas.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRecord>> {
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (path, label) = line.rsplit_once(',').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `path,label`, got {line:?}"),
        })?;
        let path = path.trim();
        if path.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty image path".into(),
            });
        }
        let label: SceneClass = label.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("unknown label {:?}", label.trim()),
        })?;
        if !seen.insert(path.to_owned()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate image path {path:?}"),
            });
        }
        records.push(ManifestRecord {
            path: PathBuf::from(path),
            label,
        });
    }
    Ok(records)
}

/// Reads a manifest file. Relative image paths are resolved against the
/// manifest's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    Ok(parse_manifest(&text)?
        .into_iter()
        .map(|r| ManifestRecord {
            path: if r.path.is_absolute() { r.path } else { base.join(r.path) },
            label: r.label,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record() {
        let r = parse_manifest("frames/v1/000120.png,tunnel\n").unwrap();
        assert_eq!(
            r,
            vec![ManifestRecord {
                path: "frames/v1/000120.png".into(),
                label: SceneClass::Tunnel
            }]
        );
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let r = parse_manifest("# header\n\na.png, Highway \n  \nb,c.png,ROAD\n").unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].label, SceneClass::Highway);
        assert_eq!(r[1].path, PathBuf::from("b,c.png"));
        assert_eq!(r[1].label, SceneClass::Road);
    }

    #[test]
    fn excluded_class_names_its_line() {
        let err = parse_manifest("a.png,highway\nb.png,intersection\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("intersection"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_path_is_rejected() {
        let err = parse_manifest("a.png,highway\na.png,road\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn missing_separator() {
        assert!(matches!(parse_manifest("a.png\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_manifest(",road\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn relative_paths_resolve_against_manifest_dir() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        std::fs::write(&m, "x/1.pgm,exit\n/abs/2.pgm,booth\n").unwrap();
        let r = load_manifest(&m).unwrap();
        assert_eq!(r[0].path, dir.path().join("x/1.pgm"));
        assert_eq!(r[1].path, PathBuf::from("/abs/2.pgm"));
    }
}
