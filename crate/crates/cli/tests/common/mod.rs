use std::path::{Path, PathBuf};

use reldual_cli::error::InputError;
use reldual_cli::workspace::{parse, parse_str, serialize};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn corpus() -> Vec<(String, String)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("readable"))
        })
        .collect()
}

/// Files named `invalid_*` must be rejected with a validation error; every
/// other file must survive parse, serialize, parse unchanged.
pub fn roundtrip(name: &str, text: &str) -> Option<String> {
    let parsed = parse_str(text);
    if name.starts_with("invalid_") {
        return match parsed {
            Err(InputError::Validation { .. }) => None,
            other => Some(format!("{name}: expected a validation error, got {other:?}")),
        };
    }
    let ws = match parsed {
        Ok(ws) => ws,
        Err(e) => return Some(format!("{name}: {e}")),
    };
    let once = serialize(&ws);
    let back = match parse(&once) {
        Ok(b) => b,
        Err(e) => return Some(format!("{name}: serialized form does not parse: {e}")),
    };
    if back != ws {
        return Some(format!("{name}: workspace changed after a round trip"));
    }
    (serialize(&back) != once).then(|| format!("{name}: serialization is not stable"))
}
