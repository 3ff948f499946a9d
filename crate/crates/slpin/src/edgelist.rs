//! Edge-list files: one `i j [weight]` edge per line, fields separated by
//! whitespace or commas, `#` starting a comment. Weights default to 1.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

pub fn parse(text: &str) -> Result<Vec<(usize, usize, f64)>, EdgeListError> {
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        if !(2..=3).contains(&fields.len()) {
            return Err(EdgeListError::Line {
                line,
                message: format!("expected `i j [weight]`, found {} fields", fields.len()),
            });
        }
        let node = |f: &str| {
            f.parse::<usize>().map_err(|_| EdgeListError::Line {
                line,
                message: format!("`{f}` is not a node index"),
            })
        };
        let weight = match fields.get(2) {
            Some(f) => f.parse::<f64>().map_err(|_| EdgeListError::Line {
                line,
                message: format!("`{f}` is not a weight"),
            })?,
            None => 1.0,
        };
        edges.push((node(fields[0])?, node(fields[1])?, weight));
    }
    Ok(edges)
}

pub fn load(path: &Path) -> Result<Vec<(usize, usize, f64)>, EdgeListError> {
    let text = std::fs::read_to_string(path).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}
