//! Optional on-disk cache for the Dickman table and the Stieltjes
//! constants, enabled by the `SMOOTHSUM_CACHE_DIR` environment variable.
//!
//! Files are plain text: a versioned `#` header line followed by one value
//! per line in shortest round-trip float notation. Unreadable or stale
//! files are ignored and rewritten.

use std::fs;
use std::path::PathBuf;

use crate::dickman::DickmanTable;
use crate::error::Result;

pub const CACHE_ENV: &str = "SMOOTHSUM_CACHE_DIR";
const STIELTJES_HEADER: &str = "# smoothsum stieltjes v1";
const DICKMAN_HEADER: &str = "# smoothsum dickman v1";

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).filter(|p| !p.as_os_str().is_empty())
}

fn read_floats(path: &PathBuf, header: &str) -> Option<Vec<f64>> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != header {
        return None;
    }
    lines.map(|l| l.trim().parse::<f64>().ok()).collect()
}

fn write_floats(path: &PathBuf, header: &str, values: &[f64]) {
    let mut body = String::with_capacity(24 * values.len() + header.len() + 1);
    body.push_str(header);
    body.push('\n');
    for v in values {
        body.push_str(&format!("{v:e}\n"));
    }
    if let Some(parent) = path.parent() {
        let _ = fs::create_dir_all(parent);
    }
    let tmp = path.with_extension("tmp");
    if fs::write(&tmp, body).is_ok() {
        let _ = fs::rename(&tmp, path);
    }
}

pub(crate) fn load_or_compute_stieltjes(compute: fn() -> [f64; 4]) -> [f64; 4] {
    let Some(dir) = cache_dir() else {
        return compute();
    };
    let path = dir.join("stieltjes_v1.txt");
    if let Some(v) = read_floats(&path, STIELTJES_HEADER) {
        if let Ok(arr) = <[f64; 4]>::try_from(v.as_slice()) {
            return arr;
        }
    }
    let g = compute();
    write_floats(&path, STIELTJES_HEADER, &g);
    g
}

/// Build a Dickman table, going through the cache when one is configured.
pub fn dickman_table(u_max: f64, tol: f64) -> Result<DickmanTable> {
    let Some(dir) = cache_dir() else {
        return DickmanTable::build(u_max, tol);
    };
    let path = dir.join(format!("dickman_v1_{u_max:e}_{tol:e}.txt"));
    if let Some(v) = read_floats(&path, DICKMAN_HEADER) {
        if let Some(t) = DickmanTable::from_flat(&v) {
            return Ok(t);
        }
    }
    let t = DickmanTable::build(u_max, tol)?;
    write_floats(&path, DICKMAN_HEADER, &t.to_flat());
    Ok(t)
}
