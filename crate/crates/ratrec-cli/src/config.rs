//! Optional `key=value` config files mirroring the long CLI flags.
//! Values given on the command line always win.

use std::collections::HashMap;
use std::path::Path;

/// Parse a config file: one `key=value` per line, `#` comments, blank lines
/// ignored. Keys use the flag spelling (`a-min`, `keep-from`, ...).
pub fn load_config(path: &Path) -> Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value: {raw}", lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
