//! Bundled worked examples. Setting `MOTDEG_EXAMPLES` to a directory makes
//! [`load`] read `<name>.json` from there instead.

use serde_json::Value;

pub const QUARTIC_THREEFOLD: &str = include_str!("../datasets/quartic_threefold.json");
pub const ARTIN_MUMFORD: &str = include_str!("../datasets/artin_mumford.json");
pub const MU2_POINT: &str = include_str!("../datasets/mu2_point.json");

pub const NAMES: [&str; 3] = ["quartic_threefold", "artin_mumford", "mu2_point"];

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "quartic_threefold" => Some(QUARTIC_THREEFOLD),
        "artin_mumford" => Some(ARTIN_MUMFORD),
        "mu2_point" => Some(MU2_POINT),
        _ => None,
    }
}

pub fn load(name: &str) -> Result<Value, String> {
    let text = match std::env::var_os("MOTDEG_EXAMPLES") {
        Some(dir) => {
            let path = std::path::Path::new(&dir).join(format!("{name}.json"));
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => bundled(name).ok_or_else(|| format!("unknown dataset {name}"))?.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))
}
