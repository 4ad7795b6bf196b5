use kappa_core::diagram::{Boundary, SuturedTangle};
use serde_json::Value;

/// Reads `data/<name>.tangle.json` from the workspace root.
pub fn dataset(name: &str) -> SuturedTangle {
    let path = format!("{}/../../data/{name}.tangle.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let v: Value = serde_json::from_str(&text).unwrap();
    let crossings = v["crossings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let a: Vec<u32> = c.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u32).collect();
            [a[0], a[1], a[2], a[3]]
        })
        .collect();
    let b = &v["boundary"];
    let arc = |k: &str| b[k].as_u64().unwrap() as u32;
    let boundary = Boundary { b0: arc("b0"), b1: arc("b1"), t0: arc("t0"), t1: arc("t1") };
    SuturedTangle::new(crossings, boundary, v["name"].as_str().unwrap())
}
