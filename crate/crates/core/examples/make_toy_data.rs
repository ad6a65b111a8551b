//! Regenerates the bundled toy data under `data/toy/`.
//!
//! cargo run -p synaudit --example make_toy_data -- data/toy

use std::path::PathBuf;

use serde_json::json;
use synaudit::fixtures;

fn main() -> synaudit::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/toy".into()));
    std::fs::create_dir_all(&dir).expect("create output dir");
    let census = fixtures::census_like(2400, true, 7);
    census.save_csv(dir.join("census.csv"))?;
    fixtures::census_like(500, false, 11).save_csv(dir.join("small.csv"))?;
    std::fs::write(dir.join("schema.json"), census.schema().to_json()).expect("write schema");

    let write = |name: &str, value: serde_json::Value| {
        let text = serde_json::to_string_pretty(&value).expect("json") + "\n";
        std::fs::write(dir.join(name), text).expect("write config");
    };
    write(
        "experiment.json",
        json!({
            "data": {"csv": "census.csv", "schema": "schema.json"},
            "split": {"target_size": 1000, "holdout_size": 400, "aux_size": 1000, "seed": 3},
            "generator": {"kind": "unique_value_leaker", "emit_probability": 0.9, "seed": 1},
            "game": {"n_shadow": 200, "n_eval": 200, "seed": 17},
            "n_targets": 10,
            "output_dir": "out-experiment"
        }),
    );
    for (name, kind) in [
        ("null_model.json", "null_model"),
        ("perfect_leaker.json", "perfect_leaker"),
    ] {
        write(
            name,
            json!({
                "data": {"csv": "small.csv", "schema": "schema.json"},
                "split": {"target_size": 200, "holdout_size": 100, "aux_size": 200, "seed": 5},
                "generator": {"kind": kind, "seed": 1},
                "game": {"n_shadow": 200, "n_eval": 200, "seed": 23},
                "n_targets": 10,
                "output_dir": format!("out-{}", kind.replace('_', "-"))
            }),
        );
    }
    Ok(())
}
