//! Regenerates the bundled fixture dataset from explicit curves.
//!
//! Writes the dataset, reloads it through the full validator, and prints a
//! per-group summary.  An optional argument overrides the output path.

use std::path::PathBuf;

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/newforms.json")
    });
    let file = rqfermat_cli::reconstruct::build_dataset().expect("building the dataset failed");
    rqfermat_cli::dataset::write_dataset(&out, &file).expect("writing the dataset failed");
    let ds = rqfermat_cli::dataset::load_dataset(&out).expect("reloading the dataset failed");
    println!("wrote {} groups to {}", ds.groups.len(), out.display());
    for ((d, _), group) in &ds.groups {
        println!(
            "  d={} level norm {}: {} form(s), {}",
            d,
            group.level.norm(),
            group.entries.len(),
            group.provenance
        );
    }
    if !ds.warnings.is_empty() {
        for w in &ds.warnings {
            eprintln!("warning: {}", w);
        }
        std::process::exit(1);
    }
}
