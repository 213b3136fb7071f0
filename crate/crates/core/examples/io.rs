//! Round-trips a path through CSV and the JSON envelope.
//!
//! cargo run --release --example io

use hermite_lab::io::{read_path_csv, write_path_csv, DataEnvelope};
use hermite_lab::process::{sample_hermite_path, LatticeConfig};
use hermite_lab::{derive_stream, HermiteSpec};

fn main() -> hermite_lab::Result<()> {
    let spec = HermiteSpec::scalar(2, 0.7)?;
    let cfg = LatticeConfig::new(1024)?;
    let path = sample_hermite_path(&mut derive_stream(7, 0), &spec, 1.0, 8, cfg)?;

    let mut csv = Vec::new();
    write_path_csv(&path, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    assert_eq!(read_path_csv(&csv[..])?.values(), path.values());

    let env = DataEnvelope::from_path(&path, Some(7), Some(0), Some(cfg));
    let mut js = Vec::new();
    env.write_json(&mut js)?;
    let back = DataEnvelope::read_json(&js[..])?.to_path()?;
    assert_eq!(back.values(), path.values());
    println!("envelope keeps spec {:?}", back.hermite_spec());
    Ok(())
}
