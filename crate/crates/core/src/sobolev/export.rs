use crate::scenario::Grid;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Serialize)]
struct FieldHeader<'a> {
    name: &'a str,
    dim: usize,
    dims: [usize; 3],
    h: f64,
    origin: [f64; 3],
    layout: &'static str,
}

/// Writes `<stem>.bin` (little-endian f64, x fastest) and `<stem>.json` (header).
pub fn write_field(dir: &Path, stem: &str, grid: &Grid, values: &[f64]) -> std::io::Result<()> {
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(dir.join(format!("{stem}.bin")), bytes)?;
    let header = FieldHeader { name: stem, dim: grid.dim, dims: grid.dims, h: grid.h, origin: grid.origin, layout: "f64-le, x fastest" };
    std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&header).unwrap())
}

/// 8-bit PGM of the slice `z = dims[2] / 2`, scaled from min to max.
pub fn write_pgm_slice(path: &Path, grid: &Grid, values: &[f64]) -> std::io::Result<()> {
    let (nx, ny) = (grid.dims[0], grid.dims[1]);
    let z = grid.dims[2] / 2;
    let slice: Vec<f64> = (0..ny).rev().flat_map(|y| (0..nx).map(move |x| (x, y))).map(|(x, y)| values[grid.index([x, y, z])]).collect();
    let lo = slice.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut f = std::fs::File::create(path)?;
    write!(f, "P5\n{nx} {ny}\n255\n")?;
    let pixels: Vec<u8> = slice.iter().map(|v| (((v - lo) / span) * 255.0).round() as u8).collect();
    f.write_all(&pixels)
}
