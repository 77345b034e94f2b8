//! Text exports: OBJ meshes and CSV curves.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::catenoid::CrossSection;
use crate::e2::GroupElement;
use crate::error::{Error, Result};
use crate::helicoid::HelicoidSection;
use crate::surface::SurfaceGrid;

/// One row of a curve export.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub u: f64,
    pub x: GroupElement,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::NonFinite { t: x });
    }
    Ok(format!("{x:.16e}"))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `grid` as Wavefront OBJ: vertices row-major, each quad split into
/// two triangles, 1-based indices.
pub fn write_mesh(grid: &SurfaceGrid, out: &mut (impl Write + ?Sized)) -> Result<()> {
    let mut text = String::new();
    for s in &grid.samples {
        let p = s.position;
        text.push_str(&format!("v {} {} {}\n", num(p.x)?, num(p.y)?, num(p.z)?));
    }
    let idx = |i: usize, j: usize| j * grid.nu + i + 1;
    for j in 0..grid.nv - 1 {
        for i in 0..grid.nu - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            text.push_str(&format!("f {a} {b} {c}\nf {a} {c} {d}\n"));
        }
    }
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<stream>".into(),
        source,
    })
}

pub fn export_mesh(grid: &SurfaceGrid, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_mesh(grid, &mut buf)?;
    std::fs::write(path, buf).map_err(io_err(path))
}

/// CSV with header `u,x1,x2,x3`.
pub fn write_curve(points: &[CurvePoint], out: &mut (impl Write + ?Sized)) -> Result<()> {
    let mut text = String::from("u,x1,x2,x3\n");
    for p in points {
        text.push_str(&format!(
            "{},{},{},{}\n",
            num(p.u)?,
            num(p.x.x)?,
            num(p.x.y)?,
            num(p.x.z)?
        ));
    }
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: "<stream>".into(),
        source,
    })
}

pub fn export_curve(points: &[CurvePoint], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_curve(points, &mut w)?;
    w.flush().map_err(io_err(path))
}

impl From<&CrossSection> for Vec<CurvePoint> {
    fn from(cs: &CrossSection) -> Self {
        cs.samples.iter().map(|s| CurvePoint { u: s.u, x: s.gamma }).collect()
    }
}

/// Samples a helicoid section at `n` values of `u` in `u_range`.
pub fn helicoid_section_points(s: &HelicoidSection, lambda1: f64, u_range: (f64, f64), n: usize) -> Vec<CurvePoint> {
    (0..n)
        .map(|i| {
            let u = if n == 1 {
                u_range.0
            } else {
                u_range.0 + (u_range.1 - u_range.0) * i as f64 / (n - 1) as f64
            };
            CurvePoint {
                u,
                x: s.point(lambda1, u),
            }
        })
        .collect()
}
