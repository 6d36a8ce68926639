//! Legacy ASCII VTK export (STRUCTURED_POINTS) with coordinates in meters.

use std::io::{self, Write};

use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;

fn header<W: Write>(w: &mut W, grid: &Grid, title: &str) -> io::Result<()> {
    let l = grid.length_scale;
    let h = grid.spacing();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{}", title.replace('\n', " "))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} {}", grid.nx, grid.ny, grid.nz)?;
    writeln!(w, "ORIGIN {:e} {:e} {:e}", 0.5 * h[0] * l, 0.5 * h[1] * l, 0.5 * h[2] * l)?;
    writeln!(w, "SPACING {:e} {:e} {:e}", h[0] * l, h[1] * l, h[2] * l)?;
    writeln!(w, "POINT_DATA {}", grid.cells())
}

pub fn write_vector<W: Write>(mut w: W, field: &VectorField, name: &str) -> io::Result<()> {
    header(&mut w, field.grid(), name)?;
    writeln!(w, "VECTORS {name} double")?;
    for c in 0..field.cells() {
        let v = field.get(c);
        writeln!(w, "{} {} {}", v[0], v[1], v[2])?;
    }
    Ok(())
}

pub fn write_scalar<W: Write>(mut w: W, field: &ScalarField, name: &str) -> io::Result<()> {
    header(&mut w, field.grid(), name)?;
    writeln!(w, "SCALARS {name} double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for v in field.as_slice() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}
