//! CSV writers for the plotting scripts.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::ConvergenceRow;
use crate::simulation::{Diagnostics, Snapshot};

pub const AMPLITUDE_HEADER: &str = "t,E_max,E_l2,mass,f_l2,kinetic_energy,field_energy";
pub const CONVERGENCE_HEADER: &str = "t,h,err_Einf";

/// Shortest representation that parses back to the same `f64`; exponent
/// notation for very small or very large magnitudes.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_amplitude<W: Write>(mut w: W, rows: &[Diagnostics]) -> io::Result<()> {
    writeln!(w, "{AMPLITUDE_HEADER}")?;
    for d in rows {
        let fields = [d.t, d.e_max, d.e_l2, d.mass, d.f_l2, d.kinetic_energy, d.field_energy];
        writeln!(w, "{}", fields.map(format_f64).join(","))?;
    }
    Ok(())
}

pub fn write_snapshot<W: Write>(mut w: W, s: &Snapshot) -> io::Result<()> {
    writeln!(
        w,
        "# L={} vmax={} nx={} nv={} reference={}",
        format_f64(s.length),
        format_f64(s.v_max),
        s.nx,
        s.nv,
        s.reference
    )?;
    for row in s.values.chunks(s.nx) {
        let line: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_convergence<W: Write>(mut w: W, rows: &[ConvergenceRow]) -> io::Result<()> {
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{}", format_f64(r.t), format_f64(r.h), format_f64(r.err_e_inf))?;
    }
    Ok(())
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_t{}.csv", format_f64(t))
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes `amplitude.csv` and one file per snapshot into `dir`; returns the paths.
pub fn write_run(dir: &Path, diagnostics: &[Diagnostics], snapshots: &[Snapshot]) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("amplitude.csv");
    let mut w = create(&path)?;
    write_amplitude(&mut w, diagnostics)?;
    w.flush()?;
    written.push(path);
    for s in snapshots {
        let path = dir.join(snapshot_file_name(s.t));
        let mut w = create(&path)?;
        write_snapshot(&mut w, s)?;
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_convergence_file(dir: &Path, rows: &[ConvergenceRow]) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join("convergence.csv");
    let mut w = create(&path)?;
    write_convergence(&mut w, rows)?;
    w.flush()?;
    Ok(path)
}
