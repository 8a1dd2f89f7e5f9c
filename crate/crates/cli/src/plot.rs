//! gnuplot output: a whitespace-separated `.dat` file and a `.gp` script
//! that plots it.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::format::real;
use crate::report::DensityJson;

/// Paths written by [`emit_density_plot`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotFiles {
    pub data: PathBuf,
    pub script: PathBuf,
}

/// Writes `<base>.dat` (columns: theta, density) and `<base>.gp`. The script
/// refers to the data file by name, so run gnuplot from that directory.
pub fn emit_density_plot(base: &Path, d: &DensityJson) -> io::Result<PlotFiles> {
    let data = with_suffix(base, "dat");
    let script = with_suffix(base, "gp");

    let mut body = format!("# theta density  (l = {}, |m| = {})\n", d.l, d.m);
    for (t, p) in d.theta.iter().zip(&d.density) {
        body.push_str(&real(*t));
        body.push(' ');
        body.push_str(&real(*p));
        body.push('\n');
    }
    fs::write(&data, body)?;

    let data_name = data.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let gp = format!(
        "set xlabel \"theta (rad)\"\n\
         set ylabel \"|N P_l^m(cos theta)|^2 sin theta\"\n\
         set xrange [0:pi]\n\
         set key top right\n\
         plot \"{data_name}\" using 1:2 with lines title \"l = {l}, |m| = {m}\"\n",
        l = d.l,
        m = d.m,
    );
    fs::write(&script, gp)?;
    Ok(PlotFiles { data, script })
}

fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
