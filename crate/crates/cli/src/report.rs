use std::fmt::Write as _;
use std::path::Path;

use gcrossed::io;
use num_complex::Complex64;
use serde::Serialize;

use crate::Failure;

/// Fixed 6-decimal rendering with `-0` folded to `0`.
pub fn real(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn complex(z: Complex64) -> String {
    if real(z.im) == "0.000000" {
        return real(z.re);
    }
    let im = real(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{im}i", real(z.re))
}

/// Residuals below `1e-12` are shown as 0 so that reports do not depend on rounding noise.
pub fn residual(r: f64) -> String {
    if r < 1e-12 {
        "0".into()
    } else {
        format!("{r:.2e}")
    }
}

pub fn write_out<S: Serialize>(path: Option<&Path>, value: &S, text: &mut String) -> Result<(), Failure> {
    if let Some(p) = path {
        io::write_json(p, value)?;
        let _ = writeln!(text, "wrote {}", p.display());
    }
    Ok(())
}
