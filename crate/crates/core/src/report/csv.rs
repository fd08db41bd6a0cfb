//! Plain CSV tables with a header row. Floats use 17 significant digits.

use std::fmt::Write;

use crate::bov::CurveGrowth;
use crate::dynamics::{GridClassification, OrbitResult};
use crate::safe::SafeValue;
use crate::singular::CriticalDatum;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `re, im` for finite values, `logmag` and `arg` columns otherwise.
fn safe_columns(v: &SafeValue) -> String {
    match *v {
        SafeValue::Finite(z) => format!("{},{},{},,", num(z.re), num(z.im), num(z.norm())),
        SafeValue::LogPolar { logmag, arg } => format!(",,inf,{},{}", num(logmag), num(arg)),
        SafeValue::Saturated => ",,inf,inf,".to_string(),
    }
}

/// One row per pixel: `i, j, re, im, label, iterations`.
pub fn grid_csv(g: &GridClassification) -> String {
    let mut out = String::from("i,j,re,im,label,iterations\n");
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let z = g.raster.center(i, j);
            let p = j * g.nx() + i;
            writeln!(
                out,
                "{i},{j},{},{},{},{}",
                num(z.re),
                num(z.im),
                g.labels[p],
                g.iterations[p]
            )
            .unwrap();
        }
    }
    out
}

/// `n, re, im, modulus, logmag, arg`.
pub fn orbit_csv(o: &OrbitResult) -> String {
    let mut out = String::from("n,re,im,modulus,logmag,arg\n");
    for (n, v) in o.points.iter().enumerate() {
        writeln!(out, "{n},{}", safe_columns(v)).unwrap();
    }
    out
}

/// `t, re, im, modulus` along the curve; `modulus` is `inf` beyond the
/// finite range and `logmag` carries its logarithm.
pub fn curve_csv(g: &CurveGrowth) -> String {
    let mut out = String::from("t,re,im,modulus,logmag\n");
    for s in &g.trace {
        writeln!(
            out,
            "{},{},{},{},{}",
            num(s.t),
            num(s.z.re),
            num(s.z.im),
            num(s.value.modulus()),
            num(s.value.log_modulus())
        )
        .unwrap();
    }
    out
}

/// `window, re, im, residual` of each critical point followed by its value
/// columns as in [`orbit_csv`].
pub fn critical_csv(data: &[CriticalDatum]) -> String {
    let mut out = String::from(
        "window,re,im,residual,value_re,value_im,value_modulus,value_logmag,value_arg\n",
    );
    for d in data {
        let value = d.value.as_ref().map_or(",,,,".to_string(), safe_columns);
        writeln!(
            out,
            "{},{},{},{},{value}",
            d.window_id,
            num(d.point.re),
            num(d.point.im),
            num(d.residual)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bov::{curve_growth, CurveKind, CurveSpec};
    use crate::dynamics::iterate;
    use crate::map::{MapSpec, ReferenceExp};
    use num_complex::Complex64;

    #[test]
    fn orbit_rows() {
        let m = MapSpec::f_lambda(1.0).unwrap();
        let o = iterate(&m, Complex64::new(0.0, 0.0), 20).unwrap();
        let text = orbit_csv(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,re,im,modulus,logmag,arg");
        assert_eq!(lines.len(), o.points.len() + 1);
        assert!(lines[1].starts_with("0,0.0000000000000000e0,"));
        // the last point overflowed
        assert!(lines.last().unwrap().contains(",inf,"));
    }

    #[test]
    fn curve_rows() {
        let c = CurveSpec::new(CurveKind::LeftRay, 1.0, 10.0).unwrap();
        let g = curve_growth(&ReferenceExp, &c, 64).unwrap();
        let text = curve_csv(&g);
        assert_eq!(text.lines().count(), 65);
        assert!(text.starts_with("t,re,im,modulus,logmag\n"));
    }
}
