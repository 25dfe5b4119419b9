//! CSV writers for trajectories and mass surfaces.

use std::fmt::Write as _;

use crate::grasp::MassSurface;
use crate::linkage::Trajectory;

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Wide-format trajectory: `input,<id>_x,<id>_y,...`, ids sorted, 17
/// significant digits.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let ids: Vec<&String> = trajectory
        .samples
        .first()
        .map(|s| s.positions.keys().collect())
        .unwrap_or_default();
    let mut out = String::from("input");
    for id in &ids {
        let _ = write!(out, ",{id}_x,{id}_y");
    }
    out.push('\n');
    for sample in &trajectory.samples {
        out.push_str(&format_sig(sample.input, 17));
        for id in &ids {
            let p = sample.positions[*id];
            let _ = write!(out, ",{},{}", format_sig(p.x, 17), format_sig(p.y, 17));
        }
        out.push('\n');
    }
    out
}

/// `mu,fn,mass_kg`, row-major in μ then Fn, 9 significant digits.
pub fn mass_surface_csv(surface: &MassSurface) -> String {
    let mut out = String::from("mu,fn,mass_kg\n");
    for (i, mu) in surface.mu_axis.iter().enumerate() {
        for (j, fn_) in surface.fn_axis.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                format_sig(*mu, 9),
                format_sig(*fn_, 9),
                format_sig(surface.at(i, j), 9)
            );
        }
    }
    out
}

/// Rounds to `digits` significant digits (for JSON summaries).
pub fn round_sig(x: f64, digits: usize) -> f64 {
    format_sig(x, digits).parse().unwrap_or(x)
}
