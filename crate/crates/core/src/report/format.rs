//! Display rounding shared by every rendered table.
//!
//! Rounding is half away from zero on the binary value, so results never
//! depend on the formatter's tie-breaking.

fn round_to(v: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (v * scale).round() / scale
}

/// Fixed number of decimals.
pub fn fixed(v: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, round_to(v, decimals))
}

/// Likelihood ratio: one decimal, with whole values of 10 and above shown
/// as integers ("3.0", "10.8", "27", "891").
pub fn lr(v: f64) -> String {
    if !v.is_finite() {
        return "inf".to_string();
    }
    let r = round_to(v, 1);
    if r >= 10.0 && r.fract() == 0.0 {
        fixed(r, 0)
    } else {
        fixed(r, 1)
    }
}

/// Integer percent ("11%").
pub fn pct(p: f64) -> String {
    format!("{}%", fixed(p * 100.0, 0))
}

/// Percent with one decimal ("62.4%").
pub fn pct1(p: f64) -> String {
    format!("{}%", fixed(p * 100.0, 1))
}

/// Percent with up to one decimal and no trailing zero ("3%", "17.3%").
pub fn pct_short(p: f64) -> String {
    format!("{}%", trim(round_to(p * 100.0, 1), 1))
}

/// Up to `decimals` decimals with trailing zeros dropped.
pub fn trim(v: f64, decimals: u32) -> String {
    let s = fixed(v, decimals);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Number needed to detain, one decimal; "inf" when PPV is zero.
pub fn nnd(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |n| fixed(n, 1))
}

/// Shortest representation that parses back to the same value.
pub fn exact(v: f64) -> String {
    format!("{v}")
}
