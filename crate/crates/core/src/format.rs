//! Fixed-precision number formatting shared by the text outputs.

/// Formats `x` in positional notation with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    // the exponent after rounding, so a carry into a new leading digit is seen
    let sci = format!("{x:.prec$e}", prec = digits.saturating_sub(1));
    let exponent: i64 = sci[sci.find('e').map_or(sci.len(), |i| i + 1)..].parse().unwrap_or(0);
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.prec$e}", prec = digits.saturating_sub(1))
        .parse()
        .unwrap_or(x)
}
