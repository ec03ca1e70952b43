//! Hexadecimal float literals (`0x1.8p+1`), exact for every finite binary64.

/// Formats a finite value as a C99-style hex float literal.
pub fn format_hex(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { "" } else { "." };
    format!("{sign}0x{lead}{dot}{digits}p{exp:+}")
}

/// Parses a hex float literal or an ordinary decimal float.
pub fn parse_float(s: &str) -> Option<f64> {
    let s = s.trim();
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let hex = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"));
    let value = match hex {
        Some(h) => parse_hex_body(h)?,
        None => return s.parse::<f64>().ok().filter(|v| v.is_finite()),
    };
    Some(if neg { -value } else { value })
}

fn parse_hex_body(h: &str) -> Option<f64> {
    let (mant, exp) = h.split_once(['p', 'P'])?;
    let exp: i32 = exp.parse().ok()?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = int_part.chars().chain(frac_part.chars()).collect();
    // 53 significant bits fit in 14 hex digits; longer inputs are rejected
    // rather than rounded
    let trimmed = digits.trim_start_matches('0');
    if trimmed.len() > 14 {
        return None;
    }
    let m = if trimmed.is_empty() { 0 } else { u64::from_str_radix(trimmed, 16).ok()? };
    if m >> 53 != 0 {
        return None;
    }
    let shift = exp.checked_sub(4 * frac_part.len() as i32)?;
    let v = ldexp(m as f64, shift);
    v.is_finite().then_some(v)
}

/// `x·2^k` applied in exact power-of-two steps.
fn ldexp(mut x: f64, mut k: i32) -> f64 {
    let big = 2f64.powi(1000);
    let small = 2f64.powi(-1000);
    while k > 1000 {
        x *= big;
        k -= 1000;
    }
    while k < -1000 {
        x *= small;
        k += 1000;
    }
    x * 2f64.powi(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_literals() {
        assert_eq!(format_hex(1.0), "0x1p+0");
        assert_eq!(format_hex(3.0), "0x1.8p+1");
        assert_eq!(format_hex(-0.5), "-0x1p-1");
        assert_eq!(format_hex(0.0), "0x0p+0");
        assert_eq!(format_hex(-0.0), "-0x0p+0");
        assert_eq!(format_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        assert_eq!(parse_float("0x1.8p+1"), Some(3.0));
        assert_eq!(parse_float("2.5"), Some(2.5));
        assert_eq!(parse_float("0x1p-1074"), Some(f64::from_bits(1)));
        assert_eq!(parse_float("nan"), None);
        assert_eq!(parse_float("0xzp1"), None);
    }

    proptest! {
        #[test]
        fn round_trip_is_bitwise(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back = parse_float(&format_hex(x)).unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
