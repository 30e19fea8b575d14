//! Text renderings of exact values.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Reduced `num/den`, always with an explicit denominator.
pub fn fraction_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal rounding with ties to even, exact for any rational input.
pub fn decimal_half_even(x: &BigRational, precision: usize) -> String {
    let scale = num::pow(BigInt::from(10), precision);
    let scaled = x * BigRational::from_integer(scale);
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut q = floor.to_integer();
    if frac > half || (frac == half && q.is_odd()) {
        q += 1;
    }
    let negative = q.is_negative();
    let digits = q.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = precision + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - precision);
    let sign = if negative && !q.is_zero() { "-" } else { "" };
    if precision == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Parses `a`, `a/b` or a plain decimal such as `-1.25` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let bad = || format!("not a rational number: {text:?}");
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        return Ok(BigRational::new(
            numer,
            num::pow(BigInt::from(10), frac.len()),
        ));
    }
    let r: BigRational = t.parse().map_err(|_| bad())?;
    Ok(r)
}
