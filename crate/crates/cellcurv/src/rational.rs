//! Exact rational scalar used throughout the transport and curvature
//! pipeline, with the `p/q` rendering the CLI emits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; always reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders as `p/q`, or just `p` when the denominator is 1.
pub fn display_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed 12-decimal rendering used next to the exact fraction.
pub fn display_rat_decimal(r: &Rat) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let scale = BigInt::from(10u64.pow(12));
    // round half away from zero at the 12th decimal
    let scaled = (a.numer() * &scale * 2 + a.denom()) / (a.denom() * 2);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    format!("{sign}{int_part}.{frac_part:012}")
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through the decimal rendering for out-of-range values
        display_rat_decimal(r).parse().unwrap_or(f64::NAN)
    })
}

/// Parses `p/q` or a bare integer; used by the CLI `--alpha` flag.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator `{num}`"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator `{den}`"))?;
    if d.is_zero() {
        return Err("rational denominator is zero".to_string());
    }
    Ok(Rat::new(n, d))
}
