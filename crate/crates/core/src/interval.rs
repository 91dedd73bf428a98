//! Certified enclosures: rationals rounded outward to dyadic grids, bounds on
//! `e`, and natural logarithms of positive rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

pub const DEFAULT_BITS: u32 = 128;

/// Extra working precision used inside series evaluations.
const GUARD_BITS: u32 = 32;

fn two_pow(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// `q` rounded down to a multiple of `2^-bits`.
pub fn round_down(q: &BigRational, bits: u32) -> BigRational {
    let scaled = (q * BigRational::from_integer(two_pow(bits))).floor();
    BigRational::new(scaled.to_integer(), two_pow(bits))
}

/// `q` rounded up to a multiple of `2^-bits`.
pub fn round_up(q: &BigRational, bits: u32) -> BigRational {
    let scaled = (q * BigRational::from_integer(two_pow(bits))).ceil();
    BigRational::new(scaled.to_integer(), two_pow(bits))
}

/// `q` rounded up, keeping about `bits` significant bits.
pub fn round_up_relative(q: &BigRational, bits: u32) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let shift = bits as i64 - mag;
    if shift <= 0 {
        return q.ceil();
    }
    round_up(q, shift as u32)
}

/// A closed interval `[lower, upper]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl CertifiedInterval {
    pub fn new(lower: BigRational, upper: BigRational) -> Self {
        assert!(lower <= upper, "interval endpoints out of order");
        CertifiedInterval { lower, upper }
    }

    pub fn point(x: BigRational) -> Self {
        CertifiedInterval {
            lower: x.clone(),
            upper: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    /// `[x − r, x + r]` for `r >= 0`.
    pub fn around(x: &BigRational, radius: &BigRational) -> Self {
        Self::new(x - radius, x + radius)
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &CertifiedInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    pub fn add(&self, other: &CertifiedInterval) -> CertifiedInterval {
        CertifiedInterval {
            lower: &self.lower + &other.lower,
            upper: &self.upper + &other.upper,
        }
    }

    pub fn sub(&self, other: &CertifiedInterval) -> CertifiedInterval {
        CertifiedInterval {
            lower: &self.lower - &other.upper,
            upper: &self.upper - &other.lower,
        }
    }

    pub fn mul(&self, other: &CertifiedInterval) -> CertifiedInterval {
        let products = [
            &self.lower * &other.lower,
            &self.lower * &other.upper,
            &self.upper * &other.lower,
            &self.upper * &other.upper,
        ];
        let lower = products.iter().min().unwrap().clone();
        let upper = products.iter().max().unwrap().clone();
        CertifiedInterval { lower, upper }
    }

    pub fn scale(&self, c: &BigRational) -> CertifiedInterval {
        self.mul(&CertifiedInterval::point(c.clone()))
    }

    /// Rounds both endpoints outward to multiples of `2^-bits`, keeping
    /// denominators bounded.
    pub fn outward(&self, bits: u32) -> CertifiedInterval {
        CertifiedInterval {
            lower: round_down(&self.lower, bits),
            upper: round_up(&self.upper, bits),
        }
    }

    /// Integer power of an interval with nonnegative endpoints.
    pub fn pow_nonneg(&self, e: u32) -> CertifiedInterval {
        assert!(!self.lower.is_negative(), "pow_nonneg needs a nonnegative interval");
        CertifiedInterval {
            lower: Pow::pow(&self.lower, e),
            upper: Pow::pow(&self.upper, e),
        }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip_pos(&self) -> CertifiedInterval {
        assert!(self.lower.is_positive(), "recip_pos needs a positive interval");
        CertifiedInterval {
            lower: self.upper.recip(),
            upper: self.lower.recip(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lower.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper.is_negative()
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_down(&self.lower, 20),
            format_up(&self.upper, 20)
        )
    }
}

impl Serialize for CertifiedInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_down(&self.lower, 20), format_up(&self.upper, 20)].serialize(s)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Enclosure of `e`: the partial sum `Σ_{i<=N} 1/i!` from below and that sum
/// plus `1/(N!·N)` from above.
pub fn e_interval(bits: u32) -> CertifiedInterval {
    let mut terms = 2u32;
    // choose N with N!·N > 2^(bits + guard)
    while factorial(terms) * BigInt::from(terms) <= two_pow(bits + GUARD_BITS) {
        terms += 1;
    }
    let mut sum = BigRational::zero();
    for i in 0..=terms {
        sum += BigRational::new(BigInt::one(), factorial(i));
    }
    let remainder = BigRational::new(BigInt::one(), factorial(terms) * BigInt::from(terms));
    CertifiedInterval {
        lower: round_down(&sum, bits),
        upper: round_up(&(sum + remainder), bits),
    }
}

/// Enclosure of `e^k`.
pub fn e_pow(k: u32, bits: u32) -> CertifiedInterval {
    e_interval(bits + GUARD_BITS).pow_nonneg(k).outward(bits)
}

/// Enclosure of `atanh(z) = Σ z^{2i+1}/(2i+1)` for `0 <= z <= 1/3`, with the
/// tail after the last term bounded by `z^{2N+1}/((2N+1)(1−z²))`.
fn atanh_small(z: &BigRational, bits: u32) -> CertifiedInterval {
    debug_assert!(!z.is_negative() && z <= &BigRational::new(1.into(), 3.into()));
    if z.is_zero() {
        return CertifiedInterval::zero();
    }
    let work = bits + GUARD_BITS;
    let target = BigRational::new(BigInt::one(), two_pow(work));
    let z2 = z * z;
    let mut power_lo = z.clone();
    let mut power_hi = z.clone();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut i = 0u32;
    loop {
        let denom = BigRational::from_integer(BigInt::from(2 * i + 1));
        lo += round_down(&(&power_lo / &denom), work);
        hi += round_up(&(&power_hi / &denom), work);
        power_lo = round_down(&(&power_lo * &z2), work + 8);
        power_hi = round_up(&(&power_hi * &z2), work + 8);
        i += 1;
        let next_denom = BigRational::from_integer(BigInt::from(2 * i + 1));
        let tail = &power_hi / (next_denom * (BigRational::one() - &z2));
        if tail < target {
            hi += round_up(&tail, work);
            break;
        }
    }
    CertifiedInterval { lower: lo, upper: hi }.outward(bits)
}

/// Enclosure of `ln 2 = 2·atanh(1/3)`.
pub fn ln2(bits: u32) -> CertifiedInterval {
    atanh_small(&BigRational::new(1.into(), 3.into()), bits + GUARD_BITS)
        .scale(&BigRational::from_integer(2.into()))
        .outward(bits)
}

fn bit_length(x: &BigInt) -> i64 {
    x.magnitude().bits() as i64
}

/// Enclosure of `ln q` for `q > 0`.
///
/// Writes `q = 2^m · r` with `r ∈ [1, 2)`, then `ln r = 2·atanh((r−1)/(r+1))`.
pub fn ln(q: &BigRational, bits: u32) -> CertifiedInterval {
    assert!(q.is_positive(), "ln of a nonpositive number");
    if q.is_one() {
        return CertifiedInterval::zero();
    }
    let work = bits + GUARD_BITS;
    let mut m = bit_length(q.numer()) - bit_length(q.denom());
    let shift = |m: i64| -> BigRational {
        if m >= 0 {
            q / BigRational::from_integer(BigInt::one() << m as usize)
        } else {
            q * BigRational::from_integer(BigInt::one() << (-m) as usize)
        }
    };
    let mut r = shift(m);
    let two = BigRational::from_integer(2.into());
    while r >= two {
        m += 1;
        r = shift(m);
    }
    while r < BigRational::one() {
        m -= 1;
        r = shift(m);
    }
    // Working with an enclosure of r keeps the series denominators small.
    let r_lo = round_down(&r, work);
    let r_hi = round_up(&r, work);
    let z = |r: &BigRational| (r - BigRational::one()) / (r + BigRational::one());
    let one_third = BigRational::new(1.into(), 3.into());
    let lo = atanh_small(&round_down(&z(&r_lo), work), work).lower;
    let hi = atanh_small(&round_up(&z(&r_hi), work).min(one_third), work).upper;
    let ln_r = CertifiedInterval::new(lo, hi).scale(&two);
    let mpart = ln2(work).scale(&BigRational::from_integer(BigInt::from(m)));
    ln_r.add(&mpart).outward(bits)
}

/// Enclosure of `ln x` for every `x` in a positive interval.
pub fn ln_interval(x: &CertifiedInterval, bits: u32) -> CertifiedInterval {
    CertifiedInterval {
        lower: ln(&x.lower, bits).lower,
        upper: ln(&x.upper, bits).upper,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
}

fn floor_log10(x: &BigRational) -> i64 {
    // x > 0
    let ten = BigRational::from_integer(10.into());
    let mut e = ((bit_length(x.numer()) - bit_length(x.denom())) as f64 * std::f64::consts::LOG10_2) as i64;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(Pow::pow(BigInt::from(10), e as u32))
        } else {
            BigRational::new(BigInt::one(), Pow::pow(BigInt::from(10), (-e) as u32))
        }
    };
    while &pow(e) > x {
        e -= 1;
    }
    while &(pow(e) * &ten) <= x {
        e += 1;
    }
    e
}

fn format_directed(q: &BigRational, digits: usize, dir: Direction) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = q.is_negative();
    let mag = q.abs();
    let e = floor_log10(&mag);
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        mag * BigRational::from_integer(Pow::pow(BigInt::from(10), shift as u32))
    } else {
        mag / BigRational::from_integer(Pow::pow(BigInt::from(10), (-shift) as u32))
    };
    // Rounding the magnitude toward zero moves a negative value up.
    let toward_zero = (dir == Direction::Down) != negative;
    let mant = if toward_zero {
        scaled.floor().to_integer()
    } else {
        scaled.ceil().to_integer()
    };
    let mut text = mant.to_str_radix(10);
    let mut exp = e;
    if text.len() > digits {
        // ceil carried into a new digit, e.g. 9.99 → 10.0
        text.truncate(digits);
        exp += 1;
    }
    let (head, tail) = text.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    let body = if tail.is_empty() {
        head.to_string()
    } else {
        format!("{head}.{tail}")
    };
    if exp == 0 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{body}e{exp}")
    }
}

/// Decimal string not greater than `q`, with `digits` significant digits.
pub fn format_down(q: &BigRational, digits: usize) -> String {
    format_directed(q, digits, Direction::Down)
}

/// Decimal string not less than `q`, with `digits` significant digits.
pub fn format_up(q: &BigRational, digits: usize) -> String {
    format_directed(q, digits, Direction::Up)
}

/// Exact decimal form of an integer-valued rational, or `num/den`.
pub fn format_exact(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_str_radix(10)
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.0005`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().ok()?,
        };
        let scale = Pow::pow(BigInt::from(10), frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        let v = BigRational::new(whole * &scale + frac, scale);
        return Some(if negative { -v } else { v });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// `a / b` as a rational for integer inputs.
pub fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Integer `n` choose `k` for rationals: convenient in exact series.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
    }
    acc.div_floor(&factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        ratio(a, b)
    }

    fn approx(i: &CertifiedInterval) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (i.lower.to_f64().unwrap(), i.upper.to_f64().unwrap())
    }

    #[test]
    fn e_enclosure_is_tight_and_correct() {
        let e = e_interval(128);
        let (lo, hi) = approx(&e);
        assert!(lo <= std::f64::consts::E && std::f64::consts::E <= hi);
        assert!(e.width() < ratio(1, 1) / BigRational::from_integer(two_pow(120)));
        let e5 = e_pow(5, 128);
        let (lo, hi) = approx(&e5);
        assert!(lo <= 148.4131591025766 + 1e-9 && 148.4131591025766 - 1e-9 <= hi);
    }

    #[test]
    fn logarithms() {
        let l2 = ln2(128);
        let (lo, hi) = approx(&l2);
        assert!(lo <= std::f64::consts::LN_2 + 1e-15 && std::f64::consts::LN_2 - 1e-15 <= hi);
        assert!(l2.width() <= ratio(1, 1) / BigRational::from_integer(two_pow(126)));
        assert_eq!(ln(&q(1, 1), 128), CertifiedInterval::zero());
        for (a, b) in [(40, 64), (3, 1), (1, 1000), (123456789, 7), (2, 1)] {
            let i = ln(&q(a, b), 128);
            let exact = (a as f64 / b as f64).ln();
            let (lo, hi) = approx(&i);
            assert!(lo <= exact + 1e-12 && exact - 1e-12 <= hi, "{a}/{b}");
            assert!(i.width() < ratio(1, 1) / BigRational::from_integer(two_pow(120)));
        }
    }

    #[test]
    fn ln_is_additive_within_enclosures() {
        let a = ln(&q(7, 3), 128);
        let b = ln(&q(5, 11), 128);
        let ab = ln(&q(35, 33), 128);
        let sum = a.add(&b);
        assert!(sum.lower <= ab.upper && ab.lower <= sum.upper);
    }

    #[test]
    fn directed_formatting() {
        assert_eq!(format_down(&q(1, 3), 5), "3.3333e-1");
        assert_eq!(format_up(&q(1, 3), 5), "3.3334e-1");
        assert_eq!(format_down(&q(-1, 3), 5), "-3.3334e-1");
        assert_eq!(format_up(&q(-1, 3), 5), "-3.3333e-1");
        assert_eq!(format_down(&q(250, 1), 5), "2.5e2");
        assert_eq!(format_up(&q(9999, 1000), 3), "1e1");
        assert_eq!(format_down(&q(0, 1), 5), "0");
        assert_eq!(format_down(&q(7, 1), 5), "7");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2000"), Some(q(1, 2000)));
        assert_eq!(parse_rational("0.0005"), Some(q(1, 2000)));
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(binomial(&BigInt::from(10), 3), BigInt::from(120));
    }

    proptest! {
        #[test]
        fn ln_encloses_f64(a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let i = ln(&ratio(a, b), 96);
            let exact = (a as f64).ln() - (b as f64).ln();
            let (lo, hi) = approx(&i);
            prop_assert!(lo <= exact + 1e-9 && exact - 1e-9 <= hi);
        }

        #[test]
        fn formatting_brackets(a in -1_000_000i64..1_000_000, b in 1i64..1000, digits in 1usize..8) {
            let x = ratio(a, b);
            let down = parse_sci(&format_down(&x, digits));
            let up = parse_sci(&format_up(&x, digits));
            prop_assert!(down <= x && x <= up);
        }
    }

    fn parse_sci(s: &str) -> BigRational {
        let (m, e) = s.split_once('e').unwrap_or((s, "0"));
        let m = parse_rational(m).unwrap();
        let e: i32 = e.parse().unwrap();
        let ten = BigRational::from_integer(10.into());
        if e >= 0 { m * Pow::pow(&ten, e as u32) } else { m / Pow::pow(&ten, (-e) as u32) }
    }
}
