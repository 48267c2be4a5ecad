//! Bessel functions of the first kind at quarter-integer orders.
//!
//! Evaluation uses the ascending power series
//!
//! ```text
//! J_ν(x) = Σ_k (-1)^k / (k! Γ(k+ν+1)) · (x/2)^(2k+ν)
//! ```
//!
//! which converges quickly for the small arguments of the ribbon problem
//! (x ≤ 2.79). Gamma values come from a table of Γ(1/4), Γ(1/2), Γ(3/4),
//! Γ(1) and the recurrence Γ(z+1) = zΓ(z), so only orders that are integer
//! multiples of 1/4 are representable.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest argument accepted by the series evaluator.
pub const MAX_ARGUMENT: f64 = 50.0;

const SERIES_TOL: f64 = 1e-15;
const MAX_TERMS: usize = 400;
const ZERO_TOL: f64 = 1e-13;
const PLAIN_SERIES_LIMIT: f64 = 4.0;

// Γ(q/4) for q = 1..=4.
const GAMMA_QUARTERS: [f64; 4] = [
    3.625_609_908_221_908_3,
    1.772_453_850_905_516,
    1.225_416_702_465_177_6,
    1.0,
];

/// Order ν of a Bessel function, stored exactly as a multiple of 1/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselOrder {
    quarters: i32,
}

impl BesselOrder {
    pub const QUARTER: BesselOrder = BesselOrder { quarters: 1 };
    pub const NEG_QUARTER: BesselOrder = BesselOrder { quarters: -1 };
    pub const HALF: BesselOrder = BesselOrder { quarters: 2 };

    /// Order `quarters / 4`; must exceed -1.
    pub fn from_quarters(quarters: i32) -> Result<Self> {
        if quarters <= -4 {
            return Err(Error::domain(format!(
                "Bessel order {}/4 must exceed -1",
                quarters
            )));
        }
        Ok(BesselOrder { quarters })
    }

    pub fn quarters(self) -> i32 {
        self.quarters
    }

    pub fn value(self) -> f64 {
        f64::from(self.quarters) / 4.0
    }

    /// The order one above this one (ν + 1).
    pub fn succ(self) -> BesselOrder {
        BesselOrder {
            quarters: self.quarters + 4,
        }
    }
}

/// Γ(q/4) for a positive integer q.
pub fn gamma_quarter(quarters: i32) -> f64 {
    assert!(quarters > 0, "gamma_quarter needs a positive argument");
    let mut q = quarters;
    let mut scale = 1.0;
    while q > 4 {
        q -= 4;
        scale *= f64::from(q) / 4.0;
    }
    scale * GAMMA_QUARTERS[(q - 1) as usize]
}

fn check_argument(x: f64) -> Result<()> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::domain(format!(
            "Bessel argument {x} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(())
}

/// Σ_k (-1)^k (x/2)^(2k) / (k! Γ(k+ν+1)), i.e. (x/2)^(-ν) J_ν(x).
///
/// Past x = 4 the terms grow well above the sum before cancelling, so the
/// recurrence and the sum are carried in double-double arithmetic there.
fn series_core(order: BesselOrder, x: f64) -> f64 {
    if x <= PLAIN_SERIES_LIMIT {
        series_plain(order, x)
    } else {
        series_extended(order, x)
    }
}

fn series_plain(order: BesselOrder, x: f64) -> f64 {
    let nu = order.value();
    let q = -(x * x) / 4.0;
    let mut term = 1.0 / gamma_quarter(order.quarters + 4);
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= SERIES_TOL * sum.abs() {
            break;
        }
    }
    sum
}

fn series_extended(order: BesselOrder, x: f64) -> f64 {
    let nu = order.value();
    let q = DoubleDouble::product(x, x).scale(-0.25);
    let mut term = DoubleDouble::from(1.0 / gamma_quarter(order.quarters + 4));
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term = term.mul(q).div_f64(kf * (kf + nu));
        sum = sum.add(term);
        if term.hi.abs() <= SERIES_TOL * sum.hi.abs() {
            break;
        }
    }
    sum.hi + sum.lo
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl From<f64> for DoubleDouble {
    fn from(hi: f64) -> Self {
        DoubleDouble { hi, lo: 0.0 }
    }
}

impl DoubleDouble {
    fn renormalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        DoubleDouble { hi: s, lo: lo - (s - hi) }
    }

    fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        DoubleDouble { hi: p, lo: a.mul_add(b, -p) }
    }

    fn scale(self, power_of_two: f64) -> Self {
        DoubleDouble {
            hi: self.hi * power_of_two,
            lo: self.lo * power_of_two,
        }
    }

    fn add(self, other: Self) -> Self {
        let s = self.hi + other.hi;
        let v = s - self.hi;
        let err = (self.hi - (s - v)) + (other.hi - v);
        Self::renormalize(s, err + self.lo + other.lo)
    }

    fn mul(self, other: Self) -> Self {
        let p = Self::product(self.hi, other.hi);
        Self::renormalize(p.hi, p.lo + self.hi * other.lo + self.lo * other.hi)
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = Self::product(q1, b);
        let r = (self.hi - p.hi - p.lo) + self.lo;
        Self::renormalize(q1, r / b)
    }
}

/// J_ν(x) for x in [0, 50].
///
/// J_ν(0) is 0 for ν > 0, 1 for ν = 0 and unbounded for ν < 0; the last case
/// is a domain error.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    if x == 0.0 {
        return match order.quarters.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(0.0),
            std::cmp::Ordering::Equal => Ok(1.0),
            std::cmp::Ordering::Less => Err(Error::domain(format!(
                "J_{} is singular at x = 0",
                order.value()
            ))),
        };
    }
    Ok((x / 2.0).powf(order.value()) * series_core(order, x))
}

/// The entire function (x/2)^(-ν) J_ν(x), finite at x = 0 for every order.
pub fn bessel_j_scaled(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(series_core(order, x))
}

fn zero_bracket(order: BesselOrder) -> Option<(f64, f64)> {
    match order.quarters {
        1 => Some((2.0, 3.2)),
        -1 => Some((1.5, 2.5)),
        2 => Some((2.5, 3.5)),
        _ => None,
    }
}

/// Smallest positive root of J_ν for ν ∈ {1/4, -1/4, 1/2}, found by bisection.
pub fn first_positive_zero(order: BesselOrder) -> Result<f64> {
    let (mut lo, mut hi) = zero_bracket(order).ok_or_else(|| {
        Error::domain(format!("no zero bracket for Bessel order {}", order.value()))
    })?;
    let mut f_lo = bessel_j(order, lo)?;
    let f_hi = bessel_j(order, hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoConvergence(format!(
            "J_{} does not change sign on [{lo}, {hi}]",
            order.value()
        )));
    }
    while hi - lo > ZERO_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = bessel_j(order, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First zero of J_{1/4}, the eigencondition of the twisted ribbon. Cached.
pub fn quarter_order_zero() -> f64 {
    static ZERO: OnceLock<f64> = OnceLock::new();
    *ZERO.get_or_init(|| {
        first_positive_zero(BesselOrder::QUARTER).expect("J_1/4 bracket is fixed and valid")
    })
}
