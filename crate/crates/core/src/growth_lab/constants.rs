use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad_arith::QuadRing;

/// `t^{(2)}` of `H³` for the even weight `2ℓ`: `−(ℓ(ℓ+1) + 1/6)/π`.
pub fn t2_even(l: u64) -> f64 {
    let l = l as f64;
    -(l * (l + 1.0) + 1.0 / 6.0) / PI
}

pub fn b_of_m(m: usize) -> f64 {
    let h = m as f64 / 2.0;
    (0..m)
        .map(|k| {
            let k = k as f64;
            let c = 2.0 * (1.0 + k) * (m as f64 - k);
            let num = h - k + ((h - k).powi(2) + c).sqrt();
            let den = h - k - 1.0 + ((h - k - 1.0).powi(2) + c).sqrt();
            (num / den).ln()
        })
        .sum()
}

pub fn c_rho(m: usize) -> f64 {
    ((m + 1) as f64).ln() + b_of_m(m) / 2.0
}

/// Kronecker symbol `(d/n)` for a discriminant `d` and `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    while n % 2 == 0 {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => sign = -sign,
            _ => return 0,
        }
    }
    // Jacobi symbol (d mod n / n) for odd n.
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut b = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if b % 8 == 3 || b % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        a %= b;
    }
    if b == 1 {
        sign
    } else {
        0
    }
}

/// Hurwitz `ζ(2, x)` by Euler–Maclaurin with a shift of 16.
fn hurwitz_zeta2(x: f64) -> f64 {
    const SHIFT: usize = 16;
    // B_2, B_4, …, B_12.
    const BERNOULLI: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let head: f64 = (0..SHIFT).map(|n| 1.0 / (n as f64 + x).powi(2)).sum();
    let y = SHIFT as f64 + x;
    let mut tail = 1.0 / y + 1.0 / (2.0 * y * y);
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += b / y.powi(2 * k as i32 + 3);
    }
    head + tail
}

/// `L(2, χ_d) = |d|^{−2} Σ_{a=1}^{|d|} χ_d(a) ζ(2, a/|d|)`.
pub fn dirichlet_l2(d: i64) -> f64 {
    let q = d.unsigned_abs();
    let s: f64 = (1..=q)
        .map(|a| kronecker(d, a) as f64 * hurwitz_zeta2(a as f64 / q as f64))
        .sum();
    s / (q as f64).powi(2)
}

/// `D` with class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// Volume of `SL(2, O_D) \ H³`: `|d_F|^{3/2} ζ(2) L(2, χ_{d_F}) / (4π²)`.
pub fn humbert_volume(d: i64) -> Result<f64> {
    if !CLASS_NUMBER_ONE.contains(&d) {
        return Err(Error::UnsupportedD(d));
    }
    let ring = QuadRing::new(d)?;
    let disc = ring.discriminant();
    let zeta2 = PI * PI / 6.0;
    Ok((disc.unsigned_abs() as f64).powf(1.5) * zeta2 * dirichlet_l2(disc) / (4.0 * PI * PI))
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticConstants {
    pub d: i64,
    pub m: usize,
    /// `t^{(2)}` at `m` when `m` is even.
    pub t2_even: Option<f64>,
    pub b_m: f64,
    pub c_rho: f64,
    pub vol_xd: f64,
    /// Lower bound for `liminf log|H_tor| / index`; the even-neighbour bracket when `m` is odd.
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub note: Option<String>,
}

/// Bounds for torsion growth along a tower at weight `m ≥ 1`.
///
/// Even `m = 2ℓ` gives `−t^{(2)} vol(X_D)` and its double. Odd `m` has no closed form; the
/// band runs from the lower value at `m − 1` to the upper value at `m + 1`.
pub fn predicted_bounds(d: i64, m: usize) -> Result<AnalyticConstants> {
    let vol = humbert_volume(d)?;
    let even = |m: usize| -t2_even(m as u64 / 2) * vol;
    let (t2, lower, upper, note) = if m % 2 == 0 {
        (Some(t2_even(m as u64 / 2)), even(m), 2.0 * even(m), None)
    } else {
        (
            None,
            even(m - 1),
            2.0 * even(m + 1),
            Some("odd weight: bracket by even neighbours, no closed form".to_string()),
        )
    };
    Ok(AnalyticConstants {
        d,
        m,
        t2_even: t2,
        b_m: b_of_m(m),
        c_rho: c_rho(m),
        vol_xd: vol,
        bound_lower: lower,
        bound_upper: upper,
        note,
    })
}

/// `[vol/2π, vol/π]` for `log|H_1 tor| / m²` along weights on a fixed manifold of volume `vol`.
pub fn weight_band(vol: f64) -> (f64, f64) {
    (vol / (2.0 * PI), vol / PI)
}
