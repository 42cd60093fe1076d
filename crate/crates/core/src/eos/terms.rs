//! The three building blocks of the thermic equation and their antiderivatives.

use super::Mslv;
use crate::error::Result;

/// `q(T) = a alpha(T)` with its first two temperature derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attraction {
    pub q: f64,
    pub q_prime: f64,
    pub q_second: f64,
}

/// `f(v)`, its first two derivatives and the antiderivative `F(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Repulsive {
    pub f: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub big_f: f64,
}

/// `g(v)`, its first two derivatives and the antiderivative `G(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractiveGeometry {
    pub g: f64,
    pub g_prime: f64,
    pub g_second: f64,
    pub big_g: f64,
}

impl Mslv {
    pub fn attraction(&self, t: f64) -> Result<Attraction> {
        Self::check_temperature(t)?;
        let (a, m, tc) = (self.a, self.m, self.t_c);
        let s = (t / tc).sqrt();
        let k = 1.0 + m * (1.0 - s);
        let sqrt_ttc = (t * tc).sqrt();
        Ok(Attraction {
            q: a * k * k,
            q_prime: -a * m * k / sqrt_ttc,
            q_second: a * m * (1.0 + m) / (2.0 * t * sqrt_ttc),
        })
    }

    pub(crate) fn f_unchecked(&self, v: f64) -> f64 {
        self.r / (v - self.b) * (v - self.d) / (v - self.c)
    }

    pub(crate) fn g_unchecked(&self, v: f64) -> f64 {
        -1.0 / self.g_denominator(v)
    }

    fn g_denominator(&self, v: f64) -> f64 {
        v * v + 2.0 * self.b * v - self.b * self.b
    }

    /// Repulsive factor on either branch.
    pub fn repulsive_terms(&self, v: f64) -> Result<Repulsive> {
        self.branch_of(v)?;
        let (r, b, c, d) = (self.r, self.b, self.c, self.d);
        let den = (v - b) * (v - c);
        let num = v * v - 2.0 * d * v - b * c + b * d + c * d;
        let f_prime = -r * num / (den * den);
        let f_second = -r * ((2.0 * v - 2.0 * d) * den - 2.0 * num * (2.0 * v - b - c)) / (den * den * den);
        // Partial fractions: f = R [A / (v - b) + B / (v - c)], A + B = 1.
        let big_f = if c == b {
            r * (v - b).ln()
        } else {
            let wa = (d - b) / (c - b);
            let wb = (c - d) / (c - b);
            r * (wa * (v - b).ln() + wb * (v - c).abs().ln())
        };
        Ok(Repulsive { f: self.f_unchecked(v), f_prime, f_second, big_f })
    }

    /// Attractive volume factor on either branch (`v² + 2bv - b² > 0` holds
    /// for all `v > b`).
    ///
    /// `G(v) = ln((v + b + sqrt2 b) / (v + b - sqrt2 b)) / (2 sqrt2 b)`, the
    /// antiderivative of `g` that is real on `v > b`; it is positive,
    /// decreasing and vanishes as `v` grows.
    pub fn attractive_geometry(&self, v: f64) -> Result<AttractiveGeometry> {
        self.branch_of(v)?;
        let b = self.b;
        let den = self.g_denominator(v);
        let vb = v + b;
        let big_g = if b == 0.0 {
            1.0 / v
        } else {
            let s = std::f64::consts::SQRT_2 * b;
            (2.0 * s / (vb - s)).ln_1p() / (2.0 * s)
        };
        Ok(AttractiveGeometry {
            g: -1.0 / den,
            g_prime: 2.0 * vb / (den * den),
            g_second: (2.0 * den - 8.0 * vb * vb) / (den * den * den),
            big_g,
        })
    }
}
