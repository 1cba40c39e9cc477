//! Arithmetic in the monogenic order `Z[θ] = Z[x]/(g)` and its fraction field.
//!
//! Elements are coordinate vectors in the power basis `(1, θ, θ²)`.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Overflow};
use crate::cubicforms::BinaryCubicForm;

/// `x^3 + g1 x^2 + g2 x + g3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonicCubic {
    pub g1: i128,
    pub g2: i128,
    pub g3: i128,
}

/// Element of `Z[θ]`, coordinates in `(1, θ, θ²)`.
pub type IntElement = [i128; 3];

impl MonicCubic {
    pub fn new(g1: i128, g2: i128, g3: i128) -> Self {
        MonicCubic { g1, g2, g3 }
    }

    /// Coefficients in ascending degree, including the leading 1.
    pub fn coeffs(&self) -> [i128; 4] {
        [self.g3, self.g2, self.g1, 1]
    }

    pub fn eval(&self, x: i128) -> Result<i128, Overflow> {
        let mut acc = 1i128;
        for c in [self.g1, self.g2, self.g3] {
            acc = arith::add(arith::mul(acc, x, "eval")?, c, "eval")?;
        }
        Ok(acc)
    }

    /// Polynomial discriminant `g1²g2² − 4g2³ − 4g1³g3 − 27g3² + 18g1g2g3`.
    pub fn discriminant(&self) -> Result<i128, Overflow> {
        let (a, b, c) = (self.g1, self.g2, self.g3);
        const W: &str = "discriminant";
        let a2 = arith::mul(a, a, W)?;
        let b2 = arith::mul(b, b, W)?;
        arith::dot(
            &[
                (a2, b2),
                (-4, arith::mul(b2, b, W)?),
                (-4, arith::mul(arith::mul(a2, a, W)?, c, W)?),
                (-27, arith::mul(c, c, W)?),
                (18, arith::mul(arith::mul(a, b, W)?, c, W)?),
            ],
            W,
        )
    }

    /// Product in `Z[θ]`, reducing `θ³ = −g1θ² − g2θ − g3`.
    pub fn mul(&self, a: &IntElement, b: &IntElement) -> Result<IntElement, Overflow> {
        const W: &str = "order product";
        let mut c = [0i128; 5];
        for i in 0..3 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..3 {
                c[i + j] = arith::add(c[i + j], arith::mul(a[i], b[j], W)?, W)?;
            }
        }
        self.reduce_deg4(&c)
    }

    fn reduce_deg4(&self, c: &[i128; 5]) -> Result<IntElement, Overflow> {
        const W: &str = "order product";
        let (g1, g2, g3) = (self.g1, self.g2, self.g3);
        // θ^4 = (g1² − g2)θ² + (g1g2 − g3)θ + g1g3
        let t4 = [
            arith::mul(g1, g3, W)?,
            arith::sub(arith::mul(g1, g2, W)?, g3, W)?,
            arith::sub(arith::mul(g1, g1, W)?, g2, W)?,
        ];
        Ok([
            arith::dot(&[(1, c[0]), (-g3, c[3]), (t4[0], c[4])], W)?,
            arith::dot(&[(1, c[1]), (-g2, c[3]), (t4[1], c[4])], W)?,
            arith::dot(&[(1, c[2]), (-g1, c[3]), (t4[2], c[4])], W)?,
        ])
    }

    /// `θ · a`.
    pub fn mul_theta(&self, a: &IntElement) -> Result<IntElement, Overflow> {
        const W: &str = "theta shift";
        Ok([
            arith::mul(-self.g3, a[2], W)?,
            arith::sub(a[0], arith::mul(self.g2, a[2], W)?, W)?,
            arith::sub(a[1], arith::mul(self.g1, a[2], W)?, W)?,
        ])
    }

    /// Columns `a, θa, θ²a` of the multiplication-by-`a` matrix.
    pub fn mult_matrix(&self, a: &IntElement) -> Result<[IntElement; 3], Overflow> {
        let c1 = self.mul_theta(a)?;
        let c2 = self.mul_theta(&c1)?;
        Ok([*a, c1, c2])
    }

    /// Norm `N(a) = det(mult_matrix(a))` of an element of `Z[θ]`.
    pub fn norm(&self, a: &IntElement) -> Result<i128, Overflow> {
        det3(&self.mult_matrix(a)?)
    }

    /// Reduce a polynomial (ascending integer coefficients, any degree)
    /// modulo `g` to an element of `Z[θ]`.
    pub fn poly_to_element(&self, poly: &[i128]) -> Result<IntElement, Overflow> {
        let mut acc = [0i128; 3];
        for &c in poly.iter().rev() {
            acc = self.mul_theta(&acc)?;
            acc[0] = arith::add(acc[0], c, "poly reduce")?;
        }
        Ok(acc)
    }
}

impl fmt::Display for MonicCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^3")?;
        for (c, mono) in [(self.g1, "x^2"), (self.g2, "x"), (self.g3, "")] {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { '-' } else { '+' };
            let abs = c.unsigned_abs();
            if abs == 1 && !mono.is_empty() {
                write!(f, " {sign} {mono}")?;
            } else {
                write!(f, " {sign} {abs}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Determinant of a 3×3 matrix given by columns (or rows).
pub(crate) fn det3(m: &[[i128; 3]; 3]) -> Result<i128, Overflow> {
    const W: &str = "determinant";
    let minor = |a: usize, b: usize| -> Result<i128, Overflow> {
        arith::sub(
            arith::mul(m[1][a], m[2][b], W)?,
            arith::mul(m[1][b], m[2][a], W)?,
            W,
        )
    };
    arith::dot(
        &[
            (m[0][0], minor(1, 2)?),
            (-m[0][1], minor(0, 2)?),
            (m[0][2], minor(0, 1)?),
        ],
        W,
    )
}

/// Multiplication table of the Delone–Faddeev ring `R(f)` in basis `(1, ω, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingStructure {
    pub omega_theta: [i128; 3],
    pub omega_sq: [i128; 3],
    pub theta_sq: [i128; 3],
}

impl RingStructure {
    pub fn from_form(f: &BinaryCubicForm) -> Self {
        let [f0, f1, f2, f3] = f.coeffs();
        RingStructure {
            omega_theta: [-f0 * f3, 0, 0],
            omega_sq: [-f0 * f2, -f1, f0],
            theta_sq: [-f1 * f3, -f3, f2],
        }
    }

    /// Product of `a0 + a1ω + a2θ` and `b0 + b1ω + b2θ`.
    pub fn mul(&self, a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
        let mut out = [
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[2] * b[0],
        ];
        let cross = a[1] * b[2] + a[2] * b[1];
        for k in 0..3 {
            out[k] += a[1] * b[1] * self.omega_sq[k]
                + cross * self.omega_theta[k]
                + a[2] * b[2] * self.theta_sq[k];
        }
        out
    }
}

pub type Rational = Ratio<i128>;

/// Element of `Q(θ)` with exact rational coordinates in `(1, θ, θ²)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: [Rational; 3],
}

impl FieldElement {
    pub fn new(x0: Rational, x1: Rational, x2: Rational) -> Self {
        FieldElement { coords: [x0, x1, x2] }
    }

    pub fn from_ints(v: IntElement) -> Self {
        FieldElement { coords: v.map(Rational::from_integer) }
    }

    pub fn rational(q: Rational) -> Self {
        FieldElement::new(q, Rational::zero(), Rational::zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn mul_theta(&self, g: &MonicCubic) -> FieldElement {
        let [a0, a1, a2] = &self.coords;
        let r = |v: i128| Rational::from_integer(v);
        FieldElement::new(
            -(r(g.g3) * a2),
            a0 - r(g.g2) * a2,
            a1 - r(g.g1) * a2,
        )
    }

    pub fn mul(&self, other: &FieldElement, g: &MonicCubic) -> FieldElement {
        // Horner over the power basis of `other`
        let mut acc = FieldElement::rational(Rational::zero());
        for k in (0..3).rev() {
            acc = acc.mul_theta(g);
            for i in 0..3 {
                acc.coords[i] += self.coords[i] * other.coords[k];
            }
        }
        acc
    }
}

/// Norm from `Q(θ)` to `Q`: determinant of multiplication by `a`.
pub fn element_norm(a: &FieldElement, g: &MonicCubic) -> Rational {
    let c0 = a.clone();
    let c1 = c0.mul_theta(g);
    let c2 = c1.mul_theta(g);
    let m = [c0.coords, c1.coords, c2.coords];
    let minor = |i: usize, j: usize| m[1][i] * m[2][j] - m[1][j] * m[2][i];
    m[0][0] * minor(1, 2) - m[0][1] * minor(0, 2) + m[0][2] * minor(0, 1)
}
