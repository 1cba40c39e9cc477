//! Binary cubic forms with integer coefficients: invariants, the
//! `GL2(Z)` twisted action, reduction to the canonical `F(Z)`-representative
//! and height-bounded enumeration of monic forms.
//!
//! A monic form `x^3 + f1 x^2 y + f2 x y^2 + f3 y^3` is determined within its
//! shear class by the pair `(I, J)`; enumeration therefore walks `(I, J)`
//! and reconstructs the unique representative with `f1 ∈ {-1, 0, 1}`.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Overflow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("invariant overflow at (I, J) = ({i}, {j})")]
    EnumerationOverflow { i: i128, j: i128 },
    #[error("matrix [[{a}, {b}], [{c}, {d}]] is not unimodular")]
    NotUnimodular { a: i128, b: i128, c: i128, d: i128 },
    #[error("form {0} is not monic (f0 != 1)")]
    NotMonic(BinaryCubicForm),
    #[error("height bound must be at least 1, got {0}")]
    BadBound(i128),
}

/// `f0 x^3 + f1 x^2 y + f2 x y^2 + f3 y^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryCubicForm {
    pub f0: i128,
    pub f1: i128,
    pub f2: i128,
    pub f3: i128,
}

impl BinaryCubicForm {
    pub const fn new(f0: i128, f1: i128, f2: i128, f3: i128) -> Self {
        BinaryCubicForm { f0, f1, f2, f3 }
    }

    pub const fn monic(f1: i128, f2: i128, f3: i128) -> Self {
        BinaryCubicForm { f0: 1, f1, f2, f3 }
    }

    pub fn coeffs(&self) -> [i128; 4] {
        [self.f0, self.f1, self.f2, self.f3]
    }

    /// Canonical in the sense of the enumeration: monic with `f1 ∈ {-1, 0, 1}`.
    pub fn is_canonical(&self) -> bool {
        self.f0 == 1 && (-1..=1).contains(&self.f1)
    }
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.f0, self.f1, self.f2, self.f3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub i: i128,
    pub j: i128,
    pub disc: i128,
    /// `4 * H = max(4|I|^3, J^2)`, kept scaled so it stays integral.
    pub height4: i128,
}

impl FormInvariants {
    pub fn sign(&self) -> Option<DiscSign> {
        match self.disc.signum() {
            1 => Some(DiscSign::Positive),
            -1 => Some(DiscSign::Negative),
            _ => None,
        }
    }

    /// Strict height test `H < y`, done on the scaled integer height.
    pub fn height_below(&self, y: i128) -> bool {
        y.checked_mul(4).map_or(true, |y4| self.height4 < y4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscSign {
    Positive,
    Negative,
}

impl DiscSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiscSign::Positive => "pos",
            DiscSign::Negative => "neg",
        }
    }
}

/// Which discriminant signs an enumeration keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignFilter {
    Positive,
    Negative,
    Both,
}

impl SignFilter {
    pub fn accepts(&self, sign: DiscSign) -> bool {
        match self {
            SignFilter::Both => true,
            SignFilter::Positive => sign == DiscSign::Positive,
            SignFilter::Negative => sign == DiscSign::Negative,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SignFilter::Positive => "pos",
            SignFilter::Negative => "neg",
            SignFilter::Both => "both",
        }
    }
}

impl std::str::FromStr for SignFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pos" | "positive" | "+" => Ok(SignFilter::Positive),
            "neg" | "negative" | "-" => Ok(SignFilter::Negative),
            "both" => Ok(SignFilter::Both),
            _ => Err(format!("unknown sign `{s}` (expected pos, neg or both)")),
        }
    }
}

/// An element of `GL2(Z)`, `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMap {
    a: i128,
    b: i128,
    c: i128,
    d: i128,
}

impl UnimodularMap {
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Result<Self, FormError> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc));
        match det {
            Some(1) | Some(-1) => Ok(UnimodularMap { a, b, c, d }),
            _ => Err(FormError::NotUnimodular { a, b, c, d }),
        }
    }

    pub fn identity() -> Self {
        UnimodularMap { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn entries(&self) -> [i128; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// The shear `γ_a = [[1, 0], [a, 1]]` of `F(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShearMap {
    pub a: i128,
}

impl ShearMap {
    pub fn new(a: i128) -> Self {
        ShearMap { a }
    }

    pub fn matrix(&self) -> UnimodularMap {
        UnimodularMap { a: 1, b: 0, c: self.a, d: 1 }
    }

    /// `f(x + a y, y)` for a monic `f`, via the closed-form coefficient update.
    pub fn apply(&self, f: &BinaryCubicForm) -> Result<BinaryCubicForm, FormError> {
        let a = self.a;
        let a2 = arith::mul(a, a, "shear")?;
        let a3 = arith::mul(a2, a, "shear")?;
        let f0 = f.f0;
        // general f0: f(x+ay, y) = f0 (x+ay)^3 + f1 (x+ay)^2 y + f2 (x+ay) y^2 + f3 y^3
        let f1 = arith::dot(&[(3, arith::mul(f0, a, "shear")?), (1, f.f1)], "shear")?;
        let f2 = arith::dot(&[(3, arith::mul(f0, a2, "shear")?), (2 * a, f.f1), (1, f.f2)], "shear")?;
        let f3 = arith::dot(&[(f0, a3), (a2, f.f1), (a, f.f2), (1, f.f3)], "shear")?;
        Ok(BinaryCubicForm { f0, f1, f2, f3 })
    }
}

/// `I`, `J`, the discriminant and the scaled height of any integral form.
///
/// For non-monic input the homogenised invariants `I = f1^2 - 3 f0 f2` and
/// `J = -2 f1^3 + 9 f0 f1 f2 - 27 f0^2 f3` are used; `27 Disc = 4 I^3 - J^2`
/// holds for every form.
pub fn invariants(f: &BinaryCubicForm) -> Result<FormInvariants, FormError> {
    const W: &str = "invariants";
    let [f0, f1, f2, f3] = f.coeffs();
    let f0f2 = arith::mul(f0, f2, W)?;
    let f1sq = arith::mul(f1, f1, W)?;
    let i = arith::sub(f1sq, arith::mul(3, f0f2, W)?, W)?;
    let f1cube = arith::mul(f1sq, f1, W)?;
    let f0sq_f3 = arith::mul(arith::mul(f0, f0, W)?, f3, W)?;
    let j = arith::dot(
        &[(-2, f1cube), (9, arith::mul(f0f2, f1, W)?), (-27, f0sq_f3)],
        W,
    )?;
    let f2sq = arith::mul(f2, f2, W)?;
    let disc = arith::dot(
        &[
            (f1sq, f2sq),
            (-4, arith::mul(f0f2, f2sq, W)?),
            (-4, arith::mul(f3, f1cube, W)?),
            (-27, arith::mul(f0sq_f3, f3, W)?),
            (18, arith::mul(f0f2, arith::mul(f1, f3, W)?, W)?),
        ],
        W,
    )?;
    let i3 = arith::mul(arith::mul(i, i, W)?, i, W)?;
    let height4 = arith::mul(4, i3.abs(), W)?.max(arith::mul(j, j, W)?);
    Ok(FormInvariants { i, j, disc, height4 })
}

/// Twisted action `(g · f)(x, y) = f((x, y) g) / det g`.
pub fn act(g: &UnimodularMap, f: &BinaryCubicForm) -> Result<BinaryCubicForm, FormError> {
    const W: &str = "action";
    // (x, y) g = (a x + c y, b x + d y); expand f(X, Y) with X, Y linear forms.
    let xf = [g.a, g.c];
    let yf = [g.b, g.d];
    let lin_mul = |p: &[i128], q: &[i128; 2]| -> Result<Vec<i128>, Overflow> {
        let mut out = vec![0i128; p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            out[k] = arith::add(out[k], arith::mul(c, q[0], W)?, W)?;
            out[k + 1] = arith::add(out[k + 1], arith::mul(c, q[1], W)?, W)?;
        }
        Ok(out)
    };
    let mut result = [0i128; 4];
    for (k, &coef) in f.coeffs().iter().enumerate() {
        // X^(3-k) Y^k
        let mut term = vec![1i128];
        for _ in 0..(3 - k) {
            term = lin_mul(&term, &xf)?;
        }
        for _ in 0..k {
            term = lin_mul(&term, &yf)?;
        }
        for (slot, &t) in result.iter_mut().zip(term.iter()) {
            *slot = arith::add(*slot, arith::mul(coef, t, W)?, W)?;
        }
    }
    let det = g.det();
    let [f0, f1, f2, f3] = result.map(|c| c * det);
    Ok(BinaryCubicForm { f0, f1, f2, f3 })
}

/// Representative of `f1 mod 3` in `{-1, 0, 1}`.
fn centered_mod3(v: i128) -> i128 {
    match v.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Unique shear-equivalent form with `f1 ∈ {-1, 0, 1}`, and the shear reaching it.
pub fn reduce(f: &BinaryCubicForm) -> Result<(BinaryCubicForm, ShearMap), FormError> {
    if f.f0 != 1 {
        return Err(FormError::NotMonic(*f));
    }
    let target = centered_mod3(f.f1);
    let shear = ShearMap::new((target - f.f1) / 3);
    Ok((shear.apply(f)?, shear))
}

/// Rebuild the canonical monic form with the given invariants, if one exists.
pub fn form_from_ij(i: i128, j: i128) -> Option<BinaryCubicForm> {
    let f1 = centered_mod3(j);
    let num2 = f1 * f1 - i;
    if num2.rem_euclid(3) != 0 {
        return None;
    }
    let f2 = num2 / 3;
    let num3 = (-2 * f1 * f1 * f1).checked_add((9 * f1).checked_mul(f2)?)?.checked_sub(j)?;
    if num3.rem_euclid(27) != 0 {
        return None;
    }
    Some(BinaryCubicForm::monic(f1, f2, num3 / 27))
}

/// Whether `x^3 + f1 x^2 + f2 x + f3` has no rational root (hence is
/// irreducible over Q). Rational roots of a monic integer cubic are integers
/// dividing the constant term.
pub fn is_irreducible(f: &BinaryCubicForm) -> Result<bool, FormError> {
    if f.f0 != 1 {
        return Err(FormError::NotMonic(*f));
    }
    if f.f3 == 0 {
        return Ok(false);
    }
    for d in arith::divisors(f.f3) {
        for r in [d, -d] {
            if eval_monic(f, r)? == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn eval_monic(f: &BinaryCubicForm, x: i128) -> Result<i128, Overflow> {
    const W: &str = "root test";
    let mut acc = 1i128;
    for c in [f.f1, f.f2, f.f3] {
        acc = arith::add(arith::mul(acc, x, W)?, c, W)?;
    }
    Ok(acc)
}

/// One canonical form produced by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumeratedForm {
    pub form: BinaryCubicForm,
    pub inv: FormInvariants,
    pub irreducible: bool,
}

impl EnumeratedForm {
    pub fn sign(&self) -> DiscSign {
        // disc is never zero for enumerated forms
        self.inv.sign().expect("enumerated forms have nonzero discriminant")
    }
}

/// `I` values admissible under the strict bound `|I|^3 < ymax`.
pub fn i_range(ymax: i128) -> RangeInclusive<i128> {
    let r = arith::max_cube_below(ymax);
    -r..=r
}

/// Canonical monic forms with `0 < |Disc|`, `H < ymax` and a discriminant
/// sign accepted by `sign`, restricted to `I ∈ i_values`, in ascending
/// `(I, J)` order.
///
/// Reducible forms are yielded with `irreducible = false`; callers decide
/// whether to keep them.
pub fn enumerate_tile(
    ymax: i128,
    sign: SignFilter,
    i_values: RangeInclusive<i128>,
) -> impl Iterator<Item = Result<EnumeratedForm, FormError>> {
    let full = i_range(ymax);
    let lo = (*i_values.start()).max(*full.start());
    let hi = (*i_values.end()).min(*full.end());
    let jmax = if ymax >= 1 {
        arith::max_square_below(ymax.saturating_mul(4))
    } else {
        -1
    };
    (lo..=hi).flat_map(move |i| {
        // f1 is fixed by J mod 3 and f2 must be integral, so only J with
        // f1^2 ≡ I (mod 3) can produce a form.
        (-jmax..=jmax).filter_map(move |j| {
            let f1 = centered_mod3(j);
            if (f1 * f1 - i).rem_euclid(3) != 0 {
                return None;
            }
            let form = form_from_ij(i, j)?;
            let inv = match invariants(&form) {
                Ok(inv) => inv,
                Err(_) => return Some(Err(FormError::EnumerationOverflow { i, j })),
            };
            debug_assert_eq!((inv.i, inv.j), (i, j));
            if !inv.height_below(ymax) {
                return None;
            }
            let s = inv.sign()?;
            if !sign.accepts(s) {
                return None;
            }
            match is_irreducible(&form) {
                Ok(irreducible) => Some(Ok(EnumeratedForm { form, inv, irreducible })),
                Err(_) => Some(Err(FormError::EnumerationOverflow { i, j })),
            }
        })
    })
}

/// Every canonical form of height below `ymax`; see [`enumerate_tile`].
pub fn enumerate(
    ymax: i128,
    sign: SignFilter,
) -> Result<impl Iterator<Item = Result<EnumeratedForm, FormError>>, FormError> {
    if ymax < 1 {
        return Err(FormError::BadBound(ymax));
    }
    Ok(enumerate_tile(ymax, sign, i_range(ymax)))
}
