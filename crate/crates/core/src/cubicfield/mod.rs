//! The cubic order attached to a monic binary cubic form: its minimal
//! polynomial, the Delone–Faddeev multiplication table, a maximality test
//! by Dedekind's criterion, and ideal arithmetic over maximal monogenic
//! orders.

mod ideal;
mod order;
mod poly;

pub use ideal::{IdealLattice, PrimeIdealData};
pub use order::{element_norm, FieldElement, IntElement, MonicCubic, Rational, RingStructure};
pub use poly::PolyFp;

use thiserror::Error;

use crate::arith::{self, Overflow};
use crate::cubicforms::{self, BinaryCubicForm, FormError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is reducible over Q")]
    Reducible(MonicCubic),
    #[error("form has zero discriminant")]
    ZeroDiscriminant,
    #[error("order Z[θ] for {0} is not maximal")]
    NotMaximal(MonicCubic),
}

/// `x^3 + f1 x^2 + f0 f2 x + f0^2 f3`, the minimal polynomial of ω.
pub fn min_poly(f: &BinaryCubicForm) -> MonicCubic {
    MonicCubic::new(f.f1, f.f0 * f.f2, f.f0 * f.f0 * f.f3)
}

pub fn ring_structure(f: &BinaryCubicForm) -> RingStructure {
    RingStructure::from_form(f)
}

/// Signature `(r1, r2)` of a cubic field from the sign of its discriminant.
pub fn signature(disc: i128) -> (u32, u32) {
    if disc > 0 {
        (3, 0)
    } else {
        (1, 1)
    }
}

/// The cubic field of an irreducible monic form, with the order `Z[θ]` it defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicFieldData {
    pub minpoly: MonicCubic,
    pub disc: i128,
    pub signature: (u32, u32),
    pub maximal: bool,
}

impl CubicFieldData {
    pub fn from_form(f: &BinaryCubicForm) -> Result<Self, FieldError> {
        if f.f0 != 1 {
            return Err(FormError::NotMonic(*f).into());
        }
        let minpoly = min_poly(f);
        let disc = cubicforms::invariants(f)?.disc;
        if disc == 0 {
            return Err(FieldError::ZeroDiscriminant);
        }
        if !cubicforms::is_irreducible(f)? {
            return Err(FieldError::Reducible(minpoly));
        }
        let maximal = is_maximal(f)?;
        Ok(CubicFieldData { minpoly, disc, signature: signature(disc), maximal })
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(FieldError::NotPrime(p))
    }
}

fn reduce_mod(g: &MonicCubic, p: u64) -> PolyFp {
    PolyFp::from_ints(p, &g.coeffs())
}

/// Factorisation of `g mod p` into monic irreducibles with multiplicities,
/// ordered by degree and then by coefficients.
pub fn factor_cubic_mod_p(g: &MonicCubic, p: u64) -> Result<Vec<(PolyFp, u32)>, FieldError> {
    check_prime(p)?;
    let mut rest = reduce_mod(g, p);
    let mut factors = Vec::new();
    for r in rest.roots() {
        let lin = PolyFp::linear(p, r);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        factors.push((lin, mult));
    }
    match rest.degree() {
        Some(0) => {}
        Some(2) => {
            // no roots left, so the quadratic is irreducible; its
            // discriminant is a non-residue for odd p
            debug_assert!(p == 2 || !is_square_mod(quadratic_disc(&rest), p));
            factors.push((rest, 1));
        }
        Some(3) => factors.push((rest, 1)),
        d => unreachable!("unexpected residual degree {d:?} after root removal"),
    }
    Ok(factors)
}

fn quadratic_disc(q: &PolyFp) -> u64 {
    let p = q.modulus() as u128;
    let c = q.coeffs();
    let (c0, c1, c2) = (c[0] as u128, c[1] as u128, c[2] as u128);
    ((c1 * c1 % p + p * 4 - 4 * c2 % p * c0 % p) % p) as u64
}

/// Euler's criterion, odd `p` only.
fn is_square_mod(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return true;
    }
    let (mut base, mut e, mut acc) = (a as u128, (p - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc == 1
}

/// Dedekind's criterion: whether `Z[θ]` is maximal at `p`.
pub fn dedekind_p_maximal(g: &MonicCubic, p: u64) -> Result<bool, FieldError> {
    check_prime(p)?;
    let form = BinaryCubicForm::monic(g.g1, g.g2, g.g3);
    if !cubicforms::is_irreducible(&form)? {
        return Err(FieldError::Reducible(*g));
    }
    dedekind_unchecked(g, p)
}

fn dedekind_unchecked(g: &MonicCubic, p: u64) -> Result<bool, FieldError> {
    let factors = factor_cubic_mod_p(g, p)?;
    if factors.iter().all(|(_, e)| *e == 1) {
        return Ok(true);
    }
    let radical = factors
        .iter()
        .fold(PolyFp::one(p), |acc, (h, _)| acc.mul(h));
    let cofactor = factors
        .iter()
        .fold(PolyFp::one(p), |acc, (h, e)| acc.mul(&h.pow(e - 1)));
    // M = (g - lift(radical) * lift(cofactor)) / p
    let lifted = int_poly_mul(&radical.lift(), &cofactor.lift())?;
    let gc = g.coeffs();
    let pi = p as i128;
    let mut m = Vec::with_capacity(4);
    for k in 0..4 {
        let diff = arith::sub(gc[k], lifted.get(k).copied().unwrap_or(0), "dedekind")?;
        debug_assert_eq!(diff.rem_euclid(pi), 0);
        m.push(diff / pi);
    }
    let m_bar = PolyFp::from_ints(p, &m);
    let common = m_bar.gcd(&radical).gcd(&cofactor);
    Ok(common.degree() == Some(0))
}

fn int_poly_mul(a: &[i128], b: &[i128]) -> Result<Vec<i128>, Overflow> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = arith::add(out[i + j], arith::mul(x, y, "poly")?, "poly")?;
        }
    }
    Ok(out)
}

/// Whether `Z[θ]` is the full ring of integers: Dedekind's criterion at
/// every prime whose square divides the discriminant.
pub fn is_maximal(f: &BinaryCubicForm) -> Result<bool, FieldError> {
    let disc = cubicforms::invariants(f)?.disc;
    if disc == 0 {
        return Err(FieldError::ZeroDiscriminant);
    }
    let g = min_poly(f);
    if f.f0 != 1 || !cubicforms::is_irreducible(f)? {
        return Err(FieldError::Reducible(g));
    }
    for (p, e) in arith::factorize(disc) {
        if e >= 2 && !dedekind_unchecked(&g, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primes above `p` by Kummer–Dedekind, in the order of `factor_cubic_mod_p`.
pub fn prime_ideals_above(k: &CubicFieldData, p: u64) -> Result<Vec<PrimeIdealData>, FieldError> {
    if !k.maximal {
        return Err(FieldError::NotMaximal(k.minpoly));
    }
    let factors = factor_cubic_mod_p(&k.minpoly, p)?;
    factors
        .into_iter()
        .map(|(h, e)| {
            let lattice = ideal::two_element_ideal(&k.minpoly, p as i128, &h.lift())?;
            Ok(PrimeIdealData {
                p,
                residue_degree: h.degree().unwrap_or(0) as u32,
                ramification: e,
                lattice,
                local_factor: h,
            })
        })
        .collect()
}

pub fn ideal_product(
    a: &IdealLattice,
    b: &IdealLattice,
    k: &CubicFieldData,
) -> Result<IdealLattice, FieldError> {
    Ok(a.product(b, &k.minpoly)?)
}

pub fn ideal_norm(a: &IdealLattice) -> i128 {
    a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(f1: i128, f2: i128, f3: i128) -> CubicFieldData {
        CubicFieldData::from_form(&BinaryCubicForm::monic(f1, f2, f3)).unwrap()
    }

    #[test]
    fn min_poly_examples() {
        assert_eq!(min_poly(&BinaryCubicForm::monic(0, -1, 1)), MonicCubic::new(0, -1, 1));
        assert_eq!(min_poly(&BinaryCubicForm::monic(0, 0, 0)), MonicCubic::new(0, 0, 0));
        assert_eq!(min_poly(&BinaryCubicForm::new(2, 0, -1, 1)), MonicCubic::new(0, -2, 4));
    }

    #[test]
    fn factorisation_examples() {
        let g = MonicCubic::new(0, -1, 1);
        assert_eq!(
            factor_cubic_mod_p(&g, 2).unwrap(),
            vec![(PolyFp::from_ints(2, &[1, 1, 0, 1]), 1)]
        );
        assert_eq!(
            factor_cubic_mod_p(&g, 5).unwrap(),
            vec![(PolyFp::linear(5, 3), 1), (PolyFp::from_ints(5, &[3, 3, 1]), 1)]
        );
        assert_eq!(
            factor_cubic_mod_p(&MonicCubic::new(0, 0, 0), 3).unwrap(),
            vec![(PolyFp::linear(3, 0), 3)]
        );
        assert_eq!(factor_cubic_mod_p(&g, 4), Err(FieldError::NotPrime(4)));
    }

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_p_maximal(&MonicCubic::new(0, -3, 1), 3).unwrap());
        assert!(!dedekind_p_maximal(&MonicCubic::new(-1, -2, -8), 2).unwrap());
        assert!(dedekind_p_maximal(&MonicCubic::new(0, -1, 1), 23).unwrap());
        assert!(matches!(
            dedekind_p_maximal(&MonicCubic::new(0, 0, 1), 3),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(dedekind_p_maximal(&MonicCubic::new(0, -1, 1), 9), Err(FieldError::NotPrime(9))));
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&BinaryCubicForm::monic(0, -1, 1)).unwrap());
        assert!(!is_maximal(&BinaryCubicForm::monic(-1, -2, -8)).unwrap());
        assert!(is_maximal(&BinaryCubicForm::monic(0, -3, 1)).unwrap());
        assert_eq!(is_maximal(&BinaryCubicForm::monic(0, 0, 0)), Err(FieldError::ZeroDiscriminant));
    }

    #[test]
    fn splitting_examples() {
        let k = field(0, -1, 1);
        let above2 = prime_ideals_above(&k, 2).unwrap();
        assert_eq!(above2.len(), 1);
        assert_eq!((above2[0].ramification, above2[0].residue_degree), (1, 3));
        assert_eq!(ideal_norm(&above2[0].lattice), 8);

        let above5 = prime_ideals_above(&k, 5).unwrap();
        let ef: Vec<_> = above5.iter().map(|q| (q.residue_degree, q.ramification)).collect();
        assert_eq!(ef, vec![(1, 1), (2, 1)]);
        let prod = ideal_product(&above5[0].lattice, &above5[1].lattice, &k).unwrap();
        assert_eq!(prod, IdealLattice::scalar(5));
        assert_eq!(ideal_norm(&prod), 125);

        let k3 = field(0, -3, 1);
        let above3 = prime_ideals_above(&k3, 3).unwrap();
        assert_eq!(above3.len(), 1);
        assert_eq!((above3[0].ramification, above3[0].residue_degree), (3, 1));
        let cube = ideal_product(
            &ideal_product(&above3[0].lattice, &above3[0].lattice, &k3).unwrap(),
            &above3[0].lattice,
            &k3,
        )
        .unwrap();
        assert_eq!(cube, IdealLattice::scalar(3));

        let nonmax = CubicFieldData::from_form(&BinaryCubicForm::monic(-1, -2, -8)).unwrap();
        assert!(matches!(prime_ideals_above(&nonmax, 2), Err(FieldError::NotMaximal(_))));
    }

    #[test]
    fn rational_principal_ideals() {
        let k = field(1, 1, 2);
        let p = ideal_product(&IdealLattice::scalar(2), &IdealLattice::scalar(3), &k).unwrap();
        assert_eq!(p, IdealLattice::scalar(6));
        assert_eq!(ideal_norm(&p), 216);
        let b = prime_ideals_above(&field(0, -1, 1), 5).unwrap()[1].lattice.clone();
        assert_eq!(ideal_product(&IdealLattice::unit(), &b, &field(0, -1, 1)).unwrap(), b);
        assert_eq!(ideal_norm(&IdealLattice::unit()), 1);
    }
}
