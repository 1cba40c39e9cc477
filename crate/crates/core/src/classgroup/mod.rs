//! Ideal class groups of maximal orders `Z[θ]`.
//!
//! Relations among the prime ideals below the Minkowski bound come from the
//! rational primes themselves and from small elements `x + yθ + zθ²` whose
//! norms factor over the base. The coordinate box is doubled until two
//! consecutive rounds give the same invariant factors. The computed group
//! surjects onto the true one, so the only possible error is an
//! overestimate; an index-1 lattice certifies a trivial group outright.

mod lattice;
mod snf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Overflow};
use crate::cubicfield::{self, CubicFieldData, FieldError, IdealLattice, IntElement, PrimeIdealData};
use crate::cubicforms::BinaryCubicForm;

use lattice::RelationLattice;
pub use snf::{invariant_factors, smith_normal_form, SmithNormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassGroupError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("zero discriminant")]
    ZeroDiscriminant,
    #[error("signature {0:?} does not match discriminant {1}")]
    Signature((u32, u32), i128),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid invariant factors {0:?}")]
    InvalidFactors(Vec<u64>),
    #[error("field of {0} is not the one defined by the form")]
    FormMismatch(BinaryCubicForm),
}

/// `(2/9)(4/π)^{r2} √|disc|`: every class holds an integral ideal of at most this norm.
pub fn minkowski_bound(disc: i128, signature: (u32, u32)) -> Result<f64, ClassGroupError> {
    if disc == 0 {
        return Err(ClassGroupError::ZeroDiscriminant);
    }
    if signature != cubicfield::signature(disc) {
        return Err(ClassGroupError::Signature(signature, disc));
    }
    let root = (disc.unsigned_abs() as f64).sqrt();
    let r2 = signature.1 as i32;
    Ok(2.0 * root * (4.0 / std::f64::consts::PI).powi(r2) / 9.0)
}

/// Finite abelian group `⊕ Z/d_i` with `d_1 | d_2 | …`, all `d_i ≥ 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(invariant_factors: Vec<u64>) -> Result<Self, ClassGroupError> {
        let chain = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain {
            return Err(ClassGroupError::InvalidFactors(invariant_factors));
        }
        Ok(AbelianGroupStructure { invariant_factors })
    }

    /// From a finite SNF diagonal, dropping the 1s.
    fn from_diagonal(diag: &[i128]) -> Result<Self, ClassGroupError> {
        let f: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        Self::new(f)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// `"1"` for the trivial group, else the factors joined by `-` (e.g. `"2-6"`).
impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join("-"))
    }
}

impl FromStr for AbelianGroupStructure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Self::trivial());
        }
        let f = s
            .split('-')
            .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(f).map_err(|e| e.to_string())
    }
}

/// `|G[p]| = p^{#{i : p | d_i}}`.
pub fn p_torsion_size(g: &AbelianGroupStructure, p: u64) -> Result<u64, ClassGroupError> {
    if !arith::is_prime(p) {
        return Err(ClassGroupError::NotPrime(p));
    }
    let rank = g.invariant_factors.iter().filter(|&&d| d % p == 0).count() as u32;
    Ok(p.pow(rank))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassGroupConfig {
    /// Half-width of the first coordinate box.
    pub initial_box: i64,
    /// Number of box sizes tried (the box doubles each round).
    pub max_rounds: u32,
    /// Largest prime-ideal exponent followed; bigger valuations drop the element.
    pub valuation_cap: u32,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig { initial_box: 8, max_rounds: 6, valuation_cap: 12 }
    }
}

/// How a prime ideal enters the relation vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Column(usize),
    /// An inert prime: principal, contributes nothing.
    Principal,
    /// The degree-2 prime `Q` in `(p) = PQ`, recorded as `−[P]`.
    Negated(usize),
}

#[derive(Debug, Clone)]
struct Member {
    ideal: PrimeIdealData,
    slot: Slot,
    /// `P, P², …`, grown on demand up to the valuation cap.
    powers: Vec<IdealLattice>,
}

#[derive(Debug, Clone)]
struct PrimeGroup {
    p: u64,
    members: Vec<Member>,
}

/// Prime ideals of norm at most the Minkowski bound.
#[derive(Debug, Clone)]
pub struct FactorBase {
    pub bound: f64,
    pub ideals: Vec<PrimeIdealData>,
    groups: Vec<PrimeGroup>,
}

impl FactorBase {
    pub fn new(k: &CubicFieldData) -> Result<Self, ClassGroupError> {
        let bound = minkowski_bound(k.disc, k.signature)?;
        let mut ideals = Vec::new();
        let mut groups = Vec::new();
        for p in arith::primes_up_to(bound.floor() as u64) {
            let above = cubicfield::prime_ideals_above(k, p)?;
            let mut members: Vec<Member> = Vec::with_capacity(above.len());
            for ideal in above {
                let slot = if (ideal.norm() as f64) <= bound {
                    ideals.push(ideal.clone());
                    Slot::Column(ideals.len() - 1)
                } else if ideal.residue_degree == 3 {
                    Slot::Principal
                } else {
                    // (p) = P·Q with N(P) = p ≤ bound < p² = N(Q)
                    let partner = members
                        .iter()
                        .find_map(|m| match m.slot {
                            Slot::Column(c) => Some(c),
                            _ => None,
                        })
                        .expect("degree-2 prime listed after its degree-1 partner");
                    Slot::Negated(partner)
                };
                members.push(Member { ideal, slot, powers: Vec::new() });
            }
            groups.push(PrimeGroup { p, members });
        }
        Ok(FactorBase { bound, ideals, groups })
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Exponent vector of `(p)` when every prime above `p` is a column.
    fn rational_prime_relation(&self, group: &PrimeGroup) -> Option<Vec<i64>> {
        let mut row = vec![0i64; self.len()];
        for m in &group.members {
            match m.slot {
                Slot::Column(c) => row[c] += m.ideal.ramification as i64,
                _ => return None,
            }
        }
        Some(row)
    }
}

/// Exponent vectors of principal ideals over a factor base, one row each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationMatrix {
    pub columns: usize,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupResult {
    pub group: AbelianGroupStructure,
    pub stabilized: bool,
    pub search_rounds: u32,
    /// The relations that enlarged the lattice; their cokernel is `group`.
    pub relations: RelationMatrix,
}

struct Search<'a> {
    k: &'a CubicFieldData,
    fb: FactorBase,
    cap: u32,
    lattice: RelationLattice,
    relations: RelationMatrix,
    /// rational prime → index in `fb.groups`
    group_of: Vec<usize>,
}

impl<'a> Search<'a> {
    fn add(&mut self, row: Vec<i64>) {
        // an overflowing relation is simply dropped
        if let Ok(true) = self.lattice.insert(&row) {
            self.relations.rows.push(row);
        }
    }

    fn trivial(&self) -> bool {
        self.lattice.index() == Some(1)
    }

    /// `v_P(α)` for `P = members[idx]`, at most `limit`; `None` past the cap.
    fn valuation(&mut self, g: usize, idx: usize, alpha: &IntElement, limit: u32) -> Option<u32> {
        let g_min = self.k.minpoly;
        let cap = self.cap;
        let member = &mut self.fb.groups[g].members[idx];
        let mut v = 0;
        while v < limit {
            if v == cap {
                return None;
            }
            if member.powers.len() <= v as usize {
                let next = match member.powers.last() {
                    None => member.ideal.lattice.clone(),
                    Some(last) => last.product(&member.ideal.lattice, &g_min).ok()?,
                };
                member.powers.push(next);
            }
            if !member.powers[v as usize].contains(alpha) {
                break;
            }
            v += 1;
        }
        Some(v)
    }

    /// Relation vector of `(α)`, or `None` if `N(α)` is not smooth.
    fn element_relation(&mut self, alpha: &IntElement) -> Option<Vec<i64>> {
        let norm = self.k.minpoly.norm(alpha).ok()?;
        // norms past 64 bits are far from smooth at these sizes
        let mut rest = u64::try_from(norm.unsigned_abs()).ok()?;
        if rest == 0 {
            return None;
        }
        // smoothness first, without allocating
        let mut parts = [(0usize, 0u32); 16];
        let mut np = 0;
        let mut gi = 0;
        while rest > 1 {
            let p = match self.fb.groups.get(gi) {
                Some(g) => g.p,
                None => return None,
            };
            let (g, a) = if p.saturating_mul(p) > rest {
                // what is left is a single prime
                let g = usize::try_from(rest)
                    .ok()
                    .and_then(|r| self.group_of.get(r).copied())
                    .filter(|&g| g != usize::MAX)?;
                rest = 1;
                (g, 1)
            } else if rest % p == 0 {
                let mut a = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    a += 1;
                }
                (gi, a)
            } else {
                gi += 1;
                continue;
            };
            if np == parts.len() {
                return None;
            }
            parts[np] = (g, a);
            np += 1;
            gi += 1;
        }
        let mut row = vec![0i64; self.fb.len()];
        for &(g, a) in &parts[..np] {
            self.apply(g, alpha, a, &mut row)?;
        }
        Some(row)
    }

    /// Add the valuations at the primes above `p` (`v_p(N α) = a`) to `row`.
    fn apply(&mut self, g: usize, alpha: &IntElement, a: u32, row: &mut [i64]) -> Option<()> {
        let n = self.fb.groups[g].members.len();
        let mut vals = [0u32; 3];
        let mut used = 0u32;
        for idx in 0..n - 1 {
            let f = self.fb.groups[g].members[idx].ideal.residue_degree;
            let v = self.valuation(g, idx, alpha, (a - used) / f)?;
            vals[idx] = v;
            used += f * v;
        }
        // Σ f_i v_i = a pins down the last one
        let f_last = self.fb.groups[g].members[n - 1].ideal.residue_degree;
        let left = a - used;
        if left % f_last != 0 {
            debug_assert!(false, "valuations inconsistent with the norm");
            return None;
        }
        vals[n - 1] = left / f_last;
        if vals[n - 1] > self.cap {
            return None;
        }
        for (m, &v) in self.fb.groups[g].members.iter().zip(&vals[..n]) {
            match m.slot {
                Slot::Column(c) => row[c] += v as i64,
                Slot::Negated(c) => row[c] -= v as i64,
                Slot::Principal => {}
            }
        }
        Some(())
    }

    /// Scan the shell `prev < max(|x|,|y|,|z|) ≤ b`, one element per ± pair.
    /// Returns `true` once the group is certified trivial.
    fn scan_shell(&mut self, prev: i64, b: i64) -> bool {
        for z in 0..=b {
            for y in -b..=b {
                if z == 0 && y <= 0 {
                    continue;
                }
                let inner_yz = z.abs() <= prev && y.abs() <= prev;
                let g_yz = gcd64(y, z);
                for x in -b..=b {
                    if inner_yz && x.abs() <= prev {
                        continue;
                    }
                    if gcd64(g_yz, x) != 1 {
                        continue;
                    }
                    let alpha = [x as i128, y as i128, z as i128];
                    if let Some(row) = self.element_relation(&alpha) {
                        self.add(row);
                        if self.trivial() {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn done(s: Search<'_>, group: AbelianGroupStructure, stabilized: bool, rounds: u32) -> ClassGroupResult {
    let mut relations = s.relations;
    relations.columns = s.fb.len();
    ClassGroupResult { group, stabilized, search_rounds: rounds, relations }
}

/// Class group of the maximal order `Z[θ]` defined by `f`.
pub fn class_group(
    f: &BinaryCubicForm,
    k: &CubicFieldData,
    config: &ClassGroupConfig,
) -> Result<ClassGroupResult, ClassGroupError> {
    if !k.maximal {
        return Err(FieldError::NotMaximal(k.minpoly).into());
    }
    if cubicfield::min_poly(f) != k.minpoly {
        return Err(ClassGroupError::FormMismatch(*f));
    }
    let fb = FactorBase::new(k)?;
    let n = fb.len();
    let max_p = fb.groups.last().map_or(0, |g| g.p as usize);
    let mut group_of = vec![usize::MAX; max_p + 1];
    for (i, g) in fb.groups.iter().enumerate() {
        group_of[g.p as usize] = i;
    }
    let mut s = Search {
        k,
        fb,
        cap: config.valuation_cap,
        lattice: RelationLattice::new(n),
        relations: RelationMatrix { columns: n, rows: Vec::new() },
        group_of,
    };
    if s.trivial() {
        return Ok(done(s, AbelianGroupStructure::trivial(), true, 0));
    }
    for gi in 0..s.fb.groups.len() {
        if let Some(row) = s.fb.rational_prime_relation(&s.fb.groups[gi]) {
            s.add(row);
        }
    }
    if s.trivial() {
        return Ok(done(s, AbelianGroupStructure::trivial(), true, 0));
    }

    let mut previous: Option<Vec<i128>> = None;
    let mut prev_box = 0i64;
    let mut b = config.initial_box.max(1);
    for round in 1..=config.max_rounds {
        if s.scan_shell(prev_box, b) {
            return Ok(done(s, AbelianGroupStructure::trivial(), true, round));
        }
        let current = match s.lattice.invariant_factors() {
            Some(r) => Some(r?),
            None => None,
        };
        if let (Some(cur), Some(prev)) = (&current, &previous) {
            if cur == prev {
                let group = AbelianGroupStructure::from_diagonal(cur)?;
                return Ok(done(s, group, true, round));
            }
        }
        previous = current;
        prev_box = b;
        b = b.saturating_mul(2);
    }
    let diag = s.lattice.cokernel()?;
    let group = AbelianGroupStructure::from_diagonal(&diag)?;
    Ok(done(s, group, false, config.max_rounds))
}
