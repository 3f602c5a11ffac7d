//! Difference bound matrices over clock valuations.
//!
//! Bounds are encoded in a single integer: `value * 2 + 1` for a non-strict
//! bound (`<=`) and `value * 2` for a strict one (`<`), so the natural
//! integer order coincides with bound tightness. Index 0 is the reference
//! clock, fixed at zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::model::{Atom, ClockConstraint, ClockId, Rel};

pub const INF: i64 = i64::MAX;

#[inline]
pub fn bound(value: i64, strict: bool) -> i64 {
    (value << 1) | if strict { 0 } else { 1 }
}

#[inline]
pub fn bound_value(b: i64) -> i64 {
    b >> 1
}

#[inline]
pub fn bound_is_strict(b: i64) -> bool {
    b & 1 == 0
}

#[inline]
fn bound_add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        bound(bound_value(a) + bound_value(b), bound_is_strict(a) || bound_is_strict(b))
    }
}

const LE_ZERO: i64 = 1; // bound(0, false)

/// A convex set of clock valuations in canonical difference-bound form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Zone {
    dim: usize,
    m: Vec<i64>,
}

impl Zone {
    /// All valuations of the non-negative orthant.
    pub fn universe(dim: usize) -> Zone {
        let mut m = vec![INF; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = LE_ZERO;
            // reference minus clock is at most zero: clocks are non-negative
            m[i] = LE_ZERO;
        }
        m[0] = LE_ZERO;
        Zone { dim, m }
    }

    /// The single valuation with every clock at zero.
    pub fn zero(dim: usize) -> Zone {
        Zone {
            dim,
            m: vec![LE_ZERO; dim * dim],
        }
    }

    pub fn from_constraint(dim: usize, c: &ClockConstraint) -> Zone {
        let mut z = Zone::universe(dim);
        for atom in &c.atoms {
            z.and_atom(atom);
        }
        z.canonicalize()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.m[i * self.dim + j] = v;
    }

    fn tighten(&mut self, i: usize, j: usize, v: i64) {
        if v < self.get(i, j) {
            self.set(i, j, v);
        }
    }

    /// Conjoin one atomic constraint. The result is not canonical until
    /// [`Zone::canonicalize`] runs.
    pub fn and_atom(&mut self, atom: &Atom) {
        match *atom {
            Atom::Simple { clock, rel, constant } => {
                let x = clock.0 + 1;
                match rel {
                    Rel::Lt => self.tighten(x, 0, bound(constant, true)),
                    Rel::Le => self.tighten(x, 0, bound(constant, false)),
                    Rel::Ge => self.tighten(0, x, bound(-constant, false)),
                    Rel::Gt => self.tighten(0, x, bound(-constant, true)),
                    Rel::Eq => {
                        self.tighten(x, 0, bound(constant, false));
                        self.tighten(0, x, bound(-constant, false));
                    }
                }
            }
            Atom::Diff { left, right, rel, constant } => {
                let x = left.0 + 1;
                let y = right.0 + 1;
                match rel {
                    Rel::Lt => self.tighten(x, y, bound(constant, true)),
                    Rel::Le => self.tighten(x, y, bound(constant, false)),
                    Rel::Ge => self.tighten(y, x, bound(-constant, false)),
                    Rel::Gt => self.tighten(y, x, bound(-constant, true)),
                    Rel::Eq => {
                        self.tighten(x, y, bound(constant, false));
                        self.tighten(y, x, bound(-constant, false));
                    }
                }
            }
        }
    }

    /// All-pairs tightening. Idempotent; emptiness shows up as a negative
    /// diagonal entry, normalized to a canonical empty matrix.
    pub fn canonicalize(mut self) -> Zone {
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.get(i, k);
                if ik == INF {
                    continue;
                }
                for j in 0..n {
                    let v = bound_add(ik, self.get(k, j));
                    self.tighten(i, j, v);
                }
            }
        }
        for i in 0..n {
            if self.get(i, i) < LE_ZERO {
                return Zone::empty(n);
            }
        }
        self
    }

    pub fn empty(dim: usize) -> Zone {
        let mut m = vec![bound(-1, false); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = bound(-1, false);
        }
        Zone { dim, m }
    }

    pub fn is_empty(&self) -> bool {
        (0..self.dim).any(|i| self.get(i, i) < LE_ZERO)
    }

    pub fn intersect(&self, other: &Zone) -> Zone {
        assert_eq!(self.dim, other.dim, "zone dimension mismatch");
        if self.is_empty() || other.is_empty() {
            return Zone::empty(self.dim);
        }
        let mut z = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                z.tighten(i, j, other.get(i, j));
            }
        }
        z.canonicalize()
    }

    /// Future closure: remove upper bounds relative to the reference clock.
    pub fn up(&self) -> Zone {
        if self.is_empty() {
            return self.clone();
        }
        let mut z = self.clone();
        for i in 1..self.dim {
            z.set(i, 0, INF);
        }
        z.canonicalize()
    }

    /// Past closure: every valuation from which some delay enters the zone.
    pub fn down(&self) -> Zone {
        if self.is_empty() {
            return self.clone();
        }
        let mut z = self.clone();
        for i in 1..self.dim {
            z.set(0, i, LE_ZERO);
        }
        z.canonicalize()
    }

    pub fn reset(&self, resets: impl IntoIterator<Item = ClockId>) -> Zone {
        if self.is_empty() {
            return self.clone();
        }
        let mut z = self.clone();
        for c in resets {
            let x = c.0 + 1;
            for i in 0..z.dim {
                let v0i = z.get(0, i);
                z.set(x, i, v0i);
                let vi0 = z.get(i, 0);
                z.set(i, x, vi0);
            }
            z.set(x, x, LE_ZERO);
        }
        z.canonicalize()
    }

    /// Remove every constraint on the given clock (it keeps only
    /// non-negativity).
    pub fn free(&self, clock: ClockId) -> Zone {
        if self.is_empty() {
            return self.clone();
        }
        let x = clock.0 + 1;
        let mut z = self.clone();
        for i in 0..z.dim {
            if i != x {
                z.set(x, i, INF);
                let vi0 = z.get(i, 0);
                z.set(i, x, vi0);
            }
        }
        z.set(0, x, LE_ZERO);
        z.canonicalize()
    }

    /// Valuations `v` such that `v[resets ↦ 0]` lies in the zone.
    pub fn reset_preimage(&self, resets: impl IntoIterator<Item = ClockId> + Clone) -> Zone {
        let mut z = self.clone();
        for c in resets.clone() {
            let x = c.0 + 1;
            let mut pinned = Zone::universe(self.dim);
            pinned.set(x, 0, LE_ZERO);
            z = z.intersect(&pinned);
        }
        if z.is_empty() {
            return z;
        }
        for c in resets {
            z = z.free(c);
        }
        z
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len() + 1, self.dim, "valuation dimension mismatch");
        if self.is_empty() {
            return false;
        }
        let zero = BigRational::zero();
        let val = |i: usize| -> &BigRational {
            if i == 0 {
                &zero
            } else {
                &v[i - 1]
            }
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = self.get(i, j);
                if b == INF {
                    continue;
                }
                let diff = val(i) - val(j);
                let limit = BigRational::from(BigInt::from(bound_value(b)));
                if bound_is_strict(b) {
                    if diff >= limit {
                        return false;
                    }
                } else if diff > limit {
                    return false;
                }
            }
        }
        true
    }

    /// `self ⊆ other`, both canonical.
    pub fn is_subset(&self, other: &Zone) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        (0..self.dim * self.dim).all(|k| self.m[k] <= other.m[k])
    }

    /// Pairwise-disjoint zones covering the complement within the
    /// non-negative orthant, one per tight facet.
    pub fn complement(&self) -> Vec<Zone> {
        let universe = Zone::universe(self.dim);
        if self.is_empty() {
            return vec![universe];
        }
        let mut pieces = Vec::new();
        let mut carved = universe.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b >= universe.get(i, j) {
                    continue; // not a real facet
                }
                // Violate facet (i,j): x_i - x_j beyond b, i.e. x_j - x_i
                // strictly below the negated bound.
                let negated = bound(-bound_value(b), !bound_is_strict(b));
                let mut piece = carved.clone();
                piece.tighten(j, i, negated);
                let piece = piece.canonicalize();
                if !piece.is_empty() {
                    pieces.push(piece);
                }
                // Later pieces satisfy this facet.
                carved.tighten(i, j, b);
                carved = carved.canonicalize();
            }
        }
        pieces
    }

    /// Tight atoms of a canonical zone, suitable for use as a guard.
    pub fn to_constraint(&self) -> ClockConstraint {
        assert!(!self.is_empty(), "cannot render an empty zone as a guard");
        let universe = Zone::universe(self.dim);
        let mut atoms = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b >= universe.get(i, j) {
                    continue;
                }
                let value = bound_value(b);
                let strict = bound_is_strict(b);
                if j == 0 {
                    // x_i - 0 <= value
                    atoms.push(Atom::Simple {
                        clock: ClockId(i - 1),
                        rel: if strict { Rel::Lt } else { Rel::Le },
                        constant: value,
                    });
                } else if i == 0 {
                    // 0 - x_j <= value, i.e. x_j >= -value
                    atoms.push(Atom::Simple {
                        clock: ClockId(j - 1),
                        rel: if strict { Rel::Gt } else { Rel::Ge },
                        constant: -value,
                    });
                } else {
                    atoms.push(Atom::Diff {
                        left: ClockId(i - 1),
                        right: ClockId(j - 1),
                        rel: if strict { Rel::Lt } else { Rel::Le },
                        constant: value,
                    });
                }
            }
        }
        ClockConstraint { atoms }
    }

    /// A rational point inside a non-empty canonical zone, chosen
    /// deterministically (midpoints of the per-clock feasible intervals).
    pub fn sample_point(&self) -> Option<Vec<BigRational>> {
        if self.is_empty() {
            return None;
        }
        let mut vals: Vec<BigRational> = Vec::with_capacity(self.dim - 1);
        for i in 1..self.dim {
            let mut lo = BigRational::zero();
            let mut lo_strict = false;
            let mut hi: Option<BigRational> = None;
            let mut hi_strict = false;
            let mut consider = |low: Option<(BigRational, bool)>, high: Option<(BigRational, bool)>| {
                if let Some((v, s)) = low {
                    if v > lo || (v == lo && s && !lo_strict) {
                        lo = v;
                        lo_strict = s;
                    }
                }
                if let Some((v, s)) = high {
                    match &hi {
                        None => {
                            hi = Some(v);
                            hi_strict = s;
                        }
                        Some(h) => {
                            if v < *h || (v == *h && s && !hi_strict) {
                                hi = Some(v);
                                hi_strict = s;
                            }
                        }
                    }
                }
            };
            // Bounds against the reference clock.
            let b_i0 = self.get(i, 0);
            if b_i0 != INF {
                consider(
                    None,
                    Some((
                        BigRational::from(BigInt::from(bound_value(b_i0))),
                        bound_is_strict(b_i0),
                    )),
                );
            }
            let b_0i = self.get(0, i);
            consider(
                Some((
                    BigRational::from(BigInt::from(-bound_value(b_0i))),
                    bound_is_strict(b_0i),
                )),
                None,
            );
            // Bounds against already-fixed clocks.
            for (j, vj) in vals.iter().enumerate() {
                let j = j + 1;
                let b_ij = self.get(i, j);
                if b_ij != INF {
                    consider(
                        None,
                        Some((
                            vj + BigRational::from(BigInt::from(bound_value(b_ij))),
                            bound_is_strict(b_ij),
                        )),
                    );
                }
                let b_ji = self.get(j, i);
                if b_ji != INF {
                    consider(
                        Some((
                            vj - BigRational::from(BigInt::from(bound_value(b_ji))),
                            bound_is_strict(b_ji),
                        )),
                        None,
                    );
                }
            }
            let v = match hi {
                Some(h) => {
                    if lo == h {
                        debug_assert!(!lo_strict && !hi_strict);
                        lo.clone()
                    } else {
                        (lo.clone() + h) / BigRational::from(BigInt::from(2))
                    }
                }
                None => {
                    if lo_strict || !lo.is_integer() {
                        lo.clone() + BigRational::new(BigInt::one(), BigInt::from(2))
                    } else {
                        lo.clone()
                    }
                }
            };
            vals.push(v);
        }
        debug_assert!(self.contains(&vals));
        Some(vals)
    }

    /// Feasible delays from `v` into the zone, as a rational interval.
    /// Returns `None` when no delay enters the zone.
    pub fn delay_interval(&self, v: &[BigRational]) -> Option<DelayInterval> {
        assert_eq!(v.len() + 1, self.dim);
        if self.is_empty() {
            return None;
        }
        let zero = BigRational::zero();
        let val = |i: usize| -> &BigRational {
            if i == 0 {
                &zero
            } else {
                &v[i - 1]
            }
        };
        let mut lo = BigRational::zero();
        let mut lo_strict = false;
        let mut hi: Option<BigRational> = None;
        let mut hi_strict = false;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b == INF {
                    continue;
                }
                let limit = BigRational::from(BigInt::from(bound_value(b)));
                let strict = bound_is_strict(b);
                let diff = val(i) - val(j);
                // (v_i + δ·[i>0]) - (v_j + δ·[j>0]) ⋈ limit
                let coeff = (i > 0) as i64 - (j > 0) as i64;
                match coeff {
                    0 => {
                        if diff > limit || (diff == limit && strict) {
                            return None;
                        }
                    }
                    1 => {
                        // δ ⋈ limit - diff
                        let cap = limit - diff;
                        match &hi {
                            None => {
                                hi = Some(cap);
                                hi_strict = strict;
                            }
                            Some(h) => {
                                if cap < *h || (cap == *h && strict && !hi_strict) {
                                    hi = Some(cap);
                                    hi_strict = strict;
                                }
                            }
                        }
                    }
                    _ => {
                        // -δ ⋈ limit - diff, i.e. δ beyond diff - limit
                        let floor = diff - limit;
                        if floor > lo || (floor == lo && strict && !lo_strict) {
                            lo = floor;
                            lo_strict = strict;
                        }
                    }
                }
            }
        }
        if lo < BigRational::zero() {
            lo = BigRational::zero();
            lo_strict = false;
        }
        if let Some(h) = &hi {
            if *h < lo || (*h == lo && (lo_strict || hi_strict)) {
                return None;
            }
        }
        Some(DelayInterval {
            lo,
            lo_strict,
            hi,
            hi_strict,
        })
    }
}

/// A non-empty interval of delays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayInterval {
    pub lo: BigRational,
    pub lo_strict: bool,
    pub hi: Option<BigRational>,
    pub hi_strict: bool,
}

impl DelayInterval {
    /// Deterministic representative: the point itself for point intervals,
    /// the midpoint for bounded ones, half a unit past the lower end
    /// otherwise.
    pub fn pick(&self) -> BigRational {
        match &self.hi {
            Some(h) if *h == self.lo => self.lo.clone(),
            Some(h) => (self.lo.clone() + h) / BigRational::from(BigInt::from(2)),
            None => self.lo.clone() + BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "false");
        }
        write!(f, "[")?;
        let mut first = true;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j || self.get(i, j) == INF {
                    continue;
                }
                if !first {
                    write!(f, " & ")?;
                }
                first = false;
                let b = self.get(i, j);
                write!(
                    f,
                    "x{i}-x{j}{}{}",
                    if bound_is_strict(b) { "<" } else { "<=" },
                    bound_value(b)
                )?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(x: f64) -> BigRational {
        BigRational::from_f64(x).unwrap()
    }

    fn atom(clock: usize, rel: Rel, constant: i64) -> Atom {
        Atom::Simple {
            clock: ClockId(clock),
            rel,
            constant,
        }
    }

    fn zone(dim: usize, atoms: &[Atom]) -> Zone {
        let mut z = Zone::universe(dim);
        for a in atoms {
            z.and_atom(a);
        }
        z.canonicalize()
    }

    #[test]
    fn canonicalize_derives_transitive_bound() {
        // x <= 2 and y - x <= 1 imply y <= 3.
        let z = zone(
            3,
            &[
                atom(0, Rel::Le, 2),
                Atom::Diff {
                    left: ClockId(1),
                    right: ClockId(0),
                    rel: Rel::Le,
                    constant: 1,
                },
            ],
        );
        assert_eq!(z.get(2, 0), bound(3, false));
        // Independent spot check on a grid of rational points.
        for ix in 0..=8 {
            for iy in 0..=8 {
                let p = vec![rat(ix as f64 / 2.0), rat(iy as f64 / 2.0)];
                let direct = p[0] <= rat(2.0) && &p[1] - &p[0] <= rat(1.0);
                assert_eq!(z.contains(&p), direct, "point {p:?}");
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let z = zone(3, &[atom(0, Rel::Le, 4), atom(1, Rel::Ge, 1)]);
        assert_eq!(z.clone().canonicalize(), z);
    }

    #[test]
    fn contradiction_is_empty() {
        let z = zone(2, &[atom(0, Rel::Le, 1), atom(0, Rel::Ge, 2)]);
        assert!(z.is_empty());
    }

    #[test]
    fn up_from_origin_is_diagonal_ray() {
        let z = Zone::zero(3).up();
        assert!(z.contains(&[rat(1.5), rat(1.5)]));
        assert!(!z.contains(&[rat(1.0), rat(2.0)]));
        assert!(z.contains(&[rat(0.0), rat(0.0)]));
    }

    #[test]
    fn reset_projects_onto_axis() {
        // x = y, x >= 3, reset x: x = 0, y >= 3.
        let z = zone(
            3,
            &[
                Atom::Diff {
                    left: ClockId(0),
                    right: ClockId(1),
                    rel: Rel::Eq,
                    constant: 0,
                },
                atom(0, Rel::Ge, 3),
            ],
        )
        .reset([ClockId(0)]);
        for raw in [(0.0, 3.0), (0.0, 4.5), (0.0, 100.0)] {
            assert!(z.contains(&[rat(raw.0), rat(raw.1)]));
        }
        for raw in [(0.5, 3.0), (0.0, 2.5)] {
            assert!(!z.contains(&[rat(raw.0), rat(raw.1)]));
        }
    }

    #[test]
    fn strict_bounds_exclude_boundary() {
        let z = zone(2, &[atom(0, Rel::Gt, 4)]);
        assert!(!z.contains(&[rat(4.0)]));
        assert!(z.contains(&[rat(4.1)]));
    }

    #[test]
    fn complement_of_universe_is_empty() {
        assert!(Zone::universe(3).complement().is_empty());
    }

    #[test]
    fn complement_of_half_line() {
        let z = zone(2, &[atom(0, Rel::Ge, 2)]);
        let pieces = z.complement();
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].contains(&[rat(1.9)]));
        assert!(!pieces[0].contains(&[rat(2.0)]));
    }

    #[test]
    fn complement_of_open_interval_covers_and_is_disjoint() {
        let z = zone(2, &[atom(0, Rel::Gt, 1), atom(0, Rel::Lt, 2)]);
        let pieces = z.complement();
        assert_eq!(pieces.len(), 2);
        // Sample a 0..4 grid with midpoints.
        let mut x = 0.0;
        while x <= 4.0 {
            let p = vec![rat(x)];
            let inside = z.contains(&p);
            let hits = pieces.iter().filter(|c| c.contains(&p)).count();
            assert_eq!(hits, if inside { 0 } else { 1 }, "x = {x}");
            x += 0.25;
        }
    }

    #[test]
    fn reset_preimage_inverts_reset() {
        // Zone after reset of x: x = 0 & y >= 3. Preimage: y >= 3, x free.
        let z = zone(3, &[atom(0, Rel::Eq, 0), atom(1, Rel::Ge, 3)]);
        let pre = z.reset_preimage([ClockId(0)]);
        assert!(pre.contains(&[rat(7.0), rat(3.0)]));
        assert!(!pre.contains(&[rat(7.0), rat(2.0)]));
    }

    #[test]
    fn sample_point_lands_inside() {
        let z = zone(3, &[atom(0, Rel::Gt, 1), atom(0, Rel::Lt, 2), atom(1, Rel::Ge, 4)]);
        let p = z.sample_point().unwrap();
        assert!(z.contains(&p));
        assert_eq!(p[0], rat(1.5));
    }

    #[test]
    fn delay_interval_on_ray() {
        // From x=1, the zone x >= 2 && x < 3 is entered for δ in [1, 2).
        let z = zone(2, &[atom(0, Rel::Ge, 2), atom(0, Rel::Lt, 3)]);
        let iv = z.delay_interval(&[rat(1.0)]).unwrap();
        assert_eq!(iv.lo, rat(1.0));
        assert!(!iv.lo_strict);
        assert_eq!(iv.hi, Some(rat(2.0)));
        assert!(iv.hi_strict);
        assert_eq!(iv.pick(), rat(1.5));
    }
}
