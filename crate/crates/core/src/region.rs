//! Clock regions: the finite quotient of valuations with respect to
//! per-clock maximal constants. A region fixes each clock's integer part
//! (capped at its maximal constant) and the ordering of the fractional
//! parts of the bounded clocks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{Atom, ClockConstraint, ClockId, Rel};
use crate::zone::Zone;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClockPart {
    /// Strictly above the clock's maximal constant.
    Above,
    /// Integer part `int`, with `frac_zero` marking an exact integer value.
    Bounded { int: i64, frac_zero: bool },
}

/// One Alur–Dill equivalence class. `frac_order` lists the bounded clocks
/// with non-zero fractional part, grouped by equal fraction in increasing
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub parts: Vec<ClockPart>,
    pub frac_order: Vec<Vec<usize>>,
}

impl Region {
    /// The all-zeros region.
    pub fn origin(n_clocks: usize) -> Region {
        Region {
            parts: vec![
                ClockPart::Bounded {
                    int: 0,
                    frac_zero: true
                };
                n_clocks
            ],
            frac_order: Vec::new(),
        }
    }

    pub fn n_clocks(&self) -> usize {
        self.parts.len()
    }

    pub fn of_valuation(v: &[BigRational], max_consts: &[i64]) -> Region {
        assert_eq!(v.len(), max_consts.len());
        let mut parts = Vec::with_capacity(v.len());
        let mut fracs: Vec<(BigRational, usize)> = Vec::new();
        for (i, value) in v.iter().enumerate() {
            assert!(!value.is_negative(), "clock valuations are non-negative");
            let int = value.floor().to_integer();
            let frac = value - BigRational::from(int.clone());
            let int = int.to_i64().expect("clock value within i64 range");
            let m = max_consts[i];
            if int > m || (int == m && !frac.is_zero()) {
                parts.push(ClockPart::Above);
            } else {
                let frac_zero = frac.is_zero();
                parts.push(ClockPart::Bounded { int, frac_zero });
                if !frac_zero {
                    fracs.push((frac, i));
                }
            }
        }
        fracs.sort();
        let mut frac_order: Vec<Vec<usize>> = Vec::new();
        let mut last: Option<BigRational> = None;
        for (frac, idx) in fracs {
            match &last {
                Some(f) if *f == frac => frac_order.last_mut().unwrap().push(idx),
                _ => {
                    frac_order.push(vec![idx]);
                    last = Some(frac);
                }
            }
        }
        Region { parts, frac_order }
    }

    /// Recover the region of a zone that is exactly one equivalence class.
    pub fn of_zone(z: &Zone, max_consts: &[i64]) -> Option<Region> {
        let point = z.sample_point()?;
        Some(Region::of_valuation(&point, max_consts))
    }

    /// The canonical zone holding exactly this region's valuations.
    pub fn to_zone(&self, max_consts: &[i64]) -> Zone {
        let n = self.parts.len();
        let mut z = Zone::universe(n + 1);
        let cell = |i: usize| -> Option<usize> {
            self.frac_order.iter().position(|c| c.contains(&i))
        };
        for (i, part) in self.parts.iter().enumerate() {
            match *part {
                ClockPart::Above => z.and_atom(&Atom::Simple {
                    clock: ClockId(i),
                    rel: Rel::Gt,
                    constant: max_consts[i],
                }),
                ClockPart::Bounded { int, frac_zero } => {
                    if frac_zero {
                        z.and_atom(&Atom::Simple {
                            clock: ClockId(i),
                            rel: Rel::Eq,
                            constant: int,
                        });
                    } else {
                        z.and_atom(&Atom::Simple {
                            clock: ClockId(i),
                            rel: Rel::Gt,
                            constant: int,
                        });
                        z.and_atom(&Atom::Simple {
                            clock: ClockId(i),
                            rel: Rel::Lt,
                            constant: int + 1,
                        });
                    }
                }
            }
        }
        // Pin differences between bounded clocks from the fraction order.
        for i in 0..n {
            for j in (i + 1)..n {
                let (int_i, fz_i) = match self.parts[i] {
                    ClockPart::Bounded { int, frac_zero } => (int, frac_zero),
                    ClockPart::Above => continue,
                };
                let (int_j, fz_j) = match self.parts[j] {
                    ClockPart::Bounded { int, frac_zero } => (int, frac_zero),
                    ClockPart::Above => continue,
                };
                let gap = int_i - int_j;
                let pos_i = if fz_i { None } else { cell(i) };
                let pos_j = if fz_j { None } else { cell(j) };
                let (left, right) = (ClockId(i), ClockId(j));
                match (pos_i, pos_j) {
                    (a, b) if a == b => z.and_atom(&Atom::Diff {
                        left,
                        right,
                        rel: Rel::Eq,
                        constant: gap,
                    }),
                    (a, b) if a.is_none() || (b.is_some() && a < b) => {
                        // frac(i) < frac(j)
                        z.and_atom(&Atom::Diff { left, right, rel: Rel::Lt, constant: gap });
                        z.and_atom(&Atom::Diff {
                            left: right,
                            right: left,
                            rel: Rel::Lt,
                            constant: 1 - gap,
                        });
                    }
                    _ => {
                        // frac(i) > frac(j)
                        z.and_atom(&Atom::Diff {
                            left: right,
                            right: left,
                            rel: Rel::Lt,
                            constant: -gap,
                        });
                        z.and_atom(&Atom::Diff {
                            left,
                            right,
                            rel: Rel::Lt,
                            constant: gap + 1,
                        });
                    }
                }
            }
        }
        z.canonicalize()
    }

    /// True when no time successor exists (every clock is unbounded).
    pub fn is_time_maximal(&self) -> bool {
        self.parts.iter().all(|p| matches!(p, ClockPart::Above))
    }

    /// The immediate successor region under time elapse, if any.
    pub fn time_successor(&self, max_consts: &[i64]) -> Option<Region> {
        if self.is_time_maximal() {
            return None;
        }
        let integral: Vec<usize> = (0..self.parts.len())
            .filter(|&i| matches!(self.parts[i], ClockPart::Bounded { frac_zero: true, .. }))
            .collect();
        let mut parts = self.parts.clone();
        let mut frac_order = self.frac_order.clone();
        if !integral.is_empty() {
            // Integer-valued clocks start a new, smallest fraction cell;
            // those already at their maximal constant move above it.
            let mut front = Vec::new();
            for &i in &integral {
                if let ClockPart::Bounded { int, .. } = self.parts[i] {
                    if int >= max_consts[i] {
                        parts[i] = ClockPart::Above;
                    } else {
                        parts[i] = ClockPart::Bounded { int, frac_zero: false };
                        front.push(i);
                    }
                }
            }
            if !front.is_empty() {
                front.sort_unstable();
                frac_order.insert(0, front);
            }
        } else {
            // The largest fraction cell reaches the next integer.
            let last = frac_order.pop().expect("non-maximal region has fractions");
            for i in last {
                if let ClockPart::Bounded { int, .. } = self.parts[i] {
                    parts[i] = ClockPart::Bounded { int: int + 1, frac_zero: true };
                }
            }
        }
        Some(Region { parts, frac_order })
    }

    /// A deterministic representative valuation.
    pub fn representative(&self, max_consts: &[i64]) -> Vec<BigRational> {
        let cells = self.frac_order.len() as i64;
        self.parts
            .iter()
            .enumerate()
            .map(|(i, part)| match *part {
                ClockPart::Above => BigRational::from(BigInt::from(max_consts[i] + 1)),
                ClockPart::Bounded { int, frac_zero } => {
                    if frac_zero {
                        BigRational::from(BigInt::from(int))
                    } else {
                        let pos = self
                            .frac_order
                            .iter()
                            .position(|c| c.contains(&i))
                            .expect("fractional clock appears in the order") as i64;
                        BigRational::from(BigInt::from(int))
                            + BigRational::new(BigInt::from(pos + 1), BigInt::from(cells + 1))
                    }
                }
            })
            .collect()
    }

    /// Rectangular pin of the region: each clock's cell as simple atoms.
    /// Along one time-successor chain every rectangular cell is visited at
    /// most once, so for valuations flowing from this chain's entry the
    /// rectangular part selects the region exactly; the fraction-order
    /// constraints are redundant there.
    pub fn rect_constraint(&self, max_consts: &[i64]) -> ClockConstraint {
        let mut atoms = Vec::new();
        for (i, part) in self.parts.iter().enumerate() {
            let clock = ClockId(i);
            match *part {
                ClockPart::Above => atoms.push(Atom::Simple {
                    clock,
                    rel: Rel::Gt,
                    constant: max_consts[i],
                }),
                ClockPart::Bounded { int, frac_zero } => {
                    if frac_zero {
                        atoms.push(Atom::Simple { clock, rel: Rel::Eq, constant: int });
                    } else {
                        if int > 0 {
                            atoms.push(Atom::Simple { clock, rel: Rel::Gt, constant: int });
                        } else {
                            atoms.push(Atom::Simple { clock, rel: Rel::Gt, constant: 0 });
                        }
                        atoms.push(Atom::Simple {
                            clock,
                            rel: Rel::Lt,
                            constant: int + 1,
                        });
                    }
                }
            }
        }
        ClockConstraint { atoms }
    }

    /// Upper bounds of a later region on the same time chain, used as the
    /// invariant of an extracted location: they admit dwelling through the
    /// chain and forbid crossing past its end. Lower bounds are omitted;
    /// every entry valuation already satisfies them and delay preserves
    /// them, so only upper bounds carry information (and the invariant
    /// stays within the input grammar).
    pub fn chain_invariant(end: &Region) -> ClockConstraint {
        let mut atoms = Vec::new();
        for (i, part) in end.parts.iter().enumerate() {
            let clock = ClockId(i);
            match *part {
                ClockPart::Above => {}
                ClockPart::Bounded { int, frac_zero } => {
                    if frac_zero {
                        atoms.push(Atom::Simple { clock, rel: Rel::Le, constant: int });
                    } else {
                        atoms.push(Atom::Simple {
                            clock,
                            rel: Rel::Lt,
                            constant: int + 1,
                        });
                    }
                }
            }
        }
        ClockConstraint { atoms }
    }

    /// Keep only the clocks in `keep` (their relative order preserved).
    pub fn project(&self, keep: &[usize]) -> Region {
        let parts = keep.iter().map(|&i| self.parts[i].clone()).collect();
        let mut frac_order = Vec::new();
        for cell in &self.frac_order {
            let filtered: Vec<usize> = cell
                .iter()
                .filter_map(|i| keep.iter().position(|k| k == i))
                .collect();
            if !filtered.is_empty() {
                frac_order.push(filtered);
            }
        }
        Region { parts, frac_order }
    }
}

/// Upper bound on the number of regions: |X|! · 2^|X| · Π (2·M_x + 2).
pub fn region_count_bound(max_consts: &[i64]) -> u128 {
    let mut bound: u128 = 1;
    for (i, &m) in max_consts.iter().enumerate() {
        bound = bound.saturating_mul((i + 1) as u128);
        bound = bound.saturating_mul(2);
        bound = bound.saturating_mul((2 * m.max(0) as u128) + 2);
    }
    bound
}
