//! The noncontextual polytope of a scenario: deterministic behaviors, exact
//! affine dimension, and facet certification of an inequality.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inequality::{nchv_max, Assignment, Inequality, ENUMERATION_GUARD};
use crate::rational::Rational;

/// Bit of `position` (index into a context's test list) inside a pattern
/// index. Patterns are ordered in binary with the first test as the most
/// significant bit, so pattern `10` on `{0,1}` means test 0 fired.
pub fn pattern_bit(width: usize, position: usize) -> usize {
    1 << (width - 1 - position)
}

/// Index of an outcome tuple listed in the context's test order.
pub fn pattern_index(outcomes: &[bool]) -> usize {
    outcomes.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// Outcome tuple as a bit string, first test first.
pub fn pattern_string(width: usize, index: usize) -> String {
    (0..width)
        .map(|p| {
            if index & pattern_bit(width, p) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Probabilities over `(context, pattern)` pairs, contexts in declaration
/// order and patterns in binary order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Behavior {
    widths: Vec<usize>,
    coords: Vec<Rational>,
}

impl Behavior {
    pub fn new(widths: Vec<usize>, coords: Vec<Rational>) -> Result<Self> {
        let expected: usize = widths.iter().map(|w| 1usize << w).sum();
        if coords.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: coords.len(),
            });
        }
        let b = Behavior { widths, coords };
        for c in 0..b.widths.len() {
            let block = b.context(c);
            if block.iter().any(|x| x.is_negative())
                || block.iter().sum::<Rational>() != Rational::one()
            {
                return Err(Error::InvalidArgument(format!(
                    "context {c} is not a probability distribution"
                )));
            }
        }
        Ok(b)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Offset of context `c`'s block.
    pub fn offset(&self, c: usize) -> usize {
        self.widths[..c].iter().map(|w| 1usize << w).sum()
    }

    pub fn context(&self, c: usize) -> &[Rational] {
        let start = self.offset(c);
        &self.coords[start..start + (1 << self.widths[c])]
    }

    pub fn probability(&self, c: usize, pattern: usize) -> &Rational {
        &self.context(c)[pattern]
    }
}

impl AsRef<[Rational]> for Behavior {
    fn as_ref(&self) -> &[Rational] {
        &self.coords
    }
}

fn widths(ineq: &Inequality) -> Vec<usize> {
    ineq.contexts().iter().map(|c| c.tests.len()).collect()
}

/// Pattern induced on each context by an assignment.
fn induced_patterns(ineq: &Inequality, a: &Assignment) -> Vec<usize> {
    ineq.contexts()
        .iter()
        .map(|c| pattern_index(&c.tests.iter().map(|&t| a.value(t)).collect::<Vec<_>>()))
        .collect()
}

pub fn deterministic_behavior(ineq: &Inequality, a: &Assignment) -> Result<Behavior> {
    if a.len() != ineq.n_tests() {
        return Err(Error::LengthMismatch {
            expected: ineq.n_tests(),
            found: a.len(),
        });
    }
    let widths = widths(ineq);
    let mut coords = Vec::new();
    for (w, p) in widths.iter().zip(induced_patterns(ineq, a)) {
        let mut block = vec![Rational::zero(); 1 << w];
        block[p] = Rational::one();
        coords.extend(block);
    }
    Ok(Behavior { widths, coords })
}

/// Coefficients of the inequality's left-hand side: `w_c` on every pattern
/// of context `c` with exactly one fired test.
pub fn linear_functional(ineq: &Inequality) -> Vec<Rational> {
    ineq.contexts()
        .iter()
        .flat_map(|c| {
            (0..1usize << c.tests.len()).map(move |p| {
                if p.count_ones() == 1 {
                    c.weight.clone()
                } else {
                    Rational::zero()
                }
            })
        })
        .collect()
}

pub fn apply_functional(functional: &[Rational], b: &Behavior) -> Result<Rational> {
    if functional.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: b.len(),
            found: functional.len(),
        });
    }
    Ok(functional
        .iter()
        .zip(&b.coords)
        .filter(|(_, x)| !x.is_zero())
        .map(|(f, x)| f * x)
        .sum())
}

fn check_guard(ineq: &Inequality) -> Result<()> {
    if ineq.n_tests() > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            n: ineq.n_tests(),
            max: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

/// Distinct deterministic behaviors, each with the smallest assignment
/// inducing it, in increasing assignment order.
pub fn vertices(ineq: &Inequality) -> Result<Vec<(Assignment, Behavior)>> {
    check_guard(ineq)?;
    let n = ineq.n_tests();
    let keyed: Vec<(Vec<usize>, u64)> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let a = Assignment::new(n, bits).expect("bits fit the assignment");
            (induced_patterns(ineq, &a), bits)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (key, bits) in keyed {
        if seen.insert(key) {
            let a = Assignment::new(n, bits)?;
            let b = deterministic_behavior(ineq, &a)?;
            out.push((a, b));
        }
    }
    Ok(out)
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = &p[col] * &row[j] - &factor * &p[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = head[rank][col].clone();
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Affine dimension of a point set (`-1` for the empty set).
pub fn affine_dimension<P: AsRef<[Rational]>>(points: &[P]) -> i64 {
    let Some(first) = points.first().map(AsRef::as_ref) else {
        return -1;
    };
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| integer_row(p.as_ref().iter().zip(first).map(|(a, b)| a - b)))
        .collect();
    bareiss_rank(diffs) as i64
}

/// Scales a rational row to an integer row.
fn integer_row(values: impl Iterator<Item = Rational>) -> Vec<BigInt> {
    let values: Vec<Rational> = values.collect();
    let denom = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| (v * Rational::from_integer(denom.clone())).to_integer())
        .collect()
}

/// Coordinates in which the polytope is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoordinateSpace {
    /// Only the events the inequality mentions: per context, the patterns
    /// in which exactly one test fires.
    #[default]
    Events,
    /// Every pattern of every context.
    Full,
}

impl fmt::Display for CoordinateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordinateSpace::Events => "events",
            CoordinateSpace::Full => "full",
        })
    }
}

impl std::str::FromStr for CoordinateSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "events" => Ok(CoordinateSpace::Events),
            "full" => Ok(CoordinateSpace::Full),
            _ => Err(Error::InvalidArgument(format!(
                "unknown coordinate space {s:?}"
            ))),
        }
    }
}

/// Indices of the full coordinates kept in `space`.
pub fn coordinate_indices(ineq: &Inequality, space: CoordinateSpace) -> Vec<usize> {
    let mut out = Vec::new();
    let mut offset = 0;
    for c in ineq.contexts() {
        let size = 1usize << c.tests.len();
        out.extend(
            (0..size)
                .filter(|p| space == CoordinateSpace::Full || p.count_ones() == 1)
                .map(|p| offset + p),
        );
        offset += size;
    }
    out
}

pub fn project(b: &Behavior, indices: &[usize]) -> Vec<Rational> {
    indices.iter().map(|&i| b.coords[i].clone()).collect()
}

fn projected_vertices(ineq: &Inequality, space: CoordinateSpace) -> Result<Vec<Vec<Rational>>> {
    let idx = coordinate_indices(ineq, space);
    let mut seen = BTreeSet::new();
    Ok(vertices(ineq)?
        .iter()
        .map(|(_, b)| project(b, &idx))
        .filter(|p| seen.insert(p.clone()))
        .collect())
}

pub fn polytope_dimension(ineq: &Inequality) -> Result<usize> {
    polytope_dimension_in(ineq, CoordinateSpace::default())
}

pub fn polytope_dimension_in(ineq: &Inequality, space: CoordinateSpace) -> Result<usize> {
    Ok(affine_dimension(&projected_vertices(ineq, space)?) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Facet,
    NonFacet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Facet => "facet",
            Verdict::NonFacet => "non-facet",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineCertificate {
    pub space: CoordinateSpace,
    pub coordinates: usize,
    /// Distinct vertices in `space`.
    pub vertices: usize,
    pub polytope_dim: usize,
    /// Affine dimension of the saturating vertex set.
    pub face_dim: usize,
    pub verdict: Verdict,
    pub saturating: usize,
    pub bound: Rational,
}

pub fn facet_check(ineq: &Inequality) -> Result<AffineCertificate> {
    facet_check_in(ineq, CoordinateSpace::default())
}

/// Certifies whether `LHS ≤ bound` defines a facet, with the declared exact
/// NCHV bound or, absent one, the brute-force maximum.
pub fn facet_check_in(ineq: &Inequality, space: CoordinateSpace) -> Result<AffineCertificate> {
    let verts = projected_vertices(ineq, space)?;
    let bound = match ineq.bounds.nchv.as_ref().and_then(|b| b.exact()) {
        Some(b) => b.clone(),
        None => nchv_max(ineq)?.0,
    };
    let idx = coordinate_indices(ineq, space);
    let full = linear_functional(ineq);
    let functional: Vec<Rational> = idx.iter().map(|&i| full[i].clone()).collect();
    let values: Vec<Rational> = verts
        .iter()
        .map(|v| functional.iter().zip(v).map(|(f, x)| f * x).sum())
        .collect();
    if let Some(max) = values.iter().max() {
        if *max > bound {
            return Err(Error::BoundViolated {
                bound: bound.to_string(),
                value: max.to_string(),
            });
        }
    }
    let face: Vec<&Vec<Rational>> = verts
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == bound)
        .map(|(p, _)| p)
        .collect();
    if face.is_empty() {
        return Err(Error::NoSaturatingVertex {
            bound: bound.to_string(),
        });
    }
    let polytope_dim = affine_dimension(&verts) as usize;
    let face_dim = affine_dimension(&face) as usize;
    let verdict = if face_dim + 1 == polytope_dim {
        Verdict::Facet
    } else {
        Verdict::NonFacet
    };
    Ok(AffineCertificate {
        space,
        coordinates: idx.len(),
        vertices: verts.len(),
        polytope_dim,
        face_dim,
        verdict,
        saturating: face.len(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{kcbs, twin, Bound, Bounds, Context};
    use crate::rational::{int, ratio};

    fn single() -> Inequality {
        Inequality::new(1, vec![Context::new(vec![0], int(1))], Bounds::default()).unwrap()
    }

    #[test]
    fn pattern_conventions() {
        assert_eq!(pattern_index(&[true, false]), 2);
        assert_eq!(pattern_string(2, 2), "10");
        assert_eq!(pattern_string(4, 0), "0000");
        assert_eq!(pattern_bit(4, 0), 8);
    }

    #[test]
    fn kcbs_restriction() {
        let k = kcbs();
        let a: Assignment = "10000".parse().unwrap();
        let b = deterministic_behavior(&k, &a).unwrap();
        // context 0 = {0,1}, context 4 = {4,0}
        assert_eq!(b.probability(0, 0b10), &int(1));
        assert_eq!(b.probability(4, 0b01), &int(1));
        assert_eq!(b.len(), 20);
    }

    #[test]
    fn twin_zero_assignment() {
        let t = twin();
        let b = deterministic_behavior(&t, &Assignment::zeros(10)).unwrap();
        for c in 0..5 {
            assert_eq!(b.probability(c, 0), &int(1));
        }
        assert!(deterministic_behavior(&t, &Assignment::zeros(9)).is_err());
    }

    #[test]
    fn single_context_geometry() {
        let s = single();
        assert_eq!(polytope_dimension(&s).unwrap(), 1);
        assert_eq!(polytope_dimension_in(&s, CoordinateSpace::Full).unwrap(), 1);
        let cert = facet_check(&s).unwrap();
        assert_eq!(cert.coordinates, 1);
        assert_eq!(cert.vertices, 2);
        assert_eq!(cert.saturating, 1);
        assert_eq!(cert.face_dim, 0);
        assert_eq!(cert.verdict, Verdict::Facet);
    }

    #[test]
    fn bareiss_examples() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(m(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        assert_eq!(
            bareiss_rank(m(&[&[2, 3, 5], &[7, 11, 13], &[17, 19, 23]])),
            3
        );
        assert_eq!(bareiss_rank(Vec::new()), 0);
    }

    #[test]
    fn wrong_bounds_are_reported() {
        let mut k = kcbs();
        k.bounds.nchv = Some(Bound::Exact(ratio(3, 1)));
        assert!(matches!(
            facet_check(&k),
            Err(Error::NoSaturatingVertex { .. })
        ));
        k.bounds.nchv = Some(Bound::Exact(ratio(3, 2)));
        assert!(matches!(facet_check(&k), Err(Error::BoundViolated { .. })));
    }

    #[test]
    fn coordinate_spaces() {
        let k = kcbs();
        assert_eq!(coordinate_indices(&k, CoordinateSpace::Full).len(), 20);
        assert_eq!(coordinate_indices(&k, CoordinateSpace::Events)[..2], [1, 2]);
        assert_eq!(
            "full".parse::<CoordinateSpace>().unwrap(),
            CoordinateSpace::Full
        );
        assert!("other".parse::<CoordinateSpace>().is_err());
    }

    #[test]
    fn behavior_validation() {
        assert!(Behavior::new(vec![1], vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert!(Behavior::new(vec![1], vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(Behavior::new(vec![1], vec![int(1)]).is_err());
    }
}
