//! Decompositions `rho_{n_1} + ... + rho_{n_p}` and supports of points.
//!
//! Block indices are 0-based throughout; index `q` refers to the `q`-th
//! summand after sorting the degrees in non-increasing order.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::FactoredElement;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("a representation needs at least one summand")]
    Empty,
    #[error("cannot parse representation {0:?}: expected `rho = n1+n2+...`")]
    Parse(String),
    #[error("every block scalar is zero")]
    EmptySupport,
    #[error("{found} scalars for {expected} summands")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

/// Maximal run `start..=end` of summands of equal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
    pub dim: usize,
}

impl Interval {
    pub fn parity(&self) -> Parity {
        Parity::of(self.dim)
    }

    pub fn contains(&self, q: usize) -> bool {
        (self.start..=self.end).contains(&q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDecomposition {
    dims: Vec<usize>,
    intervals: Vec<Interval>,
}

impl RepDecomposition {
    /// Sorts the degrees and computes the interval structure.
    pub fn new(dims_unsorted: &[usize]) -> Result<Self, RepError> {
        if dims_unsorted.is_empty() {
            return Err(RepError::Empty);
        }
        let mut dims = dims_unsorted.to_vec();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        let mut intervals: Vec<Interval> = Vec::new();
        for (q, &n) in dims.iter().enumerate() {
            match intervals.last_mut() {
                Some(iv) if iv.dim == n => iv.end = q,
                _ => intervals.push(Interval { start: q, end: q, dim: n }),
            }
        }
        Ok(Self { dims, intervals })
    }

    pub fn irreducible(n: usize) -> Self {
        Self::new(&[n]).expect("one summand")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims[q]
    }

    /// Number of summands `p`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Dimension of `V`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().map(|n| n + 1).sum()
    }

    /// Offset of block `q` inside the concatenated coordinate vector.
    pub fn offset(&self, q: usize) -> usize {
        self.dims[..q].iter().map(|n| n + 1).sum()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval_of(&self, q: usize) -> usize {
        self.intervals.iter().position(|iv| iv.contains(q)).expect("index in range")
    }

    /// The action is trivial unless some degree exceeds 1.
    pub fn is_nontrivial(&self) -> bool {
        self.dims.iter().any(|&n| n > 1)
    }

    /// Support of a point given which block scalars are nonzero.
    pub fn support(&self, nonzero: &[bool]) -> Result<Support, RepError> {
        if nonzero.len() != self.len() {
            return Err(RepError::LengthMismatch { expected: self.len(), found: nonzero.len() });
        }
        let q_plus = nonzero.iter().position(|&b| b).ok_or(RepError::EmptySupport)?;
        let q_minus = nonzero.iter().rposition(|&b| b).expect("nonempty");
        let intervals_hit: Vec<usize> = (0..self.intervals.len())
            .filter(|&s| {
                let iv = self.intervals[s];
                (iv.start..=iv.end).any(|q| nonzero[q])
            })
            .collect();
        let parities: Vec<Parity> = intervals_hit.iter().map(|&s| self.intervals[s].parity()).collect();
        let parity = if parities.iter().all(|&p| p == Parity::Even) {
            SupportParity::Even
        } else if parities.iter().all(|&p| p == Parity::Odd) {
            SupportParity::Odd
        } else {
            SupportParity::Mixed
        };
        let indices = (0..self.len()).filter(|&q| nonzero[q]).collect();
        Ok(Support { intervals_hit, indices, q_plus, q_minus, parity })
    }
}

impl fmt::Display for RepDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|n| n.to_string()).collect();
        write!(f, "rho = {}", parts.join("+"))
    }
}

/// Accepts `rho = 4+2`, `4+2` and `4,2`.
impl FromStr for RepDecomposition {
    type Err = RepError;

    fn from_str(s: &str) -> Result<Self, RepError> {
        let body = s.trim();
        let body = match body.strip_prefix("rho") {
            Some(rest) => rest.trim_start().strip_prefix('=').ok_or_else(|| RepError::Parse(s.into()))?,
            None => body,
        };
        let dims = body
            .split(['+', ','])
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| RepError::Parse(s.into()))?;
        Self::new(&dims)
    }
}

impl Serialize for RepDecomposition {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportParity {
    Even,
    Odd,
    Mixed,
}

/// The intervals carrying a nonzero block scalar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Support {
    pub intervals_hit: Vec<usize>,
    /// Blocks with nonzero scalar.
    pub indices: Vec<usize>,
    pub q_plus: usize,
    pub q_minus: usize,
    pub parity: SupportParity,
}

impl Support {
    /// `I_+`, the hit interval of greatest degree.
    pub fn top_interval(&self) -> usize {
        self.intervals_hit[0]
    }

    /// `I_-`, the hit interval of least degree.
    pub fn bottom_interval(&self) -> usize {
        *self.intervals_hit.last().expect("support is nonempty")
    }

    pub fn is_single_interval(&self) -> bool {
        self.intervals_hit.len() == 1
    }

    pub fn has_parity(&self) -> bool {
        self.parity != SupportParity::Mixed
    }

    /// `q_{2+}`: first hit block outside `I_+`.
    pub fn q2_plus(&self, rep: &RepDecomposition) -> Option<usize> {
        let top = rep.intervals()[self.top_interval()];
        self.indices.iter().copied().find(|&q| q > top.end)
    }

    /// `q_{2-}`: last hit block outside `I_-`.
    pub fn q2_minus(&self, rep: &RepDecomposition) -> Option<usize> {
        let bottom = rep.intervals()[self.bottom_interval()];
        self.indices.iter().copied().rev().find(|&q| q < bottom.start)
    }
}

pub fn support_of<S: Scalar>(x: &FactoredElement<S>) -> Result<Support, RepError> {
    x.rep().support(&x.nonzero_mask())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_sorts_and_groups() {
        let r = RepDecomposition::new(&[2]).unwrap();
        assert_eq!(r.intervals(), &[Interval { start: 0, end: 0, dim: 2 }]);

        let r = RepDecomposition::new(&[2, 4]).unwrap();
        assert_eq!(r.dims(), &[4, 2]);
        assert_eq!(r.intervals().len(), 2);
        assert!(r.intervals().iter().all(|iv| iv.parity() == Parity::Even));

        let r = RepDecomposition::new(&[3, 3, 1]).unwrap();
        assert_eq!(
            r.intervals(),
            &[Interval { start: 0, end: 1, dim: 3 }, Interval { start: 2, end: 2, dim: 1 }]
        );
        assert!(r.intervals().iter().all(|iv| iv.parity() == Parity::Odd));
    }

    #[test]
    fn empty_decomposition_is_an_error() {
        assert_eq!(RepDecomposition::new(&[]), Err(RepError::Empty));
    }

    #[test]
    fn support_examples() {
        let r: RepDecomposition = "rho = 4+2".parse().unwrap();
        let s = r.support(&[true, true]).unwrap();
        assert_eq!((s.q_plus, s.q_minus, s.parity), (0, 1, SupportParity::Even));
        assert_eq!(s.intervals_hit, vec![0, 1]);

        let r: RepDecomposition = "5+2".parse().unwrap();
        assert_eq!(r.support(&[true, true]).unwrap().parity, SupportParity::Mixed);

        let r: RepDecomposition = "4+4+2".parse().unwrap();
        let s = r.support(&[false, true, true]).unwrap();
        assert_eq!((s.q_plus, s.q_minus, s.top_interval()), (1, 2, 0));
        assert_eq!(r.support(&[false, false, false]), Err(RepError::EmptySupport));
    }

    #[test]
    fn second_indices_skip_the_extreme_intervals() {
        let r: RepDecomposition = "6+3+3+2".parse().unwrap();
        let s = r.support(&[true, true, true, true]).unwrap();
        assert_eq!(s.q2_plus(&r), Some(1));
        assert_eq!(s.q2_minus(&r), Some(2));
        let s = r.support(&[false, true, true, false]).unwrap();
        assert_eq!((s.q2_plus(&r), s.q2_minus(&r)), (None, None));
    }

    #[test]
    fn display_round_trips() {
        let r: RepDecomposition = "2+4".parse().unwrap();
        assert_eq!(r.to_string(), "rho = 4+2");
        assert_eq!(r.to_string().parse::<RepDecomposition>().unwrap(), r);
        assert!("rho 4".parse::<RepDecomposition>().is_err());
    }
}
