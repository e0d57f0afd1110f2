//! Full transformations of the chain `[n]` and the predicates that carve
//! out the contraction families.
//!
//! A [`Transformation`] is a total map of `{1, ..., n}` stored as its image
//! list. Composition is left-to-right: `x(αβ) = (xα)β`. Values are
//! immutable after construction and every operation here is pure.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported degree. Image values are stored as `u8`, and the
/// constructive enumerators are only meant for desk-scale degrees anyway.
pub const MAX_DEGREE: usize = 255;

/// A full transformation of `[n]`, written on the right: entry `x-1` of
/// `images` is `xα`, 1-based.
///
/// Equality, hashing and ordering derive from the image list; the derived
/// `Ord` is exactly the lexicographic order used as the canonical order
/// everywhere determinism matters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<u8>,
}

impl Transformation {
    /// Validating constructor: `images` must have length `n` with every
    /// entry in `1..=n`.
    pub fn new(n: usize, images: &[usize]) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        if images.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                got: images.len(),
            });
        }
        let mut packed = Vec::with_capacity(n);
        for &v in images {
            if v < 1 || v > n {
                return Err(Error::OutOfRange {
                    value: v,
                    degree: n,
                });
            }
            packed.push(v as u8);
        }
        Ok(Self { images: packed })
    }

    /// Construction from already-validated 1-based bytes.
    pub(crate) fn from_packed(images: Vec<u8>) -> Self {
        debug_assert!(!images.is_empty());
        debug_assert!(images
            .iter()
            .all(|&v| v >= 1 && (v as usize) <= images.len()));
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `xα` for 1-based `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    /// The image list as 1-based values.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    /// `x ↦ x`.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        Ok(Self::from_packed((1..=n as u8).collect()))
    }

    /// `x ↦ n + 1 - x`, the unique order-reversing isometry.
    pub fn reversal(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        Ok(Self::from_packed((1..=n as u8).rev().collect()))
    }

    /// `x ↦ c`.
    pub fn constant(n: usize, c: usize) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        if c < 1 || c > n {
            return Err(Error::OutOfRange {
                value: c,
                degree: n,
            });
        }
        Ok(Self::from_packed(vec![c as u8; n]))
    }

    /// Left-to-right composition: `x(αβ) = (xα)β`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Self::from_packed(
            self.images
                .iter()
                .map(|&v| other.images[v as usize - 1])
                .collect(),
        ))
    }

    /// `α` followed by the reversal: `x ↦ n + 1 - xα`.
    ///
    /// This sends order-preserving maps to order-reversing maps with the
    /// same kernel, and is an involution.
    pub fn star(&self) -> Self {
        let n = self.degree() as u8;
        Self::from_packed(self.images.iter().map(|&v| n + 1 - v).collect())
    }

    /// Sorted image set, 1-based.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        for &v in &self.images {
            seen[v as usize - 1] = true;
        }
        (1..=self.degree()).filter(|&x| seen[x - 1]).collect()
    }

    /// `|Im α|`, also called the height of `α`.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for &v in &self.images {
            if !seen[v as usize - 1] {
                seen[v as usize - 1] = true;
                count += 1;
            }
        }
        count
    }

    /// Number of fixed points.
    pub fn fix(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| v as usize == i + 1)
            .count()
    }

    /// The partition of `[n]` into preimage classes.
    pub fn kernel(&self) -> KernelPartition {
        let n = self.degree();
        let mut by_value: Vec<Vec<u8>> = vec![Vec::new(); n];
        for x in 1..=n {
            by_value[self.apply(x) - 1].push(x as u8);
        }
        let mut blocks: Vec<Vec<u8>> = by_value.into_iter().filter(|b| !b.is_empty()).collect();
        // Preimage classes are grouped by image value; reorder by least
        // element to meet the canonical block order.
        blocks.sort_by_key(|b| b[0]);
        KernelPartition { degree: n, blocks }
    }

    /// Kernel, image, rank and fix in one pass.
    pub fn analyze(&self) -> Analysis {
        Analysis {
            kernel: self.kernel(),
            image: self.image(),
            rank: self.rank(),
            fix: self.fix(),
        }
    }

    pub fn is_order_preserving(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_order_reversing(&self) -> bool {
        self.images.windows(2).all(|w| w[0] >= w[1])
    }

    /// `|xα - yα| ≤ |x - y|` for all pairs.
    pub fn is_contraction(&self) -> bool {
        let n = self.degree();
        for x in 0..n {
            for y in (x + 1)..n {
                let d = (self.images[x] as i32 - self.images[y] as i32).abs();
                if d > (y - x) as i32 {
                    return false;
                }
            }
        }
        true
    }

    /// `|xα - yα| = |x - y|` for all pairs.
    pub fn is_isometry(&self) -> bool {
        let n = self.degree();
        for x in 0..n {
            for y in (x + 1)..n {
                let d = (self.images[x] as i32 - self.images[y] as i32).abs();
                if d != (y - x) as i32 {
                    return false;
                }
            }
        }
        true
    }

    /// `α² = α`, equivalently: every image point is fixed.
    pub fn is_idempotent(&self) -> bool {
        self.images
            .iter()
            .all(|&v| self.images[v as usize - 1] == v)
    }

    /// All five predicate flags, each the literal universally quantified
    /// check over the definition.
    pub fn classify(&self) -> PropertyFlags {
        PropertyFlags {
            order_preserving: self.is_order_preserving(),
            order_reversing: self.is_order_reversing(),
            contraction: self.is_contraction(),
            isometry: self.is_isometry(),
            idempotent: self.is_idempotent(),
        }
    }
}

impl fmt::Display for Transformation {
    /// The literal grammar `[i1,i2,...,in]` used as the wire format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Transformation {
    type Err = Error;

    /// Parses the literal grammar `[i1,i2,...,in]`; whitespace around
    /// tokens is insignificant.
    fn from_str(text: &str) -> Result<Self> {
        let body = text
            .trim()
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| Error::Syntax(format!("expected [i1,...,in], got {text:?}")))?;
        let mut images = Vec::new();
        for token in body.split(',') {
            let token = token.trim();
            let value: usize = token
                .parse()
                .map_err(|_| Error::Syntax(format!("bad image value {token:?} in {text:?}")))?;
            images.push(value);
        }
        Transformation::new(images.len(), &images)
    }
}

/// The named distinguished maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Identity,
    Reversal,
    Constant(usize),
}

/// Builds the identity, the reversal `x ↦ n + 1 - x`, or a constant map.
pub fn special(n: usize, kind: SpecialKind) -> Result<Transformation> {
    match kind {
        SpecialKind::Identity => Transformation::identity(n),
        SpecialKind::Reversal => Transformation::reversal(n),
        SpecialKind::Constant(c) => Transformation::constant(n, c),
    }
}

/// Result of [`Transformation::analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub kernel: KernelPartition,
    pub image: Vec<usize>,
    pub rank: usize,
    pub fix: usize,
}

/// Predicate flags for a single transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyFlags {
    pub order_preserving: bool,
    pub order_reversing: bool,
    pub contraction: bool,
    pub isometry: bool,
    pub idempotent: bool,
}

/// An ordered partition of `[n]` into nonempty blocks, sorted by least
/// element. Kernels of transformations always satisfy this shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelPartition {
    degree: usize,
    blocks: Vec<Vec<u8>>,
}

impl KernelPartition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks as 1-based values, in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Every transversal (one point per block), with its convexity and
    /// admissibility flags, in odometer order over ascending block
    /// elements.
    pub fn transversals(&self) -> Vec<Transversal> {
        let mut out = Vec::new();
        let mut choice = vec![0usize; self.blocks.len()];
        loop {
            let points: Vec<u8> = self
                .blocks
                .iter()
                .zip(&choice)
                .map(|(block, &i)| block[i])
                .collect();
            out.push(self.transversal_info(&points));
            // odometer increment
            let mut k = self.blocks.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if choice[k] + 1 < self.blocks[k].len() {
                    choice[k] += 1;
                    for c in choice.iter_mut().skip(k + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    fn transversal_info(&self, points: &[u8]) -> Transversal {
        let mut sorted: Vec<usize> = points.iter().map(|&v| v as usize).collect();
        sorted.sort_unstable();
        let convex = sorted[sorted.len() - 1] - sorted[0] + 1 == sorted.len();
        // Collapse each block onto its chosen point and test the
        // contraction predicate on the induced full map.
        let mut images = vec![0u8; self.degree];
        for (block, &point) in self.blocks.iter().zip(points) {
            for &x in block {
                images[x as usize - 1] = point;
            }
        }
        let induced = Transformation::from_packed(images);
        Transversal {
            points: sorted,
            convex,
            admissible: induced.is_contraction(),
        }
    }
}

/// One transversal of a kernel partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    /// Chosen points, ascending, 1-based.
    pub points: Vec<usize>,
    /// Whether the points form an interval of `[n]`.
    pub convex: bool,
    /// Whether collapsing each block to its point is a contraction.
    pub admissible: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.len(), images).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert_eq!(t(&[1, 1, 2, 3]).rank(), 3);
        assert!(matches!(
            Transformation::new(3, &[1, 2]),
            Err(Error::WrongLength {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            Transformation::new(2, &[0, 1]),
            Err(Error::OutOfRange {
                value: 0,
                degree: 2
            })
        ));
        assert!(matches!(
            Transformation::new(0, &[]),
            Err(Error::UnsupportedDegree(0))
        ));
        assert!(matches!(
            Transformation::new(300, &[1; 300]),
            Err(Error::UnsupportedDegree(300))
        ));
    }

    #[test]
    fn composition_is_left_to_right() {
        let id = Transformation::identity(4).unwrap();
        let a = t(&[1, 1, 2, 3]);
        assert_eq!(id.compose(&a).unwrap(), a);
        // tau * eta = delta at n = 4, p = 2
        let tau = t(&[3, 4, 4, 4]);
        let eta = t(&[1, 1, 1, 2]);
        assert_eq!(tau.compose(&eta).unwrap(), t(&[1, 2, 2, 2]));
        assert_eq!(
            t(&[1, 1, 2, 3]).compose(&t(&[2, 3, 4, 4])).unwrap(),
            t(&[2, 2, 3, 4])
        );
        assert!(matches!(
            t(&[1, 2]).compose(&t(&[1, 2, 3])),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn analyze_reports_kernel_image_rank_fix() {
        let a = t(&[1, 2, 2, 2]).analyze();
        assert_eq!(a.kernel.blocks(), vec![vec![1], vec![2, 3, 4]]);
        assert_eq!(a.image, vec![1, 2]);
        assert_eq!(a.rank, 2);
        assert_eq!(a.fix, 2);

        let id = Transformation::identity(4).unwrap().analyze();
        assert_eq!(id.kernel.block_count(), 4);
        assert_eq!(id.rank, 4);
        assert_eq!(id.fix, 4);

        // idempotent with fix = rank
        assert_eq!(t(&[2, 2, 3, 4]).fix(), 3);
        assert!(t(&[2, 2, 3, 4]).is_idempotent());
    }

    #[test]
    fn kernel_blocks_are_min_ordered_for_reversing_maps() {
        let k = t(&[2, 1]).kernel();
        assert_eq!(k.blocks(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn classify_flags() {
        let id = Transformation::identity(4).unwrap().classify();
        assert!(id.order_preserving && !id.order_reversing);
        assert!(id.contraction && id.isometry && id.idempotent);

        assert!(!t(&[1, 3, 2, 2]).is_contraction());

        let rev = t(&[4, 3, 2, 1]);
        let f = rev.classify();
        assert!(!f.order_preserving && f.order_reversing);
        assert!(f.contraction && f.isometry && !f.idempotent);
        assert_eq!(
            rev.compose(&rev).unwrap(),
            Transformation::identity(4).unwrap()
        );
    }

    #[test]
    fn special_maps() {
        assert_eq!(special(4, SpecialKind::Identity).unwrap(), t(&[1, 2, 3, 4]));
        assert_eq!(special(4, SpecialKind::Reversal).unwrap(), t(&[4, 3, 2, 1]));
        assert_eq!(special(3, SpecialKind::Constant(2)).unwrap(), t(&[2, 2, 2]));
        assert!(special(3, SpecialKind::Constant(4)).is_err());
    }

    #[test]
    fn star_is_reversal_composition() {
        assert_eq!(t(&[1, 2, 2, 2]).star(), t(&[4, 3, 3, 3]));
        assert_eq!(
            Transformation::identity(4).unwrap().star(),
            Transformation::reversal(4).unwrap()
        );
        let a = t(&[2, 2, 3, 4]);
        assert_eq!(a.star().star(), a);
    }

    #[test]
    fn transversal_enumeration() {
        // {{1,2},{3},{4}}: T = {2,3,4} is convex and admissible.
        let k = t(&[1, 1, 3, 4]).kernel();
        let ts = k.transversals();
        assert_eq!(ts.len(), 2);
        let good = ts.iter().find(|t| t.points == vec![2, 3, 4]).unwrap();
        assert!(good.convex && good.admissible);

        // {{1},{2,3},{4}}: no convex transversal.
        let k = t(&[1, 2, 2, 4]).kernel();
        assert!(k.transversals().iter().all(|t| !t.convex));

        // single block: all three singleton transversals convex+admissible
        let k = t(&[2, 2, 2]).kernel();
        let ts = k.transversals();
        assert_eq!(ts.len(), 3);
        assert!(ts.iter().all(|t| t.convex && t.admissible));
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Transformation>();
        assert_send_sync::<KernelPartition>();
        assert_send_sync::<PropertyFlags>();
    }

    #[test]
    fn literal_round_trip() {
        let a: Transformation = "[1,2,2,2]".parse().unwrap();
        assert_eq!(a, t(&[1, 2, 2, 2]));
        assert!(matches!(
            "[1,2,x]".parse::<Transformation>(),
            Err(Error::Syntax(_))
        ));
        assert!("1,2,2".parse::<Transformation>().is_err());
        let b: Transformation = "[2,2,3,4]".parse().unwrap();
        assert_eq!(b.to_string(), "[2,2,3,4]");
        assert!(matches!(
            "[1,2,9]".parse::<Transformation>(),
            Err(Error::OutOfRange {
                value: 9,
                degree: 3
            })
        ));
    }
}
