//! The named families of full contractions, each constructible two
//! independent ways: by filtering all `n^n` maps against the defining
//! predicates (the oracle route), and by the closed constructive forms
//! (grids of kernel/image shifts, interval idempotents, starred copies).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transform::Transformation;

/// Family tags. `K`, `KStar`, `J`, `E`, `L`, `M` take a height parameter
/// `p`; the rest do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    /// All full contractions.
    Ct,
    /// Order-preserving full contractions.
    Oct,
    /// Order-preserving or order-reversing full contractions.
    Orct,
    /// Regular elements of `Oct`.
    RegOct,
    /// Regular elements of `Orct`.
    RegOrct,
    /// Idempotents of `Oct`.
    EOct,
    /// Idempotents of `Orct`.
    EOrct,
    /// Regular order-preserving elements of height exactly `p`.
    K,
    /// Order-reversing elements of height exactly `p` (regular ambient).
    KStar,
    /// Regular order-preserving-or-reversing elements of height exactly `p`.
    J,
    /// Idempotents of height exactly `p`.
    E,
    /// Regular order-preserving elements of height at most `p`.
    L,
    /// Regular order-preserving-or-reversing elements of height at most `p`.
    M,
}

impl FamilyTag {
    pub fn requires_p(self) -> bool {
        matches!(
            self,
            FamilyTag::K
                | FamilyTag::KStar
                | FamilyTag::J
                | FamilyTag::E
                | FamilyTag::L
                | FamilyTag::M
        )
    }

    fn spec_prefix(self) -> &'static str {
        match self {
            FamilyTag::Ct => "ct",
            FamilyTag::Oct => "oct",
            FamilyTag::Orct => "orct",
            FamilyTag::RegOct => "reg-oct",
            FamilyTag::RegOrct => "reg-orct",
            FamilyTag::EOct => "e-oct",
            FamilyTag::EOrct => "e-orct",
            FamilyTag::K => "k",
            FamilyTag::KStar => "k*",
            FamilyTag::J => "j",
            FamilyTag::E => "e",
            FamilyTag::L => "l",
            FamilyTag::M => "m",
        }
    }
}

/// A family descriptor: tag plus the height parameter where required.
///
/// The textual form doubles as the CLI family spec and as the cache key
/// component: `ct`, `oct`, `orct`, `reg-oct`, `reg-orct`, `e-oct`,
/// `e-orct`, `k:<p>`, `k*:<p>`, `j:<p>`, `e:<p>`, `l:<p>`, `m:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub tag: FamilyTag,
    pub p: Option<usize>,
}

impl FamilyId {
    pub fn new(tag: FamilyTag) -> Self {
        Self { tag, p: None }
    }

    pub fn with_p(tag: FamilyTag, p: usize) -> Self {
        Self { tag, p: Some(p) }
    }

    /// Parses a family spec string.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, p) = match spec.split_once(':') {
            Some((name, p_str)) => {
                let p: usize = p_str.trim().parse().map_err(|_| {
                    Error::Syntax(format!("bad height parameter in family spec {spec:?}"))
                })?;
                (name.trim(), Some(p))
            }
            None => (spec, None),
        };
        let tag = match name {
            "ct" => FamilyTag::Ct,
            "oct" => FamilyTag::Oct,
            "orct" => FamilyTag::Orct,
            "reg-oct" => FamilyTag::RegOct,
            "reg-orct" => FamilyTag::RegOrct,
            "e-oct" => FamilyTag::EOct,
            "e-orct" => FamilyTag::EOrct,
            "k" => FamilyTag::K,
            "k*" => FamilyTag::KStar,
            "j" => FamilyTag::J,
            "e" => FamilyTag::E,
            "l" => FamilyTag::L,
            "m" => FamilyTag::M,
            _ => return Err(Error::Syntax(format!("unknown family spec {spec:?}"))),
        };
        if tag.requires_p() != p.is_some() {
            return Err(Error::Syntax(format!(
                "family spec {spec:?}: height parameter {}",
                if tag.requires_p() {
                    "required"
                } else {
                    "not allowed"
                }
            )));
        }
        Ok(Self { tag, p })
    }

    fn check_p(&self, n: usize) -> Result<()> {
        if let Some(p) = self.p {
            if p < 1 || p > n {
                return Err(Error::BadParameter(format!(
                    "family {self}: p = {p} out of range 1..={n}"
                )));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.p {
            Some(p) => write!(f, "{}:{}", self.tag.spec_prefix(), p),
            None => write!(f, "{}", self.tag.spec_prefix()),
        }
    }
}

/// A finite set of transformations of common degree, kept deduplicated in
/// the canonical lexicographic order.
#[derive(Debug, Clone)]
pub struct FamilySet {
    id: Option<FamilyId>,
    n: usize,
    elements: Vec<Transformation>,
}

/// Equality is extensional: the `id` is a label, not part of the value.
impl PartialEq for FamilySet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for FamilySet {}

impl FamilySet {
    /// Builds a set from arbitrary elements: sorts, deduplicates, and
    /// checks the common degree.
    pub fn from_elements(
        id: Option<FamilyId>,
        n: usize,
        mut elements: Vec<Transformation>,
    ) -> Result<Self> {
        for t in &elements {
            if t.degree() != n {
                return Err(Error::DegreeMismatch(n, t.degree()));
            }
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { id, n, elements })
    }

    /// Internal constructor for already sorted, deduplicated elements.
    pub(crate) fn from_sorted(
        id: Option<FamilyId>,
        n: usize,
        elements: Vec<Transformation>,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { id, n, elements }
    }

    pub fn id(&self) -> Option<FamilyId> {
        self.id
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transformation> {
        self.elements.iter()
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.elements.binary_search(t).ok()
    }

    /// Elements of height exactly `p`, as a new set.
    pub fn rank_slice(&self, p: usize) -> FamilySet {
        let slice: Vec<Transformation> = self
            .elements
            .iter()
            .filter(|t| t.rank() == p)
            .cloned()
            .collect();
        FamilySet::from_sorted(None, self.n, slice)
    }

    /// Maximum height over the set; `None` when empty.
    pub fn max_rank(&self) -> Option<usize> {
        self.elements.iter().map(|t| t.rank()).max()
    }

    pub fn label(&self) -> String {
        match self.id {
            Some(id) => format!("{id}"),
            None => "ad-hoc".to_string(),
        }
    }
}

impl<'a> IntoIterator for &'a FamilySet {
    type Item = &'a Transformation;
    type IntoIter = std::slice::Iter<'a, Transformation>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Enumeration route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Filter all `n^n` maps against the defining predicates.
    Filter,
    /// Emit the closed constructive forms directly.
    Construct,
}

/// Scale policy for [`enumerate`].
#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Largest `n` for which the `n^n` filter sweep runs without the
    /// force flag.
    pub scale_ceiling: usize,
    /// Override the ceiling.
    pub force_scale: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            scale_ceiling: 8,
            force_scale: false,
        }
    }
}

/// Largest degree accepted by the constructive route.
const CONSTRUCT_CEILING: usize = 64;

/// Enumerates a family, either by the filter oracle or by the
/// constructive forms. Output order is canonical either way.
pub fn enumerate(
    id: FamilyId,
    n: usize,
    method: Method,
    opts: EnumerateOptions,
) -> Result<FamilySet> {
    if n == 0 {
        return Err(Error::UnsupportedDegree(n));
    }
    id.check_p(n)?;
    match method {
        Method::Filter => enumerate_filter(id, n, opts),
        Method::Construct => enumerate_construct(id, n),
    }
}

fn enumerate_filter(id: FamilyId, n: usize, opts: EnumerateOptions) -> Result<FamilySet> {
    let elements = match id.tag {
        FamilyTag::Ct => filter_maps(n, opts, slice_is_contraction)?,
        FamilyTag::Oct => oct_filter(n, opts)?,
        FamilyTag::Orct => orct_filter(n, opts)?,
        FamilyTag::RegOct => regular_subset(&oct_filter(n, opts)?),
        FamilyTag::RegOrct => regular_subset(&orct_filter(n, opts)?),
        FamilyTag::EOct => idempotent_subset(&oct_filter(n, opts)?),
        FamilyTag::EOrct => idempotent_subset(&orct_filter(n, opts)?),
        FamilyTag::K => by_rank(regular_subset(&oct_filter(n, opts)?), id.p.unwrap(), false),
        FamilyTag::J => by_rank(regular_subset(&orct_filter(n, opts)?), id.p.unwrap(), false),
        FamilyTag::KStar => {
            let jp = by_rank(regular_subset(&orct_filter(n, opts)?), id.p.unwrap(), false);
            jp.into_iter().filter(|t| t.is_order_reversing()).collect()
        }
        FamilyTag::E => by_rank(
            idempotent_subset(&orct_filter(n, opts)?),
            id.p.unwrap(),
            false,
        ),
        FamilyTag::L => by_rank(regular_subset(&oct_filter(n, opts)?), id.p.unwrap(), true),
        FamilyTag::M => by_rank(regular_subset(&orct_filter(n, opts)?), id.p.unwrap(), true),
    };
    Ok(FamilySet::from_sorted(Some(id), n, elements))
}

fn oct_filter(n: usize, opts: EnumerateOptions) -> Result<Vec<Transformation>> {
    filter_maps(n, opts, |im| {
        slice_is_sorted(im) && slice_is_contraction(im)
    })
}

fn orct_filter(n: usize, opts: EnumerateOptions) -> Result<Vec<Transformation>> {
    filter_maps(n, opts, |im| {
        (slice_is_sorted(im) || slice_is_reverse_sorted(im)) && slice_is_contraction(im)
    })
}

fn by_rank(elements: Vec<Transformation>, p: usize, at_most: bool) -> Vec<Transformation> {
    elements
        .into_iter()
        .filter(|t| {
            if at_most {
                t.rank() <= p
            } else {
                t.rank() == p
            }
        })
        .collect()
}

/// Elements `α` with some `β` in the same set satisfying `αβα = α`.
fn regular_subset(ambient: &[Transformation]) -> Vec<Transformation> {
    ambient
        .par_iter()
        .filter(|alpha| {
            ambient.iter().any(|beta| {
                let aba = alpha
                    .compose(beta)
                    .and_then(|ab| ab.compose(alpha))
                    .expect("common degree");
                aba == **alpha
            })
        })
        .cloned()
        .collect()
}

fn idempotent_subset(ambient: &[Transformation]) -> Vec<Transformation> {
    ambient
        .iter()
        .filter(|t| t.is_idempotent())
        .cloned()
        .collect()
}

/// Walks all `n^n` maps in lexicographic order and keeps those passing
/// `pred`. The index space is split across workers; the output order does
/// not depend on the worker count.
fn filter_maps<F>(n: usize, opts: EnumerateOptions, pred: F) -> Result<Vec<Transformation>>
where
    F: Fn(&[u8]) -> bool + Sync,
{
    if n > opts.scale_ceiling && !opts.force_scale {
        return Err(Error::ScaleRefusal {
            n,
            ceiling: opts.scale_ceiling,
        });
    }
    let total = (n as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::BadParameter(format!("n^n overflows at n = {n}")))?;
    const CHUNK: u64 = 1 << 16;
    let chunks = total.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<Transformation>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = total.min(lo + CHUNK);
            let mut buf = vec![0u8; n];
            let mut kept = Vec::new();
            decode_map(lo, n, &mut buf);
            let mut idx = lo;
            loop {
                if pred(&buf) {
                    kept.push(Transformation::from_packed(buf.clone()));
                }
                idx += 1;
                if idx >= hi {
                    break;
                }
                // lexicographic successor: increment the last digit
                let mut pos = n;
                loop {
                    pos -= 1;
                    if buf[pos] < n as u8 {
                        buf[pos] += 1;
                        for b in buf.iter_mut().skip(pos + 1) {
                            *b = 1;
                        }
                        break;
                    }
                }
            }
            kept
        })
        .collect();
    Ok(per_chunk.into_iter().flatten().collect())
}

/// Writes the base-`n` digits of `idx` (most significant first) as a map.
fn decode_map(idx: u64, n: usize, buf: &mut [u8]) {
    let mut rem = idx;
    for slot in (0..n).rev() {
        buf[slot] = (rem % n as u64) as u8 + 1;
        rem /= n as u64;
    }
}

fn slice_is_sorted(im: &[u8]) -> bool {
    im.windows(2).all(|w| w[0] <= w[1])
}

fn slice_is_reverse_sorted(im: &[u8]) -> bool {
    im.windows(2).all(|w| w[0] >= w[1])
}

fn slice_is_contraction(im: &[u8]) -> bool {
    let n = im.len();
    for x in 0..n {
        for y in (x + 1)..n {
            let d = (im[x] as i32 - im[y] as i32).abs();
            if d > (y - x) as i32 {
                return false;
            }
        }
    }
    true
}

fn enumerate_construct(id: FamilyId, n: usize) -> Result<FamilySet> {
    if n > CONSTRUCT_CEILING {
        return Err(Error::ScaleRefusal {
            n,
            ceiling: CONSTRUCT_CEILING,
        });
    }
    let elements = match id.tag {
        FamilyTag::Ct | FamilyTag::Oct | FamilyTag::Orct => {
            return Err(Error::UnsupportedMethod(id.to_string()))
        }
        FamilyTag::K => construct_k(n, id.p.unwrap()),
        FamilyTag::KStar => construct_k(n, id.p.unwrap())
            .into_iter()
            .map(|t| t.star())
            .collect(),
        FamilyTag::J => construct_j(n, id.p.unwrap()),
        FamilyTag::E => construct_e(n, id.p.unwrap()),
        FamilyTag::L => (1..=id.p.unwrap())
            .flat_map(|q| construct_k(n, q))
            .collect(),
        FamilyTag::M => (1..=id.p.unwrap())
            .flat_map(|q| construct_j(n, q))
            .collect(),
        FamilyTag::RegOct => (1..=n).flat_map(|q| construct_k(n, q)).collect(),
        FamilyTag::RegOrct => (1..=n).flat_map(|q| construct_j(n, q)).collect(),
        FamilyTag::EOct | FamilyTag::EOrct => (1..=n).flat_map(|q| construct_e(n, q)).collect(),
    };
    let mut elements = elements;
    elements.sort_unstable();
    elements.dedup();
    Ok(FamilySet::from_sorted(Some(id), n, elements))
}

/// The height-`p` grid: every kernel shift crossed with every image
/// shift. For `p = 1` the grid degenerates to the `n` constants.
fn construct_k(n: usize, p: usize) -> Vec<Transformation> {
    if p == 1 {
        return (1..=n)
            .map(|c| Transformation::constant(n, c).expect("valid constant"))
            .collect();
    }
    let shifts = n - p;
    let mut out = Vec::with_capacity((shifts + 1) * (shifts + 1));
    for c in 0..=shifts {
        for r in 0..=shifts {
            out.push(grid_element(n, p, c, r).expect("in-range grid shifts"));
        }
    }
    out
}

/// `J_p`: the grid together with its starred (order-reversing) copy.
/// The two coincide exactly at `p = 1`, where constants are both.
fn construct_j(n: usize, p: usize) -> Vec<Transformation> {
    let mut out = construct_k(n, p);
    out.extend(construct_k(n, p).into_iter().map(|t| t.star()));
    out
}

/// Height-`p` idempotents: one per convex image window.
fn construct_e(n: usize, p: usize) -> Vec<Transformation> {
    (1..=n - p + 1)
        .map(|i| idempotent_from(n, i, p - 1).expect("valid idempotent window"))
        .collect()
}

/// One cell of the height-`p` grid.
///
/// `kernel_shift` `c` selects the kernel
/// `({1..c+1}, c+2, ..., c+p-1, {c+p..n})` (the first and last blocks
/// absorb the slack) and `image_shift` `r` selects the image
/// `{r+1, ..., r+p}`. The element is the unique order-preserving map
/// between them.
pub fn grid_element(
    n: usize,
    p: usize,
    kernel_shift: usize,
    image_shift: usize,
) -> Result<Transformation> {
    if n == 0 || n > CONSTRUCT_CEILING {
        return Err(Error::UnsupportedDegree(n));
    }
    if p < 2 || p > n {
        return Err(Error::BadParameter(format!(
            "grid element needs 2 <= p <= n, got p = {p}, n = {n}"
        )));
    }
    let max_shift = n - p;
    if kernel_shift > max_shift || image_shift > max_shift {
        return Err(Error::BadParameter(format!(
            "grid shifts must lie in 0..={max_shift}, got kernel {kernel_shift}, image {image_shift}"
        )));
    }
    let c = kernel_shift;
    let r = image_shift;
    let images: Vec<u8> = (1..=n)
        .map(|x| {
            let block = if x <= c + 1 {
                1
            } else if x >= c + p {
                p
            } else {
                x - c
            };
            (block + r) as u8
        })
        .collect();
    Ok(Transformation::from_packed(images))
}

/// The six distinguished corner elements of the height-`p` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// Top-left: fat first kernel block, lowest image window.
    Eta,
    /// Top-right: fat last kernel block, lowest image window. Idempotent.
    Delta,
    /// Bottom-right: fat last kernel block, highest image window.
    Tau,
    EtaStar,
    DeltaStar,
    TauStar,
}

/// Builds a corner element. The starred corners keep the kernel of their
/// plain counterpart and reverse the image assignment.
pub fn corner(n: usize, p: usize, which: Corner) -> Result<Transformation> {
    if n < 2 {
        return Err(Error::BadParameter(format!(
            "corner elements need n >= 2, got n = {n}"
        )));
    }
    if p < 2 || p + 1 > n {
        return Err(Error::BadParameter(format!(
            "corner elements need 2 <= p <= n-1, got p = {p}, n = {n}"
        )));
    }
    let m = n - p;
    // Reversing the image assignment of grid (c, r) equals starring
    // grid (c, m - r).
    let t = match which {
        Corner::Eta => grid_element(n, p, m, 0)?,
        Corner::Delta => grid_element(n, p, 0, 0)?,
        Corner::Tau => grid_element(n, p, 0, m)?,
        Corner::EtaStar => grid_element(n, p, m, m)?.star(),
        Corner::DeltaStar => grid_element(n, p, 0, m)?.star(),
        Corner::TauStar => grid_element(n, p, 0, 0)?.star(),
    };
    Ok(t)
}

/// The interval idempotent `x ↦ clamp(x, i, i+j)`: collapses
/// `{1..i}` to `i`, fixes `i..i+j`, collapses `{i+j..n}` to `i+j`.
pub fn idempotent_from(n: usize, i: usize, j: usize) -> Result<Transformation> {
    if n == 0 || n > CONSTRUCT_CEILING {
        return Err(Error::UnsupportedDegree(n));
    }
    if i < 1 || i + j > n {
        return Err(Error::BadParameter(format!(
            "idempotent window needs 1 <= i and i + j <= n, got i = {i}, j = {j}, n = {n}"
        )));
    }
    let lo = i as u8;
    let hi = (i + j) as u8;
    Ok(Transformation::from_packed(
        (1..=n as u8).map(|x| x.clamp(lo, hi)).collect(),
    ))
}

/// Green's class selectors on a family, by the kernel/image
/// characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Equal image.
    R,
    /// Equal kernel.
    L,
}

/// The R-class (equal image) or L-class (equal kernel) of `t` inside
/// `family`. Errors if `t` is not a member.
pub fn class_of(t: &Transformation, family: &FamilySet, relation: Relation) -> Result<FamilySet> {
    if !family.contains(t) {
        return Err(Error::NotAMember {
            element: t.to_string(),
            family: family.label(),
        });
    }
    let picked: Vec<Transformation> = match relation {
        Relation::R => {
            let image = t.image();
            family
                .iter()
                .filter(|u| u.image() == image)
                .cloned()
                .collect()
        }
        Relation::L => {
            let kernel = t.kernel();
            family
                .iter()
                .filter(|u| u.kernel() == kernel)
                .cloned()
                .collect()
        }
    };
    Ok(FamilySet::from_sorted(None, family.degree(), picked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.len(), images).unwrap()
    }

    fn fam(spec: &str, n: usize, method: Method) -> FamilySet {
        enumerate(
            FamilyId::parse(spec).unwrap(),
            n,
            method,
            EnumerateOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn family_spec_round_trip() {
        for spec in [
            "ct", "oct", "orct", "reg-oct", "reg-orct", "e-oct", "e-orct", "k:3", "k*:2", "j:1",
            "e:2", "l:3", "m:4",
        ] {
            assert_eq!(FamilyId::parse(spec).unwrap().to_string(), spec);
        }
        assert!(FamilyId::parse("k").is_err());
        assert!(FamilyId::parse("oct:2").is_err());
        assert!(FamilyId::parse("xyz").is_err());
    }

    #[test]
    fn reg_oct_4_has_18_elements() {
        let by_filter = fam("reg-oct", 4, Method::Filter);
        assert_eq!(by_filter.len(), 18);
        assert_eq!(fam("reg-oct", 4, Method::Construct), by_filter);
    }

    #[test]
    fn reg_orct_2_is_all_four_maps() {
        let expected: Vec<Transformation> = [[1, 1], [1, 2], [2, 1], [2, 2]]
            .iter()
            .map(|im| t(im))
            .collect();
        assert_eq!(fam("reg-orct", 2, Method::Filter).elements(), &expected[..]);
        assert_eq!(
            fam("reg-orct", 2, Method::Construct).elements(),
            &expected[..]
        );
    }

    #[test]
    fn k3_of_4_grid() {
        let k3 = fam("k:3", 4, Method::Construct);
        let expected = [
            t(&[1, 1, 2, 3]),
            t(&[1, 2, 3, 3]),
            t(&[2, 2, 3, 4]),
            t(&[2, 3, 4, 4]),
        ];
        assert_eq!(k3.elements(), &expected[..]);
        assert_eq!(fam("k:3", 4, Method::Filter), k3);
        assert_eq!(k3.len(), (4 - 3 + 1) * (4 - 3 + 1));
    }

    #[test]
    fn e2_of_4_has_three_idempotents() {
        let e2 = fam("e:2", 4, Method::Construct);
        assert_eq!(e2.len(), 3);
        let images: Vec<Vec<usize>> = e2.iter().map(|t| t.image()).collect();
        assert_eq!(images, vec![vec![1, 2], vec![2, 3], vec![3, 4]]);
        assert_eq!(fam("e:2", 4, Method::Filter), e2);
    }

    #[test]
    fn construct_unsupported_for_predicate_families() {
        for spec in ["ct", "oct", "orct"] {
            let err = enumerate(
                FamilyId::parse(spec).unwrap(),
                3,
                Method::Construct,
                EnumerateOptions::default(),
            )
            .unwrap_err();
            assert!(matches!(err, Error::UnsupportedMethod(_)));
        }
    }

    #[test]
    fn scale_refusal_and_override() {
        let err = enumerate(
            FamilyId::parse("ct").unwrap(),
            9,
            Method::Filter,
            EnumerateOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ScaleRefusal { n: 9, .. }));
        // The construct route has no low ceiling.
        let k = enumerate(
            FamilyId::parse("k:9").unwrap(),
            10,
            Method::Construct,
            EnumerateOptions::default(),
        )
        .unwrap();
        assert_eq!(k.len(), 4);
        let err = enumerate(
            FamilyId::parse("k:60").unwrap(),
            65,
            Method::Construct,
            EnumerateOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ScaleRefusal { n: 65, ceiling: 64 }));
    }

    #[test]
    fn out_of_range_height_parameter() {
        let err = enumerate(
            FamilyId::parse("k:9").unwrap(),
            4,
            Method::Construct,
            EnumerateOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadParameter(_)));
        let err = enumerate(
            FamilyId::parse("e:0").unwrap(),
            4,
            Method::Filter,
            EnumerateOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BadParameter(_)));
    }

    #[test]
    fn grid_corners() {
        assert_eq!(grid_element(4, 3, 0, 0).unwrap(), t(&[1, 2, 3, 3]));
        assert_eq!(grid_element(4, 3, 1, 0).unwrap(), t(&[1, 1, 2, 3]));
        assert_eq!(grid_element(4, 2, 0, 2).unwrap(), t(&[3, 4, 4, 4]));
        assert_eq!(grid_element(4, 2, 2, 2).unwrap(), t(&[3, 3, 3, 4]));
        assert!(grid_element(4, 1, 0, 0).is_err());
        assert!(grid_element(4, 3, 2, 0).is_err());
    }

    #[test]
    fn corner_elements() {
        assert_eq!(corner(4, 2, Corner::Eta).unwrap(), t(&[1, 1, 1, 2]));
        assert_eq!(corner(4, 2, Corner::Delta).unwrap(), t(&[1, 2, 2, 2]));
        assert_eq!(corner(4, 2, Corner::Tau).unwrap(), t(&[3, 4, 4, 4]));
        assert_eq!(corner(4, 2, Corner::DeltaStar).unwrap(), t(&[2, 1, 1, 1]));
        assert_eq!(corner(4, 3, Corner::EtaStar).unwrap(), t(&[3, 3, 2, 1]));
        assert_eq!(corner(4, 2, Corner::TauStar).unwrap(), t(&[4, 3, 3, 3]));
        // tau * eta = delta
        let tau = corner(4, 2, Corner::Tau).unwrap();
        let eta = corner(4, 2, Corner::Eta).unwrap();
        assert_eq!(
            tau.compose(&eta).unwrap(),
            corner(4, 2, Corner::Delta).unwrap()
        );
        assert!(corner(4, 4, Corner::Eta).is_err());
        assert!(corner(1, 2, Corner::Eta).is_err());
    }

    #[test]
    fn idempotent_windows() {
        let e = idempotent_from(4, 2, 2).unwrap();
        assert_eq!(e, t(&[2, 2, 3, 4]));
        assert!(e.is_idempotent());
        assert_eq!(e.compose(&e).unwrap(), e);
        assert_eq!(
            idempotent_from(4, 1, 3).unwrap(),
            Transformation::identity(4).unwrap()
        );
        assert_eq!(idempotent_from(5, 3, 0).unwrap(), t(&[3, 3, 3, 3, 3]));
        assert!(idempotent_from(4, 3, 2).is_err());
    }

    #[test]
    fn classes_in_k3() {
        let k3 = fam("k:3", 4, Method::Construct);
        let eta = corner(4, 3, Corner::Eta).unwrap();
        let r_eta = class_of(&eta, &k3, Relation::R).unwrap();
        assert_eq!(r_eta.elements(), &[t(&[1, 1, 2, 3]), t(&[1, 2, 3, 3])][..]);

        let delta = corner(4, 3, Corner::Delta).unwrap();
        let l_delta = class_of(&delta, &k3, Relation::L).unwrap();
        assert_eq!(
            l_delta.elements(),
            &[t(&[1, 2, 3, 3]), t(&[2, 3, 4, 4])][..]
        );

        let single = FamilySet::from_elements(None, 4, vec![eta.clone()]).unwrap();
        assert_eq!(class_of(&eta, &single, Relation::R).unwrap().len(), 1);
        assert!(matches!(
            class_of(&delta, &single, Relation::R),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn degenerate_degree_one() {
        for spec in [
            "ct", "oct", "orct", "reg-oct", "reg-orct", "e-oct", "e-orct",
        ] {
            assert_eq!(fam(spec, 1, Method::Filter).len(), 1);
        }
        assert_eq!(fam("k:1", 1, Method::Construct).len(), 1);
        assert_eq!(fam("j:1", 1, Method::Construct).len(), 1);
    }

    #[test]
    fn k1_star_equals_k1() {
        let k1 = fam("k:1", 5, Method::Construct);
        let k1s = fam("k*:1", 5, Method::Construct);
        assert_eq!(k1, k1s);
        assert_eq!(k1.len(), 5);
        // disjoint for p >= 2
        let k2 = fam("k:2", 5, Method::Construct);
        let k2s = fam("k*:2", 5, Method::Construct);
        assert!(k2.iter().all(|t| !k2s.contains(t)));
    }
}
