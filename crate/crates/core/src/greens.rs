//! Green's relations on a family, computed two independent ways, plus
//! structural checks (closure under composition, regularity,
//! L-unipotency).
//!
//! [`greens_by_invariants`] groups by image sets and kernel partitions.
//! [`greens_abstract`] works from principal ideals of the monoid `S¹`
//! obtained by adjoining an identity, and serves as the oracle for the
//! invariant route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySet;
use crate::transform::Transformation;

/// Partitions of a family's element indices into R/L/H/D classes,
/// labeled as in the transformation-family literature: `r_classes`
/// group elements sharing an image, `l_classes` elements sharing a
/// kernel.
///
/// Classes are canonicalized: indices ascending inside each class,
/// classes ordered by least index. H refines R and L; D coarsens both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreensStructure {
    pub r_classes: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub h_classes: Vec<Vec<usize>>,
    pub d_classes: Vec<Vec<usize>>,
}

/// Groups `0..len` by a key function, canonicalized.
fn partition_by_key<K: Ord>(len: usize, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let mut keyed: Vec<(K, usize)> = (0..len).map(|i| (key(i), i)).collect();
    keyed.sort();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut iter = keyed.into_iter();
    if let Some((first_key, first_idx)) = iter.next() {
        let mut current_key = first_key;
        let mut current = vec![first_idx];
        for (k, i) in iter {
            if k == current_key {
                current.push(i);
            } else {
                classes.push(std::mem::take(&mut current));
                current.push(i);
                current_key = k;
            }
        }
        classes.push(current);
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Meet of two partitions: classes of the pairwise intersections.
fn refine(a: &[Vec<usize>], b: &[Vec<usize>], len: usize) -> Vec<Vec<usize>> {
    let mut class_of_a = vec![0usize; len];
    for (ci, class) in a.iter().enumerate() {
        for &i in class {
            class_of_a[i] = ci;
        }
    }
    let mut class_of_b = vec![0usize; len];
    for (ci, class) in b.iter().enumerate() {
        for &i in class {
            class_of_b[i] = ci;
        }
    }
    partition_by_key(len, |i| (class_of_a[i], class_of_b[i]))
}

/// Join of two partitions: transitive closure of their union, via
/// union-find.
fn join(a: &[Vec<usize>], b: &[Vec<usize>], len: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..len).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for class in a.iter().chain(b) {
        for w in class.windows(2) {
            let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let roots: Vec<usize> = (0..len).map(|i| find(&mut parent, i)).collect();
    partition_by_key(len, |i| roots[i])
}

/// R-classes by image set, L-classes by kernel partition, H as their
/// meet, D as their join inside the family.
pub fn greens_by_invariants(s: &FamilySet) -> GreensStructure {
    let len = s.len();
    let r_classes = partition_by_key(len, |i| s.elements()[i].image());
    let l_classes = partition_by_key(len, |i| s.elements()[i].kernel());
    let h_classes = refine(&r_classes, &l_classes, len);
    let d_classes = join(&r_classes, &l_classes, len);
    GreensStructure {
        r_classes,
        l_classes,
        h_classes,
        d_classes,
    }
}

/// Checks `S · S ⊆ S`, returning a witness product that escapes.
fn closure_witness(s: &FamilySet) -> Option<(usize, usize, Transformation)> {
    for (i, a) in s.iter().enumerate() {
        for (j, b) in s.iter().enumerate() {
            let ab = a.compose(b).expect("common degree");
            if !s.contains(&ab) {
                return Some((i, j, ab));
            }
        }
    }
    None
}

/// Green's relations from principal ideals, brute force, with the
/// identity adjoined even when it is not a member. Requires `S` closed
/// under composition.
///
/// Note the pairing. Maps compose left to right, so multiplying on the
/// left preserves images: the principal left ideals `S¹α` induce the
/// same-image classes, and the right ideals `αS¹` the same-kernel
/// classes. This crate follows the labeling convention of the families
/// it studies and exposes same-image classes as `r_classes`, so here
/// `r_classes` come from left ideals and `l_classes` from right ideals.
pub fn greens_abstract(s: &FamilySet) -> Result<GreensStructure> {
    if let Some((i, j, ab)) = closure_witness(s) {
        return Err(Error::NotClosed {
            left: s.elements()[i].to_string(),
            right: s.elements()[j].to_string(),
            product: ab.to_string(),
        });
    }
    let len = s.len();
    // S¹α = {α} ∪ {σα : σ ∈ S}, as a sorted index set into S.
    let left_ideal = |i: usize| -> Vec<usize> {
        let alpha = &s.elements()[i];
        let mut ideal: Vec<usize> = s
            .iter()
            .map(|sigma| {
                s.index_of(&sigma.compose(alpha).expect("common degree"))
                    .expect("closed")
            })
            .collect();
        ideal.push(i);
        ideal.sort_unstable();
        ideal.dedup();
        ideal
    };
    let right_ideal = |i: usize| -> Vec<usize> {
        let alpha = &s.elements()[i];
        let mut ideal: Vec<usize> = s
            .iter()
            .map(|sigma| {
                s.index_of(&alpha.compose(sigma).expect("common degree"))
                    .expect("closed")
            })
            .collect();
        ideal.push(i);
        ideal.sort_unstable();
        ideal.dedup();
        ideal
    };
    let r_classes = partition_by_key(len, left_ideal);
    let l_classes = partition_by_key(len, right_ideal);
    let h_classes = refine(&r_classes, &l_classes, len);
    let d_classes = join(&r_classes, &l_classes, len);
    Ok(GreensStructure {
        r_classes,
        l_classes,
        h_classes,
        d_classes,
    })
}

/// The subset `{α ∈ S : αβα = α for some β ∈ S}`.
pub fn regular_elements(s: &FamilySet) -> FamilySet {
    let regular: Vec<Transformation> = s
        .iter()
        .filter(|alpha| {
            s.iter().any(|beta| {
                let aba = alpha
                    .compose(beta)
                    .and_then(|ab| ab.compose(alpha))
                    .expect("common degree");
                aba == **alpha
            })
        })
        .cloned()
        .collect();
    FamilySet::from_sorted(None, s.degree(), regular)
}

/// A counterexample backing a false flag in a [`StructureReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `left * right` lands outside the set.
    NotClosed {
        left: String,
        right: String,
        product: String,
    },
    /// No `β` in the set satisfies `αβα = α`.
    NotRegular { element: String },
    /// A same-image class holding a number of idempotents different
    /// from one.
    NotLUnipotent {
        representative: String,
        idempotents: Vec<String>,
    },
}

/// Structural checks over one family. Every false flag carries at least
/// one witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub family: String,
    pub n: usize,
    pub size: usize,
    pub closed: bool,
    pub all_regular: bool,
    /// Whether every same-image class contains exactly one idempotent.
    /// With right-action composition the same-image classes are the
    /// classical L-classes, hence the name. The same-kernel classes are
    /// never unipotent past degree one: all constants are idempotent and
    /// share one kernel.
    pub l_unipotent: bool,
    pub idempotent_count: usize,
    pub witnesses: Vec<Witness>,
}

impl StructureReport {
    /// Flat JSON record, with transformations in the literal grammar.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs all structural checks on `s`.
pub fn structure_report(s: &FamilySet) -> StructureReport {
    let mut witnesses = Vec::new();

    let closed = match closure_witness(s) {
        None => true,
        Some((i, j, ab)) => {
            witnesses.push(Witness::NotClosed {
                left: s.elements()[i].to_string(),
                right: s.elements()[j].to_string(),
                product: ab.to_string(),
            });
            false
        }
    };

    let regular = regular_elements(s);
    let all_regular = regular.len() == s.len();
    if !all_regular {
        for alpha in s.iter().filter(|a| !regular.contains(a)) {
            witnesses.push(Witness::NotRegular {
                element: alpha.to_string(),
            });
        }
    }

    let idempotent_count = s.iter().filter(|t| t.is_idempotent()).count();

    // Unipotency at the level of same-image classes.
    let mut l_unipotent = true;
    let structure = greens_by_invariants(s);
    for class in &structure.r_classes {
        let idempotents: Vec<String> = class
            .iter()
            .map(|&i| &s.elements()[i])
            .filter(|t| t.is_idempotent())
            .map(|t| t.to_string())
            .collect();
        if idempotents.len() != 1 {
            l_unipotent = false;
            witnesses.push(Witness::NotLUnipotent {
                representative: s.elements()[class[0]].to_string(),
                idempotents,
            });
        }
    }

    StructureReport {
        family: s.label(),
        n: s.degree(),
        size: s.len(),
        closed,
        all_regular,
        l_unipotent,
        idempotent_count,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate, EnumerateOptions, FamilyId, Method};
    use crate::transform::Transformation;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.len(), images).unwrap()
    }

    fn fam(spec: &str, n: usize) -> FamilySet {
        enumerate(
            FamilyId::parse(spec).unwrap(),
            n,
            Method::Filter,
            EnumerateOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn invariant_classes_on_reg_orct_4() {
        let s = fam("reg-orct", 4);
        let g = greens_by_invariants(&s);
        let a = s.index_of(&t(&[1, 2, 2, 2])).unwrap();
        let b = s.index_of(&t(&[2, 3, 3, 3])).unwrap();
        let same = |classes: &[Vec<usize>], x: usize, y: usize| {
            classes.iter().any(|c| c.contains(&x) && c.contains(&y))
        };
        assert!(same(&g.l_classes, a, b));
        assert!(!same(&g.r_classes, a, b));
    }

    #[test]
    fn singleton_family_is_one_class() {
        let s =
            FamilySet::from_elements(None, 3, vec![Transformation::identity(3).unwrap()]).unwrap();
        let g = greens_by_invariants(&s);
        assert_eq!(g.r_classes, vec![vec![0]]);
        assert_eq!(g.l_classes, vec![vec![0]]);
        assert_eq!(g.h_classes, vec![vec![0]]);
        assert_eq!(g.d_classes, vec![vec![0]]);
    }

    #[test]
    fn kp_has_square_grid_of_classes() {
        for (n, p) in [(4usize, 2usize), (4, 3), (5, 3)] {
            let kp = enumerate(
                FamilyId::parse(&format!("k:{p}")).unwrap(),
                n,
                Method::Construct,
                EnumerateOptions::default(),
            )
            .unwrap();
            let g = greens_by_invariants(&kp);
            assert_eq!(g.r_classes.len(), n - p + 1);
            assert_eq!(g.l_classes.len(), n - p + 1);
        }
    }

    #[test]
    fn abstract_agrees_with_invariants_on_reg_orct_4() {
        let s = fam("reg-orct", 4);
        let by_inv = greens_by_invariants(&s);
        let by_ideal = greens_abstract(&s).unwrap();
        assert_eq!(by_ideal.r_classes, by_inv.r_classes);
        assert_eq!(by_ideal.l_classes, by_inv.l_classes);
    }

    #[test]
    fn abstract_classes_on_the_band() {
        let s = fam("e-orct", 3);
        let g = greens_abstract(&s).unwrap();
        // an idempotent is determined by its image window, so the
        // same-image classes are singletons
        assert!(g.r_classes.iter().all(|c| c.len() == 1));
        // while all three constants share the one-block kernel
        assert!(g.l_classes.iter().any(|c| c.len() == 3));
    }

    #[test]
    fn abstract_rejects_non_closed_sets() {
        let s =
            FamilySet::from_elements(None, 4, vec![t(&[2, 3, 4, 4]), t(&[1, 1, 2, 3])]).unwrap();
        assert!(matches!(greens_abstract(&s), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn regular_elements_of_oct_4() {
        let oct = fam("oct", 4);
        assert_eq!(oct.len(), 20);
        let reg = regular_elements(&oct);
        assert_eq!(reg.len(), 18);
        assert!(!reg.contains(&t(&[1, 2, 2, 3])));
        assert!(!reg.contains(&t(&[2, 3, 3, 4])));

        let oct3 = fam("oct", 3);
        assert_eq!(regular_elements(&oct3).len(), 8);

        let single =
            FamilySet::from_elements(None, 4, vec![Transformation::identity(4).unwrap()]).unwrap();
        assert_eq!(regular_elements(&single).len(), 1);
    }

    #[test]
    fn structure_of_reg_orct_4() {
        let report = structure_report(&fam("reg-orct", 4));
        assert!(report.closed);
        assert!(report.all_regular);
        assert!(report.l_unipotent);
        assert_eq!(report.idempotent_count, 10);
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn kernel_classes_are_not_unipotent() {
        // all constants are idempotent and share the one-block kernel, so
        // unipotency can only hold image-classwise
        let s = fam("reg-orct", 3);
        let g = greens_by_invariants(&s);
        let constants_class = g
            .l_classes
            .iter()
            .find(|c| s.elements()[c[0]].rank() == 1)
            .unwrap();
        let idempotents = constants_class
            .iter()
            .filter(|&&i| s.elements()[i].is_idempotent())
            .count();
        assert_eq!(idempotents, 3);
    }

    #[test]
    fn structure_of_e_orct_4() {
        let report = structure_report(&fam("e-orct", 4));
        assert!(report.closed);
        assert!(report.all_regular);
        assert_eq!(report.idempotent_count, 10);
    }

    #[test]
    fn structure_of_oct_4_sees_non_regular_witness() {
        let report = structure_report(&fam("oct", 4));
        assert!(report.closed);
        assert!(!report.all_regular);
        assert!(report
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::NotRegular { element } if element == "[1,2,2,3]")));
    }

    #[test]
    fn report_serializes_flat() {
        let json = structure_report(&fam("reg-orct", 2)).to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["closed"], serde_json::Value::Bool(true));
        assert_eq!(value["idempotent_count"], serde_json::json!(3));
    }
}
