//! Generation of the bounded sublattice `L(R)` and Boolean subalgebra
//! `B(R)` of the power set of `J` from generator families, with the
//! distinct-column counting shortcut and canonical membership forms.

use crate::bits::{SetFamily, Subset};
use crate::context::IncidenceStructure;
use thiserror::Error;

/// Default cap on generated member counts.
pub const DEFAULT_MEMBER_CAP: usize = 1 << 20;

/// Grounds up to this size use a dense bitmap over the whole power set
/// during closure; larger grounds fall back to hashing.
const DENSE_GROUND: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetFamError {
    #[error("generator family must live over a nonempty ground set")]
    EmptyGround,
    #[error("member count exceeded the cap of {cap}")]
    SizeError { cap: usize },
    #[error("subset over ground {got} used where ground {expected} expected")]
    GroundMismatch { expected: usize, got: usize },
    #[error("2^{c} distinct Boolean combinations does not fit a machine count")]
    Overflow { c: usize },
}

/// Whether a family is closed as a bounded lattice or a Boolean algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyKind {
    Lattice,
    Boolean,
}

/// The least family of subsets containing the generators (and the bounds)
/// closed under the operations of its kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratedFamily {
    kind: FamilyKind,
    members: SetFamily,
    generators: SetFamily,
}

impl GeneratedFamily {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn ground(&self) -> usize {
        self.members.ground()
    }

    pub fn members(&self) -> &SetFamily {
        &self.members
    }

    pub fn generators(&self) -> &SetFamily {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.members.contains(s)
    }

    pub fn position(&self, s: &Subset) -> Option<usize> {
        self.members.position(s)
    }
}

fn close(
    ground: usize,
    seeds: Vec<Subset>,
    kind: FamilyKind,
    cap: usize,
) -> Result<Vec<Subset>, SetFamError> {
    if ground <= DENSE_GROUND {
        close_dense(ground, seeds, kind, cap)
    } else {
        close_hashed(ground, seeds, kind, cap)
    }
}

/// Worklist closure over single-word subsets with a dense membership
/// bitmap indexed by subset value.
fn close_dense(
    ground: usize,
    seeds: Vec<Subset>,
    kind: FamilyKind,
    cap: usize,
) -> Result<Vec<Subset>, SetFamError> {
    let full: u64 = if ground == 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    };
    let mut present = vec![0u64; (1usize << ground).div_ceil(64)];
    let mut words: Vec<u64> = Vec::new();
    let push = |w: u64, present: &mut Vec<u64>, words: &mut Vec<u64>| {
        let (blk, bit) = ((w / 64) as usize, w % 64);
        if present[blk] >> bit & 1 == 0 {
            present[blk] |= 1 << bit;
            words.push(w);
        }
    };
    for s in &seeds {
        push(s.as_word(), &mut present, &mut words);
    }
    let mut next = 0;
    while next < words.len() {
        if words.len() > cap {
            return Err(SetFamError::SizeError { cap });
        }
        let a = words[next];
        if kind == FamilyKind::Boolean {
            push(!a & full, &mut present, &mut words);
        }
        let snapshot = words.len();
        for k in 0..snapshot {
            let b = words[k];
            push(a | b, &mut present, &mut words);
            push(a & b, &mut present, &mut words);
        }
        next += 1;
    }
    if words.len() > cap {
        return Err(SetFamError::SizeError { cap });
    }
    Ok(words
        .into_iter()
        .map(|w| Subset::from_word(ground, w))
        .collect())
}

fn close_hashed(
    _ground: usize,
    seeds: Vec<Subset>,
    kind: FamilyKind,
    cap: usize,
) -> Result<Vec<Subset>, SetFamError> {
    use std::collections::HashSet;
    let mut present: HashSet<Subset> = HashSet::new();
    let mut list: Vec<Subset> = Vec::new();
    let push = |s: Subset, present: &mut HashSet<Subset>, list: &mut Vec<Subset>| {
        if present.insert(s.clone()) {
            list.push(s);
        }
    };
    for s in seeds {
        push(s, &mut present, &mut list);
    }
    let mut next = 0;
    while next < list.len() {
        if list.len() > cap {
            return Err(SetFamError::SizeError { cap });
        }
        let a = list[next].clone();
        if kind == FamilyKind::Boolean {
            push(a.complement(), &mut present, &mut list);
        }
        let snapshot = list.len();
        for k in 0..snapshot {
            let b = list[k].clone();
            push(a.union(&b), &mut present, &mut list);
            push(a.intersection(&b), &mut present, &mut list);
        }
        next += 1;
    }
    if list.len() > cap {
        return Err(SetFamError::SizeError { cap });
    }
    Ok(list)
}

fn generate(
    gens: &SetFamily,
    kind: FamilyKind,
    cap: usize,
) -> Result<GeneratedFamily, SetFamError> {
    let ground = gens.ground();
    if ground == 0 {
        return Err(SetFamError::EmptyGround);
    }
    let mut seeds = vec![Subset::empty(ground), Subset::full(ground)];
    seeds.extend(gens.iter().cloned());
    let members = close(ground, seeds, kind, cap)?;
    Ok(GeneratedFamily {
        kind,
        members: SetFamily::from_subsets(ground, members),
        generators: gens.clone(),
    })
}

/// Least family containing the generators and the bounds, closed under
/// pairwise union and intersection.
pub fn generate_bounded_lattice(gens: &SetFamily) -> Result<GeneratedFamily, SetFamError> {
    generate(gens, FamilyKind::Lattice, DEFAULT_MEMBER_CAP)
}

pub fn generate_bounded_lattice_with_cap(
    gens: &SetFamily,
    cap: usize,
) -> Result<GeneratedFamily, SetFamError> {
    generate(gens, FamilyKind::Lattice, cap)
}

/// Least family containing the generators closed under union and
/// complement relative to the declared ground.
pub fn generate_boolean(gens: &SetFamily) -> Result<GeneratedFamily, SetFamError> {
    generate(gens, FamilyKind::Boolean, DEFAULT_MEMBER_CAP)
}

pub fn generate_boolean_with_cap(
    gens: &SetFamily,
    cap: usize,
) -> Result<GeneratedFamily, SetFamError> {
    generate(gens, FamilyKind::Boolean, cap)
}

/// `2^c` with `c` the number of distinct columns: the count of distinct
/// Boolean combinations of the rows, without generating them.
pub fn boolean_count_via_columns(r: &IncidenceStructure) -> Result<u128, SetFamError> {
    let (_, c) = r.column_classes();
    if c >= 128 {
        return Err(SetFamError::Overflow { c });
    }
    Ok(1u128 << c)
}

/// If `s` is a union of column classes of `r`, the ids of those classes;
/// `None` when some class is split. Membership in `B(R)` is decided by
/// this test alone.
pub fn canonical_boolean_form(
    r: &IncidenceStructure,
    s: &Subset,
) -> Result<Option<Vec<usize>>, SetFamError> {
    if s.ground() != r.n() {
        return Err(SetFamError::GroundMismatch {
            expected: r.n(),
            got: s.ground(),
        });
    }
    let (classes, _) = r.column_classes();
    let mut ids = Vec::new();
    for (id, class) in classes.iter().enumerate() {
        if class.is_subset_of(s) {
            ids.push(id);
        } else if !class.is_disjoint_from(s) {
            return Ok(None);
        }
    }
    Ok(Some(ids))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r0() -> IncidenceStructure {
        IncidenceStructure::from_rows(
            3,
            vec![
                Subset::from_indices(3, [0, 1]),
                Subset::from_indices(3, [1, 2]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lattice_of_running_example() {
        let l = generate_bounded_lattice(&r0().rows_family()).unwrap();
        let expect = SetFamily::from_subsets(
            3,
            [
                Subset::empty(3),
                Subset::singleton(3, 1),
                Subset::from_indices(3, [0, 1]),
                Subset::from_indices(3, [1, 2]),
                Subset::full(3),
            ],
        );
        assert_eq!(l.members(), &expect);
        assert_eq!(l.kind(), FamilyKind::Lattice);
    }

    #[test]
    fn bounds_only_cases() {
        let l = generate_bounded_lattice(&SetFamily::new(3)).unwrap();
        assert_eq!(l.len(), 2);
        let l2 = generate_bounded_lattice(&SetFamily::from_subsets(3, [Subset::full(3)])).unwrap();
        assert_eq!(l2.len(), 2);
        let b = generate_boolean(&SetFamily::new(3)).unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn boolean_of_running_example_is_full_powerset() {
        let b = generate_boolean(&r0().rows_family()).unwrap();
        assert_eq!(b.members(), &SetFamily::powerset(3));
        assert_eq!(b.len(), 8);
    }

    #[test]
    fn boolean_from_one_singleton() {
        let gens = SetFamily::from_subsets(2, [Subset::singleton(2, 0)]);
        let b = generate_boolean(&gens).unwrap();
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn counting_shortcut() {
        assert_eq!(boolean_count_via_columns(&r0()).unwrap(), 8);
        let ones = IncidenceStructure::from_matrix(&[vec![true; 5]]).unwrap();
        assert_eq!(boolean_count_via_columns(&ones).unwrap(), 2);
        let id4 = IncidenceStructure::from_matrix(
            &(0..4)
                .map(|i| (0..4).map(|j| i == j).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(boolean_count_via_columns(&id4).unwrap(), 16);
    }

    #[test]
    fn canonical_form_examples() {
        let r = r0();
        assert_eq!(
            canonical_boolean_form(&r, &Subset::singleton(3, 1)).unwrap(),
            Some(vec![1])
        );
        assert_eq!(
            canonical_boolean_form(&r, &Subset::full(3)).unwrap(),
            Some(vec![0, 1, 2])
        );
        let dup = IncidenceStructure::from_matrix(&[vec![true, true]]).unwrap();
        assert_eq!(
            canonical_boolean_form(&dup, &Subset::singleton(2, 0)).unwrap(),
            None
        );
        assert!(matches!(
            canonical_boolean_form(&r, &Subset::empty(4)),
            Err(SetFamError::GroundMismatch { .. })
        ));
    }

    #[test]
    fn membership_iff_canonical_form_exists() {
        // Exhaustive over every subset of J for a handful of structures.
        let structures = vec![
            r0(),
            IncidenceStructure::from_matrix(&[
                vec![true, true, false, false, true, false],
                vec![false, true, true, false, false, false],
                vec![true, false, true, true, false, false],
            ])
            .unwrap(),
            IncidenceStructure::from_matrix(&[vec![true, true, true, true, true, true]]).unwrap(),
        ];
        for r in structures {
            let b = generate_boolean(&r.rows_family()).unwrap();
            for w in 0u64..1 << r.n() {
                let s = Subset::from_word(r.n(), w);
                let member = b.contains(&s);
                let form = canonical_boolean_form(&r, &s).unwrap();
                assert_eq!(member, form.is_some(), "mismatch at {s}");
                if let Some(ids) = form {
                    // The named classes reassemble s exactly.
                    let (classes, _) = r.column_classes();
                    let mut rebuilt = Subset::empty(r.n());
                    for id in ids {
                        rebuilt = rebuilt.union(&classes[id]);
                    }
                    assert_eq!(rebuilt, s);
                }
            }
        }
    }

    #[test]
    fn lattice_within_boolean_and_idempotence() {
        let gens = SetFamily::from_subsets(
            4,
            [
                Subset::from_indices(4, [0, 1]),
                Subset::from_indices(4, [1, 3]),
            ],
        );
        let l = generate_bounded_lattice(&gens).unwrap();
        let b = generate_boolean(&gens).unwrap();
        assert!(gens.is_subfamily_of(l.members()));
        assert!(gens.is_subfamily_of(b.members()));
        assert!(l.members().is_subfamily_of(b.members()));

        let l2 = generate_bounded_lattice(l.members()).unwrap();
        assert_eq!(l2.members(), l.members());
        let b2 = generate_boolean(b.members()).unwrap();
        assert_eq!(b2.members(), b.members());
    }

    #[test]
    fn closure_count_matches_two_to_the_c() {
        for bits in 0u32..256 {
            let matrix: Vec<Vec<bool>> = (0..2)
                .map(|i| (0..4).map(|j| bits >> (i * 4 + j) & 1 == 1).collect())
                .collect();
            let r = IncidenceStructure::from_matrix(&matrix).unwrap();
            let b = generate_boolean(&r.rows_family()).unwrap();
            assert_eq!(b.len() as u128, boolean_count_via_columns(&r).unwrap());
        }
    }

    #[test]
    fn member_cap_enforced() {
        let gens = SetFamily::from_subsets(4, (0..4).map(|i| Subset::singleton(4, i)));
        assert_eq!(
            generate_boolean_with_cap(&gens, 7),
            Err(SetFamError::SizeError { cap: 7 })
        );
    }

    #[test]
    fn empty_ground_rejected() {
        assert_eq!(
            generate_boolean(&SetFamily::new(0)),
            Err(SetFamError::EmptyGround)
        );
    }

    #[test]
    fn hashed_path_agrees_with_dense_path() {
        // Same generators over a ground above the dense threshold, embedded
        // in the low bits; member sets must coincide elementwise.
        let small = SetFamily::from_subsets(
            6,
            [
                Subset::from_indices(6, [0, 2, 3]),
                Subset::from_indices(6, [1, 2]),
            ],
        );
        let dense = generate_bounded_lattice(&small).unwrap();
        let wide_gens = SetFamily::from_subsets(
            70,
            [
                Subset::from_indices(70, [0, 2, 3]),
                Subset::from_indices(70, [1, 2]),
            ],
        );
        let wide = generate_bounded_lattice(&wide_gens).unwrap();
        assert_eq!(dense.len(), wide.len());
        for m in dense.members().iter() {
            if m.is_full() {
                continue;
            }
            let lifted = Subset::from_indices(70, m.ones());
            assert!(wide.contains(&lifted) || lifted.is_empty());
        }
    }
}
