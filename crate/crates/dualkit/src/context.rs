//! Incidence structures `R = (I, rho, J)` as bit matrices, with row and
//! column views, the Galois polarity, concept (Galois) lattices, and
//! column equivalence classes.

use crate::bits::{SetFamily, Subset};
use crate::poset::Poset;
use thiserror::Error;

/// Concept enumeration walks the power set of the smaller side; this bounds
/// that side.
pub const GALOIS_ENUM_BOUND: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("incidence structure needs at least one row and one column")]
    Empty,
    #[error("index {index} out of range for dimension {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("subset over ground {got} used where ground {expected} expected")]
    GroundMismatch { expected: usize, got: usize },
    #[error("both dimensions ({m}x{n}) exceed the enumeration bound {bound}")]
    SizeError { m: usize, n: usize, bound: usize },
    #[error("row {row} has ground {got}, expected {expected}")]
    RowMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
}

/// An incidence structure: an `m x n` bit matrix, stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceStructure {
    n: usize,
    rows: Vec<Subset>,
}

impl IncidenceStructure {
    pub fn from_rows(n: usize, rows: Vec<Subset>) -> Result<Self, ContextError> {
        if rows.is_empty() || n == 0 {
            return Err(ContextError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.ground() != n {
                return Err(ContextError::RowMismatch {
                    row,
                    expected: n,
                    got: r.ground(),
                });
            }
        }
        Ok(IncidenceStructure { n, rows })
    }

    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Self, ContextError> {
        let n = matrix.first().map_or(0, |r| r.len());
        let rows = matrix
            .iter()
            .map(|r| {
                Subset::from_indices(n, r.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j))
            })
            .collect();
        IncidenceStructure::from_rows(n, rows)
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn incident(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// `R(i) = {j : (i,j) in rho}` as a subset of `J`.
    pub fn row(&self, i: usize) -> Result<Subset, ContextError> {
        self.rows
            .get(i)
            .cloned()
            .ok_or(ContextError::IndexOutOfRange {
                index: i,
                size: self.m(),
            })
    }

    /// `R^{-1}(j) = {i : (i,j) in rho}` as a subset of `I`.
    pub fn col(&self, j: usize) -> Result<Subset, ContextError> {
        if j >= self.n {
            return Err(ContextError::IndexOutOfRange {
                index: j,
                size: self.n,
            });
        }
        Ok(Subset::from_indices(
            self.m(),
            (0..self.m()).filter(|&i| self.rows[i].contains(j)),
        ))
    }

    /// The duplicate-free row family `R_R` over ground `J`.
    pub fn rows_family(&self) -> SetFamily {
        SetFamily::from_subsets(self.n, self.rows.iter().cloned())
    }

    /// The duplicate-free column family `C_R` over ground `I`.
    pub fn cols_family(&self) -> SetFamily {
        SetFamily::from_subsets(self.m(), (0..self.n).map(|j| self.col(j).unwrap()))
    }

    /// Partition of the column index set by equal columns, classes ordered
    /// by first occurrence, plus the class count `c`.
    pub fn column_classes(&self) -> (Vec<Subset>, usize) {
        let cols: Vec<Subset> = (0..self.n).map(|j| self.col(j).unwrap()).collect();
        let mut classes: Vec<Subset> = Vec::new();
        let mut reps: Vec<&Subset> = Vec::new();
        for j in 0..self.n {
            match reps.iter().position(|r| **r == cols[j]) {
                Some(k) => classes[k].insert(j),
                None => {
                    reps.push(&cols[j]);
                    classes.push(Subset::singleton(self.n, j));
                }
            }
        }
        let c = classes.len();
        (classes, c)
    }

    fn check_ground(&self, s: &Subset, expected: usize) -> Result<(), ContextError> {
        if s.ground() != expected {
            Err(ContextError::GroundMismatch {
                expected,
                got: s.ground(),
            })
        } else {
            Ok(())
        }
    }

    /// Galois polar of a set of rows: `∩{R(i) : i in X}`, the whole of `J`
    /// when `X` is empty.
    pub fn intent_of(&self, x: &Subset) -> Result<Subset, ContextError> {
        self.check_ground(x, self.m())?;
        let mut acc = Subset::full(self.n);
        for i in x.ones() {
            acc = acc.intersection(&self.rows[i]);
        }
        Ok(acc)
    }

    /// Galois polar of a set of columns: `{i : Y ⊆ R(i)}`.
    pub fn extent_of(&self, y: &Subset) -> Result<Subset, ContextError> {
        self.check_ground(y, self.n)?;
        Ok(Subset::from_indices(
            self.m(),
            (0..self.m()).filter(|&i| y.is_subset_of(&self.rows[i])),
        ))
    }

    /// The transpose structure.
    pub fn dual_structure(&self) -> IncidenceStructure {
        let m = self.m();
        let rows = (0..self.n).map(|j| self.col(j).unwrap()).collect();
        IncidenceStructure { n: m, rows }
    }

    /// All concepts (mutually polar pairs), ordered canonically by extent.
    pub fn galois_lattice(&self) -> Result<GaloisLattice, ContextError> {
        let (m, n) = (self.m(), self.n);
        if m.min(n) > GALOIS_ENUM_BOUND {
            return Err(ContextError::SizeError {
                m,
                n,
                bound: GALOIS_ENUM_BOUND,
            });
        }
        let mut extents: Vec<Subset> = Vec::new();
        if m <= n {
            for w in 0u64..1 << m {
                let x = Subset::from_word(m, w);
                let ext = self.extent_of(&self.intent_of(&x)?)?;
                extents.push(ext);
            }
        } else {
            for w in 0u64..1 << n {
                let y = Subset::from_word(n, w);
                extents.push(self.extent_of(&self.intent_of(&self.extent_of(&y)?)?)?);
            }
        }
        extents.sort();
        extents.dedup();
        let concepts = extents
            .into_iter()
            .map(|extent| {
                let intent = self.intent_of(&extent)?;
                Ok(Concept { extent, intent })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GaloisLattice { concepts })
    }
}

/// A closed pair of the polarity: `extent = extent_of(intent)` and
/// `intent = intent_of(extent)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Concept {
    pub extent: Subset,
    pub intent: Subset,
}

/// The concept lattice, ordered by extent inclusion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaloisLattice {
    concepts: Vec<Concept>,
}

impl GaloisLattice {
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.concepts[a]
            .extent
            .is_subset_of(&self.concepts[b].extent)
    }

    /// Index of the top concept (extent `I`).
    pub fn top(&self) -> usize {
        self.concepts.len() - 1
    }

    /// Index of the bottom concept (extent `extent_of(J)`).
    pub fn bottom(&self) -> usize {
        0
    }

    /// The concept order as a poset, indices matching `concepts()`.
    pub fn as_poset(&self) -> Poset {
        let k = self.concepts.len();
        let ups = (0..k)
            .map(|i| Subset::from_indices(k, (0..k).filter(|&j| self.leq(i, j))))
            .collect();
        Poset::from_ups(ups)
    }
}

/// The square structure `(P, <=, P)` of a poset: `row(i) = ↑i`,
/// `col(j) = ↓j`.
pub fn poset_context(p: &Poset) -> IncidenceStructure {
    let n = p.size();
    let rows = (0..n).map(|x| p.principal_up(x).unwrap()).collect();
    IncidenceStructure { n, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::all_posets;

    /// Running example: I = {0,1}, J = {0,1,2}, rows {0,1} and {1,2}.
    pub(crate) fn r0() -> IncidenceStructure {
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
    fn rows_and_cols_read_the_matrix() {
        let r = r0();
        assert_eq!(r.row(0).unwrap(), Subset::from_indices(3, [0, 1]));
        assert_eq!(r.col(1).unwrap(), Subset::from_indices(2, [0, 1]));
        let zero = IncidenceStructure::from_matrix(&[vec![false, false]]).unwrap();
        assert!(zero.row(0).unwrap().is_empty());
        assert!(matches!(
            r.row(7),
            Err(ContextError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn families_deduplicate() {
        let r = r0();
        assert_eq!(r.cols_family().len(), 3);
        let id2 = IncidenceStructure::from_matrix(&[vec![true, false], vec![false, true]]).unwrap();
        assert_eq!(id2.rows_family().len(), 2);
        let ones = IncidenceStructure::from_matrix(&[vec![true; 3], vec![true; 3]]).unwrap();
        assert_eq!(ones.rows_family().len(), 1);
    }

    #[test]
    fn column_classes_count_matches_family() {
        let r = r0();
        let (classes, c) = r.column_classes();
        assert_eq!(c, 3);
        assert!(classes.iter().all(|cl| cl.len() == 1));

        let ones = IncidenceStructure::from_matrix(&[vec![true; 4], vec![true; 4]]).unwrap();
        let (classes, c) = ones.column_classes();
        assert_eq!(c, 1);
        assert_eq!(classes[0].len(), 4);

        let dup = IncidenceStructure::from_matrix(&[vec![true, true], vec![false, false]]).unwrap();
        let (classes, c) = dup.column_classes();
        assert_eq!(c, 1);
        assert_eq!(classes[0], Subset::full(2));

        for m in 1..=3 {
            for n in 1..=3 {
                for bits in 0u32..1 << (m * n) {
                    let matrix: Vec<Vec<bool>> = (0..m)
                        .map(|i| (0..n).map(|j| bits >> (i * n + j) & 1 == 1).collect())
                        .collect();
                    let r = IncidenceStructure::from_matrix(&matrix).unwrap();
                    assert_eq!(r.column_classes().1, r.cols_family().len());
                }
            }
        }
    }

    #[test]
    fn polarity_examples() {
        let r = r0();
        assert_eq!(r.intent_of(&Subset::empty(2)).unwrap(), Subset::full(3));
        assert_eq!(
            r.intent_of(&Subset::full(2)).unwrap(),
            Subset::singleton(3, 1)
        );
        assert_eq!(
            r.extent_of(&Subset::singleton(3, 1)).unwrap(),
            Subset::full(2)
        );
        assert!(matches!(
            r.intent_of(&Subset::empty(5)),
            Err(ContextError::GroundMismatch { .. })
        ));
    }

    #[test]
    fn polarity_is_a_galois_connection() {
        // X ⊆ extent_of(Y) iff Y ⊆ intent_of(X), all subsets, dims <= 5.
        let r = IncidenceStructure::from_matrix(&[
            vec![true, false, true, true, false],
            vec![false, true, true, false, false],
            vec![true, true, false, false, true],
            vec![false, false, false, true, true],
            vec![true, false, true, false, true],
        ])
        .unwrap();
        for xw in 0u64..32 {
            let x = Subset::from_word(5, xw);
            for yw in 0u64..32 {
                let y = Subset::from_word(5, yw);
                let lhs = x.is_subset_of(&r.extent_of(&y).unwrap());
                let rhs = y.is_subset_of(&r.intent_of(&x).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn galois_lattice_of_running_example() {
        let r = r0();
        let gl = r.galois_lattice().unwrap();
        assert_eq!(gl.len(), 4);
        let extents: Vec<_> = gl.concepts().iter().map(|c| c.extent.clone()).collect();
        assert_eq!(
            extents,
            vec![
                Subset::empty(2),
                Subset::singleton(2, 0),
                Subset::singleton(2, 1),
                Subset::full(2),
            ]
        );
        assert_eq!(gl.concepts()[0].intent, Subset::full(3));
        assert_eq!(gl.concepts()[3].intent, Subset::singleton(3, 1));
    }

    #[test]
    fn galois_lattice_edge_cases() {
        let ones = IncidenceStructure::from_matrix(&[vec![true; 2], vec![true; 2]]).unwrap();
        assert_eq!(ones.galois_lattice().unwrap().len(), 1);

        let id3 = IncidenceStructure::from_matrix(&[
            vec![true, false, false],
            vec![false, true, false],
            vec![false, false, true],
        ])
        .unwrap();
        assert_eq!(id3.galois_lattice().unwrap().len(), 5);
    }

    #[test]
    fn concepts_are_polarity_fixpoints() {
        let r = r0();
        let gl = r.galois_lattice().unwrap();
        for c in gl.concepts() {
            assert_eq!(r.extent_of(&c.intent).unwrap(), c.extent);
            assert_eq!(r.intent_of(&c.extent).unwrap(), c.intent);
        }
        // Every polarity fixpoint is a concept.
        for w in 0u64..4 {
            let x = Subset::from_word(2, w);
            let closed = r.extent_of(&r.intent_of(&x).unwrap()).unwrap();
            if closed == x {
                assert!(gl.concepts().iter().any(|c| c.extent == x));
            }
        }
        // Meets exist concept-wise: the intersection of two extents is an
        // extent, so the concept order is a lattice.
        for a in gl.concepts() {
            for b in gl.concepts() {
                let meet = a.extent.intersection(&b.extent);
                assert!(gl.concepts().iter().any(|c| c.extent == meet));
            }
        }
    }

    #[test]
    fn dual_structure_transposes() {
        let r = r0();
        let d = r.dual_structure();
        assert_eq!(d.m(), 3);
        assert_eq!(d.n(), 2);
        assert_eq!(d.dual_structure(), r);
        for i in 0..r.m() {
            for j in 0..r.n() {
                assert_eq!(r.incident(i, j), d.incident(j, i));
            }
        }
    }

    #[test]
    fn dual_galois_lattice_is_anti_isomorphic() {
        let check = |r: &IncidenceStructure| {
            let gl = r.galois_lattice().unwrap();
            let gld = r.dual_structure().galois_lattice().unwrap();
            assert_eq!(gl.len(), gld.len());
            // (A,B) in GL(R) iff (B,A) in GL(R*), and the pairing reverses order.
            let mut map = Vec::new();
            for c in gl.concepts() {
                let pos = gld
                    .concepts()
                    .iter()
                    .position(|d| d.extent == c.intent && d.intent == c.extent)
                    .expect("swapped concept present in the dual lattice");
                map.push(pos);
            }
            for a in 0..gl.len() {
                for b in 0..gl.len() {
                    assert_eq!(gl.leq(a, b), gld.leq(map[b], map[a]));
                }
            }
        };
        check(&r0());
        for bits in 0u32..512 {
            let matrix: Vec<Vec<bool>> = (0..3)
                .map(|i| (0..3).map(|j| bits >> (i * 3 + j) & 1 == 1).collect())
                .collect();
            check(&IncidenceStructure::from_matrix(&matrix).unwrap());
        }
    }

    #[test]
    fn poset_context_rows_are_up_sets() {
        let chain = crate::poset::Poset::chain(2).unwrap();
        let r = poset_context(&chain);
        assert!(r.incident(0, 0) && r.incident(0, 1) && r.incident(1, 1));
        assert!(!r.incident(1, 0));

        let anti = crate::poset::Poset::antichain(3).unwrap();
        let ra = poset_context(&anti);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ra.incident(i, j), i == j);
            }
        }

        for n in 1..=4 {
            for p in all_posets(n).unwrap() {
                let ctx = poset_context(&p);
                assert_eq!(ctx.cols_family(), p.down_family());
                for x in 0..n {
                    assert_eq!(ctx.row(x).unwrap(), p.principal_up(x).unwrap());
                    assert_eq!(ctx.col(x).unwrap(), p.principal_down(x).unwrap());
                }
            }
        }
    }

    #[test]
    fn empty_dimensions_rejected() {
        assert!(matches!(
            IncidenceStructure::from_rows(0, vec![]),
            Err(ContextError::Empty)
        ));
        assert!(matches!(
            IncidenceStructure::from_matrix(&[]),
            Err(ContextError::Empty)
        ));
    }
}
