//! Finite posets and their order-theoretic derivatives: principal and
//! generated segments, bounds, the families of initial/final segments and
//! ideals/filters, up-closedness, join-irreducible and join-prime elements,
//! and an exhaustive generator of all labeled posets up to size 5.

use crate::bits::{SetFamily, Subset};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset must have at least one element")]
    Empty,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation closure violates antisymmetry at elements {x} and {y}")]
    Cycle { x: usize, y: usize },
    #[error("subset over ground {got} used with poset of size {expected}")]
    GroundMismatch { expected: usize, got: usize },
    #[error("elements {x} and {y} have no join: not a join-semilattice")]
    NotJoinSemilattice { x: usize, y: usize },
    #[error("size {size} out of supported range {min}..={max}")]
    SizeError { size: usize, min: usize, max: usize },
    #[error("label list has length {got}, expected {expected}")]
    LabelMismatch { expected: usize, got: usize },
}

/// A finite partially ordered set over elements `0..size`.
///
/// Stores the full order relation as per-element up-sets and down-sets;
/// construction guarantees reflexivity, antisymmetry and transitivity.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    ups: Vec<Subset>,
    downs: Vec<Subset>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, leq=[", self.size())?;
        let mut first = true;
        for x in 0..self.size() {
            for y in 0..self.size() {
                if x != y && self.leq(x, y) {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}<={y}")?;
                    first = false;
                }
            }
        }
        write!(f, "])")
    }
}

impl Poset {
    /// Builds a poset from an arbitrary pair set: takes the
    /// reflexive-transitive closure, then validates antisymmetry.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Poset, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        for &(x, y) in pairs {
            for index in [x, y] {
                if index >= n {
                    return Err(PosetError::IndexOutOfRange { index, size: n });
                }
            }
        }
        let mut ups: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
        for &(x, y) in pairs {
            ups[x].insert(y);
        }
        // Transitive closure, Warshall over bit rows.
        for k in 0..n {
            let row_k = ups[k].clone();
            for row in ups.iter_mut() {
                if row.contains(k) {
                    *row = row.union(&row_k);
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if ups[x].contains(y) && ups[y].contains(x) {
                    return Err(PosetError::Cycle { x, y });
                }
            }
        }
        Ok(Poset::from_ups(ups))
    }

    /// Assembles a poset from validated up-sets. Internal constructor: the
    /// caller guarantees the rows encode a partial order.
    pub(crate) fn from_ups(ups: Vec<Subset>) -> Poset {
        let n = ups.len();
        let downs = (0..n)
            .map(|y| Subset::from_indices(n, (0..n).filter(|&x| ups[x].contains(y))))
            .collect();
        Poset {
            ups,
            downs,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Poset, PosetError> {
        if labels.len() != self.size() {
            return Err(PosetError::LabelMismatch {
                expected: self.size(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The chain `0 <= 1 <= .. <= n-1`.
    pub fn chain(n: usize) -> Result<Poset, PosetError> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_pairs(n, &pairs)
    }

    /// The antichain on `n` elements.
    pub fn antichain(n: usize) -> Result<Poset, PosetError> {
        Poset::from_pairs(n, &[])
    }

    pub fn size(&self) -> usize {
        self.ups.len()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.ups[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// The dual poset: order reversed, labels kept.
    pub fn dual(&self) -> Poset {
        Poset {
            ups: self.downs.clone(),
            downs: self.ups.clone(),
            labels: self.labels.clone(),
        }
    }

    fn check_index(&self, index: usize) -> Result<(), PosetError> {
        if index >= self.size() {
            Err(PosetError::IndexOutOfRange {
                index,
                size: self.size(),
            })
        } else {
            Ok(())
        }
    }

    fn check_ground(&self, s: &Subset) -> Result<(), PosetError> {
        if s.ground() != self.size() {
            Err(PosetError::GroundMismatch {
                expected: self.size(),
                got: s.ground(),
            })
        } else {
            Ok(())
        }
    }

    /// Principal final segment `{y : x <= y}`.
    pub fn principal_up(&self, x: usize) -> Result<Subset, PosetError> {
        self.check_index(x)?;
        Ok(self.ups[x].clone())
    }

    /// Principal initial segment `{y : y <= x}`.
    pub fn principal_down(&self, x: usize) -> Result<Subset, PosetError> {
        self.check_index(x)?;
        Ok(self.downs[x].clone())
    }

    /// Least final segment containing `x`: the union of the principal
    /// final segments of its elements.
    pub fn up_closure(&self, x: &Subset) -> Result<Subset, PosetError> {
        self.check_ground(x)?;
        let mut acc = Subset::empty(self.size());
        for e in x.ones() {
            acc = acc.union(&self.ups[e]);
        }
        Ok(acc)
    }

    /// Least initial segment containing `x`.
    pub fn down_closure(&self, x: &Subset) -> Result<Subset, PosetError> {
        self.check_ground(x)?;
        let mut acc = Subset::empty(self.size());
        for e in x.ones() {
            acc = acc.union(&self.downs[e]);
        }
        Ok(acc)
    }

    /// Upper bounds `X+ = ∩{↑x : x ∈ X}`; the empty intersection is the
    /// whole ground set.
    pub fn upper_bounds(&self, x: &Subset) -> Result<Subset, PosetError> {
        self.check_ground(x)?;
        let mut acc = Subset::full(self.size());
        for e in x.ones() {
            acc = acc.intersection(&self.ups[e]);
        }
        Ok(acc)
    }

    pub fn lower_bounds(&self, x: &Subset) -> Result<Subset, PosetError> {
        self.check_ground(x)?;
        let mut acc = Subset::full(self.size());
        for e in x.ones() {
            acc = acc.intersection(&self.downs[e]);
        }
        Ok(acc)
    }

    /// `down(P) = {↓x : x ∈ P}` as a family.
    pub fn down_family(&self) -> SetFamily {
        SetFamily::from_subsets(self.size(), self.downs.iter().cloned())
    }

    /// `up(P) = {↑x : x ∈ P}` as a family.
    pub fn up_family(&self) -> SetFamily {
        SetFamily::from_subsets(self.size(), self.ups.iter().cloned())
    }

    fn is_down_closed(&self, s: &Subset) -> bool {
        s.ones().all(|e| self.downs[e].is_subset_of(s))
    }

    /// All initial segments (downward-closed subsets), the family `I(P)`.
    pub fn initial_segments(&self) -> SetFamily {
        let n = self.size();
        assert!(
            n <= 24,
            "segment enumeration over size {n} is out of desk scale"
        );
        let members = (0u64..1 << n)
            .map(|w| Subset::from_word(n, w))
            .filter(|s| self.is_down_closed(s));
        SetFamily::from_subsets(n, members)
    }

    /// Finitely generated initial segments `{↓X : X finite}`, computed
    /// literally over all subsets. Coincides with `I(P)` on finite posets;
    /// that equality is a checked theorem, not an assumption here.
    pub fn fg_initial_segments(&self) -> SetFamily {
        let n = self.size();
        assert!(
            n <= 24,
            "segment enumeration over size {n} is out of desk scale"
        );
        let members = (0u64..1 << n).map(|w| {
            self.down_closure(&Subset::from_word(n, w))
                .expect("ground matches by construction")
        });
        SetFamily::from_subsets(n, members)
    }

    /// Ideals: nonempty up-directed initial segments, the family `J(P)`.
    pub fn ideals(&self) -> SetFamily {
        let n = self.size();
        let members = self
            .initial_segments()
            .iter()
            .filter(|s| !s.is_empty() && self.is_directed_within(s))
            .cloned()
            .collect::<Vec<_>>();
        SetFamily::from_subsets(n, members)
    }

    fn is_directed_within(&self, s: &Subset) -> bool {
        let elems: Vec<usize> = s.ones().collect();
        elems.iter().all(|&x| {
            elems.iter().all(|&y| {
                !self.ups[x]
                    .intersection(&self.ups[y])
                    .intersection(s)
                    .is_empty()
            })
        })
    }

    /// Final segments `F(P)`: initial segments of the dual.
    pub fn final_segments(&self) -> SetFamily {
        self.dual().initial_segments()
    }

    /// Finitely generated final segments `{↑X : X finite}`.
    pub fn fg_final_segments(&self) -> SetFamily {
        self.dual().fg_initial_segments()
    }

    /// Filters: ideals of the dual.
    pub fn filters_family(&self) -> SetFamily {
        self.dual().ideals()
    }

    /// True iff every `↑x ∩ ↑y` is a finite (possibly empty) union of
    /// principal final segments, tested literally via minimal elements.
    pub fn is_up_closed(&self) -> bool {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                let meet = self.ups[x].intersection(&self.ups[y]);
                let mut gen = Subset::empty(n);
                for z in meet.ones() {
                    // z minimal in the intersection?
                    if self.downs[z].intersection(&meet).len() == 1 {
                        gen = gen.union(&self.ups[z]);
                    }
                }
                if gen != meet {
                    return false;
                }
            }
        }
        true
    }

    /// Least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.size()).find(|&x| self.ups[x].is_full())
    }

    /// Greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.size()).find(|&x| self.downs[x].is_full())
    }

    /// Least upper bound of `x` and `y`, if it exists.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let ub = self.ups[x].intersection(&self.ups[y]);
        let least = ub.ones().find(|&z| ub.is_subset_of(&self.ups[z]));
        least
    }

    /// Greatest lower bound of `x` and `y`, if it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let lb = self.downs[x].intersection(&self.downs[y]);
        let greatest = lb.ones().find(|&z| lb.is_subset_of(&self.downs[z]));
        greatest
    }

    /// The join table of a join-semilattice, or the offending pair.
    pub fn join_table(&self) -> Result<Vec<Vec<usize>>, PosetError> {
        let n = self.size();
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                match self.join(x, y) {
                    Some(z) => table[x][y] = z,
                    None => return Err(PosetError::NotJoinSemilattice { x, y }),
                }
            }
        }
        Ok(table)
    }

    /// Join-irreducible elements: `x` distinct from the least element (if
    /// any) such that `x = a v b` implies `x = a` or `x = b`.
    pub fn join_irreducibles(&self) -> Result<Subset, PosetError> {
        let joins = self.join_table()?;
        let n = self.size();
        let bottom = self.bottom();
        let mut reducible = vec![false; n];
        for a in 0..n {
            for b in 0..n {
                let j = joins[a][b];
                if j != a && j != b {
                    reducible[j] = true;
                }
            }
        }
        Ok(Subset::from_indices(
            n,
            (0..n).filter(|&x| Some(x) != bottom && !reducible[x]),
        ))
    }

    /// Join-prime elements: `x <= a v b` implies `x <= a` or `x <= b`.
    pub fn join_primes(&self) -> Result<Subset, PosetError> {
        let joins = self.join_table()?;
        let n = self.size();
        let bottom = self.bottom();
        let prime = |x: usize| {
            (0..n).all(|a| {
                (0..n).all(|b| !self.leq(x, joins[a][b]) || self.leq(x, a) || self.leq(x, b))
            })
        };
        Ok(Subset::from_indices(
            n,
            (0..n).filter(|&x| Some(x) != bottom && prime(x)),
        ))
    }

    /// The induced subposet on the listed elements (new indices follow
    /// `elems` order).
    pub fn induced(&self, elems: &[usize]) -> Result<Poset, PosetError> {
        if elems.is_empty() {
            return Err(PosetError::Empty);
        }
        for &e in elems {
            self.check_index(e)?;
        }
        let k = elems.len();
        let ups = (0..k)
            .map(|i| Subset::from_indices(k, (0..k).filter(|&j| self.leq(elems[i], elems[j]))))
            .collect();
        Ok(Poset::from_ups(ups))
    }

    /// Adds a new least element below everything (index `size`).
    pub fn with_least_element(&self) -> Poset {
        let n = self.size();
        let mut ups: Vec<Subset> = self
            .ups
            .iter()
            .map(|u| Subset::from_indices(n + 1, u.ones()))
            .collect();
        ups.push(Subset::full(n + 1));
        Poset::from_ups(ups)
    }
}

/// The poset of a family's members ordered by inclusion. Element `i` of the
/// result is `family.member(i)`.
pub fn inclusion_poset(family: &SetFamily) -> Result<Poset, PosetError> {
    if family.is_empty() {
        return Err(PosetError::Empty);
    }
    let k = family.len();
    let ups = (0..k)
        .map(|i| {
            Subset::from_indices(
                k,
                (0..k).filter(|&j| family.member(i).is_subset_of(family.member(j))),
            )
        })
        .collect();
    Ok(Poset::from_ups(ups))
}

/// Every partial order on `n` labeled elements, each exactly once, in a
/// fixed deterministic order. Supported for `1 <= n <= 5`.
pub fn all_posets(n: usize) -> Result<impl Iterator<Item = Poset>, PosetError> {
    if !(1..=5).contains(&n) {
        return Err(PosetError::SizeError {
            size: n,
            min: 1,
            max: 5,
        });
    }
    // Off-diagonal ordered pairs indexed lexicographically.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let swap_index: Vec<usize> = pairs
        .iter()
        .map(|&(x, y)| pairs.iter().position(|&p| p == (y, x)).unwrap())
        .collect();
    let bit_count = pairs.len();
    let iter = (0u64..1 << bit_count).filter_map(move |mask| {
        // Antisymmetry prefilter: no pair together with its swap.
        for (p, &q) in swap_index.iter().enumerate() {
            if mask >> p & 1 == 1 && mask >> q & 1 == 1 {
                return None;
            }
        }
        let mut ups: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
        for (p, &(x, y)) in pairs.iter().enumerate() {
            if mask >> p & 1 == 1 {
                ups[x].insert(y);
            }
        }
        // Keep only relations that are already transitive, so each partial
        // order is produced exactly once.
        for x in 0..n {
            for y in ups[x].ones() {
                if !ups[y].is_subset_of(&ups[x]) {
                    return None;
                }
            }
        }
        Some(Poset::from_ups(ups))
    });
    Ok(iter)
}

/// Order-isomorphism test by backtracking over degree-compatible maps.
pub fn are_isomorphic(p: &Poset, q: &Poset) -> bool {
    if p.size() != q.size() {
        return false;
    }
    let n = p.size();
    let sig = |r: &Poset, x: usize| {
        (
            r.principal_up(x).unwrap().len(),
            r.principal_down(x).unwrap().len(),
        )
    };
    let mut psig: Vec<_> = (0..n).map(|x| sig(p, x)).collect();
    let mut qsig: Vec<_> = (0..n).map(|x| sig(q, x)).collect();
    psig.sort();
    qsig.sort();
    if psig != qsig {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(p: &Poset, q: &Poset, map: &mut [usize], used: &mut [bool], x: usize) -> bool {
        let n = p.size();
        if x == n {
            return true;
        }
        for y in 0..n {
            if used[y] {
                continue;
            }
            let ok = (0..x)
                .all(|x2| p.leq(x, x2) == q.leq(y, map[x2]) && p.leq(x2, x) == q.leq(map[x2], y));
            if ok {
                map[x] = y;
                used[y] = true;
                if extend(p, q, map, used, x + 1) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }
    extend(p, q, &mut map, &mut used, 0)
}
