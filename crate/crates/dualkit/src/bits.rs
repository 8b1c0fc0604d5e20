//! Bit-vector subsets of a finite ground set and canonical set families.
//!
//! Every collection of subsets in this crate (initial-segment families,
//! row/column families, generated lattices and algebras) is stored as a
//! [`SetFamily`]: duplicate-free and sorted in *value order*, the ascending
//! order of the membership bit vectors read as integers with bit 0 (the
//! least significant) standing for element 0. Value order is total and
//! deterministic, so any two runs enumerate families byte-for-byte alike.

use std::cmp::Ordering;
use std::fmt;

const BITS: usize = 64;

fn block_count(ground: usize) -> usize {
    ground.div_ceil(BITS)
}

/// A subset of `{0, .., ground-1}` as a packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    ground: usize,
    blocks: Vec<u64>,
}

impl Subset {
    pub fn empty(ground: usize) -> Self {
        Subset {
            ground,
            blocks: vec![0; block_count(ground)],
        }
    }

    pub fn full(ground: usize) -> Self {
        let mut s = Subset::empty(ground);
        for i in 0..ground {
            s.insert(i);
        }
        s
    }

    pub fn singleton(ground: usize, elem: usize) -> Self {
        let mut s = Subset::empty(ground);
        s.insert(elem);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ground: usize, elems: I) -> Self {
        let mut s = Subset::empty(ground);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// Rebuilds a subset over `ground <= 64` from its integer value.
    pub fn from_word(ground: usize, word: u64) -> Self {
        assert!(ground <= BITS, "from_word needs ground <= 64");
        let mask = if ground == BITS {
            u64::MAX
        } else {
            (1u64 << ground) - 1
        };
        Subset {
            ground,
            blocks: if ground == 0 {
                Vec::new()
            } else {
                vec![word & mask]
            },
        }
    }

    /// The integer value of a subset over `ground <= 64`.
    pub fn as_word(&self) -> u64 {
        assert!(self.ground <= BITS, "as_word needs ground <= 64");
        self.blocks.first().copied().unwrap_or(0)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn contains(&self, elem: usize) -> bool {
        assert!(
            elem < self.ground,
            "element {elem} out of ground {}",
            self.ground
        );
        self.blocks[elem / BITS] >> (elem % BITS) & 1 == 1
    }

    pub fn insert(&mut self, elem: usize) {
        assert!(
            elem < self.ground,
            "element {elem} out of ground {}",
            self.ground
        );
        self.blocks[elem / BITS] |= 1 << (elem % BITS);
    }

    pub fn remove(&mut self, elem: usize) {
        assert!(
            elem < self.ground,
            "element {elem} out of ground {}",
            self.ground
        );
        self.blocks[elem / BITS] &= !(1 << (elem % BITS));
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.ground
    }

    fn zip_with(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Subset {
        assert_eq!(self.ground, other.ground, "ground mismatch");
        Subset {
            ground: self.ground,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement relative to the declared ground set.
    pub fn complement(&self) -> Subset {
        let mut blocks: Vec<u64> = self.blocks.iter().map(|&b| !b).collect();
        let tail = self.ground % BITS;
        if tail != 0 {
            if let Some(last) = blocks.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Subset {
            ground: self.ground,
            blocks,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.ground, other.ground, "ground mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Subset) -> bool {
        assert_eq!(self.ground, other.ground, "ground mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(&a, &b)| a & b == 0)
    }

    /// Iterates set elements in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * BITS + t)
                }
            })
        })
    }

    /// Comparison by integer value of the bit vector (bit 0 least significant).
    pub fn value_cmp(&self, other: &Subset) -> Ordering {
        match self.ground.cmp(&other.ground) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.blocks.iter().rev().zip(other.blocks.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Membership string, one char per element, element 0 first: `"101"`.
    pub fn bitstring(&self) -> String {
        (0..self.ground)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Subset> {
        let mut sub = Subset::empty(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => sub.insert(i),
                '0' => {}
                _ => return None,
            }
        }
        Some(sub)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value_cmp(other)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.ones().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A duplicate-free collection of subsets of one ground set, kept sorted
/// in value order. Equality is structural, hence order-insensitive by
/// canonicalization.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(ground: usize) -> Self {
        SetFamily {
            ground,
            members: Vec::new(),
        }
    }

    pub fn from_subsets<I: IntoIterator<Item = Subset>>(ground: usize, subsets: I) -> Self {
        let mut members: Vec<Subset> = subsets.into_iter().collect();
        for m in &members {
            assert_eq!(m.ground(), ground, "family member over wrong ground");
        }
        members.sort();
        members.dedup();
        SetFamily { ground, members }
    }

    /// All `2^ground` subsets in value order. Desk-scale only.
    pub fn powerset(ground: usize) -> Self {
        assert!(
            ground <= 24,
            "powerset of ground {ground} is out of desk scale"
        );
        SetFamily {
            ground,
            members: (0u64..1 << ground)
                .map(|w| Subset::from_word(ground, w))
                .collect(),
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn member(&self, idx: usize) -> &Subset {
        &self.members[idx]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.members.iter()
    }

    pub fn position(&self, s: &Subset) -> Option<usize> {
        self.members.binary_search_by(|m| m.value_cmp(s)).ok()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.position(s).is_some()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// The family with one more member (no-op if already present).
    pub fn with_member(&self, s: Subset) -> SetFamily {
        let mut members = self.members.clone();
        members.push(s);
        SetFamily::from_subsets(self.ground, members)
    }

    pub fn without_member(&self, s: &Subset) -> SetFamily {
        SetFamily {
            ground: self.ground,
            members: self.members.iter().filter(|m| *m != s).cloned().collect(),
        }
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.members.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a Subset;
    type IntoIter = std::slice::Iter<'a, Subset>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
