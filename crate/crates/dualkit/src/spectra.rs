//! Prime-filter and ultrafilter enumeration for finite set-lattices,
//! spectra with their inclusion order and `phi` images, and the finite
//! duality check: ultrafilters of `B(R)` against distinct columns, and the
//! spectrum of `L(R)` against the column family ordered by inclusion.

use crate::bits::{SetFamily, Subset};
use crate::context::IncidenceStructure;
use crate::poset::Poset;
use crate::setfam::{FamilyKind, GeneratedFamily};
use thiserror::Error;

/// Enumeration bound on family size for filter searches.
pub const SPECTRUM_MEMBER_BOUND: usize = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectraError {
    #[error("family with {members} members exceeds the spectrum bound {bound}")]
    SizeError { members: usize, bound: usize },
    #[error("operation requires a Boolean family, got a lattice family")]
    KindError,
    #[error("index {index} out of range for ground {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("family over ground {family} used with structure over ground {structure}")]
    GroundMismatch { family: usize, structure: usize },
    #[error("subset is not a filter of the family: {reason}")]
    NotFilter { reason: String },
}

/// A filter of a generated family, held as the set of member indices it
/// contains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filter<'a> {
    family: &'a GeneratedFamily,
    indices: Subset,
}

impl<'a> Filter<'a> {
    /// Validates the filter axioms: nonempty, upward closed within the
    /// family, and closed under pairwise intersection. Improper filters
    /// (containing the bottom) are allowed and flagged by [`is_proper`].
    ///
    /// [`is_proper`]: Filter::is_proper
    pub fn new(family: &'a GeneratedFamily, indices: Subset) -> Result<Self, SpectraError> {
        let f = Filter { family, indices };
        if f.indices.ground() != family.len() {
            return Err(SpectraError::NotFilter {
                reason: format!(
                    "index ground {} does not match member count {}",
                    f.indices.ground(),
                    family.len()
                ),
            });
        }
        if f.indices.is_empty() {
            return Err(SpectraError::NotFilter {
                reason: "filter is empty".into(),
            });
        }
        let members = family.members();
        for a in f.indices.ones() {
            for b in 0..family.len() {
                if members.member(a).is_subset_of(members.member(b)) && !f.indices.contains(b) {
                    return Err(SpectraError::NotFilter {
                        reason: format!("not upward closed at members {a} and {b}"),
                    });
                }
            }
            for b in f.indices.ones() {
                let cap = members.member(a).intersection(members.member(b));
                match members.position(&cap) {
                    Some(p) if f.indices.contains(p) => {}
                    Some(_) => {
                        return Err(SpectraError::NotFilter {
                            reason: format!("not meet closed at members {a} and {b}"),
                        })
                    }
                    None => {
                        return Err(SpectraError::NotFilter {
                            reason: "family is not meet closed".into(),
                        })
                    }
                }
            }
        }
        Ok(f)
    }

    /// The principal filter of the given member within the family.
    pub fn principal(family: &'a GeneratedFamily, member_idx: usize) -> Self {
        let members = family.members();
        let indices = Subset::from_indices(
            family.len(),
            (0..family.len())
                .filter(|&s| members.member(member_idx).is_subset_of(members.member(s))),
        );
        Filter { family, indices }
    }

    pub fn family(&self) -> &'a GeneratedFamily {
        self.family
    }

    pub fn indices(&self) -> &Subset {
        &self.indices
    }

    pub fn contains_member(&self, idx: usize) -> bool {
        self.indices.contains(idx)
    }

    pub fn contains_set(&self, s: &Subset) -> bool {
        self.family
            .position(s)
            .is_some_and(|p| self.indices.contains(p))
    }

    pub fn members(&self) -> impl Iterator<Item = &Subset> + '_ {
        self.indices.ones().map(|i| self.family.members().member(i))
    }

    /// Proper: does not contain the bottom of the family.
    pub fn is_proper(&self) -> bool {
        !self.contains_set(&Subset::empty(self.family.ground()))
    }

    /// Least member under inclusion; every filter of a finite meet-closed
    /// family is the up-set of this generator.
    pub fn principal_generator(&self) -> usize {
        let members = self.family.members();
        let mut gen = Subset::full(self.family.ground());
        for i in self.indices.ones() {
            gen = gen.intersection(members.member(i));
        }
        self.family
            .position(&gen)
            .expect("meet of filter members is a member")
    }

    /// Primality: `A ∪ B` in the filter implies `A` or `B` is.
    pub fn is_prime(&self) -> bool {
        let members = self.family.members();
        let k = self.family.len();
        for a in 0..k {
            for b in (a + 1)..k {
                let join = members.member(a).union(members.member(b));
                if let Some(j) = members.position(&join) {
                    if self.indices.contains(j)
                        && !self.indices.contains(a)
                        && !self.indices.contains(b)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn check_bound(family: &GeneratedFamily) -> Result<(), SpectraError> {
    if family.len() > SPECTRUM_MEMBER_BOUND {
        Err(SpectraError::SizeError {
            members: family.len(),
            bound: SPECTRUM_MEMBER_BOUND,
        })
    } else {
        Ok(())
    }
}

/// Positions of joins: `joins[a][b]` is the index of `member(a) ∪ member(b)`.
fn join_table(family: &GeneratedFamily) -> Vec<Vec<usize>> {
    let members = family.members();
    let k = family.len();
    (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    members
                        .position(&members.member(a).union(members.member(b)))
                        .expect("generated family is join closed")
                })
                .collect()
        })
        .collect()
}

/// All proper prime filters, enumerated from the definition: each member
/// contributes its principal up-set as a candidate (every filter of a
/// finite meet-closed family is principal), and primality is tested
/// literally over all joins. Ordered by least generator.
pub fn prime_filters(family: &GeneratedFamily) -> Result<Vec<Filter<'_>>, SpectraError> {
    check_bound(family)?;
    let k = family.len();
    let joins = join_table(family);
    let members = family.members();
    let mut result = Vec::new();
    for g in 0..k {
        let candidate = Filter::principal(family, g);
        if !candidate.is_proper() {
            continue;
        }
        let mut prime = true;
        'pairs: for a in 0..k {
            for b in (a + 1)..k {
                if candidate.indices.contains(joins[a][b])
                    && !candidate.indices.contains(a)
                    && !candidate.indices.contains(b)
                {
                    prime = false;
                    break 'pairs;
                }
            }
        }
        if prime {
            debug_assert!(!members.member(g).is_empty());
            result.push(candidate);
        }
    }
    Ok(result)
}

/// Prime filters via the join-irreducible shortcut: the up-sets of the
/// join-irreducible members. Must agree with [`prime_filters`]; any
/// disagreement is a defect, not a fallback.
pub fn prime_filters_via_irreducibles(
    family: &GeneratedFamily,
) -> Result<Vec<Filter<'_>>, SpectraError> {
    check_bound(family)?;
    let k = family.len();
    let joins = join_table(family);
    let mut reducible = vec![false; k];
    for a in 0..k {
        for b in 0..k {
            let j = joins[a][b];
            if j != a && j != b {
                reducible[j] = true;
            }
        }
    }
    let bottom = family
        .position(&Subset::empty(family.ground()))
        .expect("generated family contains the empty set");
    Ok((0..k)
        .filter(|&g| g != bottom && !reducible[g])
        .map(|g| Filter::principal(family, g))
        .collect())
}

/// Maximal proper filters of a Boolean family: the up-sets of its atoms.
pub fn ultrafilters(family: &GeneratedFamily) -> Result<Vec<Filter<'_>>, SpectraError> {
    if family.kind() != FamilyKind::Boolean {
        return Err(SpectraError::KindError);
    }
    check_bound(family)?;
    let members = family.members();
    let k = family.len();
    let is_atom = |a: usize| {
        !members.member(a).is_empty()
            && (0..k).all(|b| {
                members.member(b).is_empty()
                    || b == a
                    || !members.member(b).is_subset_of(members.member(a))
                    || members.member(b) == members.member(a)
            })
    };
    Ok((0..k)
        .filter(|&a| is_atom(a))
        .map(|a| Filter::principal(family, a))
        .collect())
}

/// The point filter `e(j) = {X in L : j in X}`.
pub fn point_filter(family: &GeneratedFamily, j: usize) -> Result<Filter<'_>, SpectraError> {
    if j >= family.ground() {
        return Err(SpectraError::IndexOutOfRange {
            index: j,
            size: family.ground(),
        });
    }
    let indices = Subset::from_indices(
        family.len(),
        (0..family.len()).filter(|&s| family.members().member(s).contains(j)),
    );
    Filter::new(family, indices)
}

/// `phi(U) = {i : R(i) in U}`, a subset of the row index set.
pub fn phi_map(u: &Filter<'_>, r: &IncidenceStructure) -> Result<Subset, SpectraError> {
    if u.family.ground() != r.n() {
        return Err(SpectraError::GroundMismatch {
            family: u.family.ground(),
            structure: r.n(),
        });
    }
    Ok(Subset::from_indices(
        r.m(),
        (0..r.m()).filter(|&i| u.contains_set(&r.row(i).expect("row index in range"))),
    ))
}

/// Membership in the basic open set `O(F, G)`.
pub fn basic_open_contains(f: &Subset, g: &Subset, x: &Subset) -> bool {
    f.is_subset_of(x) && g.is_disjoint_from(x)
}

/// The spectrum: prime filters in canonical order with their inclusion
/// order, and `phi` images when an incidence structure is supplied.
#[derive(Debug)]
pub struct Spectrum<'a> {
    pub points: Vec<Filter<'a>>,
    pub order: Poset,
    pub phi_images: Option<Vec<Subset>>,
}

impl Spectrum<'_> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn spectrum(family: &GeneratedFamily) -> Result<Spectrum<'_>, SpectraError> {
    let mut points = prime_filters(family)?;
    points.sort_by(|a, b| a.indices.value_cmp(&b.indices));
    let k = points.len();
    let ups = (0..k)
        .map(|i| {
            Subset::from_indices(
                k,
                (0..k).filter(|&j| points[i].indices.is_subset_of(&points[j].indices)),
            )
        })
        .collect();
    let order = Poset::from_ups(ups);
    Ok(Spectrum {
        points,
        order,
        phi_images: None,
    })
}

pub fn spectrum_with_context<'a>(
    family: &'a GeneratedFamily,
    r: &IncidenceStructure,
) -> Result<Spectrum<'a>, SpectraError> {
    let mut spec = spectrum(family)?;
    let images = spec
        .points
        .iter()
        .map(|u| phi_map(u, r))
        .collect::<Result<Vec<_>, _>>()?;
    spec.phi_images = Some(images);
    Ok(spec)
}

/// Outcome of a finite duality check: a pairing of spectrum points with
/// members of the comparison family, bijectivity, order compatibility
/// where applicable, and any witnessed failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub pairing: Vec<(usize, usize)>,
    pub bijection: bool,
    pub order_iso: Option<bool>,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.bijection && self.order_iso.unwrap_or(true) && self.failures.is_empty()
    }
}

/// Checks that `phi` maps the listed filters bijectively onto the target
/// family, optionally demanding an order isomorphism; shared by the
/// structure-level and poset-level duality checks.
pub(crate) fn phi_bijection_report(
    points: &[Filter<'_>],
    images: &[Subset],
    target: &SetFamily,
    check_order: bool,
) -> DualityReport {
    let mut failures = Vec::new();
    let mut pairing = Vec::new();
    let mut hit = vec![false; target.len()];
    for (p, img) in images.iter().enumerate() {
        match target.position(img) {
            Some(t) => {
                if hit[t] {
                    failures.push(format!("phi image {img} duplicated at point {p}"));
                } else {
                    hit[t] = true;
                }
                pairing.push((p, t));
            }
            None => failures.push(format!("phi image {img} of point {p} not in target family")),
        }
    }
    let bijection = failures.is_empty() && hit.iter().all(|&h| h);
    if !bijection && failures.is_empty() {
        failures.push(format!(
            "phi covers {} of {} target members",
            hit.iter().filter(|&&h| h).count(),
            target.len()
        ));
    }
    let order_iso = if check_order {
        let mut ok = true;
        for a in 0..points.len() {
            for b in 0..points.len() {
                let point_leq = points[a].indices.is_subset_of(&points[b].indices);
                let image_leq = images[a].is_subset_of(&images[b]);
                if point_leq != image_leq {
                    ok = false;
                    failures.push(format!(
                        "order mismatch between points {a} and {b}: filters {} images {}",
                        point_leq, image_leq
                    ));
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    DualityReport {
        pairing,
        bijection,
        order_iso,
        failures,
    }
}

/// Finite form of the duality theorem for an incidence structure: the
/// ultrafilters of `B(R)` must biject with the distinct columns under
/// `phi`, and the spectrum of `L(R)` ordered by inclusion must be
/// order-isomorphic to the column family ordered by inclusion.
pub fn verify_duality(r: &IncidenceStructure) -> Result<DualityReport, SpectraError> {
    let rows = r.rows_family();
    let booly = crate::setfam::generate_boolean(&rows).map_err(|e| SpectraError::NotFilter {
        reason: format!("boolean generation failed: {e}"),
    })?;
    let latt =
        crate::setfam::generate_bounded_lattice(&rows).map_err(|e| SpectraError::NotFilter {
            reason: format!("lattice generation failed: {e}"),
        })?;
    let cols = r.cols_family();
    let (_, c) = r.column_classes();

    let mut failures = Vec::new();

    // Stone side: ultrafilters of B(R) against distinct columns.
    let ultras = ultrafilters(&booly)?;
    if ultras.len() != c {
        failures.push(format!(
            "ultrafilter count {} differs from distinct column count {c}",
            ultras.len()
        ));
    }
    let primes_b = prime_filters(&booly)?;
    if primes_b.len() != ultras.len()
        || !primes_b
            .iter()
            .all(|p| ultras.iter().any(|u| u.indices == p.indices))
    {
        failures.push("ultrafilters and prime filters of B(R) disagree".into());
    }
    let ultra_images = ultras
        .iter()
        .map(|u| phi_map(u, r))
        .collect::<Result<Vec<_>, _>>()?;
    let stone = phi_bijection_report(&ultras, &ultra_images, &cols, false);
    failures.extend(stone.failures.iter().cloned());

    // Priestley side: Spec(L(R)) with inclusion against (C_R, subset).
    let spec = spectrum_with_context(&latt, r)?;
    let images = spec.phi_images.as_ref().unwrap();
    let priestley = phi_bijection_report(&spec.points, images, &cols, true);
    failures.extend(priestley.failures.iter().cloned());

    Ok(DualityReport {
        pairing: priestley.pairing,
        bijection: stone.bijection && priestley.bijection,
        order_iso: priestley.order_iso,
        failures,
    })
}
