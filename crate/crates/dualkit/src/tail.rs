//! Tail algebras and tail lattices of posets, the closure-membership
//! criterion for `down(P)`, the finite Stone/Priestley check for tail
//! algebras, the up-closedness proposition checkers, the Birkhoff
//! representation of finite distributive lattices, and free Boolean
//! algebras over posets with a universal-property test.
//!
//! Convention on bounds: a generated bounded lattice always contains the
//! empty set and the whole ground set. The tail-lattice equality with the
//! finitely generated final segments is therefore reported both raw and
//! modulo the forced bounds; on finite posets both readings agree and that
//! agreement is part of the test suite.

use crate::bits::{SetFamily, Subset};
use crate::context::poset_context;
use crate::poset::{are_isomorphic, inclusion_poset, Poset, PosetError};
use crate::setfam::{
    generate_boolean, generate_bounded_lattice, FamilyKind, GeneratedFamily, SetFamError,
};
use crate::spectra::{
    phi_bijection_report, spectrum_with_context, ultrafilters, DualityReport, SpectraError,
};
use thiserror::Error;

/// Default cap on the number of finitely generated final segments used as
/// the ground of a free Boolean algebra (carrier up to `2^20`).
pub const DEFAULT_FREE_GROUND_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TailError {
    #[error("subset over ground {got} used with poset of size {expected}")]
    GroundMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Family(#[from] SetFamError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("poset is not a lattice: elements {x} and {y} lack a {which}")]
    NotLattice {
        x: usize,
        y: usize,
        which: &'static str,
    },
    #[error("lattice has no {which} element")]
    NotBounded { which: &'static str },
    #[error("distributive law fails at ({x},{y},{z})")]
    NotDistributive { x: usize, y: usize, z: usize },
    #[error("map is not order-preserving at {x} <= {y}")]
    NotMonotone { x: usize, y: usize },
    #[error("map value {value} out of range {size}")]
    MapValueOutOfRange { value: usize, size: usize },
    #[error("map has length {got}, expected {expected}")]
    MapLenMismatch { expected: usize, got: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeError {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("Birkhoff verification failed: {detail}")]
    BirkhoffCheckFailed { detail: String },
}

/// `Tailalg(P)`: the Boolean subalgebra of the power set of `P` generated
/// by the principal final segments.
pub fn tailalg(p: &Poset) -> Result<GeneratedFamily, SetFamError> {
    generate_boolean(&p.up_family())
}

/// `Taillat(P)`: the bounded sublattice generated by the principal final
/// segments.
pub fn taillat(p: &Poset) -> Result<GeneratedFamily, SetFamError> {
    generate_bounded_lattice(&p.up_family())
}

/// Closure membership for `down(P)` on a finite poset. The defining
/// criterion quantifies over finite `F ⊆ X` and `G ⊆ P∖X`; since upper
/// bounds shrink as `F` grows and `↑G` grows with `G`, the single pair
/// `F = X`, `G = P∖X` is the binding case: `X` is in the closure iff
/// `X+ ∖ ↑(P∖X)` is nonempty.
pub fn closure_member(p: &Poset, x: &Subset) -> Result<bool, TailError> {
    if x.ground() != p.size() {
        return Err(TailError::GroundMismatch {
            expected: p.size(),
            got: x.ground(),
        });
    }
    let upper = p.upper_bounds(x)?;
    let rest = p.up_closure(&x.complement())?;
    Ok(!upper.difference(&rest).is_empty())
}

/// The closure of `down(P)`: all subsets passing [`closure_member`]. On a
/// finite poset this equals `down(P)` itself; the equality is a checked
/// theorem.
pub fn closure_of_down(p: &Poset) -> SetFamily {
    let n = p.size();
    assert!(n <= 24, "closure scan over size {n} is out of desk scale");
    SetFamily::from_subsets(
        n,
        (0u64..1 << n)
            .map(|w| Subset::from_word(n, w))
            .filter(|x| closure_member(p, x).expect("ground matches")),
    )
}

/// Topological closure of an arbitrary family in the power set of a finite
/// ground: `X` is in the closure iff every basic open set `O(F, G)` around
/// `X` meets the family. Quantifies over all pairs literally; this is the
/// independent oracle for the reduced criterion above.
pub fn topological_closure(family: &SetFamily) -> SetFamily {
    let n = family.ground();
    assert!(
        n <= 12,
        "full closure quantification over size {n} is out of desk scale"
    );
    let mut closure = Vec::new();
    for w in 0u64..1 << n {
        let x = Subset::from_word(n, w);
        let complement_elems: Vec<usize> = x.complement().ones().collect();
        let x_elems: Vec<usize> = x.ones().collect();
        let mut in_closure = true;
        'pairs: for fmask in 0u64..1 << x_elems.len() {
            let fset = Subset::from_indices(
                n,
                x_elems
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| fmask >> k & 1 == 1)
                    .map(|(_, &e)| e),
            );
            for gmask in 0u64..1 << complement_elems.len() {
                let gset = Subset::from_indices(
                    n,
                    complement_elems
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| gmask >> k & 1 == 1)
                        .map(|(_, &e)| e),
                );
                let meets = family
                    .iter()
                    .any(|m| fset.is_subset_of(m) && gset.is_disjoint_from(m));
                if !meets {
                    in_closure = false;
                    break 'pairs;
                }
            }
        }
        if in_closure {
            closure.push(x);
        }
    }
    SetFamily::from_subsets(n, closure)
}

/// Finite Stone/Priestley check for the tail algebra and tail lattice of a
/// poset: ultrafilters of `Tailalg(P)` must biject with the closure of
/// `down(P)` under `phi` over the order context, and the spectrum of
/// `Taillat(P)` with inclusion must be order-isomorphic to that closure
/// ordered by inclusion (hence to `P`).
pub fn check_pps(p: &Poset) -> Result<DualityReport, TailError> {
    let ctx = poset_context(p);
    let closure = closure_of_down(p);
    let talg = tailalg(p)?;
    let tlat = taillat(p)?;
    let mut failures = Vec::new();

    let ultras = ultrafilters(&talg)?;
    let ultra_images = ultras
        .iter()
        .map(|u| crate::spectra::phi_map(u, &ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let stone = phi_bijection_report(&ultras, &ultra_images, &closure, false);
    failures.extend(stone.failures.iter().cloned());

    let spec = spectrum_with_context(&tlat, &ctx)?;
    let images = spec.phi_images.as_ref().unwrap();
    let priestley = phi_bijection_report(&spec.points, images, &closure, true);
    failures.extend(priestley.failures.iter().cloned());

    // The spectrum must reproduce P itself: each image is a principal
    // initial segment, and pairing its generator with the point must be an
    // order isomorphism onto P.
    let mut elem_of_point: Vec<Option<usize>> = Vec::new();
    for img in images {
        let elem = (0..p.size()).find(|&x| p.principal_down(x).unwrap() == *img);
        if elem.is_none() {
            failures.push(format!(
                "phi image {img} is not a principal initial segment"
            ));
        }
        elem_of_point.push(elem);
    }
    if elem_of_point.iter().all(|e| e.is_some()) {
        let elems: Vec<usize> = elem_of_point.iter().map(|e| e.unwrap()).collect();
        let mut seen = vec![false; p.size()];
        for &e in &elems {
            seen[e] = true;
        }
        if !seen.iter().all(|&s| s) || elems.len() != p.size() {
            failures.push("spectrum does not enumerate P".into());
        } else {
            for a in 0..elems.len() {
                for b in 0..elems.len() {
                    if spec.order.leq(a, b) != p.leq(elems[a], elems[b]) {
                        failures.push(format!("spectrum order disagrees with P at points {a},{b}"));
                    }
                }
            }
        }
    }

    Ok(DualityReport {
        pairing: priestley.pairing,
        bijection: stone.bijection && priestley.bijection,
        order_iso: priestley.order_iso,
        failures,
    })
}

/// Per-clause results of the up-closedness proposition, labels matching
/// the statement's lettering:
/// (a) the ideals together with the empty set form a closed family,
/// (b) the ideals are exactly the closure of `down(P)` minus the empty set,
/// (c) the poset is up-closed,
/// (d) the finitely generated final segments form a meet-semilattice,
/// (e) the tail lattice equals the finitely generated final segments plus
///     the top (compared modulo the forced bounds; the raw comparison is
///     reported alongside).
#[derive(Clone, Debug)]
pub struct PropositionReport {
    pub clauses: Vec<(char, bool)>,
    pub clause_e_raw: bool,
    pub witnesses: Vec<String>,
    pub taillat_members: SetFamily,
    pub fg_final_with_top: SetFamily,
}

impl PropositionReport {
    pub fn all_true(&self) -> bool {
        self.clauses.iter().all(|&(_, v)| v)
    }

    /// The clauses are pairwise equivalent; a consistent report has all
    /// entries equal.
    pub fn consistent(&self) -> bool {
        let first = self.clauses[0].1;
        self.clauses.iter().all(|&(_, v)| v == first)
    }
}

pub fn check_prop_ideals(p: &Poset) -> PropositionReport {
    let mut witnesses = Vec::new();

    // (a) J(P) ∪ {∅} closed under the product topology.
    let ideals_with_empty = p.ideals().with_member(Subset::empty(p.size()));
    let a = topological_closure(&ideals_with_empty) == ideals_with_empty;
    if !a {
        witnesses.push("closure of J(P) ∪ {∅} grew".into());
    }

    // (b) J(P) = closure(down(P)) ∖ {∅}.
    let closure = closure_of_down(p);
    let b = p.ideals() == closure.without_member(&Subset::empty(p.size()));
    if !b {
        witnesses.push(format!(
            "ideals {:?} differ from closure-minus-empty {:?}",
            p.ideals(),
            closure
        ));
    }

    // (c) up-closedness.
    let c = p.is_up_closed();

    // (d) F_fg(P) is a meet-semilattice under inclusion.
    let fg_final = p.fg_final_segments();
    let mut d = true;
    'outer: for x in fg_final.iter() {
        for y in fg_final.iter() {
            let lower: Vec<&Subset> = fg_final
                .iter()
                .filter(|z| z.is_subset_of(x) && z.is_subset_of(y))
                .collect();
            let has_greatest = lower
                .iter()
                .any(|glb| lower.iter().all(|z| z.is_subset_of(glb)));
            if !has_greatest {
                witnesses.push(format!("{x} and {y} lack a meet in F_fg(P)"));
                d = false;
                break 'outer;
            }
        }
    }

    // (e) Taillat(P) = F_fg(P) ∪ {P}, modulo the forced bounds.
    let tlat = taillat(p).expect("tail lattice of a valid poset");
    let fg_with_top = fg_final.with_member(Subset::full(p.size()));
    let clause_e_raw = tlat.members() == &fg_with_top;
    let pad = |f: &SetFamily| {
        f.with_member(Subset::empty(p.size()))
            .with_member(Subset::full(p.size()))
    };
    let e = pad(tlat.members()) == pad(&fg_with_top);
    if !e {
        witnesses.push("tail lattice differs from F_fg(P) ∪ {P} modulo bounds".into());
    }

    PropositionReport {
        clauses: vec![('a', a), ('b', b), ('c', c), ('d', d), ('e', e)],
        clause_e_raw,
        witnesses,
        taillat_members: tlat.members().clone(),
        fg_final_with_top: fg_with_top,
    }
}

/// Both sides of the closed-ideals corollary: whether `J(P)` is closed,
/// and whether `P` is a finitely generated final segment of itself and
/// up-closed. The two must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub ideals_closed: bool,
    pub fg_top_and_up_closed: bool,
}

impl CorollaryReport {
    pub fn equivalent(&self) -> bool {
        self.ideals_closed == self.fg_top_and_up_closed
    }
}

pub fn check_cor_ideauxclos(p: &Poset) -> CorollaryReport {
    let ideals = p.ideals();
    let ideals_closed = topological_closure(&ideals) == ideals;
    let fg_top = p.fg_final_segments().contains(&Subset::full(p.size()));
    CorollaryReport {
        ideals_closed,
        fg_top_and_up_closed: fg_top && p.is_up_closed(),
    }
}

/// Witness of the Birkhoff representation: the join-irreducibles `Q` of a
/// bounded distributive lattice, the map `x ↦ {q in Q : q <= x}`, and the
/// verified isomorphism onto the finitely generated initial segments of
/// `Q`.
#[derive(Clone, Debug)]
pub struct BirkhoffIso {
    pub irreducibles: Vec<usize>,
    pub q_poset: Option<Poset>,
    pub phi: Vec<Subset>,
    pub target: SetFamily,
}

pub fn birkhoff_iso(l: &Poset) -> Result<BirkhoffIso, TailError> {
    let n = l.size();
    if l.bottom().is_none() {
        return Err(TailError::NotBounded { which: "least" });
    }
    if l.top().is_none() {
        return Err(TailError::NotBounded { which: "greatest" });
    }
    let mut joins = vec![vec![0usize; n]; n];
    let mut meets = vec![vec![0usize; n]; n];
    for x in 0..n {
        for y in 0..n {
            joins[x][y] = l.join(x, y).ok_or(TailError::NotLattice {
                x,
                y,
                which: "join",
            })?;
            meets[x][y] = l.meet(x, y).ok_or(TailError::NotLattice {
                x,
                y,
                which: "meet",
            })?;
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if meets[x][joins[y][z]] != joins[meets[x][y]][meets[x][z]] {
                    return Err(TailError::NotDistributive { x, y, z });
                }
            }
        }
    }

    let irr = l.join_irreducibles()?;
    let irreducibles: Vec<usize> = irr.ones().collect();
    let q = irreducibles.len();
    let phi: Vec<Subset> = (0..n)
        .map(|x| Subset::from_indices(q, (0..q).filter(|&i| l.leq(irreducibles[i], x))))
        .collect();
    let (q_poset, target) = if q == 0 {
        // Degenerate one-element lattice: Q empty, target the single empty
        // initial segment.
        (None, SetFamily::from_subsets(0, [Subset::empty(0)]))
    } else {
        let qp = l.induced(&irreducibles)?;
        let target = qp.fg_initial_segments();
        (Some(qp), target)
    };

    // Verify the map is an order isomorphism onto the target.
    let image = SetFamily::from_subsets(q, phi.iter().cloned());
    if image.len() != n {
        return Err(TailError::BirkhoffCheckFailed {
            detail: "phi is not injective".into(),
        });
    }
    if image != target {
        return Err(TailError::BirkhoffCheckFailed {
            detail: format!("image {image:?} differs from target {target:?}"),
        });
    }
    for x in 0..n {
        for y in 0..n {
            if l.leq(x, y) != phi[x].is_subset_of(&phi[y]) {
                return Err(TailError::BirkhoffCheckFailed {
                    detail: format!("order violated at {x},{y}"),
                });
            }
        }
    }

    Ok(BirkhoffIso {
        irreducibles,
        q_poset,
        phi,
        target,
    })
}

/// Checks that the final segments of `P` ordered by inclusion are
/// order-isomorphic to the ideals of the poset of finitely generated final
/// segments.
pub fn fg_final_ideals_iso(p: &Poset) -> bool {
    let final_poset = match inclusion_poset(&p.final_segments()) {
        Ok(q) => q,
        Err(_) => return false,
    };
    let fg_poset = match inclusion_poset(&p.fg_final_segments()) {
        Ok(q) => q,
        Err(_) => return false,
    };
    let ideal_poset = match inclusion_poset(&fg_poset.ideals()) {
        Ok(q) => q,
        Err(_) => return false,
    };
    are_isomorphic(&final_poset, &ideal_poset)
}

/// The free Boolean algebra over a poset, realized as the tail algebra of
/// the inclusion poset of the finitely generated final segments. The
/// embedding sends `x` to the set of segments containing it.
#[derive(Clone, Debug)]
pub struct FreeBooleanAlgebra {
    pub base: Poset,
    pub fg_final_segments: SetFamily,
    pub carrier: GeneratedFamily,
    pub embed: Vec<Subset>,
}

impl FreeBooleanAlgebra {
    pub fn carrier_size(&self) -> usize {
        self.carrier.len()
    }
}

pub fn free_boolean(p: &Poset) -> Result<FreeBooleanAlgebra, TailError> {
    free_boolean_with_cap(p, DEFAULT_FREE_GROUND_CAP)
}

pub fn free_boolean_with_cap(p: &Poset, cap: usize) -> Result<FreeBooleanAlgebra, TailError> {
    let fam = p.fg_final_segments();
    if fam.len() > cap {
        return Err(TailError::SizeError {
            what: "finitely generated final segment family",
            size: fam.len(),
            cap,
        });
    }
    let q = inclusion_poset(&fam)?;
    let carrier = tailalg(&q)?;
    let embed: Vec<Subset> = (0..p.size())
        .map(|x| {
            Subset::from_indices(
                fam.len(),
                (0..fam.len()).filter(|&i| fam.member(i).contains(x)),
            )
        })
        .collect();
    debug_assert!(embed.iter().all(|e| carrier.contains(e)));
    debug_assert!((0..p.size())
        .all(|x| (0..p.size()).all(|y| p.leq(x, y) == embed[x].is_subset_of(&embed[y]))));
    Ok(FreeBooleanAlgebra {
        base: p.clone(),
        fg_final_segments: fam,
        carrier,
        embed,
    })
}

/// Atoms (minimal nonempty members) of a Boolean set family.
fn atoms(family: &GeneratedFamily) -> Vec<usize> {
    let members = family.members();
    let k = family.len();
    (0..k)
        .filter(|&a| {
            !members.member(a).is_empty()
                && (0..k).all(|b| {
                    b == a
                        || members.member(b).is_empty()
                        || !members.member(b).is_subset_of(members.member(a))
                })
        })
        .collect()
}

/// Tests the defining property of the free Boolean algebra: an
/// order-preserving map `f` from `P` into a Boolean set family `B` must
/// extend to exactly one Boolean homomorphism from the free algebra.
///
/// Homomorphisms between finite Boolean algebras are enumerated through
/// their atom maps: each map from the atoms of `B` to the atoms of the
/// carrier induces one homomorphism, and every homomorphism arises from
/// exactly one such map.
pub fn universal_property_check(
    p: &Poset,
    b: &GeneratedFamily,
    f: &[usize],
) -> Result<bool, TailError> {
    if b.kind() != FamilyKind::Boolean {
        return Err(TailError::Spectra(SpectraError::KindError));
    }
    if f.len() != p.size() {
        return Err(TailError::MapLenMismatch {
            expected: p.size(),
            got: f.len(),
        });
    }
    for &v in f {
        if v >= b.len() {
            return Err(TailError::MapValueOutOfRange {
                value: v,
                size: b.len(),
            });
        }
    }
    for x in 0..p.size() {
        for y in 0..p.size() {
            if p.leq(x, y)
                && !b
                    .members()
                    .member(f[x])
                    .is_subset_of(b.members().member(f[y]))
            {
                return Err(TailError::NotMonotone { x, y });
            }
        }
    }

    let fb = free_boolean(p)?;
    let carrier_atoms = atoms(&fb.carrier);
    let b_atoms = atoms(b);
    let total = (carrier_atoms.len() as f64).powi(b_atoms.len() as i32);
    if total > 1e7 {
        return Err(TailError::SizeError {
            what: "atom-map search space",
            size: total as usize,
            cap: 10_000_000,
        });
    }

    // sigma: atoms(B) -> atoms(carrier), odometer enumeration. Each sigma
    // is one homomorphism; count how many restrict to f along the
    // embedding.
    let mut extensions = 0usize;
    let mut sigma = vec![0usize; b_atoms.len()];
    loop {
        let mut extends = true;
        for x in 0..p.size() {
            let mut image = Subset::empty(b.ground());
            for (ai, &b_atom) in b_atoms.iter().enumerate() {
                let carrier_atom = fb.carrier.members().member(carrier_atoms[sigma[ai]]);
                if carrier_atom.is_subset_of(&fb.embed[x]) {
                    image = image.union(b.members().member(b_atom));
                }
            }
            if &image != b.members().member(f[x]) {
                extends = false;
                break;
            }
        }
        if extends {
            extensions += 1;
        }
        // Advance the odometer; done when it wraps to all zeros.
        let mut pos = 0;
        loop {
            if pos == sigma.len() {
                return Ok(extensions == 1);
            }
            sigma[pos] += 1;
            if sigma[pos] < carrier_atoms.len() {
                break;
            }
            sigma[pos] = 0;
            pos += 1;
        }
    }
}

/// Batched form of the universal-property check over one target algebra:
/// verifies at once that every monotone map from `P` into `B` extends to
/// exactly one Boolean homomorphism.
///
/// All homomorphisms from the free algebra into `B` are enumerated once
/// through their atom maps and bucketed by their restriction along the
/// embedding; every monotone map must then own exactly one bucket entry.
#[derive(Clone, Debug)]
pub struct UniversalReport {
    pub monotone_maps: usize,
    pub all_extend_uniquely: bool,
    pub failures: Vec<String>,
}

pub fn universal_property_check_all(
    p: &Poset,
    b: &GeneratedFamily,
) -> Result<UniversalReport, TailError> {
    use std::collections::HashMap;
    if b.kind() != FamilyKind::Boolean {
        return Err(TailError::Spectra(SpectraError::KindError));
    }
    let fb = free_boolean(p)?;
    let carrier_atoms = atoms(&fb.carrier);
    let b_atoms = atoms(b);
    let sigma_total = (carrier_atoms.len() as f64).powi(b_atoms.len() as i32);
    let map_total = (b.len() as f64).powi(p.size() as i32);
    if sigma_total > 1e7 || map_total > 1e7 {
        return Err(TailError::SizeError {
            what: "universal-property search space",
            size: sigma_total.max(map_total) as usize,
            cap: 10_000_000,
        });
    }

    // Restriction vector of each atom-map homomorphism.
    let mut buckets: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sigma = vec![0usize; b_atoms.len()];
    loop {
        let mut restriction = Vec::with_capacity(p.size());
        for x in 0..p.size() {
            let mut image = Subset::empty(b.ground());
            for (ai, &b_atom) in b_atoms.iter().enumerate() {
                let carrier_atom = fb.carrier.members().member(carrier_atoms[sigma[ai]]);
                if carrier_atom.is_subset_of(&fb.embed[x]) {
                    image = image.union(b.members().member(b_atom));
                }
            }
            restriction.push(b.position(&image).expect("atom unions are members"));
        }
        *buckets.entry(restriction).or_insert(0) += 1;
        let mut pos = 0;
        loop {
            if pos == sigma.len() {
                // Odometer exhausted: check every monotone map.
                let mut monotone_maps = 0;
                let mut failures = Vec::new();
                let mut f = vec![0usize; p.size()];
                'maps: loop {
                    let monotone = (0..p.size()).all(|x| {
                        (0..p.size()).all(|y| {
                            !p.leq(x, y)
                                || b.members()
                                    .member(f[x])
                                    .is_subset_of(b.members().member(f[y]))
                        })
                    });
                    if monotone {
                        monotone_maps += 1;
                        match buckets.get(&f).copied().unwrap_or(0) {
                            1 => {}
                            k => failures.push(format!("map {f:?} has {k} extensions")),
                        }
                    }
                    let mut mp = 0;
                    loop {
                        if mp == f.len() {
                            break 'maps;
                        }
                        f[mp] += 1;
                        if f[mp] < b.len() {
                            break;
                        }
                        f[mp] = 0;
                        mp += 1;
                    }
                }
                let all_extend_uniquely = failures.is_empty();
                return Ok(UniversalReport {
                    monotone_maps,
                    all_extend_uniquely,
                    failures,
                });
            }
            sigma[pos] += 1;
            if sigma[pos] < carrier_atoms.len() {
                break;
            }
            sigma[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::all_posets;

    #[test]
    fn tail_families_of_small_posets() {
        let chain = Poset::chain(2).unwrap();
        let talg = tailalg(&chain).unwrap();
        assert_eq!(talg.members(), &SetFamily::powerset(2));

        let tlat = taillat(&chain).unwrap();
        assert_eq!(
            tlat.members(),
            &SetFamily::from_subsets(
                2,
                [Subset::empty(2), Subset::singleton(2, 1), Subset::full(2)]
            )
        );

        let single = Poset::chain(1).unwrap();
        assert_eq!(tailalg(&single).unwrap().len(), 2);
    }

    #[test]
    fn tailalg_size_is_two_to_the_poset_size() {
        // Columns of the order context are pairwise distinct, so the
        // counting theorem gives 2^|P|.
        for n in 1..=5 {
            for p in all_posets(n).unwrap() {
                assert_eq!(tailalg(&p).unwrap().len(), 1 << n);
            }
        }
    }

    #[test]
    fn taillat_members_are_the_final_segments() {
        for n in 1..=5 {
            for p in all_posets(n).unwrap() {
                let tlat = taillat(&p).unwrap();
                assert_eq!(tlat.members(), &p.final_segments());
            }
        }
    }

    #[test]
    fn closure_member_examples() {
        let chain = Poset::chain(2).unwrap();
        assert!(closure_member(&chain, &Subset::singleton(2, 0)).unwrap());
        assert!(!closure_member(&chain, &Subset::singleton(2, 1)).unwrap());
        assert!(!closure_member(&chain, &Subset::empty(2)).unwrap());
        assert!(matches!(
            closure_member(&chain, &Subset::empty(3)),
            Err(TailError::GroundMismatch { .. })
        ));
    }

    #[test]
    fn closure_of_down_examples() {
        let anti = Poset::antichain(2).unwrap();
        assert_eq!(
            closure_of_down(&anti),
            SetFamily::from_subsets(2, [Subset::singleton(2, 0), Subset::singleton(2, 1)])
        );
        let chain3 = Poset::chain(3).unwrap();
        assert_eq!(closure_of_down(&chain3).len(), 3);
        for n in 1..=5 {
            for p in all_posets(n).unwrap() {
                assert_eq!(closure_of_down(&p), p.down_family());
            }
        }
    }

    #[test]
    fn reduced_criterion_matches_full_quantification() {
        // Oracle for the reduction: quantify over every pair F ⊆ X,
        // G ⊆ P∖X directly on the down family.
        for n in 1..=4 {
            for p in all_posets(n).unwrap() {
                let down = p.down_family();
                let closure = topological_closure(&down);
                for w in 0u64..1 << n {
                    let x = Subset::from_word(n, w);
                    assert_eq!(
                        closure_member(&p, &x).unwrap(),
                        closure.contains(&x),
                        "poset {p:?}, subset {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn down_family_within_ideals_within_closure() {
        for n in 1..=5 {
            for p in all_posets(n).unwrap() {
                let closure_minus_empty = closure_of_down(&p).without_member(&Subset::empty(n));
                assert!(p.down_family().is_subfamily_of(&p.ideals()));
                assert!(p.ideals().is_subfamily_of(&closure_minus_empty));
            }
        }
    }

    #[test]
    fn empty_set_never_in_closure_iff_top_segment_finitely_generated() {
        for n in 1..=4 {
            for p in all_posets(n).unwrap() {
                let empty_in = closure_member(&p, &Subset::empty(n)).unwrap();
                let top_fg = p.fg_final_segments().contains(&Subset::full(n));
                assert_eq!(!empty_in, top_fg);
                assert!(top_fg, "finite posets always have P finitely generated");
            }
        }
    }

    #[test]
    fn check_pps_small_cases() {
        let chain = Poset::chain(2).unwrap();
        let rep = check_pps(&chain).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failures);

        let single = Poset::chain(1).unwrap();
        assert!(check_pps(&single).unwrap().passed());

        for p in all_posets(3).unwrap() {
            assert!(check_pps(&p).unwrap().passed());
        }
    }

    #[test]
    fn prop_ideals_examples() {
        let anti = Poset::antichain(2).unwrap();
        let rep = check_prop_ideals(&anti);
        assert!(rep.all_true() && rep.consistent(), "{:?}", rep.witnesses);
        assert!(rep.clause_e_raw);

        // The 4-element N poset: 0 <= 2, 1 <= 2, 1 <= 3.
        let n_poset = Poset::from_pairs(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let rep = check_prop_ideals(&n_poset);
        assert!(rep.all_true() && rep.consistent(), "{:?}", rep.witnesses);

        for n in 1..=4 {
            for p in all_posets(n).unwrap() {
                let rep = check_prop_ideals(&p);
                assert!(rep.all_true() && rep.consistent());
            }
        }
    }

    #[test]
    fn corollary_examples() {
        for p in [
            Poset::antichain(2).unwrap(),
            Poset::chain(3).unwrap(),
            Poset::chain(1).unwrap(),
        ] {
            let rep = check_cor_ideauxclos(&p);
            assert!(rep.equivalent());
            assert!(rep.ideals_closed && rep.fg_top_and_up_closed);
        }
    }

    #[test]
    fn join_semilattices_with_least_have_closed_ideals() {
        for n in 1..=4 {
            for p in all_posets(n).unwrap() {
                if p.bottom().is_some() && p.join_table().is_ok() {
                    let ideals = p.ideals();
                    assert_eq!(topological_closure(&ideals), ideals);
                }
            }
        }
    }

    #[test]
    fn birkhoff_on_named_lattices() {
        // Powerset of a 2-element set.
        let square = inclusion_poset(&SetFamily::powerset(2)).unwrap();
        let iso = birkhoff_iso(&square).unwrap();
        assert_eq!(iso.irreducibles.len(), 2);
        assert_eq!(iso.target.len(), 4);

        let chain3 = Poset::chain(3).unwrap();
        let iso = birkhoff_iso(&chain3).unwrap();
        assert_eq!(iso.irreducibles.len(), 2);
        assert_eq!(iso.target.len(), 3);

        let two = Poset::chain(2).unwrap();
        let iso = birkhoff_iso(&two).unwrap();
        assert_eq!(iso.irreducibles.len(), 1);
    }

    #[test]
    fn birkhoff_rejects_nondistributive_and_unbounded() {
        let m3 = Poset::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(matches!(
            birkhoff_iso(&m3),
            Err(TailError::NotDistributive { .. })
        ));

        // N5: 0 < 1 < 2 < 4 and 0 < 3 < 4.
        let n5 = Poset::from_pairs(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(matches!(
            birkhoff_iso(&n5),
            Err(TailError::NotDistributive { .. })
        ));

        let anti = Poset::antichain(2).unwrap();
        assert!(matches!(
            birkhoff_iso(&anti),
            Err(TailError::NotBounded { .. })
        ));
    }

    #[test]
    fn final_segments_match_ideals_of_fg_poset() {
        assert!(fg_final_ideals_iso(&Poset::chain(2).unwrap()));
        assert!(fg_final_ideals_iso(&Poset::antichain(2).unwrap()));
        assert!(fg_final_ideals_iso(&Poset::chain(1).unwrap()));
        for p in all_posets(3).unwrap() {
            assert!(fg_final_ideals_iso(&p));
        }
    }

    #[test]
    fn free_boolean_sizes() {
        assert_eq!(
            free_boolean(&Poset::antichain(2).unwrap())
                .unwrap()
                .carrier_size(),
            16
        );
        assert_eq!(
            free_boolean(&Poset::chain(2).unwrap())
                .unwrap()
                .carrier_size(),
            8
        );
        assert_eq!(
            free_boolean(&Poset::antichain(3).unwrap())
                .unwrap()
                .carrier_size(),
            256
        );
        assert!(matches!(
            free_boolean_with_cap(&Poset::antichain(3).unwrap(), 4),
            Err(TailError::SizeError { .. })
        ));
    }

    #[test]
    fn free_boolean_embedding_also_generates_the_carrier() {
        // The embedding images generate the same Boolean algebra as the
        // principal up-sets of the inclusion poset: two construction
        // routes, one algebra.
        for n in 1..=3 {
            for p in all_posets(n).unwrap() {
                let fb = free_boolean(&p).unwrap();
                let gens =
                    SetFamily::from_subsets(fb.fg_final_segments.len(), fb.embed.iter().cloned());
                let from_embed = generate_boolean(&gens).unwrap();
                assert_eq!(from_embed.members(), fb.carrier.members());
            }
        }
    }

    #[test]
    fn universal_property_examples() {
        // One-point poset into the 2-element algebra.
        let single = Poset::chain(1).unwrap();
        let b2 = generate_boolean(&SetFamily::new(2)).unwrap();
        for v in 0..b2.len() {
            assert!(universal_property_check(&single, &b2, &[v]).unwrap());
        }

        // Every monotone map from the 2-chain into the powerset of {0,1}.
        let chain = Poset::chain(2).unwrap();
        let pow2 = generate_boolean(&SetFamily::from_subsets(
            2,
            (0..2).map(|i| Subset::singleton(2, i)),
        ))
        .unwrap();
        let mut monotone = 0;
        for a in 0..pow2.len() {
            for b in 0..pow2.len() {
                if pow2
                    .members()
                    .member(a)
                    .is_subset_of(pow2.members().member(b))
                {
                    monotone += 1;
                    assert!(universal_property_check(&chain, &pow2, &[a, b]).unwrap());
                }
            }
        }
        assert_eq!(monotone, 9);

        // Both antichain points to one atom.
        let anti = Poset::antichain(2).unwrap();
        let atom = pow2.position(&Subset::singleton(2, 0)).unwrap();
        assert!(universal_property_check(&anti, &pow2, &[atom, atom]).unwrap());
    }

    #[test]
    fn batched_universal_check_agrees_with_single_map_route() {
        let pow2 = generate_boolean(&SetFamily::from_subsets(
            2,
            (0..2).map(|i| Subset::singleton(2, i)),
        ))
        .unwrap();
        for n in 1..=2 {
            for p in all_posets(n).unwrap() {
                let report = universal_property_check_all(&p, &pow2).unwrap();
                assert!(report.all_extend_uniquely, "{:?}", report.failures);
                // Replays every monotone map through the single-map API.
                let mut count = 0;
                let mut f = vec![0usize; p.size()];
                'maps: loop {
                    match universal_property_check(&p, &pow2, &f) {
                        Ok(unique) => {
                            count += 1;
                            assert!(unique);
                        }
                        Err(TailError::NotMonotone { .. }) => {}
                        Err(e) => panic!("unexpected error {e}"),
                    }
                    let mut mp = 0;
                    loop {
                        if mp == f.len() {
                            break 'maps;
                        }
                        f[mp] += 1;
                        if f[mp] < pow2.len() {
                            break;
                        }
                        f[mp] = 0;
                        mp += 1;
                    }
                }
                assert_eq!(count, report.monotone_maps);
            }
        }
    }

    #[test]
    fn universal_property_rejects_bad_maps() {
        let chain = Poset::chain(2).unwrap();
        let pow2 = generate_boolean(&SetFamily::from_subsets(
            2,
            (0..2).map(|i| Subset::singleton(2, i)),
        ))
        .unwrap();
        let top = pow2.position(&Subset::full(2)).unwrap();
        let bot = pow2.position(&Subset::empty(2)).unwrap();
        assert!(matches!(
            universal_property_check(&chain, &pow2, &[top, bot]),
            Err(TailError::NotMonotone { .. })
        ));
        assert!(matches!(
            universal_property_check(&chain, &pow2, &[0]),
            Err(TailError::MapLenMismatch { .. })
        ));
    }

    #[test]
    fn remark_least_element_transform() {
        let anti = Poset::antichain(2).unwrap();
        let lifted = anti.with_least_element();
        assert_eq!(lifted.size(), 3);
        assert_eq!(lifted.bottom(), Some(2));
        // The transform is never applied implicitly: the tail lattice of
        // the original antichain is computed on the antichain itself.
        assert_eq!(taillat(&anti).unwrap().ground(), 2);
    }
}
