//! Finite universal algebras as explicit operation tables: preservation
//! and commutation, subalgebra generation in finite powers, backtracking
//! homomorphism enumeration, the projection-property family of checkers,
//! centralizers and the Pol/Inv correspondences at bounded arity, and
//! valued incidence structures with the homomorphism-versus-column check.
//!
//! Operation tables list values in lexicographic argument order with the
//! leftmost argument most significant, so serialized tables are portable.
//! Constants are modeled as unary constant operations.

use crate::spectra::DualityReport;
use std::collections::HashSet;
use thiserror::Error;

/// Caps for the exhaustive modes.
pub const MAX_UNIVERSE: usize = 4;
pub const MAX_POWER: usize = 3;
/// Largest operation-table enumeration (`k^(k^arity)` tables).
pub const MAX_OP_TABLES: u64 = 1 << 20;
/// Exhaustive subalgebra enumeration runs while `k^n` stays at or below
/// this; beyond it the generated-closure enumeration takes over.
pub const EXHAUSTIVE_SUBSET_BOUND: usize = 16;
/// Default cap on tuple counts during subalgebra generation.
pub const DEFAULT_TUPLE_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UalgError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("table length {got} does not match k^arity = {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("value {value} out of universe of size {universe}")]
    ValueError { value: usize, universe: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityError { expected: usize, got: usize },
    #[error("operations over universes {left} and {right} cannot be combined")]
    UniverseMismatch { left: usize, right: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeError {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("element set is not closed under {op}")]
    NotSubalgebra { op: String },
    #[error("map is not a homomorphism: {reason}")]
    NotHom { reason: String },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
}

/// An `arity`-ary operation on the universe `{0, .., k-1}`, tabled in
/// lexicographic argument order (leftmost argument most significant).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Operation {
    universe: usize,
    arity: usize,
    table: Vec<usize>,
}

fn power(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl Operation {
    pub fn new(universe: usize, arity: usize, table: Vec<usize>) -> Result<Self, UalgError> {
        if universe == 0 {
            return Err(UalgError::EmptyUniverse);
        }
        if arity == 0 {
            return Err(UalgError::ZeroArity);
        }
        let expected = power(universe, arity).ok_or(UalgError::SizeError {
            what: "operation table",
            size: usize::MAX,
            cap: MAX_OP_TABLES as usize,
        })?;
        if table.len() != expected {
            return Err(UalgError::TableSize {
                expected,
                got: table.len(),
            });
        }
        if let Some(&value) = table.iter().find(|&&v| v >= universe) {
            return Err(UalgError::ValueError { value, universe });
        }
        Ok(Operation {
            universe,
            arity,
            table,
        })
    }

    /// The `coord`-th `arity`-ary projection.
    pub fn projection(universe: usize, arity: usize, coord: usize) -> Self {
        assert!(coord < arity);
        let size = power(universe, arity).expect("projection table fits");
        let mut table = vec![0; size];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut rest = idx;
            let mut args = vec![0; arity];
            for a in (0..arity).rev() {
                args[a] = rest % universe;
                rest /= universe;
            }
            *slot = args[coord];
        }
        Operation {
            universe,
            arity,
            table,
        }
    }

    /// The `arity`-ary constant operation with the given value.
    pub fn constant(universe: usize, arity: usize, value: usize) -> Self {
        assert!(value < universe);
        let size = power(universe, arity).expect("constant table fits");
        Operation {
            universe,
            arity,
            table: vec![value; size],
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    fn index_of(&self, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.universe + a;
        }
        idx
    }

    pub fn apply(&self, args: &[usize]) -> Result<usize, UalgError> {
        if args.len() != self.arity {
            return Err(UalgError::ArityError {
                expected: self.arity,
                got: args.len(),
            });
        }
        if let Some(&value) = args.iter().find(|&&v| v >= self.universe) {
            return Err(UalgError::ValueError {
                value,
                universe: self.universe,
            });
        }
        Ok(self.table[self.index_of(args)])
    }

    fn apply_unchecked(&self, args: &[usize]) -> usize {
        self.table[self.index_of(args)]
    }
}

/// Exact flags of an operation: which projection it is (if any), whether
/// it is idempotent, whether it is constant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub projection: Option<usize>,
    pub idempotent: bool,
    pub constant: bool,
}

pub fn classify(f: &Operation) -> Classification {
    let projection =
        (0..f.arity).find(|&i| Operation::projection(f.universe, f.arity, i).table == f.table);
    let idempotent = (0..f.universe).all(|x| {
        let args = vec![x; f.arity];
        f.apply_unchecked(&args) == x
    });
    let constant = f.table.windows(2).all(|w| w[0] == w[1]);
    Classification {
        projection,
        idempotent,
        constant,
    }
}

/// All operations of the given arity in canonical table order.
pub fn all_operations(universe: usize, arity: usize) -> Result<Vec<Operation>, UalgError> {
    if universe == 0 {
        return Err(UalgError::EmptyUniverse);
    }
    if arity == 0 {
        return Err(UalgError::ZeroArity);
    }
    let table_size = power(universe, arity).ok_or(UalgError::SizeError {
        what: "operation table",
        size: usize::MAX,
        cap: MAX_OP_TABLES as usize,
    })?;
    let mut count: u64 = 1;
    for _ in 0..table_size {
        count = count.saturating_mul(universe as u64);
        if count > MAX_OP_TABLES {
            return Err(UalgError::SizeError {
                what: "operation enumeration",
                size: table_size,
                cap: MAX_OP_TABLES as usize,
            });
        }
    }
    let mut ops = Vec::with_capacity(count as usize);
    let mut table = vec![0usize; table_size];
    loop {
        ops.push(Operation {
            universe,
            arity,
            table: table.clone(),
        });
        // Advance the table as a base-k number, last slot fastest.
        let mut pos = table_size;
        loop {
            if pos == 0 {
                return Ok(ops);
            }
            pos -= 1;
            table[pos] += 1;
            if table[pos] < universe {
                break;
            }
            table[pos] = 0;
        }
    }
}

/// An `arity`-ary relation: a canonical set of tuples over the universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    universe: usize,
    arity: usize,
    tuples: Vec<Vec<usize>>,
}

impl Relation {
    pub fn new(
        universe: usize,
        arity: usize,
        mut tuples: Vec<Vec<usize>>,
    ) -> Result<Self, UalgError> {
        if universe == 0 {
            return Err(UalgError::EmptyUniverse);
        }
        if arity == 0 {
            return Err(UalgError::ZeroArity);
        }
        for t in &tuples {
            if t.len() != arity {
                return Err(UalgError::ArityError {
                    expected: arity,
                    got: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= universe) {
                return Err(UalgError::ValueError { value, universe });
            }
        }
        tuples.sort();
        tuples.dedup();
        Ok(Relation {
            universe,
            arity,
            tuples,
        })
    }

    /// The full relation `E^n`, tuples in lexicographic order.
    pub fn full(universe: usize, arity: usize) -> Self {
        let mut tuples = Vec::new();
        let mut t = vec![0usize; arity];
        loop {
            tuples.push(t.clone());
            let mut pos = arity;
            loop {
                if pos == 0 {
                    return Relation {
                        universe,
                        arity,
                        tuples,
                    };
                }
                pos -= 1;
                t[pos] += 1;
                if t[pos] < universe {
                    break;
                }
                t[pos] = 0;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Whether `f` preserves `rho`: every matrix whose rows lie in `rho` maps
/// column-wise into `rho`.
pub fn preserves(f: &Operation, rho: &Relation) -> Result<bool, UalgError> {
    if f.universe != rho.universe {
        return Err(UalgError::UniverseMismatch {
            left: f.universe,
            right: rho.universe,
        });
    }
    if rho.is_empty() {
        return Ok(true);
    }
    let m = f.arity;
    let n = rho.arity;
    let rows = &rho.tuples;
    let member: HashSet<&[usize]> = rows.iter().map(|t| t.as_slice()).collect();
    let mut sel = vec![0usize; m];
    let mut image = vec![0usize; n];
    let mut args = vec![0usize; m];
    loop {
        for j in 0..n {
            for (i, &s) in sel.iter().enumerate() {
                args[i] = rows[s][j];
            }
            image[j] = f.apply_unchecked(&args);
        }
        if !member.contains(image.as_slice()) {
            return Ok(false);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            sel[pos] += 1;
            if sel[pos] < rows.len() {
                break;
            }
            sel[pos] = 0;
        }
    }
}

/// The graph relation of `g`: all tuples `(x_1, .., x_n, g(x_1, .., x_n))`.
pub fn graph(g: &Operation) -> Relation {
    let full = Relation::full(g.universe, g.arity);
    let tuples = full
        .tuples
        .iter()
        .map(|t| {
            let mut row = t.clone();
            row.push(g.apply_unchecked(t));
            row
        })
        .collect();
    Relation {
        universe: g.universe,
        arity: g.arity + 1,
        tuples,
    }
}

/// `f` commutes with `g` iff `f` preserves the graph of `g`.
pub fn commutes(f: &Operation, g: &Operation) -> Result<bool, UalgError> {
    preserves(f, &graph(g))
}

/// A finite universal algebra: a shared universe and named operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteAlgebra {
    universe: usize,
    ops: Vec<(String, Operation)>,
}

impl FiniteAlgebra {
    pub fn new(universe: usize, ops: Vec<(String, Operation)>) -> Result<Self, UalgError> {
        if universe == 0 {
            return Err(UalgError::EmptyUniverse);
        }
        for (_, op) in &ops {
            if op.universe != universe {
                return Err(UalgError::UniverseMismatch {
                    left: universe,
                    right: op.universe,
                });
            }
        }
        Ok(FiniteAlgebra { universe, ops })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn ops(&self) -> &[(String, Operation)] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|(n, _)| n == name).map(|(_, op)| op)
    }
}

/// The 2-element Boolean algebra: meet, join, complement and both
/// constants (as unary operations).
pub fn boolean2() -> FiniteAlgebra {
    FiniteAlgebra::new(
        2,
        vec![
            (
                "and".into(),
                Operation::new(2, 2, vec![0, 0, 0, 1]).unwrap(),
            ),
            ("or".into(), Operation::new(2, 2, vec![0, 1, 1, 1]).unwrap()),
            ("not".into(), Operation::new(2, 1, vec![1, 0]).unwrap()),
            ("const0".into(), Operation::constant(2, 1, 0)),
            ("const1".into(), Operation::constant(2, 1, 1)),
        ],
    )
    .unwrap()
}

/// The 2-element bounded lattice: meet, join and both constants.
pub fn lattice2() -> FiniteAlgebra {
    FiniteAlgebra::new(
        2,
        vec![
            (
                "and".into(),
                Operation::new(2, 2, vec![0, 0, 0, 1]).unwrap(),
            ),
            ("or".into(), Operation::new(2, 2, vec![0, 1, 1, 1]).unwrap()),
            ("const0".into(), Operation::constant(2, 1, 0)),
            ("const1".into(), Operation::constant(2, 1, 1)),
        ],
    )
    .unwrap()
}

/// The algebra whose operations are every operation of arity up to
/// `arity_max` on the given universe.
pub fn algebra_of_all_ops(universe: usize, arity_max: usize) -> Result<FiniteAlgebra, UalgError> {
    let mut ops = Vec::new();
    for a in 1..=arity_max {
        for (i, op) in all_operations(universe, a)?.into_iter().enumerate() {
            ops.push((format!("op{a}_{i}"), op));
        }
    }
    FiniteAlgebra::new(universe, ops)
}

/// A validated subalgebra of `K^power`: a canonical, closed tuple set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subalgebra {
    universe: usize,
    power: usize,
    elements: Vec<Vec<usize>>,
}

impl Subalgebra {
    /// Validates closure of the element set under every operation of the
    /// algebra and canonicalizes the order.
    pub fn new(
        algebra: &FiniteAlgebra,
        power: usize,
        mut elements: Vec<Vec<usize>>,
    ) -> Result<Self, UalgError> {
        for t in &elements {
            if t.len() != power {
                return Err(UalgError::ArityError {
                    expected: power,
                    got: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= algebra.universe) {
                return Err(UalgError::ValueError {
                    value,
                    universe: algebra.universe,
                });
            }
        }
        elements.sort();
        elements.dedup();
        let member: HashSet<&[usize]> = elements.iter().map(|t| t.as_slice()).collect();
        for (name, op) in &algebra.ops {
            if elements.is_empty() {
                break;
            }
            let r = op.arity;
            let mut sel = vec![0usize; r];
            'combos: loop {
                let image: Vec<usize> = (0..power)
                    .map(|j| {
                        let args: Vec<usize> = sel.iter().map(|&s| elements[s][j]).collect();
                        op.apply_unchecked(&args)
                    })
                    .collect();
                if !member.contains(image.as_slice()) {
                    return Err(UalgError::NotSubalgebra { op: name.clone() });
                }
                let mut pos = r;
                loop {
                    if pos == 0 {
                        break 'combos;
                    }
                    pos -= 1;
                    sel[pos] += 1;
                    if sel[pos] < elements.len() {
                        break;
                    }
                    sel[pos] = 0;
                }
            }
        }
        Ok(Subalgebra {
            universe: algebra.universe,
            power,
            elements,
        })
    }

    /// Least closed superset of the generators: worklist closure under
    /// coordinatewise application of every operation.
    pub fn generate(
        algebra: &FiniteAlgebra,
        power: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, UalgError> {
        for t in gens {
            if t.len() != power {
                return Err(UalgError::ArityError {
                    expected: power,
                    got: t.len(),
                });
            }
            if let Some(&value) = t.iter().find(|&&v| v >= algebra.universe) {
                return Err(UalgError::ValueError {
                    value,
                    universe: algebra.universe,
                });
            }
        }
        let mut set: HashSet<Vec<usize>> = HashSet::new();
        let mut list: Vec<Vec<usize>> = Vec::new();
        for g in gens {
            if set.insert(g.clone()) {
                list.push(g.clone());
            }
        }
        let mut next = 0;
        while next < list.len() {
            if list.len() > cap {
                return Err(UalgError::SizeError {
                    what: "generated subalgebra",
                    size: list.len(),
                    cap,
                });
            }
            let snapshot = list.len();
            for (_, op) in &algebra.ops {
                let r = op.arity;
                // Argument selections using the element under processing at
                // least once, everything else over the current list.
                for slot in 0..r {
                    let mut sel = vec![0usize; r];
                    sel[slot] = next;
                    'combos: loop {
                        let image: Vec<usize> = (0..power)
                            .map(|j| {
                                let args: Vec<usize> = sel.iter().map(|&s| list[s][j]).collect();
                                op.apply_unchecked(&args)
                            })
                            .collect();
                        if set.insert(image.clone()) {
                            list.push(image);
                        }
                        let mut pos = r;
                        loop {
                            if pos == 0 {
                                break 'combos;
                            }
                            pos -= 1;
                            if pos == slot {
                                continue;
                            }
                            sel[pos] += 1;
                            if sel[pos] < snapshot {
                                break;
                            }
                            sel[pos] = 0;
                        }
                    }
                }
            }
            next += 1;
        }
        if list.len() > cap {
            return Err(UalgError::SizeError {
                what: "generated subalgebra",
                size: list.len(),
                cap,
            });
        }
        list.sort();
        Ok(Subalgebra {
            universe: algebra.universe,
            power,
            elements: list,
        })
    }

    /// The full power `K^n` as a subalgebra.
    pub fn full_power(algebra: &FiniteAlgebra, power_n: usize) -> Result<Self, UalgError> {
        let size = power(algebra.universe, power_n).ok_or(UalgError::SizeError {
            what: "full power",
            size: usize::MAX,
            cap: DEFAULT_TUPLE_CAP,
        })?;
        if size > DEFAULT_TUPLE_CAP {
            return Err(UalgError::SizeError {
                what: "full power",
                size,
                cap: DEFAULT_TUPLE_CAP,
            });
        }
        let elements = Relation::full(algebra.universe, power_n).tuples;
        Ok(Subalgebra {
            universe: algebra.universe,
            power: power_n,
            elements,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_slice().cmp(t)).ok()
    }
}

/// One application constraint inside a subalgebra: the op applied to the
/// elements at `args` yields the element at `result`.
struct Constraint {
    op: usize,
    args: Vec<usize>,
    result: usize,
}

fn propagate(
    algebra: &FiniteAlgebra,
    constraints: &[Constraint],
    assigned: &mut [Option<usize>],
    forced: &mut [Option<usize>],
    trail: &mut Vec<usize>,
) -> bool {
    for c in constraints {
        let args: Vec<usize> = c
            .args
            .iter()
            .map(|&s| assigned[s].expect("trigger guarantees assignment"))
            .collect();
        let value = algebra.ops[c.op].1.apply_unchecked(&args);
        match assigned[c.result] {
            Some(v) => {
                if v != value {
                    return false;
                }
            }
            None => match forced[c.result] {
                Some(v) => {
                    if v != value {
                        return false;
                    }
                }
                None => {
                    forced[c.result] = Some(value);
                    trail.push(c.result);
                }
            },
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn hom_dfs(
    algebra: &FiniteAlgebra,
    by_trigger: &[Vec<Constraint>],
    assigned: &mut Vec<Option<usize>>,
    forced: &mut Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
    k: usize,
    p: usize,
) {
    if p == assigned.len() {
        out.push(assigned.iter().map(|v| v.unwrap()).collect());
        return;
    }
    let candidates: Vec<usize> = match forced[p] {
        Some(v) => vec![v],
        None => (0..k).collect(),
    };
    for v in candidates {
        assigned[p] = Some(v);
        let mut trail = Vec::new();
        if propagate(algebra, &by_trigger[p], assigned, forced, &mut trail) {
            hom_dfs(algebra, by_trigger, assigned, forced, out, k, p + 1);
        }
        for t in trail {
            forced[t] = None;
        }
        assigned[p] = None;
    }
}

/// All homomorphisms from a subalgebra of `K^n` into `K`, as value vectors
/// indexed like the subalgebra's canonical element order.
///
/// Backtracking assigns values in canonical element order with eager
/// propagation: once an application's arguments are assigned, its result
/// is forced. Every returned map is re-validated against the operation
/// tables in an independent pass.
pub fn homs(sub: &Subalgebra, algebra: &FiniteAlgebra) -> Result<Vec<Vec<usize>>, UalgError> {
    if sub.universe != algebra.universe {
        return Err(UalgError::UniverseMismatch {
            left: sub.universe,
            right: algebra.universe,
        });
    }
    let len = sub.len();
    if len == 0 {
        return Ok(vec![Vec::new()]);
    }
    let k = algebra.universe;

    // Constraints grouped by the largest element index among the arguments
    // (the moment all arguments are known).
    let mut by_trigger: Vec<Vec<Constraint>> = (0..len).map(|_| Vec::new()).collect();
    for (oi, (name, op)) in algebra.ops.iter().enumerate() {
        let r = op.arity;
        let combos = power(len, r).ok_or(UalgError::SizeError {
            what: "constraint table",
            size: usize::MAX,
            cap: DEFAULT_TUPLE_CAP,
        })?;
        if combos > DEFAULT_TUPLE_CAP {
            return Err(UalgError::SizeError {
                what: "constraint table",
                size: combos,
                cap: DEFAULT_TUPLE_CAP,
            });
        }
        let mut sel = vec![0usize; r];
        'combos: loop {
            let image: Vec<usize> = (0..sub.power)
                .map(|j| {
                    let args: Vec<usize> = sel.iter().map(|&s| sub.elements[s][j]).collect();
                    op.apply_unchecked(&args)
                })
                .collect();
            let result = sub
                .position(&image)
                .ok_or_else(|| UalgError::NotSubalgebra { op: name.clone() })?;
            let trigger = sel.iter().copied().max().unwrap_or(0);
            by_trigger[trigger].push(Constraint {
                op: oi,
                args: sel.clone(),
                result,
            });
            let mut pos = r;
            loop {
                if pos == 0 {
                    break 'combos;
                }
                pos -= 1;
                sel[pos] += 1;
                if sel[pos] < len {
                    break;
                }
                sel[pos] = 0;
            }
        }
    }

    let mut assigned: Vec<Option<usize>> = vec![None; len];
    let mut forced: Vec<Option<usize>> = vec![None; len];
    let mut out: Vec<Vec<usize>> = Vec::new();
    hom_dfs(
        algebra,
        &by_trigger,
        &mut assigned,
        &mut forced,
        &mut out,
        k,
        0,
    );

    // Independent validation pass straight from the operation tables.
    for h in &out {
        for (name, op) in &algebra.ops {
            let r = op.arity;
            let mut sel = vec![0usize; r];
            'combos: loop {
                let image: Vec<usize> = (0..sub.power)
                    .map(|j| {
                        let args: Vec<usize> = sel.iter().map(|&s| sub.elements[s][j]).collect();
                        op.apply_unchecked(&args)
                    })
                    .collect();
                let result = sub.position(&image).expect("closure validated");
                let mapped: Vec<usize> = sel.iter().map(|&s| h[s]).collect();
                if h[result] != op.apply_unchecked(&mapped) {
                    return Err(UalgError::NotHom {
                        reason: format!("search produced a map violating {name}"),
                    });
                }
                let mut pos = r;
                loop {
                    if pos == 0 {
                        break 'combos;
                    }
                    pos -= 1;
                    sel[pos] += 1;
                    if sel[pos] < sub.len() {
                        break;
                    }
                    sel[pos] = 0;
                }
            }
        }
    }
    Ok(out)
}

/// The coordinate whose projection restricts to the given map, if any.
pub fn hom_as_projection(sub: &Subalgebra, h: &[usize]) -> Option<usize> {
    (0..sub.power).find(|&j| sub.elements.iter().enumerate().all(|(e, t)| h[e] == t[j]))
}

fn check_power_caps(algebra: &FiniteAlgebra, n_max: usize) -> Result<(), UalgError> {
    if algebra.universe > MAX_UNIVERSE {
        return Err(UalgError::SizeError {
            what: "universe",
            size: algebra.universe,
            cap: MAX_UNIVERSE,
        });
    }
    if n_max > MAX_POWER {
        return Err(UalgError::SizeError {
            what: "power bound",
            size: n_max,
            cap: MAX_POWER,
        });
    }
    Ok(())
}

/// A failed instance: the power, the offending subalgebra and the
/// homomorphism that is not a projection.
#[derive(Clone, Debug)]
pub struct HomWitness {
    pub power: usize,
    pub subalgebra: Vec<Vec<usize>>,
    pub hom: Vec<usize>,
}

/// Result of a projection-style check with its witnesses and the
/// enumeration mode used per power.
#[derive(Clone, Debug)]
pub struct ProjectionReport {
    pub holds: bool,
    pub witnesses: Vec<HomWitness>,
    pub modes: Vec<(usize, &'static str)>,
}

/// Every idempotent homomorphism `K^n -> K` for `n <= n_max` must be a
/// projection.
pub fn has_projection_property(
    algebra: &FiniteAlgebra,
    n_max: usize,
) -> Result<ProjectionReport, UalgError> {
    check_power_caps(algebra, n_max)?;
    let mut witnesses = Vec::new();
    let mut modes = Vec::new();
    for n in 1..=n_max {
        modes.push((n, "full-power"));
        let full = Subalgebra::full_power(algebra, n)?;
        for h in homs(&full, algebra)? {
            let idempotent = (0..algebra.universe).all(|x| {
                let diag = vec![x; n];
                h[full.position(&diag).unwrap()] == x
            });
            if idempotent && hom_as_projection(&full, &h).is_none() {
                witnesses.push(HomWitness {
                    power: n,
                    subalgebra: full.elements.clone(),
                    hom: h,
                });
            }
        }
    }
    Ok(ProjectionReport {
        holds: witnesses.is_empty(),
        witnesses,
        modes,
    })
}

/// All closed subsets of `K^n` (the subuniverses, optionally with the
/// empty one), by exhaustive subset scan. Requires `k^n` at most
/// [`EXHAUSTIVE_SUBSET_BOUND`].
pub fn closed_subsets(
    algebra: &FiniteAlgebra,
    n: usize,
    include_empty: bool,
) -> Result<Vec<Vec<Vec<usize>>>, UalgError> {
    let size = power(algebra.universe, n).ok_or(UalgError::SizeError {
        what: "power size",
        size: usize::MAX,
        cap: EXHAUSTIVE_SUBSET_BOUND,
    })?;
    if size > EXHAUSTIVE_SUBSET_BOUND {
        return Err(UalgError::SizeError {
            what: "exhaustive subset scan",
            size,
            cap: EXHAUSTIVE_SUBSET_BOUND,
        });
    }
    let tuples = Relation::full(algebra.universe, n).tuples;
    let mut result = Vec::new();
    'masks: for mask in 0u64..1 << size {
        if mask == 0 && !include_empty {
            continue;
        }
        let chosen: Vec<Vec<usize>> = (0..size)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| tuples[i].clone())
            .collect();
        let member: HashSet<&[usize]> = chosen.iter().map(|t| t.as_slice()).collect();
        for (_, op) in &algebra.ops {
            if chosen.is_empty() {
                break;
            }
            let r = op.arity;
            let mut sel = vec![0usize; r];
            'combos: loop {
                let image: Vec<usize> = (0..n)
                    .map(|j| {
                        let args: Vec<usize> = sel.iter().map(|&s| chosen[s][j]).collect();
                        op.apply_unchecked(&args)
                    })
                    .collect();
                if !member.contains(image.as_slice()) {
                    continue 'masks;
                }
                let mut pos = r;
                loop {
                    if pos == 0 {
                        break 'combos;
                    }
                    pos -= 1;
                    sel[pos] += 1;
                    if sel[pos] < chosen.len() {
                        break;
                    }
                    sel[pos] = 0;
                }
            }
        }
        result.push(chosen);
    }
    Ok(result)
}

/// Every homomorphism from every subalgebra of `K^n` (for `n <= n_max`)
/// into `K` must be induced by a projection. Exhaustive subset enumeration
/// while `k^n` is small; generated-closure enumeration (all generator sets
/// of size up to 3) beyond that, with the mode recorded in the report.
pub fn is_projectively_trivial(
    algebra: &FiniteAlgebra,
    n_max: usize,
) -> Result<ProjectionReport, UalgError> {
    check_power_caps(algebra, n_max)?;
    let mut witnesses = Vec::new();
    let mut modes = Vec::new();
    for n in 1..=n_max {
        let size = power(algebra.universe, n).unwrap();
        let subalgebras: Vec<Vec<Vec<usize>>> = if size <= EXHAUSTIVE_SUBSET_BOUND {
            modes.push((n, "exhaustive"));
            closed_subsets(algebra, n, false)?
        } else {
            modes.push((n, "generated"));
            let tuples = Relation::full(algebra.universe, n).tuples;
            let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
            let t = tuples.len();
            for a in 0..t {
                for b in a..t {
                    for c in b..t {
                        let gens = vec![tuples[a].clone(), tuples[b].clone(), tuples[c].clone()];
                        let sub = Subalgebra::generate(algebra, n, &gens, DEFAULT_TUPLE_CAP)?;
                        seen.insert(sub.elements.clone());
                    }
                }
            }
            let mut list: Vec<Vec<Vec<usize>>> = seen.into_iter().collect();
            list.sort();
            list
        };
        for elements in subalgebras {
            if elements.is_empty() {
                continue;
            }
            let sub = Subalgebra::new(algebra, n, elements)?;
            for h in homs(&sub, algebra)? {
                if hom_as_projection(&sub, &h).is_none() {
                    witnesses.push(HomWitness {
                        power: n,
                        subalgebra: sub.elements.clone(),
                        hom: h,
                    });
                }
            }
        }
    }
    Ok(ProjectionReport {
        holds: witnesses.is_empty(),
        witnesses,
        modes,
    })
}

/// Projectivity: every homomorphism `K^n -> K` (for `n <= n_max`) is a
/// projection. Also reports rigidity (the `n = 1` case: the identity is
/// the only endomorphism).
pub fn is_projective(
    algebra: &FiniteAlgebra,
    n_max: usize,
) -> Result<(ProjectionReport, bool), UalgError> {
    check_power_caps(algebra, n_max)?;
    let mut witnesses = Vec::new();
    let mut modes = Vec::new();
    let mut rigid = true;
    for n in 1..=n_max.max(1) {
        modes.push((n, "full-power"));
        let full = Subalgebra::full_power(algebra, n)?;
        for h in homs(&full, algebra)? {
            if hom_as_projection(&full, &h).is_none() {
                if n == 1 {
                    rigid = false;
                }
                witnesses.push(HomWitness {
                    power: n,
                    subalgebra: full.elements.clone(),
                    hom: h,
                });
            }
        }
    }
    Ok((
        ProjectionReport {
            holds: witnesses.is_empty(),
            witnesses,
            modes,
        },
        rigid,
    ))
}

/// All operations of arity up to `arity_max` commuting with every
/// operation of the algebra, in canonical order.
pub fn centralizer(algebra: &FiniteAlgebra, arity_max: usize) -> Result<Vec<Operation>, UalgError> {
    let mut out = Vec::new();
    for a in 1..=arity_max {
        for op in all_operations(algebra.universe, a)? {
            let mut ok = true;
            for (_, f) in &algebra.ops {
                if !commutes(&op, f)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(op);
            }
        }
    }
    Ok(out)
}

/// All operations of arity up to `arity_max` preserving every listed
/// relation.
pub fn polymorph(relations: &[Relation], arity_max: usize) -> Result<Vec<Operation>, UalgError> {
    let universe = match relations.first() {
        Some(r) => r.universe,
        None => return Err(UalgError::EmptyUniverse),
    };
    for r in relations {
        if r.universe != universe {
            return Err(UalgError::UniverseMismatch {
                left: universe,
                right: r.universe,
            });
        }
    }
    let mut out = Vec::new();
    for a in 1..=arity_max {
        for op in all_operations(universe, a)? {
            let mut ok = true;
            for r in relations {
                if !preserves(&op, r)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(op);
            }
        }
    }
    Ok(out)
}

/// All relations of arity up to `arity_max` preserved by every operation
/// of the algebra. These are exactly the subuniverses of the matching
/// finite powers; the agreement with [`closed_subsets`] is a checked
/// invariant.
pub fn invariants(algebra: &FiniteAlgebra, arity_max: usize) -> Result<Vec<Relation>, UalgError> {
    let mut out = Vec::new();
    for n in 1..=arity_max {
        let size = power(algebra.universe, n).ok_or(UalgError::SizeError {
            what: "power size",
            size: usize::MAX,
            cap: EXHAUSTIVE_SUBSET_BOUND,
        })?;
        if size > EXHAUSTIVE_SUBSET_BOUND {
            return Err(UalgError::SizeError {
                what: "relation enumeration",
                size,
                cap: EXHAUSTIVE_SUBSET_BOUND,
            });
        }
        let tuples = Relation::full(algebra.universe, n).tuples;
        'masks: for mask in 0u64..1 << size {
            let chosen: Vec<Vec<usize>> = (0..size)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| tuples[i].clone())
                .collect();
            let rho = Relation {
                universe: algebra.universe,
                arity: n,
                tuples: chosen,
            };
            for (_, f) in &algebra.ops {
                if !preserves(f, &rho)? {
                    continue 'masks;
                }
            }
            out.push(rho);
        }
    }
    Ok(out)
}

/// A matrix valued in a finite algebra, with its rows as generators of a
/// subalgebra of `K^J`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValuedMatrix {
    algebra: FiniteAlgebra,
    entries: Vec<Vec<usize>>,
}

impl ValuedMatrix {
    pub fn new(algebra: FiniteAlgebra, entries: Vec<Vec<usize>>) -> Result<Self, UalgError> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(UalgError::EmptyMatrix);
        }
        let n = entries[0].len();
        for row in &entries {
            if row.len() != n {
                return Err(UalgError::ArityError {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(&value) = row.iter().find(|&&v| v >= algebra.universe) {
                return Err(UalgError::ValueError {
                    value,
                    universe: algebra.universe,
                });
            }
        }
        Ok(ValuedMatrix { algebra, entries })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.entries[0].len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.m()).map(|i| self.entries[i][j]).collect()
    }

    /// Distinct columns in first-occurrence order.
    pub fn distinct_columns(&self) -> Vec<Vec<usize>> {
        let mut cols = Vec::new();
        for j in 0..self.n() {
            let c = self.column(j);
            if !cols.contains(&c) {
                cols.push(c);
            }
        }
        cols
    }
}

/// The subalgebra of `K^J` generated by the rows of the matrix.
pub fn row_algebra(a: &ValuedMatrix, cap: usize) -> Result<Subalgebra, UalgError> {
    Subalgebra::generate(&a.algebra, a.n(), &a.entries, cap)
}

/// `phi(h)(i) = h(A_{i,-})`: the `I`-vector of a homomorphism on the row
/// algebra.
pub fn valued_phi(
    h: &[usize],
    sub: &Subalgebra,
    a: &ValuedMatrix,
) -> Result<Vec<usize>, UalgError> {
    if h.len() != sub.len() {
        return Err(UalgError::NotHom {
            reason: format!("map has length {}, subalgebra has {}", h.len(), sub.len()),
        });
    }
    (0..a.m())
        .map(|i| {
            sub.position(a.row(i))
                .map(|p| h[p])
                .ok_or_else(|| UalgError::NotHom {
                    reason: format!("row {i} is not in the subalgebra"),
                })
        })
        .collect()
}

/// The evaluation homomorphism at column `j`: `e(j)(x) = x_j`.
pub fn evaluation_hom(sub: &Subalgebra, j: usize) -> Vec<usize> {
    sub.elements.iter().map(|t| t[j]).collect()
}

/// Finite form of the homeomorphism between `Hom(B, K)` and the closure of
/// the column set: with `K` projectively trivial, `phi` restricted to the
/// homomorphisms of the row algebra must be a bijection onto the distinct
/// columns. The evaluation, duplicate-row sandwich and injectivity
/// claims are asserted as part of the report.
pub fn verify_prop3a(a: &ValuedMatrix, cap: usize) -> Result<DualityReport, UalgError> {
    let sub = row_algebra(a, cap)?;
    let hs = homs(&sub, &a.algebra)?;
    let images: Vec<Vec<usize>> = hs
        .iter()
        .map(|h| valued_phi(h, &sub, a))
        .collect::<Result<_, _>>()?;
    let columns = a.distinct_columns();
    let mut failures = Vec::new();

    // Evaluations are homomorphisms mapping to the matching column.
    for j in 0..a.n() {
        let e = evaluation_hom(&sub, j);
        match hs.iter().position(|h| *h == e) {
            Some(p) => {
                if images[p] != a.column(j) {
                    failures.push(format!("evaluation at column {j} maps to the wrong vector"));
                }
            }
            None => failures.push(format!("evaluation at column {j} is not among the homs")),
        }
    }

    // Images are constant on duplicate-row classes.
    for (hi, img) in images.iter().enumerate() {
        for i1 in 0..a.m() {
            for i2 in 0..a.m() {
                if a.row(i1) == a.row(i2) && img[i1] != img[i2] {
                    failures.push(format!(
                        "hom {hi} image not constant on duplicate rows {i1},{i2}"
                    ));
                }
            }
        }
    }

    // Phi is injective on the homs.
    for x in 0..images.len() {
        for y in (x + 1)..images.len() {
            if images[x] == images[y] {
                failures.push(format!("phi images of homs {x} and {y} coincide"));
            }
        }
    }

    // Bijection with the distinct columns.
    let mut pairing = Vec::new();
    let mut hit = vec![false; columns.len()];
    for (hi, img) in images.iter().enumerate() {
        match columns.iter().position(|c| c == img) {
            Some(ci) => {
                hit[ci] = true;
                pairing.push((hi, ci));
            }
            None => failures.push(format!("hom {hi} image is not a column")),
        }
    }
    let bijection = failures.is_empty() && hit.iter().all(|&h| h) && images.len() == columns.len();
    if !bijection && failures.is_empty() {
        failures.push(format!(
            "{} homs against {} distinct columns",
            images.len(),
            columns.len()
        ));
    }

    Ok(DualityReport {
        pairing,
        bijection,
        order_iso: None,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and_op() -> Operation {
        Operation::new(2, 2, vec![0, 0, 0, 1]).unwrap()
    }

    fn or_op() -> Operation {
        Operation::new(2, 2, vec![0, 1, 1, 1]).unwrap()
    }

    fn not_op() -> Operation {
        Operation::new(2, 1, vec![1, 0]).unwrap()
    }

    fn leq2() -> Relation {
        Relation::new(2, 2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn apply_uses_lexicographic_tables() {
        let e21 = Operation::projection(2, 2, 0);
        assert_eq!(e21.apply(&[0, 1]).unwrap(), 0);
        assert_eq!(e21.apply(&[1, 0]).unwrap(), 1);
        assert_eq!(and_op().apply(&[1, 1]).unwrap(), 1);
        assert_eq!(not_op().apply(&[0]).unwrap(), 1);
        assert!(matches!(
            and_op().apply(&[1]),
            Err(UalgError::ArityError { .. })
        ));
        assert!(matches!(
            not_op().apply(&[2]),
            Err(UalgError::ValueError { .. })
        ));
    }

    #[test]
    fn operation_validation() {
        assert!(matches!(
            Operation::new(2, 2, vec![0, 1]),
            Err(UalgError::TableSize { .. })
        ));
        assert!(matches!(
            Operation::new(2, 1, vec![0, 2]),
            Err(UalgError::ValueError { .. })
        ));
        assert!(matches!(
            Operation::new(0, 1, vec![]),
            Err(UalgError::EmptyUniverse)
        ));
    }

    #[test]
    fn preserves_examples() {
        for op in [and_op(), or_op(), not_op()] {
            assert!(preserves(&op, &Relation::full(2, 2)).unwrap());
        }
        assert!(preserves(&and_op(), &leq2()).unwrap());
        assert!(!preserves(&not_op(), &leq2()).unwrap());
        let wrong_universe = Relation::full(3, 1);
        assert!(matches!(
            preserves(&and_op(), &wrong_universe),
            Err(UalgError::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn graph_examples() {
        let g = graph(&not_op());
        assert_eq!(g.tuples(), &[vec![0, 1], vec![1, 0]]);
        let id = Operation::projection(2, 1, 0);
        assert_eq!(graph(&id).tuples(), &[vec![0, 0], vec![1, 1]]);
        let c0 = Operation::constant(2, 1, 0);
        assert_eq!(graph(&c0).tuples(), &[vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn commutation_facts() {
        let id = Operation::projection(2, 1, 0);
        for op in [and_op(), or_op(), not_op()] {
            assert!(commutes(&op, &id).unwrap());
        }
        assert!(commutes(&and_op(), &and_op()).unwrap());
        let c0 = Operation::constant(2, 1, 0);
        // Idempotents commute with constants, complement does not.
        assert!(commutes(&or_op(), &c0).unwrap());
        assert!(!commutes(&not_op(), &c0).unwrap());
    }

    #[test]
    fn commutation_is_symmetric() {
        let mut ops = all_operations(2, 1).unwrap();
        ops.extend(all_operations(2, 2).unwrap());
        for f in &ops {
            for g in &ops {
                assert_eq!(
                    commutes(f, g).unwrap(),
                    commutes(g, f).unwrap(),
                    "asymmetry between {f:?} and {g:?}"
                );
            }
        }
    }

    #[test]
    fn classify_examples() {
        let e32 = Operation::projection(2, 3, 1);
        let c = classify(&e32);
        assert_eq!(c.projection, Some(1));
        assert!(c.idempotent && !c.constant);

        let c1 = classify(&Operation::constant(2, 1, 1));
        assert_eq!(c1.projection, None);
        assert!(c1.constant && !c1.idempotent);

        let majority = Operation::new(2, 3, vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap();
        let cm = classify(&majority);
        assert!(cm.idempotent && cm.projection.is_none() && !cm.constant);
    }

    #[test]
    fn projection_iff_commutes_with_everything() {
        // Bounded-arity surrogate of the centralizer facts: an operation of
        // arity <= 3 is a projection iff it commutes with every operation
        // of arity <= 2, and idempotent iff it commutes with both unary
        // constants.
        let mut everything = all_operations(2, 1).unwrap();
        everything.extend(all_operations(2, 2).unwrap());
        let constants = [Operation::constant(2, 1, 0), Operation::constant(2, 1, 1)];
        for arity in 1..=3 {
            for f in all_operations(2, arity).unwrap() {
                let cls = classify(&f);
                let commutes_all = everything.iter().all(|g| commutes(&f, g).unwrap());
                assert_eq!(cls.projection.is_some(), commutes_all, "{f:?}");
                let commutes_consts = constants.iter().all(|g| commutes(&f, g).unwrap());
                assert_eq!(cls.idempotent, commutes_consts, "{f:?}");
            }
        }
    }

    #[test]
    fn subalgebra_generation_example() {
        let k = lattice2();
        let sub = Subalgebra::generate(&k, 3, &[vec![1, 1, 0], vec![0, 1, 1]], 1000).unwrap();
        assert_eq!(
            sub.elements(),
            &[
                vec![0, 0, 0],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 1, 0],
                vec![1, 1, 1],
            ]
        );

        // With no generators the closure is empty (constants are unary).
        let empty = Subalgebra::generate(&k, 2, &[], 1000).unwrap();
        assert!(empty.is_empty());
        let from_one = Subalgebra::generate(&k, 2, &[vec![0, 1]], 1000).unwrap();
        assert_eq!(from_one.elements(), &[vec![0, 0], vec![0, 1], vec![1, 1]]);

        // Idempotence: regenerating from a closed set returns it.
        let again = Subalgebra::generate(&k, 3, sub.elements(), 1000).unwrap();
        assert_eq!(again, sub);
    }

    #[test]
    fn subalgebra_validation() {
        let k = lattice2();
        assert!(Subalgebra::new(&k, 2, vec![vec![0, 0], vec![1, 1]]).is_ok());
        assert!(matches!(
            Subalgebra::new(&k, 2, vec![vec![0, 1]]),
            Err(UalgError::NotSubalgebra { .. })
        ));
        assert!(matches!(
            Subalgebra::generate(&k, 2, &[vec![0, 1, 1]], 10),
            Err(UalgError::ArityError { .. })
        ));
        assert!(matches!(
            Subalgebra::generate(&k, 2, &[vec![0, 2]], 10),
            Err(UalgError::ValueError { .. })
        ));
        assert!(matches!(
            Subalgebra::generate(&boolean2(), 3, &[vec![0, 1, 1]], 2),
            Err(UalgError::SizeError { .. })
        ));
    }

    #[test]
    fn homs_of_generated_subalgebra() {
        let k = lattice2();
        let sub = Subalgebra::generate(&k, 3, &[vec![1, 1, 0], vec![0, 1, 1]], 1000).unwrap();
        let hs = homs(&sub, &k).unwrap();
        assert_eq!(hs.len(), 3);
        for h in &hs {
            assert!(hom_as_projection(&sub, h).is_some());
        }

        // Constants force a single hom on the diagonal subalgebra.
        let diag = Subalgebra::new(&k, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(homs(&diag, &k).unwrap().len(), 1);

        // The full square of the Boolean algebra has exactly the two
        // projections.
        let b = boolean2();
        let full = Subalgebra::full_power(&b, 2).unwrap();
        let hs = homs(&full, &b).unwrap();
        assert_eq!(hs.len(), 2);
        for h in &hs {
            assert!(hom_as_projection(&full, h).is_some());
        }
    }

    #[test]
    fn projection_property_of_the_presets() {
        for k in [boolean2(), lattice2()] {
            let rep = has_projection_property(&k, 3).unwrap();
            assert!(rep.holds, "witnesses: {:?}", rep.witnesses);
        }
    }

    #[test]
    fn projection_property_fails_without_operations() {
        let bare = FiniteAlgebra::new(2, vec![]).unwrap();
        let rep = has_projection_property(&bare, 2).unwrap();
        assert!(!rep.holds);
        // First witness in canonical order: the binary meet, an idempotent
        // non-projection.
        let w = &rep.witnesses[0];
        assert_eq!(w.power, 2);
        assert_eq!(w.hom, vec![0, 0, 0, 1]);
    }

    #[test]
    fn projectively_trivial_presets_and_counterexample() {
        for k in [boolean2(), lattice2()] {
            let rep = is_projectively_trivial(&k, 2).unwrap();
            assert!(rep.holds, "witnesses: {:?}", rep.witnesses);
            assert!(rep.modes.iter().all(|&(_, m)| m == "exhaustive"));
        }
        let meet_only = FiniteAlgebra::new(2, vec![("and".into(), and_op())]).unwrap();
        let rep = is_projectively_trivial(&meet_only, 1).unwrap();
        assert!(!rep.holds);
        assert!(!rep.witnesses.is_empty());
        // The witness is a constant endomorphism.
        let w = &rep.witnesses[0];
        assert!(w.hom.windows(2).all(|p| p[0] == p[1]));
    }

    #[test]
    fn projectivity_and_rigidity() {
        let (rep, rigid) = is_projective(&boolean2(), 3).unwrap();
        assert!(rep.holds && rigid);

        let bare = FiniteAlgebra::new(2, vec![]).unwrap();
        let (rep, rigid) = is_projective(&bare, 2).unwrap();
        assert!(!rep.holds && !rigid);

        let (rep, rigid) = is_projective(&lattice2(), 3).unwrap();
        assert!(rep.holds && rigid);
    }

    #[test]
    fn projective_iff_projection_property_and_rigid() {
        let algebras = vec![
            boolean2(),
            lattice2(),
            FiniteAlgebra::new(2, vec![]).unwrap(),
            FiniteAlgebra::new(2, vec![("and".into(), and_op())]).unwrap(),
            FiniteAlgebra::new(2, vec![("not".into(), not_op())]).unwrap(),
        ];
        for k in algebras {
            let (proj, rigid) = is_projective(&k, 2).unwrap();
            let hpp = has_projection_property(&k, 2).unwrap();
            assert_eq!(proj.holds, hpp.holds && rigid, "algebra {k:?}");
        }
    }

    #[test]
    fn centralizer_counts() {
        // Constants centralize exactly the idempotents: 1 unary + 4 binary.
        let consts = FiniteAlgebra::new(
            2,
            vec![
                ("const0".into(), Operation::constant(2, 1, 0)),
                ("const1".into(), Operation::constant(2, 1, 1)),
            ],
        )
        .unwrap();
        let z = centralizer(&consts, 2).unwrap();
        assert_eq!(z.len(), 5);
        for op in &z {
            assert!(classify(op).idempotent);
        }

        // The full binary clone centralizes only the projections.
        let all = algebra_of_all_ops(2, 2).unwrap();
        let z = centralizer(&all, 2).unwrap();
        assert_eq!(z.len(), 3);
        for op in &z {
            assert!(classify(op).projection.is_some());
        }

        // No constraints: everything commutes.
        let bare = FiniteAlgebra::new(2, vec![]).unwrap();
        assert_eq!(centralizer(&bare, 2).unwrap().len(), 4 + 16);
    }

    #[test]
    fn polymorphisms_of_the_order_are_the_monotone_operations() {
        let pol = polymorph(&[leq2()], 2).unwrap();
        // Independent route: direct monotonicity scan.
        let mut direct = Vec::new();
        for a in 1..=2 {
            for op in all_operations(2, a).unwrap() {
                let full = Relation::full(2, a);
                let monotone = full.tuples().iter().all(|x| {
                    full.tuples().iter().all(|y| {
                        let pointwise = x.iter().zip(y).all(|(&xi, &yi)| xi <= yi);
                        !pointwise || op.apply_unchecked(x) <= op.apply_unchecked(y)
                    })
                });
                if monotone {
                    direct.push(op);
                }
            }
        }
        assert_eq!(pol, direct);
    }

    #[test]
    fn invariants_match_closed_subsets() {
        for k in [
            boolean2(),
            lattice2(),
            FiniteAlgebra::new(2, vec![]).unwrap(),
        ] {
            for n in 1..=2 {
                let inv: Vec<Vec<Vec<usize>>> = invariants(&k, n)
                    .unwrap()
                    .into_iter()
                    .filter(|r| r.arity() == n)
                    .map(|r| r.tuples().to_vec())
                    .collect();
                let mut closed = closed_subsets(&k, n, true).unwrap();
                closed.sort();
                let mut inv_sorted = inv;
                inv_sorted.sort();
                assert_eq!(inv_sorted, closed);
            }
        }
        let bare = FiniteAlgebra::new(2, vec![]).unwrap();
        assert_eq!(
            invariants(&bare, 1).unwrap().len(),
            4,
            "all four unary relations are invariant without operations"
        );
    }

    #[test]
    fn row_algebra_and_valued_phi() {
        let a = ValuedMatrix::new(lattice2(), vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let sub = row_algebra(&a, 1000).unwrap();
        assert_eq!(sub.len(), 5);
        let hs = homs(&sub, a.algebra()).unwrap();
        assert_eq!(hs.len(), 3);

        // Evaluations map to columns.
        for j in 0..a.n() {
            let e = evaluation_hom(&sub, j);
            assert!(hs.contains(&e));
            assert_eq!(valued_phi(&e, &sub, &a).unwrap(), a.column(j));
        }

        // A constant matrix over the Boolean algebra has one hom and one
        // column.
        let c = ValuedMatrix::new(boolean2(), vec![vec![1, 1], vec![1, 1]]).unwrap();
        let csub = row_algebra(&c, 1000).unwrap();
        let chs = homs(&csub, c.algebra()).unwrap();
        assert_eq!(chs.len(), 1);
        assert_eq!(c.distinct_columns().len(), 1);
    }

    #[test]
    fn verify_prop3a_examples() {
        let a = ValuedMatrix::new(lattice2(), vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let rep = verify_prop3a(&a, 1000).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failures);
        assert_eq!(rep.pairing.len(), 3);

        let c = ValuedMatrix::new(boolean2(), vec![vec![0, 0], vec![0, 0]]).unwrap();
        let rep = verify_prop3a(&c, 1000).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.pairing.len(), 1);
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(
            ValuedMatrix::new(boolean2(), vec![]),
            Err(UalgError::EmptyMatrix)
        ));
        assert!(matches!(
            ValuedMatrix::new(boolean2(), vec![vec![0, 2]]),
            Err(UalgError::ValueError { .. })
        ));
        assert!(matches!(
            ValuedMatrix::new(boolean2(), vec![vec![0, 1], vec![0]]),
            Err(UalgError::ArityError { .. })
        ));
    }

    #[test]
    fn caps_are_enforced() {
        let k = boolean2();
        assert!(matches!(
            has_projection_property(&k, 9),
            Err(UalgError::SizeError { .. })
        ));
        assert!(matches!(
            all_operations(4, 3),
            Err(UalgError::SizeError { .. })
        ));
        let big = FiniteAlgebra::new(5, vec![]).unwrap();
        assert!(matches!(
            is_projectively_trivial(&big, 1),
            Err(UalgError::SizeError { .. })
        ));
    }

    #[test]
    fn preset_shapes() {
        assert_eq!(boolean2().ops().len(), 5);
        assert_eq!(lattice2().ops().len(), 4);
        // Rigidity of boolean2: identity is the only endomorphism.
        let full = Subalgebra::full_power(&boolean2(), 1).unwrap();
        let hs = homs(&full, &boolean2()).unwrap();
        assert_eq!(hs, vec![vec![0, 1]]);
    }
}
