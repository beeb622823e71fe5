//! Bounded lattices as operation tables, the stacked atom-row
//! constructions, sublattice generation, lattice homomorphism search,
//! and the checks behind the finite-level preservation counterexample.

use itertools::Itertools;
use thiserror::Error;

use crate::bounds::Bounds;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("bad lattice table: {0}")]
    BadTable(String),
    #[error("search budget of {0} assignments exhausted")]
    Budget(u64),
    #[error("generator-set count {needed} exceeds the cap {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("subset is not closed: missing {0}")]
    NotClosed(usize),
    #[error("map is not a lattice homomorphism at pair ({0}, {1})")]
    NotPreserved(usize, usize),
}

/// A finite bounded lattice given by its join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedLattice {
    size: usize,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl BoundedLattice {
    pub fn new(
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        bottom: usize,
        top: usize,
    ) -> Result<BoundedLattice, LatticeError> {
        let lat = BoundedLattice {
            size: join.len(),
            join,
            meet,
            bottom,
            top,
        };
        lat.validate()?;
        Ok(lat)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x][y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.join[x][y] == y
    }

    pub fn join_table(&self) -> &[Vec<usize>] {
        &self.join
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    /// Full-table check of the lattice laws and the bound laws.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.size;
        if n == 0 {
            return Err(LatticeError::BadTable("empty lattice".into()));
        }
        for (name, table) in [("join", &self.join), ("meet", &self.meet)] {
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return Err(LatticeError::BadTable(format!("{name} table is not {n}x{n}")));
            }
            if table.iter().flatten().any(|&v| v >= n) {
                return Err(LatticeError::BadTable(format!("{name} entry out of range")));
            }
        }
        if self.bottom >= n || self.top >= n {
            return Err(LatticeError::BadTable("bounds out of range".into()));
        }
        for x in 0..n {
            if self.join[x][x] != x || self.meet[x][x] != x {
                return Err(LatticeError::BadTable(format!("idempotence fails at {x}")));
            }
            if self.join[x][self.bottom] != x
                || self.meet[x][self.top] != x
                || self.join[x][self.top] != self.top
                || self.meet[x][self.bottom] != self.bottom
            {
                return Err(LatticeError::BadTable(format!("bound laws fail at {x}")));
            }
            for y in 0..n {
                if self.join[x][y] != self.join[y][x] || self.meet[x][y] != self.meet[y][x] {
                    return Err(LatticeError::BadTable(format!(
                        "commutativity fails at ({x},{y})"
                    )));
                }
                if self.join[x][self.meet[x][y]] != x || self.meet[x][self.join[x][y]] != x {
                    return Err(LatticeError::BadTable(format!(
                        "absorption fails at ({x},{y})"
                    )));
                }
                for z in 0..n {
                    if self.join[self.join[x][y]][z] != self.join[x][self.join[y][z]]
                        || self.meet[self.meet[x][y]][z] != self.meet[x][self.meet[y][z]]
                    {
                        return Err(LatticeError::BadTable(format!(
                            "associativity fails at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Modularity: x <= z implies x v (y ^ z) = (x v y) ^ z.
    pub fn is_modular(&self) -> bool {
        let n = self.size;
        for x in 0..n {
            for z in 0..n {
                if !self.leq(x, z) {
                    continue;
                }
                for y in 0..n {
                    if self.join[x][self.meet[y][z]] != self.meet[self.join[x][y]][z] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Covering pairs (x, y) with x < y and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in 0..self.size {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                let strictly_between = (0..self.size).any(|z| {
                    z != x && z != y && self.leq(x, z) && self.leq(z, y)
                });
                if !strictly_between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Hasse diagram in Graphviz format, drawn bottom-up.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hasse {\n  rankdir=BT;\n");
        for v in 0..self.size {
            let marker = if v == self.bottom {
                " (bot)"
            } else if v == self.top {
                " (top)"
            } else {
                ""
            };
            out.push_str(&format!("  n{v} [label=\"{v}{marker}\"];\n"));
        }
        for (x, y) in self.covers() {
            out.push_str(&format!("  n{x} -- n{y};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The two-element lattice, bottom 0 and top 1.
pub fn two() -> BoundedLattice {
    m_k(0)
}

/// Bottom, `k` pairwise-incomparable atoms, top. Ids: bottom 0,
/// atoms 1..=k, top k+1. Distinct atoms join to top and meet to
/// bottom.
pub fn m_k(k: usize) -> BoundedLattice {
    let n = k + 2;
    let top = k + 1;
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            join[x][y] = if x == y {
                x
            } else if x == 0 {
                y
            } else if y == 0 {
                x
            } else {
                top
            };
            meet[x][y] = if x == y {
                x
            } else if x == top {
                y
            } else if y == top {
                x
            } else {
                0
            };
        }
    }
    BoundedLattice {
        size: n,
        join,
        meet,
        bottom: 0,
        top,
    }
}

/// Ordinal sum gluing lower's top to upper's bottom. Lower ids are
/// unchanged; upper's non-bottom elements are appended in id order.
pub fn stack(lower: &BoundedLattice, upper: &BoundedLattice) -> BoundedLattice {
    let glue = lower.top;
    let size = lower.size + upper.size - 1;
    // upper id -> stacked id
    let mut up = vec![0; upper.size];
    let mut next = lower.size;
    for u in 0..upper.size {
        if u == upper.bottom {
            up[u] = glue;
        } else {
            up[u] = next;
            next += 1;
        }
    }
    let mut down = vec![0; size];
    for (u, &i) in up.iter().enumerate() {
        down[i] = u;
    }
    let in_lower = |x: usize| x < lower.size;
    let join = |x: usize, y: usize| -> usize {
        match (in_lower(x), in_lower(y)) {
            (true, true) => lower.join[x][y],
            (true, false) => y,
            (false, true) => x,
            (false, false) => up[upper.join[down[x]][down[y]]],
        }
    };
    let meet = |x: usize, y: usize| -> usize {
        match (in_lower(x), in_lower(y)) {
            (true, true) => lower.meet[x][y],
            (true, false) => x,
            (false, true) => y,
            (false, false) => up[upper.meet[down[x]][down[y]]],
        }
    };
    let join_table = (0..size)
        .map(|x| (0..size).map(|y| join(x, y)).collect())
        .collect();
    let meet_table = (0..size)
        .map(|x| (0..size).map(|y| meet(x, y)).collect())
        .collect();
    BoundedLattice {
        size,
        join: join_table,
        meet: meet_table,
        bottom: lower.bottom,
        top: up[upper.top],
    }
}

/// n-fold stack of `m_k(k)`; size n(k+1)+1.
pub fn a_n(n: usize, k: usize) -> BoundedLattice {
    assert!(n >= 1 && k >= 3);
    let layer = m_k(k);
    let mut out = layer.clone();
    for _ in 1..n {
        out = stack(&out, &layer);
    }
    out
}

/// n-fold stack of `m_k(3)`; size 4n+1.
pub fn p_n(n: usize) -> BoundedLattice {
    assert!(n >= 1);
    let layer = m_k(3);
    let mut out = layer.clone();
    for _ in 1..n {
        out = stack(&out, &layer);
    }
    out
}

/// Atom ids of the stacked lattices, layer by layer: in a stack of
/// `m_k(k)` the layer `l` atoms are l(k+1)+1 ..= l(k+1)+k.
pub fn stacked_atoms(n: usize, k: usize) -> Vec<usize> {
    (0..n)
        .flat_map(|l| (1..=k).map(move |j| l * (k + 1) + j))
        .collect()
}

/// Least subuniverse containing the generators and both bounds,
/// closed under join and meet. Returned ascending.
pub fn sublattice_generated(lat: &BoundedLattice, generators: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; lat.size];
    inside[lat.bottom] = true;
    inside[lat.top] = true;
    for &g in generators {
        inside[g] = true;
    }
    loop {
        let members: Vec<usize> = (0..lat.size).filter(|&x| inside[x]).collect();
        let mut grew = false;
        for &x in &members {
            for &y in &members {
                for v in [lat.join[x][y], lat.meet[x][y]] {
                    if !inside[v] {
                        inside[v] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return (0..lat.size).filter(|&x| inside[x]).collect();
        }
    }
}

/// Restriction of a lattice to a closed subuniverse (ascending ids),
/// renumbered densely.
pub fn induced_lattice(
    lat: &BoundedLattice,
    sub: &[usize],
) -> Result<BoundedLattice, LatticeError> {
    let mut local = vec![usize::MAX; lat.size];
    for (i, &x) in sub.iter().enumerate() {
        local[x] = i;
    }
    if local[lat.bottom] == usize::MAX || local[lat.top] == usize::MAX {
        return Err(LatticeError::NotClosed(lat.bottom));
    }
    let mut join = vec![vec![0; sub.len()]; sub.len()];
    let mut meet = vec![vec![0; sub.len()]; sub.len()];
    for (i, &x) in sub.iter().enumerate() {
        for (j, &y) in sub.iter().enumerate() {
            let jv = lat.join[x][y];
            let mv = lat.meet[x][y];
            if local[jv] == usize::MAX {
                return Err(LatticeError::NotClosed(jv));
            }
            if local[mv] == usize::MAX {
                return Err(LatticeError::NotClosed(mv));
            }
            join[i][j] = local[jv];
            meet[i][j] = local[mv];
        }
    }
    Ok(BoundedLattice {
        size: sub.len(),
        join,
        meet,
        bottom: local[lat.bottom],
        top: local[lat.top],
    })
}

/// A validated bound-preserving lattice homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeHom {
    source: BoundedLattice,
    target: BoundedLattice,
    map: Vec<usize>,
}

impl LatticeHom {
    pub fn new(
        source: BoundedLattice,
        target: BoundedLattice,
        map: Vec<usize>,
    ) -> Result<LatticeHom, LatticeError> {
        if map.len() != source.size
            || map[source.bottom] != target.bottom
            || map[source.top] != target.top
        {
            return Err(LatticeError::NotPreserved(source.bottom, source.top));
        }
        for x in 0..source.size {
            for y in 0..source.size {
                if map[source.join[x][y]] != target.join[map[x]][map[y]]
                    || map[source.meet[x][y]] != target.meet[map[x]][map[y]]
                {
                    return Err(LatticeError::NotPreserved(x, y));
                }
            }
        }
        Ok(LatticeHom {
            source,
            target,
            map,
        })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_order_preserving(&self) -> bool {
        (0..self.source.size).all(|x| {
            (0..self.source.size)
                .all(|y| !self.source.leq(x, y) || self.target.leq(self.map[x], self.map[y]))
        })
    }
}

/// Backtracking search for the least bound-preserving homomorphism,
/// values ascending. None when no map preserves both operations.
pub fn lattice_hom_exists(
    source: &BoundedLattice,
    target: &BoundedLattice,
    bounds: &Bounds,
) -> Result<Option<LatticeHom>, LatticeError> {
    if source.bottom == source.top && target.bottom != target.top {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; source.size];
    map[source.bottom] = target.bottom;
    map[source.top] = target.top;
    let mut nodes = 0u64;
    if !consistent(source, target, &map) {
        return Ok(None);
    }
    if search(source, target, &mut map, 0, &mut nodes, bounds.node_budget as u64)? {
        let hom = LatticeHom::new(source.clone(), target.clone(), map)?;
        return Ok(Some(hom));
    }
    Ok(None)
}

fn consistent(source: &BoundedLattice, target: &BoundedLattice, map: &[usize]) -> bool {
    for x in 0..source.size {
        if map[x] == usize::MAX {
            continue;
        }
        for y in 0..source.size {
            if map[y] == usize::MAX {
                continue;
            }
            let j = source.join[x][y];
            if map[j] != usize::MAX && map[j] != target.join[map[x]][map[y]] {
                return false;
            }
            let m = source.meet[x][y];
            if map[m] != usize::MAX && map[m] != target.meet[map[x]][map[y]] {
                return false;
            }
        }
    }
    true
}

fn search(
    source: &BoundedLattice,
    target: &BoundedLattice,
    map: &mut Vec<usize>,
    from: usize,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool, LatticeError> {
    let var = match (from..source.size).find(|&x| map[x] == usize::MAX) {
        Some(x) => x,
        None => return Ok(true),
    };
    for v in 0..target.size {
        *nodes += 1;
        if *nodes > budget {
            return Err(LatticeError::Budget(budget));
        }
        map[var] = v;
        if consistent(source, target, map)
            && search(source, target, map, var + 1, nodes, budget)?
        {
            return Ok(true);
        }
    }
    map[var] = usize::MAX;
    Ok(false)
}

/// Whether the lattice maps homomorphically onto the two-element
/// lattice. Bound preservation forces surjectivity.
pub fn hom_onto_two(source: &BoundedLattice, bounds: &Bounds) -> Result<bool, LatticeError> {
    Ok(lattice_hom_exists(source, &two(), bounds)?.is_some())
}

/// Outcome of the two finite-level preservation clauses at stack
/// height n against a fixed target lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackReport {
    pub k: usize,
    pub stack_size: usize,
    /// Clause 1: no homomorphism from the stacked lattice into the
    /// target.
    pub clause1_no_hom: bool,
    pub clause1_witness: Option<Vec<usize>>,
    /// Clause 2: every sublattice generated by at most n elements
    /// maps onto the two-element lattice.
    pub sets_checked: usize,
    pub failing_sets: Vec<Vec<usize>>,
}

impl StackReport {
    pub fn ok(&self) -> bool {
        self.clause1_no_hom && self.failing_sets.is_empty()
    }
}

/// Check both clauses for `a_n(n, k)` with k = max(|L|, 2) + 1:
/// no homomorphism into L, while every <= n-generated sublattice
/// maps onto two (and hence into L through its bounds).
pub fn verify_stack_preservation(
    target: &BoundedLattice,
    n: usize,
    subset_cap: u64,
    bounds: &Bounds,
) -> Result<StackReport, LatticeError> {
    let k = target.size.max(2) + 1;
    let big = a_n(n, k);
    let mut needed = 0u128;
    for s in 1..=n {
        needed += binomial(big.size as u128, s as u128);
        if needed > subset_cap as u128 {
            return Err(LatticeError::CapExceeded {
                needed,
                cap: subset_cap,
            });
        }
    }
    let witness = lattice_hom_exists(&big, target, bounds)?;
    let mut sets_checked = 0;
    let mut failing_sets = Vec::new();
    for s in 1..=n {
        for set in (0..big.size).combinations(s) {
            sets_checked += 1;
            let sub = sublattice_generated(&big, &set);
            let small = induced_lattice(&big, &sub)?;
            if !hom_onto_two(&small, bounds)? {
                failing_sets.push(set);
            }
        }
    }
    Ok(StackReport {
        k,
        stack_size: big.size,
        clause1_no_hom: witness.is_none(),
        clause1_witness: witness.map(|h| h.map().to_vec()),
        sets_checked,
        failing_sets,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut out = 1u128;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}
