//! Homomorphism search: the CSP engine behind every membership check.
//!
//! Plain backtracking with generalized arc-consistency over explicit
//! tuple tables. Variable order is the source universe ascending and
//! values are tried ascending, so the first solution found is the
//! lexicographically least one. That contract is load-bearing: tests
//! freeze expected witnesses against it.

use thiserror::Error;

use crate::relational::{HomError, Homomorphism, RelStructure};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("node budget exhausted after {nodes} assignments")]
    BudgetExhausted { nodes: u64 },
    #[error("enumeration cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("source and target interpret different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    BadWitness(#[from] HomError),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub enumeration_cap: usize,
    /// Lets family-level helpers fan independent searches out across
    /// threads. A single search always runs on one thread so that
    /// budget accounting, and therefore the outcome, cannot depend on
    /// scheduling.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 10_000_000,
            enumeration_cap: 1_000_000,
            parallel: false,
        }
    }
}

impl SearchConfig {
    pub fn from_bounds(b: &crate::bounds::Bounds) -> Self {
        SearchConfig {
            node_budget: b.node_budget,
            enumeration_cap: b.enumeration_cap,
            parallel: false,
        }
    }
}

// One source tuple acting as a table constraint over its entries.
struct Constraint {
    rel: usize,
    scope: Vec<usize>,
}

struct Search<'a> {
    source: &'a RelStructure,
    target: &'a RelStructure,
    constraints: Vec<Constraint>,
    // constraint indices touching each source element
    watching: Vec<Vec<usize>>,
    // target tables as dense row lists for support scans
    rows: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    budget: u64,
}

type Domains = Vec<Vec<bool>>;

impl<'a> Search<'a> {
    fn new(
        source: &'a RelStructure,
        target: &'a RelStructure,
        config: &SearchConfig,
    ) -> Result<Self, SolveError> {
        if !source.signature().same_shape(target.signature()) {
            return Err(SolveError::SignatureMismatch);
        }
        let mut constraints = Vec::new();
        let mut watching = vec![Vec::new(); source.size()];
        for (rel, table) in source.tables().iter().enumerate() {
            for tuple in table {
                let ci = constraints.len();
                for &v in tuple.iter() {
                    if !watching[v].contains(&ci) {
                        watching[v].push(ci);
                    }
                }
                constraints.push(Constraint {
                    rel,
                    scope: tuple.clone(),
                });
            }
        }
        let rows = target
            .tables()
            .iter()
            .map(|t| t.iter().cloned().collect())
            .collect();
        Ok(Search {
            source,
            target,
            constraints,
            watching,
            rows,
            nodes: 0,
            budget: config.node_budget,
        })
    }

    fn fresh_domains(&self) -> Domains {
        vec![vec![true; self.target.size()]; self.source.size()]
    }

    // A target row supports the constraint if every entry is still in
    // the corresponding domain and repeated scope positions agree.
    fn row_feasible(&self, c: &Constraint, row: &[usize], dom: &Domains) -> bool {
        for (j, &var) in c.scope.iter().enumerate() {
            if !dom[var][row[j]] {
                return false;
            }
            for (j2, &var2) in c.scope.iter().enumerate().skip(j + 1) {
                if var == var2 && row[j] != row[j2] {
                    return false;
                }
            }
        }
        true
    }

    // Restricts every scope variable of every queued constraint to
    // supported values, to fixpoint. Returns false on a wiped domain.
    fn propagate(&self, dom: &mut Domains, mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &ci in &queue {
            queued[ci] = true;
        }
        while let Some(ci) = queue.pop() {
            queued[ci] = false;
            let c = &self.constraints[ci];
            let feasible: Vec<&Vec<usize>> = self.rows[c.rel]
                .iter()
                .filter(|row| self.row_feasible(c, row, dom))
                .collect();
            for (j, &var) in c.scope.iter().enumerate() {
                if c.scope[..j].contains(&var) {
                    continue;
                }
                let mut changed = false;
                for val in 0..self.target.size() {
                    if dom[var][val] && !feasible.iter().any(|row| row[j] == val) {
                        dom[var][val] = false;
                        changed = true;
                    }
                }
                if changed {
                    if dom[var].iter().all(|&b| !b) {
                        return false;
                    }
                    for &ci2 in &self.watching[var] {
                        if !queued[ci2] {
                            queued[ci2] = true;
                            queue.push(ci2);
                        }
                    }
                }
            }
        }
        true
    }

    fn initial_domains(&self) -> Option<Domains> {
        let mut dom = self.fresh_domains();
        if self.source.size() > 0 && self.target.size() == 0 {
            return None;
        }
        let all: Vec<usize> = (0..self.constraints.len()).collect();
        if self.propagate(&mut dom, all) {
            Some(dom)
        } else {
            None
        }
    }

    /// Depth-first over variables in ascending order. `emit` receives
    /// each complete assignment in lexicographic order; returning
    /// false stops the search.
    fn run(
        &mut self,
        dom: Domains,
        surjective: bool,
        emit: &mut dyn FnMut(&[usize]) -> Result<bool, SolveError>,
    ) -> Result<(), SolveError> {
        let mut assignment = vec![0usize; self.source.size()];
        self.dfs(0, dom, surjective, &mut assignment, emit)?;
        Ok(())
    }

    fn dfs(
        &mut self,
        var: usize,
        dom: Domains,
        surjective: bool,
        assignment: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> Result<bool, SolveError>,
    ) -> Result<bool, SolveError> {
        if surjective && !self.surjectivity_feasible(var, &dom) {
            return Ok(true);
        }
        if var == self.source.size() {
            if surjective {
                let mut hit = vec![false; self.target.size()];
                for &v in assignment.iter() {
                    hit[v] = true;
                }
                if !hit.into_iter().all(|h| h) {
                    return Ok(true);
                }
            }
            return emit(assignment);
        }
        for val in 0..self.target.size() {
            if !dom[var][val] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(SolveError::BudgetExhausted { nodes: self.nodes });
            }
            let mut next = dom.clone();
            for (w, slot) in next[var].iter_mut().enumerate() {
                *slot = w == val;
            }
            assignment[var] = val;
            if self.propagate(&mut next, self.watching[var].clone())
                && !self.dfs(var + 1, next, surjective, assignment, emit)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // Every target value must be assigned already or reachable in
    // some domain of a not-yet-fixed variable. Variables below `var`
    // hold singleton domains, so membership there means assignment.
    fn surjectivity_feasible(&self, var: usize, dom: &Domains) -> bool {
        let mut missing = 0usize;
        for w in 0..self.target.size() {
            if (0..var).any(|v| dom[v][w]) {
                continue;
            }
            missing += 1;
            if !(var..self.source.size()).any(|v| dom[v][w]) {
                return false;
            }
        }
        missing <= self.source.size() - var
    }
}

/// Least homomorphism from `source` to `target`, or `None`.
pub fn find_hom(
    source: &RelStructure,
    target: &RelStructure,
    config: &SearchConfig,
) -> Result<Option<Homomorphism>, SolveError> {
    let mut search = Search::new(source, target, config)?;
    let Some(dom) = search.initial_domains() else {
        return Ok(None);
    };
    let mut found: Option<Vec<usize>> = None;
    search.run(dom, false, &mut |map| {
        found = Some(map.to_vec());
        Ok(false)
    })?;
    match found {
        Some(map) => Ok(Some(Homomorphism::new(
            source.clone(),
            target.clone(),
            map,
        )?)),
        None => Ok(None),
    }
}

/// True iff `instance` admits a homomorphism into `template`.
pub fn csp_member(
    instance: &RelStructure,
    template: &RelStructure,
    config: &SearchConfig,
) -> Result<bool, SolveError> {
    Ok(find_hom(instance, template, config)?.is_some())
}

/// All homomorphisms, lexicographically sorted and duplicate-free.
pub fn enumerate_homs(
    source: &RelStructure,
    target: &RelStructure,
    config: &SearchConfig,
) -> Result<Vec<Homomorphism>, SolveError> {
    let mut search = Search::new(source, target, config)?;
    let Some(dom) = search.initial_domains() else {
        return Ok(Vec::new());
    };
    let cap = config.enumeration_cap;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    search.run(dom, false, &mut |map| {
        if maps.len() == cap {
            return Err(SolveError::CapExceeded { cap });
        }
        maps.push(map.to_vec());
        Ok(true)
    })?;
    maps.into_iter()
        .map(|m| Ok(Homomorphism::new(source.clone(), target.clone(), m)?))
        .collect()
}

/// Least homomorphism with image equal to the full target universe.
pub fn find_surjective_hom(
    source: &RelStructure,
    target: &RelStructure,
    config: &SearchConfig,
) -> Result<Option<Homomorphism>, SolveError> {
    let mut search = Search::new(source, target, config)?;
    if target.size() == 0 && source.size() == 0 {
        return Ok(Some(Homomorphism::new(
            source.clone(),
            target.clone(),
            Vec::new(),
        )?));
    }
    if target.size() > source.size() {
        return Ok(None);
    }
    let Some(dom) = search.initial_domains() else {
        return Ok(None);
    };
    let mut found: Option<Vec<usize>> = None;
    search.run(dom, true, &mut |map| {
        found = Some(map.to_vec());
        Ok(false)
    })?;
    match found {
        Some(map) => Ok(Some(Homomorphism::new(
            source.clone(),
            target.clone(),
            map,
        )?)),
        None => Ok(None),
    }
}

/// True iff no member maps into a different member.
pub fn is_hom_independent(
    family: &[RelStructure],
    config: &SearchConfig,
) -> Result<bool, SolveError> {
    let pairs: Vec<(usize, usize)> = (0..family.len())
        .flat_map(|i| (0..family.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let check = |&(i, j): &(usize, usize)| csp_member(&family[i], &family[j], config);
    if config.parallel {
        use rayon::prelude::*;
        let results: Vec<Result<bool, SolveError>> = pairs.par_iter().map(check).collect();
        for r in results {
            if r? {
                return Ok(false);
            }
        }
    } else {
        for p in &pairs {
            if check(p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::relational::is_homomorphism;

    // Independent oracle: every one of the |target|^|source| maps.
    fn brute_force_homs(source: &RelStructure, target: &RelStructure) -> Vec<Vec<usize>> {
        let n = source.size();
        let t = target.size();
        let mut out = Vec::new();
        let mut map = vec![0usize; n];
        loop {
            if is_homomorphism(&map, source, target) == Ok(true) {
                out.push(map.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                map[i] += 1;
                if map[i] < t {
                    break;
                }
                map[i] = 0;
                i += 1;
            }
            if n == 0 {
                return out;
            }
        }
    }

    #[test]
    fn find_hom_k2_k2_is_identity() {
        let k2 = catalog::k(2);
        let h = find_hom(&k2, &k2, &SearchConfig::default()).unwrap().unwrap();
        assert_eq!(h.map(), &[0, 1]);
    }

    #[test]
    fn find_hom_k3_to_k2_none() {
        let got = find_hom(&catalog::k(3), &catalog::k(2), &SearchConfig::default()).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn empty_source_yields_empty_map() {
        let empty = crate::RelStructure::empty(catalog::graph_signature(), 0);
        let h = find_hom(&empty, &catalog::k(2), &SearchConfig::default())
            .unwrap()
            .unwrap();
        assert!(h.map().is_empty());
    }

    #[test]
    fn csp_membership_samples() {
        let cfg = SearchConfig::default();
        assert!(csp_member(&catalog::directed_cycle(3), &catalog::loop_point(), &cfg).unwrap());
        assert!(!csp_member(&catalog::symmetric_cycle(5), &catalog::k(2), &cfg).unwrap());
        assert!(csp_member(&catalog::symmetric_cycle(4), &catalog::k(2), &cfg).unwrap());
    }

    #[test]
    fn enumerate_matches_brute_force_on_small_cases() {
        let cases = [
            (catalog::k(2), catalog::k(2)),
            (catalog::k(2), catalog::k(3)),
            (catalog::directed_cycle(3), catalog::k(3)),
            (catalog::directed_cycle(4), catalog::k(2)),
            (catalog::point(), catalog::k(3)),
            (catalog::loop_point(), catalog::k(2)),
            (catalog::symmetric_cycle(3), catalog::k(2)),
        ];
        let cfg = SearchConfig::default();
        for (s, t) in cases {
            let mut expect = brute_force_homs(&s, &t);
            expect.sort();
            let got: Vec<Vec<usize>> = enumerate_homs(&s, &t, &cfg)
                .unwrap()
                .into_iter()
                .map(|h| h.map().to_vec())
                .collect();
            assert_eq!(got, expect, "mismatch for {s} -> {t}");
        }
    }

    #[test]
    fn enumerate_counts_frozen() {
        let cfg = SearchConfig::default();
        let k2 = catalog::k(2);
        assert_eq!(enumerate_homs(&k2, &k2, &cfg).unwrap().len(), 2);
        assert_eq!(
            enumerate_homs(&catalog::point(), &catalog::k(3), &cfg).unwrap().len(),
            3
        );
        assert!(enumerate_homs(&catalog::loop_point(), &k2, &cfg).unwrap().is_empty());
    }

    #[test]
    fn surjective_search() {
        let cfg = SearchConfig::default();
        let k2 = catalog::k(2);
        let pt = catalog::point();
        assert!(find_surjective_hom(&k2, &pt, &cfg).unwrap().is_none());
        let id = find_surjective_hom(&k2, &k2, &cfg).unwrap().unwrap();
        assert_eq!(id.map(), &[0, 1]);
        let two_points = crate::RelStructure::empty(catalog::graph_signature(), 2);
        let c = find_surjective_hom(&two_points, &pt, &cfg).unwrap().unwrap();
        assert_eq!(c.map(), &[0, 0]);
    }

    #[test]
    fn hom_independence() {
        let cfg = SearchConfig::default();
        assert!(is_hom_independent(&[catalog::p_point(), catalog::q_point()], &cfg).unwrap());
        assert!(!is_hom_independent(&[catalog::k(2), catalog::k(3)], &cfg).unwrap());
        assert!(is_hom_independent(&[catalog::k(2)], &cfg).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = SearchConfig {
            node_budget: 3,
            ..SearchConfig::default()
        };
        let c9 = catalog::symmetric_cycle(9);
        let err = find_hom(&c9, &catalog::k(3), &cfg).unwrap_err();
        assert!(matches!(err, SolveError::BudgetExhausted { .. }));
    }

    #[test]
    fn composition_closure_spot_checks() {
        let cfg = SearchConfig::default();
        let triples = [
            (catalog::symmetric_cycle(4), catalog::k(2), catalog::k(3)),
            (catalog::directed_cycle(6), catalog::k(2), catalog::k(4)),
        ];
        for (b, a, a2) in triples {
            assert!(csp_member(&b, &a, &cfg).unwrap());
            assert!(csp_member(&a, &a2, &cfg).unwrap());
            assert!(csp_member(&b, &a2, &cfg).unwrap());
        }
    }
}
