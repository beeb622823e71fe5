//! Finite-duality probes: pinch-based duality verdicts, desk-scale
//! enumeration of (critical) obstructions, the negated-diagram
//! sentence of an obstruction, and the distance-based map from an
//! obstruction into a pinched template.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::Bounds;
use crate::constructions::{self, ConstructError};
use crate::incidence::{self, ExtendedNat};
use crate::logic::{Formula, LogicError, Quantifier, Sentence};
use crate::relational::{HomError, Homomorphism, RelStructure, Signature, StructureError};
use crate::solver::{self, SearchConfig, SolveError};

#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("family is empty")]
    EmptyFamily,
    #[error("family is not homomorphism-independent: member {0} maps into member {1}")]
    NotHomIndependent(usize, usize),
    #[error("enumeration needs {needed} candidate checks, budget is {budget}")]
    EnumerationBound { needed: u128, budget: u64 },
    #[error("structure is empty")]
    EmptyStructure,
    #[error("elements {x} and {y} are at distance {dist}, need a finite distance of at least 3")]
    BadDistance { x: usize, y: usize, dist: ExtendedNat },
    #[error("{which} is not a homomorphism off the removed point: {reason}")]
    BadColoring { which: &'static str, reason: String },
    #[error("element {0} outside the relevant universe")]
    BadAnchor(usize),
}

/// Outcome of the pinch criterion up to a level cap.
#[derive(Debug, Clone)]
pub enum DualityVerdict {
    /// Least level whose pinch maps into the template, with the
    /// witness map.
    DualityAt { n: usize, witness: Homomorphism },
    /// Inconclusive: no level up to the cap admits a map. The
    /// criterion is exact only over all levels.
    NoDualityUpTo(usize),
}

impl DualityVerdict {
    pub fn level(&self) -> Option<usize> {
        match self {
            DualityVerdict::DualityAt { n, .. } => Some(*n),
            DualityVerdict::NoDualityUpTo(_) => None,
        }
    }
}

impl std::fmt::Display for DualityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DualityVerdict::DualityAt { n, .. } => write!(f, "DUALITY_AT({n})"),
            DualityVerdict::NoDualityUpTo(cap) => write!(f, "NO_DUALITY_UP_TO({cap})"),
        }
    }
}

/// Check levels 1..=max_n in order, returning the least witness.
pub fn duality_upto(
    template: &RelStructure,
    max_n: usize,
    bounds: &Bounds,
) -> Result<DualityVerdict, DualityError> {
    let config = SearchConfig::from_bounds(bounds);
    for n in 1..=max_n {
        let pinch = constructions::n_pinch(template, n, bounds)?;
        if let Some(witness) = solver::find_hom(pinch.structure(), template, &config)? {
            return Ok(DualityVerdict::DualityAt { n, witness });
        }
    }
    Ok(DualityVerdict::NoDualityUpTo(max_n))
}

/// Per-template verdicts for a homomorphism-independent family, plus
/// the critical-obstruction diameter bound when every member passes.
#[derive(Debug, Clone)]
pub struct FamilyDualityReport {
    pub verdicts: Vec<DualityVerdict>,
    /// Sum of the levels plus twice the family size, when every
    /// template reports a level.
    pub diameter_bound: Option<u64>,
    /// Indices of templates with no witness up to the cap.
    pub failing: Vec<usize>,
}

pub fn colour_family_duality(
    family: &[RelStructure],
    max_n: usize,
    bounds: &Bounds,
) -> Result<FamilyDualityReport, DualityError> {
    if family.is_empty() {
        return Err(DualityError::EmptyFamily);
    }
    let config = SearchConfig::from_bounds(bounds);
    require_independent(family, &config)?;
    let verdicts: Vec<DualityVerdict> = family
        .iter()
        .map(|t| duality_upto(t, max_n, bounds))
        .collect::<Result<_, _>>()?;
    let failing: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.level().is_none())
        .map(|(i, _)| i)
        .collect();
    let diameter_bound = if failing.is_empty() {
        let levels: u64 = verdicts.iter().map(|v| v.level().unwrap() as u64).sum();
        Some(levels + 2 * family.len() as u64)
    } else {
        None
    };
    Ok(FamilyDualityReport {
        verdicts,
        diameter_bound,
        failing,
    })
}

fn require_independent(
    family: &[RelStructure],
    config: &SearchConfig,
) -> Result<(), DualityError> {
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if i != j && solver::csp_member(a, b, config)? {
                return Err(DualityError::NotHomIndependent(i, j));
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------- enumeration

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All structures of exactly `size` over `sig`, one canonical
/// representative per isomorphism class, in ascending table-mask
/// order. The canonical form is the permutation-minimal tuple mask.
pub fn enumerate_structures_up_to_iso(
    sig: &Arc<Signature>,
    size: usize,
    enum_budget: u64,
) -> Result<Vec<RelStructure>, DualityError> {
    let tuples: Vec<(usize, Vec<usize>)> = sig
        .relations()
        .iter()
        .enumerate()
        .flat_map(|(rel, &(_, arity))| {
            std::iter::repeat(0..size)
                .take(arity)
                .multi_cartesian_product()
                .map(move |t| (rel, t))
        })
        .collect();
    let t = tuples.len();
    let needed = if t >= 64 {
        u128::MAX
    } else {
        (1u128 << t) * factorial(size)
    };
    if needed > enum_budget as u128 {
        return Err(DualityError::EnumerationBound {
            needed,
            budget: enum_budget,
        });
    }
    let index: HashMap<(usize, Vec<usize>), usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    // Tuple-index permutation induced by each universe permutation.
    let perms: Vec<Vec<usize>> = (0..size)
        .permutations(size)
        .map(|p| {
            tuples
                .iter()
                .map(|(rel, tup)| {
                    let image: Vec<usize> = tup.iter().map(|&e| p[e]).collect();
                    index[&(*rel, image)]
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    'masks: for mask in 0u64..(1u64 << t) {
        for perm in &perms {
            let mut image = 0u64;
            for i in 0..t {
                if mask >> i & 1 == 1 {
                    image |= 1 << perm[i];
                }
            }
            if image < mask {
                continue 'masks;
            }
        }
        let mut st = RelStructure::empty(Arc::clone(sig), size);
        for (i, (rel, tuple)) in tuples.iter().enumerate() {
            if mask >> i & 1 == 1 {
                st.insert_tuple(*rel, tuple.clone())?;
            }
        }
        out.push(st);
    }
    Ok(out)
}

/// Brute-force isomorphism test, meant for sizes at most 5 or so.
pub fn are_isomorphic(a: &RelStructure, b: &RelStructure) -> bool {
    if a.size() != b.size() || !a.signature().same_shape(b.signature()) {
        return false;
    }
    (0..a.size()).permutations(a.size()).any(|p| {
        a.tables().iter().enumerate().all(|(rel, table)| {
            let image: std::collections::BTreeSet<Vec<usize>> = table
                .iter()
                .map(|t| t.iter().map(|&e| p[e]).collect())
                .collect();
            &image == b.table(rel)
        })
    })
}

// ------------------------------------------------------ obstructions

/// A structure outside the family's homomorphism closure.
#[derive(Debug, Clone)]
pub struct ObstructionRecord {
    pub structure: RelStructure,
    /// Every proper weak substructure maps into some family member.
    pub critical: bool,
    pub diameter: ExtendedNat,
}

fn in_closure(
    b: &RelStructure,
    family: &[RelStructure],
    config: &SearchConfig,
) -> Result<bool, DualityError> {
    for member in family {
        if solver::csp_member(b, member, config)? {
            return Ok(true);
        }
    }
    Ok(false)
}

// Criticality needs only the maximal proper weak substructures: drop
// one tuple, or drop one element. Closure membership is downward
// closed, so the full weak-substructure lattice follows.
fn is_critical(
    c: &RelStructure,
    family: &[RelStructure],
    config: &SearchConfig,
) -> Result<bool, DualityError> {
    for rel in 0..c.signature().relation_count() {
        for tuple in c.table(rel).clone() {
            let mut smaller = c.clone();
            smaller.remove_tuple(rel, &tuple);
            if !in_closure(&smaller, family, config)? {
                return Ok(false);
            }
        }
    }
    for e in 0..c.size() {
        let keep: Vec<usize> = (0..c.size()).filter(|&v| v != e).collect();
        let (smaller, _) = c.induced_substructure(&keep)?;
        if !in_closure(&smaller, family, config)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerate obstructions for the family up to `max_size`, one per
/// isomorphism class, each marked critical or not and carrying its
/// incidence diameter.
pub fn find_critical_obstructions(
    family: &[RelStructure],
    max_size: usize,
    bounds: &Bounds,
    parallel: bool,
) -> Result<Vec<ObstructionRecord>, DualityError> {
    if family.is_empty() {
        return Err(DualityError::EmptyFamily);
    }
    let sig = Arc::clone(family[0].signature());
    let config = SearchConfig::from_bounds(bounds);
    let mut candidates = Vec::new();
    for size in 0..=max_size {
        candidates.extend(enumerate_structures_up_to_iso(
            &sig,
            size,
            bounds.enum_budget,
        )?);
    }
    let examine = |c: &RelStructure| -> Result<Option<ObstructionRecord>, DualityError> {
        if in_closure(c, family, &config)? {
            return Ok(None);
        }
        let critical = is_critical(c, family, &config)?;
        Ok(Some(ObstructionRecord {
            structure: c.clone(),
            critical,
            diameter: incidence::diameter(c),
        }))
    };
    let results: Vec<Option<ObstructionRecord>> = if parallel {
        candidates
            .par_iter()
            .map(examine)
            .collect::<Result<_, _>>()?
    } else {
        candidates.iter().map(examine).collect::<Result<_, _>>()?
    };
    Ok(results.into_iter().flatten().collect())
}

// ---------------------------------------------------- anti-identities

/// The negated diagram of a nonempty structure: universally
/// quantified disjunction of one negated atom per tuple. A model
/// satisfies it exactly when the structure does not map into the
/// model. A tupleless structure yields "forall x0 . ~(x0 = x0)",
/// which no structure with elements satisfies.
pub fn anti_identity_of_obstruction(c: &RelStructure) -> Result<Sentence, DualityError> {
    if c.size() == 0 {
        return Err(DualityError::EmptyStructure);
    }
    let prefix: Vec<(Quantifier, String)> = (0..c.size())
        .map(|i| (Quantifier::Forall, format!("x{i}")))
        .collect();
    let mut disjuncts = Vec::new();
    for (rel, table) in c.tables().iter().enumerate() {
        for tuple in table {
            disjuncts.push(Formula::Not(Box::new(Formula::Atom {
                rel,
                args: tuple.clone(),
            })));
        }
    }
    let matrix = match disjuncts.into_iter().fold(None, |acc, d| match acc {
        None => Some(d),
        Some(a) => Some(Formula::Or(Box::new(a), Box::new(d))),
    }) {
        Some(m) => m,
        None => Formula::Not(Box::new(Formula::Equal(0, 0))),
    };
    Ok(Sentence::new(Arc::clone(c.signature()), prefix, matrix)?)
}

// ---------------------------------------------- obstruction-to-pinch

/// The layer map and validated homomorphism from an obstruction into
/// a pinched template.
#[derive(Debug, Clone)]
pub struct PinchHomWitness {
    pub hom: Homomorphism,
    pub kappa: Vec<usize>,
    pub n: usize,
}

fn restricted_hom(
    c: &RelStructure,
    template: &RelStructure,
    full_map: &[usize],
    removed: usize,
    which: &'static str,
) -> Result<(), DualityError> {
    let keep: Vec<usize> = (0..c.size()).filter(|&v| v != removed).collect();
    let (induced, old_ids) = c.induced_substructure(&keep)?;
    let map: Vec<usize> = old_ids.iter().map(|&v| full_map[v]).collect();
    Homomorphism::new(induced, template.clone(), map).map_err(|e| DualityError::BadColoring {
        which,
        reason: e.to_string(),
    })?;
    Ok(())
}

/// Build the map from an obstruction `c` into `n_pinch(template, n)`
/// where n is two less than the incidence distance from `x` to `y`.
/// `alpha` and `beta` are full-length maps whose restrictions to the
/// universe without `x` (for alpha) and without `y` (for beta) are
/// homomorphisms into the template; the removed entries are ignored.
/// `a0` fills the unconstrained coordinate at the two pinched ends.
pub fn obstruction_to_pinch_hom(
    c: &RelStructure,
    x: usize,
    y: usize,
    alpha: &[usize],
    beta: &[usize],
    template: &RelStructure,
    a0: usize,
    bounds: &Bounds,
) -> Result<PinchHomWitness, DualityError> {
    if c.size() == 0 {
        return Err(DualityError::EmptyStructure);
    }
    if x >= c.size() || y >= c.size() {
        return Err(DualityError::BadAnchor(x.max(y)));
    }
    if a0 >= template.size() {
        return Err(DualityError::BadAnchor(a0));
    }
    let from_x = incidence::distances_from(c, x);
    let n = match from_x[y] {
        ExtendedNat::Fin(d) if d >= 3 => (d - 2) as usize,
        other => return Err(DualityError::BadDistance { x, y, dist: other }),
    };
    if alpha.len() != c.size() || beta.len() != c.size() {
        return Err(DualityError::BadColoring {
            which: "alpha/beta",
            reason: "length differs from the universe".into(),
        });
    }
    restricted_hom(c, template, alpha, x, "alpha")?;
    restricted_hom(c, template, beta, y, "beta")?;
    let pinch = constructions::n_pinch(template, n, bounds)?;
    // Layer assignment: distance band around x, clamped to the far
    // end once past n + 1.
    let kappa: Vec<usize> = (0..c.size())
        .map(|z| {
            if z == x {
                0
            } else {
                match from_x[z] {
                    ExtendedNat::Fin(d) if d <= n as u64 + 1 => (d - 1) as usize,
                    _ => n,
                }
            }
        })
        .collect();
    let map: Vec<usize> = (0..c.size())
        .map(|z| {
            if z == x {
                pinch.class_of(0, beta[x], a0)
            } else if z == y {
                pinch.class_of(n, a0, alpha[y])
            } else {
                pinch.class_of(kappa[z], beta[z], alpha[z])
            }
        })
        .collect();
    let hom = Homomorphism::new(c.clone(), pinch.structure().clone(), map)?;
    Ok(PinchHomWitness { hom, kappa, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::logic;

    fn b() -> Bounds {
        Bounds::default()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn duality_holds_for_absorbing_templates() {
        let v = duality_upto(&catalog::loop_point(), 3, &b()).unwrap();
        assert_eq!(v.level(), Some(1));
        assert_eq!(v.to_string(), "DUALITY_AT(1)");
        let v = duality_upto(&catalog::point(), 3, &b()).unwrap();
        assert_eq!(v.level(), Some(1));
    }

    #[test]
    fn duality_fails_for_k2_at_small_levels() {
        let v = duality_upto(&catalog::k(2), 3, &b()).unwrap();
        assert_eq!(v.level(), None);
        assert_eq!(v.to_string(), "NO_DUALITY_UP_TO(3)");
    }

    #[test]
    fn witnesses_compose_through_the_collapse() {
        let lp = catalog::loop_point();
        let v = duality_upto(&lp, 3, &b()).unwrap();
        let witness = match v {
            DualityVerdict::DualityAt { witness, .. } => witness,
            other => panic!("expected a witness, got {other}"),
        };
        let mut down = witness;
        for m in 1..=3 {
            let collapse = constructions::pinch_collapse_hom(&lp, m, &b()).unwrap();
            down = collapse.compose(&down).unwrap();
            assert_eq!(
                down.source().size(),
                constructions::n_pinch(&lp, m + 1, &b()).unwrap().size()
            );
        }
    }

    #[test]
    fn family_reports() {
        let family = vec![catalog::p_point(), catalog::q_point()];
        let report = colour_family_duality(&family, 3, &b()).unwrap();
        assert_eq!(report.diameter_bound, Some(6));
        assert!(report.failing.is_empty());
        let single = colour_family_duality(&[catalog::loop_point()], 3, &b()).unwrap();
        assert_eq!(single.diameter_bound, Some(3));
        let failing = colour_family_duality(&[catalog::k(2)], 3, &b()).unwrap();
        assert_eq!(failing.failing, vec![0]);
        assert_eq!(failing.diameter_bound, None);
        let err = colour_family_duality(&[catalog::k(2), catalog::loop_point()], 2, &b())
            .unwrap_err();
        assert!(matches!(err, DualityError::NotHomIndependent(0, 1)));
    }

    #[test]
    fn enumeration_counts_iso_classes() {
        let sig = catalog::graph_signature();
        let count = |size| {
            enumerate_structures_up_to_iso(&sig, size, 1 << 20)
                .unwrap()
                .len()
        };
        assert_eq!(count(0), 1);
        assert_eq!(count(1), 2);
        assert_eq!(count(2), 10);
        assert_eq!(count(3), 104);
        let err = enumerate_structures_up_to_iso(&sig, 3, 100).unwrap_err();
        assert!(matches!(err, DualityError::EnumerationBound { .. }));
    }

    #[test]
    fn isomorphism_spot_checks() {
        let c3 = catalog::directed_cycle(3);
        let mut relabeled = RelStructure::empty(catalog::graph_signature(), 3);
        for t in [[1, 0], [0, 2], [2, 1]] {
            relabeled.insert("E", &t).unwrap();
        }
        assert!(are_isomorphic(&c3, &relabeled));
        assert!(!are_isomorphic(&c3, &catalog::k(3)));
    }

    #[test]
    fn k2_obstructions_at_size_three() {
        let family = vec![catalog::k(2)];
        let records = find_critical_obstructions(&family, 3, &b(), false).unwrap();
        for r in &records {
            assert!(!solver::csp_member(&r.structure, &family[0], &cfg()).unwrap());
        }
        let criticals: Vec<&ObstructionRecord> =
            records.iter().filter(|r| r.critical).collect();
        assert!(criticals
            .iter()
            .any(|r| are_isomorphic(&r.structure, &catalog::loop_point())));
        assert!(criticals
            .iter()
            .any(|r| are_isomorphic(&r.structure, &catalog::directed_cycle(3))));
        // The transitive tournament is also critical at size 3;
        // least obstructions are not unique.
        let mut t3 = RelStructure::empty(catalog::graph_signature(), 3);
        for t in [[0, 1], [0, 2], [1, 2]] {
            t3.insert("E", &t).unwrap();
        }
        assert!(criticals.iter().any(|r| are_isomorphic(&r.structure, &t3)));
        let sym3 = catalog::symmetric_cycle(3);
        let sym_record = records
            .iter()
            .find(|r| are_isomorphic(&r.structure, &sym3))
            .expect("symmetric triangle should be an obstruction");
        assert!(!sym_record.critical);
    }

    #[test]
    fn critical_flag_matches_full_weak_substructure_scan() {
        let family = vec![catalog::k(2)];
        let config = cfg();
        let c3 = catalog::directed_cycle(3);
        let mut count = 0;
        for sub in c3.proper_weak_substructures(1 << 20).unwrap() {
            count += 1;
            assert!(in_closure(&sub, &family, &config).unwrap());
        }
        assert_eq!(count, 17);
        assert!(is_critical(&c3, &family, &config).unwrap());
        assert!(!is_critical(&catalog::symmetric_cycle(3), &family, &config).unwrap());
    }

    #[test]
    fn point_template_criticals() {
        let family = vec![catalog::point()];
        let records = find_critical_obstructions(&family, 2, &b(), false).unwrap();
        let criticals: Vec<&ObstructionRecord> =
            records.iter().filter(|r| r.critical).collect();
        assert_eq!(criticals.len(), 2);
        assert!(criticals
            .iter()
            .any(|r| are_isomorphic(&r.structure, &catalog::loop_point())));
        let single_edge = {
            let mut st = RelStructure::empty(catalog::graph_signature(), 2);
            st.insert("E", &[0, 1]).unwrap();
            st
        };
        assert!(criticals
            .iter()
            .any(|r| are_isomorphic(&r.structure, &single_edge)));
        // Verdict DUALITY_AT(1) promises critical diameters below
        // 1 + 2.
        for r in criticals {
            match r.diameter {
                ExtendedNat::Fin(d) => assert!(d < 3),
                ExtendedNat::Infinity => panic!("connected criticals expected"),
            }
        }
    }

    #[test]
    fn unary_family_criticals() {
        let family = vec![catalog::p_point(), catalog::q_point()];
        let records = find_critical_obstructions(&family, 3, &b(), true).unwrap();
        let criticals: Vec<&ObstructionRecord> =
            records.iter().filter(|r| r.critical).collect();
        assert_eq!(criticals.len(), 2);
        let diameters: Vec<ExtendedNat> = criticals.iter().map(|r| r.diameter).collect();
        assert!(diameters.contains(&ExtendedNat::Fin(0)));
        // The two-point critical has no shared block, so its
        // incidence diameter is infinite; the diameter bound only
        // speaks to the connected ones.
        assert!(diameters.contains(&ExtendedNat::Infinity));
    }

    #[test]
    fn anti_identity_shapes() {
        let s = anti_identity_of_obstruction(&catalog::loop_point()).unwrap();
        assert_eq!(s.to_string(), "forall x0 . ~E(x0,x0)");
        assert_eq!(logic::classify_axiom(&s), logic::AxiomClass::AntiIdentity);
        let mut edge = RelStructure::empty(catalog::graph_signature(), 2);
        edge.insert("E", &[0, 1]).unwrap();
        let s = anti_identity_of_obstruction(&edge).unwrap();
        assert_eq!(s.to_string(), "forall x0 x1 . ~E(x0,x1)");
        let s = anti_identity_of_obstruction(&catalog::point()).unwrap();
        assert_eq!(s.to_string(), "forall x0 . ~(x0 = x0)");
        assert_eq!(logic::classify_axiom(&s), logic::AxiomClass::AntiIdentity);
        let c3 = anti_identity_of_obstruction(&catalog::directed_cycle(3)).unwrap();
        assert!(logic::models(&catalog::k(2), &c3, &b()).unwrap());
        assert!(!logic::models(&catalog::symmetric_cycle(3), &c3, &b()).unwrap());
    }

    #[test]
    fn anti_identity_agrees_with_the_solver() {
        let config = cfg();
        let sig = catalog::graph_signature();
        let single_edge = {
            let mut st = RelStructure::empty(Arc::clone(&sig), 2);
            st.insert("E", &[0, 1]).unwrap();
            st
        };
        let witnesses = [
            catalog::loop_point(),
            catalog::directed_cycle(3),
            single_edge,
        ];
        for c in &witnesses {
            let sentence = anti_identity_of_obstruction(c).unwrap();
            for size in 0..=3 {
                for target in enumerate_structures_up_to_iso(&sig, size, 1 << 30).unwrap() {
                    let satisfied = logic::models(&target, &sentence, &b()).unwrap();
                    let maps = solver::csp_member(c, &target, &config).unwrap();
                    assert_eq!(satisfied, !maps, "mismatch for {c} into {target}");
                }
            }
        }
    }

    #[test]
    fn nine_cycle_maps_into_the_double_pinch() {
        let c9 = catalog::symmetric_cycle(9);
        let k2 = catalog::k(2);
        let alpha: Vec<usize> = (0..9).map(|z| z % 2).collect();
        let mut beta = vec![0; 9];
        for (i, z) in [5, 6, 7, 8, 0, 1, 2, 3].into_iter().enumerate() {
            beta[z] = i % 2;
        }
        let witness = obstruction_to_pinch_hom(&c9, 0, 4, &alpha, &beta, &k2, 0, &b()).unwrap();
        assert_eq!(witness.n, 2);
        assert_eq!(witness.kappa[0], 0);
        assert_eq!(witness.kappa[4], 2);
        let p2 = constructions::n_pinch(&k2, 2, &b()).unwrap();
        assert!(solver::csp_member(&c9, p2.structure(), &cfg()).unwrap());
        assert!(!solver::csp_member(&c9, &k2, &cfg()).unwrap());
    }

    #[test]
    fn pinch_hom_preconditions() {
        let k2 = catalog::k(2);
        let c3 = catalog::directed_cycle(3);
        let err =
            obstruction_to_pinch_hom(&c3, 0, 1, &[0; 3], &[0; 3], &k2, 0, &b()).unwrap_err();
        assert!(matches!(err, DualityError::BadDistance { .. }));
        let two = RelStructure::empty(catalog::graph_signature(), 2);
        let err =
            obstruction_to_pinch_hom(&two, 0, 1, &[0; 2], &[0; 2], &k2, 0, &b()).unwrap_err();
        assert!(matches!(
            err,
            DualityError::BadDistance {
                dist: ExtendedNat::Infinity,
                ..
            }
        ));
        let c9 = catalog::symmetric_cycle(9);
        let err =
            obstruction_to_pinch_hom(&c9, 0, 4, &[0; 9], &[0; 9], &k2, 0, &b()).unwrap_err();
        assert!(matches!(
            err,
            DualityError::BadColoring { which: "alpha", .. }
        ));
    }
}
