//! Finite relational structures over integer universes.
//!
//! A [`Signature`] fixes the relation names and arities. A
//! [`RelStructure`] interprets each relation as an explicit tuple set
//! over the universe `0..size`. Tables are kept in sorted order, so
//! iteration and serialization are canonical by construction.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate relation name {0:?}")]
    DuplicateRelation(String),
    #[error("relation {0:?} has arity 0; arities must be at least 1")]
    ZeroArity(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("relation {relation:?} expects arity {expected} but tuple {tuple:?} has length {got}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        got: usize,
        tuple: Vec<usize>,
    },
    #[error("tuple {tuple:?} in relation {relation:?} mentions element {element} outside universe 0..{size}")]
    ElementOutOfRange {
        relation: String,
        tuple: Vec<usize>,
        element: usize,
        size: usize,
    },
    #[error("no relation named {0:?} in signature")]
    NoSuchRelation(String),
    #[error("element {0} outside universe 0..{1}")]
    BadElement(usize, usize),
    #[error("weak-substructure enumeration would yield {0} structures, over the bound {1}")]
    EnumerationBound(u128, u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("map has length {got} but source universe has size {expected}")]
    DomainSizeMismatch { expected: usize, got: usize },
    #[error("map sends {element} to {image}, outside target universe 0..{size}")]
    ImageOutOfRange {
        element: usize,
        image: usize,
        size: usize,
    },
    #[error("source and target interpret different signatures")]
    SignatureMismatch,
    #[error("map does not preserve {relation:?}: tuple {tuple:?} lands on {image:?}")]
    NotPreserved {
        relation: String,
        tuple: Vec<usize>,
        image: Vec<usize>,
    },
    #[error("composition mismatch: first map's target is not the second map's source")]
    ComposeMismatch,
}

/// Relation names with arities. Names are unique, arities at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    name: String,
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        relations: Vec<(String, usize)>,
    ) -> Result<Self, SignatureError> {
        let mut seen = BTreeSet::new();
        for (rel, arity) in &relations {
            if *arity == 0 {
                return Err(SignatureError::ZeroArity(rel.clone()));
            }
            if !seen.insert(rel.clone()) {
                return Err(SignatureError::DuplicateRelation(rel.clone()));
            }
        }
        Ok(Signature {
            name: name.into(),
            relations,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Relations in declaration order.
    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn relation_name(&self, idx: usize) -> &str {
        &self.relations[idx].0
    }

    pub fn arity(&self, idx: usize) -> usize {
        self.relations[idx].1
    }

    pub fn index_of(&self, rel: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == rel)
    }

    /// True when both signatures declare the same relations with the
    /// same arities in the same order. The signature name itself does
    /// not matter for compatibility.
    pub fn same_shape(&self, other: &Signature) -> bool {
        self.relations == other.relations
    }
}

/// A finite structure: universe `0..size` plus one sorted tuple set
/// per relation of the signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelStructure {
    sig: Arc<Signature>,
    size: usize,
    tables: Vec<BTreeSet<Vec<usize>>>,
}

impl RelStructure {
    /// Structure with empty tables.
    pub fn empty(sig: Arc<Signature>, size: usize) -> Self {
        let tables = vec![BTreeSet::new(); sig.relation_count()];
        RelStructure { sig, size, tables }
    }

    /// Checked constructor. Duplicate tuples collapse because tables
    /// are sets.
    pub fn new(
        sig: Arc<Signature>,
        size: usize,
        tables: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, StructureError> {
        let mut s = RelStructure::empty(sig, size);
        for (idx, rows) in tables.into_iter().enumerate() {
            for row in rows {
                s.insert_tuple(idx, row)?;
            }
        }
        Ok(s)
    }

    /// Builds without any checking; pair with [`RelStructure::validate`].
    pub fn new_unchecked(
        sig: Arc<Signature>,
        size: usize,
        tables: Vec<BTreeSet<Vec<usize>>>,
    ) -> Self {
        RelStructure { sig, size, tables }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn table(&self, rel: usize) -> &BTreeSet<Vec<usize>> {
        &self.tables[rel]
    }

    pub fn tables(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.tables
    }

    pub fn tuple_count(&self) -> usize {
        self.tables.iter().map(|t| t.len()).sum()
    }

    pub fn has_tuple(&self, rel: usize, tuple: &[usize]) -> bool {
        self.tables[rel].contains(tuple)
    }

    /// Inserts one tuple, checking arity and range.
    pub fn insert_tuple(&mut self, rel: usize, tuple: Vec<usize>) -> Result<(), StructureError> {
        let arity = self.sig.arity(rel);
        if tuple.len() != arity {
            return Err(StructureError::ArityMismatch {
                relation: self.sig.relation_name(rel).to_string(),
                expected: arity,
                got: tuple.len(),
                tuple,
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(StructureError::ElementOutOfRange {
                relation: self.sig.relation_name(rel).to_string(),
                tuple,
                element: e,
                size: self.size,
            });
        }
        self.tables[rel].insert(tuple);
        Ok(())
    }

    /// Convenience insert by relation name, for tests and builders.
    /// Drops one tuple; false if it was absent.
    pub fn remove_tuple(&mut self, rel: usize, tuple: &[usize]) -> bool {
        self.tables[rel].remove(tuple)
    }

    pub fn insert(&mut self, rel: &str, tuple: &[usize]) -> Result<(), StructureError> {
        let idx = self
            .sig
            .index_of(rel)
            .ok_or_else(|| StructureError::NoSuchRelation(rel.to_string()))?;
        self.insert_tuple(idx, tuple.to_vec())
    }

    /// Scans every table and reports the first offending tuple, if any.
    /// Tables are scanned in signature order, tuples in sorted order,
    /// so the reported violation is deterministic.
    pub fn validate(&self) -> Result<(), StructureError> {
        for (idx, table) in self.tables.iter().enumerate() {
            let arity = self.sig.arity(idx);
            for tuple in table {
                if tuple.len() != arity {
                    return Err(StructureError::ArityMismatch {
                        relation: self.sig.relation_name(idx).to_string(),
                        expected: arity,
                        got: tuple.len(),
                        tuple: tuple.clone(),
                    });
                }
                if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
                    return Err(StructureError::ElementOutOfRange {
                        relation: self.sig.relation_name(idx).to_string(),
                        tuple: tuple.clone(),
                        element: e,
                        size: self.size,
                    });
                }
            }
        }
        Ok(())
    }

    /// Substructure induced on `subset`: keeps exactly the tuples all
    /// of whose entries lie in the subset, renumbering the universe
    /// ascending. Returns the structure together with the ascending
    /// list of original element ids (new id -> old id).
    pub fn induced_substructure(
        &self,
        subset: &[usize],
    ) -> Result<(RelStructure, Vec<usize>), StructureError> {
        let keep: BTreeSet<usize> = subset.iter().copied().collect();
        if let Some(&e) = keep.iter().find(|&&e| e >= self.size) {
            return Err(StructureError::BadElement(e, self.size));
        }
        let old_ids: Vec<usize> = keep.iter().copied().collect();
        let mut new_id = vec![usize::MAX; self.size];
        for (n, &o) in old_ids.iter().enumerate() {
            new_id[o] = n;
        }
        let mut out = RelStructure::empty(self.sig.clone(), old_ids.len());
        for (idx, table) in self.tables.iter().enumerate() {
            for tuple in table {
                if tuple.iter().all(|&e| keep.contains(&e)) {
                    let renamed: Vec<usize> = tuple.iter().map(|&e| new_id[e]).collect();
                    out.tables[idx].insert(renamed);
                }
            }
        }
        Ok((out, old_ids))
    }

    /// Streams every proper weak substructure: each choice of a
    /// universe subset together with a subset of the tuples lying
    /// inside it, except the structure itself. Universes are
    /// renumbered ascending.
    ///
    /// Order: subsets by size ascending then lexicographically; for a
    /// fixed subset, table subsets in increasing order of the
    /// inclusion mask over the subset's candidate tuples (sorted by
    /// relation then tuple, candidate 0 as the low bit).
    pub fn proper_weak_substructures(
        &self,
        bound: u64,
    ) -> Result<WeakSubstructureIter<'_>, StructureError> {
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for s in 0..=self.size {
            for combo in (0..self.size).combinations(s) {
                subsets.push(combo);
            }
        }
        // Exact stream length, for the up-front guard.
        let mut total: u128 = 0;
        for sub in &subsets {
            let m = self.tuples_inside(sub).len();
            if m >= 100 {
                return Err(StructureError::EnumerationBound(u128::MAX, bound));
            }
            total += 1u128 << m;
        }
        total -= 1; // the structure itself is excluded
        if total > bound as u128 {
            return Err(StructureError::EnumerationBound(total, bound));
        }
        Ok(WeakSubstructureIter {
            parent: self,
            subsets,
            subset_idx: 0,
            candidates: Vec::new(),
            mask: 0,
            started: false,
        })
    }

    // Candidate tuples fully inside `subset`, as (relation, tuple) in
    // relation-then-lexicographic order.
    fn tuples_inside(&self, subset: &[usize]) -> Vec<(usize, Vec<usize>)> {
        let keep: BTreeSet<usize> = subset.iter().copied().collect();
        let mut out = Vec::new();
        for (idx, table) in self.tables.iter().enumerate() {
            for tuple in table {
                if tuple.iter().all(|e| keep.contains(e)) {
                    out.push((idx, tuple.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for RelStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "structure(size {}", self.size)?;
        for (idx, table) in self.tables.iter().enumerate() {
            write!(f, ", {} x{}", self.sig.relation_name(idx), table.len())?;
        }
        write!(f, ")")
    }
}

/// Iterator behind [`RelStructure::proper_weak_substructures`].
pub struct WeakSubstructureIter<'a> {
    parent: &'a RelStructure,
    subsets: Vec<Vec<usize>>,
    subset_idx: usize,
    candidates: Vec<(usize, Vec<usize>)>,
    mask: u128,
    started: bool,
}

impl Iterator for WeakSubstructureIter<'_> {
    type Item = RelStructure;

    fn next(&mut self) -> Option<RelStructure> {
        loop {
            if !self.started {
                if self.subset_idx >= self.subsets.len() {
                    return None;
                }
                self.candidates = self.parent.tuples_inside(&self.subsets[self.subset_idx]);
                self.mask = 0;
                self.started = true;
            }
            if self.mask >= 1u128 << self.candidates.len() {
                self.subset_idx += 1;
                self.started = false;
                continue;
            }
            let subset = &self.subsets[self.subset_idx];
            let mask = self.mask;
            self.mask += 1;
            // The full subset with the full table is the structure itself.
            let is_self = subset.len() == self.parent.size
                && mask == (1u128 << self.candidates.len()) - 1;
            if is_self {
                continue;
            }
            let mut new_id = vec![usize::MAX; self.parent.size];
            for (n, &o) in subset.iter().enumerate() {
                new_id[o] = n;
            }
            let mut out = RelStructure::empty(self.parent.sig.clone(), subset.len());
            for (bit, (rel, tuple)) in self.candidates.iter().enumerate() {
                if mask & (1u128 << bit) != 0 {
                    let renamed: Vec<usize> = tuple.iter().map(|&e| new_id[e]).collect();
                    out.tables[*rel].insert(renamed);
                }
            }
            return Some(out);
        }
    }
}

/// Checks tuple preservation of a total map. The map must already be
/// total on the source universe with values inside the target
/// universe; those are preconditions, not a `false` result.
pub fn is_homomorphism(
    map: &[usize],
    source: &RelStructure,
    target: &RelStructure,
) -> Result<bool, HomError> {
    if map.len() != source.size() {
        return Err(HomError::DomainSizeMismatch {
            expected: source.size(),
            got: map.len(),
        });
    }
    if let Some((e, &im)) = map.iter().enumerate().find(|(_, &im)| im >= target.size()) {
        return Err(HomError::ImageOutOfRange {
            element: e,
            image: im,
            size: target.size(),
        });
    }
    if !source.signature().same_shape(target.signature()) {
        return Err(HomError::SignatureMismatch);
    }
    for (idx, table) in source.tables().iter().enumerate() {
        for tuple in table {
            let image: Vec<usize> = tuple.iter().map(|&e| map[e]).collect();
            if !target.has_tuple(idx, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A total tuple-preserving map, validated at construction. Holding a
/// value of this type certifies the map against the carried source
/// and target structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: RelStructure,
    target: RelStructure,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(
        source: RelStructure,
        target: RelStructure,
        map: Vec<usize>,
    ) -> Result<Self, HomError> {
        match is_homomorphism(&map, &source, &target)? {
            true => Ok(Homomorphism {
                source,
                target,
                map,
            }),
            false => {
                // Rebuild the offending tuple for the error report.
                for (idx, table) in source.tables().iter().enumerate() {
                    for tuple in table {
                        let image: Vec<usize> = tuple.iter().map(|&e| map[e]).collect();
                        if !target.has_tuple(idx, &image) {
                            return Err(HomError::NotPreserved {
                                relation: source.signature().relation_name(idx).to_string(),
                                tuple: tuple.clone(),
                                image,
                            });
                        }
                    }
                }
                unreachable!("is_homomorphism returned false without a witness")
            }
        }
    }

    pub fn source(&self) -> &RelStructure {
        &self.source
    }

    pub fn target(&self) -> &RelStructure {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, element: usize) -> usize {
        self.map[element]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &im in &self.map {
            hit[im] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `other` after `self`; fails unless `self`'s target equals
    /// `other`'s source.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism, HomError> {
        if self.target != other.source {
            return Err(HomError::ComposeMismatch);
        }
        let map: Vec<usize> = self.map.iter().map(|&e| other.map[e]).collect();
        Homomorphism::new(self.source.clone(), other.target.clone(), map)
    }
}
