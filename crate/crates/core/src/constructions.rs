//! Structure algebra: disjoint unions, direct products, quotients,
//! the link family, and the pinched structures built from it.
//!
//! Elements of every constructed structure are renumbered to a dense
//! integer universe. Each operation documents its numbering so maps
//! between raw and constructed elements stay reproducible.

use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::bounds::Bounds;
use crate::relational::{HomError, Homomorphism, RelStructure, Signature, StructureError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("operands use different signatures")]
    SignatureMismatch,
    #[error("constructed size {requested} exceeds the configured bound {bound}")]
    SizeBound { requested: u128, bound: u64 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("pinch index must be at least 1")]
    BadPinchIndex,
    #[error("structure error: {0}")]
    Structure(#[from] StructureError),
    #[error("constructed map fails to be a homomorphism: {0}")]
    Hom(#[from] HomError),
}

/// Disjoint union of `parts` over a shared signature. Element `x` of
/// part `p` becomes `offsets[p] + x`; the returned offsets are the
/// running sums of part sizes.
pub fn disjoint_union(
    sig: &Arc<Signature>,
    parts: &[RelStructure],
) -> Result<(RelStructure, Vec<usize>), ConstructError> {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut size = 0usize;
    for part in parts {
        if !part.signature().same_shape(sig) {
            return Err(ConstructError::SignatureMismatch);
        }
        offsets.push(size);
        size += part.size();
    }
    let mut out = RelStructure::empty(Arc::clone(sig), size);
    for (part, &off) in parts.iter().zip(&offsets) {
        for (rel, table) in part.tables().iter().enumerate() {
            for tuple in table {
                let shifted: Vec<usize> = tuple.iter().map(|&x| x + off).collect();
                out.insert_tuple(rel, shifted)?;
            }
        }
    }
    Ok((out, offsets))
}

/// Index of a coordinate vector under row-major numbering, last
/// factor fastest.
pub fn encode_index(sizes: &[usize], coords: &[usize]) -> usize {
    debug_assert_eq!(sizes.len(), coords.len());
    let mut idx = 0;
    for (&s, &c) in sizes.iter().zip(coords) {
        debug_assert!(c < s);
        idx = idx * s + c;
    }
    idx
}

/// Inverse of [`encode_index`].
pub fn decode_index(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut coords = vec![0; sizes.len()];
    for (pos, &s) in sizes.iter().enumerate().rev() {
        coords[pos] = idx % s;
        idx /= s;
    }
    coords
}

/// Direct product over a shared signature, row-major element
/// numbering. A tuple is in the product relation exactly when each
/// coordinate projection is in the factor's relation. The empty
/// factor list gives the one-point structure with every relation
/// holding its constant tuple.
pub fn direct_product(
    sig: &Arc<Signature>,
    factors: &[RelStructure],
    bounds: &Bounds,
) -> Result<RelStructure, ConstructError> {
    let mut size: u128 = 1;
    for factor in factors {
        if !factor.signature().same_shape(sig) {
            return Err(ConstructError::SignatureMismatch);
        }
        size *= factor.size() as u128;
        if size > bounds.size_bound as u128 {
            return Err(ConstructError::SizeBound {
                requested: size,
                bound: bounds.size_bound as u64,
            });
        }
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let mut out = RelStructure::empty(Arc::clone(sig), size as usize);
    for (rel, &(_, arity)) in sig.relations().iter().enumerate() {
        let tables: Vec<Vec<&Vec<usize>>> = factors
            .iter()
            .map(|f| f.table(rel).iter().collect())
            .collect();
        for rows in tables.iter().map(|t| t.iter()).multi_cartesian_product() {
            let tuple: Vec<usize> = (0..arity)
                .map(|k| {
                    let coords: Vec<usize> = rows.iter().map(|row| row[k]).collect();
                    encode_index(&sizes, &coords)
                })
                .collect();
            out.insert_tuple(rel, tuple)?;
        }
        if factors.is_empty() {
            out.insert_tuple(rel, vec![0; arity])?;
        }
    }
    Ok(out)
}

/// Quotient by a partition of the universe. Classes are numbered by
/// their least member, ascending; the relation is the minimal one
/// making the canonical map a homomorphism. Returns the quotient and
/// the element-to-class map.
pub fn quotient(
    structure: &RelStructure,
    partition: &[Vec<usize>],
) -> Result<(RelStructure, Vec<usize>), ConstructError> {
    let mut seen = vec![false; structure.size()];
    for class in partition {
        if class.is_empty() {
            return Err(ConstructError::InvalidPartition("empty class".into()));
        }
        for &x in class {
            if x >= structure.size() {
                return Err(ConstructError::InvalidPartition(format!(
                    "element {x} out of range"
                )));
            }
            if seen[x] {
                return Err(ConstructError::InvalidPartition(format!(
                    "element {x} in two classes"
                )));
            }
            seen[x] = true;
        }
    }
    if let Some(x) = seen.iter().position(|&s| !s) {
        return Err(ConstructError::InvalidPartition(format!(
            "element {x} not covered"
        )));
    }
    let mut ordered: Vec<&Vec<usize>> = partition.iter().collect();
    ordered.sort_by_key(|class| *class.iter().min().unwrap());
    let mut class_map = vec![0; structure.size()];
    for (id, class) in ordered.iter().enumerate() {
        for &x in class.iter() {
            class_map[x] = id;
        }
    }
    let mut out = RelStructure::empty(Arc::clone(structure.signature()), ordered.len());
    for (rel, table) in structure.tables().iter().enumerate() {
        for tuple in table {
            let image: Vec<usize> = tuple.iter().map(|&x| class_map[x]).collect();
            out.insert_tuple(rel, image)?;
        }
    }
    Ok((out, class_map))
}

/// The n-link: universe {0..n}, each relation of arity r holding
/// every r-tuple confined to a consecutive pair {j-1, j}.
pub fn n_link(sig: &Arc<Signature>, n: usize) -> RelStructure {
    let mut out = RelStructure::empty(Arc::clone(sig), n + 1);
    for (rel, &(_, arity)) in sig.relations().iter().enumerate() {
        for j in 1..=n {
            for tuple in std::iter::repeat([j - 1, j]).take(arity).multi_cartesian_product() {
                out.insert_tuple(rel, tuple).unwrap();
            }
        }
    }
    out
}

/// A pinched structure: the quotient of link x template x template
/// that squeezes the two end layers down to single template copies.
///
/// Classes are numbered by least member of the underlying product,
/// which sorts them by (layer, least surviving pair). `iota` gives
/// each class its layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinchedStructure {
    underlying: RelStructure,
    template: RelStructure,
    n: usize,
    /// Member triples (i, a, b) per class, ascending.
    classes: Vec<Vec<(usize, usize, usize)>>,
    iota: Vec<usize>,
    /// Product element (row-major triple index) to class id.
    product_class: Vec<usize>,
}

impl PinchedStructure {
    pub fn structure(&self) -> &RelStructure {
        &self.underlying
    }

    pub fn template(&self) -> &RelStructure {
        &self.template
    }

    pub fn link_length(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.underlying.size()
    }

    pub fn iota(&self, class: usize) -> usize {
        self.iota[class]
    }

    pub fn members(&self, class: usize) -> &[(usize, usize, usize)] {
        &self.classes[class]
    }

    /// Least member triple of a class.
    pub fn repr(&self, class: usize) -> (usize, usize, usize) {
        self.classes[class][0]
    }

    pub fn class_of(&self, i: usize, a: usize, b: usize) -> usize {
        let m = self.template.size();
        self.product_class[encode_index(&[self.n + 1, m, m], &[i, a, b])]
    }
}

/// Build the pinched structure of a template at link length `n >= 1`.
pub fn n_pinch(
    template: &RelStructure,
    n: usize,
    bounds: &Bounds,
) -> Result<PinchedStructure, ConstructError> {
    if n == 0 {
        return Err(ConstructError::BadPinchIndex);
    }
    let sig = Arc::clone(template.signature());
    let link = n_link(&sig, n);
    let product = direct_product(&sig, &[link, template.clone(), template.clone()], bounds)?;
    let m = template.size();
    let sizes = [n + 1, m, m];

    // Group product elements by their pinch key; first-encounter
    // order over ascending element ids numbers classes by least
    // member.
    let mut key_to_class: std::collections::HashMap<(usize, usize, usize), usize> =
        std::collections::HashMap::new();
    let mut classes: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut iota = Vec::new();
    let mut product_class = vec![0; product.size()];
    for idx in 0..product.size() {
        let coords = decode_index(&sizes, idx);
        let (i, a, b) = (coords[0], coords[1], coords[2]);
        let key = if i == 0 {
            (0, a, m) // left pinch: only the second coordinate matters
        } else if i == n {
            (n, m, b) // right pinch: only the third coordinate matters
        } else {
            (i, a, b)
        };
        let class = *key_to_class.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            iota.push(i);
            classes.len() - 1
        });
        classes[class].push((i, a, b));
        product_class[idx] = class;
    }

    let partition: Vec<Vec<usize>> = {
        let mut p = vec![Vec::new(); classes.len()];
        for (idx, &c) in product_class.iter().enumerate() {
            p[c].push(idx);
        }
        p
    };
    let (underlying, class_map) = quotient(&product, &partition)?;
    // quotient() renumbers by least member, matching first-encounter
    // order; keep the assertion cheap but real.
    debug_assert_eq!(class_map, product_class);

    Ok(PinchedStructure {
        underlying,
        template: template.clone(),
        n,
        classes,
        iota,
        product_class,
    })
}

/// Which pinched end a derived substructure drops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Keep layers 1..=n (drop the left pinch).
    Right,
    /// Keep layers 0..n (drop the right pinch).
    Left,
}

/// Origin of one element of a pinch substructure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PinchTrace {
    pub iota: usize,
    /// Least member triple of the originating class.
    pub repr: (usize, usize, usize),
    /// Membership in the side's boundary slice: layer 1 for the right
    /// substructure, layer n-1 for the left. Degenerate at n = 1,
    /// where that layer is the surviving pinch itself.
    pub slice: bool,
}

/// Substructure of a pinched structure induced on one side, with an
/// origin trace per element. Element order follows class ids.
pub fn side_substructure(
    pinch: &PinchedStructure,
    side: Side,
) -> Result<(RelStructure, Vec<PinchTrace>), ConstructError> {
    let n = pinch.n;
    let keep: Vec<usize> = (0..pinch.size())
        .filter(|&c| match side {
            Side::Right => pinch.iota[c] != 0,
            Side::Left => pinch.iota[c] != n,
        })
        .collect();
    let (structure, old_ids) = pinch.underlying.induced_substructure(&keep)?;
    let trace: Vec<PinchTrace> = old_ids
        .iter()
        .map(|&c| {
            let iota = pinch.iota[c];
            let slice = match side {
                Side::Right => iota == 1 && iota != n,
                Side::Left => iota == n - 1 && iota != 0,
            };
            PinchTrace {
                iota,
                repr: pinch.repr(c),
                slice,
            }
        })
        .collect();
    Ok((structure, trace))
}

pub fn b_right(pinch: &PinchedStructure) -> Result<(RelStructure, Vec<PinchTrace>), ConstructError> {
    side_substructure(pinch, Side::Right)
}

pub fn b_left(pinch: &PinchedStructure) -> Result<(RelStructure, Vec<PinchTrace>), ConstructError> {
    side_substructure(pinch, Side::Left)
}

/// Projection homomorphism from a side substructure onto the
/// template: third coordinate for the right side, second for the
/// left.
pub fn pinch_projection_hom(
    pinch: &PinchedStructure,
    side: Side,
) -> Result<Homomorphism, ConstructError> {
    let (structure, trace) = side_substructure(pinch, side)?;
    let map: Vec<usize> = trace
        .iter()
        .map(|t| match side {
            Side::Right => t.repr.2,
            Side::Left => t.repr.1,
        })
        .collect();
    Ok(Homomorphism::new(structure, pinch.template.clone(), map)?)
}

/// The collapse homomorphism from the pinch at n+1 onto the pinch at
/// n: identity on layers up to n, top layer folded onto layer n.
pub fn pinch_collapse_hom(
    template: &RelStructure,
    n: usize,
    bounds: &Bounds,
) -> Result<Homomorphism, ConstructError> {
    if n == 0 {
        return Err(ConstructError::BadPinchIndex);
    }
    let tall = n_pinch(template, n + 1, bounds)?;
    let short = n_pinch(template, n, bounds)?;
    let map: Vec<usize> = (0..tall.size())
        .map(|c| {
            let (i, a, b) = tall.repr(c);
            short.class_of(i.min(n), a, b)
        })
        .collect();
    Ok(Homomorphism::new(
        tall.structure().clone(),
        short.structure().clone(),
        map,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::solver;

    fn bounds() -> Bounds {
        Bounds::default()
    }

    #[test]
    fn union_of_two_edges() {
        let sig = catalog::graph_signature();
        let k2 = catalog::k(2);
        let (u, offsets) = disjoint_union(&sig, &[k2.clone(), k2.clone()]).unwrap();
        assert_eq!(u.size(), 4);
        assert_eq!(offsets, vec![0, 2]);
        let table: Vec<Vec<usize>> = u.table(0).iter().cloned().collect();
        assert_eq!(
            table,
            vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]]
        );
    }

    #[test]
    fn union_edge_cases() {
        let sig = catalog::graph_signature();
        let (empty, offsets) = disjoint_union(&sig, &[]).unwrap();
        assert_eq!(empty.size(), 0);
        assert!(offsets.is_empty());
        let (mix, offsets) =
            disjoint_union(&sig, &[catalog::loop_point(), catalog::point()]).unwrap();
        assert_eq!(mix.size(), 2);
        assert_eq!(offsets, vec![0, 1]);
        let table: Vec<Vec<usize>> = mix.table(0).iter().cloned().collect();
        assert_eq!(table, vec![vec![0, 0]]);
        let flags = catalog::flags_signature();
        assert_eq!(
            disjoint_union(&flags, &[catalog::k(2)]),
            Err(ConstructError::SignatureMismatch)
        );
    }

    #[test]
    fn product_of_two_edges() {
        let sig = catalog::graph_signature();
        let k2 = catalog::k(2);
        let p = direct_product(&sig, &[k2.clone(), k2.clone()], &bounds()).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.tuple_count(), 4);
        // (0,0)=0 (0,1)=1 (1,0)=2 (1,1)=3
        for t in [[0, 3], [1, 2], [2, 1], [3, 0]] {
            assert!(p.has_tuple(0, &t));
        }
    }

    #[test]
    fn product_edge_cases() {
        let sig = catalog::graph_signature();
        let k3 = catalog::k(3);
        let lp = catalog::loop_point();
        let with_loop = direct_product(&sig, &[k3.clone(), lp], &bounds()).unwrap();
        assert_eq!(with_loop.size(), 3);
        assert_eq!(with_loop.tables(), k3.tables());
        let empty = RelStructure::empty(Arc::clone(&sig), 0);
        let with_empty = direct_product(&sig, &[k3.clone(), empty], &bounds()).unwrap();
        assert_eq!(with_empty.size(), 0);
        let terminal = direct_product(&sig, &[], &bounds()).unwrap();
        assert_eq!(terminal.size(), 1);
        assert!(terminal.has_tuple(0, &[0, 0]));
        let tight = Bounds {
            size_bound: 8,
            ..Bounds::default()
        };
        assert_eq!(
            direct_product(&sig, &[k3.clone(), k3], &tight),
            Err(ConstructError::SizeBound {
                requested: 9,
                bound: 8
            })
        );
    }

    #[test]
    fn product_projections_are_homs() {
        let sig = catalog::graph_signature();
        let factors = [catalog::k(3), catalog::directed_cycle(4)];
        let p = direct_product(&sig, &factors, &bounds()).unwrap();
        let sizes = [3, 4];
        for (pos, factor) in factors.iter().enumerate() {
            let map: Vec<usize> = (0..p.size()).map(|x| decode_index(&sizes, x)[pos]).collect();
            Homomorphism::new(p.clone(), factor.clone(), map).unwrap();
        }
    }

    #[test]
    fn quotient_collapse_edge_to_loop() {
        let k2 = catalog::k(2);
        let (q, class_map) = quotient(&k2, &[vec![0, 1]]).unwrap();
        assert_eq!(q.size(), 1);
        assert_eq!(class_map, vec![0, 0]);
        assert!(q.has_tuple(0, &[0, 0]));
        assert_eq!(q.tuple_count(), 1);
    }

    #[test]
    fn quotient_renumbers_by_least_member() {
        let c4 = catalog::directed_cycle(4);
        let (q, class_map) = quotient(&c4, &[vec![3], vec![0, 2], vec![1]]).unwrap();
        // Classes sorted by least member: {0,2} -> 0, {1} -> 1, {3} -> 2.
        assert_eq!(class_map, vec![0, 1, 0, 2]);
        assert_eq!(q.size(), 3);
        let canonical = Homomorphism::new(c4, q, class_map).unwrap();
        assert!(canonical.is_surjective());
    }

    #[test]
    fn quotient_rejects_bad_partitions() {
        let k2 = catalog::k(2);
        assert!(matches!(
            quotient(&k2, &[vec![0]]),
            Err(ConstructError::InvalidPartition(_))
        ));
        assert!(matches!(
            quotient(&k2, &[vec![0, 1], vec![1]]),
            Err(ConstructError::InvalidPartition(_))
        ));
        assert!(matches!(
            quotient(&k2, &[vec![0, 1, 2]]),
            Err(ConstructError::InvalidPartition(_))
        ));
    }

    #[test]
    fn link_shapes() {
        let sig = catalog::graph_signature();
        let l1 = n_link(&sig, 1);
        assert_eq!(l1.size(), 2);
        assert_eq!(l1.tuple_count(), 4);
        let l2 = n_link(&sig, 2);
        assert_eq!(l2.size(), 3);
        // {0,1}^2 and {1,2}^2 overlap in (1,1): 4 + 4 - 1.
        assert_eq!(l2.tuple_count(), 7);
        let l0 = n_link(&sig, 0);
        assert_eq!(l0.size(), 1);
        assert_eq!(l0.tuple_count(), 0);
    }

    #[test]
    fn pinch_sizes_follow_the_size_law() {
        let k2 = catalog::k(2);
        for n in 1..=6 {
            let p = n_pinch(&k2, n, &bounds()).unwrap();
            let m = k2.size();
            assert_eq!(p.size(), (n - 1) * m * m + 2 * m);
        }
        assert_eq!(n_pinch(&k2, 5, &bounds()).unwrap().size(), 20);
        assert_eq!(n_pinch(&k2, 1, &bounds()).unwrap().size(), 4);
        assert_eq!(
            n_pinch(&k2, 0, &bounds()),
            Err(ConstructError::BadPinchIndex)
        );
    }

    #[test]
    fn pinch_class_structure() {
        let k2 = catalog::k(2);
        let p = n_pinch(&k2, 3, &bounds()).unwrap();
        for c in 0..p.size() {
            let iota = p.iota(c);
            for &(i, a, b) in p.members(c) {
                assert_eq!(i, iota);
                assert_eq!(p.class_of(i, a, b), c);
            }
            let members = p.members(c);
            if iota == 0 {
                // Left pinch classes are fibers of the second coordinate.
                assert_eq!(members.len(), k2.size());
                assert!(members.iter().all(|m| m.1 == members[0].1));
            } else if iota == p.link_length() {
                assert_eq!(members.len(), k2.size());
                assert!(members.iter().all(|m| m.2 == members[0].2));
            } else {
                assert_eq!(members.len(), 1);
            }
        }
        // Class ids ascend by (layer, least pair).
        for c in 1..p.size() {
            assert!(p.repr(c - 1) < p.repr(c));
        }
    }

    #[test]
    fn side_substructures() {
        let k2 = catalog::k(2);
        let p = n_pinch(&k2, 5, &bounds()).unwrap();
        let (right, rtrace) = b_right(&p).unwrap();
        assert_eq!(right.size(), 18);
        assert!(rtrace.iter().all(|t| t.iota != 0));
        assert!(rtrace.iter().any(|t| t.slice));
        for t in &rtrace {
            assert_eq!(t.slice, t.iota == 1);
        }
        let (left, ltrace) = b_left(&p).unwrap();
        assert_eq!(left.size(), 18);
        assert!(ltrace.iter().all(|t| t.iota != 5));
        for t in &ltrace {
            assert_eq!(t.slice, t.iota == 4);
        }
    }

    #[test]
    fn sides_are_isomorphic_via_the_swap() {
        let c3 = catalog::directed_cycle(3);
        let p = n_pinch(&c3, 4, &bounds()).unwrap();
        let (right, rtrace) = b_right(&p).unwrap();
        let (left, ltrace) = b_left(&p).unwrap();
        let n = p.link_length();
        // (i, a, b) -> (n - i, b, a) matches right classes to left classes.
        let mut left_index = std::collections::HashMap::new();
        for (x, t) in ltrace.iter().enumerate() {
            left_index.insert(t.repr, x);
        }
        // Right representatives at the top layer are (n, 0, b), so the
        // flip (n-i, b, a) always lands on a left representative.
        let map: Vec<usize> = rtrace
            .iter()
            .map(|t| {
                let (i, a, b) = t.repr;
                left_index[&(n - i, b, a)]
            })
            .collect();
        let iso = Homomorphism::new(right.clone(), left.clone(), map.clone()).unwrap();
        assert!(iso.is_surjective());
        let mut inverse = vec![usize::MAX; left.size()];
        for (x, &y) in map.iter().enumerate() {
            inverse[y] = x;
        }
        Homomorphism::new(left, right, inverse).unwrap();
        assert!(iso.is_surjective());
    }

    #[test]
    fn projection_homs_validate() {
        for template in [catalog::k(2), catalog::directed_cycle(3)] {
            for n in 1..=6 {
                let p = n_pinch(&template, n, &bounds()).unwrap();
                let right = pinch_projection_hom(&p, Side::Right).unwrap();
                assert_eq!(right.source().size(), (n - 1) * template.size().pow(2) + template.size());
                let left = pinch_projection_hom(&p, Side::Left).unwrap();
                assert_eq!(left.target().size(), template.size());
            }
        }
    }

    #[test]
    fn collapse_hom_is_surjective() {
        let k2 = catalog::k(2);
        let h = pinch_collapse_hom(&k2, 2, &bounds()).unwrap();
        assert_eq!(h.source().size(), 12);
        assert_eq!(h.target().size(), 8);
        assert!(h.is_surjective());
        for n in 1..=4 {
            assert!(pinch_collapse_hom(&k2, n, &bounds()).unwrap().is_surjective());
        }
    }

    #[test]
    fn pinch_of_loop_admits_hom_to_template() {
        let lp = catalog::loop_point();
        let p = n_pinch(&lp, 3, &bounds()).unwrap();
        assert_eq!(p.size(), 4);
        assert!(solver::find_hom(p.structure(), &lp, &solver::SearchConfig::default())
            .unwrap()
            .is_some());
    }
}
