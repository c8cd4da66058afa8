//! Finite groups by multiplication table, their subgroups, and
//! homomorphisms between them.
//!
//! Element 0 is always the identity. Tables supplied directly are fully
//! validated (identity, latin square, inverses, associativity); tables
//! synthesized from permutation generators get associativity from function
//! composition, and the synthesis records a generator word per element so
//! module actions given on generators can be expanded consistently.

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 10_000;

#[derive(PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[g * order + h] = g * h`.
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates and wraps a full multiplication table over element indices
    /// `0..n`, with 0 the identity.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Arc<Self>> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for r in rows {
            for &x in r {
                if x >= n {
                    return Err(Error::InvalidTable(format!(
                        "entry {} out of range 0..{}",
                        x, n
                    )));
                }
                table.push(x);
            }
        }
        let at = |g: usize, h: usize| table[g * n + h];
        for g in 0..n {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::InvalidTable(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        // latin square
        for g in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for h in 0..n {
                row[at(g, h)] = true;
                col[at(h, g)] = true;
            }
            if row.iter().any(|x| !x) || col.iter().any(|x| !x) {
                return Err(Error::InvalidTable(format!(
                    "row or column {} is not a permutation",
                    g
                )));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| at(g, h) == 0 && at(h, g) == 0) {
                Some(h) => inverses[g] = h,
                None => {
                    return Err(Error::InvalidTable(format!("element {} has no inverse", g)))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(FiniteGroup {
            order: n,
            table,
            inverses,
        }))
    }

    /// Closure of a set of permutations of `0..domain` under composition.
    /// Returns the group plus, for each element, a word in the generators
    /// (empty word = identity) so that per-generator data can be expanded
    /// to all elements. Associativity is inherited from composition.
    pub fn from_permutations(
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<(Arc<Self>, Vec<Vec<usize>>)> {
        let domain = generators
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InvalidTable("no permutation generators".into()))?;
        for (k, p) in generators.iter().enumerate() {
            if p.len() != domain {
                return Err(Error::InvalidTable(format!(
                    "generator {} acts on a different domain",
                    k
                )));
            }
            let mut seen = vec![false; domain];
            for &x in p {
                if x >= domain || seen[x] {
                    return Err(Error::InvalidTable(format!(
                        "generator {} is not a permutation",
                        k
                    )));
                }
                seen[x] = true;
            }
        }
        let compose = |f: &[usize], g: &[usize]| -> Vec<usize> {
            // (f . g)(x) = f(g(x))
            (0..domain).map(|x| f[g[x]]).collect()
        };
        let id: Vec<usize> = (0..domain).collect();
        let mut elements: Vec<Vec<usize>> = vec![id];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier = vec![0usize];
        while let Some(idx) = frontier.pop() {
            for (k, g) in generators.iter().enumerate() {
                let p = compose(&elements[idx], g);
                if !elements.contains(&p) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    let mut w = words[idx].clone();
                    w.push(k);
                    elements.push(p);
                    words.push(w);
                    frontier.push(elements.len() - 1);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = compose(&elements[a], &elements[b]);
                let idx = elements
                    .iter()
                    .position(|q| q == &p)
                    .expect("closure is complete");
                table[a * n + b] = idx;
            }
        }
        let inverses = (0..n)
            .map(|g| (0..n).find(|&h| table[g * n + h] == 0).expect("inverse"))
            .collect();
        Ok((
            Arc::new(FiniteGroup {
                order: n,
                table,
                inverses,
            }),
            words,
        ))
    }

    pub fn trivial() -> Arc<Self> {
        Arc::new(FiniteGroup {
            order: 1,
            table: vec![0],
            inverses: vec![0],
        })
    }

    pub fn cyclic(n: usize) -> Arc<Self> {
        assert!(n >= 1);
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a + b) % n))
            .collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        Arc::new(FiniteGroup {
            order: n,
            table,
            inverses,
        })
    }

    /// Direct product; element `a * |B| + b` stands for the pair `(a, b)`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Arc<Self> {
        let n = a.order * b.order;
        let mut table = vec![0usize; n * n];
        for a1 in 0..a.order {
            for b1 in 0..b.order {
                for a2 in 0..a.order {
                    for b2 in 0..b.order {
                        let x = a1 * b.order + b1;
                        let y = a2 * b.order + b2;
                        table[x * n + y] = a.mul(a1, a2) * b.order + b.mul(b1, b2);
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|x| a.inv(x / b.order) * b.order + b.inv(x % b.order))
            .collect();
        Arc::new(FiniteGroup {
            order: n,
            table,
            inverses,
        })
    }

    /// Dihedral group of order `2n`, as permutations of the n-gon.
    pub fn dihedral(n: usize) -> Arc<Self> {
        assert!(n >= 2);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        let (g, _) =
            Self::from_permutations(&[rot, refl], DEFAULT_ORDER_CAP).expect("dihedral closure");
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn conjugate_element(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|g| (0..self.order).map(|h| self.mul(g, h)).collect())
            .collect()
    }
}

/// A subgroup as a sorted set of element indices, validated closed.
#[derive(Clone, PartialEq, Eq)]
pub struct SubgroupOfG {
    group: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl fmt::Debug for SubgroupOfG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupOfG({:?})", self.elements)
    }
}

impl SubgroupOfG {
    pub fn new(group: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&g| g >= group.order()) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        if elements.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing the identity".into()));
        }
        for &g in &elements {
            if elements.binary_search(&group.inv(g)).is_err() {
                return Err(Error::NotASubgroup(format!("inverse of {} is missing", g)));
            }
            for &h in &elements {
                if elements.binary_search(&group.mul(g, h)).is_err() {
                    return Err(Error::NotASubgroup(format!(
                        "not closed: {} * {} escapes",
                        g, h
                    )));
                }
            }
        }
        Ok(SubgroupOfG { group, elements })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        SubgroupOfG {
            group,
            elements: vec![0],
        }
    }

    pub fn full(group: Arc<FiniteGroup>) -> Self {
        let elements = (0..group.order()).collect();
        SubgroupOfG { group, elements }
    }

    /// Closure of a seed set.
    pub fn generated(group: Arc<FiniteGroup>, seeds: &[usize]) -> Result<Self> {
        if seeds.iter().any(|&g| g >= group.order()) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        let mut members = vec![false; group.order()];
        members[0] = true;
        let mut list = vec![0usize];
        let mut changed = true;
        for &s in seeds {
            if !members[s] {
                members[s] = true;
                list.push(s);
            }
        }
        while changed {
            changed = false;
            let snapshot = list.clone();
            for &g in &snapshot {
                let gi = group.inv(g);
                if !members[gi] {
                    members[gi] = true;
                    list.push(gi);
                    changed = true;
                }
                for &h in &snapshot {
                    let gh = group.mul(g, h);
                    if !members[gh] {
                        members[gh] = true;
                        list.push(gh);
                        changed = true;
                    }
                }
            }
        }
        list.sort_unstable();
        Ok(SubgroupOfG {
            group,
            elements: list,
        })
    }

    pub fn cyclic_generated_by(group: Arc<FiniteGroup>, g: usize) -> Self {
        Self::generated(group, &[g]).expect("single generator closure")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() == self.group.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_contained_in(&self, other: &SubgroupOfG) -> bool {
        self.group == other.group && self.elements.iter().all(|&g| other.contains(g))
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: usize) -> SubgroupOfG {
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&x| self.group.conjugate_element(g, x))
            .collect();
        elements.sort_unstable();
        SubgroupOfG {
            group: self.group.clone(),
            elements,
        }
    }

    pub fn is_conjugate_to(&self, other: &SubgroupOfG) -> bool {
        self.group == other.group
            && self
                .group
                .elements()
                .any(|g| self.conjugate(g).elements == other.elements)
    }

    /// A small generating set, picked greedily.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span = SubgroupOfG::trivial(self.group.clone());
        for &g in &self.elements {
            if !span.contains(g) {
                gens.push(g);
                span = SubgroupOfG::generated(self.group.clone(), &gens)
                    .expect("closure inside a subgroup");
            }
        }
        gens
    }

    /// The subgroup as a standalone group; also returns, per new index, the
    /// original element index. The identity stays at index 0 because the
    /// element list is sorted.
    pub fn as_group(&self) -> (Arc<FiniteGroup>, Vec<usize>) {
        let n = self.elements.len();
        let pos = |g: usize| self.elements.binary_search(&g).expect("closed subgroup");
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = pos(self.group.mul(self.elements[a], self.elements[b]));
            }
        }
        let inverses = (0..n)
            .map(|a| pos(self.group.inv(self.elements[a])))
            .collect();
        (
            Arc::new(FiniteGroup {
                order: n,
                table,
                inverses,
            }),
            self.elements.clone(),
        )
    }
}

/// All cyclic subgroups up to conjugacy. Order of the list is
/// deterministic.
pub fn cyclic_subgroups_up_to_conjugacy(group: &Arc<FiniteGroup>) -> Vec<SubgroupOfG> {
    let mut reps: Vec<SubgroupOfG> = Vec::new();
    for g in group.elements() {
        let c = SubgroupOfG::cyclic_generated_by(group.clone(), g);
        if !reps.iter().any(|r| r.is_conjugate_to(&c)) {
            reps.push(c);
        }
    }
    reps
}

/// A validated homomorphism of finite groups, given on every element.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::InvalidTable(
                "homomorphism must list one image per element".to_string(),
            ));
        }
        if images.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidTable("image index out of range".into()));
        }
        if images[0] != 0 {
            return Err(Error::InvalidTable("identity must map to identity".into()));
        }
        for g in source.elements() {
            for h in source.elements() {
                if images[source.mul(g, h)] != target.mul(images[g], images[h]) {
                    return Err(Error::InvalidTable(format!(
                        "not a homomorphism at ({}, {})",
                        g, h
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    /// Projection of a direct product (as built by
    /// [`FiniteGroup::direct_product`]) onto one factor.
    pub fn product_projection(
        product: Arc<FiniteGroup>,
        a: &Arc<FiniteGroup>,
        b: &Arc<FiniteGroup>,
        onto_first: bool,
    ) -> Result<Self> {
        if product.order() != a.order() * b.order() {
            return Err(Error::InvalidTable("not the expected product".into()));
        }
        let images = (0..product.order())
            .map(|x| if onto_first { x / b.order() } else { x % b.order() })
            .collect();
        let target = if onto_first { a.clone() } else { b.clone() };
        Self::new(product, target, images)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables_are_valid() {
        for n in 1..=8 {
            let g = FiniteGroup::cyclic(n);
            FiniteGroup::from_table(&g.table_rows()).expect("cyclic table validates");
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        // identity not at 0
        assert!(FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).is_err());
        // latin square with identity but not associative (an order-5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&loop5).unwrap_err();
        assert!(matches!(err, Error::InvalidTable(_)));
    }

    #[test]
    fn permutation_closure_builds_s3() {
        let (g, words) =
            FiniteGroup::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(words[0], Vec::<usize>::new());
        FiniteGroup::from_table(&g.table_rows()).expect("synthesized table validates");
    }

    #[test]
    fn closure_cap_is_enforced() {
        let err = FiniteGroup::from_permutations(&[vec![1, 2, 3, 4, 5, 0]], 4).unwrap_err();
        assert_eq!(err, Error::OrderCapExceeded { cap: 4 });
    }

    #[test]
    fn subgroup_validation() {
        let g = FiniteGroup::cyclic(4);
        assert!(SubgroupOfG::new(g.clone(), vec![0, 2]).is_ok());
        assert!(SubgroupOfG::new(g.clone(), vec![0, 1]).is_err()); // not closed
        assert!(SubgroupOfG::new(g.clone(), vec![2]).is_err()); // no identity
        let h = SubgroupOfG::generated(g, &[1]).unwrap();
        assert!(h.is_full());
    }

    #[test]
    fn conjugacy_in_s3() {
        let s3 = FiniteGroup::dihedral(3);
        assert_eq!(s3.order(), 6);
        let classes = cyclic_subgroups_up_to_conjugacy(&s3);
        // {e}, <rotation>, <reflection>
        assert_eq!(classes.len(), 3);
        let orders: Vec<usize> = classes.iter().map(|c| c.order()).collect();
        assert!(orders.contains(&1) && orders.contains(&3) && orders.contains(&2));
    }

    #[test]
    fn subgroup_as_group_roundtrip() {
        let g = FiniteGroup::cyclic(6);
        let h = SubgroupOfG::generated(g, &[2]).unwrap();
        let (hg, back) = h.as_group();
        assert_eq!(hg.order(), 3);
        assert_eq!(back.len(), 3);
        assert_eq!(back[0], 0);
        FiniteGroup::from_table(&hg.table_rows()).expect("restricted table validates");
    }

    #[test]
    fn generating_set_spans() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
        let full = SubgroupOfG::full(g.clone());
        let gens = full.generating_set();
        let span = SubgroupOfG::generated(g, &gens).unwrap();
        assert!(span.is_full());
        assert!(gens.len() <= 2);
    }

    #[test]
    fn product_projection_is_hom() {
        let a = FiniteGroup::cyclic(2);
        let b = FiniteGroup::cyclic(3);
        let p = FiniteGroup::direct_product(&a, &b);
        let proj = GroupHom::product_projection(p, &a, &b, true).unwrap();
        assert_eq!(proj.apply(0), 0);
        assert_eq!(proj.apply(3), 1); // (1, 0) -> 1
    }
}
