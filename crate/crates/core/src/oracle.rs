//! Brute-force ground truth for small groups.
//!
//! Everything here works on explicitly enumerated elements or on closures
//! under the generators. The stabilizer chain is consulted only for the size
//! check before enumeration.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;

use crate::error::GroupError;
use crate::group::GeneratedGroup;
use crate::partition::OrderedPartition;
use crate::perm::Permutation;

pub const DEFAULT_CAP: usize = 1_000_000;

/// Every element of a group.
#[derive(Clone, Debug)]
pub struct ElementList {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashSet<Permutation>,
}

impl ElementList {
    fn from_vec(degree: usize, elements: Vec<Permutation>) -> Self {
        let index = elements.iter().cloned().collect();
        ElementList {
            degree,
            elements,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn filter(&self, keep: impl Fn(&Permutation) -> bool) -> ElementList {
        ElementList::from_vec(
            self.degree,
            self.elements.iter().filter(|g| keep(g)).cloned().collect(),
        )
    }

    /// Same set of permutations, regardless of enumeration order.
    pub fn set_eq(&self, other: &ElementList) -> bool {
        self.index == other.index
    }
}

/// Breadth-first closure of the generators.
pub fn enumerate(group: &GeneratedGroup, cap: usize) -> Result<ElementList, GroupError> {
    if group.order() > BigUint::from(cap) {
        return Err(GroupError::TooLarge { cap });
    }
    let n = group.degree();
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in group.generators() {
            let y = x.then(g);
            if !seen.contains(&y) {
                if out.len() >= cap {
                    return Err(GroupError::TooLarge { cap });
                }
                seen.insert(y.clone());
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(ElementList::from_vec(n, out))
}

pub fn maps_set_to_itself(g: &Permutation, set: &[usize]) -> bool {
    let mut member = vec![false; g.degree()];
    for &x in set {
        member[x] = true;
    }
    set.iter().all(|&x| member[g.image(x)])
}

pub fn brute_set_stabilizer(
    group: &GeneratedGroup,
    set: &[usize],
    cap: usize,
) -> Result<ElementList, GroupError> {
    Ok(enumerate(group, cap)?.filter(|g| maps_set_to_itself(g, set)))
}

pub fn brute_partition_stabilizer(
    group: &GeneratedGroup,
    partition: &OrderedPartition,
    cap: usize,
) -> Result<ElementList, GroupError> {
    Ok(enumerate(group, cap)?.filter(|g| {
        partition
            .cells()
            .iter()
            .all(|c| maps_set_to_itself(g, c))
    }))
}

pub fn brute_intersection(
    a: &GeneratedGroup,
    b: &GeneratedGroup,
    cap: usize,
) -> Result<ElementList, GroupError> {
    let ea = enumerate(a, cap)?;
    let eb = enumerate(b, cap)?;
    Ok(ea.filter(|g| eb.contains(g)))
}

/// Orbits of the group on ordered pairs of distinct points, each sorted,
/// listed by their smallest pair.
pub fn brute_pair_orbits(
    group: &GeneratedGroup,
    cap: usize,
) -> Result<Vec<Vec<(usize, usize)>>, GroupError> {
    let n = group.degree();
    if n * n > cap {
        return Err(GroupError::TooLarge { cap });
    }
    let mut seen = vec![false; n * n];
    let mut classes = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || seen[a * n + b] {
                continue;
            }
            seen[a * n + b] = true;
            let mut class = vec![(a, b)];
            let mut i = 0;
            while i < class.len() {
                let (x, y) = class[i];
                for g in group.generators() {
                    let (u, v) = (g.image(x), g.image(y));
                    if !seen[u * n + v] {
                        seen[u * n + v] = true;
                        class.push((u, v));
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
    }
    Ok(classes)
}

/// All ordered partitions' underlying set partitions that refine `p`
/// (cell order irrelevant; each returned as a list of sorted cells).
pub fn set_partitions_refining(p: &OrderedPartition) -> Vec<Vec<Vec<usize>>> {
    let mut result: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for cell in p.cells() {
        let sub = set_partitions(cell);
        let mut next = Vec::with_capacity(result.len() * sub.len());
        for r in &result {
            for s in &sub {
                let mut v = r.clone();
                v.extend(s.iter().cloned());
                next.push(v);
            }
        }
        result = next;
    }
    result
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for part in set_partitions(&items[1..]) {
        for i in 0..part.len() {
            let mut q = part.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = part.clone();
        q.push(vec![first]);
        out.push(q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(&GeneratedGroup::trivial(3), DEFAULT_CAP).unwrap().len(), 1);
        let c3 = GeneratedGroup::from_cycle_strings(3, &["(1,2,3)"]).unwrap();
        assert_eq!(enumerate(&c3, DEFAULT_CAP).unwrap().len(), 3);
        let h1 = GeneratedGroup::from_cycle_strings(
            10,
            &["(1,2,3,4,5,6,7,8,9,10)", "(2,10)(3,9)(4,8)(5,7)"],
        )
        .unwrap();
        let e = enumerate(&h1, DEFAULT_CAP).unwrap();
        assert_eq!(e.len(), 20);
        assert_eq!(brute_set_stabilizer(&h1, &[0, 4], DEFAULT_CAP).unwrap().len(), 2);
        assert_eq!(brute_set_stabilizer(&h1, &[0, 5], DEFAULT_CAP).unwrap().len(), 4);
        assert!(brute_intersection(&h1, &h1, DEFAULT_CAP).unwrap().set_eq(&e));
    }

    #[test]
    fn cap_refuses() {
        let s8 = GeneratedGroup::symmetric(8);
        assert!(matches!(enumerate(&s8, 1000), Err(GroupError::TooLarge { cap: 1000 })));
    }

    #[test]
    fn pair_orbits_of_s3() {
        let classes = brute_pair_orbits(&GeneratedGroup::symmetric(3), DEFAULT_CAP).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 6);
    }

    #[test]
    fn presentation_independent() {
        let a = GeneratedGroup::from_cycle_strings(4, &["(1,2)", "(1,2,3,4)"]).unwrap();
        let b = GeneratedGroup::from_cycle_strings(4, &["(1,2)", "(2,3)", "(3,4)"]).unwrap();
        assert!(enumerate(&a, DEFAULT_CAP)
            .unwrap()
            .set_eq(&enumerate(&b, DEFAULT_CAP).unwrap()));
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(set_partitions(&[0, 1, 2, 3]).len(), 15);
        assert_eq!(set_partitions(&[0, 1, 2, 3, 4, 5, 6]).len(), 877);
    }
}
