//! Ordered partitions of `{0..n-1}`.
//!
//! Cell order is significant, order inside a cell is not; cells are stored
//! sorted so that structural equality is partition equality.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::PartitionError;
use crate::perm::Permutation;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl OrderedPartition {
    /// The partition with a single cell. For `n == 0` it has no cells.
    pub fn trivial(degree: usize) -> Self {
        if degree == 0 {
            return OrderedPartition {
                cells: Vec::new(),
                cell_of: Vec::new(),
            };
        }
        OrderedPartition {
            cells: vec![(0..degree).collect()],
            cell_of: vec![0; degree],
        }
    }

    pub fn discrete(degree: usize) -> Self {
        OrderedPartition {
            cells: (0..degree).map(|x| vec![x]).collect(),
            cell_of: (0..degree).collect(),
        }
    }

    pub fn from_cells(degree: usize, cells: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut cell_of = vec![usize::MAX; degree];
        let mut out = Vec::with_capacity(cells.len());
        for (k, mut cell) in cells.into_iter().enumerate() {
            if cell.is_empty() {
                return Err(PartitionError::NotAPartition { degree });
            }
            for &x in &cell {
                if x >= degree || cell_of[x] != usize::MAX {
                    return Err(PartitionError::NotAPartition { degree });
                }
                cell_of[x] = k;
            }
            cell.sort_unstable();
            out.push(cell);
        }
        if cell_of.contains(&usize::MAX) {
            return Err(PartitionError::NotAPartition { degree });
        }
        Ok(OrderedPartition {
            cells: out,
            cell_of,
        })
    }

    /// Cells must be sorted, non-empty and cover the domain.
    pub(crate) fn from_sorted_cells(degree: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut cell_of = vec![usize::MAX; degree];
        for (k, cell) in cells.iter().enumerate() {
            debug_assert!(!cell.is_empty());
            debug_assert!(cell.windows(2).all(|w| w[0] < w[1]));
            for &x in cell {
                cell_of[x] = k;
            }
        }
        debug_assert!(cell_of.iter().all(|&c| c != usize::MAX));
        OrderedPartition { cells, cell_of }
    }

    /// `[set | rest]`, omitting an empty side.
    pub fn from_set(degree: usize, set: &[usize]) -> Self {
        let mut inside = vec![false; degree];
        for &x in set {
            inside[x] = true;
        }
        let a: Vec<usize> = (0..degree).filter(|&x| inside[x]).collect();
        let b: Vec<usize> = (0..degree).filter(|&x| !inside[x]).collect();
        let cells = [a, b].into_iter().filter(|c| !c.is_empty()).collect();
        OrderedPartition::from_sorted_cells(degree, cells)
    }

    /// Parses `[1,2,3 | 4 | 5,6,7]` (1-based points). Brackets are optional.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PartitionError> {
        let t = text.trim();
        let (inner, offset) = match (t.strip_prefix('['), t.ends_with(']')) {
            (Some(rest), true) => (&rest[..rest.len() - 1], 1),
            (None, false) => (t, 0),
            _ => {
                return Err(PartitionError::Parse {
                    pos: 0,
                    msg: "unbalanced brackets".into(),
                })
            }
        };
        let mut cells = Vec::new();
        let mut pos = offset;
        for chunk in inner.split('|') {
            let mut cell = Vec::new();
            for tok in chunk.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let x: usize = tok.parse().map_err(|_| PartitionError::Parse {
                    pos,
                    msg: format!("bad point '{tok}'"),
                })?;
                if x == 0 || x > degree {
                    return Err(PartitionError::Parse {
                        pos,
                        msg: format!("point {x} out of range 1..={degree}"),
                    });
                }
                cell.push(x - 1);
            }
            pos += chunk.len() + 1;
            cells.push(cell);
        }
        if cells.len() == 1 && cells[0].is_empty() && degree == 0 {
            return Ok(OrderedPartition::trivial(0));
        }
        OrderedPartition::from_cells(degree, cells)
    }

    pub fn degree(&self) -> usize {
        self.cell_of.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> &[usize] {
        &self.cells[k]
    }

    /// Index of the cell containing `point`.
    pub fn cell_of(&self, point: usize) -> usize {
        self.cell_of[point]
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// Cell sizes in cell order.
    pub fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Equal cell-size sequences, the necessary condition for some
    /// permutation to map one partition onto the other.
    pub fn same_shape(&self, other: &OrderedPartition) -> bool {
        self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.len() == b.len())
    }

    /// `self` is finer than or equal to `coarser`.
    pub fn is_finer(&self, coarser: &OrderedPartition) -> bool {
        assert_eq!(self.degree(), coarser.degree(), "degree mismatch");
        self.cells.iter().all(|c| {
            let k = coarser.cell_of[c[0]];
            c.iter().all(|&x| coarser.cell_of[x] == k)
        })
    }

    /// Meet with cells ordered by (cell in `self`, cell in `other`).
    pub fn meet(&self, other: &OrderedPartition) -> OrderedPartition {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        let mut cells = Vec::with_capacity(self.cells.len().max(other.cells.len()));
        let mut scratch: Vec<(usize, usize)> = Vec::new();
        for cell in &self.cells {
            if cell.len() == 1 {
                cells.push(cell.clone());
                continue;
            }
            scratch.clear();
            scratch.extend(cell.iter().map(|&x| (other.cell_of[x], x)));
            scratch.sort_unstable();
            let mut current = vec![scratch[0].1];
            for w in scratch.windows(2) {
                if w[1].0 != w[0].0 {
                    cells.push(std::mem::take(&mut current));
                }
                current.push(w[1].1);
            }
            cells.push(current);
        }
        OrderedPartition::from_sorted_cells(self.degree(), cells)
    }

    /// The image partition: cell `k` becomes the image of cell `k`.
    pub fn apply(&self, g: &Permutation) -> OrderedPartition {
        assert_eq!(self.degree(), g.degree(), "degree mismatch");
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let mut d: Vec<usize> = c.iter().map(|&x| g.image(x)).collect();
                d.sort_unstable();
                d
            })
            .collect();
        OrderedPartition::from_sorted_cells(self.degree(), cells)
    }

    /// Points in singleton cells, in cell order.
    pub fn singletons(&self) -> Vec<usize> {
        self.cells
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect()
    }

    /// Moves `point` out of cell `cell` into a new singleton cell at the end.
    pub fn split_cell(&self, cell: usize, point: usize) -> Result<OrderedPartition, PartitionError> {
        let c = self.cells.get(cell).ok_or(PartitionError::PointNotInCell { point, cell })?;
        if c.len() < 2 {
            return Err(PartitionError::CellTooSmall { cell });
        }
        let pos = c
            .binary_search(&point)
            .map_err(|_| PartitionError::PointNotInCell { point, cell })?;
        let mut out = self.clone();
        out.cells[cell].remove(pos);
        out.cells.push(vec![point]);
        out.cell_of[point] = out.cells.len() - 1;
        Ok(out)
    }

    /// Order of `Sym(P)`, the product of the factorials of the cell sizes.
    pub fn sym_order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for c in &self.cells {
            for k in 2..=c.len() {
                acc *= BigUint::from(k);
            }
        }
        acc
    }

    /// Cells as a sorted list, forgetting cell order.
    pub fn cell_set(&self) -> Vec<Vec<usize>> {
        let mut v = self.cells.clone();
        v.sort();
        v
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.cells.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn op(s: &str, n: usize) -> OrderedPartition {
        OrderedPartition::parse(s, n).unwrap()
    }

    #[test]
    fn finer_examples() {
        assert!(op("[1,2,3|4|5,6,7]", 7).is_finer(&op("[1,2,3,4|5,6,7]", 7)));
        let p = op("[1,2,3,4|5,6,7]", 7);
        assert!(p.is_finer(&p));
        assert!(p.is_finer(&op("[5,6,7|1,2,3,4]", 7)));
        assert!(op("[1,2,3|4|5,6,7]", 7).is_finer(&op("[4,5,6,7|3,2,1]", 7)));
        assert!(!p.is_finer(&op("[1,2,3|4|5,6,7]", 7)));
    }

    #[test]
    fn equality_ignores_order_inside_cells() {
        assert_eq!(op("[2,1,3,4|5,6,7]", 7), op("[1,2,3,4|5,6,7]", 7));
        assert_ne!(op("[1,2,3,4|5,6,7]", 7), op("[5,6,7|1,2,3,4]", 7));
    }

    #[test]
    fn meet_examples() {
        let p = op("[1,2,3,4|5,6,7]", 7);
        let q = op("[1,2|5,3|7,4,6]", 7);
        assert_eq!(p.meet(&q), op("[1,2|3|4|5|6,7]", 7));
        assert_eq!(q.meet(&p), op("[1,2|3|5|4|6,7]", 7));
        assert_eq!(p.meet(&OrderedPartition::trivial(7)), p);
    }

    #[test]
    fn singletons_examples() {
        assert!(OrderedPartition::trivial(4).singletons().is_empty());
        assert_eq!(OrderedPartition::discrete(3).singletons(), vec![0, 1, 2]);
        let p = op("[1,5|8|6,10|3|7,9|2,4]", 10);
        assert_eq!(p.singletons(), vec![7, 2]);
    }

    #[test]
    fn split_examples() {
        let p = op("[1,2,3,4|5,6,7]", 7);
        let s = p.split_cell(0, 3).unwrap();
        assert_eq!(s, op("[1,2,3|5,6,7|4]", 7));
        assert!(s.is_finer(&p));
        assert!(s.singletons().contains(&3));
        assert!(matches!(p.split_cell(1, 0), Err(PartitionError::PointNotInCell { .. })));
        let d = op("[1|2,3]", 3);
        assert!(matches!(d.split_cell(0, 0), Err(PartitionError::CellTooSmall { cell: 0 })));
    }

    #[test]
    fn sym_orders() {
        assert_eq!(op("[1,5|8|6,10|3|7,9|2,4]", 10).sym_order(), BigUint::from(16u32));
        assert_eq!(
            op("[1,6|3,4,8,9|2,7,5,10]", 10).sym_order(),
            BigUint::from(1152u32)
        );
    }

    #[test]
    fn display_round_trip() {
        let p = op("[1,2,3 | 4 | 5,6,7]", 7);
        assert_eq!(p.to_string(), "[1,2,3 | 4 | 5,6,7]");
        assert_eq!(op(&p.to_string(), 7), p);
        assert!(OrderedPartition::parse("[1,2|2,3]", 3).is_err());
        assert!(OrderedPartition::parse("[1,2]", 3).is_err());
        assert!(OrderedPartition::parse("[1,2|3", 3).is_err());
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = OrderedPartition> {
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(0usize..4, n))
            .prop_map(move |(order, labels)| {
                let mut cells: Vec<Vec<usize>> = vec![Vec::new(); 4];
                for (x, l) in order.into_iter().zip(labels) {
                    cells[l].push(x);
                }
                cells.retain(|c| !c.is_empty());
                OrderedPartition::from_cells(n, cells).unwrap()
            })
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn meet_laws((p, q, h) in (1usize..12).prop_flat_map(|n| (arb_partition(n), arb_partition(n), arb_perm(n)))) {
            prop_assert_eq!(p.meet(&p), p.clone());
            let m = p.meet(&q);
            prop_assert!(m.is_finer(&p));
            prop_assert!(m.is_finer(&q));
            // meet commutes with the action of any permutation, as ordered partitions
            prop_assert_eq!(m.apply(&h), p.apply(&h).meet(&q.apply(&h)));
            prop_assert_eq!(p.apply(&h).apply(&h.inverse()), p.clone());
            prop_assert_eq!(p.apply(&Permutation::identity(p.degree())), p);
        }
    }
}
