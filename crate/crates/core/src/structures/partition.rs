use serde::Serialize;

use super::StructureError;

/// A partition of the finite domain `0..size`.
///
/// Blocks are kept sorted internally and ordered by their minimum element, so
/// for a convex partition block index order coincides with the order of the
/// classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary blocks, checking that they are
    /// nonempty, disjoint and cover `0..size`.
    pub fn new(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self, StructureError> {
        let mut block_of = vec![usize::MAX; size];
        for block in &blocks {
            if block.is_empty() {
                return Err(StructureError::EmptyBlock);
            }
            for &e in block {
                if e >= size {
                    return Err(StructureError::ElementOutOfRange { element: e, size });
                }
                if block_of[e] != usize::MAX {
                    return Err(StructureError::OverlappingBlocks { element: e });
                }
                block_of[e] = 0;
            }
        }
        if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(StructureError::IncompletePartition { element: missing });
        }
        Ok(Self::from_blocks_unchecked(size, blocks))
    }

    fn from_blocks_unchecked(size: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut block_of = vec![0; size];
        for (i, b) in blocks.iter().enumerate() {
            for &e in b {
                block_of[e] = i;
            }
        }
        Self { blocks, block_of }
    }

    /// Builds a partition from a labelling `label[e]`; equal labels share a block.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (e, &l) in labels.iter().enumerate() {
            match seen.iter().find(|(lab, _)| *lab == l) {
                Some(&(_, idx)) => blocks[idx].push(e),
                None => {
                    seen.push((l, blocks.len()));
                    blocks.push(vec![e]);
                }
            }
        }
        Self::from_blocks_unchecked(labels.len(), blocks)
    }

    /// The partition into singletons.
    pub fn equality(size: usize) -> Self {
        Self::from_blocks_unchecked(size, (0..size).map(|e| vec![e]).collect())
    }

    /// The partition with a single block.
    pub fn full(size: usize) -> Self {
        if size == 0 {
            return Self::from_blocks_unchecked(0, Vec::new());
        }
        Self::from_blocks_unchecked(size, vec![(0..size).collect()])
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_index(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn block_of(&self, e: usize) -> &[usize] {
        &self.blocks[self.block_of[e]]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_convex(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b[b.len() - 1] - b[0] + 1 == b.len())
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&e| other.related(b[0], e)))
    }

    /// Block reached by moving `shift` consecutive classes from the class of
    /// `a`. Only meaningful for convex partitions.
    pub fn successor_block(&self, a: usize, shift: i64) -> Option<&[usize]> {
        let idx = self.block_of[a] as i64 + shift;
        if idx < 0 || idx >= self.blocks.len() as i64 {
            None
        } else {
            Some(&self.blocks[idx as usize])
        }
    }

    /// Image of the partition under the order reversal `e ↦ size-1-e`.
    pub fn reversed(&self) -> Self {
        let n = self.size();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| n - 1 - e).collect())
            .collect();
        Self::from_blocks_unchecked(n, blocks)
    }

    /// Finest convex partition coarsening `self`.
    ///
    /// Alternates convex hulls of blocks with saturation under `self` until
    /// nothing changes; at most `size` rounds are needed.
    pub fn convex_closure(&self) -> Partition {
        let n = self.size();
        let mut label: Vec<usize> = self.block_of.clone();
        loop {
            let mut changed = false;
            // convex hull: everything between min and max of a current class
            let mut lo = vec![usize::MAX; n];
            let mut hi = vec![0; n];
            for e in 0..n {
                let l = label[e];
                lo[l] = lo[l].min(e);
                hi[l] = hi[l].max(e);
            }
            let mut next: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                let mut c = x;
                while p[c] != r {
                    let nx = p[c];
                    p[c] = r;
                    c = nx;
                }
                r
            }
            for e in 0..n {
                let l = label[e];
                for m in lo[l]..=hi[l] {
                    let (ra, rb) = (find(&mut next, e), find(&mut next, m));
                    if ra != rb {
                        next[ra] = rb;
                    }
                }
            }
            // saturation under R: merge classes sharing an R-block
            for b in &self.blocks {
                for &e in &b[1..] {
                    let (ra, rb) = (find(&mut next, b[0]), find(&mut next, e));
                    if ra != rb {
                        next[ra] = rb;
                    }
                }
            }
            let new_label: Vec<usize> = (0..n).map(|e| find(&mut next, e)).collect();
            let old = Partition::from_labels(&label);
            let new = Partition::from_labels(&new_label);
            if old != new {
                changed = true;
            }
            label = new_label;
            if !changed {
                return new;
            }
        }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(size: usize, blocks: &[&[usize]]) -> Partition {
        Partition::new(size, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(matches!(
            Partition::new(3, vec![vec![0, 1], vec![1, 2]]),
            Err(StructureError::OverlappingBlocks { element: 1 })
        ));
        assert!(matches!(
            Partition::new(3, vec![vec![0, 1]]),
            Err(StructureError::IncompletePartition { element: 2 })
        ));
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(p(4, &[&[0, 2], &[1], &[3]]).convex_closure(), p(4, &[&[0, 1, 2], &[3]]));
        let convex = p(5, &[&[0, 1], &[2], &[3, 4]]);
        assert_eq!(convex.convex_closure(), convex);
        assert_eq!(Partition::equality(3).convex_closure(), Partition::equality(3));
    }

    #[test]
    fn closure_needs_several_rounds() {
        // hull of {0,2} pulls in 1, whose R-block reaches 4
        let r = p(6, &[&[0, 2], &[1, 4], &[3], &[5]]);
        assert_eq!(r.convex_closure(), p(6, &[&[0, 1, 2, 3, 4], &[5]]));
    }

    #[test]
    fn successor_blocks() {
        let e = p(5, &[&[0, 1], &[2], &[3, 4]]);
        assert_eq!(e.successor_block(0, 1), Some(&[2][..]));
        assert_eq!(e.successor_block(4, -2), Some(&[0, 1][..]));
        assert_eq!(e.successor_block(0, 3), None);
    }
}
