use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{FiniteSystem, SymbolicPoint, SystemError, SystemId};

/// One block of a [`BlockSchedule`]: `word` repeated, then `bridge`, ending
/// at index `end` (exclusive). The bridge is a path joining the word to the
/// next block's word and is empty when they compose directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub word: Vec<usize>,
    pub bridge: Vec<usize>,
    pub end: BigUint,
}

impl Block {
    pub fn new(word: Vec<usize>, end: BigUint) -> Self {
        Self { word, bridge: Vec::new(), end }
    }

    pub fn bridged(word: Vec<usize>, bridge: Vec<usize>, end: BigUint) -> Self {
        Self { word, bridge, end }
    }
}

/// Shortest edge path from the end of `from_word` to the start of `to_word`
/// (empty when they already compose). Among shortest paths the one with the
/// lexicographically smallest edge indices is returned.
pub fn bridge(system: &FiniteSystem, from_word: &[usize], to_word: &[usize]) -> Option<Vec<usize>> {
    let source = system.edge(*from_word.last()?).to;
    let target = system.edge(*to_word.first()?).from;
    // Backward BFS gives distances to the target; a greedy forward walk then
    // picks the smallest edge that decreases the distance.
    let n = system.vertex_count();
    let mut dist = vec![usize::MAX; n];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &e in system.in_edges(v) {
            let u = system.edge(e).from;
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist[source] == usize::MAX {
        return None;
    }
    let mut path = Vec::with_capacity(dist[source]);
    let mut v = source;
    while v != target {
        let e = *system
            .out_edges(v)
            .iter()
            .filter(|&&e| dist[system.edge(e).to] + 1 == dist[v])
            .min()
            .expect("distance decreases along some edge");
        path.push(e);
        v = system.edge(e).to;
    }
    Some(path)
}

/// Infinite path made of whole repetitions of closed words on consecutive
/// index ranges `[0, end₀), [end₀, end₁), …`. The last word keeps repeating
/// past its nominal end, so the schedule is a genuine point of the shift even
/// when the boundaries are far too large to unroll.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSchedule {
    blocks: Vec<Block>,
    system: SystemId,
}

impl BlockSchedule {
    pub fn new(system: &FiniteSystem, blocks: Vec<Block>) -> Result<Self, SystemError> {
        if blocks.is_empty() {
            return Err(SystemError::Schedule("no blocks".into()));
        }
        let mut start = BigUint::zero();
        for (i, block) in blocks.iter().enumerate() {
            if block.word.is_empty() {
                return Err(SystemError::EmptyCycle);
            }
            system.check_path(&block.word, true)?;
            let min_end = &start + block.bridge.len() + block.word.len();
            if block.end < min_end {
                return Err(SystemError::Schedule(format!(
                    "block {i} ends at {}, before one word and its bridge",
                    block.end
                )));
            }
            if !((&block.end - &start - block.bridge.len()) % block.word.len()).is_zero() {
                return Err(SystemError::Schedule(format!(
                    "block {i} length minus bridge is not a multiple of its word length {}",
                    block.word.len()
                )));
            }
            let mut tail = vec![*block.word.last().unwrap()];
            tail.extend_from_slice(&block.bridge);
            match blocks.get(i + 1) {
                Some(next) => tail.push(next.word[0]),
                None if !block.bridge.is_empty() => {
                    return Err(SystemError::Schedule("the final block cannot have a bridge".into()));
                }
                None => {}
            }
            system.check_path(&tail, false)?;
            start = block.end.clone();
        }
        Ok(Self {
            blocks,
            system: system.id(),
        })
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Start index of block `i`.
    pub fn start(&self, i: usize) -> BigUint {
        if i == 0 {
            BigUint::zero()
        } else {
            self.blocks[i - 1].end.clone()
        }
    }

    pub fn first_edge(&self) -> usize {
        self.blocks[0].word[0]
    }

    pub fn orbit_edge(&self, k: &BigUint) -> usize {
        let last = self.blocks.len() - 1;
        let i = self.blocks.iter().position(|b| k < &b.end).unwrap_or(last);
        let block = &self.blocks[i];
        let to_end = &block.end - k.min(&block.end);
        if let Some(back) = to_end.to_usize().filter(|&b| b > 0 && b <= block.bridge.len()) {
            return block.bridge[block.bridge.len() - back];
        }
        let offset = (k - self.start(i)) % block.word.len();
        block.word[offset.to_usize().expect("offset below word length")]
    }

    /// Number of whole repetitions of the word in block `i` (the last block
    /// is counted up to its nominal end).
    pub fn repetitions(&self, i: usize) -> BigUint {
        let b = &self.blocks[i];
        (&b.end - self.start(i) - b.bridge.len()) / b.word.len()
    }

    pub fn orbit_edge_u64(&self, k: u64) -> usize {
        self.orbit_edge(&BigUint::from(k))
    }

    /// The same path as an eventually periodic point, when the preperiod is
    /// short enough to unroll.
    pub fn to_point(&self, system: &FiniteSystem, max_len: u64) -> Result<SymbolicPoint, SystemError> {
        if system.id() != self.system {
            return Err(SystemError::Mismatch);
        }
        let head_len = self
            .start(self.blocks.len() - 1)
            .to_u64()
            .filter(|&n| n <= max_len)
            .ok_or_else(|| SystemError::Schedule("preperiod too long to unroll".into()))?;
        let preperiod = (0..head_len).map(|k| self.orbit_edge_u64(k)).collect();
        SymbolicPoint::new(system, preperiod, self.blocks.last().unwrap().word.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(word: Vec<usize>, end: u64) -> Block {
        Block::new(word, BigUint::from(end))
    }

    #[test]
    fn blocks_unroll_in_order() {
        let sys = FiniteSystem::full_shift(2); // edges 00,01,10,11
        let s = BlockSchedule::new(&sys, vec![block(vec![3], 3), block(vec![2, 1], 7), block(vec![3], 9)]).unwrap();
        // Block lengths 3, 4, 2; 11 composes with 10 and 01 with 11.
        let path: Vec<usize> = (0..12).map(|k| s.orbit_edge_u64(k)).collect();
        assert_eq!(path, vec![3, 3, 3, 2, 1, 2, 1, 3, 3, 3, 3, 3]);
        let p = s.to_point(&sys, 100).unwrap();
        for k in 0..30 {
            assert_eq!(p.orbit_edge(k), s.orbit_edge_u64(k));
        }
    }

    #[test]
    fn invalid_schedules_are_rejected() {
        let sys = FiniteSystem::full_shift(2);
        // 11 followed by 00 is not admissible.
        assert!(BlockSchedule::new(&sys, vec![block(vec![3], 2), block(vec![0], 4)]).is_err());
        // Block length not a multiple of the word length.
        assert!(BlockSchedule::new(&sys, vec![block(vec![1, 2], 3)]).is_err());
        // Non-increasing ends.
        assert!(BlockSchedule::new(&sys, vec![block(vec![3], 2), block(vec![3], 2)]).is_err());
        // Open word.
        assert!(BlockSchedule::new(&sys, vec![block(vec![1], 1)]).is_err());
    }

    #[test]
    fn huge_indices_are_supported() {
        let sys = FiniteSystem::full_shift(2);
        let big = BigUint::from(10u32).pow(400);
        let s = BlockSchedule::new(
            &sys,
            vec![
                Block::new(vec![3], BigUint::from(5u32)),
                Block::new(vec![2, 1], &big + 5u32),
            ],
        );
        // 10^400 is even, so the second block length 10^400 is a multiple of 2.
        let s = s.unwrap();
        assert_eq!(s.orbit_edge(&(&big + 3u32)), 2);
        assert_eq!(s.orbit_edge(&(&big + 4u32)), 1);
        assert_eq!(s.orbit_edge(&(&big + 5u32)), 2);
        assert!(s.to_point(&sys, 1000).is_ok());
    }

    #[test]
    fn bridges_join_loops() {
        let sys = FiniteSystem::full_shift(2);
        assert_eq!(bridge(&sys, &[3], &[0]), Some(vec![2]));
        assert_eq!(bridge(&sys, &[3], &[3]), Some(vec![]));
        let s = BlockSchedule::new(
            &sys,
            vec![
                Block::bridged(vec![3], vec![2], BigUint::from(4u32)),
                Block::bridged(vec![0], vec![1], BigUint::from(8u32)),
                block(vec![3], 9),
            ],
        )
        .unwrap();
        let path: Vec<usize> = (0..11).map(|k| s.orbit_edge_u64(k)).collect();
        assert_eq!(path, vec![3, 3, 3, 2, 0, 0, 0, 1, 3, 3, 3]);
        assert_eq!(s.repetitions(0), BigUint::from(3u32));
        let p = s.to_point(&sys, 100).unwrap();
        for k in 0..20 {
            assert_eq!(p.orbit_edge(k), s.orbit_edge_u64(k));
        }
        // Wrong bridge or bridge on the last block.
        assert!(BlockSchedule::new(&sys, vec![Block::bridged(vec![3], vec![1], BigUint::from(2u32)), block(vec![0], 3)]).is_err());
        assert!(BlockSchedule::new(&sys, vec![Block::bridged(vec![3], vec![2], BigUint::from(2u32))]).is_err());
    }

    #[test]
    fn unreachable_bridge() {
        let sys = FiniteSystem::from_indices(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(bridge(&sys, &[2], &[0]), None);
        assert_eq!(bridge(&sys, &[0], &[2]), Some(vec![1]));
    }
}
