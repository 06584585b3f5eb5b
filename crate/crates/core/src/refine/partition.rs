use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

pub type BlockId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub id: BlockId,
    /// Player indices, ascending.
    pub members: Vec<usize>,
}

impl Block {
    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }
}

/// Disjoint non-empty blocks of players. A split retires one id and mints
/// two fresh ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Block>,
    next_id: BlockId,
}

impl Partition {
    /// `players` shuffled and dealt round-robin into at most `n` blocks.
    pub fn random(players: usize, n: usize, rng: &mut impl Rng) -> Self {
        let mut order: Vec<usize> = (0..players).collect();
        order.shuffle(rng);
        let n = n.clamp(1, players.max(1));
        let mut groups = vec![Vec::new(); n];
        for (k, p) in order.into_iter().enumerate() {
            groups[k % n].push(p);
        }
        Partition::from_groups(groups)
    }

    /// Blocks in the given order; empty groups are dropped.
    pub fn from_groups(groups: Vec<Vec<usize>>) -> Self {
        let mut blocks = Vec::new();
        for mut members in groups.into_iter().filter(|g| !g.is_empty()) {
            members.sort_unstable();
            blocks.push(Block {
                id: blocks.len() as BlockId,
                members,
            });
        }
        let next_id = blocks.len() as BlockId;
        Partition { blocks, next_id }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn get(&self, id: BlockId) -> Option<&Block> {
        self.blocks.iter().find(|b| b.id == id)
    }

    pub fn block_of(&self, player: usize) -> Option<BlockId> {
        self.blocks
            .iter()
            .find(|b| b.members.binary_search(&player).is_ok())
            .map(|b| b.id)
    }

    /// Splits `player` off block `id`; returns the ids of the singleton and
    /// of the remainder.
    ///
    /// # Panics
    /// If the block does not exist, is a singleton, or lacks `player`.
    pub fn split(&mut self, id: BlockId, player: usize) -> (BlockId, BlockId) {
        let pos = self
            .blocks
            .iter()
            .position(|b| b.id == id)
            .expect("split of an unknown block");
        let old = self.blocks.remove(pos);
        assert!(old.members.len() > 1, "split of a singleton block");
        let rest: Vec<usize> = old
            .members
            .iter()
            .copied()
            .filter(|&p| p != player)
            .collect();
        assert_eq!(rest.len() + 1, old.members.len(), "player not in block");
        let single = self.next_id;
        let remainder = self.next_id + 1;
        self.next_id += 2;
        self.blocks.push(Block {
            id: single,
            members: vec![player],
        });
        self.blocks.push(Block {
            id: remainder,
            members: rest,
        });
        (single, remainder)
    }
}
