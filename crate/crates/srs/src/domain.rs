//! Structured observation domains: bit strings, set partitions, spin lattices.

use std::fmt;

use crate::error::{Result, SrsError};

/// A fixed-length binary string `x = (x_1, ..., x_k)`.
///
/// Bits are packed into a `u64` with `x_1` as the most significant of the
/// `k` used bits, so comparing packed words compares strings
/// lexicographically. Lengths up to 64 are supported.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    len: u8,
    word: u64,
}

impl BitString {
    pub fn new(len: usize, word: u64) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(SrsError::invalid(format!(
                "bit string length must be in 1..=64, got {len}"
            )));
        }
        if len < 64 && word >> len != 0 {
            return Err(SrsError::invalid(format!(
                "word {word:#x} does not fit in {len} bits"
            )));
        }
        Ok(BitString {
            len: len as u8,
            word,
        })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(SrsError::invalid("bits must be 0 or 1"));
        }
        let mut word = 0u64;
        for &b in bits {
            word = (word << 1) | u64::from(b);
        }
        Self::new(bits.len(), word)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed word with `x_1` at bit `len - 1`.
    pub fn word(&self) -> u64 {
        self.word
    }

    /// Bit `x_{i+1}` for `i` in `0..len`.
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.word >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn count_ones(&self) -> u32 {
        self.word.count_ones()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// A set partition of `{1, ..., n}` held in canonical form: elements sorted
/// within each block, blocks sorted by least element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    /// Build a partition, validating that `blocks` are disjoint, non-empty,
    /// and cover `{1, ..., n}` exactly. Input block order is irrelevant.
    pub fn new(n: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 {
            return Err(SrsError::invalid("partition ground set must be non-empty"));
        }
        let mut seen = vec![false; n + 1];
        let mut covered = 0usize;
        for block in &blocks {
            if block.is_empty() {
                return Err(SrsError::invalid("partition blocks must be non-empty"));
            }
            for &e in block {
                if e == 0 || e as usize > n {
                    return Err(SrsError::invalid(format!(
                        "element {e} outside ground set 1..={n}"
                    )));
                }
                if seen[e as usize] {
                    return Err(SrsError::invalid(format!(
                        "element {e} appears in more than one block"
                    )));
                }
                seen[e as usize] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(SrsError::invalid(format!(
                "blocks cover {covered} elements, expected {n}"
            )));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition {
            n: n as u32,
            blocks,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n as usize
    }

    /// Blocks sorted by least element, elements ascending.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|b| b.len())
    }
}

/// Every set partition of `{1, ..., n}`, in restricted-growth-string order.
///
/// The count is the Bell number B_n, which grows fast; intended for n <= 12.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    assert!(n >= 1, "ground set must be non-empty");
    let mut out = Vec::new();
    let mut assignment = vec![0u32; n];
    fn rec(i: usize, max_block: u32, assignment: &mut Vec<u32>, n: usize, out: &mut Vec<Partition>) {
        if i == n {
            let blocks_count = max_block as usize;
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); blocks_count];
            for (elem, &b) in assignment.iter().enumerate() {
                blocks[b as usize].push(elem as u32 + 1);
            }
            out.push(Partition::new(n, blocks).expect("generated blocks are valid"));
            return;
        }
        for b in 0..=max_block {
            assignment[i] = b;
            rec(i + 1, max_block.max(b + 1), assignment, n, out);
        }
    }
    rec(0, 0, &mut assignment, n, &mut out);
    out
}

/// A square lattice of ±1 spins, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpinLattice {
    side: u16,
    spins: Vec<i8>,
}

impl SpinLattice {
    pub fn new(side: usize, spins: Vec<i8>) -> Result<Self> {
        if side < 1 || side > u16::MAX as usize {
            return Err(SrsError::invalid(format!("invalid lattice side {side}")));
        }
        if spins.len() != side * side {
            return Err(SrsError::invalid(format!(
                "expected {} spins for a {side}x{side} lattice, got {}",
                side * side,
                spins.len()
            )));
        }
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(SrsError::invalid("spins must be +1 or -1"));
        }
        Ok(SpinLattice {
            side: side as u16,
            spins,
        })
    }

    pub fn side(&self) -> usize {
        self.side as usize
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.spins[row * self.side() + col]
    }

    /// Sum over adjacent pairs `x_i x_j`, each pair counted once, free
    /// (non-periodic) boundaries.
    pub fn interaction_sum(&self) -> i64 {
        let k = self.side();
        let mut total = 0i64;
        for r in 0..k {
            for c in 0..k {
                let s = i64::from(self.spins[r * k + c]);
                if c + 1 < k {
                    total += s * i64::from(self.spins[r * k + c + 1]);
                }
                if r + 1 < k {
                    total += s * i64::from(self.spins[(r + 1) * k + c]);
                }
            }
        }
        total
    }

    /// Total magnetization Σ x_i.
    pub fn magnetization(&self) -> i64 {
        self.spins.iter().map(|&s| i64::from(s)).sum()
    }

    /// Number of 4-connected components of +1 spins.
    pub fn plus_component_count(&self) -> usize {
        let k = self.side();
        let mut visited = vec![false; k * k];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..k * k {
            if visited[start] || self.spins[start] != 1 {
                continue;
            }
            components += 1;
            visited[start] = true;
            stack.push(start);
            while let Some(i) = stack.pop() {
                let (r, c) = (i / k, i % k);
                let mut push = |j: usize| {
                    if !visited[j] && self.spins[j] == 1 {
                        visited[j] = true;
                        stack.push(j);
                    }
                };
                if r > 0 {
                    push(i - k);
                }
                if r + 1 < k {
                    push(i + k);
                }
                if c > 0 {
                    push(i - 1);
                }
                if c + 1 < k {
                    push(i + 1);
                }
            }
        }
        components
    }

    /// Dense state index for small lattices: bit `i` set iff spin `i` is +1.
    /// Returns `None` when the lattice has more than 63 sites.
    pub fn state_index(&self) -> Option<usize> {
        let sites = self.side() * self.side();
        if sites > 63 {
            return None;
        }
        let mut idx = 0usize;
        for (i, &s) in self.spins.iter().enumerate() {
            if s == 1 {
                idx |= 1 << i;
            }
        }
        Some(idx)
    }
}
