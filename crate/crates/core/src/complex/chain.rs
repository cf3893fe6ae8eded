//! F2 chains over the cells of a complex.

use super::CellComplex;
use crate::bits::DenseBits;
use crate::error::ComplexError;

/// Storage for a chain's support. Small supports live in a sorted index set,
/// whole-lattice supports in a bitset; both expose identical semantics.
#[derive(Clone, Debug)]
pub enum ChainRepr {
    Sparse(Vec<u32>),
    Dense(DenseBits),
}

/// An F2 vector over the k-cells of a complex, stored as its support.
#[derive(Clone, Debug)]
pub struct Chain {
    complex_id: u64,
    dim: u8,
    ncells: u32,
    repr: ChainRepr,
}

/// Sparse supports switch to a bitset above this fill fraction (1/64).
const DENSE_THRESHOLD_SHIFT: u32 = 6;

impl Chain {
    pub fn empty(complex: &CellComplex, dim: u8) -> Self {
        Chain {
            complex_id: complex.id(),
            dim,
            ncells: complex.ncells(dim),
            repr: ChainRepr::Sparse(Vec::new()),
        }
    }

    /// Build a chain from arbitrary (possibly repeated) cell indices; repeats
    /// cancel over F2.
    pub fn from_cells<I: IntoIterator<Item = u32>>(
        complex: &CellComplex,
        dim: u8,
        cells: I,
    ) -> Result<Self, ComplexError> {
        let ncells = complex.ncells(dim);
        let mut support: Vec<u32> = cells.into_iter().collect();
        for &c in &support {
            if c >= ncells {
                return Err(ComplexError::InvalidCell {
                    dim,
                    index: c,
                    count: ncells,
                });
            }
        }
        support.sort_unstable();
        // cancel pairs mod 2
        let mut out = Vec::with_capacity(support.len());
        let mut i = 0;
        while i < support.len() {
            let mut j = i;
            while j < support.len() && support[j] == support[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(support[i]);
            }
            i = j;
        }
        let mut chain = Chain {
            complex_id: complex.id(),
            dim,
            ncells,
            repr: ChainRepr::Sparse(out),
        };
        chain.normalize_repr();
        Ok(chain)
    }

    pub(crate) fn from_dense(complex: &CellComplex, dim: u8, bits: DenseBits) -> Self {
        let mut chain = Chain {
            complex_id: complex.id(),
            dim,
            ncells: complex.ncells(dim),
            repr: ChainRepr::Dense(bits),
        };
        chain.normalize_repr();
        chain
    }

    pub fn complex_id(&self) -> u64 {
        self.complex_id
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn weight(&self) -> usize {
        match &self.repr {
            ChainRepr::Sparse(v) => v.len(),
            ChainRepr::Dense(b) => b.count_ones(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weight() == 0
    }

    pub fn contains(&self, cell: u32) -> bool {
        match &self.repr {
            ChainRepr::Sparse(v) => v.binary_search(&cell).is_ok(),
            ChainRepr::Dense(b) => b.get(cell),
        }
    }

    /// Support in increasing index order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u32> + '_> {
        match &self.repr {
            ChainRepr::Sparse(v) => Box::new(v.iter().copied()),
            ChainRepr::Dense(b) => Box::new(b.iter_ones()),
        }
    }

    pub fn support(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn repr(&self) -> &ChainRepr {
        &self.repr
    }

    pub fn to_dense_bits(&self) -> DenseBits {
        match &self.repr {
            ChainRepr::Dense(b) => b.clone(),
            ChainRepr::Sparse(v) => {
                let mut b = DenseBits::zeros(self.ncells as usize);
                for &c in v {
                    b.set(c, true);
                }
                b
            }
        }
    }

    /// F2 sum, preferring the denser representation of the two inputs.
    pub fn xor(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.complex_id, other.complex_id);
        debug_assert_eq!(self.dim, other.dim);
        let mut bits = self.to_dense_bits();
        let other_bits;
        let rhs = match &other.repr {
            ChainRepr::Dense(b) => b,
            ChainRepr::Sparse(v) => {
                let mut b = DenseBits::zeros(self.ncells as usize);
                for &c in v {
                    b.set(c, true);
                }
                other_bits = b;
                &other_bits
            }
        };
        bits.xor_assign(rhs);
        let mut out = Chain {
            complex_id: self.complex_id,
            dim: self.dim,
            ncells: self.ncells,
            repr: ChainRepr::Dense(bits),
        };
        out.normalize_repr();
        out
    }

    /// Parity of the overlap |self ∩ other| over F2.
    pub fn overlap_parity(&self, other: &Chain) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        let (small, big) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut parity = false;
        for c in small.iter() {
            if big.contains(c) {
                parity = !parity;
            }
        }
        parity
    }

    fn normalize_repr(&mut self) {
        let dense_cut = (self.ncells as usize >> DENSE_THRESHOLD_SHIFT).max(16);
        match &self.repr {
            ChainRepr::Sparse(v) if v.len() > dense_cut => {
                let mut b = DenseBits::zeros(self.ncells as usize);
                for &c in v {
                    b.set(c, true);
                }
                self.repr = ChainRepr::Dense(b);
            }
            ChainRepr::Dense(b) if b.count_ones() <= dense_cut => {
                self.repr = ChainRepr::Sparse(b.iter_ones().collect());
            }
            _ => {}
        }
    }
}

impl PartialEq for Chain {
    fn eq(&self, other: &Self) -> bool {
        self.complex_id == other.complex_id
            && self.dim == other.dim
            && match (&self.repr, &other.repr) {
                (ChainRepr::Sparse(a), ChainRepr::Sparse(b)) => a == b,
                _ => self.support() == other.support(),
            }
    }
}

impl Eq for Chain {}

/// A domain wall: an F2 vector over (k-1)-cells. Not necessarily a boundary
/// when measurement noise is on.
pub type Syndrome = Chain;
