//! Random linear encoding of a generation and on-line Gaussian-elimination
//! decoding.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Field, GfError, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RlncError {
    #[error("a generation needs at least one packet")]
    EmptyGeneration,
    #[error("packets need at least one symbol")]
    EmptyPacket,
    #[error("packet {index} has {found} symbols, expected {expected}")]
    RaggedGeneration {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("not decodable: rank {rank} < {needed}")]
    NotDecodable { rank: usize, needed: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `K` source packets of `n` symbols each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    packets: Vec<Vec<Symbol>>,
}

impl Generation {
    pub fn new(field: &Field, packets: Vec<Vec<Symbol>>) -> Result<Self, RlncError> {
        let first = packets.first().ok_or(RlncError::EmptyGeneration)?;
        let n = first.len();
        if n == 0 {
            return Err(RlncError::EmptyPacket);
        }
        for (index, p) in packets.iter().enumerate() {
            if p.len() != n {
                return Err(RlncError::RaggedGeneration {
                    index,
                    found: p.len(),
                    expected: n,
                });
            }
            for &s in p {
                field.check(s as u32)?;
            }
        }
        Ok(Self { packets })
    }

    /// A generation of uniformly random symbols.
    pub fn random(field: &Field, size: usize, symbols: usize, seed: u64) -> Result<Self, RlncError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let packets = (0..size)
            .map(|_| {
                let mut p = vec![0; symbols];
                fill_uniform(field, &mut rng, &mut p);
                p
            })
            .collect();
        Self::new(field, packets)
    }

    /// Generation size `K`.
    pub fn size(&self) -> usize {
        self.packets.len()
    }

    /// Symbols per packet `n`.
    pub fn packet_len(&self) -> usize {
        self.packets[0].len()
    }

    pub fn packets(&self) -> &[Vec<Symbol>] {
        &self.packets
    }
}

/// A random linear combination together with its coefficient header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub coefficients: Vec<Symbol>,
    pub payload: Vec<Symbol>,
}

/// Fill `out` with independent uniform field symbols.
///
/// Symbols are cut `u` bits at a time from successive 64-bit words, which is
/// exactly uniform because `q` is a power of two.
pub fn fill_uniform<R: RngCore + ?Sized>(field: &Field, rng: &mut R, out: &mut [Symbol]) {
    let bits = field.degree();
    let mask = field.mask() as u64;
    let per_word = (64 / bits) as usize;
    for chunk in out.chunks_mut(per_word) {
        let mut word = rng.next_u64();
        for s in chunk {
            *s = (word & mask) as Symbol;
            word >>= bits;
        }
    }
}

/// `payload[j] = sum_i coefficients[i] * s_i[j]`.
pub fn encode(field: &Field, generation: &Generation, coefficients: &[Symbol]) -> Result<CodedPacket, RlncError> {
    if coefficients.len() != generation.size() {
        return Err(RlncError::LengthMismatch {
            what: "coefficient vector",
            expected: generation.size(),
            found: coefficients.len(),
        });
    }
    for &c in coefficients {
        field.check(c as u32)?;
    }
    let mut payload = vec![0; generation.packet_len()];
    for (&c, source) in coefficients.iter().zip(generation.packets()) {
        field.axpy(&mut payload, c, source);
    }
    Ok(CodedPacket {
        coefficients: coefficients.to_vec(),
        payload,
    })
}

/// Encode with coefficients drawn uniformly from a generator seeded by `seed`.
pub fn encode_random(field: &Field, generation: &Generation, seed: u64) -> CodedPacket {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    encode_with_rng(field, generation, &mut rng)
}

pub fn encode_with_rng<R: RngCore + ?Sized>(field: &Field, generation: &Generation, rng: &mut R) -> CodedPacket {
    let mut coefficients = vec![0; generation.size()];
    fill_uniform(field, rng, &mut coefficients);
    encode(field, generation, &coefficients).expect("coefficients are drawn in range")
}

/// Incremental row reduction of received packets.
///
/// Rows are kept in echelon form keyed by pivot column, each normalised so the
/// pivot is 1. Back-substitution is deferred to [`Decoder::recover`].
#[derive(Debug, Clone)]
pub struct Decoder<'f> {
    field: &'f Field,
    size: usize,
    packet_len: usize,
    /// `pivots[c]` is the row whose leading entry sits in column `c`.
    pivots: Vec<Option<Row>>,
    rank: usize,
    scratch: Vec<Symbol>,
}

#[derive(Debug, Clone)]
struct Row {
    /// Coefficients followed by the payload.
    data: Vec<Symbol>,
}

impl<'f> Decoder<'f> {
    /// A decoder for generations of `size` packets of `packet_len` symbols.
    /// `packet_len` may be zero when only the rank process matters.
    pub fn new(field: &'f Field, size: usize, packet_len: usize) -> Self {
        Self {
            field,
            size,
            packet_len,
            pivots: vec![None; size],
            rank: 0,
            scratch: Vec::with_capacity(size + packet_len),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_complete(&self) -> bool {
        self.rank == self.size
    }

    /// Absorb a coded packet; returns whether it raised the rank.
    pub fn absorb(&mut self, packet: &CodedPacket) -> Result<bool, RlncError> {
        if packet.coefficients.len() != self.size {
            return Err(RlncError::LengthMismatch {
                what: "coefficient vector",
                expected: self.size,
                found: packet.coefficients.len(),
            });
        }
        if packet.payload.len() != self.packet_len {
            return Err(RlncError::LengthMismatch {
                what: "payload",
                expected: self.packet_len,
                found: packet.payload.len(),
            });
        }
        let mut row = std::mem::take(&mut self.scratch);
        row.clear();
        row.extend_from_slice(&packet.coefficients);
        row.extend_from_slice(&packet.payload);
        let innovative = self.reduce_and_insert(row);
        Ok(innovative)
    }

    /// Absorb a bare coefficient vector (payload length must be zero).
    pub fn absorb_coefficients(&mut self, coefficients: &[Symbol]) -> bool {
        assert_eq!(coefficients.len(), self.size);
        assert_eq!(self.packet_len, 0);
        let mut row = std::mem::take(&mut self.scratch);
        row.clear();
        row.extend_from_slice(coefficients);
        self.reduce_and_insert(row)
    }

    fn reduce_and_insert(&mut self, mut row: Vec<Symbol>) -> bool {
        let field = self.field;
        for col in 0..self.size {
            let lead = row[col];
            if lead == 0 {
                continue;
            }
            match &self.pivots[col] {
                // The stored row is zero left of `col` with a unit pivot.
                Some(pivot) => field.axpy(&mut row[col..], lead, &pivot.data[col..]),
                None => {
                    let inv = field.inv(lead).expect("lead is nonzero");
                    field.scale(&mut row[col..], inv);
                    self.pivots[col] = Some(Row { data: row });
                    self.rank += 1;
                    return true;
                }
            }
        }
        self.scratch = row;
        false
    }

    /// Back-substitute and return the decoded generation.
    pub fn recover(&self) -> Result<Generation, RlncError> {
        if !self.is_complete() {
            return Err(RlncError::NotDecodable {
                rank: self.rank,
                needed: self.size,
            });
        }
        if self.packet_len == 0 {
            return Err(RlncError::EmptyPacket);
        }
        let k = self.size;
        let mut solved: Vec<Vec<Symbol>> = vec![Vec::new(); k];
        for col in (0..k).rev() {
            let row = &self.pivots[col].as_ref().expect("full rank").data;
            let mut payload = row[k..].to_vec();
            for later in col + 1..k {
                let c = row[later];
                if c != 0 {
                    self.field.axpy(&mut payload, c, &solved[later]);
                }
            }
            solved[col] = payload;
        }
        Ok(Generation { packets: solved })
    }
}

/// Draw uniform coefficient vectors until a fresh decoder reaches full rank;
/// returns the number drawn.
pub fn simulate_n(size: usize, field: &Field, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draws_to_full_rank(size, field, &mut rng)
}

pub fn draws_to_full_rank<R: Rng + ?Sized>(size: usize, field: &Field, rng: &mut R) -> u64 {
    let mut decoder = Decoder::new(field, size, 0);
    let mut coefficients = vec![0; size];
    let mut draws = 0u64;
    while !decoder.is_complete() {
        fill_uniform(field, rng, &mut coefficients);
        decoder.absorb_coefficients(&coefficients);
        draws += 1;
    }
    draws
}
