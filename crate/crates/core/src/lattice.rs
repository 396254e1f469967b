//! Lattice geometry, species indexing and bit-level configuration encoding.
//!
//! Everything downstream relies on one global convention: the occupation
//! number of species `gamma` at site `x` lives at bit `b(x, gamma) = 4*x + gamma`,
//! and a configuration index is `tau = sum n_b 2^b`. Sites and species are
//! zero-indexed; site arithmetic is mod `m_x` (periodic chain).

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Number of species per site: right/left movers, two colors each.
pub const SPECIES_PER_SITE: usize = 4;

/// Movement direction of a species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mover {
    Right,
    Left,
}

/// Internal color ("red"/"green") of a species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    C1,
    C2,
}

/// One of the four particle species. Canonical linear index
/// `gamma in {0,1,2,3}` with 0=R1, 1=R2, 2=L1, 3=L2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Species {
    pub mover: Mover,
    pub color: Color,
}

impl Species {
    pub const R1: Species = Species { mover: Mover::Right, color: Color::C1 };
    pub const R2: Species = Species { mover: Mover::Right, color: Color::C2 };
    pub const L1: Species = Species { mover: Mover::Left, color: Color::C1 };
    pub const L2: Species = Species { mover: Mover::Left, color: Color::C2 };

    /// All four species in canonical order.
    pub const ALL: [Species; 4] = [Species::R1, Species::R2, Species::L1, Species::L2];

    /// Canonical linear index.
    pub fn index(self) -> usize {
        match (self.mover, self.color) {
            (Mover::Right, Color::C1) => 0,
            (Mover::Right, Color::C2) => 1,
            (Mover::Left, Color::C1) => 2,
            (Mover::Left, Color::C2) => 3,
        }
    }

    pub fn from_index(gamma: usize) -> Result<Species, CoreError> {
        Species::ALL
            .get(gamma)
            .copied()
            .ok_or(CoreError::InvalidSpecies(gamma))
    }

    pub fn label(self) -> &'static str {
        ["R1", "R2", "L1", "L2"][self.index()]
    }
}

/// Periodic chain of `m_x` sites with spacing `epsilon`.
///
/// Velocity is one, so a time step spans the same unit as a site hop.
/// `m_x = 1` is allowed (transport degenerates to the identity), which keeps
/// the single-site 16x16 operator checks expressible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub m_x: usize,
    pub epsilon: f64,
}

impl LatticeSpec {
    pub const MAX_SITES: usize = 32;

    pub fn new(m_x: usize) -> Result<LatticeSpec, CoreError> {
        LatticeSpec::with_epsilon(m_x, 1.0)
    }

    pub fn with_epsilon(m_x: usize, epsilon: f64) -> Result<LatticeSpec, CoreError> {
        if m_x == 0 || m_x > LatticeSpec::MAX_SITES {
            return Err(CoreError::InvalidLattice(m_x));
        }
        if !(epsilon > 0.0) {
            return Err(CoreError::InvalidEpsilon(epsilon));
        }
        Ok(LatticeSpec { m_x, epsilon })
    }

    /// Number of bits in a configuration.
    pub fn num_bits(&self) -> usize {
        SPECIES_PER_SITE * self.m_x
    }

    /// Hilbert-space dimension `2^(4 m_x)` if it fits a usize, else None.
    pub fn dimension(&self) -> Option<usize> {
        let bits = self.num_bits();
        if bits >= usize::BITS as usize {
            None
        } else {
            Some(1usize << bits)
        }
    }

    /// Bit position of species `gamma` at site `x`.
    pub fn bit(&self, x: usize, species: Species) -> usize {
        debug_assert!(x < self.m_x);
        SPECIES_PER_SITE * x + species.index()
    }

    /// Site index arithmetic mod `m_x`.
    pub fn wrap(&self, x: isize) -> usize {
        x.rem_euclid(self.m_x as isize) as usize
    }

    /// Mask covering all `4 m_x` bits.
    pub fn full_mask(&self) -> u128 {
        if self.num_bits() == 128 {
            u128::MAX
        } else {
            (1u128 << self.num_bits()) - 1
        }
    }
}

/// One classical configuration: `4 m_x` occupation bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitConfig {
    bits: u128,
    m_x: usize,
}

impl BitConfig {
    /// The all-empty configuration.
    pub fn empty(spec: &LatticeSpec) -> BitConfig {
        BitConfig { bits: 0, m_x: spec.m_x }
    }

    /// Decode a configuration index. Fails when `tau` has bits outside the lattice.
    pub fn from_index(tau: u128, spec: &LatticeSpec) -> Result<BitConfig, CoreError> {
        if tau & !spec.full_mask() != 0 {
            return Err(CoreError::IndexOutOfRange { tau, bits: spec.num_bits() });
        }
        Ok(BitConfig { bits: tau, m_x: spec.m_x })
    }

    /// Configuration index `tau = sum n_b 2^b`.
    pub fn index(&self) -> u128 {
        self.bits
    }

    pub fn sites(&self) -> usize {
        self.m_x
    }

    pub fn num_bits(&self) -> usize {
        SPECIES_PER_SITE * self.m_x
    }

    pub fn get(&self, x: usize, species: Species) -> bool {
        let b = SPECIES_PER_SITE * x + species.index();
        self.bits >> b & 1 == 1
    }

    pub fn set(&mut self, x: usize, species: Species, occupied: bool) {
        let b = SPECIES_PER_SITE * x + species.index();
        if occupied {
            self.bits |= 1u128 << b;
        } else {
            self.bits &= !(1u128 << b);
        }
    }

    /// Build a configuration with the listed `(site, species)` occupied.
    pub fn with_particles(spec: &LatticeSpec, particles: &[(usize, Species)]) -> BitConfig {
        let mut c = BitConfig::empty(spec);
        for &(x, s) in particles {
            c.set(x, s, true);
        }
        c
    }

    /// The four occupation numbers at site `x` in canonical species order,
    /// packed as a nibble value in `0..16`.
    pub fn nibble(&self, x: usize) -> u8 {
        (self.bits >> (SPECIES_PER_SITE * x) & 0xf) as u8
    }

    pub fn set_nibble(&mut self, x: usize, nibble: u8) {
        let shift = SPECIES_PER_SITE * x;
        self.bits = (self.bits & !(0xfu128 << shift)) | ((nibble as u128 & 0xf) << shift);
    }

    /// The four bits at site `x` as `(n_R1, n_R2, n_L1, n_L2)`.
    pub fn local_nibble(&self, x: usize) -> (u8, u8, u8, u8) {
        let n = self.nibble(x);
        (n & 1, n >> 1 & 1, n >> 2 & 1, n >> 3 & 1)
    }

    /// Occupied-bit count of the selected class.
    pub fn charge(&self, which: ChargeKind) -> u32 {
        let mut count = 0;
        for x in 0..self.m_x {
            let n = self.nibble(x) as u32;
            count += match which {
                ChargeKind::NTotal => n.count_ones(),
                ChargeKind::NRight => (n & 0b0011).count_ones(),
                ChargeKind::NLeft => (n & 0b1100).count_ones(),
                ChargeKind::NColor1Parity => (n & 0b0101).count_ones(),
            };
        }
        match which {
            ChargeKind::NColor1Parity => count % 2,
            _ => count,
        }
    }

    /// Relabel sites `x -> x + shift (mod m_x)`.
    pub fn translated(&self, shift: isize) -> BitConfig {
        let mut out = BitConfig { bits: 0, m_x: self.m_x };
        for x in 0..self.m_x {
            let src = (x as isize - shift).rem_euclid(self.m_x as isize) as usize;
            out.set_nibble(x, self.nibble(src));
        }
        out
    }

    /// Occupation string, bit index 0 first.
    pub fn bit_string(&self) -> String {
        (0..self.num_bits())
            .map(|b| if self.bits >> b & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse a `0/1` string (index 0 first) of length `4 m_x`.
    pub fn from_bit_string(s: &str, spec: &LatticeSpec) -> Result<BitConfig, CoreError> {
        if s.len() != spec.num_bits() {
            return Err(CoreError::BadBitString(s.to_string()));
        }
        let mut bits = 0u128;
        for (b, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1u128 << b,
                '0' => {}
                _ => return Err(CoreError::BadBitString(s.to_string())),
            }
        }
        Ok(BitConfig { bits, m_x: spec.m_x })
    }
}

/// Conserved-quantity selectors used throughout the test suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChargeKind {
    NTotal,
    NRight,
    NLeft,
    NColor1Parity,
}

impl ChargeKind {
    pub const ALL: [ChargeKind; 4] = [
        ChargeKind::NTotal,
        ChargeKind::NRight,
        ChargeKind::NLeft,
        ChargeKind::NColor1Parity,
    ];
}

/// JSON literal for a single configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLiteral {
    #[serde(rename = "M_x")]
    pub m_x: usize,
    pub bits: String,
}

impl ConfigLiteral {
    pub fn encode(config: &BitConfig) -> ConfigLiteral {
        ConfigLiteral { m_x: config.sites(), bits: config.bit_string() }
    }

    pub fn decode(&self) -> Result<(LatticeSpec, BitConfig), CoreError> {
        let spec = LatticeSpec::new(self.m_x)?;
        let config = BitConfig::from_bit_string(&self.bits, &spec)?;
        Ok((spec, config))
    }
}
