//! Symplectic Pauli strings.
//!
//! Qubit 1 is the leftmost character of a string and the most significant bit
//! of a computational basis index. `Y` is the standard Pauli Y, so a string with
//! bits `(x, z)` and phase exponent `k` stands for `i^k * i^{|x&z|} X^x Z^z`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `i^k` for any integer exponent.
pub fn i_pow(k: u32) -> Complex64 {
    I_POW[(k & 3) as usize]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Exponent of the global phase `i^phase`.
    phase: u8,
}

impl PauliString {
    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!("qubit count {n} out of range")));
        }
        let mask = mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::InvalidArgument("bits outside qubit range".into()));
        }
        Ok(Self { n, x, z, phase: phase & 3 })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0, phase: 0 }
    }

    /// Single-qubit Pauli `kind` ('X', 'Y' or 'Z') on `qubit` (0-based, leftmost = 0).
    pub fn single(n: usize, qubit: usize, kind: char) -> Result<Self> {
        if qubit >= n {
            return Err(Error::InvalidArgument(format!("qubit {qubit} out of range for {n}")));
        }
        let bit = 1u64 << (n - 1 - qubit);
        let (x, z) = match kind {
            'I' => (0, 0),
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            _ => return Err(Error::PauliParse(kind.to_string())),
        };
        Self::new(n, x, z, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }
    pub fn x_bits(&self) -> u64 {
        self.x
    }
    pub fn z_bits(&self) -> u64 {
        self.z
    }
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// +1 or −1 for Hermitian strings.
    pub fn sign(&self) -> f64 {
        if self.phase == 2 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn negate(self) -> Self {
        let p = self.phase;
        self.with_phase(p + 2)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Letter acting on `qubit` (0-based).
    pub fn letter(&self, qubit: usize) -> char {
        let bit = 1u64 << (self.n - 1 - qubit);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(s.is_multiple_of(2))
    }

    /// Operator product `self * other` with exact phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.phase as u32
            + other.phase as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4
            - ((x & z).count_ones() & 3);
        Ok(Self { n: self.n, x, z, phase: (k & 3) as u8 })
    }

    /// Image of basis state `b`: `P|b> = factor |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let b64 = b as u64;
        let k = self.phase as u32 + (self.x & self.z).count_ones() + 2 * (self.z & b64).count_ones();
        ((b64 ^ self.x) as usize, i_pow(k))
    }

    pub fn apply_to_vector(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize << self.n;
        if v.len() != dim {
            return Err(Error::DimensionMismatch(v.len(), dim));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (b, &a) in v.iter().enumerate() {
            let (t, f) = self.apply_to_basis(b);
            out[t] = f * a;
        }
        Ok(out)
    }

    /// Dense matrix, for oracles and small systems.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(dim);
        for b in 0..dim {
            let (t, f) = self.apply_to_basis(b);
            m[(t, b)] = f;
        }
        m
    }

    /// Embed as the leading qubits of a register with `extra` trailing qubits.
    pub fn extend(&self, extra: usize) -> Result<Self> {
        Self::new(self.n + extra, self.x << extra, self.z << extra, self.phase)
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Optional leading sign (`+`, `-`, `+i`, `-i`) followed by letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n == 0 || n > 64 {
            return Err(Error::PauliParse(s.to_string()));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (j, c) in body.chars().enumerate() {
            let bit = 1u64 << (n - 1 - j);
            match c {
                'I' => {}
                'X' => x |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit
                }
                'Z' => z |= bit,
                _ => return Err(Error::PauliParse(s.to_string())),
            }
        }
        Self::new(n, x, z, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        f.write_str(sign)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}
