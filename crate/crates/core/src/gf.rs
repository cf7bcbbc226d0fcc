//! Arithmetic in GF(2^u) for 1 <= u <= 16.
//!
//! Elements are stored as `u16` in polynomial basis: bit `i` is the
//! coefficient of `x^i`. Addition is exclusive-or. Each degree uses one fixed
//! primitive reduction polynomial (see [`REDUCTION_POLYNOMIALS`]), so every
//! result in this crate is bit-exact across runs and platforms.
//!
//! Fields with `u <= 8` multiply through log/antilog tables (plus a full
//! product table derived from them for row operations); larger fields use a
//! carry-less multiply followed by polynomial reduction.

use thiserror::Error;

/// A field element. Valid values are `0..q` for the owning [`Field`].
pub type Symbol = u16;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Primitive reduction polynomial for each degree `u = 1..=16`, index `u - 1`.
/// The leading `x^u` term is included.
pub const REDUCTION_POLYNOMIALS: [u32; 16] = [
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

const TABLE_MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("field degree u={0} outside supported range 1..=16")]
    UnsupportedDegree(u32),
    #[error("division by zero: the zero element has no inverse")]
    DivisionByZero,
    #[error("symbol {value} is not an element of GF({q})")]
    InvalidSymbol { value: u32, q: u32 },
}

#[derive(Debug, Clone)]
struct Tables {
    /// `exp[i] = g^i` for `i in 0..2(q-1)`, doubled so log sums need no modulo.
    exp: Vec<Symbol>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u16>,
    /// Row-major `q x q` product table.
    product: Vec<Symbol>,
}

/// The field GF(2^u) with its fixed reduction polynomial.
///
/// Immutable after construction; share it by reference.
#[derive(Debug, Clone)]
pub struct Field {
    degree: u32,
    poly: u32,
    tables: Option<Tables>,
}

/// Carry-less product of two polynomials of degree < 16.
#[inline]
fn clmul(a: u32, b: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Reduce a polynomial of degree < 2u modulo `poly` (degree u).
#[inline]
fn reduce(mut value: u32, poly: u32, degree: u32) -> u32 {
    for bit in (degree..2 * degree).rev() {
        if value & (1 << bit) != 0 {
            value ^= poly << (bit - degree);
        }
    }
    value
}

impl Field {
    pub fn new(degree: u32) -> Result<Self, GfError> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(GfError::UnsupportedDegree(degree));
        }
        let poly = REDUCTION_POLYNOMIALS[degree as usize - 1];
        let mut field = Field {
            degree,
            poly,
            tables: None,
        };
        if degree <= TABLE_MAX_DEGREE {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.order() as usize;
        let order = q - 1;
        let mut exp = vec![0 as Symbol; 2 * order];
        let mut log = vec![0u16; q];
        // x is a generator because every polynomial in the table is primitive;
        // in GF(2) the generator is 1.
        let generator = if self.degree == 1 { 1 } else { 2 };
        let mut value = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = value as Symbol;
            log[value as usize] = i as u16;
            value = reduce(clmul(value, generator), self.poly, self.degree);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        let mut product = vec![0 as Symbol; q * q];
        for a in 1..q {
            for b in 1..q {
                product[a * q + b] = exp[log[a] as usize + log[b] as usize];
            }
        }
        Tables { exp, log, product }
    }

    /// Extension degree `u`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Field size `q = 2^u`.
    pub fn order(&self) -> u32 {
        1 << self.degree
    }

    pub fn reduction_polynomial(&self) -> u32 {
        self.poly
    }

    /// Bit mask selecting a valid symbol from random bits.
    pub fn mask(&self) -> u32 {
        self.order() - 1
    }

    pub fn contains(&self, value: u32) -> bool {
        value < self.order()
    }

    pub fn check(&self, value: u32) -> Result<Symbol, GfError> {
        if self.contains(value) {
            Ok(value as Symbol)
        } else {
            Err(GfError::InvalidSymbol {
                value,
                q: self.order(),
            })
        }
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.tables {
            Some(t) => t.product[((a as usize) << self.degree) | b as usize],
            None => self.mul_clmul(a, b),
        }
    }

    /// Multiplication through the carry-less path regardless of field size.
    pub fn mul_clmul(&self, a: Symbol, b: Symbol) -> Symbol {
        reduce(clmul(a as u32, b as u32), self.poly, self.degree) as Symbol
    }

    /// Multiplication through the log/antilog tables. `None` for `u > 8`.
    pub fn mul_log(&self, a: Symbol, b: Symbol) -> Option<Symbol> {
        let t = self.tables.as_ref()?;
        if a == 0 || b == 0 {
            return Some(0);
        }
        Some(t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize])
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let order = self.order() as usize - 1;
                let l = t.log[a as usize] as usize;
                Ok(t.exp[(order - l) % order])
            }
            // a^(q-2) by square-and-multiply
            None => Ok(self.pow(a, self.order() - 2)),
        }
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Symbol, mut exponent: u32) -> Symbol {
        let mut base = a;
        let mut acc: Symbol = 1;
        while exponent != 0 {
            if exponent & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exponent >>= 1;
        }
        acc
    }

    /// `dst[i] += scale * src[i]` for every `i`.
    #[inline]
    pub fn axpy(&self, dst: &mut [Symbol], scale: Symbol, src: &[Symbol]) {
        debug_assert_eq!(dst.len(), src.len());
        if scale == 0 {
            return;
        }
        if scale == 1 {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= *s;
            }
            return;
        }
        match &self.tables {
            Some(t) => {
                let base = (scale as usize) << self.degree;
                let row = &t.product[base..base + self.order() as usize];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= row[*s as usize];
                }
            }
            None => {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= self.mul_clmul(scale, *s);
                }
            }
        }
    }

    /// `row[i] *= scale` for every `i`.
    pub fn scale(&self, row: &mut [Symbol], scale: Symbol) {
        if scale == 1 {
            return;
        }
        for v in row.iter_mut() {
            *v = self.mul(scale, *v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift-and-add multiply with reduction after every shift; shares no code
    /// with the table or clmul paths.
    fn bitwise_mul(a: u32, b: u32, poly: u32, degree: u32) -> u32 {
        let mut a = a;
        let mut b = b;
        let mut acc = 0;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << degree) != 0 {
                a ^= poly;
            }
        }
        acc
    }

    #[test]
    fn gf8_add_example() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.add(5, 3), 6);
    }

    #[test]
    fn gf8_mul_example() {
        let f = Field::new(3).unwrap();
        assert_eq!(bitwise_mul(3, 3, 0xB, 3), 5);
        assert_eq!(f.mul(3, 3), 5);
    }

    #[test]
    fn gf8_inverse_example() {
        let f = Field::new(3).unwrap();
        let found = (1..8u32)
            .find(|&b| bitwise_mul(2, b, 0xB, 3) == 1)
            .unwrap();
        assert_eq!(found, 5);
        assert_eq!(f.inv(2).unwrap(), 5);
    }

    #[test]
    fn zero_has_no_inverse() {
        for u in [1, 4, 8, 12, 16] {
            let f = Field::new(u).unwrap();
            assert_eq!(f.inv(0), Err(GfError::DivisionByZero));
            assert_eq!(f.div(3 & f.mask() as Symbol, 0), Err(GfError::DivisionByZero));
        }
    }

    #[test]
    fn unsupported_degrees_are_rejected() {
        assert_eq!(Field::new(0).unwrap_err(), GfError::UnsupportedDegree(0));
        assert_eq!(Field::new(17).unwrap_err(), GfError::UnsupportedDegree(17));
    }

    #[test]
    fn symbol_range_check() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.check(7), Ok(7));
        assert_eq!(f.check(8), Err(GfError::InvalidSymbol { value: 8, q: 8 }));
    }

    #[test]
    fn every_polynomial_is_primitive() {
        // x (or 1 in GF(2)) must have multiplicative order exactly q - 1.
        for u in 1..=MAX_DEGREE {
            let f = Field::new(u).unwrap();
            let order = f.order() - 1;
            let g: Symbol = if u == 1 { 1 } else { 2 };
            let mut x: Symbol = 1;
            for step in 1..=order {
                x = f.mul_clmul(x, g);
                if x == 1 {
                    assert_eq!(step, order, "u={u}: generator order {step}");
                }
            }
            assert_eq!(x, 1);
        }
    }

    #[test]
    fn table_and_clmul_paths_agree() {
        for u in 1..=8 {
            let f = Field::new(u).unwrap();
            let q = f.order();
            for a in 0..q {
                for b in 0..q {
                    let (a, b) = (a as Symbol, b as Symbol);
                    let reference = bitwise_mul(a as u32, b as u32, f.poly, u) as Symbol;
                    assert_eq!(f.mul_clmul(a, b), reference);
                    assert_eq!(f.mul_log(a, b), Some(reference));
                    assert_eq!(f.mul(a, b), reference);
                }
            }
        }
        assert_eq!(Field::new(9).unwrap().mul_log(2, 3), None);
    }

    #[test]
    fn inverses_in_large_fields() {
        for u in [9, 12, 16] {
            let f = Field::new(u).unwrap();
            for a in 1..f.order() {
                let a = a as Symbol;
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn axpy_matches_elementwise() {
        for u in [3, 11] {
            let f = Field::new(u).unwrap();
            let src: Vec<Symbol> = (0..20).map(|i| (i * 37 % f.order()) as Symbol).collect();
            for scale in [0, 1, 5, 6] {
                let mut dst: Vec<Symbol> = (0..20).map(|i| (i * 11 % f.order()) as Symbol).collect();
                let expected: Vec<Symbol> = dst
                    .iter()
                    .zip(&src)
                    .map(|(d, s)| f.add(*d, f.mul(scale, *s)))
                    .collect();
                f.axpy(&mut dst, scale, &src);
                assert_eq!(dst, expected);
            }
        }
    }
}
