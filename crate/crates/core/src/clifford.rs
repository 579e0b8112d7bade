//! Exact arithmetic in the integral/rational Clifford algebras `C_n`.
//!
//! `C_n` is generated by `i_1, ..., i_{n-1}` with `i_h^2 = -1` and
//! `i_h i_k = -i_k i_h`. Elements are stored as canonical sparse maps from
//! basis blades to rational coefficients; zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::rat::{round_half_up, Int, Rat};
use crate::{Error, Result};

/// Maximum supported dimension. Unit enumeration is exponential in `n`.
pub const MAX_DIM: u32 = 12;

/// A basis blade `i_{h_1} ... i_{h_m}` stored as a bit set: bit `h-1` set
/// means the generator `i_h` occurs. The empty blade is the scalar `1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Blade(pub u16);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn generator(h: u32, n: u32) -> Result<Blade> {
        if h == 0 || h >= n {
            return Err(Error::InvalidGenerator(h, n));
        }
        Ok(Blade(1 << (h - 1)))
    }

    pub fn from_indices(indices: &[u32], n: u32) -> Result<Blade> {
        let mut mask = 0u16;
        let mut prev = 0u32;
        for &h in indices {
            if h == 0 || h >= n {
                return Err(Error::InvalidGenerator(h, n));
            }
            if h <= prev {
                return Err(Error::InvalidGenerator(h, n));
            }
            prev = h;
            mask |= 1 << (h - 1);
        }
        Ok(Blade(mask))
    }

    /// Strictly increasing generator indices of this blade.
    pub fn indices(self) -> Vec<u32> {
        (0..16).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn fits_dimension(self, n: u32) -> bool {
        n >= 1 && self.0 >> (n - 1) == 0
    }

    /// Blade product. Returns the sign (`true` = negative) and the result
    /// blade. The sign counts the transpositions needed to merge the two
    /// sorted index lists, plus one `-1` per repeated index (`i_h^2 = -1`).
    pub fn mul(self, other: Blade) -> (bool, Blade) {
        let mut neg = false;
        let mut bits = other.0;
        while bits != 0 {
            let b = bits.trailing_zeros();
            if (self.0 >> (b + 1)).count_ones() % 2 == 1 {
                neg = !neg;
            }
            if self.0 >> b & 1 == 1 {
                neg = !neg;
            }
            bits &= bits - 1;
        }
        (neg, Blade(self.0 ^ other.0))
    }
}

/// Element of `C_n` over the rationals, in canonical sparse form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliffordElement {
    n: u32,
    coeffs: BTreeMap<Blade, Rat>,
}

impl CliffordElement {
    pub fn zero(n: u32) -> Self {
        CliffordElement { n, coeffs: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(n, Rat::one())
    }

    pub fn scalar(n: u32, c: Rat) -> Self {
        let mut e = Self::zero(n);
        e.add_term(Blade::SCALAR, c);
        e
    }

    pub fn generator(n: u32, h: u32) -> Result<Self> {
        let b = Blade::generator(h, n)?;
        let mut e = Self::zero(n);
        e.add_term(b, Rat::one());
        Ok(e)
    }

    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (Blade, Rat)>) -> Result<Self> {
        let mut e = Self::zero(n);
        for (b, c) in terms {
            if !b.fits_dimension(n) {
                return Err(Error::InvalidGenerator(
                    b.indices().last().copied().unwrap_or(0),
                    n,
                ));
            }
            e.add_term(b, c);
        }
        Ok(e)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rat)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, b: Blade) -> Rat {
        self.coeffs.get(&b).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, b: Blade, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(b) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (ba, ca) in &self.coeffs {
            for (bb, cb) in &other.coeffs {
                let (neg, b) = ba.mul(*bb);
                let c = ca * cb;
                out.add_term(b, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(self.n);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Main involution `a'`: each grade-g blade picks up `(-1)^g`.
    pub fn main_involution(&self) -> Self {
        self.grade_signed(|g| g % 2 == 1)
    }

    /// Reversion `a*`: reverses the factors of each blade, `(-1)^{g(g-1)/2}`.
    pub fn reversion(&self) -> Self {
        self.grade_signed(|g| (g * g.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Conjugation `conj(a) = (a')* = (a*)'`, `(-1)^{g(g+1)/2}` per blade.
    pub fn conjugation(&self) -> Self {
        self.grade_signed(|g| (g * (g + 1) / 2) % 2 == 1)
    }

    fn grade_signed(&self, negate: impl Fn(u32) -> bool) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (*b, if negate(b.grade()) { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Sum of squared coefficients, `|a|^2`.
    pub fn norm_sq(&self) -> Rat {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// True iff the support lies in the span of `{1, i_1, ..., i_{n-1}}`.
    pub fn is_vector(&self) -> bool {
        self.coeffs.keys().all(|b| b.grade() <= 1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// The scalar value if the element is purely scalar.
    pub fn as_scalar(&self) -> Option<Rat> {
        if self.coeffs.is_empty() {
            return Some(Rat::zero());
        }
        if self.coeffs.len() == 1 {
            if let Some(c) = self.coeffs.get(&Blade::SCALAR) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Coordinates over `{1, i_1, ..., i_{n-1}}` for vector elements.
    pub fn vector_coords(&self) -> Result<Vec<Rat>> {
        if !self.is_vector() {
            return Err(Error::NotAVector);
        }
        let mut co = vec![Rat::zero(); self.n as usize];
        for (b, c) in &self.coeffs {
            let idx = if *b == Blade::SCALAR { 0 } else { b.indices()[0] as usize };
            co[idx] = c.clone();
        }
        Ok(co)
    }

    pub fn from_vector_coords(n: u32, co: &[Rat]) -> Result<Self> {
        if co.len() != n as usize {
            return Err(Error::DimensionMismatch(n, co.len() as u32));
        }
        let mut e = Self::zero(n);
        e.add_term(Blade::SCALAR, co[0].clone());
        for (h, c) in co.iter().enumerate().skip(1) {
            e.add_term(Blade::generator(h as u32, n)?, c.clone());
        }
        Ok(e)
    }

    /// Inverse via `conj(a) / (a conj(a))`, defined when `a conj(a)` is a
    /// nonzero rational scalar (vectors and Clifford group elements qualify).
    pub fn invert(&self) -> Result<Self> {
        let bar = self.conjugation();
        let prod = self.mul(&bar)?;
        match prod.as_scalar() {
            Some(s) if !s.is_zero() => Ok(bar.scale(&s.recip())),
            _ => Err(Error::NotInvertibleInGamma),
        }
    }

    /// Membership in the Clifford group `Gamma_n` (integral variant:
    /// `Gamma_n(Z)`, i.e. integral elements that are products of invertible
    /// real paravectors). Tests that `a conj(a)` is a positive rational
    /// scalar and that `a x a*` is a vector for every basis vector `x`.
    /// These conditions are necessary for genuine members; for `n <= 3` the
    /// algebra is a division algebra and they accept exactly the nonzero
    /// elements, which is the true membership there. At higher `n` the test
    /// is validated against product oracles in the test suite.
    pub fn gamma_member(&self, integral: bool) -> bool {
        if self.is_zero() {
            return false;
        }
        if integral && !self.is_integral() {
            return false;
        }
        let bar = self.conjugation();
        let prod = match self.mul(&bar) {
            Ok(p) => p,
            Err(_) => return false,
        };
        match prod.as_scalar() {
            Some(s) if s.is_positive() => {}
            _ => return false,
        }
        let rev = self.reversion();
        let mut basis = vec![Self::one(self.n)];
        for h in 1..self.n {
            basis.push(Self::generator(self.n, h).expect("valid generator"));
        }
        basis.iter().all(|x| {
            self.mul(x)
                .and_then(|ax| ax.mul(&rev))
                .map(|axr| axr.is_vector())
                .unwrap_or(false)
        })
    }

    /// Componentwise nearest integral vector; ties round toward plus
    /// infinity. The result satisfies `|z - round(z)|^2 <= n/4`.
    pub fn round_to_lattice(&self) -> Result<Self> {
        if !self.is_vector() {
            return Err(Error::NotAVector);
        }
        let co = self.vector_coords()?;
        let rounded: Vec<Rat> = co.iter().map(|c| Rat::from_integer(round_half_up(c))).collect();
        Self::from_vector_coords(self.n, &rounded)
    }

    /// Embed into a larger dimension (the natural inclusion `C_n ⊂ C_m`).
    pub fn embed(&self, m: u32) -> Result<Self> {
        if m < self.n {
            return Err(Error::DimensionMismatch(self.n, m));
        }
        Ok(CliffordElement { n: m, coeffs: self.coeffs.clone() })
    }

    /// Integer coefficient access for integral elements.
    pub fn integer_coeff(&self, b: Blade) -> Option<Int> {
        let c = self.coeff(b);
        c.is_integer().then(|| c.to_integer())
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}[{}]", self.n, self)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        // Sort by (grade, bit pattern) so vectors print before higher blades.
        let mut terms: Vec<(&Blade, &Rat)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(b, _)| (b.grade(), b.0));
        for (pos, (b, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let gens: Vec<String> = b.indices().iter().map(|h| format!("i{h}")).collect();
            if gens.is_empty() {
                write!(f, "{}", crate::rat::format_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", gens.join("*"))?;
            } else {
                write!(f, "{}*{}", crate::rat::format_rat(&mag), gens.join("*"))?;
            }
        }
        Ok(())
    }
}
