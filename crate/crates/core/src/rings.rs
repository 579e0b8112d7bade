//! Arithmetic contexts for the ground rings: the integers, imaginary
//! quadratic orders `Z[sqrt(-d)]` and the maximal orders `I_d`, and the
//! definite quaternion orders (Lipschitz, Hurwitz, and the maximal orders of
//! the `(-1,-3)` and `(-2,-5)` algebras).
//!
//! Elements are stored over the ambient algebra basis (`{1, w}` with
//! `w^2 = -d`, or `{1, i, j, k}`); integrality means integer coordinates over
//! the order basis and is checked by exact coordinatization.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, Zero};

use crate::rat::{floor_sqrt, format_rat, rat, ratio, round_half_up, Rat};
use crate::units::{abelianize_finite_group, FiniteAbelianization};
use crate::{Error, Result};

/// Tag identifying an arithmetic context. `Clifford` delegates to the
/// `clifford` module; the other tags are handled here.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ContextKind {
    Clifford { n: u32 },
    Integers,
    /// `Z[sqrt(-d)]` when `maximal` is false; the ring of integers `I_d`
    /// when true (half-integral basis for `d = 3 mod 4`).
    Quadratic { d: u32, maximal: bool },
    Lipschitz,
    Hurwitz,
    OrderO3,
    OrderO5,
}

impl ContextKind {
    pub fn is_quaternion(self) -> bool {
        matches!(
            self,
            ContextKind::Lipschitz | ContextKind::Hurwitz | ContextKind::OrderO3 | ContextKind::OrderO5
        )
    }

    pub fn is_quadratic(self) -> bool {
        matches!(self, ContextKind::Quadratic { .. })
    }

    /// Dimension of the ambient Q-algebra (1, 2, or 4); Clifford contexts
    /// are not handled by this module.
    pub fn ambient_dim(self) -> Result<usize> {
        match self {
            ContextKind::Integers => Ok(1),
            ContextKind::Quadratic { .. } => Ok(2),
            k if k.is_quaternion() => Ok(4),
            k => Err(Error::UnsupportedContext(k.name())),
        }
    }

    /// Quaternion algebra parameters `(u, v)` with `i^2 = u`, `j^2 = v`.
    pub fn quaternion_params(self) -> Option<(i64, i64)> {
        match self {
            ContextKind::Lipschitz | ContextKind::Hurwitz => Some((-1, -1)),
            ContextKind::OrderO3 => Some((-1, -3)),
            ContextKind::OrderO5 => Some((-2, -5)),
            _ => None,
        }
    }

    /// CLI name of the context.
    pub fn name(self) -> String {
        match self {
            ContextKind::Clifford { n } => format!("gamma:{n}"),
            ContextKind::Integers => "Z".into(),
            ContextKind::Quadratic { d, maximal: false } => format!("Zsqrt:-{d}"),
            ContextKind::Quadratic { d, maximal: true } => format!("Imax:-{d}"),
            ContextKind::Lipschitz => "lipschitz".into(),
            ContextKind::Hurwitz => "hurwitz".into(),
            ContextKind::OrderO3 => "O3".into(),
            ContextKind::OrderO5 => "O5".into(),
        }
    }
}

/// Element of a non-Clifford context, stored as ambient coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElement {
    kind: ContextKind,
    co: Vec<Rat>,
}

impl RingElement {
    pub fn zero(kind: ContextKind) -> Self {
        let dim = kind.ambient_dim().expect("ring context");
        RingElement { kind, co: vec![Rat::zero(); dim] }
    }

    pub fn one(kind: ContextKind) -> Self {
        let mut e = Self::zero(kind);
        e.co[0] = Rat::one();
        e
    }

    pub fn from_ambient(kind: ContextKind, co: Vec<Rat>) -> Result<Self> {
        if co.len() != kind.ambient_dim()? {
            return Err(Error::ContextMismatch(kind.name(), format!("{} coords", co.len())));
        }
        Ok(RingElement { kind, co })
    }

    pub fn scalar(kind: ContextKind, c: Rat) -> Self {
        let mut e = Self::zero(kind);
        e.co[0] = c;
        e
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    pub fn ambient_coords(&self) -> &[Rat] {
        &self.co
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::ContextMismatch(self.kind.name(), other.kind.name()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(RingElement {
            kind: self.kind,
            co: self.co.iter().zip(&other.co).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(RingElement {
            kind: self.kind,
            co: self.co.iter().zip(&other.co).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        RingElement { kind: self.kind, co: self.co.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RingElement { kind: self.kind, co: self.co.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let co = match self.kind {
            ContextKind::Integers => vec![&self.co[0] * &other.co[0]],
            ContextKind::Quadratic { d, .. } => {
                // (a1 + a2 w)(b1 + b2 w) with w^2 = -d
                let (a1, a2) = (&self.co[0], &self.co[1]);
                let (b1, b2) = (&other.co[0], &other.co[1]);
                vec![a1 * b1 - rat(d as i64) * a2 * b2, a1 * b2 + a2 * b1]
            }
            k => {
                let (u, v) = k.quaternion_params().expect("quaternion context");
                let (u, v) = (rat(u), rat(v));
                let (a1, a2, a3, a4) = (&self.co[0], &self.co[1], &self.co[2], &self.co[3]);
                let (b1, b2, b3, b4) = (&other.co[0], &other.co[1], &other.co[2], &other.co[3]);
                vec![
                    a1 * b1 + &u * a2 * b2 + &v * a3 * b3 - &u * &v * a4 * b4,
                    a1 * b2 + a2 * b1 - &v * a3 * b4 + &v * a4 * b3,
                    a1 * b3 + a3 * b1 + &u * a2 * b4 - &u * a4 * b2,
                    a1 * b4 + a4 * b1 + a2 * b3 - a3 * b2,
                ]
            }
        };
        Ok(RingElement { kind: self.kind, co })
    }

    /// Standard conjugation: identity on scalars, negation of the
    /// imaginary part.
    pub fn conj(&self) -> Self {
        let mut co = self.co.clone();
        for c in co.iter_mut().skip(1) {
            *c = -&*c;
        }
        RingElement { kind: self.kind, co }
    }

    /// `x conj(x)`, a nonnegative rational.
    pub fn norm_sq(&self) -> Rat {
        match self.kind {
            ContextKind::Integers => &self.co[0] * &self.co[0],
            ContextKind::Quadratic { d, .. } => {
                &self.co[0] * &self.co[0] + rat(d as i64) * &self.co[1] * &self.co[1]
            }
            k => {
                let (u, v) = k.quaternion_params().expect("quaternion context");
                let w = [rat(1), rat(-u), rat(-v), rat(u * v)];
                self.co.iter().zip(w).map(|(c, wt)| c * c * wt).sum()
            }
        }
    }

    /// Real part (the coefficient of 1).
    pub fn re(&self) -> Rat {
        self.co[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.co.iter().all(|c| c.is_zero())
    }

    pub fn as_scalar(&self) -> Option<Rat> {
        self.co[1..].iter().all(|c| c.is_zero()).then(|| self.co[0].clone())
    }

    pub fn invert(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.conj().scale(&n.recip()))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols: &[&str] = match self.kind {
            ContextKind::Integers => &[""],
            ContextKind::Quadratic { .. } => &["", "w"],
            _ => &["", "i", "j", "k"],
        };
        let mut wrote = false;
        for (c, sym) in self.co.iter().zip(symbols) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if !wrote {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if sym.is_empty() {
                write!(f, "{}", format_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{}*{sym}", format_rat(&mag))?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.name(), self)
    }
}

/// Classification of a quadratic order with respect to `GL_2 = GE_2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ge2Classification {
    Ge2Ring,
    NotGe2Ring,
}

/// A fully-built arithmetic context: order basis, coordinatization data,
/// coset offsets for nearest-point rounding, and the exact Gram matrix.
pub struct RingContext {
    pub kind: ContextKind,
    pub basis: Vec<RingElement>,
    /// Inverse of the basis matrix: ambient coords -> order coords.
    inv: Vec<Vec<Rat>>,
    /// Coset offsets of the order modulo the standard integral lattice
    /// (ambient coordinates); used for exact nearest-point computation.
    cosets: Vec<Vec<Rat>>,
    /// Diagonal weights of the ambient norm form.
    weights: Vec<Rat>,
}

impl RingContext {
    pub fn new(kind: ContextKind) -> Result<RingContext> {
        let dim = kind.ambient_dim()?;
        let basis_coords: Vec<Vec<Rat>> = match kind {
            ContextKind::Integers => vec![vec![rat(1)]],
            ContextKind::Quadratic { d, maximal } => {
                if d == 0 {
                    return Err(Error::UnsupportedContext(kind.name()));
                }
                if maximal && d % 4 == 3 {
                    // {1, (1 + sqrt(-d))/2}
                    vec![vec![rat(1), rat(0)], vec![ratio(1, 2), ratio(1, 2)]]
                } else {
                    vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]
                }
            }
            ContextKind::Lipschitz => vec![
                vec![rat(1), rat(0), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0), rat(0)],
                vec![rat(0), rat(0), rat(1), rat(0)],
                vec![rat(0), rat(0), rat(0), rat(1)],
            ],
            ContextKind::Hurwitz => vec![
                vec![rat(1), rat(0), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0), rat(0)],
                vec![rat(0), rat(0), rat(1), rat(0)],
                vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)],
            ],
            ContextKind::OrderO3 => vec![
                vec![rat(1), rat(0), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0), rat(0)],
                vec![ratio(1, 2), rat(0), ratio(1, 2), rat(0)],
                vec![rat(0), ratio(1, 2), rat(0), ratio(1, 2)],
            ],
            ContextKind::OrderO5 => vec![
                vec![rat(1), rat(0), rat(0), rat(0)],
                vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), rat(0)],
                vec![ratio(1, 2), ratio(1, 4), rat(0), ratio(-1, 4)],
                vec![ratio(1, 2), ratio(3, 4), rat(0), ratio(1, 4)],
            ],
            ContextKind::Clifford { .. } => unreachable!("ambient_dim rejected clifford"),
        };
        let basis: Vec<RingElement> = basis_coords
            .iter()
            .map(|co| RingElement::from_ambient(kind, co.clone()).expect("basis coords"))
            .collect();
        // Coordinatization solves x = sum c_i basis_i, i.e. x = B^T c with
        // B the row matrix above, so invert the transpose.
        let transposed: Vec<Vec<Rat>> = (0..dim)
            .map(|j| (0..dim).map(|i| basis_coords[i][j].clone()).collect())
            .collect();
        let inv = invert_matrix(&transposed)?;
        let weights = match kind {
            ContextKind::Integers => vec![rat(1)],
            ContextKind::Quadratic { d, .. } => vec![rat(1), rat(d as i64)],
            k => {
                let (u, v) = k.quaternion_params().expect("quaternion");
                vec![rat(1), rat(-u), rat(-v), rat(u * v)]
            }
        };

        // Coset offsets of the order modulo Z^dim: fractional parts of all
        // small integer combinations of the basis (denominators divide 4).
        let mut cosets: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let mut stack = vec![vec![Rat::zero(); dim]];
        cosets.insert(stack[0].clone());
        while let Some(v) = stack.pop() {
            for b in &basis_coords {
                let w: Vec<Rat> = v.iter().zip(b).map(|(x, y)| frac(&(x + y))).collect();
                if cosets.insert(w.clone()) {
                    stack.push(w);
                }
            }
        }
        let cosets: Vec<Vec<Rat>> = cosets.into_iter().collect();

        Ok(RingContext { kind, basis, inv, cosets, weights })
    }

    /// Coordinates of an element over the order basis.
    pub fn order_coords(&self, x: &RingElement) -> Vec<Rat> {
        assert_eq!(x.kind, self.kind);
        mat_vec(&self.inv, &x.co)
    }

    pub fn from_order_coords(&self, co: &[Rat]) -> RingElement {
        let mut out = RingElement::zero(self.kind);
        for (c, b) in co.iter().zip(&self.basis) {
            out = out.add(&b.scale(c)).expect("same context");
        }
        out
    }

    pub fn is_integral(&self, x: &RingElement) -> bool {
        self.order_coords(x).iter().all(|c| c.is_integer())
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.is_integral(x) && x.norm_sq().is_one()
    }

    /// Exact nearest point of the order lattice to an arbitrary ambient
    /// element, minimizing the ambient norm. The ambient form is diagonal,
    /// so per coset the minimizer is found componentwise; ties resolve to
    /// the first candidate in deterministic coset order.
    pub fn nearest(&self, x: &RingElement) -> RingElement {
        assert_eq!(x.kind, self.kind);
        let mut best: Option<(Rat, Vec<Rat>)> = None;
        for offset in &self.cosets {
            let cand: Vec<Rat> = x
                .co
                .iter()
                .zip(offset)
                .map(|(c, o)| Rat::from_integer(round_half_up(&(c - o))) + o)
                .collect();
            let dist: Rat = cand
                .iter()
                .zip(&x.co)
                .zip(&self.weights)
                .map(|((q, c), w)| {
                    let d = q - c;
                    &d * &d * w
                })
                .sum();
            if best.as_ref().map(|(b, _)| dist < *b).unwrap_or(true) {
                best = Some((dist, cand));
            }
        }
        RingElement { kind: self.kind, co: best.expect("at least one coset").1 }
    }

    /// Gram matrix of the order basis under the ambient norm form.
    pub fn gram(&self) -> Vec<Vec<Rat>> {
        let d = self.basis.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        self.basis[i]
                            .co
                            .iter()
                            .zip(&self.basis[j].co)
                            .zip(&self.weights)
                            .map(|((a, b), w)| a * b * w)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// All integral elements `x` with `0 < norm_sq(x) <= bound`, enumerated
    /// over an exact rectangular coordinate box (per-coordinate bounds from
    /// the diagonal of the inverse Gram matrix), in deterministic order.
    pub fn short_vectors(&self, bound: &Rat) -> Result<Vec<RingElement>> {
        if !bound.is_positive() {
            return Err(Error::BoundNotPositive);
        }
        let gram = self.gram();
        let ginv = invert_matrix(&gram)?;
        let d = self.basis.len();
        let caps: Vec<i64> = (0..d)
            .map(|i| {
                let m = floor_sqrt(&(bound * &ginv[i][i]));
                num::ToPrimitive::to_i64(&m).expect("small box bound")
            })
            .collect();

        let mut out = Vec::new();
        let mut co: Vec<i64> = caps.iter().map(|&c| -c).collect();
        loop {
            if co.iter().any(|&c| c != 0) {
                let coords: Vec<Rat> = co.iter().map(|&c| rat(c)).collect();
                let x = self.from_order_coords(&coords);
                let n = x.norm_sq();
                if n.is_positive() && n <= *bound {
                    out.push(x);
                }
            }
            // odometer over [-cap_i, cap_i]
            let mut i = 0;
            loop {
                if i == d {
                    return Ok(out);
                }
                if co[i] < caps[i] {
                    co[i] += 1;
                    break;
                }
                co[i] = -caps[i];
                i += 1;
            }
        }
    }

    /// The unit group (norm-1 integral elements).
    pub fn unit_group(&self) -> Result<Vec<RingElement>> {
        self.short_vectors(&rat(1))
    }

    /// Abelianization data of the unit group.
    pub fn unit_abelianization(&self) -> Result<FiniteAbelianization<RingElement>> {
        let units = self.unit_group()?;
        Ok(abelianize_finite_group(&units, |a, b| a.mul(b).expect("same context")))
    }

    /// No integral element has norm strictly between 1 and 2, i.e. no
    /// `norm_sq` in the open interval (1, 4).
    pub fn discretely_normed(&self) -> Result<bool> {
        let four = rat(4);
        Ok(self
            .short_vectors(&four)?
            .iter()
            .all(|x| {
                let n = x.norm_sq();
                n <= Rat::one() || n >= four
            }))
    }

    /// Table-driven classification of quadratic orders: the seven rings
    /// with `GL_2 = GE_2` are `Z`, `Z[sqrt(-3)]`, and `I_d` for
    /// `d = 1, 2, 3, 7, 11`.
    pub fn ge2_classification(&self) -> Result<Ge2Classification> {
        match self.kind {
            ContextKind::Integers => Ok(Ge2Classification::Ge2Ring),
            ContextKind::Quadratic { d, maximal } => {
                // for d = 1, 2 mod 4 the ring Z[sqrt(-d)] is the maximal order
                let is_max = maximal || d % 4 != 3;
                let ge2 = if is_max {
                    matches!(d, 1 | 2 | 3 | 7 | 11)
                } else {
                    d == 3
                };
                Ok(if ge2 { Ge2Classification::Ge2Ring } else { Ge2Classification::NotGe2Ring })
            }
            k => Err(Error::UnsupportedContext(k.name())),
        }
    }
}

fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Exact inverse via Gauss-Jordan elimination.
fn invert_matrix(m: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::NotInvertible)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for cix in 0..2 * n {
                    let t = &a[col][cix] * &f;
                    a[r][cix] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis images of the additive map `O5 -> O2` from the appendix of the
/// underlying construction: Z-linear on the order basis, `1 -> 1`.
pub fn u_hom_f(x: &RingElement, o5: &RingContext, o2: &RingContext) -> Result<RingElement> {
    if x.kind() != ContextKind::OrderO5 {
        return Err(Error::ContextMismatch(x.kind().name(), ContextKind::OrderO5.name()));
    }
    let co = o5.order_coords(x);
    if !co.iter().all(|c| c.is_integer()) {
        return Err(Error::NonIntegral);
    }
    let images = [
        RingElement::from_ambient(ContextKind::Hurwitz, vec![rat(1), rat(0), rat(0), rat(0)])?,
        RingElement::from_ambient(
            ContextKind::Hurwitz,
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)],
        )?,
        RingElement::from_ambient(
            ContextKind::Hurwitz,
            vec![ratio(1, 2), ratio(1, 2), ratio(-1, 2), ratio(1, 2)],
        )?,
        RingElement::from_ambient(
            ContextKind::Hurwitz,
            vec![ratio(1, 2), ratio(-1, 2), ratio(1, 2), ratio(1, 2)],
        )?,
    ];
    debug_assert!(images.iter().all(|im| o2.is_integral(im)));
    let mut out = RingElement::zero(ContextKind::Hurwitz);
    for (c, im) in co.iter().zip(&images) {
        out = out.add(&im.scale(c))?;
    }
    Ok(out)
}

/// The additive map `Z[sqrt(-3)] -> I_11`, `a + b sqrt(-3) -> a + b (1 + sqrt(-11))/2`.
pub fn phi_quadratic(x: &RingElement) -> Result<RingElement> {
    let src = ContextKind::Quadratic { d: 3, maximal: false };
    if x.kind() != src {
        return Err(Error::ContextMismatch(x.kind().name(), src.name()));
    }
    let (a, b) = (&x.co[0], &x.co[1]);
    RingElement::from_ambient(
        ContextKind::Quadratic { d: 11, maximal: true },
        vec![a + b * ratio(1, 2), b * ratio(1, 2)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(kind: ContextKind) -> RingContext {
        RingContext::new(kind).unwrap()
    }

    fn quat(kind: ContextKind, c: [i64; 4]) -> RingElement {
        RingElement::from_ambient(kind, c.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn lipschitz_multiplication() {
        let k = ContextKind::Lipschitz;
        let i = quat(k, [0, 1, 0, 0]);
        let j = quat(k, [0, 0, 1, 0]);
        let kq = quat(k, [0, 0, 0, 1]);
        assert_eq!(i.mul(&j).unwrap(), kq);
        assert_eq!(j.mul(&i).unwrap(), kq.neg());
        assert_eq!(quat(k, [1, 1, 1, 1]).norm_sq(), rat(4));
    }

    #[test]
    fn o5_basis_element_norm() {
        let o5 = ctx(ContextKind::OrderO5);
        // (1+i+j)/2 has norm 2 with (u,v) = (-2,-5)
        let om = &o5.basis[1];
        assert_eq!(om.norm_sq(), rat(2));
        // omega_5 = (2+i-k)/4 is a unit
        assert_eq!(o5.basis[2].norm_sq(), rat(1));
    }

    #[test]
    fn quadratic_maximal_unit() {
        let i3 = ctx(ContextKind::Quadratic { d: 3, maximal: true });
        // (1 + sqrt(-3))/2 is a unit of I_3
        assert_eq!(i3.basis[1].norm_sq(), rat(1));
        assert!(i3.is_unit(&i3.basis[1]));
    }

    #[test]
    fn basis_multiplicative_closure_all_contexts() {
        for kind in [
            ContextKind::Integers,
            ContextKind::Quadratic { d: 1, maximal: false },
            ContextKind::Quadratic { d: 3, maximal: false },
            ContextKind::Quadratic { d: 3, maximal: true },
            ContextKind::Quadratic { d: 11, maximal: true },
            ContextKind::Lipschitz,
            ContextKind::Hurwitz,
            ContextKind::OrderO3,
            ContextKind::OrderO5,
        ] {
            let c = ctx(kind);
            for x in &c.basis {
                for y in &c.basis {
                    let p = x.mul(y).unwrap();
                    assert!(c.is_integral(&p), "{kind:?}: basis product not integral");
                }
            }
        }
    }

    #[test]
    fn short_vector_counts() {
        assert_eq!(ctx(ContextKind::Integers).short_vectors(&rat(1)).unwrap().len(), 2);
        // Z[i], bound 2: {±1, ±i, ±1±i}
        let zi = ctx(ContextKind::Quadratic { d: 1, maximal: false });
        assert_eq!(zi.short_vectors(&rat(2)).unwrap().len(), 8);
        // Hurwitz unit group has 24 elements
        assert_eq!(ctx(ContextKind::Hurwitz).unit_group().unwrap().len(), 24);
        // Lipschitz: Q8
        assert_eq!(ctx(ContextKind::Lipschitz).unit_group().unwrap().len(), 8);
        // O5 unit count (computed, not hard-coded elsewhere)
        assert_eq!(ctx(ContextKind::OrderO5).unit_group().unwrap().len(), 6);
    }

    #[test]
    fn discretely_normed_examples() {
        assert!(ctx(ContextKind::Quadratic { d: 5, maximal: false }).discretely_normed().unwrap());
        assert!(!ctx(ContextKind::Quadratic { d: 1, maximal: false }).discretely_normed().unwrap());
        assert!(!ctx(ContextKind::OrderO5).discretely_normed().unwrap());
        assert!(!ctx(ContextKind::Hurwitz).discretely_normed().unwrap());
    }

    #[test]
    fn ge2_table() {
        let g = |d, m| {
            ctx(ContextKind::Quadratic { d, maximal: m }).ge2_classification().unwrap()
        };
        assert_eq!(g(11, true), Ge2Classification::Ge2Ring);
        assert_eq!(g(3, false), Ge2Classification::Ge2Ring);
        assert_eq!(g(5, true), Ge2Classification::NotGe2Ring);
        assert_eq!(g(7, false), Ge2Classification::NotGe2Ring);
        assert_eq!(ctx(ContextKind::Integers).ge2_classification().unwrap(), Ge2Classification::Ge2Ring);
        assert!(ctx(ContextKind::Hurwitz).ge2_classification().is_err());
    }

    #[test]
    fn u_hom_basis_images() {
        let o5 = ctx(ContextKind::OrderO5);
        let o2 = ctx(ContextKind::Hurwitz);
        let one5 = RingElement::one(ContextKind::OrderO5);
        assert_eq!(u_hom_f(&one5, &o5, &o2).unwrap(), RingElement::one(ContextKind::Hurwitz));
        // (1+i+j)/2 -> (1+i+j+k)/2
        let om = o5.basis[1].clone();
        let expect = RingElement::from_ambient(
            ContextKind::Hurwitz,
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        assert_eq!(u_hom_f(&om, &o5, &o2).unwrap(), expect);
        // i = b3 + b4 - b1 maps to k
        let i5 = quat(ContextKind::OrderO5, [0, 1, 0, 0]);
        assert_eq!(u_hom_f(&i5, &o5, &o2).unwrap(), quat(ContextKind::Hurwitz, [0, 0, 0, 1]));
        // non-integral input rejected
        let half = RingElement::from_ambient(
            ContextKind::OrderO5,
            vec![ratio(1, 3), rat(0), rat(0), rat(0)],
        )
        .unwrap();
        assert_eq!(u_hom_f(&half, &o5, &o2), Err(Error::NonIntegral));
    }

    #[test]
    fn phi_map_values() {
        let z3 = ContextKind::Quadratic { d: 3, maximal: false };
        let one = RingElement::one(z3);
        assert_eq!(
            phi_quadratic(&one).unwrap(),
            RingElement::one(ContextKind::Quadratic { d: 11, maximal: true })
        );
        let s = RingElement::from_ambient(z3, vec![rat(0), rat(1)]).unwrap();
        let img = phi_quadratic(&s).unwrap();
        assert_eq!(img.ambient_coords(), &[ratio(1, 2), ratio(1, 2)]);
        // 2 - 3 sqrt(-3) -> (1 - 3 sqrt(-11))/2
        let x = RingElement::from_ambient(z3, vec![rat(2), rat(-3)]).unwrap();
        let img = phi_quadratic(&x).unwrap();
        assert_eq!(img.ambient_coords(), &[ratio(1, 2), ratio(-3, 2)]);
    }

    #[test]
    fn nearest_point_in_hurwitz() {
        let o2 = ctx(ContextKind::Hurwitz);
        // the deep hole of Z^4 is a lattice point of the Hurwitz order
        let deep = RingElement::from_ambient(
            ContextKind::Hurwitz,
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let q = o2.nearest(&deep);
        assert_eq!(q, deep);
        // a Lipschitz point rounds to itself
        let x = quat(ContextKind::Hurwitz, [3, -2, 0, 5]);
        assert_eq!(o2.nearest(&x), x);
    }

    #[test]
    fn norm_multiplicativity_spot() {
        let k = ContextKind::OrderO3;
        let a = quat(k, [1, -2, 1, 0]);
        let b = quat(k, [0, 1, 1, 2]);
        assert_eq!(a.mul(&b).unwrap().norm_sq(), a.norm_sq() * b.norm_sq());
    }
}
