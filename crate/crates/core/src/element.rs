//! A single element type spanning both arithmetic worlds: Clifford algebra
//! elements for the `gamma:n` contexts and order elements otherwise.

use std::fmt;

use num::One;

use crate::clifford::CliffordElement;
use crate::rat::Rat;
use crate::rings::{ContextKind, RingContext, RingElement};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Cliff(CliffordElement),
    Ring(RingElement),
}

impl Element {
    pub fn kind(&self) -> ContextKind {
        match self {
            Element::Cliff(c) => ContextKind::Clifford { n: c.dimension() },
            Element::Ring(r) => r.kind(),
        }
    }

    pub fn zero(kind: ContextKind) -> Self {
        match kind {
            ContextKind::Clifford { n } => Element::Cliff(CliffordElement::zero(n)),
            k => Element::Ring(RingElement::zero(k)),
        }
    }

    pub fn one(kind: ContextKind) -> Self {
        match kind {
            ContextKind::Clifford { n } => Element::Cliff(CliffordElement::one(n)),
            k => Element::Ring(RingElement::one(k)),
        }
    }

    pub fn scalar(kind: ContextKind, c: Rat) -> Self {
        match kind {
            ContextKind::Clifford { n } => Element::Cliff(CliffordElement::scalar(n, c)),
            k => Element::Ring(RingElement::scalar(k, c)),
        }
    }

    fn pair<'a>(&'a self, other: &'a Self) -> Result<(&'a Self, &'a Self)> {
        if self.kind() != other.kind() {
            return Err(Error::ContextMismatch(self.kind().name(), other.kind().name()));
        }
        Ok((self, other))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match self.pair(other)? {
            (Element::Cliff(a), Element::Cliff(b)) => Ok(Element::Cliff(a.add(b)?)),
            (Element::Ring(a), Element::Ring(b)) => Ok(Element::Ring(a.add(b)?)),
            _ => unreachable!("pair checked kinds"),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        match self.pair(other)? {
            (Element::Cliff(a), Element::Cliff(b)) => Ok(Element::Cliff(a.sub(b)?)),
            (Element::Ring(a), Element::Ring(b)) => Ok(Element::Ring(a.sub(b)?)),
            _ => unreachable!("pair checked kinds"),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match self.pair(other)? {
            (Element::Cliff(a), Element::Cliff(b)) => Ok(Element::Cliff(a.mul(b)?)),
            (Element::Ring(a), Element::Ring(b)) => Ok(Element::Ring(a.mul(b)?)),
            _ => unreachable!("pair checked kinds"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Element::Cliff(a) => Element::Cliff(a.neg()),
            Element::Ring(a) => Element::Ring(a.neg()),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        match self {
            Element::Cliff(a) => Element::Cliff(a.scale(c)),
            Element::Ring(a) => Element::Ring(a.scale(c)),
        }
    }

    /// Conjugation (`conj` on Clifford elements, standard conjugation on
    /// order elements).
    pub fn conj(&self) -> Self {
        match self {
            Element::Cliff(a) => Element::Cliff(a.conjugation()),
            Element::Ring(a) => Element::Ring(a.conj()),
        }
    }

    /// Reversion `a*`. On quadratic and rational contexts this is the
    /// identity and on quaternion contexts it coincides with conjugation,
    /// matching the restriction of the Clifford reversion under the usual
    /// identifications.
    pub fn rev(&self) -> Self {
        match self {
            Element::Cliff(a) => Element::Cliff(a.reversion()),
            Element::Ring(a) => {
                if a.kind().is_quaternion() {
                    Element::Ring(a.conj())
                } else {
                    Element::Ring(a.clone())
                }
            }
        }
    }

    pub fn norm_sq(&self) -> Rat {
        match self {
            Element::Cliff(a) => a.norm_sq(),
            Element::Ring(a) => a.norm_sq(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Cliff(a) => a.is_zero(),
            Element::Ring(a) => a.is_zero(),
        }
    }

    pub fn as_scalar(&self) -> Option<Rat> {
        match self {
            Element::Cliff(a) => a.as_scalar(),
            Element::Ring(a) => a.as_scalar(),
        }
    }

    pub fn invert(&self) -> Result<Self> {
        match self {
            Element::Cliff(a) => Ok(Element::Cliff(a.invert()?)),
            Element::Ring(a) => Ok(Element::Ring(a.invert()?)),
        }
    }

    /// Integrality in the context: integer blade coefficients for Clifford
    /// contexts, integer order coordinates otherwise.
    pub fn is_integral(&self, ctx: &Context) -> bool {
        match self {
            Element::Cliff(a) => a.is_integral(),
            Element::Ring(a) => ctx.ring().map(|c| c.is_integral(a)).unwrap_or(false),
        }
    }

    pub fn is_unit(&self, ctx: &Context) -> bool {
        self.is_integral(ctx) && self.norm_sq().is_one() && {
            match self {
                // units of Gamma_n(Z) are the signed blades; norm 1 plus
                // integrality plus invertibility is exactly that
                Element::Cliff(a) => a.invert().is_ok(),
                Element::Ring(_) => true,
            }
        }
    }

    pub fn cliff(&self) -> Result<&CliffordElement> {
        match self {
            Element::Cliff(a) => Ok(a),
            Element::Ring(r) => Err(Error::UnsupportedContext(r.kind().name())),
        }
    }

    pub fn ring(&self) -> Result<&RingElement> {
        match self {
            Element::Ring(a) => Ok(a),
            Element::Cliff(c) => {
                Err(Error::UnsupportedContext(ContextKind::Clifford { n: c.dimension() }.name()))
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Cliff(a) => a.fmt(f),
            Element::Ring(a) => a.fmt(f),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind().name(), self)
    }
}

/// A context handle: the tag plus, for non-Clifford contexts, the built
/// order data (basis, coordinatization, rounding cosets).
pub struct Context {
    kind: ContextKind,
    ring: Option<RingContext>,
}

impl Context {
    pub fn new(kind: ContextKind) -> Result<Context> {
        let ring = match kind {
            ContextKind::Clifford { n } => {
                if n < 1 || n > crate::clifford::MAX_DIM {
                    return Err(Error::DimensionOutOfRange(n, 1, crate::clifford::MAX_DIM));
                }
                None
            }
            k => Some(RingContext::new(k)?),
        };
        Ok(Context { kind, ring })
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    pub fn ring(&self) -> Result<&RingContext> {
        self.ring.as_ref().ok_or_else(|| Error::UnsupportedContext(self.kind.name()))
    }

    /// The set `B` of unit basis elements used to index the relation
    /// families: `{±1, ±i_h}` for Clifford contexts, the full unit group
    /// for order contexts.
    pub fn unit_basis(&self) -> Result<Vec<Element>> {
        match self.kind {
            ContextKind::Clifford { n } => {
                let mut out = vec![
                    Element::Cliff(CliffordElement::one(n)),
                    Element::Cliff(CliffordElement::one(n).neg()),
                ];
                for h in 1..n {
                    let g = CliffordElement::generator(n, h)?;
                    out.push(Element::Cliff(g.neg()));
                    out.push(Element::Cliff(g));
                }
                Ok(out)
            }
            _ => Ok(self.ring()?.unit_group()?.into_iter().map(Element::Ring).collect()),
        }
    }
}
