//! Words in the elementary generators `E(x)`, `D(mu)`, `[mu, nu]`: matrix
//! evaluation, the diagonal-group factorization, the constructive Euclidean
//! decomposition, and matrix-level verification of the relation families.

use std::fmt;

use num::{Signed, Zero};
use rand::Rng;

use crate::element::{Context, Element};
use crate::matrix::Mat2;
use crate::rat::{rat, Rat};
use crate::rings::ContextKind;
use crate::units::enumerate_units;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokenKind {
    /// `E(x)`
    Elem(Element),
    /// `[mu, nu]`
    Diag(Element, Element),
    /// `D(mu) = [mu, mu^-1]`
    DiagD(Element),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenToken {
    pub kind: TokenKind,
    pub inverse: bool,
}

impl GenToken {
    pub fn elem(x: Element) -> GenToken {
        GenToken { kind: TokenKind::Elem(x), inverse: false }
    }

    pub fn elem_inv(x: Element) -> GenToken {
        GenToken { kind: TokenKind::Elem(x), inverse: true }
    }

    pub fn diag(mu: Element, nu: Element) -> GenToken {
        GenToken { kind: TokenKind::Diag(mu, nu), inverse: false }
    }

    pub fn diag_d(mu: Element) -> GenToken {
        GenToken { kind: TokenKind::DiagD(mu), inverse: false }
    }

    pub fn inverted(&self) -> GenToken {
        GenToken { kind: self.kind.clone(), inverse: !self.inverse }
    }

    /// Check admissibility in the context: `E(x)` needs an integral vector
    /// (Clifford) or integral order element; diagonal tokens need units, and
    /// in Clifford contexts `[mu, nu]` additionally needs `mu nu*` to be a
    /// nonzero rational scalar.
    pub fn validate(&self, ctx: &Context) -> Result<()> {
        let clifford = matches!(ctx.kind(), ContextKind::Clifford { .. });
        match &self.kind {
            TokenKind::Elem(x) => {
                if !x.is_integral(ctx) || (clifford && !x.cliff()?.is_vector()) {
                    return Err(Error::NotAVector);
                }
            }
            TokenKind::Diag(mu, nu) => {
                if !mu.is_unit(ctx) || !nu.is_unit(ctx) {
                    return Err(Error::NotAUnit);
                }
                if clifford {
                    match mu.mul(&nu.rev())?.as_scalar() {
                        Some(s) if !s.is_zero() => {}
                        _ => return Err(Error::NotAMember),
                    }
                }
            }
            TokenKind::DiagD(mu) => {
                if !mu.is_unit(ctx) {
                    return Err(Error::NotAUnit);
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self, ctx: &Context) -> Result<Mat2> {
        self.validate(ctx)?;
        let m = match &self.kind {
            TokenKind::Elem(x) => Mat2::elementary(x),
            TokenKind::Diag(mu, nu) => Mat2::diagonal(mu, nu)?,
            TokenKind::DiagD(mu) => Mat2::diagonal(mu, &mu.invert()?)?,
        };
        if self.inverse {
            m.inverse()
        } else {
            Ok(m)
        }
    }
}

impl fmt::Display for GenToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, self.inverse) {
            (TokenKind::Elem(x), false) => write!(f, "E({x})"),
            (TokenKind::Elem(x), true) => write!(f, "Einv({x})"),
            (TokenKind::Diag(m, n), false) => write!(f, "Diag({m},{n})"),
            (TokenKind::Diag(m, n), true) => write!(f, "Diaginv({m},{n})"),
            (TokenKind::DiagD(m), false) => write!(f, "D({m})"),
            (TokenKind::DiagD(m), true) => write!(f, "Dinv({m})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenWord {
    pub kind: ContextKind,
    pub tokens: Vec<GenToken>,
}

impl GenWord {
    pub fn new(kind: ContextKind, tokens: Vec<GenToken>) -> GenWord {
        GenWord { kind, tokens }
    }

    pub fn empty(kind: ContextKind) -> GenWord {
        GenWord { kind, tokens: Vec::new() }
    }

    /// Left-to-right product of the token matrices.
    pub fn eval(&self, ctx: &Context) -> Result<Mat2> {
        if ctx.kind() != self.kind {
            return Err(Error::ContextMismatch(ctx.kind().name(), self.kind.name()));
        }
        let mut m = Mat2::identity(self.kind);
        for t in &self.tokens {
            m = m.mul(&t.matrix(ctx)?)?;
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Free reduction: cancel adjacent token/inverse pairs. No further
    /// normalization is attempted.
    pub fn free_reduce(&self) -> GenWord {
        let mut out: Vec<GenToken> = Vec::with_capacity(self.tokens.len());
        for t in &self.tokens {
            match out.last() {
                Some(prev) if prev.kind == t.kind && prev.inverse != t.inverse => {
                    out.pop();
                }
                _ => out.push(t.clone()),
            }
        }
        GenWord::new(self.kind, out)
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Factor a unit of `Gamma_n(Z)` (a signed blade) into `D(i_h)` tokens, with
/// a trailing `D(-1)` for the sign. The evaluation is the diagonal matrix
/// `(u, 0; 0, (u*)^-1)`.
pub fn de2_decompose(u: &Element, ctx: &Context) -> Result<GenWord> {
    let ContextKind::Clifford { n } = ctx.kind() else {
        return Err(Error::UnsupportedContext(ctx.kind().name()));
    };
    if !u.is_unit(ctx) {
        return Err(Error::NotAUnit);
    }
    let cu = u.cliff()?;
    let terms: Vec<_> = cu.terms().collect();
    debug_assert_eq!(terms.len(), 1);
    let (blade, coeff) = (*terms[0].0, terms[0].1.clone());

    let mut tokens = Vec::new();
    for h in blade.indices() {
        let ih = Element::Cliff(crate::clifford::CliffordElement::generator(n, h)?);
        tokens.push(GenToken::diag_d(ih));
    }
    if coeff.is_negative() {
        tokens.push(GenToken::diag_d(Element::one(ctx.kind()).neg()));
    }
    let word = GenWord::new(ctx.kind(), tokens);
    debug_assert!({
        let expect = Mat2::diagonal(u, &u.rev().invert()?)?;
        word.eval(ctx)? == expect
    });
    Ok(word)
}

fn supports_decompose(kind: ContextKind) -> bool {
    match kind {
        ContextKind::Clifford { n } => n <= 4,
        ContextKind::Integers => true,
        ContextKind::Quadratic { d, maximal } => {
            let is_max = maximal || d % 4 != 3;
            (is_max && matches!(d, 1 | 2 | 3 | 7 | 11)) || (!is_max && d == 3)
        }
        k => k.is_quaternion(),
    }
}

/// Constructive Euclidean decomposition: returns a generator word whose
/// evaluation is exactly `m`.
///
/// The loop mirrors the usual reduction: when the upper-right entry `b`
/// dominates `a`, right-multiply by `E(0)` to swap; otherwise right-multiply
/// by `E(0)^3 E(-q) E(0)` with `q` the nearest lattice point to `b^-1 a`.
/// The norm of the upper-right entry strictly decreases every step. The
/// accumulated right factor is inverted once at the end.
pub fn decompose(m: &Mat2, ctx: &Context) -> Result<GenWord> {
    let kind = ctx.kind();
    if m.kind() != kind {
        return Err(Error::ContextMismatch(m.kind().name(), kind.name()));
    }
    if !supports_decompose(kind) {
        return Err(Error::UnsupportedContext(kind.name()));
    }
    let clifford = matches!(kind, ContextKind::Clifford { .. });
    let member = if clifford {
        m.slplus_membership(true)?
    } else {
        m.gl2_membership(ctx)?
    };
    if !member {
        return Err(Error::NotAMember);
    }

    let zero = Element::zero(kind);
    let e0 = GenToken::elem(zero.clone());
    let mut live = m.clone();
    let mut pushed: Vec<GenToken> = Vec::new();
    let apply = |live: &mut Mat2, toks: &[GenToken], pushed: &mut Vec<GenToken>| -> Result<()> {
        for t in toks {
            *live = live.mul(&t.matrix(ctx)?)?;
            pushed.push(t.clone());
        }
        Ok(())
    };

    while !live.b().is_zero() {
        let nb = live.b().norm_sq();
        let na = live.a().norm_sq();
        if nb > na {
            apply(&mut live, &[e0.clone()], &mut pushed)?;
        } else {
            let z = live.b().invert()?.mul(live.a())?;
            let q = match &z {
                Element::Cliff(zc) => {
                    if !zc.is_vector() {
                        return Err(Error::NotAMember);
                    }
                    Element::Cliff(zc.round_to_lattice()?)
                }
                Element::Ring(zr) => Element::Ring(ctx.ring()?.nearest(zr)),
            };
            apply(
                &mut live,
                &[e0.clone(), e0.clone(), e0.clone(), GenToken::elem(q.neg()), e0.clone()],
                &mut pushed,
            )?;
        }
        let nb_new = live.b().norm_sq();
        if nb_new >= nb {
            return Err(Error::ReductionStalled(m.to_string()));
        }
    }

    // live = (a 0; c d) = [a, d] E(0)^3 E(d^-1 c)
    let a = live.a().clone();
    let d = live.d().clone();
    let dc = d.invert()?.mul(live.c())?;
    let mut tokens: Vec<GenToken> = Vec::new();
    if clifford {
        // the diagonal part is in DE_2; re-express via D(mu) = E(0)^2 E(mu) E(mu^-1) E(mu)
        let de2 = de2_decompose(&a, ctx)?;
        for t in de2.tokens {
            let TokenKind::DiagD(mu) = t.kind else { unreachable!("de2 emits D tokens") };
            if mu == Element::one(kind).neg() {
                tokens.push(e0.clone());
                tokens.push(e0.clone());
            } else {
                let mu_inv = mu.invert()?;
                tokens.push(e0.clone());
                tokens.push(e0.clone());
                tokens.push(GenToken::elem(mu.clone()));
                tokens.push(GenToken::elem(mu_inv));
                tokens.push(GenToken::elem(mu));
            }
        }
    } else {
        tokens.push(GenToken::diag(a, d));
    }
    tokens.push(e0.clone());
    tokens.push(e0.clone());
    tokens.push(e0.clone());
    tokens.push(GenToken::elem(dc));
    tokens.extend(pushed.iter().rev().map(|t| t.inverted()));

    let word = GenWord::new(kind, tokens).free_reduce();
    debug_assert!(word.eval(ctx)? == *m);
    Ok(word)
}

/// The relation families checked as matrix identities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelationFamily {
    R1,
    R2,
    R3,
    R4,
    R5,
    Alpha,
    Eq29,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 7] = [
        RelationFamily::R1,
        RelationFamily::R2,
        RelationFamily::R3,
        RelationFamily::R4,
        RelationFamily::R5,
        RelationFamily::Alpha,
        RelationFamily::Eq29,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::R1 => "R1",
            RelationFamily::R2 => "R2",
            RelationFamily::R3 => "R3",
            RelationFamily::R4 => "R4",
            RelationFamily::R5 => "R5",
            RelationFamily::Alpha => "alpha",
            RelationFamily::Eq29 => "eq29",
        }
    }

    pub fn parse(s: &str) -> Option<RelationFamily> {
        match s.to_ascii_lowercase().as_str() {
            "r1" => Some(RelationFamily::R1),
            "r2" => Some(RelationFamily::R2),
            "r3" | "r3'" => Some(RelationFamily::R3),
            "r4" => Some(RelationFamily::R4),
            "r5" => Some(RelationFamily::R5),
            "alpha" => Some(RelationFamily::Alpha),
            "eq29" | "2_9" | "2_9'" => Some(RelationFamily::Eq29),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub family: RelationFamily,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub context: ContextKind,
    pub families: Vec<FamilyReport>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.families.iter().all(|f| f.pass())
    }
}

/// Integral elements with small coordinates used to instantiate the
/// x/y-quantified relations: the full `{-1,0,1}` coordinate box when small
/// enough, otherwise a seeded sample from `[-2, 2]` coordinates.
pub fn sample_box(ctx: &Context, budget: usize, rng: &mut impl Rng) -> Result<Vec<Element>> {
    let dim = match ctx.kind() {
        ContextKind::Clifford { n } => n as usize,
        k => k.ambient_dim()?,
    };
    let full: u64 = 3u64.pow(dim as u32);
    let mut out = Vec::new();
    if full as usize <= budget.max(81) {
        let mut co = vec![-1i64; dim];
        loop {
            out.push(element_from_small_coords(ctx, &co)?);
            let mut i = 0;
            loop {
                if i == dim {
                    return Ok(out);
                }
                if co[i] < 1 {
                    co[i] += 1;
                    break;
                }
                co[i] = -1;
                i += 1;
            }
        }
    }
    for _ in 0..budget {
        let co: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        out.push(element_from_small_coords(ctx, &co)?);
    }
    Ok(out)
}

fn element_from_small_coords(ctx: &Context, co: &[i64]) -> Result<Element> {
    match ctx.kind() {
        ContextKind::Clifford { n } => {
            let coords: Vec<Rat> = co.iter().map(|&c| rat(c)).collect();
            Ok(Element::Cliff(crate::clifford::CliffordElement::from_vector_coords(n, &coords)?))
        }
        _ => {
            let coords: Vec<Rat> = co.iter().map(|&c| rat(c)).collect();
            Ok(Element::Ring(ctx.ring()?.from_order_coords(&coords)))
        }
    }
}

/// All integral elements with `norm_sq` in {2, 3}: the arguments of the
/// `(E(conj a) E(a))^m = E(0)^2` relation.
pub fn alpha_elements(ctx: &Context) -> Result<Vec<Element>> {
    match ctx.kind() {
        ContextKind::Clifford { n } => {
            // vectors with coordinates in {-1, 0, 1} summing to 2 or 3 squares
            let mut out = Vec::new();
            let dim = n as usize;
            let mut co = vec![-1i64; dim];
            loop {
                let norm: i64 = co.iter().map(|c| c * c).sum();
                if norm == 2 || norm == 3 {
                    out.push(element_from_small_coords(ctx, &co)?);
                }
                let mut i = 0;
                loop {
                    if i == dim {
                        return Ok(out);
                    }
                    if co[i] < 1 {
                        co[i] += 1;
                        break;
                    }
                    co[i] = -1;
                    i += 1;
                }
            }
        }
        _ => Ok(ctx
            .ring()?
            .short_vectors(&rat(3))?
            .into_iter()
            .filter(|x| {
                let n = x.norm_sq();
                n == rat(2) || n == rat(3)
            })
            .map(Element::Ring)
            .collect()),
    }
}

/// Units paired for the `R3` family: in Clifford contexts all
/// `(mu, nu)` with `mu nu*` a nonzero rational scalar (i.e. `nu = ±(mu*)^-1`),
/// in order contexts all unit pairs.
fn r3_unit_pairs(ctx: &Context) -> Result<Vec<(Element, Element)>> {
    match ctx.kind() {
        ContextKind::Clifford { n } => {
            let (units, _) = enumerate_units(n)?;
            let mut pairs = Vec::new();
            for mu in &units {
                let nu = Element::Cliff(mu.reversion().invert()?);
                let mu = Element::Cliff(mu.clone());
                pairs.push((mu.clone(), nu.neg()));
                pairs.push((mu, nu));
            }
            Ok(pairs)
        }
        _ => {
            let units = ctx.unit_basis()?;
            let mut pairs = Vec::new();
            for mu in &units {
                for nu in &units {
                    pairs.push((mu.clone(), nu.clone()));
                }
            }
            Ok(pairs)
        }
    }
}

/// Check the requested relation families as exhaustive/sampled matrix
/// identities. Failures are reported as data, never as errors.
pub fn verify_relation_families(
    ctx: &Context,
    families: &[RelationFamily],
    budget: usize,
    seed: u64,
) -> Result<RelationReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let kind = ctx.kind();
    let zero = Element::zero(kind);
    let e0 = Mat2::elementary(&zero);
    let neg_one = Mat2::neg_identity(kind);
    let box_elems = sample_box(ctx, budget.min(200), &mut rng)?;
    let units = ctx.unit_basis()?;

    let mut reports = Vec::new();
    for &family in families {
        let mut checked = 0usize;
        let mut counterexample: Option<String> = None;
        let fail = |s: String, ce: &mut Option<String>| {
            if ce.is_none() {
                *ce = Some(s);
            }
        };
        match family {
            RelationFamily::R1 => {
                let pairs: Vec<(usize, usize)> = if box_elems.len() * box_elems.len() <= budget {
                    (0..box_elems.len())
                        .flat_map(|i| (0..box_elems.len()).map(move |j| (i, j)))
                        .collect()
                } else {
                    (0..budget)
                        .map(|_| {
                            (rng.gen_range(0..box_elems.len()), rng.gen_range(0..box_elems.len()))
                        })
                        .collect()
                };
                for (i, j) in pairs {
                    let (x, y) = (&box_elems[i], &box_elems[j]);
                    let lhs = Mat2::elementary(x).mul(&e0)?.mul(&Mat2::elementary(y))?;
                    let rhs = neg_one.mul(&Mat2::elementary(&x.add(y)?))?;
                    checked += 1;
                    if lhs != rhs {
                        fail(format!("R1 fails at x={x}, y={y}"), &mut counterexample);
                    }
                }
            }
            RelationFamily::R2 => {
                for mu in &units {
                    let mi = mu.invert()?;
                    let lhs = Mat2::elementary(mu)
                        .mul(&Mat2::elementary(&mi))?
                        .mul(&Mat2::elementary(mu))?;
                    let rhs = neg_one.mul(&Mat2::diagonal(mu, &mi)?)?;
                    checked += 1;
                    if lhs != rhs {
                        fail(format!("R2 fails at mu={mu}"), &mut counterexample);
                    }
                }
            }
            RelationFamily::R3 => {
                let pairs = r3_unit_pairs(ctx)?;
                for (mu, nu) in &pairs {
                    for x in box_elems.iter().take(budget / pairs.len().max(1) + 1) {
                        let lhs = Mat2::elementary(x).mul(&Mat2::diagonal(mu, nu)?)?;
                        let arg = nu.invert()?.mul(x)?.mul(mu)?;
                        let rhs = Mat2::diagonal(nu, mu)?.mul(&Mat2::elementary(&arg))?;
                        checked += 1;
                        if lhs != rhs {
                            fail(
                                format!("R3 fails at x={x}, mu={mu}, nu={nu}"),
                                &mut counterexample,
                            );
                        }
                    }
                }
            }
            RelationFamily::R4 => {
                let lhs = e0.mul(&e0)?;
                let d = Mat2::diagonal(&Element::one(kind).neg(), &Element::one(kind).neg())?;
                checked += 1;
                if lhs != d {
                    fail("R4 fails: E(0)^2 != D(-1)".into(), &mut counterexample);
                }
            }
            RelationFamily::R5 => {
                for x in &box_elems {
                    let lhs = Mat2::elementary(x).inverse()?;
                    let rhs = e0.mul(&Mat2::elementary(&x.neg()))?.mul(&e0)?;
                    checked += 1;
                    if lhs != rhs {
                        fail(format!("R5 fails at x={x}"), &mut counterexample);
                    }
                }
            }
            RelationFamily::Alpha => {
                for a in alpha_elements(ctx)? {
                    let m = a.norm_sq().to_integer();
                    let m: i64 = num::ToPrimitive::to_i64(&m).expect("norm 2 or 3");
                    let w = Mat2::elementary(&a.conj()).mul(&Mat2::elementary(&a))?;
                    let lhs = w.pow(m)?;
                    checked += 1;
                    if lhs != neg_one {
                        fail(
                            format!("alpha fails at a={a} (norm_sq {m})"),
                            &mut counterexample,
                        );
                    }
                }
            }
            RelationFamily::Eq29 => {
                for _ in 0..budget.min(50) {
                    let x = &box_elems[rng.gen_range(0..box_elems.len())];
                    let y = &box_elems[rng.gen_range(0..box_elems.len())];
                    for alpha in &units {
                        let ai = alpha.invert()?;
                        let lhs = Mat2::elementary(x)
                            .mul(&Mat2::elementary(alpha))?
                            .mul(&Mat2::elementary(y))?;
                        let rhs = Mat2::elementary(&x.sub(&ai)?)
                            .mul(&Mat2::diagonal(alpha, &ai)?)?
                            .mul(&Mat2::elementary(&y.sub(&ai)?))?;
                        checked += 1;
                        if lhs != rhs {
                            fail(
                                format!("eq29 fails at x={x}, y={y}, alpha={alpha}"),
                                &mut counterexample,
                            );
                        }
                    }
                }
            }
        }
        reports.push(FamilyReport { family, checked, counterexample });
    }
    Ok(RelationReport { context: kind, families: reports })
}

/// Outcome of the appendix counterexample: the norm-2 relation holds in the
/// maximal order of the `(-2,-5)` algebra, while its image under the
/// `U`-homomorphism into the Hurwitz order does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct O5CounterexampleReport {
    pub relation_holds_in_o5: bool,
    pub image_holds_in_o2: bool,
    pub image_witness: String,
}

pub fn o5_counterexample() -> Result<O5CounterexampleReport> {
    let o5 = Context::new(ContextKind::OrderO5)?;
    let o2 = Context::new(ContextKind::Hurwitz)?;

    let omega = Element::Ring(o5.ring()?.basis[1].clone());
    let omega_bar = omega.conj();
    debug_assert_eq!(omega.norm_sq(), rat(2));

    let rel = Mat2::elementary(&omega_bar).mul(&Mat2::elementary(&omega))?.pow(2)?;
    let relation_holds_in_o5 = rel == Mat2::neg_identity(o5.kind());

    let f = |x: &Element| -> Result<Element> {
        Ok(Element::Ring(crate::rings::u_hom_f(x.ring()?, o5.ring()?, o2.ring()?)?))
    };
    let img = Mat2::elementary(&f(&omega_bar)?)
        .mul(&Mat2::elementary(&f(&omega)?))?
        .pow(2)?;
    let image_holds_in_o2 = img == Mat2::neg_identity(o2.kind());

    Ok(O5CounterexampleReport {
        relation_holds_in_o5,
        image_holds_in_o2,
        image_witness: img.to_string(),
    })
}

/// Seeded random generator word of the given length: a mix of `E(x)` with
/// small coordinates and admissible diagonal tokens. Products stay in
/// `SL_+`/`SL_2` for Clifford and quadratic contexts and in `GL_2` for
/// quaternion contexts.
pub fn random_generator_word(
    ctx: &Context,
    len: usize,
    rng: &mut impl Rng,
) -> Result<GenWord> {
    let kind = ctx.kind();
    let mut tokens = Vec::with_capacity(len);
    let units = ctx.unit_basis()?;
    let dim = match kind {
        ContextKind::Clifford { n } => n as usize,
        k => k.ambient_dim()?,
    };
    for _ in 0..len {
        let roll: f64 = rng.gen();
        if roll < 0.8 {
            let co: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            tokens.push(GenToken::elem(element_from_small_coords(ctx, &co)?));
        } else if kind.is_quaternion() && roll < 0.9 {
            let mu = units[rng.gen_range(0..units.len())].clone();
            let nu = units[rng.gen_range(0..units.len())].clone();
            tokens.push(GenToken::diag(mu, nu));
        } else {
            // D(mu) with mu in the unit basis keeps Clifford words in SL+
            let mu = units[rng.gen_range(0..units.len())].clone();
            tokens.push(GenToken::diag_d(mu));
        }
    }
    Ok(GenWord::new(kind, tokens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordElement;
    use rand::SeedableRng;

    fn cliff_ctx(n: u32) -> Context {
        Context::new(ContextKind::Clifford { n }).unwrap()
    }

    fn gen(n: u32, h: u32) -> Element {
        Element::Cliff(CliffordElement::generator(n, h).unwrap())
    }

    #[test]
    fn eval_word_basics() {
        let ctx = cliff_ctx(3);
        let kind = ctx.kind();
        // [Elem(0)] -> ((0,1),(-1,0))
        let w = GenWord::new(kind, vec![GenToken::elem(Element::zero(kind))]);
        assert_eq!(w.eval(&ctx).unwrap(), Mat2::elementary(&Element::zero(kind)));
        // empty word -> identity
        assert_eq!(GenWord::empty(kind).eval(&ctx).unwrap(), Mat2::identity(kind));
        // [Elem(x), Elem(0)^-1, Elem(y)] -> E(x+y)
        let x = gen(3, 1);
        let y = gen(3, 2);
        let w = GenWord::new(
            kind,
            vec![
                GenToken::elem(x.clone()),
                GenToken::elem_inv(Element::zero(kind)),
                GenToken::elem(y.clone()),
            ],
        );
        assert_eq!(w.eval(&ctx).unwrap(), Mat2::elementary(&x.add(&y).unwrap()));
    }

    #[test]
    fn de2_examples() {
        let ctx = cliff_ctx(3);
        let i1 = gen(3, 1);
        let w = de2_decompose(&i1, &ctx).unwrap();
        assert_eq!(w.tokens.len(), 1);
        // u = i1 i2
        let u = i1.mul(&gen(3, 2)).unwrap();
        let w = de2_decompose(&u, &ctx).unwrap();
        assert_eq!(w.tokens.len(), 2);
        let expect = Mat2::diagonal(&u, &u.rev().invert().unwrap()).unwrap();
        assert_eq!(w.eval(&ctx).unwrap(), expect);
        // u = -1 evaluates to E(0)^2
        let minus = Element::one(ctx.kind()).neg();
        let w = de2_decompose(&minus, &ctx).unwrap();
        let e0 = Mat2::elementary(&Element::zero(ctx.kind()));
        assert_eq!(w.eval(&ctx).unwrap(), e0.mul(&e0).unwrap());
    }

    #[test]
    fn decompose_small_cases() {
        let ctx = cliff_ctx(2);
        let kind = ctx.kind();
        // E(x) round-trips
        let x = gen(2, 1);
        let m = Mat2::elementary(&x);
        let w = decompose(&m, &ctx).unwrap();
        assert_eq!(w.eval(&ctx).unwrap(), m);
        // lower triangular ((1,0),(c,1))
        let c = gen(2, 1).add(&Element::one(kind)).unwrap();
        let lower = Mat2::new(
            kind,
            Element::one(kind),
            Element::zero(kind),
            c,
            Element::one(kind),
        )
        .unwrap();
        let w = decompose(&lower, &ctx).unwrap();
        assert_eq!(w.eval(&ctx).unwrap(), lower);
    }

    #[test]
    fn decompose_random_words_all_small_contexts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for kind in [
            ContextKind::Clifford { n: 1 },
            ContextKind::Clifford { n: 3 },
            ContextKind::Clifford { n: 4 },
            ContextKind::Integers,
            ContextKind::Quadratic { d: 3, maximal: false },
            ContextKind::Quadratic { d: 11, maximal: true },
            ContextKind::Lipschitz,
            ContextKind::OrderO5,
        ] {
            let ctx = Context::new(kind).unwrap();
            for _ in 0..8 {
                let len = rng.gen_range(1..=12);
                let w = random_generator_word(&ctx, len, &mut rng).unwrap();
                let m = w.eval(&ctx).unwrap();
                let back = decompose(&m, &ctx).unwrap();
                assert_eq!(back.eval(&ctx).unwrap(), m, "round-trip in {kind:?}");
            }
        }
    }

    #[test]
    fn decompose_rejects_unsupported_dimension() {
        let ctx = cliff_ctx(5);
        let m = Mat2::identity(ctx.kind());
        assert!(matches!(decompose(&m, &ctx), Err(Error::UnsupportedContext(_))));
    }

    #[test]
    fn relation_families_pass_in_gamma3() {
        let ctx = cliff_ctx(3);
        let report = verify_relation_families(&ctx, &RelationFamily::ALL, 300, 1).unwrap();
        for f in &report.families {
            assert!(f.pass(), "{:?} failed: {:?}", f.family, f.counterexample);
        }
    }

    #[test]
    fn relation_families_pass_in_o5() {
        let ctx = Context::new(ContextKind::OrderO5).unwrap();
        let report = verify_relation_families(&ctx, &RelationFamily::ALL, 120, 1).unwrap();
        for f in &report.families {
            assert!(f.pass(), "{:?} failed: {:?}", f.family, f.counterexample);
        }
    }

    #[test]
    fn o5_counterexample_reproduces() {
        let report = o5_counterexample().unwrap();
        assert!(report.relation_holds_in_o5);
        assert!(!report.image_holds_in_o2);
    }
}
