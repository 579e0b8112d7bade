//! Text syntax for contexts, elements, generator words, and presentations.
//!
//! Element grammar: signed sums of terms; a term is an optional rational
//! coefficient (`p` or `p/q`), optionally `*`, then an optional product of
//! generators. Generators are `i1, i2, ...` in Clifford contexts, `w` in
//! quadratic contexts, and `i, j, k` in quaternion contexts. Examples:
//! `3/2 - 2*i1*i3 + i2`, `1/2 + 1/2*i + 1/2*j + 1/2*k`, `a+b*w` style sums.

use num::{BigInt, One, Zero};

use crate::element::{Context, Element};
use crate::rat::{Int, Rat};
use crate::rings::ContextKind;
use crate::words::{GenToken, GenWord};
use crate::{Error, Result};

/// Parse a context name: `gamma:<n>`, `Z`, `Zsqrt:-<d>`, `Imax:-<d>`,
/// `lipschitz`, `hurwitz`, `O3`, `O5`.
pub fn parse_context(s: &str) -> Result<ContextKind> {
    let err = |msg: &str| Error::Parse { offset: 0, message: msg.to_string() };
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("gamma:") {
        let n: u32 = rest.parse().map_err(|_| err("invalid dimension in gamma:<n>"))?;
        return Ok(ContextKind::Clifford { n });
    }
    if let Some(rest) = t.strip_prefix("Zsqrt:") {
        let d = parse_negative_d(rest).ok_or_else(|| err("expected Zsqrt:-<d>"))?;
        return Ok(ContextKind::Quadratic { d, maximal: false });
    }
    if let Some(rest) = t.strip_prefix("Imax:") {
        let d = parse_negative_d(rest).ok_or_else(|| err("expected Imax:-<d>"))?;
        return Ok(ContextKind::Quadratic { d, maximal: true });
    }
    match t {
        "Z" => Ok(ContextKind::Integers),
        "lipschitz" => Ok(ContextKind::Lipschitz),
        "hurwitz" => Ok(ContextKind::Hurwitz),
        "O3" => Ok(ContextKind::OrderO3),
        "O5" => Ok(ContextKind::OrderO5),
        other => Err(err(&format!("unknown context `{other}`"))),
    }
}

fn parse_negative_d(s: &str) -> Option<u32> {
    let s = s.strip_prefix('-')?;
    let d: u32 = s.parse().ok()?;
    (d >= 1).then_some(d)
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn integer(&mut self) -> Result<Int> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a digit"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<BigInt>().map_err(|_| self.error("invalid integer"))
    }

    /// `p` or `p/q`.
    fn rational(&mut self) -> Result<Rat> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.bump();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(self.error("zero denominator"));
            }
            Ok(Rat::new(n, d))
        } else {
            Ok(Rat::from_integer(n))
        }
    }

    /// A generator symbol for the context, if one starts here.
    fn generator(&mut self, ctx: &Context) -> Result<Option<Element>> {
        let kind = ctx.kind();
        let Some(c) = self.peek() else { return Ok(None) };
        match kind {
            ContextKind::Clifford { n } => {
                if c != b'i' {
                    return Ok(None);
                }
                let save = self.pos;
                self.pos += 1;
                if self.src.get(self.pos).map(|b| b.is_ascii_digit()) != Some(true) {
                    self.pos = save;
                    return Err(self.error("expected an index after `i`"));
                }
                let idx = self.integer()?;
                let h = num::ToPrimitive::to_u32(&idx)
                    .ok_or_else(|| self.error("generator index too large"))?;
                let g = crate::clifford::CliffordElement::generator(n, h)
                    .map_err(|_| self.error(format!("generator i{h} does not exist in gamma:{n}")))?;
                Ok(Some(Element::Cliff(g)))
            }
            ContextKind::Quadratic { .. } => {
                if c != b'w' {
                    return Ok(None);
                }
                self.bump();
                let e = crate::rings::RingElement::from_ambient(
                    kind,
                    vec![Rat::zero(), Rat::one()],
                )?;
                Ok(Some(Element::Ring(e)))
            }
            ContextKind::Integers => Ok(None),
            _ => {
                let slot = match c {
                    b'i' => 1,
                    b'j' => 2,
                    b'k' => 3,
                    _ => return Ok(None),
                };
                self.bump();
                let mut co = vec![Rat::zero(); 4];
                co[slot] = Rat::one();
                Ok(Some(Element::Ring(crate::rings::RingElement::from_ambient(kind, co)?)))
            }
        }
    }

    /// coefficient? ('*'? generator)*
    fn term(&mut self, ctx: &Context) -> Result<Element> {
        let mut value: Option<Element> = None;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.rational()?;
            value = Some(Element::scalar(ctx.kind(), c));
        }
        loop {
            let save = self.pos;
            if self.peek() == Some(b'*') {
                self.bump();
            }
            match self.generator(ctx)? {
                Some(g) => {
                    value = Some(match value {
                        None => g,
                        Some(v) => v.mul(&g)?,
                    });
                }
                None => {
                    self.pos = save;
                    break;
                }
            }
        }
        value.ok_or_else(|| self.error("expected a coefficient or generator"))
    }

    fn element(&mut self, ctx: &Context) -> Result<Element> {
        let mut out = Element::zero(ctx.kind());
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.bump();
                    false
                }
                Some(b'-') => {
                    self.bump();
                    true
                }
                None if !first => break,
                None => return Err(self.error("empty expression")),
                Some(_) if first => false,
                Some(c) => {
                    return Err(self.error(format!("expected `+` or `-`, found `{}`", c as char)))
                }
            };
            let t = self.term(ctx)?;
            out = if sign { out.sub(&t)? } else { out.add(&t)? };
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }
}

/// Parse an element in the context's grammar.
pub fn parse_element(text: &str, ctx: &Context) -> Result<Element> {
    let mut lex = Lexer::new(text);
    let e = lex.element(ctx)?;
    lex.skip_ws();
    if lex.pos != lex.src.len() {
        return Err(lex.error("trailing input"));
    }
    Ok(e)
}

/// Parse a whitespace-separated generator word: tokens `E(<expr>)`,
/// `Einv(<expr>)`, `D(<expr>)`, `Diag(<expr>,<expr>)`.
pub fn parse_word(text: &str, ctx: &Context) -> Result<GenWord> {
    let mut tokens = Vec::new();
    let src = text.as_bytes();
    let mut pos = 0usize;
    while pos < src.len() {
        while pos < src.len() && src[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= src.len() {
            break;
        }
        let start = pos;
        while pos < src.len() && src[pos] != b'(' && !src[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let head = &text[start..pos];
        if pos >= src.len() || src[pos] != b'(' {
            return Err(Error::Parse { offset: pos, message: format!("expected `(` after `{head}`") });
        }
        // find the matching close paren (expressions contain no parens)
        let open = pos;
        let close = text[open..]
            .find(')')
            .map(|c| open + c)
            .ok_or(Error::Parse { offset: open, message: "unclosed `(`".into() })?;
        let inner = &text[open + 1..close];
        pos = close + 1;
        let token = match head {
            "E" | "Einv" => {
                let x = parse_element(inner, ctx).map_err(|e| shift_parse_error(e, open + 1))?;
                if head == "E" {
                    GenToken::elem(x)
                } else {
                    GenToken::elem_inv(x)
                }
            }
            "D" | "Dinv" => {
                let mu = parse_element(inner, ctx).map_err(|e| shift_parse_error(e, open + 1))?;
                let t = GenToken::diag_d(mu);
                if head == "D" {
                    t
                } else {
                    t.inverted()
                }
            }
            "Diag" | "Diaginv" => {
                let comma = inner.find(',').ok_or(Error::Parse {
                    offset: open + 1,
                    message: "Diag takes two arguments".into(),
                })?;
                let mu = parse_element(&inner[..comma], ctx)
                    .map_err(|e| shift_parse_error(e, open + 1))?;
                let nu = parse_element(&inner[comma + 1..], ctx)
                    .map_err(|e| shift_parse_error(e, open + 2 + comma))?;
                let t = GenToken::diag(mu, nu);
                if head == "Diag" {
                    t
                } else {
                    t.inverted()
                }
            }
            other => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unknown token `{other}`"),
                })
            }
        };
        token.validate(ctx).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { offset: start, message: other.to_string() },
        })?;
        tokens.push(token);
    }
    Ok(GenWord::new(ctx.kind(), tokens))
}

fn shift_parse_error(e: Error, base: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse { offset: base + offset, message },
        other => other,
    }
}

/// Parse the presentation text format: a `gens:` line followed by `rel:`
/// lines, tokens being generator names with optional `^<exp>`.
pub fn parse_presentation(text: &str) -> Result<crate::presentations::Presentation> {
    let mut generators: Vec<String> = Vec::new();
    let mut relators = Vec::new();
    let mut seen_gens = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gens:") {
            generators = rest.split_whitespace().map(|s| s.to_string()).collect();
            seen_gens = true;
        } else if let Some(rest) = line.strip_prefix("rel:") {
            if !seen_gens {
                return Err(Error::Parse {
                    offset: 0,
                    message: "rel: line before gens: line".into(),
                });
            }
            let mut relator = Vec::new();
            for tok in rest.split_whitespace() {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => {
                        let exp: i32 = e.parse().map_err(|_| Error::Parse {
                            offset: 0,
                            message: format!("invalid exponent in `{tok}`"),
                        })?;
                        (n, exp)
                    }
                    None => (tok, 1),
                };
                let idx = generators
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))?;
                relator.push((idx, exp));
            }
            relators.push(relator);
        } else {
            return Err(Error::Parse {
                offset: 0,
                message: format!("expected `gens:` or `rel:`, found `{line}`"),
            });
        }
    }
    Ok(crate::presentations::Presentation::new(generators, relators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn ctx(kind: ContextKind) -> Context {
        Context::new(kind).unwrap()
    }

    #[test]
    fn clifford_expressions() {
        let g4 = ctx(ContextKind::Clifford { n: 4 });
        let e = parse_element("1 - 2*i1*i3", &g4).unwrap();
        let c = e.cliff().unwrap();
        assert_eq!(c.coeff(crate::clifford::Blade::from_indices(&[1, 3], 4).unwrap()), rat(-2));
        assert_eq!(c.coeff(crate::clifford::Blade::SCALAR), rat(1));
        // canonical print round-trip
        let text = e.to_string();
        assert_eq!(parse_element(&text, &g4).unwrap(), e);
        // out-of-context generator
        let g3 = ctx(ContextKind::Clifford { n: 3 });
        let err = parse_element("i3", &g3).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn generator_order_carries_sign() {
        let g4 = ctx(ContextKind::Clifford { n: 4 });
        let a = parse_element("i2*i1", &g4).unwrap();
        let b = parse_element("0 - i1*i2", &g4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hurwitz_omega_is_integral() {
        let h = ctx(ContextKind::Hurwitz);
        let e = parse_element("1/2 + 1/2*i + 1/2*j + 1/2*k", &h).unwrap();
        assert!(e.is_integral(&h));
        assert_eq!(e.norm_sq(), rat(1));
        // but it is not integral in the Lipschitz order
        let l = ctx(ContextKind::Lipschitz);
        let e = parse_element("1/2 + 1/2*i + 1/2*j + 1/2*k", &l).unwrap();
        assert!(!e.is_integral(&l));
    }

    #[test]
    fn quadratic_expressions() {
        let z3 = ctx(ContextKind::Quadratic { d: 3, maximal: false });
        let e = parse_element("2 - 3*w", &z3).unwrap();
        let r = e.ring().unwrap();
        assert_eq!(r.ambient_coords(), &[rat(2), rat(-3)]);
        let i3 = ctx(ContextKind::Quadratic { d: 3, maximal: true });
        let half = parse_element("1/2 + 1/2*w", &i3).unwrap();
        assert!(half.is_integral(&i3));
    }

    #[test]
    fn parse_error_has_offset() {
        let g3 = ctx(ContextKind::Clifford { n: 3 });
        match parse_element("1 + $", &g3) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn words_parse_and_eval() {
        let g3 = ctx(ContextKind::Clifford { n: 3 });
        let w = parse_word("E(i1 + i2) Einv(0) D(i1)", &g3).unwrap();
        assert_eq!(w.tokens.len(), 3);
        assert!(w.eval(&g3).is_ok());
        // display round-trip
        let text = w.to_string();
        let again = parse_word(&text, &g3).unwrap();
        assert_eq!(again, w);
        // invalid token argument: E(i1*i2) is not a vector
        assert!(parse_word("E(i1*i2)", &g3).is_err());
    }

    #[test]
    fn presentation_text_round_trip() {
        let p = parse_presentation("gens: j a c\nrel: a a j^-1\nrel: c^3\n").unwrap();
        assert_eq!(p.generators, vec!["j", "a", "c"]);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.relators[1], vec![(2, 3)]);
    }

    #[test]
    fn rationals_parse() {
        let z = ctx(ContextKind::Integers);
        let e = parse_element("3/2 - 1", &z).unwrap();
        assert_eq!(e.ring().unwrap().ambient_coords(), &[ratio(1, 2)]);
    }
}
