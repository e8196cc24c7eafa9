//! Text form of spherical elements, e.g. `q^2*[1,-2] + (1-q^2)*[0,-1]`.
//!
//! Coefficients are arbitrary sums and products of integers, `q` and `s`
//! with integer exponents; juxtaposition multiplies. A term carries at most
//! one basis vector.

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::typ::{SphericalElement, TypeVector};

pub fn parse_expr(text: &str) -> Result<SphericalElement> {
    parse_expr_rank(text, None)
}

/// Parses with an optional expected rank; needed to give `0` a rank.
pub fn parse_expr_rank(text: &str, rank: Option<usize>) -> Result<SphericalElement> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let terms = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let mut out: Option<SphericalElement> = rank.map(SphericalElement::zero);
    let mut bare = ExactScalar::zero();
    for (c, basis) in terms {
        match basis {
            None => bare += c,
            Some(b) => {
                let el = out.get_or_insert_with(|| SphericalElement::zero(b.rank()));
                el.add_term(b, &c)?;
            }
        }
    }
    match out {
        Some(mut el) => {
            if !bare.is_zero() {
                // a bare scalar is a multiple of the rank-0 unit
                el.add_term(TypeVector::default(), &bare)?;
            }
            Ok(el)
        }
        None => {
            let mut el = SphericalElement::zero(0);
            el.add_term_unchecked(TypeVector::default(), &bare);
            Ok(el)
        }
    }
}

pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let terms = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let mut acc = ExactScalar::zero();
    for (c, b) in terms {
        if b.is_some() {
            return Err(Error::SyntaxError { pos: 0, msg: "expected a scalar".into() });
        }
        acc += c;
    }
    Ok(acc)
}

pub fn parse_type(text: &str) -> Result<TypeVector> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(TypeVector::default());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<i32>()
                .map_err(|_| Error::SyntaxError { pos: 0, msg: format!("bad entry {x:?}") })
        })
        .collect::<Result<Vec<_>>>()
        .map(TypeVector)
}

/// A term of a product: a scalar and maybe one basis vector.
type Term = (ExactScalar, Option<TypeVector>);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::SyntaxError { pos: self.pos, msg: msg.into() }
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

    fn sum(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            for (c, b) in self.product()? {
                out.push((if sign < 0 { -c } else { c }, b));
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(out),
            }
        }
    }

    /// A product of factors; returns a list of terms because a factor may be a
    /// parenthesized sum containing basis vectors.
    fn product(&mut self) -> Result<Vec<Term>> {
        let mut acc: Vec<Term> = vec![(ExactScalar::one(), None)];
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'*') if !first => {
                    self.pos += 1;
                }
                Some(c) if !first && starts_factor(c) => {}
                _ if first => {}
                _ => return Ok(acc),
            }
            let f = self.power()?;
            acc = multiply(acc, f).map_err(|m| self.err(m))?;
            first = false;
        }
    }

    fn power(&mut self) -> Result<Vec<Term>> {
        let mut base = self.atom()?;
        if base.len() > 1 && base.iter().all(|(_, b)| b.is_none()) {
            let total = base.drain(..).fold(ExactScalar::zero(), |acc, (c, _)| acc + c);
            base.push((total, None));
        }
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.signed_int()?;
            let exp = i32::try_from(exp).map_err(|_| self.err("exponent out of range"))?;
            return match base.as_slice() {
                [(c, None)] => {
                    if exp >= 0 {
                        Ok(vec![(c.pow(exp as u32), None)])
                    } else {
                        // only monomials have inverses
                        let (lo, hi) = c.degree_range().ok_or_else(|| self.err("zero to a negative power"))?;
                        let k = c.coeff(lo);
                        if lo != hi || (k != 1.into() && k != (-1).into()) {
                            return Err(self.err("negative power of a non-unit"));
                        }
                        let inv = ExactScalar::monomial(k, -lo);
                        Ok(vec![(inv.pow((-exp) as u32), None)])
                    }
                }
                _ => Err(self.err("exponent applied to a basis vector")),
            };
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let v = self.signed_int()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(v);
        }
        if let Some(b'-') | Some(b'+') = self.peek() {
            neg = self.src[self.pos] == b'-';
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let txt = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = txt.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Vec<Term>> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(vec![(ExactScalar::q(), None)])
            }
            Some(b's') => {
                self.pos += 1;
                Ok(vec![(ExactScalar::s(), None)])
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: num_bigint::BigInt = txt.parse().map_err(|_| self.err("bad integer"))?;
                Ok(vec![(ExactScalar::monomial(v, 0), None)])
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut v = Vec::new();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(vec![(ExactScalar::one(), Some(TypeVector(v)))]);
                }
                loop {
                    let x = self.signed_int()?;
                    v.push(i32::try_from(x).map_err(|_| self.err("entry out of range"))?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
                Ok(vec![(ExactScalar::one(), Some(TypeVector(v)))])
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn starts_factor(c: u8) -> bool {
    c.is_ascii_digit() || matches!(c, b'q' | b's' | b'(' | b'[')
}

fn multiply(a: Vec<Term>, b: Vec<Term>) -> std::result::Result<Vec<Term>, &'static str> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ca, ba) in &a {
        for (cb, bb) in &b {
            let basis = match (ba, bb) {
                (Some(_), Some(_)) => return Err("product of two basis vectors"),
                (Some(x), None) | (None, Some(x)) => Some(x.clone()),
                (None, None) => None,
            };
            out.push((ca * cb, basis));
        }
    }
    Ok(out)
}

/// Renders in the input grammar; `parse_expr_rank(render(x), Some(rank)) == x`
/// (the rank is needed only to read back `0`).
pub fn render(x: &SphericalElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in x.iter().enumerate() {
        let (neg, body) = render_coeff(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let basis = if k.rank() == 0 && x.rank() == 0 { String::new() } else { k.to_string() };
        match (body.as_str(), basis.is_empty()) {
            ("1", false) => out.push_str(&basis),
            (_, true) => out.push_str(&body),
            (b, false) => {
                out.push_str(b);
                out.push('*');
                out.push_str(&basis);
            }
        }
    }
    out
}

/// Splits off a leading sign from single-term coefficients and parenthesizes
/// sums.
fn render_coeff(c: &ExactScalar) -> (bool, String) {
    let txt = c.to_string();
    if c.terms().count() == 1 {
        match txt.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, txt),
        }
    } else {
        (false, format!("({txt})"))
    }
}

pub fn to_json(x: &SphericalElement) -> serde_json::Value {
    serde_json::Value::Array(
        x.iter()
            .map(|(k, c)| serde_json::json!({ "type": k.0, "coeff": c.to_string() }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let x = parse_expr("q^2*[1,-2] + (1-q^2)*[0,-1]").unwrap();
        let q = ExactScalar::q;
        let mut want = SphericalElement::delta_of(&[1, -2]).scale(&ExactScalar::q_pow(2));
        want.add_scaled(&SphericalElement::delta_of(&[0, -1]), &(ExactScalar::one() - q() * q()))
            .unwrap();
        assert_eq!(x, want);
        assert_eq!(parse_expr("[0,0]").unwrap(), SphericalElement::delta_of(&[0, 0]));
        assert!(matches!(parse_expr("q^"), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn parse_variants() {
        let a = parse_expr("-(1+q)*[0] + q^-1 s^3 [1]").unwrap();
        assert_eq!(a.coeff(&TypeVector(vec![0])), -(ExactScalar::one() + ExactScalar::q()));
        assert_eq!(a.coeff(&TypeVector(vec![1])), -ExactScalar::s());
        let b = parse_expr("(q + 2)*([1] - [0])").unwrap();
        assert_eq!(b.len(), 2);
        assert!(parse_expr("[1]*[0]").is_err());
        assert!(parse_expr("[1] + [0,0]").is_err());
        assert!(parse_expr("(1+q)^-1*[0]").is_err());
        assert_eq!(parse_expr_rank("0", Some(3)).unwrap(), SphericalElement::zero(3));
    }

    #[test]
    fn syntax_error_position() {
        match parse_expr("[1,0] + q^x") {
            Err(Error::SyntaxError { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn render_round_trip() {
        for t in [
            "q^2*[1,-2] + (1-q^2)*[0,-1]",
            "-[1,0] - 3*q*[0,0]",
            "s*[2] + (q^-1 - q*s)*[0]",
            "0",
        ] {
            let x = parse_expr_rank(t, Some(if t.contains(",") { 2 } else { 1 })).unwrap();
            let y = parse_expr_rank(&render(&x), Some(x.rank())).unwrap();
            assert_eq!(x, y, "{t} -> {}", render(&x));
        }
        assert_eq!(render(&parse_expr("q^2*[1,-2] + (1-q^2)*[0,-1]").unwrap()), "(1 - q^2)*[0,-1] + q^2*[1,-2]");
    }
}
