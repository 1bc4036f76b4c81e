//! Line formats for forms and factored elements.
//!
//! ```text
//! rho = 4+2
//! u=1 ; boundary: (0/1)^4 ; interior:
//! u=-3/2 ; boundary: (1/0)^1, (2/1)^1 ; interior:
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::factored::{FactoredBlock, FactoredElement};
use super::form::HomogeneousForm;
use super::roots::{BoundaryPoint, InteriorPoint};
use super::PolyError;
use crate::rep::RepDecomposition;
use crate::{Rational, Scalar};

/// Exact reading of `p/q`, integers and decimals (with optional exponent).
fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_else(|_| BigInt::zero());
    let ten = BigInt::from(10);
    let mut v = Rational::new(num, num_traits::pow(ten.clone(), frac.len()));
    let scale = Rational::from_integer(num_traits::pow(ten, exp.unsigned_abs() as usize));
    v = if exp >= 0 { v * scale } else { v / scale };
    Some(if neg { -v } else { v })
}

pub fn parse_scalar<S: Scalar>(s: &str) -> Option<S> {
    if let Some(r) = parse_rational(s) {
        return Some(S::from_rational(&r));
    }
    if S::EXACT {
        return None;
    }
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).and_then(S::from_f64)
}

/// `i`, `2i`, `-1+2i`, `1/2-3/4i` or `(re,im)`; returns `(re, im)`.
pub fn parse_complex<S: Scalar>(s: &str) -> Option<(S, S)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        return Some((parse_scalar(re)?, parse_scalar(im)?));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Some((parse_scalar(&s)?, S::zero()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_scalar(&body[..k])?, &body[k..]),
        None => (S::zero(), body),
    };
    let im = match im {
        "" | "+" => S::one(),
        "-" => -S::one(),
        other => parse_scalar(other)?,
    };
    Some((re, im))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self { src, pos: 0, line }
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse { line: self.line, col: self.pos + 1, msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), PolyError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    /// Text up to (not including) the first char in `stops`, trimmed.
    fn take_until(&mut self, stops: &[char]) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(stops).unwrap_or(rest.len());
        self.pos += end;
        rest[..end].trim()
    }

    fn number<S: Scalar>(&mut self, stops: &[char]) -> Result<S, PolyError> {
        let start = self.pos;
        let tok = self.take_until(stops);
        parse_scalar(tok).ok_or_else(|| {
            self.pos = start;
            self.skip_ws();
            self.err(format!("invalid number `{tok}`"))
        })
    }

    fn multiplicity(&mut self) -> Result<u32, PolyError> {
        self.expect("^")?;
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        let m = digits.parse::<u32>().map_err(|_| self.err("expected a multiplicity"))?;
        self.pos += digits.len();
        Ok(m)
    }
}

fn parse_block<S: Scalar>(src: &str, line: usize) -> Result<FactoredBlock<S>, PolyError> {
    let mut c = Cursor::new(src, line);
    c.expect("u")?;
    c.expect("=")?;
    let u: S = c.number(&[';'])?;
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    while c.eat(";") {
        if c.eat("boundary:") {
            while c.eat("(") {
                let body = c.take_until(&[')']);
                let t = match body.split_once('/') {
                    Some((t0, t1)) => parse_scalar::<S>(t0)
                        .zip(parse_scalar::<S>(t1))
                        .and_then(|(t0, t1)| BoundaryPoint::from_pair(t0, t1)),
                    None => parse_scalar(body).map(BoundaryPoint::Finite),
                }
                .ok_or_else(|| c.err(format!("invalid boundary point `({body})`")))?;
                c.expect(")")?;
                boundary.push((t, c.multiplicity()?));
                if !c.eat(",") {
                    break;
                }
            }
        } else if c.eat("interior:") {
            while c.eat("(") {
                let re: S = c.number(&[','])?;
                c.expect(",")?;
                let im: S = c.number(&[')'])?;
                let z = InteriorPoint::new(re, im).ok_or_else(|| c.err("interior point needs im > 0"))?;
                c.expect(")")?;
                interior.push((z, c.multiplicity()?));
                if !c.eat(",") {
                    break;
                }
            }
        } else {
            return Err(c.err("expected `boundary:` or `interior:`"));
        }
    }
    if !c.at_end() {
        return Err(c.err("trailing input"));
    }
    Ok(FactoredBlock::new(u, boundary, interior))
}

/// A `rho = ...` header line followed by one block line per summand. Blank
/// lines and `#` comments are ignored.
pub fn parse_element<S: Scalar>(src: &str) -> Result<FactoredElement<S>, PolyError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (header_line, header) =
        lines.next().ok_or(PolyError::Parse { line: 1, col: 1, msg: "empty input".into() })?;
    let rep: RepDecomposition = header
        .parse()
        .map_err(|e: crate::rep::RepError| PolyError::Parse { line: header_line, col: 1, msg: e.to_string() })?;
    let mut blocks = Vec::new();
    let mut last_line = header_line;
    for (line, text) in lines {
        blocks.push(parse_block(text, line)?);
        last_line = line;
    }
    if blocks.len() != rep.len() {
        return Err(PolyError::Parse {
            line: last_line,
            col: 1,
            msg: format!("{} block lines for {}", blocks.len(), rep),
        });
    }
    FactoredElement::new(rep, blocks)
}

/// Sum of terms `c X^a Y^b`; a bare `0` needs `degree`.
pub fn parse_form<S: Scalar>(src: &str, degree: Option<usize>) -> Result<HomogeneousForm<S>, PolyError> {
    let mut terms: Vec<(S, usize, usize)> = Vec::new();
    let bytes = src.as_bytes();
    let mut start = 0;
    let mut k = 0;
    while k <= bytes.len() {
        let boundary = k == bytes.len()
            || (k > start
                && (bytes[k] == b'+' || bytes[k] == b'-')
                && !matches!(bytes[..k].iter().rev().find(|b| !b.is_ascii_whitespace()), Some(b'e' | b'E' | b'^')));
        if boundary {
            let text = &src[start..k];
            if !text.trim().is_empty() {
                terms.push(parse_term(text, start)?);
            }
            start = k;
        }
        k += 1;
    }
    terms.retain(|(c, a, b)| a + b > 0 || !c.is_zero());
    let mut n = degree;
    for (_, a, b) in &terms {
        match n {
            None => n = Some(a + b),
            Some(d) if d != a + b => return Err(PolyError::DegreeMismatch { expected: d, found: a + b }),
            _ => {}
        }
    }
    let n = n.ok_or(PolyError::Parse { line: 1, col: 1, msg: "cannot infer the degree of a constant".into() })?;
    let mut f = HomogeneousForm::zero(n);
    for (c, a, _) in terms {
        let add = HomogeneousForm::monomial(n, a, c);
        f = &f + &add;
    }
    Ok(f)
}

fn parse_term<S: Scalar>(text: &str, offset: usize) -> Result<(S, usize, usize), PolyError> {
    let err = |msg: String| PolyError::Parse { line: 1, col: offset + 1, msg };
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(r) => (-S::one(), r.trim()),
        None => (S::one(), t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let var_start = body.find(['X', 'Y']).unwrap_or(body.len());
    let coeff_text = body[..var_start].trim().trim_end_matches('*').trim();
    let coeff: S = if coeff_text.is_empty() {
        S::one()
    } else {
        parse_scalar(coeff_text).ok_or_else(|| err(format!("invalid coefficient `{coeff_text}`")))?
    };
    let (mut a, mut b) = (0, 0);
    let mut rest = body[var_start..].trim();
    while !rest.is_empty() {
        let var = rest.as_bytes()[0];
        rest = rest[1..].trim_start();
        let mut e = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let r = r.trim_start();
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            e = digits.parse().map_err(|_| err("expected an exponent".into()))?;
            rest = r[digits.len()..].trim_start();
        }
        match var {
            b'X' => a += e,
            b'Y' => b += e,
            _ => return Err(err(format!("unexpected `{}`", var as char))),
        }
        rest = rest.trim_start_matches('*').trim_start();
    }
    Ok((sign * coeff, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("-3/4"), Some(Rational::new((-3).into(), 4.into())));
        assert_eq!(parse_rational("0.25"), Some(Rational::new(1.into(), 4.into())));
        assert_eq!(parse_rational("1e-2"), Some(Rational::new(1.into(), 100.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex::<Rational>("i"), Some((rat(0), rat(1))));
        assert_eq!(parse_complex::<Rational>("-1+2i"), Some((rat(-1), rat(2))));
        assert_eq!(parse_complex::<Rational>("3-i"), Some((rat(3), rat(-1))));
        assert_eq!(parse_complex::<Rational>("(1/2,3)"), Some((Rational::new(1.into(), 2.into()), rat(3))));
        assert_eq!(parse_complex::<f64>("1e-3+2i"), Some((1e-3, 2.0)));
    }

    #[test]
    fn element_round_trips_through_text() {
        let src = "rho = 4+2\nu=1 ; boundary: (0/1)^3, (1/0)^1 ; interior:\nu=-3/2 ; boundary: ; interior: (1/2,2)^1\n";
        let x: FactoredElement<Rational> = parse_element(src).unwrap();
        assert_eq!(x.scalars(), vec![rat(1), Rational::new((-3).into(), 2.into())]);
        let again: FactoredElement<Rational> = parse_element(&x.to_string()).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let src = "rho = 2\nu=1 ; boundary: (0/1)^2 ; interior: (0,-1)^1";
        match parse_element::<Rational>(src) {
            Err(PolyError::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col > 30);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_element::<Rational>("rho = 2\nu=1 ; bndry: (0/1)^2"), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn forms_round_trip_through_text() {
        let f: HomogeneousForm<Rational> = parse_form("1 X^2 + 2 X Y + 1 Y^2", None).unwrap();
        assert_eq!(f.coeffs(), &[rat(1), rat(2), rat(1)]);
        let g: HomogeneousForm<Rational> = parse_form(&f.to_string(), None).unwrap();
        assert_eq!(f, g);
        let h: HomogeneousForm<Rational> = parse_form("X^3 - 1/2 X Y^2", None).unwrap();
        assert_eq!(h.coeffs(), &[rat(0), Rational::new((-1).into(), 2.into()), rat(0), rat(1)]);
        assert!(parse_form::<Rational>("X^2 + Y", None).is_err());
        assert_eq!(parse_form::<Rational>("0", Some(2)).unwrap(), HomogeneousForm::zero(2));
    }

    #[test]
    fn block_with_infinity_parses() {
        let b: FactoredBlock<Rational> = parse_block("u=2 ; boundary: (1/0)^1, (-1/2)^1 ; interior:", 1).unwrap();
        assert_eq!(b.boundary[0].0, BoundaryPoint::Finite(Rational::new((-1).into(), 2.into())));
        assert_eq!(b.boundary[1].0, BoundaryPoint::Infinity);
        assert_eq!(b.u, rat(2));
    }
}
