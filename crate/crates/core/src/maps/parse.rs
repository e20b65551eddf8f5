//! Recursive-descent parser for the map-spec mini-language.
//!
//! ```text
//! spec   := "rot:" num
//!         | "mobius:kappa=" num ",sigma=" num ("+"|"-") num "i"
//!         | "arnold:a=" num ",b=" num
//!         | "comp(" spec "," spec ")" | "conj(" spec "," spec ")"
//!         | "inv(" spec ")" | "pow(" spec "," int ")"
//! ```
//!
//! Whitespace is allowed between any two tokens.

use num_complex::Complex64;
use thiserror::Error;

use super::CircleMapExpr;
use crate::geometry::MobiusMap;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("invalid map at node `{path}`: {message}")]
    Semantic { path: String, message: String },
}

pub fn parse_map_spec(text: &str) -> Result<CircleMapExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        path: Vec::new(),
    };
    let expr = p.spec()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("end of input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    path: Vec<String>,
}

impl<'a> Parser<'a> {
    fn syntax(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn semantic(&self, node: &str, message: &str) -> ParseError {
        let mut path = self.path.clone();
        path.push(node.to_string());
        ParseError::Semantic {
            path: path.join("/"),
            message: message.to_string(),
        }
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

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{}`", byte as char)))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        self.skip_ws();
        for &c in word.as_bytes() {
            if self.peek() != Some(c) {
                return Err(self.syntax(&format!("`{word}`")));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("a map kind (rot, mobius, arnold, comp, inv, pow, conj)"));
        }
        // ASCII letters only, so this slice is valid UTF-8
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    /// Decimal literal: `[+-]? digits [. digits] [(e|E) [+-]? digits]`.
    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let int_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let mut digits = i - int_start;
        if i < s.len() && s[i] == b'.' {
            i += 1;
            let frac_start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            digits += i - frac_start;
        }
        if digits == 0 {
            return Err(self.syntax("a decimal number"));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        self.pos = i;
        let text = std::str::from_utf8(&s[start..i]).unwrap();
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.syntax("a decimal number")
        })
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(self.syntax("an integer"));
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap();
        let value = text
            .parse::<i64>()
            .map_err(|_| self.syntax("an integer that fits in 64 bits"))?;
        self.pos = i;
        Ok(value)
    }

    fn child(&mut self, node: &str, index: usize) -> Result<CircleMapExpr, ParseError> {
        self.path.push(format!("{node}[{index}]"));
        let out = self.spec();
        self.path.pop();
        out
    }

    fn spec(&mut self) -> Result<CircleMapExpr, ParseError> {
        let start = self.pos;
        let kind = self.ident()?;
        match kind {
            "rot" => {
                self.expect(b':')?;
                let alpha = self.number()?;
                Ok(CircleMapExpr::rotation(alpha))
            }
            "mobius" => {
                self.expect(b':')?;
                self.keyword("kappa")?;
                self.expect(b'=')?;
                let kappa = self.number()?;
                self.expect(b',')?;
                self.keyword("sigma")?;
                self.expect(b'=')?;
                let re = self.number()?;
                let sign = if self.eat(b'+') {
                    1.0
                } else if self.eat(b'-') {
                    -1.0
                } else {
                    return Err(self.syntax("`+` or `-` before the imaginary part"));
                };
                let im = sign * self.number()?;
                self.expect(b'i')?;
                MobiusMap::new(kappa, Complex64::new(re, im))
                    .map(CircleMapExpr::Mobius)
                    .map_err(|_| self.semantic("mobius", "|sigma| must be < 1"))
            }
            "arnold" => {
                self.expect(b':')?;
                self.keyword("a")?;
                self.expect(b'=')?;
                let a = self.number()?;
                self.expect(b',')?;
                self.keyword("b")?;
                self.expect(b'=')?;
                let b = self.number()?;
                if b.abs() >= 1.0 {
                    return Err(self.semantic("arnold", "|b| must be < 1"));
                }
                Ok(CircleMapExpr::Arnold { a, b })
            }
            "comp" | "conj" => {
                let kind = kind.to_string();
                self.expect(b'(')?;
                let f = self.child(&kind, 0)?;
                self.expect(b',')?;
                let g = self.child(&kind, 1)?;
                self.expect(b')')?;
                Ok(if kind == "comp" {
                    CircleMapExpr::compose(f, g)
                } else {
                    CircleMapExpr::conjugate(f, g)
                })
            }
            "inv" => {
                self.expect(b'(')?;
                let f = self.child("inv", 0)?;
                self.expect(b')')?;
                Ok(CircleMapExpr::inverse(f))
            }
            "pow" => {
                self.expect(b'(')?;
                let f = self.child("pow", 0)?;
                self.expect(b',')?;
                let n = self.integer()?;
                self.expect(b')')?;
                Ok(CircleMapExpr::power(f, n))
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.syntax("a map kind (rot, mobius, arnold, comp, inv, pow, conj)"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Angle;

    #[test]
    fn parses_rotation() {
        assert_eq!(
            parse_map_spec("rot:0.5").unwrap(),
            CircleMapExpr::Rotation(Angle::new(0.5))
        );
    }

    #[test]
    fn parses_conjugate_with_spaces() {
        let e = parse_map_spec("conj(mobius:kappa=0,sigma=0.3+0i, rot:1.0)").unwrap();
        let m = MobiusMap::new(0.0, Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(
            e,
            CircleMapExpr::conjugate(CircleMapExpr::Mobius(m), CircleMapExpr::rotation(1.0))
        );
        let spaced = parse_map_spec(" conj ( mobius : kappa = 0 , sigma = 0.3 + 0 i ,rot : 1.0 ) ").unwrap();
        assert_eq!(e, spaced);
    }

    #[test]
    fn negative_imaginary_part() {
        let e = parse_map_spec("mobius:kappa=1.5,sigma=0.1-0.2i").unwrap();
        match e {
            CircleMapExpr::Mobius(m) => assert_eq!(m.sigma(), Complex64::new(0.1, -0.2)),
            _ => panic!("expected mobius"),
        }
    }

    #[test]
    fn arnold_b_too_large() {
        let err = parse_map_spec("arnold:a=0,b=1.2").unwrap_err();
        assert_eq!(
            err,
            ParseError::Semantic {
                path: "arnold".into(),
                message: "|b| must be < 1".into()
            }
        );
        assert!(err.to_string().contains("|b| must be < 1"));
    }

    #[test]
    fn nested_semantic_path() {
        let err = parse_map_spec("comp(rot:1, pow(mobius:kappa=0,sigma=0.9+0.9i, 2))").unwrap_err();
        match err {
            ParseError::Semantic { path, .. } => assert_eq!(path, "comp[1]/pow[0]/mobius"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_offsets() {
        match parse_map_spec("rot:").unwrap_err() {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 4),
            e => panic!("{e:?}"),
        }
        match parse_map_spec("comp(rot:1 rot:2)").unwrap_err() {
            ParseError::Syntax { offset, expected } => {
                assert_eq!(offset, 11);
                assert_eq!(expected, "`,`");
            }
            e => panic!("{e:?}"),
        }
        match parse_map_spec("shear:1").unwrap_err() {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 0),
            e => panic!("{e:?}"),
        }
        assert!(parse_map_spec("rot:1 trailing").is_err());
        assert!(parse_map_spec("pow(rot:1, 1.5)").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "rot:0.5",
            "mobius:kappa=1.25,sigma=-0.1-0.3i",
            "arnold:a=0.1,b=-0.75",
            "comp(inv(arnold:a=0,b=0.5),pow(rot:2,-3))",
            "conj(mobius:kappa=0,sigma=0.3+0i,rot:1)",
            "rot:1e-20",
        ] {
            let e = parse_map_spec(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_map_spec(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
