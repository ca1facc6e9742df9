//! Arithmetic expressions over `Q_p`: integers, `+ - * /`, unary minus,
//! parentheses and integer powers `x^k` (negative `k` allowed).

use bicrossed::padic::{padic_arith, ArithOp, PAdicNumber};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, CliError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Token::Int(digits.parse().expect("ascii digits"))));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(syntax(i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn syntax(pos: usize, message: &str) -> CliError {
    CliError::Parse {
        what: "expression".into(),
        line: 1,
        column: pos + 1,
        message: message.to_string(),
    }
}

/// Value of an evaluated expression and the digits lost to cancellation.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: PAdicNumber,
    pub precision_loss: u32,
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    at: usize,
    end: usize,
    prime: u64,
    precision: u32,
    loss: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn apply(&mut self, op: ArithOp, a: &PAdicNumber, b: &PAdicNumber) -> Result<PAdicNumber, CliError> {
        let out = padic_arith(op, a, b)?;
        self.loss += out.precision_loss;
        Ok(out.value)
    }

    fn expr(&mut self) -> Result<PAdicNumber, CliError> {
        let mut acc = self.term()?;
        loop {
            let op = if self.eat('+') {
                ArithOp::Add
            } else if self.eat('-') {
                ArithOp::Sub
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            acc = self.apply(op, &acc, &rhs)?;
        }
    }

    fn term(&mut self) -> Result<PAdicNumber, CliError> {
        let mut acc = self.unary()?;
        loop {
            let op = if self.eat('*') {
                ArithOp::Mul
            } else if self.eat('/') {
                ArithOp::Div
            } else {
                return Ok(acc);
            };
            let rhs = self.unary()?;
            acc = self.apply(op, &acc, &rhs)?;
        }
    }

    fn unary(&mut self) -> Result<PAdicNumber, CliError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<PAdicNumber, CliError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let pos = self.pos();
        let k = match self.tokens.get(self.at) {
            Some((_, Token::Int(k))) => u32::try_from(k).map_err(|_| syntax(pos, "exponent too large"))?,
            _ => return Err(syntax(pos, "expected an integer exponent")),
        };
        self.at += 1;
        let mut acc = PAdicNumber::one(self.prime, self.precision)?;
        for _ in 0..k {
            acc = self.apply(ArithOp::Mul, &acc, &base)?;
        }
        if negative {
            acc = acc.inverse()?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<PAdicNumber, CliError> {
        let pos = self.pos();
        match self.tokens.get(self.at).cloned() {
            Some((_, Token::Int(n))) => {
                self.at += 1;
                Ok(PAdicNumber::from_rational(self.prime, &BigRational::from_integer(n), self.precision)?)
            }
            Some((_, Token::Op('('))) => {
                self.at += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                Ok(v)
            }
            Some((_, Token::Op(c))) => Err(syntax(pos, &format!("unexpected {c:?}"))),
            None => Err(syntax(pos, "unexpected end of expression")),
        }
    }
}

pub fn evaluate(text: &str, prime: u64, precision: u32) -> Result<Evaluation, CliError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        at: 0,
        end: text.chars().count(),
        prime,
        precision,
        loss: 0,
    };
    let value = parser.expr()?;
    if parser.at < tokens.len() {
        return Err(syntax(parser.pos(), "trailing input"));
    }
    Ok(Evaluation {
        value,
        precision_loss: parser.loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_of_two_mod_125() {
        let e = evaluate("1/2", 5, 3).unwrap();
        assert_eq!(e.value.unit(), Some(63));
        assert_eq!((2 * 63) % 125, 1);
    }

    #[test]
    fn precedence_and_powers() {
        let e = evaluate("-3 + 2 * (1 - 5)^2 / 4^-1", 7, 8).unwrap();
        // -3 + 2 * 16 * 4 = 125
        assert_eq!(e.value.reconstruct_rational(), Some(rational(125, 1)));
        let e = evaluate("5^-2 * 3", 5, 8).unwrap();
        assert_eq!(e.value.valuation(), Some(-2));
        assert_eq!(e.value.reconstruct_rational(), Some(rational(3, 25)));
    }

    #[test]
    fn cancellation_is_reported() {
        let e = evaluate("1 - 126", 5, 4).unwrap();
        assert_eq!(e.value.valuation(), Some(3));
        assert!(e.precision_loss > 0);
    }

    #[test]
    fn errors_carry_columns() {
        match evaluate("1 + * 2", 5, 4).unwrap_err() {
            CliError::Parse { column, .. } => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        match evaluate("(1 + 2", 5, 4).unwrap_err() {
            CliError::Parse { column, .. } => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(evaluate("x", 5, 4), Err(CliError::Parse { column: 1, .. })));
        assert!(evaluate("1/0", 5, 4).is_err());
    }
}
