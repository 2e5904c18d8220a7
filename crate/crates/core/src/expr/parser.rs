use super::{BinOp, Expr, ExprError, Func, Var, Vars};

/// Deepest nesting the parser accepts; deeper input is a syntax error.
pub const MAX_DEPTH: usize = 256;

/// Parses `src`, accepting only the variables in `vars`.
pub fn parse(src: &str, vars: Vars) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression"));
    }
    let (e, _) = p.expr(0)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
}

type Parsed = Result<(Expr, usize), ExprError>;

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn check_depth(&self, depth: usize) -> Result<usize, ExprError> {
        if depth > MAX_DEPTH {
            Err(self.error("expression nests too deeply"))
        } else {
            Ok(depth)
        }
    }

    /// Each parse function returns the tree and its height; `level` is the
    /// recursion depth, both bounded by `MAX_DEPTH`.
    fn expr(&mut self, level: usize) -> Parsed {
        self.check_depth(level)?;
        let (mut lhs, mut height) = self.term(level + 1)?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok((lhs, height)),
            };
            self.pos += 1;
            let (rhs, h) = self.term(level + 1)?;
            height = self.check_depth(height.max(h) + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self, level: usize) -> Parsed {
        self.check_depth(level)?;
        let (mut lhs, mut height) = self.factor(level + 1)?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok((lhs, height)),
            };
            self.pos += 1;
            let (rhs, h) = self.factor(level + 1)?;
            height = self.check_depth(height.max(h) + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn factor(&mut self, level: usize) -> Parsed {
        self.check_depth(level)?;
        if self.eat(b'-') {
            let (e, h) = self.factor(level + 1)?;
            return Ok((Expr::Neg(Box::new(e)), h + 1));
        }
        self.power(level + 1)
    }

    fn power(&mut self, level: usize) -> Parsed {
        self.check_depth(level)?;
        let (base, hb) = self.atom(level + 1)?;
        if self.eat(b'^') {
            let (exp, he) = self.factor(level + 1)?;
            let h = self.check_depth(hb.max(he) + 1)?;
            return Ok((Expr::bin(BinOp::Pow, base, exp), h));
        }
        Ok((base, hb))
    }

    fn atom(&mut self, level: usize) -> Parsed {
        self.check_depth(level)?;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(level),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(level + 1)?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a number, variable, function or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Parsed {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut mantissa = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            mantissa += digits(self);
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        if !value.is_finite() {
            return Err(ExprError::Syntax {
                offset: start,
                message: format!("number `{text}` overflows"),
            });
        }
        Ok((Expr::Num(value), 1))
    }

    fn identifier(&mut self, level: usize) -> Parsed {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let var = match name {
            "t" => Some(Var::T),
            "u" => Some(Var::U),
            _ => None,
        };
        if let Some(v) = var {
            if self.vars.allows(v) {
                return Ok((Expr::Var(v), 1));
            }
        } else if let Some(func) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(self.error(&format!("expected `(` after `{name}`")));
            }
            let (arg, h) = self.expr(level + 1)?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok((Expr::call(func, arg), h + 1));
        }
        Err(ExprError::UnknownIdentifier {
            name: name.to_string(),
            offset: start,
        })
    }
}
