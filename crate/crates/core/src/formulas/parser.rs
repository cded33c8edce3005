use super::ast::{ExtAtom, ExtCmp, Formula};
use super::{FormulaError, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Sym(String),
    Int(i64),
    Exists,
    Forall,
    True,
    False,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    Lt,
    Le,
    Eq,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(v) => format!("variable `{v}`"),
        Tok::Sym(s) => format!("symbol `{s}`"),
        Tok::Int(i) => format!("integer `{i}`"),
        other => format!("{other:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: String| FormulaError::Syntax { offset, message };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
            continue;
        }
        if c == '<' {
            if bytes.get(i + 1) == Some(&b'=') {
                out.push((start, Tok::Le));
                i += 2;
            } else {
                out.push((start, Tok::Lt));
                i += 1;
            }
            continue;
        }
        if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            out.push((start, Tok::Arrow));
            i += 2;
            continue;
        }
        if c == '-' || c.is_ascii_digit() {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let lit = &text[start..i];
            let n = lit
                .parse::<i64>()
                .map_err(|_| err(start, format!("bad integer `{lit}`")))?;
            out.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "true" => Tok::True,
                "false" => Tok::False,
                w if c.is_ascii_uppercase() => Tok::Sym(w.to_string()),
                w if w.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()) => {
                    Tok::Var(w.to_string())
                }
                w => return Err(err(start, format!("bad variable name `{w}`"))),
            };
            out.push((start, tok));
            continue;
        }
        return Err(err(start, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

struct STerm {
    equiv: String,
    shift: i64,
    anchor: String,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, FormulaError> {
        match self.peek() {
            None => self.error(format!("expected {wanted}, found end of input")),
            Some(t) => self.error(format!("expected {wanted}, found {}", describe(t))),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), FormulaError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn variable(&mut self) -> Result<String, FormulaError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.unexpected("a variable"),
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let is_exists = self.peek() == Some(&Tok::Exists);
                self.pos += 1;
                let v = self.variable()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.implication()?;
                Ok(if is_exists {
                    Formula::exists(&v, body)
                } else {
                    Formula::forall(&v, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Sym(s)) if s == "S" => self.successor_first(),
            Some(Tok::Sym(s)) => self.application(s),
            Some(Tok::Var(_)) => self.variable_first(),
            _ => self.unexpected("a formula"),
        }
    }

    fn application(&mut self, name: String) -> Result<Formula, FormulaError> {
        let at = self.offset();
        self.pos += 1;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.variable()?];
        while self.eat(&Tok::Comma) {
            args.push(self.variable()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        let is_pred = self.sig.has_predicate(&name);
        let is_equiv = self.sig.equivalence_convex(&name).is_some();
        match args.len() {
            1 if is_pred => Ok(Formula::Pred(name, args.remove(0))),
            2 if is_equiv => {
                let y = args.pop().unwrap();
                let x = args.pop().unwrap();
                Ok(Formula::Equiv(name, x, y))
            }
            n if is_pred || is_equiv => Err(FormulaError::Arity {
                offset: at,
                name,
                expected: if is_pred { 1 } else { 2 },
                found: n,
            }),
            _ => Err(FormulaError::UnknownSymbol { offset: at, name }),
        }
    }

    fn sterm(&mut self) -> Result<STerm, FormulaError> {
        self.pos += 1;
        self.expect(Tok::LBrack, "`[`")?;
        let at = self.offset();
        let equiv = match self.peek() {
            Some(Tok::Sym(s)) => s.clone(),
            _ => return self.unexpected("an equivalence name"),
        };
        self.pos += 1;
        match self.sig.equivalence_convex(&equiv) {
            None => return Err(FormulaError::UnknownSymbol { offset: at, name: equiv }),
            Some(false) => return Err(FormulaError::NotConvex { offset: at, name: equiv }),
            Some(true) => {}
        }
        self.expect(Tok::Comma, "`,`")?;
        let shift = match self.peek() {
            Some(Tok::Int(n)) => *n,
            _ => return self.unexpected("an integer shift"),
        };
        self.pos += 1;
        self.expect(Tok::RBrack, "`]`")?;
        self.expect(Tok::LParen, "`(`")?;
        let anchor = self.variable()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(STerm {
            equiv,
            shift,
            anchor,
        })
    }

    fn comparison(&mut self) -> Result<bool, FormulaError> {
        if self.eat(&Tok::Lt) {
            Ok(true)
        } else if self.eat(&Tok::Le) {
            Ok(false)
        } else {
            self.unexpected("`<` or `<=`")
        }
    }

    fn ext(elem: &str, cmp: ExtCmp, t: &STerm) -> Formula {
        Formula::Ext(ExtAtom {
            elem: elem.to_string(),
            cmp,
            equiv: t.equiv.clone(),
            shift: t.shift,
            anchor: t.anchor.clone(),
        })
    }

    fn successor_first(&mut self) -> Result<Formula, FormulaError> {
        let lower = self.sterm()?;
        let strict = self.comparison()?;
        let x = self.variable()?;
        let cmp = if strict {
            ExtCmp::AboveStrict
        } else {
            ExtCmp::InOrAbove
        };
        let first = Self::ext(&x, cmp, &lower);
        if matches!(self.peek(), Some(Tok::Lt) | Some(Tok::Le)) {
            let strict = self.comparison()?;
            if self.peek() != Some(&Tok::Sym("S".into())) {
                return self.unexpected("a successor term `S[E,n](y)`");
            }
            let upper = self.sterm()?;
            let cmp = if strict {
                ExtCmp::BelowStrict
            } else {
                ExtCmp::BelowOrIn
            };
            return Ok(first.and(Self::ext(&x, cmp, &upper)));
        }
        Ok(first)
    }

    fn variable_first(&mut self) -> Result<Formula, FormulaError> {
        let x = self.variable()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                let y = self.variable()?;
                Ok(Formula::Eq(x, y))
            }
            Some(Tok::Lt) | Some(Tok::Le) => {
                let strict = self.comparison()?;
                match self.peek() {
                    Some(Tok::Sym(s)) if s == "S" => {
                        let t = self.sterm()?;
                        let cmp = if strict {
                            ExtCmp::BelowStrict
                        } else {
                            ExtCmp::BelowOrIn
                        };
                        Ok(Self::ext(&x, cmp, &t))
                    }
                    Some(Tok::Var(_)) => {
                        let y = self.variable()?;
                        Ok(if strict {
                            Formula::Lt(x, y)
                        } else {
                            Formula::le(&x, &y)
                        })
                    }
                    _ => self.unexpected("a variable or successor term"),
                }
            }
            _ => self.unexpected("`<`, `<=` or `=`"),
        }
    }
}

/// Parses a formula, resolving symbols against `sig`.
///
/// `x <= y` between two variables is accepted as shorthand for
/// `(x < y | x = y)`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        sig,
    };
    let f = p.implication()?;
    if p.pos < p.toks.len() {
        return p.unexpected("end of input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["P0"], vec![("E0".to_string(), true), ("R".to_string(), false)])
    }

    fn parse(t: &str) -> Result<Formula, FormulaError> {
        parse_formula(t, &sig())
    }

    #[test]
    fn parses_examples() {
        let f = parse("exists z. (x < z & z < y)").unwrap();
        assert_eq!(
            f,
            Formula::exists("z", Formula::lt("x", "z").and(Formula::lt("z", "y")))
        );
        let g = parse("x <= S[E0,2](y)").unwrap();
        assert_eq!(g, Formula::ext("x", ExtCmp::BelowOrIn, "E0", 2, "y"));
        assert_eq!(g.free_vars().len(), 2);
    }

    #[test]
    fn syntax_error_offset() {
        assert!(matches!(
            parse("x <"),
            Err(FormulaError::Syntax { offset: 3, .. })
        ));
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(matches!(parse("Q(x)"), Err(FormulaError::UnknownSymbol { .. })));
        assert!(matches!(parse("x < S[R,1](y)"), Err(FormulaError::NotConvex { .. })));
        assert!(matches!(parse("P0(x,y)"), Err(FormulaError::Arity { .. })));
    }

    #[test]
    fn precedence_and_chains() {
        let f = parse("!P0(x) & x < y | x = y -> R(x,y) -> true").unwrap();
        let expected = Formula::pred("P0", "x")
            .not()
            .and(Formula::lt("x", "y"))
            .or(Formula::eq("x", "y"))
            .implies(Formula::equiv("R", "x", "y").implies(Formula::True));
        assert_eq!(f, expected);
        let band = parse("S[Id,-1](y) < x <= S[Full,0](z)").unwrap();
        assert_eq!(
            band,
            Formula::ext("x", ExtCmp::AboveStrict, "Id", -1, "y")
                .and(Formula::ext("x", ExtCmp::BelowOrIn, "Full", 0, "z"))
        );
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse("exists z. x < z & z < y").unwrap();
        assert!(matches!(f, Formula::Exists(..)));
        let g = parse("(exists z. x < z) & z < y").unwrap();
        assert!(matches!(g, Formula::And(..)));
        assert_eq!(parse(&g.to_string()).unwrap(), g);
    }
}
