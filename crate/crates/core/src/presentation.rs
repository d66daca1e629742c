//! Free-group words and finite presentations.
//!
//! A presentation file looks like
//!
//! ```text
//! # generalized quaternion group of order 16
//! name: q16;
//! gens: a, b;
//! relators: a^4 = b^2, a*b*a = b;
//! prime: 2;
//! ```
//!
//! Optional `name:` and `note:` headers precede the three mandatory sections.
//! Relators are products of `name` or `name^k` terms; `u = v` is stored as the
//! reduced word `u*v^-1`, and a chain `u = v = w` yields one relator per `=`.
//! The literal `1` denotes the empty product. `#` starts a comment that runs to
//! the end of the line; whitespace is insignificant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn gen(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Exponent sign, `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index in a coset table: `2i` for `x_i`, `2i + 1` for its inverse.
    pub fn column(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_column(col: usize) -> Self {
        Letter { generator: col / 2, inverse: col % 2 == 1 }
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

/// Freely reduces a letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(&last) if last == l.inverted() => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x_i^k` as a reduced word.
    pub fn power(generator: usize, exponent: i64) -> Self {
        let l = Letter::new(generator, exponent < 0);
        Word(vec![l; exponent.unsigned_abs() as usize])
    }

    pub fn mul(&self, other: &Word) -> Word {
        reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Largest generator index used, plus one.
    pub fn min_arity(&self) -> usize {
        self.0.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    /// Exponent sums per generator: the image of the word in `Z^arity`.
    pub fn exponent_vector(&self, arity: usize) -> Vec<i64> {
        let mut v = vec![0; arity];
        for l in &self.0 {
            v[l.generator] += l.sign();
        }
        v
    }

    /// Writes the word with runs compressed to powers, e.g. `a^4*b^-2`.
    pub fn format(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            let name = &names[l.generator];
            if run == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        reduce(iter)
    }
}

/// A finite presentation together with the primes it is to be analysed at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    name: Option<String>,
    note: Option<String>,
    generator_names: Vec<String>,
    relators: Vec<Word>,
    primes: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>, primes: Vec<u64>) -> Result<Self> {
        for (i, name) in generator_names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(Error::Syntax { line: 0, col: 0, message: format!("invalid generator name `{name}`") });
            }
            if generator_names[..i].contains(name) {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        let arity = generator_names.len();
        for r in &relators {
            if r.is_empty() {
                return Err(Error::TrivialRelator { line: 0, col: 0 });
            }
            if r.min_arity() > arity {
                return Err(Error::GeneratorOutOfRange { index: r.min_arity() - 1, arity });
            }
        }
        if primes.is_empty() {
            return Err(Error::Precondition("a presentation needs at least one prime".into()));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Presentation { name: None, note: None, generator_names, relators, primes })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn arity(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Same presentation, analysed at different primes.
    pub fn with_primes(&self, primes: Vec<u64>) -> Result<Self> {
        let mut p = Presentation::new(self.generator_names.clone(), self.relators.clone(), primes)?;
        p.name = self.name.clone();
        p.note = self.note.clone();
        Ok(p)
    }

    /// Relator exponent vectors, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_vector(self.arity())).collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name: {name};")?;
        }
        if let Some(note) = &self.note {
            writeln!(f, "note: {note};")?;
        }
        writeln!(f, "gens: {};", self.generator_names.join(", "))?;
        let rels: Vec<String> = self.relators.iter().map(|r| r.format(&self.generator_names)).collect();
        writeln!(f, "relators: {};", rels.join(", "))?;
        let primes: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        writeln!(f, "prime: {};", primes.join(", "))
    }
}

impl std::str::FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

/// Parses the textual presentation format.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    Parser::new(text).presentation()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line, col: self.col, message: message.into() })
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c == '#' {
                while let Some(c) = self.peek_raw() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => self.err(format!("expected `{c}`, found `{d}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize)> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        match self.peek_raw() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return self.err(format!("expected identifier, found `{c}`")),
            None => return self.err("expected identifier, found end of input"),
        }
        let mut s = String::new();
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok((s, line, col))
    }

    fn unsigned(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return self.err("expected an integer");
        }
        match digits.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err(format!("integer `{digits}` out of range")),
        }
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let v = self.unsigned()?;
        let v = i64::try_from(v).or_else(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// Reads `keyword:` and returns the keyword.
    fn section(&mut self) -> Result<String> {
        let (kw, _, _) = self.ident()?;
        self.expect(':')?;
        Ok(kw)
    }

    fn raw_until_semicolon(&mut self) -> Result<String> {
        let mut s = String::new();
        loop {
            match self.bump() {
                Some(';') => return Ok(s.trim().to_string()),
                Some('\n') | None => return self.err("header value must end with `;` on the same line"),
                Some(c) => s.push(c),
            }
        }
    }

    fn presentation(&mut self) -> Result<Presentation> {
        let mut name = None;
        let mut note = None;
        let mut kw = self.section()?;
        loop {
            match kw.as_str() {
                "name" if name.is_none() => name = Some(self.raw_until_semicolon()?),
                "note" if note.is_none() => note = Some(self.raw_until_semicolon()?),
                _ => break,
            }
            kw = self.section()?;
        }
        if kw != "gens" {
            return self.err(format!("expected `gens:`, found `{kw}:`"));
        }
        let mut names: Vec<String> = Vec::new();
        if self.peek() != Some(';') {
            loop {
                let (n, _, _) = self.ident()?;
                if names.contains(&n) {
                    return Err(Error::DuplicateGenerator(n));
                }
                names.push(n);
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(';')?;

        let kw = self.section()?;
        if kw != "relators" {
            return self.err(format!("expected `relators:`, found `{kw}:`"));
        }
        let mut relators = Vec::new();
        if self.peek() != Some(';') {
            loop {
                self.relator(&names, &mut relators)?;
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(';')?;

        let kw = self.section()?;
        if kw != "prime" && kw != "primes" {
            return self.err(format!("expected `prime:`, found `{kw}:`"));
        }
        let mut primes = Vec::new();
        loop {
            let p = self.unsigned()?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            primes.push(p);
            if self.peek() == Some(',') {
                self.bump();
            } else {
                break;
            }
        }
        // the final terminator may be omitted at end of input
        if self.peek().is_some() {
            self.expect(';')?;
        }
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected `{c}` after the prime section"));
        }

        let mut pres = Presentation::new(names, relators, primes)?;
        pres.name = name;
        pres.note = note;
        Ok(pres)
    }

    fn relator(&mut self, names: &[String], out: &mut Vec<Word>) -> Result<()> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let mut prev = self.product(names)?;
        let mut chained = false;
        while self.peek() == Some('=') {
            self.bump();
            let next = self.product(names)?;
            let w = prev.mul(&next.inverse());
            if w.is_empty() {
                return Err(Error::TrivialRelator { line, col });
            }
            out.push(w);
            prev = next;
            chained = true;
        }
        if !chained {
            if prev.is_empty() {
                return Err(Error::TrivialRelator { line, col });
            }
            out.push(prev);
        }
        Ok(())
    }

    fn product(&mut self, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            self.term(names, &mut letters)?;
            if self.peek() == Some('*') {
                self.bump();
            } else {
                break;
            }
        }
        Ok(reduce(letters))
    }

    fn term(&mut self, names: &[String], letters: &mut Vec<Letter>) -> Result<()> {
        if self.peek() == Some('1') {
            self.bump();
            return Ok(());
        }
        let (name, line, col) = self.ident()?;
        let Some(g) = names.iter().position(|n| *n == name) else {
            return Err(Error::UnknownGenerator { name, line, col });
        };
        let exp = if self.peek() == Some('^') {
            self.bump();
            self.signed()?
        } else {
            1
        };
        let l = Letter::new(g, exp < 0);
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::gen(0)
    }
    fn b() -> Letter {
        Letter::gen(1)
    }

    #[test]
    fn cancellation() {
        assert!(reduce([a(), a().inverted()]).is_empty());
        assert_eq!(reduce([a(), b(), b().inverted(), a()]), reduce([a(), a()]));
        let w = reduce([a(), b(), a().inverted()]);
        assert_eq!(reduce(w.letters().iter().copied()), w);
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(reduce([a(), b(), a().inverted()]).exponent_vector(2), vec![0, 1]);
        assert_eq!(Word::power(0, 4).mul(&Word::power(1, -2)).exponent_vector(2), vec![4, -2]);
        assert_eq!(Word::empty().exponent_vector(3), vec![0, 0, 0]);
    }

    #[test]
    fn parse_cyclic() {
        let p = parse_presentation("gens: a; relators: a^4; prime: 2").unwrap();
        assert_eq!(p.arity(), 1);
        assert_eq!(p.relators(), &[Word::power(0, 4)]);
        assert_eq!(p.primes(), &[2]);
    }

    #[test]
    fn parse_two_relator_quaternion_display() {
        let p = parse_presentation("gens: a,b; relators: a^4*b^-2, a*b*a*b^-1; prime: 2;").unwrap();
        let q = parse_presentation("gens: a,b; relators: a^4 = b^2, a*b*a = b; prime: 2;").unwrap();
        assert_eq!(p, q);
        assert_eq!(p.relators()[1].format(p.generator_names()), "a*b*a*b^-1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_presentation("gens: a; relators: c^2; prime: 2"),
            Err(Error::UnknownGenerator { ref name, line: 1, col: 20 }) if name == "c"
        ));
        assert!(matches!(
            parse_presentation("gens: a, a; relators: a; prime: 2;"),
            Err(Error::DuplicateGenerator(_))
        ));
        assert!(matches!(parse_presentation("gens: a; relators: a; prime: 4;"), Err(Error::NotPrime(4))));
        assert!(matches!(
            parse_presentation("gens: a;\nrelators: a*a^-1; prime: 2;"),
            Err(Error::TrivialRelator { line: 2, .. })
        ));
        match parse_presentation("gens: a;\n  relators a; prime: 2;") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_headers_and_empty_sections() {
        let text = "# free presentation\nname: free0;\nnote: no generators at all;\ngens: ;\nrelators: ;\nprime: 2, 3;\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.arity(), 0);
        assert!(p.relators().is_empty());
        assert_eq!(p.name(), Some("free0"));
        assert_eq!(p.note(), Some("no generators at all"));
        assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn equation_chain_and_identity() {
        let p = parse_presentation("gens: x, y; relators: x^2 = y^2 = 1; prime: 2;").unwrap();
        assert_eq!(p.relators(), &[Word::power(0, 2).mul(&Word::power(1, -2)), Word::power(1, 2)]);
    }
}
