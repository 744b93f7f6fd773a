//! Reader and writer for the BIF text format (discrete variables only).
//!
//! Supported blocks are `network`, `variable` and `probability`.
//! `property` statements are skipped. Inside a probability block a row
//! is given either as `(s1, s2, ...) p1, p2, ...;` naming the parent states,
//! as `default p1, ...;` for every configuration not listed, or as
//! `table ...;` with all rows concatenated (parent configurations in
//! mixed-radix order, last parent fastest, child state fastest within a row).

use std::collections::HashMap;
use std::fmt::Write;

use crate::bnmodel::{BnError, Cpt, DiscreteBayesNet, Variable};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, BnError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let mut word = String::new();
    let mut word_pos = (0, 0);

    macro_rules! flush {
        () => {
            if !word.is_empty() {
                out.push(Token {
                    tok: Tok::Word(std::mem::take(&mut word)),
                    line: word_pos.0,
                    column: word_pos.1,
                });
            }
        };
    }

    while let Some(c) = chars.next() {
        let here = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
        match c {
            '/' if matches!(chars.peek(), Some('/')) => {
                flush!();
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        column = 1;
                        break;
                    }
                }
            }
            '/' if matches!(chars.peek(), Some('*')) => {
                flush!();
                chars.next();
                column += 1;
                let mut prev = ' ';
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        column = 1;
                    } else {
                        column += 1;
                    }
                    if prev == '*' && c == '/' {
                        closed = true;
                        break;
                    }
                    prev = c;
                }
                if !closed {
                    return Err(BnError::parse(here.0, here.1, "unterminated comment"));
                }
            }
            c if c.is_whitespace() => flush!(),
            '{' | '}' | '(' | ')' | '[' | ']' | ';' | ',' | '|' => {
                flush!();
                out.push(Token { tok: Tok::Punct(c), line: here.0, column: here.1 });
            }
            c => {
                if word.is_empty() {
                    word_pos = here;
                }
                word.push(c);
            }
        }
    }
    flush!();
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

struct RawVar {
    name: String,
    states: Vec<String>,
    at: (usize, usize),
}

enum RawRow {
    Table(Vec<f64>),
    Default(Vec<f64>),
    Keyed(Vec<String>, Vec<f64>, (usize, usize)),
}

struct RawProb {
    child: String,
    parents: Vec<String>,
    rows: Vec<RawRow>,
    at: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, BnError> {
        let (l, c) = self.here();
        Err(BnError::parse(l, c, msg))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, p: char) -> Result<(), BnError> {
        match self.peek() {
            Some(Token { tok: Tok::Punct(q), .. }) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{p}'")),
        }
    }

    fn eat_punct(&mut self, p: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Punct(q), .. }) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<String, BnError> {
        match self.peek() {
            Some(Token { tok: Tok::Word(w), .. }) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn skip_statement(&mut self) -> Result<(), BnError> {
        loop {
            match self.next() {
                Some(Token { tok: Tok::Punct(';'), .. }) => return Ok(()),
                Some(Token { tok: Tok::Punct('}'), .. }) | None => {
                    self.pos -= 1;
                    return self.err("expected ';'");
                }
                _ => {}
            }
        }
    }

    fn skip_block(&mut self) -> Result<(), BnError> {
        self.expect_punct('{')?;
        let mut depth = 1;
        while depth > 0 {
            match self.next() {
                Some(Token { tok: Tok::Punct('{'), .. }) => depth += 1,
                Some(Token { tok: Tok::Punct('}'), .. }) => depth -= 1,
                Some(_) => {}
                None => return self.err("unterminated block"),
            }
        }
        Ok(())
    }

    /// Comma-separated list of words, up to (not including) `close`.
    fn word_list(&mut self, close: char) -> Result<Vec<String>, BnError> {
        let mut out = vec![self.word()?];
        while self.eat_punct(',') {
            out.push(self.word()?);
        }
        self.expect_punct(close)?;
        Ok(out)
    }

    fn numbers(&mut self) -> Result<Vec<f64>, BnError> {
        let mut out = Vec::new();
        loop {
            let at = self.here();
            let w = self.word()?;
            let v: f64 = w
                .parse()
                .map_err(|_| BnError::parse(at.0, at.1, format!("invalid number '{w}'")))?;
            out.push(v);
            self.eat_punct(',');
            if self.eat_punct(';') {
                return Ok(out);
            }
        }
    }

    fn variable(&mut self) -> Result<RawVar, BnError> {
        let at = self.here();
        let name = self.word()?;
        self.expect_punct('{')?;
        let mut states = None;
        while !self.eat_punct('}') {
            let kw_at = self.here();
            match self.word()?.as_str() {
                "type" => {
                    let kind = self.word()?;
                    if kind != "discrete" {
                        return Err(BnError::parse(kw_at.0, kw_at.1, format!("unsupported type '{kind}'")));
                    }
                    self.expect_punct('[')?;
                    let k_at = self.here();
                    let k: usize = self
                        .word()?
                        .parse()
                        .map_err(|_| BnError::parse(k_at.0, k_at.1, "invalid cardinality"))?;
                    self.expect_punct(']')?;
                    self.expect_punct('{')?;
                    let list = self.word_list('}')?;
                    if list.len() != k {
                        return Err(BnError::parse(
                            k_at.0,
                            k_at.1,
                            format!("{name}: declared {k} states, listed {}", list.len()),
                        ));
                    }
                    self.expect_punct(';')?;
                    states = Some(list);
                }
                "property" => self.skip_statement()?,
                other => {
                    return Err(BnError::parse(kw_at.0, kw_at.1, format!("unexpected '{other}' in variable")))
                }
            }
        }
        match states {
            Some(states) => Ok(RawVar { name, states, at }),
            None => Err(BnError::parse(at.0, at.1, format!("variable {name} has no type"))),
        }
    }

    fn probability(&mut self) -> Result<RawProb, BnError> {
        let at = self.here();
        self.expect_punct('(')?;
        let child = self.word()?;
        let mut parents = Vec::new();
        if self.eat_punct('|') {
            parents = self.word_list(')')?;
        } else {
            self.expect_punct(')')?;
        }
        self.expect_punct('{')?;
        let mut rows = Vec::new();
        while !self.eat_punct('}') {
            let row_at = self.here();
            if self.eat_punct('(') {
                let key = self.word_list(')')?;
                rows.push(RawRow::Keyed(key, self.numbers()?, row_at));
                continue;
            }
            match self.word()?.as_str() {
                "table" => rows.push(RawRow::Table(self.numbers()?)),
                "default" => rows.push(RawRow::Default(self.numbers()?)),
                "property" => self.skip_statement()?,
                other => {
                    return Err(BnError::parse(row_at.0, row_at.1, format!("unexpected '{other}' in probability")))
                }
            }
        }
        Ok(RawProb { child, parents, rows, at })
    }
}

/// Parses BIF text. Block order is free: probability blocks may precede
/// the variables they mention.
pub fn parse_bif(text: &str) -> Result<DiscreteBayesNet, BnError> {
    let toks = tokenize(text)?;
    let end = text.lines().count().max(1);
    let mut p = Parser { toks, pos: 0, end: (end, 1) };
    let mut net_name = String::from("unknown");
    let mut vars = Vec::new();
    let mut probs = Vec::new();
    while p.peek().is_some() {
        let at = p.here();
        match p.word()?.as_str() {
            "network" => {
                if !matches!(p.peek(), Some(Token { tok: Tok::Punct('{'), .. })) {
                    net_name = p.word()?;
                }
                p.skip_block()?;
            }
            "variable" => vars.push(p.variable()?),
            "probability" => probs.push(p.probability()?),
            other => return Err(BnError::parse(at.0, at.1, format!("unexpected '{other}'"))),
        }
    }
    assemble(net_name, vars, probs)
}

fn assemble(name: String, raw_vars: Vec<RawVar>, probs: Vec<RawProb>) -> Result<DiscreteBayesNet, BnError> {
    let mut index = HashMap::new();
    for (i, v) in raw_vars.iter().enumerate() {
        if index.insert(v.name.clone(), i).is_some() {
            return Err(BnError::parse(v.at.0, v.at.1, format!("duplicate variable {}", v.name)));
        }
    }
    let vars: Vec<Variable> = raw_vars
        .into_iter()
        .map(|v| Variable { name: v.name, states: v.states })
        .collect();
    let mut cpts: Vec<Option<Cpt>> = vec![None; vars.len()];
    for prob in probs {
        let (l, c) = prob.at;
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| BnError::parse(l, c, format!("unknown variable {name}")))
        };
        let v = lookup(&prob.child)?;
        if cpts[v].is_some() {
            return Err(BnError::parse(l, c, format!("second probability block for {}", prob.child)));
        }
        let parents = prob.parents.iter().map(|p| lookup(p)).collect::<Result<Vec<_>, _>>()?;
        let card = vars[v].cardinality();
        let configs: usize = parents.iter().map(|&p| vars[p].cardinality()).product();
        let mut rows: Vec<Option<Vec<f64>>> = vec![None; configs];
        let mut default = None;
        for row in prob.rows {
            match row {
                RawRow::Table(values) => {
                    if values.len() != configs * card {
                        return Err(BnError::parse(
                            l,
                            c,
                            format!("{}: table has {} values, expected {}", prob.child, values.len(), configs * card),
                        ));
                    }
                    for (r, chunk) in values.chunks(card).enumerate() {
                        rows[r] = Some(chunk.to_vec());
                    }
                }
                RawRow::Default(values) => default = Some(values),
                RawRow::Keyed(key, values, (rl, rc)) => {
                    if key.len() != parents.len() {
                        return Err(BnError::parse(rl, rc, "parent state list has the wrong length"));
                    }
                    let mut idx = 0;
                    for (s, &p) in key.iter().zip(&parents) {
                        let k = vars[p]
                            .states
                            .iter()
                            .position(|x| x == s)
                            .ok_or_else(|| BnError::parse(rl, rc, format!("unknown state {s} of {}", vars[p].name)))?;
                        idx = idx * vars[p].cardinality() + k;
                    }
                    rows[idx] = Some(values);
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.or_else(|| default.clone()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| BnError::parse(l, c, format!("{}: missing parent configurations", prob.child)))?;
        cpts[v] = Some(Cpt { parents, rows });
    }
    let cpts = cpts
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| BnError::Invalid(format!("no probability block for {}", vars[i].name))))
        .collect::<Result<Vec<_>, _>>()?;
    DiscreteBayesNet::new(name, vars, cpts)
}

/// Writes a network as BIF. Output parses back to an identical network.
pub fn to_bif(net: &DiscreteBayesNet) -> String {
    let mut s = String::new();
    writeln!(s, "network {} {{\n}}", net.name()).unwrap();
    for v in net.variables() {
        writeln!(s, "variable {} {{", v.name).unwrap();
        writeln!(s, "  type discrete [ {} ] {{ {} }};", v.cardinality(), v.states.join(", ")).unwrap();
        writeln!(s, "}}").unwrap();
    }
    let fmt_row = |row: &[f64]| row.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join(", ");
    for (i, v) in net.variables().iter().enumerate() {
        let cpt = net.cpt(i);
        if cpt.parents.is_empty() {
            writeln!(s, "probability ( {} ) {{", v.name).unwrap();
            writeln!(s, "  table {};", fmt_row(&cpt.rows[0])).unwrap();
        } else {
            let names: Vec<&str> = cpt.parents.iter().map(|&p| net.variable(p).name.as_str()).collect();
            writeln!(s, "probability ( {} | {} ) {{", v.name, names.join(", ")).unwrap();
            let cards: Vec<usize> = cpt.parents.iter().map(|&p| net.variable(p).cardinality()).collect();
            for (r, row) in cpt.rows.iter().enumerate() {
                let mut rem = r;
                let mut key = vec![""; cards.len()];
                for k in (0..cards.len()).rev() {
                    key[k] = &net.variable(cpt.parents[k]).states[rem % cards[k]];
                    rem /= cards[k];
                }
                writeln!(s, "  ({}) {};", key.join(", "), fmt_row(row)).unwrap();
            }
        }
        writeln!(s, "}}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "network tiny {\n}\n\
        variable A {\n  type discrete [ 2 ] { a0, a1 };\n}\n\
        variable B {\n  type discrete [ 3 ] { lo, mid, >=hi };\n  property weight 3;\n}\n\
        probability ( A ) {\n  table 0.3, 0.7;\n}\n\
        probability ( B | A ) {\n  (a0) 0.2, 0.3, 0.5;\n  (a1) 1.0, 0.0, 0.0;\n}\n";

    #[test]
    fn two_nodes() {
        let net = parse_bif(TWO).unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net.dag().edges(), vec![(0, 1)]);
        assert_eq!(net.cpt(1).rows, vec![vec![0.2, 0.3, 0.5], vec![1.0, 0.0, 0.0]]);
        assert_eq!(net.variable(1).states[2], ">=hi");
        assert_eq!(net.name(), "tiny");
    }

    #[test]
    fn round_trip() {
        let net = parse_bif(TWO).unwrap();
        assert_eq!(parse_bif(&to_bif(&net)).unwrap(), net);
    }

    #[test]
    fn default_rows_and_comments() {
        let text = "// header\nvariable A { type discrete [ 2 ] { x, y }; }\n/* block\n comment */\n\
            variable B { type discrete [ 2 ] { x, y }; }\n\
            probability ( A ) { table 0.5, 0.5; }\n\
            probability ( B | A ) { (x) 0.1, 0.9; default 0.6, 0.4; }\n";
        let net = parse_bif(text).unwrap();
        assert_eq!(net.cpt(1).rows[1], vec![0.6, 0.4]);
    }

    #[test]
    fn bad_row_sum() {
        let text = TWO.replace("0.2, 0.3, 0.5", "0.2, 0.3, 0.6");
        assert!(matches!(parse_bif(&text), Err(BnError::Invalid(_))));
    }

    #[test]
    fn cycle_rejected() {
        let text = "variable A { type discrete [ 2 ] { x, y }; }\n\
            variable B { type discrete [ 2 ] { x, y }; }\n\
            probability ( A | B ) { (x) 0.5, 0.5; (y) 0.5, 0.5; }\n\
            probability ( B | A ) { (x) 0.5, 0.5; (y) 0.5, 0.5; }\n";
        assert!(matches!(parse_bif(text), Err(BnError::Cyclic)));
    }

    #[test]
    fn error_position() {
        let text = "variable A {\n  type discrete [ 2 ] { x, y }\n}\n";
        match parse_bif(text) {
            Err(BnError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 1)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_bif("variable A { type discrete [ two ] { x }; }") {
            Err(BnError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 30)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_parent() {
        let text = "variable A { type discrete [ 2 ] { x, y }; }\nprobability ( A | Q ) { (x) 0.5, 0.5; }\n";
        assert!(matches!(parse_bif(text), Err(BnError::Parse { line: 2, .. })));
    }
}
