//! Parsers for the four input formats.
//!
//! All formats are UTF-8 and line-oriented in spirit, with `%` comments:
//!
//! * KB files (`.fol`): one clause per statement, literals joined by `|`,
//!   `~` for negation, `.` terminator. Variables start with an uppercase
//!   letter or `_`; everything else (including quoted atoms and numerals)
//!   is a constant or function symbol. `:` and `#` are legal identifier
//!   characters, so namespaced names like `zoo:elephant` parse as plain
//!   symbols.
//! * Query files: `?- <conjunction> [answer V1, V2].` The tool negates the
//!   conjunction; the goal clause carries `~@(X1..Xk)` as its initial
//!   recording literal.
//! * Schema files (`.map`): `table name(col, ...) as pred/arity.`
//! * Data files (`.tab`): `tableName: v1, v2, ...` with constants only.
//!
//! A document registry format is also handled here:
//! `doc <id> { <abstraction clause>. ... }` where a clause line may carry
//! `pref(Var, "prefix")` constraints.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::store::{FactStore, Schema};
use crate::symbols::{PredKind, SymbolTable, VarId};
use crate::term::{Clause, ClauseOrigin, Literal, Term};

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Var(String),
    Str(String),    // "double quoted"
    Quoted(String), // 'single quoted' constant
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Pipe,
    Dot,
    Tilde,
    Slash,
    QueryArrow,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == ':' || c == '#'
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    macro_rules! push {
        ($t:expr) => {
            out.push(Spanned {
                tok: $t,
                line,
                col,
            })
        };
    }
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                push!(Tok::LParen);
                chars.next();
                col += 1;
            }
            ')' => {
                push!(Tok::RParen);
                chars.next();
                col += 1;
            }
            '{' => {
                push!(Tok::LBrace);
                chars.next();
                col += 1;
            }
            '}' => {
                push!(Tok::RBrace);
                chars.next();
                col += 1;
            }
            ',' => {
                push!(Tok::Comma);
                chars.next();
                col += 1;
            }
            '|' => {
                push!(Tok::Pipe);
                chars.next();
                col += 1;
            }
            '.' => {
                push!(Tok::Dot);
                chars.next();
                col += 1;
            }
            '~' => {
                push!(Tok::Tilde);
                chars.next();
                col += 1;
            }
            '/' => {
                push!(Tok::Slash);
                chars.next();
                col += 1;
            }
            '?' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    out.push(Spanned {
                        tok: Tok::QueryArrow,
                        line,
                        col: col - 1,
                    });
                    col += 1;
                } else {
                    return Err(Error::parse(line, col - 1, "expected `?-`"));
                }
            }
            '\'' | '"' => {
                let quote = c;
                let start_col = col;
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some(q) if q == quote => {
                            col += 1;
                            break;
                        }
                        Some('\n') => {
                            return Err(Error::parse(line, start_col, "unterminated string"))
                        }
                        Some(ch) => {
                            s.push(ch);
                            col += 1;
                        }
                        None => {
                            return Err(Error::parse(line, start_col, "unterminated string"))
                        }
                    }
                }
                out.push(Spanned {
                    tok: if quote == '\'' { Tok::Quoted(s) } else { Tok::Str(s) },
                    line,
                    col: start_col,
                });
            }
            c if is_ident_char(c) => {
                let start_col = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_char(c) {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                // A bare `:` used as separator (data files) would otherwise be
                // swallowed into the identifier; the data loader does not go
                // through this lexer, so ident-internal `:` is fine here.
                let first = s.chars().next().unwrap();
                let tok = if first.is_uppercase() || first == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                };
                out.push(Spanned {
                    tok,
                    line,
                    col: start_col,
                });
            }
            other => {
                return Err(Error::parse(line, col, format!("unexpected character `{other}`")))
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    st: &'a SymbolTable,
    scope: HashMap<String, VarId>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, st: &'a SymbolTable) -> Result<Parser<'a>> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            st,
            scope: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::parse(line, col, msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn new_clause_scope(&mut self) {
        self.scope.clear();
    }

    fn var(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.scope.get(name) {
            v
        } else {
            let v = self.st.var(name);
            self.scope.insert(name.to_string(), v);
            v
        }
    }

    fn parse_term(&mut self) -> Result<Term> {
        match self.bump() {
            Tok::Var(name) => Ok(Term::Var(self.var(&name))),
            Tok::Ident(name) | Tok::Quoted(name) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    loop {
                        args.push(self.parse_term()?);
                        match self.bump() {
                            Tok::Comma => continue,
                            Tok::RParen => break,
                            _ => return Err(self.err("expected `,` or `)`")),
                        }
                    }
                    let f = self.st.func(&name, args.len())?;
                    Ok(Term::App(f, args))
                } else {
                    Ok(Term::constant(self.st.func(&name, 0)?))
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn parse_literal(&mut self) -> Result<Literal> {
        let positive = if *self.peek() == Tok::Tilde {
            self.bump();
            false
        } else {
            true
        };
        let name = match self.bump() {
            Tok::Ident(n) | Tok::Quoted(n) => n,
            _ => return Err(self.err("expected a predicate symbol")),
        };
        if name == "@" {
            return Err(self.err("the predicate `@` is reserved for answers"));
        }
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.parse_term()?);
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
        }
        let pred = self.st.pred(&name, args.len(), PredKind::Ordinary)?;
        Ok(Literal::new(positive, pred, args))
    }
}

/// Parse a knowledge-base file: one clause per `.`-terminated statement,
/// empty recording parts throughout (`|` is disjunction here).
pub fn parse_kb(text: &str, st: &SymbolTable) -> Result<Vec<Clause>> {
    let mut p = Parser::new(text, st)?;
    let mut clauses = Vec::new();
    while *p.peek() != Tok::Eof {
        p.new_clause_scope();
        let mut lits = vec![p.parse_literal()?];
        loop {
            match p.bump() {
                Tok::Pipe => lits.push(p.parse_literal()?),
                Tok::Dot => break,
                _ => return Err(p.err("expected `|` or `.`")),
            }
        }
        clauses.push(Clause::new(lits, Vec::new(), ClauseOrigin::Kb));
    }
    Ok(clauses)
}

/// A parsed query: the goal clause (negated conjunction plus the initial
/// `~@` recording literal) and the ordered distinguished variables.
#[derive(Clone, Debug)]
pub struct DeductiveQuery {
    pub goal: Clause,
    /// Display names and ids of the distinguished variables, in order.
    pub distinguished: Vec<(String, VarId)>,
    pub undistinguished: Vec<VarId>,
}

pub fn parse_query(text: &str, st: &SymbolTable) -> Result<DeductiveQuery> {
    let mut p = Parser::new(text, st)?;
    p.expect(Tok::QueryArrow, "`?-`")?;
    p.new_clause_scope();
    let mut lits = Vec::new();
    loop {
        let lit = p.parse_literal()?;
        lits.push(lit);
        match p.bump() {
            Tok::Comma => continue,
            Tok::Dot => break,
            Tok::Ident(w) if w == "answer" => {
                let mut names = Vec::new();
                loop {
                    match p.bump() {
                        Tok::Var(n) => names.push(n),
                        _ => return Err(p.err("expected a variable in the answer list")),
                    }
                    match p.bump() {
                        Tok::Comma => continue,
                        Tok::Dot => break,
                        _ => return Err(p.err("expected `,` or `.`")),
                    }
                }
                return finish_query(p, lits, Some(names));
            }
            _ => return Err(p.err("expected `,`, `answer` or `.`")),
        }
    }
    finish_query(p, lits, None)
}

fn finish_query(
    p: Parser<'_>,
    lits: Vec<Literal>,
    answer_list: Option<Vec<String>>,
) -> Result<DeductiveQuery> {
    if lits.is_empty() {
        return Err(Error::Invalid("empty query conjunction".to_string()));
    }
    // first-occurrence order of variables across the conjunction
    let mut occ: Vec<VarId> = Vec::new();
    for l in &lits {
        l.for_each_var(&mut |v| {
            if !occ.contains(&v) {
                occ.push(v);
            }
        });
    }
    let name_of = |v: VarId| p.st.var_name(v);
    let distinguished: Vec<(String, VarId)> = match answer_list {
        Some(names) => {
            let mut out = Vec::new();
            for n in names {
                match p.scope.get(&n) {
                    Some(&v) => out.push((n, v)),
                    None => {
                        return Err(Error::Invalid(format!(
                            "unknown variable `{n}` in answer list"
                        )))
                    }
                }
            }
            out
        }
        None => occ.iter().map(|&v| (name_of(v), v)).collect(),
    };
    let dset: Vec<VarId> = distinguished.iter().map(|(_, v)| *v).collect();
    let undistinguished: Vec<VarId> = occ.iter().copied().filter(|v| !dset.contains(v)).collect();
    let at = p.st.answer_pred(distinguished.len())?;
    let recording = vec![Literal::new(
        false,
        at,
        dset.iter().map(|&v| Term::Var(v)).collect(),
    )];
    let goal = Clause::new(
        lits.iter().map(Literal::complement).collect(),
        recording,
        ClauseOrigin::Goal,
    );
    Ok(DeductiveQuery {
        goal,
        distinguished,
        undistinguished,
    })
}

/// Parse a schema mapping file.
pub fn parse_schema(text: &str, st: &SymbolTable) -> Result<Schema> {
    let mut p = Parser::new(text, st)?;
    let mut schema = Schema::new();
    while *p.peek() != Tok::Eof {
        match p.bump() {
            Tok::Ident(kw) if kw == "table" => {}
            _ => return Err(p.err("expected `table`")),
        }
        let table = match p.bump() {
            Tok::Ident(n) | Tok::Quoted(n) => n,
            _ => return Err(p.err("expected a table name")),
        };
        p.expect(Tok::LParen, "`(`")?;
        let mut cols = Vec::new();
        loop {
            match p.bump() {
                Tok::Ident(c) | Tok::Quoted(c) => cols.push(c),
                _ => return Err(p.err("expected a column name")),
            }
            match p.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return Err(p.err("expected `,` or `)`")),
            }
        }
        match p.bump() {
            Tok::Ident(kw) if kw == "as" => {}
            _ => return Err(p.err("expected `as`")),
        }
        let pred_name = match p.bump() {
            Tok::Ident(n) | Tok::Quoted(n) => n,
            _ => return Err(p.err("expected a predicate name")),
        };
        p.expect(Tok::Slash, "`/`")?;
        let arity: usize = match p.bump() {
            Tok::Ident(n) => n
                .parse()
                .map_err(|_| p.err("expected a numeric arity"))?,
            _ => return Err(p.err("expected a numeric arity")),
        };
        p.expect(Tok::Dot, "`.`")?;
        if arity != cols.len() {
            return Err(Error::ArityClash {
                name: pred_name,
                declared: arity,
                used: cols.len(),
            });
        }
        let pred = st.pred(&pred_name, arity, PredKind::Db)?;
        schema.add_table(&table, cols, pred, st)?;
    }
    Ok(schema)
}

/// Load a data file into a fact store. Lines have the form
/// `tableName: v1, v2, ...`; the separator is the first `:` whose left side
/// names a schema table (table names themselves may contain `:`).
pub fn load_facts(schema: &Schema, text: &str, st: &SymbolTable) -> Result<FactStore> {
    let mut store = FactStore::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('%') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut split = None;
        for (i, c) in line.char_indices() {
            if c == ':' && schema.table(line[..i].trim()).is_some() {
                split = Some(i);
                break;
            }
        }
        let (table_name, rest) = match split {
            Some(i) => (line[..i].trim(), &line[i + 1..]),
            None => {
                let head = line.split(':').next().unwrap_or(line).trim();
                return Err(Error::UnknownTable(head.to_string()));
            }
        };
        let info = schema.table(table_name).unwrap();
        let pred = info.pred;
        let arity = info.columns.len();
        let mut tuple = Vec::new();
        for v in rest.split(',') {
            let v = v.trim();
            if v.is_empty() {
                return Err(Error::parse(lineno + 1, 1, "empty value in data row"));
            }
            if v.contains('(') {
                return Err(Error::parse(
                    lineno + 1,
                    1,
                    format!("compound term `{v}` in data"),
                ));
            }
            let name = v.trim_matches('\'');
            tuple.push(st.func(name, 0)?);
        }
        if tuple.len() != arity {
            return Err(Error::ArityClash {
                name: table_name.to_string(),
                declared: arity,
                used: tuple.len(),
            });
        }
        store.insert(pred, tuple, st)?;
    }
    Ok(store)
}

/// One registered document: abstraction clauses with optional prefix
/// constraints on their variables.
#[derive(Clone, Debug)]
pub struct ParsedDocument {
    pub id: String,
    pub clauses: Vec<(Clause, Vec<(VarId, String)>)>,
}

pub fn parse_docs(text: &str, st: &SymbolTable) -> Result<Vec<ParsedDocument>> {
    let mut p = Parser::new(text, st)?;
    let mut docs = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.bump() {
            Tok::Ident(kw) if kw == "doc" => {}
            _ => return Err(p.err("expected `doc`")),
        }
        let id = match p.bump() {
            Tok::Ident(n) | Tok::Quoted(n) | Tok::Str(n) => n,
            _ => return Err(p.err("expected a document id")),
        };
        p.expect(Tok::LBrace, "`{`")?;
        let mut clauses = Vec::new();
        while *p.peek() != Tok::RBrace {
            p.new_clause_scope();
            let first = p.parse_abstraction_atom()?;
            let second = if *p.peek() == Tok::Pipe {
                p.bump();
                Some(p.parse_abstraction_atom()?)
            } else {
                None
            };
            if let Some(s) = &second {
                if *s != first {
                    return Err(p.err(
                        "abstraction clause must repeat the same atom on both sides of `|`",
                    ));
                }
            }
            let mut prefs = Vec::new();
            while let Tok::Ident(kw) = p.peek() {
                if kw != "pref" {
                    return Err(p.err("expected `pref` or `.`"));
                }
                p.bump();
                p.expect(Tok::LParen, "`(`")?;
                let var = match p.bump() {
                    Tok::Var(n) => match p.scope.get(&n) {
                        Some(&v) => v,
                        None => {
                            return Err(p.err(format!(
                                "pref constraint on `{n}` which does not occur in the clause"
                            )))
                        }
                    },
                    _ => return Err(p.err("expected a variable")),
                };
                p.expect(Tok::Comma, "`,`")?;
                let prefix = match p.bump() {
                    Tok::Str(s) | Tok::Quoted(s) => s,
                    _ => return Err(p.err("expected a quoted prefix")),
                };
                p.expect(Tok::RParen, "`)`")?;
                prefs.push((var, prefix));
            }
            p.expect(Tok::Dot, "`.`")?;
            let clause = Clause::new(
                vec![first.clone()],
                vec![first],
                ClauseOrigin::Abstraction,
            );
            clauses.push((clause, prefs));
        }
        p.bump(); // `}`
        docs.push(ParsedDocument { id, clauses });
    }
    Ok(docs)
}

impl Parser<'_> {
    fn parse_abstraction_atom(&mut self) -> Result<Literal> {
        let name = match self.bump() {
            Tok::Ident(n) | Tok::Quoted(n) => n,
            _ => return Err(self.err("expected a predicate symbol")),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.parse_term()?);
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
        }
        let pred = self.st.pred(&name, args.len(), PredKind::Db)?;
        Ok(Literal::new(true, pred, args))
    }
}

/// Serialize a clause back to KB syntax (ordinary part only).
pub fn clause_to_kb_line(c: &Clause, st: &SymbolTable) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    for (i, l) in c.ordinary.iter().enumerate() {
        if i > 0 {
            s.push_str(" | ");
        }
        write!(
            s,
            "{}",
            crate::term::LiteralDisplay {
                literal: l,
                st,
            }
        )
        .unwrap();
    }
    s.push('.');
    s
}
