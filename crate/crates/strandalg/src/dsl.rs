//! The `.qz` input format and the element-expression grammar.
//!
//! ```text
//! # comment
//! quiver intro
//! vertices 1 2 3 4 5
//! arrows
//!   a: 1 -> 1
//!   x: 1 -> 2
//! relations
//!   a*a
//!   x*y
//!   c^l
//! param l = 3
//! model char=2 mixed s=p,t L=22 D=22
//! ```
//!
//! Relation words are `*`-separated arrow names in composition order (the
//! right-most factor acts first); `^` takes a positive integer or a declared
//! parameter. The model line chooses the coefficient ring: `char=0` is the
//! rationals, `char=p` a prime field, and `char=p mixed` the model where the
//! first generator is the prime itself.
//!
//! Element expressions for the `reduce` command look like
//! `s1*e(1) - path(a*y*x)` with `+`, `-`, integer and generator-power
//! coefficients, vertex idempotents `e(v)` and paths `path(word)`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{default_len_cap, AlgebraContext, AlgebraElement};
use crate::coeff::CoefficientModel;
use crate::quiver::{ArrowId, Path, Quiver};
use crate::relations::ZSet;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// The coefficient-model block of a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub characteristic: u64,
    pub mixed: bool,
    pub s_names: Vec<String>,
    pub len_cap: Option<usize>,
    pub deg_cap: Option<usize>,
}

/// A parsed input file: quiver, relations, parameters and optional model.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub name: String,
    pub quiver: Quiver,
    pub zset: ZSet,
    pub params: Vec<(String, usize)>,
    pub model: Option<ModelSpec>,
}

#[derive(Debug, Error)]
pub enum ModelResolveError {
    #[error("model declares {declared} generators but the nerve has {blocks} blocks")]
    WrongGeneratorCount { declared: usize, blocks: usize },
    #[error("a mixed-characteristic model needs a prime characteristic")]
    MixedNeedsPrime,
    #[error(transparent)]
    Model(#[from] crate::coeff::ModelError),
}

impl SpecFile {
    /// Builds the coefficient model and length cap, given the nerve block
    /// count. `caps_override` (from the environment or a flag) wins over the
    /// model block, which wins over the defaults.
    pub fn resolve_model(
        &self,
        block_count: usize,
        caps_override: Option<(usize, usize)>,
    ) -> Result<(CoefficientModel, usize), ModelResolveError> {
        let default_l = default_len_cap(&self.quiver, &self.zset);
        let (len_cap, deg_cap) = match caps_override {
            Some((l, d)) => (l, d),
            None => match &self.model {
                Some(m) => {
                    let l = m.len_cap.unwrap_or(default_l);
                    (l, m.deg_cap.unwrap_or(l))
                }
                None => (default_l, default_l),
            },
        };
        let model = match &self.model {
            Some(m) => {
                if block_count > 0 && m.s_names.len() != block_count {
                    return Err(ModelResolveError::WrongGeneratorCount {
                        declared: m.s_names.len(),
                        blocks: block_count,
                    });
                }
                if m.mixed {
                    if m.characteristic == 0 {
                        return Err(ModelResolveError::MixedNeedsPrime);
                    }
                    CoefficientModel::mixed(m.characteristic, m.s_names.clone(), deg_cap)?
                } else {
                    CoefficientModel::equicharacteristic(
                        m.characteristic,
                        m.s_names.clone(),
                        deg_cap,
                    )?
                }
            }
            None => {
                let n = block_count.max(1);
                let names = (1..=n).map(|i| format!("s{i}")).collect();
                CoefficientModel::equicharacteristic(0, names, deg_cap)?
            }
        };
        Ok((model, len_cap))
    }
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quiver {}", self.name)?;
        let vertices: Vec<&str> = self
            .quiver
            .vertices()
            .map(|v| self.quiver.vertex_name(v))
            .collect();
        writeln!(f, "vertices {}", vertices.join(" "))?;
        writeln!(f, "arrows")?;
        for a in self.quiver.arrows() {
            writeln!(
                f,
                "  {}: {} -> {}",
                self.quiver.arrow_name(a),
                self.quiver.vertex_name(self.quiver.tail(a)),
                self.quiver.vertex_name(self.quiver.head(a)),
            )?;
        }
        writeln!(f, "relations")?;
        for r in self.zset.relations() {
            writeln!(f, "  {}", r.render(&self.quiver))?;
        }
        for (name, value) in &self.params {
            writeln!(f, "param {name} = {value}")?;
        }
        if let Some(m) = &self.model {
            write!(f, "model char={}", m.characteristic)?;
            if m.mixed {
                write!(f, " mixed")?;
            }
            write!(f, " s={}", m.s_names.join(","))?;
            if let Some(l) = m.len_cap {
                write!(f, " L={l}")?;
            }
            if let Some(d) = m.deg_cap {
                write!(f, " D={d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A token with its 1-based position.
#[derive(Clone, Debug, PartialEq)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn tokenize_line(line_no: usize, line: &str) -> Vec<Token> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        if ch.is_whitespace() {
            continue;
        }
        let col = i + 1;
        if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
            let mut text = String::new();
            text.push(ch);
            while let Some((_, c)) = chars.peek() {
                if c.is_alphanumeric() || *c == '_' || *c == '\'' {
                    text.push(*c);
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.push(Token {
                text,
                line: line_no,
                column: col,
            });
        } else if ch == '-' && matches!(chars.peek(), Some((_, '>'))) {
            chars.next();
            tokens.push(Token {
                text: "->".to_string(),
                line: line_no,
                column: col,
            });
        } else {
            tokens.push(Token {
                text: ch.to_string(),
                line: line_no,
                column: col,
            });
        }
    }
    tokens
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Arrows,
    Relations,
}

/// Parses a spec file, reporting the first problem with its position.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut name = None;
    let mut quiver = Quiver::new();
    let mut raw_relations: Vec<Vec<Token>> = Vec::new();
    let mut params: Vec<(String, usize)> = Vec::new();
    let mut model: Option<ModelSpec> = None;
    let mut section = Section::Preamble;
    let mut vertices_seen = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize_line(line_no, raw_line);
        if tokens.is_empty() {
            continue;
        }
        let head = &tokens[0];
        match head.text.as_str() {
            "quiver" => {
                section = Section::Preamble;
                let t = tokens.get(1).ok_or_else(|| {
                    ParseError::new(line_no, head.column, "expected a name after `quiver`")
                })?;
                if name.is_some() {
                    return Err(ParseError::new(
                        t.line,
                        t.column,
                        "duplicate `quiver` line",
                    ));
                }
                name = Some(t.text.clone());
            }
            "vertices" => {
                section = Section::Preamble;
                vertices_seen = true;
                for t in &tokens[1..] {
                    quiver.add_vertex(&t.text).map_err(|e| {
                        ParseError::new(t.line, t.column, e.to_string())
                    })?;
                }
            }
            "arrows" => {
                if !vertices_seen {
                    return Err(ParseError::new(
                        line_no,
                        head.column,
                        "`arrows` must come after `vertices`",
                    ));
                }
                section = Section::Arrows;
            }
            "relations" => {
                section = Section::Relations;
            }
            "param" => {
                section = Section::Preamble;
                let parsed = parse_param(&tokens).ok_or_else(|| {
                    ParseError::new(line_no, head.column, "expected `param <name> = <integer>`")
                })?;
                params.push(parsed);
            }
            "model" => {
                section = Section::Preamble;
                model = Some(parse_model(&tokens)?);
            }
            _ => match section {
                Section::Arrows => parse_arrow_line(&mut quiver, &tokens)?,
                Section::Relations => raw_relations.push(tokens),
                Section::Preamble => {
                    return Err(ParseError::new(
                        head.line,
                        head.column,
                        format!("unexpected token `{}`", head.text),
                    ));
                }
            },
        }
    }

    let param_map: BTreeMap<&str, usize> =
        params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let mut relations = Vec::new();
    for tokens in &raw_relations {
        relations.push(parse_relation(&quiver, tokens, &param_map)?);
    }
    let first_relation_pos = raw_relations
        .first()
        .map(|t| (t[0].line, t[0].column))
        .unwrap_or((1, 1));
    let zset = ZSet::new(&quiver, relations).map_err(|e| {
        ParseError::new(first_relation_pos.0, first_relation_pos.1, e.to_string())
    })?;

    Ok(SpecFile {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        quiver,
        zset,
        params,
        model,
    })
}

fn parse_param(tokens: &[Token]) -> Option<(String, usize)> {
    // param <name> = <int>
    match tokens {
        [_, name, eq, value] if eq.text == "=" => {
            let v = value.text.parse().ok()?;
            Some((name.text.clone(), v))
        }
        _ => None,
    }
}

fn parse_arrow_line(quiver: &mut Quiver, tokens: &[Token]) -> Result<(), ParseError> {
    // <name>: <tail> -> <head>
    let err = |t: &Token, msg: &str| ParseError::new(t.line, t.column, msg.to_string());
    match tokens {
        [name, colon, tail, arrow, head] if colon.text == ":" && arrow.text == "->" => {
            let t = quiver
                .vertex_by_name(&tail.text)
                .ok_or_else(|| err(tail, &format!("unknown vertex `{}`", tail.text)))?;
            let h = quiver
                .vertex_by_name(&head.text)
                .ok_or_else(|| err(head, &format!("unknown vertex `{}`", head.text)))?;
            quiver
                .add_arrow(&name.text, t, h)
                .map_err(|e| err(name, &e.to_string()))?;
            Ok(())
        }
        _ => Err(err(
            &tokens[0],
            "expected an arrow declaration `name: tail -> head`",
        )),
    }
}

/// Expands a relation line into a path; atoms are in composition order, so
/// the token list is reversed into application order.
fn parse_relation(
    quiver: &Quiver,
    tokens: &[Token],
    params: &BTreeMap<&str, usize>,
) -> Result<Path, ParseError> {
    let err = |t: &Token, msg: String| ParseError::new(t.line, t.column, msg);
    // atoms: name (^ exponent)? separated by *
    let mut atoms: Vec<(ArrowId, usize, &Token)> = Vec::new();
    let mut i = 0;
    loop {
        let t = tokens
            .get(i)
            .ok_or_else(|| err(&tokens[i - 1], "dangling separator".to_string()))?;
        let arrow = quiver
            .arrow_by_name(&t.text)
            .ok_or_else(|| err(t, format!("unknown arrow `{}`", t.text)))?;
        i += 1;
        let mut exponent = 1usize;
        if tokens.get(i).map(|t| t.text.as_str()) == Some("^") {
            let e = tokens
                .get(i + 1)
                .ok_or_else(|| err(&tokens[i], "expected an exponent after `^`".to_string()))?;
            exponent = match e.text.parse() {
                Ok(v) => v,
                Err(_) => *params
                    .get(e.text.as_str())
                    .ok_or_else(|| err(e, format!("unknown parameter `{}`", e.text)))?,
            };
            if exponent == 0 {
                return Err(err(e, "exponent must be positive".to_string()));
            }
            i += 2;
        }
        atoms.push((arrow, exponent, t));
        match tokens.get(i).map(|t| t.text.as_str()) {
            Some("*") => i += 1,
            None => break,
            Some(other) => {
                return Err(err(
                    &tokens[i],
                    format!("expected `*` or end of relation, found `{other}`"),
                ));
            }
        }
    }

    // composition order reads right to left
    let mut arrows: Vec<ArrowId> = Vec::new();
    for (arrow, exponent, token) in atoms.iter().rev() {
        for _ in 0..*exponent {
            if let Some(last) = arrows.last() {
                if quiver.head(*last) != quiver.tail(*arrow) {
                    return Err(err(
                        token,
                        format!(
                            "word is not consecutive at `{}`: previous head is {} but tail is {}",
                            token.text,
                            quiver.vertex_name(quiver.head(*last)),
                            quiver.vertex_name(quiver.tail(*arrow)),
                        ),
                    ));
                }
            }
            arrows.push(*arrow);
        }
    }
    Path::from_arrows(quiver, arrows)
        .map_err(|e| err(atoms[0].2, e.to_string()))
}

fn parse_model(tokens: &[Token]) -> Result<ModelSpec, ParseError> {
    let err = |t: &Token, msg: String| ParseError::new(t.line, t.column, msg);
    let mut characteristic = None;
    let mut mixed = false;
    let mut s_names = Vec::new();
    let mut len_cap = None;
    let mut deg_cap = None;
    let mut i = 1;
    while i < tokens.len() {
        let key = &tokens[i];
        if key.text == "mixed" {
            mixed = true;
            i += 1;
            continue;
        }
        let eq = tokens.get(i + 1);
        if eq.map(|t| t.text.as_str()) != Some("=") {
            return Err(err(key, format!("expected `=` after `{}`", key.text)));
        }
        let mut j = i + 2;
        match key.text.as_str() {
            "char" => {
                let v = tokens
                    .get(j)
                    .ok_or_else(|| err(key, "missing characteristic".to_string()))?;
                characteristic = Some(
                    v.text
                        .parse()
                        .map_err(|_| err(v, format!("`{}` is not an integer", v.text)))?,
                );
                j += 1;
            }
            "s" => {
                loop {
                    let v = tokens
                        .get(j)
                        .ok_or_else(|| err(key, "missing generator name".to_string()))?;
                    s_names.push(v.text.clone());
                    j += 1;
                    if tokens.get(j).map(|t| t.text.as_str()) == Some(",") {
                        j += 1;
                    } else {
                        break;
                    }
                }
            }
            "L" | "D" => {
                let v = tokens
                    .get(j)
                    .ok_or_else(|| err(key, "missing cap value".to_string()))?;
                let parsed = v
                    .text
                    .parse()
                    .map_err(|_| err(v, format!("`{}` is not an integer", v.text)))?;
                if key.text == "L" {
                    len_cap = Some(parsed);
                } else {
                    deg_cap = Some(parsed);
                }
                j += 1;
            }
            other => {
                return Err(err(key, format!("unknown model field `{other}`")));
            }
        }
        i = j;
    }
    let characteristic = characteristic
        .ok_or_else(|| err(&tokens[0], "model needs `char=<p|0>`".to_string()))?;
    if s_names.is_empty() {
        return Err(err(
            &tokens[0],
            "model needs `s=<name>[,<name>...]`".to_string(),
        ));
    }
    Ok(ModelSpec {
        characteristic,
        mixed,
        s_names,
        len_cap,
        deg_cap,
    })
}

/// Parses an element expression such as `s1*e(1) - path(a*y*x) + 2*e(4)`
/// over the given context.
pub fn parse_element(text: &str, ctx: &AlgebraContext) -> Result<AlgebraElement, ParseError> {
    let tokens = tokenize_line(1, text);
    let mut parser = ElementParser {
        tokens: &tokens,
        pos: 0,
        ctx,
    };
    let el = parser.expression()?;
    if parser.pos != tokens.len() {
        let t = &tokens[parser.pos];
        return Err(ParseError::new(
            t.line,
            t.column,
            format!("unexpected `{}`", t.text),
        ));
    }
    Ok(el)
}

struct ElementParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    ctx: &'a AlgebraContext,
}

impl<'a> ElementParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, text: &str) -> Result<&'a Token, ParseError> {
        match self.bump() {
            Some(t) if t.text == text => Ok(t),
            Some(t) => Err(ParseError::new(
                t.line,
                t.column,
                format!("expected `{text}`, found `{}`", t.text),
            )),
            None => Err(ParseError::new(1, 1, format!("expected `{text}` at end"))),
        }
    }

    fn end_error(&self) -> ParseError {
        ParseError::new(1, 1, "unexpected end of expression".to_string())
    }

    fn expression(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut negate = false;
        if let Some(t) = self.peek() {
            if t.text == "-" {
                self.bump();
                negate = true;
            } else if t.text == "+" {
                self.bump();
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.ctx.neg(&acc);
        }
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                "+" => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.ctx.add(&acc, &rhs);
                }
                "-" => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.ctx.sub(&acc, &rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().map(|t| t.text.as_str()) == Some("*") {
            self.bump();
            let rhs = self.factor()?;
            acc = self.ctx.multiply(&acc, &rhs);
        }
        Ok(acc)
    }

    /// The identity element: the sum of all vertex idempotents.
    fn identity(&self) -> AlgebraElement {
        let mut acc = self.ctx.zero();
        for v in self.ctx.quiver.vertices() {
            acc = self.ctx.add(&acc, &self.ctx.idempotent(v));
        }
        acc
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        let t = self.bump().ok_or_else(|| self.end_error())?;
        if let Ok(n) = t.text.parse::<i64>() {
            return Ok(self.ctx.scale(&self.ctx.model.from_int(n), &self.identity()));
        }
        match t.text.as_str() {
            "e" => {
                self.expect("(")?;
                let v = self.bump().ok_or_else(|| self.end_error())?;
                let vertex = self.ctx.quiver.vertex_by_name(&v.text).ok_or_else(|| {
                    ParseError::new(v.line, v.column, format!("unknown vertex `{}`", v.text))
                })?;
                self.expect(")")?;
                Ok(self.ctx.idempotent(vertex))
            }
            "path" => {
                self.expect("(")?;
                let mut word_tokens = Vec::new();
                loop {
                    let t = self.bump().ok_or_else(|| self.end_error())?;
                    if t.text == ")" {
                        break;
                    }
                    word_tokens.push(t.clone());
                }
                let path = parse_relation(&self.ctx.quiver, &word_tokens, &BTreeMap::new())?;
                Ok(self.ctx.path_element(path))
            }
            name => {
                // a generator, possibly raised to a power
                let index = self.ctx.model.generator_index(name).map_err(|_| {
                    ParseError::new(
                        t.line,
                        t.column,
                        format!("unknown coefficient or generator `{name}`"),
                    )
                })?;
                let mut exponent = 1;
                if self.peek().map(|t| t.text.as_str()) == Some("^") {
                    self.bump();
                    let e = self.bump().ok_or_else(|| self.end_error())?;
                    exponent = e.text.parse().map_err(|_| {
                        ParseError::new(
                            e.line,
                            e.column,
                            format!("`{}` is not an integer", e.text),
                        )
                    })?;
                }
                Ok(self
                    .ctx
                    .scale(&self.ctx.model.s_power(index, exponent), &self.identity()))
            }
        }
    }
}
