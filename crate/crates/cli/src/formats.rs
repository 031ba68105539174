//! Plain-text formats for Pauli sums, operator strings, generator sets and circuits.
//!
//! All formats are line based; `#` starts a comment and blank lines are ignored.
//! Site indices in circuit files are 1-based.

use std::fmt::Write as _;

use pauli_duality_core::{
    Boundary, Circuit, Complex64, Gate, GateKind, GeneratorSet, LocalOp, OperatorString, PauliOp, PauliString, PauliSum,
};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: pauli_duality_core::Error },
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Lossless fixed formatting: 17 significant digits, lowercase scientific.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, FormatError> {
    tok.trim().parse::<f64>().map_err(|_| syntax(line, format!("not a number: {tok:?}")))
}

fn parse_site(tok: &str, line: usize) -> Result<usize, FormatError> {
    match tok.parse::<usize>() {
        Ok(s) if s >= 1 => Ok(s - 1),
        _ => Err(syntax(line, format!("site must be a positive integer, got {tok:?}"))),
    }
}

fn parse_len(tok: Option<&str>, line: usize) -> Result<usize, FormatError> {
    tok.and_then(|t| t.parse::<usize>().ok())
        .filter(|&l| l >= 1)
        .ok_or_else(|| syntax(line, "L needs a positive integer"))
}

/// One `<re> <im> <letters>` line per term.
pub fn write_pauli_sum(h: &PauliSum) -> String {
    let mut out = format!("L {}\n", h.len());
    for (p, c) in h.iter() {
        let _ = writeln!(out, "{} {} {}", float(c.re), float(c.im), p.letters());
    }
    out
}

pub fn parse_pauli_sum(text: &str) -> Result<PauliSum, FormatError> {
    let mut len = None;
    let mut terms: Vec<(usize, PauliString, Complex64)> = Vec::new();
    for (n, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["L", rest @ ..] => len = Some(parse_len(rest.first().copied(), n)?),
            [re, im, letters] => {
                let p = PauliString::from_letters(letters).map_err(|source| FormatError::Model { line: n, source })?;
                terms.push((n, p, Complex64::new(parse_f64(re, n)?, parse_f64(im, n)?)));
            }
            _ => return Err(syntax(n, "expected `<re> <im> <pauli letters>`")),
        }
    }
    let len = len
        .or_else(|| terms.first().map(|t| t.1.len()))
        .ok_or_else(|| FormatError::Invalid("empty Pauli sum without an `L` line".into()))?;
    let mut h = PauliSum::zero(len).map_err(|source| FormatError::Model { line: 0, source })?;
    for (n, p, c) in terms {
        h.add_term(&p, c).map_err(|source| FormatError::Model { line: n, source })?;
    }
    Ok(h)
}

fn parse_group(tok: &str, line: usize) -> Result<LocalOp, FormatError> {
    let inner = tok
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(line, format!("bad site operator {tok:?}")))?;
    let v: Vec<f64> = inner.split(',').map(|t| parse_f64(t, line)).collect::<Result<_, _>>()?;
    if v.len() != 8 {
        return Err(syntax(line, "site operator needs 8 numbers (re,im of a,b,c,d)"));
    }
    Ok(LocalOp::new(
        Complex64::new(v[0], v[1]),
        Complex64::new(v[2], v[3]),
        Complex64::new(v[4], v[5]),
        Complex64::new(v[6], v[7]),
    ))
}

/// Tokenize keeping parenthesised groups together even if they contain spaces.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in line.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// One token per site: `I`, `X`, `Y`, `Z` or `(a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im)`,
/// optionally followed by `scale=re,im`. A string of letters without spaces is also
/// accepted.
pub fn parse_operator_string(line: &str, line_no: usize) -> Result<OperatorString, FormatError> {
    let mut ops = Vec::new();
    let mut scale = Complex64::new(1.0, 0.0);
    for tok in tokens(line) {
        if let Some(s) = tok.strip_prefix("scale=") {
            let parts: Vec<&str> = s.split(',').collect();
            let re = parse_f64(parts[0], line_no)?;
            let im = parts.get(1).map(|t| parse_f64(t, line_no)).transpose()?.unwrap_or(0.0);
            if parts.len() > 2 {
                return Err(syntax(line_no, "scale takes re,im"));
            }
            scale = Complex64::new(re, im);
        } else if tok.starts_with('(') {
            ops.push(parse_group(&tok, line_no)?);
        } else {
            for c in tok.chars() {
                let p =
                    PauliOp::from_letter(c).ok_or_else(|| syntax(line_no, format!("unknown site operator {c:?}")))?;
                ops.push(LocalOp::pauli(p));
            }
        }
    }
    OperatorString::from_sites(ops.len(), ops.into_iter().enumerate())
        .map(|o| o.with_scale(scale))
        .map_err(|source| FormatError::Model { line: line_no, source })
}

fn op_token(op: &LocalOp) -> String {
    for p in PauliOp::ALL {
        if op.max_diff(&LocalOp::pauli(p)) == 0.0 {
            return p.letter().to_string();
        }
    }
    let e = op.0;
    let v = [e[0][0], e[0][1], e[1][0], e[1][1]];
    let parts: Vec<String> = v.iter().flat_map(|z| [float(z.re), float(z.im)]).collect();
    format!("({})", parts.join(","))
}

pub fn write_operator_string(o: &OperatorString) -> String {
    let mut toks: Vec<String> = (0..o.len()).map(|k| op_token(&o.op(k))).collect();
    if o.scale() != Complex64::new(1.0, 0.0) {
        toks.push(format!("scale={},{}", float(o.scale().re), float(o.scale().im)));
    }
    toks.join(" ")
}

/// One operator string per line; every line must have the same length. An optional
/// `L n` line states that length.
pub fn parse_generator_set(text: &str) -> Result<GeneratorSet, FormatError> {
    let mut gens = Vec::new();
    let mut len = None;
    for (n, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("L ") {
            len = Some(parse_len(Some(rest.trim()), n)?);
            continue;
        }
        let g = parse_operator_string(l, n)?;
        if len.is_some_and(|len| len != g.len()) {
            return Err(syntax(n, format!("generator has {} sites, expected {}", g.len(), len.unwrap_or(0))));
        }
        gens.push(g);
    }
    GeneratorSet::new(gens).map_err(|e| FormatError::Invalid(format!("generator set: {e}")))
}

pub fn write_generator_set(g: &GeneratorSet) -> String {
    g.generators().iter().map(|o| write_operator_string(o) + "\n").collect()
}

/// Circuit file: optional `L n` and `BOUNDARY open|periodic` directives, then gates in
/// application order: `CNOT c t`, `H s`, `CZ a b`, `LOCAL s <8 numbers>` or
/// `LOCAL s <16 numbers>` (operator then its inverse). `len` supplies the length when
/// the file has no `L` line; if both are present they must agree.
pub fn parse_circuit(text: &str, len: Option<usize>) -> Result<Circuit, FormatError> {
    let mut file_len = None;
    let mut boundary = Boundary::Open;
    let mut gates: Vec<(usize, Gate)> = Vec::new();
    for (n, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let upper = toks[0].to_ascii_uppercase();
        let model = |source| FormatError::Model { line: n, source };
        let gate = match (upper.as_str(), &toks[1..]) {
            ("L", rest) => {
                file_len = Some(parse_len(rest.first().copied(), n)?);
                continue;
            }
            ("BOUNDARY", [b]) => {
                boundary = match b.to_ascii_lowercase().as_str() {
                    "open" => Boundary::Open,
                    "periodic" => Boundary::Periodic,
                    _ => return Err(syntax(n, format!("unknown boundary {b:?}"))),
                };
                continue;
            }
            ("CNOT", [c, t]) => Gate::cnot(parse_site(c, n)?, parse_site(t, n)?).map_err(model)?,
            ("CZ", [a, b]) => Gate::cz(parse_site(a, n)?, parse_site(b, n)?).map_err(model)?,
            ("H", [s]) => Gate::hadamard(parse_site(s, n)?),
            ("LOCAL", [s, nums @ ..]) if nums.len() == 8 || nums.len() == 16 => {
                let v: Vec<f64> = nums.iter().map(|t| parse_f64(t, n)).collect::<Result<_, _>>()?;
                let m = |o: usize| {
                    LocalOp::new(
                        Complex64::new(v[o], v[o + 1]),
                        Complex64::new(v[o + 2], v[o + 3]),
                        Complex64::new(v[o + 4], v[o + 5]),
                        Complex64::new(v[o + 6], v[o + 7]),
                    )
                };
                let site = parse_site(s, n)?;
                if v.len() == 16 {
                    Gate::local(site, m(0), m(8)).map_err(model)?
                } else {
                    Gate::local_auto(site, m(0)).map_err(model)?
                }
            }
            _ => return Err(syntax(n, format!("unrecognized circuit line {l:?}"))),
        };
        gates.push((n, gate));
    }
    let len = match (file_len, len) {
        (Some(a), Some(b)) if a != b => {
            return Err(FormatError::Invalid(format!("circuit file is for L = {a}, model has L = {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(FormatError::Invalid("circuit length unknown: add an `L n` line".into())),
    };
    let mut c = Circuit::new(len, boundary).map_err(|source| FormatError::Model { line: 0, source })?;
    for (n, g) in gates {
        c.push(g).map_err(|source| FormatError::Model { line: n, source })?;
    }
    Ok(c)
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = format!("L {}\n", c.len());
    if c.boundary() == Boundary::Periodic {
        out.push_str("BOUNDARY periodic\n");
    }
    let nums = |op: &LocalOp| -> String {
        let e = op.0;
        [e[0][0], e[0][1], e[1][0], e[1][1]]
            .iter()
            .flat_map(|z| [float(z.re), float(z.im)])
            .collect::<Vec<_>>()
            .join(" ")
    };
    for g in c.gates() {
        let _ = match *g.kind() {
            GateKind::Cnot { control, target } => writeln!(out, "CNOT {} {}", control + 1, target + 1),
            GateKind::Hadamard { site } => writeln!(out, "H {}", site + 1),
            GateKind::Cz { a, b } => writeln!(out, "CZ {} {}", a + 1, b + 1),
            GateKind::Local { site, op, inverse } => {
                writeln!(out, "LOCAL {} {} {}", site + 1, nums(&op), nums(&inverse))
            }
        };
    }
    out
}
