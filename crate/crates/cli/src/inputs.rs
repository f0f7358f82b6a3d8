//! Space and map arguments: either a JSON file or a builder expression such
//! as `gbit`, `simplex(2)` or `product(gbit(), dsum(point, point))`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polygpt::geometry::{Field, Matrix};
use polygpt::interactions::maps::{cnot, swap_map};
use polygpt::statespace::{cross, cube, direct_sum, gbit, house, min_tensor, parse_space_json, point, polygon, simplex};
use polygpt::StateSpace;
use serde_json::Value;

pub fn load_space<F: Field>(arg: &str) -> Result<StateSpace<F>> {
    if arg.ends_with(".json") || Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).with_context(|| format!("file not found: {arg}"))?;
        return parse_space_json(&text).with_context(|| format!("invalid state space in {arg}"));
    }
    let mut p = ExprParser { s: arg.as_bytes(), pos: 0 };
    let space = p.space()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        bail!("unexpected input at column {} of '{arg}'", p.pos + 1);
    }
    Ok(space)
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            bail!("expected '{}' at column {}", c as char, self.pos + 1)
        }
    }

    fn word(&mut self, pred: fn(&u8) -> bool) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(pred) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<usize> {
        let col = self.pos + 1;
        self.word(u8::is_ascii_digit).parse().map_err(|_| anyhow!("expected a number at column {col}"))
    }

    fn space<F: Field>(&mut self) -> Result<StateSpace<F>> {
        let col = self.pos + 1;
        let name = self.word(|c| c.is_ascii_alphanumeric() || *c == b'_').to_string();
        let has_args = self.eat(b'(');
        let space = match name.as_str() {
            "product" | "dsum" if has_args => {
                let a = self.space()?;
                self.expect(b',')?;
                let b = self.space()?;
                if name == "product" {
                    min_tensor(&a, &b)
                } else {
                    direct_sum(&a, &b)
                }
            }
            "simplex" | "cube" | "cross" | "polygon" if has_args => {
                let n = self.number()?;
                match name.as_str() {
                    "simplex" => simplex(n),
                    "cube" if n > 0 => cube(n),
                    "cross" if n > 0 => cross(n),
                    "polygon" => polygon(n)?,
                    _ => bail!("{name}({n}) is not defined"),
                }
            }
            "point" => point(),
            "gbit" => gbit(),
            "house" => house(),
            "" => bail!("expected a space at column {col}"),
            _ => bail!("unknown builder '{name}' at column {col}"),
        };
        if has_args {
            self.expect(b')')?;
        }
        Ok(space)
    }
}

/// A map argument: `cnot`, `swap` (of the named factor dimension given by
/// the space), or a JSON file holding a matrix as rows of scalars.
pub fn load_map<F: Field>(arg: &str, space: &StateSpace<F>) -> Result<Matrix<F>> {
    match arg {
        "cnot" => return Ok(cnot()),
        "swap" => {
            let (a, b) = space.tensor_factors().ok_or_else(|| anyhow!("swap needs a product space"))?;
            if a.ambient_dim() != b.ambient_dim() {
                bail!("swap needs factors of equal dimension");
            }
            return Ok(swap_map(a.ambient_dim()));
        }
        _ => {}
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("file not found: {arg}"))?;
    parse_matrix(&serde_json::from_str(&text).with_context(|| format!("invalid JSON in {arg}"))?)
}

fn scalar<F: Field>(v: &Value) -> Result<F> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => bail!("matrix entries must be numbers or \"p/q\" strings"),
    };
    F::parse_scalar(&s).map_err(Into::into)
}

pub fn parse_matrix<F: Field>(v: &Value) -> Result<Matrix<F>> {
    let rows = v.as_array().ok_or_else(|| anyhow!("a matrix is an array of rows"))?;
    let rows: Vec<Vec<F>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| anyhow!("a matrix row is an array"))?.iter().map(scalar).collect())
        .collect::<Result<_>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        bail!("matrix rows must be non-empty and of equal length");
    }
    Ok(Matrix::from_rows(&rows))
}
