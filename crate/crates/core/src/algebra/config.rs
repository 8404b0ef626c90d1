//! Plain-text algebra blocks.
//!
//! ```text
//! name = quaternion
//! dim = 4
//! table = 1 1 0 -1  1 2 3 1  ...
//! ```
//!
//! `table` lists `mu nu k value` quadruples for the nonzero entries only and
//! may be repeated across several lines.

use std::fmt::Write as _;

use super::AlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

impl<T: Scalar> AlgebraSpec<T> {
    pub fn to_config_block(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name());
        let _ = writeln!(out, "dim = {}", self.dim());
        let mut entries = Vec::new();
        for mu in 1..self.dim() {
            for nu in 1..self.dim() {
                for (k, v) in self.unit_product(mu, nu).iter().enumerate() {
                    if !v.is_zero() {
                        entries.push(format!("{mu} {nu} {k} {v}"));
                    }
                }
            }
        }
        let _ = writeln!(out, "table = {}", entries.join("  "));
        out
    }

    pub fn from_config_block(text: &str) -> Result<Self> {
        let mut name = None;
        let mut dim = None;
        let mut tokens: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::AlgebraFormat(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "name" => name = Some(value.to_string()),
                "dim" => {
                    dim = Some(value.parse::<usize>().map_err(|_| {
                        Error::AlgebraFormat(format!("line {}: bad dim `{value}`", lineno + 1))
                    })?)
                }
                "table" => tokens.extend(value.split_whitespace().map(str::to_string)),
                other => {
                    return Err(Error::AlgebraFormat(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        let name = name.ok_or_else(|| Error::AlgebraFormat("missing `name`".into()))?;
        let dim = dim.ok_or_else(|| Error::AlgebraFormat("missing `dim`".into()))?;
        if dim == 0 {
            return Err(Error::AlgebraFormat("dim must be positive".into()));
        }
        if !tokens.len().is_multiple_of(4) {
            return Err(Error::AlgebraFormat(format!(
                "table has {} tokens, not a multiple of 4",
                tokens.len()
            )));
        }
        let n = dim - 1;
        let mut table = vec![T::zero(); n * n * dim];
        for quad in tokens.chunks_exact(4) {
            let idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::AlgebraFormat(format!("bad index `{s}`")))
            };
            let (mu, nu, k) = (idx(&quad[0])?, idx(&quad[1])?, idx(&quad[2])?);
            if !(1..dim).contains(&mu) || !(1..dim).contains(&nu) || k >= dim {
                return Err(Error::AlgebraFormat(format!(
                    "entry ({mu}, {nu}, {k}) out of range for dim {dim}"
                )));
            }
            let v: f64 = quad[3]
                .parse()
                .map_err(|_| Error::AlgebraFormat(format!("bad value `{}`", quad[3])))?;
            table[((mu - 1) * n + (nu - 1)) * dim + k] = T::lit(v);
        }
        AlgebraSpec::new(name, dim, table)
    }
}
