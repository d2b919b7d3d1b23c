//! Text encoding of catalog functions:
//!
//! ```text
//! fn := "log" | "pow:" p | "dlog:" lam | "powlog:" q | "affine:" a "," b
//!     | "transpose(" fn ")" | "gtranspose(" fn ";" fn ")" | "shift:" eps "(" fn ")"
//! ```

use super::ScalarFn;
use crate::error::{Error, Result};

fn number(text: &str) -> Result<f64> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, got {text:?}")))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Parse(format!("number must be finite, got {text:?}")))
    }
}

fn parenthesized<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    text.strip_prefix(prefix)?.strip_suffix(')')
}

/// Splits at the first top-level occurrence of `sep`.
pub(crate) fn split_top_level(text: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => return Some((&text[..i], &text[i + 1..])),
            _ => {}
        }
    }
    None
}

pub(super) fn parse_fn(text: &str) -> Result<ScalarFn> {
    let text = text.trim();
    if text == "log" {
        return Ok(ScalarFn::log());
    }
    if let Some(inner) = parenthesized(text, "transpose(") {
        return Ok(ScalarFn::transpose(&parse_fn(inner)?));
    }
    if let Some(inner) = parenthesized(text, "gtranspose(") {
        let (f, h) = split_top_level(inner, ';')
            .ok_or_else(|| Error::Parse(format!("gtranspose needs `f;h`, got {inner:?}")))?;
        return Ok(ScalarFn::generalized_transpose(&parse_fn(f)?, &parse_fn(h)?));
    }
    if let Some(rest) = text.strip_prefix("shift:") {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::Parse(format!("shift needs `shift:eps(fn)`, got {text:?}")))?;
        let inner = rest[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {text:?}")))?;
        return ScalarFn::shift(&parse_fn(inner)?, number(&rest[..open])?);
    }
    if let Some(p) = text.strip_prefix("pow:") {
        return ScalarFn::try_power(number(p)?);
    }
    if let Some(lam) = text.strip_prefix("dlog:") {
        return ScalarFn::deformed_log(number(lam)?);
    }
    if let Some(q) = text.strip_prefix("powlog:") {
        return ScalarFn::power_log(number(q)?);
    }
    if let Some(args) = text.strip_prefix("affine:") {
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("affine needs `a,b`, got {args:?}")))?;
        return ScalarFn::affine(number(a)?, number(b)?);
    }
    Err(Error::Parse(format!("unknown function spec {text:?}")))
}
