//! Identifier splitting and the two-subtoken (bigram) encoding.

use std::ops::Range;

use crate::error::{Error, Result};

/// Marks the second subtoken of an identifier that is encoded whole.
pub const END_OF_TOKEN: &str = "</t>";

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Lower,
    Upper,
    Digit,
    Separator,
}

fn class_of(c: char) -> Class {
    if c.is_ascii_uppercase() {
        Class::Upper
    } else if c.is_ascii_digit() {
        Class::Digit
    } else if c == '_' {
        Class::Separator
    } else {
        Class::Lower
    }
}

/// Byte ranges of the partial tokens in `token`. Underscores separate
/// partials and belong to none of them. An identifier without any
/// partial (e.g. `"_"`) yields one range covering the whole string.
pub fn partial_spans(token: &str) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = token.char_indices().collect();
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for (k, &(i, c)) in chars.iter().enumerate() {
        if c == '_' {
            if let Some(s) = start.take() {
                spans.push(s..i);
            }
            continue;
        }
        let Some(s) = start else {
            start = Some(i);
            continue;
        };
        let prev = class_of(chars[k - 1].1);
        let cur = class_of(c);
        let next = chars.get(k + 1).map(|&(_, n)| class_of(n));
        let boundary = match (prev, cur) {
            (Class::Lower | Class::Digit, Class::Upper) => true,
            (Class::Upper, Class::Upper) => next == Some(Class::Lower),
            _ => false,
        };
        if boundary {
            spans.push(s..i);
            start = Some(i);
        }
    }
    if let Some(s) = start {
        spans.push(s..token.len());
    }
    if spans.is_empty() {
        spans.push(0..token.len());
    }
    spans
}

/// Splits an identifier on camelCase boundaries and underscores.
///
/// `"fooBarBazQuux"` → `["foo", "Bar", "Baz", "Quux"]`,
/// `"parseHTTP2Response"` → `["parse", "HTTP2", "Response"]`.
pub fn split_identifier(token: &str) -> Result<Vec<String>> {
    if token.is_empty() {
        return Err(Error::EmptyIdentifier);
    }
    Ok(partial_spans(token)
        .into_iter()
        .map(|r| token[r].to_string())
        .collect())
}

/// Exactly two subtokens for one identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigram {
    pub first: String,
    /// Either the second half or [`END_OF_TOKEN`].
    pub second: String,
    /// Number of underscores removed at the split point.
    pub join: u8,
}

impl Bigram {
    pub fn whole(token: &str) -> Self {
        Bigram {
            first: token.to_string(),
            second: END_OF_TOKEN.to_string(),
            join: 0,
        }
    }

    pub fn is_whole(&self) -> bool {
        self.second == END_OF_TOKEN
    }

    pub fn pair(&self) -> (&str, &str) {
        (&self.first, &self.second)
    }

    /// Reassembles the original identifier.
    pub fn join_halves(first: &str, second: &str, join: u8) -> String {
        if second == END_OF_TOKEN {
            return first.to_string();
        }
        let mut s = String::with_capacity(first.len() + second.len() + join as usize);
        s.push_str(first);
        for _ in 0..join {
            s.push('_');
        }
        s.push_str(second);
        s
    }
}

/// Encodes `token` as two subtokens. In-vocabulary identifiers and
/// identifiers with a single partial become `(token, </t>)`; otherwise the
/// partial list is cut after `ceil(n/2)` partials.
pub fn bigram_encode(token: &str, in_vocab: impl Fn(&str) -> bool) -> Result<Bigram> {
    if token.is_empty() {
        return Err(Error::EmptyIdentifier);
    }
    if in_vocab(token) {
        return Ok(Bigram::whole(token));
    }
    let spans = partial_spans(token);
    if spans.len() < 2 {
        return Ok(Bigram::whole(token));
    }
    let cut = spans.len().div_ceil(2);
    let first_end = spans[cut - 1].end;
    let second_start = spans[cut].start;
    let gap = second_start - first_end;
    debug_assert!(token[first_end..second_start].bytes().all(|b| b == b'_'));
    let join = u8::try_from(gap).map_err(|_| {
        Error::Invalid(format!("identifier {token:?} has {gap} consecutive underscores"))
    })?;
    Ok(Bigram {
        first: token[..first_end].to_string(),
        second: token[second_start..].to_string(),
        join,
    })
}
