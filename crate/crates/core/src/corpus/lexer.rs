//! Lossless lexer for the two registered source languages.
//!
//! Every token carries the whitespace that preceded it, so
//! [`detokenize`] reproduces the input byte for byte.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Registered source languages. `LangA` is a Hack-like curly-brace language
/// with `$variables` and `->` member access; `LangB` is Python-like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Language {
    LangA,
    LangB,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::LangA, Language::LangB];

    pub fn name(self) -> &'static str {
        match self {
            Language::LangA => "lang-a",
            Language::LangB => "lang-b",
        }
    }

    /// The control token prepended to sequences in multilingual corpora.
    pub fn control_code(self) -> String {
        format!("<{}>", self.name())
    }

    pub fn keywords(self) -> &'static [&'static str] {
        match self {
            Language::LangA => LANG_A_KEYWORDS,
            Language::LangB => LANG_B_KEYWORDS,
        }
    }

    pub fn is_keyword(self, word: &str) -> bool {
        self.keywords().contains(&word)
    }

    /// Keywords after which the next identifier is a fresh declaration.
    pub fn is_declaration_keyword(self, word: &str) -> bool {
        match self {
            Language::LangA => matches!(
                word,
                "class" | "function" | "interface" | "trait" | "enum" | "const" | "namespace" | "use"
            ),
            Language::LangB => matches!(word, "class" | "def" | "import" | "as" | "global"),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lang-a" | "langa" | "a" | "hack" => Ok(Language::LangA),
            "lang-b" | "langb" | "b" | "python" => Ok(Language::LangB),
            _ => Err(Error::UnknownLanguage(s.to_string())),
        }
    }
}

const LANG_A_KEYWORDS: &[&str] = &[
    "abstract", "as", "async", "await", "break", "case", "catch", "class", "const", "continue",
    "default", "do", "echo", "else", "elseif", "enum", "extends", "false", "final", "finally",
    "for", "foreach", "function", "if", "implements", "instanceof", "interface", "namespace",
    "new", "null", "private", "protected", "public", "return", "static", "switch", "this",
    "throw", "trait", "true", "try", "use", "void", "while", "int", "string", "bool", "float",
    "vec", "dict", "keyset", "mixed", "shape",
];

const LANG_B_KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
    "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
    "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return",
    "self", "try", "while", "with", "yield",
];

const MULTI_PUNCT: &[&str] = &[
    "===", "!==", "?->", "**=", "...", "->", "=>", "::", "==", "!=", "<=", ">=", "&&", "||", "+=",
    "-=", "*=", "/=", ".=", "??", "**", "//", "<<", ">>", "|>",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Identifier,
    Keyword,
    Punctuation,
    Literal,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Whitespace between the previous token and this one.
    pub sep: String,
}

impl Token {
    pub fn is_identifier(&self) -> bool {
        self.kind == TokenKind::Identifier
    }
}

/// Output of [`lex`]: the tokens plus any whitespace after the last one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub trailing: String,
}

impl TokenStream {
    pub fn texts(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.text.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl std::ops::Deref for TokenStream {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.tokens
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Classifies a single token text without surrounding context. Used when
/// only token strings are available (e.g. logged completion contexts).
pub fn classify(text: &str, language: Language) -> TokenKind {
    let mut chars = text.chars();
    let Some(first) = chars.next() else {
        return TokenKind::Other;
    };
    if is_ident_start(first) && text.chars().all(is_ident_continue) {
        if language.is_keyword(text) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        }
    } else if first.is_ascii_digit() || first == '"' || first == '\'' {
        TokenKind::Literal
    } else if first == '#' || text.starts_with("/*") || (language == Language::LangA && text.starts_with("//")) {
        TokenKind::Other
    } else if first.is_ascii_punctuation() {
        TokenKind::Punctuation
    } else {
        TokenKind::Other
    }
}

/// Lexes `content` written in `language`.
pub fn lex(content: &str, language: Language) -> Result<TokenStream> {
    if content.contains('\0') {
        return Err(Error::Undecodable {
            path: String::new(),
            reason: "NUL byte in content".into(),
        });
    }
    let bytes = content.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    let mut sep_start = 0;

    while pos < bytes.len() {
        let rest = &content[pos..];
        let c = rest.chars().next().expect("non-empty");
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let start = pos;
        let kind = if is_ident_start(c) {
            let len = rest.find(|ch: char| !is_ident_continue(ch)).unwrap_or(rest.len());
            pos += len;
            if language.is_keyword(&content[start..pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_' || ch == '.'))
                .unwrap_or(rest.len());
            pos += len;
            TokenKind::Literal
        } else if c == '"' || c == '\'' {
            pos += string_len(rest, c);
            TokenKind::Literal
        } else if c == '#' || (language == Language::LangA && rest.starts_with("//")) {
            pos += rest.find('\n').unwrap_or(rest.len());
            TokenKind::Other
        } else if language == Language::LangA && rest.starts_with("/*") {
            pos += rest[2..].find("*/").map(|i| i + 4).unwrap_or(rest.len());
            TokenKind::Other
        } else if c.is_ascii_punctuation() {
            let len = MULTI_PUNCT
                .iter()
                .find(|p| rest.starts_with(**p) && !(language == Language::LangA && **p == "//"))
                .map(|p| p.len())
                .unwrap_or(1);
            pos += len;
            TokenKind::Punctuation
        } else {
            pos += c.len_utf8();
            TokenKind::Other
        };
        tokens.push(Token {
            kind,
            text: content[start..pos].to_string(),
            sep: content[sep_start..start].to_string(),
        });
        sep_start = pos;
    }

    Ok(TokenStream {
        tokens,
        trailing: content[sep_start..].to_string(),
    })
}

fn string_len(rest: &str, quote: char) -> usize {
    let mut escaped = false;
    for (i, ch) in rest.char_indices().skip(1) {
        if escaped {
            escaped = false;
        } else if ch == '\\' {
            escaped = true;
        } else if ch == quote {
            return i + 1;
        } else if ch == '\n' {
            // unterminated string: stop at end of line
            return i;
        }
    }
    rest.len()
}

/// Inverse of [`lex`].
pub fn detokenize(stream: &TokenStream) -> String {
    let mut out = String::new();
    for t in &stream.tokens {
        out.push_str(&t.sep);
        out.push_str(&t.text);
    }
    out.push_str(&stream.trailing);
    out
}

/// Decodes raw file bytes, rejecting binary or non-UTF-8 content.
pub fn decode_source(path: &str, bytes: &[u8]) -> Result<String> {
    if bytes.contains(&0) {
        return Err(Error::Undecodable {
            path: path.to_string(),
            reason: "binary content (NUL byte)".into(),
        });
    }
    String::from_utf8(bytes.to_vec()).map_err(|e| Error::Undecodable {
        path: path.to_string(),
        reason: e.to_string(),
    })
}
