//! Hand-rolled HTML tokenizer with the error tolerance the lenient parser
//! relies on. Comments, doctypes and processing instructions are consumed
//! and dropped; the tree builder never sees them.

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    StartTag {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
        span: (usize, usize),
    },
    EndTag {
        name: String,
        span: (usize, usize),
    },
    Text {
        text: String,
        span: (usize, usize),
    },
    /// A `<` ran into end-of-input before the tag closed; the fragment is
    /// discarded and the parser records a structural recovery.
    UnterminatedMarkup {
        span: (usize, usize),
    },
}

pub(crate) struct Tokenizer<'a> {
    input: &'a [u8],
    src: &'a str,
    pos: usize,
    /// When set, everything up to the matching case-insensitive end tag is
    /// one raw text token (script/style/title/textarea contents).
    rawtext: Option<String>,
}

impl<'a> Tokenizer<'a> {
    pub fn new(src: &'a str) -> Self {
        Self {
            input: src.as_bytes(),
            src,
            pos: 0,
            rawtext: None,
        }
    }

    pub fn enter_rawtext(&mut self, tag: &str) {
        self.rawtext = Some(tag.to_string());
    }

    pub fn next_token(&mut self) -> Option<Token> {
        if self.pos >= self.input.len() {
            return None;
        }
        if let Some(tag) = self.rawtext.take() {
            return Some(self.rawtext_token(&tag));
        }
        let start = self.pos;
        if self.input[self.pos] == b'<' {
            self.markup(start)
        } else {
            let end = self.find_lt(self.pos + 1);
            self.pos = end;
            Some(Token::Text {
                text: decode_entities(&self.src[start..end]),
                span: (start, end),
            })
        }
    }

    fn find_lt(&self, from: usize) -> usize {
        self.input[from..]
            .iter()
            .position(|&b| b == b'<')
            .map(|i| from + i)
            .unwrap_or(self.input.len())
    }

    fn rawtext_token(&mut self, tag: &str) -> Token {
        let start = self.pos;
        let needle = format!("</{tag}");
        let lower: Vec<u8> = self.input[start..]
            .iter()
            .map(|b| b.to_ascii_lowercase())
            .collect();
        let mut search = 0usize;
        let end = loop {
            match find_sub(&lower[search..], needle.as_bytes()) {
                Some(rel) => {
                    let at = search + rel;
                    // must be followed by '>', whitespace, '/', or EOF
                    let after = at + needle.len();
                    if after >= lower.len()
                        || matches!(lower[after], b'>' | b'/' | b' ' | b'\t' | b'\n' | b'\r')
                    {
                        break start + at;
                    }
                    search = at + 1;
                }
                None => break self.input.len(),
            }
        };
        self.pos = end;
        Token::Text {
            text: self.src[start..end].to_string(),
            span: (start, end),
        }
    }

    /// At a `<`. Dispatch on what follows.
    fn markup(&mut self, start: usize) -> Option<Token> {
        let next = self.input.get(start + 1).copied();
        match next {
            Some(b'!') => {
                // comment, doctype, or bogus declaration: consumed silently
                if self.src[start..].starts_with("<!--") {
                    self.pos = match find_sub(&self.input[start + 4..], b"-->") {
                        Some(i) => start + 4 + i + 3,
                        None => self.input.len(),
                    };
                } else {
                    self.skip_to_gt(start + 2);
                }
                self.next_token()
            }
            Some(b'?') => {
                self.skip_to_gt(start + 2);
                self.next_token()
            }
            Some(b'/') => {
                let c = self.input.get(start + 2).copied();
                if c.map(|b| b.is_ascii_alphabetic()).unwrap_or(false) {
                    self.end_tag(start)
                } else {
                    // `</>` or `</3>`: bogus comment per recovery policy
                    self.skip_to_gt(start + 2);
                    self.next_token()
                }
            }
            Some(c) if c.is_ascii_alphabetic() => self.start_tag(start),
            Some(_) => {
                // literal `<` in text
                let end = self.find_lt(start + 1);
                self.pos = end;
                Some(Token::Text {
                    text: decode_entities(&self.src[start..end]),
                    span: (start, end),
                })
            }
            None => {
                self.pos = self.input.len();
                Some(Token::Text {
                    text: "<".to_string(),
                    span: (start, self.input.len()),
                })
            }
        }
    }

    fn skip_to_gt(&mut self, from: usize) {
        self.pos = self.input[from..]
            .iter()
            .position(|&b| b == b'>')
            .map(|i| from + i + 1)
            .unwrap_or(self.input.len());
    }

    fn end_tag(&mut self, start: usize) -> Option<Token> {
        let mut i = start + 2;
        let name_start = i;
        while i < self.input.len() && !is_name_end(self.input[i]) {
            i += 1;
        }
        let name = self.src[name_start..i].to_ascii_lowercase();
        // discard anything else inside the end tag
        while i < self.input.len() && self.input[i] != b'>' {
            i += 1;
        }
        if i >= self.input.len() {
            self.pos = self.input.len();
            return Some(Token::UnterminatedMarkup {
                span: (start, self.input.len()),
            });
        }
        self.pos = i + 1;
        Some(Token::EndTag {
            name,
            span: (start, self.pos),
        })
    }

    fn start_tag(&mut self, start: usize) -> Option<Token> {
        let mut i = start + 1;
        let name_start = i;
        while i < self.input.len() && !is_name_end(self.input[i]) {
            i += 1;
        }
        let name = self.src[name_start..i].to_ascii_lowercase();
        let mut attrs: Vec<(String, String)> = Vec::new();
        let mut self_closing = false;
        loop {
            while i < self.input.len() && self.input[i].is_ascii_whitespace() {
                i += 1;
            }
            if i >= self.input.len() {
                self.pos = self.input.len();
                return Some(Token::UnterminatedMarkup {
                    span: (start, self.input.len()),
                });
            }
            match self.input[i] {
                b'>' => {
                    self.pos = i + 1;
                    break;
                }
                b'/' => {
                    // only meaningful immediately before '>'
                    if self.input.get(i + 1) == Some(&b'>') {
                        self_closing = true;
                        self.pos = i + 2;
                        break;
                    }
                    i += 1;
                }
                _ => {
                    let attr_start = i;
                    while i < self.input.len() && !is_attr_name_end(self.input[i]) {
                        i += 1;
                    }
                    let attr_name = self.src[attr_start..i].to_ascii_lowercase();
                    while i < self.input.len() && self.input[i].is_ascii_whitespace() {
                        i += 1;
                    }
                    let mut value = String::new();
                    if self.input.get(i) == Some(&b'=') {
                        i += 1;
                        while i < self.input.len() && self.input[i].is_ascii_whitespace() {
                            i += 1;
                        }
                        match self.input.get(i) {
                            Some(&q @ (b'"' | b'\'')) => {
                                i += 1;
                                let v_start = i;
                                while i < self.input.len() && self.input[i] != q {
                                    i += 1;
                                }
                                value = decode_entities(&self.src[v_start..i]);
                                if i < self.input.len() {
                                    i += 1; // closing quote
                                }
                            }
                            _ => {
                                let v_start = i;
                                while i < self.input.len()
                                    && !self.input[i].is_ascii_whitespace()
                                    && self.input[i] != b'>'
                                {
                                    i += 1;
                                }
                                value = decode_entities(&self.src[v_start..i]);
                            }
                        }
                    }
                    if !attr_name.is_empty() && !attrs.iter().any(|(n, _)| *n == attr_name) {
                        attrs.push((attr_name, value));
                    }
                }
            }
        }
        Some(Token::StartTag {
            name,
            attrs,
            self_closing,
            span: (start, self.pos),
        })
    }
}

fn is_name_end(b: u8) -> bool {
    b.is_ascii_whitespace() || b == b'/' || b == b'>'
}

fn is_attr_name_end(b: u8) -> bool {
    b.is_ascii_whitespace() || b == b'=' || b == b'/' || b == b'>'
}

fn find_sub(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.is_empty() || haystack.len() < needle.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| w == needle)
}

/// Decode the five core named entities plus numeric character references.
/// Unknown entities stay literal.
pub(crate) fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let bytes = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'&' {
            if let Some((decoded, consumed)) = decode_one_entity(&s[i..]) {
                out.push_str(&decoded);
                i += consumed;
                continue;
            }
        }
        let ch_len = utf8_len(bytes[i]);
        out.push_str(&s[i..i + ch_len]);
        i += ch_len;
    }
    out
}

fn decode_one_entity(s: &str) -> Option<(String, usize)> {
    const NAMED: [(&str, char); 5] = [
        ("&amp;", '&'),
        ("&lt;", '<'),
        ("&gt;", '>'),
        ("&quot;", '"'),
        ("&apos;", '\''),
    ];
    for (pat, ch) in NAMED {
        if s.starts_with(pat) {
            return Some((ch.to_string(), pat.len()));
        }
    }
    if let Some(rest) = s.strip_prefix("&#") {
        let (digits, radix, prefix_len) = match rest.strip_prefix(['x', 'X']) {
            Some(hex) => (hex, 16, 3),
            None => (rest, 10, 2),
        };
        let end = digits
            .find(|c: char| !c.is_digit(radix))
            .unwrap_or(digits.len());
        if end > 0 && digits[end..].starts_with(';') {
            if let Ok(cp) = u32::from_str_radix(&digits[..end], radix) {
                if let Some(ch) = char::from_u32(cp) {
                    return Some((ch.to_string(), prefix_len + end + 1));
                }
            }
        }
    }
    None
}

fn utf8_len(b: u8) -> usize {
    match b {
        0x00..=0x7f => 1,
        0xc0..=0xdf => 2,
        0xe0..=0xef => 3,
        _ => 4,
    }
}
