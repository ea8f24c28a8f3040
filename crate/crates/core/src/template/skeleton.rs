use thiserror::Error;

use crate::syntax::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Text(String),
    Placeholder(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("unterminated placeholder starting at offset {0}")]
    Unterminated(usize),
    #[error("invalid placeholder name `{name}` at offset {offset}")]
    BadName { name: String, offset: usize },
    #[error("unmatched `}}` at offset {0}; write `}}}}` for a literal brace")]
    StrayClose(usize),
}

/// Markup with `{slot}` placeholders. `{{` and `}}` stand for literal
/// braces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkupTemplate {
    raw: String,
    segments: Vec<Segment>,
}

impl MarkupTemplate {
    pub fn parse(raw: impl Into<String>) -> Result<MarkupTemplate, SkeletonError> {
        let raw = raw.into();
        let mut segments = Vec::new();
        let mut text = String::new();
        let mut chars = raw.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            match c {
                '{' if chars.peek().map(|&(_, c)| c) == Some('{') => {
                    chars.next();
                    text.push('{');
                }
                '}' if chars.peek().map(|&(_, c)| c) == Some('}') => {
                    chars.next();
                    text.push('}');
                }
                '}' => return Err(SkeletonError::StrayClose(i)),
                '{' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '}')) => break,
                            Some((_, c)) => name.push(c),
                            None => return Err(SkeletonError::Unterminated(i)),
                        }
                    }
                    if !is_identifier(&name) {
                        return Err(SkeletonError::BadName { name, offset: i });
                    }
                    if !text.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut text)));
                    }
                    segments.push(Segment::Placeholder(name));
                }
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            segments.push(Segment::Text(text));
        }
        Ok(MarkupTemplate { raw, segments })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Placeholder names in order of appearance, repeats included.
    pub fn placeholders(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Placeholder(name) => Some(name.as_str()),
            Segment::Text(_) => None,
        })
    }

    /// Expands the template, asking `fill` for each placeholder's text.
    pub fn expand<E>(&self, mut fill: impl FnMut(&str) -> Result<String, E>) -> Result<String, E> {
        let mut out = String::with_capacity(self.raw.len());
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Placeholder(name) => out.push_str(&fill(name)?),
            }
        }
        Ok(out)
    }
}
