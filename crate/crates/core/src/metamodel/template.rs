//! Dynamic label templates and the text composition rules shared by the
//! formalized-statement view, the editor preview and statement rendering.

use serde::{Deserialize, Serialize};

/// One element of a dynamic label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Segment {
    Text { text: String },
    Slot {
        index: usize,
        thematic_label: String,
        preposition: String,
        postposition: String,
    },
}

/// Textual display template of a statement pattern: the subject slot, the
/// verb, then the object slots in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicLabelTemplate {
    pub segments: Vec<Segment>,
}

/// Character span of one filled position inside a composed label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSpan {
    pub thematic_label: String,
    pub start: usize,
    pub end: usize,
}

impl DynamicLabelTemplate {
    pub fn slots(&self) -> impl Iterator<Item = (usize, &str)> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot { index, thematic_label, .. } => Some((*index, thematic_label.as_str())),
            Segment::Text { .. } => None,
        })
    }

    /// Composes the label. `fill` returns the text for a slot, or `None` when
    /// the slot is empty; empty slots are dropped together with their pre- and
    /// postposition.
    pub fn compose<F>(&self, mut fill: F) -> (String, Vec<SlotSpan>)
    where
        F: FnMut(usize, &str) -> Option<String>,
    {
        let mut b = LabelBuilder::default();
        for seg in &self.segments {
            match seg {
                Segment::Text { text } => {
                    b.push(text, Piece::Text);
                }
                Segment::Slot { index, thematic_label, preposition, postposition } => {
                    let Some(value) = fill(*index, thematic_label) else {
                        continue;
                    };
                    if value.is_empty() {
                        continue;
                    }
                    b.push(preposition, Piece::Affix);
                    let start = b.push(&value, Piece::Value);
                    let end = b.len_chars();
                    b.spans.push(SlotSpan { thematic_label: thematic_label.clone(), start, end });
                    b.push(postposition, Piece::Affix);
                }
            }
        }
        b.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Text,
    Affix,
    Value,
}

/// Characters after which an affix attaches to the following piece.
const OPENING: &[char] = &['(', '[', '{', '-', '/', '\u{2013}'];
/// Characters with which an affix attaches to the preceding piece.
const CLOSING: &[char] = &[')', ']', '}', ',', '.', ';', ':', '%', '!', '?', '-', '/', '\u{2013}'];

#[derive(Default)]
struct LabelBuilder {
    out: String,
    chars: usize,
    last: Option<Piece>,
    spans: Vec<SlotSpan>,
}

impl LabelBuilder {
    fn len_chars(&self) -> usize {
        self.chars
    }

    /// Appends a piece and returns the character offset where its visible
    /// text starts.
    fn push(&mut self, text: &str, kind: Piece) -> usize {
        if text.is_empty() {
            return self.chars;
        }
        let mut text = text;
        if self.out.is_empty() {
            text = text.trim_start();
        } else {
            let out_ws = self.out.ends_with(char::is_whitespace);
            let text_ws = text.starts_with(char::is_whitespace);
            if out_ws && text_ws {
                text = text.trim_start();
            } else if !out_ws && !text_ws && self.needs_space(text, kind) {
                self.append(" ");
            }
        }
        let start = self.chars + text.chars().take_while(|c| c.is_whitespace()).count();
        self.append(text);
        self.last = Some(kind);
        start
    }

    fn needs_space(&self, next: &str, kind: Piece) -> bool {
        let prev_attaches = self.last == Some(Piece::Affix)
            && self.out.chars().next_back().is_some_and(|c| OPENING.contains(&c));
        let next_attaches =
            kind == Piece::Affix && next.chars().next().is_some_and(|c| CLOSING.contains(&c));
        !(prev_attaches || next_attaches)
    }

    fn append(&mut self, s: &str) {
        self.out.push_str(s);
        self.chars += s.chars().count();
    }

    fn finish(mut self) -> (String, Vec<SlotSpan>) {
        let trimmed = self.out.trim_end().len();
        self.out.truncate(trimmed);
        (self.out, self.spans)
    }
}

/// Joins multiple values of one position: `a`, `a and b`, `a, b and c`.
pub fn join_values<S: AsRef<str>>(values: &[S]) -> String {
    match values {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(|s| s.as_ref()).collect();
            format!("{} and {}", head.join(", "), last.as_ref())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(index: usize, label: &str, pre: &str, post: &str) -> Segment {
        Segment::Slot {
            index,
            thematic_label: label.into(),
            preposition: pre.into(),
            postposition: post.into(),
        }
    }

    fn text(t: &str) -> Segment {
        Segment::Text { text: t.into() }
    }

    #[test]
    fn join_rule() {
        assert_eq!(join_values::<&str>(&[]), "");
        assert_eq!(join_values(&["Bob"]), "Bob");
        assert_eq!(join_values(&["Sarah", "Anna"]), "Sarah and Anna");
        assert_eq!(join_values(&["a", "b", "c"]), "a, b and c");
    }

    #[test]
    fn affix_attachment() {
        let t = DynamicLabelTemplate {
            segments: vec![
                slot(0, "A", "", ""),
                text("is"),
                slot(1, "B", "(", "%"),
                slot(2, "C", "", ""),
                slot(3, "D", "-", ")"),
            ],
        };
        let (s, spans) = t.compose(|_, l| Some(l.to_lowercase()));
        assert_eq!(s, "a is (b% c-d)");
        let picked: Vec<&str> = spans
            .iter()
            .map(|sp| {
                let start = s.char_indices().nth(sp.start).unwrap().0;
                let end = s.char_indices().nth(sp.end).map(|x| x.0).unwrap_or(s.len());
                &s[start..end]
            })
            .collect();
        assert_eq!(picked, ["a", "b", "c", "d"]);
    }

    #[test]
    fn explicit_whitespace_in_affixes_is_kept() {
        let t = DynamicLabelTemplate {
            segments: vec![slot(0, "A", "", ""), text("x"), slot(1, "B", "(", " % y:"), slot(2, "C", " - ", "")],
        };
        let (s, _) = t.compose(|_, l| Some(l.to_string()));
        assert_eq!(s, "A x (B % y: - C");
    }

    #[test]
    fn values_are_never_attached() {
        let t = DynamicLabelTemplate { segments: vec![slot(0, "A", "", ""), text("is"), slot(1, "B", "", "")] };
        let (s, _) = t.compose(|i, _| Some(if i == 0 { "x".into() } else { "-5".into() }));
        assert_eq!(s, "x is -5");
    }

    #[test]
    fn empty_slots_drop_affixes() {
        let t = DynamicLabelTemplate {
            segments: vec![slot(0, "A", "This", ""), text("goes"), slot(1, "B", "to", ""), slot(2, "C", "by", "")],
        };
        let (s, spans) = t.compose(|i, l| (i != 1).then(|| l.to_string()));
        assert_eq!(s, "This A goes by C");
        assert_eq!(spans.len(), 2);
    }
}
