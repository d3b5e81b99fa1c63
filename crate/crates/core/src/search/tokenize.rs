/// Lowercased tokens. Letters and digits form tokens; `.` and `-` are kept
/// inside a token (so `153.6` and `2021-07-04` stay whole) but trimmed from
/// its ends.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '.' || c == '-'))
        .map(|t| t.trim_matches(|c| c == '.' || c == '-'))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}
