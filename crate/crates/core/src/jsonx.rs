//! Extraction of JSON objects from model output: code-fence stripping and
//! balanced-object scanning, shared by every module that parses LLM text.

/// Strips Markdown code fences (``` / ```json lines), keeping their contents.
pub fn strip_fences(raw: &str) -> String {
    raw.lines()
        .filter(|line| !line.trim_start().starts_with("```"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Returns the first balanced top-level JSON object in `text`, as a slice.
/// String literals and escapes are respected, so braces inside strings do
/// not affect balancing.
pub fn first_object(text: &str) -> Option<&str> {
    all_objects(text).into_iter().next()
}

/// Returns every balanced top-level JSON object in `text`, left to right.
/// Nested objects are not reported separately.
pub fn all_objects(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut objects = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate() {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' if depth > 0 => in_string = true,
            b'{' => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            b'}'
                if depth > 0 => {
                    depth -= 1;
                    if depth == 0 {
                        objects.push(&text[start..=i]);
                    }
                }
            _ => {}
        }
    }
    objects
}

/// Fence-strips and returns the first balanced JSON object, owned.
pub fn extract_object(raw: &str) -> Option<String> {
    let cleaned = strip_fences(raw);
    first_object(&cleaned).map(str::to_string)
}
