use anyhow::Result;
use serde::Serialize;

use crate::Format;

/// Print `value` in the requested format. `csv` falls back to JSON when a
/// command has no tabular form.
pub fn emit<T: Serialize>(
    format: Format,
    value: &T,
    human: impl FnOnce() -> String,
    csv: Option<String>,
) -> Result<()> {
    match format {
        Format::Human => println!("{}", human().trim_end()),
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Csv => match csv {
            Some(rows) => println!("{}", rows.trim_end()),
            None => println!("{}", serde_json::to_string(value)?),
        },
    }
    Ok(())
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}
