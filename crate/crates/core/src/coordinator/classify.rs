//! Regex query classifier. Patterns live in `query_patterns.json` so that
//! experiments pin them alongside the code.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryType {
    Temporal,
    Procedural,
    Factual,
    General,
}

#[derive(Debug, Deserialize)]
struct PatternFile {
    temporal: Vec<String>,
    procedural: Vec<String>,
    factual: Vec<String>,
}

pub const PATTERN_FILE: &str = include_str!("query_patterns.json");

struct Compiled {
    ordered: Vec<(QueryType, Regex)>,
}

fn compile(list: &[String]) -> Regex {
    let alternation = list.join("|");
    Regex::new(&format!(r"(?i)\b(?:{alternation})\b")).expect("pattern file holds valid regexes")
}

fn patterns() -> &'static Compiled {
    static CELL: OnceLock<Compiled> = OnceLock::new();
    CELL.get_or_init(|| {
        let file: PatternFile = serde_json::from_str(PATTERN_FILE).expect("pattern file is valid JSON");
        Compiled {
            ordered: vec![
                (QueryType::Temporal, compile(&file.temporal)),
                (QueryType::Procedural, compile(&file.procedural)),
                (QueryType::Factual, compile(&file.factual)),
            ],
        }
    })
}

/// First matching class in the order temporal, procedural, factual; else general.
pub fn classify_query(text: &str) -> QueryType {
    patterns()
        .ordered
        .iter()
        .find(|(_, re)| re.is_match(text))
        .map_or(QueryType::General, |(kind, _)| *kind)
}
