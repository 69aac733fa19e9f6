//! Synthetic corpora for the benchmarks in `benches/`.

use numprobe_core::corpus::{Dataset, Hypothesis, Label, Table};

const TEMPLATES: [&str; 8] = [
    "{film} runs for {minutes} minutes.",
    "{film} was released on June {day}, {year}.",
    "{film} had the highest box office of ${gross} million.",
    "After the year {before}, {film} was released.",
    "{film} cost ${budget} million to make.",
    "{film} made over ${floor} million at the box office.",
    "The closing of {film} resulted in -{budget} million USD.",
    "{film} runs for more than two hours.",
];

/// A relational film table with `rows` rows.
pub fn film_table(id: &str, rows: usize) -> Table {
    let headers = ["Film", "Release date", "Budget", "Box office", "Running time"];
    let rows = (0..rows)
        .map(|i| {
            vec![
                format!("Film {i}").into(),
                format!("June {}, {}", 1 + i % 28, 1980 + i % 40).into(),
                format!("${} million", 10 + 7 * i).into(),
                format!("${}.{} million", 50 + 13 * i, i % 10).into(),
                format!("{} minutes", 90 + i % 60).into(),
            ]
        })
        .collect();
    Table::new(id, None, headers.iter().map(|h| h.to_string()).collect(), rows).expect("well-formed table")
}

/// `n` hypotheses cycling through the templates over tables of ten films.
pub fn corpus(n: usize) -> Dataset {
    let tables: Vec<Table> = (0..n.div_ceil(10).max(1)).map(|t| film_table(&format!("t{t}"), 10)).collect();
    let hypotheses = (0..n)
        .map(|i| {
            let row = i % 10;
            let text = TEMPLATES[i % TEMPLATES.len()]
                .replace("{film}", &format!("Film {row}"))
                .replace("{minutes}", &(90 + row % 60).to_string())
                .replace("{day}", &(1 + row % 28).to_string())
                .replace("{year}", &(1980 + row % 40).to_string())
                .replace("{before}", &(1975 + row % 40).to_string())
                .replace("{gross}", &format!("{}.{}", 50 + 13 * row, row % 10))
                .replace("{budget}", &(10 + 7 * row).to_string())
                .replace("{floor}", &(40 + 13 * row).to_string());
            Hypothesis {
                id: format!("h{i}"),
                table_id: format!("t{}", i / 10),
                text,
                label: Label::Entail,
                source: String::new(),
                arith: None,
            }
        })
        .collect();
    Dataset { tables, hypotheses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use numprobe_core::corpus::{check_refs, Resources};
    use numprobe_core::probegen::{generate_all, validate_probes, GenerationConfig};

    #[test]
    fn synthetic_corpus_generates_valid_probes() {
        let ds = corpus(40);
        check_refs(&ds).unwrap();
        let res = Resources::bundled();
        let config = GenerationConfig::default();
        let set = generate_all(&ds, &config, res).unwrap();
        assert!(set.probes.len() > 100);
        assert!(validate_probes(&set.probes, &ds, &set.counterfactual_tables, res, &config).is_clean());
    }
}
