//! Generator behaviour on small hand-built tables.

use numprobe_core::corpus::*;
use numprobe_core::numparse::NumericValue;
use numprobe_core::probegen::*;

fn nadal() -> Table {
    let rows = [
        ("Born", "3 June 1986"),
        ("Age", "37"),
        ("Turned pro", "2001"),
        ("Height", "1.85 m"),
        ("Prize money", "$116,111,561"),
    ];
    let rows = rows.iter().map(|(k, v)| vec![(*k).into(), (*v).into()]).collect();
    Table::new("nadal", Some("Rafael Nadal".into()), vec![], rows).unwrap()
}

fn films() -> Table {
    let rows = [
        ["Hulk", "June 20, 2003", "$137 million", "$245.4 million", "138 minutes"],
        ["Brokeback Mountain", "December 9, 2005", "$14 million", "$178.1 million", "134 minutes"],
        ["Life of Pi", "November 21, 2012", "$120 million", "$609 million", "127 minutes"],
    ];
    let headers = ["Film", "Release date", "Budget", "Box office", "Running time"];
    Table::new(
        "films",
        None,
        headers.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(|r| r.iter().map(|c| (*c).into()).collect()).collect(),
    )
    .unwrap()
}

fn shop() -> Table {
    let rows = [["pens", "12"], ["pencils", "7"], ["erasers", "30"]];
    Table::new(
        "shop",
        None,
        vec!["Item".into(), "Number sold".into()],
        rows.iter().map(|r| r.iter().map(|c| (*c).into()).collect()).collect(),
    )
    .unwrap()
}

fn hyp(id: &str, table: &str, text: &str, label: Label) -> Hypothesis {
    Hypothesis { id: id.into(), table_id: table.into(), text: text.into(), label, source: String::new(), arith: None }
}

fn num(s: &str) -> NumericValue {
    s.parse().unwrap()
}

fn run(
    h: &Hypothesis,
    table: &Table,
    rt: ReasoningType,
    mode: Mode,
    cfg: &GenerationConfig,
) -> Result<Vec<Probe>, ProbeError> {
    let ctx = GenContext::new(h, table, Resources::bundled(), cfg);
    generate_for(&ctx, rt, mode).map(|(p, _)| p)
}

fn texts(probes: &[Probe]) -> Vec<String> {
    probes.iter().map(|p| p.text.clone().unwrap()).collect()
}

fn cfg() -> GenerationConfig {
    GenerationConfig::default()
}

#[test]
fn numeration_preserve_spells_out_cardinals() {
    let h = hyp("n1", "nadal", "Born in 1986, Nadal is age 37 currently.", Label::Entail);
    let p = run(&h, &nadal(), ReasoningType::Numeration, Mode::Preserve, &cfg()).unwrap();
    assert_eq!(texts(&p), ["Born in nineteen eighty six, Nadal is age thirty seven currently."]);
    assert_eq!(p[0].expected_label, Label::Entail);
    assert_eq!(revert_edits(p[0].text.as_deref().unwrap(), &p[0].edits).unwrap(), h.text);
}

#[test]
fn numeration_flip_stays_within_half_width() {
    let h = hyp("n", "shop", "They sold 112 pens.", Label::Entail);
    for seed in 0..200 {
        let p = run(&h, &shop(), ReasoningType::Numeration, Mode::Flip, &GenerationConfig::with_seed(seed)).unwrap();
        let text = p[0].text.as_deref().unwrap();
        let ms = Resources::bundled().scanner.scan(text);
        assert_eq!(ms.len(), 1, "{text} {ms:?}");
        let m = &ms[0];
        let v = m.number().unwrap();
        assert!(*v >= num("56") && *v <= num("168") && *v != num("112"), "{text}");
        assert!(!text.chars().any(|c| c.is_ascii_digit()), "{text}");
        assert_eq!(p[0].expected_label, Label::Contradict);
    }
}

#[test]
fn heterogeneous_date_and_large_amount() {
    let h = hyp("n2", "nadal", "The player's birth date is on 3rd June, 1986.", Label::Entail);
    let p = run(&h, &nadal(), ReasoningType::Heterogeneous, Mode::Preserve, &cfg()).unwrap();
    assert_eq!(texts(&p), ["The player's birth date is on 03-06-1986."]);
    let f = run(&h, &nadal(), ReasoningType::Heterogeneous, Mode::Flip, &cfg()).unwrap();
    let flipped = f[0].text.as_deref().unwrap();
    assert_ne!(flipped, "The player's birth date is on 03-06-1986.");
    assert!(flipped.starts_with("The player's birth date is on ") && flipped.ends_with('.'));

    let h = hyp("n5", "nadal", "Nadal earned $116,111,561 prize money.", Label::Entail);
    let p = run(&h, &nadal(), ReasoningType::Heterogeneous, Mode::Preserve, &cfg()).unwrap();
    assert_eq!(texts(&p), ["Nadal earned $116.111561e6 prize money."]);
}

#[test]
fn negative_sign_spelled_or_dropped() {
    let h = hyp("neg", "films", "The closing resulted in -5 million USD.", Label::Entail);
    let p = run(&h, &films(), ReasoningType::Negative, Mode::Preserve, &cfg()).unwrap();
    let t = &texts(&p)[0];
    assert!(
        t == "The closing resulted in minus 5 million USD." || t == "The closing resulted in negative 5 million USD.",
        "{t}"
    );
    let f = run(&h, &films(), ReasoningType::Negative, Mode::Flip, &cfg()).unwrap();
    assert_eq!(texts(&f), ["The closing resulted in 5 million USD."]);
    assert_eq!(f[0].expected_label, Label::Contradict);
    let none = hyp("x", "films", "no negatives here 5", Label::Entail);
    assert_eq!(
        run(&none, &films(), ReasoningType::Negative, Mode::Preserve, &cfg()).unwrap_err(),
        ProbeError::NoApplicableMention(ReasoningType::Negative)
    );
}

#[test]
fn scale_conversion_and_mapping() {
    let h = hyp("n3", "nadal", "Nadal has a height of 1.85 meters.", Label::Entail);
    let p = run(&h, &nadal(), ReasoningType::Scale, Mode::Preserve, &cfg()).unwrap();
    let t = texts(&p);
    assert!(t.contains(&"Nadal has a height of 185 centimeters.".to_string()), "{t:?}");
    assert!(t.contains(&"Nadal has a height of 1.85 m.".to_string()), "{t:?}");
    let f = run(&h, &nadal(), ReasoningType::Scale, Mode::Flip, &cfg()).unwrap();
    let conv = f.iter().find(|p| p.sub_mode == "conversion-flip").unwrap();
    let Some(ProbeDetail::Scale { stated, to_unit, .. }) = &conv.detail else { panic!() };
    assert_eq!(to_unit, "foot");
    // True value 1.85 / 0.3048 = 6.0695; the error keeps it at least 10% away.
    let truth = 6.0695;
    let s = stated.to_f64();
    assert!((s / truth - 1.0).abs() >= 0.09 && (s / truth - 1.0).abs() <= 0.51, "{s}");
    let map = f.iter().find(|p| p.sub_mode == "mapping-flip").unwrap();
    assert!(map.text.as_deref().unwrap().starts_with("Nadal has a height of 1.85 "));
}

#[test]
fn comparison_moves_threshold_on_the_right_side() {
    let h = hyp("n4", "nadal", "After the year 2000, the player turned pro.", Label::Entail);
    for seed in 0..50 {
        let c = GenerationConfig::with_seed(seed);
        let p = run(&h, &nadal(), ReasoningType::Comparison, Mode::Preserve, &c).unwrap();
        let Some(ProbeDetail::Comparison { threshold_after, .. }) = &p[0].detail else { panic!() };
        assert!(*threshold_after < num("2001") && *threshold_after != num("2000"));
        assert!(p[0].text.as_deref().unwrap().starts_with("After the year "));
        let f = run(&h, &nadal(), ReasoningType::Comparison, Mode::Flip, &c).unwrap();
        let both = f.iter().find(|p| p.sub_mode == "flip-both").unwrap();
        let Some(ProbeDetail::Comparison { threshold_after, .. }) = &both.detail else { panic!() };
        // "Before X" is false for a 2001 debut exactly when X <= 2001.
        assert!(*threshold_after < num("2001"));
        assert!(both.text.as_deref().unwrap().starts_with("Before the year "));
    }
    let none = hyp("x", "nadal", "The player turned pro in 2001.", Label::Entail);
    assert!(run(&none, &nadal(), ReasoningType::Comparison, Mode::Preserve, &cfg()).is_err());
}

#[test]
fn approximation_rounds_by_magnitude() {
    let h = hyp("n5", "nadal", "Nadal earned $116,111,561 prize money.", Label::Entail);
    let p = run(&h, &nadal(), ReasoningType::Approximation, Mode::Preserve, &cfg()).unwrap();
    let t = &texts(&p)[0];
    assert!(t.ends_with("$116,000,000 prize money."), "{t}");
    assert_eq!(t, "Nadal earned about $116,000,000 prize money.");

    let h = hyp("r", "films", "Hulk runs for 138 minutes.", Label::Entail);
    let f = run(&h, &films(), ReasoningType::Approximation, Mode::Flip, &cfg()).unwrap();
    let Some(ProbeDetail::Approximation { correct, stated, .. }) = &f[0].detail else { panic!() };
    assert_eq!(*correct, num("140"));
    assert!([num("110"), num("120"), num("150"), num("160"), num("170")].contains(stated), "{stated}");

    let round = hyp("r", "nadal", "In 2000 he won 2000 points.", Label::Entail);
    assert!(run(&round, &nadal(), ReasoningType::Approximation, Mode::Preserve, &cfg()).is_err());
}

#[test]
fn range_contains_the_value() {
    let h = hyp("n1", "nadal", "Nadal is age 37 currently.", Label::Entail);
    for seed in 0..100 {
        let p = run(&h, &nadal(), ReasoningType::Range, Mode::Preserve, &GenerationConfig::with_seed(seed)).unwrap();
        let Some(ProbeDetail::Range { value, low, high }) = &p[0].detail else { panic!() };
        assert!(low < value && value < high);
        // Radii are 10 to 50 percent of 37, rounded to whole years.
        assert!(*low >= num("18") && *low <= num("33") && *high >= num("41") && *high <= num("56"));
        let t = p[0].text.as_deref().unwrap();
        assert_eq!(t, format!("Nadal is age between {low}-{high} currently."));
    }
    let small = hyp("s", "shop", "They sold 7 pencils.", Label::Entail);
    for seed in 0..100 {
        let p = run(&small, &shop(), ReasoningType::Range, Mode::Preserve, &GenerationConfig::with_seed(seed)).unwrap();
        let Some(ProbeDetail::Range { low, high, .. }) = &p[0].detail else { panic!() };
        assert!(*low >= num("2") && *low <= num("6") && *high >= num("8") && *high <= num("12"));
    }
    assert!(run(&h, &nadal(), ReasoningType::Range, Mode::Flip, &cfg()).is_err());
}

#[test]
fn sorting_synonym_and_rank_change() {
    let h = hyp("s", "films", "Hulk had the second highest box office of $245.4 million.", Label::Entail);
    let p = run(&h, &films(), ReasoningType::Sorting, Mode::Preserve, &cfg()).unwrap();
    let t = &texts(&p)[0];
    assert!(t.starts_with("Hulk had the second ") && !t.contains("highest"), "{t}");
    let f = run(&h, &films(), ReasoningType::Sorting, Mode::Flip, &cfg()).unwrap();
    let Some(ProbeDetail::Sorting { rank_after, selected, .. }) = &f[0].detail else { panic!() };
    // Box office sorted high to low: 609, 245.4, 178.1.
    match rank_after {
        1 => assert_eq!(*selected, num("609e6")),
        3 => assert_eq!(*selected, num("178.1e6")),
        k => panic!("rank {k}"),
    }
    let bad = hyp("s", "films", "Hulk had the highest box office of $245.4 million.", Label::Entail);
    assert!(run(&bad, &films(), ReasoningType::Sorting, Mode::Preserve, &cfg()).is_err());
}

#[test]
fn arithmetic_result_and_close_miss() {
    let mut h = hyp("a", "films", "Hulk brought in $108.4 million profit.", Label::Entail);
    h.arith = Some(ArithMetadata {
        operands: vec![
            Operand { value: num("245.4"), cell: CellRef::new(0, 3) },
            Operand { value: num("137"), cell: CellRef::new(0, 2) },
        ],
        op: Operation::Subtract,
        result: num("108.4"),
    });
    let p = run(&h, &films(), ReasoningType::Arithmetic, Mode::Preserve, &cfg()).unwrap();
    assert_eq!(texts(&p), ["Hulk brought in $108.4 million profit."]);
    for seed in 0..50 {
        let f = run(&h, &films(), ReasoningType::Arithmetic, Mode::Flip, &GenerationConfig::with_seed(seed)).unwrap();
        let Some(ProbeDetail::Arithmetic { stated, .. }) = &f[0].detail else { panic!() };
        let r = stated.to_f64() / 108.4e6;
        assert!(((0.79..=0.951).contains(&r) || (1.049..=1.21).contains(&r)) && *stated != num("108.4e6"), "{stated}");
    }
}

#[test]
fn word_problem_answer_from_the_same_column() {
    let mut h = hyp("w", "shop", "The store sold 12 pens.", Label::Entail);
    h.source = "tabmwp".into();
    let p = run(&h, &shop(), ReasoningType::WordProblem, Mode::Preserve, &cfg()).unwrap();
    assert_eq!(texts(&p), [h.text.clone()]);
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..100 {
        let f = run(&h, &shop(), ReasoningType::WordProblem, Mode::Flip, &GenerationConfig::with_seed(seed)).unwrap();
        let t = f[0].text.clone().unwrap();
        assert!(t == "The store sold 7 pens." || t == "The store sold 30 pens.", "{t}");
        seen.insert(t);
    }
    assert_eq!(seen.len(), 2);
}

#[test]
fn counterfactual_swap_breaks_the_link() {
    let h = hyp("c", "films", "Hulk was released on June 20, 2003.", Label::Entail);
    let (films, config) = (films(), cfg());
    let ctx = GenContext::new(&h, &films, Resources::bundled(), &config);
    let (t, p) = gen_counterfactual_table(&ctx, Mode::Flip).unwrap();
    assert_eq!(p.expected_label, Label::Contradict);
    assert_eq!(p.table_ref.as_deref(), Some(t.id.as_str()));
    assert_ne!(t.rows[0][1].raw, "June 20, 2003");
    assert!(link_mentions(&h, &t, &Resources::bundled().scanner).iter().all(|l| l.cell != CellRef::new(0, 1)));
    assert_eq!(revert_table_edits(&t, &p.edits).unwrap().rows, films.rows);

    let lonely = Table::new("l", None, vec![], vec![vec!["Released".into(), "June 20, 2003".into()]]).unwrap();
    let ctx = GenContext::new(&h, &lonely, Resources::bundled(), &config);
    assert!(gen_counterfactual_table(&ctx, Mode::Flip).is_err());

    let res = Resources::bundled();
    assert!(admit_counterfactual("Hulk was released in 2003.", res));
    assert!(!admit_counterfactual("Hulk was directed by Ang Lee.", res));
}

fn corpus() -> Dataset {
    let mut hs = vec![
        hyp("n1", "nadal", "Born in 1986, Nadal is age 37 currently.", Label::Entail),
        hyp("n2", "nadal", "The player's birth date is on 3rd June, 1986.", Label::Entail),
        hyp("n3", "nadal", "Nadal has a height of 1.85 meters.", Label::Entail),
        hyp("n4", "nadal", "After the year 2000, the player turned pro.", Label::Entail),
        hyp("n5", "nadal", "Nadal earned $116,111,561 prize money.", Label::Entail),
        hyp("f1", "films", "Hulk had the second highest box office of $245.4 million.", Label::Entail),
        hyp("f2", "films", "Hulk runs for 138 minutes.", Label::Entail),
        hyp("f3", "films", "Hulk was released on June 20, 2003.", Label::Entail),
        hyp("f4", "films", "The closing resulted in -5 million USD.", Label::Entail),
        hyp("w1", "shop", "The store sold 12 pens.", Label::Entail),
    ];
    hs[9].source = "tabmwp".into();
    Dataset { tables: vec![nadal(), films(), shop()], hypotheses: hs }
}

#[test]
fn corpus_run_validates_and_is_deterministic() {
    let ds = corpus();
    let res = Resources::bundled();
    let a = generate_all(&ds, &cfg(), res).unwrap();
    let b = generate_all(&ds, &cfg(), res).unwrap();
    assert_eq!(a, b);
    let report = validate_probes(&a.probes, &ds, &a.counterfactual_tables, res, &cfg());
    assert!(report.is_clean(), "{:#?}", report.violations);
    assert_eq!(report.checked, a.probes.len());
    let c = generate_all(&ds, &GenerationConfig::with_seed(7), res).unwrap();
    assert_ne!(a.probes, c.probes);
    let total: usize = a.counts.iter().map(|c| c.preserve + c.flip).sum();
    assert_eq!(total, a.probes.len());
    let empty = generate_all(&Dataset::default(), &cfg(), res).unwrap();
    assert!(empty.probes.is_empty() && empty.counts.iter().all(|c| c.preserve + c.flip == 0));
}

#[test]
fn validation_catches_tampering() {
    let ds = corpus();
    let res = Resources::bundled();
    let mut set = generate_all(&ds, &cfg(), res).unwrap();
    let p = set.probes.iter_mut().find(|p| p.reasoning_type == ReasoningType::Numeration).unwrap();
    p.expected_label = p.expected_label.flipped();
    let range = set.probes.iter_mut().find(|p| p.reasoning_type == ReasoningType::Range).unwrap();
    if let Some(ProbeDetail::Range { low, .. }) = &mut range.detail {
        *low = num("1000000000");
    }
    let report = validate_probes(&set.probes, &ds, &set.counterfactual_tables, res, &cfg());
    let checks: Vec<&str> = report.violations.iter().map(|v| v.check.as_str()).collect();
    assert!(checks.contains(&"label_algebra") && checks.contains(&"range"), "{checks:?}");
}

#[test]
fn contradicted_bases_keep_only_safe_rewrites() {
    let h = hyp("x", "films", "Hulk runs for 141 minutes.", Label::Contradict);
    let f = films();
    // "about 140 minutes" would be true of a 138-minute film.
    for rt in [ReasoningType::Approximation, ReasoningType::Range] {
        assert!(matches!(run(&h, &f, rt, Mode::Preserve, &cfg()), Err(ProbeError::Unsupported(..))));
    }
    for rt in [ReasoningType::Numeration, ReasoningType::Scale, ReasoningType::Heterogeneous] {
        assert!(matches!(run(&h, &f, rt, Mode::Flip, &cfg()), Err(ProbeError::Unsupported(..))));
    }
    let p = run(&h, &f, ReasoningType::Scale, Mode::Preserve, &cfg()).unwrap();
    assert!(p.iter().all(|p| p.expected_label == Label::Contradict));
    let c = hyp("c", "films", "Hulk runs for more than 140 minutes.", Label::Contradict);
    let p = run(&c, &f, ReasoningType::Comparison, Mode::Flip, &cfg()).unwrap();
    let word = p.iter().find(|p| p.sub_mode == "flip-word").unwrap();
    assert_eq!(word.text.as_deref(), Some("Hulk runs for less than 140 minutes."));
    assert_eq!(word.expected_label, Label::Entail);
}
