//! Rule-based recasting of table-QA pairs into declarative hypotheses.
//!
//! Templates cover who, what, when, where, which, how many, how much,
//! "how" plus an adjective, and yes/no questions, with an optional leading
//! preposition ("In which year ..."). Questions outside them are reported
//! as unsupported rather than rewritten badly.

use super::CorpusError;
use crate::numparse::{MentionKind, MentionValue, Scanner};

pub const RECAST_RULES: [&str; 9] =
    ["who", "what", "when", "where", "which", "how-many", "how-much", "how-adjective", "yes-no"];

/// Which template fired and the steps it took.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecastTrace {
    pub rule: &'static str,
    pub steps: Vec<String>,
}

impl RecastTrace {
    fn step(&mut self, s: impl Into<String>) {
        self.steps.push(s.into());
    }
}

const BE: [&str; 4] = ["is", "are", "was", "were"];
const DO: [&str; 3] = ["do", "does", "did"];
const MODAL: [&str; 10] = ["has", "have", "had", "can", "could", "will", "would", "should", "may", "might"];

/// (base, third person singular, past, past participle)
const IRREGULAR: [(&str, &str, &str, &str); 62] = [
    ("be", "is", "was", "been"),
    ("beat", "beats", "beat", "beaten"),
    ("become", "becomes", "became", "become"),
    ("begin", "begins", "began", "begun"),
    ("break", "breaks", "broke", "broken"),
    ("bring", "brings", "brought", "brought"),
    ("build", "builds", "built", "built"),
    ("buy", "buys", "bought", "bought"),
    ("choose", "chooses", "chose", "chosen"),
    ("come", "comes", "came", "come"),
    ("cost", "costs", "cost", "cost"),
    ("do", "does", "did", "done"),
    ("draw", "draws", "drew", "drawn"),
    ("drive", "drives", "drove", "driven"),
    ("eat", "eats", "ate", "eaten"),
    ("fall", "falls", "fell", "fallen"),
    ("feel", "feels", "felt", "felt"),
    ("fight", "fights", "fought", "fought"),
    ("find", "finds", "found", "found"),
    ("fly", "flies", "flew", "flown"),
    ("get", "gets", "got", "gotten"),
    ("give", "gives", "gave", "given"),
    ("go", "goes", "went", "gone"),
    ("grow", "grows", "grew", "grown"),
    ("have", "has", "had", "had"),
    ("hit", "hits", "hit", "hit"),
    ("hold", "holds", "held", "held"),
    ("keep", "keeps", "kept", "kept"),
    ("know", "knows", "knew", "known"),
    ("lead", "leads", "led", "led"),
    ("leave", "leaves", "left", "left"),
    ("lose", "loses", "lost", "lost"),
    ("make", "makes", "made", "made"),
    ("meet", "meets", "met", "met"),
    ("pay", "pays", "paid", "paid"),
    ("put", "puts", "put", "put"),
    ("read", "reads", "read", "read"),
    ("ride", "rides", "rode", "ridden"),
    ("rise", "rises", "rose", "risen"),
    ("run", "runs", "ran", "run"),
    ("say", "says", "said", "said"),
    ("see", "sees", "saw", "seen"),
    ("sell", "sells", "sold", "sold"),
    ("send", "sends", "sent", "sent"),
    ("set", "sets", "set", "set"),
    ("shoot", "shoots", "shot", "shot"),
    ("sing", "sings", "sang", "sung"),
    ("sit", "sits", "sat", "sat"),
    ("speak", "speaks", "spoke", "spoken"),
    ("spend", "spends", "spent", "spent"),
    ("stand", "stands", "stood", "stood"),
    ("steal", "steals", "stole", "stolen"),
    ("swim", "swims", "swam", "swum"),
    ("take", "takes", "took", "taken"),
    ("teach", "teaches", "taught", "taught"),
    ("tell", "tells", "told", "told"),
    ("think", "thinks", "thought", "thought"),
    ("throw", "throws", "threw", "thrown"),
    ("win", "wins", "won", "won"),
    ("wear", "wears", "wore", "worn"),
    ("withdraw", "withdraws", "withdrew", "withdrawn"),
    ("write", "writes", "wrote", "written"),
];

const REGULAR: [&str; 80] = [
    "achieve",
    "acquire",
    "add",
    "appear",
    "attend",
    "attract",
    "cause",
    "hire",
    "change",
    "close",
    "coach",
    "collect",
    "compete",
    "complete",
    "contain",
    "cover",
    "create",
    "debut",
    "decline",
    "decrease",
    "defeat",
    "design",
    "die",
    "direct",
    "drop",
    "earn",
    "employ",
    "end",
    "enter",
    "establish",
    "export",
    "finish",
    "form",
    "found",
    "gain",
    "generate",
    "graduate",
    "host",
    "import",
    "include",
    "increase",
    "invest",
    "join",
    "last",
    "launch",
    "live",
    "manage",
    "marry",
    "measure",
    "move",
    "need",
    "open",
    "own",
    "pass",
    "perform",
    "play",
    "produce",
    "publish",
    "rank",
    "reach",
    "receive",
    "record",
    "release",
    "report",
    "represent",
    "retire",
    "return",
    "score",
    "serve",
    "sign",
    "star",
    "start",
    "stop",
    "study",
    "train",
    "turn",
    "visit",
    "vote",
    "weigh",
    "work",
];

const DOUBLED: [&str; 4] = ["star", "stop", "drop", "plan"];

/// Words that, after the subject of a yes/no question, begin the predicate.
const PREDICATE_START: [&str; 16] = [
    "between",
    "more",
    "less",
    "fewer",
    "greater",
    "higher",
    "lower",
    "over",
    "under",
    "above",
    "below",
    "equal",
    "exactly",
    "about",
    "approximately",
    "not",
];

const WEAK_PREDICATE_START: [&str; 7] = ["a", "an", "in", "on", "at", "from", "one"];

const TEMPORAL_NOUNS: [&str; 6] = ["year", "month", "day", "date", "season", "time"];

fn lower(s: &str) -> String {
    s.to_ascii_lowercase()
}

fn irregular(w: &str) -> Option<&'static (&'static str, &'static str, &'static str, &'static str)> {
    IRREGULAR.iter().find(|v| v.0 == w)
}

/// Base-form verb known to the lexicon; `w` must be written in lowercase.
fn is_base_verb(w: &str) -> bool {
    w.chars().all(|c| c.is_ascii_lowercase()) && (irregular(w).is_some() || REGULAR.contains(&w))
}

fn is_participle(w: &str) -> bool {
    if !w.chars().all(|c| c.is_ascii_lowercase()) {
        return false;
    }
    w == "born" || IRREGULAR.iter().any(|v| v.3 == w && v.0 != w) || (w.len() >= 5 && w.ends_with("ed"))
}

fn past(base: &str) -> String {
    if let Some(v) = irregular(base) {
        return v.2.to_string();
    }
    if DOUBLED.contains(&base) {
        let last = base.chars().last().unwrap();
        return format!("{base}{last}ed");
    }
    if base.ends_with('e') {
        format!("{base}d")
    } else if base.ends_with('y') && !base.ends_with("ay") && !base.ends_with("ey") && !base.ends_with("oy") {
        format!("{}ied", &base[..base.len() - 1])
    } else {
        format!("{base}ed")
    }
}

fn third_person(base: &str) -> String {
    if let Some(v) = irregular(base) {
        return v.1.to_string();
    }
    if base.ends_with('y') && !base.ends_with("ay") && !base.ends_with("ey") && !base.ends_with("oy") {
        format!("{}ies", &base[..base.len() - 1])
    } else if ["s", "sh", "ch", "x", "z", "o"].iter().any(|e| base.ends_with(e)) {
        format!("{base}es")
    } else {
        format!("{base}s")
    }
}

/// The verb form standing in for do-support: "did win" → "won".
fn inflect(aux: &str, base: &str) -> String {
    match aux {
        "did" => past(base),
        "does" => third_person(base),
        _ => base.to_string(),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn join(parts: &[&str]) -> String {
    parts.iter().filter(|p| !p.is_empty()).copied().collect::<Vec<_>>().join(" ")
}

fn finish(body: &str) -> String {
    let body = body.trim().trim_end_matches(['.', ',', ';']);
    format!("{}.", capitalize(body))
}

/// Preposition introducing a temporal or locative answer.
fn preposition(wh: &str, answer: &str) -> &'static str {
    if wh == "where" {
        return "in";
    }
    let ms = Scanner::bundled().scan(answer);
    match ms.first().map(|m| (&m.kind, &m.value)) {
        Some((MentionKind::Time, _)) => "at",
        Some((MentionKind::Date, MentionValue::Date(d))) if d.day.is_some() => "on",
        _ => "in",
    }
}

fn find_verb(rest: &[&str]) -> Option<usize> {
    (1..rest.len()).find(|&i| is_base_verb(rest[i]))
}

fn find_participle(rest: &[&str]) -> Option<usize> {
    rest.iter().position(|w| is_participle(w))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Polarity {
    Yes,
    No,
}

fn polarity(answer: &str) -> Option<Polarity> {
    match lower(answer.trim().trim_end_matches('.')).as_str() {
        "yes" | "true" | "correct" | "y" => Some(Polarity::Yes),
        "no" | "false" | "incorrect" | "n" => Some(Polarity::No),
        _ => None,
    }
}

fn yes_no(words: &[&str], answer: &str, tr: &mut RecastTrace) -> Option<String> {
    tr.rule = "yes-no";
    let aux = lower(words[0]);
    let rest = &words[1..];
    let pol = polarity(answer)?;
    tr.step(format!("answer {answer:?} read as {}", if pol == Polarity::Yes { "affirmative" } else { "negative" }));
    let not = if pol == Polarity::No { "not" } else { "" };
    if DO.contains(&aux.as_str()) {
        let k = find_verb(rest)?;
        let subject = rest[..k].join(" ");
        let tail = rest[k + 1..].join(" ");
        tr.step(format!("do-support: subject {subject:?}, verb {:?}", rest[k]));
        let body = match pol {
            Polarity::Yes => join(&[&subject, &inflect(&aux, rest[k]), &tail]),
            Polarity::No => join(&[&subject, &aux, not, rest[k], &tail]),
        };
        return Some(finish(&body));
    }
    let strong = (1..rest.len()).find(|&i| {
        let w = lower(rest[i]);
        PREDICATE_START.contains(&w.as_str())
            || is_participle(rest[i])
            || (i + 1 < rest.len() && lower(rest[i + 1]) == "than")
    });
    let k = strong.or_else(|| (1..rest.len()).find(|&i| WEAK_PREDICATE_START.contains(&rest[i])))?;
    tr.step(format!("subject {:?} moved before {aux:?}", rest[..k].join(" ")));
    Some(finish(&join(&[&rest[..k].join(" "), &aux, not, &rest[k..].join(" ")])))
}

/// Adjectives asked about with "how": "How tall is X?" → "X is 1.85 m tall."
const HOW_ADJECTIVES: [&str; 9] = ["tall", "long", "high", "deep", "wide", "heavy", "far", "old", "big"];

const LEADING_PREPOSITIONS: [&str; 7] = ["in", "on", "at", "during", "for", "from", "since"];

fn how_adjective(words: &[&str], answer: &str, tr: &mut RecastTrace) -> Option<String> {
    let adj = lower(words[1]);
    let aux = lower(words.get(2)?);
    if !HOW_ADJECTIVES.contains(&adj.as_str()) || !BE.contains(&aux.as_str()) || words.len() < 4 {
        return None;
    }
    tr.rule = "how-adjective";
    let bare_number = answer.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',');
    let measure = if adj == "old" && bare_number { format!("{answer} years old") } else { format!("{answer} {adj}") };
    tr.step(format!("\"how {adj}\" stands for {measure:?}"));
    Some(finish(&join(&[&words[3..].join(" "), &aux, &measure])))
}

fn wh(words: &[&str], answer: &str, prep: Option<&str>, tr: &mut RecastTrace) -> Option<String> {
    let w0 = lower(words[0]);
    let (wh, start): (&'static str, usize) = match w0.as_str() {
        "who" | "whom" => ("who", 1),
        "what" => ("what", 1),
        "when" => ("when", 1),
        "where" => ("where", 1),
        "which" => ("which", 1),
        "how" if words.len() > 1 && lower(words[1]) == "many" => ("how-many", 2),
        "how" if words.len() > 1 && lower(words[1]) == "much" => ("how-much", 2),
        _ => return None,
    };
    tr.rule = wh;
    let is_aux = |w: &str| {
        let w = lower(w);
        BE.contains(&w.as_str()) || DO.contains(&w.as_str()) || MODAL.contains(&w.as_str())
    };
    let aux_at = (start..words.len()).find(|&i| is_aux(words[i]));
    let np_end = match aux_at {
        Some(p) => p,
        // No auxiliary: the noun phrase after the wh-word runs up to the verb.
        None if start == 1 && matches!(wh, "who" | "what") => 1,
        None => {
            (start..words.len()).find(|&i| is_base_verb(words[i]) || is_participle(words[i]) || is_past(words[i]))?
        }
    };
    let np = words[start..np_end].join(" ");
    if matches!(wh, "when" | "where") && !np.is_empty() || prep.is_some() && !matches!(wh, "which" | "what") {
        return None;
    }
    let temporal = TEMPORAL_NOUNS.contains(&lower(&np).as_str());
    let answer_np = match wh {
        "how-many" if !np.is_empty() && !lower(answer).contains(&lower(np.split(' ').next_back().unwrap_or(""))) => {
            format!("{answer} {np}")
        }
        "how-much" if !np.is_empty() && lower(&np) != "money" => format!("{answer} of {np}"),
        _ => answer.to_string(),
    };
    tr.step(format!("wh-phrase {:?} stands for {answer_np:?}", words[..np_end].join(" ")));

    let Some(p) = aux_at.filter(|&p| p == np_end) else {
        if matches!(wh, "when" | "where") || prep.is_some() {
            return None;
        }
        tr.step("subject question: wh-phrase replaced in place");
        return Some(finish(&join(&[&answer_np, &words[np_end..].join(" ")])));
    };
    let aux = lower(words[p]);
    let rest = &words[p + 1..];
    if rest.is_empty() {
        return None;
    }
    if is_participle(rest[0]) && !matches!(wh, "when" | "where") && prep.is_none() {
        tr.step("passive subject question: wh-phrase replaced in place");
        return Some(finish(&join(&[&answer_np, &aux, &rest.join(" ")])));
    }
    let place_at_end = matches!(wh, "when" | "where") || temporal || prep.is_some();
    let tail_answer = match prep {
        Some(pr) => format!("{pr} {answer}"),
        None if place_at_end => format!("{} {answer}", preposition(wh, answer)),
        None => answer_np.clone(),
    };

    if BE.contains(&aux.as_str()) {
        if let Some(k) = find_participle(rest).filter(|&k| k > 0) {
            tr.step(format!("{aux:?} moved back before participle {:?}", rest[k]));
            let body = join(&[&rest[..k].join(" "), &aux, &rest[k..].join(" "), &tail_answer]);
            return Some(finish(&body));
        }
        if place_at_end {
            // "was revenue highest" → "revenue was highest".
            let k = (1..rest.len()).find(|&i| {
                let w = lower(rest[i]);
                w.ends_with("est") || w == "most" || w == "least" || PREDICATE_START.contains(&w.as_str())
            });
            let k = k.unwrap_or(rest.len());
            tr.step(format!("{aux:?} moved after the subject"));
            return Some(finish(&join(&[&rest[..k].join(" "), &aux, &rest[k..].join(" "), &tail_answer])));
        }
        if wh == "how-many" {
            tr.step("count phrase moved before the copula");
            return Some(finish(&join(&[&answer_np, &aux, &rest.join(" ")])));
        }
        tr.step(format!("copula question: subject, {aux:?}, answer"));
        return Some(finish(&join(&[&rest.join(" "), &aux, &answer_np])));
    }
    let Some(k) = find_verb(rest).or_else(|| find_participle(rest).filter(|&k| k > 0)) else {
        // "Which city has the smallest population?": the wh-phrase is the subject.
        if matches!(wh, "which" | "what" | "who") && !np.is_empty() && prep.is_none() {
            tr.step(format!("subject question with {aux:?}: wh-phrase replaced in place"));
            return Some(finish(&join(&[&answer_np, &aux, &rest.join(" ")])));
        }
        return None;
    };
    let subject = rest[..k].join(" ");
    let tail = rest[k + 1..].join(" ");
    let verb = if DO.contains(&aux.as_str()) {
        tr.step(format!("do-support removed: {aux:?} + {:?}", rest[k]));
        inflect(&aux, rest[k])
    } else {
        tr.step(format!("{aux:?} moved after the subject"));
        format!("{aux} {}", rest[k])
    };
    let body = if place_at_end {
        join(&[&subject, &verb, &tail, &tail_answer])
    } else {
        join(&[&subject, &verb, &answer_np, &tail])
    };
    Some(finish(&body))
}

fn is_past(w: &str) -> bool {
    w.chars().all(|c| c.is_ascii_lowercase())
        && (IRREGULAR.iter().any(|v| v.2 == w) || (w.len() >= 5 && w.ends_with("ed")))
}

/// Recasts and reports the rule trace.
pub fn recast_traced(question: &str, answer: &str) -> Result<(String, RecastTrace), CorpusError> {
    let unsupported = || CorpusError::UnsupportedQuestionForm(question.to_string());
    let q = question.trim();
    if !q.ends_with('?') || answer.trim().is_empty() {
        return Err(unsupported());
    }
    let words: Vec<&str> = q.trim_end_matches('?').split_whitespace().collect();
    if words.len() < 2 {
        return Err(unsupported());
    }
    let mut tr = RecastTrace::default();
    let answer = answer.trim();
    let w0 = lower(words[0]);
    let out = if BE.contains(&w0.as_str()) || DO.contains(&w0.as_str()) || MODAL.contains(&w0.as_str()) {
        yes_no(&words, answer, &mut tr)
    } else if w0 == "how" && words.len() > 1 && HOW_ADJECTIVES.contains(&lower(words[1]).as_str()) {
        how_adjective(&words, answer, &mut tr)
    } else if LEADING_PREPOSITIONS.contains(&w0.as_str()) {
        let prep = lower(words[0]);
        tr.step(format!("leading {prep:?} moved before the answer"));
        wh(&words[1..], answer, Some(&prep), &mut tr)
    } else {
        wh(&words, answer, None, &mut tr)
    };
    let out = out.ok_or_else(unsupported)?;
    tr.step("terminal \"?\" replaced by \".\"");
    Ok((out, tr))
}

/// Declarative sentence stating `answer` as the answer to `question`.
pub fn recast_qa_to_nli(question: &str, answer: &str) -> Result<String, CorpusError> {
    recast_traced(question, answer).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(q: &str, a: &str) -> String {
        recast_qa_to_nli(q, a).unwrap()
    }

    #[test]
    fn adjective_preposition_and_subject_which() {
        assert_eq!(r("How tall is Rafael Nadal?", "1.85 m"), "Rafael Nadal is 1.85 m tall.");
        assert_eq!(r("How old is the mayor?", "52"), "The mayor is 52 years old.");
        assert_eq!(r("In which year was revenue highest?", "2021"), "Revenue was highest in 2021.");
        assert_eq!(r("In which city did she study?", "Oslo"), "She studied in Oslo.");
        assert_eq!(r("Which city has the smallest population?", "Trondheim"), "Trondheim has the smallest population.");
        assert!(recast_qa_to_nli("For whom was it built?", "x").is_err());
    }

    #[test]
    fn wh_questions() {
        let (s, tr) = recast_traced("Who directed Hulk?", "Ang Lee").unwrap();
        assert_eq!(s, "Ang Lee directed Hulk.");
        assert_eq!(tr.rule, "who");
        assert!(tr.steps.iter().any(|s| s.contains("replaced in place")));
        assert_eq!(r("What was the budget of Hulk?", "$137 million"), "The budget of Hulk was $137 million.");
        assert_eq!(r("When was Hulk released?", "June 20, 2003"), "Hulk was released on June 20, 2003.");
        assert_eq!(r("When did Nadal turn pro?", "2001"), "Nadal turned pro in 2001.");
        assert_eq!(r("Where was Nadal born?", "Manacor"), "Nadal was born in Manacor.");
        assert_eq!(r("How many games did Nadal win in 2008?", "82"), "Nadal won 82 games in 2008.");
        assert_eq!(r("How much did Hulk earn?", "$245.4 million"), "Hulk earned $245.4 million.");
        assert_eq!(r("Which team won the final?", "Spain"), "Spain won the final.");
        assert_eq!(r("What year was Hulk released?", "2003"), "Hulk was released in 2003.");
        assert_eq!(r("How many titles has Nadal won?", "22"), "Nadal has won 22 titles.");
    }

    #[test]
    fn yes_no_questions() {
        let (s, tr) = recast_traced("Was the budget of the movie between $130 and $245.4?", "yes").unwrap();
        assert_eq!(s, "The budget of the movie was between $130 and $245.4.");
        assert_eq!(tr.rule, "yes-no");
        assert_eq!(r("Did Nadal win more than 80 games?", "no"), "Nadal did not win more than 80 games.");
        assert_eq!(r("Is Nadal older than Federer?", "no"), "Nadal is not older than Federer.");
        assert_eq!(r("Was Hulk released in 2003?", "yes"), "Hulk was released in 2003.");
    }

    #[test]
    fn unsupported() {
        assert!(matches!(recast_qa_to_nli("", "x"), Err(CorpusError::UnsupportedQuestionForm(_))));
        assert!(recast_qa_to_nli("Why did it fail?", "x").is_err());
        assert!(recast_qa_to_nli("Was it good?", "maybe").is_err());
        assert!(recast_qa_to_nli("Tell me the budget", "x").is_err());
    }
}
