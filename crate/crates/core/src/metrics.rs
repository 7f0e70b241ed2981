//! Summarization metrics: ROUGE-1/2/L, relative improvement, and a greedy
//! extractive upper bound.
//!
//! Tokenization is deliberately minimal and fixed — lowercase, whitespace
//! split, ASCII punctuation trimmed from token edges, no stemming, no
//! stopword removal — so scores reproduce bit for bit. ROUGE-L uses the
//! plain LCS over the full token sequences (no summary-level union LCS),
//! which may differ from other scorers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Recall / precision / F1 triple, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl RougeScore {
    const ZERO: RougeScore = RougeScore {
        recall: 0.0,
        precision: 0.0,
        f1: 0.0,
    };

    fn from_counts(overlap: usize, reference_total: usize, candidate_total: usize) -> RougeScore {
        let recall = if reference_total > 0 {
            overlap as f64 / reference_total as f64
        } else {
            0.0
        };
        let precision = if candidate_total > 0 {
            overlap as f64 / candidate_total as f64
        } else {
            0.0
        };
        let f1 = if recall + precision > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        RougeScore {
            recall,
            precision,
            f1,
        }
    }
}

/// Lowercases, splits on whitespace, trims ASCII punctuation from token
/// edges (interior punctuation like apostrophes survives), drops empties.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|tok| tok.trim_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|tok| !tok.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Clipped n-gram overlap count between two token sequences.
pub fn clipped_ngram_overlap(candidate: &[String], reference: &[String], n: usize) -> usize {
    if candidate.len() < n || reference.len() < n {
        return 0;
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    for gram in reference.windows(n) {
        *ref_counts.entry(gram).or_insert(0) += 1;
    }
    let mut overlap = 0;
    for gram in candidate.windows(n) {
        if let Some(count) = ref_counts.get_mut(gram) {
            if *count > 0 {
                *count -= 1;
                overlap += 1;
            }
        }
    }
    overlap
}

/// ROUGE-N between already tokenized sequences.
pub fn rouge_n_tokens(candidate: &[String], reference: &[String], n: usize) -> RougeScore {
    assert!(n >= 1, "rouge_n: n must be >= 1");
    let cand_total = candidate.len().saturating_sub(n - 1);
    let ref_total = reference.len().saturating_sub(n - 1);
    if cand_total == 0 || ref_total == 0 {
        return RougeScore::ZERO;
    }
    let overlap = clipped_ngram_overlap(candidate, reference, n);
    RougeScore::from_counts(overlap, ref_total, cand_total)
}

/// ROUGE-N on raw text.
pub fn rouge_n(candidate: &str, reference: &str, n: usize) -> RougeScore {
    rouge_n_tokens(&tokenize(candidate), &tokenize(reference), n)
}

/// Length of the longest common subsequence of two token sequences.
pub fn lcs_length(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// ROUGE-L between already tokenized sequences.
pub fn rouge_l_tokens(candidate: &[String], reference: &[String]) -> RougeScore {
    if candidate.is_empty() || reference.is_empty() {
        return RougeScore::ZERO;
    }
    let lcs = lcs_length(candidate, reference);
    RougeScore::from_counts(lcs, reference.len(), candidate.len())
}

/// ROUGE-L on raw text.
pub fn rouge_l(candidate: &str, reference: &str) -> RougeScore {
    rouge_l_tokens(&tokenize(candidate), &tokenize(reference))
}

/// Percent change of `new_score` over `old_score`; `old_score` must be
/// positive.
pub fn relative_improvement(new_score: f64, old_score: f64) -> Result<f64> {
    if !old_score.is_finite() || old_score <= 0.0 {
        return Err(Error::config(format!(
            "relative_improvement needs old_score > 0, got {old_score}"
        )));
    }
    if !new_score.is_finite() {
        return Err(Error::NonFinite {
            name: "new_score",
            value: new_score,
        });
    }
    Ok(100.0 * (new_score - old_score) / old_score)
}

/// Greedy extractive upper bound: repeatedly adds the sentence that most
/// improves ROUGE-L F1 of the concatenated selection against the
/// reference (ties to the lowest index), stopping when nothing improves
/// or `max_sentences` is reached. The selection is concatenated in
/// document order, as extracts are; the returned indices are in selection
/// order, with the achieved score.
pub fn oracle_extract(
    document_sentences: &[String],
    reference: &str,
    max_sentences: usize,
) -> Result<(Vec<usize>, RougeScore)> {
    if document_sentences.is_empty() {
        return Err(Error::config("oracle_extract: document is empty"));
    }
    if max_sentences == 0 {
        return Err(Error::config("oracle_extract: max_sentences must be >= 1"));
    }
    let reference_tokens = tokenize(reference);
    let sentence_tokens: Vec<Vec<String>> =
        document_sentences.iter().map(|s| tokenize(s)).collect();

    let concat_in_document_order = |chosen: &[bool], extra: usize| -> Vec<String> {
        let mut tokens = Vec::new();
        for (j, list) in sentence_tokens.iter().enumerate() {
            if chosen[j] || j == extra {
                tokens.extend_from_slice(list);
            }
        }
        tokens
    };

    let mut selected: Vec<usize> = Vec::new();
    let mut chosen = vec![false; sentence_tokens.len()];
    let mut best_score = RougeScore::ZERO;

    while selected.len() < max_sentences {
        let mut best_candidate: Option<(usize, RougeScore)> = None;
        for i in 0..sentence_tokens.len() {
            if chosen[i] {
                continue;
            }
            let trial = concat_in_document_order(&chosen, i);
            let score = rouge_l_tokens(&trial, &reference_tokens);
            let improves = match &best_candidate {
                None => score.f1 > best_score.f1,
                Some((_, incumbent)) => score.f1 > incumbent.f1,
            };
            if improves {
                best_candidate = Some((i, score));
            }
        }
        match best_candidate {
            Some((i, score)) => {
                selected.push(i);
                chosen[i] = true;
                best_score = score;
            }
            None => break,
        }
    }
    Ok((selected, best_score))
}
