//! Worker-count-invariant parallel search drivers.
//!
//! Exhaustive and sampling runs split their index ranges into contiguous
//! chunks evaluated on scoped threads; the merge is a deterministic
//! reduction, so any worker count reproduces the single-threaded result
//! byte for byte. The genetic search stays sequential across generations
//! and parallelizes only the pure fitness evaluations within one
//! generation.

use std::thread;

use sboxkit::boolfn::SBoxTable;
use sboxkit::search::{
    self, AcceptedBox, CandidateVerdict, MaskCandidate, Pipeline, PipelineTally, SearchConfig,
    SearchMode, SearchResult,
};

use crate::error::CliResult;

fn chunk_bounds(total: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let per = total.div_ceil(workers);
    (0..workers)
        .map(|w| (w * per, ((w + 1) * per).min(total)))
        .filter(|(s, e)| s < e)
        .collect()
}

fn run_chunked(
    pipeline: &Pipeline,
    total: u64,
    workers: usize,
    eval: impl Fn(&Pipeline, u64, u64) -> (PipelineTally, Vec<AcceptedBox>) + Sync,
) -> SearchResult {
    let bounds = chunk_bounds(total, workers);
    let chunks: Vec<(PipelineTally, Vec<AcceptedBox>)> = if workers <= 1 || bounds.len() <= 1 {
        bounds.iter().map(|&(s, e)| eval(pipeline, s, e)).collect()
    } else {
        let eval = &eval;
        thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|&(s, e)| scope.spawn(move || eval(pipeline, s, e)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        })
    };
    search::merge_chunks(pipeline, chunks)
}

/// Runs the configured search mode with the given worker count.
pub fn run_search(
    initial: &SBoxTable,
    config: &SearchConfig,
    workers: usize,
) -> CliResult<SearchResult> {
    match config.mode {
        SearchMode::Exhaustive => {
            let n = initial.input_bits();
            if n > search::MAX_EXHAUSTIVE_VARS {
                // Surface the same error the serial driver reports.
                return Ok(search::enumerate_all(initial, config)?);
            }
            let pipeline = Pipeline::new(initial, config.clone())?;
            let total = search::binomial(1u64 << n, n as u64);
            Ok(run_chunked(&pipeline, total, workers, search::enumerate_range))
        }
        SearchMode::RandomSample => {
            let pipeline = Pipeline::new(initial, config.clone())?;
            Ok(run_chunked(&pipeline, config.max_candidates, workers, search::sample_range))
        }
        SearchMode::Genetic => {
            let result = search::genetic_search_with(initial, config, |pipeline, cands| {
                batch_eval(pipeline, cands, workers)
            })?;
            Ok(result)
        }
    }
}

/// Parallel batch evaluation preserving input order.
fn batch_eval(
    pipeline: &Pipeline,
    candidates: &[MaskCandidate],
    workers: usize,
) -> Vec<CandidateVerdict> {
    if workers <= 1 || candidates.len() < 2 {
        return candidates.iter().map(|c| pipeline.evaluate(c)).collect();
    }
    let chunk = candidates.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|c| pipeline.evaluate(c)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("evaluation worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t7() -> SBoxTable {
        SBoxTable::square(vec![8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3]).unwrap()
    }

    #[test]
    fn workers_do_not_change_exhaustive_results() {
        let config = SearchConfig::default();
        let one = run_search(&t7(), &config, 1).unwrap();
        let four = run_search(&t7(), &config, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.tally.all_better, 70);
    }

    #[test]
    fn workers_do_not_change_genetic_results() {
        let config = SearchConfig {
            mode: SearchMode::Genetic,
            seed: 5,
            generations: 12,
            ..Default::default()
        };
        let one = run_search(&t7(), &config, 1).unwrap();
        let four = run_search(&t7(), &config, 4).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn workers_do_not_change_sampled_results() {
        let config = SearchConfig {
            mode: SearchMode::RandomSample,
            seed: 9,
            max_candidates: 700,
            ..Default::default()
        };
        let one = run_search(&t7(), &config, 1).unwrap();
        let three = run_search(&t7(), &config, 3).unwrap();
        assert_eq!(one, three);
    }
}
