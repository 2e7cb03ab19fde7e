use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::boolfn::{PartialFn, Word};

/// Position-query access to a hidden string. Positions are 0-based here;
/// transcripts use 1-based positions.
pub trait Oracle {
    fn len(&self) -> usize;
    fn query(&mut self, pos: usize) -> Result<usize, SimError>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Answers queries against a fixed word, counting every query and logging
/// `(position, answer)` pairs. Repeated queries are charged again.
#[derive(Clone, Debug)]
pub struct QueryOracle {
    word: Word,
    log: Vec<(usize, usize)>,
}

impl QueryOracle {
    pub fn new(word: Word) -> Self {
        QueryOracle { word, log: Vec::new() }
    }

    pub fn count(&self) -> usize {
        self.log.len()
    }

    pub fn log(&self) -> &[(usize, usize)] {
        &self.log
    }

    pub fn positions(&self) -> Vec<usize> {
        self.log.iter().map(|&(p, _)| p).collect()
    }

    pub fn distinct_positions(&self) -> BTreeSet<usize> {
        self.log.iter().map(|&(p, _)| p).collect()
    }

    pub fn transcript(&self, output: Option<bool>) -> Transcript {
        let mut events: Vec<TranscriptEvent> = self
            .log
            .iter()
            .map(|&(p, a)| TranscriptEvent::Query { pos: p + 1, ans: a })
            .collect();
        if let Some(v) = output {
            events.push(TranscriptEvent::Output {
                value: u8::from(v),
                queries: self.count(),
            });
        }
        Transcript { events }
    }
}

impl Oracle for QueryOracle {
    fn len(&self) -> usize {
        self.word.len()
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        let ans = *self.word.get(pos).ok_or(SimError::PositionOutOfRange {
            pos: pos + 1,
            len: self.word.len(),
        })?;
        self.log.push((pos, ans));
        Ok(ans)
    }
}

/// Caching wrapper: each position reaches the inner oracle at most once.
pub struct MemoOracle<'a> {
    inner: &'a mut dyn Oracle,
    cache: HashMap<usize, usize>,
}

impl<'a> MemoOracle<'a> {
    pub fn new(inner: &'a mut dyn Oracle) -> Self {
        MemoOracle {
            inner,
            cache: HashMap::new(),
        }
    }

    pub fn distinct_queries(&self) -> usize {
        self.cache.len()
    }
}

impl Oracle for MemoOracle<'_> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        if let Some(&a) = self.cache.get(&pos) {
            return Ok(a);
        }
        let a = self.inner.query(pos)?;
        self.cache.insert(pos, a);
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum TranscriptEvent {
    Query { pos: usize, ans: usize },
    Output { value: u8, queries: usize },
}

/// JSON-lines query transcript.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub events: Vec<TranscriptEvent>,
}

impl Transcript {
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            s.push_str(&serde_json::to_string(e).expect("serializable"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str) -> Result<Self, SimError> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| SimError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Transcript { events })
    }

    pub fn queries(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TranscriptEvent::Query { pos, ans } => Some((*pos, *ans)),
                _ => None,
            })
            .collect()
    }

    pub fn output(&self) -> Option<bool> {
        self.events.iter().find_map(|e| match e {
            TranscriptEvent::Output { value, .. } => Some(*value == 1),
            _ => None,
        })
    }
}

/// Serves answers from a recorded transcript and fails as soon as the
/// algorithm deviates from the recorded query sequence.
pub struct ReplayOracle {
    len: usize,
    queries: Vec<(usize, usize)>,
    next: usize,
}

impl ReplayOracle {
    pub fn new(len: usize, transcript: &Transcript) -> Self {
        ReplayOracle {
            len,
            queries: transcript.queries(),
            next: 0,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.next == self.queries.len()
    }
}

impl Oracle for ReplayOracle {
    fn len(&self) -> usize {
        self.len
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        match self.queries.get(self.next) {
            Some(&(p, a)) if p == pos + 1 => {
                self.next += 1;
                Ok(a)
            }
            Some(&(p, _)) => Err(SimError::ReplayMismatch(format!(
                "query {} asked position {} but the transcript has {p}",
                self.next + 1,
                pos + 1
            ))),
            None => Err(SimError::ReplayMismatch(format!(
                "transcript exhausted at query {}",
                self.next + 1
            ))),
        }
    }
}

/// A query algorithm deciding a bit from oracle access.
pub trait QueryAlgorithm {
    fn input_len(&self) -> usize;
    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError>;
}

/// Reads the whole input and evaluates `f`; off-promise inputs raise
/// `PromiseViolated`.
#[derive(Clone, Debug)]
pub struct FunctionEvaluator {
    pub f: PartialFn,
}

impl QueryAlgorithm for FunctionEvaluator {
    fn input_len(&self) -> usize {
        self.f.n()
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        let x = read_all(oracle)?;
        self.f
            .eval(&x)
            .ok_or_else(|| SimError::PromiseViolated(crate::boolfn::format_word(&x)))
    }
}

pub fn read_all(oracle: &mut dyn Oracle) -> Result<Word, SimError> {
    (0..oracle.len()).map(|i| oracle.query(i)).collect()
}

/// Queries a fixed list of positions and accepts iff the sum of answers is
/// odd.
#[derive(Clone, Debug)]
pub struct ScriptedDistinguisher {
    pub len: usize,
    pub positions: Vec<usize>,
}

impl QueryAlgorithm for ScriptedDistinguisher {
    fn input_len(&self) -> usize {
        self.len
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        let mut sum = 0usize;
        for &p in &self.positions {
            sum += oracle.query(p)?;
        }
        Ok(sum % 2 == 1)
    }
}

/// Reads the whole input and accepts iff it is one of `members`.
#[derive(Clone, Debug)]
pub struct MembershipTester {
    pub len: usize,
    pub members: BTreeSet<Word>,
}

impl MembershipTester {
    pub fn for_group(g: &crate::perm::GroupAction, cap: usize) -> Result<Self, SimError> {
        let members = g
            .closure_elements(cap)?
            .into_iter()
            .map(|p| p.images().to_vec())
            .collect();
        Ok(MembershipTester {
            len: g.degree(),
            members,
        })
    }
}

impl QueryAlgorithm for MembershipTester {
    fn input_len(&self) -> usize {
        self.len
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        Ok(self.members.contains(&read_all(oracle)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_charges_repeats() {
        let mut o = QueryOracle::new(vec![3, 1, 2]);
        o.query(0).unwrap();
        o.query(0).unwrap();
        assert_eq!(o.count(), 2);
        assert_eq!(o.distinct_positions().len(), 1);
        assert!(o.query(3).is_err());
        assert_eq!(o.count(), o.log().len());
    }

    #[test]
    fn memo_wrapper_hits_inner_once() {
        let mut o = QueryOracle::new(vec![3, 1, 2]);
        {
            let mut m = MemoOracle::new(&mut o);
            for _ in 0..5 {
                assert_eq!(m.query(1).unwrap(), 1);
            }
            assert_eq!(m.distinct_queries(), 1);
        }
        assert_eq!(o.count(), 1);
    }

    #[test]
    fn transcript_round_trip_and_replay() {
        let alg = ScriptedDistinguisher {
            len: 4,
            positions: vec![2, 0, 2, 3],
        };
        let mut o = QueryOracle::new(vec![1, 0, 1, 1]);
        let out = alg.run(&mut o).unwrap();
        let t = o.transcript(Some(out));
        let text = t.to_jsonl();
        assert!(text.starts_with(r#"{"op":"query","pos":3,"ans":1}"#));
        let back = Transcript::from_jsonl(&text).unwrap();
        assert_eq!(back, t);
        let mut replay = ReplayOracle::new(4, &back);
        assert_eq!(alg.run(&mut replay).unwrap(), back.output().unwrap());
        assert!(replay.exhausted());

        let other = ScriptedDistinguisher {
            len: 4,
            positions: vec![1],
        };
        let mut replay = ReplayOracle::new(4, &back);
        assert!(matches!(other.run(&mut replay), Err(SimError::ReplayMismatch(_))));
    }
}
