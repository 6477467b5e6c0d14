use serde::Serialize;

/// What happened at one decoding stage. Serialises to the trace JSON-lines
/// record; the remaining fields feed the simulator's diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    /// 1-based bit index.
    pub i: usize,
    pub splits: u32,
    pub paths_before_prune: u32,
    pub paths_after_prune: u32,
    pub counter_prune_fired: bool,
    /// `None` when the transmitted word was not supplied.
    pub correct_path_alive: Option<bool>,
    #[serde(skip)]
    pub frozen: bool,
    /// The path count exceeded the list size and pruning ran.
    #[serde(skip)]
    pub pruned: bool,
    #[serde(skip)]
    pub correct_path_split: bool,
    /// Counter of the correct path after this stage, if it is alive.
    #[serde(skip)]
    pub correct_path_counter: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeTrace {
    pub stages: Vec<StageRecord>,
    /// The correct path was removed by a pruning step. `None` without truth.
    pub correct_path_pruned: Option<bool>,
    /// Counter values of incorrect paths at the moment they split, i.e. how
    /// many stages each survived since its own creation.
    pub incorrect_split_gaps: Vec<u32>,
    /// Incorrect paths still alive when list decoding ended without having
    /// split again.
    pub incorrect_censored: u32,
}

impl DecodeTrace {
    /// One JSON object per stage, newline separated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            out.push_str(&serde_json::to_string(s).expect("stage record serialises"));
            out.push('\n');
        }
        out
    }
}
