use std::collections::{BTreeMap, BTreeSet};

use super::model::{ChangeKind, ChangeRecord, StatementVersion};
use crate::value::Value;

/// Per-position change records between each pair of consecutive versions.
pub fn edit_history(versions: &[StatementVersion]) -> Vec<ChangeRecord> {
    let mut sorted: Vec<&StatementVersion> = versions.iter().collect();
    sorted.sort_by_key(|v| v.version_number);
    sorted.windows(2).flat_map(|pair| diff_versions(pair[0], pair[1])).collect()
}

pub fn diff_versions(before: &StatementVersion, after: &StatementVersion) -> Vec<ChangeRecord> {
    let old = before.value_map();
    let new = after.value_map();
    let labels: BTreeSet<&String> = old.keys().chain(new.keys()).collect();
    let empty = Vec::new();
    labels
        .into_iter()
        .filter_map(|label| {
            let b = old.get(label).unwrap_or(&empty);
            let a = new.get(label).unwrap_or(&empty);
            let kind = classify(b, a)?;
            Some(ChangeRecord {
                thematic_label: label.clone(),
                kind,
                before: b.clone(),
                after: a.clone(),
                editor: after.created_by.clone(),
                timestamp: after.created_at,
                from_version: before.version_number,
                to_version: after.version_number,
            })
        })
        .collect()
}

fn classify(before: &[Value], after: &[Value]) -> Option<ChangeKind> {
    if before == after {
        return None;
    }
    Some(match (before.is_empty(), after.is_empty()) {
        (true, _) => ChangeKind::Added,
        (_, true) => ChangeKind::Removed,
        _ if same_multiset(before, after) => ChangeKind::Reordered,
        _ => ChangeKind::Modified,
    })
}

fn same_multiset(a: &[Value], b: &[Value]) -> bool {
    let mut a: Vec<&Value> = a.iter().collect();
    let mut b: Vec<&Value> = b.iter().collect();
    a.sort();
    b.sort();
    a == b
}

/// Applies change records to a position-value map.
pub fn replay(start: &BTreeMap<String, Vec<Value>>, records: &[ChangeRecord]) -> BTreeMap<String, Vec<Value>> {
    let mut state = start.clone();
    for r in records {
        if r.after.is_empty() {
            state.remove(&r.thematic_label);
        } else {
            state.insert(r.thematic_label.clone(), r.after.clone());
        }
    }
    state
}
