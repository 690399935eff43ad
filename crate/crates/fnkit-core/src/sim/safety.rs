//! Safety reactions: boolean OR over the Set status of the listed errors.

use std::collections::BTreeMap;

use crate::function_model::SafetyReaction;

use super::errors::ErrorStatus;

/// A reaction is active while at least one of its listed errors is Set.
/// Errors missing from the status map count as not Set; model validation
/// guarantees the lists resolve.
pub fn evaluate_safety(
    reactions: &[SafetyReaction],
    statuses: &BTreeMap<String, ErrorStatus>,
) -> BTreeMap<String, bool> {
    reactions
        .iter()
        .map(|reaction| {
            let active = reaction
                .error_list
                .iter()
                .any(|name| statuses.get(name).copied() == Some(ErrorStatus::Set));
            (reaction.name.clone(), active)
        })
        .collect()
}
