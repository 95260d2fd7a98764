use std::collections::HashSet;

use crate::codec::{DataSet, Tag, TagPath};
use crate::dictionary::SafePrivateKb;

/// Removes private elements that are not known to be safe and returns the
/// paths of everything removed. Kept elements are left untouched, bytes and
/// VR included. With `enabled` false every private element goes. A private
/// creator survives only while some element of its block survives.
pub fn strip_unsafe_private(ds: &mut DataSet, kb: &SafePrivateKb, enabled: bool) -> Vec<TagPath> {
    let mut removed = Vec::new();
    strip_level(ds, kb, enabled, None, &mut removed);
    removed
}

fn strip_level(ds: &mut DataSet, kb: &SafePrivateKb, enabled: bool, parent: Option<(&TagPath, usize)>, removed: &mut Vec<TagPath>) {
    let path_of = |tag: Tag| match parent {
        None => TagPath::root(tag),
        Some((p, i)) => p.child(i, tag),
    };
    let mut kept_blocks: HashSet<Tag> = HashSet::new();
    let mut doomed = Vec::new();
    for tag in ds.tags() {
        if !tag.is_private() || tag.is_private_creator() || tag.is_group_length() {
            continue;
        }
        let safe = enabled
            && tag.private_creator_tag().is_some_and(|ct| {
                ds.string(ct).is_some_and(|creator| kb.is_safe(&creator, tag))
            });
        if safe {
            kept_blocks.extend(tag.private_creator_tag());
        } else {
            doomed.push(tag);
        }
    }
    for tag in ds.tags() {
        if tag.is_private() && tag.is_private_creator() && !kept_blocks.contains(&tag) {
            doomed.push(tag);
        }
        if tag.is_private() && tag.is_group_length() {
            doomed.push(tag);
        }
    }
    doomed.sort();
    for tag in doomed {
        ds.remove(tag);
        removed.push(path_of(tag));
    }
    for tag in ds.tags() {
        if tag.is_private() {
            continue;
        }
        let path = path_of(tag);
        if let Some(items) = ds.get_mut(tag).and_then(|e| e.items_mut()) {
            for (i, item) in items.iter_mut().enumerate() {
                strip_level(&mut item.dataset, kb, enabled, Some((&path, i)), removed);
            }
        }
    }
}
