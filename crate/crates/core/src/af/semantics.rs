use std::collections::BTreeSet;

use super::{ArgumentationFramework, Label, Labelling, Mode, Semantics};
use crate::error::{Error, Result};

/// Largest framework [`enumerate_labellings`] will search exhaustively.
pub const DEFAULT_ENUMERATION_CAP: usize = 25;

/// The unique minimal complete labelling, by fixpoint iteration.
pub fn grounded_labelling(af: &ArgumentationFramework) -> Labelling {
    af.labelling_from(&grounded_vec(af))
}

fn grounded_vec(af: &ArgumentationFramework) -> Vec<Label> {
    let n = af.len();
    let mut lab: Vec<Option<Label>> = vec![None; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if lab[i].is_some() {
                continue;
            }
            let attackers = af.attacker_indices(i);
            if attackers.iter().all(|&a| lab[a] == Some(Label::Out)) {
                lab[i] = Some(Label::In);
                changed = true;
            } else if attackers.iter().any(|&a| lab[a] == Some(Label::In)) {
                lab[i] = Some(Label::Out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    lab.into_iter().map(|l| l.unwrap_or(Label::Undec)).collect()
}

pub fn enumerate_labellings(af: &ArgumentationFramework, semantics: Semantics) -> Result<Vec<Labelling>> {
    enumerate_labellings_with_cap(af, semantics, DEFAULT_ENUMERATION_CAP)
}

/// All labellings of `semantics`, sorted by IN set. Grounded is answered
/// directly; the others search complete labellings exhaustively, which is
/// refused above `cap` arguments.
pub fn enumerate_labellings_with_cap(
    af: &ArgumentationFramework,
    semantics: Semantics,
    cap: usize,
) -> Result<Vec<Labelling>> {
    if semantics == Semantics::Grounded {
        return Ok(vec![grounded_labelling(af)]);
    }
    if af.len() > cap {
        return Err(Error::SizeCapExceeded { size: af.len(), cap });
    }
    let complete = complete_labellings(af);
    let selected: Vec<Vec<Label>> = match semantics {
        Semantics::Complete | Semantics::Grounded => complete,
        Semantics::Stable => complete
            .into_iter()
            .filter(|l| !l.contains(&Label::Undec))
            .collect(),
        Semantics::Preferred => {
            let in_sets: Vec<BTreeSet<usize>> = complete.iter().map(|l| in_indices(l)).collect();
            complete
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    !in_sets
                        .iter()
                        .enumerate()
                        .any(|(j, other)| j != *i && in_sets[*i].is_subset(other) && in_sets[*i] != *other)
                })
                .map(|(_, l)| l.clone())
                .collect()
        }
    };
    let mut out: Vec<Labelling> = selected.iter().map(|l| af.labelling_from(l)).collect();
    out.sort_by_key(|l| l.in_set().into_iter().collect::<Vec<_>>());
    Ok(out)
}

fn in_indices(l: &[Label]) -> BTreeSet<usize> {
    l.iter()
        .enumerate()
        .filter(|(_, &x)| x == Label::In)
        .map(|(i, _)| i)
        .collect()
}

/// Every complete labelling extends the grounded one, so only arguments
/// the grounded labelling leaves UNDEC are branched on.
fn complete_labellings(af: &ArgumentationFramework) -> Vec<Vec<Label>> {
    let grounded = grounded_vec(af);
    let open: Vec<usize> = (0..af.len()).filter(|&i| grounded[i] == Label::Undec).collect();
    let mut lab: Vec<Option<Label>> = grounded
        .iter()
        .map(|&l| if l == Label::Undec { None } else { Some(l) })
        .collect();
    let mut out = Vec::new();
    search(af, &open, 0, &mut lab, &mut out);
    out
}

fn search(
    af: &ArgumentationFramework,
    open: &[usize],
    depth: usize,
    lab: &mut Vec<Option<Label>>,
    out: &mut Vec<Vec<Label>>,
) {
    if depth == open.len() {
        out.push(lab.iter().map(|l| l.expect("all assigned")).collect());
        return;
    }
    let x = open[depth];
    for label in [Label::In, Label::Out, Label::Undec] {
        lab[x] = Some(label);
        if consistent(af, lab, x) && af.target_indices(x).iter().all(|&y| consistent(af, lab, y)) {
            search(af, open, depth + 1, lab, out);
        }
    }
    lab[x] = None;
}

/// Whether `y`'s label can still be legal given the partial assignment.
fn consistent(af: &ArgumentationFramework, lab: &[Option<Label>], y: usize) -> bool {
    let Some(label) = lab[y] else { return true };
    let (mut any_in, mut any_undec, mut all_assigned) = (false, false, true);
    for &a in af.attacker_indices(y) {
        match lab[a] {
            Some(Label::In) => any_in = true,
            Some(Label::Undec) => any_undec = true,
            Some(Label::Out) => {}
            None => all_assigned = false,
        }
    }
    match label {
        Label::In => !any_in && !any_undec,
        Label::Out => any_in || !all_assigned,
        Label::Undec => !any_in && (any_undec || !all_assigned),
    }
}

/// Credulous: IN in some labelling of the semantics. Skeptical: IN in all of
/// them; with no labellings at all (stable on an odd cycle) skeptical
/// acceptance is false.
pub fn acceptance(af: &ArgumentationFramework, arg: &str, semantics: Semantics, mode: Mode) -> Result<bool> {
    if !af.contains(arg) {
        return Err(Error::UnknownArgument(arg.to_string()));
    }
    let labellings = enumerate_labellings(af, semantics)?;
    let is_in = |l: &Labelling| l.get(arg) == Some(Label::In);
    Ok(match mode {
        Mode::Credulous => labellings.iter().any(is_in),
        Mode::Skeptical => !labellings.is_empty() && labellings.iter().all(is_in),
    })
}
