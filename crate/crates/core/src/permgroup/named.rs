use alloc::string::ToString;
use alloc::vec::Vec;

use super::PermGroup;
use crate::{Error, Perm, Result};

fn cycle_on(n: usize, points: &[usize]) -> Perm {
    Perm::from_cycles(n, &[points]).expect("valid cycle")
}

pub(super) fn symmetric(n: usize) -> PermGroup {
    let n = n.max(1);
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(cycle_on(n, &[0, 1]));
    }
    if n >= 3 {
        gens.push(cycle_on(n, &(0..n).collect::<Vec<_>>()));
    }
    PermGroup::new(n, gens).unwrap()
}

pub(super) fn alternating(n: usize) -> PermGroup {
    let n = n.max(1);
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(cycle_on(n, &[0, 1, 2]));
    }
    if n >= 4 {
        let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
        gens.push(cycle_on(n, &long));
    }
    PermGroup::new(n, gens).unwrap()
}

pub(super) fn cyclic(n: usize) -> PermGroup {
    let n = n.max(1);
    let gens = if n >= 2 { alloc::vec![cycle_on(n, &(0..n).collect::<Vec<_>>())] } else { Vec::new() };
    PermGroup::new(n, gens).unwrap()
}

pub(super) fn from_name(name: &str) -> Result<PermGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    let trimmed = name.trim();
    let open = trimmed.find('(').ok_or_else(unknown)?;
    if !trimmed.ends_with(')') {
        return Err(unknown());
    }
    let family = &trimmed[..open];
    let n: usize = trimmed[open + 1..trimmed.len() - 1].trim().parse().map_err(|_| unknown())?;
    if n == 0 {
        return Err(unknown());
    }
    match family {
        "Sym" | "S" => Ok(symmetric(n)),
        "Alt" | "A" => Ok(alternating(n)),
        "Cyclic" | "C" => Ok(cyclic(n)),
        _ => Err(unknown()),
    }
}
