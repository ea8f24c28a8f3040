use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::content::Val;

/// `Mem × In × Out`. A memory entry of `None` is the distinguished
/// `unbound` element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineState {
    pub mem: BTreeMap<String, Option<Val>>,
    pub input: VecDeque<Val>,
    pub output: Vec<Val>,
}

impl MachineState {
    pub fn new(input: impl IntoIterator<Item = Val>) -> MachineState {
        MachineState {
            mem: BTreeMap::new(),
            input: input.into_iter().collect(),
            output: Vec::new(),
        }
    }

    /// Bound value of `name`, if any.
    pub fn lookup(&self, name: &str) -> Option<&Val> {
        self.mem.get(name).and_then(Option::as_ref)
    }
}

fn write_list<'a>(f: &mut fmt::Formatter<'_>, vals: impl Iterator<Item = &'a Val>) -> fmt::Result {
    f.write_str("[")?;
    for (i, v) in vals.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("]")
}

/// `mem={k=v,…} in=[…] out=[…]` with keys in lexicographic order.
impl fmt::Display for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("mem={")?;
        for (i, (k, v)) in self.mem.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match v {
                Some(v) => write!(f, "{k}={v}")?,
                None => write!(f, "{k}=unbound")?,
            }
        }
        f.write_str("} in=")?;
        write_list(f, self.input.iter())?;
        f.write_str(" out=")?;
        write_list(f, self.output.iter())
    }
}
