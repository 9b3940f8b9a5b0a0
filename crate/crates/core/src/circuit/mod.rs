//! Gate lists with block tags and named registers.

mod registers;
mod text;

pub use registers::{Register, RegisterMap};

use crate::error::{Error, Result};
use crate::gate::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MarkerKind {
    Begin,
    End,
}

/// A block boundary placed before gate index `pos`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marker {
    pub pos: usize,
    pub kind: MarkerKind,
    pub tag: String,
}

/// A tagged gate range `start..end`, `depth` levels below the outermost blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub tag: String,
    pub start: usize,
    pub end: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    markers: Vec<Marker>,
    open: Vec<String>,
    registers: RegisterMap,
}

impl Circuit {
    pub fn new(width: usize) -> Circuit {
        Circuit {
            width,
            ..Default::default()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn registers(&self) -> &RegisterMap {
        &self.registers
    }

    pub fn registers_mut(&mut self) -> &mut RegisterMap {
        &mut self.registers
    }

    /// Qubits of the named register. Panics if it does not exist.
    pub fn reg(&self, name: &str) -> &[usize] {
        self.registers
            .get(name)
            .unwrap_or_else(|| panic!("no register named `{name}`"))
    }

    pub fn add_register(&mut self, name: &str, qubits: Vec<usize>, role: &str) -> Result<()> {
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.width) {
            return Err(Error::InvalidParameter(format!(
                "register `{name}` qubit {q} outside width {}",
                self.width
            )));
        }
        self.registers.insert(Register {
            name: name.to_string(),
            qubits,
            role: role.to_string(),
        })
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.width {
                return Err(Error::InvalidParameter(format!(
                    "gate `{gate}` touches qubit {q} outside width {}",
                    self.width
                )));
            }
            if qs[..i].contains(&q) {
                return Err(Error::RegisterOverlap(q));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate. Panics on out-of-range or repeated operands; builders
    /// only construct valid gates.
    pub fn push(&mut self, gate: Gate) {
        if let Err(e) = self.try_push(gate) {
            panic!("{e}");
        }
    }

    pub fn begin_block(&mut self, tag: &str) {
        self.markers.push(Marker {
            pos: self.gates.len(),
            kind: MarkerKind::Begin,
            tag: tag.to_string(),
        });
        self.open.push(tag.to_string());
    }

    pub fn end_block(&mut self) {
        let tag = self.open.pop().expect("end_block without open block");
        self.markers.push(Marker {
            pos: self.gates.len(),
            kind: MarkerKind::End,
            tag,
        });
    }

    /// Runs `f` inside a block tagged `tag`.
    pub fn block<T>(&mut self, tag: &str, f: impl FnOnce(&mut Circuit) -> T) -> T {
        self.begin_block(tag);
        let out = f(self);
        self.end_block();
        out
    }

    /// Appends `other` with its qubit `i` placed on `map[i]`; block markers are kept.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) {
        assert_eq!(
            map.len(),
            other.width,
            "qubit map length must equal appended width"
        );
        let offset = self.gates.len();
        let mut markers = other.markers.iter().peekable();
        for (i, g) in other.gates.iter().enumerate() {
            while let Some(m) = markers.next_if(|m| m.pos == i) {
                self.push_marker(m, offset);
            }
            self.push(g.remap(|q| map[q]));
        }
        for m in markers {
            self.push_marker(m, offset);
        }
    }

    /// Appends a circuit defined on the same qubits.
    pub fn append(&mut self, other: &Circuit) {
        let map: Vec<usize> = (0..other.width).collect();
        self.append_mapped(other, &map);
    }

    fn push_marker(&mut self, m: &Marker, offset: usize) {
        self.markers.push(Marker {
            pos: m.pos + offset,
            kind: m.kind,
            tag: m.tag.clone(),
        });
    }

    /// Reverse circuit with negated angles. Block tags gain (or lose) an `_inv` suffix.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            gates.push(
                g.inverse()
                    .ok_or_else(|| Error::InversionUnsupported(g.to_string()))?,
            );
        }
        let len = self.gates.len();
        let markers = self
            .markers
            .iter()
            .rev()
            .map(|m| Marker {
                pos: len - m.pos,
                kind: match m.kind {
                    MarkerKind::Begin => MarkerKind::End,
                    MarkerKind::End => MarkerKind::Begin,
                },
                tag: match m.tag.strip_suffix("_inv") {
                    Some(t) => t.to_string(),
                    None => format!("{}_inv", m.tag),
                },
            })
            .collect();
        Ok(Circuit {
            width: self.width,
            gates,
            markers,
            open: Vec::new(),
            registers: self.registers.clone(),
        })
    }

    /// Blocks in opening order.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for m in &self.markers {
            match m.kind {
                MarkerKind::Begin => {
                    out.push(Block {
                        tag: m.tag.clone(),
                        start: m.pos,
                        end: m.pos,
                        depth: stack.len(),
                    });
                    stack.push(out.len() - 1);
                }
                MarkerKind::End => {
                    if let Some(i) = stack.pop() {
                        out[i].end = m.pos;
                    }
                }
            }
        }
        out
    }

    /// Innermost enclosing block tag for every gate (`None` outside all blocks).
    pub fn innermost_tags(&self) -> Vec<Option<String>> {
        let mut out = Vec::with_capacity(self.gates.len());
        let mut stack: Vec<&str> = Vec::new();
        let mut markers = self.markers.iter().peekable();
        for i in 0..self.gates.len() {
            while let Some(m) = markers.next_if(|m| m.pos == i) {
                match m.kind {
                    MarkerKind::Begin => stack.push(&m.tag),
                    MarkerKind::End => {
                        stack.pop();
                    }
                }
            }
            out.push(stack.last().map(|s| s.to_string()));
        }
        out
    }

    /// Checks operand ranges and block nesting.
    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            let qs = g.qubits();
            for (i, &q) in qs.iter().enumerate() {
                if q >= self.width || qs[..i].contains(&q) {
                    return Err(Error::InvalidParameter(format!(
                        "invalid operands in `{g}`"
                    )));
                }
            }
        }
        let mut stack: Vec<&str> = Vec::new();
        let mut last = 0;
        for m in &self.markers {
            if m.pos < last || m.pos > self.gates.len() {
                return Err(Error::InvalidParameter(format!(
                    "block marker `{}` out of order",
                    m.tag
                )));
            }
            last = m.pos;
            match m.kind {
                MarkerKind::Begin => stack.push(&m.tag),
                MarkerKind::End => {
                    if stack.pop() != Some(m.tag.as_str()) {
                        return Err(Error::InvalidParameter(format!(
                            "unbalanced block `{}`",
                            m.tag
                        )));
                    }
                }
            }
        }
        if let Some(t) = stack.pop() {
            return Err(Error::InvalidParameter(format!("block `{t}` never closed")));
        }
        Ok(())
    }

    pub fn is_unitary(&self) -> bool {
        self.gates.iter().all(Gate::is_unitary)
    }

    /// Copy with every block tag prefixed by `prefix`.
    pub fn with_tag_prefix(&self, prefix: &str) -> Circuit {
        let mut out = self.clone();
        for m in &mut out.markers {
            m.tag = format!("{prefix}{}", m.tag);
        }
        out
    }

    /// Copy keeping only the gates accepted by `keep`; markers follow their gates.
    pub fn filtered(&self, keep: impl Fn(&Gate) -> bool) -> Circuit {
        let mut kept_before = Vec::with_capacity(self.gates.len() + 1);
        let mut gates = Vec::new();
        for g in &self.gates {
            kept_before.push(gates.len());
            if keep(g) {
                gates.push(*g);
            }
        }
        kept_before.push(gates.len());
        let markers = self
            .markers
            .iter()
            .map(|m| Marker {
                pos: kept_before[m.pos],
                kind: m.kind,
                tag: m.tag.clone(),
            })
            .collect();
        Circuit {
            width: self.width,
            gates,
            markers,
            open: Vec::new(),
            registers: self.registers.clone(),
        }
    }
}

/// Concatenation of a circuit and its inverse.
pub fn with_inverse(c: &Circuit) -> Result<Circuit> {
    let mut out = c.clone();
    out.append(&c.inverse()?);
    Ok(out)
}
