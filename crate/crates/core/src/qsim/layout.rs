use std::fmt;

use super::StateError;
use crate::bitlinalg::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub width: usize,
}

/// Named registers in attach order. A basis key is the concatenation of the
/// register values in this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new(registers: &[(&str, usize)]) -> Result<Self, StateError> {
        let mut layout = RegisterLayout::default();
        for &(name, width) in registers {
            layout.push(name, width)?;
        }
        Ok(layout)
    }

    pub fn single(name: &str, width: usize) -> Result<Self, StateError> {
        Self::new(&[(name, width)])
    }

    pub(crate) fn push(&mut self, name: &str, width: usize) -> Result<(), StateError> {
        if width == 0 {
            return Err(StateError::ZeroWidth(name.into()));
        }
        if self.registers.iter().any(|r| r.name == name) {
            return Err(StateError::DuplicateRegister(name.into()));
        }
        self.registers.push(Register {
            name: name.into(),
            width,
        });
        Ok(())
    }

    pub(crate) fn remove(&mut self, name: &str) -> Result<(), StateError> {
        let idx = self
            .registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| StateError::UnknownRegister(name.into()))?;
        self.registers.remove(idx);
        Ok(())
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_width(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn width(&self, name: &str) -> Result<usize, StateError> {
        self.locate(name).map(|(_, w)| w)
    }

    /// `(bit offset, width)` of a register inside a basis key.
    pub fn locate(&self, name: &str) -> Result<(usize, usize), StateError> {
        let mut offset = 0;
        for r in &self.registers {
            if r.name == name {
                return Ok((offset, r.width));
            }
            offset += r.width;
        }
        Err(StateError::UnknownRegister(name.into()))
    }

    pub fn key_from_values(&self, values: &[BitVec]) -> Result<BitVec, StateError> {
        if values.len() != self.registers.len() {
            return Err(StateError::RegisterCount {
                expected: self.registers.len(),
                found: values.len(),
            });
        }
        let mut key = BitVec::zeros(0);
        for (r, v) in self.registers.iter().zip(values) {
            if v.len() != r.width {
                return Err(StateError::WidthMismatch {
                    register: r.name.clone(),
                    expected: r.width,
                    found: v.len(),
                });
            }
            key = key.concat(v);
        }
        Ok(key)
    }
}

impl fmt::Display for RegisterLayout {
    /// `name:width` pairs separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.registers.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", r.name, r.width)?;
        }
        Ok(())
    }
}
