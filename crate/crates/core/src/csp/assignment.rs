use super::instance::{Value, Var};

const UNSET: Value = Value::MAX;

/// Current value of every variable. Entries may be unset while a search
/// state is being constructed; unset variables never take part in conflicts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Value>,
}

impl Assignment {
    pub fn unset(n: usize) -> Self {
        Assignment {
            values: vec![UNSET; n],
        }
    }

    /// A fully initialized assignment. Range checks against a domain happen
    /// where the assignment meets an instance.
    pub fn from_values(values: Vec<Value>) -> Self {
        assert!(
            values.iter().all(|&v| v != UNSET),
            "value {UNSET} is reserved for unset entries"
        );
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, var: Var) -> Option<Value> {
        match self.values[var as usize] {
            UNSET => None,
            v => Some(v),
        }
    }

    #[inline]
    pub fn is_initialized(&self, var: Var) -> bool {
        self.values[var as usize] != UNSET
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(|&v| v != UNSET)
    }

    /// Values of a complete assignment.
    ///
    /// Panics if any variable is unset.
    pub fn values(&self) -> &[Value] {
        assert!(self.is_complete(), "assignment has unset variables");
        &self.values
    }

    pub(crate) fn raw(&self) -> &[Value] {
        &self.values
    }

    #[inline]
    pub(crate) fn raw_get(&self, var: Var) -> Value {
        self.values[var as usize]
    }

    #[inline]
    pub(crate) fn is_unset_raw(value: Value) -> bool {
        value == UNSET
    }

    #[inline]
    pub(crate) fn set(&mut self, var: Var, value: Value) {
        debug_assert_ne!(value, UNSET);
        self.values[var as usize] = value;
    }
}
