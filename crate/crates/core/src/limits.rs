/// Resource guardrails for constructions and searches.
///
/// Wreath products and tuple enumerations explode quickly; every operation
/// that can blow up takes a `Limits` and fails fast with an explicit error
/// instead of silently truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order a construction may materialize.
    pub order_cap: usize,
    /// Node budget for backtracking searches and tuple enumeration.
    pub node_budget: u64,
}

pub const DEFAULT_ORDER_CAP: usize = 20_000;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            order_cap: DEFAULT_ORDER_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl Limits {
    pub fn check_order(&self, required: u128) -> crate::error::Result<()> {
        if required > self.order_cap as u128 {
            return Err(crate::error::Error::OrderCapExceeded {
                required,
                cap: self.order_cap,
            });
        }
        Ok(())
    }
}
