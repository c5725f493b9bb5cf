use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shape of an auction: `bidders` registers of `qubits_per_bidder` qubits each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuctionConfig {
    pub bidders: usize,
    pub qubits_per_bidder: usize,
    pub items: usize,
}

impl AuctionConfig {
    pub fn new(bidders: usize, qubits_per_bidder: usize, items: usize) -> Result<Self> {
        if bidders == 0 || qubits_per_bidder == 0 || items == 0 {
            return Err(Error::InvalidArgument(
                "bidders, qubits per bidder and items must all be positive".into(),
            ));
        }
        let config = Self {
            bidders,
            qubits_per_bidder,
            items,
        };
        if config.item_qubits() >= qubits_per_bidder {
            return Err(Error::InvalidArgument(format!(
                "{qubits_per_bidder} qubits per bidder leave no room for a price with {items} items"
            )));
        }
        Ok(config)
    }

    /// Qubits naming the item. A single item needs none, so every qubit carries price.
    pub fn item_qubits(&self) -> usize {
        if self.items == 1 {
            0
        } else {
            self.items.ilog2() as usize + 1
        }
    }

    pub fn price_qubits(&self) -> usize {
        self.qubits_per_bidder - self.item_qubits()
    }

    pub fn total_qubits(&self) -> usize {
        self.bidders * self.qubits_per_bidder
    }

    /// Contents of bidder `k`'s register in allocation `x`.
    pub fn register_value(&self, x: usize, k: usize) -> usize {
        let shift = (self.bidders - 1 - k) * self.qubits_per_bidder;
        (x >> shift) & ((1 << self.qubits_per_bidder) - 1)
    }
}

/// A bidder's price state `|b>` on `width` qubits; never the all-zero null state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BidSpec {
    width: usize,
    value: usize,
}

impl BidSpec {
    pub fn new(width: usize, value: usize) -> Result<Self> {
        if width == 0 || width >= usize::BITS as usize || value >> width != 0 {
            return Err(Error::InvalidBid(format!(
                "value {value} on {width} qubits"
            )));
        }
        if value == 0 {
            return Err(Error::ZeroBid);
        }
        Ok(Self { width, value })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Basis index of the price state, qubit 0 most significant.
    pub fn value(&self) -> usize {
        self.value
    }

    /// Qubits set to `|1>`, ascending.
    pub fn set_qubits(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|&q| (self.value >> (self.width - 1 - q)) & 1 == 1)
            .collect()
    }
}

impl FromStr for BidSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidBid(s.to_string()));
        }
        let value = usize::from_str_radix(s, 2).map_err(|_| Error::InvalidBid(s.to_string()))?;
        Self::new(s.len(), value)
    }
}

impl fmt::Display for BidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width)
    }
}

/// Parses a comma-separated list of bid bit strings.
pub fn parse_bids(list: &str) -> Result<Vec<BidSpec>> {
    list.split(',').map(str::parse).collect()
}

/// Auctioneer payoff `F(x)` for every allocation of an `n_qubits` register.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    n_qubits: usize,
    values: Vec<f64>,
}

impl PayoffTable {
    pub fn new(n_qubits: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "payoffs must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self { n_qubits, values })
    }

    pub fn from_fn(n_qubits: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new(n_qubits, (0..1usize << n_qubits).map(f).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn payoff(&self, x: usize) -> Result<f64> {
        self.values.get(x).copied().ok_or(Error::IndexOutOfRange {
            index: x,
            dim: self.values.len(),
        })
    }

    /// Highest-payoff allocation among `candidates`; equal maxima are an error.
    pub fn winner(&self, candidates: &[usize]) -> Result<usize> {
        let mut best: Option<usize> = None;
        for &x in candidates {
            let v = self.payoff(x)?;
            match best {
                Some(b) if self.values[b] >= v => {}
                _ => best = Some(x),
            }
        }
        let best = best.ok_or_else(|| Error::InvalidArgument("no candidate allocations".into()))?;
        let top = self.values[best];
        if let Some(&other) = candidates
            .iter()
            .find(|&&x| x != best && (self.values[x] - top).abs() <= 1e-12 * top.abs().max(1.0))
        {
            return Err(Error::Tie {
                first: best.min(other),
                second: best.max(other),
                payoff: top,
            });
        }
        Ok(best)
    }
}

/// Single-item first-price payoffs: the lone nonzero bidder's price, else zero.
pub fn build_first_price_table(config: &AuctionConfig) -> Result<PayoffTable> {
    if config.items != 1 {
        return Err(Error::InvalidArgument(
            "first-price tables are built for single-item auctions only".into(),
        ));
    }
    PayoffTable::from_fn(config.total_qubits(), |x| {
        let mut nonzero = (0..config.bidders)
            .map(|k| config.register_value(x, k))
            .filter(|&v| v != 0);
        match (nonzero.next(), nonzero.next()) {
            (Some(price), None) => price as f64,
            _ => 0.0,
        }
    })
}
