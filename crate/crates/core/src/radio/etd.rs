use crate::error::SimError;
use crate::scalar::Scalar;
use crate::NodeId;

/// Exponentially weighted moving average where the first sample replaces
/// the initial value outright.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ewma<S> {
    beta: S,
    value: S,
    samples: u64,
}

impl<S: Scalar> Ewma<S> {
    /// `beta` is the weight kept by the old estimate.
    pub fn new(beta: S, initial: S) -> Self {
        Ewma {
            beta,
            value: initial,
            samples: 0,
        }
    }

    pub fn value(&self) -> S {
        self.value
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn observe(&mut self, sample: S) {
        self.value = if self.samples == 0 {
            sample
        } else {
            self.beta * self.value + (S::one() - self.beta) * sample
        };
        self.samples += 1;
    }
}

/// Smoothed one-hop transmission delay toward one neighbor, in microseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEstimate<S> {
    pub neighbor: NodeId,
    pub etd: S,
    pub sample_count: u64,
}

impl<S: Scalar> LinkEstimate<S> {
    pub fn new(neighbor: NodeId, nominal_us: S) -> Self {
        LinkEstimate {
            neighbor,
            etd: nominal_us,
            sample_count: 0,
        }
    }
}

/// Folds one delay sample into a link estimate.
pub fn update_etd<S: Scalar>(
    link: LinkEstimate<S>,
    sample: S,
    beta: S,
) -> Result<LinkEstimate<S>, SimError> {
    if !(sample > S::zero()) {
        return Err(SimError::NonPositiveSample(sample.to_f64().unwrap_or(f64::NAN)));
    }
    let mut ewma = Ewma {
        beta,
        value: link.etd,
        samples: link.sample_count,
    };
    ewma.observe(sample);
    Ok(LinkEstimate {
        neighbor: link.neighbor,
        etd: ewma.value,
        sample_count: ewma.samples,
    })
}
