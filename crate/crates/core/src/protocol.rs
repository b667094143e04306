//! Two-party protocols for `f(x ⊕ y)` built from a shared sketch plan.
//!
//! The plan is the public randomness: both parties hold it, and a message is
//! only the sketch bits of the sender's input tagged with the plan's
//! fingerprint.

use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::sketch::{estimate, SketchPlan};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyMessage {
    pub sender: String,
    #[serde(with = "bits_hex")]
    pub bits: BitVector,
    pub plan_fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub plan_fingerprint: String,
    pub messages: Vec<PartyMessage>,
    pub output: f64,
}

impl Transcript {
    /// Total bits sent over all messages.
    pub fn message_bits(&self) -> usize {
        self.messages.iter().map(|m| m.bits.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

/// A plan together with its fingerprint, computed once.
#[derive(Clone, Debug)]
pub struct SharedPlan<'p> {
    plan: &'p SketchPlan,
    fingerprint: String,
}

impl<'p> SharedPlan<'p> {
    pub fn new(plan: &'p SketchPlan) -> Self {
        SharedPlan {
            plan,
            fingerprint: plan.fingerprint(),
        }
    }

    pub fn plan(&self) -> &SketchPlan {
        self.plan
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// The message a party with input `x` sends.
    pub fn message(&self, sender: &str, x: &BitVector) -> Result<PartyMessage> {
        Ok(PartyMessage {
            sender: sender.to_string(),
            bits: self.plan.sketch(x)?,
            plan_fingerprint: self.fingerprint.clone(),
        })
    }

    fn accept(&self, m: &PartyMessage) -> Result<()> {
        if m.plan_fingerprint != self.fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: self.fingerprint.clone(),
                found: m.plan_fingerprint.clone(),
            });
        }
        check_dim(self.plan.k(), m.bits.len())
    }

    /// Bob's side of the one-way protocol: combine Alice's message with the
    /// sketch of his own input and decode.
    pub fn receive(&self, alice: &PartyMessage, y: &BitVector) -> Result<f64> {
        self.accept(alice)?;
        let mut bits = self.plan.sketch(y)?;
        bits.xor_assign(&alice.bits);
        estimate(self.plan, &bits)
    }

    /// The coordinator's side of SMP: XOR both messages and decode.
    pub fn coordinate(&self, a: &PartyMessage, b: &PartyMessage) -> Result<f64> {
        self.accept(a)?;
        self.accept(b)?;
        let bits = a.bits.xor(&b.bits)?;
        estimate(self.plan, &bits)
    }

    pub fn oneway(&self, x: &BitVector, y: &BitVector) -> Result<Transcript> {
        check_dim(x.len(), y.len())?;
        let alice = self.message("alice", x)?;
        let output = self.receive(&alice, y)?;
        Ok(Transcript {
            plan_fingerprint: self.fingerprint.clone(),
            messages: vec![alice],
            output,
        })
    }

    /// Both parties run on their own threads and share nothing but the plan.
    pub fn smp(&self, x: &BitVector, y: &BitVector) -> Result<Transcript> {
        check_dim(x.len(), y.len())?;
        let (a, b) = thread::scope(|s| {
            let alice = s.spawn(|| self.message("alice", x));
            let bob = s.spawn(|| self.message("bob", y));
            (
                alice.join().expect("party thread panicked"),
                bob.join().expect("party thread panicked"),
            )
        });
        let (a, b) = (a?, b?);
        let output = self.coordinate(&a, &b)?;
        Ok(Transcript {
            plan_fingerprint: self.fingerprint.clone(),
            messages: vec![a, b],
            output,
        })
    }
}

pub fn oneway_simulate(plan: &SketchPlan, x: &BitVector, y: &BitVector) -> Result<Transcript> {
    SharedPlan::new(plan).oneway(x, y)
}

pub fn smp_simulate(plan: &SketchPlan, x: &BitVector, y: &BitVector) -> Result<Transcript> {
    SharedPlan::new(plan).smp(x, y)
}

mod bits_hex {
    use crate::gf2::BitVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        n: usize,
        hex: String,
    }

    pub fn serialize<S: Serializer>(v: &BitVector, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            n: v.len(),
            hex: v.to_hex(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitVector, D::Error> {
        let w = Wire::deserialize(d)?;
        BitVector::from_hex(w.n, &w.hex).map_err(serde::de::Error::custom)
    }
}
