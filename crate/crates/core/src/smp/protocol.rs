use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::code::{codeword_distance, BinaryCode};
use super::function::{Target, TABLE_INPUT_LIMIT};
use super::{Message, Referee};
use crate::error::{Error, Result};
use crate::fock::{FockDiagonalState, FockIndex, PhotonStatistics, ProductState, PureState};

/// Default bound on the Poisson mass discarded per coherent mode.
pub const DEFAULT_COHERENT_TAIL: f64 = 1e-14;

/// Largest input length for which codewords are enumerated to find the
/// heaviest one.
const WEIGHT_ENUMERATION_LIMIT: usize = 20;

pub type EncoderFn = dyn Fn(u64) -> Result<Message> + Send + Sync;

/// Maps a party's input to the message it sends.
#[derive(Clone)]
pub enum Encoder {
    Function(Arc<EncoderFn>),
    /// Message for input `x` stored at index `x`.
    Table(Arc<Vec<Message>>),
}

impl Encoder {
    pub fn function(f: impl Fn(u64) -> Result<Message> + Send + Sync + 'static) -> Self {
        Encoder::Function(Arc::new(f))
    }

    pub fn encode(&self, x: u64) -> Result<Message> {
        match self {
            Encoder::Function(f) => f(x),
            Encoder::Table(t) => t
                .get(x as usize)
                .cloned()
                .ok_or_else(|| Error::param("x", format!("input {x} outside the message table"))),
        }
    }
}

impl fmt::Debug for Encoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Encoder::Function(_) => f.write_str("Encoder::Function(..)"),
            Encoder::Table(t) => write!(f, "Encoder::Table({} messages)", t.len()),
        }
    }
}

/// A simultaneous-message-passing protocol: Alice and Bob each send one
/// optical message, the referee outputs a bit.
#[derive(Clone, Debug)]
pub struct SmpProtocol {
    label: String,
    input_bits: usize,
    modes: usize,
    mu: f64,
    alice: Encoder,
    bob: Encoder,
    referee: Referee,
    target: Target,
    code: Option<Arc<dyn BinaryCode>>,
}

impl SmpProtocol {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        input_bits: usize,
        modes: usize,
        mu: f64,
        alice: Encoder,
        bob: Encoder,
        referee: Referee,
        target: Target,
    ) -> Result<Self> {
        if input_bits == 0 || input_bits > 64 {
            return Err(Error::param("n", format!("{input_bits} outside 1..=64")));
        }
        if modes == 0 {
            return Err(Error::param("m", "must be at least 1"));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::param("mu", format!("{mu} must be finite and non-negative")));
        }
        if target.input_bits() != input_bits {
            return Err(Error::param(
                "target",
                format!("target takes {} bits, protocol {input_bits}", target.input_bits()),
            ));
        }
        Ok(SmpProtocol {
            label: label.into(),
            input_bits,
            modes,
            mu,
            alice,
            bob,
            referee,
            target,
            code: None,
        })
    }

    /// Protocol given by explicit message lists; both lists must have
    /// `2ⁿ` entries.
    pub fn from_messages(
        label: impl Into<String>,
        mu: f64,
        alice: Vec<Message>,
        bob: Vec<Message>,
        referee: Referee,
        target: Target,
    ) -> Result<Self> {
        let n = target.input_bits();
        check_table_len(n, alice.len(), "alice")?;
        check_table_len(n, bob.len(), "bob")?;
        let modes = alice[0].mode_count();
        for m in alice.iter().chain(&bob) {
            crate::fock::check_modes(modes, m.mode_count())?;
        }
        Self::new(
            label,
            n,
            modes,
            mu,
            Encoder::Table(Arc::new(alice)),
            Encoder::Table(Arc::new(bob)),
            referee,
            target,
        )
    }

    /// Same referee, target and `µ` with new message tables.
    pub fn with_messages(&self, label: impl Into<String>, alice: Vec<Message>, bob: Vec<Message>) -> Result<Self> {
        let mut p = Self::from_messages(label, self.mu, alice, bob, self.referee.clone(), self.target.clone())?;
        crate::fock::check_modes(self.modes, p.modes)?;
        p.code = self.code.clone();
        Ok(p)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn input_bits(&self) -> usize {
        self.input_bits
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    /// Declared maximum mean photon number over all messages of both parties.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn referee(&self) -> &Referee {
        &self.referee
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    /// The code used to encode inputs, when the protocol was built from one.
    pub fn code(&self) -> Option<&dyn BinaryCode> {
        self.code.as_deref()
    }

    pub fn alice_message(&self, x: u64) -> Result<Message> {
        self.check_input(x)?;
        self.checked(self.alice.encode(x)?)
    }

    pub fn bob_message(&self, y: u64) -> Result<Message> {
        self.check_input(y)?;
        self.checked(self.bob.encode(y)?)
    }

    pub fn alice_messages(&self) -> Result<Vec<Message>> {
        self.all_messages(|x| self.alice_message(x))
    }

    pub fn bob_messages(&self) -> Result<Vec<Message>> {
        self.all_messages(|y| self.bob_message(y))
    }

    /// Probability that the referee outputs the wrong bit on messages `a`, `b`
    /// when the correct answer is `f`.
    pub fn error_from_messages(&self, a: &Message, b: &Message, f: bool) -> Result<f64> {
        let accept = self.referee.accept_probability(a, b)?;
        Ok(if f { 1.0 - accept } else { accept })
    }

    /// Checks that every message has the declared mode count and mean photon
    /// number at most `µ` (exhaustive, `n ≤ 12`).
    pub fn validate(&self) -> Result<()> {
        let alice = self.alice_messages()?;
        let bob = self.bob_messages()?;
        for (party, msgs) in [("alice", &alice), ("bob", &bob)] {
            for (x, m) in msgs.iter().enumerate() {
                let mean = m.mean_photon_number();
                if mean > self.mu + 1e-9 {
                    return Err(Error::PremiseViolated(format!(
                        "{party} message for input {x} has mean photon number {mean} > µ = {}",
                        self.mu
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_input(&self, x: u64) -> Result<()> {
        if x.checked_shr(self.input_bits as u32).unwrap_or(0) != 0 {
            return Err(Error::param("x", format!("{x} does not fit in {} bits", self.input_bits)));
        }
        Ok(())
    }

    fn checked(&self, m: Message) -> Result<Message> {
        crate::fock::check_modes(self.modes, m.mode_count())?;
        Ok(m)
    }

    fn all_messages(&self, f: impl Fn(u64) -> Result<Message>) -> Result<Vec<Message>> {
        if self.input_bits > TABLE_INPUT_LIMIT {
            return Err(Error::TooLarge {
                what: "exhaustive message enumeration",
                n: self.input_bits,
                limit: TABLE_INPUT_LIMIT,
            });
        }
        (0..1u64 << self.input_bits).map(f).collect()
    }
}

fn check_table_len(n: usize, len: usize, party: &str) -> Result<()> {
    if n > TABLE_INPUT_LIMIT || len != 1usize << n {
        return Err(Error::param(
            "messages",
            format!("{party} has {len} messages, expected 2^{n}"),
        ));
    }
    Ok(())
}

/// Coherent-state fingerprinting for Equality.
///
/// Each party sends `⊗_i |(−1)^{c_i} α⟩` with `c = code(x)` and
/// `α = √(mu_total/m)`, every mode truncated to Poisson tail `< max_tail`.
/// The referee interferes the two messages mode by mode and accepts iff
/// every difference port is empty.
pub fn coherent_fingerprint_protocol(
    code: Arc<dyn BinaryCode>,
    mu_total: f64,
    max_tail: f64,
) -> Result<SmpProtocol> {
    if !(mu_total > 0.0 && mu_total.is_finite()) {
        return Err(Error::param("mu", format!("{mu_total} must be positive")));
    }
    let n = code.input_bits();
    let m = code.length();
    let alpha = (mu_total / m as f64).sqrt();
    let plus = PureState::coherent_with_tail(Complex64::new(alpha, 0.0), max_tail)?;
    let minus = PureState::coherent_with_tail(Complex64::new(-alpha, 0.0), max_tail)?;
    let tail_mass = 1.0 - (1.0 - plus.tail_mass).powi(m as i32);
    let (plus, minus) = (plus.state, minus.state);
    let encoder_code = code.clone();
    let encoder = Encoder::function(move |x| {
        let factors = encoder_code
            .encode(x)
            .into_iter()
            .map(|bit| if bit { minus.clone() } else { plus.clone() })
            .collect();
        Ok(Message::Product(ProductState::new(factors, tail_mass)?))
    });
    let label = format!("qfp n={n} m={m} mu={mu_total} code={}", code.describe());
    let mut p = SmpProtocol::new(
        label,
        n,
        m,
        mu_total,
        encoder.clone(),
        encoder,
        Referee::DifferencePortVacuum,
        Target::Equality { n },
    )?;
    p.code = Some(code);
    Ok(p)
}

/// `exp(−2 |α|² d)` with `|α|² = mu_total / m`: acceptance probability of
/// untruncated coherent fingerprints whose codewords differ in `d` places.
pub fn fingerprint_accept_closed_form(mu_total: f64, modes: usize, distance: usize) -> f64 {
    (-2.0 * mu_total / modes as f64 * distance as f64).exp()
}

/// Largest acceptance probability on unequal inputs predicted by the closed
/// form, attained at the code's minimum distance.
pub fn fingerprint_worst_error(code: &dyn BinaryCode, mu_total: f64) -> f64 {
    fingerprint_accept_closed_form(mu_total, code.length(), code.min_distance())
}

/// Distance between the codewords of `x` and `y` under the protocol's code.
pub fn protocol_codeword_distance(p: &SmpProtocol, x: u64, y: u64) -> Option<usize> {
    p.code().map(|c| codeword_distance(c, x, y))
}

fn codeword_index(code: &dyn BinaryCode, x: u64) -> FockIndex {
    FockIndex::new(code.encode(x).into_iter().map(u32::from).collect())
        .expect("codeword has at least one mode")
}

/// Classical optical protocol: each party sends the Fock basis state
/// `|c₁, …, c_m⟩` of its codeword. The referee measures photon numbers,
/// decodes and outputs `f(x, y)`.
///
/// `µ` is the heaviest codeword weight (the code length when there are too
/// many codewords to enumerate).
pub fn trivial_classical_protocol(code: Arc<dyn BinaryCode>, target: Target) -> Result<SmpProtocol> {
    let n = code.input_bits();
    let m = code.length();
    let mu = if n <= WEIGHT_ENUMERATION_LIMIT {
        (0..1u64 << n)
            .map(|x| code.encode(x).iter().filter(|&&b| b).count())
            .max()
            .unwrap_or(0) as f64
    } else {
        m as f64
    };
    let referee = match &target {
        Target::Equality { .. } => Referee::fock_stochastic(|a, b| f64::from(u8::from(a == b))),
        Target::Table(table) => {
            let decode: HashMap<FockIndex, u64> = (0..1u64 << n).map(|x| (codeword_index(code.as_ref(), x), x)).collect();
            let table = table.clone();
            Referee::fock_stochastic(move |a, b| match (decode.get(a), decode.get(b)) {
                (Some(&x), Some(&y)) => f64::from(u8::from(table.value(x, y))),
                _ => 0.0,
            })
        }
    };
    let encoder_code = code.clone();
    let encoder = Encoder::function(move |x| {
        Ok(Message::Diagonal(FockDiagonalState::point(codeword_index(encoder_code.as_ref(), x))))
    });
    let label = format!("classical n={n} m={m} code={}", code.describe());
    let mut p = SmpProtocol::new(label, n, m, mu, encoder.clone(), encoder, referee, target)?;
    p.code = Some(code);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smp::code::RepetitionCode;
    use crate::smp::function::equality_function;

    #[test]
    fn fingerprint_messages_have_declared_energy() {
        let code = Arc::new(RepetitionCode::new(4, 3).unwrap());
        let p = coherent_fingerprint_protocol(code, 2.0, DEFAULT_COHERENT_TAIL).unwrap();
        assert_eq!(p.mode_count(), 12);
        p.validate().unwrap();
        let m = p.alice_message(5).unwrap();
        assert!((m.mean_photon_number() - 2.0).abs() < 1e-9);
        assert!(m.tail_mass() < 1e-10);
        assert!(p.alice_message(16).is_err());
    }

    #[test]
    fn classical_identity_protocol() {
        let code = Arc::new(RepetitionCode::identity(2).unwrap());
        let p = trivial_classical_protocol(code.clone(), Target::Equality { n: 2 }).unwrap();
        assert_eq!(p.mu(), 2.0);
        let m = p.alice_message(0b01).unwrap();
        assert_eq!(
            m.fock_distribution().unwrap(),
            vec![(FockIndex::new(vec![1, 0]).unwrap(), 1.0)]
        );
        let table = trivial_classical_protocol(code, equality_function(2).unwrap().into()).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let a = table.alice_message(x).unwrap();
                let b = table.bob_message(y).unwrap();
                assert_eq!(table.error_from_messages(&a, &b, x == y).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn message_tables_must_be_complete() {
        let msgs = vec![Message::Pure(PureState::vacuum(1)); 3];
        let r = SmpProtocol::from_messages("bad", 0.0, msgs.clone(), msgs, Referee::DifferencePortVacuum, Target::Equality { n: 1 });
        assert!(r.is_err());
    }
}
