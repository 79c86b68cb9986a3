//! Simultaneous-message-passing protocols with optical messages.
//!
//! Alice and Bob each send one message (a [`Message`]) to a referee, who
//! outputs a bit. Protocols here are evaluated exactly: for every input
//! pair the referee's acceptance probability is computed from the message
//! amplitudes, so the worst-case error is a number, not an estimate.

pub mod code;
mod dcc;
mod evaluate;
mod function;
mod message;
mod protocol;
mod referee;
mod spec;

pub use code::{code_12_4_6, BinaryCode, CodeSpec, LinearCode, RepetitionCode};
pub use dcc::{bruteforce_deterministic_cc, deterministic_cc_matrix, DccSolver, D_CONVENTION};
pub use evaluate::{evaluate_error, ErrorReport, PairError, PairSelection};
pub use function::{equality_function, FunctionTable, Target, TABLE_INPUT_LIMIT};
pub use message::Message;
pub use protocol::{
    coherent_fingerprint_protocol, fingerprint_accept_closed_form, fingerprint_worst_error,
    protocol_codeword_distance, trivial_classical_protocol, Encoder, EncoderFn, SmpProtocol,
    DEFAULT_COHERENT_TAIL,
};
pub use referee::{beamsplitter_pair, vacuum_difference_probability, FockDecision, Referee};
pub use spec::{ProtocolKind, ProtocolSpec};
