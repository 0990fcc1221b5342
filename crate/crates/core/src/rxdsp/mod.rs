//! Post-detection DSP: downconversion, combining, decoding and error
//! counting.

mod chain;
mod ops;

pub use chain::{check_compatible, demodulate, Combining, RxConfig};
pub use ops::{
    alamouti_decode, alamouti_decode_branches, decide_and_count, downconvert, estimate_channel,
    glance_dualbranch_demod, if_filter, linear_combine_3x3, mix, ofdm_demodulate, one_tap_from_training, square_sum_combine,
    ChannelEstimate, DecisionReport, IF_FILTER_ORDER,
};
