//! Filtered chain complex engine (under construction).
