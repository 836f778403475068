//! CLI dispatch (under construction).
