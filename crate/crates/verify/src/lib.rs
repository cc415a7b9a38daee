//! Holds the `acceptance` test target, which drives the `fracfvt` binary
//! built alongside it in the workspace.
