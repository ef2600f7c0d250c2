//! Holds the `acceptance` test target. It is a separate package so that
//! its expected failures do not stop the other test binaries of the
//! workspace from running.
