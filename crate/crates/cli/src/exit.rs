//! Process exit codes.

use blender_core::interval::Status;
use clap::error::ErrorKind;

pub const PASS: u8 = 0;
/// A verdict of FAIL, a violated precondition, or an I/O failure.
pub const FAIL: u8 = 1;
pub const UNKNOWN: u8 = 2;
/// `EX_USAGE` from sysexits.
pub const USAGE: u8 = 64;

pub fn from_status(s: Status) -> u8 {
    match s {
        Status::Pass => PASS,
        Status::Fail => FAIL,
        Status::Unknown => UNKNOWN,
    }
}

pub fn from_clap_error(e: &clap::Error) -> u8 {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => PASS,
        _ => USAGE,
    }
}
