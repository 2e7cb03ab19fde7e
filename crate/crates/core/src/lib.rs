pub mod boolfn;
pub mod cli;
pub mod oracles;
pub mod perm;
pub mod shuffle;
pub mod transforms;
