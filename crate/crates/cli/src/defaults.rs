//! Every default used by the command line, in one place.
//!
//! | flag                 | command(s)              | default  |
//! |----------------------|-------------------------|----------|
//! | `--r`                | string, zeta, dims, ... | `1/3`    |
//! | `--m`                | string, zeta, dims, ... | `2`      |
//! | `--n-terms`          | string lattice          | `16`     |
//! | `--n-terms`          | zeta                    | `200`    |
//! | `--n-terms`          | tube                    | `500`    |
//! | `--n-terms`          | pzeta                   | `200`    |
//! | `--depth`            | string realize, box-dim | `6`      |
//! | `--im-max`           | dims, mzeta             | `15`     |
//! | `--grid`             | tube                    | `50`     |
//! | `--eps-min`          | tube                    | `1e-4`   |
//! | `--eps-max`          | tube                    | `0.5`    |
//! | `--grid`             | content-bounds          | `64`     |
//! | `--decades`          | content-bounds          | `2`      |
//! | `--eps-max`          | content-bounds          | `1e-2`   |
//! | `--h`, `--w`         | measure-census, pzeta, spectrum | `3`, `3` |
//! | `--n`                | measure-census          | `8`      |
//! | `--k`                | spectrum                | `24`     |
//! | `--eta1`, `--eta-ratio` | mzeta                | `1/9`, `1/3` |
//! | `--verify-s`         | mzeta                   | `2,2.5`  |

pub const R: &str = "1/3";
pub const M: u64 = 2;
pub const STRING_TERMS: usize = 16;
pub const ZETA_TERMS: usize = 200;
pub const TUBE_TERMS: usize = 500;
pub const PZETA_TERMS: usize = 200;
pub const DEPTH: usize = 6;
pub const IM_MAX: f64 = 15.0;
pub const TUBE_GRID: usize = 50;
pub const TUBE_EPS_MIN: f64 = 1e-4;
pub const TUBE_EPS_MAX: f64 = 0.5;
pub const CONTENT_GRID: usize = 64;
pub const CONTENT_DECADES: u32 = 2;
pub const CONTENT_EPS_MAX: f64 = 1e-2;
pub const H: u32 = 3;
pub const W: &str = "3";
pub const CENSUS_DEPTH: usize = 8;
pub const SPECTRUM_K: u64 = 24;
pub const ETA1: &str = "1/9";
pub const ETA_RATIO: &str = "1/3";
pub const VERIFY_S: &str = "2,2.5";
