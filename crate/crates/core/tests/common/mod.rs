//! The worked examples transcribed from their 4x4 / 2x2 block displays.
#![allow(dead_code)]

use std::path::PathBuf;

use tensor_woodbury::display::from_block_display;
use tensor_woodbury::{EinsteinTensor, PairedShape};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn sh(r: &[usize], c: &[usize]) -> PairedShape {
    PairedShape::new(r.to_vec(), c.to_vec()).unwrap()
}

fn square(rows: [[f64; 4]; 4]) -> EinsteinTensor {
    let view: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    from_block_display(sh(&[2, 2], &[2, 2]), &view).unwrap()
}

/// `(2,2 | 1,1)`, display row `i1`, column `i2`.
fn column(rows: [[f64; 2]; 2]) -> EinsteinTensor {
    from_block_display(sh(&[2, 2], &[1, 1]), &[&rows[0], &rows[1]]).unwrap()
}

/// `(1,1 | 2,2)`, display row `j1`, column `j2`.
fn row(rows: [[f64; 2]; 2]) -> EinsteinTensor {
    from_block_display(sh(&[1, 1], &[2, 2]), &[&rows[0], &rows[1]]).unwrap()
}

pub fn a() -> EinsteinTensor {
    square([
        [1.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

pub fn a_h() -> EinsteinTensor {
    square([
        [1.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
}

pub fn a_pinv() -> EinsteinTensor {
    square([
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, -0.5, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0],
    ])
}

pub fn b() -> EinsteinTensor {
    EinsteinTensor::from_real(sh(&[1, 1], &[1, 1]), &[1.0]).unwrap()
}

pub mod ex1 {
    use super::*;

    pub fn u() -> EinsteinTensor {
        column([[0.0, 0.0], [0.0, 1.0]])
    }

    pub fn v() -> EinsteinTensor {
        row([[0.0, 1.0], [0.0, 1.0]])
    }

    pub fn correction() -> EinsteinTensor {
        square([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    pub fn s() -> EinsteinTensor {
        square([
            [1.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 1.0],
        ])
    }

    pub fn y1() -> EinsteinTensor {
        u()
    }

    pub fn y2() -> EinsteinTensor {
        column([[0.0, 1.0], [0.0, 1.0]])
    }

    pub fn e1() -> EinsteinTensor {
        column([[0.0, 0.0], [0.0, 1.0]])
    }

    pub fn e2() -> EinsteinTensor {
        column([[0.0, 0.5], [0.0, 0.5]])
    }

    /// `E2 (B^+ + X2^H A^+ X1) E1^H`.
    pub fn last_term() -> EinsteinTensor {
        square([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.5],
        ])
    }

    pub fn s_pinv() -> EinsteinTensor {
        square([
            [1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, -0.5, 0.0, 0.5],
            [0.0, 0.5, 0.0, 0.5],
        ])
    }
}

pub mod ex2 {
    use super::*;

    pub fn u() -> EinsteinTensor {
        column([[0.0, 1.0], [0.0, 1.0]])
    }

    pub fn v() -> EinsteinTensor {
        row([[0.0, 0.0], [0.0, 2.0]])
    }

    pub fn correction() -> EinsteinTensor {
        square([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
            [0.0, 0.0, 0.0, 2.0],
        ])
    }

    pub fn s() -> EinsteinTensor {
        square([
            [1.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 2.0],
            [0.0, 0.0, 1.0, 2.0],
        ])
    }

    pub fn x1() -> EinsteinTensor {
        column([[0.0, 1.0], [0.0, 0.0]])
    }

    pub fn y1() -> EinsteinTensor {
        column([[0.0, 0.0], [0.0, 1.0]])
    }

    pub fn x2h() -> EinsteinTensor {
        row([[0.0, -1.0], [0.0, 1.0]])
    }

    pub fn y2h() -> EinsteinTensor {
        row([[0.0, 1.0], [0.0, 1.0]])
    }

    /// Same display as [`x2h`]: transposing `(1,1 | 2,2)` to `(2,2 | 1,1)` keeps the 2x2 picture.
    pub fn x2() -> EinsteinTensor {
        column([[0.0, -1.0], [0.0, 1.0]])
    }

    pub fn y2() -> EinsteinTensor {
        column([[0.0, 1.0], [0.0, 1.0]])
    }

    pub fn e1() -> EinsteinTensor {
        super::ex1::e1()
    }

    pub fn e2() -> EinsteinTensor {
        super::ex1::e2()
    }

    /// `A^+ X1 E1^H`.
    pub fn ap_x1_e1h() -> EinsteinTensor {
        square([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
    }

    /// `E2 X2^H A^+`.
    pub fn e2_x2h_ap() -> EinsteinTensor {
        square([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
        ])
    }

    pub fn s_pinv() -> EinsteinTensor {
        square([
            [1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 0.5],
            [0.0, 0.0, -1.0, 0.5],
        ])
    }
}

pub mod system {
    use super::*;

    pub fn d() -> EinsteinTensor {
        column([[1.0, 2.0], [1.0, 1.0]])
    }
}

/// Every fixture file with its transcription, relative to the fixtures directory.
pub fn all_fixtures() -> Vec<(&'static str, EinsteinTensor)> {
    vec![
        ("example1/A.json", a()),
        ("example1/A_pinv.json", a_pinv()),
        ("example1/B.json", b()),
        ("example1/U.json", ex1::u()),
        ("example1/V.json", ex1::v()),
        ("example1/correction.json", ex1::correction()),
        ("example1/S.json", ex1::s()),
        ("example1/Y1.json", ex1::y1()),
        ("example1/Y2.json", ex1::y2()),
        ("example1/E1.json", ex1::e1()),
        ("example1/E2.json", ex1::e2()),
        ("example1/S_pinv.json", ex1::s_pinv()),
        ("example2/A.json", a()),
        ("example2/A_pinv.json", a_pinv()),
        ("example2/B.json", b()),
        ("example2/U.json", ex2::u()),
        ("example2/V.json", ex2::v()),
        ("example2/correction.json", ex2::correction()),
        ("example2/S.json", ex2::s()),
        ("example2/X1.json", ex2::x1()),
        ("example2/Y1.json", ex2::y1()),
        ("example2/X2.json", ex2::x2()),
        ("example2/Y2.json", ex2::y2()),
        ("example2/E1.json", ex2::e1()),
        ("example2/E2.json", ex2::e2()),
        ("example2/S_pinv.json", ex2::s_pinv()),
        ("system/A.json", a()),
        ("system/A_pinv.json", a_pinv()),
        ("system/D.json", system::d()),
    ]
}

/// Largest entrywise modulus of `a - b`; panics on a shape mismatch.
pub fn max_diff(a: &EinsteinTensor, b: &EinsteinTensor) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
